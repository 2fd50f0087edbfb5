//! Positions that differ only by names, order, rotation or reflection share
//! one canonical key.
//!
//! Run with `cargo run --example canonical_forms -- 'S{a.n};S{n.a}' 'S{x.y};S{y.x}'`.

use std::collections::BTreeMap;

use sprouts::{canonical_form, decompose, parse_position};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if args.is_empty() {
        ["S{a.b.c,*d};S{a.c.b}", "S{b.a.c};S{*z,c.a.b}", "P1{a.b.c,a.b.c,*d}", "P1{a.b.c,a.c.b,*d}"].map(String::from).to_vec()
    } else {
        args
    };
    let mut classes: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for text in inputs {
        let p = parse_position(&text).expect("position");
        println!("{text}: {} component(s)", decompose(&p).len());
        classes.entry(canonical_form(&p).into_string()).or_default().push(text);
    }
    for (key, members) in classes {
        println!("{key}  <=  {}", members.join("  "));
    }
}
