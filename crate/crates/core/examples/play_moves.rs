//! Lists every move of a position with the position it leads to.
//!
//! Run with `cargo run --example play_moves -- 'P1{*a}'`.

use sprouts::{all_moves, apply_move, canonical_form, parse_position};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "P1{*a}".into());
    let p = parse_position(&text).expect("position");
    println!("{p}: {} lives", p.total_lives());
    for m in all_moves(&p) {
        let q = apply_move(&p, &m).expect("generated moves are legal");
        println!("  {m}\n    -> {q}\n    == {}", canonical_form(&q));
    }
}
