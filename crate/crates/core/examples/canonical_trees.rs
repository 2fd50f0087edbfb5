//! The canonical game trees of small height, and the game tree of a position.
//!
//! Run with `cargo run --example canonical_trees -- 'S{*a,*b}'`.

use sprouts::solver::{count_canonical_trees, enumerate_canonical_trees, TreeBuilder, TreeStore};
use sprouts::{parse_position, CanonOptions};

fn main() {
    for h in 0..=5 {
        let n = count_canonical_trees(h).unwrap();
        let digits = n.to_string();
        let shown = if digits.len() > 20 { format!("{} digits", digits.len()) } else { digits };
        println!("height <= {h}: {shown}");
    }
    let mut store = TreeStore::new();
    for t in enumerate_canonical_trees(&mut store, 2).unwrap() {
        println!("  {}  nimber {}", store.render(t), store.nimber(t));
    }
    let text = std::env::args().nth(1).unwrap_or_else(|| "S{*a,*b}".into());
    let p = parse_position(&text).expect("position");
    let t = TreeBuilder::new(&mut store, CanonOptions::default()).game_tree(&p, 64).expect("depth");
    println!("{text}: height {}, nimber {}, {} distinct subtrees", store.height(t), store.nimber(t), store.len());
}
