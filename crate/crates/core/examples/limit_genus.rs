//! Beyond some genus, adding handles no longer changes the game.
//!
//! Run with `cargo run --release --example limit_genus`.

use sprouts::solver::{limit_genus_bound, TreeBuilder, TreeStore};
use sprouts::{CanonOptions, Position, Surface};

fn main() {
    for spots in 1..=2 {
        let p = Position::initial(spots, Surface::torus(7));
        let report = limit_genus_bound(&p, 0).unwrap();
        println!("{spots} spot(s), {} lives: genus beyond {} is irrelevant", report.lives, report.bound);
    }
    let mut store = TreeStore::new();
    let mut builder = TreeBuilder::new(&mut store, CanonOptions::default());
    let trees: Vec<_> = (0..=4).map(|g| builder.game_tree(&Position::initial(2, Surface::torus(g)), 64).unwrap()).collect();
    for (g, t) in trees.iter().enumerate() {
        let same = trees.iter().position(|u| u == t).unwrap();
        println!("T{g} with 2 spots: game tree #{same}");
    }
}
