//! Nimbers of starting positions on a few surfaces.
//!
//! Run with `cargo run --release --example solve_starting_positions -- S:1-6 P1:2-5`.

use std::time::Instant;

use sprouts::{Position, Solver, SolverConfig, Surface};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let specs = if args.is_empty() { vec!["S:1-5".to_string(), "P1:1-4".to_string(), "T1:1-3".to_string()] } else { args };
    let solver = Solver::new(SolverConfig::default());
    for spec in specs {
        let (surface, range) = spec.split_once(':').expect("SURFACE:FROM-TO");
        let surface: Surface = surface.parse().expect("surface tag");
        let (lo, hi) = range.split_once('-').expect("FROM-TO");
        for p in lo.parse::<u32>().unwrap()..=hi.parse::<u32>().unwrap() {
            let t = Instant::now();
            let n = solver.nimber(&Position::initial(p, surface)).expect("within budget");
            println!("{surface} p={p}: nimber {n} ({:.2?}, {} memo entries)", t.elapsed(), solver.memo_entries());
        }
    }
}
