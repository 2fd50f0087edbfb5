//! The first player wins 2-spot Sprouts on the projective plane; this prints
//! the winning first moves and a reply to every answer.
//!
//! Run with `cargo run --example projective_plane_strategy`.

use sprouts::{all_moves, apply_move, Position, Solver, SolverConfig, Surface};

fn main() {
    let solver = Solver::new(SolverConfig::default());
    let p = Position::initial(2, Surface::projective(1).unwrap());
    println!("{p}: nimber {}, {:?} player wins", solver.nimber(&p).unwrap(), solver.winner(&p).unwrap());
    let (first, after) = solver.winning_moves(&p).unwrap().into_iter().next().expect("a winning move");
    println!("play {first}, reaching {after}");
    let q = apply_move(&p, &first).unwrap();
    for answer in all_moves(&q) {
        let r = apply_move(&q, &answer).unwrap();
        match solver.winning_moves(&r).unwrap().first() {
            Some((reply, key)) => println!("  if {answer}\n    reply {reply} -> {key}"),
            None => println!("  if {answer}\n    no reply needed, game over"),
        }
    }
}
