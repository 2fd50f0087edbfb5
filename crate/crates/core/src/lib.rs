//! Sprouts on compact surfaces.
//!
//! Positions are described by their regions: each region is a surface with
//! holes, and each hole is bounded by a closed walk through the vertices of
//! the drawing. Moves rewrite these walks, canonical forms identify
//! positions up to renaming and symmetry, and the solver computes nimbers
//! under normal play.
//!
//! ```
//! use sprouts::{nimber, Position, Surface};
//!
//! let p = Position::initial(2, Surface::projective(1).unwrap());
//! assert_eq!(nimber(&p).unwrap(), 1);
//! ```

pub mod canonical;
pub mod cli;
pub mod moves;
pub mod position;
pub mod solver;
pub mod surface;

pub use canonical::{canonical_form, decompose, simplify, CanonOptions, CanonicalKey};
pub use moves::{all_moves, apply_move, children, enumerate_region_moves, Move, MoveKind};
pub use position::{parse_position, serialize_position, Position};
pub use solver::{nimber, winner, winning_moves, Nimber, Solver, SolverConfig, Winner};
pub use surface::{classify_polygon_word, Surface};
