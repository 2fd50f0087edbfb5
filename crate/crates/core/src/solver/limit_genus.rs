//! Upper bound on the genus beyond which an orientable region stops
//! mattering.
//!
//! The bound follows the recursion over the moves that can touch the region:
//! a move between two of its boundaries (kind I), a non-separating loop that
//! uses up a handle, a separating loop, and up to two lives lost to play
//! elsewhere. The region is studied in isolation; occurrences of its vertices
//! in other regions are kept as one-vertex ghost regions so lives stay right.

use std::collections::HashMap;

use serde::Serialize;

use crate::canonical::{canonical_form, CanonicalKey};
use crate::moves::{apply_move, enumerate_region_moves, MoveKind, SurfaceChoice};
use crate::position::{Boundary, Position, Region, VertexId};
use crate::surface::Surface;

// Large enough that no handle-consuming line ever runs out of genus.
const GENERIC_GENUS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitGenusReport {
    pub region: usize,
    pub lives: u32,
    pub bound: u32,
    /// Bounds after a line between two different boundaries.
    pub merges: Vec<u32>,
    /// One plus the bound after a handle-consuming loop.
    pub handles: Vec<u32>,
    /// Sum of the bounds of the two parts after a separating loop.
    pub splits: Vec<u32>,
    /// Bounds after one or two lives are lost outside the region.
    pub outside: Vec<u32>,
}

/// Region `index` alone on a generic orientable surface, with ghosts for
/// the occurrences of its vertices elsewhere.
fn isolate(p: &Position, index: usize) -> Position {
    let region = &p.regions()[index];
    let occ = p.occurrences();
    let mut inside = vec![0u32; occ.len()];
    for b in &region.boundaries {
        for &v in b.walk() {
            inside[v as usize] += 1;
        }
    }
    let mut regions = vec![Region::new(Surface::torus(GENERIC_GENUS), region.boundaries.clone())];
    for v in region.vertices() {
        for _ in inside[v as usize]..occ[v as usize] {
            regions.push(ghost(v));
        }
    }
    Position::new(regions, p.vertices().to_vec())
}

fn ghost(v: VertexId) -> Region {
    Region::new(Surface::SPHERE, vec![Boundary::new(vec![v])])
}

/// `p` with one life of `v` lost outside region 0.
fn kill(p: &Position, v: VertexId) -> Position {
    let (mut regions, mut vertices) = p.clone().into_parts();
    if vertices[v as usize].spot {
        vertices[v as usize].spot = false;
    } else {
        regions.push(ghost(v));
    }
    Position::new(regions, vertices)
}

struct Bounder {
    memo: HashMap<CanonicalKey, u32>,
}

impl Bounder {
    fn report(&mut self, iso: &Position, index: usize) -> LimitGenusReport {
        let lives = iso.region_lives(0).expect("focus region");
        let mut r = LimitGenusReport {
            region: index,
            lives,
            bound: 0,
            merges: Vec::new(),
            handles: Vec::new(),
            splits: Vec::new(),
            outside: Vec::new(),
        };
        if lives <= 3 {
            return r;
        }
        let moves = enumerate_region_moves(iso, 0).expect("focus region");
        for m in &moves {
            let child = apply_move(iso, m).expect("generated moves are legal");
            match (m.kind, m.surfaces) {
                (MoveKind::I, _) => r.merges.push(self.bound(&isolate(&child, 0))),
                (MoveKind::IIB1a, _) => r.handles.push(self.bound(&isolate(&child, 0)) + 1),
                (MoveKind::IIAa, SurfaceChoice::Split(first, _)) if first == Surface::SPHERE => {
                    r.splits.push(self.bound(&isolate(&child, 0)) + self.bound(&isolate(&child, 1)))
                }
                _ => {}
            }
        }
        let lv = iso.lives();
        let vs: Vec<VertexId> = iso.regions()[0].vertices().into_iter().filter(|&v| lv[v as usize] > 0).collect();
        for (a, &v) in vs.iter().enumerate() {
            let once = kill(iso, v);
            r.outside.push(self.bound(&once));
            for &w in &vs[a..] {
                if w == v && lv[v as usize] < 2 {
                    continue;
                }
                r.outside.push(self.bound(&kill(&once, w)));
            }
        }
        r.bound = [&r.merges, &r.handles, &r.splits, &r.outside].iter().flat_map(|v| v.iter()).copied().max().unwrap_or(0);
        r
    }

    fn bound(&mut self, iso: &Position) -> u32 {
        let key = canonical_form(iso);
        if let Some(&b) = self.memo.get(&key) {
            return b;
        }
        let b = self.report(iso, 0).bound;
        self.memo.insert(key, b);
        b
    }
}

/// Genus bound for region `index` of `p`: on an orientable surface of higher
/// genus the region plays exactly like one of this genus.
pub fn limit_genus_bound(p: &Position, index: usize) -> Result<LimitGenusReport, crate::position::PositionError> {
    p.region(index)?;
    let mut bounder = Bounder { memo: HashMap::new() };
    Ok(bounder.report(&isolate(p, index), index))
}
