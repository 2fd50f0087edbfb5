//! Oracles shared by the integration tests. Nothing here goes through the
//! canonical form or the solver.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use sprouts::moves::SurfaceChoice;
use sprouts::position::{Boundary, Region, Vertex};
use sprouts::{all_moves, apply_move, Move, MoveKind, Position, Surface};

pub fn mex(values: impl IntoIterator<Item = u32>) -> u32 {
    let set: HashSet<u32> = values.into_iter().collect();
    (0..).find(|n| !set.contains(n)).unwrap()
}

/// Nimber by plain recursion over raw positions, memoized on their exact
/// serialization.
pub fn brute_nimber(p: &Position, memo: &mut HashMap<String, u32>) -> u32 {
    let key = p.to_string();
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let values: Vec<u32> = all_moves(p).iter().map(|m| brute_nimber(&apply_move(p, m).unwrap(), memo)).collect();
    let v = mex(values);
    memo.insert(key, v);
    v
}

/// Every raw position reachable from `p`, `p` included, deduplicated on the
/// exact serialization.
pub fn reachable(p: &Position) -> Vec<Position> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack = vec![p.clone()];
    while let Some(q) = stack.pop() {
        if !seen.insert(q.to_string()) {
            continue;
        }
        for m in all_moves(&q) {
            stack.push(apply_move(&q, &m).unwrap());
        }
        out.push(q);
    }
    out
}

/// Plays random moves until none is left; returns each step.
pub fn playout(start: &Position, rng: &mut impl Rng) -> Vec<(Position, Move, Position)> {
    let mut steps = Vec::new();
    let mut p = start.clone();
    loop {
        let moves = all_moves(&p);
        let Some(m) = moves.choose(rng) else { return steps };
        let next = apply_move(&p, m).unwrap();
        steps.push((p, m.clone(), next.clone()));
        p = next;
    }
}

/// A random image of `p` under the symmetries the canonical form ignores:
/// renaming, region and boundary order, walk rotation, and reflection (walk
/// by walk on non-orientable regions, all walks at once on orientable ones).
pub fn random_symmetry(p: &Position, rng: &mut impl Rng) -> Position {
    let n = p.vertices().len();
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(rng);
    let mut vertices = vec![Vertex { name: String::new(), spot: false }; n];
    for (old, v) in p.vertices().iter().enumerate() {
        vertices[perm[old] as usize] = Vertex { name: format!("q{}", rng.gen::<u32>()), spot: v.spot };
    }
    // names must stay distinct
    for (k, v) in vertices.iter_mut().enumerate() {
        v.name = format!("{}_{k}", v.name);
    }
    let mut regions: Vec<Region> = p
        .regions()
        .iter()
        .map(|r| {
            let mirror_all = rng.gen_bool(0.5);
            let mut bs: Vec<Boundary> = r
                .boundaries
                .iter()
                .map(|b| {
                    let mut w: Vec<u32> = b.walk().iter().map(|&v| perm[v as usize]).collect();
                    let k = rng.gen_range(0..w.len());
                    w.rotate_left(k);
                    let reflect = if r.surface.is_orientable() { mirror_all } else { rng.gen_bool(0.5) };
                    if reflect {
                        w.reverse();
                    }
                    Boundary::new(w)
                })
                .collect();
            bs.shuffle(rng);
            Region::new(r.surface, bs)
        })
        .collect();
    regions.shuffle(rng);
    Position::new(regions, vertices)
}

/// Checks one move against the bookkeeping every move must satisfy.
pub fn check_move(before: &Position, m: &Move, after: &Position) -> Result<(), String> {
    let fail = |what: &str| Err(format!("{what}: {before} --[{m}]--> {after}"));
    if before.total_lives() != after.total_lives() + 1 {
        return fail("lives did not drop by one");
    }
    if after.regions().len() < before.regions().len() {
        return fail("region count decreased");
    }
    let s = before.regions()[m.region].surface;
    if s.is_sphere() && !matches!(m.kind, MoveKind::I | MoveKind::IIAa) {
        return fail("sphere region used a non-planar kind");
    }
    let chi = |x: Surface| x.euler_characteristic();
    let got = after.regions()[m.region].surface;
    let ok = match (m.kind, m.surfaces) {
        (MoveKind::I, SurfaceChoice::Keep(t)) => t == s && got == s,
        (MoveKind::IIAa | MoveKind::IIAb | MoveKind::IIAc, SurfaceChoice::Split(a, b)) => {
            let second = after.regions()[m.region + 1].surface;
            a == got && b == second && chi(a) + chi(b) == chi(s) + 2 && after.regions().len() == before.regions().len() + 1
        }
        (MoveKind::IIB1a | MoveKind::IIB1b | MoveKind::IIB1c, SurfaceChoice::Reduce(t)) => t == got && chi(t) == chi(s) + 2,
        (MoveKind::IIB2a | MoveKind::IIB2b, SurfaceChoice::Reduce(t)) => {
            t == got && chi(t) == chi(s) + 1 && !s.is_orientable()
        }
        _ => false,
    };
    if !ok {
        return fail("Euler characteristic bookkeeping");
    }
    let orientable_kind = matches!(m.kind, MoveKind::I | MoveKind::IIAa | MoveKind::IIB1a);
    if s.is_orientable() != orientable_kind && m.kind != MoveKind::I {
        return fail("kind does not match orientability");
    }
    Ok(())
}

/// Regions of `p` with at most three lives.
pub fn low_life_regions(p: &Position) -> Vec<usize> {
    (0..p.regions().len()).filter(|&r| p.region_lives(r).unwrap() <= 3).collect()
}

pub fn with_surface(p: &Position, region: usize, s: Surface) -> Position {
    let (mut regions, vertices) = p.clone().into_parts();
    regions[region].surface = s;
    Position::new(regions, vertices)
}

pub fn test_surfaces() -> Vec<Surface> {
    vec![
        Surface::SPHERE,
        Surface::torus(1),
        Surface::torus(2),
        Surface::projective(1).unwrap(),
        Surface::projective(2).unwrap(),
    ]
}
