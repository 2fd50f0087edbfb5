//! Legal moves inside a region and their effect on the boundary walks.
//!
//! A move draws a line between two vertex occurrences of one region and puts
//! a new vertex on it. Joining two different boundaries merges them (kind I).
//! Joining a boundary to itself draws a loop, which either separates the
//! region (II.A), or leaves it connected with two new boundary sides (II.B.1)
//! or with one (II.B.2, a one-sided loop).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::canonical::{canonical_form, CanonicalKey};
use crate::position::{region_lives_with, Boundary, Position, PositionError, Region, Vertex, VertexId};
use crate::surface::{Cut, Surface};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    I,
    IIAa,
    IIAb,
    IIAc,
    IIB1a,
    IIB1b,
    IIB1c,
    IIB2a,
    IIB2b,
}

impl MoveKind {
    pub fn is_separating(self) -> bool {
        matches!(self, MoveKind::IIAa | MoveKind::IIAb | MoveKind::IIAc)
    }

    /// Kinds whose result contains an orientable region carved out of a
    /// non-orientable one.
    pub fn creates_orientable(self) -> bool {
        matches!(self, MoveKind::IIAc | MoveKind::IIB1c | MoveKind::IIB2b)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A vertex occurrence: index of a boundary within its region, and index of
/// the occurrence within that boundary's walk (both zero-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endpoint {
    pub boundary: usize,
    pub occurrence: usize,
}

/// The surface(s) of the region(s) a move produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceChoice {
    /// Kind I: the region keeps its surface.
    Keep(Surface),
    /// Kind II.A: surfaces of the first and second new region.
    Split(Surface, Surface),
    /// Kind II.B: the reduced surface of the region.
    Reduce(Surface),
}

impl fmt::Display for SurfaceChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceChoice::Keep(s) | SurfaceChoice::Reduce(s) => write!(f, "{s}"),
            SurfaceChoice::Split(a, b) => write!(f, "({a},{b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub region: usize,
    pub end1: Endpoint,
    pub end2: Endpoint,
    pub kind: MoveKind,
    pub surfaces: SurfaceChoice,
    /// Kind II.A only: bit `k` set sends the `k`-th other boundary of the
    /// region (in index order) to the second new region.
    pub mask: u64,
    pub mask_width: u32,
    /// Kind I in a non-orientable region: bit 0 reverses the second boundary.
    /// Kinds creating an orientable region: bit `k` reverses the `k`-th
    /// boundary of that region.
    pub flips: u64,
    pub new_vertex: String,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "region#{} kind={} end1=(b{},o{}) end2=(b{},o{}) split={} mask=0b{:0w$b} flips=0b{:b}",
            self.region,
            self.kind,
            self.end1.boundary,
            self.end1.occurrence,
            self.end2.boundary,
            self.end2.occurrence,
            self.surfaces,
            self.mask,
            self.flips,
            w = self.mask_width.max(1) as usize,
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error(transparent)]
    Position(#[from] PositionError),
    #[error("occurrence {occurrence} out of range for a walk of length {len}")]
    OccurrenceOutOfRange { occurrence: usize, len: usize },
    #[error("kind I needs two different boundaries")]
    SameBoundary,
    #[error("boundaries can only be flipped in a non-orientable region")]
    FlipNotAllowed,
    #[error("illegal move: {0}")]
    IllegalMove(String),
}

// Walk formulas --------------------------------------------------------------

fn check_occurrence(walk: &[VertexId], occurrence: usize) -> Result<(), MoveError> {
    if occurrence < walk.len() {
        Ok(())
    } else {
        Err(MoveError::OccurrenceOutOfRange { occurrence, len: walk.len() })
    }
}

/// The walk read from occurrence `i` all the way round back to `i`. A lone
/// spot has no edges to walk along and yields just itself.
fn full_turn(walk: &[VertexId], i: usize, is_spot: &impl Fn(VertexId) -> bool, backwards: bool) -> Vec<VertexId> {
    if walk.len() == 1 && is_spot(walk[0]) {
        return vec![walk[0]];
    }
    let n = walk.len();
    (0..=n)
        .map(|k| if backwards { walk[(i + n - k % n) % n] } else { walk[(i + k) % n] })
        .collect()
}

/// `a_j, ..., a_r, a_1, ..., a_i` for `i < j`, or the full turn when `i == j`.
fn outer_arc(walk: &[VertexId], i: usize, j: usize, is_spot: &impl Fn(VertexId) -> bool) -> Vec<VertexId> {
    if i == j {
        return full_turn(walk, i, is_spot, false);
    }
    let n = walk.len();
    let len = n - j + i + 1;
    (0..len).map(|k| walk[(j + k) % n]).collect()
}

/// Kind I: joins occurrence `i` of `b1` to occurrence `j` of `b2` through the
/// new vertex `c`. With `flip`, `b2` is read backwards, which is only
/// possible in a non-orientable region.
pub fn merge_boundaries(
    b1: &Boundary,
    i: usize,
    b2: &Boundary,
    j: usize,
    flip: bool,
    c: VertexId,
    is_spot: impl Fn(VertexId) -> bool,
) -> Result<Boundary, MoveError> {
    check_occurrence(b1.walk(), i)?;
    check_occurrence(b2.walk(), j)?;
    let mut walk = full_turn(b1.walk(), i, &is_spot, false);
    walk.push(c);
    walk.extend(full_turn(b2.walk(), j, &is_spot, flip));
    walk.push(c);
    Ok(Boundary::new(walk))
}

/// Loop from occurrence `i` to occurrence `j >= i` of one boundary, cut into
/// two boundary sides. `reversed` reads the inner side backwards.
pub fn split_boundary(
    b: &Boundary,
    i: usize,
    j: usize,
    reversed: bool,
    c: VertexId,
    is_spot: impl Fn(VertexId) -> bool,
) -> Result<(Boundary, Boundary), MoveError> {
    let walk = b.walk();
    check_occurrence(walk, i)?;
    check_occurrence(walk, j)?;
    if i > j {
        return Err(MoveError::IllegalMove(format!("occurrences out of order ({i} > {j})")));
    }
    let mut outer = outer_arc(walk, i, j, &is_spot);
    outer.push(c);
    let mut inner: Vec<VertexId> = walk[i..=j].to_vec();
    if reversed {
        inner.reverse();
    }
    inner.push(c);
    Ok((Boundary::new(outer), Boundary::new(inner)))
}

/// One-sided loop from occurrence `i` to `j >= i`: a single boundary
/// `a_j..a_r, a_1..a_i, c, a_j..a_i, c`.
pub fn fold_boundary(
    b: &Boundary,
    i: usize,
    j: usize,
    c: VertexId,
    is_spot: impl Fn(VertexId) -> bool,
) -> Result<Boundary, MoveError> {
    let walk = b.walk();
    check_occurrence(walk, i)?;
    check_occurrence(walk, j)?;
    if i > j {
        return Err(MoveError::IllegalMove(format!("occurrences out of order ({i} > {j})")));
    }
    let mut out = outer_arc(walk, i, j, &is_spot);
    out.push(c);
    out.extend(walk[i..=j].iter().rev());
    out.push(c);
    Ok(Boundary::new(out))
}

/// True when reading the walk backwards gives one of its rotations, so that
/// flipping it changes nothing.
pub(crate) fn is_achiral(walk: &[VertexId]) -> bool {
    let n = walk.len();
    if n <= 2 {
        return true;
    }
    let rev: Vec<VertexId> = walk.iter().rev().copied().collect();
    (0..n).any(|s| (0..n).all(|k| walk[(s + k) % n] == rev[k]))
}

// Classification ---------------------------------------------------------------

fn split_kind(from: Surface, a: Surface, b: Surface) -> MoveKind {
    match (from.is_orientable(), a.is_orientable(), b.is_orientable()) {
        (true, _, _) => MoveKind::IIAa,
        (false, false, false) => MoveKind::IIAb,
        _ => MoveKind::IIAc,
    }
}

fn reduce_kind(from: Surface, to: Surface, cut: Cut) -> MoveKind {
    match cut {
        Cut::TwoBoundaries if from.is_orientable() => MoveKind::IIB1a,
        Cut::TwoBoundaries if !to.is_orientable() => MoveKind::IIB1b,
        Cut::TwoBoundaries => MoveKind::IIB1c,
        Cut::OneBoundary if !to.is_orientable() => MoveKind::IIB2a,
        Cut::OneBoundary => MoveKind::IIB2b,
    }
}

fn ordered_splits(s: Surface) -> Vec<(Surface, Surface)> {
    let mut out = Vec::new();
    for (a, b) in s.split_options() {
        out.push((a, b));
        if a != b {
            out.push((b, a));
        }
    }
    out
}

/// Flip vectors for the boundaries of a newly orientable region. Boundaries
/// that read the same both ways are never flipped, and the first one that
/// does not is kept as is: reversing every boundary at once only mirrors the
/// region.
fn flip_vectors(boundaries: &[Boundary]) -> Vec<u64> {
    let chiral: Vec<usize> = (0..boundaries.len()).filter(|&k| !is_achiral(boundaries[k].walk())).collect();
    let free = chiral.get(1..).unwrap_or(&[]);
    (0..1u64 << free.len())
        .map(|bits| free.iter().enumerate().filter(|(t, _)| bits >> t & 1 == 1).fold(0u64, |acc, (_, &k)| acc | 1 << k))
        .collect()
}

fn fresh_name(p: &Position) -> String {
    let taken = |n: &str| p.vertices().iter().any(|v| v.name == n);
    if !taken("n") {
        return "n".into();
    }
    (1..).map(|k| format!("n{k}")).find(|n| !taken(n)).unwrap()
}

// Enumeration ------------------------------------------------------------------

/// Every legal move inside region `index`.
pub fn enumerate_region_moves(p: &Position, index: usize) -> Result<Vec<Move>, MoveError> {
    let region = p.region(index)?;
    let lives = p.lives();
    let mut out = Vec::new();
    if region_lives_with(region, &lives) < 2 {
        return Ok(out);
    }
    let name = fresh_name(p);
    let c = p.vertices().len() as VertexId;
    let is_spot = |v: VertexId| p.vertex(v).spot;
    let surface = region.surface;
    let nb = region.boundaries.len();
    let others = nb.saturating_sub(1) as u32;
    let live = |v: VertexId| lives[v as usize];

    let base = |end1: Endpoint, end2: Endpoint, kind, surfaces| Move {
        region: index,
        end1,
        end2,
        kind,
        surfaces,
        mask: 0,
        mask_width: 0,
        flips: 0,
        new_vertex: name.clone(),
    };

    for b1 in 0..nb {
        let w1 = region.boundaries[b1].walk();
        for i in 0..w1.len() {
            let u = w1[i];
            if live(u) == 0 {
                continue;
            }
            let e1 = Endpoint { boundary: b1, occurrence: i };

            for b2 in b1 + 1..nb {
                let w2 = region.boundaries[b2].walk();
                for (j, &v) in w2.iter().enumerate() {
                    if live(v) == 0 || (u == v && live(u) < 2) {
                        continue;
                    }
                    let e2 = Endpoint { boundary: b2, occurrence: j };
                    out.push(base(e1, e2, MoveKind::I, SurfaceChoice::Keep(surface)));
                    if !surface.is_orientable() && !is_achiral(w2) {
                        out.push(Move { flips: 1, ..base(e1, e2, MoveKind::I, SurfaceChoice::Keep(surface)) });
                    }
                }
            }

            for j in i..w1.len() {
                let v = w1[j];
                if live(v) == 0 || (u == v && live(u) < 2) {
                    continue;
                }
                let e2 = Endpoint { boundary: b1, occurrence: j };
                let (outer, inner) = split_boundary(&region.boundaries[b1], i, j, false, c, is_spot)?;
                let rest: Vec<&Boundary> =
                    region.boundaries.iter().enumerate().filter(|(k, _)| *k != b1).map(|(_, b)| b).collect();

                for (s1, s2) in ordered_splits(surface) {
                    let kind = split_kind(surface, s1, s2);
                    for mask in 0..1u64 << others {
                        let mv = Move { mask, mask_width: others, ..base(e1, e2, kind, SurfaceChoice::Split(s1, s2)) };
                        if kind == MoveKind::IIAc {
                            let (first, second) = distribute(&outer, &inner, &rest, mask);
                            let part = if s1.is_orientable() { first } else { second };
                            for flips in flip_vectors(&part) {
                                out.push(Move { flips, ..mv.clone() });
                            }
                        } else {
                            out.push(mv);
                        }
                    }
                }

                for to in surface.nonseparating_options(Cut::TwoBoundaries) {
                    let kind = reduce_kind(surface, to, Cut::TwoBoundaries);
                    let mv = base(e1, e2, kind, SurfaceChoice::Reduce(to));
                    if kind == MoveKind::IIB1c {
                        let (o, inn) = split_boundary(&region.boundaries[b1], i, j, true, c, is_spot)?;
                        let bs = replace_with(&region.boundaries, b1, vec![o, inn]);
                        for flips in flip_vectors(&bs) {
                            out.push(Move { flips, ..mv.clone() });
                        }
                    } else {
                        out.push(mv);
                    }
                }

                for to in surface.nonseparating_options(Cut::OneBoundary) {
                    let kind = reduce_kind(surface, to, Cut::OneBoundary);
                    let mv = base(e1, e2, kind, SurfaceChoice::Reduce(to));
                    if kind == MoveKind::IIB2b {
                        let folded = fold_boundary(&region.boundaries[b1], i, j, c, is_spot)?;
                        let bs = replace_with(&region.boundaries, b1, vec![folded]);
                        for flips in flip_vectors(&bs) {
                            out.push(Move { flips, ..mv.clone() });
                        }
                    } else {
                        out.push(mv);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All legal moves of the position, region by region.
pub fn all_moves(p: &Position) -> Vec<Move> {
    (0..p.regions().len()).flat_map(|r| enumerate_region_moves(p, r).expect("region index in range")).collect()
}

fn distribute(outer: &Boundary, inner: &Boundary, rest: &[&Boundary], mask: u64) -> (Vec<Boundary>, Vec<Boundary>) {
    let mut first = vec![outer.clone()];
    let mut second = vec![inner.clone()];
    for (k, b) in rest.iter().enumerate() {
        if mask >> k & 1 == 1 {
            second.push((*b).clone());
        } else {
            first.push((*b).clone());
        }
    }
    (first, second)
}

fn replace_with(boundaries: &[Boundary], at: usize, with: Vec<Boundary>) -> Vec<Boundary> {
    let mut out = Vec::with_capacity(boundaries.len() + with.len());
    out.extend_from_slice(&boundaries[..at]);
    out.extend(with);
    out.extend_from_slice(&boundaries[at + 1..]);
    out
}

fn apply_flips(boundaries: &mut [Boundary], flips: u64) -> Result<(), MoveError> {
    if boundaries.len() < 64 && flips >> boundaries.len() != 0 {
        return Err(MoveError::IllegalMove("flip bits beyond the region's boundaries".into()));
    }
    for (k, b) in boundaries.iter_mut().enumerate() {
        if flips >> k & 1 == 1 {
            b.walk_mut().reverse();
        }
    }
    Ok(())
}

// Application ------------------------------------------------------------------

/// Plays `m` on `p`.
///
/// Kind I and II.B moves rewrite the region in place. A II.A move replaces
/// it by its first part and inserts the second part right after it.
pub fn apply_move(p: &Position, m: &Move) -> Result<Position, MoveError> {
    let illegal = |why: &str| MoveError::IllegalMove(why.to_string());
    let region = p.region(m.region)?;
    let surface = region.surface;
    let nb = region.boundaries.len();
    for e in [m.end1, m.end2] {
        let b = region.boundaries.get(e.boundary).ok_or(PositionError::IndexOutOfRange { index: e.boundary, len: nb })?;
        check_occurrence(b.walk(), e.occurrence)?;
    }
    let lives = p.lives();
    let u = region.boundaries[m.end1.boundary].walk()[m.end1.occurrence];
    let v = region.boundaries[m.end2.boundary].walk()[m.end2.occurrence];
    if lives[u as usize] == 0 || lives[v as usize] == 0 || (u == v && lives[u as usize] < 2) {
        return Err(illegal("an endpoint has run out of lives"));
    }
    if p.find_vertex(&m.new_vertex).is_some() {
        return Err(illegal("new vertex name already in use"));
    }

    let mut next = p.clone();
    let c = next.vertices().len() as VertexId;
    next.vertices_mut().push(Vertex { name: m.new_vertex.clone(), spot: false });
    let is_spot = |x: VertexId| p.vertex(x).spot;

    let same = m.end1.boundary == m.end2.boundary;
    let mut replacement: Vec<Region> = Vec::new();
    match m.kind {
        MoveKind::I => {
            if same {
                return Err(MoveError::SameBoundary);
            }
            if m.surfaces != SurfaceChoice::Keep(surface) {
                return Err(illegal("kind I keeps the surface"));
            }
            if m.flips > 1 {
                return Err(illegal("kind I takes a single flip bit"));
            }
            let flip = m.flips == 1;
            if flip && surface.is_orientable() {
                return Err(MoveError::FlipNotAllowed);
            }
            let (b1, b2) = (m.end1.boundary, m.end2.boundary);
            let merged = merge_boundaries(
                &region.boundaries[b1],
                m.end1.occurrence,
                &region.boundaries[b2],
                m.end2.occurrence,
                flip,
                c,
                is_spot,
            )?;
            let (lo, hi) = (b1.min(b2), b1.max(b2));
            let mut bs = region.boundaries.clone();
            bs.remove(hi);
            bs[lo] = merged;
            replacement.push(Region::new(surface, bs));
        }
        kind => {
            if !same {
                return Err(illegal("a loop starts and ends on the same boundary"));
            }
            let b = m.end1.boundary;
            let (i, j) = (m.end1.occurrence.min(m.end2.occurrence), m.end1.occurrence.max(m.end2.occurrence));
            let boundary = &region.boundaries[b];
            match (kind, m.surfaces) {
                (MoveKind::IIAa | MoveKind::IIAb | MoveKind::IIAc, SurfaceChoice::Split(s1, s2)) => {
                    if !surface.split_options().contains(&(s1.min(s2), s1.max(s2))) || split_kind(surface, s1, s2) != kind {
                        return Err(illegal("surface pair does not match the split tables"));
                    }
                    let others = nb as u32 - 1;
                    if others < 64 && m.mask >> others != 0 {
                        return Err(illegal("distribution mask beyond the region's boundaries"));
                    }
                    let (outer, inner) = split_boundary(boundary, i, j, false, c, is_spot)?;
                    let rest: Vec<&Boundary> =
                        region.boundaries.iter().enumerate().filter(|(k, _)| *k != b).map(|(_, x)| x).collect();
                    let (mut first, mut second) = distribute(&outer, &inner, &rest, m.mask);
                    if kind == MoveKind::IIAc {
                        let part = if s1.is_orientable() { &mut first } else { &mut second };
                        apply_flips(part, m.flips)?;
                    } else if m.flips != 0 {
                        return Err(MoveError::FlipNotAllowed);
                    }
                    replacement.push(Region::new(s1, first));
                    replacement.push(Region::new(s2, second));
                }
                (MoveKind::IIB1a | MoveKind::IIB1b | MoveKind::IIB1c, SurfaceChoice::Reduce(to)) => {
                    if !surface.nonseparating_options(Cut::TwoBoundaries).contains(&to)
                        || reduce_kind(surface, to, Cut::TwoBoundaries) != kind
                    {
                        return Err(illegal("surface does not match the two-sided loop table"));
                    }
                    let reversed = kind == MoveKind::IIB1c;
                    let (outer, inner) = split_boundary(boundary, i, j, reversed, c, is_spot)?;
                    let mut bs = replace_with(&region.boundaries, b, vec![outer, inner]);
                    if reversed {
                        apply_flips(&mut bs, m.flips)?;
                    } else if m.flips != 0 {
                        return Err(MoveError::FlipNotAllowed);
                    }
                    replacement.push(Region::new(to, bs));
                }
                (MoveKind::IIB2a | MoveKind::IIB2b, SurfaceChoice::Reduce(to)) => {
                    if !surface.nonseparating_options(Cut::OneBoundary).contains(&to)
                        || reduce_kind(surface, to, Cut::OneBoundary) != kind
                    {
                        return Err(illegal("surface does not match the one-sided loop table"));
                    }
                    let folded = fold_boundary(boundary, i, j, c, is_spot)?;
                    let mut bs = replace_with(&region.boundaries, b, vec![folded]);
                    if kind == MoveKind::IIB2b {
                        apply_flips(&mut bs, m.flips)?;
                    } else if m.flips != 0 {
                        return Err(MoveError::FlipNotAllowed);
                    }
                    replacement.push(Region::new(to, bs));
                }
                _ => return Err(illegal("move kind and surface choice disagree")),
            }
        }
    }

    for x in [u, v] {
        next.vertices_mut()[x as usize].spot = false;
    }
    let regions = next.regions_mut();
    let at = m.region;
    regions.splice(at..=at, replacement);
    Ok(next)
}

/// Canonical forms of every position reachable in one move.
pub fn children(p: &Position) -> BTreeSet<CanonicalKey> {
    all_moves(p)
        .iter()
        .map(|m| canonical_form(&apply_move(p, m).expect("generated moves are legal")))
        .collect()
}
