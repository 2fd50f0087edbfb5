//! Simplification and canonical text form of positions.
//!
//! Two positions get the same [`CanonicalKey`] when one is obtained from the
//! other by renaming vertices, permuting regions or the boundaries inside a
//! region, rotating boundary walks, and reflecting walks: each walk on its own
//! in a non-orientable region, all walks of a region together in an
//! orientable one.
//!
//! The key is computed per connected component (regions linked through live
//! vertices). A component is serialized as the smallest token sequence over
//! all those symmetries, where a vertex is written as "new" on its first
//! occurrence and by its label afterwards; components are then sorted and
//! joined, and names `v0, v1, ...` are handed out in order of first
//! appearance.

use std::cmp::Ordering;
use std::fmt;

use crate::position::{
    parse_position_with, MAX_LIVES, region_lives_with, Boundary, ParseMode, Position, PositionError, Region, Vertex, VertexId,
};
use crate::moves::is_achiral;
use crate::surface::Surface;

/// Canonical serialization of a position; the transposition-table key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Parses the key back into a (simplified) position.
    pub fn to_position(&self) -> Position {
        parse_position_with(&self.0, ParseMode::Simplified).expect("canonical keys always parse")
    }

    /// Accepts `text` as a key only if it is already in canonical form.
    pub fn from_text(text: &str, options: CanonOptions) -> Result<CanonicalKey, PositionError> {
        let p = parse_position_with(text, ParseMode::Simplified)?;
        let key = canonical_form_with(&p, options);
        if key.0 == text {
            Ok(key)
        } else {
            Err(PositionError::Syntax { offset: 0, message: format!("not a canonical key (canonical form is `{key}`)") })
        }
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CanonOptions {
    /// Lower the genus of an orientable region with `L` lives to at most
    /// `max(0, L - 3)`.
    pub clamp: bool,
    /// Leave regions with at most three lives on their own surface.
    pub keep_surfaces: bool,
}

// Simplification ---------------------------------------------------------------

/// Strips everything that cannot influence the rest of the game:
///
/// 1. dead vertices are erased from the walks, and empty walks dropped;
/// 2. regions with at most one life go away unless that life can still be
///    spent in another region;
/// 3. regions with at most three lives are put on the sphere unless
///    `keep_surfaces`;
/// 4. with `clamp`, orientable genus is capped at `lives - 3`.
///
/// The vertex table is compacted; names are kept.
pub fn simplify_with(p: &Position, options: CanonOptions) -> Position {
    let sk = skeleton(p, options);
    Position::new(sk.regions, sk.origin.iter().map(|&o| p.vertex(o).clone()).collect())
}

/// A simplified position without vertex names: ids are compact, `spot` is
/// indexed by id, and `origin` maps each id back to the source position.
struct Skeleton {
    regions: Vec<Region>,
    spot: Vec<bool>,
    origin: Vec<VertexId>,
}

fn lives_of(regions: &[Region], spot: &[bool]) -> Vec<u8> {
    let mut occ = vec![0u8; spot.len()];
    for r in regions {
        for b in &r.boundaries {
            for &v in b.walk() {
                occ[v as usize] = occ[v as usize].saturating_add(1);
            }
        }
    }
    occ.iter()
        .zip(spot)
        .map(|(&o, &s)| if s { MAX_LIVES } else if o == 0 { 0 } else { MAX_LIVES.saturating_sub(o) })
        .collect()
}

fn skeleton(p: &Position, options: CanonOptions) -> Skeleton {
    let lives = p.lives();
    let mut regions: Vec<Region> = p
        .regions()
        .iter()
        .map(|r| {
            let boundaries = r
                .boundaries
                .iter()
                .map(|b| Boundary::new(b.walk().iter().copied().filter(|&v| lives[v as usize] > 0).collect()))
                .filter(|b| !b.is_empty())
                .collect();
            Region::new(r.surface, boundaries)
        })
        .collect();

    let region_lives: Vec<u32> = regions.iter().map(|r| region_lives_with(r, &lives)).collect();
    let mut playable = vec![false; p.vertices().len()];
    for (r, &l) in regions.iter().zip(&region_lives) {
        if l >= 2 {
            for v in r.vertices() {
                playable[v as usize] = true;
            }
        }
    }
    let keep: Vec<bool> = regions
        .iter()
        .zip(&region_lives)
        .map(|(r, &l)| !r.boundaries.is_empty() && (l >= 2 || r.vertices().iter().any(|&v| playable[v as usize])))
        .collect();
    let mut k = 0;
    regions.retain(|_| {
        k += 1;
        keep[k - 1]
    });

    for r in &mut regions {
        let l = region_lives_with(r, &lives);
        if l <= 3 {
            if !options.keep_surfaces {
                r.surface = Surface::SPHERE;
            }
        } else if options.clamp && r.surface.is_orientable() {
            let cap = l - 3;
            if r.surface.genus() > cap {
                r.surface = Surface::torus(cap);
            }
        }
    }
    let mut map = vec![VertexId::MAX; p.vertices().len()];
    let mut origin = Vec::new();
    for r in &mut regions {
        for b in &mut r.boundaries {
            for v in b.walk_mut() {
                let old = *v as usize;
                if map[old] == VertexId::MAX {
                    map[old] = origin.len() as VertexId;
                    origin.push(old as VertexId);
                }
                *v = map[old];
            }
        }
    }
    let spot = origin.iter().map(|&o| p.vertex(o).spot).collect();
    Skeleton { regions, spot, origin }
}

pub fn simplify(p: &Position) -> Position {
    simplify_with(p, CanonOptions::default())
}

/// Renumbers vertices in order of first appearance, dropping unused ones.
fn compact(vertices: &[Vertex], mut regions: Vec<Region>) -> Position {
    let mut map = vec![VertexId::MAX; vertices.len()];
    let mut table = Vec::new();
    for r in &mut regions {
        for b in &mut r.boundaries {
            for v in b.walk_mut() {
                let old = *v as usize;
                if map[old] == VertexId::MAX {
                    map[old] = table.len() as VertexId;
                    table.push(vertices[old].clone());
                }
                *v = map[old];
            }
        }
    }
    Position::new(regions, table)
}

// Components -------------------------------------------------------------------

/// Groups the regions of `p` that are linked through a vertex with at least
/// one life. Returns region indices per group, in order of first region.
fn component_groups(regions: &[Region], lives: &[u8]) -> Vec<Vec<usize>> {
    let n = regions.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut owner: Vec<Option<usize>> = vec![None; lives.len()];
    for (ri, r) in regions.iter().enumerate() {
        for v in r.vertices() {
            if lives[v as usize] == 0 {
                continue;
            }
            match owner[v as usize] {
                None => owner[v as usize] = Some(ri),
                Some(other) => {
                    let (a, b) = (find(&mut parent, ri), find(&mut parent, other));
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for ri in 0..n {
        let root = find(&mut parent, ri);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, g)) => g.push(ri),
            None => groups.push((root, vec![ri])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Splits a position into independent sub-games. The position is simplified
/// first, so regions that only share dead vertices end up apart.
pub fn decompose(p: &Position) -> Vec<Position> {
    let s = simplify(p);
    component_groups(s.regions(), &s.lives())
        .into_iter()
        .map(|g| compact(s.vertices(), g.iter().map(|&r| s.regions()[r].clone()).collect()))
        .collect()
}

// Canonical labeling -----------------------------------------------------------

// A vertex seen before is written as OLD_BASE + its label. A new vertex is
// written as NEW_BASE + its color, whose low bit is the spot flag.
const OLD_BASE: u32 = 0;
const NEW_BASE: u32 = 0x2000_0000;
const COLOR_MASK: u32 = 0x1FFF_FFFF;
const BOUNDARY_END: u32 = 0x4000_0000;
const REGION_END: u32 = 0x4000_0001;
const REGION_START: u32 = 0x5000_0000;

fn region_start(s: Surface) -> u32 {
    REGION_START + if s.is_orientable() { 0 } else { 0x10000 } + s.genus()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mirror {
    Free,
    Unset,
    Fixed(bool),
}

/// Open region, bitmask of its boundaries still to write, mirror setting.
type Open = Option<(usize, u64, Mirror)>;

/// Search state, mutated in place and restored on backtrack.
struct State {
    used: u64,
    open: Open,
    labels: Vec<u32>,
    next: u32,
    tokens: Vec<u32>,
}

#[derive(Clone, Copy)]
struct Candidate {
    region: usize,
    boundary: usize,
    start: usize,
    reversed: bool,
    opens: bool,
}

struct Search<'a> {
    regions: Vec<&'a Region>,
    /// Region header: surface token, boundary count, sorted walk lengths.
    /// Regions are written in header order and boundaries by length, so the
    /// search only branches among regions and boundaries that tie on these.
    headers: Vec<Vec<u32>>,
    /// Isomorphism-invariant vertex colors; they only break ties early.
    color: Vec<u32>,
    closed: Vec<Vec<bool>>,
    achiral: Vec<Vec<bool>>,
    best: Option<Vec<u32>>,
    /// Buffers reused across recursion levels.
    scratch: Vec<Scratch>,
}

#[derive(Default)]
struct Scratch {
    cands: Vec<Candidate>,
    best_block: Vec<u32>,
    tied: Vec<Candidate>,
    seen_closed: Vec<(usize, Mirror)>,
}

const UNLABELED: u32 = u32::MAX;

impl<'a> Search<'a> {
    fn new(sk: &'a Skeleton, group: &[usize]) -> Search<'a> {
        let regions: Vec<&Region> = group.iter().map(|&r| &sk.regions[r]).collect();
        let mut occ = vec![0u32; sk.spot.len()];
        for r in &regions {
            for b in &r.boundaries {
                for &v in b.walk() {
                    occ[v as usize] += 1;
                }
            }
        }
        let closed = regions
            .iter()
            .map(|r| {
                r.boundaries
                    .iter()
                    .map(|b| {
                        b.walk().iter().all(|&v| {
                            let inside = b.walk().iter().filter(|&&w| w == v).count() as u32;
                            inside == occ[v as usize]
                        })
                    })
                    .collect()
            })
            .collect();
        let achiral = regions.iter().map(|r| r.boundaries.iter().map(|b| is_achiral(b.walk())).collect()).collect();
        let headers: Vec<Vec<u32>> = regions
            .iter()
            .map(|r| {
                let mut lens: Vec<u32> = r.boundaries.iter().map(|b| b.len() as u32).collect();
                lens.sort_unstable();
                let mut h = vec![region_start(r.surface), lens.len() as u32];
                h.extend(lens);
                h
            })
            .collect();
        let color = vertex_colors(&sk.spot, &regions, &headers);
        Search { regions, headers, color, closed, achiral, best: None, scratch: Vec::new() }
    }

    fn walk_order(&self, c: &Candidate) -> impl Iterator<Item = VertexId> + '_ {
        let walk = self.regions[c.region].boundaries[c.boundary].walk();
        let n = walk.len();
        let (start, reversed) = (c.start, c.reversed);
        (0..n).map(move |k| if reversed { walk[(start + n - k) % n] } else { walk[(start + k) % n] })
    }

    /// Labels the vertices of `c` in place and appends its block to the
    /// tokens, stopping early once the block exceeds `bound`.
    fn write(&self, st: &mut State, c: &Candidate, bound: Option<&[u32]>) -> Ordering {
        let start = st.tokens.len();
        let mut ord = if bound.is_some() { Ordering::Equal } else { Ordering::Less };
        // Compares the tokens written since the last check against `bound`.
        let check = |ord: &mut Ordering, tokens: &[u32], from: usize| {
            if *ord == Ordering::Equal {
                *ord = tokens[from..].cmp(&bound.expect("bounded")[from - start..tokens.len() - start]);
            }
            *ord != Ordering::Greater
        };
        if c.opens {
            st.tokens.extend_from_slice(&self.headers[c.region]);
            if !check(&mut ord, &st.tokens, start) {
                return ord;
            }
        }
        for v in self.walk_order(c) {
            let label = &mut st.labels[v as usize];
            if *label == UNLABELED {
                *label = st.next;
                st.next += 1;
                st.tokens.push(NEW_BASE + self.color[v as usize]);
            } else {
                st.tokens.push(OLD_BASE + *label);
            }
            if !check(&mut ord, &st.tokens, st.tokens.len() - 1) {
                return ord;
            }
        }
        st.tokens.push(BOUNDARY_END);
        check(&mut ord, &st.tokens, st.tokens.len() - 1);
        ord
    }

    /// Reverts [`Search::write`].
    fn unwrite(&self, st: &mut State, c: &Candidate, next: u32, len: usize) {
        for v in self.walk_order(c) {
            if st.labels[v as usize] >= next {
                st.labels[v as usize] = UNLABELED;
            }
        }
        st.next = next;
        st.tokens.truncate(len);
    }

    /// Mirror setting of the region once `c` is written. An achiral walk
    /// reads the same both ways and leaves an orientable region undecided.
    fn mirror_after(&self, open: Open, c: &Candidate) -> Mirror {
        let before = if c.opens {
            if self.regions[c.region].surface.is_orientable() {
                Mirror::Unset
            } else {
                Mirror::Free
            }
        } else {
            open.expect("boundary candidates need an open region").2
        };
        match before {
            Mirror::Unset if !self.achiral[c.region][c.boundary] => Mirror::Fixed(c.reversed),
            m => m,
        }
    }

    fn candidates(&self, st: &State, out: &mut Vec<Candidate>) {
        out.clear();
        let mut push_all = |region: usize, boundary: usize, opens: bool, mirror: Mirror| {
            let n = self.regions[region].boundaries[boundary].len();
            let dirs: &[bool] = match mirror {
                _ if self.achiral[region][boundary] => &[false],
                Mirror::Free | Mirror::Unset => &[false, true],
                Mirror::Fixed(false) => &[false],
                Mirror::Fixed(true) => &[true],
            };
            for &reversed in dirs {
                for start in 0..n {
                    out.push(Candidate { region, boundary, start, reversed, opens });
                }
            }
        };
        let shortest = |r: usize, remaining: u64| {
            let bs = &self.regions[r].boundaries;
            let min = (0..bs.len()).filter(|b| remaining >> b & 1 == 1).map(|b| bs[b].len()).min();
            (0..bs.len()).filter(move |&b| remaining >> b & 1 == 1 && Some(bs[b].len()) == min)
        };
        match st.open {
            Some((r, remaining, mirror)) => {
                for b in shortest(r, remaining) {
                    push_all(r, b, false, mirror);
                }
            }
            None => {
                let unused = (0..self.regions.len()).filter(|r| st.used >> r & 1 == 0);
                let first = unused.clone().map(|r| &self.headers[r]).min();
                for r in unused.filter(|&r| Some(&self.headers[r]) == first) {
                    let mirror = if self.regions[r].surface.is_orientable() { Mirror::Unset } else { Mirror::Free };
                    for b in shortest(r, u64::MAX) {
                        push_all(r, b, true, mirror);
                    }
                }
            }
        }
    }

    fn run(&mut self, st: &mut State) {
        if let Some(best) = &self.best {
            let n = st.tokens.len().min(best.len());
            if st.tokens[..n].cmp(&best[..n]) == Ordering::Greater {
                return;
            }
        }
        let all_used = st.used.count_ones() as usize == self.regions.len();
        match st.open {
            None if all_used => {
                if self.best.as_ref().is_none_or(|b| st.tokens < *b) {
                    self.best = Some(st.tokens.clone());
                }
                return;
            }
            Some((_, 0, _)) => {
                let open = st.open.take();
                st.tokens.push(REGION_END);
                self.run(st);
                st.tokens.pop();
                st.open = open;
                return;
            }
            None | Some(_) => {}
        }

        let mut sc = self.scratch.pop().unwrap_or_default();
        self.candidates(st, &mut sc.cands);
        let (next, len) = (st.next, st.tokens.len());
        let Scratch { cands, best_block, tied, seen_closed } = &mut sc;
        best_block.clear();
        tied.clear();
        seen_closed.clear();
        for c in cands.iter() {
            let ord = self.write(st, c, if tied.is_empty() { None } else { Some(best_block) });
            let block = &st.tokens[len..];
            match ord {
                Ordering::Less => {
                    best_block.clear();
                    best_block.extend_from_slice(block);
                    tied.clear();
                    tied.push(*c);
                }
                Ordering::Equal => tied.push(*c),
                Ordering::Greater => {}
            }
            self.unwrite(st, c, next, len);
        }

        // Closed boundaries carry no labels outside themselves: two tied
        // choices that leave the same region open with the same mirror
        // setting lead to isomorphic states.
        let (open, used) = (st.open, st.used);
        for c in tied.iter() {
            let mirror = self.mirror_after(open, c);
            if self.closed[c.region][c.boundary] {
                if seen_closed.contains(&(c.region, mirror)) {
                    continue;
                }
                seen_closed.push((c.region, mirror));
            }
            let remaining = if c.opens {
                (1u64 << self.regions[c.region].boundaries.len()) - 1
            } else {
                open.expect("boundary candidates need an open region").1
            };
            self.write(st, c, None);
            st.used |= 1 << c.region;
            st.open = Some((c.region, remaining & !(1 << c.boundary), mirror));
            self.run(st);
            self.unwrite(st, c, next, len);
            st.open = open;
            st.used = used;
        }
        self.scratch.push(sc);
    }
}

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x100_0000_01b3).rotate_left(29) ^ 0x9e37_79b9_7f4a_7c15
}

/// Colors from two rounds of refinement: first the surfaces, walk lengths and
/// multiplicities of a vertex's occurrences, then the multiset of colors next
/// to it along the walks. The low bit is the spot flag.
fn vertex_colors(spot: &[bool], regions: &[&Region], headers: &[Vec<u32>]) -> Vec<u32> {
    let n = spot.len();
    let mut seen: Vec<Vec<u64>> = vec![Vec::new(); n];
    for (r, region) in regions.iter().enumerate() {
        let rh = headers[r].iter().fold(0u64, |h, &t| mix(h, t as u64));
        for b in &region.boundaries {
            let w = b.walk();
            for &v in w {
                let times = w.iter().filter(|&&x| x == v).count() as u64;
                seen[v as usize].push(mix(mix(rh, w.len() as u64), times));
            }
        }
    }
    let first: Vec<u64> = seen
        .into_iter()
        .map(|mut s| {
            s.sort_unstable();
            s.into_iter().fold(0, mix)
        })
        .collect();
    let mut around: Vec<Vec<u64>> = vec![Vec::new(); n];
    for region in regions {
        for b in &region.boundaries {
            let w = b.walk();
            for k in 0..w.len() {
                let (prev, next) = (w[(k + w.len() - 1) % w.len()], w[(k + 1) % w.len()]);
                let (a, c) = (first[prev as usize], first[next as usize]);
                around[w[k] as usize].push(mix(a.min(c), a.max(c)));
            }
        }
    }
    around
        .into_iter()
        .enumerate()
        .map(|(v, mut s)| {
            s.sort_unstable();
            let h = s.into_iter().fold(first[v], mix);
            ((h as u32) & COLOR_MASK & !1) | spot[v] as u32
        })
        .collect()
}

fn component_tokens(sk: &Skeleton, group: &[usize]) -> Vec<u32> {
    assert!(group.len() < 64, "too many regions in one component");
    let mut search = Search::new(sk, group);
    let mut start = State {
        used: 0,
        open: None,
        labels: vec![UNLABELED; sk.spot.len()],
        next: 0,
        tokens: Vec::new(),
    };
    search.run(&mut start);
    search.best.unwrap_or_default()
}

fn render(tokens: &[u32], offset: u32, out: &mut String) -> u32 {
    use std::fmt::Write;
    let mut next = 0u32;
    let mut first_boundary = true;
    let mut in_boundary = false;
    let mut skip = 0usize;
    let mut header_count = false;
    for &t in tokens {
        if header_count {
            header_count = false;
            skip = t as usize;
            continue;
        }
        if skip > 0 {
            skip -= 1;
            continue;
        }
        match t {
            REGION_END => out.push('}'),
            BOUNDARY_END => {
                in_boundary = false;
                first_boundary = false;
            }
            t if t >= REGION_START => {
                if !out.is_empty() {
                    out.push(';');
                }
                let orientable = (t - REGION_START) & 0x10000 == 0;
                let genus = (t - REGION_START) & 0xFFFF;
                let s = Surface::new(orientable, genus).expect("encoded surfaces are valid");
                let _ = write!(out, "{s}{{");
                first_boundary = true;
                header_count = true;
            }
            t => {
                if in_boundary {
                    out.push('.');
                } else {
                    if !first_boundary {
                        out.push(',');
                    }
                    in_boundary = true;
                }
                let label = if t >= NEW_BASE {
                    if t & 1 == 1 {
                        out.push('*');
                    }
                    next += 1;
                    next - 1
                } else {
                    t - OLD_BASE
                };
                let _ = write!(out, "v{}", offset + label);
            }
        }
    }
    next
}

/// Canonical keys of the independent components of `p`, sorted. Each key
/// names its vertices from `v0`.
pub fn canonical_components(p: &Position, options: CanonOptions) -> Vec<CanonicalKey> {
    sorted_component_tokens(p, options)
        .into_iter()
        .map(|t| {
            let mut s = String::new();
            render(&t, 0, &mut s);
            CanonicalKey(s)
        })
        .collect()
}

fn sorted_component_tokens(p: &Position, options: CanonOptions) -> Vec<Vec<u32>> {
    let sk = skeleton(p, options);
    let lives = lives_of(&sk.regions, &sk.spot);
    let mut comps: Vec<Vec<u32>> = component_groups(&sk.regions, &lives).iter().map(|g| component_tokens(&sk, g)).collect();
    comps.sort();
    comps
}

pub fn canonical_form_with(p: &Position, options: CanonOptions) -> CanonicalKey {
    let mut out = String::new();
    let mut offset = 0;
    for t in sorted_component_tokens(p, options) {
        offset += render(&t, offset, &mut out);
    }
    CanonicalKey(out)
}

pub fn canonical_form(p: &Position) -> CanonicalKey {
    canonical_form_with(p, CanonOptions::default())
}
