//! Sprouts positions: regions, their surfaces, and the boundary walks that
//! run along the drawn graph.
//!
//! Text notation:
//!
//! ```text
//! position  = region , { ";" , region } ;
//! region    = surface , "{" , [ boundary , { "," , boundary } ] , "}" ;
//! surface   = "S" | "T" nat | "P" posnat ;
//! boundary  = vertex , { "." , vertex } ;
//! vertex    = [ "*" ] , name ;
//! name      = alnum , { alnum } ;
//! ```
//!
//! A vertex occurs in the walks once per incident edge, so its degree (and
//! hence its lives) is read off the occurrence count. Untouched spots have no
//! edges and are marked with `*`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::surface::Surface;

pub type VertexId = u32;

pub const MAX_LIVES: u8 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub name: String,
    pub spot: bool,
}

/// A cyclic walk of vertex ids around one connected piece of the graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Boundary {
    walk: Vec<VertexId>,
}

impl Boundary {
    pub fn new(walk: Vec<VertexId>) -> Boundary {
        Boundary { walk }
    }

    pub fn walk(&self) -> &[VertexId] {
        &self.walk
    }

    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    pub fn reversed(&self) -> Boundary {
        let mut walk = self.walk.clone();
        walk.reverse();
        Boundary { walk }
    }

    pub(crate) fn walk_mut(&mut self) -> &mut Vec<VertexId> {
        &mut self.walk
    }
}

impl From<Vec<VertexId>> for Boundary {
    fn from(walk: Vec<VertexId>) -> Self {
        Boundary { walk }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Region {
    pub surface: Surface,
    pub boundaries: Vec<Boundary>,
}

impl Region {
    pub fn new(surface: Surface, boundaries: Vec<Boundary>) -> Region {
        Region { surface, boundaries }
    }

    /// Distinct vertices touching this region, in walk order.
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut out = Vec::new();
        for b in &self.boundaries {
            for &v in b.walk() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Position {
    regions: Vec<Region>,
    vertices: Vec<Vertex>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PositionError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("bad surface tag `{0}`")]
    BadSurfaceTag(String),
    #[error("vertex `{0}` is alone on its boundary but not marked as a spot")]
    AmbiguousDegree(String),
    #[error("vertex `{0}` has more edges than allowed")]
    DegreeOverflow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Which positions the parser accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Positions as they arise in play: a vertex alone on its boundary must
    /// be a spot.
    #[default]
    Strict,
    /// Also accepts simplified positions (canonical keys), where dead
    /// vertices have been erased and a live vertex may be left alone on its
    /// boundary.
    Simplified,
}

/// Classification of a vertex with exactly one life.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OneLifeVertexKind {
    OneRegionOneBoundary,
    TwoRegionsTwoBoundaries,
    OneRegionTwoBoundaries,
}

impl Position {
    pub fn new(regions: Vec<Region>, vertices: Vec<Vertex>) -> Position {
        Position { regions, vertices }
    }

    pub fn empty() -> Position {
        Position::default()
    }

    /// `spots` untouched spots on one region of surface `surface`.
    pub fn initial(spots: u32, surface: Surface) -> Position {
        let vertices = (0..spots).map(|i| Vertex { name: format!("v{i}"), spot: true }).collect();
        let boundaries = (0..spots).map(|i| Boundary::new(vec![i])).collect();
        Position { regions: vec![Region::new(surface, boundaries)], vertices }
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn region(&self, index: usize) -> Result<&Region, PositionError> {
        self.regions.get(index).ok_or(PositionError::IndexOutOfRange { index, len: self.regions.len() })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[id as usize]
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub(crate) fn regions_mut(&mut self) -> &mut Vec<Region> {
        &mut self.regions
    }

    pub(crate) fn vertices_mut(&mut self) -> &mut Vec<Vertex> {
        &mut self.vertices
    }

    pub fn into_parts(self) -> (Vec<Region>, Vec<Vertex>) {
        (self.regions, self.vertices)
    }

    pub fn find_vertex(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.name == name).map(|i| i as VertexId)
    }

    /// Occurrences of every vertex across all walks, indexed by id.
    pub fn occurrences(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.vertices.len()];
        for r in &self.regions {
            for b in &r.boundaries {
                for &v in b.walk() {
                    counts[v as usize] += 1;
                }
            }
        }
        counts
    }

    /// Lives of every vertex, indexed by id. Vertices no longer present in
    /// any walk report zero.
    pub fn lives(&self) -> Vec<u8> {
        self.occurrences()
            .into_iter()
            .zip(&self.vertices)
            .map(|(occ, v)| {
                if v.spot {
                    MAX_LIVES
                } else if occ == 0 {
                    0
                } else {
                    MAX_LIVES.saturating_sub(occ.min(3) as u8)
                }
            })
            .collect()
    }

    pub fn lives_of(&self, name: &str) -> Result<u8, PositionError> {
        let id = self.find_vertex(name).ok_or_else(|| PositionError::UnknownVertex(name.to_string()))?;
        Ok(self.lives()[id as usize])
    }

    /// Sum of lives over the distinct vertices on the region's boundaries.
    pub fn region_lives(&self, index: usize) -> Result<u32, PositionError> {
        let region = self.region(index)?;
        let lives = self.lives();
        Ok(region_lives_with(region, &lives))
    }

    pub fn total_lives(&self) -> u32 {
        let occ = self.occurrences();
        self.lives().iter().zip(occ).filter(|(_, o)| *o > 0).map(|(&l, _)| u32::from(l)).sum()
    }

    /// Where a one-life vertex sits, or `None` if it does not have exactly
    /// one life.
    pub fn one_life_kind(&self, id: VertexId) -> Option<OneLifeVertexKind> {
        if self.lives().get(id as usize) != Some(&1) {
            return None;
        }
        let mut places: Vec<(usize, usize)> = Vec::new();
        for (ri, r) in self.regions.iter().enumerate() {
            for (bi, b) in r.boundaries.iter().enumerate() {
                if b.walk().contains(&id) && !places.contains(&(ri, bi)) {
                    places.push((ri, bi));
                }
            }
        }
        match places.as_slice() {
            [_] => Some(OneLifeVertexKind::OneRegionOneBoundary),
            [(r1, _), (r2, _)] if r1 == r2 => Some(OneLifeVertexKind::OneRegionTwoBoundaries),
            [_, _] => Some(OneLifeVertexKind::TwoRegionsTwoBoundaries),
            _ => None,
        }
    }

    /// All structural problems of this position.
    pub fn violations(&self, mode: ParseMode) -> Vec<PositionError> {
        let mut out = Vec::new();
        let occ = self.occurrences();
        for (id, v) in self.vertices.iter().enumerate() {
            let count = occ[id];
            if v.spot {
                let alone = self.regions.iter().flat_map(|r| &r.boundaries).any(|b| b.walk() == [id as VertexId]);
                if count > 1 || (count == 1 && !alone) {
                    out.push(PositionError::DegreeOverflow(v.name.clone()));
                }
            } else if count > 3 {
                out.push(PositionError::DegreeOverflow(v.name.clone()));
            }
        }
        if mode == ParseMode::Strict {
            for r in &self.regions {
                for b in &r.boundaries {
                    if let [v] = b.walk() {
                        if !self.vertex(*v).spot {
                            out.push(PositionError::AmbiguousDegree(self.vertex(*v).name.clone()));
                        }
                    }
                }
            }
        }
        out
    }

    fn write_vertex(&self, f: &mut fmt::Formatter<'_>, id: VertexId) -> fmt::Result {
        let v = self.vertex(id);
        if v.spot {
            f.write_str("*")?;
        }
        f.write_str(&v.name)
    }
}

pub(crate) fn region_lives_with(region: &Region, lives: &[u8]) -> u32 {
    region.vertices().iter().map(|&v| u32::from(lives[v as usize])).sum()
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (ri, r) in self.regions.iter().enumerate() {
            if ri > 0 {
                f.write_str(";")?;
            }
            write!(f, "{}{{", r.surface)?;
            for (bi, b) in r.boundaries.iter().enumerate() {
                if bi > 0 {
                    f.write_str(",")?;
                }
                for (k, &v) in b.walk().iter().enumerate() {
                    if k > 0 {
                        f.write_str(".")?;
                    }
                    self.write_vertex(f, v)?;
                }
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

// Parsing -----------------------------------------------------------------

struct RawRegion {
    tag: String,
    tag_offset: usize,
    boundaries: Vec<Vec<(bool, String)>>,
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PositionError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn name(&mut self) -> Result<String, PositionError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.text[start..].bytes().take_while(u8::is_ascii_alphanumeric).count();
        if len == 0 {
            return Err(self.error("expected a name".into()));
        }
        self.pos += len;
        Ok(self.text[start..start + len].to_string())
    }

    fn error(&self, message: String) -> PositionError {
        PositionError::Syntax { offset: self.pos, message }
    }
}

fn parse_raw(text: &str) -> Result<Vec<RawRegion>, PositionError> {
    let mut lx = Lexer { text, pos: 0 };
    let mut regions = Vec::new();
    if lx.peek().is_none() {
        return Ok(regions);
    }
    loop {
        lx.skip_ws();
        let tag_offset = lx.pos;
        let tag = lx.name()?;
        lx.expect('{')?;
        let mut boundaries = Vec::new();
        if !lx.eat('}') {
            loop {
                let mut walk = Vec::new();
                loop {
                    let star = lx.eat('*');
                    walk.push((star, lx.name()?));
                    if !lx.eat('.') {
                        break;
                    }
                }
                boundaries.push(walk);
                if lx.eat(',') {
                    continue;
                }
                lx.expect('}')?;
                break;
            }
        }
        regions.push(RawRegion { tag, tag_offset, boundaries });
        if lx.eat(';') {
            continue;
        }
        if lx.peek().is_some() {
            return Err(lx.error("expected `;` or end of input".into()));
        }
        return Ok(regions);
    }
}

/// Parses and checks a position, reporting every problem found.
fn build(text: &str, mode: ParseMode) -> Result<Position, Vec<PositionError>> {
    let raw = parse_raw(text).map_err(|e| vec![e])?;
    let mut errors = Vec::new();
    let mut ids: HashMap<String, VertexId> = HashMap::new();
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut starred_mismatch: Vec<String> = Vec::new();
    let mut regions = Vec::with_capacity(raw.len());
    for r in raw {
        let surface = match r.tag.parse::<Surface>() {
            Ok(s) => s,
            Err(_) => {
                // Grammar-level failure unless the tag is a surface letter
                // followed by digits (e.g. `P0`).
                let looks_like_tag = r.tag.len() > 1
                    && matches!(r.tag.as_bytes()[0], b'S' | b'T' | b'P')
                    && r.tag[1..].bytes().all(|b| b.is_ascii_digit());
                if looks_like_tag {
                    errors.push(PositionError::BadSurfaceTag(r.tag.clone()));
                } else {
                    return Err(vec![PositionError::Syntax {
                        offset: r.tag_offset,
                        message: format!("`{}` is not a surface tag", r.tag),
                    }]);
                }
                Surface::SPHERE
            }
        };
        let mut boundaries = Vec::with_capacity(r.boundaries.len());
        for walk in r.boundaries {
            let mut ws = Vec::with_capacity(walk.len());
            for (star, name) in walk {
                let id = *ids.entry(name.clone()).or_insert_with(|| {
                    vertices.push(Vertex { name: name.clone(), spot: star });
                    (vertices.len() - 1) as VertexId
                });
                if vertices[id as usize].spot != star && !starred_mismatch.contains(&name) {
                    starred_mismatch.push(name);
                }
                ws.push(id);
            }
            boundaries.push(Boundary::new(ws));
        }
        regions.push(Region::new(surface, boundaries));
    }
    let position = Position { regions, vertices };
    errors.extend(starred_mismatch.into_iter().map(PositionError::DegreeOverflow));
    for e in position.violations(mode) {
        if !errors.contains(&e) {
            errors.push(e);
        }
    }
    if errors.is_empty() {
        Ok(position)
    } else {
        Err(errors)
    }
}

/// Parses a position as it arises in play.
pub fn parse_position(text: &str) -> Result<Position, PositionError> {
    parse_position_with(text, ParseMode::Strict)
}

pub fn parse_position_with(text: &str, mode: ParseMode) -> Result<Position, PositionError> {
    build(text, mode).map_err(|mut errs| errs.swap_remove(0))
}

/// Checks a textual position and returns all violations at once.
pub fn validate(text: &str) -> Result<Position, Vec<PositionError>> {
    build(text, ParseMode::Strict)
}

pub fn serialize_position(p: &Position) -> String {
    p.to_string()
}

pub fn initial_position(spots: u32, surface: Surface) -> Position {
    Position::initial(spots, surface)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAME: &str = "S{a.d.b.d.e};S{a.d.e,*c}";

    #[test]
    fn parses_spots_on_torus() {
        let p = parse_position("T1{*a,*b}").unwrap();
        assert_eq!(p.regions().len(), 1);
        assert_eq!(p.regions()[0].surface, Surface::torus(1));
        assert_eq!(p.regions()[0].boundaries.len(), 2);
        assert!(p.vertices().iter().all(|v| v.spot));
        assert_eq!(p.to_string(), "T1{*a,*b}");
    }

    #[test]
    fn parses_example_game() {
        let p = parse_position(GAME).unwrap();
        assert_eq!(p.to_string(), GAME);
        assert_eq!(p.lives_of("d").unwrap(), 0);
        assert_eq!(p.lives_of("c").unwrap(), 3);
        assert_eq!(p.lives_of("a").unwrap(), 1);
        assert_eq!(p.lives_of("b").unwrap(), 2);
        assert_eq!(p.lives_of("e").unwrap(), 1);
        assert_eq!(p.region_lives(0).unwrap(), 4);
        assert_eq!(p.region_lives(1).unwrap(), 5);
        assert!(matches!(p.lives_of("z"), Err(PositionError::UnknownVertex(_))));
        assert!(matches!(p.region_lives(2), Err(PositionError::IndexOutOfRange { .. })));
    }

    #[test]
    fn whitespace_between_tokens() {
        let p = parse_position(" S { a . d . b . d . e } ; S{ a.d.e , * c }").unwrap();
        assert_eq!(p.to_string(), GAME);
    }

    #[test]
    fn torus_zero_normalizes() {
        assert_eq!(parse_position("T0{*a}").unwrap().to_string(), "S{*a}");
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_position("S{a}"), Err(PositionError::AmbiguousDegree("a".into())));
        assert_eq!(parse_position("P0{*a}"), Err(PositionError::BadSurfaceTag("P0".into())));
        assert_eq!(parse_position("S{a.a.a.a.b}"), Err(PositionError::DegreeOverflow("a".into())));
        assert_eq!(parse_position("S{*a,a.b}"), Err(PositionError::DegreeOverflow("a".into())));
        assert_eq!(parse_position("S{*a.b}"), Err(PositionError::DegreeOverflow("a".into())));
        for bad in ["S{", "S{a.}", "Q{*a}", "S{*a}}", "S{*a};", "S{*a}S{*b}", "S{,}"] {
            assert!(matches!(parse_position(bad), Err(PositionError::Syntax { .. })), "{bad}");
        }
    }

    #[test]
    fn simplified_mode_accepts_lone_vertices() {
        let p = parse_position_with("S{v0};S{v0}", ParseMode::Simplified).unwrap();
        assert_eq!(p.lives_of("v0").unwrap(), 1);
        let p = parse_position_with("S{v0}", ParseMode::Simplified).unwrap();
        assert_eq!(p.lives_of("v0").unwrap(), 2);
    }

    #[test]
    fn validate_collects_everything() {
        assert!(validate("S{*a,*b}").is_ok());
        assert_eq!(validate("S{x.y.x.y.x.y.x}").unwrap_err(), vec![PositionError::DegreeOverflow("x".into())]);
        assert_eq!(validate("P0{*a}").unwrap_err(), vec![PositionError::BadSurfaceTag("P0".into())]);
        let errs = validate("P0{a};T1{x.x.x.x.y}").unwrap_err();
        assert_eq!(errs.len(), 3, "{errs:?}");
    }

    #[test]
    fn initial_positions() {
        assert_eq!(initial_position(3, Surface::SPHERE).to_string(), "S{*v0,*v1,*v2}");
        assert_eq!(initial_position(2, Surface::torus(1)).to_string(), "T1{*v0,*v1}");
        assert_eq!(initial_position(1, Surface::projective(2).unwrap()).to_string(), "P2{*v0}");
        assert_eq!(initial_position(5, Surface::torus(2)).total_lives(), 15);
    }

    #[test]
    fn dead_region_has_no_lives() {
        let p = parse_position("S{a.b.a.c.a.b.b.c.c}").unwrap();
        assert_eq!(p.region_lives(0).unwrap(), 0);
    }

    #[test]
    fn one_life_kinds() {
        let p = parse_position("S{a.n};S{a.n}").unwrap();
        let a = p.find_vertex("a").unwrap();
        assert_eq!(p.one_life_kind(a), Some(OneLifeVertexKind::TwoRegionsTwoBoundaries));
        let p = parse_position("T1{a.n,a.n}").unwrap();
        assert_eq!(p.one_life_kind(a), Some(OneLifeVertexKind::OneRegionTwoBoundaries));
        let p = parse_position("P1{a.n.a.n}").unwrap();
        assert_eq!(p.one_life_kind(a), Some(OneLifeVertexKind::OneRegionOneBoundary));
        assert_eq!(p.one_life_kind(p.find_vertex("n").unwrap()), Some(OneLifeVertexKind::OneRegionOneBoundary));
    }
}
