//! Compact boundaryless surfaces up to homeomorphism.
//!
//! A surface is either the connected sum of `n` tori (`T^n`, with `T^0` the
//! sphere) or of `n >= 1` projective planes (`P^n`). This module holds the
//! surface algebra used by move generation: Euler characteristics, connected
//! sums, fundamental-polygon classification and the tables of surfaces a
//! region can turn into when a loop is drawn inside it.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A compact boundaryless surface, identified by orientability and genus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Surface {
    orientable: bool,
    genus: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("bad surface tag `{0}`")]
    BadSurfaceTag(String),
    #[error("polygon word is empty")]
    EmptyWord,
    #[error("letter `{letter}` occurs {count} times; every side label must occur exactly twice")]
    MalformedWord { letter: char, count: usize },
    #[error("unexpected character `{0}` in polygon word")]
    BadCharacter(char),
}

impl Surface {
    pub const SPHERE: Surface = Surface { orientable: true, genus: 0 };

    /// `T^n`; `T^0` is the sphere.
    pub const fn torus(genus: u32) -> Surface {
        Surface { orientable: true, genus }
    }

    /// `P^n`, which only exists for `n >= 1`.
    pub fn projective(genus: u32) -> Result<Surface, SurfaceError> {
        if genus == 0 {
            return Err(SurfaceError::BadSurfaceTag("P0".into()));
        }
        Ok(Surface { orientable: false, genus })
    }

    pub fn new(orientable: bool, genus: u32) -> Result<Surface, SurfaceError> {
        if orientable {
            Ok(Surface::torus(genus))
        } else {
            Surface::projective(genus)
        }
    }

    pub fn is_orientable(self) -> bool {
        self.orientable
    }

    pub fn genus(self) -> u32 {
        self.genus
    }

    pub fn is_sphere(self) -> bool {
        self == Surface::SPHERE
    }

    pub fn euler_characteristic(self) -> i64 {
        let n = i64::from(self.genus);
        if self.orientable {
            2 - 2 * n
        } else {
            2 - n
        }
    }

    /// Euler characteristic of this surface with `boundaries` disks removed.
    pub fn euler_with_boundaries(self, boundaries: u32) -> i64 {
        self.euler_characteristic() - i64::from(boundaries)
    }

    pub fn connected_sum(self, other: Surface) -> Surface {
        match (self.orientable, other.orientable) {
            (true, true) => Surface::torus(self.genus + other.genus),
            (false, false) => Surface { orientable: false, genus: self.genus + other.genus },
            (false, true) => Surface { orientable: false, genus: self.genus + 2 * other.genus },
            (true, false) => other.connected_sum(self),
        }
    }

    /// Recovers a surface from its orientability and Euler characteristic.
    pub fn from_euler(orientable: bool, chi: i64) -> Option<Surface> {
        if orientable {
            let twice = 2 - chi;
            (twice >= 0 && twice % 2 == 0).then(|| Surface::torus((twice / 2) as u32))
        } else {
            let n = 2 - chi;
            (n >= 1).then(|| Surface { orientable: false, genus: n as u32 })
        }
    }

    /// Unordered pairs of surfaces whose connected sum is `self`: the outcomes
    /// of a loop that separates the region in two.
    ///
    /// Each pair is listed once, smaller surface first.
    pub fn split_options(self) -> Vec<(Surface, Surface)> {
        let n = self.genus;
        let mut out = Vec::new();
        let mut push = |a: Surface, b: Surface| {
            let pair = if a <= b { (a, b) } else { (b, a) };
            if !out.contains(&pair) {
                out.push(pair);
            }
        };
        if self.orientable {
            for k in 0..=n {
                push(Surface::torus(k), Surface::torus(n - k));
            }
        } else {
            for k in 1..n {
                push(Surface { orientable: false, genus: k }, Surface { orientable: false, genus: n - k });
            }
            let mut k = 0;
            while 2 * k < n {
                push(Surface::torus(k), Surface { orientable: false, genus: n - 2 * k });
                k += 1;
            }
        }
        out.sort();
        out
    }

    /// Surfaces reachable by a loop that leaves the region connected.
    pub fn nonseparating_options(self, cut: Cut) -> Vec<Surface> {
        let n = self.genus;
        let mut out = Vec::new();
        match (cut, self.orientable) {
            (Cut::TwoBoundaries, true) => {
                if n >= 1 {
                    out.push(Surface::torus(n - 1));
                }
            }
            (Cut::TwoBoundaries, false) => {
                if n >= 3 {
                    out.push(Surface { orientable: false, genus: n - 2 });
                }
                if n >= 2 && n % 2 == 0 {
                    out.push(Surface::torus((n - 2) / 2));
                }
            }
            (Cut::OneBoundary, true) => {}
            (Cut::OneBoundary, false) => {
                if n >= 2 {
                    out.push(Surface { orientable: false, genus: n - 1 });
                }
                if n % 2 == 1 {
                    out.push(Surface::torus((n - 1) / 2));
                }
            }
        }
        out
    }

    /// Signed genus: non-negative for orientable surfaces, negative otherwise.
    pub fn signed_genus(self) -> i64 {
        if self.orientable {
            i64::from(self.genus)
        } else {
            -i64::from(self.genus)
        }
    }
}

/// How many boundaries a non-separating loop leaves behind when the region
/// is cut along it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cut {
    /// Two-sided loop.
    TwoBoundaries,
    /// One-sided loop (through a crosscap).
    OneBoundary,
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.orientable, self.genus) {
            (true, 0) => f.write_str("S"),
            (true, n) => write!(f, "T{n}"),
            (false, n) => write!(f, "P{n}"),
        }
    }
}

/// Orientable surfaces first, then by genus: S < T1 < T2 < ... < P1 < P2.
impl Ord for Surface {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (!self.orientable, self.genus).cmp(&(!other.orientable, other.genus))
    }
}

impl PartialOrd for Surface {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl serde::Serialize for Surface {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Surface {
    type Err = SurfaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SurfaceError::BadSurfaceTag(s.to_string());
        let mut chars = s.chars();
        let tag = chars.next().ok_or_else(bad)?;
        let digits = chars.as_str();
        let number = || -> Result<u32, SurfaceError> {
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            digits.parse().map_err(|_| bad())
        };
        match tag {
            'S' if digits.is_empty() => Ok(Surface::SPHERE),
            'T' => Ok(Surface::torus(number()?)),
            'P' => match number()? {
                0 => Err(bad()),
                n => Ok(Surface { orientable: false, genus: n }),
            },
            _ => Err(bad()),
        }
    }
}

/// One side of a fundamental polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub name: char,
    pub inverted: bool,
}

/// A fundamental polygon written as the cyclic list of its side labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonWord {
    letters: Vec<Letter>,
}

impl PolygonWord {
    /// Builds a word, checking that every label occurs exactly twice.
    pub fn new(letters: Vec<Letter>) -> Result<PolygonWord, SurfaceError> {
        if letters.is_empty() {
            return Err(SurfaceError::EmptyWord);
        }
        let mut seen: Vec<(char, usize)> = Vec::new();
        for l in &letters {
            match seen.iter_mut().find(|(c, _)| *c == l.name) {
                Some((_, n)) => *n += 1,
                None => seen.push((l.name, 1)),
            }
        }
        if let Some(&(letter, count)) = seen.iter().find(|(_, n)| *n != 2) {
            return Err(SurfaceError::MalformedWord { letter, count });
        }
        Ok(PolygonWord { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Concatenation; the fundamental polygon of the connected sum when the
    /// two words use disjoint labels.
    pub fn concat(&self, other: &PolygonWord) -> Result<PolygonWord, SurfaceError> {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        PolygonWord::new(letters)
    }

    /// Identifies the surface the polygon represents.
    ///
    /// Corners `k` and `k + 1` bound side `k`. Gluing two sides with the same
    /// label identifies their tails and their heads; the number of corner
    /// classes is the vertex count of the resulting cell complex.
    pub fn classify(&self) -> Surface {
        let len = self.letters.len();
        let mut parent: Vec<usize> = (0..len).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let ends = |k: usize| {
            let (a, b) = (k, (k + 1) % len);
            if self.letters[k].inverted {
                (b, a)
            } else {
                (a, b)
            }
        };
        let mut first_side: Vec<(char, usize)> = Vec::new();
        let mut orientable = true;
        for k in 0..len {
            let name = self.letters[k].name;
            match first_side.iter().find(|(c, _)| *c == name) {
                None => first_side.push((name, k)),
                Some(&(_, other)) => {
                    if self.letters[other].inverted == self.letters[k].inverted {
                        orientable = false;
                    }
                    let (t1, h1) = ends(other);
                    let (t2, h2) = ends(k);
                    for (x, y) in [(t1, t2), (h1, h2)] {
                        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                        parent[rx] = ry;
                    }
                }
            }
        }
        let vertices = (0..len).filter(|&x| find(&mut parent, x) == x).count() as i64;
        let edges = first_side.len() as i64;
        let chi = vertices - edges + 1;
        Surface::from_euler(orientable, chi).expect("a glued polygon is a closed surface")
    }
}

impl FromStr for PolygonWord {
    type Err = SurfaceError;

    /// Letters are single alphanumeric characters; an inverse is written with
    /// a trailing `'`, `^-1` or `⁻¹`. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if !c.is_ascii_alphanumeric() {
                return Err(SurfaceError::BadCharacter(c));
            }
            i += 1;
            let mut inverted = false;
            if chars.get(i) == Some(&'\'') {
                inverted = true;
                i += 1;
            } else if chars[i.min(chars.len())..].starts_with(&['^', '-', '1']) {
                inverted = true;
                i += 3;
            } else if chars[i.min(chars.len())..].starts_with(&['⁻', '¹']) {
                inverted = true;
                i += 2;
            }
            letters.push(Letter { name: c, inverted });
        }
        PolygonWord::new(letters)
    }
}

impl fmt::Display for PolygonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.name)?;
            if l.inverted {
                f.write_str("'")?;
            }
        }
        Ok(())
    }
}

/// Parses and classifies a polygon word in one step.
pub fn classify_polygon_word(word: &str) -> Result<Surface, SurfaceError> {
    Ok(word.parse::<PolygonWord>()?.classify())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Surface {
        text.parse().unwrap()
    }

    fn p(n: u32) -> Surface {
        Surface::projective(n).unwrap()
    }

    fn all_surfaces(max_genus: u32) -> Vec<Surface> {
        let mut v: Vec<Surface> = (0..=max_genus).map(Surface::torus).collect();
        v.extend((1..=max_genus).map(p));
        v
    }

    #[test]
    fn euler_values() {
        assert_eq!(Surface::SPHERE.euler_characteristic(), 2);
        assert_eq!(p(2).euler_characteristic(), 0);
        assert_eq!(Surface::torus(3).euler_characteristic(), -4);
        assert_eq!(Surface::torus(2).euler_with_boundaries(0), -2);
        assert_eq!(Surface::SPHERE.euler_with_boundaries(3), -1);
        assert_eq!(p(1).euler_with_boundaries(0), 1);
    }

    #[test]
    fn connected_sums() {
        assert_eq!(Surface::torus(1).connected_sum(Surface::torus(2)), Surface::torus(3));
        assert_eq!(p(1).connected_sum(Surface::torus(1)), p(3));
        assert_eq!(Surface::torus(1).connected_sum(p(1)), p(3));
        assert_eq!(p(1).connected_sum(p(1)), p(2));
    }

    #[test]
    fn sum_is_additive_in_euler_characteristic() {
        for a in all_surfaces(8) {
            for b in all_surfaces(8) {
                let sum = a.connected_sum(b);
                assert_eq!(sum.euler_characteristic(), a.euler_characteristic() + b.euler_characteristic() - 2);
                assert_eq!(sum, b.connected_sum(a));
            }
        }
    }

    #[test]
    fn text_form() {
        assert_eq!(s("T0"), Surface::SPHERE);
        assert_eq!(s("T0").to_string(), "S");
        assert_eq!(s("P12").to_string(), "P12");
        for bad in ["P0", "P", "T", "X1", "S1", "T-1", "", "T1a"] {
            assert!(bad.parse::<Surface>().is_err(), "{bad}");
        }
    }

    #[test]
    fn polygon_words() {
        assert_eq!(classify_polygon_word("aa").unwrap(), p(1));
        assert_eq!(classify_polygon_word("aba'b'").unwrap(), Surface::torus(1));
        assert_eq!(classify_polygon_word("aba^-1b^-1").unwrap(), Surface::torus(1));
        assert_eq!(classify_polygon_word("aba⁻¹b⁻¹").unwrap(), Surface::torus(1));
        assert_eq!(classify_polygon_word("abab'").unwrap(), p(2));
        assert_eq!(classify_polygon_word("aabb").unwrap(), p(2));
        assert_eq!(classify_polygon_word("aa'").unwrap(), Surface::SPHERE);
        assert_eq!(classify_polygon_word("aba'b'cdc'd'").unwrap(), Surface::torus(2));
    }

    #[test]
    fn malformed_words() {
        assert_eq!(
            classify_polygon_word("aaa"),
            Err(SurfaceError::MalformedWord { letter: 'a', count: 3 })
        );
        assert_eq!(classify_polygon_word(""), Err(SurfaceError::EmptyWord));
        assert_eq!(classify_polygon_word("ab"), Err(SurfaceError::MalformedWord { letter: 'a', count: 1 }));
        assert!(matches!(classify_polygon_word("a-a"), Err(SurfaceError::BadCharacter('-'))));
    }

    #[test]
    fn word_output_uses_apostrophe() {
        let w: PolygonWord = "ab^-1ab⁻¹".parse().unwrap();
        assert_eq!(w.to_string(), "ab'ab'");
    }

    #[test]
    fn split_tables() {
        assert_eq!(Surface::torus(1).split_options(), vec![(Surface::SPHERE, Surface::torus(1))]);
        assert_eq!(Surface::SPHERE.split_options(), vec![(Surface::SPHERE, Surface::SPHERE)]);
        let mut got = p(3).split_options();
        got.sort();
        let mut want = vec![(p(1), p(2)), (Surface::SPHERE, p(3)), (Surface::torus(1), p(1))];
        want.sort();
        assert_eq!(got, want);
        for s in all_surfaces(8) {
            for (a, b) in s.split_options() {
                assert_eq!(a.connected_sum(b), s);
                if s.is_orientable() {
                    assert!(a.is_orientable() && b.is_orientable());
                }
            }
        }
    }

    #[test]
    fn nonseparating_tables() {
        assert_eq!(Surface::torus(2).nonseparating_options(Cut::TwoBoundaries), vec![Surface::torus(1)]);
        assert_eq!(p(4).nonseparating_options(Cut::TwoBoundaries), vec![p(2), Surface::torus(1)]);
        assert_eq!(p(1).nonseparating_options(Cut::OneBoundary), vec![Surface::SPHERE]);
        assert!(Surface::SPHERE.nonseparating_options(Cut::TwoBoundaries).is_empty());
        assert!(Surface::torus(3).nonseparating_options(Cut::OneBoundary).is_empty());
        for s in all_surfaces(8) {
            for t in s.nonseparating_options(Cut::TwoBoundaries) {
                assert_eq!(s.euler_characteristic(), t.euler_characteristic() - 2);
                assert!(!s.is_orientable() || t.is_orientable());
            }
            for t in s.nonseparating_options(Cut::OneBoundary) {
                assert_eq!(s.euler_characteristic(), t.euler_characteristic() - 1);
            }
        }
    }
}
