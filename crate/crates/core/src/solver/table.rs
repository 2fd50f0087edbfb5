use std::fmt;
use std::ops::RangeInclusive;

use serde::{Serialize, Serializer};

use super::{Outcome, Solver};
use crate::position::Position;
use crate::surface::Surface;

/// One entry of a result table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Solved(u32),
    /// The nimber is at least this value.
    LowerBound(u32),
    Unknown,
}

impl From<Outcome> for Cell {
    fn from(o: Outcome) -> Cell {
        match o {
            Outcome::Solved(n) => Cell::Solved(n),
            Outcome::AtLeast(n) => Cell::LowerBound(n),
            Outcome::Unknown => Cell::Unknown,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Solved(n) => write!(f, "{n}"),
            Cell::LowerBound(n) => write!(f, ">{}", n - 1),
            Cell::Unknown => f.write_str("?"),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Nimbers of starting positions; rows are surfaces, columns spot counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub spots: Vec<u32>,
    pub surfaces: Vec<Surface>,
    pub cells: Vec<Vec<Cell>>,
}

impl Table {
    pub fn get(&self, surface: Surface, spots: u32) -> Option<Cell> {
        let r = self.surfaces.iter().position(|&s| s == surface)?;
        let c = self.spots.iter().position(|&p| p == spots)?;
        Some(self.cells[r][c])
    }

    pub fn to_text(&self) -> String {
        let mut rows = vec![std::iter::once(String::new())
            .chain(self.spots.iter().map(|p| p.to_string()))
            .collect::<Vec<_>>()];
        for (s, cells) in self.surfaces.iter().zip(&self.cells) {
            rows.push(std::iter::once(s.to_string()).chain(cells.iter().map(|c| c.to_string())).collect());
        }
        let widths: Vec<usize> =
            (0..rows[0].len()).map(|i| rows.iter().map(|r| r[i].len()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for row in rows {
            let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            out.push_str(line.join(" ").trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push(',');
        out.push_str(&self.spots.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","));
        out.push('\n');
        for (s, cells) in self.surfaces.iter().zip(&self.cells) {
            out.push_str(&s.to_string());
            for c in cells {
                out.push(',');
                out.push_str(&c.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Solves every starting position in the grid. The solver's time limit
/// applies to each cell; a cell that fills the memo clears it for the next.
pub fn solve_table(solver: &Solver, spots: RangeInclusive<u32>, surfaces: &[Surface]) -> Table {
    let spots: Vec<u32> = spots.collect();
    let cells = surfaces
        .iter()
        .map(|&s| {
            spots
                .iter()
                .map(|&p| {
                    let (outcome, _) = solver.solve_partial(&Position::initial(p, s));
                    if outcome == Outcome::Unknown || matches!(outcome, Outcome::AtLeast(_)) {
                        solver.clear_memo();
                    }
                    Cell::from(outcome)
                })
                .collect()
        })
        .collect();
    Table { spots, surfaces: surfaces.to_vec(), cells }
}
