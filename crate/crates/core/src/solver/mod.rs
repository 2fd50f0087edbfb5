//! Normal-play solving.
//!
//! A position is split into independent components; the nimber of the whole
//! is the XOR of the component nimbers, and the nimber of a component is the
//! mex of the nimbers of its children. Component nimbers are memoized by
//! canonical key.

mod limit_genus;
mod table;
mod tree;

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use dashmap::DashMap;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::canonical::{canonical_components, canonical_form_with, CanonOptions, CanonicalKey};
use crate::moves::{all_moves, apply_move, Move};
use crate::position::Position;

pub use limit_genus::{limit_genus_bound, LimitGenusReport};
pub use table::{solve_table, Cell, Table};
pub use tree::{count_canonical_trees, enumerate_canonical_trees, GameTree, TreeBuilder, TreeStore};

pub type Nimber = u32;

/// Smallest non-negative integer not in `values`.
pub fn mex(values: impl IntoIterator<Item = Nimber>) -> Nimber {
    let mut seen: Vec<bool> = Vec::new();
    for v in values {
        let v = v as usize;
        if v >= seen.len() {
            seen.resize(v + 1, false);
        }
        seen[v] = true;
    }
    seen.iter().position(|s| !s).unwrap_or(seen.len()) as Nimber
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub memo_entries: u64,
    pub nodes: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("resource limit reached ({reason}) after {} nodes", stats.nodes)]
    ResourceLimit { reason: String, stats: Stats },
    #[error("game tree deeper than the limit of {limit}")]
    DepthExceeded { limit: u32 },
    #[error("a tower of height {0} does not fit in memory")]
    TowerTooLarge(u32),
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub memo_limit: usize,
    pub time_limit: Option<Duration>,
    /// Worker threads; 0 solves sequentially.
    pub threads: usize,
    pub canon: CanonOptions,
    /// Split positions into independent components (XOR of nimbers).
    pub decompose: bool,
    /// Keep a transposition table.
    pub memoize: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            memo_limit: 10_000_000,
            time_limit: Some(Duration::from_secs(600)),
            threads: 0,
            canon: CanonOptions::default(),
            decompose: true,
            memoize: true,
        }
    }
}

/// Outcome of a budgeted solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solved(Nimber),
    /// The nimber is at least this value (always positive).
    AtLeast(Nimber),
    Unknown,
}

pub struct Solver {
    config: SolverConfig,
    memo: DashMap<CanonicalKey, Nimber>,
    nodes: AtomicU64,
    pool: Option<rayon::ThreadPool>,
}

// Depth below which children are solved in parallel when threads are enabled.
const PARALLEL_DEPTH: u32 = 2;

struct Budget {
    started: Instant,
    deadline: Option<Instant>,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Solver {
        let pool = (config.threads > 0).then(|| {
            rayon::ThreadPoolBuilder::new().num_threads(config.threads).build().expect("thread pool")
        });
        Solver { config, memo: DashMap::new(), nodes: AtomicU64::new(0), pool }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn memo_entries(&self) -> usize {
        self.memo.len()
    }

    pub fn clear_memo(&self) {
        self.memo.clear();
    }

    fn budget(&self) -> Budget {
        let started = Instant::now();
        Budget { started, deadline: self.config.time_limit.map(|t| started + t) }
    }

    fn stats_since(&self, budget: &Budget) -> Stats {
        Stats {
            memo_entries: self.memo.len() as u64,
            nodes: self.nodes.load(Ordering::Relaxed),
            elapsed_ms: budget.started.elapsed().as_millis() as u64,
        }
    }

    fn limit(&self, budget: &Budget, reason: &str) -> SolveError {
        SolveError::ResourceLimit { reason: reason.to_string(), stats: self.stats_since(budget) }
    }

    fn in_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match &self.pool {
            Some(pool) => pool.install(f),
            None => f(),
        }
    }

    /// Keys whose nimbers XOR to the nimber of `p`.
    fn keys(&self, p: &Position) -> Vec<CanonicalKey> {
        if self.config.decompose {
            canonical_components(p, self.config.canon)
        } else {
            let key = canonical_form_with(p, self.config.canon);
            if key.as_str().is_empty() {
                Vec::new()
            } else {
                vec![key]
            }
        }
    }

    fn position_value(&self, p: &Position, budget: &Budget, depth: u32) -> Result<Nimber, SolveError> {
        let mut acc = 0;
        for key in self.keys(p) {
            acc ^= self.key_value(&key, budget, depth)?;
        }
        Ok(acc)
    }

    /// Distinct children of `p`, each as the key list of its components.
    fn child_keys(&self, p: &Position) -> BTreeSet<Vec<CanonicalKey>> {
        all_moves(p)
            .iter()
            .map(|m| self.keys(&apply_move(p, m).expect("generated moves are legal")))
            .collect()
    }

    fn key_value(&self, key: &CanonicalKey, budget: &Budget, depth: u32) -> Result<Nimber, SolveError> {
        if self.config.memoize {
            if let Some(v) = self.memo.get(key) {
                return Ok(*v);
            }
        }
        let nodes = self.nodes.fetch_add(1, Ordering::Relaxed);
        if nodes % 256 == 0 {
            if let Some(deadline) = budget.deadline {
                if Instant::now() > deadline {
                    return Err(self.limit(budget, "time limit"));
                }
            }
        }
        if self.config.memoize && self.memo.len() >= self.config.memo_limit {
            return Err(self.limit(budget, "memo limit"));
        }
        let p = key.to_position();
        let children = self.child_keys(&p);
        let value_of = |keys: &Vec<CanonicalKey>| -> Result<Nimber, SolveError> {
            let mut acc = 0;
            for k in keys {
                acc ^= self.key_value(k, budget, depth + 1)?;
            }
            Ok(acc)
        };
        let values: Vec<Nimber> = if self.pool.is_some() && depth < PARALLEL_DEPTH {
            let children: Vec<&Vec<CanonicalKey>> = children.iter().collect();
            children.par_iter().map(|k| value_of(k)).collect::<Result<_, _>>()?
        } else {
            children.iter().map(value_of).collect::<Result<_, _>>()?
        };
        let v = mex(values);
        if self.config.memoize {
            self.memo.insert(key.clone(), v);
        }
        Ok(v)
    }

    pub fn nimber(&self, p: &Position) -> Result<Nimber, SolveError> {
        let budget = self.budget();
        self.in_pool(|| self.position_value(p, &budget, 0))
    }

    /// Like [`Solver::nimber`], but also reports statistics.
    pub fn nimber_with_stats(&self, p: &Position) -> (Result<Nimber, SolveError>, Stats) {
        let budget = self.budget();
        let r = self.in_pool(|| self.position_value(p, &budget, 0));
        (r, self.stats_since(&budget))
    }

    pub fn winner(&self, p: &Position) -> Result<Winner, SolveError> {
        Ok(if self.nimber(p)? == 0 { Winner::Second } else { Winner::First })
    }

    /// Every move after which the position has nimber 0, with the canonical
    /// form of the resulting position.
    pub fn winning_moves(&self, p: &Position) -> Result<Vec<(Move, CanonicalKey)>, SolveError> {
        let budget = self.budget();
        self.in_pool(|| {
            let mut out = Vec::new();
            for m in all_moves(p) {
                let child = apply_move(p, &m).expect("generated moves are legal");
                if self.position_value(&child, &budget, 1)? == 0 {
                    out.push((m, canonical_form_with(&child, self.config.canon)));
                }
            }
            Ok(out)
        })
    }

    /// Solves `p`, falling back to a lower bound from the children that were
    /// solved before the budget ran out.
    pub fn solve_partial(&self, p: &Position) -> (Outcome, Stats) {
        let budget = self.budget();
        let outcome = self.in_pool(|| {
            let children = self.child_keys(p);
            let mut found = Vec::new();
            for keys in &children {
                let mut acc = 0;
                for k in keys {
                    match self.key_value(k, &budget, 1) {
                        Ok(v) => acc ^= v,
                        Err(_) => {
                            let lb = mex(found);
                            return if lb > 0 { Outcome::AtLeast(lb) } else { Outcome::Unknown };
                        }
                    }
                }
                found.push(acc);
            }
            Outcome::Solved(mex(found))
        });
        (outcome, self.stats_since(&budget))
    }
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(SolverConfig::default())
    }
}

/// Nimber with a default solver.
pub fn nimber(p: &Position) -> Result<Nimber, SolveError> {
    Solver::default().nimber(p)
}

pub fn winner(p: &Position) -> Result<Winner, SolveError> {
    Solver::default().winner(p)
}

pub fn winning_moves(p: &Position) -> Result<Vec<(Move, CanonicalKey)>, SolveError> {
    Solver::default().winning_moves(p)
}

/// JSON result record of a solve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveRecord {
    pub position: String,
    pub canonical: String,
    pub nimber: Option<Nimber>,
    pub nimber_lower_bound: Option<Nimber>,
    pub winner: Option<Winner>,
    pub stats: Stats,
}

impl SolveRecord {
    pub fn new(p: &Position, canon: CanonOptions, outcome: Outcome, stats: Stats) -> SolveRecord {
        let (nimber, lower) = match outcome {
            Outcome::Solved(n) => (Some(n), None),
            Outcome::AtLeast(n) => (None, Some(n)),
            Outcome::Unknown => (None, None),
        };
        SolveRecord {
            position: p.to_string(),
            canonical: canonical_form_with(p, canon).into_string(),
            nimber,
            nimber_lower_bound: lower,
            winner: match outcome {
                Outcome::Solved(0) => Some(Winner::Second),
                Outcome::Solved(_) | Outcome::AtLeast(_) => Some(Winner::First),
                Outcome::Unknown => None,
            },
            stats,
        }
    }
}
