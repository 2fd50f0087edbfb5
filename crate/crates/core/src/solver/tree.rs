//! Canonical game trees.
//!
//! Trees are hash-consed: two positions have the same tree id exactly when
//! their game trees are isomorphic after identifying isomorphic siblings.

use std::collections::HashMap;

use num_bigint::BigUint;

use super::{mex, Nimber, SolveError};
use crate::canonical::{canonical_form_with, CanonOptions, CanonicalKey};
use crate::moves::{all_moves, apply_move};
use crate::position::Position;

/// A tree interned in a [`TreeStore`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameTree(u32);

#[derive(Clone, Debug)]
struct Node {
    children: Box<[GameTree]>,
    height: u32,
}

/// Interning table for game trees. Children lists are kept sorted and free of
/// duplicates.
#[derive(Clone, Debug)]
pub struct TreeStore {
    nodes: Vec<Node>,
    index: HashMap<Box<[GameTree]>, GameTree>,
}

impl Default for TreeStore {
    fn default() -> Self {
        TreeStore::new()
    }
}

impl TreeStore {
    pub fn new() -> TreeStore {
        let mut store = TreeStore { nodes: Vec::new(), index: HashMap::new() };
        store.intern(Vec::new());
        store
    }

    /// The tree with no moves.
    pub fn leaf(&self) -> GameTree {
        GameTree(0)
    }

    pub fn intern(&mut self, mut children: Vec<GameTree>) -> GameTree {
        children.sort_unstable();
        children.dedup();
        let children = children.into_boxed_slice();
        if let Some(&t) = self.index.get(&children) {
            return t;
        }
        let height = children.iter().map(|&c| self.height(c) + 1).max().unwrap_or(0);
        let t = GameTree(self.nodes.len() as u32);
        self.nodes.push(Node { children: children.clone(), height });
        self.index.insert(children, t);
        t
    }

    pub fn children(&self, t: GameTree) -> &[GameTree] {
        &self.nodes[t.0 as usize].children
    }

    pub fn height(&self, t: GameTree) -> u32 {
        self.nodes[t.0 as usize].height
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nimber(&self, t: GameTree) -> Nimber {
        let mut memo = HashMap::new();
        self.nimber_memo(t, &mut memo)
    }

    fn nimber_memo(&self, t: GameTree, memo: &mut HashMap<GameTree, Nimber>) -> Nimber {
        if let Some(&v) = memo.get(&t) {
            return v;
        }
        let v = mex(self.children(t).iter().map(|&c| self.nimber_memo(c, memo)).collect::<Vec<_>>());
        memo.insert(t, v);
        v
    }

    /// Nested-bracket rendering with children in a fixed order, so equal
    /// trees render identically across stores.
    pub fn render(&self, t: GameTree) -> String {
        let mut parts: Vec<String> = self.children(t).iter().map(|&c| self.render(c)).collect();
        parts.sort();
        format!("({})", parts.concat())
    }
}

/// Builds game trees of positions, memoized by canonical form.
pub struct TreeBuilder<'a> {
    store: &'a mut TreeStore,
    memo: HashMap<CanonicalKey, GameTree>,
    canon: CanonOptions,
}

impl<'a> TreeBuilder<'a> {
    pub fn new(store: &'a mut TreeStore, canon: CanonOptions) -> TreeBuilder<'a> {
        TreeBuilder { store, memo: HashMap::new(), canon }
    }

    /// The tree of `p`, failing if it is taller than `depth_limit`.
    pub fn game_tree(&mut self, p: &Position, depth_limit: u32) -> Result<GameTree, SolveError> {
        let key = canonical_form_with(p, self.canon);
        self.tree_of(&key, depth_limit).map_err(|_| SolveError::DepthExceeded { limit: depth_limit })
    }

    fn tree_of(&mut self, key: &CanonicalKey, depth: u32) -> Result<GameTree, ()> {
        if let Some(&t) = self.memo.get(key) {
            return if self.store.height(t) <= depth { Ok(t) } else { Err(()) };
        }
        let p = key.to_position();
        let moves = all_moves(&p);
        if moves.is_empty() {
            let leaf = self.store.leaf();
            self.memo.insert(key.clone(), leaf);
            return Ok(leaf);
        }
        if depth == 0 {
            return Err(());
        }
        let mut children = Vec::new();
        for m in &moves {
            let child = apply_move(&p, m).expect("generated moves are legal");
            let child_key = canonical_form_with(&child, self.canon);
            children.push(self.tree_of(&child_key, depth - 1)?);
        }
        let t = self.store.intern(children);
        self.memo.insert(key.clone(), t);
        Ok(t)
    }
}

/// Number of canonical game trees of height at most `h`:
/// 1, 2, 4, 16, 65536, 2^65536, ...
pub fn count_canonical_trees(h: u32) -> Result<BigUint, SolveError> {
    if h > 5 {
        return Err(SolveError::TowerTooLarge(h));
    }
    let mut count = BigUint::from(1u32);
    for _ in 0..h {
        let exp = usize::try_from(&count).map_err(|_| SolveError::TowerTooLarge(h))?;
        count = BigUint::from(1u32) << exp;
    }
    Ok(count)
}

/// Every canonical tree of height at most `h`, interned in `store`.
pub fn enumerate_canonical_trees(store: &mut TreeStore, h: u32) -> Result<Vec<GameTree>, SolveError> {
    if h > 4 {
        return Err(SolveError::TowerTooLarge(h));
    }
    let mut trees = vec![store.leaf()];
    for _ in 0..h {
        let n = trees.len();
        let mut next = Vec::with_capacity(1 << n);
        for mask in 0u64..(1u64 << n) {
            let children = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| trees[i]).collect();
            next.push(store.intern(children));
        }
        trees = next;
    }
    Ok(trees)
}
