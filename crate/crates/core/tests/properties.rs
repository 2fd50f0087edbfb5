//! Properties of moves, canonical forms and the solver, checked against the
//! raw-position oracles in `common`.

mod common;

use std::collections::{BTreeSet, HashMap, HashSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sprouts::canonical::{canonical_form_with, decompose, simplify, CanonOptions};
use sprouts::position::{Boundary, Region, Vertex};
use sprouts::solver::{limit_genus_bound, GameTree, TreeBuilder, TreeStore};
use sprouts::surface::{Letter, PolygonWord};
use sprouts::{
    canonical_form, children, parse_position, serialize_position, CanonicalKey, Position, Solver, SolverConfig,
    Surface, Winner,
};

use common::*;

fn p(n: u32) -> Surface {
    Surface::projective(n).unwrap()
}

fn t(n: u32) -> Surface {
    Surface::torus(n)
}

fn solver() -> Solver {
    Solver::new(SolverConfig::default())
}

fn small_reachable() -> Vec<Position> {
    [Surface::SPHERE, t(1), p(1)].into_iter().flat_map(|s| reachable(&Position::initial(2, s))).collect()
}

/// Every canonical position reachable from `start`, by closure over children.
fn canonical_reachable(start: &Position, options: CanonOptions) -> Vec<CanonicalKey> {
    let first = canonical_form_with(start, options);
    let mut seen: HashSet<CanonicalKey> = HashSet::from([first.clone()]);
    let mut stack = vec![first];
    let mut out = Vec::new();
    while let Some(k) = stack.pop() {
        let q = k.to_position();
        for m in sprouts::all_moves(&q) {
            let c = canonical_form_with(&sprouts::apply_move(&q, &m).unwrap(), options);
            if seen.insert(c.clone()) {
                stack.push(c);
            }
        }
        out.push(k);
    }
    out
}

fn trees(positions: &[Position], store: &mut TreeStore, options: CanonOptions) -> Vec<GameTree> {
    let mut builder = TreeBuilder::new(store, options);
    positions.iter().map(|q| builder.game_tree(q, 64).unwrap()).collect()
}

#[test]
fn seeded_playouts_keep_the_bookkeeping() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut moves = 0;
    while moves < 3000 {
        for s in test_surfaces() {
            for spots in 1..=3 {
                let steps = playout(&Position::initial(spots, s), &mut rng);
                assert!(steps.len() < 3 * spots as usize);
                for (before, m, after) in &steps {
                    check_move(before, m, after).unwrap();
                }
                moves += steps.len();
            }
        }
    }
}

#[test]
fn serialization_round_trips_on_reachable_positions() {
    for q in small_reachable() {
        let text = serialize_position(&q);
        assert_eq!(serialize_position(&parse_position(&text).unwrap()), text);
    }
}

#[test]
fn canonical_form_is_idempotent_and_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for q in small_reachable().iter().step_by(7) {
        let key = canonical_form(q);
        assert_eq!(canonical_form(&key.to_position()), key, "{q}");
        for _ in 0..3 {
            assert_eq!(canonical_form(&random_symmetry(q, &mut rng)), key, "{q}");
        }
    }
}

#[test]
fn children_commute_with_canonical_form_when_surfaces_are_kept() {
    let keep = CanonOptions { keep_surfaces: true, ..CanonOptions::default() };
    let kids = |q: &Position| -> BTreeSet<CanonicalKey> {
        sprouts::all_moves(q).iter().map(|m| canonical_form_with(&sprouts::apply_move(q, m).unwrap(), keep)).collect()
    };
    for q in small_reachable().iter().step_by(5) {
        assert_eq!(kids(&canonical_form_with(q, keep).to_position()), kids(q), "{q}");
    }
}

#[test]
fn raw_children_match_the_children_set() {
    for q in small_reachable().iter().step_by(11) {
        let raw: BTreeSet<CanonicalKey> =
            sprouts::all_moves(q).iter().map(|m| canonical_form(&sprouts::apply_move(q, m).unwrap())).collect();
        assert_eq!(raw, children(q));
    }
}

#[test]
fn decompose_keeps_lives_and_live_sharing() {
    for q in small_reachable().iter().step_by(3) {
        let parts = decompose(q);
        let s = simplify(q);
        assert_eq!(parts.iter().map(Position::total_lives).sum::<u32>(), s.total_lives(), "{q}");
        let names: Vec<HashSet<String>> = parts
            .iter()
            .map(|c| {
                let lives = c.lives();
                c.vertices().iter().zip(lives).filter(|(_, l)| *l > 0).map(|(v, _)| v.name.clone()).collect()
            })
            .collect();
        for (a, na) in names.iter().enumerate() {
            for nb in &names[a + 1..] {
                assert!(na.is_disjoint(nb), "{q}");
            }
        }
    }
}

#[test]
fn decomposition_does_not_change_nimbers() {
    let with = solver();
    let without = Solver::new(SolverConfig { decompose: false, ..SolverConfig::default() });
    for q in small_reachable() {
        assert_eq!(with.nimber(&q).unwrap(), without.nimber(&q).unwrap(), "{q}");
    }
}

#[test]
fn memo_does_not_change_nimbers() {
    let with = solver();
    let without = Solver::new(SolverConfig { memoize: false, ..SolverConfig::default() });
    let mut starts: Vec<Position> = test_surfaces().into_iter().map(|s| Position::initial(2, s)).collect();
    starts.push(Position::initial(3, Surface::SPHERE));
    for start in &starts {
        for k in canonical_reachable(start, CanonOptions::default()).iter().step_by(3) {
            let q = k.to_position();
            assert_eq!(with.nimber(&q).unwrap(), without.nimber(&q).unwrap(), "{k}");
        }
    }
}

#[test]
fn solver_agrees_with_brute_force_from_two_spots_on_the_torus() {
    let s = solver();
    let mut memo = HashMap::new();
    for q in reachable(&Position::initial(2, t(1))).iter().step_by(3) {
        assert_eq!(s.nimber(q).unwrap(), brute_nimber(q, &mut memo), "{q}");
    }
}

#[test]
fn nimbers_follow_the_mex_law() {
    let s = solver();
    for start in [Position::initial(3, Surface::SPHERE), Position::initial(2, p(1)), Position::initial(2, t(1))] {
        for k in canonical_reachable(&start, CanonOptions::default()) {
            let q = k.to_position();
            let kids: Vec<u32> = children(&q).iter().map(|c| s.nimber(&c.to_position()).unwrap()).collect();
            if decompose(&q).len() == 1 {
                assert_eq!(s.nimber(&q).unwrap(), mex(kids), "{k}");
            }
        }
    }
}

#[test]
fn nimbers_add_by_xor_over_glued_components() {
    let s = solver();
    let parts: Vec<Position> =
        ["S{*a}", "S{*a,*b}", "P1{*a}", "P1{*a,*b}", "T1{*a,*b}", "S{a.n};S{a.n}"].map(|x| parse_position(x).unwrap()).into();
    for x in &parts {
        for y in &parts {
            let glued = glue(x, y);
            assert_eq!(s.nimber(&glued).unwrap(), s.nimber(x).unwrap() ^ s.nimber(y).unwrap(), "{glued}");
        }
    }
}

/// Disjoint union, renaming the second position's vertices.
fn glue(x: &Position, y: &Position) -> Position {
    let (mut regions, mut vertices) = x.clone().into_parts();
    let shift = vertices.len() as u32;
    let (more, names) = y.clone().into_parts();
    vertices.extend(names.into_iter().map(|v| Vertex { name: format!("{}_", v.name), spot: v.spot }));
    regions.extend(more.into_iter().map(|r| {
        Region::new(r.surface, r.boundaries.iter().map(|b| Boundary::new(b.walk().iter().map(|v| v + shift).collect())).collect())
    }));
    Position::new(regions, vertices)
}

#[test]
fn winner_matches_winning_moves() {
    let s = solver();
    for start in [Position::initial(3, Surface::SPHERE), Position::initial(2, p(2)), Position::initial(2, t(2))] {
        for k in canonical_reachable(&start, CanonOptions::default()) {
            let q = k.to_position();
            let moves = s.winning_moves(&q).unwrap();
            assert_eq!(s.winner(&q).unwrap() == Winner::First, !moves.is_empty(), "{k}");
            for (_, child) in moves {
                assert_eq!(s.nimber(&child.to_position()).unwrap(), 0);
            }
        }
    }
}

#[test]
fn game_trees_are_short_and_carry_the_solver_nimber() {
    let s = solver();
    let mut store = TreeStore::new();
    for surface in test_surfaces() {
        for spots in 1..=3 {
            let q = Position::initial(spots, surface);
            let tree = trees(std::slice::from_ref(&q), &mut store, CanonOptions::default())[0];
            assert!(store.height(tree) < 3 * spots, "{q}");
            assert_eq!(store.nimber(tree), s.nimber(&q).unwrap(), "{q}");
        }
    }
}

#[test]
fn low_life_regions_do_not_depend_on_their_surface() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let swaps = [Surface::SPHERE, t(1), p(1), p(2)];
    let keep = CanonOptions { keep_surfaces: true, ..CanonOptions::default() };
    let mut store = TreeStore::new();
    let mut checked = 0;
    while checked < 40 {
        let steps = playout(&Position::initial(2, p(2)), &mut rng);
        for (_, _, q) in steps {
            for r in low_life_regions(&q) {
                let variants: Vec<Position> = swaps.iter().map(|&x| with_surface(&q, r, x)).collect();
                let got = trees(&variants, &mut store, keep);
                assert!(got.iter().all(|&g| g == got[0]), "{q}, region {r}");
                checked += 1;
            }
        }
    }
}

#[test]
fn genus_clamp_keeps_game_trees() {
    let clamp = CanonOptions { clamp: true, ..CanonOptions::default() };
    let mut store = TreeStore::new();
    for genus in 1..=3 {
        for spots in 1..=3 {
            let keys = canonical_reachable(&Position::initial(spots, t(genus)), CanonOptions::default());
            let positions: Vec<Position> = keys.iter().map(CanonicalKey::to_position).collect();
            let off = trees(&positions, &mut store, CanonOptions::default());
            let on = trees(&positions, &mut store, clamp);
            for (k, (a, b)) in keys.iter().zip(off.iter().zip(&on)) {
                assert_eq!(a, b, "{k}");
            }
        }
    }
}

#[test]
fn large_genus_stops_mattering() {
    let mut store = TreeStore::new();
    let q = |s| Position::initial(2, s);
    let got = trees(&[q(t(3)), q(t(4)), q(p(5)), q(p(7)), q(p(6)), q(p(8))], &mut store, CanonOptions::default());
    assert_eq!(got[0], got[1]);
    assert_eq!(got[2], got[3]);
    assert_eq!(got[4], got[5]);
    let report = limit_genus_bound(&q(t(7)), 0).unwrap();
    assert!(report.bound <= 3, "{report:?}");
}

fn word(names: &[(char, bool)]) -> PolygonWord {
    PolygonWord::new(names.iter().map(|&(name, inverted)| Letter { name, inverted }).collect()).unwrap()
}

/// A random polygon word on the labels starting at `first`.
fn arb_word(first: char) -> impl Strategy<Value = PolygonWord> {
    (1usize..4).prop_flat_map(move |pairs| {
        let letters: Vec<char> = (0..pairs as u8).map(|k| (first as u8 + k) as char).collect();
        let doubled: Vec<char> = letters.iter().chain(&letters).copied().collect();
        (Just(doubled).prop_shuffle(), prop::collection::vec(any::<bool>(), 2 * pairs))
            .prop_map(|(order, inv)| word(&order.into_iter().zip(inv).collect::<Vec<_>>()))
    })
}

proptest! {
    #[test]
    fn concatenation_is_connected_sum(a in arb_word('a'), b in arb_word('m')) {
        let joined = a.concat(&b).unwrap();
        prop_assert_eq!(joined.classify(), a.classify().connected_sum(b.classify()));
    }

    #[test]
    fn classification_ignores_rotation(a in arb_word('a'), k in 0usize..8) {
        let mut letters = a.letters().to_vec();
        let n = letters.len();
        letters.rotate_left(k % n);
        prop_assert_eq!(PolygonWord::new(letters).unwrap().classify(), a.classify());
    }

    #[test]
    fn euler_characteristic_matches_the_cell_count(a in arb_word('a')) {
        let s = a.classify();
        prop_assert!(s.euler_characteristic() <= 2);
        prop_assert_eq!(Surface::from_euler(s.is_orientable(), s.euler_characteristic()), Some(s));
    }

    #[test]
    fn playouts_round_trip_through_text(seed in any::<u64>(), spots in 1u32..4, which in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = test_surfaces()[which];
        for (_, m, q) in playout(&Position::initial(spots, s), &mut rng) {
            let text = serialize_position(&q);
            prop_assert_eq!(serialize_position(&parse_position(&text).unwrap()), text.clone());
            let key = canonical_form(&q);
            prop_assert_eq!(CanonicalKey::from_text(key.as_str(), CanonOptions::default()).unwrap(), key);
            prop_assert!(!m.to_string().is_empty());
        }
    }

    #[test]
    fn symmetric_images_share_the_key(seed in any::<u64>(), spots in 1u32..4, which in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = test_surfaces()[which];
        for (_, _, q) in playout(&Position::initial(spots, s), &mut rng) {
            prop_assert_eq!(canonical_form(&random_symmetry(&q, &mut rng)), canonical_form(&q));
        }
    }
}
