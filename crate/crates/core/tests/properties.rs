use std::collections::{BTreeSet, HashSet};
use std::time::Duration;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tplkit_core::filtrating::{
    assemble_boundary, bounds_ok, enumerate_patterns, euler_feasible, max_curves, model_of_germ,
    realization_accounting, AttachmentPattern, Block, BoundaryLedger, ManifoldContext,
    PermutationGroup,
};
use tplkit_core::generate::{
    random_graph, random_graph_walk, random_template, random_template_walk,
};
use tplkit_core::invariants::{
    bowen_franks, determinant, parry_sullivan, smith_normal_form, AbelianGroup,
};
use tplkit_core::search::{conjugacy_search, germ_equiv_search, SearchBudget};
use tplkit_core::shift::{canonical_key, isomorphic, isomorphism, AdjacencyMatrix, EdgeGraph};
use tplkit_core::template::{slide_move, split_inverse, split_move, thicken, Template};
use tplkit_core::trace::GraphCalculus;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn small_matrix(max_n: usize, max_entry: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_n, 1..=max_n).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-max_entry..=max_entry, c), r)
    })
}

fn big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn leibniz(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for (j, x) in m[0].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = x * leibniz(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Relabel a graph by a permutation of its vertex positions.
fn shuffled(g: &EdgeGraph, perm: &[usize]) -> EdgeGraph {
    let n = g.len();
    let mut ids = vec![String::new(); n];
    for i in 0..n {
        ids[perm[i]] = format!("v{}", g.id(i));
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| (perm[a], perm[b]))
        .collect();
    EdgeGraph::from_edges(ids, &edges).unwrap()
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn smith_form_is_verified_and_unimodular(m in small_matrix(4, 6)) {
        let m = big(&m);
        let form = smith_normal_form(&m);
        prop_assert!(form.verify(&m));
        prop_assert!(determinant(&form.u).abs().is_one());
        prop_assert!(determinant(&form.v).abs().is_one());
        let nonzero = form.diagonal.iter().filter(|d| !d.is_zero()).count();
        prop_assert_eq!(nonzero, form.rank);
    }

    #[test]
    fn determinant_matches_cofactor_expansion(n in 1usize..=4, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        let m = big(&m);
        prop_assert_eq!(determinant(&m), leibniz(&m));
    }

    #[test]
    fn cokernel_order_is_the_determinant(n in 1usize..=4, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect()).collect();
        let a = AdjacencyMatrix::from_rows(&rows).unwrap();
        let ps = parry_sullivan(&a);
        let bf = bowen_franks(&a);
        if ps.is_zero() {
            prop_assert!(bf.free_rank > 0);
        } else {
            prop_assert_eq!(bf.free_rank, 0);
            prop_assert_eq!(BigInt::from(bf.torsion_order()), ps.abs());
        }
    }

    #[test]
    fn canonical_key_ignores_labels(n in 1usize..=6, density in 0.1f64..0.7, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, density);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let h = shuffled(&g, &perm);
        prop_assert_eq!(canonical_key(&g), canonical_key(&h));
        let map = isomorphism(&g, &h).expect("isomorphic");
        let h_edges: HashSet<(String, String)> =
            h.edges().into_iter().map(|(a, b)| (h.id(a).to_string(), h.id(b).to_string())).collect();
        for (a, b) in g.edges() {
            let image = (map[g.id(a)].clone(), map[g.id(b)].clone());
            prop_assert!(h_edges.contains(&image));
        }
        prop_assert!(isomorphic(&g, &h));
    }

    #[test]
    fn surgery_preserves_the_right_invariants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 3, 0.5);
        let (h, _) = random_graph_walk(&mut rng, &g, GraphCalculus::Conjugacy, 3, 6);
        for k in 1..=6 {
            prop_assert_eq!(g.periodic_point_count(k), h.periodic_point_count(k));
        }
        let (f, _) = random_graph_walk(&mut rng, &g, GraphCalculus::FlowEquivalence, 3, 6);
        prop_assert_eq!(parry_sullivan(&g.transition_matrix()), parry_sullivan(&f.transition_matrix()));
        prop_assert_eq!(bowen_franks(&g.transition_matrix()), bowen_franks(&f.transition_matrix()));
    }

    #[test]
    fn accounting_agrees_with_feasibility(
        entrance in prop::collection::vec(0usize..6, 1..5),
        exit in prop::collection::vec(0usize..6, 1..5),
    ) {
        let l = BoundaryLedger::new(entrance, exit);
        match realization_accounting(&l) {
            Ok(acc) => {
                prop_assert!(euler_feasible(&l));
                prop_assert_eq!(acc.r_entrance, acc.r_exit);
            }
            Err(_) => prop_assert!(!euler_feasible(&l)),
        }
    }

    #[test]
    fn model_of_germ_is_always_admissible(seed in any::<u64>(), m in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = thicken(&random_template(&mut rng, 4, 8)).unwrap();
        let ctx = ManifoldContext { m };
        prop_assert!(bounds_ok(&model_of_germ(&b), ctx));
    }

    #[test]
    fn assembly_keeps_euler_balance(seed in any::<u64>(), m in 0usize..2) {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = thicken(&random_template(&mut rng, 3, 5)).unwrap();
        let patterns = enumerate_patterns(&b.curve_ids(), ManifoldContext { m }, None).unwrap();
        let p = patterns.choose(&mut rng).expect("the model pattern always qualifies");
        let l = assemble_boundary(&b, p).unwrap();
        prop_assert!(euler_feasible(&l));
        let blocks: i64 = p.blocks().iter().map(Block::euler).sum();
        prop_assert_eq!(l.euler_entrance(), b.euler_entrance + blocks);
    }

    #[test]
    fn template_moves_invert(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_template(&mut rng, 3, 6);
        for line in t.lines() {
            for cut in 1..line.outgoing {
                let s = split_move(&t, &line.id, cut).unwrap();
                prop_assert!(s.validate().is_empty());
                prop_assert_eq!(s.genus().unwrap() + 1, t.genus().unwrap() + line.incoming);
                let b = t.line_index(&line.id).unwrap();
                let back = split_inverse(&s, &s.lines()[b].id, &s.lines()[b + 1].id).unwrap();
                prop_assert!(back.validate().is_empty());
                prop_assert!(back.is_isomorphic(&t));
            }
            if line.incoming == 2 {
                let once = slide_move(&t, &line.id, 0).unwrap();
                prop_assert_eq!(slide_move(&once, &line.id, 0).unwrap(), t.clone());
            }
        }
    }

    #[test]
    fn tpl_text_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_template(&mut rng, 4, 8);
        prop_assert_eq!(Template::parse_tpl(&t.to_tpl()).unwrap(), t);
    }

    #[test]
    fn mat_text_round_trips(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_graph(&mut rng, n, 0.4).transition_matrix();
        prop_assert_eq!(AdjacencyMatrix::parse_mat(&a.to_mat()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn graph_search_recovers_short_walks(seed in any::<u64>(), depth in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 2, 0.6);
        let budget = SearchBudget::new(depth, 200_000, Duration::from_secs(30)).unwrap();
        let (h, walk) = random_graph_walk(&mut rng, &g, GraphCalculus::Conjugacy, depth, 5);
        let r = conjugacy_search(&g, &h, budget);
        let trace = r.trace().expect("within depth");
        prop_assert!(trace.len() <= walk.len());
        prop_assert!(isomorphic(&trace.replay_graph(&g).unwrap(), &h));
        // identical inputs give identical results
        prop_assert_eq!(conjugacy_search(&g, &h, budget), r);
    }

    #[test]
    fn template_search_recovers_short_walks(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_template(&mut rng, 2, 4);
        let budget = SearchBudget::new(2, 200_000, Duration::from_secs(30)).unwrap();
        let (s, _) = random_template_walk(&mut rng, &t, 2, 3);
        let r = germ_equiv_search(&t, &s, budget).unwrap();
        let trace = r.trace().expect("within depth");
        prop_assert!(trace.replay_template(&t).unwrap().is_isomorphic(&s));
        prop_assert_eq!(germ_equiv_search(&t, &s, budget).unwrap(), r);
    }
}

/// All set partitions, built independently of the library.
fn partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            out.push(q);
        }
        let mut q = p;
        q.insert(0, vec![first]);
        out.push(q);
    }
    out
}

fn brute_patterns(n: usize, m: usize) -> BTreeSet<AttachmentPattern> {
    let curves: Vec<usize> = (0..n).collect();
    let mut out = BTreeSet::new();
    for p in partitions(&curves) {
        let k = p.len();
        for code in 0..(m + 2).pow(k as u32) {
            let genera: Vec<usize> = (0..k)
                .map(|i| code / (m + 2).pow(i as u32) % (m + 2))
                .collect();
            let ok = p.iter().zip(&genera).all(|(b, &g)| match g {
                g if g <= m => b.len() + 3 * g <= 4 * m + 3,
                g if g == m + 1 => b.len() <= m + 1,
                _ => false,
            });
            if ok {
                let blocks = p
                    .iter()
                    .zip(&genera)
                    .map(|(b, &g)| Block {
                        curves: b.clone(),
                        genus: g,
                    })
                    .collect();
                out.insert(AttachmentPattern::new(blocks).unwrap());
            }
        }
    }
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 0..=6 {
        for m in 0..=2 {
            let found =
                enumerate_patterns(&(0..n).collect::<Vec<_>>(), ManifoldContext { m }, None)
                    .unwrap();
            let set: BTreeSet<_> = found.iter().cloned().collect();
            assert_eq!(set.len(), found.len(), "duplicates at n={n} m={m}");
            assert!(found.iter().all(|p| bounds_ok(p, ManifoldContext { m })));
            assert_eq!(set, brute_patterns(n, m), "n={n} m={m}");
        }
    }
}

#[test]
fn max_curves_restates_the_bounds() {
    for m in 0..4 {
        for g in 0..m + 3 {
            for k in 1..20 {
                let direct =
                    g <= m + 1 && (g > m || k + 3 * g <= 4 * m + 3) && (g != m + 1 || k <= m + 1);
                assert_eq!(
                    max_curves(g, m).is_some_and(|lim| k <= lim),
                    direct,
                    "g={g} k={k} m={m}"
                );
            }
        }
    }
}

/// Orbits counted by Burnside's lemma: average number of fixed patterns.
fn burnside(patterns: &[AttachmentPattern], group: &PermutationGroup) -> usize {
    let fixed: usize = group
        .elements()
        .iter()
        .map(|g| patterns.iter().filter(|p| p.permuted(g) == **p).count())
        .sum();
    assert_eq!(fixed % group.order(), 0);
    fixed / group.order()
}

#[test]
fn symmetric_orbit_counts_match_burnside() {
    for n in 1..=5 {
        let group = PermutationGroup::symmetric(n);
        for m in 0..=1 {
            let ctx = ManifoldContext { m };
            let curves: Vec<usize> = (0..n).collect();
            let all = enumerate_patterns(&curves, ctx, None).unwrap();
            let reduced = enumerate_patterns(&curves, ctx, Some(&group)).unwrap();
            assert_eq!(reduced.len(), burnside(&all, &group), "n={n} m={m}");
            // representatives lie in distinct orbits
            let mut seen = HashSet::new();
            for p in &reduced {
                let orbit_min = group
                    .elements()
                    .iter()
                    .map(|g| p.permuted(g))
                    .min()
                    .unwrap();
                assert!(seen.insert(orbit_min));
            }
        }
    }
}

#[test]
fn cyclic_orbit_counts_match_burnside() {
    let group = PermutationGroup::generated_by(4, &[vec![1, 2, 3, 0]]).unwrap();
    assert_eq!(group.order(), 4);
    let ctx = ManifoldContext { m: 1 };
    let all = enumerate_patterns(&[0, 1, 2, 3], ctx, None).unwrap();
    let reduced = enumerate_patterns(&[0, 1, 2, 3], ctx, Some(&group)).unwrap();
    assert_eq!(reduced.len(), burnside(&all, &group));
}

#[test]
fn bowen_franks_group_of_small_cases() {
    let full2 = AdjacencyMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
    assert_eq!(bowen_franks(&full2), AbelianGroup::trivial());
    let one = AdjacencyMatrix::from_rows(&[vec![1]]).unwrap();
    assert_eq!(bowen_franks(&one).to_string(), "Z");
}
