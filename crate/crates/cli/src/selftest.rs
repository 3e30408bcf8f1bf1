//! Randomized property checks driven by a single seed.

use std::fmt;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tplkit_core::filtrating::{euler_feasible, realization_accounting};
use tplkit_core::generate::{
    random_graph_walk, random_irreducible_graph, random_ledger, random_template,
    random_template_walk,
};
use tplkit_core::invariants::{bowen_franks, parry_sullivan};
use tplkit_core::search::{flow_equiv_search, germ_equiv_search, SearchBudget};
use tplkit_core::shift::isomorphic;
use tplkit_core::template::thicken;
use tplkit_core::trace::GraphCalculus;

pub struct CheckReport {
    pub name: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "ok   {} ({} cases)", self.name, self.cases),
            Some(why) => write!(f, "FAIL {}: {why}", self.name),
        }
    }
}

type Check = fn(&mut ChaCha8Rng, usize) -> Result<(), String>;

pub fn run(seed: u64, cases: usize) -> Vec<CheckReport> {
    let checks: [(&'static str, Check); 5] = [
        ("flow invariants under surgery", flow_invariants),
        ("periodic counts under conjugacy moves", periodic_counts),
        ("euler balance of thickened templates", euler_balance),
        ("accounting agrees with feasibility", accounting),
        ("search recovers scrambled inputs", search_recovery),
    ];
    checks
        .into_iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            CheckReport {
                name,
                cases,
                failure: check(&mut rng, cases).err(),
            }
        })
        .collect()
}

fn flow_invariants(rng: &mut ChaCha8Rng, cases: usize) -> Result<(), String> {
    for _ in 0..cases {
        let g = random_irreducible_graph(rng, 3, 0.35);
        let (h, trace) = random_graph_walk(rng, &g, GraphCalculus::FlowEquivalence, 3, 6);
        let (a, b) = (g.transition_matrix(), h.transition_matrix());
        if parry_sullivan(&a) != parry_sullivan(&b) || bowen_franks(&a) != bowen_franks(&b) {
            return Err(format!("trace {} changed PS or BF", trace.to_json()));
        }
    }
    Ok(())
}

fn periodic_counts(rng: &mut ChaCha8Rng, cases: usize) -> Result<(), String> {
    for _ in 0..cases {
        let g = random_irreducible_graph(rng, 3, 0.35);
        let (h, trace) = random_graph_walk(rng, &g, GraphCalculus::Conjugacy, 3, 6);
        if (1..=8).any(|k| g.periodic_point_count(k) != h.periodic_point_count(k)) {
            return Err(format!("trace {} changed periodic counts", trace.to_json()));
        }
    }
    Ok(())
}

fn euler_balance(rng: &mut ChaCha8Rng, cases: usize) -> Result<(), String> {
    for _ in 0..cases {
        let t = random_template(rng, 4, 8);
        let b = thicken(&t).map_err(|e| e.to_string())?;
        let expected = 1 - b.genus as i64;
        if b.euler_entrance != expected || b.euler_exit != expected {
            return Err(format!("unbalanced template\n{}", t.to_tpl()));
        }
    }
    Ok(())
}

fn accounting(rng: &mut ChaCha8Rng, cases: usize) -> Result<(), String> {
    for _ in 0..cases {
        let l = random_ledger(rng, 4, 4);
        if realization_accounting(&l).is_ok() != euler_feasible(&l) {
            return Err(format!("disagreement on {l:?}"));
        }
    }
    Ok(())
}

fn search_recovery(rng: &mut ChaCha8Rng, cases: usize) -> Result<(), String> {
    let budget = SearchBudget::new(3, 100_000, Duration::from_secs(30)).expect("positive budget");
    for _ in 0..cases.min(20) {
        let g = random_irreducible_graph(rng, 2, 0.3);
        let (h, _) = random_graph_walk(rng, &g, GraphCalculus::FlowEquivalence, 3, 5);
        let r = flow_equiv_search(&g, &h, budget);
        let ok = r
            .trace()
            .and_then(|t| t.replay_graph(&g).ok())
            .is_some_and(|end| isomorphic(&end, &h));
        if !ok {
            return Err("graph search did not recover a scrambled graph".into());
        }
        let t = random_template(rng, 2, 3);
        let (s, _) = random_template_walk(rng, &t, 2, 3);
        let r = germ_equiv_search(&t, &s, budget).map_err(|e| e.to_string())?;
        let ok = r
            .trace()
            .and_then(|tr| tr.replay_template(&t).ok())
            .is_some_and(|end| end.is_isomorphic(&s));
        if !ok {
            return Err(format!("template search did not recover\n{}", s.to_tpl()));
        }
    }
    Ok(())
}
