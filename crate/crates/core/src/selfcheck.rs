//! Property suites run by `digraph-period selfcheck`.
//!
//! Every graph property is checked on all digraphs up to a size bound and
//! on seeded random digraphs; the first failing input of each property is
//! kept as a replayable edge list.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::lcm_list;
use crate::boolmatrix::{bmm, chi, oracle_cycle_gcd, oracle_signature};
use crate::digraph::{is_almost_strongly_connected, is_strongly_connected, scc_decompose, Digraph};
use crate::gadgets::{self, Label};
use crate::index::{exponent, index_of_convergence};
use crate::period::{consistent_partition, lifted_classes, period_general, period_scc, verify_partition, LiftRule};

/// Largest vertex count enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 5;

#[derive(Clone, Debug)]
pub struct SelfCheckConfig {
    pub max_n: usize,
    pub samples: usize,
    pub seed: u64,
    #[doc(hidden)]
    pub lift_rule: LiftRule,
}

impl Default for SelfCheckConfig {
    fn default() -> Self {
        SelfCheckConfig { max_n: 4, samples: 200, seed: 0, lift_rule: LiftRule::Forward }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub passed: u64,
    pub failed: u64,
    /// First failing input, serialized.
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct SelfCheckReport {
    pub seed: u64,
    pub properties: BTreeMap<&'static str, PropertyOutcome>,
}

impl SelfCheckReport {
    pub fn all_passed(&self) -> bool {
        self.properties.values().all(|p| p.failed == 0)
    }

    fn record(&mut self, name: &'static str, ok: bool, witness: impl FnOnce() -> String) {
        let entry = self.properties.entry(name).or_default();
        if ok {
            entry.passed += 1;
        } else {
            entry.failed += 1;
            if entry.counterexample.is_none() {
                entry.counterexample = Some(witness());
            }
        }
    }

    fn record_graph(&mut self, name: &'static str, ok: bool, g: &Digraph, note: impl FnOnce() -> String) {
        self.record(name, ok, || g.to_edgelist(&[format!("counterexample: {name}"), note()]));
    }
}

/// All digraphs on `n` vertices (self-loops included), by edge bitmask.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    let slots = n * n;
    (0u64..1 << slots).map(move |mask| {
        Digraph::from_edges(n, (0..slots).filter(|b| mask >> b & 1 == 1).map(|b| (b / n, b % n)))
            .expect("valid edges")
    })
}

pub fn run(config: &SelfCheckConfig) -> SelfCheckReport {
    let mut report = SelfCheckReport { seed: config.seed, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let max_n = config.max_n.max(1);

    for n in 1..=max_n.min(EXHAUSTIVE_LIMIT) {
        for g in all_digraphs(n) {
            check_graph(&mut report, &g, config.lift_rule);
        }
    }
    for _ in 0..config.samples {
        let n = rng.gen_range(1..=max_n);
        let p = rng.gen_range(0.05..0.6);
        let g = gadgets::random_digraph(&mut rng, n, p).expect("valid parameters");
        check_graph(&mut report, &g, config.lift_rule);
    }
    for _ in 0..config.samples {
        check_chi(&mut report, &mut rng);
        check_lcm(&mut report, &mut rng);
        check_gadgets(&mut report, &mut rng, max_n.clamp(2, 6));
    }
    report
}

fn check_graph(report: &mut SelfCheckReport, g: &Digraph, rule: LiftRule) {
    let n = g.n();
    let bfs_sc = (0..n).all(|u| g.reachable_from(u).iter().all(|&r| r));
    let sc = is_strongly_connected(g);
    report.record_graph("scc-vs-bfs", sc == bfs_sc, g, || format!("scc={sc} bfs={bfs_sc}"));

    let oracle = oracle_signature(g);
    let oracle_p = oracle.period.to_u64().expect("oracle period fits u64");
    let bound_ok = oracle.index <= (n * n) as u64 && (!sc || oracle_p <= n as u64);
    report.record_graph("oracle-bounds", bound_ok, g, || format!("oracle {oracle:?}"));

    let period = period_general(g);
    report.record_graph("period-vs-oracle", period == oracle.period, g, || {
        format!("lifted={period} oracle={}", oracle.period)
    });
    let sig = index_of_convergence(g);
    report.record_graph("index-vs-oracle", sig == oracle, g, || format!("lifted {sig:?} oracle {oracle:?}"));

    let cyclic = g.edge_count() > 0;
    if !(sc && cyclic) {
        return;
    }
    let gcd_ok = (0..n).all(|v| oracle_cycle_gcd(g, v) == Ok(Some(oracle_p)));
    report.record_graph("cycle-gcd-vs-oracle", gcd_ok, g, || format!("oracle period {oracle_p}"));

    let mut divisibility_ok = true;
    let mut detail = String::new();
    for k in 1..=n {
        for v in 0..n {
            let classes = lifted_classes(g, k, v, rule).expect("valid k and v");
            let divides = oracle_p.is_multiple_of(k as u64);
            let consistent = classes.as_ref().is_none_or(|c| {
                let class_of: Option<Vec<usize>> = c.iter().copied().collect();
                class_of.is_some_and(|class_of| verify_partition(g, &crate::ConsistentPartition { k, class_of }))
            });
            if classes.is_some() != divides || !consistent {
                divisibility_ok = false;
                detail = format!("k={k} v={v} separated={} divides={divides} consistent={consistent}", classes.is_some());
            }
        }
    }
    report.record_graph("lifted-divisibility", divisibility_ok, g, || detail);

    let p = period_scc(g).expect("cyclic strongly connected");
    let witness = consistent_partition(g, p as usize).ok().flatten();
    let ok = witness.as_ref().is_some_and(|w| verify_partition(g, w));
    report.record_graph("partition-witness", ok, g, || format!("period {p}, partition {witness:?}"));
}

fn check_chi(report: &mut SelfCheckReport, rng: &mut ChaCha8Rng) {
    let n = rng.gen_range(1..=6);
    let mut random_matrix = || -> Vec<Vec<u64>> {
        (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect()).collect()
    };
    let a = random_matrix();
    let b = random_matrix();
    let product: Vec<Vec<u64>> =
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect();
    let lhs = chi(&product).expect("square");
    let rhs = bmm(&chi(&a).expect("square"), &chi(&b).expect("square")).expect("same dimension");
    report.record("chi-homomorphism", lhs == rhs, || format!("A={a:?} B={b:?}"));
}

fn check_lcm(report: &mut SelfCheckReport, rng: &mut ChaCha8Rng) {
    let len = rng.gen_range(0..=20);
    let values: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=1000)).collect();
    let r = lcm_list(&values).expect("positive");
    let folded = values.iter().fold(BigUint::from(1u32), |acc, &v| {
        let v = BigUint::from(v);
        let g = gcd_big(&acc, &v);
        acc / g * v
    });
    report.record("lcm-vs-fold", *r.value() == folded, || format!("{values:?}"));
}

fn gcd_big(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = (a.clone(), b.clone());
    while b != BigUint::ZERO {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn check_gadgets(report: &mut SelfCheckReport, rng: &mut ChaCha8Rng, base_n: usize) {
    let n = rng.gen_range(1..=base_n);
    let p = rng.gen_range(0.1..0.5);

    let inst = gadgets::random_period_gadget(rng, n, p).expect("valid parameters");
    let ok = inst.labels == [Label::Period(period_general(&inst.graph).to_u64().unwrap_or(0))]
        && is_almost_strongly_connected(&inst.graph);
    report.record_graph("period-gadget", ok, &inst.graph, || inst.source.clone());

    let inst = gadgets::random_exponent_gadget(rng, n, p).expect("valid parameters");
    let ok = match (exponent(&inst.graph), inst.labels[0]) {
        (Ok(e), Label::ExponentAtMost(b)) => e <= b,
        (Ok(e), Label::ExponentAtLeast(b)) => e >= b,
        _ => false,
    };
    report.record_graph("exponent-gadget", ok, &inst.graph, || inst.source.clone());

    let len = rng.gen_range(3..=base_n + 3);
    let inst = gadgets::random_ord_gadget(rng, len).expect("valid length");
    let ok = is_strongly_connected(&inst.graph)
        && scc_decompose(&inst.graph).len() == 1
        && inst.labels == [Label::Period(period_scc(&inst.graph).unwrap_or(0))];
    report.record_graph("ord-gadget", ok, &inst.graph, || inst.source.clone());
}
