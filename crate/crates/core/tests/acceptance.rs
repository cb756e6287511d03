//! Acceptance suite: one PASS/FAIL line per criterion, then a single
//! assertion over all of them. Run with
//! `cargo test -p digraph-period --test acceptance -- --nocapture`.

use std::collections::VecDeque;
use std::time::Instant;

use num_bigint::BigUint;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use digraph_period::gadgets::{self, Label};
use digraph_period::selfcheck::all_digraphs;
use digraph_period::{
    adjacency, bmm, chi, consistent_partition, divides_period, exponent, format_factored, index_of_convergence,
    is_almost_strongly_connected, is_primitive, lcm_list, oracle_signature, period_general,
    period_scc, residue_path_exists, residue_witness, scc_decompose, verify_partition, Digraph, ResidueQuery,
};

type Outcome = Result<String, String>;

fn g(n: usize, edges: &[(usize, usize)]) -> Digraph {
    Digraph::from_edges(n, edges.iter().copied()).unwrap()
}

fn random_digraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Digraph {
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
    Digraph::from_edges(n, edges).unwrap()
}

/// Plain BFS, independent of the library's reachability code.
fn bfs_reaches(g: &Digraph, s: usize, t: usize) -> bool {
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &v in g.successors(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen[t]
}

fn strongly_connected_by_bfs(g: &Digraph) -> bool {
    (0..g.n()).all(|u| (0..g.n()).all(|v| bfs_reaches(g, u, v)))
}

/// Bounds from instances of criteria 1 to 3: (n, index, strongly connected, period).
#[derive(Default)]
struct Bounds {
    checked: u64,
    violation: Option<String>,
}

impl Bounds {
    fn check(&mut self, g: &Digraph, index: u64, period: u64) {
        let n = g.n() as u64;
        let sc = strongly_connected_by_bfs(g);
        self.checked += 1;
        if (index > n * n || (sc && period > n)) && self.violation.is_none() {
            self.violation = Some(format!("n={n} index={index} period={period} sc={sc}: {:?}", g.edges().collect::<Vec<_>>()));
        }
    }
}

fn compare_with_oracle(g: &Digraph, bounds: &mut Bounds) -> Result<(), String> {
    let oracle = oracle_signature(g);
    let sig = index_of_convergence(g);
    let period = period_general(g);
    if sig != oracle || period != oracle.period {
        return Err(format!(
            "{:?}: structural index {} period {}, oracle index {} period {}",
            g.edges().collect::<Vec<_>>(),
            sig.index,
            period,
            oracle.index,
            oracle.period
        ));
    }
    bounds.check(g, oracle.index, oracle.period.to_u64().unwrap());
    Ok(())
}

fn c1_exhaustive(bounds: &mut Bounds) -> Outcome {
    let mut count = 0;
    for n in 1..=4 {
        for d in all_digraphs(n) {
            compare_with_oracle(&d, bounds)?;
            count += 1;
        }
    }
    Ok(format!("{count} digraphs on n <= 4 agree with the oracle"))
}

fn c2_sampled(bounds: &mut Bounds) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (count, max_n) in [(2000, 8), (500, 10)] {
        for _ in 0..count {
            let n = rng.gen_range(1..=max_n);
            let p = rng.gen_range(0.05..0.6);
            compare_with_oracle(&random_digraph(&mut rng, n, p), bounds)?;
        }
    }
    Ok("2000 random digraphs (n <= 8) and 500 (n <= 10) agree with the oracle".into())
}

/// Random strongly connected digraph, alternating three constructions so
/// that periods other than 1 show up often.
fn random_strongly_connected(rng: &mut ChaCha8Rng, i: usize) -> Digraph {
    let n = rng.gen_range(1..=10);
    loop {
        let d = match i % 3 {
            0 => {
                let p = rng.gen_range(0.15..0.5);
                random_digraph(rng, n, p)
            }
            1 => {
                let mut perm: Vec<usize> = (0..n).collect();
                for j in (1..n).rev() {
                    perm.swap(j, rng.gen_range(0..=j));
                }
                let p = rng.gen_range(0.0..0.15);
                let mut edges: Vec<(usize, usize)> = (0..n).map(|j| (perm[j], perm[(j + 1) % n])).collect();
                edges.extend((0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)));
                Digraph::from_edges(n, edges).unwrap()
            }
            _ => {
                // edges only from class c to class c + 1 (mod k)
                let k = rng.gen_range(1..=n);
                let class: Vec<usize> = (0..n).map(|v| if v < k { v } else { rng.gen_range(0..k) }).collect();
                let p = rng.gen_range(0.4..0.9);
                let edges: Vec<(usize, usize)> = (0..n)
                    .flat_map(|u| (0..n).map(move |v| (u, v)))
                    .filter(|&(u, v)| class[v] == (class[u] + 1) % k)
                    .filter(|_| rng.gen_bool(p))
                    .collect();
                Digraph::from_edges(n, edges).unwrap()
            }
        };
        if strongly_connected_by_bfs(&d) && d.edge_count() > 0 {
            return d;
        }
    }
}

fn strongly_connected_sample() -> Vec<Digraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    (0..500).map(|i| random_strongly_connected(&mut rng, i)).collect()
}

fn c3_divisibility(sample: &[Digraph], bounds: &mut Bounds) -> Outcome {
    let mut periods = std::collections::BTreeSet::new();
    for d in sample {
        let p = period_scc(d).map_err(|e| e.to_string())?;
        let oracle = oracle_signature(d);
        if oracle.period.to_u64() != Some(p) {
            return Err(format!("period_scc {p} vs oracle {} on {:?}", oracle.period, d.edges().collect::<Vec<_>>()));
        }
        bounds.check(d, oracle.index, p);
        periods.insert(p);
        for k in 1..=d.n() {
            let answers: Vec<bool> = (0..d.n()).map(|v| divides_period(d, k, v).unwrap()).collect();
            let expected = p % k as u64 == 0;
            if answers.iter().any(|&a| a != expected) {
                return Err(format!("k={k} period={p} answers {answers:?} on {:?}", d.edges().collect::<Vec<_>>()));
            }
        }
    }
    Ok(format!("500 strongly connected digraphs, all k and v; periods seen {periods:?}"))
}

/// Exhaustive search for a labeling `class: V -> Z_k` with every edge
/// going from class `c` to class `c + 1`.
fn has_k_labeling(d: &Digraph, k: usize) -> bool {
    let n = d.n();
    let mut class = vec![0usize; n];
    loop {
        if d.edges().all(|(u, v)| class[v] == (class[u] + 1) % k) {
            return true;
        }
        let mut i = 0;
        while i < n && class[i] == k - 1 {
            class[i] = 0;
            i += 1;
        }
        if i == n {
            return false;
        }
        class[i] += 1;
    }
}

fn c4_partitions(sample: &[Digraph]) -> Outcome {
    for d in sample {
        let p = period_scc(d).unwrap() as usize;
        match consistent_partition(d, p) {
            Ok(Some(part)) if verify_partition(d, &part) => {}
            other => return Err(format!("no verified partition for period {p}: {other:?}")),
        }
    }
    let d = g(3, &[(0, 1), (0, 2), (1, 2), (2, 1)]);
    let period = period_general(&d);
    if has_k_labeling(&d, 2) || period.to_u64() != Some(2) || oracle_signature(&d).period.to_u64() != Some(2) {
        return Err(format!("three-vertex digraph: period {period}, 2-labeling {}", has_k_labeling(&d, 2)));
    }
    Ok("500 partitions verified; {(0,1),(0,2),(1,2),(2,1)} has period 2 and no 2-consistent partition".into())
}

fn c5_bounds(bounds: &Bounds) -> Outcome {
    match &bounds.violation {
        Some(v) => Err(v.clone()),
        None => Ok(format!("index <= n^2 and strongly connected period <= n on {} instances", bounds.checked)),
    }
}

fn c6_period_gadgets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut reachable = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.05..0.4);
        let base = random_digraph(&mut rng, n, p);
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let norm = gadgets::normalize_streach(&base, s, t).map_err(|e| e.to_string())?;
        let inst = gadgets::gen_period_gadget(&norm.graph, norm.s, norm.t, norm.t_prime).map_err(|e| e.to_string())?;
        let reach = bfs_reaches(&base, s, t);
        reachable += u32::from(reach);
        let period = period_general(&inst.graph).to_u64();
        if period != Some(if reach { 1 } else { 2 }) || !is_almost_strongly_connected(&inst.graph) {
            return Err(format!("n={n} s={s} t={t} reachable={reach} period={period:?}"));
        }
    }
    Ok(format!("500 gadgets ({reachable} reachable), periods match BFS, all almost strongly connected"))
}

/// Simple cycles as vertex lists, each reported from its smallest vertex.
fn simple_cycles(d: &Digraph) -> Vec<Vec<usize>> {
    fn extend(d: &Digraph, start: usize, path: &mut Vec<usize>, on_path: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        for &v in d.successors(u) {
            if v == start {
                out.push(path.clone());
            } else if v > start && !on_path[v] {
                on_path[v] = true;
                path.push(v);
                extend(d, start, path, on_path, out);
                path.pop();
                on_path[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    for start in 0..d.n() {
        let mut on_path = vec![false; d.n()];
        on_path[start] = true;
        extend(d, start, &mut vec![start], &mut on_path, &mut out);
    }
    out
}

fn c7_ord_gadgets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ones = 0;
    for _ in 0..500 {
        let len = rng.gen_range(3..=20);
        let (pairs, s, t) = gadgets::random_ord_instance(&mut rng, len).map_err(|e| e.to_string())?;
        // t precedes s iff walking successors from t reaches s
        let mut x = t;
        let mut t_first = false;
        while let Some(&(_, y)) = pairs.iter().find(|&&(a, _)| a == x) {
            if y == s {
                t_first = true;
            }
            x = y;
        }
        let inst = gadgets::gen_ord_gadget(&pairs, s, t).map_err(|e| e.to_string())?;
        let d = &inst.graph;
        let v = inst.vertex("v");
        let period = period_general(d).to_u64().unwrap();
        let cycles = simple_cycles(d);
        let ok = period == if t_first { 1 } else { 2 }
            && strongly_connected_by_bfs(d)
            && period <= 2
            && cycles.len() == 4
            && cycles.iter().all(|c| c.contains(&v));
        if !ok {
            return Err(format!("pairs {pairs:?} s={s} t={t}: period {period}, {} cycles", cycles.len()));
        }
        ones += u32::from(t_first);
    }
    Ok(format!("500 gadgets ({ones} with t before s), periods match, 4 simple cycles through v"))
}

/// `A^e` all-ones and `A^(e-1)` not: an exponent check by matrix powers.
fn exponent_by_powers(d: &Digraph, e: u64) -> bool {
    let a = adjacency(d);
    a.pow(e).is_all_ones() && (e == 0 || !a.pow(e - 1).is_all_ones())
}

fn c8_exponent_gadgets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut reachable = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.05..0.4);
        let base = random_digraph(&mut rng, n, p);
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let norm = gadgets::normalize_streach(&base, s, t).map_err(|e| e.to_string())?;
        let inst =
            gadgets::gen_exponent_gadget(&norm.graph, norm.s, norm.t, norm.t_prime).map_err(|e| e.to_string())?;
        let d = &inst.graph;
        let half = d.n() as u64 / 2;
        let reach = bfs_reaches(&base, s, t);
        reachable += u32::from(reach);
        let e = exponent(d).map_err(|e| format!("n={n} s={s} t={t}: {e}"))?;
        let bound_ok = if reach { e <= half } else { e > half };
        if !is_primitive(d) || !bound_ok || !exponent_by_powers(d, e) {
            return Err(format!("n={n} s={s} t={t} reachable={reach} exponent={e} |V'|={}", d.n()));
        }
    }
    Ok(format!("500 primitive gadgets ({reachable} reachable), exponents on the right side of |V'|/2"))
}

fn c9_fixed_instances() -> Outcome {
    // path v=0 -> 1 -> 2 -> 3; s before t, then t before s
    let left = gadgets::gen_ord_gadget(&[(0, 1), (1, 2), (2, 3)], 1, 2).unwrap();
    let right = gadgets::gen_ord_gadget(&[(2, 3), (0, 1), (1, 2)], 2, 1).unwrap();
    let left_p = period_general(&left.graph).to_u64();
    let right_p = period_general(&right.graph).to_u64();

    // s=0, p2=1, t'=2, s'=3, r2=4, t=5, z1=6
    let base = g(7, &[(0, 1), (1, 2), (3, 1), (3, 4), (4, 5), (4, 2), (1, 6), (6, 5)]);
    let period_inst = gadgets::gen_period_gadget(&base, 0, 5, 2).unwrap();
    let base_p = period_general(&period_inst.graph).to_u64();

    // s=0, t'=1, t=2, s'=3; t unreachable from s
    let small = g(4, &[(0, 1), (3, 1), (3, 2)]);
    let exp_inst = gadgets::gen_exponent_gadget(&small, 0, 2, 1).unwrap();
    let e = exponent(&exp_inst.graph).unwrap();
    let vertices = exp_inst.graph.n();

    let ok = left_p == Some(2) && right_p == Some(1) && base_p == Some(1) && e >= 5 && vertices == 8;
    let detail = format!(
        "ORD s-before-t period {left_p:?}, t-before-s period {right_p:?}, 7-vertex period gadget {base_p:?}, \
         8-vertex exponent gadget {e} (|V'| = {vertices})"
    );
    if ok && exp_inst.labels == [Label::ExponentAtLeast(5)] {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c10_chi() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let mut random_matrix =
            || -> Vec<Vec<u64>> { (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect()).collect() };
        let a = random_matrix();
        let b = random_matrix();
        let product: Vec<Vec<u64>> =
            (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect();
        let lhs = chi(&product).unwrap();
        let rhs = bmm(&chi(&a).unwrap(), &chi(&b).unwrap()).unwrap();
        if lhs != rhs {
            return Err(format!("A={a:?} B={b:?}"));
        }
    }
    Ok("1000 matrix pairs".into())
}

fn c11_lcm() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let len = rng.gen_range(0..=20);
        let values: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=1000)).collect();
        let folded = values.iter().fold(BigUint::from(1u32), |acc, &v| acc.lcm(&BigUint::from(v)));
        if *lcm_list(&values).unwrap().value() != folded {
            return Err(format!("{values:?}"));
        }
    }
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    let mut edges = Vec::new();
    let mut offset = 0;
    for &p in &primes {
        let p = p as usize;
        edges.extend((0..p).map(|i| (offset + i, offset + (i + 1) % p)));
        offset += p;
    }
    let d = Digraph::from_edges(offset, edges).unwrap();
    let period = period_general(&d);
    let product: BigUint = primes.iter().map(|&p| BigUint::from(p)).product();
    let factored = format_factored(&period);
    let expected_factored = format!(
        "{product} = {}",
        primes.iter().map(ToString::to_string).collect::<Vec<_>>().join(" * ")
    );
    let big = *period.value() > BigUint::from(u64::MAX);
    if offset == 381 && *period.value() == product && big && factored == expected_factored
        && period.to_string() == "32589158477190044730"
    {
        Ok(format!("10^4 lists agree; 381-vertex prime cycles: {factored}"))
    } else {
        Err(format!("{offset} vertices, period {factored}"))
    }
}

/// Walks of length `0..=limit` from `s`, tracking whether they have visited `inside`.
fn residue_by_walks(d: &Digraph, inside: &[bool], s: usize, t: usize, p: u64, target: u64, limit: u64) -> bool {
    let n = d.n();
    let mut cur = vec![[false; 2]; n];
    cur[s][usize::from(inside[s])] = true;
    for len in 0..=limit {
        if len % p == target % p && cur[t][1] {
            return true;
        }
        let mut next = vec![[false; 2]; n];
        for u in 0..n {
            for touched in 0..2 {
                if cur[u][touched] {
                    for &v in d.successors(u) {
                        next[v][usize::from(touched == 1 || inside[v])] = true;
                    }
                }
            }
        }
        cur = next;
    }
    false
}

fn c12_witnesses() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut true_queries = 0u64;
    let mut queries = 0u64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=7);
        let p = rng.gen_range(0.1..0.45);
        let d = random_digraph(&mut rng, n, p);
        let scc = scc_decompose(&d);
        for c in scc.cyclic() {
            let inside: Vec<bool> = scc.component_id.iter().map(|&x| x == c).collect();
            for s in 0..n {
                for t in 0..n {
                    let period = ResidueQuery::new(&d, s, t, 0, c).unwrap().period;
                    for target in 0..period {
                        let q = ResidueQuery::new(&d, s, t, target, c).unwrap();
                        queries += 1;
                        let bound = 2 * n as u64 * period;
                        let exists = residue_path_exists(&d, &q);
                        if exists != residue_by_walks(&d, &inside, s, t, period, target, bound) {
                            return Err(format!("{q:?} on {:?}", d.edges().collect::<Vec<_>>()));
                        }
                        if !exists {
                            continue;
                        }
                        true_queries += 1;
                        let w = residue_witness(&d, &q).ok_or_else(|| format!("no witness for {q:?}"))?;
                        let len = w.len() as u64 - 1;
                        let valid = w[0] == s
                            && *w.last().unwrap() == t
                            && w.windows(2).all(|e| d.has_edge(e[0], e[1]))
                            && w.iter().any(|&x| inside[x])
                            && len % period == target
                            && len <= bound;
                        if !valid {
                            return Err(format!("bad witness {w:?} for {q:?}"));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{queries} residue queries match a walk search; {true_queries} witnesses valid and within 2np"))
}

#[test]
fn acceptance() {
    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let mut bounds = Bounds::default();
    let sample = strongly_connected_sample();
    macro_rules! criterion {
        ($id:expr, $name:expr, $body:expr) => {{
            let start = Instant::now();
            let outcome = $body;
            let secs = start.elapsed().as_secs_f64();
            match &outcome {
                Ok(detail) => println!("PASS [{:>2}] {}: {} ({secs:.1}s)", $id, $name, detail),
                Err(detail) => println!("FAIL [{:>2}] {}: {} ({secs:.1}s)", $id, $name, detail),
            }
            results.push(($id, $name, outcome, secs));
        }};
    }
    criterion!(1, "oracle equivalence, exhaustive", c1_exhaustive(&mut bounds));
    criterion!(2, "oracle equivalence, sampled", c2_sampled(&mut bounds));
    criterion!(3, "lifted divisibility", c3_divisibility(&sample, &mut bounds));
    criterion!(4, "consistent partitions", c4_partitions(&sample));
    criterion!(5, "index and period bounds", c5_bounds(&bounds));
    criterion!(6, "period gadget soundness", c6_period_gadgets());
    criterion!(7, "ORD gadget soundness", c7_ord_gadgets());
    criterion!(8, "exponent gadget soundness", c8_exponent_gadgets());
    criterion!(9, "fixed instances", c9_fixed_instances());
    criterion!(10, "chi homomorphism", c10_chi());
    criterion!(11, "lcm engine", c11_lcm());
    criterion!(12, "residue witness bound", c12_witnesses());

    let failed: Vec<u32> = results.iter().filter(|r| r.2.is_err()).map(|r| r.0).collect();
    println!("{} of {} criteria passed", results.len() - failed.len(), results.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
