//! Acceptance suite: one PASS or FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gainswitch_core::algebra::{GaMatrix, GroupAlgebraElement};
use gainswitch_core::cospectral::{fingerprint, first_moment_difference, pi_spectral_gap, pi_spectrum, walk_trace_oracle};
use gainswitch_core::fixtures;
use gainswitch_core::generate::{random_piwqh_instance, random_wqh_instance, InstanceShape};
use gainswitch_core::graph::{GainGraph, SwitchingFunction};
use gainswitch_core::group::{Element, Group};
use gainswitch_core::iso::{is_nontrivial, Disconfirmer, IsoVerdict};
use gainswitch_core::represent::{RepKind, Representation};
use gainswitch_core::scalar::Scalar;
use gainswitch_core::search::SearchLimits;
use gainswitch_core::switching::{
    build_switch_matrix, check_block_lemma, correction_matrices, d_completion, switch_graph, verify_gwqh,
    verify_piwqh, verify_theorem_gcosp, verify_theorem_picosp, CaseResolution, Condition, WQHPartition, Witness,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one criterion: failures found, plus notes printed either way.
#[derive(Default)]
struct Report {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Report {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    fn time_limit(&mut self, elapsed: Duration, limit: Duration) {
        self.check(elapsed < limit, format!("runtime {elapsed:.2?} not below {limit:.0?}"));
    }
}

fn cyclic(n: usize) -> Arc<Group> {
    Arc::new(Group::cyclic(n).unwrap())
}

fn symmetric(n: usize) -> Arc<Group> {
    Arc::new(Group::symmetric(n).unwrap())
}

fn random_graph(rng: &mut ChaCha8Rng, group: &Arc<Group>, n: usize) -> GainGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                edges.push((u, v, group.element(rng.gen_range(0..group.order())).unwrap()));
            }
        }
    }
    GainGraph::new(group, n, edges).unwrap()
}

fn random_element(rng: &mut ChaCha8Rng, group: &Arc<Group>) -> Element {
    group.element(rng.gen_range(0..group.order())).unwrap()
}

fn edge_set(g: &GainGraph) -> Vec<(usize, usize, String)> {
    g.edges().map(|(u, v, x)| (u, v, g.group().label(x).to_string())).collect()
}

fn criterion_1() -> Report {
    let mut r = Report::default();
    let start = Instant::now();
    let f = fixtures::t4_13();
    let (g, alpha) = (&f.graph, &f.partition);
    let group = g.group();
    let one = group.identity();

    let verdict = verify_gwqh(g, alpha).unwrap();
    r.check(verdict.is_valid(), "verify_gwqh reports the partition valid");
    for failure in verdict.failures() {
        r.note(format!("group-algebra failure {failure}"));
    }
    r.check(
        verdict.case(0, 0) == Some(CaseResolution::B { g1: Some(one), g2: None }),
        "C_1/C_2 resolve as case (b) with g1 = 1, g2 = 0",
    );
    r.check(verdict.case(0, 1) == Some(CaseResolution::A), "C_3/C_4 resolve as case (a)");

    let expected: Vec<(usize, usize, String)> = {
        let mut e: Vec<_> = edge_set(g).into_iter().filter(|&(u, v, _)| !(u == 0 && (1..=3).contains(&v))).collect();
        e.extend((4..=6).map(|v| (0, v, "z^0".to_string())));
        e.sort();
        e
    };
    match switch_graph(g, alpha, &verdict) {
        Ok(switched) => {
            r.check(edge_set(&switched) == expected, "edge diff removes v0-v1..v3 and adds v0-v4..v6 with gain 1");
            r.check(!switched.is_connected() && g.is_connected(), "switched graph disconnected, original connected");
            let h = g.vertex_count() * group.order();
            let diff = first_moment_difference(g, &switched, h).unwrap();
            r.check(diff.is_none(), format!("moments agree for all h <= {h}, first difference at {diff:?}"));
        }
        Err(e) => r.check(false, format!("switch_graph: {e}")),
    }
    match verify_theorem_gcosp(g, alpha) {
        Ok(ok) => r.check(ok, "switched adjacency equals Q A Q"),
        Err(e) => r.check(false, format!("verify_theorem_gcosp: {e}")),
    }
    r.check(g.is_connected(), format!("original graph connected ({} components)", g.components().len()));

    // the same steps under the identical representation, for diagnosis
    let rep = Representation::new(group, RepKind::Identical).unwrap();
    let pv = verify_piwqh(g, alpha, &rep, 1e-8).unwrap();
    if let Ok(switched) = switch_graph(g, alpha, &pv) {
        r.note(format!(
            "under the identical representation: valid {}, edge diff as stated {}, components {} vs {}, moments first differ at h = {:?}",
            pv.is_valid(),
            edge_set(&switched) == expected,
            g.components().len(),
            switched.components().len(),
            first_moment_difference(g, &switched, 52).unwrap(),
        ));
    }
    r.time_limit(start.elapsed(), Duration::from_secs(5));
    r
}

fn criterion_2() -> Report {
    let mut r = Report::default();
    let start = Instant::now();
    let f = fixtures::s4_17();
    let (g, alpha) = (&f.graph, &f.partition);
    let group = g.group();
    let el = |label: &str| group.element_by_label(label).unwrap();

    let verdict = verify_gwqh(g, alpha).unwrap();
    r.check(!verdict.is_valid(), "verify_gwqh reports invalid");
    let psi = |labels: &[&str]| GroupAlgebraElement::sum_of(group, labels.iter().map(|l| el(l)));
    match verdict.failure(Condition::CrossPairSwap).map(|f| &f.witness) {
        Some(Witness::Mismatch { left, right }) => {
            r.check(left.cell == 1 && right.cell == 2, "witness compares Psi_1 with Psi_2");
            r.check(left.value == psi(&["e", "(12)(34)"]), format!("witness Psi_1 = {}", left.value));
            r.check(right.value == psi(&["(12)", "(34)"]), format!("witness Psi_2 = {}", right.value));
        }
        other => r.check(false, format!("cross-pair-swap witness missing: {other:?}")),
    }

    let rep = Representation::new(group, RepKind::Permutation).unwrap();
    let pv = verify_piwqh(g, alpha, &rep, 1e-8).unwrap();
    r.check(pv.is_valid(), "verify_piwqh valid under the permutation representation");
    let printed: [(&str, [[f64; 4]; 4]); 4] = [
        ("e", [[1., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., 1., 0.], [0., 0., 0., 1.]]),
        ("(12)(34)", [[0., 1., 0., 0.], [1., 0., 0., 0.], [0., 0., 0., 1.], [0., 0., 1., 0.]]),
        ("(12)", [[0., 1., 0., 0.], [1., 0., 0., 0.], [0., 0., 1., 0.], [0., 0., 0., 1.]]),
        ("(34)", [[1., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., 0., 1.], [0., 0., 1., 0.]]),
    ];
    for (label, m) in printed {
        let image = rep.image(el(label));
        let same = image.shape() == (4, 4)
            && (0..4).all(|i| (0..4).all(|j| image.get(i, j).re == m[i][j] && image.get(i, j).im == 0.0));
        r.check(same, format!("image of {label} matches the printed matrix"));
    }
    match verify_theorem_picosp(g, alpha, &rep, 1e-8) {
        Ok(ok) => r.check(ok, "represented switched adjacency equals pi(Q) pi(A) pi(Q)"),
        Err(e) => r.check(false, format!("verify_theorem_picosp: {e}")),
    }
    match switch_graph(g, alpha, &pv) {
        Ok(switched) => {
            let s1 = pi_spectrum(g, &rep, 1e-8).unwrap();
            let s2 = pi_spectrum(&switched, &rep, 1e-8).unwrap();
            r.check(s1.len() == 68 && s2.len() == 68, format!("spectra of size {} and {}", s1.len(), s2.len()));
            let gap = s1.iter().zip(&s2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            r.check(gap <= 1e-8, format!("largest eigenvalue gap {gap:e}"));
            r.note(format!("largest eigenvalue gap {gap:.1e}"));
        }
        Err(e) => r.check(false, format!("switch_graph: {e}")),
    }
    r.time_limit(start.elapsed(), Duration::from_secs(10));
    r
}

fn criterion_3() -> Report {
    let mut r = Report::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let groups = [cyclic(2), cyclic(4), symmetric(3)];
    for i in 0..200u64 {
        let group = &groups[i as usize % groups.len()];
        let shape = InstanceShape::random(&mut rng, 2, 2, 3);
        let (g, alpha) = random_wqh_instance(group, &shape, i);
        let verdict = verify_gwqh(&g, &alpha).unwrap();
        if !verdict.is_valid() {
            r.check(false, format!("instance {i} is not valid"));
            continue;
        }
        let q = build_switch_matrix(group, &alpha).unwrap();
        let n = g.vertex_count();
        r.check(q.mul(&q).unwrap() == GaMatrix::identity(group, n), format!("instance {i}: Q Q != I"));
        let switched = switch_graph(&g, &alpha, &verdict).unwrap();
        let qaq = q.mul(&g.adjacency()).unwrap().mul(&q).unwrap();
        r.check(switched.adjacency() == qaq, format!("instance {i}: switched adjacency != Q A Q"));
    }
    r.note("200 instances over cyclic 2, cyclic 4 and symmetric 3");
    r
}

/// `Q_n` written out from its defining blocks `I - J/n`, `J/n`.
fn q_oracle(group: &Arc<Group>, n: usize) -> GaMatrix {
    GaMatrix::from_fn(group, 2 * n, 2 * n, |i, j| {
        let c = if (i < n) == (j < n) {
            if i == j {
                Scalar::ratio(n as i64 - 1, n as i64)
            } else {
                Scalar::ratio(-1, n as i64)
            }
        } else {
            Scalar::ratio(1, n as i64)
        };
        GroupAlgebraElement::scalar(group, c)
    })
}

/// A `ni x nj` block with constant row and column sums: `x J` plus, when
/// square, gains placed along the given cyclic shifts.
fn constant_sum_block(
    group: &Arc<Group>,
    ni: usize,
    nj: usize,
    x: &GroupAlgebraElement,
    terms: &[(usize, Element)],
) -> GaMatrix {
    GaMatrix::from_fn(group, ni, nj, |i, j| {
        let mut e = x.clone();
        if ni == nj {
            for &(shift, gain) in terms {
                if (i + shift) % ni == j {
                    e = e.add(&GroupAlgebraElement::from_element(group, gain)).unwrap();
                }
            }
        }
        e
    })
}

fn assemble(group: &Arc<Group>, blocks: [[GaMatrix; 2]; 2]) -> GaMatrix {
    let (ni, nj) = blocks[0][0].shape();
    GaMatrix::from_fn(group, 2 * ni, 2 * nj, |i, j| blocks[i / ni][j / nj].get(i % ni, j % nj))
}

fn random_algebra(rng: &mut ChaCha8Rng, group: &Arc<Group>) -> GroupAlgebraElement {
    let terms: Vec<(Element, Scalar)> = (0..rng.gen_range(0..3))
        .map(|_| (random_element(rng, group), Scalar::from_int(rng.gen_range(-2..=2))))
        .collect();
    GroupAlgebraElement::from_terms(group, terms)
}

fn hypothesis_matrix(rng: &mut ChaCha8Rng, group: &Arc<Group>, ni: usize, nj: usize) -> GaMatrix {
    let pick = |rng: &mut ChaCha8Rng| {
        let x = random_algebra(rng, group);
        let gains: Vec<Element> = (0..rng.gen_range(0..3)).map(|_| random_element(rng, group)).collect();
        let shifts = |rng: &mut ChaCha8Rng| -> Vec<(usize, Element)> {
            gains.iter().map(|&g| (rng.gen_range(0..ni.max(1)), g)).collect()
        };
        let (t1, t2) = (shifts(rng), shifts(rng));
        (constant_sum_block(group, ni, nj, &x, &t1), constant_sum_block(group, ni, nj, &x, &t2))
    };
    let (a11, a22) = pick(rng);
    let (a12, a21) = pick(rng);
    assemble(group, [[a11, a12], [a21, a22]])
}

fn random_matrix(rng: &mut ChaCha8Rng, group: &Arc<Group>, rows: usize, cols: usize) -> GaMatrix {
    GaMatrix::from_fn(group, rows, cols, |_, _| random_algebra(rng, group))
}

fn criterion_4() -> Report {
    let mut r = Report::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let groups = [cyclic(4), symmetric(3)];
    let mut via_d = 0;
    for i in 0..200 {
        let group = &groups[i % 2];
        let (ni, nj) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = if i % 2 == 0 {
            hypothesis_matrix(&mut rng, group, ni, nj)
        } else {
            via_d += 1;
            let mut a = random_matrix(&mut rng, group, 2 * ni, 2 * nj);
            let total = |a: &GaMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| {
                a.submatrix(&rows.collect::<Vec<_>>(), &cols.collect::<Vec<_>>()).total()
            };
            // equal totals on both diagonal blocks and on both off-diagonal blocks
            let fix = a.get(ni, nj).add(&total(&a, 0..ni, 0..nj)).unwrap().sub(&total(&a, ni..2 * ni, nj..2 * nj)).unwrap();
            a.set(ni, nj, fix).unwrap();
            let fix = a.get(ni, 0).add(&total(&a, 0..ni, nj..2 * nj)).unwrap().sub(&total(&a, ni..2 * ni, 0..nj)).unwrap();
            a.set(ni, 0, fix).unwrap();
            a.add(&d_completion(&a, ni, nj).unwrap()).unwrap()
        };
        let lemma = check_block_lemma(&a, ni, nj).unwrap();
        r.check(lemma.holds(), format!("matrix {i} ({ni}x{nj} blocks) fails the lemma: {lemma:?}"));
        let qaq = q_oracle(group, ni).mul(&a).unwrap().mul(&q_oracle(group, nj)).unwrap();
        r.check(qaq == a, format!("matrix {i}: Q A Q != A by direct multiplication"));
    }
    for i in 0..50 {
        let group = &groups[i % 2];
        let (ni, nj) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let mut a = hypothesis_matrix(&mut rng, group, ni, nj);
        // one extra gain in A_11 breaks its row sum against A_22
        let (row, col) = (rng.gen_range(0..ni), rng.gen_range(0..nj));
        let bumped = a.get(row, col).add(&GroupAlgebraElement::from_element(group, random_element(&mut rng, group))).unwrap();
        a.set(row, col, bumped).unwrap();
        let lemma = check_block_lemma(&a, ni, nj).unwrap();
        r.check(!lemma.hypothesis, format!("violator {i} reported as satisfying the hypothesis"));
    }
    r.note(format!("200 hypothesis matrices ({via_d} via the D-completion), 50 violators"));
    r
}

fn criterion_5() -> Report {
    let mut r = Report::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let groups = [cyclic(4), symmetric(3)];
    for i in 0..500 {
        let group = &groups[i % 2];
        let n = rng.gen_range(1..=6);
        let h = rng.gen_range(1..=5);
        let g = random_graph(&mut rng, group, n);
        let walks = walk_trace_oracle(&g, h).unwrap();
        let trace = g.adjacency().pow(h).unwrap().trace().unwrap();
        r.check(walks == trace, format!("case {i}: n = {n}, h = {h}: {walks} != {trace}"));
    }
    r.note("500 cases, n <= 6, h <= 5, over cyclic 4 and symmetric 3");
    r
}

fn criterion_6() -> Report {
    let mut r = Report::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let groups = [cyclic(4), symmetric(3), cyclic(3)];
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let group = &groups[i % groups.len()];
        let n = rng.gen_range(1..=6);
        let g = random_graph(&mut rng, group, n);
        let values = (0..n).map(|_| random_element(&mut rng, group)).collect();
        let f = SwitchingFunction::new(group, values).unwrap();
        let s = g.apply_switching(&f).unwrap();
        let h = n * group.order();
        let (f1, f2) = (fingerprint(&g, h).unwrap(), fingerprint(&s, h).unwrap());
        r.check(f1.moments() == f2.moments(), format!("pair {i}: fingerprints differ at {:?}", f1.first_difference(&f2)));
        for kind in RepKind::ALL {
            let Ok(rep) = Representation::new(group, kind) else { continue };
            match pi_spectral_gap(&g, &s, &rep, 1e-9) {
                Ok(Some(gap)) => {
                    worst = worst.max(gap);
                    r.check(gap <= 2e-9, format!("pair {i}: {} spectra differ by {gap:e}", kind.name()));
                }
                other => r.check(false, format!("pair {i}: {} spectra: {other:?}", kind.name())),
            }
        }
    }
    r.note(format!("100 pairs over cyclic 4, symmetric 3 and cyclic 3, largest gap {worst:.1e}"));
    r
}

fn criterion_7() -> Report {
    let mut r = Report::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let reps = [
        Representation::new(&symmetric(3), RepKind::Permutation).unwrap(),
        Representation::new(&symmetric(4), RepKind::Permutation).unwrap(),
        Representation::new(&cyclic(4), RepKind::Identical).unwrap(),
        Representation::new(&cyclic(3), RepKind::Trivial).unwrap(),
        Representation::new(&symmetric(3), RepKind::Regular).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    let mut g_invalid = 0;
    let mut nonzero_d = 0;
    for i in 0..50u64 {
        let rep = &reps[i as usize % reps.len()];
        let shape = InstanceShape::random(&mut rng, 2, 3, 3);
        let (g, alpha) = random_piwqh_instance(rep, &shape, i, 1e-10);
        let verdict = verify_piwqh(&g, &alpha, rep, 1e-10).unwrap();
        r.check(verdict.is_valid(), format!("instance {i} is not valid under {}", rep.kind().name()));
        if !verify_gwqh(&g, &alpha).unwrap().is_valid() {
            g_invalid += 1;
        }
        for c in correction_matrices(&g, &alpha).unwrap() {
            let (rows, cols) = c.d.shape();
            if (0..rows).any(|i| (0..cols).any(|j| !c.d.is_zero_entry(i, j))) {
                nonzero_d += 1;
            }
            let m = rep.apply_mat(&c.d).unwrap().max_abs();
            worst = worst.max(m);
            r.check(m <= 1e-10, format!("instance {i}, pairs {:?}: |pi(D)| = {m:e}", c.pairs));
        }
    }
    r.note(format!(
        "50 instances, {g_invalid} invalid in the group algebra, {nonzero_d} nonzero corrections, largest |pi(D)| {worst:.1e}"
    ));
    r
}

fn criterion_8() -> Report {
    let mut r = Report::default();
    let limits = SearchLimits::default();
    let start = Instant::now();
    let f = fixtures::t4_13();
    let rep = Representation::new(f.graph.group(), RepKind::Identical).unwrap();
    // the only valid verdict for this instance
    let verdict = verify_piwqh(&f.graph, &f.partition, &rep, 1e-8).unwrap();
    match is_nontrivial(&f.graph, &f.partition, &verdict, &limits) {
        Ok(v) => r.check(
            matches!(v, IsoVerdict::NotIsomorphic(Disconfirmer::ComponentCount { .. })),
            format!("t4-13 verdict: {}", v.describe()),
        ),
        Err(e) => r.check(false, format!("t4-13: {e}")),
    }
    r.time_limit(start.elapsed(), Duration::from_secs(1));

    let group = cyclic(4);
    let z = group.element(1).unwrap();
    let g = GainGraph::new(&group, 5, [(0, 1, z), (0, 3, z)]).unwrap();
    let alpha = WQHPartition::new(5, vec![vec![0], vec![1, 2], vec![3, 4]]).unwrap();
    let verdict = verify_gwqh(&g, &alpha).unwrap();
    r.check(verdict.case(0, 0) == Some(CaseResolution::A), "instance resolves as case (a)");
    match is_nontrivial(&g, &alpha, &verdict, &limits) {
        Ok(IsoVerdict::Isomorphic(w)) => {
            let identity_switch = w.switching.values().iter().all(|x| x.is_identity());
            r.check(w.is_identity_perm() && identity_switch, "witness is the identity");
            r.check(w.holds(&g, &switch_graph(&g, &alpha, &verdict).unwrap()), "witness satisfies A2 = M* A1 M");
        }
        other => r.check(false, format!("case (a) instance: {other:?}")),
    }
    r
}

type Criterion = (&'static str, fn() -> Report);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("t4-13 switching in the group algebra", criterion_1),
        ("s4-17 switching under the permutation representation", criterion_2),
        ("exact switching-matrix algebra", criterion_3),
        ("block lemma property suite", criterion_4),
        ("walk-trace oracle equivalence", criterion_5),
        ("switching invariance", criterion_6),
        ("D-vanishing under the representation", criterion_7),
        ("nontriviality", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let report = run();
        let elapsed = start.elapsed();
        let status = if report.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {}: {status}: {name} ({elapsed:.2?})", i + 1);
        for f in report.failures.iter().take(10) {
            println!("    failed: {f}");
        }
        if report.failures.len() > 10 {
            println!("    ... {} more", report.failures.len() - 10);
        }
        for n in &report.notes {
            println!("    note: {n}");
        }
        if !report.failures.is_empty() {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
