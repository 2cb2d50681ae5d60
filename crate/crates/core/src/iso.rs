//! Switching isomorphism by explicit witness search.
//!
//! A witness is a bijection `phi` with a switching function `f` on the first
//! graph such that `gain2(phi v -> phi w) = f(v)^{-1} gain1(v -> w) f(w)`,
//! which is `A_2 = (P F)^* A_1 (P F)` with `P[v][phi v] = 1` and
//! `F = diag(f(phi^{-1} x))`. Invariants are compared first; the search then
//! maps vertices in breadth-first order per component, so `f` is forced by
//! the parent edge everywhere except at one anchor per component.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::GaMatrix;
use crate::cospectral::first_moment_difference;
use crate::graph::{GainGraph, SwitchingFunction};
use crate::group::{Element, Group};
use crate::search::{SearchError, SearchLimits};
use crate::switching::{switch_graph, PartitionVerdict, WQHPartition};

/// Closed-walk moments of the gain graphs compared before searching.
pub const GAIN_MOMENTS: usize = 4;

/// Why two graphs were found not switching isomorphic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Disconfirmer {
    VertexCount { left: usize, right: usize },
    ComponentCount { left: usize, right: usize },
    ComponentSizes,
    DegreeSequence,
    /// Closed walks of this length in the underlying graphs differ in number.
    UnderlyingWalks { length: usize },
    /// Conjugacy-class images of this trace power differ.
    GainMoment { length: usize },
    /// The exhaustive search found no witness.
    Exhausted,
}

impl fmt::Display for Disconfirmer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Disconfirmer::VertexCount { left, right } => write!(f, "vertex counts differ ({left} vs {right})"),
            Disconfirmer::ComponentCount { left, right } => {
                write!(f, "component counts differ ({left} vs {right})")
            }
            Disconfirmer::ComponentSizes => f.write_str("component sizes differ"),
            Disconfirmer::DegreeSequence => f.write_str("degree sequences differ"),
            Disconfirmer::UnderlyingWalks { length } => {
                write!(f, "underlying closed walks of length {length} differ")
            }
            Disconfirmer::GainMoment { length } => write!(f, "trace moments differ at power {length}"),
            Disconfirmer::Exhausted => f.write_str("no witness exists"),
        }
    }
}

/// The budget that stopped the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    /// The graphs exceed the vertex bound for exhaustive search.
    Vertices { n: usize, max: usize },
    /// The assignment budget ran out.
    Nodes(usize),
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Vertices { n, max } => write!(f, "{n} vertices exceeds the isomorphism budget of {max}"),
            Budget::Nodes(k) => write!(f, "search budget of {k} assignments exhausted"),
        }
    }
}

/// `phi` and `f` with `gain2(phi v -> phi w) = f(v)^{-1} gain1(v -> w) f(w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    /// `perm[v]` is the image of vertex `v` of the first graph.
    pub perm: Vec<usize>,
    /// Switching function on the vertices of the first graph.
    pub switching: SwitchingFunction,
}

impl IsoWitness {
    /// `M = P F` with `P[v][phi v] = 1` and `F = diag(f(phi^{-1} x))`.
    pub fn matrix(&self, group: &Arc<Group>) -> GaMatrix {
        let n = self.perm.len();
        let mut m = GaMatrix::zeros(group, n, n);
        for (v, &x) in self.perm.iter().enumerate() {
            let one = crate::algebra::GroupAlgebraElement::from_element(group, self.switching.value(v));
            m.set(v, x, one).expect("same group");
        }
        m
    }

    /// `A_2 = M^* A_1 M`, evaluated exactly.
    pub fn holds(&self, g1: &GainGraph, g2: &GainGraph) -> bool {
        let n = g1.vertex_count();
        if self.perm.len() != n || g2.vertex_count() != n || self.switching.values().len() != n {
            return false;
        }
        let m = self.matrix(g1.group());
        let Ok(lhs) = m.star().mul(&g1.adjacency()).and_then(|x| x.mul(&m)) else { return false };
        lhs == g2.adjacency()
    }

    pub fn is_identity_perm(&self) -> bool {
        self.perm.iter().enumerate().all(|(v, &x)| v == x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoVerdict {
    Isomorphic(IsoWitness),
    NotIsomorphic(Disconfirmer),
    Inconclusive(Budget),
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }

    pub fn is_not_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::NotIsomorphic(_))
    }

    pub fn witness(&self) -> Option<&IsoWitness> {
        match self {
            IsoVerdict::Isomorphic(w) => Some(w),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            IsoVerdict::Isomorphic(_) => String::from("switching isomorphic"),
            IsoVerdict::NotIsomorphic(d) => alloc::format!("not switching isomorphic: {d}"),
            IsoVerdict::Inconclusive(b) => alloc::format!("inconclusive: {b}"),
        }
    }
}

fn component_sizes(g: &GainGraph) -> Vec<usize> {
    let mut s: Vec<usize> = g.components().iter().map(Vec::len).collect();
    s.sort_unstable();
    s
}

fn sorted_degrees(g: &GainGraph) -> Vec<usize> {
    let mut d = g.degree_sequence();
    d.sort_unstable();
    d
}

/// Number of closed walks of each length `1..=h` in the underlying graph.
fn walk_counts(g: &GainGraph, h: usize) -> Vec<u128> {
    let n = g.vertex_count();
    let mut out = Vec::with_capacity(h);
    // rows of U^k, kept as walk counts from every start vertex
    let mut cur: Vec<Vec<u128>> = (0..n).map(|v| (0..n).map(|w| u128::from(v == w)).collect()).collect();
    for _ in 0..h {
        let next: Vec<Vec<u128>> = cur
            .iter()
            .map(|row| {
                (0..n)
                    .map(|w| g.neighbors(w).iter().fold(0u128, |acc, &u| acc.saturating_add(row[u])))
                    .collect()
            })
            .collect();
        out.push((0..n).fold(0u128, |acc, v| acc.saturating_add(next[v][v])));
        cur = next;
    }
    out
}

/// Invariant that separates the two graphs, if any is found.
pub fn disconfirm(g1: &GainGraph, g2: &GainGraph) -> Option<Disconfirmer> {
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    if n1 != n2 {
        return Some(Disconfirmer::VertexCount { left: n1, right: n2 });
    }
    let (c1, c2) = (component_sizes(g1), component_sizes(g2));
    if c1.len() != c2.len() {
        return Some(Disconfirmer::ComponentCount { left: c1.len(), right: c2.len() });
    }
    if c1 != c2 {
        return Some(Disconfirmer::ComponentSizes);
    }
    if sorted_degrees(g1) != sorted_degrees(g2) {
        return Some(Disconfirmer::DegreeSequence);
    }
    let (w1, w2) = (walk_counts(g1, n1), walk_counts(g2, n2));
    if let Some(k) = w1.iter().zip(&w2).position(|(a, b)| a != b) {
        return Some(Disconfirmer::UnderlyingWalks { length: k + 1 });
    }
    match first_moment_difference(g1, g2, GAIN_MOMENTS.min(n1.max(1))) {
        Ok(Some(h)) => Some(Disconfirmer::GainMoment { length: h }),
        _ => None,
    }
}

/// Decides whether `g2` is obtained from `g1` by relabelling and switching.
pub fn switching_isomorphic(
    g1: &GainGraph,
    g2: &GainGraph,
    limits: &SearchLimits,
) -> Result<IsoVerdict, SearchError> {
    limits.validate()?;
    if !crate::algebra::same_group(g1.group(), g2.group()) {
        return Err(SearchError::GroupMismatch);
    }
    if let Some(d) = disconfirm(g1, g2) {
        return Ok(IsoVerdict::NotIsomorphic(d));
    }
    let n = g1.vertex_count();
    let max = limits.iso_budget(g1.group().order());
    let mut s = WitnessSearch::new(g1, g2, limits.iso_nodes);
    // the identity relabelling costs one propagation per anchor value, so it
    // is tried at any size; the vertex budget bounds the search over bijections
    s.identity_only = true;
    let found = match s.extend(0) {
        Some(true) => Some(true),
        None => None,
        Some(false) if n > max => return Ok(IsoVerdict::Inconclusive(Budget::Vertices { n, max })),
        Some(false) => {
            s.identity_only = false;
            s.extend(0)
        }
    };
    Ok(match found {
        Some(true) => {
            let w = IsoWitness {
                perm: s.phi.iter().map(|p| p.expect("complete assignment")).collect(),
                switching: SwitchingFunction::new(g1.group(), s.f.clone()).expect("group elements"),
            };
            debug_assert!(w.holds(g1, g2));
            IsoVerdict::Isomorphic(w)
        }
        Some(false) => IsoVerdict::NotIsomorphic(Disconfirmer::Exhausted),
        None => IsoVerdict::Inconclusive(Budget::Nodes(limits.iso_nodes)),
    })
}

/// Compares a graph with its switched graph under a valid verdict.
pub fn is_nontrivial(
    g: &GainGraph,
    alpha: &WQHPartition,
    verdict: &PartitionVerdict,
    limits: &SearchLimits,
) -> Result<IsoVerdict, SearchError> {
    let switched = switch_graph(g, alpha, verdict)?;
    switching_isomorphic(g, &switched, limits)
}

struct WitnessSearch<'a> {
    g1: &'a GainGraph,
    g2: &'a GainGraph,
    group: &'a Group,
    /// Vertices of `g1` in breadth-first order with their tree parent.
    order: Vec<(usize, Option<usize>)>,
    comp1: Vec<usize>,
    comp2: Vec<usize>,
    phi: Vec<Option<usize>>,
    used: Vec<bool>,
    f: Vec<Element>,
    nodes: usize,
    budget: usize,
    identity_only: bool,
}

fn component_size_of(g: &GainGraph) -> Vec<usize> {
    let mut out = vec![0; g.vertex_count()];
    for c in g.components() {
        for &v in &c {
            out[v] = c.len();
        }
    }
    out
}

impl<'a> WitnessSearch<'a> {
    fn new(g1: &'a GainGraph, g2: &'a GainGraph, budget: usize) -> Self {
        let n = g1.vertex_count();
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for c in g1.components() {
            let root = c[0];
            seen[root] = true;
            let mut queue = VecDeque::from([(root, None)]);
            while let Some((v, parent)) = queue.pop_front() {
                order.push((v, parent));
                for &w in g1.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back((w, Some(v)));
                    }
                }
            }
        }
        WitnessSearch {
            g1,
            g2,
            group: g1.group(),
            order,
            comp1: component_size_of(g1),
            comp2: component_size_of(g2),
            phi: vec![None; n],
            used: vec![false; n],
            f: vec![Element::IDENTITY; n],
            nodes: 0,
            budget,
            identity_only: false,
        }
    }

    fn candidates(&self, v: usize, parent: Option<usize>) -> Vec<usize> {
        let n = self.g1.vertex_count();
        let pool: Vec<usize> = match parent {
            Some(p) => self.g2.neighbors(self.phi[p].expect("parent mapped")).to_vec(),
            None => (0..n).collect(),
        };
        let fits = |x: usize| {
            (!self.identity_only || x == v)
                && !self.used[x] && self.g2.degree(x) == self.g1.degree(v) && self.comp2[x] == self.comp1[v]
        };
        // the vertex itself first, so an identity relabelling is found first
        let mut out: Vec<usize> = pool.iter().copied().filter(|&x| x == v && fits(x)).collect();
        out.extend(pool.iter().copied().filter(|&x| x != v && fits(x)));
        out
    }

    /// Edges from `v` to mapped vertices agree with those from `x`, under `fv`.
    fn consistent(&self, v: usize, x: usize, fv: Element) -> bool {
        let g = self.group;
        let mut mapped1 = 0;
        for &u in self.g1.neighbors(v) {
            let Some(y) = self.phi[u] else { continue };
            mapped1 += 1;
            let Some(got) = self.g2.gain(x, y) else { return false };
            let want = g.op(g.op(g.inverse(fv), self.g1.gain(v, u).expect("edge")), self.f[u]);
            if got != want {
                return false;
            }
        }
        let mapped2 = self.g2.neighbors(x).iter().filter(|&&y| self.used[y]).count();
        mapped1 == mapped2
    }

    /// `Some(found)`, or `None` when the budget runs out.
    fn extend(&mut self, i: usize) -> Option<bool> {
        if i == self.order.len() {
            return Some(true);
        }
        let (v, parent) = self.order[i];
        for x in self.candidates(v, parent) {
            let values: Vec<Element> = match parent {
                Some(p) => {
                    let g = self.group;
                    let forced = g.op(
                        g.op(g.inverse(self.g1.gain(p, v).expect("tree edge")), self.f[p]),
                        self.g2.gain(self.phi[p].expect("parent mapped"), x).expect("candidate is a neighbour"),
                    );
                    vec![forced]
                }
                None if self.g1.degree(v) == 0 => vec![Element::IDENTITY],
                None => self.group.elements().collect(),
            };
            for fv in values {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return None;
                }
                if !self.consistent(v, x, fv) {
                    continue;
                }
                self.phi[v] = Some(x);
                self.used[x] = true;
                self.f[v] = fv;
                let r = self.extend(i + 1);
                if r != Some(false) {
                    return r;
                }
                self.phi[v] = None;
                self.used[x] = false;
                self.f[v] = Element::IDENTITY;
            }
        }
        Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::represent::{RepKind, Representation};
    use crate::switching::{verify_gwqh, verify_piwqh};
    use proptest::prelude::*;

    fn c4() -> Arc<Group> {
        Arc::new(Group::cyclic(4).unwrap())
    }

    fn s3() -> Arc<Group> {
        Arc::new(Group::symmetric(3).unwrap())
    }

    #[test]
    fn t4_13_is_nontrivial_by_component_count() {
        let f = fixtures::t4_13();
        let rep = Representation::new(f.graph.group(), RepKind::Identical).unwrap();
        let verdict = verify_piwqh(&f.graph, &f.partition, &rep, 1e-9).unwrap();
        let out = is_nontrivial(&f.graph, &f.partition, &verdict, &SearchLimits::default()).unwrap();
        assert_eq!(out, IsoVerdict::NotIsomorphic(Disconfirmer::ComponentCount { left: 4, right: 6 }));
    }

    #[test]
    fn s4_17_is_nontrivial() {
        let f = fixtures::s4_17();
        let rep = Representation::new(f.graph.group(), RepKind::Permutation).unwrap();
        let verdict = verify_piwqh(&f.graph, &f.partition, &rep, 1e-9).unwrap();
        let out = is_nontrivial(&f.graph, &f.partition, &verdict, &SearchLimits::default()).unwrap();
        assert_eq!(out, IsoVerdict::NotIsomorphic(Disconfirmer::GainMoment { length: 3 }));
    }

    #[test]
    fn single_edges_with_any_gains_are_isomorphic() {
        for grp in [c4(), s3()] {
            for g in grp.elements() {
                for h in grp.elements() {
                    let a = GainGraph::new(&grp, 2, [(0, 1, g)]).unwrap();
                    let b = GainGraph::new(&grp, 2, [(0, 1, h)]).unwrap();
                    let out = switching_isomorphic(&a, &b, &SearchLimits::default()).unwrap();
                    assert!(out.witness().unwrap().holds(&a, &b));
                }
            }
        }
    }

    #[test]
    fn balanced_and_unbalanced_triangles_differ() {
        let grp = s3();
        let e = grp.identity();
        let t = grp.element_by_label("(12)").unwrap();
        let a = GainGraph::new(&grp, 3, [(0, 1, e), (1, 2, e), (2, 0, e)]).unwrap();
        let b = GainGraph::new(&grp, 3, [(0, 1, e), (1, 2, e), (2, 0, t)]).unwrap();
        let out = switching_isomorphic(&a, &b, &SearchLimits::default()).unwrap();
        assert_eq!(out, IsoVerdict::NotIsomorphic(Disconfirmer::GainMoment { length: 3 }));
    }

    #[test]
    fn conjugate_cycle_products_are_switching_equivalent() {
        // 4-cycles with conjugate gain products (12) and (13) are switching equivalent
        let grp = s3();
        let l = |s: &str| grp.element_by_label(s).unwrap();
        let a = GainGraph::new(&grp, 4, [(0, 1, l("(12)")), (1, 2, l("e")), (2, 3, l("e")), (3, 0, l("e"))]).unwrap();
        let b = GainGraph::new(&grp, 4, [(0, 1, l("(13)")), (1, 2, l("e")), (2, 3, l("e")), (3, 0, l("e"))]).unwrap();
        let out = switching_isomorphic(&a, &b, &SearchLimits::default()).unwrap();
        assert!(out.witness().unwrap().holds(&a, &b));
    }

    #[test]
    fn exhaustive_search_separates_long_cycles() {
        // 5-cycles over T_5 with products z and z^2 agree on moments up to 4
        let grp = Arc::new(Group::cyclic(5).unwrap());
        let z = |j| grp.element(j).unwrap();
        let cycle = |k| GainGraph::new(&grp, 5, (0..5).map(|v| (v, (v + 1) % 5, z(if v == 0 { k } else { 0 })))).unwrap();
        let out = switching_isomorphic(&cycle(1), &cycle(2), &SearchLimits::default()).unwrap();
        assert_eq!(out, IsoVerdict::NotIsomorphic(Disconfirmer::Exhausted));
        let out = switching_isomorphic(&cycle(1), &cycle(4), &SearchLimits::default()).unwrap();
        assert!(out.witness().unwrap().holds(&cycle(1), &cycle(4)));
    }

    #[test]
    fn budgets_are_reported() {
        let grp = s3();
        let path = GainGraph::new(&grp, 7, (0..6).map(|v| (v, v + 1, grp.identity()))).unwrap();
        let moved = path.relabel(&[3, 1, 2, 0, 4, 5, 6]);
        let out = switching_isomorphic(&path, &moved, &SearchLimits::default()).unwrap();
        assert_eq!(out, IsoVerdict::Inconclusive(Budget::Vertices { n: 7, max: 6 }));
        // the identity relabelling is still tried above the vertex budget
        let out = switching_isomorphic(&path, &path, &SearchLimits::default()).unwrap();
        assert!(out.witness().unwrap().is_identity_perm());
        let wide = SearchLimits { iso_max_vertices: Some(7), ..SearchLimits::default() };
        let out = switching_isomorphic(&path, &moved, &wide).unwrap();
        assert!(out.witness().unwrap().holds(&path, &moved));
        let ring: Vec<_> = (0..6).map(|v| (v, (v + 1) % 6, grp.identity())).collect();
        let g = GainGraph::new(&grp, 6, ring).unwrap();
        let tight = SearchLimits { iso_nodes: 2, ..SearchLimits::default() };
        let out = switching_isomorphic(&g, &g, &tight).unwrap();
        assert_eq!(out, IsoVerdict::Inconclusive(Budget::Nodes(2)));
    }

    #[test]
    fn all_case_a_partition_is_trivial() {
        // C_0 = {0} meets the pair in equal non-constant sums, so the switch changes nothing
        let grp = c4();
        let z = |j| grp.element(j).unwrap();
        let g = GainGraph::new(&grp, 5, [(0, 1, z(1)), (0, 3, z(1))]).unwrap();
        let alpha = WQHPartition::new(5, vec![vec![0], vec![1, 2], vec![3, 4]]).unwrap();
        let verdict = verify_gwqh(&g, &alpha).unwrap();
        assert!(verdict.is_valid());
        assert_eq!(verdict.case(0, 0), Some(crate::switching::CaseResolution::A));
        let out = is_nontrivial(&g, &alpha, &verdict, &SearchLimits::default()).unwrap();
        let w = out.witness().unwrap();
        assert!(w.is_identity_perm());
        assert!(w.switching.values().iter().all(|x| x.is_identity()));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = (bool, usize, Vec<(usize, usize, usize)>)> {
        (any::<bool>(), 1..=max_n).prop_flat_map(|(sym, n)| {
            let order: usize = if sym { 6 } else { 4 };
            let edges = proptest::collection::vec((0..n, 0..n, 0..order), 0..=2 * n);
            (Just(sym), Just(n), edges)
        })
    }

    fn build(sym: bool, n: usize, edges: &[(usize, usize, usize)]) -> GainGraph {
        let grp = if sym { s3() } else { c4() };
        let mut seen = alloc::collections::BTreeSet::new();
        let es: Vec<_> = edges
            .iter()
            .filter(|&&(u, v, _)| u != v && seen.insert((u.min(v), u.max(v))))
            .map(|&(u, v, k)| (u, v, grp.element(k % grp.order()).unwrap()))
            .collect();
        GainGraph::new(&grp, n, es).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn switched_copy_has_identity_witness(
            (sym, n, edges) in arb_graph(6),
            fs in proptest::collection::vec(0usize..6, 6),
        ) {
            let g = build(sym, n, &edges);
            let grp = g.group().clone();
            let f = SwitchingFunction::new(&grp, fs[..n].iter().map(|&k| grp.element(k % grp.order()).unwrap()).collect()).unwrap();
            let h = g.apply_switching(&f).unwrap();
            let out = switching_isomorphic(&g, &h, &SearchLimits::default()).unwrap();
            let w = out.witness().expect("isomorphic");
            prop_assert!(w.is_identity_perm());
            prop_assert!(w.holds(&g, &h));
        }

        #[test]
        fn relabelled_switched_copy_is_found_and_symmetric(
            (sym, n, edges) in arb_graph(5),
            fs in proptest::collection::vec(0usize..6, 5),
            perm_seed in proptest::collection::vec(any::<u32>(), 5),
        ) {
            let g = build(sym, n, &edges);
            let grp = g.group().clone();
            let f = SwitchingFunction::new(&grp, fs[..n].iter().map(|&k| grp.element(k % grp.order()).unwrap()).collect()).unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.sort_by_key(|&v| perm_seed[v]);
            let h = g.apply_switching(&f).unwrap().relabel(&perm);
            let limits = SearchLimits::default();
            let fwd = switching_isomorphic(&g, &h, &limits).unwrap();
            let back = switching_isomorphic(&h, &g, &limits).unwrap();
            prop_assert!(fwd.witness().expect("isomorphic").holds(&g, &h));
            prop_assert!(back.witness().expect("isomorphic").holds(&h, &g));
        }

        #[test]
        fn verdicts_are_symmetric_and_reflexive(a in arb_graph(4), b in arb_graph(4)) {
            let g1 = build(a.0, a.1, &a.2);
            let g2 = build(a.0, b.1, &b.2);
            let limits = SearchLimits::default();
            let refl = switching_isomorphic(&g1, &g1, &limits).unwrap();
            prop_assert!(refl.witness().expect("reflexive").holds(&g1, &g1));
            let fwd = switching_isomorphic(&g1, &g2, &limits).unwrap();
            let back = switching_isomorphic(&g2, &g1, &limits).unwrap();
            prop_assert_eq!(fwd.is_isomorphic(), back.is_isomorphic());
            prop_assert_eq!(fwd.is_not_isomorphic(), back.is_not_isomorphic());
            if let Some(w) = fwd.witness() {
                prop_assert!(w.holds(&g1, &g2));
            }
        }
    }
}
