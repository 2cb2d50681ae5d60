//! Random gain graphs with a WQH partition by construction.
//!
//! Vertices are laid out as `C_0`, then the two cells of each pair. Each
//! block between cells is empty, constant, or circulant, so its row sums and
//! column sums are constant; the block a condition compares it with gets the
//! same gain multiset (or, in represented mode, one with the same image).
//! Blocks between the two cells of one pair use gain multisets whose sum is
//! self-adjoint. Each `C_0` vertex meets each pair in case (a) (equal
//! multisets on both cells) or case (b) (a constant gain or nothing on each
//! cell). Labels are shuffled at the end.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::GroupAlgebraElement;
use crate::graph::GainGraph;
use crate::group::{Element, Group};
use crate::represent::Representation;
use crate::switching::{Comparator, WQHPartition};

/// Random draws per block when looking for a multiset with a matching image.
pub const PARTNER_ATTEMPTS: usize = 64;

/// Cell sizes of a generated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceShape {
    pub n0: usize,
    /// Size of both cells of each pair; all at least 1.
    pub pair_sizes: Vec<usize>,
}

impl InstanceShape {
    /// One `C_0` vertex and one pair of singletons.
    pub fn minimal() -> Self {
        InstanceShape { n0: 1, pair_sizes: vec![1] }
    }

    /// `n0 <= max_n0`, between 1 and `max_pairs` pairs, cell sizes in `1..=max_size`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_n0: usize, max_pairs: usize, max_size: usize) -> Self {
        let n0 = rng.gen_range(0..=max_n0);
        let k = rng.gen_range(1..=max_pairs.max(1));
        let pair_sizes = (0..k).map(|_| rng.gen_range(1..=max_size.max(1))).collect();
        InstanceShape { n0, pair_sizes }
    }

    pub fn vertex_count(&self) -> usize {
        self.n0 + 2 * self.pair_sizes.iter().sum::<usize>()
    }
}

/// An instance whose partition passes the group-algebra check.
pub fn random_wqh_instance(group: &Arc<Group>, shape: &InstanceShape, seed: u64) -> (GainGraph, WQHPartition) {
    Builder::new(group, None, seed).build(shape)
}

/// An instance whose partition passes the check under `rep` at `tol`; blocks
/// differ in the group algebra wherever a random draw found a multiset with
/// the same image.
pub fn random_piwqh_instance(
    rep: &Representation,
    shape: &InstanceShape,
    seed: u64,
    tol: f64,
) -> (GainGraph, WQHPartition) {
    Builder::new(rep.group(), Some((rep, tol)), seed).build(shape)
}

struct Builder<'a> {
    group: &'a Arc<Group>,
    cmp: Comparator<'a>,
    rng: ChaCha8Rng,
    edges: Vec<(usize, usize, Element)>,
}

impl<'a> Builder<'a> {
    fn new(group: &'a Arc<Group>, rep: Option<(&'a Representation, f64)>, seed: u64) -> Self {
        Builder { group, cmp: Comparator { rep }, rng: ChaCha8Rng::seed_from_u64(seed), edges: Vec::new() }
    }

    fn elem(&mut self) -> Element {
        Element::from_index(self.rng.gen_range(0..self.group.order()))
    }

    fn involution(&mut self) -> Element {
        let g = &**self.group;
        let inv: Vec<Element> = g.elements().filter(|&x| g.op(x, x).is_identity()).collect();
        *inv.choose(&mut self.rng).expect("identity is an involution")
    }

    fn multiset(&mut self, len: usize) -> Vec<Element> {
        (0..len).map(|_| self.elem()).collect()
    }

    fn inverses(&self, m: &[Element]) -> Vec<Element> {
        m.iter().map(|&x| self.group.inverse(x)).collect()
    }

    fn same(&self, x: &[Element], y: &[Element]) -> bool {
        let sum = |m: &[Element]| GroupAlgebraElement::sum_of(self.group, m.iter().copied());
        self.cmp.same(&sum(x), &sum(y)).unwrap_or(false)
    }

    /// A multiset of the same length with the same image; `m` itself in group mode.
    fn partner(&mut self, m: &[Element]) -> Vec<Element> {
        if self.cmp.rep.is_some() {
            for _ in 0..PARTNER_ATTEMPTS {
                let cand = self.multiset(m.len());
                if self.same(&cand, m) {
                    return cand;
                }
            }
        }
        m.to_vec()
    }

    /// Multiset whose sum equals the sum of its inverses, up to the representation.
    fn self_adjoint(&mut self, len: usize) -> Vec<Element> {
        if self.cmp.rep.is_some() {
            for _ in 0..PARTNER_ATTEMPTS {
                let cand = self.multiset(len);
                if self.same(&cand, &self.inverses(&cand)) {
                    return cand;
                }
            }
        }
        let mut out = Vec::with_capacity(len);
        while out.len() < len {
            let x = if len - out.len() == 1 { self.involution() } else { self.elem() };
            let inv = self.group.inverse(x);
            out.push(x);
            if inv != x {
                out.push(inv);
            }
        }
        out
    }

    fn distinct(&mut self, range: usize, count: usize) -> Vec<usize> {
        let mut all: Vec<usize> = (0..range).collect();
        all.shuffle(&mut self.rng);
        all.truncate(count);
        all
    }

    /// Arcs `x[i] -> y[(i + shift) % s]` for each shift with its gain.
    fn circulant(&mut self, x: &[usize], y: &[usize], shifts: &[usize], gains: &[Element]) {
        let s = y.len();
        for (&d, &g) in shifts.iter().zip(gains) {
            for (i, &u) in x.iter().enumerate() {
                self.edges.push((u, y[(i + d) % s], g));
            }
        }
    }

    fn full(&mut self, x: &[usize], y: &[usize], g: Element) {
        for &u in x {
            for &w in y {
                self.edges.push((u, w, g));
            }
        }
    }

    /// Blocks `x1 -> y1` and `x2 -> y2` with equal constant row sums and equal
    /// constant column sums.
    fn mirrored(&mut self, (x1, y1): (&[usize], &[usize]), (x2, y2): (&[usize], &[usize])) {
        let square = x1.len() == y1.len();
        match self.rng.gen_range(0..3) {
            0 => {}
            2 if square => {
                let s = y1.len();
                let m = self.rng.gen_range(1..=s);
                let gains = self.multiset(m);
                let other = self.partner(&gains);
                let d1 = self.distinct(s, m);
                let d2 = self.distinct(s, m);
                self.circulant(x1, y1, &d1, &gains);
                self.circulant(x2, y2, &d2, &other);
            }
            _ => {
                let g = self.elem();
                let h = self.partner(&[g])[0];
                self.full(x1, y1, g);
                self.full(x2, y2, h);
            }
        }
    }

    /// Symmetric circulant inside a cell: shifts below half with any gain,
    /// the half shift with an involution.
    fn cell_gains(&mut self, s: usize, shifts: &[usize]) -> Vec<Element> {
        shifts.iter().map(|&d| if 2 * d == s { self.involution() } else { self.elem() }).collect()
    }

    fn cell_sum(&self, s: usize, shifts: &[usize], gains: &[Element]) -> Vec<Element> {
        let mut out = Vec::new();
        for (&d, &g) in shifts.iter().zip(gains) {
            out.push(g);
            if 2 * d != s {
                out.push(self.group.inverse(g));
            }
        }
        out
    }

    fn cell_circulant(&mut self, x: &[usize], shifts: &[usize], gains: &[Element]) {
        let s = x.len();
        for (&d, &g) in shifts.iter().zip(gains) {
            let reach = if 2 * d == s { s / 2 } else { s };
            for i in 0..reach {
                self.edges.push((x[i], x[(i + d) % s], g));
            }
        }
    }

    fn within_pair(&mut self, a: &[usize], b: &[usize]) {
        let s = a.len();
        let shifts: Vec<usize> = (1..=s / 2).filter(|_| self.rng.gen_bool(0.5)).collect();
        let ga = self.cell_gains(s, &shifts);
        let want = self.cell_sum(s, &shifts, &ga);
        let mut gb = ga.clone();
        if self.cmp.rep.is_some() {
            for _ in 0..PARTNER_ATTEMPTS {
                let cand = self.cell_gains(s, &shifts);
                if self.same(&self.cell_sum(s, &shifts, &cand), &want) {
                    gb = cand;
                    break;
                }
            }
        }
        self.cell_circulant(a, &shifts, &ga);
        self.cell_circulant(b, &shifts, &gb);
        let m = self.rng.gen_range(0..=s);
        let gains = self.self_adjoint(m);
        let d = self.distinct(s, m);
        self.circulant(a, b, &d, &gains);
    }

    fn c0_to_pair(&mut self, v: usize, a: &[usize], b: &[usize]) {
        let s = a.len();
        if self.rng.gen_bool(0.5) {
            let m = self.rng.gen_range(0..=s);
            let gains = self.multiset(m);
            for cell in [a, b] {
                let at = self.distinct(s, m);
                for (&i, &g) in at.iter().zip(&gains) {
                    self.edges.push((v, cell[i], g));
                }
            }
        } else {
            for cell in [a, b] {
                if self.rng.gen_bool(0.75) {
                    let g = self.elem();
                    self.full(&[v], cell, g);
                }
            }
        }
    }

    fn build(mut self, shape: &InstanceShape) -> (GainGraph, WQHPartition) {
        let n = shape.vertex_count();
        let c0: Vec<usize> = (0..shape.n0).collect();
        let mut pairs: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let mut next = shape.n0;
        for &s in &shape.pair_sizes {
            let a: Vec<usize> = (next..next + s).collect();
            let b: Vec<usize> = (next + s..next + 2 * s).collect();
            next += 2 * s;
            pairs.push((a, b));
        }
        for (i, &u) in c0.iter().enumerate() {
            for &w in &c0[i + 1..] {
                if self.rng.gen_bool(0.4) {
                    let g = self.elem();
                    self.edges.push((u, w, g));
                }
            }
        }
        for (p, (a, b)) in pairs.iter().enumerate() {
            self.within_pair(a, b);
            for (c, d) in &pairs[p + 1..] {
                self.mirrored((a, c), (b, d));
                self.mirrored((a, d), (b, c));
            }
            for &v in &c0 {
                self.c0_to_pair(v, a, b);
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut self.rng);
        let edges = self.edges.iter().map(|&(u, w, g)| (perm[u], perm[w], g));
        let graph = GainGraph::new(self.group, n, edges).expect("generated edges are distinct");
        let mut cells = vec![c0.iter().map(|&v| perm[v]).collect::<Vec<_>>()];
        for (a, b) in &pairs {
            cells.push(a.iter().map(|&v| perm[v]).collect());
            cells.push(b.iter().map(|&v| perm[v]).collect());
        }
        let partition = WQHPartition::new(n, cells).expect("generated cells partition the vertices");
        (graph, partition)
    }
}
