//! Gain graphs: undirected graphs whose arcs carry group elements with
//! `gain(v, u) = gain(u, v)^{-1}`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::algebra::{GaMatrix, GroupAlgebraElement};
use crate::group::{Element, Group, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {{{u}, {v}}} given twice with conflicting gains")]
    ConflictingGain { u: usize, v: usize },
    #[error("gain on edge {{{u}, {v}}}: {source}")]
    Gain { u: usize, v: usize, source: GroupError },
    #[error("adjacency entry ({i}, {j}) is not zero or a single group element")]
    NotAGain { i: usize, j: usize },
    #[error("adjacency entries ({i}, {j}) and ({j}, {i}) violate the inverse law")]
    NotSelfAdjoint { i: usize, j: usize },
    #[error("switching function has {got} values for {n} vertices")]
    SwitchingSize { got: usize, n: usize },
    #[error("graphs are over different groups")]
    GroupMismatch,
}

/// A gain graph over a finite group. Gains are stored once per edge on the
/// orientation `u < v`; the reverse orientation is derived.
#[derive(Debug, Clone)]
pub struct GainGraph {
    group: Arc<Group>,
    n: usize,
    gains: BTreeMap<(usize, usize), Element>,
    neighbors: Vec<Vec<usize>>,
}

impl GainGraph {
    pub fn edgeless(group: &Arc<Group>, n: usize) -> Self {
        GainGraph { group: group.clone(), n, gains: BTreeMap::new(), neighbors: vec![Vec::new(); n] }
    }

    /// Builds a graph from `(u, v, gain of the arc u -> v)` triples.
    pub fn new<I>(group: &Arc<Group>, n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Element)>,
    {
        let mut graph = GainGraph::edgeless(group, n);
        for (u, v, g) in edges {
            graph.insert(u, v, g)?;
        }
        Ok(graph)
    }

    fn insert(&mut self, u: usize, v: usize, g: Element) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        self.group.element(g.index()).map_err(|source| GraphError::Gain { u, v, source })?;
        let (key, canonical) = if u < v { ((u, v), g) } else { ((v, u), self.group.inverse(g)) };
        match self.gains.get(&key) {
            Some(&existing) if existing != canonical => {
                return Err(GraphError::ConflictingGain { u: key.0, v: key.1 })
            }
            Some(_) => {}
            None => {
                self.gains.insert(key, canonical);
                for (a, b) in [(u, v), (v, u)] {
                    let list = &mut self.neighbors[a];
                    let pos = list.binary_search(&b).unwrap_err();
                    list.insert(pos, b);
                }
            }
        }
        Ok(())
    }

    /// Reads a graph back from an adjacency matrix whose entries are `0` or `1 * g`.
    pub fn from_adjacency(a: &GaMatrix) -> Result<Self, GraphError> {
        let n = a.rows();
        let group = a.group();
        let mut edges = Vec::new();
        for i in 0..n {
            if !a.is_zero_entry(i, i) {
                return Err(GraphError::Loop(i));
            }
            for j in (i + 1)..n {
                let x = a.get(i, j);
                let y = a.get(j, i);
                let gain = |x: &GroupAlgebraElement, r, c| match x.as_single_term() {
                    Some((coef, e)) if coef.is_one() => Ok(Some(e)),
                    None if x.is_zero() => Ok(None),
                    _ => Err(GraphError::NotAGain { i: r, j: c }),
                };
                match (gain(&x, i, j)?, gain(&y, j, i)?) {
                    (None, None) => {}
                    (Some(g), Some(h)) if group.inverse(g) == h => edges.push((i, j, g)),
                    _ => return Err(GraphError::NotSelfAdjoint { i, j }),
                }
            }
        }
        GainGraph::new(group, n, edges)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.gains.len()
    }

    /// Gain of the arc `u -> v`, if adjacent.
    pub fn gain(&self, u: usize, v: usize) -> Option<Element> {
        if u < v {
            self.gains.get(&(u, v)).copied()
        } else {
            self.gains.get(&(v, u)).map(|&g| self.group.inverse(g))
        }
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        self.gains.contains_key(&key)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// Edges as `(u, v, gain(u -> v))` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Element)> + '_ {
        self.gains.iter().map(|(&(u, v), &g)| (u, v, g))
    }

    /// `A[i][j] = 1 * gain(i -> j)` for adjacent pairs, zero elsewhere.
    pub fn adjacency(&self) -> GaMatrix {
        let mut a = GaMatrix::zeros(&self.group, self.n, self.n);
        for (u, v, g) in self.edges() {
            a.set_raw(u, v, vec![(g, crate::scalar::Scalar::one())]);
            a.set_raw(v, u, vec![(self.group.inverse(g), crate::scalar::Scalar::one())]);
        }
        a
    }

    /// New gains `f(v)^{-1} gain(v -> w) f(w)` on the same underlying graph.
    pub fn apply_switching(&self, f: &SwitchingFunction) -> Result<Self, GraphError> {
        if f.values.len() != self.n {
            return Err(GraphError::SwitchingSize { got: f.values.len(), n: self.n });
        }
        let g = &*self.group;
        let gains = self
            .gains
            .iter()
            .map(|(&(u, v), &x)| ((u, v), g.op(g.op(g.inverse(f.values[u]), x), f.values[v])))
            .collect();
        Ok(GainGraph { gains, ..self.clone() })
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let edges = self.edges().map(|(u, v, g)| (perm[u], perm[v], g));
        GainGraph::new(&self.group, self.n, edges).expect("relabelling by a permutation")
    }

    /// `Psi(v, cell)`: sum of the gains `v -> w` over neighbours `w` of `v` inside `cell`.
    pub fn psi(&self, v: usize, cell: &[usize]) -> GroupAlgebraElement {
        GroupAlgebraElement::sum_of(&self.group, cell.iter().filter_map(|&w| self.gain(v, w)))
    }

    /// `Psi(v, a) + Psi(v, b)`.
    pub fn psi_pair(&self, v: usize, a: &[usize], b: &[usize]) -> GroupAlgebraElement {
        GroupAlgebraElement::sum_of(
            &self.group,
            a.iter().chain(b).filter_map(|&w| self.gain(v, w)),
        )
    }

    /// Connected components of the underlying graph, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                k += 1;
                for &w in &self.neighbors[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Sorted vertex degrees of the underlying graph.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// Same vertex count, group and edge set with identical gains.
    pub fn same_as(&self, other: &GainGraph) -> bool {
        crate::algebra::same_group(&self.group, &other.group)
            && self.n == other.n
            && self.gains == other.gains
    }
}

impl PartialEq for GainGraph {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for GainGraph {}

/// A map `f: V -> G` used to switch gains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingFunction {
    values: Vec<Element>,
}

impl SwitchingFunction {
    pub fn new(group: &Group, values: Vec<Element>) -> Result<Self, GroupError> {
        for v in &values {
            group.element(v.index())?;
        }
        Ok(SwitchingFunction { values })
    }

    /// `f(v) = 1_G` everywhere.
    pub fn identity(n: usize) -> Self {
        SwitchingFunction { values: vec![Element::IDENTITY; n] }
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    pub fn value(&self, v: usize) -> Element {
        self.values[v]
    }

    /// Pointwise product `v -> self(v) * other(v)`: switching by `self`, then `other`.
    pub fn then(&self, group: &Group, other: &SwitchingFunction) -> SwitchingFunction {
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| group.op(a, b)).collect();
        SwitchingFunction { values }
    }

    /// The diagonal matrix `F = diag(f(v))`.
    pub fn matrix(&self, group: &Arc<Group>) -> GaMatrix {
        let n = self.values.len();
        let mut f = GaMatrix::zeros(group, n, n);
        for (v, &x) in self.values.iter().enumerate() {
            f.set_raw(v, v, vec![(x, crate::scalar::Scalar::one())]);
        }
        f
    }
}
