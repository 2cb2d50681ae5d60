//! Enumeration of WQH partitions of a gain graph.
//!
//! Candidates are built pair by pair. `C_0` runs over subsets by size, then
//! lexicographically; each pair's first cell holds the smallest vertex not
//! yet placed, so every partition appears once up to swapping the cells of a
//! pair and permuting pairs. Cells must lie inside one class of the coarsest
//! equitable partition of the graph induced on `V \ C_0` (cell conditions
//! force equal neighbour counts whenever the comparison preserves them), and
//! each new cell or pair is checked against the cells already placed before
//! the search descends. Complete candidates are re-checked by the verifier.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::algebra::GroupAlgebraElement;
use crate::graph::GainGraph;
use crate::represent::{RepKind, Representation};
use crate::switching::{
    constant_gain, verify_gwqh, verify_piwqh, Comparator, PartitionVerdict, SwitchingError, WQHPartition,
};

/// Bounds for partition enumeration and switching-isomorphism search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest graph accepted by the partition search.
    pub max_vertices: usize,
    /// Largest number of cells `2k + 1`.
    pub max_cells: usize,
    /// Search nodes (cells tried plus complete candidates) before giving up.
    pub max_partitions: usize,
    /// Largest `n` for which the isomorphism search runs; `None` picks 8 for
    /// groups of order at most 4 and 6 otherwise.
    pub iso_max_vertices: Option<usize>,
    /// Assignments tried by the isomorphism search before giving up.
    pub iso_nodes: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_vertices: 14,
            max_cells: 5,
            max_partitions: 1_000_000,
            iso_max_vertices: None,
            iso_nodes: 5_000_000,
        }
    }
}

impl SearchLimits {
    /// Isomorphism vertex budget for a group of the given order.
    pub fn iso_budget(&self, group_order: usize) -> usize {
        self.iso_max_vertices.unwrap_or(if group_order <= 4 { 8 } else { 6 })
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let positive = self.max_vertices > 0
            && self.max_cells > 0
            && self.max_partitions > 0
            && self.iso_max_vertices != Some(0)
            && self.iso_nodes > 0;
        if positive {
            Ok(())
        } else {
            Err(SearchError::Limits)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("search limits must be positive")]
    Limits,
    #[error("graph has {n} vertices, above the search limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("graphs are over different groups")]
    GroupMismatch,
    #[error(transparent)]
    Switching(#[from] SwitchingError),
}

/// Comparison used by the partition search.
#[derive(Debug, Clone, Copy)]
pub enum SearchMode<'a> {
    Group,
    Represented { rep: &'a Representation, tol: f64 },
}

/// Partitions found, in sorted order.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub partitions: Vec<WQHPartition>,
    /// Search nodes visited.
    pub examined: usize,
    /// False when the node budget ran out; the list is then partial.
    pub complete: bool,
}

type Mask = u64;

fn bits(m: Mask) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&i| m >> i & 1 == 1)
}

fn mask_of(vs: &[usize]) -> Mask {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

struct Searcher<'a> {
    g: &'a GainGraph,
    mode: SearchMode<'a>,
    cmp: Comparator<'a>,
    max_pairs: usize,
    budget: usize,
    examined: usize,
    found: Vec<WQHPartition>,
}

/// Every partition of `g` accepted by the verifier for `mode`, within `limits`.
pub fn find_wqh_partitions(
    g: &GainGraph,
    limits: &SearchLimits,
    mode: SearchMode<'_>,
) -> Result<SearchOutcome, SearchError> {
    limits.validate()?;
    let n = g.vertex_count();
    let max = limits.max_vertices.min(Mask::BITS as usize);
    if n > max {
        return Err(SearchError::TooLarge { n, max });
    }
    let cmp = match mode {
        SearchMode::Group => Comparator { rep: None },
        SearchMode::Represented { rep, tol } => {
            if !crate::algebra::same_group(g.group(), rep.group()) {
                return Err(SwitchingError::Rep(crate::represent::RepError::GroupMismatch).into());
            }
            Comparator { rep: Some((rep, tol)) }
        }
    };
    let mut s = Searcher {
        g,
        mode,
        cmp,
        max_pairs: limits.max_cells.saturating_sub(1) / 2,
        budget: limits.max_partitions,
        examined: 0,
        found: Vec::new(),
    };
    let complete = s.run()?;
    let mut partitions = s.found;
    partitions.sort();
    Ok(SearchOutcome { partitions, examined: s.examined, complete })
}

impl Searcher<'_> {
    fn tick(&mut self) -> bool {
        self.examined += 1;
        self.examined <= self.budget
    }

    fn run(&mut self) -> Result<bool, SearchError> {
        let n = self.g.vertex_count();
        if self.max_pairs == 0 || n < 2 {
            return Ok(true);
        }
        for size in 0..=n - 2 {
            if !(n - size).is_multiple_of(2) {
                continue;
            }
            let mut c0 = Vec::with_capacity(size);
            if !self.c0_subsets(0, size, &mut c0)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn c0_subsets(&mut self, from: usize, left: usize, c0: &mut Vec<usize>) -> Result<bool, SearchError> {
        let n = self.g.vertex_count();
        if left == 0 {
            let c0_mask = mask_of(c0);
            let rest = ((1u128 << n) - 1) as Mask & !c0_mask;
            let classes = self.refine(rest);
            let mut pairs = Vec::new();
            return self.place_pairs(c0, rest, &classes, &mut pairs);
        }
        for v in from..=n - left {
            c0.push(v);
            let ok = self.c0_subsets(v + 1, left - 1, c0)?;
            c0.pop();
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coarsest equitable partition of the graph induced on `rest`, as class
    /// masks. A single class when the comparison does not preserve counts.
    fn refine(&self, rest: Mask) -> Vec<Mask> {
        let counts_preserved = match self.mode {
            SearchMode::Group => true,
            SearchMode::Represented { rep, .. } => rep.kind() != RepKind::Identical,
        };
        if !counts_preserved {
            return vec![rest];
        }
        let n = self.g.vertex_count();
        let mut color = vec![0usize; n];
        let mut count = 1;
        loop {
            let mut sigs: BTreeMap<(usize, Vec<(usize, usize)>), usize> = BTreeMap::new();
            let mut keyed = Vec::new();
            for v in bits(rest) {
                let mut nb: BTreeMap<usize, usize> = BTreeMap::new();
                for &w in self.g.neighbors(v) {
                    if rest >> w & 1 == 1 {
                        *nb.entry(color[w]).or_default() += 1;
                    }
                }
                let key = (color[v], nb.into_iter().collect::<Vec<_>>());
                sigs.entry(key.clone()).or_insert(0);
                keyed.push((v, key));
            }
            for (i, val) in sigs.values_mut().enumerate() {
                *val = i;
            }
            for (v, key) in &keyed {
                color[*v] = sigs[key];
            }
            if sigs.len() == count {
                break;
            }
            count = sigs.len();
        }
        let mut classes = vec![0 as Mask; count];
        for v in bits(rest) {
            classes[color[v]] |= 1 << v;
        }
        classes
    }

    fn psi(&self, v: usize, cell: Mask) -> GroupAlgebraElement {
        let gains = self.g.neighbors(v).iter().filter(|&&w| cell >> w & 1 == 1).filter_map(|&w| self.g.gain(v, w));
        GroupAlgebraElement::sum_of(self.g.group(), gains)
    }

    /// `Psi_target` constant over `cell`.
    fn constant_over(&self, cell: Mask, target: Mask) -> Result<bool, SearchError> {
        let mut vs = bits(cell);
        let Some(first) = vs.next() else { return Ok(true) };
        let base = self.psi(first, target);
        for v in vs {
            if !self.cmp.same(&base, &self.psi(v, target))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Intra-cell conditions between `cell` and every placed cell, itself included.
    fn cell_fits(&self, cell: Mask, placed: &[Mask]) -> Result<bool, SearchError> {
        if !self.constant_over(cell, cell)? {
            return Ok(false);
        }
        for &other in placed {
            if !self.constant_over(cell, other)? || !self.constant_over(other, cell)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Swap conditions between a pair `(a, b)` and a pair `(c, d)`, on representatives.
    fn swap_fits(&self, (a, b): (Mask, Mask), (c, d): (Mask, Mask)) -> Result<bool, SearchError> {
        let v = a.trailing_zeros() as usize;
        let w = b.trailing_zeros() as usize;
        Ok(self.cmp.same(&self.psi(v, c), &self.psi(w, d))? && self.cmp.same(&self.psi(v, d), &self.psi(w, c))?)
    }

    /// `C_0` vertex against a pair: equal sums, or both sums constant.
    fn c0_fits(&self, v: usize, (a, b): (Mask, Mask)) -> bool {
        let (pa, pb) = (self.psi(v, a), self.psi(v, b));
        let size = a.count_ones() as usize;
        pa == pb || (constant_gain(&pa, size).is_some() && constant_gain(&pb, size).is_some())
    }

    fn pair_fits(&self, pair: (Mask, Mask), pairs: &[(Mask, Mask)], c0: &[usize]) -> Result<bool, SearchError> {
        if !self.swap_fits(pair, pair)? {
            return Ok(false);
        }
        for &other in pairs {
            if !self.swap_fits(pair, other)? || !self.swap_fits(other, pair)? {
                return Ok(false);
            }
        }
        Ok(c0.iter().all(|&v| self.c0_fits(v, pair)))
    }

    fn place_pairs(
        &mut self,
        c0: &[usize],
        rest: Mask,
        classes: &[Mask],
        pairs: &mut Vec<(Mask, Mask)>,
    ) -> Result<bool, SearchError> {
        if rest == 0 {
            if !self.tick() {
                return Ok(false);
            }
            self.accept(c0, pairs)?;
            return Ok(true);
        }
        if pairs.len() == self.max_pairs {
            return Ok(true);
        }
        let s = rest.trailing_zeros() as usize;
        let home = classes.iter().copied().find(|c| c >> s & 1 == 1).unwrap_or(0) & rest;
        let placed: Vec<Mask> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let max_size = (rest.count_ones() / 2) as usize;
        for t in 1..=max_size {
            let pool: Vec<usize> = bits(home & !(1 << s)).collect();
            let mut a_rest = Vec::with_capacity(t);
            let mut ok = true;
            let mut a_sets = Vec::new();
            combinations(&pool, t - 1, &mut a_rest, &mut |combo| a_sets.push(mask_of(combo) | 1 << s));
            for a in a_sets {
                if !self.tick() {
                    return Ok(false);
                }
                if !self.cell_fits(a, &placed)? {
                    continue;
                }
                let mut with_a = placed.clone();
                with_a.push(a);
                for &class in classes {
                    let pool: Vec<usize> = bits(class & rest & !a).collect();
                    let mut b_sets = Vec::new();
                    let mut scratch = Vec::with_capacity(t);
                    combinations(&pool, t, &mut scratch, &mut |combo| b_sets.push(mask_of(combo)));
                    for b in b_sets {
                        if !self.tick() {
                            return Ok(false);
                        }
                        if !self.cell_fits(b, &with_a)? || !self.pair_fits((a, b), pairs, c0)? {
                            continue;
                        }
                        pairs.push((a, b));
                        ok = self.place_pairs(c0, rest & !a & !b, classes, pairs)?;
                        pairs.pop();
                        if !ok {
                            return Ok(false);
                        }
                    }
                }
            }
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn accept(&mut self, c0: &[usize], pairs: &[(Mask, Mask)]) -> Result<(), SearchError> {
        let mut cells = vec![c0.to_vec()];
        for &(a, b) in pairs {
            cells.push(bits(a).collect());
            cells.push(bits(b).collect());
        }
        let alpha = WQHPartition::new(self.g.vertex_count(), cells).map_err(SwitchingError::from)?;
        let verdict: PartitionVerdict = match self.mode {
            SearchMode::Group => verify_gwqh(self.g, &alpha)?,
            SearchMode::Represented { rep, tol } => verify_piwqh(self.g, &alpha, rep, tol)?,
        };
        if verdict.is_valid() {
            self.found.push(alpha);
        }
        Ok(())
    }
}

/// Calls `f` on every `k`-subset of `pool`, in lexicographic order.
fn combinations(pool: &[usize], k: usize, scratch: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if k == 0 {
        f(scratch);
        return;
    }
    if pool.len() < k {
        return;
    }
    for i in 0..=pool.len() - k {
        scratch.push(pool[i]);
        combinations(&pool[i + 1..], k - 1, scratch, f);
        scratch.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::Group;
    use alloc::collections::BTreeSet;
    use alloc::sync::Arc;

    /// Canonical form of an ordered partition up to swapping within pairs and permuting pairs.
    fn canonical(cells: &[Vec<usize>]) -> (Vec<usize>, BTreeSet<BTreeSet<Vec<usize>>>) {
        let pairs = cells[1..]
            .chunks(2)
            .map(|p| p.iter().cloned().collect::<BTreeSet<_>>())
            .collect();
        (cells[0].clone(), pairs)
    }

    /// Brute force: every labelling of vertices by cell index, keeping size-valid ones.
    /// `C_0` with the set of unordered pairs.
    type Canonical = (Vec<usize>, BTreeSet<BTreeSet<Vec<usize>>>);

    fn all_size_valid(n: usize, max_cells: usize) -> BTreeSet<Canonical> {
        let mut out = BTreeSet::new();
        let base = max_cells;
        let total = base.pow(n as u32);
        for code in 0..total {
            let mut cells = vec![Vec::new(); base];
            let mut c = code;
            for v in 0..n {
                cells[c % base].push(v);
                c /= base;
            }
            for used in (3..=base).step_by(2) {
                let ok = cells[..used].iter().skip(1).all(|x| !x.is_empty())
                    && cells[used..].iter().all(|x| x.is_empty())
                    && cells[1..used].chunks(2).all(|p| p[0].len() == p[1].len());
                if ok {
                    out.insert(canonical(&cells[..used]));
                }
            }
        }
        out
    }

    #[test]
    fn edgeless_graph_returns_every_size_valid_partition() {
        let grp = Arc::new(Group::cyclic(2).unwrap());
        let g = GainGraph::edgeless(&grp, 5);
        let out = find_wqh_partitions(&g, &SearchLimits::default(), SearchMode::Group).unwrap();
        assert!(out.complete);
        let got: BTreeSet<_> = out.partitions.iter().map(|p| canonical(p.cells())).collect();
        assert_eq!(got.len(), out.partitions.len(), "no duplicates");
        let want = all_size_valid(5, 5);
        assert_eq!(want.len(), 40);
        assert_eq!(got, want);
    }

    #[test]
    fn t4_13_partition_found_under_identical_representation() {
        let f = fixtures::t4_13();
        let rep = Representation::new(f.graph.group(), RepKind::Identical).unwrap();
        let limits = SearchLimits { max_partitions: 200_000, ..SearchLimits::default() };
        let out = find_wqh_partitions(&f.graph, &limits, SearchMode::Represented { rep: &rep, tol: 1e-9 }).unwrap();
        let target = canonical(f.partition.cells());
        assert!(out.partitions.iter().any(|p| canonical(p.cells()) == target));
        for p in &out.partitions {
            assert!(verify_piwqh(&f.graph, p, &rep, 1e-9).unwrap().is_valid());
        }
    }

    #[test]
    fn t4_13_partition_absent_in_group_mode() {
        let f = fixtures::t4_13();
        let limits = SearchLimits { max_partitions: 50_000, ..SearchLimits::default() };
        let out = find_wqh_partitions(&f.graph, &limits, SearchMode::Group).unwrap();
        let target = canonical(f.partition.cells());
        assert!(out.partitions.iter().all(|p| canonical(p.cells()) != target));
        for p in &out.partitions {
            assert!(verify_gwqh(&f.graph, p).unwrap().is_valid());
        }
    }

    #[test]
    fn s4_17_partition_found_for_permutation_not_group() {
        let f = fixtures::s4_17();
        let rep = Representation::new(f.graph.group(), RepKind::Permutation).unwrap();
        let limits = SearchLimits { max_vertices: 17, max_partitions: 100_000, ..SearchLimits::default() };
        let target = canonical(f.partition.cells());
        let pi = find_wqh_partitions(&f.graph, &limits, SearchMode::Represented { rep: &rep, tol: 1e-9 }).unwrap();
        assert!(pi.partitions.iter().any(|p| canonical(p.cells()) == target));
        let grp = find_wqh_partitions(&f.graph, &limits, SearchMode::Group).unwrap();
        assert!(grp.partitions.iter().all(|p| canonical(p.cells()) != target));
    }

    #[test]
    fn size_and_budget_limits() {
        let grp = Arc::new(Group::cyclic(2).unwrap());
        let g = GainGraph::edgeless(&grp, 15);
        assert_eq!(
            find_wqh_partitions(&g, &SearchLimits::default(), SearchMode::Group),
            Err(SearchError::TooLarge { n: 15, max: 14 })
        );
        let g = GainGraph::edgeless(&grp, 8);
        let limits = SearchLimits { max_partitions: 10, ..SearchLimits::default() };
        let out = find_wqh_partitions(&g, &limits, SearchMode::Group).unwrap();
        assert!(!out.complete);
        assert!(out.examined <= 11);
        let zero = SearchLimits { max_cells: 0, ..SearchLimits::default() };
        assert_eq!(find_wqh_partitions(&g, &zero, SearchMode::Group), Err(SearchError::Limits));
    }

    #[test]
    fn combinations_in_order() {
        let mut seen = Vec::new();
        combinations(&[1, 2, 3, 4], 2, &mut Vec::new(), &mut |c| seen.push(c.to_vec()));
        assert_eq!(seen, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
    }
}
