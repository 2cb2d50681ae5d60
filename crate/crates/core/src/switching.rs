//! WQH partitions: verification in the group algebra and under a
//! representation, the switching matrix `Q`, the switched graph, and the
//! matrix identities that certify cospectrality.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, GaMatrix, GroupAlgebraElement};
use crate::graph::{GainGraph, GraphError};
use crate::group::{Element, Group};
use crate::represent::{ExactMatrix, RepError, RepKind, Representation};
use crate::scalar::Scalar;
use crate::spectrum::{ComplexMatrix, SpectrumError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("a partition needs an odd number of cells, at least 3; got {0}")]
    CellCount(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} appears in more than one cell")]
    Overlap(usize),
    #[error("vertex {0} is in no cell")]
    Uncovered(usize),
    #[error("paired cell C_{0} is empty")]
    EmptyCell(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SwitchingError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("partition covers {partition} vertices but the graph has {graph}")]
    VertexCount { partition: usize, graph: usize },
    #[error("paired cells C_{left} and C_{right} differ in size ({left_size} vs {right_size})")]
    PairSizes { left: usize, right: usize, left_size: usize, right_size: usize },
    #[error("partition is not a valid WQH partition for this graph")]
    NotWqh,
    #[error("expected a {rows}x{cols} matrix, got {got_rows}x{got_cols}")]
    Shape { rows: usize, cols: usize, got_rows: usize, got_cols: usize },
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// An ordered partition `C_0, C_1, ..., C_2k`; cells `C_{2p+1}, C_{2p+2}` form pair `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WQHPartition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl WQHPartition {
    /// Cells are sorted internally; their order is kept.
    pub fn new(n: usize, cells: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        if cells.len() < 3 || cells.len().is_multiple_of(2) {
            return Err(PartitionError::CellCount(cells.len()));
        }
        let mut cell_of = vec![usize::MAX; n];
        let mut cells = cells;
        for (c, cell) in cells.iter_mut().enumerate() {
            cell.sort_unstable();
            if c > 0 && cell.is_empty() {
                return Err(PartitionError::EmptyCell(c));
            }
            for &v in cell.iter() {
                if v >= n {
                    return Err(PartitionError::VertexOutOfRange { vertex: v, n });
                }
                if cell_of[v] != usize::MAX {
                    return Err(PartitionError::Overlap(v));
                }
                cell_of[v] = c;
            }
        }
        if let Some(v) = cell_of.iter().position(|&c| c == usize::MAX) {
            return Err(PartitionError::Uncovered(v));
        }
        Ok(WQHPartition { cells, cell_of })
    }

    pub fn vertex_count(&self) -> usize {
        self.cell_of.len()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &[usize] {
        &self.cells[i]
    }

    pub fn c0(&self) -> &[usize] {
        &self.cells[0]
    }

    /// Number of pairs `k`.
    pub fn pair_count(&self) -> usize {
        (self.cells.len() - 1) / 2
    }

    /// Cell indices `(2p + 1, 2p + 2)` of pair `p`.
    pub fn pair_cells(p: usize) -> (usize, usize) {
        (2 * p + 1, 2 * p + 2)
    }

    pub fn pair(&self, p: usize) -> (&[usize], &[usize]) {
        let (a, b) = Self::pair_cells(p);
        (&self.cells[a], &self.cells[b])
    }

    /// Common size of the cells of pair `p`, or `None` if they differ.
    pub fn pair_size(&self, p: usize) -> Option<usize> {
        let (a, b) = self.pair(p);
        (a.len() == b.len()).then_some(a.len())
    }

    pub fn cell_of(&self, v: usize) -> usize {
        self.cell_of[v]
    }

    fn require_sizes(&self) -> Result<(), SwitchingError> {
        for p in 0..self.pair_count() {
            if self.pair_size(p).is_none() {
                let (left, right) = Self::pair_cells(p);
                return Err(SwitchingError::PairSizes {
                    left,
                    right,
                    left_size: self.cells[left].len(),
                    right_size: self.cells[right].len(),
                });
            }
        }
        Ok(())
    }

    fn require_graph(&self, g: &GainGraph) -> Result<(), SwitchingError> {
        if self.vertex_count() != g.vertex_count() {
            return Err(SwitchingError::VertexCount {
                partition: self.vertex_count(),
                graph: g.vertex_count(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for WQHPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, cell) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "C_{i}={{")?;
            for (j, v) in cell.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    Size,
    IntraCell,
    CrossPairSwap,
    C0CaseA,
    C0CaseB,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Size => "size",
            Condition::IntraCell => "intra-cell",
            Condition::CrossPairSwap => "cross-pair-swap",
            Condition::C0CaseA => "c0-case-a",
            Condition::C0CaseB => "c0-case-b",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `Psi_cell(vertex) = value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiValue {
    pub vertex: usize,
    pub cell: usize,
    pub value: GroupAlgebraElement,
}

impl fmt::Display for PsiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Psi_{}(v{}) = {}", self.cell, self.vertex, self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Size { left: usize, right: usize, left_size: usize, right_size: usize },
    /// Two statistics that were required to agree.
    Mismatch { left: PsiValue, right: PsiValue },
    /// Statistics of a `C_0` vertex that are not both `|C| * g` for single gains.
    NotConstant { first: PsiValue, second: PsiValue },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub condition: Condition,
    pub witness: Witness,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.condition)?;
        match &self.witness {
            Witness::Size { left, right, left_size, right_size } => {
                write!(f, "|C_{left}| = {left_size} != |C_{right}| = {right_size}")
            }
            Witness::Mismatch { left, right } => write!(f, "{left} != {right}"),
            Witness::NotConstant { first, second } => {
                write!(f, "{first} and {second} are not constant-gain sums")
            }
        }
    }
}

/// How a `C_0` vertex meets a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseResolution {
    /// Equal statistics towards both cells.
    A,
    /// Adjacent to all of the first cell with gain `g1` and all of the second
    /// with gain `g2`; `None` means no edges.
    B { g1: Option<Element>, g2: Option<Element> },
}

impl CaseResolution {
    /// Case (b) with `g1 = g2`, which the definition allows without conflict.
    pub fn has_equal_gains(&self) -> bool {
        matches!(self, CaseResolution::B { g1, g2 } if g1 == g2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct C0Case {
    pub vertex: usize,
    pub pair: usize,
    pub resolution: CaseResolution,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Exact equality in the group algebra.
    Group,
    /// Equality of images under a representation of this kind.
    Represented { rep: RepKind, tol: f64 },
}

/// Result of checking a partition against a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionVerdict {
    mode: Mode,
    failures: Vec<Failure>,
    cases: Vec<C0Case>,
}

impl PartitionVerdict {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// First witness per failing condition, in condition order.
    pub fn failures(&self) -> &[Failure] {
        &self.failures
    }

    pub fn failure(&self, condition: Condition) -> Option<&Failure> {
        self.failures.iter().find(|f| f.condition == condition)
    }

    /// Resolved `(C_0 vertex, pair)` combinations.
    pub fn cases(&self) -> &[C0Case] {
        &self.cases
    }

    pub fn case(&self, vertex: usize, pair: usize) -> Option<CaseResolution> {
        self.cases.iter().find(|c| c.vertex == vertex && c.pair == pair).map(|c| c.resolution)
    }
}

pub(crate) enum Image {
    Exact(ExactMatrix),
    Approx(ComplexMatrix),
}

pub(crate) struct Comparator<'a> {
    pub(crate) rep: Option<(&'a Representation, f64)>,
}

impl Comparator<'_> {
    /// Equality in the group algebra, or of images when a representation is set.
    pub(crate) fn same(&self, x: &GroupAlgebraElement, y: &GroupAlgebraElement) -> Result<bool, SwitchingError> {
        if self.rep.is_none() {
            return Ok(x == y);
        }
        Ok(self.equal((x, &self.image(x)?), (y, &self.image(y)?)))
    }

    pub(crate) fn image(&self, x: &GroupAlgebraElement) -> Result<Option<Image>, SwitchingError> {
        let Some((rep, _)) = self.rep else { return Ok(None) };
        Ok(Some(match rep.apply_exact(x)? {
            Some(m) => Image::Exact(m),
            None => Image::Approx(rep.apply(x)?),
        }))
    }

    pub(crate) fn equal(&self, x: (&GroupAlgebraElement, &Option<Image>), y: (&GroupAlgebraElement, &Option<Image>)) -> bool {
        match (x.1, y.1) {
            (None, None) => x.0 == y.0,
            (Some(Image::Exact(a)), Some(Image::Exact(b))) => a == b,
            (Some(Image::Approx(a)), Some(Image::Approx(b))) => {
                let tol = self.rep.map_or(0.0, |(_, t)| t);
                a.max_abs_diff(b).is_ok_and(|d| d <= tol)
            }
            _ => false,
        }
    }
}

/// `Some(None)` for zero, `Some(Some(g))` for `size * g`, `None` otherwise.
pub(crate) fn constant_gain(x: &GroupAlgebraElement, size: usize) -> Option<Option<Element>> {
    if x.is_zero() {
        return Some(None);
    }
    match x.as_single_term() {
        Some((c, g)) if *c == Scalar::from_int(size as i64) => Some(Some(g)),
        _ => None,
    }
}

/// Checks the partition with exact group-algebra equalities.
pub fn verify_gwqh(g: &GainGraph, alpha: &WQHPartition) -> Result<PartitionVerdict, SwitchingError> {
    verify(g, alpha, None)
}

/// Checks the partition with the cell conditions compared through `rep`
/// (exactly when its images are exact, else within `tol`); the `C_0`
/// conditions stay exact in the group algebra.
pub fn verify_piwqh(
    g: &GainGraph,
    alpha: &WQHPartition,
    rep: &Representation,
    tol: f64,
) -> Result<PartitionVerdict, SwitchingError> {
    if !crate::algebra::same_group(g.group(), rep.group()) {
        return Err(RepError::GroupMismatch.into());
    }
    verify(g, alpha, Some((rep, tol)))
}

fn verify(
    g: &GainGraph,
    alpha: &WQHPartition,
    rep: Option<(&Representation, f64)>,
) -> Result<PartitionVerdict, SwitchingError> {
    alpha.require_graph(g)?;
    let mode = match rep {
        None => Mode::Group,
        Some((r, tol)) => Mode::Represented { rep: r.kind(), tol },
    };
    let cmp = Comparator { rep };
    let cells = alpha.cells();
    let m = cells.len();
    // psi[v][c] and its image, for every vertex and every cell but C_0
    let mut psi: Vec<Vec<GroupAlgebraElement>> = Vec::with_capacity(g.vertex_count());
    let mut img: Vec<Vec<Option<Image>>> = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let row: Vec<GroupAlgebraElement> = cells.iter().map(|c| g.psi(v, c)).collect();
        let mut irow = Vec::with_capacity(m);
        for (c, x) in row.iter().enumerate() {
            let skip = c == 0 || alpha.cell_of(v) == 0;
            irow.push(if skip { None } else { cmp.image(x)? });
        }
        psi.push(row);
        img.push(irow);
    }
    let at = |v: usize, c: usize| PsiValue { vertex: v, cell: c, value: psi[v][c].clone() };
    let same = |v: usize, c: usize, w: usize, d: usize| {
        cmp.equal((&psi[v][c], &img[v][c]), (&psi[w][d], &img[w][d]))
    };

    let mut failures = Vec::new();
    for p in 0..alpha.pair_count() {
        if alpha.pair_size(p).is_none() {
            let (left, right) = WQHPartition::pair_cells(p);
            failures.push(Failure {
                condition: Condition::Size,
                witness: Witness::Size {
                    left,
                    right,
                    left_size: cells[left].len(),
                    right_size: cells[right].len(),
                },
            });
            break;
        }
    }

    'intra: for cell in &cells[1..m] {
        let first = cell[0];
        for &v in &cell[1..] {
            for j in 1..m {
                if !same(first, j, v, j) {
                    failures.push(Failure {
                        condition: Condition::IntraCell,
                        witness: Witness::Mismatch { left: at(first, j), right: at(v, j) },
                    });
                    break 'intra;
                }
            }
        }
    }

    'swap: for p in 0..alpha.pair_count() {
        let (i, i1) = WQHPartition::pair_cells(p);
        for q in 0..alpha.pair_count() {
            let (j, j1) = WQHPartition::pair_cells(q);
            for &v in &cells[i] {
                for &w in &cells[i1] {
                    for (c, d) in [(j, j1), (j1, j)] {
                        if !same(v, c, w, d) {
                            failures.push(Failure {
                                condition: Condition::CrossPairSwap,
                                witness: Witness::Mismatch { left: at(v, c), right: at(w, d) },
                            });
                            break 'swap;
                        }
                    }
                }
            }
        }
    }

    let mut cases = Vec::new();
    let mut c0_failed = false;
    for &v in alpha.c0() {
        for p in 0..alpha.pair_count() {
            let (a, b) = WQHPartition::pair_cells(p);
            let ga = constant_gain(&psi[v][a], cells[a].len());
            let gb = constant_gain(&psi[v][b], cells[b].len());
            let resolution = match (ga, gb) {
                (Some(g1), Some(g2)) => Some(CaseResolution::B { g1, g2 }),
                _ if psi[v][a] == psi[v][b] => Some(CaseResolution::A),
                _ => None,
            };
            match resolution {
                Some(resolution) => cases.push(C0Case { vertex: v, pair: p, resolution }),
                None if !c0_failed => {
                    c0_failed = true;
                    failures.push(Failure {
                        condition: Condition::C0CaseA,
                        witness: Witness::Mismatch { left: at(v, a), right: at(v, b) },
                    });
                    failures.push(Failure {
                        condition: Condition::C0CaseB,
                        witness: Witness::NotConstant { first: at(v, a), second: at(v, b) },
                    });
                }
                None => {}
            }
        }
    }

    Ok(PartitionVerdict { mode, failures, cases })
}

/// `Q` in the graph's own vertex order: identity on `C_0`, and on each pair
/// of size `s` the entries `delta - 1/s` within a cell and `1/s` across.
pub fn build_switch_matrix(group: &Arc<Group>, alpha: &WQHPartition) -> Result<GaMatrix, SwitchingError> {
    alpha.require_sizes()?;
    let n = alpha.vertex_count();
    let mut q = GaMatrix::zeros(group, n, n);
    let one = Element::IDENTITY;
    for &v in alpha.c0() {
        q.set_raw(v, v, vec![(one, Scalar::one())]);
    }
    for p in 0..alpha.pair_count() {
        let (a, b) = alpha.pair(p);
        let s = a.len() as i64;
        let inv = Scalar::ratio(1, s);
        let diag = Scalar::ratio(s - 1, s);
        let within = Scalar::ratio(-1, s);
        for (x, y) in [(a, a), (b, b)] {
            for &u in x {
                for &w in y {
                    let c = if u == w { diag.clone() } else { within.clone() };
                    if !c.is_zero() {
                        q.set_raw(u, w, vec![(one, c)]);
                    }
                }
            }
        }
        for (x, y) in [(a, b), (b, a)] {
            for &u in x {
                for &w in y {
                    q.set_raw(u, w, vec![(one, inv.clone())]);
                }
            }
        }
    }
    Ok(q)
}

/// The `2s x 2s` block of `Q` for a pair of size `s`, rows ordered first cell then second.
pub fn pair_switch_matrix(group: &Arc<Group>, s: usize) -> GaMatrix {
    let inv = Scalar::ratio(1, s as i64);
    GaMatrix::from_fn(group, 2 * s, 2 * s, |i, j| {
        let same_cell = (i < s) == (j < s);
        let c = match (same_cell, i == j) {
            (true, true) => &Scalar::one() - &inv,
            (true, false) => -&inv,
            (false, _) => inv.clone(),
        };
        GroupAlgebraElement::scalar(group, c)
    })
}

/// The switched graph. Only edges between `C_0` and a pair resolved as
/// case (b) change: the first cell receives `g2` and the second `g1`.
pub fn switch_graph(
    g: &GainGraph,
    alpha: &WQHPartition,
    verdict: &PartitionVerdict,
) -> Result<GainGraph, SwitchingError> {
    alpha.require_graph(g)?;
    if !verdict.is_valid() {
        return Err(SwitchingError::NotWqh);
    }
    let mut swapped: Vec<(usize, usize, Option<Element>, Option<Element>)> = Vec::new();
    for &v in alpha.c0() {
        for p in 0..alpha.pair_count() {
            match verdict.case(v, p) {
                Some(CaseResolution::A) => {}
                Some(CaseResolution::B { g1, g2 }) => swapped.push((v, p, g1, g2)),
                None => return Err(SwitchingError::NotWqh),
            }
        }
    }
    let touched = |u: usize, w: usize| {
        swapped.iter().any(|&(v, p, _, _)| {
            let (a, b) = WQHPartition::pair_cells(p);
            let other = if u == v { w } else if w == v { u } else { return false };
            let c = alpha.cell_of(other);
            c == a || c == b
        })
    };
    let mut edges: Vec<(usize, usize, Element)> =
        g.edges().filter(|&(u, w, _)| !touched(u, w)).collect();
    for &(v, p, g1, g2) in &swapped {
        let (a, b) = alpha.pair(p);
        if let Some(x) = g2 {
            edges.extend(a.iter().map(|&w| (v, w, x)));
        }
        if let Some(x) = g1 {
            edges.extend(b.iter().map(|&w| (v, w, x)));
        }
    }
    Ok(GainGraph::new(g.group(), g.vertex_count(), edges)?)
}

/// `A(switched) = Q A Q`, exactly, for a valid group-algebra WQH partition.
pub fn verify_theorem_gcosp(g: &GainGraph, alpha: &WQHPartition) -> Result<bool, SwitchingError> {
    let verdict = verify_gwqh(g, alpha)?;
    if !verdict.is_valid() {
        return Err(SwitchingError::NotWqh);
    }
    let switched = switch_graph(g, alpha, &verdict)?;
    let q = build_switch_matrix(g.group(), alpha)?;
    let qaq = q.mul(&g.adjacency())?.mul(&q)?;
    Ok(switched.adjacency() == qaq)
}

/// `pi(A(switched)) = pi(Q) pi(A) pi(Q)` for a valid represented WQH
/// partition; exact when the images are exact, else entrywise within `tol`.
pub fn verify_theorem_picosp(
    g: &GainGraph,
    alpha: &WQHPartition,
    rep: &Representation,
    tol: f64,
) -> Result<bool, SwitchingError> {
    let verdict = verify_piwqh(g, alpha, rep, tol)?;
    if !verdict.is_valid() {
        return Err(SwitchingError::NotWqh);
    }
    let switched = switch_graph(g, alpha, &verdict)?;
    let q = build_switch_matrix(g.group(), alpha)?;
    let a = g.adjacency();
    if rep.is_exact() {
        // pi is an exact algebra homomorphism here, so pi(Q) pi(A) pi(Q) = pi(QAQ)
        let qaq = q.mul(&a)?.mul(&q)?;
        return Ok(rep.apply_mat_exact(&switched.adjacency())? == rep.apply_mat_exact(&qaq)?);
    }
    let pq = rep.apply_mat(&q)?;
    let rhs = pq.mul(&rep.apply_mat(&a)?)?.mul(&pq)?;
    Ok(rep.apply_mat(&switched.adjacency())?.max_abs_diff(&rhs)? <= tol)
}

/// Outcome of the block lemma on one `2 n_i x 2 n_j` matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockLemma {
    /// Diagonal blocks share constant row and column sums, as do off-diagonal blocks.
    pub hypothesis: bool,
    /// `Q_{n_i} A Q_{n_j} = A`, evaluated only when the hypothesis holds.
    pub conclusion: Option<bool>,
}

impl BlockLemma {
    pub fn holds(&self) -> bool {
        self.hypothesis && self.conclusion == Some(true)
    }
}

fn require_shape(a: &GaMatrix, rows: usize, cols: usize) -> Result<(), SwitchingError> {
    if a.shape() != (rows, cols) {
        return Err(SwitchingError::Shape { rows, cols, got_rows: a.rows(), got_cols: a.cols() });
    }
    Ok(())
}

fn blocks(a: &GaMatrix, ni: usize, nj: usize) -> [[GaMatrix; 2]; 2] {
    let r: [Vec<usize>; 2] = [(0..ni).collect(), (ni..2 * ni).collect()];
    let c: [Vec<usize>; 2] = [(0..nj).collect(), (nj..2 * nj).collect()];
    [
        [a.submatrix(&r[0], &c[0]), a.submatrix(&r[0], &c[1])],
        [a.submatrix(&r[1], &c[0]), a.submatrix(&r[1], &c[1])],
    ]
}

/// Common row sum and common column sum of all `blocks`, if they exist.
fn common_sums(blocks: &[&GaMatrix]) -> bool {
    let first = blocks[0];
    let r = first.row_sum(0);
    let c = first.col_sum(0);
    blocks.iter().all(|b| {
        (0..b.rows()).all(|i| b.row_sum(i) == r) && (0..b.cols()).all(|j| b.col_sum(j) == c)
    })
}

pub fn check_block_lemma(a: &GaMatrix, ni: usize, nj: usize) -> Result<BlockLemma, SwitchingError> {
    require_shape(a, 2 * ni, 2 * nj)?;
    if ni == 0 || nj == 0 {
        return Ok(BlockLemma { hypothesis: true, conclusion: Some(true) });
    }
    let [[a11, a12], [a21, a22]] = blocks(a, ni, nj);
    let hypothesis = common_sums(&[&a11, &a22]) && common_sums(&[&a12, &a21]);
    if !hypothesis {
        return Ok(BlockLemma { hypothesis, conclusion: None });
    }
    let qi = pair_switch_matrix(a.group(), ni);
    let qj = pair_switch_matrix(a.group(), nj);
    let conclusion = qi.mul(a)?.mul(&qj)? == *a;
    Ok(BlockLemma { hypothesis, conclusion: Some(conclusion) })
}

/// Correction `D` for a `2 n_i x 2 n_j` block matrix, supported on the first
/// row and column of each block. `S` is the total of the top-left block for
/// the diagonal blocks and of the top-right block for the others. When the
/// two diagonal blocks have equal totals, and likewise the two off-diagonal
/// blocks, every row of a block of `A + D` sums to `S/n_i` and every column
/// to `S/n_j`.
pub fn d_completion(a: &GaMatrix, ni: usize, nj: usize) -> Result<GaMatrix, SwitchingError> {
    require_shape(a, 2 * ni, 2 * nj)?;
    let group = a.group();
    let mut d = GaMatrix::zeros(group, 2 * ni, 2 * nj);
    if ni == 0 || nj == 0 {
        return Ok(d);
    }
    let bl = blocks(a, ni, nj);
    let s1 = bl[0][0].total();
    let s2 = bl[0][1].total();
    let inv_i = Scalar::ratio(1, ni as i64);
    let inv_j = Scalar::ratio(1, nj as i64);
    for (bi, bj) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let b = &bl[bi][bj];
        let s = if bi == bj { &s1 } else { &s2 };
        let per_row = s.scale(&inv_i);
        let per_col = s.scale(&inv_j);
        let (r0, c0) = (bi * ni, bj * nj);
        let corner = per_row.add(&per_col)?.sub(&b.row_sum(0))?.sub(&b.col_sum(0))?;
        d.set(r0, c0, corner)?;
        for c in 1..nj {
            d.set(r0, c0 + c, per_col.sub(&b.col_sum(c))?)?;
        }
        for r in 1..ni {
            d.set(r0 + r, c0, per_row.sub(&b.row_sum(r))?)?;
        }
    }
    Ok(d)
}

/// The block of `A` between two pairs and its correction matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Correction {
    pub pairs: (usize, usize),
    /// Graph vertices indexing rows (first cell, then second) and columns.
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub block: GaMatrix,
    pub d: GaMatrix,
}

/// Corrections for every ordered pair of pairs.
pub fn correction_matrices(g: &GainGraph, alpha: &WQHPartition) -> Result<Vec<Correction>, SwitchingError> {
    alpha.require_graph(g)?;
    alpha.require_sizes()?;
    let a = g.adjacency();
    let span = |p: usize| -> Vec<usize> {
        let (x, y) = alpha.pair(p);
        x.iter().chain(y).copied().collect()
    };
    let k = alpha.pair_count();
    let mut out = Vec::with_capacity(k * k);
    for p in 0..k {
        for q in 0..k {
            let rows = span(p);
            let cols = span(q);
            let block = a.submatrix(&rows, &cols);
            let d = d_completion(&block, rows.len() / 2, cols.len() / 2)?;
            out.push(Correction { pairs: (p, q), rows, cols, block, d });
        }
    }
    Ok(out)
}

/// Human-readable rendering of a gain, with `0` for absence.
pub fn gain_label(group: &Group, g: Option<Element>) -> String {
    match g {
        Some(x) => String::from(group.label(x)),
        None => String::from("0"),
    }
}
