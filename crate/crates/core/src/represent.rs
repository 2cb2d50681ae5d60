//! Unitary representations of finite groups and their extension to the group
//! algebra and to group-algebra matrices.
//!
//! All built-in representations are monomial: every image has exactly one
//! nonzero entry per column, of modulus one.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::Float;
use thiserror::Error;

use crate::algebra::{same_group, GaMatrix, GroupAlgebraElement};
use crate::group::{Element, Group, GroupKind};
use crate::scalar::Scalar;
use crate::spectrum::ComplexMatrix;

/// Groups up to this order get an exhaustive homomorphism check on construction.
pub const EXHAUSTIVE_CHECK_ORDER: usize = 24;

/// Tolerance of the homomorphism and unitarity checks for inexact images.
pub const IMAGE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RepKind {
    /// `g -> [1]`.
    Trivial,
    /// `z^j -> [exp(2 pi i j / n)]` on cyclic groups.
    Identical,
    /// `sigma -> ` the permutation matrix with `P[sigma(j)][j] = 1`, on symmetric groups.
    Permutation,
    /// Left-regular action of the group on itself, degree `|G|`.
    Regular,
}

impl RepKind {
    pub const ALL: [RepKind; 4] =
        [RepKind::Trivial, RepKind::Identical, RepKind::Permutation, RepKind::Regular];

    pub fn name(self) -> &'static str {
        match self {
            RepKind::Trivial => "trivial",
            RepKind::Identical => "identical",
            RepKind::Permutation => "permutation",
            RepKind::Regular => "regular",
        }
    }

    pub fn from_name(name: &str) -> Option<RepKind> {
        RepKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error("{kind} representation is not available for {group}")]
    Unsupported { kind: RepKind, group: alloc::string::String },
    #[error("image({a} * {b}) != image({a}) * image({b})")]
    Homomorphism { a: alloc::string::String, b: alloc::string::String },
    #[error("image({0}) is not unitary")]
    Unitarity(alloc::string::String),
    #[error("operand is over a different group than the representation")]
    GroupMismatch,
}

/// Monomial image: column `j` holds `coef[j]` in row `perm[j]`.
#[derive(Debug, Clone, PartialEq)]
struct Monomial {
    perm: Vec<usize>,
    coef: Vec<Complex64>,
    exact: Option<Vec<Scalar>>,
}

impl Monomial {
    fn permutation(perm: Vec<usize>) -> Self {
        let k = perm.len();
        Monomial { perm, coef: vec![Complex64::new(1.0, 0.0); k], exact: Some(vec![Scalar::one(); k]) }
    }

    /// `self * other` as monomial matrices.
    fn compose(&self, other: &Monomial) -> Monomial {
        let k = self.perm.len();
        let perm = (0..k).map(|j| self.perm[other.perm[j]]).collect();
        let coef = (0..k).map(|j| self.coef[other.perm[j]] * other.coef[j]).collect();
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some((0..k).map(|j| &a[other.perm[j]] * &b[j]).collect()),
            _ => None,
        };
        Monomial { perm, coef, exact }
    }

    fn matches(&self, other: &Monomial) -> bool {
        if self.perm != other.perm {
            return false;
        }
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => self.coef.iter().zip(&other.coef).all(|(x, y)| (x - y).norm() <= IMAGE_TOLERANCE),
        }
    }
}

/// A unitary representation `pi: G -> U_k(C)`.
#[derive(Debug, Clone)]
pub struct Representation {
    group: Arc<Group>,
    kind: RepKind,
    degree: usize,
    images: Vec<Monomial>,
}

impl Representation {
    pub fn new(group: &Arc<Group>, kind: RepKind) -> Result<Self, RepError> {
        let unsupported = || RepError::Unsupported { kind, group: alloc::format!("{group}") };
        let images: Vec<Monomial> = match kind {
            RepKind::Trivial => group.elements().map(|_| Monomial::permutation(vec![0])).collect(),
            RepKind::Identical => {
                let GroupKind::Cyclic(n) = group.kind() else { return Err(unsupported()) };
                (0..n).map(|j| root_of_unity(j, n)).collect()
            }
            RepKind::Permutation => {
                if !matches!(group.kind(), GroupKind::Symmetric(_)) {
                    return Err(unsupported());
                }
                group.elements().map(|g| Monomial::permutation(group.permutation(g).unwrap())).collect()
            }
            RepKind::Regular => group
                .elements()
                .map(|g| Monomial::permutation(group.elements().map(|h| group.op(g, h).index()).collect()))
                .collect(),
        };
        let degree = images[0].perm.len();
        let rep = Representation { group: group.clone(), kind, degree, images };
        rep.validate()?;
        Ok(rep)
    }

    fn validate(&self) -> Result<(), RepError> {
        let g = &*self.group;
        for x in g.elements() {
            let m = &self.images[x.index()];
            let mut seen = vec![false; self.degree];
            for &r in &m.perm {
                if core::mem::replace(&mut seen[r], true) {
                    return Err(RepError::Unitarity(g.label(x).into()));
                }
            }
            if m.coef.iter().any(|z| Float::abs(z.norm() - 1.0) > IMAGE_TOLERANCE) {
                return Err(RepError::Unitarity(g.label(x).into()));
            }
        }
        let order = g.order();
        let partners: Vec<Element> = if order <= EXHAUSTIVE_CHECK_ORDER {
            g.elements().collect()
        } else {
            g.elements().take(EXHAUSTIVE_CHECK_ORDER).collect()
        };
        for a in g.elements() {
            for &b in partners.iter().chain(core::iter::once(&g.inverse(a))) {
                let lhs = &self.images[g.op(a, b).index()];
                let rhs = self.images[a.index()].compose(&self.images[b.index()]);
                if !lhs.matches(&rhs) {
                    return Err(RepError::Homomorphism {
                        a: g.label(a).into(),
                        b: g.label(b).into(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Whether every image has Gaussian-integer entries.
    pub fn is_exact(&self) -> bool {
        self.images.iter().all(|m| m.exact.is_some())
    }

    pub fn image(&self, g: Element) -> ComplexMatrix {
        let m = &self.images[g.index()];
        let mut out = ComplexMatrix::zeros(self.degree, self.degree);
        for j in 0..self.degree {
            out.set(m.perm[j], j, m.coef[j]);
        }
        out
    }

    fn check(&self, group: &Arc<Group>) -> Result<(), RepError> {
        if same_group(&self.group, group) {
            Ok(())
        } else {
            Err(RepError::GroupMismatch)
        }
    }

    /// `sum a_g g -> sum a_g pi(g)`.
    pub fn apply(&self, x: &GroupAlgebraElement) -> Result<ComplexMatrix, RepError> {
        self.check(x.group())?;
        let mut out = ComplexMatrix::zeros(self.degree, self.degree);
        self.accumulate(&mut out, 0, 0, x.terms());
        Ok(out)
    }

    /// Blockwise extension: entry `(i, j)` becomes the `k x k` block `pi(A[i][j])`.
    pub fn apply_mat(&self, a: &GaMatrix) -> Result<ComplexMatrix, RepError> {
        self.check(a.group())?;
        let k = self.degree;
        let mut out = ComplexMatrix::zeros(a.rows() * k, a.cols() * k);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                self.accumulate(&mut out, i * k, j * k, a.raw(i, j));
            }
        }
        Ok(out)
    }

    fn accumulate(&self, out: &mut ComplexMatrix, r0: usize, c0: usize, terms: &[(Element, Scalar)]) {
        for (g, c) in terms {
            let c = c.to_complex64();
            let m = &self.images[g.index()];
            for j in 0..self.degree {
                out.add_at(r0 + m.perm[j], c0 + j, c * m.coef[j]);
            }
        }
    }

    /// Exact image of `x` when every image is exact.
    pub fn apply_exact(&self, x: &GroupAlgebraElement) -> Result<Option<ExactMatrix>, RepError> {
        self.check(x.group())?;
        if !self.is_exact() {
            return Ok(None);
        }
        let mut out = ExactMatrix::zeros(self.degree, self.degree);
        self.accumulate_exact(&mut out, 0, 0, x.terms());
        Ok(Some(out))
    }

    /// Exact blockwise image of `a` when every image is exact.
    pub fn apply_mat_exact(&self, a: &GaMatrix) -> Result<Option<ExactMatrix>, RepError> {
        self.check(a.group())?;
        if !self.is_exact() {
            return Ok(None);
        }
        let k = self.degree;
        let mut out = ExactMatrix::zeros(a.rows() * k, a.cols() * k);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                self.accumulate_exact(&mut out, i * k, j * k, a.raw(i, j));
            }
        }
        Ok(Some(out))
    }

    fn accumulate_exact(&self, out: &mut ExactMatrix, r0: usize, c0: usize, terms: &[(Element, Scalar)]) {
        for (g, c) in terms {
            let m = &self.images[g.index()];
            let coef = m.exact.as_ref().expect("exact images");
            for (j, cj) in coef.iter().enumerate().take(self.degree) {
                let idx = (r0 + m.perm[j]) * out.cols + c0 + j;
                out.data[idx] += &(c * cj);
            }
        }
    }
}

fn root_of_unity(j: usize, n: usize) -> Monomial {
    // exact only when every n-th root of unity is a Gaussian integer
    let exact = matches!(n, 1 | 2 | 4).then(|| match 4 * j / n {
        0 => Scalar::one(),
        1 => Scalar::i(),
        2 => Scalar::from_int(-1),
        _ => -Scalar::i(),
    });
    let coef = match &exact {
        Some(s) => s.to_complex64(),
        None => {
            let theta = 2.0 * core::f64::consts::PI * (j as f64) / (n as f64);
            Complex64::new(Float::cos(theta), Float::sin(theta))
        }
    };
    Monomial { perm: vec![0], coef: vec![coef], exact: exact.map(|s| vec![s]) }
}

/// Dense matrix of exact scalars, produced by exact representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_complex64())
    }
}
