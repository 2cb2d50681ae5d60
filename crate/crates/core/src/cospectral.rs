//! Spectral fingerprints `mu(Tr(A^h))`, group-algebra and represented
//! cospectrality, a closed-walk oracle and certificate checks.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::algebra::{same_group, AlgebraError, ClassFunction, GaMatrix, GroupAlgebraElement};
use crate::graph::GainGraph;
use crate::group::{Element, Group};
use crate::represent::{RepError, Representation};
use crate::scalar::Scalar;
use crate::spectrum::{hermitian_spectrum, max_eigen_gap, SpectrumError};

/// Walk enumeration limits of [`walk_trace_oracle`].
pub const ORACLE_MAX_VERTICES: usize = 8;
pub const ORACLE_MAX_LENGTH: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CospectralError {
    #[error("graphs are over different groups")]
    GroupMismatch,
    #[error("moment count must be at least 1")]
    NoMoments,
    #[error("walk enumeration limited to n <= {max_n} and h <= {max_h}; got n = {n}, h = {h}")]
    SizeLimit { n: usize, h: usize, max_n: usize, max_h: usize },
    #[error("walk length must be at least 1")]
    ZeroLength,
    #[error("certificate matrices must be square of one size")]
    Shape,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// `moments[h - 1] = mu(Tr(A^h))` for `h = 1..=H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralFingerprint {
    group: Arc<Group>,
    moments: Vec<ClassFunction>,
}

impl SpectralFingerprint {
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    pub fn moments(&self) -> &[ClassFunction] {
        &self.moments
    }

    /// Moment `h`, 1-based.
    pub fn moment(&self, h: usize) -> &ClassFunction {
        &self.moments[h - 1]
    }

    /// Smallest `h` where the two fingerprints differ, over their common length.
    pub fn first_difference(&self, other: &SpectralFingerprint) -> Option<usize> {
        self.moments.iter().zip(&other.moments).position(|(a, b)| a != b).map(|i| i + 1)
    }
}

/// Default moment bound `n * |G|`.
pub fn default_moments(g: &GainGraph) -> usize {
    (g.vertex_count() * g.group().order()).max(1)
}

/// Iterated powers of `a`, calling `visit(h, mu(Tr(A^h)))` until it returns `false`.
fn for_each_moment<F>(a: &GaMatrix, h_max: usize, mut visit: F) -> Result<(), CospectralError>
where
    F: FnMut(usize, ClassFunction) -> bool,
{
    let mut p = a.clone();
    for h in 1..=h_max {
        if h > 1 {
            p = p.mul(a)?;
        }
        if !visit(h, p.trace()?.mu()) {
            break;
        }
    }
    Ok(())
}

pub fn fingerprint(g: &GainGraph, h_max: usize) -> Result<SpectralFingerprint, CospectralError> {
    if h_max == 0 {
        return Err(CospectralError::NoMoments);
    }
    let mut moments = Vec::with_capacity(h_max);
    for_each_moment(&g.adjacency(), h_max, |_, m| {
        moments.push(m);
        true
    })?;
    Ok(SpectralFingerprint { group: g.group().clone(), moments })
}

/// Smallest `h <= h_max` with different moments, `Some(0)` for different
/// vertex counts, `None` if all agree. Stops at the first difference.
pub fn first_moment_difference(
    g1: &GainGraph,
    g2: &GainGraph,
    h_max: usize,
) -> Result<Option<usize>, CospectralError> {
    if !same_group(g1.group(), g2.group()) {
        return Err(CospectralError::GroupMismatch);
    }
    if h_max == 0 {
        return Err(CospectralError::NoMoments);
    }
    if g1.vertex_count() != g2.vertex_count() {
        return Ok(Some(0));
    }
    let (a1, a2) = (g1.adjacency(), g2.adjacency());
    let (mut p1, mut p2) = (a1.clone(), a2.clone());
    for h in 1..=h_max {
        if h > 1 {
            p1 = p1.mul(&a1)?;
            p2 = p2.mul(&a2)?;
        }
        if p1.trace()?.mu() != p2.trace()?.mu() {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Equal fingerprints for every `h <= h_max`.
pub fn g_cospectral(g1: &GainGraph, g2: &GainGraph, h_max: usize) -> Result<bool, CospectralError> {
    Ok(first_moment_difference(g1, g2, h_max)?.is_none())
}

/// Sorted spectrum of the represented adjacency matrix.
pub fn pi_spectrum(g: &GainGraph, rep: &Representation, tol: f64) -> Result<Vec<f64>, CospectralError> {
    Ok(hermitian_spectrum(&rep.apply_mat(&g.adjacency())?, tol)?)
}

/// Largest per-eigenvalue gap between the two represented spectra; `None`
/// for different vertex counts.
pub fn pi_spectral_gap(
    g1: &GainGraph,
    g2: &GainGraph,
    rep: &Representation,
    tol: f64,
) -> Result<Option<f64>, CospectralError> {
    if !same_group(g1.group(), g2.group()) {
        return Err(CospectralError::GroupMismatch);
    }
    if g1.vertex_count() != g2.vertex_count() {
        return Ok(None);
    }
    Ok(max_eigen_gap(&pi_spectrum(g1, rep, tol)?, &pi_spectrum(g2, rep, tol)?))
}

/// Sorted represented spectra agree within `tol` per eigenvalue.
pub fn pi_cospectral(
    g1: &GainGraph,
    g2: &GainGraph,
    rep: &Representation,
    tol: f64,
) -> Result<bool, CospectralError> {
    Ok(pi_spectral_gap(g1, g2, rep, tol)?.is_some_and(|gap| gap <= tol))
}

/// Sum of gain products over all closed walks of length `h`, by direct enumeration.
pub fn walk_trace_oracle(g: &GainGraph, h: usize) -> Result<GroupAlgebraElement, CospectralError> {
    let n = g.vertex_count();
    if h == 0 {
        return Err(CospectralError::ZeroLength);
    }
    if n > ORACLE_MAX_VERTICES || h > ORACLE_MAX_LENGTH {
        return Err(CospectralError::SizeLimit {
            n,
            h,
            max_n: ORACLE_MAX_VERTICES,
            max_h: ORACLE_MAX_LENGTH,
        });
    }
    let group = g.group();
    let mut counts = vec![0i64; group.order()];
    for start in 0..n {
        walk(g, start, start, h, group.identity(), &mut counts);
    }
    Ok(GroupAlgebraElement::from_terms(
        group,
        counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(i, c)| (Element::from_index(i), Scalar::from_int(c))),
    ))
}

fn walk(g: &GainGraph, start: usize, at: usize, left: usize, acc: Element, counts: &mut [i64]) {
    if left == 0 {
        if at == start {
            counts[acc.index()] += 1;
        }
        return;
    }
    for &next in g.neighbors(at) {
        let gain = g.gain(at, next).expect("neighbour has a gain");
        walk(g, start, next, left - 1, g.group().op(acc, gain), counts);
    }
}

/// `R` has only scalar multiples of the identity, `QR = RQ = I`, and `A2 = Q A1 R`.
pub fn certificate_check(
    a1: &GaMatrix,
    a2: &GaMatrix,
    q: &GaMatrix,
    r: &GaMatrix,
) -> Result<bool, CospectralError> {
    let n = a1.rows();
    if [a1, a2, q, r].iter().any(|m| m.shape() != (n, n)) {
        return Err(CospectralError::Shape);
    }
    if !r.is_scalar_valued() {
        return Ok(false);
    }
    let id = GaMatrix::identity(a1.group(), n);
    if q.mul(r)? != id || r.mul(q)? != id {
        return Ok(false);
    }
    Ok(q.mul(a1)?.mul(r)? == *a2)
}
