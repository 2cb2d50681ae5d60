//! Exact arithmetic in the group algebra `CG` and in matrices over it.
//!
//! `CG` is noncommutative whenever `G` is: every product here keeps its
//! left factor on the left. Scalars (`Scalar` multiples of `1_G`) are
//! central, so only they may be moved freely.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::group::{Element, Group};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands belong to different groups")]
    GroupMismatch,
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
}

/// Sorted, zero-free coefficient list of a group algebra element.
pub(crate) type Terms = Vec<(Element, Scalar)>;

pub(crate) fn same_group(a: &Arc<Group>, b: &Arc<Group>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn normalize(mut raw: Terms) -> Terms {
    raw.sort_by_key(|(e, _)| *e);
    let mut out: Terms = Vec::with_capacity(raw.len());
    for (e, c) in raw {
        match out.last_mut() {
            Some((last, acc)) if *last == e => *acc += &c,
            _ => out.push((e, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

pub(crate) fn terms_add(x: &[(Element, Scalar)], y: &[(Element, Scalar)]) -> Terms {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            core::cmp::Ordering::Less => {
                out.push(x[i].clone());
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(y[j].clone());
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let c = &x[i].1 + &y[j].1;
                if !c.is_zero() {
                    out.push((x[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&y[j..]);
    out
}

pub(crate) fn terms_neg(x: &[(Element, Scalar)]) -> Terms {
    x.iter().map(|(e, c)| (*e, -c)).collect()
}

pub(crate) fn terms_scale(x: &[(Element, Scalar)], s: &Scalar) -> Terms {
    if s.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(e, c)| (*e, s * c)).collect()
}

pub(crate) fn terms_mul(g: &Group, x: &[(Element, Scalar)], y: &[(Element, Scalar)]) -> Terms {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    // right factor a single scalar multiple of 1_G: coefficients only
    if y.len() == 1 && y[0].0.is_identity() {
        return terms_scale(x, &y[0].1);
    }
    if x.len() == 1 && x[0].0.is_identity() {
        return terms_scale(y, &x[0].1);
    }
    let mut raw = Vec::with_capacity(x.len() * y.len());
    for (a, ca) in x {
        for (b, cb) in y {
            raw.push((g.op(*a, *b), ca * cb));
        }
    }
    normalize(raw)
}

pub(crate) fn terms_star(g: &Group, x: &[(Element, Scalar)]) -> Terms {
    normalize(x.iter().map(|(e, c)| (g.inverse(*e), c.conj())).collect())
}

/// A finitely supported element `sum a_x x` of `CG`.
#[derive(Clone)]
pub struct GroupAlgebraElement {
    group: Arc<Group>,
    terms: Terms,
}

impl GroupAlgebraElement {
    pub fn zero(group: &Arc<Group>) -> Self {
        GroupAlgebraElement { group: group.clone(), terms: Vec::new() }
    }

    /// `1 * g`.
    pub fn from_element(group: &Arc<Group>, g: Element) -> Self {
        GroupAlgebraElement::term(group, Scalar::one(), g)
    }

    /// `c * g`.
    pub fn term(group: &Arc<Group>, c: Scalar, g: Element) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(g, c)] };
        GroupAlgebraElement { group: group.clone(), terms }
    }

    /// `c * 1_G`.
    pub fn scalar(group: &Arc<Group>, c: Scalar) -> Self {
        GroupAlgebraElement::term(group, c, Element::IDENTITY)
    }

    pub fn one(group: &Arc<Group>) -> Self {
        GroupAlgebraElement::scalar(group, Scalar::one())
    }

    /// Builds an element from arbitrary `(element, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(group: &Arc<Group>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Element, Scalar)>,
    {
        GroupAlgebraElement { group: group.clone(), terms: normalize(terms.into_iter().collect()) }
    }

    /// Sum of `1 * g` over the given elements (with multiplicity).
    pub fn sum_of<I: IntoIterator<Item = Element>>(group: &Arc<Group>, elems: I) -> Self {
        GroupAlgebraElement::from_terms(group, elems.into_iter().map(|e| (e, Scalar::one())))
    }

    pub(crate) fn from_raw(group: &Arc<Group>, terms: Terms) -> Self {
        GroupAlgebraElement { group: group.clone(), terms }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn terms(&self) -> &[(Element, Scalar)] {
        &self.terms
    }

    pub fn coefficient(&self, g: Element) -> Scalar {
        self.terms
            .binary_search_by_key(&g, |(e, _)| *e)
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the element equals `c * 1_G` (including zero).
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(e, c)] if e.is_identity() => Some(c.clone()),
            _ => None,
        }
    }

    /// `Some((c, g))` when the element is a single term `c * g`.
    pub fn as_single_term(&self) -> Option<(&Scalar, Element)> {
        match self.terms.as_slice() {
            [(e, c)] => Some((c, *e)),
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(AlgebraError::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(Self::from_raw(&self.group, terms_add(&self.terms, &other.terms)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(Self::from_raw(&self.group, terms_add(&self.terms, &terms_neg(&other.terms))))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_raw(&self.group, terms_scale(&self.terms, c))
    }

    /// Convolution product `(sum a_x x)(sum b_y y) = sum a_x b_y (xy)`.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(Self::from_raw(&self.group, terms_mul(&self.group, &self.terms, &other.terms)))
    }

    /// `sum a_x x  ->  sum conj(a_x) x^{-1}`.
    pub fn star(&self) -> Self {
        Self::from_raw(&self.group, terms_star(&self.group, &self.terms))
    }

    /// Replaces every `g` in the support by `h g h^{-1}`.
    pub fn conjugated_by(&self, h: Element) -> Self {
        let g = &self.group;
        Self::from_terms(g, self.terms.iter().map(|(e, c)| (g.conjugate(h, *e), c.clone())))
    }

    /// Class projection: sums coefficients over each conjugacy class.
    pub fn mu(&self) -> ClassFunction {
        let mut values: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (e, c) in &self.terms {
            *values.entry(self.group.conjugacy_class_of(*e)).or_default() += c;
        }
        values.retain(|_, v| !v.is_zero());
        ClassFunction { group: self.group.clone(), values }
    }
}

impl PartialEq for GroupAlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.terms == other.terms
    }
}

impl Eq for GroupAlgebraElement {}

pub(crate) fn fmt_terms(g: &Group, terms: &[(Element, Scalar)]) -> String {
    if terms.is_empty() {
        return String::from("0");
    }
    let mut s = String::new();
    for (k, (e, c)) in terms.iter().enumerate() {
        let label = g.label(*e);
        let (neg, mag) = if c.is_real() && c.re().is_negative() {
            (true, -c)
        } else {
            (false, c.clone())
        };
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            s.push_str(label);
        } else if mag.is_real() || mag.re().is_zero() {
            s.push_str(&alloc::format!("{mag}*{label}"));
        } else {
            s.push_str(&alloc::format!("({mag})*{label}"));
        }
    }
    s
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_terms(&self.group, &self.terms))
    }
}

impl fmt::Debug for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A class function, stored sparsely by conjugacy class id; absent classes are zero.
#[derive(Clone)]
pub struct ClassFunction {
    group: Arc<Group>,
    values: BTreeMap<usize, Scalar>,
}

impl ClassFunction {
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn value(&self, class: usize) -> Scalar {
        self.values.get(&class).cloned().unwrap_or_default()
    }

    /// Nonzero `(class id, value)` pairs in class order.
    pub fn values(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.values.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.values == other.values
    }
}

impl Eq for ClassFunction {}

impl fmt::Display for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return f.write_str("0");
        }
        f.write_str("{")?;
        for (k, (class, v)) in self.values.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            let rep = Element::from_index(self.group.classes()[*class][0]);
            write!(f, "[{}]: {}", self.group.label(rep), v)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dense matrix over `CG`.
#[derive(Clone)]
pub struct GaMatrix {
    group: Arc<Group>,
    rows: usize,
    cols: usize,
    entries: Vec<Terms>,
}

impl GaMatrix {
    pub fn zeros(group: &Arc<Group>, rows: usize, cols: usize) -> Self {
        GaMatrix { group: group.clone(), rows, cols, entries: vec![Vec::new(); rows * cols] }
    }

    /// `I_n` with `1 * 1_G` on the diagonal.
    pub fn identity(group: &Arc<Group>, n: usize) -> Self {
        let mut m = GaMatrix::zeros(group, n, n);
        for i in 0..n {
            m.entries[i * n + i] = vec![(Element::IDENTITY, Scalar::one())];
        }
        m
    }

    /// `J` with every entry `1 * 1_G`.
    pub fn all_ones(group: &Arc<Group>, rows: usize, cols: usize) -> Self {
        GaMatrix {
            group: group.clone(),
            rows,
            cols,
            entries: vec![vec![(Element::IDENTITY, Scalar::one())]; rows * cols],
        }
    }

    pub fn from_fn<F>(group: &Arc<Group>, rows: usize, cols: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> GroupAlgebraElement,
    {
        let mut m = GaMatrix::zeros(group, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                debug_assert!(same_group(group, &x.group));
                m.entries[i * cols + j] = x.terms;
            }
        }
        m
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> GroupAlgebraElement {
        GroupAlgebraElement::from_raw(&self.group, self.entries[i * self.cols + j].clone())
    }

    pub(crate) fn raw(&self, i: usize, j: usize) -> &Terms {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: GroupAlgebraElement) -> Result<(), AlgebraError> {
        if !same_group(&self.group, &x.group) {
            return Err(AlgebraError::GroupMismatch);
        }
        self.entries[i * self.cols + j] = x.terms;
        Ok(())
    }

    pub(crate) fn set_raw(&mut self, i: usize, j: usize, t: Terms) {
        self.entries[i * self.cols + j] = t;
    }

    pub fn is_zero_entry(&self, i: usize, j: usize) -> bool {
        self.entries[i * self.cols + j].is_empty()
    }

    fn check_same(&self, other: &Self, op: &'static str) -> Result<(), AlgebraError> {
        if !same_group(&self.group, &other.group) {
            return Err(AlgebraError::GroupMismatch);
        }
        if self.shape() != other.shape() {
            return Err(AlgebraError::Shape { op, left: self.shape(), right: other.shape() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other, "add")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| terms_add(a, b))
            .collect();
        Ok(GaMatrix { entries, ..self.clone_empty() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other, "sub")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| terms_add(a, &terms_neg(b)))
            .collect();
        Ok(GaMatrix { entries, ..self.clone_empty() })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let entries = self.entries.iter().map(|a| terms_scale(a, c)).collect();
        GaMatrix { entries, ..self.clone_empty() }
    }

    fn clone_empty(&self) -> Self {
        GaMatrix { group: self.group.clone(), rows: self.rows, cols: self.cols, entries: Vec::new() }
    }

    /// Matrix product over `CG`; entry `(i, j)` is `sum_k A[i][k] * B[k][j]` in that order.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if !same_group(&self.group, &other.group) {
            return Err(AlgebraError::GroupMismatch);
        }
        if self.cols != other.rows {
            return Err(AlgebraError::Shape { op: "mul", left: self.shape(), right: other.shape() });
        }
        let g = &*self.group;
        let mut out = GaMatrix::zeros(&self.group, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.raw(i, k);
                if a.is_empty() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.raw(k, j);
                    if b.is_empty() {
                        continue;
                    }
                    let p = terms_mul(g, a, b);
                    let slot = &mut out.entries[i * other.cols + j];
                    *slot = terms_add(slot, &p);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose with `star` applied entrywise.
    pub fn star(&self) -> Self {
        let g = &*self.group;
        let mut out = GaMatrix::zeros(&self.group, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = terms_star(g, self.raw(i, j));
            }
        }
        out
    }

    pub fn trace(&self) -> Result<GroupAlgebraElement, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::Shape { op: "trace", left: self.shape(), right: self.shape() });
        }
        let mut acc = Vec::new();
        for i in 0..self.rows {
            acc = terms_add(&acc, self.raw(i, i));
        }
        Ok(GroupAlgebraElement::from_raw(&self.group, acc))
    }

    /// `self^h` for `h >= 1` by repeated multiplication.
    pub fn pow(&self, h: usize) -> Result<Self, AlgebraError> {
        assert!(h >= 1, "power must be positive");
        let mut p = self.clone();
        for _ in 1..h {
            p = p.mul(self)?;
        }
        Ok(p)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = GaMatrix::zeros(&self.group, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.entries[a * cols.len() + b] = self.raw(i, j).clone();
            }
        }
        out
    }

    /// True when every entry is a complex multiple of `1_G` (zero included).
    pub fn is_scalar_valued(&self) -> bool {
        self.entries
            .iter()
            .all(|t| t.is_empty() || (t.len() == 1 && t[0].0.is_identity()))
    }

    pub fn row_sum(&self, i: usize) -> GroupAlgebraElement {
        let mut acc = Vec::new();
        for j in 0..self.cols {
            acc = terms_add(&acc, self.raw(i, j));
        }
        GroupAlgebraElement::from_raw(&self.group, acc)
    }

    pub fn col_sum(&self, j: usize) -> GroupAlgebraElement {
        let mut acc = Vec::new();
        for i in 0..self.rows {
            acc = terms_add(&acc, self.raw(i, j));
        }
        GroupAlgebraElement::from_raw(&self.group, acc)
    }

    pub fn total(&self) -> GroupAlgebraElement {
        let mut acc = Vec::new();
        for t in &self.entries {
            acc = terms_add(&acc, t);
        }
        GroupAlgebraElement::from_raw(&self.group, acc)
    }
}

impl PartialEq for GaMatrix {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group)
            && self.shape() == other.shape()
            && self.entries == other.entries
    }
}

impl Eq for GaMatrix {}

impl fmt::Display for GaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(&fmt_terms(&self.group, self.raw(i, j)))?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Which structured matrix [`structured`] builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structured {
    Identity,
    AllOnes,
}

pub fn structured(group: &Arc<Group>, n: usize, kind: Structured) -> GaMatrix {
    match kind {
        Structured::Identity => GaMatrix::identity(group, n),
        Structured::AllOnes => GaMatrix::all_ones(group, n, n),
    }
}
