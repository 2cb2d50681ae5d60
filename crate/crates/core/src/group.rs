//! Finite groups given by multiplication tables, with eagerly computed
//! conjugacy classes.
//!
//! Every group keeps its identity at index 0. Cyclic groups stand for the
//! roots of unity `T_n`, with `z^j` labelling `exp(2 pi i j / n)`. Symmetric
//! groups act on `{1, ..., n}` and compose right to left: `(a * b)(x) = a(b(x))`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Largest symmetric group degree accepted by [`Group::symmetric`].
pub const MAX_SYMMETRIC_DEGREE: usize = 8;

/// Symmetric groups up to this order get a materialised Cayley table;
/// larger ones compose permutations on demand.
const TABLE_ORDER_LIMIT: usize = 720;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group must have at least one element")]
    Empty,
    #[error("symmetric group degree {n} exceeds the limit {max}")]
    SizeLimit { n: usize, max: usize },
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("table must be {order}x{order}, row {row} has {len} entries")]
    TableShape { order: usize, row: usize, len: usize },
    #[error("table entry ({row}, {col}) = {value} is out of range")]
    TableEntry { row: usize, col: usize, value: usize },
    #[error("index 0 ({label}) is not a two-sided identity: {label} * {other} != {other}")]
    Identity { label: String, other: String },
    #[error("element {0} has no two-sided inverse")]
    Inverse(String),
    #[error("not associative: ({a} * {b}) * {c} != {a} * ({b} * {c})")]
    Associativity { a: String, b: String, c: String },
    #[error("element index {index} out of range for group of order {order}")]
    OutOfRange { index: usize, order: usize },
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
    #[error("operands belong to different groups")]
    Mismatch,
}

/// A group element, identified by its index in the owning group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u32);

impl Element {
    pub const IDENTITY: Element = Element(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Element {
        Element(i as u32)
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

/// How the group was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    Symmetric(usize),
    Table,
}

/// Constructor input, mirroring the `group` object of the graph file format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Symmetric(usize),
    Table { labels: Vec<String>, table: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Product {
    Table(Vec<u32>),
    Permutations { degree: usize, perms: Vec<Vec<u8>> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    kind: GroupKind,
    labels: Vec<String>,
    product: Product,
    inverses: Vec<u32>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    by_label: BTreeMap<String, usize>,
}

impl Group {
    pub fn from_spec(spec: &GroupSpec) -> Result<Group, GroupError> {
        match spec {
            GroupSpec::Cyclic(n) => Group::cyclic(*n),
            GroupSpec::Symmetric(n) => Group::symmetric(*n),
            GroupSpec::Table { labels, table } => Group::from_table(labels.clone(), table.clone()),
        }
    }

    /// The cyclic group `T_n` of `n`-th roots of unity, labelled `z^0 .. z^{n-1}`.
    pub fn cyclic(n: usize) -> Result<Group, GroupError> {
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let labels = (0..n).map(|j| alloc::format!("z^{j}")).collect();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(((a + b) % n) as u32);
            }
        }
        let inverses = (0..n).map(|a| ((n - a) % n) as u32).collect();
        Ok(Group::assemble(GroupKind::Cyclic(n), labels, Product::Table(table), inverses, None))
    }

    /// The symmetric group on `n` points, elements labelled in cycle notation
    /// with `e` for the identity.
    pub fn symmetric(n: usize) -> Result<Group, GroupError> {
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > MAX_SYMMETRIC_DEGREE {
            return Err(GroupError::SizeLimit { n, max: MAX_SYMMETRIC_DEGREE });
        }
        let perms = permutations_lex(n);
        let order = perms.len();
        let labels: Vec<String> = perms.iter().map(|p| cycle_notation(p)).collect();
        let inverses: Vec<u32> = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0u8; n];
                for (i, &pi) in p.iter().enumerate() {
                    inv[pi as usize] = i as u8;
                }
                perm_rank(&inv) as u32
            })
            .collect();
        let cycle_types: Vec<Vec<usize>> = perms.iter().map(|p| cycle_type(p)).collect();
        let product = if order <= TABLE_ORDER_LIMIT {
            let mut table = Vec::with_capacity(order * order);
            for a in &perms {
                for b in &perms {
                    table.push(perm_rank(&compose(a, b)) as u32);
                }
            }
            Product::Table(table)
        } else {
            Product::Permutations { degree: n, perms }
        };
        Ok(Group::assemble(GroupKind::Symmetric(n), labels, product, inverses, Some(cycle_types)))
    }

    /// An arbitrary finite group from its Cayley table; `table[a][b]` is the
    /// index of `a * b` and index 0 must be the identity.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Group, GroupError> {
        let order = labels.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        let mut by_label = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if by_label.insert(l.clone(), i).is_some() {
                return Err(GroupError::DuplicateLabel(l.clone()));
            }
        }
        if table.len() != order {
            return Err(GroupError::TableShape { order, row: table.len(), len: 0 });
        }
        let mut flat = Vec::with_capacity(order * order);
        for (r, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::TableShape { order, row: r, len: row.len() });
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(GroupError::TableEntry { row: r, col: c, value: v });
                }
                flat.push(v as u32);
            }
        }
        let at = |a: usize, b: usize| flat[a * order + b] as usize;
        for x in 0..order {
            if at(0, x) != x || at(x, 0) != x {
                return Err(GroupError::Identity {
                    label: labels[0].clone(),
                    other: labels[x].clone(),
                });
            }
        }
        let mut inverses = Vec::with_capacity(order);
        for (x, label) in labels.iter().enumerate().take(order) {
            match (0..order).find(|&y| at(x, y) == 0 && at(y, x) == 0) {
                Some(y) => inverses.push(y as u32),
                None => return Err(GroupError::Inverse(label.clone())),
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::Associativity {
                            a: labels[a].clone(),
                            b: labels[b].clone(),
                            c: labels[c].clone(),
                        });
                    }
                }
            }
        }
        Ok(Group::assemble(GroupKind::Table, labels, Product::Table(flat), inverses, None))
    }

    fn assemble(
        kind: GroupKind,
        labels: Vec<String>,
        product: Product,
        inverses: Vec<u32>,
        cycle_types: Option<Vec<Vec<usize>>>,
    ) -> Group {
        let by_label = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let mut group = Group {
            kind,
            labels,
            product,
            inverses,
            class_of: Vec::new(),
            classes: Vec::new(),
            by_label,
        };
        match cycle_types {
            // Conjugacy in S_n is equality of cycle type.
            Some(types) => group.set_classes_by_key(&types),
            None => group.compute_classes_brute_force(),
        }
        group
    }

    fn set_classes_by_key(&mut self, keys: &[Vec<usize>]) {
        let mut seen: BTreeMap<&[usize], usize> = BTreeMap::new();
        let mut class_of = Vec::with_capacity(keys.len());
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, key) in keys.iter().enumerate() {
            let id = *seen.entry(key.as_slice()).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[id].push(i);
            class_of.push(id);
        }
        self.class_of = class_of;
        self.classes = classes;
    }

    fn compute_classes_brute_force(&mut self) {
        let order = self.order();
        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for g in 0..order {
            if class_of[g] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = Vec::new();
            for h in 0..order {
                let c = self.conjugate(Element::from_index(h), Element::from_index(g)).index();
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    members.push(c);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        self.class_of = class_of;
        self.classes = classes;
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order()
    }

    pub fn identity(&self) -> Element {
        Element::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order()).map(Element::from_index)
    }

    /// Validated element handle for `index`.
    pub fn element(&self, index: usize) -> Result<Element, GroupError> {
        if index < self.order() {
            Ok(Element::from_index(index))
        } else {
            Err(GroupError::OutOfRange { index, order: self.order() })
        }
    }

    pub fn element_by_label(&self, label: &str) -> Result<Element, GroupError> {
        self.by_label
            .get(label)
            .map(|&i| Element::from_index(i))
            .ok_or_else(|| GroupError::UnknownLabel(label.to_string()))
    }

    pub fn label(&self, e: Element) -> &str {
        &self.labels[e.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The group product `a * b`.
    pub fn op(&self, a: Element, b: Element) -> Element {
        match &self.product {
            Product::Table(t) => Element(t[a.index() * self.order() + b.index()]),
            Product::Permutations { perms, .. } => {
                Element::from_index(perm_rank(&compose(&perms[a.index()], &perms[b.index()])))
            }
        }
    }

    /// `a * b` with both operands range-checked against this group.
    pub fn try_op(&self, a: Element, b: Element) -> Result<Element, GroupError> {
        self.element(a.index())?;
        self.element(b.index())?;
        Ok(self.op(a, b))
    }

    pub fn inverse(&self, a: Element) -> Element {
        Element(self.inverses[a.index()])
    }

    /// `h g h^{-1}`.
    pub fn conjugate(&self, h: Element, g: Element) -> Element {
        self.op(self.op(h, g), self.inverse(h))
    }

    /// Element order (smallest `m >= 1` with `a^m = 1`).
    pub fn element_order(&self, a: Element) -> usize {
        let mut m = 1;
        let mut x = a;
        while !x.is_identity() {
            x = self.op(x, a);
            m += 1;
        }
        m
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Conjugacy classes as sorted element index lists; class 0 is `{1_G}`.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn conjugacy_class_of(&self, a: Element) -> usize {
        self.class_of[a.index()]
    }

    /// One-line notation, 0-based: `p[x]` is the image of point `x + 1`, minus one.
    pub fn permutation(&self, a: Element) -> Option<Vec<usize>> {
        match (&self.kind, &self.product) {
            (_, Product::Permutations { perms, .. }) => {
                Some(perms[a.index()].iter().map(|&x| x as usize).collect())
            }
            (GroupKind::Symmetric(n), Product::Table(_)) => {
                Some(perm_unrank(*n, a.index()).into_iter().map(usize::from).collect())
            }
            _ => None,
        }
    }

    /// Degree of the permutation representation, if this is a symmetric group.
    pub fn degree(&self) -> Option<usize> {
        match self.kind {
            GroupKind::Symmetric(n) => Some(n),
            _ => None,
        }
    }

    pub fn spec(&self) -> GroupSpec {
        match self.kind {
            GroupKind::Cyclic(n) => GroupSpec::Cyclic(n),
            GroupKind::Symmetric(n) => GroupSpec::Symmetric(n),
            GroupKind::Table => {
                let order = self.order();
                let table = (0..order)
                    .map(|a| {
                        (0..order)
                            .map(|b| self.op(Element::from_index(a), Element::from_index(b)).index())
                            .collect()
                    })
                    .collect();
                GroupSpec::Table { labels: self.labels.clone(), table }
            }
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::Cyclic(n) => write!(f, "T_{n}"),
            GroupKind::Symmetric(n) => write!(f, "S_{n}"),
            GroupKind::Table => write!(f, "group of order {}", self.order()),
        }
    }
}

// Permutations are stored 0-based in one-line notation.

fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn permutations_lex(n: usize) -> Vec<Vec<u8>> {
    let total: usize = (1..=n).product();
    (0..total).map(|r| perm_unrank(n, r)).collect()
}

/// Lexicographic rank (Lehmer code); the identity has rank 0.
fn perm_rank(p: &[u8]) -> usize {
    let n = p.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

fn perm_unrank(n: usize, mut rank: usize) -> Vec<u8> {
    let mut digits = vec![0usize; n];
    for i in (0..n).rev() {
        let base = n - i;
        digits[i] = rank % base;
        rank /= base;
    }
    let mut pool: Vec<u8> = (0..n as u8).collect();
    digits.into_iter().map(|d| pool.remove(d)).collect()
}

fn cycles(p: &[u8]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = p[x] as usize;
        }
        out.push(cycle);
    }
    out
}

fn cycle_type(p: &[u8]) -> Vec<usize> {
    let mut t: Vec<usize> = cycles(p).iter().map(Vec::len).collect();
    t.sort_unstable();
    t
}

fn cycle_notation(p: &[u8]) -> String {
    let mut s = String::new();
    for c in cycles(p).into_iter().filter(|c| c.len() > 1) {
        s.push('(');
        for x in c {
            s.push_str(&(x + 1).to_string());
        }
        s.push(')');
    }
    if s.is_empty() {
        s.push('e');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_conjugate(g: &Group, a: Element, b: Element) -> bool {
        g.elements().any(|h| g.conjugate(h, a) == b)
    }

    #[test]
    fn cyclic_four_is_abelian() {
        let g = Group::cyclic(4).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.class_count(), 4);
        assert_eq!(g.labels(), ["z^0", "z^1", "z^2", "z^3"]);
        let z1 = g.element_by_label("z^1").unwrap();
        let z3 = g.element_by_label("z^3").unwrap();
        assert_eq!(g.op(z1, z3), g.identity());
        assert_ne!(g.conjugacy_class_of(z1), g.conjugacy_class_of(z3));
    }

    #[test]
    fn symmetric_four_classes_match_brute_force() {
        let g = Group::symmetric(4).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.class_count(), 5);
        for a in g.elements() {
            for b in g.elements() {
                let same = g.conjugacy_class_of(a) == g.conjugacy_class_of(b);
                assert_eq!(same, brute_force_conjugate(&g, a, b));
            }
        }
    }

    #[test]
    fn symmetric_labels_and_products() {
        let g = Group::symmetric(4).unwrap();
        assert_eq!(g.label(g.identity()), "e");
        let t12 = g.element_by_label("(12)").unwrap();
        let t34 = g.element_by_label("(34)").unwrap();
        let t13_24 = g.element_by_label("(13)(24)").unwrap();
        assert_eq!(g.op(t12, t12), g.identity());
        assert_eq!(g.label(g.op(t12, t34)), "(12)(34)");
        assert_eq!(g.conjugate(t13_24, t12), t34);
        assert_eq!(g.conjugacy_class_of(t12), g.conjugacy_class_of(t34));
        // right to left: 1 -> 1 -> 2, 2 -> 3 -> 3, 3 -> 2 -> 1
        let t23 = g.element_by_label("(23)").unwrap();
        assert_eq!(g.label(g.op(t12, t23)), "(123)");
    }

    #[test]
    fn large_symmetric_group_without_table() {
        let g = Group::symmetric(7).unwrap();
        assert_eq!(g.order(), 5040);
        assert_eq!(g.class_count(), 15);
        let a = g.element_by_label("(1234567)").unwrap();
        assert_eq!(g.element_order(a), 7);
        let b = g.element_by_label("(12)").unwrap();
        assert_eq!(g.op(g.inverse(b), b), g.identity());
    }

    #[test]
    fn symmetric_size_limit() {
        assert_eq!(Group::symmetric(9), Err(GroupError::SizeLimit { n: 9, max: 8 }));
    }

    #[test]
    fn two_element_table() {
        let g = Group::from_table(
            vec!["e".into(), "s".into()],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.label(g.identity()), "e");
        assert_eq!(g.kind(), GroupKind::Table);
    }

    #[test]
    fn table_validation_errors() {
        let labels = || vec!["e".to_string(), "a".to_string(), "b".to_string()];
        // a*a = e, a*b = a breaks cancellation; row 1 has no inverse partner for b
        let bad_inverse = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]];
        assert!(matches!(
            Group::from_table(labels(), bad_inverse),
            Err(GroupError::Inverse(_))
        ));
        let bad_identity = vec![vec![0, 2, 1], vec![1, 0, 2], vec![2, 1, 0]];
        assert!(matches!(
            Group::from_table(labels(), bad_identity),
            Err(GroupError::Identity { .. })
        ));
        // a Latin square with identity and inverses that is not associative
        let loop_labels: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        let nonassoc = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            Group::from_table(loop_labels, nonassoc),
            Err(GroupError::Associativity { .. })
        ));
        assert!(matches!(
            Group::from_table(vec!["e".into(), "e".into()], vec![vec![0, 1], vec![1, 0]]),
            Err(GroupError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn try_op_rejects_foreign_index() {
        let g = Group::cyclic(2).unwrap();
        let big = Group::cyclic(5).unwrap().element(4).unwrap();
        assert!(g.try_op(big, g.identity()).is_err());
    }

    fn check_axioms(g: &Group) {
        for a in g.elements() {
            assert_eq!(g.inverse(g.inverse(a)), a);
            assert_eq!(g.op(g.inverse(a), a), g.identity());
            for b in g.elements() {
                for c in g.elements() {
                    assert_eq!(g.op(g.op(a, b), c), g.op(a, g.op(b, c)));
                }
            }
        }
        // classes partition the group and are closed under conjugation
        let mut count = 0;
        for (id, class) in g.classes().iter().enumerate() {
            count += class.len();
            for &x in class {
                assert_eq!(g.conjugacy_class_of(Element::from_index(x)), id);
                for h in g.elements() {
                    let y = g.conjugate(h, Element::from_index(x));
                    assert_eq!(g.conjugacy_class_of(y), id);
                }
            }
        }
        assert_eq!(count, g.order());
        assert_eq!(g.classes()[0], vec![0]);
    }

    #[test]
    fn exhaustive_axioms_small_groups() {
        for g in [
            Group::cyclic(1).unwrap(),
            Group::cyclic(4).unwrap(),
            Group::cyclic(12).unwrap(),
            Group::symmetric(3).unwrap(),
            Group::symmetric(4).unwrap(),
        ] {
            check_axioms(&g);
        }
    }

    #[test]
    fn table_round_trip_through_spec() {
        let s3 = Group::symmetric(3).unwrap();
        let order = s3.order();
        let table = (0..order)
            .map(|a| {
                (0..order)
                    .map(|b| s3.op(Element::from_index(a), Element::from_index(b)).index())
                    .collect()
            })
            .collect();
        let spec = GroupSpec::Table { labels: s3.labels().to_vec(), table };
        let copy = Group::from_spec(&spec).unwrap();
        assert_eq!(copy.class_count(), 3);
        assert_eq!(copy.spec(), spec);
        check_axioms(&copy);
    }
}
