//! Built-in instances.
//!
//! `t4-13` is a 13-vertex graph over `T_4` given by its adjacency matrix.
//! `s4-17` is a 17-vertex graph over `S_4`: vertex 0 forms `C_0`; `C_1` is a
//! 4-cycle with alternating gains `e` and `(12)(34)`; `C_2` is a 4-cycle with
//! alternating gains `(12)` and `(34)`; `C_3` and `C_4` have no internal
//! edges; vertex 0 is joined with gain `e` to all of `C_1` and to one vertex
//! each of `C_3` and `C_4`. Vertex 0 meets pair 0 in case (b) with
//! `g1 = e, g2 = 0` and pair 1 in case (a).

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{GaMatrix, GroupAlgebraElement};
use crate::graph::GainGraph;
use crate::group::Group;
use crate::switching::WQHPartition;

pub const NAMES: [&str; 2] = ["t4-13", "s4-17"];

/// A graph with its partition.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub graph: GainGraph,
    pub partition: WQHPartition,
}

pub fn by_name(name: &str) -> Option<Fixture> {
    match name {
        "t4-13" => Some(t4_13()),
        "s4-17" => Some(s4_17()),
        _ => None,
    }
}

/// Entries of the `t4-13` adjacency matrix: `0` absent, else `z^(code - 1)`,
/// so `1` is the gain 1, `2` is `i` and `4` is `-i`.
pub const T4_13_MATRIX: [[u8; 13]; 13] = [
    [0, 1, 1, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 2, 4, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 4, 0, 2, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 2, 4, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 4],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0, 2],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 4, 0],
];

pub fn t4_13_matrix(group: &Arc<Group>) -> GaMatrix {
    GaMatrix::from_fn(group, 13, 13, |i, j| match T4_13_MATRIX[i][j] {
        0 => GroupAlgebraElement::zero(group),
        code => GroupAlgebraElement::from_element(group, group.element(code as usize - 1).unwrap()),
    })
}

pub fn t4_13() -> Fixture {
    let group = Arc::new(Group::cyclic(4).expect("T_4"));
    let graph = GainGraph::from_adjacency(&t4_13_matrix(&group)).expect("valid fixture matrix");
    let cells = vec![vec![0], vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9], vec![10, 11, 12]];
    let partition = WQHPartition::new(13, cells).expect("valid fixture partition");
    Fixture { name: "t4-13", graph, partition }
}

pub fn s4_17() -> Fixture {
    let group = Arc::new(Group::symmetric(4).expect("S_4"));
    let g = |label: &str| group.element_by_label(label).expect("S_4 label");
    let (e, dbl, t12, t34) = (g("e"), g("(12)(34)"), g("(12)"), g("(34)"));
    let mut edges: Vec<(usize, usize, _)> = vec![
        (1, 2, e),
        (2, 3, dbl),
        (3, 4, e),
        (4, 1, dbl),
        (5, 6, t12),
        (6, 7, t34),
        (7, 8, t12),
        (8, 5, t34),
    ];
    edges.extend((1..=4).map(|w| (0, w, e)));
    edges.extend([(0, 9, e), (0, 13, e)]);
    let graph = GainGraph::new(&group, 17, edges).expect("valid fixture graph");
    let cells = vec![
        vec![0],
        (1..=4).collect(),
        (5..=8).collect(),
        (9..=12).collect(),
        (13..=16).collect(),
    ];
    let partition = WQHPartition::new(17, cells).expect("valid fixture partition");
    Fixture { name: "s4-17", graph, partition }
}
