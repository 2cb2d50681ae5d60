use std::sync::Arc;

use gainswitch::format::{graph_to_json, parse_graph, parse_partition, partition_to_json};
use gainswitch_core::graph::GainGraph;
use gainswitch_core::group::Group;
use gainswitch_core::switching::WQHPartition;
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = GainGraph> {
    (0usize..3, 1usize..8).prop_flat_map(|(kind, n)| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let m = pairs.len();
        (Just(kind), Just(n), Just(pairs), proptest::collection::vec(proptest::option::of(0usize..24), m))
            .prop_map(|(kind, n, pairs, gains)| {
                let group = Arc::new(match kind {
                    0 => Group::cyclic(5).unwrap(),
                    1 => Group::symmetric(3).unwrap(),
                    _ => Group::symmetric(4).unwrap(),
                });
                let edges = pairs
                    .into_iter()
                    .zip(gains)
                    .filter_map(|((u, v), k)| k.map(|k| (u, v, group.element(k % group.order()).unwrap())));
                GainGraph::new(&group, n, edges).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn graphs_round_trip(g in arb_graph(), name in proptest::option::of("[a-z0-9-]{1,8}")) {
        let text = graph_to_json(&g, name.clone(), None);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back.graph, &g);
        prop_assert_eq!(&back.name, &name);
        prop_assert_eq!(graph_to_json(&back.graph, back.name.clone(), None), text);
    }

    #[test]
    fn partitions_round_trip(sizes in proptest::collection::vec(1usize..4, 1..3), n0 in 0usize..3) {
        let mut cells = vec![(0..n0).collect::<Vec<_>>()];
        let mut next = n0;
        for s in sizes {
            for _ in 0..2 {
                cells.push((next..next + s).rev().collect());
                next += s;
            }
        }
        let p = WQHPartition::new(next, cells).unwrap();
        prop_assert_eq!(parse_partition(&partition_to_json(&p), next).unwrap(), p);
    }
}
