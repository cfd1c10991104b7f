use batchsched::matching::{
    brute_force_matching, max_cardinality_matching, max_weighted_matching, CompatGraph, Objective,
    WeightedGraph,
};
use proptest::prelude::*;

fn weighted_graph() -> impl Strategy<Value = WeightedGraph> {
    (1usize..=10)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                Just(n),
                prop::collection::vec(prop::option::weighted(0.5, 1u64..=100), pairs),
            )
        })
        .prop_map(|(n, slots)| {
            let mut edges = Vec::new();
            let mut weights = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if let Some(w) = slots[k] {
                        edges.push((a, b));
                        weights.push(w);
                    }
                    k += 1;
                }
            }
            WeightedGraph::new(CompatGraph::new(n, &edges).unwrap(), weights).unwrap()
        })
}

proptest! {
    #[test]
    fn weighted_equals_brute_force(g in weighted_graph()) {
        let fast = max_weighted_matching(&g);
        prop_assert!(fast.is_valid_for(g.base()));
        let slow = brute_force_matching(&g, Objective::Weight).unwrap();
        prop_assert_eq!(fast.weight(&g), slow.weight(&g));
    }

    #[test]
    fn cardinality_equals_brute_force(g in weighted_graph()) {
        let fast = max_cardinality_matching(g.base());
        prop_assert!(fast.is_valid_for(g.base()));
        let slow = brute_force_matching(&g, Objective::Cardinality).unwrap();
        prop_assert_eq!(fast.len(), slow.len());
    }

    #[test]
    fn deterministic(g in weighted_graph()) {
        prop_assert_eq!(max_weighted_matching(&g), max_weighted_matching(&g));
        prop_assert_eq!(max_cardinality_matching(g.base()), max_cardinality_matching(g.base()));
    }
}

#[test]
fn perfect_matching_on_even_complete_graphs() {
    for n in [2, 8, 50] {
        let g = CompatGraph::complete(n);
        assert_eq!(max_cardinality_matching(&g).len(), n / 2);
        assert_eq!(max_weighted_matching(&WeightedGraph::unit(g)).len(), n / 2);
    }
}

#[test]
fn odd_cycle_needs_blossom() {
    // A 5-cycle with a pendant edge: the maximum matching uses the pendant.
    let g = CompatGraph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (4, 5)]).unwrap();
    assert_eq!(max_cardinality_matching(&g).len(), 3);
}
