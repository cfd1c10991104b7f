//! Maximum weight and maximum cardinality matchings on a small graph,
//! checked against exhaustive enumeration.

use batchsched::matching::{
    brute_force_matching, max_cardinality_matching, max_weighted_matching, CompatGraph, Objective,
    WeightedGraph,
};

fn main() -> batchsched::Result<()> {
    // A 5-cycle with one chord.
    let g = CompatGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)])?;
    let w = WeightedGraph::new(g.clone(), vec![4, 7, 1, 6, 2, 9])?;

    let best = max_weighted_matching(&w);
    let check = brute_force_matching(&w, Objective::Weight)?;
    println!("weighted: {:?} weight {}", best.edges(), best.weight(&w));
    assert_eq!(best.weight(&w), check.weight(&w));

    let card = max_cardinality_matching(&g);
    println!("cardinality: {:?} size {}", card.edges(), card.len());
    Ok(())
}
