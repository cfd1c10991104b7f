use super::{Matching, WeightedGraph};
use crate::error::{Error, Result};

pub const BRUTE_FORCE_VERTEX_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Cardinality,
    Weight,
}

/// Optimal matching by enumerating every matching of the graph.
///
/// Among optima the lexicographically smallest sorted edge list wins.
pub fn brute_force_matching(g: &WeightedGraph, objective: Objective) -> Result<Matching> {
    let n = g.base().vertex_count();
    if n > BRUTE_FORCE_VERTEX_LIMIT {
        return Err(Error::OracleLimit {
            size: n,
            limit: BRUTE_FORCE_VERTEX_LIMIT,
        });
    }
    let mut search = Search {
        g,
        objective,
        used: vec![false; n],
        current: Vec::new(),
        best: Vec::new(),
        best_score: 0,
    };
    search.recurse(0, 0);
    Ok(Matching::from_edges(search.best))
}

struct Search<'a> {
    g: &'a WeightedGraph,
    objective: Objective,
    used: Vec<bool>,
    current: Vec<(usize, usize)>,
    best: Vec<(usize, usize)>,
    best_score: u64,
}

impl Search<'_> {
    fn recurse(&mut self, from: usize, score: u64) {
        let n = self.used.len();
        let mut v = from;
        while v < n && self.used[v] {
            v += 1;
        }
        if v >= n {
            // `current` is built in increasing order of its low endpoint,
            // so it is already sorted.
            if score > self.best_score || (score == self.best_score && self.current < self.best) {
                self.best_score = score;
                self.best = self.current.clone();
            }
            return;
        }
        self.used[v] = true;
        let g = self.g.base();
        for &u in g.neighbors(v) {
            if u < v || self.used[u] {
                continue;
            }
            let gain = match self.objective {
                Objective::Cardinality => 1,
                Objective::Weight => self.g.weight(v, u).unwrap_or(0),
            };
            self.used[u] = true;
            self.current.push((v, u));
            self.recurse(v + 1, score + gain);
            self.current.pop();
            self.used[u] = false;
        }
        // v stays unmatched
        self.recurse(v + 1, score);
        self.used[v] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::CompatGraph;

    #[test]
    fn empty_and_complete() {
        let e = WeightedGraph::unit(CompatGraph::empty(3));
        assert!(brute_force_matching(&e, Objective::Weight).unwrap().is_empty());
        let k4 = WeightedGraph::unit(CompatGraph::complete(4));
        let m = brute_force_matching(&k4, Objective::Cardinality).unwrap();
        assert_eq!(m.edges(), &[(0, 1), (2, 3)]);
    }

    #[test]
    fn rejects_large_graphs() {
        let g = WeightedGraph::unit(CompatGraph::empty(17));
        assert!(matches!(
            brute_force_matching(&g, Objective::Weight),
            Err(Error::OracleLimit { size: 17, .. })
        ));
    }
}
