use std::collections::VecDeque;

use super::{CompatGraph, Matching};

const NONE: usize = usize::MAX;

/// Maximum cardinality matching via Edmonds' blossom shrinking, `O(n^3)`.
///
/// A greedy pass in vertex order seeds the matching, then one augmenting-path
/// search is run from every free vertex in index order. The result depends
/// only on the graph.
pub fn max_cardinality_matching(g: &CompatGraph) -> Matching {
    let n = g.vertex_count();
    let mut s = Edmonds {
        g,
        mate: vec![NONE; n],
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        blossom: vec![false; n],
        queue: VecDeque::new(),
    };
    for v in 0..n {
        if s.mate[v] != NONE {
            continue;
        }
        if let Some(&u) = g.neighbors(v).iter().find(|&&u| s.mate[u] == NONE) {
            s.mate[v] = u;
            s.mate[u] = v;
        }
    }
    for root in 0..n {
        if s.mate[root] != NONE {
            continue;
        }
        let mut v = s.find_path(root);
        while v != NONE {
            let pv = s.parent[v];
            let next = s.mate[pv];
            s.mate[v] = pv;
            s.mate[pv] = v;
            v = next;
        }
    }
    Matching::from_mates(&s.mate)
}

struct Edmonds<'a> {
    g: &'a CompatGraph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Edmonds<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut on_path = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            on_path[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if on_path[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Returns the free endpoint of an augmenting path from `root`, or `NONE`.
    fn find_path(&mut self, root: usize) -> usize {
        let n = self.mate.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in self.g.neighbors(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        NONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        assert!(max_cardinality_matching(&CompatGraph::empty(4)).is_empty());
        let path = CompatGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(max_cardinality_matching(&path).len(), 1);
        let c5 = CompatGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(max_cardinality_matching(&c5).len(), 2);
        assert_eq!(max_cardinality_matching(&CompatGraph::complete(6)).len(), 3);
    }

    #[test]
    fn needs_blossom() {
        // Triangle 0-1-2 with a pendant on each corner; greedy takes (0,1) first.
        let g = CompatGraph::new(6, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 4), (0, 5)]).unwrap();
        let m = max_cardinality_matching(&g);
        assert_eq!(m.len(), 3);
        assert!(m.is_valid_for(&g));
    }
}
