//! Exhaustive solver used as ground truth on small instances.
//!
//! Every batching (partition of the jobs into singletons and compatible
//! pairs) is enumerated exactly once by pairing the lowest-indexed
//! unassigned job with each compatible unassigned partner, or leaving it
//! alone. Each batching is then assigned to machines optimally. Bounds only
//! skip branches that cannot beat the incumbent, so the optimum is exact.

use crate::error::{Error, Result};
use crate::model::{Batch, Instance, Schedule, Time};

pub const DEFAULT_ORACLE_LIMIT: usize = 10;

/// Longest batch list [`assign_batches_optimally`] accepts.
pub const ASSIGN_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub optimum: Time,
    pub witness: Schedule,
    /// Number of batchings enumerated.
    pub explored: u64,
}

/// Minimum makespan over every feasible schedule of `inst`.
pub fn brute_force_solve(inst: &Instance, limit: usize) -> Result<OracleResult> {
    let n = inst.job_count();
    if n > limit {
        return Err(Error::OracleLimit { size: n, limit });
    }
    let mut search = PartitionSearch {
        inst,
        assigned: vec![false; n],
        batches: Vec::with_capacity(n),
        best: Time::MAX,
        best_batches: Vec::new(),
        best_assignment: Vec::new(),
        explored: 0,
    };
    search.recurse(0);

    let mut witness = Schedule::empty(inst.machine_count());
    for (batch, &k) in search.best_batches.iter().zip(&search.best_assignment) {
        witness.push(k, *batch);
    }
    debug_assert_eq!(inst.eval(&witness), search.best);
    Ok(OracleResult {
        optimum: search.best,
        witness,
        explored: search.explored,
    })
}

struct PartitionSearch<'a> {
    inst: &'a Instance,
    assigned: Vec<bool>,
    batches: Vec<Batch>,
    best: Time,
    best_batches: Vec<Batch>,
    best_assignment: Vec<usize>,
    explored: u64,
}

impl PartitionSearch<'_> {
    fn recurse(&mut self, from: usize) {
        let n = self.assigned.len();
        let Some(i) = (from..n).find(|&j| !self.assigned[j]) else {
            self.evaluate();
            return;
        };
        self.assigned[i] = true;

        self.batches.push(Batch::single(i));
        self.recurse(i + 1);
        self.batches.pop();

        for &j in self.inst.graph().neighbors(i) {
            if j < i || self.assigned[j] {
                continue;
            }
            self.assigned[j] = true;
            self.batches.push(Batch::pair(i, j));
            self.recurse(i + 1);
            self.batches.pop();
            self.assigned[j] = false;
        }
        self.assigned[i] = false;
    }

    fn evaluate(&mut self) {
        self.explored += 1;
        let durations: Vec<Time> = self.batches.iter().map(|b| self.inst.duration(b)).collect();
        let m = self.inst.machine_count();
        if lower_bound(&durations, self.inst.setup(), m) >= self.best {
            return;
        }
        if let Some((value, assignment)) = best_assignment(&durations, self.inst.setup(), m, self.best) {
            self.best = value;
            self.best_batches = self.batches.clone();
            self.best_assignment = assignment;
        }
    }
}

fn lower_bound(durations: &[Time], setup: Time, machines: usize) -> Time {
    if durations.is_empty() {
        return 0;
    }
    let b = durations.len() as Time;
    let k = (machines as Time).min(b);
    let work: Time = durations.iter().sum();
    // Fewer busy machines means fewer setups are saved; k busy machines is
    // the most favourable split.
    let spread = (work + (b - k) * setup).div_ceil(k);
    spread.max(durations.iter().copied().max().unwrap_or(0))
}

/// Minimum makespan of placing batches with the given durations on
/// `machines` identical machines, in any order per machine.
pub fn assign_batches_optimally(durations: &[Time], setup: Time, machines: usize) -> Result<Time> {
    if durations.len() > ASSIGN_LIMIT {
        return Err(Error::OracleLimit {
            size: durations.len(),
            limit: ASSIGN_LIMIT,
        });
    }
    if machines == 0 {
        return Err(Error::InvalidInstance("at least one machine is required".into()));
    }
    Ok(best_assignment(durations, setup, machines, Time::MAX)
        .map(|(v, _)| v)
        .unwrap_or(0))
}

/// Best assignment strictly better than `bound`, as (makespan, machine per batch).
fn best_assignment(
    durations: &[Time],
    setup: Time,
    machines: usize,
    bound: Time,
) -> Option<(Time, Vec<usize>)> {
    if durations.is_empty() {
        return (bound > 0).then(|| (0, Vec::new()));
    }
    let mut order: Vec<usize> = (0..durations.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(durations[i]));
    let mut a = Assign {
        durations,
        setup,
        order,
        // a machine's load counts one setup per batch; its span is load - setup
        loads: vec![0; machines.min(durations.len())],
        current: vec![0; durations.len()],
        best: bound,
        best_assignment: None,
    };
    a.recurse(0, 0);
    let best = a.best;
    a.best_assignment.map(|v| (best, v))
}

struct Assign<'a> {
    durations: &'a [Time],
    setup: Time,
    order: Vec<usize>,
    loads: Vec<Time>,
    current: Vec<usize>,
    best: Time,
    best_assignment: Option<Vec<usize>>,
}

impl Assign<'_> {
    fn recurse(&mut self, depth: usize, span: Time) {
        if depth == self.order.len() {
            if span < self.best {
                self.best = span;
                self.best_assignment = Some(self.current.clone());
            }
            return;
        }
        let batch = self.order[depth];
        let cost = self.durations[batch] + self.setup;
        for k in 0..self.loads.len() {
            // machines with equal loads are interchangeable
            if self.loads[..k].contains(&self.loads[k]) {
                continue;
            }
            let load = self.loads[k] + cost;
            let new_span = span.max(load - self.setup);
            if new_span >= self.best {
                continue;
            }
            self.loads[k] = load;
            self.current[batch] = k;
            self.recurse(depth + 1, new_span);
            self.loads[k] -= cost;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::CompatGraph;
    use crate::model::{validate, Mode};

    #[test]
    fn single_job() {
        let inst = Instance::new(vec![9], 3, 5, Mode::Max, CompatGraph::empty(1)).unwrap();
        let r = brute_force_solve(&inst, DEFAULT_ORACLE_LIMIT).unwrap();
        assert_eq!(r.optimum, 9);
        assert_eq!(r.explored, 1);
    }

    #[test]
    fn triangle_single_machine() {
        let g = CompatGraph::complete(3);
        let inst = Instance::new(vec![3, 5, 7], 1, 1, Mode::Max, g).unwrap();
        let r = brute_force_solve(&inst, DEFAULT_ORACLE_LIMIT).unwrap();
        assert_eq!(r.optimum, 11);
        // {1}{2}{3}, {12}{3}, {13}{2}, {23}{1}
        assert_eq!(r.explored, 4);
        assert!(validate(&r.witness, &inst).is_empty());
        assert_eq!(inst.eval(&r.witness), 11);
    }

    #[test]
    fn five_cycle_sum_mode() {
        let g = CompatGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let inst = Instance::new(vec![3; 5], 2, 1, Mode::Sum, g).unwrap();
        assert_eq!(
            brute_force_solve(&inst, DEFAULT_ORACLE_LIMIT).unwrap().optimum,
            10
        );
    }

    #[test]
    fn assignment_examples() {
        assert_eq!(assign_batches_optimally(&[], 1, 2).unwrap(), 0);
        assert_eq!(assign_batches_optimally(&[3, 3], 1, 2).unwrap(), 3);
        assert_eq!(assign_batches_optimally(&[3, 3, 2], 1, 2).unwrap(), 6);
        assert_eq!(assign_batches_optimally(&[3, 3, 2], 1, 1).unwrap(), 10);
        assert!(assign_batches_optimally(&[1; 13], 1, 2).is_err());
    }

    #[test]
    fn limit_is_enforced() {
        let inst = Instance::new(vec![1; 11], 2, 0, Mode::Max, CompatGraph::empty(11)).unwrap();
        assert!(matches!(
            brute_force_solve(&inst, DEFAULT_ORACLE_LIMIT),
            Err(Error::OracleLimit { size: 11, limit: 10 })
        ));
    }
}
