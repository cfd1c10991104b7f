//! Uniform entry point over every solver.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact;
use crate::heuristics::{self, HeuristicConfig};
use crate::model::{Instance, Mode, Schedule, Time};
use crate::oracle::{self, DEFAULT_ORACLE_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    B1Max,
    B1Sum,
    BmMaxIdentical,
    BmSumIdentical,
    Is,
    Tux,
    Auto,
    Oracle,
    H1,
    H2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 10] = [
        Algorithm::B1Max,
        Algorithm::B1Sum,
        Algorithm::BmMaxIdentical,
        Algorithm::BmSumIdentical,
        Algorithm::Is,
        Algorithm::Tux,
        Algorithm::Auto,
        Algorithm::Oracle,
        Algorithm::H1,
        Algorithm::H2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::B1Max => "b1max",
            Algorithm::B1Sum => "b1sum",
            Algorithm::BmMaxIdentical => "bmmax-id",
            Algorithm::BmSumIdentical => "bmsum-id",
            Algorithm::Is => "is",
            Algorithm::Tux => "tux",
            Algorithm::Auto => "auto",
            Algorithm::Oracle => "oracle",
            Algorithm::H1 => "h1",
            Algorithm::H2 => "h2",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub heuristic: HeuristicConfig,
    pub oracle_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            heuristic: HeuristicConfig::default(),
            oracle_limit: DEFAULT_ORACLE_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solved {
    pub schedule: Schedule,
    pub cmax: Time,
    /// The algorithm that produced the schedule; differs from the request
    /// only for [`Algorithm::Auto`].
    pub used: Algorithm,
}

/// The exact solver `auto` picks for this instance shape, if any.
pub fn exact_for(inst: &Instance) -> Option<Algorithm> {
    let identical = inst.distinct_proc_times().len() == 1;
    match (inst.mode(), inst.machine_count()) {
        (Mode::Max, 1) => Some(Algorithm::B1Max),
        (Mode::Sum, 1) => Some(Algorithm::B1Sum),
        (Mode::Max, _) if identical => Some(Algorithm::BmMaxIdentical),
        (Mode::Sum, _) if identical => Some(Algorithm::BmSumIdentical),
        (Mode::Max, 2) if inst.distinct_proc_times().len() == 2 => Some(Algorithm::Tux),
        _ => None,
    }
}

/// Runs one algorithm. `auto` uses an exact solver when the shape allows,
/// else the oracle up to its size limit, else [`heuristics::h1`].
pub fn solve(inst: &Instance, alg: Algorithm, opts: &SolveOptions) -> Result<Solved> {
    let (schedule, cmax) = match alg {
        Algorithm::B1Max => exact_parts(exact::solve_b1_max(inst)?),
        Algorithm::B1Sum => exact_parts(exact::solve_b1_sum(inst)?),
        Algorithm::BmMaxIdentical => exact_parts(exact::solve_bm_max_identical(inst)?),
        Algorithm::BmSumIdentical => {
            let s = exact::solve_bm_sum_identical(inst)?;
            (s.schedule, s.cmax)
        }
        Algorithm::Is => {
            let s = exact::solve_is(inst)?;
            (s.schedule, s.cmax)
        }
        Algorithm::Tux => {
            let s = exact::solve_b2_max_two_values(inst)?;
            (s.schedule, s.cmax)
        }
        Algorithm::Oracle => {
            let r = oracle::brute_force_solve(inst, opts.oracle_limit)?;
            (r.witness, r.optimum)
        }
        Algorithm::H1 => {
            let r = heuristics::h1(inst, &opts.heuristic)?;
            (r.schedule, r.cmax)
        }
        Algorithm::H2 => {
            let r = heuristics::h2(inst, &opts.heuristic)?;
            (r.schedule, r.cmax)
        }
        Algorithm::Auto => {
            let pick = exact_for(inst).unwrap_or(if inst.job_count() <= opts.oracle_limit {
                Algorithm::Oracle
            } else if inst.mode() == Mode::Sum {
                return Err(Error::UnsupportedMode(
                    "no solver for sum mode with mixed processing times on several machines beyond the oracle limit".into(),
                ));
            } else {
                Algorithm::H1
            });
            return solve(inst, pick, opts);
        }
    };
    Ok(Solved {
        schedule,
        cmax,
        used: alg,
    })
}

fn exact_parts(s: exact::ExactSolution) -> (Schedule, Time) {
    (s.schedule, s.cmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::CompatGraph;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("cplex".parse::<Algorithm>().is_err());
    }

    #[test]
    fn auto_dispatch() {
        let g = CompatGraph::complete(3);
        let tri = Instance::new(vec![3, 5, 7], 1, 1, Mode::Max, g.clone()).unwrap();
        let opts = SolveOptions::default();
        let s = solve(&tri, Algorithm::Auto, &opts).unwrap();
        assert_eq!((s.used, s.cmax), (Algorithm::B1Max, 11));
        let three = tri.with_machines(2).unwrap();
        assert_eq!(
            solve(&three, Algorithm::Auto, &opts).unwrap().used,
            Algorithm::Oracle
        );
        let two = Instance::new(vec![3, 5, 5], 2, 1, Mode::Max, g).unwrap();
        assert_eq!(solve(&two, Algorithm::Auto, &opts).unwrap().used, Algorithm::Tux);
        let big = Instance::new((1..=12).collect(), 3, 1, Mode::Max, CompatGraph::empty(12)).unwrap();
        assert_eq!(solve(&big, Algorithm::Auto, &opts).unwrap().used, Algorithm::H1);
        assert!(solve(&big.with_mode(Mode::Sum), Algorithm::Auto, &opts).is_err());
    }
}
