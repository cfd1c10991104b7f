//! Polynomial exact solvers for the tractable special cases.
//!
//! All of them batch jobs along a matching of the compatibility graph and
//! then place the batches on machines. Solvers with a closed-form makespan
//! re-evaluate the schedule they build and fail with [`Error::Internal`] if
//! the two disagree.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matching::{
    max_cardinality_matching, max_weighted_matching, CompatGraph, Matching, WeightedGraph,
};
use crate::model::{Batch, Instance, Mode, Schedule, Time};

/// Output of a matching-based exact solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSolution {
    pub schedule: Schedule,
    /// Makespan of `schedule`.
    pub cmax: Time,
    /// Value predicted by the solver's closed form, when it has one.
    pub formula_cmax: Option<Time>,
    pub matching: Matching,
}

/// Batch-type tallies of a two-machine schedule whose processing times take
/// the values `p < q`.
///
/// `n_p` and `n_q` count batches by duration, so a mixed batch counts toward
/// `n_q`; `n_pq` counts the mixed two-job batches. When only one value occurs
/// `p == q` and every batch counts toward `n_p`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TwoValueProfile {
    pub p: Time,
    pub q: Time,
    pub n_p: usize,
    pub n_q: usize,
    pub n_pq: usize,
}

impl TwoValueProfile {
    fn of(schedule: &Schedule, inst: &Instance, p: Time, q: Time) -> Self {
        let mut prof = TwoValueProfile {
            p,
            q,
            ..Default::default()
        };
        for b in schedule.batches() {
            if inst.duration(b) == q && p != q {
                prof.n_q += 1;
            } else {
                prof.n_p += 1;
            }
            if let Batch::Pair(a, c) = *b {
                if inst.proc_time(a) != inst.proc_time(c) {
                    prof.n_pq += 1;
                }
            }
        }
        prof
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoValueSolution {
    pub schedule: Schedule,
    pub cmax: Time,
    /// Tallies of the seed schedule built by [`solve_is`].
    pub profile: TwoValueProfile,
    /// Whether the q-pair recombination search ran.
    pub searched: bool,
    /// Recombination candidates evaluated.
    pub candidates: usize,
    /// For an improving recombination: the sub-schedule makespan plus `q`,
    /// next to the re-evaluated `cmax` actually reported.
    pub literal_cmax: Option<Time>,
}

/// Jobs in batches: one pair per matching edge, singletons otherwise,
/// ordered by smallest member.
pub fn batches_from_matching(job_count: usize, m: &Matching) -> Vec<Batch> {
    let mates = m.mates(job_count);
    (0..job_count)
        .filter_map(|v| match mates[v] {
            None => Some(Batch::single(v)),
            Some(u) if u > v => Some(Batch::pair(v, u)),
            Some(_) => None,
        })
        .collect()
}

/// Places batches in the given order, each on the machine that finishes
/// first (lowest index on ties).
pub fn list_schedule(batches: &[Batch], inst: &Instance) -> Schedule {
    let m = inst.machine_count();
    let mut sched = Schedule::empty(m);
    let mut spans = vec![0 as Time; m];
    for b in batches {
        let k = (0..m).min_by_key(|&k| (spans[k], k)).unwrap();
        spans[k] += inst.duration(b)
            + if sched.machine(k).is_empty() {
                0
            } else {
                inst.setup()
            };
        sched.push(k, *b);
    }
    sched
}

/// `H_alpha`: the compatibility graph weighted by `min(p_i, p_j) + s`.
pub fn alpha_graph(inst: &Instance) -> WeightedGraph {
    WeightedGraph::from_fn(inst.graph().clone(), |a, b| {
        inst.proc_time(a).min(inst.proc_time(b)) + inst.setup()
    })
}

fn check_formula(solver: &str, formula: Time, sched: &Schedule, inst: &Instance) -> Result<Time> {
    let cmax = inst.eval(sched);
    if cmax != formula {
        return Err(Error::Internal(format!(
            "{solver}: closed form gives {formula}, schedule evaluates to {cmax}"
        )));
    }
    Ok(cmax)
}

fn require(solver: &'static str, ok: bool, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::wrong(solver, reason))
    }
}

fn identical_proc(inst: &Instance) -> Option<Time> {
    let p = inst.proc_time(0);
    inst.proc_times().iter().all(|&x| x == p).then_some(p)
}

/// Single machine, max mode: pair jobs along a maximum weight matching of
/// `H_alpha`. Every pair saves `min(p_i, p_j) + s` against running all jobs
/// alone.
pub fn solve_b1_max(inst: &Instance) -> Result<ExactSolution> {
    const NAME: &str = "b1max";
    require(NAME, inst.machine_count() == 1, "needs exactly one machine")?;
    require(NAME, inst.mode() == Mode::Max, "needs max-batch mode")?;
    let h = alpha_graph(inst);
    let matching = max_weighted_matching(&h);
    let n = inst.job_count() as Time;
    let formula = inst.total_proc() + inst.setup() * (n - 1) - matching.weight(&h);
    let schedule = Schedule::new(vec![batches_from_matching(inst.job_count(), &matching)]);
    let cmax = check_formula(NAME, formula, &schedule, inst)?;
    Ok(ExactSolution {
        schedule,
        cmax,
        formula_cmax: Some(formula),
        matching,
    })
}

/// Single machine, sum mode: every pair saves exactly one setup, so a
/// maximum cardinality matching is optimal.
pub fn solve_b1_sum(inst: &Instance) -> Result<ExactSolution> {
    const NAME: &str = "b1sum";
    require(NAME, inst.machine_count() == 1, "needs exactly one machine")?;
    require(NAME, inst.mode() == Mode::Sum, "needs sum-batch mode")?;
    let matching = max_cardinality_matching(inst.graph());
    let n = inst.job_count() as Time;
    let formula = inst.total_proc() + inst.setup() * (n - matching.len() as Time - 1);
    let schedule = Schedule::new(vec![batches_from_matching(inst.job_count(), &matching)]);
    let cmax = check_formula(NAME, formula, &schedule, inst)?;
    Ok(ExactSolution {
        schedule,
        cmax,
        formula_cmax: Some(formula),
        matching,
    })
}

/// `m` machines, max mode, identical processing times: as few batches as
/// possible, spread evenly.
pub fn solve_bm_max_identical(inst: &Instance) -> Result<ExactSolution> {
    const NAME: &str = "bmmax-id";
    require(NAME, inst.mode() == Mode::Max, "needs max-batch mode")?;
    let p = identical_proc(inst).ok_or_else(|| Error::wrong(NAME, "processing times are not identical"))?;
    let matching = max_cardinality_matching(inst.graph());
    let batches = batches_from_matching(inst.job_count(), &matching);
    let per_machine = (batches.len() as Time).div_ceil(inst.machine_count() as Time);
    let formula = per_machine * p + (per_machine - 1) * inst.setup();
    let schedule = list_schedule(&batches, inst);
    let cmax = check_formula(NAME, formula, &schedule, inst)?;
    Ok(ExactSolution {
        schedule,
        cmax,
        formula_cmax: Some(formula),
        matching,
    })
}

/// Result of the identical-time sum-mode solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumIdenticalSolution {
    /// Best schedule found; optimal.
    pub schedule: Schedule,
    pub cmax: Time,
    /// The pairs-first layout with its three-case closed form.
    pub layout: ExactSolution,
    /// True when splitting some pairs beat the pairs-first layout.
    pub split_pairs: bool,
}

/// Three-case makespan of the pairs-first layout: `pairs` two-job batches
/// followed by `n - 2 pairs` singletons, each on the first free machine.
pub fn pairs_first_formula(n: usize, m: usize, pairs: usize, p: Time, s: Time) -> Time {
    let (n, m, pairs) = (n as i64, m as i64, pairs as i64);
    let (p, s) = (p as i64, s as i64);
    let full = (pairs + m - 1) / m;
    let r = pairs % m;
    // free single-job slots left beside the shorter pair columns
    let k = if r == 0 { 0 } else { 2 * (m - r) };
    let rest = n - 2 * pairs;
    // a machine with `full` pairs; -s when there are no pairs at all
    let base = 2 * full * p + (full - 1) * s;
    let value = if 2 * rest <= k {
        base
    } else if rest <= k {
        base + s
    } else {
        let extra = rest - k;
        let rounds = (extra + m - 1) / m;
        let b = extra % m;
        let tail = rounds * p + (rounds - 1) * s;
        // with short columns present a remainder of 0 or beyond r costs one more setup
        if r == 0 || (b > 0 && b <= r) {
            base + s + tail
        } else {
            base + 2 * s + tail
        }
    };
    value.max(0) as Time
}

/// `m` machines, sum mode, identical processing times.
///
/// Builds the pairs-first layout on a maximum cardinality matching and
/// checks it against its closed form. On several machines keeping every
/// pair is not always best (two compatible jobs on two machines finish
/// sooner apart), so the number of pairs kept per machine is also optimised
/// by a threshold search, and the better schedule is returned.
pub fn solve_bm_sum_identical(inst: &Instance) -> Result<SumIdenticalSolution> {
    const NAME: &str = "bmsum-id";
    require(NAME, inst.mode() == Mode::Sum, "needs sum-batch mode")?;
    let p = identical_proc(inst).ok_or_else(|| Error::wrong(NAME, "processing times are not identical"))?;
    let (n, m, s) = (inst.job_count(), inst.machine_count(), inst.setup());
    let matching = max_cardinality_matching(inst.graph());
    let mut ordered = batches_from_matching(n, &matching);
    // two-job batches first; stable, so each group keeps job order
    ordered.sort_by_key(|b| std::cmp::Reverse(b.len()));
    let formula = pairs_first_formula(n, m, matching.len(), p, s);
    let schedule = list_schedule(&ordered, inst);
    let cmax = check_formula(NAME, formula, &schedule, inst)?;
    let layout = ExactSolution {
        schedule,
        cmax,
        formula_cmax: Some(formula),
        matching,
    };

    let split = split_pairs_schedule(inst, &layout.matching, p, cmax);
    let split_cmax = inst.eval(&split);
    if split_cmax < cmax {
        Ok(SumIdenticalSolution {
            schedule: split,
            cmax: split_cmax,
            layout,
            split_pairs: true,
        })
    } else {
        Ok(SumIdenticalSolution {
            schedule: layout.schedule.clone(),
            cmax,
            layout,
            split_pairs: false,
        })
    }
}

/// Most jobs one machine can finish by `t` when it runs `pairs` two-job
/// batches, or `None` if the pairs alone overrun.
fn machine_capacity(t: Time, pairs: u64, p: Time, s: Time) -> Option<u64> {
    let pair_cost = pairs * (2 * p + s);
    if pair_cost > t + s {
        return None;
    }
    Some(2 * pairs + (t + s - pair_cost) / (p + s))
}

/// Per-machine (pairs, singles) covering at least `n` jobs by `t` while
/// using at most `budget` pairs overall.
fn split_plan(n: usize, m: usize, budget: usize, t: Time, p: Time, s: Time) -> Option<Vec<(u64, u64)>> {
    let max_pairs = (0..=budget as u64)
        .take_while(|&a| machine_capacity(t, a, p, s).is_some())
        .last()?;
    let width = budget + 1;
    // cover[k][u]: most jobs on machines 0..k using u pairs
    let mut cover = vec![vec![None::<u64>; width]; m + 1];
    let mut choice = vec![vec![0u64; width]; m + 1];
    cover[0][0] = Some(0);
    for k in 0..m {
        for used in 0..width {
            let Some(base) = cover[k][used] else { continue };
            for a in 0..=max_pairs.min((budget - used) as u64) {
                let cap = machine_capacity(t, a, p, s).unwrap();
                let u = used + a as usize;
                if cover[k + 1][u].is_none_or(|c| base + cap > c) {
                    cover[k + 1][u] = Some(base + cap);
                    choice[k + 1][u] = a;
                }
            }
        }
    }
    let (mut used, _) = cover[m]
        .iter()
        .enumerate()
        .filter_map(|(u, c)| c.map(|c| (u, c)))
        .filter(|&(_, c)| c >= n as u64)
        .min_by_key(|&(u, _)| u)?;
    let mut plan = vec![(0, 0); m];
    for k in (1..=m).rev() {
        let a = choice[k][used];
        plan[k - 1] = (a, machine_capacity(t, a, p, s).unwrap() - 2 * a);
        used -= a as usize;
    }
    Some(plan)
}

/// Optimal schedule when any subset of the matching may be kept as pairs.
fn split_pairs_schedule(inst: &Instance, matching: &Matching, p: Time, upper: Time) -> Schedule {
    let (n, m, s) = (inst.job_count(), inst.machine_count(), inst.setup());
    let budget = matching.len();
    let (mut lo, mut hi) = (p, upper);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if split_plan(n, m, budget, mid, p, s).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let mut plan = split_plan(n, m, budget, lo, p, s).expect("upper bound is feasible");

    // Trim the surplus: drop singles first, then turn pairs into singles.
    let mut surplus = plan.iter().map(|&(a, b)| 2 * a + b).sum::<u64>() - n as u64;
    for slot in plan.iter_mut() {
        let cut = slot.1.min(surplus);
        slot.1 -= cut;
        surplus -= cut;
    }
    for slot in plan.iter_mut() {
        while surplus > 0 && slot.0 > 0 {
            slot.0 -= 1;
            slot.1 += 1;
            surplus -= 1;
        }
    }

    let mut pairs = matching.edges().iter();
    let mut paired = vec![false; n];
    let mut sched = Schedule::empty(m);
    for (k, &(a, _)) in plan.iter().enumerate() {
        for _ in 0..a {
            let &(x, y) = pairs.next().expect("plan respects the pair budget");
            paired[x] = true;
            paired[y] = true;
            sched.push(k, Batch::pair(x, y));
        }
    }
    let mut singles = (0..n).filter(|&j| !paired[j]);
    for (k, &(_, b)) in plan.iter().enumerate() {
        for _ in 0..b {
            sched.push(k, Batch::single(singles.next().expect("plan covers every job")));
        }
    }
    sched
}

/// Optimal placement of batches on two machines when batch durations take
/// at most two values. Order within a machine does not matter, so only the
/// number of each kind on the first machine is enumerated.
pub fn schedule_p2_two_values(batches: &[Batch], inst: &Instance) -> Result<(Schedule, Time)> {
    let durations: Vec<Time> = batches.iter().map(|b| inst.duration(b)).collect();
    let mut values = durations.clone();
    values.sort_unstable();
    values.dedup();
    if values.len() > 2 {
        return Err(Error::wrong(
            "p2",
            format!("{} distinct batch durations, at most 2 allowed", values.len()),
        ));
    }
    let long = values.last().copied().unwrap_or(0);
    let (longs, shorts): (Vec<Batch>, Vec<Batch>) = batches.iter().partition(|b| inst.duration(b) == long);
    let short = values.first().copied().unwrap_or(0);
    let s = inst.setup();
    let span = |x: usize, y: usize| -> Time {
        if x + y == 0 {
            0
        } else {
            x as Time * long + y as Time * short + (x + y - 1) as Time * s
        }
    };
    let (nl, ns) = (longs.len(), shorts.len());
    let mut best = (Time::MAX, 0, 0);
    for x in 0..=nl {
        for y in 0..=ns {
            let v = span(x, y).max(span(nl - x, ns - y));
            if v < best.0 {
                best = (v, x, y);
            }
        }
    }
    let (value, x, y) = best;
    let mut m0: Vec<Batch> = longs[..x].to_vec();
    m0.extend_from_slice(&shorts[..y]);
    let mut m1: Vec<Batch> = longs[x..].to_vec();
    m1.extend_from_slice(&shorts[y..]);
    Ok((Schedule::new(vec![m0, m1]), value))
}

fn two_values(solver: &'static str, inst: &Instance) -> Result<(Time, Time)> {
    require(solver, inst.machine_count() == 2, "needs exactly two machines")?;
    require(solver, inst.mode() == Mode::Max, "needs max-batch mode")?;
    let values = inst.distinct_proc_times();
    if values.len() > 2 {
        return Err(Error::wrong(
            solver,
            format!("{} distinct processing times, at most 2 allowed", values.len()),
        ));
    }
    Ok((values[0], *values.last().unwrap()))
}

/// Matching-based batching on a vertex subset, in original job indices.
fn is_batches(inst: &Instance, keep: &[usize], allow: impl FnMut(usize, usize) -> bool) -> Vec<Batch> {
    let sub: CompatGraph = inst.graph().induced(keep, allow);
    let h = WeightedGraph::from_fn(sub, |a, b| {
        inst.proc_time(keep[a]).min(inst.proc_time(keep[b])) + inst.setup()
    });
    let matching = max_weighted_matching(&h);
    batches_from_matching(keep.len(), &matching)
        .into_iter()
        .map(|b| match b {
            Batch::Single(v) => Batch::single(keep[v]),
            Batch::Pair(a, c) => Batch::pair(keep[a], keep[c]),
        })
        .collect()
}

/// Two machines, max mode, processing times in `{p, q}`: batching along a
/// maximum weight matching of `H_alpha`, then the exact two-machine
/// placement of the resulting batches.
pub fn solve_is(inst: &Instance) -> Result<TwoValueSolution> {
    let (p, q) = two_values("is", inst)?;
    let all: Vec<usize> = (0..inst.job_count()).collect();
    let (schedule, cmax) = schedule_p2_two_values(&is_batches(inst, &all, |_, _| true), inst)?;
    debug_assert_eq!(inst.eval(&schedule), cmax);
    let profile = TwoValueProfile::of(&schedule, inst, p, q);
    Ok(TwoValueSolution {
        schedule,
        cmax,
        profile,
        searched: false,
        candidates: 0,
        literal_cmax: None,
    })
}

/// Best candidate of one search branch: (makespan, literal value, rank, schedule).
type Candidate = (Time, Time, usize, Schedule);

/// Two machines, max mode, processing times in `{p, q}`.
///
/// Starts from [`solve_is`]. When the seed has at least two mixed batches,
/// an odd batch count and `2p + s >= q`, it also tries to trade mixed
/// batches for q-q batches. For q-jobs `i`, `j` with distinct p-neighbours
/// `k`, `l`, the candidates are the batch `(i, j)` alone and every pair of
/// batches `(i, e)`, `(j, f)` on four distinct q-jobs. The chosen q-jobs are
/// removed, `k` and `l` lose their edges to q-jobs, the rest is batched
/// again and all batches are placed by [`schedule_p2_two_values`]. The best
/// schedule found is returned.
pub fn solve_b2_max_two_values(inst: &Instance) -> Result<TwoValueSolution> {
    let (p, q) = two_values("tux", inst)?;
    if p == q {
        let sol = solve_bm_max_identical(inst)?;
        let profile = TwoValueProfile::of(&sol.schedule, inst, p, q);
        return Ok(TwoValueSolution {
            schedule: sol.schedule,
            cmax: sol.cmax,
            profile,
            searched: false,
            candidates: 0,
            literal_cmax: None,
        });
    }
    let mut seed = solve_is(inst)?;
    let prof = seed.profile;
    let guard = prof.n_pq >= 2 && (prof.n_p + prof.n_q) % 2 == 1 && 2 * p + inst.setup() >= q;
    if !guard {
        return Ok(seed);
    }

    let n = inst.job_count();
    let g = inst.graph();
    let is_q = |j: usize| inst.proc_time(j) == q;
    let q_jobs: Vec<usize> = (0..n).filter(|&j| is_q(j)).collect();
    let mut starts = Vec::new();
    for (a, &i) in q_jobs.iter().enumerate() {
        for &j in &q_jobs[a + 1..] {
            starts.push((i, j));
        }
    }

    let evaluate = |k: usize, l: usize, new: &[Batch]| -> (Time, Time, Schedule) {
        let keep: Vec<usize> = (0..n).filter(|&v| !new.iter().any(|b| b.contains(v))).collect();
        let freed = |v: usize| v == k || v == l;
        let mut batches = is_batches(inst, &keep, |a, b| !(freed(a) && is_q(b) || freed(b) && is_q(a)));
        let literal = schedule_p2_two_values(&batches, inst).expect("two values").1 + q;
        batches.extend_from_slice(new);
        let (sched, value) = schedule_p2_two_values(&batches, inst).expect("two values");
        (value, literal, sched)
    };

    let found = starts
        .par_iter()
        .enumerate()
        .map(|(rank, &(i, j))| {
            let mut best: Option<Candidate> = None;
            let mut count = 0usize;
            let mut offer = |(value, literal, sched): (Time, Time, Schedule)| {
                count += 1;
                if best.as_ref().is_none_or(|b| value < b.0) {
                    best = Some((value, literal, rank, sched));
                }
            };
            let p_partners = |x: usize| g.neighbors(x).iter().copied().filter(move |&y| !is_q(y));
            let q_partners = |x: usize| g.neighbors(x).iter().copied().filter(move |&y| is_q(y));
            for k in p_partners(i) {
                for l in p_partners(j).filter(|&l| l != k) {
                    if g.has_edge(i, j) {
                        offer(evaluate(k, l, &[Batch::pair(i, j)]));
                    }
                    for e in q_partners(i).filter(|&e| e != j) {
                        for f in q_partners(j).filter(|&f| f != i && f != e) {
                            offer(evaluate(k, l, &[Batch::pair(i, e), Batch::pair(j, f)]));
                        }
                    }
                }
            }
            (best, count)
        })
        .reduce(
            || (None, 0),
            |(a, ca), (b, cb)| {
                let best = match (a, b) {
                    (Some(x), Some(y)) => Some(if (y.0, y.2) < (x.0, x.2) { y } else { x }),
                    (x, None) => x,
                    (None, y) => y,
                };
                (best, ca + cb)
            },
        );

    let (best, candidates) = found;
    seed.searched = true;
    seed.candidates = candidates;
    if let Some((value, literal, _, schedule)) = best {
        if value < seed.cmax {
            seed.schedule = schedule;
            seed.cmax = value;
            seed.literal_cmax = Some(literal);
        }
    }
    Ok(seed)
}
