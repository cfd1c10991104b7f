//! Improvement heuristics for the general max-batch problem on `m` machines.
//!
//! Both draw every random choice from one ChaCha8 stream seeded by
//! [`HeuristicConfig::seed`], in program order, so a run is reproducible on
//! any platform.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{alpha_graph, batches_from_matching, list_schedule};
use crate::matching::max_weighted_matching;
use crate::model::{Batch, Instance, Mode, Schedule, Time};

pub const DEFAULT_ITERATIONS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeuristicConfig {
    /// Random batch swaps in the final phase.
    pub iterations: usize,
    pub seed: u64,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            iterations: DEFAULT_ITERATIONS,
            seed: 0,
        }
    }
}

impl HeuristicConfig {
    pub fn new(iterations: usize, seed: u64) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        Ok(HeuristicConfig { iterations, seed })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeuristicRun {
    pub schedule: Schedule,
    pub cmax: Time,
    /// Makespan of the starting schedule.
    pub initial_cmax: Time,
    /// Best makespan so far after every step.
    pub trace: Vec<Time>,
}

/// `(C_max - best) / best`.
pub fn gap(cmax: Time, best: Time) -> Result<f64> {
    if best == 0 {
        return Err(Error::UndefinedGap);
    }
    Ok((cmax as f64 - best as f64) / best as f64)
}

fn require_max(name: &'static str, inst: &Instance) -> Result<()> {
    if inst.mode() != Mode::Max {
        return Err(Error::wrong(name, "needs max-batch mode"));
    }
    Ok(())
}

/// Working copy of a schedule with cached machine spans.
#[derive(Clone)]
struct State<'a> {
    inst: &'a Instance,
    machines: Vec<Vec<Batch>>,
    spans: Vec<Time>,
}

impl<'a> State<'a> {
    fn new(inst: &'a Instance, sched: Schedule) -> Self {
        let machines = sched.into_machines();
        let spans = machines.iter().map(|m| inst.span(m)).collect();
        State {
            inst,
            machines,
            spans,
        }
    }

    fn cmax(&self) -> Time {
        self.spans.iter().copied().max().unwrap_or(0)
    }

    fn refresh(&mut self, k: usize) {
        self.spans[k] = self.inst.span(&self.machines[k]);
    }

    fn schedule(&self) -> Schedule {
        Schedule::new(self.machines.clone())
    }
}

/// Tracks the best schedule seen and the best-so-far trace.
struct Best {
    schedule: Schedule,
    cmax: Time,
    trace: Vec<Time>,
}

impl Best {
    fn new(state: &State) -> Self {
        let cmax = state.cmax();
        Best {
            schedule: state.schedule(),
            cmax,
            trace: vec![cmax],
        }
    }

    fn offer(&mut self, state: &State) {
        let c = state.cmax();
        if c < self.cmax {
            self.cmax = c;
            self.schedule = state.schedule();
        }
        self.trace.push(self.cmax);
    }
}

/// Greedy batching over jobs in decreasing processing time: each job joins
/// the first open single-job batch it is compatible with, else opens one.
fn lpt_batches(inst: &Instance) -> Vec<Batch> {
    let mut order: Vec<usize> = (0..inst.job_count()).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(inst.proc_time(j)));
    let mut batches: Vec<Batch> = Vec::new();
    for j in order {
        let open = batches
            .iter()
            .position(|b| matches!(*b, Batch::Single(i) if inst.compatible(i, j)));
        match open {
            Some(pos) => {
                let Batch::Single(i) = batches[pos] else {
                    unreachable!()
                };
                batches[pos] = Batch::pair(i, j);
            }
            None => batches.push(Batch::single(j)),
        }
    }
    batches
}

fn lpt_schedule(inst: &Instance, mut batches: Vec<Batch>) -> Schedule {
    batches.sort_by_key(|b| std::cmp::Reverse(inst.duration(b)));
    list_schedule(&batches, inst)
}

fn swap_slots(state: &mut State, (k, i): (usize, usize), (l, j): (usize, usize)) {
    let a = state.machines[k].get(i).copied();
    let b = state.machines[l].get(j).copied();
    match (a, b) {
        (Some(x), Some(y)) => {
            state.machines[k][i] = y;
            state.machines[l][j] = x;
        }
        (Some(x), None) => {
            state.machines[k].remove(i);
            state.machines[l].push(x);
        }
        (None, Some(y)) => {
            state.machines[l].remove(j);
            state.machines[k].push(y);
        }
        (None, None) => return,
    }
    state.refresh(k);
    state.refresh(l);
}

fn distinct_machines(rng: &mut ChaCha8Rng, m: usize) -> (usize, usize) {
    let k = rng.gen_range(0..m);
    let mut l = rng.gen_range(0..m - 1);
    if l >= k {
        l += 1;
    }
    (k, l)
}

/// Swaps a random batch of machine `k` with a random batch of machine `l`.
/// The idle slot after a machine's last batch counts as an empty batch, so
/// a swap may also move a single batch.
fn batch_swap(state: &mut State, rng: &mut ChaCha8Rng, k: usize, l: usize) {
    let i = rng.gen_range(0..=state.machines[k].len());
    let j = rng.gen_range(0..=state.machines[l].len());
    swap_slots(state, (k, i), (l, j));
}

/// `iterations` random batch swaps. Every swap is kept; the best schedule
/// visited is recorded.
fn random_swaps(state: &mut State, best: &mut Best, rng: &mut ChaCha8Rng, iterations: usize) {
    let m = state.machines.len();
    for _ in 0..iterations {
        if m >= 2 {
            let (k, l) = distinct_machines(rng, m);
            batch_swap(state, rng, k, l);
        }
        best.offer(state);
    }
}

/// LPT batching, list scheduling in decreasing batch duration, then random
/// batch swaps between machines.
pub fn h2(inst: &Instance, cfg: &HeuristicConfig) -> Result<HeuristicRun> {
    require_max("h2", inst)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut state = State::new(inst, lpt_schedule(inst, lpt_batches(inst)));
    let mut best = Best::new(&state);
    let initial_cmax = best.cmax;
    random_swaps(&mut state, &mut best, &mut rng, cfg.iterations);
    Ok(HeuristicRun {
        schedule: best.schedule,
        cmax: best.cmax,
        initial_cmax,
        trace: best.trace,
    })
}

/// The two members of a pair as (shorter, longer), ties by index.
fn ordered_pair(inst: &Instance, b: &Batch) -> Option<(usize, usize)> {
    match *b {
        Batch::Pair(a, c) => {
            if (inst.proc_time(c), c) < (inst.proc_time(a), a) {
                Some((c, a))
            } else {
                Some((a, c))
            }
        }
        Batch::Single(_) => None,
    }
}

/// Whether pairs `(i1, i2)` and `(j1, j2)` may be regrouped into
/// `(i2, j2)` plus the longer of `i1`, `j1`, with the shorter one moved to a
/// machine that still finishes by `cmax`. Returns that machine.
fn recombination_target(
    state: &State,
    bi: (usize, usize),
    bj: (usize, usize),
    exclude: &[usize],
    cmax: Time,
) -> Option<usize> {
    let inst = state.inst;
    let p = |j: usize| inst.proc_time(j);
    let ((i1, i2), (j1, j2)) = (bi, bj);
    if !(p(i1) < p(j2) && p(j1) < p(i2) && inst.compatible(i2, j2)) {
        return None;
    }
    let extra = p(i1).min(p(j1)) + inst.setup();
    (0..state.machines.len()).find(|l| !exclude.contains(l) && state.spans[*l] + extra <= cmax)
}

fn split_short_long(inst: &Instance, a: usize, b: usize) -> (usize, usize) {
    if (inst.proc_time(a), a) < (inst.proc_time(b), b) {
        (a, b)
    } else {
        (b, a)
    }
}

/// Phase (a), within one critical machine. Returns whether it changed.
fn recombine_within(state: &mut State, k: usize) -> bool {
    let cmax = state.cmax();
    let inst = state.inst;
    let batches = &state.machines[k];
    for x in 0..batches.len() {
        let Some(bx) = ordered_pair(inst, &batches[x]) else {
            continue;
        };
        for y in x + 1..batches.len() {
            let Some(by) = ordered_pair(inst, &batches[y]) else {
                continue;
            };
            if let Some(l) = recombination_target(state, bx, by, &[k], cmax) {
                let (short, long) = split_short_long(inst, bx.0, by.0);
                let machine = &mut state.machines[k];
                machine[x] = Batch::pair(bx.1, by.1);
                machine[y] = Batch::single(long);
                state.machines[l].push(Batch::single(short));
                state.refresh(k);
                state.refresh(l);
                return true;
            }
        }
    }
    false
}

/// Phase (a), between a critical machine `k` and a shorter machine `r`.
/// Applies the first regrouping that lowers the makespan.
fn recombine_across(state: &mut State, k: usize, r: usize) -> bool {
    let cmax = state.cmax();
    let inst = state.inst;
    for x in 0..state.machines[k].len() {
        let Some(bx) = ordered_pair(inst, &state.machines[k][x]) else {
            continue;
        };
        for y in 0..state.machines[r].len() {
            let Some(by) = ordered_pair(inst, &state.machines[r][y]) else {
                continue;
            };
            let Some(l) = recombination_target(state, bx, by, &[], cmax) else {
                continue;
            };
            let (short, long) = split_short_long(inst, bx.0, by.0);
            let mut trial = state.clone();
            trial.machines[k][x] = Batch::single(long);
            trial.machines[r][y] = Batch::pair(bx.1, by.1);
            trial.machines[l].push(Batch::single(short));
            for z in [k, r, l] {
                trial.refresh(z);
            }
            if trial.cmax() < cmax {
                *state = trial;
                return true;
            }
        }
    }
    false
}

fn critical_machines(state: &State) -> Vec<usize> {
    let c = state.cmax();
    (0..state.spans.len()).filter(|&k| state.spans[k] == c).collect()
}

/// Picks a random batch on machines `k` and `l` and a random job in each.
/// If the two jobs are compatible they form a batch on one of the two
/// machines (chosen at random) and the leftovers go to the other, as a pair
/// when compatible. The move is kept unless it lengthens the schedule.
fn job_exchange(state: &mut State, rng: &mut ChaCha8Rng, k: usize, l: usize) {
    let inst = state.inst;
    let (lk, ll) = (state.machines[k].len(), state.machines[l].len());
    if lk == 0 || ll == 0 {
        return;
    }
    let bi = state.machines[k][rng.gen_range(0..lk)];
    let bj = state.machines[l][rng.gen_range(0..ll)];
    let ji: Vec<usize> = bi.jobs().collect();
    let jj: Vec<usize> = bj.jobs().collect();
    let a = ji[rng.gen_range(0..ji.len())];
    let b = jj[rng.gen_range(0..jj.len())];
    if !inst.compatible(a, b) {
        return;
    }
    let to_k = rng.gen_bool(0.5);
    let rest: Vec<usize> = ji
        .iter()
        .chain(&jj)
        .copied()
        .filter(|&j| j != a && j != b)
        .collect();
    let mut trial = state.clone();
    trial.machines[k].retain(|x| *x != bi);
    trial.machines[l].retain(|x| *x != bj);
    let (here, there) = if to_k { (k, l) } else { (l, k) };
    trial.machines[here].push(Batch::pair(a, b));
    match rest[..] {
        [x, y] if inst.compatible(x, y) => trial.machines[there].push(Batch::pair(x, y)),
        _ => {
            for &x in &rest {
                trial.machines[there].push(Batch::single(x));
            }
        }
    }
    trial.refresh(k);
    trial.refresh(l);
    if trial.cmax() <= state.cmax() {
        *state = trial;
    }
}

/// Phase (b): one job exchange for every machine pair.
fn random_exchanges(state: &mut State, best: &mut Best, rng: &mut ChaCha8Rng) {
    let m = state.machines.len();
    for k in 0..m {
        for l in k + 1..m {
            job_exchange(state, rng, k, l);
            best.offer(state);
        }
    }
}

/// Matching seed improved by local search, then the [`h2`] construction
/// with its random swaps. The best schedule over all phases is returned.
///
/// The seed pairs jobs along a maximum weight matching of `H_alpha` and list
/// schedules the batches in decreasing duration. Phase (a) regroups two
/// pairs `(i1, i2)`, `(j1, j2)` (first member the shorter) into `(i2, j2)`
/// and the longer of `i1`, `j1` when `i1`, `j1` are both shorter than the
/// other pair's long job, moving the remaining short job to a machine with
/// room for it. Phase (b) tries one random job exchange per machine pair,
/// then `iterations` rounds of a job exchange and a batch swap on a random
/// machine pair. Phase (c) rebuilds the schedule greedily and runs
/// `iterations` more batch swaps.
pub fn h1(inst: &Instance, cfg: &HeuristicConfig) -> Result<HeuristicRun> {
    require_max("h1", inst)?;
    if inst.machine_count() < 2 {
        return Err(Error::wrong("h1", "needs at least two machines"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let matching = max_weighted_matching(&alpha_graph(inst));
    let seed = lpt_schedule(inst, batches_from_matching(inst.job_count(), &matching));
    let mut state = State::new(inst, seed);
    let mut best = Best::new(&state);
    let initial_cmax = best.cmax;

    // (a) each change adds a batch, so this stops after at most n rounds
    loop {
        let mut changed = false;
        for k in critical_machines(&state) {
            while recombine_within(&mut state, k) {
                changed = true;
                best.offer(&state);
            }
        }
        let c = state.cmax();
        'across: for k in critical_machines(&state) {
            for r in 0..state.machines.len() {
                if state.spans[r] < c && recombine_across(&mut state, k, r) {
                    changed = true;
                    best.offer(&state);
                    break 'across;
                }
            }
        }
        if !changed {
            break;
        }
    }

    // (b)
    random_exchanges(&mut state, &mut best, &mut rng);
    for _ in 0..cfg.iterations {
        let (k, l) = distinct_machines(&mut rng, inst.machine_count());
        job_exchange(&mut state, &mut rng, k, l);
        batch_swap(&mut state, &mut rng, k, l);
        best.offer(&state);
    }

    // (c)
    let mut state = State::new(inst, lpt_schedule(inst, lpt_batches(inst)));
    best.offer(&state);
    random_swaps(&mut state, &mut best, &mut rng, cfg.iterations);

    Ok(HeuristicRun {
        schedule: best.schedule,
        cmax: best.cmax,
        initial_cmax,
        trace: best.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::CompatGraph;
    use crate::model::validate;

    fn inst(p: Vec<Time>, m: usize, s: Time, edges: &[(usize, usize)]) -> Instance {
        let g = CompatGraph::new(p.len(), edges).unwrap();
        Instance::new(p, m, s, Mode::Max, g).unwrap()
    }

    #[test]
    fn gap_values() {
        assert_eq!(gap(11, 11).unwrap(), 0.0);
        assert!((gap(12, 10).unwrap() - 0.2).abs() < 1e-12);
        assert!(matches!(gap(3, 0), Err(Error::UndefinedGap)));
    }

    #[test]
    fn config_rejects_zero_iterations() {
        assert!(HeuristicConfig::new(0, 1).is_err());
        assert_eq!(HeuristicConfig::default().iterations, 1000);
    }

    #[test]
    fn h2_trivial_cases() {
        let cfg = HeuristicConfig::default();
        let bare = inst(vec![4, 9, 2], 1, 3, &[]);
        let run = h2(&bare, &cfg).unwrap();
        assert_eq!(
            run.schedule.machine(0),
            &[Batch::single(1), Batch::single(0), Batch::single(2)]
        );
        assert_eq!(run.cmax, 15 + 6);
        let pair = inst(vec![5, 3], 1, 1, &[(0, 1)]);
        assert_eq!(h2(&pair, &cfg).unwrap().cmax, 5);
    }

    #[test]
    fn h1_single_job() {
        let one = inst(vec![6], 3, 2, &[]);
        let run = h1(&one, &HeuristicConfig::default()).unwrap();
        assert_eq!(run.cmax, 6);
        assert_eq!(run.initial_cmax, 6);
    }

    #[test]
    fn preconditions() {
        let cfg = HeuristicConfig::default();
        let sum = inst(vec![1, 2], 2, 1, &[]).with_mode(Mode::Sum);
        assert!(h1(&sum, &cfg).is_err());
        assert!(h2(&sum, &cfg).is_err());
        assert!(h1(&inst(vec![1, 2], 1, 1, &[]), &cfg).is_err());
    }

    #[test]
    fn recombination_inside_critical_machine() {
        // M1 holds (0,1) and (2,3) with long jobs 1 and 3 compatible; M2 is idle
        let i = inst(vec![2, 10, 3, 10], 2, 1, &[(0, 1), (2, 3), (1, 3)]);
        let seed = Schedule::new(vec![vec![Batch::pair(0, 1), Batch::pair(2, 3)], vec![]]);
        let mut state = State::new(&i, seed);
        assert_eq!(state.cmax(), 21);
        assert!(recombine_within(&mut state, 0));
        let sched = state.schedule();
        assert!(validate(&sched, &i).is_empty());
        assert_eq!(sched.machine(0), &[Batch::pair(1, 3), Batch::single(2)]);
        assert_eq!(sched.machine(1), &[Batch::single(0)]);
        assert_eq!(state.cmax(), 14);
    }

    #[test]
    fn h1_never_worse_than_seed() {
        let i = inst(
            vec![12, 40, 33, 8, 25, 19, 41, 7],
            3,
            2,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 7),
                (0, 7),
                (1, 5),
            ],
        );
        let run = h1(&i, &HeuristicConfig::new(200, 9).unwrap()).unwrap();
        assert!(run.cmax <= run.initial_cmax);
        assert!(validate(&run.schedule, &i).is_empty());
        assert_eq!(i.eval(&run.schedule), run.cmax);
        assert!(run.trace.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(run, h1(&i, &HeuristicConfig::new(200, 9).unwrap()).unwrap());
    }
}
