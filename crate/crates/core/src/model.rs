//! Instances, batches and schedules for capacity-2 batch machines.
//!
//! A machine processes its batches one after another. Consecutive batches on
//! the same machine are separated by the setup time; the first batch of every
//! machine starts at time zero.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matching::CompatGraph;

/// Integer time unit used for processing times, setups and makespans.
pub type Time = u64;

/// Every batch holds at most this many jobs.
pub const BATCH_CAPACITY: usize = 2;

/// How the duration of a two-job batch is derived from its members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Duration is the longer of the two processing times.
    Max,
    /// Duration is the sum of both processing times.
    Sum,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Max => "max",
            Mode::Sum => "sum",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Mode::Max),
            "sum" => Ok(Mode::Sum),
            other => Err(Error::UnsupportedMode(other.to_string())),
        }
    }
}

/// A scheduling problem: jobs, identical batch machines, setup time and the
/// compatibility graph deciding which pairs may share a batch.
///
/// Jobs are indexed from 0 internally; the text formats use 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    proc_times: Vec<Time>,
    machines: usize,
    setup: Time,
    mode: Mode,
    graph: CompatGraph,
}

impl Instance {
    pub fn new(
        proc_times: Vec<Time>,
        machines: usize,
        setup: Time,
        mode: Mode,
        graph: CompatGraph,
    ) -> Result<Self> {
        if proc_times.is_empty() {
            return Err(Error::InvalidInstance("at least one job is required".into()));
        }
        if machines == 0 {
            return Err(Error::InvalidInstance("at least one machine is required".into()));
        }
        if let Some(pos) = proc_times.iter().position(|&p| p == 0) {
            return Err(Error::InvalidInstance(format!(
                "job {} has a zero processing time",
                pos + 1
            )));
        }
        if graph.vertex_count() != proc_times.len() {
            return Err(Error::InvalidInstance(format!(
                "graph has {} vertices but there are {} jobs",
                graph.vertex_count(),
                proc_times.len()
            )));
        }
        Ok(Instance {
            proc_times,
            machines,
            setup,
            mode,
            graph,
        })
    }

    pub fn job_count(&self) -> usize {
        self.proc_times.len()
    }

    pub fn machine_count(&self) -> usize {
        self.machines
    }

    pub fn proc_times(&self) -> &[Time] {
        &self.proc_times
    }

    pub fn proc_time(&self, job: usize) -> Time {
        self.proc_times[job]
    }

    pub fn setup(&self) -> Time {
        self.setup
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn graph(&self) -> &CompatGraph {
        &self.graph
    }

    pub fn compatible(&self, a: usize, b: usize) -> bool {
        self.graph.has_edge(a, b)
    }

    pub fn total_proc(&self) -> Time {
        self.proc_times.iter().sum()
    }

    pub fn max_proc(&self) -> Time {
        self.proc_times.iter().copied().max().unwrap_or(0)
    }

    /// Sorted distinct processing times.
    pub fn distinct_proc_times(&self) -> Vec<Time> {
        let set: BTreeSet<Time> = self.proc_times.iter().copied().collect();
        set.into_iter().collect()
    }

    /// Same jobs and graph on a different number of machines.
    pub fn with_machines(&self, machines: usize) -> Result<Self> {
        Instance::new(
            self.proc_times.clone(),
            machines,
            self.setup,
            self.mode,
            self.graph.clone(),
        )
    }

    pub fn with_mode(&self, mode: Mode) -> Self {
        Instance { mode, ..self.clone() }
    }

    /// Duration of a batch, assuming its indices are in range.
    ///
    /// Compatibility is not checked; use [`batch_time`] for untrusted batches.
    pub fn duration(&self, batch: &Batch) -> Time {
        match *batch {
            Batch::Single(j) => self.proc_times[j],
            Batch::Pair(a, b) => {
                let (pa, pb) = (self.proc_times[a], self.proc_times[b]);
                match self.mode {
                    Mode::Max => pa.max(pb),
                    Mode::Sum => pa + pb,
                }
            }
        }
    }

    /// Span of one machine's batch sequence without validity checks.
    pub fn span(&self, seq: &[Batch]) -> Time {
        if seq.is_empty() {
            return 0;
        }
        let work: Time = seq.iter().map(|b| self.duration(b)).sum();
        work + self.setup * (seq.len() as Time - 1)
    }

    /// Makespan without validity checks.
    pub fn eval(&self, sched: &Schedule) -> Time {
        sched
            .machines()
            .iter()
            .map(|seq| self.span(seq))
            .max()
            .unwrap_or(0)
    }
}

/// One or two jobs processed together.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Batch {
    Single(usize),
    /// Always stored with the smaller index first.
    Pair(usize, usize),
}

impl Batch {
    pub fn single(job: usize) -> Self {
        Batch::Single(job)
    }

    pub fn pair(a: usize, b: usize) -> Self {
        if a <= b {
            Batch::Pair(a, b)
        } else {
            Batch::Pair(b, a)
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Batch::Single(_) => 1,
            Batch::Pair(..) => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn jobs(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Batch::Single(j) => (j, None),
            Batch::Pair(a, b) => (a, Some(b)),
        };
        std::iter::once(a).chain(b)
    }

    pub fn contains(&self, job: usize) -> bool {
        self.jobs().any(|j| j == job)
    }

    pub fn min_job(&self) -> usize {
        match *self {
            Batch::Single(j) => j,
            Batch::Pair(a, _) => a,
        }
    }
}

impl fmt::Display for Batch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Batch::Single(j) => write!(f, "[{}]", j + 1),
            Batch::Pair(a, b) => write!(f, "[{},{}]", a + 1, b + 1),
        }
    }
}

/// Ordered batch sequences, one per machine.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Schedule {
    machines: Vec<Vec<Batch>>,
}

impl Schedule {
    pub fn new(machines: Vec<Vec<Batch>>) -> Self {
        Schedule { machines }
    }

    pub fn empty(machine_count: usize) -> Self {
        Schedule {
            machines: vec![Vec::new(); machine_count],
        }
    }

    pub fn machine_count(&self) -> usize {
        self.machines.len()
    }

    pub fn machines(&self) -> &[Vec<Batch>] {
        &self.machines
    }

    pub fn machine(&self, k: usize) -> &[Batch] {
        &self.machines[k]
    }

    pub fn machine_mut(&mut self, k: usize) -> &mut Vec<Batch> {
        &mut self.machines[k]
    }

    pub fn push(&mut self, machine: usize, batch: Batch) {
        self.machines[machine].push(batch);
    }

    pub fn batches(&self) -> impl Iterator<Item = &Batch> {
        self.machines.iter().flatten()
    }

    pub fn batch_count(&self) -> usize {
        self.machines.iter().map(Vec::len).sum()
    }

    pub fn into_machines(self) -> Vec<Vec<Batch>> {
        self.machines
    }
}

/// A reason a schedule is not feasible for an instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Violation {
    MachineCount { expected: usize, found: usize },
    JobOutOfRange { job: usize },
    DuplicateJob { job: usize },
    MissingJob { job: usize },
    IncompatiblePair { a: usize, b: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::MachineCount { expected, found } => {
                write!(f, "expected {expected} machines, found {found}")
            }
            Violation::JobOutOfRange { job } => write!(f, "job {} out of range", job + 1),
            Violation::DuplicateJob { job } => write!(f, "duplicate job {}", job + 1),
            Violation::MissingJob { job } => write!(f, "missing job {}", job + 1),
            Violation::IncompatiblePair { a, b } => {
                write!(f, "incompatible pair ({}, {})", a + 1, b + 1)
            }
        }
    }
}

/// Duration of a batch; rejects out-of-range indices and incompatible pairs.
pub fn batch_time(batch: &Batch, inst: &Instance) -> Result<Time> {
    let n = inst.job_count();
    for j in batch.jobs() {
        if j >= n {
            return Err(Error::InvalidBatch(format!("job {} out of range", j + 1)));
        }
    }
    if let Batch::Pair(a, b) = *batch {
        if a == b || !inst.compatible(a, b) {
            return Err(Error::InvalidBatch(format!(
                "jobs {} and {} are not compatible",
                a + 1,
                b + 1
            )));
        }
    }
    Ok(inst.duration(batch))
}

/// Sum of batch durations plus one setup between each consecutive pair.
pub fn machine_span(seq: &[Batch], inst: &Instance) -> Result<Time> {
    let mut total = 0;
    for b in seq {
        total += batch_time(b, inst)?;
    }
    if !seq.is_empty() {
        total += inst.setup() * (seq.len() as Time - 1);
    }
    Ok(total)
}

/// Largest machine span of a feasible schedule.
pub fn makespan(sched: &Schedule, inst: &Instance) -> Result<Time> {
    let violations = validate(sched, inst);
    if !violations.is_empty() {
        return Err(Error::Infeasible(violations));
    }
    Ok(inst.eval(sched))
}

/// Lists every feasibility violation; empty means the schedule is feasible.
pub fn validate(sched: &Schedule, inst: &Instance) -> Vec<Violation> {
    let n = inst.job_count();
    let mut out = Vec::new();
    if sched.machine_count() != inst.machine_count() {
        out.push(Violation::MachineCount {
            expected: inst.machine_count(),
            found: sched.machine_count(),
        });
    }
    let mut seen = vec![false; n];
    for batch in sched.batches() {
        for j in batch.jobs() {
            if j >= n {
                out.push(Violation::JobOutOfRange { job: j });
            } else if seen[j] {
                out.push(Violation::DuplicateJob { job: j });
            } else {
                seen[j] = true;
            }
        }
        if let Batch::Pair(a, b) = *batch {
            if a != b && a < n && b < n && !inst.compatible(a, b) {
                out.push(Violation::IncompatiblePair { a, b });
            }
        }
    }
    for (j, ok) in seen.iter().enumerate() {
        if !ok {
            out.push(Violation::MissingJob { job: j });
        }
    }
    out
}
