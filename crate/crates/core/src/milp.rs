//! Mixed-integer model of the max-batch problem, LP-format export and
//! import, and an exhaustive solver for tiny models.
//!
//! Variables: `x_i_j_k = 1` when jobs `i < j` share a batch on machine `k`,
//! `y_i_k = 1` when job `i` runs alone on machine `k`, and the continuous
//! makespan `Cmax`. Rows come in five families:
//!
//! 1. `c1_i`: job `i` is in at most one two-job batch.
//! 2. `c2_i_j`: `sum_k x_i_j_k <= a_ij`, present for every `i < j`.
//! 3. `c3_i`: job `i` is at most once a single-job batch.
//! 4. `c4_i`: job `i` is in exactly one batch.
//! 5. `c5_k`: `sum (pb_ij + s) x_i_j_k + sum (p_i + s) y_i_k - Cmax <= s`,
//!    which is the span of machine `k` bounded by the makespan.
//!
//! Families 1 and 4 sum over every pair containing `i`, whichever side of
//! the pair it is on.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::model::{Batch, Instance, Mode, Schedule, Time};

/// Largest number of binaries [`enumerate_milp_optimum`] accepts.
pub const ENUMERATION_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarId {
    /// Jobs `i < j` on machine `k`, all 0-based.
    X {
        i: usize,
        j: usize,
        k: usize,
    },
    Y {
        i: usize,
        k: usize,
    },
    Cmax,
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarId::X { i, j, k } => write!(f, "x_{}_{}_{}", i + 1, j + 1, k + 1),
            VarId::Y { i, k } => write!(f, "y_{}_{}", i + 1, k + 1),
            VarId::Cmax => f.write_str("Cmax"),
        }
    }
}

impl VarId {
    fn parse(name: &str) -> Option<VarId> {
        if name == "Cmax" {
            return Some(VarId::Cmax);
        }
        let mut parts = name.split('_');
        let head = parts.next()?;
        let nums: Vec<usize> = parts
            .map(|p| p.parse::<usize>().ok().filter(|&v| v > 0))
            .collect::<Option<_>>()?;
        match (head, nums.as_slice()) {
            ("x", &[i, j, k]) if i < j => Some(VarId::X {
                i: i - 1,
                j: j - 1,
                k: k - 1,
            }),
            ("y", &[i, k]) => Some(VarId::Y { i: i - 1, k: k - 1 }),
            _ => None,
        }
    }

    pub fn is_binary(self) -> bool {
        !matches!(self, VarId::Cmax)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
}

impl Sense {
    fn as_str(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    /// Family 1 to 5.
    pub family: u8,
    /// (variable index, coefficient)
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// Minimise `Cmax` subject to `constraints`; every variable except `Cmax`
/// is binary and `Cmax >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilpModel {
    pub vars: Vec<VarId>,
    pub constraints: Vec<Constraint>,
}

impl MilpModel {
    pub fn binary_count(&self) -> usize {
        self.vars.iter().filter(|v| v.is_binary()).count()
    }

    pub fn continuous_count(&self) -> usize {
        self.vars.len() - self.binary_count()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    fn cmax_index(&self) -> Option<usize> {
        self.vars.iter().position(|v| *v == VarId::Cmax)
    }

    /// Left-hand side of row `row` under `values` (indexed like `vars`).
    pub fn activity(&self, row: usize, values: &[i64]) -> i64 {
        self.constraints[row]
            .terms
            .iter()
            .map(|&(v, c)| c * values[v])
            .sum()
    }
}

/// Expected sizes: `m n (n+1) / 2` binaries and `n (n+5) / 2 + m` rows.
pub fn expected_counts(n: usize, m: usize) -> (usize, usize) {
    (m * n * (n + 1) / 2, n * (n + 5) / 2 + m)
}

pub fn build_model(inst: &Instance) -> Result<MilpModel> {
    if inst.mode() != Mode::Max {
        return Err(Error::UnsupportedMode(
            "the mixed-integer model covers max-batch instances only".into(),
        ));
    }
    let (n, m, s) = (inst.job_count(), inst.machine_count(), inst.setup() as i64);
    let mut vars = Vec::with_capacity(m * n * (n + 1) / 2 + 1);
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..m {
                vars.push(VarId::X { i, j, k });
            }
        }
    }
    for i in 0..n {
        for k in 0..m {
            vars.push(VarId::Y { i, k });
        }
    }
    vars.push(VarId::Cmax);
    let index: HashMap<VarId, usize> = vars.iter().enumerate().map(|(a, v)| (*v, a)).collect();
    let x = |i: usize, j: usize, k: usize| {
        index[&VarId::X {
            i: i.min(j),
            j: i.max(j),
            k,
        }]
    };
    let y = |i: usize, k: usize| index[&VarId::Y { i, k }];
    let cmax = index[&VarId::Cmax];
    let p = |i: usize| inst.proc_time(i) as i64;

    let mut rows = Vec::with_capacity(n * (n + 5) / 2 + m);
    let mut row = |name: String, family: u8, mut terms: Vec<(usize, i64)>, sense, rhs| {
        if terms.is_empty() {
            terms.push((cmax, 0));
        }
        rows.push(Constraint {
            name,
            family,
            terms,
            sense,
            rhs,
        });
    };
    let pair_terms = |i: usize| -> Vec<(usize, i64)> {
        (0..m)
            .flat_map(|k| (0..n).filter(move |&j| j != i).map(move |j| (x(i, j, k), 1)))
            .collect()
    };
    for i in 0..n {
        row(format!("c1_{}", i + 1), 1, pair_terms(i), Sense::Le, 1);
    }
    for i in 0..n {
        for j in i + 1..n {
            let terms = (0..m).map(|k| (x(i, j, k), 1)).collect();
            row(
                format!("c2_{}_{}", i + 1, j + 1),
                2,
                terms,
                Sense::Le,
                inst.compatible(i, j) as i64,
            );
        }
    }
    for i in 0..n {
        let terms = (0..m).map(|k| (y(i, k), 1)).collect();
        row(format!("c3_{}", i + 1), 3, terms, Sense::Le, 1);
    }
    for i in 0..n {
        let mut terms = pair_terms(i);
        terms.extend((0..m).map(|k| (y(i, k), 1)));
        row(format!("c4_{}", i + 1), 4, terms, Sense::Eq, 1);
    }
    for k in 0..m {
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                terms.push((x(i, j, k), p(i).max(p(j)) + s));
            }
        }
        for i in 0..n {
            terms.push((y(i, k), p(i) + s));
        }
        terms.push((cmax, -1));
        row(format!("c5_{}", k + 1), 5, terms, Sense::Le, s);
    }
    Ok(MilpModel {
        vars,
        constraints: rows,
    })
}

fn write_terms(out: &mut String, model: &MilpModel, terms: &[(usize, i64)]) {
    for (a, &(v, c)) in terms.iter().enumerate() {
        let name = model.vars[v];
        let sign = if c < 0 {
            "-"
        } else if a > 0 {
            "+"
        } else {
            ""
        };
        if !sign.is_empty() {
            out.push_str(sign);
            out.push(' ');
        }
        match c.abs() {
            1 => write!(out, "{name}"),
            mag => write!(out, "{mag} {name}"),
        }
        .unwrap();
        if a + 1 < terms.len() {
            out.push(' ');
        }
    }
}

/// LP text with `Minimize`, `Subject To`, `Bounds`, `Binaries` and `End`
/// sections, one constraint per line.
pub fn export_lp(model: &MilpModel) -> String {
    let mut out = String::from("\\ makespan model, batch capacity 2\nMinimize\n obj: Cmax\nSubject To\n");
    for c in &model.constraints {
        write!(out, " {}: ", c.name).unwrap();
        write_terms(&mut out, model, &c.terms);
        writeln!(out, " {} {}", c.sense.as_str(), c.rhs).unwrap();
    }
    out.push_str("Bounds\n Cmax >= 0\nBinaries\n");
    for v in model.vars.iter().filter(|v| v.is_binary()) {
        writeln!(out, " {v}").unwrap();
    }
    out.push_str("End\n");
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Start,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    End,
}

type RawRow = (usize, String, Vec<(VarId, i64)>, Sense, i64);

/// Reads LP text in the layout written by [`export_lp`].
pub fn parse_lp(text: &str) -> Result<MilpModel> {
    let mut section = Section::Start;
    let mut binaries: Vec<VarId> = Vec::new();
    let mut raw_rows: Vec<RawRow> = Vec::new();
    let mut objective_seen = false;
    for (a, raw) in text.lines().enumerate() {
        let ln = a + 1;
        let line = raw.split('\\').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let next = match line.to_ascii_lowercase().as_str() {
            "minimize" | "minimise" | "min" => Some(Section::Objective),
            "subject to" | "st" | "s.t." => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "binaries" | "binary" | "bin" => Some(Section::Binaries),
            "end" => Some(Section::End),
            _ => None,
        };
        if let Some(next) = next {
            section = next;
            continue;
        }
        let err = |msg: String| Error::parse(ln, 1, msg);
        match section {
            Section::Start | Section::End => return Err(err(format!("text outside a section: `{line}`"))),
            Section::Objective => {
                let body = line.split_once(':').map_or(line, |(_, b)| b).trim();
                if body != "Cmax" {
                    return Err(err(format!("objective must be `Cmax`, found `{body}`")));
                }
                objective_seen = true;
            }
            Section::Constraints => {
                let (name, body) = line
                    .split_once(':')
                    .ok_or_else(|| err("constraint without a name".into()))?;
                let name = name.trim().to_string();
                let family = name
                    .strip_prefix('c')
                    .and_then(|r| r.split('_').next())
                    .and_then(|f| f.parse::<u8>().ok())
                    .filter(|f| (1..=5).contains(f))
                    .ok_or_else(|| err(format!("unknown row family in `{name}`")))?;
                let (lhs, sense, rhs) = if let Some((l, r)) = body.split_once("<=") {
                    (l, Sense::Le, r)
                } else if let Some((l, r)) = body.split_once('=') {
                    (l, Sense::Eq, r)
                } else {
                    return Err(err("missing `<=` or `=`".into()));
                };
                let rhs: i64 = rhs
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad right-hand side `{}`", rhs.trim())))?;
                let terms = parse_terms(lhs).map_err(err)?;
                raw_rows.push((family as usize, name, terms, sense, rhs));
            }
            Section::Bounds => {
                let compact: String = line.split_whitespace().collect();
                if compact != "Cmax>=0" {
                    return Err(err(format!("unsupported bound `{line}`")));
                }
            }
            Section::Binaries => {
                for tok in line.split_whitespace() {
                    let v = VarId::parse(tok)
                        .filter(|v| v.is_binary())
                        .ok_or_else(|| err(format!("bad binary `{tok}`")))?;
                    binaries.push(v);
                }
            }
        }
    }
    if section != Section::End {
        return Err(Error::parse(text.lines().count() + 1, 1, "missing `End`"));
    }
    if !objective_seen {
        return Err(Error::parse(1, 1, "missing objective"));
    }
    let mut vars = binaries;
    vars.push(VarId::Cmax);
    let index: HashMap<VarId, usize> = vars.iter().enumerate().map(|(a, v)| (*v, a)).collect();
    if index.len() != vars.len() {
        return Err(Error::Config("duplicate binary declaration".into()));
    }
    let mut constraints = Vec::with_capacity(raw_rows.len());
    for (family, name, terms, sense, rhs) in raw_rows {
        let terms = terms
            .into_iter()
            .map(|(v, c)| {
                index
                    .get(&v)
                    .map(|&a| (a, c))
                    .ok_or_else(|| Error::Config(format!("row {name} uses undeclared variable {v}")))
            })
            .collect::<Result<_>>()?;
        constraints.push(Constraint {
            name,
            family: family as u8,
            terms,
            sense,
            rhs,
        });
    }
    Ok(MilpModel { vars, constraints })
}

fn parse_terms(lhs: &str) -> std::result::Result<Vec<(VarId, i64)>, String> {
    let mut terms = Vec::new();
    let mut sign = 1i64;
    let mut coef: Option<i64> = None;
    for tok in lhs.split_whitespace() {
        match tok {
            "+" => sign = 1,
            "-" => sign = -1,
            _ => {
                if let Ok(c) = tok.parse::<i64>() {
                    coef = Some(c);
                } else {
                    let v = VarId::parse(tok).ok_or_else(|| format!("bad variable `{tok}`"))?;
                    terms.push((v, sign * coef.take().unwrap_or(1)));
                    sign = 1;
                }
            }
        }
    }
    if terms.is_empty() {
        return Err("empty left-hand side".into());
    }
    Ok(terms)
}

/// Best makespan found by enumerating binary assignments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilpOptimum {
    pub cmax: Time,
    /// Values of every variable, `Cmax` included.
    pub values: Vec<i64>,
    pub schedule: Schedule,
}

/// Minimises `Cmax` over all binary assignments.
///
/// `Cmax` may appear only in `<=` rows with coefficient -1, so its optimal
/// value for a fixed assignment is the largest violation it has to absorb.
/// Branches are cut only when a row can no longer be satisfied or the bound
/// on `Cmax` already reaches the incumbent.
pub fn enumerate_milp_optimum(model: &MilpModel) -> Result<MilpOptimum> {
    let binaries = model.binary_count();
    if binaries > ENUMERATION_LIMIT {
        return Err(Error::OracleLimit {
            size: binaries,
            limit: ENUMERATION_LIMIT,
        });
    }
    let cmax = model
        .cmax_index()
        .ok_or_else(|| Error::Config("model has no Cmax variable".into()))?;
    let mut uses: Vec<Vec<(usize, i64)>> = vec![Vec::new(); model.vars.len()];
    let mut objective_row = vec![false; model.constraints.len()];
    for (r, c) in model.constraints.iter().enumerate() {
        for &(v, coef) in &c.terms {
            if v == cmax {
                match (coef, c.sense) {
                    (0, _) => {}
                    (-1, Sense::Le) => objective_row[r] = true,
                    _ => {
                        return Err(Error::Config(format!(
                            "row {}: unsupported Cmax coefficient {coef}",
                            c.name
                        )))
                    }
                }
            } else {
                uses[v].push((r, coef));
            }
        }
    }
    let rows = model.constraints.len();
    let mut lo = vec![0i64; rows];
    let mut hi = vec![0i64; rows];
    for used in &uses {
        for &(r, c) in used {
            if c < 0 {
                lo[r] += c;
            } else {
                hi[r] += c;
            }
        }
    }
    let order: Vec<usize> = (0..model.vars.len()).filter(|&v| v != cmax).collect();
    let mut search = Enum {
        model,
        uses,
        objective_row,
        order,
        act: vec![0; rows],
        lo,
        hi,
        values: vec![0; model.vars.len()],
        best: i64::MAX,
        best_values: None,
    };
    search.recurse(0);
    let mut values = search
        .best_values
        .ok_or_else(|| Error::Internal("model has no feasible assignment".into()))?;
    let best = search.best.max(0);
    values[cmax] = best;
    let schedule = schedule_from_values(model, &values);
    Ok(MilpOptimum {
        cmax: best as Time,
        values,
        schedule,
    })
}

struct Enum<'a> {
    model: &'a MilpModel,
    uses: Vec<Vec<(usize, i64)>>,
    objective_row: Vec<bool>,
    order: Vec<usize>,
    /// Activity of each row from the variables fixed so far.
    act: Vec<i64>,
    /// Smallest and largest contribution still possible from free variables.
    lo: Vec<i64>,
    hi: Vec<i64>,
    values: Vec<i64>,
    best: i64,
    best_values: Option<Vec<i64>>,
}

impl Enum<'_> {
    fn feasible(&self, r: usize) -> bool {
        let c = &self.model.constraints[r];
        let (min, max) = (self.act[r] + self.lo[r], self.act[r] + self.hi[r]);
        if self.objective_row[r] {
            return (min - c.rhs).max(0) < self.best;
        }
        match c.sense {
            Sense::Le => min <= c.rhs,
            Sense::Eq => min <= c.rhs && c.rhs <= max,
        }
    }

    fn recurse(&mut self, depth: usize) {
        if depth == self.order.len() {
            let value = (0..self.act.len())
                .filter(|&r| self.objective_row[r])
                .map(|r| self.act[r] - self.model.constraints[r].rhs)
                .max()
                .unwrap_or(0)
                .max(0);
            if value < self.best {
                self.best = value;
                self.best_values = Some(self.values.clone());
            }
            return;
        }
        let v = self.order[depth];
        for (r, c) in self.uses[v].clone() {
            if c < 0 {
                self.lo[r] -= c;
            } else {
                self.hi[r] -= c;
            }
        }
        for bit in [0i64, 1] {
            self.values[v] = bit;
            if bit == 1 {
                for &(r, c) in &self.uses[v] {
                    self.act[r] += c;
                }
            }
            if self.uses[v].iter().all(|&(r, _)| self.feasible(r)) {
                self.recurse(depth + 1);
            }
            if bit == 1 {
                for &(r, c) in &self.uses[v] {
                    self.act[r] -= c;
                }
            }
        }
        self.values[v] = 0;
        for (r, c) in self.uses[v].clone() {
            if c < 0 {
                self.lo[r] += c;
            } else {
                self.hi[r] += c;
            }
        }
    }
}

/// Batches selected by a 0/1 assignment, grouped by machine in variable
/// order. Machines are sized from the largest machine index in the model.
pub fn schedule_from_values(model: &MilpModel, values: &[i64]) -> Schedule {
    let m = model
        .vars
        .iter()
        .filter_map(|v| match *v {
            VarId::X { k, .. } | VarId::Y { k, .. } => Some(k + 1),
            VarId::Cmax => None,
        })
        .max()
        .unwrap_or(0);
    let mut sched = Schedule::empty(m);
    for (v, &val) in model.vars.iter().zip(values) {
        if val != 1 {
            continue;
        }
        match *v {
            VarId::X { i, j, k } => sched.push(k, Batch::pair(i, j)),
            VarId::Y { i, k } => sched.push(k, Batch::single(i)),
            VarId::Cmax => {}
        }
    }
    sched
}

/// The 0/1 assignment describing `sched`, with `Cmax` set to its makespan.
pub fn values_from_schedule(model: &MilpModel, sched: &Schedule, inst: &Instance) -> Vec<i64> {
    let index: HashMap<VarId, usize> = model.vars.iter().enumerate().map(|(a, v)| (*v, a)).collect();
    let mut values = vec![0; model.vars.len()];
    for (k, machine) in sched.machines().iter().enumerate() {
        for b in machine {
            let id = match *b {
                Batch::Single(i) => VarId::Y { i, k },
                Batch::Pair(i, j) => VarId::X { i, j, k },
            };
            values[index[&id]] = 1;
        }
    }
    values[index[&VarId::Cmax]] = inst.eval(sched) as i64;
    values
}

/// Whether `values` satisfies every row.
pub fn is_feasible(model: &MilpModel, values: &[i64]) -> bool {
    (0..model.constraints.len()).all(|r| {
        let c = &model.constraints[r];
        let a = model.activity(r, values);
        match c.sense {
            Sense::Le => a <= c.rhs,
            Sense::Eq => a == c.rhs,
        }
    }) && values.iter().all(|&v| v >= 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::CompatGraph;

    fn inst(p: Vec<Time>, m: usize, s: Time, g: CompatGraph) -> Instance {
        Instance::new(p, m, s, Mode::Max, g).unwrap()
    }

    #[test]
    fn counts() {
        let two = build_model(&inst(vec![1, 2], 1, 1, CompatGraph::complete(2))).unwrap();
        assert_eq!(
            (two.binary_count(), two.continuous_count(), two.constraint_count()),
            (3, 1, 8)
        );
        let four = build_model(&inst(vec![1; 4], 2, 1, CompatGraph::empty(4))).unwrap();
        assert_eq!((four.binary_count(), four.constraint_count()), (20, 20));
        assert_eq!(expected_counts(4, 2), (20, 20));
    }

    #[test]
    fn single_job() {
        let model = build_model(&inst(vec![7], 1, 3, CompatGraph::empty(1))).unwrap();
        assert_eq!(model.binary_count(), 1);
        let lp = export_lp(&model);
        let binaries: Vec<&str> = lp
            .split("Binaries\n")
            .nth(1)
            .unwrap()
            .lines()
            .take_while(|l| *l != "End")
            .map(str::trim)
            .collect();
        assert_eq!(binaries, ["y_1_1"]);
        assert!(lp.contains(" c1_1: 0 Cmax <= 1\n"));
        assert_eq!(enumerate_milp_optimum(&model).unwrap().cmax, 7);
    }

    #[test]
    fn lp_round_trip() {
        let m = build_model(&inst(vec![3, 5], 1, 2, CompatGraph::complete(2))).unwrap();
        let text = export_lp(&m);
        assert!(text.contains(" c5_1: 7 x_1_2_1 + 5 y_1_1 + 7 y_2_1 - Cmax <= 2\n"));
        assert!(text.contains(" c2_1_2: x_1_2_1 <= 1\n"));
        assert_eq!(parse_lp(&text).unwrap(), m);
    }

    #[test]
    fn lp_parse_errors() {
        assert!(parse_lp("Minimize\n obj: Cmax\nSubject To\n c1_1: x_1_2_1 <= 1\n").is_err());
        assert!(parse_lp("Minimize\n obj: Cmax\nSubject To\n c9_1: y_1_1 <= 1\nEnd\n").is_err());
        assert!(parse_lp("Minimize\n obj: Cmax\nSubject To\n c1_1: y_1_1 <= 1\nEnd\n").is_err());
    }

    #[test]
    fn triangle_optimum() {
        let model = build_model(&inst(vec![3, 5, 7], 1, 1, CompatGraph::complete(3))).unwrap();
        let opt = enumerate_milp_optimum(&model).unwrap();
        assert_eq!(opt.cmax, 11);
        assert!(is_feasible(&model, &opt.values));
    }

    #[test]
    fn sum_mode_is_rejected() {
        let i = inst(vec![1, 2], 1, 1, CompatGraph::empty(2)).with_mode(Mode::Sum);
        assert!(matches!(build_model(&i), Err(Error::UnsupportedMode(_))));
    }

    #[test]
    fn schedules_map_to_feasible_assignments() {
        let i = inst(vec![3, 5, 7], 2, 1, CompatGraph::complete(3));
        let model = build_model(&i).unwrap();
        let sched = Schedule::new(vec![vec![Batch::pair(1, 2)], vec![Batch::single(0)]]);
        let values = values_from_schedule(&model, &sched, &i);
        assert!(is_feasible(&model, &values));
        let c5: Vec<i64> = (0..model.constraint_count())
            .filter(|&r| model.constraints[r].family == 5)
            .map(|r| model.activity(r, &values) + values[model.vars.len() - 1])
            .collect();
        assert_eq!(c5, vec![7 + 1, 3 + 1]);
        assert_eq!(schedule_from_values(&model, &values), sched);
    }
}
