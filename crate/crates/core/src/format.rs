//! Line-oriented text formats for instances and schedules.
//!
//! Instance:
//!
//! ```text
//! n m s mode
//! p_1 ... p_n
//! i j          (one compatible pair per line, 1-based)
//! ```
//!
//! Schedule: one line per machine listing its batches in order as `[i]` or
//! `[i,j]`, then a final `Cmax <value>` line. An empty line is an idle
//! machine. Blank lines, and text after `#`, are ignored in instance files.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matching::CompatGraph;
use crate::model::{Batch, Instance, Mode, Schedule, Time};

struct Tokens<'a> {
    line: usize,
    text: &'a str,
    items: Vec<(usize, &'a str)>,
}

fn tokens(line: usize, text: &str) -> Tokens<'_> {
    let body = text.split('#').next().unwrap_or("");
    let mut items = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                items.push((s + 1, &body[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        items.push((s + 1, &body[s..]));
    }
    Tokens { line, text, items }
}

impl Tokens<'_> {
    fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    fn end_column(&self) -> usize {
        self.text.trim_end().len() + 1
    }

    fn expect_len(&self, len: usize, what: &str) -> Result<()> {
        if self.items.len() < len {
            return Err(Error::parse(
                self.line,
                self.end_column(),
                format!("expected {what}"),
            ));
        }
        if let Some(&(col, tok)) = self.items.get(len) {
            return Err(Error::parse(self.line, col, format!("unexpected `{tok}`")));
        }
        Ok(())
    }

    fn number<T: std::str::FromStr>(&self, idx: usize, what: &str) -> Result<T> {
        let (col, tok) = self.items[idx];
        tok.parse()
            .map_err(|_| Error::parse(self.line, col, format!("{what}: `{tok}` is not a valid number")))
    }
}

/// Parses an instance. Errors carry the 1-based line and column.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| tokens(i + 1, l))
        .filter(|t| !t.is_empty());
    let eof = || Error::parse(text.lines().count() + 1, 1, "unexpected end of input");

    let head = lines.next().ok_or_else(eof)?;
    head.expect_len(4, "`n m s mode`")?;
    let n: usize = head.number(0, "job count")?;
    let m: usize = head.number(1, "machine count")?;
    let s: Time = head.number(2, "setup time")?;
    let (mode_col, mode_tok) = head.items[3];
    let mode: Mode = mode_tok.parse().map_err(|_| {
        Error::parse(
            head.line,
            mode_col,
            format!("mode must be `max` or `sum`, found `{mode_tok}`"),
        )
    })?;
    if n == 0 {
        return Err(Error::parse(
            head.line,
            head.items[0].0,
            "job count must be positive",
        ));
    }
    if m == 0 {
        return Err(Error::parse(
            head.line,
            head.items[1].0,
            "machine count must be positive",
        ));
    }

    let times = lines.next().ok_or_else(eof)?;
    times.expect_len(n, &format!("{n} processing times"))?;
    let mut p = Vec::with_capacity(n);
    for i in 0..n {
        let v: Time = times.number(i, "processing time")?;
        if v == 0 {
            return Err(Error::parse(
                times.line,
                times.items[i].0,
                "processing times must be positive",
            ));
        }
        p.push(v);
    }

    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for t in lines {
        t.expect_len(2, "an edge `i j`")?;
        let a: usize = t.number(0, "job index")?;
        let b: usize = t.number(1, "job index")?;
        for (k, v) in [(0, a), (1, b)] {
            if v == 0 || v > n {
                return Err(Error::parse(
                    t.line,
                    t.items[k].0,
                    format!("job {v} out of range 1..{n}"),
                ));
            }
        }
        if a == b {
            return Err(Error::parse(
                t.line,
                t.items[0].0,
                format!("self-loop on job {a}"),
            ));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(Error::parse(
                t.line,
                t.items[0].0,
                format!("duplicate edge {a} {b}"),
            ));
        }
        edges.push((a - 1, b - 1));
    }
    let graph = CompatGraph::new(n, &edges)?;
    Instance::new(p, m, s, mode, graph)
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = format!(
        "{} {} {} {}\n",
        inst.job_count(),
        inst.machine_count(),
        inst.setup(),
        inst.mode()
    );
    let times: Vec<String> = inst.proc_times().iter().map(|p| p.to_string()).collect();
    out.push_str(&times.join(" "));
    out.push('\n');
    for &(a, b) in inst.graph().edges() {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}

/// Parses a schedule. Returns it with the `Cmax` value it declares.
pub fn parse_schedule(text: &str) -> Result<(Schedule, Time)> {
    let mut machines = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((i, line)) = lines.next() {
        let ln = i + 1;
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("Cmax") {
            let col = line.find("Cmax").unwrap() + 5;
            let value = rest.trim().parse().map_err(|_| {
                Error::parse(ln, col, format!("`Cmax` needs a number, found `{}`", rest.trim()))
            })?;
            if let Some((j, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
                let col = extra.len() - extra.trim_start().len() + 1;
                return Err(Error::parse(j + 1, col, "text after the `Cmax` line"));
            }
            return Ok((Schedule::new(machines), value));
        }
        machines.push(parse_machine(ln, line)?);
    }
    Err(Error::parse(text.lines().count() + 1, 1, "missing `Cmax` line"))
}

fn parse_machine(ln: usize, line: &str) -> Result<Vec<Batch>> {
    let mut out = Vec::new();
    let mut rest = line;
    let mut offset = 0;
    loop {
        let skip = rest.len() - rest.trim_start().len();
        rest = &rest[skip..];
        offset += skip;
        if rest.is_empty() {
            return Ok(out);
        }
        let col = offset + 1;
        if !rest.starts_with('[') {
            return Err(Error::parse(ln, col, "expected a batch like `[3]` or `[1,4]`"));
        }
        let close = rest
            .find(']')
            .ok_or_else(|| Error::parse(ln, col, "unclosed `[`"))?;
        let mut jobs = Vec::new();
        for part in rest[1..close].split(',') {
            let j: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::parse(ln, col, format!("bad job index `{}`", part.trim())))?;
            if j == 0 {
                return Err(Error::parse(ln, col, "job indices start at 1"));
            }
            jobs.push(j - 1);
        }
        out.push(match jobs[..] {
            [a] => Batch::single(a),
            [a, b] => Batch::pair(a, b),
            _ => return Err(Error::parse(ln, col, "a batch holds one or two jobs")),
        });
        rest = &rest[close + 1..];
        offset += close + 1;
    }
}

pub fn write_schedule(sched: &Schedule, cmax: Time) -> String {
    let mut out = String::new();
    for machine in sched.machines() {
        let line: Vec<String> = machine.iter().map(|b| b.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    let _ = writeln!(out, "Cmax {cmax}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "3 1 1 max\n3 5 7\n1 2\n1 3\n2 3\n";

    #[test]
    fn instance_round_trip() {
        let inst = parse_instance(TRIANGLE).unwrap();
        assert_eq!(inst.job_count(), 3);
        assert_eq!(inst.graph().edge_count(), 3);
        assert_eq!(write_instance(&inst), TRIANGLE);
        let commented = "# triangle\n3 1 1 max   # header\n\n3 5 7\n1 2\n1 3\n2 3\n";
        assert_eq!(parse_instance(commented).unwrap(), inst);
    }

    #[test]
    fn instance_errors_point_at_the_token() {
        let err = |t: &str| match parse_instance(t) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected a parse error, got {other:?}"),
        };
        assert_eq!(err("3 1 x max\n1 2 3\n"), (1, 5));
        assert_eq!(err("3 1 1 avg\n1 2 3\n"), (1, 7));
        assert_eq!(err("3 1 1 max\n1 2\n"), (2, 4));
        assert_eq!(err("3 1 1 max\n1 2 3 4\n"), (2, 7));
        assert_eq!(err("2 1 1 max\n1 2\n1 3\n"), (3, 3));
        assert_eq!(err("2 1 1 max\n1 2\n1 2\n2 1\n"), (4, 1));
        assert_eq!(err("2 1 1 max\n1 0\n"), (2, 3));
        assert_eq!(err("2 1 1 max\n"), (2, 1));
    }

    #[test]
    fn schedule_round_trip() {
        let s = Schedule::new(vec![vec![Batch::pair(1, 2), Batch::single(0)], vec![]]);
        let text = write_schedule(&s, 11);
        assert_eq!(text, "[2,3] [1]\n\nCmax 11\n");
        assert_eq!(parse_schedule(&text).unwrap(), (s, 11));
    }

    #[test]
    fn schedule_errors() {
        assert!(parse_schedule("[1]\n").is_err());
        assert!(parse_schedule("[1,2,3]\nCmax 3\n").is_err());
        assert!(parse_schedule("[0]\nCmax 3\n").is_err());
        assert!(parse_schedule("1\nCmax 3\n").is_err());
        assert!(parse_schedule("[1]\nCmax x\n").is_err());
        assert!(parse_schedule("[1]\nCmax 3\n[2]\n").is_err());
    }
}
