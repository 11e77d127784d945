//! Differential replay of a trace across engines.

use std::fmt::Write as _;
use std::time::Instant;

use crate::engine::{build, lower, Answer, Counters, EngineError, EngineKind, Step};
use crate::trace::{Expect, Trace, TraceOp};

#[derive(Debug, Clone)]
pub struct EngineRun {
    pub engine: EngineKind,
    /// One answer per query op, in trace order.
    pub answers: Vec<Answer>,
    pub counters: Counters,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub op: usize,
    pub engine: String,
    pub got: String,
    pub want: String,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub runs: Vec<EngineRun>,
    pub mismatch: Option<Mismatch>,
    /// Shortest failing prefix, with reference answers filled in.
    pub reproduction: Option<Trace>,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("no engines selected")]
    NoEngines,
    #[error("checking needs the oracle engine or expected answers in the trace")]
    NoReference,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl RunReport {
    pub fn run(&self, engine: EngineKind) -> Option<&EngineRun> {
        self.runs.iter().find(|r| r.engine == engine)
    }

    pub const CSV_HEADER: &'static str = "engine,n,m,eta,reorgs,recompressions,arena_cells,max_query_steps,wall_ms";

    pub fn csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.runs {
            let c = &r.counters;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{:.3}",
                r.engine, c.n, c.m, c.eta, c.reorgs, c.recompressions, c.arena_cells, c.max_query_steps, r.wall_ms
            )
            .unwrap();
        }
        out
    }
}

fn replay(kind: EngineKind, trace: &Trace, steps: &[Step], max_n: u32) -> Result<EngineRun, EngineError> {
    let start = Instant::now();
    let mut e = build(kind, trace, steps, max_n)?;
    let mut answers = Vec::with_capacity(trace.queries());
    for (i, &s) in steps.iter().enumerate() {
        let a = e.step(s).map_err(|source| EngineError::Op { engine: kind, op: i, source })?;
        answers.extend(a);
    }
    let mut counters = e.counters();
    counters.n = trace.nodes() as u64;
    counters.m = (trace.queries() + trace.links()) as u64;
    Ok(EngineRun { engine: kind, answers, counters, wall_ms: start.elapsed().as_secs_f64() * 1e3 })
}

fn replay_all(kinds: &[EngineKind], trace: &Trace, steps: &[Step], max_n: u32) -> Result<Vec<EngineRun>, EngineError> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        kinds.par_iter().map(|&k| replay(k, trace, steps, max_n)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        kinds.iter().map(|&k| replay(k, trace, steps, max_n)).collect()
    }
}

fn show(a: &Answer, trace: &Trace, nca_only: bool) -> String {
    let e = |v: u32| trace.external[v as usize];
    match a {
        None => "none".into(),
        Some(t) if nca_only => e(t.a).to_string(),
        Some(t) => format!("{} {} {}", e(t.a), e(t.ax), e(t.ay)),
    }
}

fn agrees(expect: Expect, got: &Answer) -> bool {
    match expect {
        Expect::Nca(a) => a == got.map(|t| t.a),
        Expect::Ca(t) => t == got.map(|t| (t.a, t.ax, t.ay)),
    }
}

/// The first disagreement with the reference, by op index.
fn compare(trace: &Trace, runs: &[EngineRun]) -> Option<Mismatch> {
    let oracle = runs.iter().find(|r| r.engine == EngineKind::Oracle);
    let queries = trace.ops.iter().enumerate().filter(|(_, o)| o.is_query());
    for (q, (i, op)) in queries.enumerate() {
        let nca_only = matches!(op, TraceOp::Nca(..));
        let reference = |got: &Answer| {
            if let Some(o) = oracle {
                let o = &o.answers[q];
                let same = if nca_only { o.map(|t| t.a) == got.map(|t| t.a) } else { o == got };
                (same, show(o, trace, nca_only))
            } else {
                let e = op.expected().unwrap();
                let want = match e {
                    Expect::Nca(a) => a.map_or("none".into(), |v| trace.external[v as usize].to_string()),
                    Expect::Ca(t) => t.map_or("none".into(), |(a, x, y)| {
                        let ex = |v: u32| trace.external[v as usize];
                        format!("{} {} {}", ex(a), ex(x), ex(y))
                    }),
                };
                (agrees(e, got), want)
            }
        };
        if let (Some(o), Some(e)) = (oracle, op.expected()) {
            if !agrees(e, &o.answers[q]) {
                return Some(Mismatch {
                    op: i,
                    engine: "expected".into(),
                    got: show(&o.answers[q], trace, nca_only),
                    want: format!("{op:?}"),
                });
            }
        }
        for r in runs.iter().filter(|r| r.engine != EngineKind::Oracle) {
            let (ok, want) = reference(&r.answers[q]);
            if !ok {
                return Some(Mismatch { op: i, engine: r.engine.to_string(), got: show(&r.answers[q], trace, nca_only), want });
            }
        }
    }
    None
}

/// Replays `trace` on each engine. With `check`, answers are compared against
/// the oracle, or against the trace's expected answers without it.
pub fn run(trace: &Trace, engines: &[EngineKind], check: bool, max_n: u32) -> Result<RunReport, RunError> {
    if engines.is_empty() {
        return Err(RunError::NoEngines);
    }
    let mut kinds = engines.to_vec();
    kinds.sort();
    kinds.dedup();
    let has_oracle = kinds.contains(&EngineKind::Oracle);
    let all_expected = trace.ops.iter().filter(|o| o.is_query()).all(|o| o.expected().is_some());
    if check && !has_oracle && !all_expected {
        return Err(RunError::NoReference);
    }
    let steps = lower(trace);
    let runs = replay_all(&kinds, trace, &steps, max_n)?;
    let mut report = RunReport { runs, mismatch: None, reproduction: None };
    if check {
        report.mismatch = compare(trace, &report.runs);
        if let Some(m) = &report.mismatch {
            report.reproduction = minimize(trace, m, max_n);
        }
    }
    Ok(report)
}

fn failing(trace: &Trace, engine: EngineKind, max_n: u32) -> Option<Vec<EngineRun>> {
    let steps = lower(trace);
    let kinds: &[EngineKind] =
        if engine == EngineKind::Oracle { &[EngineKind::Oracle] } else { &[EngineKind::Oracle, engine] };
    let runs = replay_all(kinds, trace, &steps, max_n).ok()?;
    compare(trace, &runs).map(|_| runs)
}

/// Bisects on the prefix length for the shortest prefix that still fails.
fn minimize(trace: &Trace, m: &Mismatch, max_n: u32) -> Option<Trace> {
    let engine = EngineKind::ALL.into_iter().find(|k| k.name() == m.engine).unwrap_or(EngineKind::Oracle);
    let (mut lo, mut hi) = (0usize, m.op + 1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if failing(&trace.prefix(mid), engine, max_n).is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut repro = trace.prefix(hi);
    let runs = failing(&repro, engine, max_n)?;
    let oracle = &runs[0].answers;
    let mut q = 0;
    for op in &mut repro.ops {
        match op {
            TraceOp::Nca(_, _, e) => {
                e.get_or_insert(oracle[q].map(|t| t.a));
            }
            TraceOp::Ca(_, _, e) => {
                e.get_or_insert(oracle[q].map(|t| (t.a, t.ax, t.ay)));
            }
            _ => continue,
        }
        q += 1;
    }
    Some(repro)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, Profile};
    use crate::trace::parse_trace;

    #[test]
    fn all_engines_agree_on_small_traces() {
        for p in Profile::ALL {
            let t = generate(3, p, 300, 2000);
            let engines: Vec<_> = EngineKind::ALL
                .into_iter()
                .filter(|k| !p.is_link() || !k.is_incremental())
                .collect();
            let r = run(&t, &engines, true, 1 << 12).unwrap();
            assert_eq!(r.mismatch, None, "{}", p.name());
        }
    }

    #[test]
    fn expected_answers_alone_suffice() {
        let t = parse_trace("make_node 0\nadd_leaf 0 1\nadd_leaf 0 2\nca 1 2 = 0 1 2\nnca 1 1 = 1").unwrap();
        let r = run(&t, &[EngineKind::IncLinear], true, 64).unwrap();
        assert_eq!(r.mismatch, None);
        let bad = parse_trace("make_node 0\nadd_leaf 0 1\nadd_leaf 0 2\nnca 1 2 = 1").unwrap();
        let r = run(&bad, &[EngineKind::IncLinear], true, 64).unwrap();
        assert_eq!(r.mismatch.unwrap().op, 3);
    }

    #[test]
    fn usage_errors() {
        let t = generate(1, Profile::LinkBalanced, 10, 10);
        assert!(matches!(run(&t, &[], false, 64), Err(RunError::NoEngines)));
        assert!(matches!(run(&t, &[EngineKind::Static], true, 64), Err(RunError::NoReference)));
        assert!(matches!(run(&t, &[EngineKind::IncLog2], false, 64), Err(RunError::Engine(EngineError::Config { .. }))));
        assert!(matches!(run(&t, &[EngineKind::Oracle], false, 4), Err(RunError::Engine(EngineError::Config { .. }))));
    }

    #[test]
    fn replay_is_deterministic() {
        let t = generate(5, Profile::RootHeavy, 400, 1000);
        let a = run(&t, &EngineKind::ALL, true, 1 << 12).unwrap();
        let b = run(&t, &EngineKind::ALL, true, 1 << 12).unwrap();
        for (x, y) in a.runs.iter().zip(&b.runs) {
            assert_eq!((x.engine, &x.answers, x.counters), (y.engine, &y.answers, y.counters));
        }
    }

    #[test]
    fn mismatch_is_minimized() {
        let mut t = generate(2, Profile::LeafHeavy, 50, 200);
        let last = t.ops.iter().rposition(|o| o.is_query()).unwrap();
        let bad = TraceOp::Nca(1, 1, Some(Some(0)));
        t.ops[last] = bad;
        for op in &mut t.ops[..last] {
            if let TraceOp::Nca(_, _, e) = op {
                *e = Some(None);
            }
        }
        let r = run(&t, &[EngineKind::Oracle, EngineKind::IncLog2], true, 64).unwrap();
        let m = r.mismatch.unwrap();
        assert_eq!(m.engine, "expected");
        assert!(m.op < last);

        let mut t = generate(2, Profile::LeafHeavy, 50, 200);
        t.ops[last] = bad;
        let r = run(&t, &[EngineKind::Oracle, EngineKind::IncLog2], true, 64).unwrap();
        assert_eq!(r.mismatch.unwrap().op, last);
        let repro = r.reproduction.unwrap();
        assert_eq!(repro.ops.len(), last + 1);
        assert_eq!(repro.ops[last], bad);
        assert!(repro.ops.iter().filter(|o| o.is_query()).all(|o| o.expected().is_some()));
        let again = run(&repro, &[EngineKind::IncLog2], true, 64).unwrap();
        assert_eq!(again.mismatch.unwrap().op, last);
    }

    #[test]
    fn csv_has_one_row_per_engine() {
        let t = generate(1, Profile::LeafHeavy, 100, 100);
        let r = run(&t, &[EngineKind::Oracle, EngineKind::Static, EngineKind::IncLinear], true, 1 << 10).unwrap();
        let csv = r.csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], RunReport::CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("inc-linear,100,100,99,"));
    }
}
