//! Runs the solvers over an instance suite and compares every answer with
//! the exact oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::instances::{generate_instance_suite, Instance, Target};
use super::io::{write_json, CanvasFile};
use super::{CorpusSpec, HarnessError};
use crate::canvas::{
    detect_exception, inessential_separators, validate_canvas, validate_dem_two, Canvas, ColorSet, ListAssignment,
};
use crate::demtwo::{derive_thom_via_two_twos, solve_dem_two, solve_two_twos, SolveOutcome};
use crate::oracle::{
    bad_path_colorings, extract_critical, has_fan_path, is_critical, solve_exact_within, verify, Coloring,
};
use crate::thomassen::color_with_precolored_edge;

/// Environment variable capping oracle time per instance, in milliseconds.
pub const BUDGET_ENV: &str = "CANVAS_COLOR_BUDGET_MS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    /// Path-plus-vertex solver: coloured iff the oracle colours, exception
    /// iff the exception is detected and the oracle fails.
    DemTwo,
    /// Two 2-listed boundary vertices: always coloured.
    TwoTwos,
    /// Precoloured boundary edge, by both algorithms: always coloured.
    Thom,
    /// At most one non-extending colouring of a three-vertex boundary path
    /// without a fan path.
    BadColorings,
    /// Critical subcanvases of uncolourable instances have only essential
    /// separators and no short cycle with vertices inside.
    Critical,
}

impl CheckMode {
    pub fn all() -> [CheckMode; 5] {
        [CheckMode::DemTwo, CheckMode::TwoTwos, CheckMode::Thom, CheckMode::BadColorings, CheckMode::Critical]
    }

    pub fn name(self) -> &'static str {
        match self {
            CheckMode::DemTwo => "demtwo",
            CheckMode::TwoTwos => "twotwos",
            CheckMode::Thom => "thom",
            CheckMode::BadColorings => "bad-colorings",
            CheckMode::Critical => "critical",
        }
    }
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckMode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckMode::all()
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| HarnessError::Spec(format!("unknown check mode {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Agree,
    Disagree,
    /// The oracle ran out of time.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub id: String,
    pub vertices: usize,
    pub outcome: String,
    pub oracle: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bad_colorings: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fan_path: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Record {
    fn new(id: &str, vertices: usize) -> Self {
        Record {
            id: id.to_string(),
            vertices,
            outcome: String::new(),
            oracle: String::new(),
            status: Status::Agree,
            cases: Vec::new(),
            bad_colorings: None,
            fan_path: None,
            detail: None,
        }
    }

    fn fail(mut self, detail: impl Into<String>) -> Self {
        self.status = Status::Disagree;
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub mode: String,
    pub instances: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub skipped: usize,
    pub outcomes: BTreeMap<String, usize>,
    pub cases: BTreeMap<String, usize>,
    /// Exception certificates the oracle confirmed uncolourable.
    pub exceptions_confirmed: usize,
    pub near_misses_rejected: usize,
    /// Largest bad-colouring count among instances without a fan path.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_bad_without_fan: Option<usize>,
    /// Instances with a fan path and at least two bad colourings.
    pub fan_witnesses: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub summary: Summary,
    pub records: Vec<Record>,
    /// Inputs of disagreeing records.
    pub counterexamples: Vec<(String, CanvasFile)>,
    /// Inputs worth keeping that are not failures, such as fan witnesses.
    pub archive: Vec<(String, CanvasFile)>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.summary.disagreements == 0
    }

    /// One JSON object per record in id order, then the summary.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        let summary = serde_json::json!({ "summary": self.summary });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }

    /// Writes counterexamples and archived inputs as `<id>.canvas.json`.
    pub fn write_files(&self, dir: &Path) -> Result<usize, HarnessError> {
        if self.counterexamples.is_empty() && self.archive.is_empty() {
            return Ok(0);
        }
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::Io(format!("{}: {e}", dir.display())))?;
        for (id, file) in self.counterexamples.iter().chain(&self.archive) {
            write_json(&dir.join(format!("{id}.canvas.json")), file)?;
        }
        Ok(self.counterexamples.len() + self.archive.len())
    }
}

enum Oracle {
    Colorable,
    Uncolorable,
    OutOfTime,
}

impl Oracle {
    fn run(g: &crate::embed::EmbeddedGraph, lists: &ListAssignment, budget: Option<Duration>) -> Oracle {
        let deadline = budget.map(|b| Instant::now() + b);
        match solve_exact_within(g, lists, &Coloring::new(), deadline) {
            Ok(Some(c)) => {
                debug_assert!(verify(g, lists, &c));
                Oracle::Colorable
            }
            Ok(None) => Oracle::Uncolorable,
            Err(_) => Oracle::OutOfTime,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Oracle::Colorable => "colorable",
            Oracle::Uncolorable => "uncolorable",
            Oracle::OutOfTime => "budget",
        }
    }
}

/// Outcome of one instance: its record, and the input again when it should
/// be written out.
struct Checked {
    record: Record,
    keep: Option<CanvasFile>,
    exception_confirmed: bool,
    near_miss: bool,
}

impl Checked {
    fn plain(record: Record) -> Self {
        Checked { record, keep: None, exception_confirmed: false, near_miss: false }
    }
}

fn trace_cases(trace: &[crate::demtwo::TraceStep]) -> Vec<String> {
    let mut cases: Vec<String> = trace.iter().map(|t| t.case.to_string()).collect();
    cases.sort();
    cases.dedup();
    cases
}

fn check_dem_two(inst: &Instance, budget: Option<Duration>) -> Checked {
    let mut rec = Record::new(&inst.id, inst.graph.vertex_count());
    let validated = validate_canvas(&inst.graph, &inst.s, &inst.lists)
        .map_err(|v| v.kind())
        .and_then(|c| validate_dem_two(&c).map_err(|v| v.kind()));
    if let Some(expected) = inst.expect_invalid {
        rec.outcome = "violation".into();
        rec.oracle = "skipped".into();
        return match validated {
            Err(kind) if kind == expected => Checked { near_miss: true, ..Checked::plain(rec) },
            other => Checked::plain(rec.fail(format!("expected {expected}, validators gave {other:?}"))),
        };
    }
    let instance = match validated {
        Ok(i) => i,
        Err(kind) => {
            rec.outcome = "violation".into();
            return Checked::plain(rec.fail(format!("generated instance rejected: {kind}")));
        }
    };
    let oracle = Oracle::run(&inst.graph, &inst.lists, budget);
    rec.oracle = oracle.label().into();
    let detected = detect_exception(&instance).is_some();
    let solution = match solve_dem_two(&instance) {
        Ok(s) => s,
        Err(e) => {
            rec.outcome = "error".into();
            return Checked::plain(rec.fail(e.to_string()));
        }
    };
    rec.cases = trace_cases(&solution.trace);
    let mut exception_confirmed = false;
    let verdict = match (&solution.outcome, &oracle) {
        (_, Oracle::OutOfTime) => {
            rec.status = Status::Skipped;
            None
        }
        (SolveOutcome::Colored(c), Oracle::Colorable) if verify(&inst.graph, &inst.lists, c) => None,
        (SolveOutcome::Colored(_), _) => Some("colouring does not verify".to_string()),
        (SolveOutcome::Exception(_), Oracle::Uncolorable) if detected => {
            exception_confirmed = true;
            None
        }
        (SolveOutcome::Exception(_), _) => Some("exception disagrees with the oracle or detector".into()),
        (SolveOutcome::Violation(v), _) => Some(format!("valid instance reported as {}", v.kind())),
    };
    rec.outcome = match &solution.outcome {
        SolveOutcome::Colored(_) => "colored",
        SolveOutcome::Exception(_) => "exception",
        SolveOutcome::Violation(_) => "violation",
    }
    .into();
    match verdict {
        Some(msg) => Checked { keep: Some(inst.to_file()), ..Checked::plain(rec.fail(msg)) },
        None => Checked { exception_confirmed, ..Checked::plain(rec) },
    }
}

fn check_two_twos(inst: &Instance, budget: Option<Duration>) -> Checked {
    let mut rec = Record::new(&inst.id, inst.graph.vertex_count());
    let (v1, v2) = (inst.s.isolated[0], inst.s.isolated[1]);
    let oracle = Oracle::run(&inst.graph, &inst.lists, budget);
    rec.oracle = oracle.label().into();
    let verdict = match solve_two_twos(&inst.graph, v1, v2, &inst.lists) {
        Ok(sol) => {
            rec.outcome = "colored".into();
            rec.cases = trace_cases(&sol.trace);
            let good = sol.coloring().is_some_and(|c| verify(&inst.graph, &inst.lists, c));
            match oracle {
                Oracle::OutOfTime => {
                    rec.status = Status::Skipped;
                    None
                }
                Oracle::Colorable if good => None,
                _ => Some("solver and oracle disagree".to_string()),
            }
        }
        Err(e) => {
            rec.outcome = "error".into();
            Some(e.to_string())
        }
    };
    match verdict {
        Some(msg) => Checked { keep: Some(inst.to_file()), ..Checked::plain(rec.fail(msg)) },
        None => Checked::plain(rec),
    }
}

fn check_thom(inst: &Instance, budget: Option<Duration>) -> Checked {
    let mut rec = Record::new(&inst.id, inst.graph.vertex_count());
    let (p1, p2) = (inst.s.path[0], inst.s.path[1]);
    let g = &inst.graph;
    let oracle = Oracle::run(g, &inst.lists, budget);
    rec.oracle = oracle.label().into();
    let direct = color_with_precolored_edge(g, p1, p2, &inst.lists);
    let derived = derive_thom_via_two_twos(g, p1, p2, &inst.lists);
    if let Ok(sol) = &derived {
        rec.cases = trace_cases(&sol.trace);
    }
    let direct_ok = direct.as_ref().is_ok_and(|c| verify(g, &inst.lists, c));
    let derived_ok = derived.as_ref().is_ok_and(|s| s.coloring().is_some_and(|c| verify(g, &inst.lists, c)));
    rec.outcome = match (direct_ok, derived_ok) {
        (true, true) => "colored",
        (true, false) => "direct-only",
        (false, true) => "derived-only",
        (false, false) => "error",
    }
    .into();
    let verdict = if let Oracle::OutOfTime = oracle {
        rec.status = Status::Skipped;
        None
    } else if !(direct_ok && derived_ok) {
        let mut msg = Vec::new();
        if let Err(e) = &direct {
            msg.push(format!("direct: {e}"));
        }
        if let Err(e) = &derived {
            msg.push(format!("derived: {e}"));
        }
        Some(if msg.is_empty() { "colouring does not verify".to_string() } else { msg.join("; ") })
    } else if !matches!(oracle, Oracle::Colorable) {
        Some("oracle finds no colouring".to_string())
    } else {
        None
    };
    match verdict {
        Some(msg) => Checked { keep: Some(inst.to_file()), ..Checked::plain(rec.fail(msg)) },
        None => Checked::plain(rec),
    }
}

fn check_bad_colorings(inst: &Instance) -> Checked {
    let mut rec = Record::new(&inst.id, inst.graph.vertex_count());
    let g = &inst.graph;
    let path = &inst.s.path;
    if let Err(v) = validate_canvas(g, &inst.s, &inst.lists) {
        rec.outcome = "violation".into();
        return Checked::plain(rec.fail(format!("generated instance rejected: {}", v.kind())));
    }
    let bad = bad_path_colorings(g, path, &inst.lists).len();
    let fan = has_fan_path(g, path[0], path[1], path[2]);
    rec.outcome = "counted".into();
    rec.oracle = "exact".into();
    rec.bad_colorings = Some(bad);
    rec.fan_path = Some(fan);
    if !fan && bad > 1 {
        let msg = format!("{bad} bad colourings without a fan path");
        return Checked { keep: Some(inst.to_file()), ..Checked::plain(rec.fail(msg)) };
    }
    let keep = (fan && bad > 1).then(|| inst.to_file());
    Checked { keep, ..Checked::plain(rec) }
}

/// Uncolourable canvases for the critical check: exception instances of the
/// path-plus-vertex suite, and three-vertex paths pinned to each colouring
/// that does not extend.
fn uncolorable_canvases(spec: &CorpusSpec) -> Result<Vec<(String, Canvas)>, HarnessError> {
    let mut sources: Vec<(String, Canvas)> = Vec::new();
    for inst in generate_instance_suite(spec, Target::DemTwo)? {
        if inst.expect_invalid.is_some() {
            continue;
        }
        let Ok(canvas) = validate_canvas(&inst.graph, &inst.s, &inst.lists) else { continue };
        if let Ok(instance) = validate_dem_two(&canvas) {
            if detect_exception(&instance).is_some() {
                sources.push((inst.id.replacen("demtwo", "critical", 1), canvas));
            }
        }
    }
    let pinned: Vec<Vec<(String, Canvas)>> = generate_instance_suite(spec, Target::BadColorings)?
        .par_iter()
        .map(|inst| {
            let mut out = Vec::new();
            for (k, bad) in bad_path_colorings(&inst.graph, &inst.s.path, &inst.lists).into_iter().enumerate() {
                let mut lists = inst.lists.clone();
                for (v, c) in bad.iter() {
                    lists.set(v, ColorSet::singleton(c));
                }
                if let Ok(canvas) = validate_canvas(&inst.graph, &inst.s, &lists) {
                    let id = format!("{}-{k}", inst.id.replacen("bad-colorings", "critical", 1));
                    out.push((id, canvas));
                }
            }
            out
        })
        .collect();
    sources.extend(pinned.into_iter().flatten());
    Ok(sources)
}

fn check_critical(id: &str, canvas: &Canvas) -> Checked {
    let mut rec = Record::new(id, canvas.graph.vertex_count());
    rec.oracle = "uncolorable".into();
    let critical = match extract_critical(canvas) {
        Ok(c) => c,
        Err(e) => {
            rec.outcome = "error".into();
            return Checked::plain(rec.fail(e.to_string()));
        }
    };
    rec.outcome = format!("critical:{}v", critical.graph.vertex_count());
    let mut problems = Vec::new();
    if !is_critical(&critical) {
        problems.push("extracted canvas is not critical".to_string());
    }
    let (cuts, chords) = inessential_separators(&critical.graph, &critical.s.vertices());
    if !cuts.is_empty() {
        problems.push(format!("inessential cutvertices {cuts:?}"));
    }
    if !chords.is_empty() {
        problems.push(format!("inessential chords {chords:?}"));
    }
    let short = critical.graph.short_cycles_with_interior();
    if !short.is_empty() {
        problems.push(format!("short cycles with vertices inside {:?}", short.iter().map(|c| &c.0).collect::<Vec<_>>()));
    }
    if problems.is_empty() {
        Checked::plain(rec)
    } else {
        Checked { keep: Some(CanvasFile::from_canvas(&critical)), ..Checked::plain(rec.fail(problems.join("; "))) }
    }
}

fn budget_from_env() -> Option<Duration> {
    std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse::<u64>().ok()).map(Duration::from_millis)
}

/// Generates the suite for `mode` from `spec`, checks every instance in
/// parallel and aggregates a report sorted by instance id.
pub fn run_theorem_check(spec: &CorpusSpec, mode: CheckMode) -> Result<Report, HarnessError> {
    run_theorem_check_with_budget(spec, mode, budget_from_env())
}

pub fn run_theorem_check_with_budget(
    spec: &CorpusSpec,
    mode: CheckMode,
    budget: Option<Duration>,
) -> Result<Report, HarnessError> {
    let mut checked: Vec<Checked> = match mode {
        CheckMode::Critical => {
            uncolorable_canvases(spec)?.par_iter().map(|(id, canvas)| check_critical(id, canvas)).collect()
        }
        _ => {
            let target = match mode {
                CheckMode::DemTwo => Target::DemTwo,
                CheckMode::TwoTwos => Target::TwoTwos,
                CheckMode::Thom => Target::Thom,
                _ => Target::BadColorings,
            };
            generate_instance_suite(spec, target)?
                .par_iter()
                .map(|inst| match mode {
                    CheckMode::DemTwo => check_dem_two(inst, budget),
                    CheckMode::TwoTwos => check_two_twos(inst, budget),
                    CheckMode::Thom => check_thom(inst, budget),
                    _ => check_bad_colorings(inst),
                })
                .collect()
        }
    };
    checked.sort_by(|a, b| a.record.id.cmp(&b.record.id));

    let mut summary = Summary { mode: mode.name().into(), instances: checked.len(), ..Summary::default() };
    let mut counterexamples = Vec::new();
    let mut archive = Vec::new();
    let mut records = Vec::with_capacity(checked.len());
    for c in checked {
        let r = &c.record;
        match r.status {
            Status::Agree => summary.agreements += 1,
            Status::Disagree => summary.disagreements += 1,
            Status::Skipped => summary.skipped += 1,
        }
        *summary.outcomes.entry(r.outcome.clone()).or_default() += 1;
        for case in &r.cases {
            *summary.cases.entry(case.clone()).or_default() += 1;
        }
        summary.exceptions_confirmed += usize::from(c.exception_confirmed);
        summary.near_misses_rejected += usize::from(c.near_miss);
        if let (Some(bad), Some(fan)) = (r.bad_colorings, r.fan_path) {
            if fan && bad > 1 {
                summary.fan_witnesses += 1;
            } else if !fan {
                summary.max_bad_without_fan = Some(summary.max_bad_without_fan.unwrap_or(0).max(bad));
            }
        }
        if let Some(file) = c.keep {
            if r.status == Status::Disagree {
                counterexamples.push((r.id.clone(), file));
            } else {
                archive.push((r.id.clone(), file));
            }
        }
        records.push(c.record);
    }
    Ok(Report { summary, records, counterexamples, archive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Family;
    use std::collections::BTreeSet;

    fn tiny() -> CorpusSpec {
        CorpusSpec { max_vertices: 5, random_instances: 10, random_max_vertices: 8, ..CorpusSpec::default() }
    }

    #[test]
    fn modes_parse() {
        for m in CheckMode::all() {
            assert_eq!(m.name().parse::<CheckMode>().unwrap(), m);
        }
        assert!("bogus".parse::<CheckMode>().is_err());
    }

    #[test]
    fn small_runs_agree() {
        for mode in CheckMode::all() {
            let report = run_theorem_check_with_budget(&tiny(), mode, None).unwrap();
            let bad: Vec<_> = report.records.iter().filter(|r| r.status != Status::Agree).collect();
            assert!(bad.is_empty(), "{mode}: {bad:#?}");
            assert!(report.summary.instances > 0, "{mode}");
        }
    }

    #[test]
    fn report_lines_end_with_summary() {
        let spec = CorpusSpec { families: BTreeSet::from([Family::Cycles]), ..tiny() };
        let report = run_theorem_check_with_budget(&spec, CheckMode::DemTwo, None).unwrap();
        let text = report.to_json_lines();
        assert_eq!(text.lines().count(), report.records.len() + 1);
        assert!(text.lines().last().unwrap().starts_with("{\"summary\""));
        assert!(report.summary.exceptions_confirmed > 0);
    }
}
