//! Command-line surface for the chiral-operator engine: document ingestion,
//! verification suites, character and BRST tables, machine-readable reports.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use chiralx_core::bimodule::{check_intertwining, Transfer};
use chiralx_core::brst::{check_clifford, check_ghost_level, check_semi_infinite, check_square_zero, cohomology_table, filtered_bounds, Brst, BrstError};
use chiralx_core::cdo::{check_dual_level, check_eta_commutation, check_left_right, check_right_bracket, check_right_ope, check_symbol, setup};
use chiralx_core::doc::{load_path, DocError, Loaded};
use chiralx_core::lie::{dual_form, killing_form, modular_character, BilinearForm};
use chiralx_core::report::{Bounds, Check, Status};
use chiralx_core::suites::{character_table, check_affine, check_catrep, check_filtration, check_jacobi, check_killing, check_pbw, check_rho, check_structure, degree_window};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const REPORT_SCHEMA: &str = "chiralx-report/1";

/// Jacobi triples sampled per group, and the sampling seed.
pub const JACOBI_SAMPLES: usize = 50;
pub const JACOBI_SEED: u64 = 7;

#[derive(Debug, Parser)]
#[command(name = "chiralx", version, about = "Exact verification of chiral differential operators on small groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// worker threads (defaults to CHIRALX_JOBS, then the core count)
    #[arg(long, global = true, env = "CHIRALX_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Killing form, modular character and dual levels of a document.
    Describe { doc: PathBuf },
    /// Run verification suites and emit a report.
    Verify {
        doc: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 2)]
        weight: u32,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// named form used as the level (defaults to the document default)
        #[arg(long)]
        form: Option<String>,
        /// also write the machine-readable report here
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Graded dimensions of the vacuum module against the generating function.
    Char {
        doc: PathBuf,
        #[arg(long, default_value_t = 2)]
        weight: u32,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Semi-infinite cohomology per weight and ghost number.
    Brst {
        doc: PathBuf,
        #[arg(long, default_value_t = 2)]
        weight: u32,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// degree-filtered upper bounds for groups whose blocks are not graded
        #[arg(long)]
        filtered: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Affine,
    Catrep,
    Pbw,
    Leftright,
    Duallevel,
    Rightbracket,
    Eta,
    Clifford,
    Brst,
    Transfer,
    All,
}

impl Suite {
    pub const EACH: [Suite; 10] =
        [Suite::Affine, Suite::Catrep, Suite::Pbw, Suite::Leftright, Suite::Duallevel, Suite::Rightbracket, Suite::Eta, Suite::Clifford, Suite::Brst, Suite::Transfer];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Affine => "affine",
            Suite::Catrep => "catrep",
            Suite::Pbw => "pbw",
            Suite::Leftright => "leftright",
            Suite::Duallevel => "duallevel",
            Suite::Rightbracket => "rightbracket",
            Suite::Eta => "eta",
            Suite::Clifford => "clifford",
            Suite::Brst => "brst",
            Suite::Transfer => "transfer",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Doc { path: String, source: DocError },
    #[error("unknown form `{0}`")]
    UnknownForm(String),
    #[error("{0}")]
    Rejected(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("report serialization: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub params: std::collections::BTreeMap<String, String>,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub cases: usize,
    pub millis: u128,
}

impl From<&Check> for CheckRecord {
    fn from(c: &Check) -> Self {
        CheckRecord {
            id: c.id.clone(),
            anchor: c.anchor.to_string(),
            params: c.params.clone(),
            status: c.status.as_str(),
            witness: c.witness.clone(),
            note: c.note.clone(),
            cases: c.cases,
            millis: c.millis,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsRecord {
    pub weight: u32,
    pub degree: u32,
    pub modes: i32,
}

/// Machine-readable outcome of `verify`. Only `timestamp` and the `millis`
/// fields vary between identical invocations.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub document: String,
    pub suite: Suite,
    pub form: String,
    pub bounds: BoundsRecord,
    pub timestamp: u64,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(document: &str, suite: Suite, form: &str, b: Bounds, checks: &[Check]) -> Report {
        let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
        let timestamp = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Report {
            schema: REPORT_SCHEMA,
            document: document.to_string(),
            suite,
            form: form.to_string(),
            bounds: BoundsRecord { weight: b.weight, degree: b.degree, modes: b.modes },
            timestamp,
            summary: Summary { pass: count(Status::Pass), fail: count(Status::Fail), skipped: count(Status::Skipped) },
            checks: checks.iter().map(CheckRecord::from).collect(),
        }
    }

    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> Result<String, serde_json::Error> {
        serde_json::to_string_pretty(self)
    }

    /// Human-readable table.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let b = &self.bounds;
        let _ = writeln!(s, "{} / suite {} / form {} / w<={} |d|<={} |n|<={}", self.document, self.suite.name(), self.form, b.weight, b.degree, b.modes);
        for c in &self.checks {
            let params = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",");
            let _ = writeln!(s, "{:<7} {:<26} {:<22} {:>7} cases {:>7} ms  {}", c.status, c.id, c.anchor, c.cases, c.millis, params);
            if let Some(w) = &c.witness {
                let _ = writeln!(s, "        witness: {w}");
            }
            if let Some(n) = &c.note {
                let _ = writeln!(s, "        note: {n}");
            }
        }
        let _ = writeln!(s, "{} passed, {} failed, {} skipped", self.summary.pass, self.summary.fail, self.summary.skipped);
        s
    }
}

pub fn load(path: &std::path::Path) -> Result<Loaded, CliError> {
    load_path(path).map_err(|source| CliError::Doc { path: path.display().to_string(), source })
}

/// The level used when `--form` is absent: the document default, else the first nonzero form, else zero.
pub fn pick_form(l: &Loaded, name: Option<&str>) -> Result<(String, BilinearForm), CliError> {
    if let Some(n) = name {
        return l.forms.get(n).map(|q| (n.to_string(), q.clone())).ok_or_else(|| CliError::UnknownForm(n.to_string()));
    }
    if let Some(n) = &l.defaults.form {
        if let Some(q) = l.forms.get(n) {
            return Ok((n.clone(), q.clone()));
        }
    }
    let dim = l.group.dim();
    let zero = BilinearForm::zero(dim);
    Ok(l.forms.iter().find(|(_, q)| **q != zero).map(|(n, q)| (n.clone(), q.clone())).unwrap_or_else(|| ("zero".into(), zero)))
}

pub fn default_bounds(weight: u32, degree: u32) -> Bounds {
    Bounds::new(weight, degree, weight.max(1) as i32)
}

/// Runs the selected suites. The structure check always runs first; when it fails
/// the engine suites are not attempted, since their input is inconsistent.
pub fn run_suites(l: &Loaded, suite: Suite, form: &BilinearForm, b: Bounds) -> Vec<Check> {
    let g = l.group.clone();
    let mut out = vec![check_structure(l)];
    if out[0].status == Status::Fail {
        return out;
    }
    out.push(check_rho(&g));
    out.push(check_killing(&g));
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let (vac, rc) = setup(g.clone(), form);
    let degrees = degree_window(g.ring.grading_rank(), b.degree);
    for s in suites {
        match s {
            Suite::Affine => out.push(check_affine(&vac, b)),
            Suite::Catrep => {
                out.push(check_catrep(&vac, b));
                out.push(check_filtration(&vac, &rc, b));
            }
            Suite::Pbw => out.push(check_pbw(&vac, b.weight, b.degree)),
            Suite::Leftright => {
                out.push(check_symbol(&vac, &rc));
                out.extend(check_left_right(&vac, &rc, b));
                out.push(check_jacobi(&vac, &rc, b, JACOBI_SAMPLES, JACOBI_SEED));
            }
            Suite::Duallevel => out.push(check_dual_level(&vac, &rc)),
            Suite::Rightbracket => {
                out.push(check_right_ope(&vac, &rc));
                out.push(check_right_bracket(&vac, &rc, b));
            }
            Suite::Eta => out.push(check_eta_commutation(&vac, b)),
            Suite::Clifford => {
                out.push(check_clifford(g.dim(), b.weight, b.modes));
                out.extend(check_ghost_level(&g.lie, b.weight, b.modes));
            }
            Suite::Brst => {
                let (v0, r0) = setup(g.clone(), &BilinearForm::zero(g.dim()));
                match Brst::new(&v0, &r0) {
                    Ok(brst) => {
                        out.push(check_square_zero(&brst, b.weight, &degrees));
                        out.extend(check_semi_infinite(&brst, b.weight, &degrees));
                    }
                    Err(e) => {
                        let mut c = Check::new("brst.square-zero", chiralx_core::report::anchors::BRST);
                        c.fail(e.to_string());
                        out.push(c);
                    }
                }
            }
            Suite::Transfer => {
                if l.reps.is_empty() {
                    out.push(Check::new("transfer.intertwining", chiralx_core::report::anchors::REGULAR).skip("document has no representations"));
                }
                let tw = b.weight.min(1);
                for rep in l.reps.values() {
                    let t = Transfer::new(g.clone(), rep.clone(), form.clone(), form.clone());
                    out.extend(check_intertwining(&t, tw, &degree_window(g.ring.grading_rank(), b.degree.min(1)), tw.max(1) as i32));
                }
            }
            Suite::All => unreachable!(),
        }
    }
    out
}

fn show_form(l: &Loaded, q: &BilinearForm) -> String {
    let labels = &l.group.lie.labels;
    let mut s = String::new();
    let _ = writeln!(s, "      {}", labels.iter().map(|x| format!("{x:>6}")).collect::<String>());
    for (i, row) in q.q.iter().enumerate() {
        let _ = writeln!(s, "  {:>4}{}", labels[i], row.iter().map(|x| format!("{:>6}", x.to_string())).collect::<String>());
    }
    s
}

pub fn describe(l: &Loaded) -> (bool, String) {
    let g = &l.group;
    let mut s = String::new();
    let _ = writeln!(s, "{}: n = {}, basis {}", g.name, g.dim(), g.lie.labels.join(" "));
    let _ = writeln!(s, "ring: {} generators ({}), {} relations", g.ngens(), g.ring.names.join(" "), g.ring.relations.len());
    let structure = check_structure(l);
    match &structure.witness {
        None => {
            let _ = writeln!(s, "validation: ok");
        }
        Some(w) => {
            let _ = writeln!(s, "validation: FAILED: {w}");
        }
    }
    let _ = write!(s, "Killing form Q0:\n{}", show_form(l, &killing_form(&g.lie)));
    let rho = modular_character(&g.lie);
    let _ = writeln!(
        s,
        "modular character: {}",
        g.lie.labels.iter().zip(&rho.0).map(|(a, r)| format!("rho({a}) = {r}")).collect::<Vec<_>>().join(", ")
    );
    for (name, q) in &l.forms {
        let _ = write!(s, "form {name}:\n{}", show_form(l, q));
        let _ = write!(s, "  dual level Q' = -Q - Q0:\n{}", show_form(l, &dual_form(q, &g.lie)));
    }
    for (name, r) in &l.reps {
        let _ = writeln!(s, "rep {name}: dim {}", r.module.dim);
    }
    (structure.status != Status::Fail, s)
}

pub fn char_table(l: &Loaded, weight: u32, degree: u32) -> (bool, String) {
    let g = l.group.clone();
    let (vac, _) = setup(g.clone(), &BilinearForm::zero(g.dim()));
    let mut s = String::new();
    match chiralx_core::character::model(&g) {
        Ok(m) => {
            let _ = writeln!(s, "model: {m:?}");
        }
        Err(e) => {
            let _ = writeln!(s, "model: none ({e})");
        }
    }
    let _ = writeln!(s, "{:>3} {:>10} {:>10} {:>10}", "w", "degree", "enumerated", "predicted");
    let mut ok = true;
    let mut first = true;
    for cell in character_table(&vac, weight, degree) {
        let pred = cell.predicted.map(|p| p.to_string()).unwrap_or_else(|| "-".into());
        let flag = if cell.predicted.is_some() && !cell.agrees() {
            ok = false;
            if std::mem::take(&mut first) {
                "  MISMATCH (first)"
            } else {
                "  MISMATCH"
            }
        } else {
            ""
        };
        let d = cell.degree.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let _ = writeln!(s, "{:>3} {:>10} {:>10} {:>10}{flag}", cell.weight, d, cell.enumerated, pred);
    }
    (ok, s)
}

pub fn brst_table(l: &Loaded, weight: u32, degree: u32, filtered: bool) -> Result<(bool, String), CliError> {
    let g = l.group.clone();
    let (vac, rc) = setup(g.clone(), &BilinearForm::zero(g.dim()));
    let brst = Brst::new(&vac, &rc).map_err(|e| CliError::Rejected(e.to_string()))?;
    let mut s = String::new();
    if filtered {
        let _ = writeln!(s, "degree-filtered upper bounds per ghost number (no pass/fail)");
        for fb in filtered_bounds(&brst, weight, degree) {
            let _ = writeln!(s, "w={} D<={}: {}", fb.weight, fb.max_degree, fb.upper.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
        }
        return Ok((true, s));
    }
    let degrees = degree_window(g.ring.grading_rank(), degree);
    let t = match cohomology_table(&brst, weight, &degrees) {
        Ok(t) => t,
        Err(e @ BrstError::NotGraded { .. }) => return Err(CliError::Rejected(format!("infinite block: {e} (pass --filtered)"))),
        Err(e) => return Err(CliError::Rejected(e.to_string())),
    };
    let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "semi-infinite cohomology totals over |d|<={degree}, by ghost number 0..={}", g.dim());
    let mut ok = true;
    for (w, totals) in &t.rows {
        let want = if *w == 0 { t.oracle.clone() } else { vec![0; t.oracle.len()] };
        let flag = if totals != &want {
            ok = false;
            "  MISMATCH"
        } else {
            ""
        };
        let _ = writeln!(s, "w={w}: {}   oracle: {}{flag}", join(totals), join(&want));
    }
    Ok((ok, s))
}

fn configure_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        // the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs one invocation; returns the exit code. Diagnostics go to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    configure_jobs(cli.jobs);
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Describe { doc } => {
            let l = load(&doc)?;
            let (ok, s) = describe(&l);
            out.write_all(s.as_bytes())?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Verify { doc, suite, weight, degree, form, json } => {
            let l = load(&doc)?;
            let (fname, q) = pick_form(&l, form.as_deref())?;
            let b = default_bounds(weight, degree);
            let checks = run_suites(&l, suite, &q, b);
            let report = Report::new(&l.group.name, suite, &fname, b, &checks);
            out.write_all(report.render().as_bytes())?;
            if let Some(p) = json {
                std::fs::write(p, report.to_json()? + "\n")?;
            }
            Ok(if report.failed() { 1 } else { 0 })
        }
        Command::Char { doc, weight, degree } => {
            let l = load(&doc)?;
            let (ok, s) = char_table(&l, weight, degree);
            out.write_all(s.as_bytes())?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Brst { doc, weight, degree, filtered } => {
            let l = load(&doc)?;
            let (ok, s) = brst_table(&l, weight, degree, filtered)?;
            out.write_all(s.as_bytes())?;
            Ok(if ok { 0 } else { 1 })
        }
    }
}
