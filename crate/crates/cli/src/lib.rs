//! Report builders behind the `udom` command line.
//!
//! Every command returns a [`Report`]: a JSON value (stable key order,
//! no timings) plus a rendered table and the process exit code.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use udom::bimodule::{build_context, BimoduleContext, Validation, DEFAULT_EXT_BOUND};
use udom::functors::{u_dominant_dimension, u_resolution_dimension, UResolution};
use udom::instance::{fixture, Instance, Loaded, FIXTURES};
use udom::module::{indec_injective, indec_projective};
use udom::resolution::DimReport;
use udom::verify::{CheckResult, Prepared, RandomSuiteSpec, Verdict, CLAIMS, DEFAULT_RESOLUTION_LENGTH};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Table,
}

/// Everything a run depends on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// A path to an instance file or the name of a built-in fixture.
    pub instance: String,
    /// Overrides the instance's field.
    pub p: Option<u64>,
    pub ext_bound: usize,
    pub d_max: usize,
    pub resolution_length: usize,
    pub seed: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        let spec = RandomSuiteSpec::default();
        RunConfig {
            instance: "paper-ex-1".into(),
            p: None,
            ext_bound: DEFAULT_EXT_BOUND,
            d_max: spec.d_max,
            resolution_length: DEFAULT_RESOLUTION_LENGTH,
            seed: spec.seed,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn with_instance(instance: &str) -> Self {
        RunConfig {
            instance: instance.into(),
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [
            ("--ext-bound", self.ext_bound),
            ("--d-max", self.d_max),
            ("--resolution-length", self.resolution_length),
        ] {
            if v == 0 {
                return Err(CliError::Usage(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }

    fn suite_spec(&self) -> RandomSuiteSpec {
        RandomSuiteSpec {
            seed: self.seed,
            ext_bound: self.ext_bound,
            d_max: self.d_max,
            ..RandomSuiteSpec::default()
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad command-line usage, such as an unknown claim id.
    Usage(String),
    /// The instance could not be read or does not define a valid context.
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<udom::Error> for CliError {
    fn from(e: udom::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// A finished command.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub table: String,
    pub exit_code: i32,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("report serializes") + "\n",
            Format::Table => self.table.clone(),
        }
    }
}

fn versions() -> Value {
    json!({ "udom": env!("CARGO_PKG_VERSION"), "report_schema": REPORT_SCHEMA })
}

fn config_json(cfg: &RunConfig, p: u32) -> Value {
    json!({
        "instance": cfg.instance,
        "p": p,
        "ext_bound": cfg.ext_bound,
        "d_max": cfg.d_max,
        "resolution_length": cfg.resolution_length,
        "seed": cfg.seed,
    })
}

/// Reads an instance from a file, or a fixture when no such file exists.
pub fn read_instance(spec: &str) -> Result<Instance, CliError> {
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
        return Instance::from_json(&text).map_err(|e| CliError::Input(format!("{spec}: {e}")));
    }
    fixture(spec).ok_or_else(|| {
        CliError::Input(format!(
            "{spec}: no such file or built-in fixture (fixtures: {})",
            FIXTURES.join(", ")
        ))
    })
}

fn load(cfg: &RunConfig) -> Result<(Loaded, BimoduleContext), CliError> {
    cfg.validate()?;
    let loaded = read_instance(&cfg.instance)?.load(cfg.p)?;
    let ctx = build_context(&loaded.algebra, &loaded.bimodule, cfg.ext_bound)?;
    Ok((loaded, ctx))
}

fn dims_of(a: &std::sync::Arc<udom::algebra::Algebra>, f: fn(&std::sync::Arc<udom::algebra::Algebra>, usize) -> udom::Result<udom::module::FdModule>) -> udom::Result<Vec<usize>> {
    (0..a.vertex_count()).map(|v| Ok(f(a, v)?.dim())).collect()
}

fn validation_line(v: &Validation) -> String {
    format!(
        "commuting {}, balanced {}/{}, selforthogonal up to Ext^{} ({}), Γ: {}",
        v.commuting,
        v.balanced_left,
        v.balanced_right,
        v.selforthogonal_verified_up_to,
        if v.exact { "exact" } else { "bounded" },
        v.gamma_structure
    )
}

/// Algebra, bimodule and validation summary.
pub fn cmd_inspect(cfg: &RunConfig) -> Result<Report, CliError> {
    let (loaded, ctx) = load(cfg)?;
    let a = &loaded.algebra;
    let s = a.structure()?;
    let proj = dims_of(a, indec_projective)?;
    let inj = dims_of(a, indec_injective)?;
    let u_weights = ctx.u_left().weight_dims()?;
    let json = json!({
        "command": "inspect",
        "config": config_json(cfg, a.p()),
        "versions": versions(),
        "instance": loaded.name,
        "algebra": {
            "dim": a.dim(),
            "basis": a.labels(),
            "vertices": s.vertices(),
            "projective_dims": proj,
            "injective_dims": inj,
        },
        "bimodule": { "dim": ctx.u_left().dim(), "weights": u_weights },
        "gamma": { "dim": ctx.gamma().dim(), "vertices": ctx.gamma().vertex_count() },
        "validation": ctx.validation(),
    });
    let mut t = String::new();
    writeln!(t, "instance      {}", loaded.name).unwrap();
    writeln!(t, "field         F_{}", a.p()).unwrap();
    writeln!(t, "dim Λ         {}", a.dim()).unwrap();
    writeln!(t, "basis         {}", a.labels().join(" ")).unwrap();
    writeln!(t, "vertex        {}", s.vertices().join("\t")).unwrap();
    writeln!(t, "dim P_v       {}", join(&proj)).unwrap();
    writeln!(t, "dim I_v       {}", join(&inj)).unwrap();
    writeln!(t, "dim e_v U     {}", join(&u_weights)).unwrap();
    writeln!(t, "dim Γ         {}", ctx.gamma().dim()).unwrap();
    writeln!(t, "validation    {}", validation_line(ctx.validation())).unwrap();
    Ok(Report {
        json,
        table: t,
        exit_code: 0,
    })
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\t")
}

fn resolution_json(r: &UResolution) -> Value {
    json!({
        "value": r.dim.to_string(),
        "dim": r.dim,
        "certificate": r.certificate,
    })
}

/// Both-side U-dominant dimensions and the U-resolution dimensions of the
/// injective envelopes of `U` on either side.
pub fn cmd_domdim(cfg: &RunConfig) -> Result<Report, CliError> {
    let (loaded, left) = load(cfg)?;
    let right = left.side_swap();
    let dl = u_dominant_dimension(&left, left.u_left(), cfg.d_max)?;
    let dr = u_dominant_dimension(&right, right.u_left(), cfg.d_max)?;
    let rl = u_resolution_dimension(&left, &left.e0()?, cfg.resolution_length)?;
    let rr = u_resolution_dimension(&right, &right.e0()?, cfg.resolution_length)?;
    let agree = dl == dr;
    let json = json!({
        "command": "domdim",
        "config": config_json(cfg, loaded.algebra.p()),
        "versions": versions(),
        "instance": loaded.name,
        "dominant_dimension": {
            "left": { "value": dl.to_string(), "dim": dl },
            "right": { "value": dr.to_string(), "dim": dr },
            "agree": agree,
        },
        "resolution_dimension": { "left": resolution_json(&rl), "right": resolution_json(&rr) },
    });
    let mut t = String::new();
    writeln!(t, "instance {}  (d_max {}, resolution length {})", loaded.name, cfg.d_max, cfg.resolution_length).unwrap();
    writeln!(t, "{:<28}{:>10}{:>10}", "", "left", "right").unwrap();
    writeln!(t, "{:<28}{:>10}{:>10}", "U-dom.dim", dl.to_string(), dr.to_string()).unwrap();
    writeln!(t, "{:<28}{:>10}{:>10}", "U-resol.dim(E_0)", rl.dim.to_string(), rr.dim.to_string()).unwrap();
    Ok(Report {
        json,
        table: t,
        exit_code: if agree { 0 } else { 1 },
    })
}

/// Sorted, deduplicated claim ids; `all` (or nothing) selects every claim.
pub fn parse_claims(ids: &[String]) -> Result<Vec<&'static str>, CliError> {
    if ids.is_empty() || ids.iter().any(|c| c == "all") {
        return Ok(CLAIMS.to_vec());
    }
    let mut out = Vec::new();
    for id in ids {
        match CLAIMS.iter().find(|c| **c == id.as_str()) {
            Some(c) => out.push(*c),
            None => {
                return Err(CliError::Usage(format!(
                    "unknown claim id `{id}` (known: {}, all)",
                    CLAIMS.join(", ")
                )))
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

const VERDICT_HEADER: &str = "PASS: all conditions claimed equivalent agree on the computed data and the sampled modules. \
FAIL: two definite values disagree (witness attached). UNDETERMINED: no refutation was found among the samples, \
or a premise is only verified up to a bound.";

/// Runs the selected checkers. Exit 1 iff some verdict is FAIL.
pub fn cmd_check(cfg: &RunConfig, ids: &[String]) -> Result<Report, CliError> {
    let claims = parse_claims(ids)?;
    let (loaded, ctx) = load(cfg)?;
    let mut prep = Prepared::new(&loaded.name, ctx, cfg.suite_spec())?;
    prep.resolution_length = cfg.resolution_length;
    let results = prep.run(&claims)?;
    Ok(check_report(cfg, loaded.algebra.p(), &results))
}

pub fn check_report(cfg: &RunConfig, p: u32, results: &[CheckResult]) -> Report {
    let failed = results.iter().any(|r| r.verdict == Verdict::Fail);
    let json = json!({
        "command": "check",
        "semantics": VERDICT_HEADER,
        "claims": results,
        "config": config_json(cfg, p),
        "versions": versions(),
    });
    let mut t = String::new();
    writeln!(t, "{:<10} {:<13} detail", "claim", "verdict").unwrap();
    for r in results {
        writeln!(t, "{:<10} {:<13} {}", r.claim, r.verdict.to_string(), r.detail).unwrap();
        if r.verdict != Verdict::Pass {
            for g in r.groups.iter().filter(|g| g.verdict != Verdict::Pass) {
                let conds: Vec<String> = g
                    .conditions
                    .iter()
                    .map(|c| format!("{}={}{}", c.name, c.value, if c.exact { "" } else { " (sampled)" }))
                    .collect();
                writeln!(t, "    {} [{}]: {}", g.name, g.verdict, conds.join(", ")).unwrap();
            }
            if let Some(w) = &r.witness {
                writeln!(t, "    witness: {w}").unwrap();
            }
        }
    }
    Report {
        json,
        table: t,
        exit_code: if failed { 1 } else { 0 },
    }
}

/// Expected value of a flat dimension in the reproduction table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expected {
    Exactly(usize),
    AtLeast(usize),
}

impl Expected {
    pub fn matches(self, d: &DimReport) -> bool {
        match self {
            Expected::Exactly(n) => !d.at_least && d.value == n,
            Expected::AtLeast(n) => d.is_at_least(n),
        }
    }
}

impl std::fmt::Display for Expected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expected::Exactly(n) => write!(f, "{n}"),
            Expected::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

/// The two worked examples and their flat dimensions of `E_0` (left) and
/// `E'_0` (right).
pub const PAPER_ROWS: [(&str, Expected, Expected); 2] = [
    ("paper-ex-1", Expected::Exactly(1), Expected::AtLeast(2)),
    ("paper-ex-2", Expected::Exactly(2), Expected::Exactly(1)),
];

/// Recomputes the worked examples with `U = Λ`; exit 1 on any mismatch.
pub fn cmd_reproduce_paper(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut t = String::new();
    let mut all = true;
    let mut p_used = 0;
    writeln!(t, "{:<12}{:>14}{:>14}{:>14}{:>14}  match", "algebra", "l.fd I_0", "expected", "r.fd I'_0", "expected").unwrap();
    for (name, el, er) in PAPER_ROWS {
        let loaded = fixture(name).expect("built-in fixture").load(cfg.p)?;
        p_used = loaded.algebra.p();
        let left = build_context(&loaded.algebra, &loaded.bimodule, cfg.ext_bound)?;
        let right = left.side_swap();
        let l = u_resolution_dimension(&left, &left.e0()?, cfg.resolution_length)?;
        let r = u_resolution_dimension(&right, &right.e0()?, cfg.resolution_length)?;
        let ok = el.matches(&l.dim) && er.matches(&r.dim);
        all &= ok;
        writeln!(
            t,
            "{:<12}{:>14}{:>14}{:>14}{:>14}  {}",
            name,
            l.dim.to_string(),
            el.to_string(),
            r.dim.to_string(),
            er.to_string(),
            if ok { "yes" } else { "NO" }
        )
        .unwrap();
        rows.push(json!({
            "algebra": name,
            "left": { "computed": resolution_json(&l), "expected": el.to_string() },
            "right": { "computed": resolution_json(&r), "expected": er.to_string() },
            "match": ok,
        }));
    }
    let json = json!({
        "command": "reproduce-paper",
        "rows": rows,
        "match": all,
        "config": config_json(cfg, p_used),
        "versions": versions(),
    });
    Ok(Report {
        json,
        table: t,
        exit_code: if all { 0 } else { 1 },
    })
}
