//! Subcommands. Each builds a JSON report and says whether every checked
//! identity held.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use nugrass_core::atlas::{
    build_chart, verify_cocycles, Chart, CheckKind, GrassShape, Level, Method, MultiIndex, Outcome, Report,
};
use nugrass_core::bundle::{gamma_transition, validate_bundle, verify_gamma_cocycle, BundleDescription, BundleError};
use nugrass_core::gauss::{
    assemble, homotopy_family, induced_chart_maps, retraction_check, symbolic_bundle, GaussError, GaussMatrix,
};
use nugrass_core::superalgebra::{AlgebraContext, GrassmannElement, DEFAULT_TRIALS};
use nugrass_core::supermatrix::pseudo_unit;

use crate::json::{bundle_to_json, context_to_json, element_to_json, matrix_to_json, parse_bundle, SchemaError};

#[derive(Parser, Debug)]
#[command(
    name = "nugrass",
    version,
    about = "Verify ν-grassmannian atlases, canonical bundles and Gauss supermatrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn output(&self) -> Option<&PathBuf> {
        match &self.command {
            Command::Atlas(a) => a.output.as_ref(),
            Command::Chart(a) => a.output.as_ref(),
            Command::Gamma(a) => a.output.as_ref(),
            Command::Gauss(a) => a.output.as_ref(),
            Command::Retract(a) => a.output.as_ref(),
            Command::Homotopy(a) => a.output.as_ref(),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the chart gluing identities of νGr_{k|l}(m|n).
    Atlas(AtlasArgs),
    /// Emit the chart matrix A^I and its pseudo-unit.
    Chart(ChartArgs),
    /// Emit one canonical-bundle transition, or check the bundle cocycle.
    Gamma(GammaArgs),
    /// Validate a bundle description and build its Gauss supermatrix.
    Gauss(GaussArgs),
    /// Check the deformation retraction of P^{m|n}.
    Retract(RetractArgs),
    /// Check the endpoints of the homotopy between two Gauss supermaps.
    Homotopy(HomotopyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ShapeArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
}

impl ShapeArgs {
    fn build(&self) -> Result<GrassShape, CliError> {
        GrassShape::new(self.k, self.l, self.m, self.n).map_err(input)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodKind {
    Exact,
    Modular,
}

#[derive(Args, Debug, Clone)]
pub struct MethodArgs {
    #[arg(long, value_enum, default_value_t = MethodKind::Exact)]
    pub method: MethodKind,
    /// Required with `--method modular`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
}

impl MethodArgs {
    fn build(&self) -> Result<Method, CliError> {
        match (self.method, self.seed) {
            (MethodKind::Exact, _) => Ok(Method::Exact),
            (MethodKind::Modular, Some(seed)) if self.trials > 0 => Ok(Method::Modular {
                seed,
                trials: self.trials,
            }),
            (MethodKind::Modular, Some(_)) => Err(CliError::Input("--trials must be positive".into())),
            (MethodKind::Modular, None) => Err(CliError::Input("the modular method requires --seed".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LevelKind {
    Pairs,
    Triples,
}

#[derive(Args, Debug)]
pub struct AtlasArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, value_enum, default_value_t = LevelKind::Pairs)]
    pub level: LevelKind,
    #[command(flatten)]
    pub method: MethodArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChartArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Comma-separated one-based columns, e.g. `1,2,3,6`.
    #[arg(long, value_parser = parse_index)]
    pub index: IndexList,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GammaArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// `I:J`, e.g. `1,3:2,3`; without it the cocycle is checked on all triples.
    #[arg(long, value_parser = parse_pair)]
    pub pair: Option<(Vec<usize>, Vec<usize>)>,
    #[command(flatten)]
    pub method: MethodArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    /// The rank 2|1, two-chart example with symbolic transitions.
    Paper,
}

#[derive(Args, Debug)]
pub struct GaussArgs {
    /// Bundle description file.
    #[arg(long, required_unless_present = "example", conflicts_with = "example")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub example: Option<Example>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RetractArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HomotopyArgs {
    /// Two bundle files over the same algebra; seeded random bundles otherwise.
    #[arg(long, num_args = 1)]
    pub input: Vec<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub l: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("\"{p}\" is not a positive integer"))
        })
        .collect()
}

/// A one-based column list as typed on the command line.
#[derive(Clone, Debug)]
pub struct IndexList(pub Vec<usize>);

fn parse_index(s: &str) -> Result<IndexList, String> {
    parse_list(s).map(IndexList)
}

fn parse_pair(s: &str) -> Result<(Vec<usize>, Vec<usize>), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| "expected I:J, e.g. 1,3:2,3".to_string())?;
    Ok((parse_list(a)?, parse_list(b)?))
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Schema(SchemaError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
            CliError::Schema(e) => write!(f, "schema violation at {e}"),
        }
    }
}

impl std::error::Error for CliError {}

fn input(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

pub struct CommandOutput {
    pub report: Value,
    pub success: bool,
    /// Human-readable lines for stderr.
    pub summary: String,
}

pub fn execute(cli: &Cli) -> Result<CommandOutput, CliError> {
    match &cli.command {
        Command::Atlas(a) => cmd_atlas(a),
        Command::Chart(a) => cmd_chart(a),
        Command::Gamma(a) => cmd_gamma(a),
        Command::Gauss(a) => cmd_gauss(a),
        Command::Retract(a) => cmd_retract(a),
        Command::Homotopy(a) => cmd_homotopy(a),
    }
}

fn shape_json(s: &GrassShape) -> Value {
    json!({ "name": s.to_string(), "k": s.k, "l": s.l, "m": s.m, "n": s.n })
}

fn kind_name(k: CheckKind) -> &'static str {
    match k {
        CheckKind::Identity => "identity",
        CheckKind::Pair => "pair",
        CheckKind::Minor => "minor",
        CheckKind::Triple => "triple",
        CheckKind::Chain => "chain",
        CheckKind::Gamma => "gamma",
    }
}

/// Records without timings, so identical runs give identical bytes.
fn report_json(command: &str, config: Value, report: &Report) -> CommandOutput {
    let records: Vec<Value> = report
        .records
        .iter()
        .map(|r| {
            let charts: Vec<&[usize]> = r.charts.iter().map(MultiIndex::as_slice).collect();
            let mut rec = json!({ "check": kind_name(r.kind), "charts": charts });
            let (status, detail) = match &r.outcome {
                Outcome::Pass => ("pass", None),
                Outcome::Vacuous(why) => ("vacuous", Some(why)),
                Outcome::Fail(why) => ("fail", Some(why)),
            };
            rec["status"] = json!(status);
            if let Some(d) = detail {
                rec["detail"] = json!(d);
            }
            rec
        })
        .collect();
    let failed = report.failures().count();
    CommandOutput {
        report: json!({
            "command": command,
            "config": config,
            "summary": {
                "checks": report.records.len(),
                "passed": report.passed(),
                "vacuous": report.vacuous(),
                "failed": failed,
            },
            "records": records,
        }),
        success: failed == 0,
        summary: report.summary(),
    }
}

fn method_json(m: Method) -> Value {
    serde_json::to_value(m).expect("methods serialize")
}

fn cmd_atlas(a: &AtlasArgs) -> Result<CommandOutput, CliError> {
    let shape = a.shape.build()?;
    let method = a.method.build()?;
    let level = match a.level {
        LevelKind::Pairs => Level::Pairs,
        LevelKind::Triples => Level::Triples,
    };
    let report = verify_cocycles(&shape, level, method).map_err(input)?;
    let config = json!({
        "shape": shape_json(&shape),
        "level": format!("{:?}", a.level).to_lowercase(),
        "method": method_json(method),
    });
    Ok(report_json("atlas", config, &report))
}

fn chart_at(shape: &GrassShape, index: &[usize]) -> Result<Chart, CliError> {
    let index = MultiIndex::new(shape, index.to_vec()).map_err(input)?;
    build_chart(shape, &index).map_err(input)
}

fn cmd_chart(a: &ChartArgs) -> Result<CommandOutput, CliError> {
    let shape = a.shape.build()?;
    let chart = chart_at(&shape, &a.index.0)?;
    let id = pseudo_unit(chart.index.as_slice(), shape.ambient(), chart.context()).map_err(input)?;
    let slots: Vec<Value> = chart
        .slots
        .iter()
        .map(|s| json!({ "row": s.row, "col": s.col, "coordinate": s.coordinate.name(), "wrapped": s.wrapped }))
        .collect();
    Ok(CommandOutput {
        report: json!({
            "command": "chart",
            "shape": shape_json(&shape),
            "index": chart.index.as_slice(),
            "symbols": context_to_json(chart.context()),
            "matrix": matrix_to_json(&chart.matrix),
            "pseudoUnit": matrix_to_json(&id),
            "slots": slots,
        }),
        success: true,
        summary: String::new(),
    })
}

fn cmd_gamma(a: &GammaArgs) -> Result<CommandOutput, CliError> {
    let shape = a.shape.build()?;
    let Some((i, j)) = &a.pair else {
        let method = a.method.build()?;
        let report = verify_gamma_cocycle(&shape, method).map_err(input)?;
        let config = json!({ "shape": shape_json(&shape), "method": method_json(method) });
        return Ok(report_json("gamma", config, &report));
    };
    let source = chart_at(&shape, i)?;
    let target = chart_at(&shape, j)?;
    let base = json!({
        "command": "gamma",
        "shape": shape_json(&shape),
        "source": i,
        "target": j,
    });
    match gamma_transition(&source, &target) {
        Ok(g) => {
            let images: Map<String, Value> = target
                .slots
                .iter()
                .map(|s| (s.coordinate.name(), element_to_json(g.base.image(s.coordinate))))
                .collect();
            let mut report = base;
            report["symbols"] = context_to_json(source.context());
            report["m"] = matrix_to_json(&g.m);
            report["domain"] = Value::Array(g.base.domain.iter().map(element_to_json).collect());
            report["domainCondition"] = element_to_json(&g.base.domain_condition());
            report["transition"] = Value::Object(images);
            Ok(CommandOutput {
                report,
                success: true,
                summary: String::new(),
            })
        }
        Err(BundleError::Atlas(e @ nugrass_core::atlas::AtlasError::EmptyOverlap { .. })) => {
            let mut report = base;
            report["overlap"] = json!("empty");
            report["detail"] = json!(e.to_string());
            Ok(CommandOutput {
                report,
                success: false,
                summary: e.to_string(),
            })
        }
        Err(e) => Err(input(e)),
    }
}

fn read_bundle(path: &PathBuf) -> Result<BundleDescription, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| {
        CliError::Schema(SchemaError {
            pointer: String::new(),
            message: format!("not valid JSON: {e}"),
        })
    })?;
    parse_bundle(&value).map_err(CliError::Schema)
}

fn issues_output(command: &str, desc: &BundleDescription, note: Option<String>) -> Option<CommandOutput> {
    let report = validate_bundle(desc);
    if report.is_valid() {
        return None;
    }
    let issues: Vec<Value> = report
        .issues
        .iter()
        .map(|i| {
            let mut v = serde_json::to_value(i).expect("issues serialize");
            v["message"] = json!(i.to_string());
            v
        })
        .collect();
    let mut summary: Vec<String> = report.issues.iter().map(ToString::to_string).collect();
    summary.extend(note.clone());
    Some(CommandOutput {
        report: json!({ "command": command, "valid": false, "issues": issues, "note": note }),
        success: false,
        summary: summary.join("\n"),
    })
}

fn gauss_json(g: &GaussMatrix) -> Result<(Value, bool), CliError> {
    let mut ok = true;
    let mut maps_json = Vec::new();
    match induced_chart_maps(g) {
        Ok(maps) => {
            let want = (g.k + g.l, (g.cover - 1) * (g.k + g.l));
            for (index, m) in &maps {
                let shape_ok = (m.y.rows(), m.y.cols()) == want;
                ok &= shape_ok;
                let images: Map<String, Value> = m
                    .map
                    .images()
                    .into_iter()
                    .map(|(name, z)| (name, element_to_json(z)))
                    .collect();
                maps_json.push(json!({
                    "index": index.as_slice(),
                    "yShape": [m.y.rows(), m.y.cols()],
                    "images": images,
                }));
            }
        }
        Err(e @ GaussError::Parity { .. }) => {
            ok = false;
            maps_json.push(json!({ "error": e.to_string() }));
        }
        Err(e) => return Err(input(e)),
    }
    Ok((
        json!({
            "symbols": context_to_json(g.context()),
            "G": matrix_to_json(&g.matrix),
            "standard": g.matrix.is_standard(),
            "inducedMaps": maps_json,
        }),
        ok && g.matrix.is_standard(),
    ))
}

/// Row 4 of `G` for the symbolic rank 2|1, two-chart bundle against
/// `ρ_α·√ρ_2·a^{α2}_{i2}` written out from the symbol names.
fn golden_example() -> Result<CommandOutput, CliError> {
    let desc = symbolic_bundle(2, 2, 1).map_err(input)?;
    let g = assemble(&desc).map_err(input)?;
    let ctx = g.context().clone();
    let sym = |name: &str| GrassmannElement::symbol(&ctx, name).map_err(input);
    let mut expected = Vec::new();
    for (alpha, i) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3)] {
        let z = sym(&format!("rho{alpha}"))? * sym("srho2")? * sym(&format!("a{alpha}2_{i}2"))?;
        expected.push(z);
    }
    let row: Vec<GrassmannElement> = (0..g.matrix.cols())
        .map(|c| g.matrix.element(3, c).expect("G carries no 1ν"))
        .collect();
    let matches = row.len() == expected.len() && row.iter().zip(&expected).all(|(a, b)| a.equals_exact(b));
    Ok(CommandOutput {
        report: json!({
            "command": "gauss",
            "example": "paper",
            "row": 4,
            "entries": row.iter().map(GrassmannElement::display).collect::<Vec<_>>(),
            "expected": expected.iter().map(GrassmannElement::display).collect::<Vec<_>>(),
            "match": matches,
            "symbols": context_to_json(&ctx),
            "G": matrix_to_json(&g.matrix),
        }),
        success: matches,
        summary: format!("row 4 {}", if matches { "matches" } else { "differs" }),
    })
}

fn cmd_gauss(a: &GaussArgs) -> Result<CommandOutput, CliError> {
    if a.example.is_some() {
        return golden_example();
    }
    let path = a.input.as_ref().expect("clap requires --input or --example");
    let mut desc = read_bundle(path)?;
    let note = desc
        .complete()
        .err()
        .map(|e| format!("could not derive missing transitions: {e}"));
    if let Some(out) = issues_output("gauss", &desc, note) {
        return Ok(out);
    }
    let g = assemble(&desc).map_err(input)?;
    let (mut report, ok) = gauss_json(&g)?;
    report["command"] = json!("gauss");
    report["valid"] = json!(true);
    report["bundle"] = bundle_to_json(&desc);
    Ok(CommandOutput {
        report,
        success: ok,
        summary: String::new(),
    })
}

fn cmd_retract(a: &RetractArgs) -> Result<CommandOutput, CliError> {
    if a.m == 0 || a.n == 0 {
        return Err(CliError::Input("require m >= 1 and n >= 1".into()));
    }
    let r = retraction_check(a.m, a.n).map_err(input)?;
    let failed = r.records.iter().filter(|x| !(x.start && x.end)).count();
    Ok(CommandOutput {
        report: json!({
            "command": "retract",
            "config": { "m": a.m, "n": a.n },
            "summary": { "checks": r.records.len(), "failed": failed },
            "records": serde_json::to_value(&r.records).expect("records serialize"),
        }),
        success: r.is_success(),
        summary: format!("{} generator checks, {failed} failed", r.records.len()),
    })
}

fn cmd_homotopy(a: &HomotopyArgs) -> Result<CommandOutput, CliError> {
    let (d0, d1, source) = match a.input.as_slice() {
        [] => {
            if a.t == 0 || a.k + a.l == 0 {
                return Err(CliError::Input("require t >= 1 and k + l >= 1".into()));
            }
            let ctx = AlgebraContext::with_symbols(&["u1", "u2"], 2).map_err(input)?;
            let d0 = BundleDescription::random(a.seed, a.t, a.k, a.l, &ctx).map_err(input)?;
            let d1 = BundleDescription::random(a.seed.wrapping_add(1), a.t, a.k, a.l, &ctx).map_err(input)?;
            (d0, d1, json!({ "seed": a.seed, "t": a.t, "k": a.k, "l": a.l }))
        }
        [p0, p1] => {
            let mut d0 = read_bundle(p0)?;
            let mut d1 = read_bundle(p1)?;
            let n0 = d0.complete().err().map(|e| e.to_string());
            let n1 = d1.complete().err().map(|e| e.to_string());
            for (d, n) in [(&d0, n0), (&d1, n1)] {
                if let Some(out) = issues_output("homotopy", d, n) {
                    return Ok(out);
                }
            }
            (
                d0,
                d1,
                json!({ "inputs": [p0.display().to_string(), p1.display().to_string()] }),
            )
        }
        _ => return Err(CliError::Input("pass --input exactly twice, or not at all".into())),
    };
    let g0 = assemble(&d0).map_err(input)?;
    let g1 = assemble(&d1).map_err(input)?;
    let family = homotopy_family(&g0, &g1).map_err(input)?;
    let (start, end) = family.endpoints().map_err(input)?;
    let mut checks = BTreeMap::new();
    checks.insert("F0 = J^e G0", start);
    checks.insert("F1 = J^o G1", end);
    Ok(CommandOutput {
        report: json!({
            "command": "homotopy",
            "config": source,
            "symbols": context_to_json(&family.context),
            "family": matrix_to_json(&family.family),
            "checks": checks,
        }),
        success: start && end,
        summary: format!("F0 endpoint {start}, F1 endpoint {end}"),
    })
}
