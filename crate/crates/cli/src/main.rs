use std::fs;
use std::io::{self as stdio, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use poncelet_core::char2::{self, QuadraticForm2};
use poncelet_core::ecurve::{build_e_normalized, shape_of_form, ECurve};
use poncelet_core::io;
use poncelet_core::poncelet::{
    default_max_steps, first_start, porism_check, run, Branch, PonceletConfig,
};
use poncelet_core::projective::{classify_detailed, Conic, IntersectionType, ProjPoint};
use poncelet_core::sweep::{sweep, SweepOptions};
use poncelet_core::{svg, Field};

#[derive(Parser, Debug)]
#[command(name = "poncelet", version, about = "Exact Poncelet processes on pairs of conics")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Step budget; defaults to 10·q over F_q and 10000 over Q.
    #[arg(long, global = true)]
    max_steps: Option<u64>,
    /// Print one line of JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Intersection type, tangency points and (t, a, b, Δ).
    Classify { input: PathBuf },
    /// The normal form x² + txy + ay² − byz, x² − yz and its transform.
    Normalize { input: PathBuf },
    /// One Poncelet process.
    Run {
        input: PathBuf,
        #[arg(long, value_enum)]
        branch: Option<BranchArg>,
    },
    /// Runs from several starts and checks that they agree.
    PorismCheck {
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        num_starts: usize,
    },
    /// The curve E ⊂ P¹ × P¹: coefficients, singular points, shape.
    Ecurve {
        input: Option<PathBuf>,
        /// Use the normal form with these parameters instead of an input file.
        #[arg(long, value_name = "T,A,B")]
        normalized: Option<String>,
        /// Field for --normalized.
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Symplectic normal form of a characteristic-2 quadratic form.
    Char2Normalize { input: PathBuf },
    /// Strange point of a characteristic-2 conic, with a tangent sample.
    Char2StrangePoint {
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Random configurations, one JSON record per line.
    Sweep {
        #[arg(long)]
        field: String,
        #[arg(long = "type")]
        itype: Option<String>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 20)]
        num_starts: usize,
        /// Include per-record wall-clock time.
        #[arg(long)]
        timing: bool,
    },
    /// An SVG figure of a characteristic-0 run.
    RenderSvg {
        input: PathBuf,
        #[arg(long, value_enum)]
        branch: Option<BranchArg>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BranchArg {
    Min,
    Max,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Branch {
        match b {
            BranchArg::Min => Branch::Min,
            BranchArg::Max => Branch::Max,
        }
    }
}

/// A result that contradicts the closure theorem.
#[derive(Debug)]
struct Violation(String);

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "theorem violation: {}", self.0)
    }
}

impl std::error::Error for Violation {}

struct Out {
    text: String,
    json: Value,
    violation: Option<String>,
}

impl Out {
    fn new(text: String, json: Value) -> Out {
        Out { text, json, violation: None }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        stdio::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = read_input(path)?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn pair(path: &Path) -> Result<(Value, Conic, Conic)> {
    let v = read_json(path)?;
    let (c, d) = io::pair_from_json(&v)?;
    Ok((v, c, d))
}

fn branch_of(v: &Value, flag: Option<BranchArg>) -> Result<Branch> {
    if let Some(b) = flag {
        return Ok(b.into());
    }
    match v.get("branch").and_then(Value::as_str) {
        None | Some("min") => Ok(Branch::Min),
        Some("max") => Ok(Branch::Max),
        Some(other) => bail!(poncelet_core::Error::Parse(format!("bad branch {other:?}"))),
    }
}

fn max_steps_of(cli: &Cli, v: &Value, field: &Field) -> u64 {
    cli.max_steps
        .or_else(|| v.get("max_steps").and_then(Value::as_u64))
        .unwrap_or_else(|| default_max_steps(field))
}

fn start_of(cfg: &PonceletConfig, v: &Value, seed: u64) -> Result<ProjPoint> {
    match v.get("c1") {
        Some(p) => Ok(io::point_from_json(cfg.field(), p)?),
        None => first_start(cfg, seed)?
            .ok_or_else(|| anyhow!(poncelet_core::Error::Degenerate("C has no point off the tangency set".into()))),
    }
}

fn cmd_classify(input: &Path) -> Result<Out> {
    let (_, c, d) = pair(input)?;
    let cl = classify_detailed(&c, &d)?;
    let mut text = format!("type {}\n", cl.itype);
    for p in &cl.tangency.points {
        text += &format!("tangency {p}\n");
    }
    if let Some(n) = &cl.normalized {
        text += &format!("t = {}, a = {}, b = {}, delta = {}\n", n.t, n.a, n.b, n.delta);
    }
    Ok(Out::new(text, io::classification_to_json(&cl)))
}

fn cmd_normalize(input: &Path) -> Result<Out> {
    let (_, c, d) = pair(input)?;
    let cl = classify_detailed(&c, &d)?;
    let n = cl.normalized.ok_or_else(|| {
        anyhow!(poncelet_core::Error::InvalidArgument("the conics meet transversally; there is no tangent normal form".into()))
    })?;
    let (nc, nd) = n.conics();
    let mut j = io::normalized_to_json(&n);
    j["type"] = json!(cl.itype.to_string());
    j["pair"] = io::pair_to_json(&nc, &nd);
    let text = format!(
        "type {}\nt = {}, a = {}, b = {}, delta = {}\nat {}\nC' = {:?}\nD' = x^2 - yz\n",
        cl.itype,
        n.t,
        n.a,
        n.b,
        n.delta,
        n.point,
        nc.coeffs().iter().map(|e| e.to_string()).collect::<Vec<_>>()
    );
    Ok(Out::new(text, j))
}

fn cmd_run(cli: &Cli, input: &Path, branch: Option<BranchArg>) -> Result<Out> {
    let (v, c, d) = pair(input)?;
    let cfg = PonceletConfig::new(c.clone(), d.clone())?;
    let c1 = start_of(&cfg, &v, cli.seed)?;
    let steps = max_steps_of(cli, &v, cfg.field());
    let r = run(&cfg, &c1, branch_of(&v, branch)?, steps)?;
    let mut j = io::process_result_to_json(&r);
    j["type"] = json!(cfg.intersection_type().to_string());
    j["c1"] = io::point_to_json(&c1);
    j["pair"] = io::pair_to_json(&c, &d);
    let mut text = format!("type {}\n{}\nfield {}\n", cfg.intersection_type(), r.outcome, r.field);
    for s in &r.orbit {
        text += &format!("{s}\n");
    }
    Ok(Out::new(text, j))
}

fn cmd_porism(cli: &Cli, input: &Path, num_starts: usize) -> Result<Out> {
    let (v, c, d) = pair(input)?;
    let cfg = PonceletConfig::new(c, d)?;
    let steps = max_steps_of(cli, &v, cfg.field());
    let report = porism_check(&cfg, num_starts, steps, cli.seed)?;
    let j = io::porism_report_to_json(&report);
    let text = format!(
        "type {}\nstarts {}{}\nperiods {:?}\n{}\n",
        report.itype,
        report.runs.len(),
        if report.exhaustive { " (all of C minus T)" } else { "" },
        report.periods(),
        if report.pass { "PASS" } else { "FAIL" }
    );
    let mut out = Out::new(text, j);
    if !report.pass {
        out.violation = Some("starts of one configuration disagree".into());
    }
    Ok(out)
}

fn cmd_ecurve(input: Option<&Path>, normalized: Option<&str>, field: &str) -> Result<Out> {
    let (h, shape) = match (input, normalized) {
        (_, Some(tab)) => {
            let f = Field::parse(field)?;
            let parts: Vec<&str> = tab.split(',').collect();
            if parts.len() != 3 {
                bail!(poncelet_core::Error::Parse(format!("--normalized wants t,a,b, got {tab:?}")));
            }
            let e = |s: &str| f.parse_element(s);
            let h = build_e_normalized(&e(parts[0])?, &e(parts[1])?, &e(parts[2])?)?;
            let shape = shape_of_form(&h)?;
            (h, shape)
        }
        (Some(p), None) => {
            let (_, c, d) = pair(p)?;
            let e = ECurve::new(&c, &d)?;
            let shape = e.shape()?;
            (e.form().clone(), shape)
        }
        (None, None) => bail!(poncelet_core::Error::InvalidArgument("give an input file or --normalized".into())),
    };
    let j = io::ecurve_shape_to_json(&h, &shape);
    let mut text = format!("shape {}\nsingular points {}\n", shape.kind.tag(), shape.singular.points.len());
    for (u, v) in &shape.singular.points {
        text += &format!("  {u} x {v}\n");
    }
    text += &format!("reducible {}\n", shape.reducible.is_some());
    Ok(Out::new(text, j))
}

fn quadratic_form(v: &Value) -> Result<QuadraticForm2> {
    if v.get("n").is_some() {
        Ok(io::quadratic_form2_from_json(v)?)
    } else {
        Ok(QuadraticForm2::from_conic(&io::conic_from_json(v, None)?)?)
    }
}

fn cmd_char2_normalize(input: &Path) -> Result<Out> {
    let q = quadratic_form(&read_json(input)?)?;
    let cf = char2::symplectic_normalize(&q)?;
    if !cf.verify(&q)? {
        bail!(Violation("basis change does not realise the canonical form".into()));
    }
    let mut j = io::canonical_form2_to_json(&cf);
    j["input"] = io::quadratic_form2_to_json(&q);
    let mut text = format!(
        "l = {}, square term: {}{}\nbasis (columns):\n",
        cf.l,
        cf.has_square_term,
        if cf.lifted { ", after a quadratic lift" } else { "" }
    );
    for row in &cf.basis {
        text += &format!("  {}\n", row.iter().map(|e| format!("[{e}]")).collect::<Vec<_>>().join(" "));
    }
    Ok(Out::new(text, j))
}

fn cmd_char2_strange(input: &Path, samples: usize) -> Result<Out> {
    let q = quadratic_form(&read_json(input)?)?;
    let c = q.to_conic()?;
    let s = char2::strange_point(&c)?;
    let f = c.field().clone();
    let elems = f.elements()?;
    let mut checks = Vec::new();
    'outer: for x in &elems {
        for y in &elems {
            for z in [f.zero(), f.one()] {
                if let Ok(p) = ProjPoint::new([x.clone(), y.clone(), z]) {
                    if c.contains(&p) && !checks.iter().any(|(q, _, _): &(ProjPoint, _, _)| q == &p) {
                        let t = char2::tangent_at_char2(&c, &p)?;
                        let ok = s.lies_on(&t);
                        checks.push((p, t, ok));
                        if checks.len() >= samples {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    let concurrent = checks.iter().all(|(_, _, ok)| *ok);
    let j = json!({
        "field": f.to_string(),
        "strange_point": io::point_to_json(&s),
        "concurrent": concurrent,
        "transcript": checks.iter().map(|(p, t, ok)| json!({
            "point": io::point_to_json(p),
            "tangent": io::line_to_json(t),
            "contains_strange_point": ok,
        })).collect::<Vec<_>>(),
    });
    let mut text = format!("strange point {s}\n");
    for (p, t, ok) in &checks {
        text += &format!("  tangent at {p}: {t} {}\n", if *ok { "ok" } else { "MISSES" });
    }
    let mut out = Out::new(text, j);
    if !concurrent {
        out.violation = Some("a tangent misses the strange point".into());
    }
    Ok(out)
}

fn cmd_sweep(cli: &Cli, field: &str, itype: Option<&str>, trials: usize, num_starts: usize, timing: bool) -> Result<Out> {
    let field = Field::parse(field)?;
    let itype: Option<IntersectionType> = itype.map(str::parse).transpose()?;
    let opts = SweepOptions {
        max_steps: cli.max_steps.unwrap_or_else(|| default_max_steps(&field)),
        field,
        itype,
        trials,
        num_starts,
        seed: cli.seed,
    };
    let mut lines = String::new();
    let mut failed = 0;
    for r in sweep(&opts) {
        let r = r?;
        failed += usize::from(!r.pass);
        lines += &serde_json::to_string(&r.to_json(timing))?;
        lines.push('\n');
    }
    let mut out = Out::new(lines, Value::Null);
    if failed > 0 {
        out.violation = Some(format!("{failed} of {trials} configurations failed"));
    }
    Ok(out)
}

fn cmd_render(cli: &Cli, input: &Path, branch: Option<BranchArg>) -> Result<Out> {
    let (v, c, d) = pair(input)?;
    let cfg = PonceletConfig::new(c, d)?;
    if cfg.field().is_finite() {
        bail!(poncelet_core::Error::Unsupported(
            "finite-field configurations have no real embedding to draw".into()
        ));
    }
    let c1 = start_of(&cfg, &v, cli.seed)?;
    let steps = max_steps_of(cli, &v, cfg.field());
    let r = run(&cfg, &c1, branch_of(&v, branch)?, steps)?;
    let fig = svg::figure(&cfg, &r)?;
    Ok(Out::new(fig.to_svg(), Value::Null))
}

fn dispatch(cli: &Cli) -> Result<Out> {
    match &cli.command {
        Command::Classify { input } => cmd_classify(input),
        Command::Normalize { input } => cmd_normalize(input),
        Command::Run { input, branch } => cmd_run(cli, input, *branch),
        Command::PorismCheck { input, num_starts } => cmd_porism(cli, input, *num_starts),
        Command::Ecurve { input, normalized, field } => {
            cmd_ecurve(input.as_deref(), normalized.as_deref(), field)
        }
        Command::Char2Normalize { input } => cmd_char2_normalize(input),
        Command::Char2StrangePoint { input, samples } => cmd_char2_strange(input, *samples),
        Command::Sweep { field, itype, trials, num_starts, timing } => {
            cmd_sweep(cli, field, itype.as_deref(), *trials, *num_starts, *timing)
        }
        Command::RenderSvg { input, branch } => cmd_render(cli, input, *branch),
    }
}

fn error_json(e: &anyhow::Error) -> Value {
    let kind = if let Some(c) = e.downcast_ref::<poncelet_core::Error>() {
        c.kind()
    } else if e.downcast_ref::<serde_json::Error>().is_some() {
        "json"
    } else if e.downcast_ref::<stdio::Error>().is_some() {
        "io"
    } else {
        "input"
    };
    json!({"error": kind, "message": format!("{e:#}")})
}

fn emit(cli: &Cli, body: &str) -> Result<()> {
    match &cli.output {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            stdio::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = dispatch(&cli).and_then(|out| {
        let body = if cli.json && !out.json.is_null() {
            format!("{}\n", serde_json::to_string(&out.json)?)
        } else {
            out.text
        };
        emit(&cli, &body)?;
        Ok(out.violation)
    });
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(v)) => {
            eprintln!("{}", json!({"error": "theorem_violation", "message": v}));
            ExitCode::from(2)
        }
        Err(e) if e.downcast_ref::<Violation>().is_some() => {
            eprintln!("{}", json!({"error": "theorem_violation", "message": format!("{e:#}")}));
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(1)
        }
    }
}
