use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;
use std::str::FromStr;

use char2_conformal::field::{ArfClass, ArfValue, FieldElement, FieldSpec};
use char2_conformal::geometry::{self, Geometry, GeometryName, ProjPoint};
use char2_conformal::metric;
use char2_conformal::oracle::{self, VerificationReport};
use char2_conformal::QuadraticForm;
use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use serde_json::{json, Value};

const EXIT_INPUT: u8 = 1;
const EXIT_VERIFY: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "c2conf", version, about = "Conformal geometries over GF(2^n)")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Extension degree n of GF(2^n); `verify` also accepts a range `a..b`.
    #[arg(long, global = true, default_value = "2")]
    n: String,
    /// Irreducible modulus as an integer (bit i is the coefficient of x^i).
    #[arg(long, global = true)]
    modulus: Option<u32>,
    /// Emit exactly one JSON document on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled verification.
    #[arg(long, global = true, default_value_t = oracle::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field arithmetic on integer-encoded elements.
    Field {
        #[command(subcommand)]
        op: FieldOp,
    },
    /// Arf invariant of a form file (`-` for standard input).
    Arf { file: String },
    /// Build a geometry with the given Arf values.
    Build {
        /// Arf⟨Ω, P⟩: 0, e, inf or raw:<int>.
        #[arg(long)]
        arf_p: String,
        /// Arf⟨Ω, L⟩: 0, e, inf or raw:<int>.
        #[arg(long)]
        arf_l: String,
        /// Total Arf class of V (default 0).
        #[arg(long)]
        arf_v: Option<String>,
        /// Write the geometry here instead of standard output.
        #[arg(long)]
        out: Option<String>,
    },
    /// Classify a geometry file (`-` for standard input).
    Classify { file: String },
    /// Oriented distance between two points on a line, or with `--list`
    /// the real lines and their real points.
    Distance {
        file: String,
        /// Line ℓ as comma-separated coordinates.
        #[arg(long, requires_all = ["from", "to"])]
        line: Option<String>,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        #[arg(long, conflicts_with = "line")]
        list: bool,
    },
    /// Run brute-force verification suites.
    Verify {
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// The classification table by Arf(P) rows and Arf(L) columns.
    Table,
}

#[derive(Subcommand, Debug)]
enum FieldOp {
    Add {
        a: u32,
        b: u32,
    },
    Mul {
        a: u32,
        b: u32,
    },
    Inv {
        a: u32,
    },
    Sqrt {
        a: u32,
    },
    Trace {
        a: u32,
    },
    /// x + x² and whether x lies in the Artin–Schreier image.
    Harf {
        a: u32,
    },
    /// Roots of x² + x = c.
    Solve {
        c: u32,
    },
}

/// What a command produced: a JSON document and its text rendering.
struct Output {
    json: Value,
    text: String,
    exit: u8,
}

impl Output {
    fn ok(json: Value, text: impl Into<String>) -> Self {
        Output {
            json,
            text: text.into(),
            exit: 0,
        }
    }
}

type CmdResult = Result<Output, String>;

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let bad = || format!("invalid --n `{s}` (expected an integer or a range a..b)");
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn field_spec(opts: &GlobalOpts) -> Result<FieldSpec, String> {
    let (lo, hi) = parse_range(&opts.n)?;
    if lo != hi {
        return Err(format!(
            "--n must be a single degree here, got `{}`",
            opts.n
        ));
    }
    FieldSpec::new(lo, opts.modulus).map_err(|e| e.to_string())
}

fn read_input(file: &str) -> Result<String, String> {
    if file == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("reading standard input: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(file).map_err(|e| format!("reading {file}: {e}"))
    }
}

fn parse_arf(spec: FieldSpec, s: &str) -> Result<ArfValue, String> {
    if let Some(raw) = s.strip_prefix("raw:") {
        let v: u32 = raw
            .parse()
            .map_err(|_| format!("invalid raw Arf value `{s}`"))?;
        return spec
            .element(v)
            .map(ArfValue::Finite)
            .map_err(|e| e.to_string());
    }
    ArfClass::from_str(s).map(|c| c.representative(spec))
}

fn parse_point(spec: FieldSpec, s: &str) -> Result<ProjPoint, String> {
    let values = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("invalid coordinate `{t}` in `{s}`"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ProjPoint::from_ints(spec, &values).map_err(|e| e.to_string())
}

fn elem(spec: FieldSpec, v: u32) -> Result<FieldElement, String> {
    spec.element(v).map_err(|e| e.to_string())
}

fn cmd_field(opts: &GlobalOpts, op: &FieldOp) -> CmdResult {
    let spec = field_spec(opts)?;
    let (name, value): (&str, Value) = match *op {
        FieldOp::Add { a, b } => ("add", json!((elem(spec, a)? + elem(spec, b)?).value())),
        FieldOp::Mul { a, b } => ("mul", json!((elem(spec, a)? * elem(spec, b)?).value())),
        FieldOp::Inv { a } => {
            let x = elem(spec, a)?.inv().ok_or("0 has no inverse")?;
            ("inv", json!(x.value()))
        }
        FieldOp::Sqrt { a } => ("sqrt", json!(elem(spec, a)?.sqrt().value())),
        FieldOp::Trace { a } => ("trace", json!(elem(spec, a)?.trace().value())),
        FieldOp::Harf { a } => {
            let (image, member) = elem(spec, a)?.artin_schreier_with_membership();
            ("harf", json!({"value": image.value(), "in_image": member}))
        }
        FieldOp::Solve { c } => {
            let roots = elem(spec, c)?.solve_artin_schreier();
            ("solve", json!(roots.map(|(x, y)| [x.value(), y.value()])))
        }
    };
    let text = match &value {
        Value::Null => "no solution".to_string(),
        Value::Array(r) => format!("{} {}", r[0], r[1]),
        Value::Object(m) => format!("{} {}", m["value"], m["in_image"]),
        v => v.to_string(),
    };
    Ok(Output::ok(
        json!({"op": name, "field": spec, "result": value}),
        text,
    ))
}

fn cmd_arf(file: &str) -> CmdResult {
    let form: QuadraticForm =
        serde_json::from_str(&read_input(file)?).map_err(|e| format!("parsing form: {e}"))?;
    let arf = form.arf_invariant().map_err(|e| e.to_string())?;
    Ok(Output::ok(
        json!({"arf": arf, "class": arf.class()}),
        format!("{arf} (class {})", arf.class()),
    ))
}

fn cmd_build(
    opts: &GlobalOpts,
    arf_p: &str,
    arf_l: &str,
    arf_v: Option<&str>,
    out: Option<&str>,
) -> CmdResult {
    let spec = field_spec(opts)?;
    let a = parse_arf(spec, arf_p)?;
    let b = parse_arf(spec, arf_l)?;
    let v = arf_v.map(|s| parse_arf(spec, s)).transpose()?;
    let g = geometry::build_geometry(spec, a, b, v).map_err(|e| e.to_string())?;
    let class = geometry::classify_geometry(&g).map_err(|e| e.to_string())?;
    info!("built {} geometry over GF(2^{})", class.name, spec.degree());
    let doc = serde_json::to_value(&g).expect("geometry serializes");
    match out {
        Some(path) => {
            let mut body = serde_json::to_string_pretty(&doc).expect("json");
            body.push('\n');
            fs::write(path, body).map_err(|e| format!("writing {path}: {e}"))?;
            Ok(Output::ok(
                json!({"out": path, "class": class}),
                format!("wrote {path} ({})", class.name),
            ))
        }
        None => {
            let text = serde_json::to_string_pretty(&doc).expect("json");
            Ok(Output::ok(doc, text))
        }
    }
}

fn load_geometry(file: &str) -> Result<Geometry, String> {
    let g: Geometry =
        serde_json::from_str(&read_input(file)?).map_err(|e| format!("parsing geometry: {e}"))?;
    if !g.is_valid() {
        return Err(format!("invalid geometry: {}", g.violations().join("; ")));
    }
    Ok(g)
}

fn cmd_classify(file: &str) -> CmdResult {
    let g = load_geometry(file)?;
    let class = geometry::classify_geometry(&g).map_err(|e| e.to_string())?;
    let arf_p = geometry::arf_of(&g, g.p()).map_err(|e| e.to_string())?;
    let arf_l = geometry::arf_of(&g, g.l()).map_err(|e| e.to_string())?;
    Ok(Output::ok(
        json!({
            "name": class.name,
            "display_name": class.name.display_name(),
            "arf_p": class.arf_p,
            "arf_l": class.arf_l,
            "arf_p_value": arf_p,
            "arf_l_value": arf_l,
        }),
        class.name.as_str(),
    ))
}

fn cmd_distance_list(g: &Geometry) -> CmdResult {
    let mut lines = Vec::new();
    let mut text = String::new();
    for ell in metric::real_lines(g).map_err(|e| e.to_string())? {
        let pts = metric::real_points_on(g, &ell).map_err(|e| e.to_string())?;
        text.push_str(&format!("{ell}:"));
        for p in &pts {
            text.push_str(&format!(" {p}"));
        }
        text.push('\n');
        lines.push(json!({"line": ell, "points": pts}));
    }
    text.pop();
    Ok(Output::ok(Value::Array(lines), text))
}

fn cmd_distance(
    file: &str,
    line: Option<&str>,
    from: Option<&str>,
    to: Option<&str>,
    list: bool,
) -> CmdResult {
    let g = load_geometry(file)?;
    if list {
        return cmd_distance_list(&g);
    }
    let (Some(line), Some(from), Some(to)) = (line, from, to) else {
        return Err("distance needs --line, --from and --to, or --list".into());
    };
    let spec = g.spec();
    let (ell, p1, p2) = (
        parse_point(spec, line)?,
        parse_point(spec, from)?,
        parse_point(spec, to)?,
    );
    let gamma = metric::oriented_distance(&g, &ell, &p1, &p2).map_err(|e| e.to_string())?;
    let plus = metric::ort_plus(&metric::line_group(&g, &ell).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let inverse = plus.inverse(&gamma);
    Ok(Output::ok(
        json!({"oriented": gamma, "inverse": inverse, "class": metric::distance_class(&plus, &gamma)}),
        format!("{gamma}\n{inverse}"),
    ))
}

fn cmd_verify(opts: &GlobalOpts, suite: &str) -> CmdResult {
    let (lo, hi) = parse_range(&opts.n)?;
    if opts.modulus.is_some() && lo != hi {
        return Err("--modulus needs a single --n".into());
    }
    let suites: Vec<&str> = if suite == "all" {
        oracle::SUITES.to_vec()
    } else if oracle::SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(format!(
            "unknown suite `{suite}`; known: all, {}",
            oracle::SUITES.join(", ")
        ));
    };
    let mut reports: Vec<VerificationReport> = Vec::new();
    for n in lo..=hi {
        let spec = FieldSpec::new(n, opts.modulus).map_err(|e| e.to_string())?;
        for s in &suites {
            let max = oracle::suite_max_degree(s).expect("listed suite");
            if n > max {
                warn!("skipping suite {s} for n = {n} (supports n ≤ {max})");
                continue;
            }
            info!("running suite {s} for n = {n}");
            reports.extend(oracle::run_suite(s, spec, opts.seed).map_err(|e| e.to_string())?);
        }
    }
    if reports.is_empty() {
        return Err(format!("no suite in `{suite}` supports n in {lo}..{hi}"));
    }
    let failed = reports.iter().any(VerificationReport::is_failure);
    let width = reports.iter().map(|r| r.claim_id.len()).max().unwrap_or(0);
    let text = reports
        .iter()
        .map(|r| {
            let status = match (r.holds(), r.asserted) {
                (true, _) => "ok",
                (false, true) => "FAILED",
                (false, false) => "refuted",
            };
            let mut line = format!(
                "{:<width$}  n={:<2} cases={:<6} failures={:<5} {status}",
                r.claim_id,
                r.field_n,
                r.cases_checked,
                r.failures.len()
            );
            if let Some(first) = r.failures.first() {
                line.push_str(&format!("  e.g. {first}"));
            }
            line
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output {
        json: serde_json::to_value(&reports).expect("reports serialize"),
        text,
        exit: if failed { EXIT_VERIFY } else { 0 },
    })
}

fn cmd_table() -> CmdResult {
    let heads = ArfClass::ALL;
    let width = GeometryName::TABLE
        .iter()
        .flatten()
        .map(|g| g.display_name().chars().count())
        .max()
        .unwrap_or(0);
    let mut text = format!("{:<12}", "P \\ L");
    for h in heads {
        text.push_str(&format!("  {:<width$}", h.as_str()));
    }
    let mut rows = Vec::new();
    for (i, row) in GeometryName::TABLE.iter().enumerate() {
        text.push_str(&format!("\n{:<12}", heads[i].as_str()));
        for g in row {
            text.push_str(&format!("  {:<width$}", g.display_name()));
        }
        rows.push(json!({
            "arf_p": heads[i],
            "cells": heads.iter().zip(row).map(|(l, g)| json!({"arf_l": l, "name": g, "display_name": g.display_name()})).collect::<Vec<_>>(),
        }));
    }
    let text = text
        .lines()
        .map(str::trim_end)
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output::ok(Value::Array(rows), text))
}

fn run(cli: &Cli) -> CmdResult {
    let opts = &cli.global;
    match &cli.command {
        Command::Field { op } => cmd_field(opts, op),
        Command::Arf { file } => cmd_arf(file),
        Command::Build {
            arf_p,
            arf_l,
            arf_v,
            out,
        } => cmd_build(opts, arf_p, arf_l, arf_v.as_deref(), out.as_deref()),
        Command::Classify { file } => cmd_classify(file),
        Command::Distance {
            file,
            line,
            from,
            to,
            list,
        } => cmd_distance(file, line.as_deref(), from.as_deref(), to.as_deref(), *list),
        Command::Verify { suite } => cmd_verify(opts, suite),
        Command::Table => cmd_table(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let body = if cli.global.json {
                serde_json::to_string(&out.json).expect("json")
            } else {
                out.text
            };
            let mut stdout = io::stdout().lock();
            let _ = writeln!(stdout, "{body}");
            ExitCode::from(out.exit)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
