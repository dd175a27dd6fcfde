use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use sha2::{Digest, Sha256};
use toric_gamma2::fanfile::{parse_fan, write_fan};
use toric_gamma2::gamma2::{self, Verdict};
use toric_gamma2::report::{fmt_rational, Provenance, Report};
use toric_gamma2::{catalog, verify, Cone, Error, Fan, Rational};

#[derive(Parser)]
#[command(
    name = "toric-gamma2",
    version,
    about = "Exact gamma_2 positivity checks for complete simplicial toric varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan and run every analysis.
    Check {
        file: PathBuf,
        /// Machine-readable output.
        #[arg(long)]
        json: bool,
        /// Check that maximal cones meet in common faces; always on up to dimension 5.
        #[arg(long)]
        deep: bool,
    },
    /// Evaluate gamma_2 on the surface of a codimension-two cone (0-based ray indices).
    Gamma2 {
        file: PathBuf,
        /// Comma-separated ray indices; may be omitted for a surface fan.
        #[arg(long, value_delimiter = ',')]
        tau: Vec<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Extremal partition and surface generators of a Picard-rank-2 fan.
    Ne2 {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Self-intersection table and gamma_2 of a toric surface.
    Surface {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the acceptance checks and print a pass/fail matrix.
    VerifyPaper {
        #[arg(long)]
        json: bool,
    },
    /// Built-in example fans.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List entry names and their parameters.
    List,
    /// Write an entry as a fan file.
    Emit {
        name: String,
        /// Parameter as `key=value`, e.g. `d=5`.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, i64)>,
        /// Output path; stdout when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    let v = v.trim().parse::<i64>().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// Exit 2 for bad input, 3 for a violated internal invariant.
enum Failure {
    Input(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn read_input(path: &Path) -> Result<(Fan, String), Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let hash = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let fan = parse_fan(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((fan, hash))
}

/// Reads a fan and rejects it unless it passes structural validation.
fn read_valid(path: &Path) -> Result<Fan, Failure> {
    let (fan, _) = read_input(path)?;
    let report = toric_gamma2::fan::validate_with(&fan, false);
    if !report.is_valid() {
        let issues: Vec<String> = report.issues.iter().map(ToString::to_string).collect();
        return Err(Failure::Input(format!("invalid fan: {}", issues.join("; "))));
    }
    Ok(fan)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn run_check(file: &Path, json: bool, deep: bool) -> CliResult {
    let (fan, hash) = read_input(file)?;
    let deep = deep || fan.dim() <= toric_gamma2::fan::DEEP_VALIDATION_MAX_DIM;
    let report = Report::build(&fan, deep, Provenance::new(Some(hash)))?;
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if !report.structural.is_valid() {
        return Err(Failure::Input("fan failed validation".into()));
    }
    if let Some(v) = report.violations().first() {
        return Err(Failure::Invariant(v.clone()));
    }
    Ok(())
}

fn sign_word(s: i8) -> &'static str {
    match s {
        1 => "positive",
        0 => "zero",
        _ => "negative",
    }
}

fn run_gamma2(file: &Path, tau: Vec<usize>, json: bool) -> CliResult {
    let fan = read_valid(file)?;
    if fan.dim() == 2 && tau.is_empty() {
        let value = gamma2::gamma2_surface(&fan)?;
        let s = gamma2::sign(&value);
        if json {
            print_json(&json!({ "tau": [], "value": fmt_rational(&value), "sign": s, "exact": true }));
        } else {
            println!("gamma2 = {} ({})", fmt_rational(&value), sign_word(s));
        }
        return Ok(());
    }
    let tau = Cone::new(tau);
    let surface = gamma2::quad_surface(&fan, &tau)?;
    let value = gamma2::quad_formula(&surface.coefficients());
    let exact = gamma2::gamma2_dot_surface(&fan, &tau)?;
    let s = gamma2::sign(&value);
    if s != gamma2::sign(&exact) {
        return Err(Failure::Invariant(format!(
            "formula value {} and intersection number {} disagree in sign on {tau}",
            fmt_rational(&value),
            fmt_rational(&exact)
        )));
    }
    if json {
        print_json(&json!({
            "tau": tau.rays(),
            "labels": surface.labels,
            "value": fmt_rational(&value),
            "sign": s,
            "exact_intersection": fmt_rational(&exact),
            "note": "value equals alpha * gamma_2 . V(tau) for some unspecified alpha > 0",
        }));
    } else {
        let [y1, y2, y3, y4] = surface.labels;
        println!("tau = {tau}, labels y1..y4 = x{y1} x{y2} x{y3} x{y4}");
        println!("relation tau+y3: {}", surface.rel3);
        println!("relation tau+y1: {}", surface.rel1);
        println!("value = {} ({})", fmt_rational(&value), sign_word(s));
        println!("note: value = alpha * gamma_2 . V(tau) for some alpha > 0; only the sign is intrinsic");
        println!("exact gamma_2 . V(tau) = {}", fmt_rational(&exact));
    }
    Ok(())
}

fn ratios(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

fn run_ne2(file: &Path, json: bool) -> CliResult {
    let fan = read_valid(file)?;
    let g = gamma2::ne2_generators(&fan)?;
    let absent = [(g.n() == 2).then_some("n = 2"), None, (g.m() == 2).then_some("m = 2")];
    if json {
        let s: Vec<serde_json::Value> =
            g.s.iter()
                .enumerate()
                .map(|(k, c)| match c {
                    Some(c) => json!({ "label": format!("S{}", k + 1), "present": true, "tau": c.rays() }),
                    None => json!({ "label": format!("S{}", k + 1), "present": false, "reason": absent[k] }),
                })
                .collect();
        print_json(&json!({
            "x": g.x,
            "y": g.y,
            "x_relation": g.extremal.x_relation.to_string(),
            "y_relation": g.extremal.y_relation.to_string(),
            "x_ratios": ratios(&g.x_ratios()),
            "y_ratios": ratios(&g.y_ratios()),
            "generators": s,
        }));
        return Ok(());
    }
    let names = |v: &[usize]| v.iter().map(|i| format!("x{i}")).collect::<Vec<_>>().join(" ");
    println!("x side: {}", names(&g.x));
    println!("y side: {}", names(&g.y));
    println!("x relation: {}", g.extremal.x_relation);
    println!("y relation: {}", g.extremal.y_relation);
    println!("x ratios d/a: {}", ratios(&g.x_ratios()).join(" <= "));
    println!("y ratios c/b: {}", ratios(&g.y_ratios()).join(" <= "));
    for (k, c) in g.s.iter().enumerate() {
        match c {
            Some(c) => println!("S{}: V({})", k + 1, names(c.rays())),
            None => println!("S{}: absent ({})", k + 1, absent[k].unwrap_or("")),
        }
    }
    Ok(())
}

fn run_surface(file: &Path, json: bool) -> CliResult {
    let fan = read_valid(file)?;
    let selfs = gamma2::surface_self_intersections(&fan)?;
    let total = gamma2::gamma2_surface(&fan)?;
    let verdict = Verdict::from_values([&total]);
    if json {
        let rows: Vec<serde_json::Value> = selfs
            .iter()
            .enumerate()
            .map(|(i, d)| json!({ "ray": i, "coords": fan.ray(i).to_string(), "self_intersection": fmt_rational(d) }))
            .collect();
        print_json(&json!({ "rays": rows, "gamma2": fmt_rational(&total), "verdict": verdict.as_str() }));
        return Ok(());
    }
    let mut out = String::from("ray  coords  D^2\n");
    for (i, d) in selfs.iter().enumerate() {
        let _ = writeln!(out, "x{i}  {}  {}", fan.ray(i), fmt_rational(d));
    }
    let _ = writeln!(out, "gamma2 = {} ({verdict})", fmt_rational(&total));
    print!("{out}");
    Ok(())
}

fn run_verify(json: bool) -> CliResult {
    let results = verify::run_all();
    if json {
        print_json(&serde_json::to_value(&results).expect("json"));
    } else {
        for r in &results {
            println!("{}", r.line());
            if !r.passed {
                for d in r.detail.iter().skip(1) {
                    println!("    {d}");
                }
            }
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(Failure::Invariant(format!("{failed} acceptance check(s) failed")));
    }
    Ok(())
}

fn run_catalog(command: CatalogCommand) -> CliResult {
    match command {
        CatalogCommand::List => {
            for name in catalog::names() {
                let params = match *name {
                    "terminal-fano-dfold" => " [d>=4, default 4]",
                    "projective-space" => " [d>=1, default 2]",
                    "hirzebruch" => " [a, default 1]",
                    "blowup-p2" => " [k=0..3, default 1]",
                    _ => "",
                };
                println!("{name}{params}");
            }
            Ok(())
        }
        CatalogCommand::Emit { name, params, output } => {
            let params: BTreeMap<String, i64> = params.into_iter().collect();
            let entry = catalog::lookup(&name, &params)?;
            let text = write_fan(&entry.fan);
            match output {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
                }
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { file, json, deep } => run_check(&file, json, deep),
        Command::Gamma2 { file, tau, json } => run_gamma2(&file, tau, json),
        Command::Ne2 { file, json } => run_ne2(&file, json),
        Command::Surface { file, json } => run_surface(&file, json),
        Command::VerifyPaper { json } => run_verify(json),
        Command::Catalog { command } => run_catalog(command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("internal invariant violated: {msg}");
            ExitCode::from(3)
        }
    }
}
