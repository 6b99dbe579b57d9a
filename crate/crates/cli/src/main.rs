use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use capra_core::scene::{report_to_string, run_scene, Analysis, ExactOverride, RunOptions, Scene, SetOutcome};
use capra_core::{Error, SourceNorm};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "capra", version, about = "Capra-convexity decisions, conjugacy tables and figures from scene files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide Capra-convexity of every set in the scene.
    Check(Common),
    /// Apply the conical-hull sufficient condition.
    Hull(Common),
    /// Tabulate Capra conjugates and biconjugates on grids.
    Conj(Common),
    /// Minimize a zero-homogeneous function over the sphere part of each cone.
    Min(Common),
    /// Render figures only.
    Fig(Common),
}

#[derive(Args)]
struct Common {
    /// Scene file (capra-scene/1).
    scene: PathBuf,
    /// Source norm: l1, l2, linf or p=<x>.
    #[arg(long, value_parser = parse_norm)]
    norm: Option<SourceNorm>,
    /// Oracle tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Oracle sample count.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; with several sets the label is appended to the file stem.
    #[arg(long)]
    report: Option<PathBuf>,
    /// SVG path, same naming rule as --report.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// CSV path for conjugacy tables.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_norm(s: &str) -> Result<SourceNorm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_) => Failure { code: 3, kind: "inconsistency", message: e.to_string() },
            _ => Failure { code: 2, kind: "input", message: e.to_string() },
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 2, kind: "io", message: format!("{}: {e}", path.display()) }
}

/// `out.json` becomes `out-K1.json` when a scene has several sets.
fn per_set_path(base: &Path, label: &str, many: bool) -> PathBuf {
    if !many {
        return base.to_path_buf();
    }
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let safe: String = label.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect();
    let name = match base.extension() {
        Some(ext) => format!("{stem}-{safe}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{safe}"),
    };
    base.with_file_name(name)
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    let result = fs::File::create(&tmp)
        .and_then(|mut f| f.write_all(contents.as_bytes()).and_then(|_| f.sync_all()))
        .and_then(|_| fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(io_failure(path, e));
    }
    Ok(())
}

fn resolve(flag: &Option<PathBuf>, from_scene: &Option<String>, scene_dir: &Path) -> Option<PathBuf> {
    flag.clone().or_else(|| from_scene.as_ref().map(|p| scene_dir.join(p)))
}

fn run(command: Command) -> Result<(), Failure> {
    let (args, analyses) = match command {
        Command::Check(a) => (a, Some(vec![Analysis::Decide])),
        Command::Hull(a) => (a, Some(vec![Analysis::ConicalHull])),
        Command::Conj(a) => (a, Some(vec![Analysis::Conjugacy])),
        Command::Min(a) => (a, Some(vec![Analysis::Minimize])),
        Command::Fig(a) => (a, Some(Vec::new())),
    };
    let figure_only = analyses.as_ref().is_some_and(Vec::is_empty);
    let text = fs::read_to_string(&args.scene).map_err(|e| io_failure(&args.scene, e))?;
    let scene = Scene::from_json(&text)?;
    let scene_dir = args.scene.parent().unwrap_or(Path::new("")).to_path_buf();

    // `check` keeps the scene's oracle request; the other verbs run one analysis.
    let analyses = match analyses {
        Some(mut a) if a == [Analysis::Decide] && scene.analyses.contains(&Analysis::Oracle) => {
            a.push(Analysis::Oracle);
            Some(a)
        }
        other => other,
    };

    let report_path = resolve(&args.report, &scene.outputs.report, &scene_dir);
    let svg_path = resolve(&args.svg, &scene.outputs.svg, &scene_dir);
    let csv_path = resolve(&args.csv, &scene.outputs.csv, &scene_dir);
    let exact = ExactOverride::from_env_value(std::env::var("CAPRA_EXACT").ok().as_deref())?;
    let opts = RunOptions {
        norm: args.norm,
        tol: args.tol,
        samples: args.samples,
        seed: args.seed,
        exact,
        analyses,
        figures: figure_only || svg_path.is_some(),
    };
    let outcomes = run_scene(&scene, &opts)?;
    emit(&outcomes, figure_only, report_path, svg_path, csv_path)
}

fn emit(
    outcomes: &[SetOutcome],
    figure_only: bool,
    report_path: Option<PathBuf>,
    svg_path: Option<PathBuf>,
    csv_path: Option<PathBuf>,
) -> Result<(), Failure> {
    let many = outcomes.len() > 1;
    let mut stdout_reports: Vec<Value> = Vec::new();
    let mut stdout = std::io::stdout().lock();
    for o in outcomes {
        if let Some(svg) = &o.svg {
            match &svg_path {
                Some(p) => write_atomic(&per_set_path(p, &o.label, many), svg)?,
                None if figure_only => {
                    let _ = stdout.write_all(svg.as_bytes());
                }
                None => {}
            }
        }
        if let (Some(csv), Some(p)) = (&o.csv, &csv_path) {
            write_atomic(&per_set_path(p, &o.label, many), csv)?;
        }
        if figure_only {
            continue;
        }
        match &report_path {
            Some(p) => write_atomic(&per_set_path(p, &o.label, many), &report_to_string(&o.report))?,
            None => stdout_reports.push(o.report.clone()),
        }
    }
    if !stdout_reports.is_empty() {
        let doc = if many { Value::Array(stdout_reports) } else { stdout_reports.remove(0) };
        let _ = stdout.write_all(report_to_string(&doc).as_bytes());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(std::env::args_os());
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let err = json!({"error": {"kind": f.kind, "message": f.message, "exit_code": f.code}});
            eprintln!("{err}");
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_set_paths() {
        assert_eq!(per_set_path(Path::new("out/r.json"), "K1", false), PathBuf::from("out/r.json"));
        assert_eq!(per_set_path(Path::new("out/r.json"), "K 1", true), PathBuf::from("out/r-K_1.json"));
        assert_eq!(per_set_path(Path::new("fig"), "a", true), PathBuf::from("fig-a"));
    }
}
