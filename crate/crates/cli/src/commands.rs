use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tpn_core::axioms::{run_ids, run_suite, CheckOptions, IdentityId, Instance};
use tpn_core::construct::{build_tower, extend_bracket};
use tpn_core::corpus::{
    hunt_counterexample, make_tensor_trunc, make_truncated_poly, make_zero_bracket_system, random_system, Finding,
};
use tpn_core::{AlgebraSystem, CheckReport, Rational};

use crate::error::CliError;
use crate::report::{render_json, render_text, reports_to_value};
use crate::systemfile::{load_system, render_system, save_system, system_to_value, to_json_text, write_text};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_FINDING: u8 = 3;

/// Identities that make sense for a bracket without a chosen linear map.
pub const BRACKET_SUITE: [IdentityId; 10] = [
    IdentityId::NL,
    IdentityId::TP,
    IdentityId::NP1,
    IdentityId::NP2,
    IdentityId::NP3,
    IdentityId::NP4,
    IdentityId::STRONG,
    IdentityId::SCALE,
    IdentityId::COMM,
    IdentityId::ASSOC,
];

#[derive(Parser, Debug)]
#[command(name = "tpn", version, about = "Exact verification workbench for transposed Poisson n-Lie algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check identities of a bracket (and optionally a derivation) by basis enumeration.
    Check(CheckArgs),
    /// Build the (n+1)-ary bracket from an n-ary bracket and a derivation.
    Extend(ExtendArgs),
    /// Iterate the extension and verify every level.
    Tower(TowerArgs),
    /// Generate a system file from a built-in family.
    Gen(GenArgs),
    /// Search random systems for a failure of the extension without the strong condition.
    Hunt(HuntArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// System file.
    pub file: PathBuf,
    #[arg(long)]
    pub bracket: String,
    #[arg(long)]
    pub derivation: Option<String>,
    /// Comma-separated identity ids, or "all". Without --derivation, "all"
    /// leaves out DER_MUL, DER_BRK, LEM1 and LEM2.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Only enumerate non-decreasing tuples inside skew argument blocks.
    #[arg(long)]
    pub prune: bool,
}

#[derive(Args, Debug)]
pub struct ExtendArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub bracket: String,
    #[arg(long)]
    pub derivation: String,
    /// Output system file; receives the input plus the bracket `<NAME>_ext`.
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
    /// Check the new bracket against every identity that needs no derivation.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub prune: bool,
}

#[derive(Args, Debug)]
pub struct TowerArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub bracket: String,
    /// Derivation for each step, in order. A single name is reused for every step.
    #[arg(long = "derivation", required = true)]
    pub derivations: Vec<String>,
    /// Number of steps; defaults to the number of --derivation flags.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Directory receiving level<k>.json and summary.json.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub prune: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Q[t]/(t^m) with the Euler derivation and its bracket "b1".
    TruncPoly,
    /// Q[s,t]/(s^a, t^b) with gradings "d1", "d2" and bracket "b_d1".
    TensorTrunc,
    /// Q[t]/(t^m) with the zero bracket of the given arity.
    Zero,
    /// Seeded random product, bracket "b" and matrix "d"; no axioms promised.
    Random,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub a: usize,
    #[arg(long, default_value_t = 2)]
    pub b: usize,
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    #[arg(long, default_value_t = 2)]
    pub arity: usize,
    /// Probability that a bracket entry is nonzero, as a rational in [0, 1].
    #[arg(long, default_value = "1/2")]
    pub density: Rational,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HuntArgs {
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    #[arg(long, default_value_t = 3)]
    pub arity: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Where a finding is written.
    #[arg(short = 'o', long = "out", default_value = "finding.json")]
    pub out: PathBuf,
}

/// Runs a parsed command, writing reports to `out`. Input errors come back
/// as `Err` and map to [`EXIT_INPUT`].
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Check(a) => cmd_check(a, out),
        Command::Extend(a) => cmd_extend(a, out),
        Command::Tower(a) => cmd_tower(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Hunt(a) => cmd_hunt(a, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
}

fn options(prune: bool) -> CheckOptions {
    let opts = CheckOptions::default();
    if prune {
        opts.pruned()
    } else {
        opts
    }
}

fn verdict(reports: &[CheckReport]) -> u8 {
    if reports.iter().all(CheckReport::passed) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn render(reports: &[CheckReport], format: Format) -> String {
    match format {
        Format::Text => render_text(reports),
        Format::Json => render_json(reports),
    }
}

pub fn parse_suite(suite: &str, have_derivation: bool) -> Result<Vec<IdentityId>, CliError> {
    if suite.trim().eq_ignore_ascii_case("all") {
        return Ok(if have_derivation { IdentityId::ALL.to_vec() } else { BRACKET_SUITE.to_vec() });
    }
    let ids = suite
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<IdentityId>())
        .collect::<Result<Vec<_>, _>>()?;
    if ids.is_empty() {
        return Err(CliError::Usage("--suite names no identities".into()));
    }
    Ok(ids)
}

fn cmd_check(a: CheckArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let sys = load_system(&a.file)?;
    let ids = parse_suite(&a.suite, a.derivation.is_some())?;
    let reports = run_suite(&sys, &a.bracket, a.derivation.as_deref(), &ids, options(a.prune))?;
    emit(out, &render(&reports, a.format))?;
    Ok(verdict(&reports))
}

fn extended_name(name: &str) -> String {
    format!("{name}_ext")
}

fn cmd_extend(a: ExtendArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let sys = load_system(&a.file)?;
    let ext = extend_bracket(sys.product(), sys.bracket(&a.bracket)?, sys.derivation(&a.derivation)?)?;
    let name = extended_name(&a.bracket);
    let reports = if a.verify {
        run_ids(&Instance::new(sys.product()).with_bracket(&ext), &BRACKET_SUITE, options(a.prune))?
    } else {
        Vec::new()
    };
    let written = sys.with_bracket(name, ext)?;
    save_system(&written, &a.out)?;
    if a.verify {
        emit(out, &render(&reports, a.format))?;
    }
    Ok(verdict(&reports))
}

fn cmd_tower(a: TowerArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let steps = a.steps.unwrap_or(a.derivations.len());
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let names: Vec<String> = match a.derivations.len() {
        1 => vec![a.derivations[0].clone(); steps],
        n if n == steps => a.derivations.clone(),
        n => return Err(CliError::Usage(format!("{n} --derivation flags given for {steps} steps"))),
    };
    let sys = load_system(&a.file)?;
    let levels = build_tower(&sys, &a.bracket, &names, true, options(a.prune))?;
    fs::create_dir_all(&a.out_dir).map_err(|e| CliError::io(&a.out_dir, e))?;

    let mut current = sys;
    let mut bracket_name = a.bracket.clone();
    let mut summary_levels = Vec::with_capacity(levels.len());
    let mut text = String::new();
    for (k, level) in levels.iter().enumerate() {
        bracket_name = extended_name(&bracket_name);
        current = current.with_bracket(bracket_name.clone(), level.bracket.clone())?;
        let file_name = format!("level{}.json", k + 1);
        save_system(&current, &a.out_dir.join(&file_name))?;
        summary_levels.push(json!({
            "level": k + 1,
            "bracket": bracket_name,
            "arity": level.bracket.arity(),
            "derivation": level.derivation,
            "nonzero_entries": level.bracket.entries().len(),
            "file": file_name,
            "status": if level.all_pass() { "pass" } else { "fail" },
            "reports": reports_to_value(&level.reports),
        }));
        text.push_str(&format!(
            "level {}: {} (arity {}, nonzero entries: {}) via {}\n",
            k + 1,
            bracket_name,
            level.bracket.arity(),
            level.bracket.entries().len(),
            level.derivation
        ));
        text.push_str(&render_text(&level.reports));
    }
    let summary = json!({ "seed_bracket": a.bracket, "levels": summary_levels });
    let summary_text = to_json_text(&summary);
    write_text(&a.out_dir.join("summary.json"), &summary_text)?;
    emit(out, if a.format == Format::Json { &summary_text } else { &text })?;
    let all: Vec<CheckReport> = levels.into_iter().flat_map(|l| l.reports).collect();
    Ok(verdict(&all))
}

pub fn generate(a: &GenArgs) -> Result<AlgebraSystem, CliError> {
    let sys = match a.family {
        Family::TruncPoly => make_truncated_poly(a.m)?,
        Family::TensorTrunc => make_tensor_trunc(a.a, a.b)?,
        Family::Zero => make_zero_bracket_system(make_truncated_poly(a.m)?.product(), a.arity)?,
        Family::Random => random_system(a.dim, a.arity, &a.density, a.seed)?,
    };
    Ok(sys)
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let sys = generate(&a)?;
    match &a.out {
        Some(path) => save_system(&sys, path)?,
        None => emit(out, &render_system(&sys))?,
    }
    Ok(EXIT_PASS)
}

pub fn finding_to_value(f: &Finding, seed: u64) -> Value {
    json!({
        "trial": f.trial,
        "seed": seed,
        "system": system_to_value(&f.system),
        "premise_reports": reports_to_value(&f.premise_reports),
        "strong_report": reports_to_value(std::slice::from_ref(&f.strong_report))[0],
        "extension_reports": reports_to_value(&f.extension_reports),
    })
}

fn cmd_hunt(a: HuntArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    match hunt_counterexample(a.dim, a.arity, a.trials, a.seed)? {
        None => {
            emit(out, &format!("no finding in {} trials\n", a.trials))?;
            Ok(EXIT_PASS)
        }
        Some(f) => {
            write_text(&a.out, &to_json_text(&finding_to_value(&f, a.seed)))?;
            emit(out, &format!("finding at trial {} written to {}\n", f.trial, display(&a.out)))?;
            Ok(EXIT_FINDING)
        }
    }
}

fn display(p: &Path) -> String {
    p.display().to_string()
}
