//! `jointpir` subcommands. Machine-readable output goes to `--out` or
//! stdout; human-readable summaries go to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::codes::{BuildSpec, Family, JointCode, SearchConfig};
use crate::gf::{prime_power_parts, Elem, Field};
use crate::pir::Scheme;
use crate::verification::{
    barrier_report, barrier_sweep, check_correctness, check_privacy, random_messages, seeded_rng, SweepConfig,
};

use super::files::{CodeFile, ReportFile, ReportKind};
use super::tables::{compare_golden, paper_tables, render_document};
use super::{sweep_csv, sweep_markdown};

/// Exit status when a requested check fails.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Exit status for invalid input or construction errors.
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "jointpir", version, about = "Joint MDS coded PIR: build, verify, retrieve, sweep")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code and write it as a CodeFile.
    Build(BuildArgs),
    /// Run MDS, privacy, correctness and barrier checks on a CodeFile.
    Verify(VerifyArgs),
    /// Simulate one retrieval.
    Retrieve(RetrieveArgs),
    /// Regenerate the example tables, optionally checking golden files.
    PaperTables(TablesArgs),
    /// Build and verify a family over a range of sizes.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SeedArg {
    #[arg(long, env = "JOINTPIR_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub family: Family,
    /// N for joint-2n2, N0 for expanded-2n2.
    #[arg(long)]
    pub n: Option<usize>,
    /// K for the parity families.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub m_factor: usize,
    /// Field as `p^m` or a prime power `q`.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub offset: i64,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Samples per field size in the expanded-2n2 search.
    #[arg(long, default_value_t = 1000)]
    pub max_attempts: u64,
    #[arg(long, default_value_t = SearchConfig::DEFAULT_MAX_FIELD)]
    pub max_field: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Mds,
    Privacy,
    Correctness,
    Barrier,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_enum, default_value_t = Check::All)]
    pub check: Check,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RetrieveArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub k_star: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Fix the key instead of drawing it from the seed.
    #[arg(long)]
    pub f: Option<u32>,
    /// JSON array of K messages, each a list of L canonical integers.
    #[arg(long)]
    pub messages: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Directory of `<table id>.md` golden files.
    #[arg(long)]
    pub golden: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Markdown,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub family: Family,
    /// Inclusive range `A..B`, or a single size.
    #[arg(long)]
    pub range: String,
    #[arg(long, default_value_t = 1)]
    pub m_factor: usize,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, default_value_t = 1000)]
    pub max_attempts: u64,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_field(text: &str) -> anyhow::Result<Field> {
    let (p, m) = match text.split_once('^') {
        Some((p, m)) => (p.trim().parse()?, m.trim().parse()?),
        None => {
            let q: u64 = text.trim().parse()?;
            prime_power_parts(q).ok_or_else(|| anyhow!("{q} is not a prime power"))?
        }
    };
    Ok(Field::new(p, m)?)
}

/// `A..B` (inclusive) or `A`; `B < A` yields an empty range.
pub fn parse_range(text: &str) -> anyhow::Result<Vec<usize>> {
    match text.split_once("..") {
        Some((a, b)) => {
            let a: usize = a.trim().parse().with_context(|| format!("bad range start in `{text}`"))?;
            let b: usize = b
                .trim()
                .trim_start_matches('=')
                .parse()
                .with_context(|| format!("bad range end in `{text}`"))?;
            Ok((a..=b).collect())
        }
        None => Ok(vec![text.trim().parse().with_context(|| format!("bad size `{text}`"))?]),
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

pub fn load_code(path: &Path) -> anyhow::Result<JointCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(CodeFile::from_json(&text)?.to_code()?)
}

fn cmd_build(a: &BuildArgs) -> anyhow::Result<bool> {
    let size = match a.family {
        Family::Joint2n2 | Family::Expanded2n2 => a.n.ok_or_else(|| anyhow!("--n is required for {}", a.family))?,
        Family::JointParity | Family::ExpandedParity => {
            a.k.ok_or_else(|| anyhow!("--k is required for {}", a.family))?
        }
        Family::Custom => bail!("custom codes cannot be built from flags"),
    };
    let spec = BuildSpec {
        family: a.family,
        size,
        m_factor: a.m_factor,
        field: a.field.as_deref().map(parse_field).transpose()?,
        offset: a.offset,
        search: SearchConfig {
            seed: a.seed.seed,
            max_attempts: a.max_attempts,
            max_field: a.max_field,
        },
    };
    let (code, stats) = spec.build()?;
    let mds = code.verify_mds();
    let p = code.params();
    eprintln!(
        "built {} (K,N,T)=({},{},{}) over {}",
        p.family,
        p.messages,
        p.databases,
        p.threshold,
        code.field()
    );
    if let Some(s) = &stats {
        eprintln!("search: {} attempts, per field {:?}", s.attempts, s.per_field);
    }
    eprintln!("mds: {} of {} subsets full rank", mds.checked - mds.failing_subsets.len(), mds.checked);
    emit(a.out.as_deref(), &CodeFile::from_code(&code).to_json())?;
    Ok(mds.ok)
}

fn cmd_verify(a: &VerifyArgs) -> anyhow::Result<bool> {
    let code = load_code(&a.code)?;
    let wants = |c: Check| a.check == c || a.check == Check::All;
    let mut reports = Vec::new();
    let mut ok = true;
    if wants(Check::Mds) {
        let r = code.verify_mds();
        eprintln!(
            "mds: {} ({} subsets, failing {:?})",
            if r.ok { "pass" } else { "fail" },
            r.checked,
            r.failing_subsets
        );
        ok &= r.ok;
        reports.push(ReportFile::new(ReportKind::Mds, &r));
    }
    if wants(Check::Privacy) || wants(Check::Correctness) || wants(Check::Barrier) {
        let scheme = match Scheme::new(code) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("scheme: {e}");
                emit(a.out.as_deref(), &to_json(&reports))?;
                return Ok(false);
            }
        };
        if wants(Check::Privacy) {
            let r = check_privacy(&scheme);
            eprintln!("privacy: {}", if r.ok { "pass" } else { "fail" });
            ok &= r.ok;
            reports.push(ReportFile::new(ReportKind::Privacy, &r));
        }
        if wants(Check::Correctness) {
            let r = check_correctness(&scheme, a.trials, &mut seeded_rng(a.seed.seed))?;
            eprintln!("correctness: {} ({} pairs x {} trials)", if r.ok { "pass" } else { "fail" }, r.pairs, r.trials);
            ok &= r.ok;
            reports.push(ReportFile::new(ReportKind::Correctness, &r));
        }
        if wants(Check::Barrier) {
            let r = barrier_report(&scheme)?;
            eprintln!("barrier: rate {} vs {} (margin {})", r.rate, r.c_perp, r.margin);
            ok &= r.broken;
            reports.push(ReportFile::new(ReportKind::Barrier, &r));
        }
    }
    emit(a.out.as_deref(), &to_json(&reports))?;
    Ok(ok)
}

fn read_messages(path: &Path, code: &JointCode) -> anyhow::Result<Vec<Vec<Elem>>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let raw: Vec<Vec<u64>> = serde_json::from_str(&text).context("messages must be a JSON array of integer arrays")?;
    let field = code.field();
    Ok(raw
        .iter()
        .map(|m| m.iter().map(|&v| field.elem(v)).collect::<crate::Result<Vec<_>>>())
        .collect::<crate::Result<Vec<_>>>()?)
}

fn cmd_retrieve(a: &RetrieveArgs) -> anyhow::Result<bool> {
    let code = load_code(&a.code)?;
    let mut rng = seeded_rng(a.seed.seed);
    let messages = match &a.messages {
        Some(path) => read_messages(path, &code)?,
        None => random_messages(&code, &mut rng),
    };
    let scheme = Scheme::new(code)?;
    let t = match a.f {
        Some(f) => scheme.run(&messages, a.k_star, f)?,
        None => scheme.simulate_retrieval(&messages, a.k_star, &mut rng)?,
    };
    let values = |v: &[Elem]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ");
    eprintln!("k* = {}, f = {}", t.k_star, t.f);
    for (db, (q, ans)) in t.queries.iter().zip(&t.answers).enumerate() {
        eprintln!("  db {db}: index {q} -> {ans}");
    }
    eprintln!("reconstructed: {}", values(&t.reconstructed));
    let ok = t.reconstructed == messages[a.k_star - 1];
    if !ok {
        eprintln!("expected:      {}", values(&messages[a.k_star - 1]));
    }
    emit(a.out.as_deref(), &to_json(&ReportFile::new(ReportKind::Transcript, &t)))?;
    Ok(ok)
}

fn cmd_paper_tables(a: &TablesArgs) -> anyhow::Result<bool> {
    let tables = paper_tables()?;
    emit(a.out.as_deref(), &render_document(&tables))?;
    let Some(dir) = &a.golden else {
        return Ok(true);
    };
    let mut ok = true;
    for r in compare_golden(&tables, dir) {
        eprintln!("{}: {:?}", r.id, r.status);
        ok &= r.passed();
    }
    Ok(ok)
}

fn cmd_sweep(a: &SweepArgs) -> anyhow::Result<bool> {
    let cfg = SweepConfig {
        m_factor: a.m_factor,
        trials: a.trials,
        seed: a.seed.seed,
        max_attempts: a.max_attempts,
    };
    let rows = barrier_sweep(a.family, parse_range(&a.range)?, &cfg)?;
    let text = match a.format {
        Format::Markdown => sweep_markdown(&rows),
        Format::Csv => sweep_csv(&rows),
        Format::Json => to_json(&ReportFile::new(ReportKind::Sweep, &rows)),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(rows.iter().all(|r| r.ok))
}

/// Runs one command; `Ok(false)` means a requested check failed.
pub fn run(cli: &Cli) -> anyhow::Result<bool> {
    match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Retrieve(a) => cmd_retrieve(a),
        Command::PaperTables(a) => cmd_paper_tables(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}
