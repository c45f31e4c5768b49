//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification or assertion failure, 2 usage
//! error (bad flags, bad input files), 3 I/O error.

pub mod config;
pub mod manifest;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::{gf2_rank, BitMatrix};
use crate::error::Error;
use crate::experiments::{
    build_ghz_program, ghz_blocks, run_random_ensemble, EnsembleSummary, ExperimentConfig,
};
use crate::model::OperatorProgram;
use crate::oracle::verify_gate_tables;
use crate::region::Region;
use crate::tableau::SuperStabilizerTableau;

use manifest::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Caps the rayon worker count for ensemble runs.
pub const THREADS_ENV: &str = "SUPER_SCRAMBLER_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "super-scrambler",
    version,
    about = "Operator scrambling in super-Clifford circuits via GF(2) super-stabilizers"
)]
struct Cli {
    /// Write a run manifest (config, timestamps, output digests) here.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the T, SWAP and C3 conjugation identities with explicit matrices.
    Verify {
        #[arg(long)]
        json: bool,
    },
    /// Run the deterministic GHZ circuit on N = 3k qubits.
    Ghz(GhzArgs),
    /// Random T/C3 circuit ensemble.
    Random(RandomArgs),
    /// Apply a program file to the all-X operator.
    RunProgram(RunProgramArgs),
    /// Time GF(2) rank on random square matrices.
    RankBench(RankBenchArgs),
}

#[derive(Debug, Args)]
struct GhzArgs {
    #[arg(long)]
    n: usize,
    /// Expand each C3 into nearest-neighbour SWAPs.
    #[arg(long)]
    localized: bool,
    /// Extra regions to report, e.g. `1-4` or `prefix:6` (1-based).
    #[arg(long)]
    cut: Vec<String>,
    #[arg(long)]
    dump_stabilizers: bool,
}

#[derive(Debug, Args)]
struct RandomArgs {
    /// Flat `key = value` config file (or a run manifest).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    reals: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Region for the entropy curve; defaults to the left half chain.
    #[arg(long)]
    cut: Option<String>,
    #[arg(long)]
    sample_every: Option<u64>,
    /// CSV output path; the summary goes to `<stem>.json` and the manifest
    /// to `<stem>.manifest.json` unless `--manifest` is given.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Co-evolve the dense oracle and fail on any disagreement.
    #[arg(long)]
    oracle_check: bool,
    /// Skip the per-sample commutation/independence check.
    #[arg(long)]
    no_invariant_checks: bool,
}

#[derive(Debug, Args)]
struct RunProgramArgs {
    file: PathBuf,
    /// Regions to report (1-based lists like `1-3,5`, `prefix:p`, or
    /// `prefixes` for every prefix cut). Defaults to `prefixes`.
    #[arg(long, num_args = 1..)]
    entropy_cuts: Vec<String>,
    #[arg(long)]
    dump_stabilizers: bool,
}

#[derive(Debug, Args)]
struct RankBenchArgs {
    #[arg(long, default_value_t = 256)]
    size: usize,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug)]
enum Failure {
    Verification(String),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            Error::Verification(_) => Failure::Verification(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Verification(_) => EXIT_VERIFY,
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

type CliResult = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command,
/// writing normal output to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let mut captured = Vec::new();
    let result = dispatch(&cli, &mut captured, err);
    let _ = out.write_all(&captured);
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>, err: &mut dyn Write) -> CliResult {
    match &cli.command {
        Command::Verify { json } => {
            let mut manifest = RunManifest::start(
                "verify",
                BTreeMap::from([("json".to_string(), json.to_string())]),
                None,
            );
            let r = cmd_verify(*json, out);
            finish_stdout_manifest(&mut manifest, cli.manifest.as_deref(), out)?;
            r
        }
        Command::Ghz(args) => {
            let mut cfg = BTreeMap::from([
                ("n".to_string(), args.n.to_string()),
                ("localized".to_string(), args.localized.to_string()),
            ]);
            if !args.cut.is_empty() {
                cfg.insert("cut".into(), args.cut.join(";"));
            }
            let mut manifest = RunManifest::start("ghz", cfg, None);
            cmd_ghz(args, out)?;
            finish_stdout_manifest(&mut manifest, cli.manifest.as_deref(), out)
        }
        Command::Random(args) => cmd_random(args, cli.manifest.as_deref(), out, err),
        Command::RunProgram(args) => {
            let mut manifest = RunManifest::start(
                "run-program",
                BTreeMap::from([("file".to_string(), args.file.display().to_string())]),
                None,
            );
            cmd_run_program(args, out)?;
            finish_stdout_manifest(&mut manifest, cli.manifest.as_deref(), out)
        }
        Command::RankBench(args) => {
            let mut manifest = RunManifest::start(
                "rank-bench",
                BTreeMap::from([
                    ("size".to_string(), args.size.to_string()),
                    ("iters".to_string(), args.iters.to_string()),
                ]),
                Some(args.seed),
            );
            cmd_rank_bench(args, out)?;
            finish_stdout_manifest(&mut manifest, cli.manifest.as_deref(), out)
        }
    }
}

fn finish_stdout_manifest(
    manifest: &mut RunManifest,
    path: Option<&Path>,
    stdout: &[u8],
) -> CliResult {
    if let Some(path) = path {
        manifest.add_bytes("<stdout>", stdout);
        manifest.clone().finish_and_write(path)?;
    }
    Ok(())
}

fn cmd_verify(json: bool, out: &mut Vec<u8>) -> CliResult {
    let start = Instant::now();
    let report = verify_gate_tables();
    let elapsed = start.elapsed();
    if json {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        writeln!(out, "{text}")?;
    } else {
        for id in &report.identities {
            writeln!(
                out,
                "{}  {:<34} max deviation {:.3e}",
                if id.passed { "PASS" } else { "FAIL" },
                id.name,
                id.max_deviation
            )?;
        }
        writeln!(
            out,
            "{}  C3 maps X/Y strings to signed X/Y strings",
            if report.c3_preserves_xy_subspace { "PASS" } else { "FAIL" }
        )?;
        writeln!(
            out,
            "note: C3 built as the product CX21*CX31*CZ12*T1^6*T2^6 (rightmost factor first); \
             reversed factor order {} the same table",
            if report.other_reading_passes { "gives" } else { "does not give" }
        )?;
        let passed = report.identities.iter().filter(|c| c.passed).count();
        writeln!(
            out,
            "{passed}/{} identities passed in {:.1} ms",
            report.identities.len(),
            elapsed.as_secs_f64() * 1e3
        )?;
    }
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|f| f.name.as_str()).collect();
        Err(Failure::Verification(format!(
            "gate identities violated: {}",
            if names.is_empty() { "X/Y subspace closure".to_string() } else { names.join("; ") }
        )))
    }
}

fn cmd_ghz(args: &GhzArgs, out: &mut Vec<u8>) -> CliResult {
    let n = args.n;
    let program = build_ghz_program(n, args.localized)?;
    let mut tableau = SuperStabilizerTableau::new_all_x(n)?;
    tableau.apply_program(&program)?;
    tableau
        .check_invariants()
        .map_err(|e| Failure::Verification(e.to_string()))?;
    writeln!(out, "n_qubits {n}")?;
    writeln!(out, "gate_count {}", program.len())?;
    let mut regions: Vec<(String, Region)> = ghz_blocks(n)
        .into_iter()
        .enumerate()
        .map(|(b, sites)| Ok((format!("block{}", b + 1), Region::new(n, sites)?)))
        .collect::<Result<_, Error>>()?;
    for spec in &args.cut {
        regions.push((spec.clone(), Region::parse(n, spec)?));
    }
    for (name, region) in &regions {
        writeln!(out, "entropy {name} {{{region}}} {}", tableau.entropy(region)?)?;
    }
    if args.dump_stabilizers {
        write!(out, "{}", tableau.dump_stabilizers())?;
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn resolve_random_config(args: &RandomArgs) -> Result<(ExperimentConfig, BTreeMap<String, String>), Failure> {
    let file = match &args.config {
        Some(path) => config::parse_config(&read_text(path)?)?,
        None => BTreeMap::new(),
    };
    let n: usize = match args.n {
        Some(v) => v,
        None => config::get_parsed(&file, "n")?
            .ok_or_else(|| Failure::Usage("--n is required (flag or config file)".into()))?,
    };
    let steps = args.steps.or(config::get_parsed(&file, "steps")?).unwrap_or(1000);
    let reals = args.reals.or(config::get_parsed(&file, "reals")?).unwrap_or(50);
    let seed = args.seed.or(config::get_parsed(&file, "seed")?).unwrap_or(0);
    let sample_every = args
        .sample_every
        .or(config::get_parsed(&file, "sample-every")?)
        .unwrap_or(1);
    let oracle_check = args.oracle_check || config::get_parsed(&file, "oracle-check")?.unwrap_or(false);
    let cut_spec = args.cut.clone().or_else(|| file.get("cut").cloned());
    let out_path = args
        .out
        .clone()
        .or_else(|| file.get("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(format!("random-n{n}-seed{seed}.csv")));

    let mut cfg = ExperimentConfig::new(n.max(1), steps, reals, seed);
    cfg.n_qubits = n;
    cfg.cut = match &cut_spec {
        Some(spec) => Region::parse(n, spec)?,
        None => Region::half_chain(n),
    };
    cfg.sample_every = sample_every;
    cfg.output = Some(out_path.clone());
    cfg.oracle_check = oracle_check;
    cfg.check_invariants = !args.no_invariant_checks;
    cfg.threads = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().ok().filter(|&t| t > 0).ok_or_else(|| {
            Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))
        })?),
        Err(_) => None,
    };
    cfg.validate()?;

    let echo = BTreeMap::from([
        ("n".to_string(), n.to_string()),
        ("steps".to_string(), steps.to_string()),
        ("reals".to_string(), reals.to_string()),
        ("seed".to_string(), seed.to_string()),
        ("cut".to_string(), cfg.cut.to_string()),
        ("sample-every".to_string(), sample_every.to_string()),
        ("out".to_string(), out_path.display().to_string()),
        ("oracle-check".to_string(), oracle_check.to_string()),
    ]);
    Ok((cfg, echo))
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn cmd_random(
    args: &RandomArgs,
    manifest_path: Option<&Path>,
    out: &mut Vec<u8>,
    err: &mut dyn Write,
) -> CliResult {
    let (cfg, echo) = resolve_random_config(args)?;
    let mut manifest = RunManifest::start("random", echo, Some(cfg.rng_seed));
    let csv_path = cfg.output.clone().expect("output path resolved");
    let _ = writeln!(
        err,
        "random: n={} steps={} realizations={} seed={}",
        cfg.n_qubits, cfg.time_steps, cfg.realizations, cfg.rng_seed
    );
    let series = run_random_ensemble(&cfg)?;
    let summary = EnsembleSummary::compute(&cfg, &series);
    let json_path = sidecar(&csv_path, ".json");
    std::fs::write(&json_path, summary.to_json())?;
    manifest.add_file(&csv_path)?;
    manifest.add_file(&json_path)?;

    let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.6}"));
    writeln!(out, "csv {}", csv_path.display())?;
    writeln!(out, "summary {}", json_path.display())?;
    writeln!(out, "plateau {}", fmt(summary.plateau))?;
    writeln!(out, "growth_rate {}", fmt(summary.growth_rate))?;
    writeln!(
        out,
        "saturation_step {}",
        summary.saturation_step.map_or("n/a".to_string(), |s| s.to_string())
    )?;
    writeln!(out, "page_value {}", fmt(summary.page_value))?;
    for note in &summary.notes {
        writeln!(out, "note {note}")?;
    }
    if cfg.oracle_check {
        writeln!(out, "oracle_check passed")?;
    }
    let manifest_path = manifest_path
        .map(Path::to_path_buf)
        .unwrap_or_else(|| sidecar(&csv_path, ".manifest.json"));
    manifest.finish_and_write(&manifest_path)?;
    Ok(())
}

fn cmd_run_program(args: &RunProgramArgs, out: &mut Vec<u8>) -> CliResult {
    let text = read_text(&args.file)?;
    let program = OperatorProgram::parse(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.file.display())))?;
    let n = program.n_qubits();
    let mut tableau = SuperStabilizerTableau::new_all_x(n)?;
    tableau.apply_program(&program)?;
    tableau
        .check_invariants()
        .map_err(|e| Failure::Verification(e.to_string()))?;

    let specs: Vec<String> = if args.entropy_cuts.is_empty() && !args.dump_stabilizers {
        vec!["prefixes".into()]
    } else {
        args.entropy_cuts.clone()
    };
    let mut regions = Vec::new();
    for spec in &specs {
        if spec == "prefixes" {
            regions.extend((1..n).map(|p| Region::prefix(n, p).expect("in range")));
        } else {
            regions.push(Region::parse(n, spec)?);
        }
    }
    for region in &regions {
        writeln!(out, "entropy {{{region}}} {}", tableau.entropy(region)?)?;
    }
    if args.dump_stabilizers {
        write!(out, "{}", tableau.dump_stabilizers())?;
    }
    Ok(())
}

fn cmd_rank_bench(args: &RankBenchArgs, out: &mut Vec<u8>) -> CliResult {
    if args.size == 0 || args.iters == 0 {
        return Err(Failure::Usage("--size and --iters must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let matrices: Vec<BitMatrix> = (0..args.iters)
        .map(|_| {
            let mut m = BitMatrix::zeros(args.size, args.size);
            for r in 0..args.size {
                for c in 0..args.size {
                    m.set(r, c, rng.gen_bool(0.5));
                }
            }
            m
        })
        .collect();
    let start = Instant::now();
    let total_rank: usize = matrices.iter().map(gf2_rank).sum();
    let elapsed = start.elapsed().as_secs_f64();
    writeln!(out, "size {}", args.size)?;
    writeln!(out, "iters {}", args.iters)?;
    writeln!(out, "mean_rank {:.3}", total_rank as f64 / args.iters as f64)?;
    writeln!(out, "seconds_per_rank {:.3e}", elapsed / args.iters as f64)?;
    Ok(())
}
