//! `flow` command line: generate a synthetic work-life/wellbeing dataset or
//! validate one.
//!
//! Seed precedence: `--seed` flag > `FLOW_SEED` environment variable >
//! config file > built-in default. Progress goes to stderr; the
//! machine-readable summary (the manifest for `generate`, the report path
//! and verdict for `validate`) goes to stdout. Exit codes: 0 success/pass,
//! 1 runtime or validation failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use flow_core::calendar::Date;
use flow_core::config::{self, GeneratorConfig};
use flow_core::export::generate_dataset;
use flow_core::schema;
use flow_core::validate::{validate_dataset, CheckStatus, Thresholds};

#[derive(Parser)]
#[command(
    name = "flow",
    version,
    about = "Deterministic generator and validator for a synthetic daily work-life/wellbeing dataset"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the five-table CSV dataset plus manifest.
    Generate(GenerateArgs),
    /// Run the sanity-check suite against a dataset directory.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Config file (flat dotted-key JSON); unspecified keys take defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Random seed (overrides FLOW_SEED and the config file).
    #[arg(long)]
    seed: Option<u64>,

    /// Population size.
    #[arg(long)]
    users: Option<u32>,

    /// First simulated day (YYYY-MM-DD).
    #[arg(long)]
    start: Option<Date>,

    /// Last simulated day, inclusive (YYYY-MM-DD).
    #[arg(long)]
    end: Option<Date>,

    /// Output directory.
    #[arg(long)]
    out: PathBuf,

    /// Worker threads (0 = all cores). Never changes output bytes.
    #[arg(long, default_value_t = 0)]
    threads: usize,

    /// Skip the denormalized daily_all.csv table.
    #[arg(long)]
    no_denormalized: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// Dataset directory containing the five CSV tables.
    #[arg(long)]
    dir: PathBuf,

    /// Where to write the JSON report (default: <dir>/validation_report.json).
    #[arg(long)]
    report: Option<PathBuf>,

    /// Pooled corr(work_hours, stress) must exceed this.
    #[arg(long, default_value_t = Thresholds::default().corr_work_hours_stress_min)]
    min_corr_work_stress: f64,

    /// Pooled corr(stress, sleep_hours) must be below this.
    #[arg(long, default_value_t = Thresholds::default().corr_stress_sleep_max)]
    max_corr_stress_sleep: f64,

    /// Pooled corr(stress, mood) must be below this.
    #[arg(long, default_value_t = Thresholds::default().corr_stress_mood_max)]
    max_corr_stress_mood: f64,

    /// Pooled corr(exercise_minutes, mood) must exceed this.
    #[arg(long, default_value_t = Thresholds::default().corr_exercise_mood_min)]
    min_corr_exercise_mood: f64,

    /// Lower bound for mean nightly sleep.
    #[arg(long, default_value_t = Thresholds::default().sleep_mean_min)]
    sleep_mean_min: f64,

    /// Upper bound for mean nightly sleep.
    #[arg(long, default_value_t = Thresholds::default().sleep_mean_max)]
    sleep_mean_max: f64,

    /// Largest allowed daily |weight change| in kg.
    #[arg(long, default_value_t = Thresholds::default().max_weight_step)]
    max_weight_step: f64,

    /// Median per-user lag-1 stress autocorrelation must exceed this.
    #[arg(long, default_value_t = Thresholds::default().stress_autocorr_min)]
    min_stress_autocorr: f64,

    /// Across-user sd of mean stress must exceed this.
    #[arg(long, default_value_t = Thresholds::default().heterogeneity_sd_min)]
    min_heterogeneity_sd: f64,

    /// Minimum fraction of vacation days above the user's own mean stress.
    #[arg(long, default_value_t = Thresholds::default().vacation_attenuation_min)]
    min_vacation_attenuation: f64,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Generate(args) => run_generate(args),
        Command::Validate(args) => run_validate(args),
    }
}

fn resolve_config(args: &GenerateArgs) -> Result<GeneratorConfig, String> {
    let mut cfg = match &args.config {
        Some(path) => config::load_config(path).map_err(|e| e.to_string())?,
        None => config::default_config(),
    };
    if let Ok(value) = std::env::var("FLOW_SEED") {
        cfg.seed = value
            .trim()
            .parse()
            .map_err(|_| format!("FLOW_SEED must be an unsigned integer, got {value:?}"))?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(users) = args.users {
        cfg.population_size = users;
    }
    if let Some(start) = args.start {
        cfg.start_date = start;
    }
    if let Some(end) = args.end {
        cfg.end_date = end;
    }
    if args.no_denormalized {
        cfg.emit_denormalized = false;
    }
    let violations = config::validate_config(&cfg);
    if violations.is_empty() {
        Ok(cfg)
    } else {
        Err(violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; "))
    }
}

fn run_generate(args: GenerateArgs) -> ExitCode {
    let cfg = match resolve_config(&args) {
        Ok(cfg) => cfg,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(1);
        }
    };
    eprintln!(
        "generating {} users x {} days (seed {}) into {}",
        cfg.population_size,
        cfg.total_days(),
        cfg.seed,
        args.out.display()
    );
    let started = Instant::now();
    let counts = match generate_dataset(&cfg, &args.out, args.threads) {
        Ok(counts) => counts,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let elapsed = started.elapsed();
    eprintln!(
        "wrote {} users, {} daily rows, {} weekly rows, {} interventions, {} wide rows in {:.2} s",
        counts.users,
        counts.daily_logs,
        counts.weekly_summaries,
        counts.interventions,
        counts.daily_all,
        elapsed.as_secs_f64()
    );
    // The manifest is the machine-parseable summary.
    match std::fs::read_to_string(args.out.join(schema::MANIFEST_FILE)) {
        Ok(manifest) => print!("{manifest}"),
        Err(e) => {
            eprintln!("error: cannot read manifest: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}

fn run_validate(args: ValidateArgs) -> ExitCode {
    let thresholds = Thresholds {
        corr_work_hours_stress_min: args.min_corr_work_stress,
        corr_stress_sleep_max: args.max_corr_stress_sleep,
        corr_stress_mood_max: args.max_corr_stress_mood,
        corr_exercise_mood_min: args.min_corr_exercise_mood,
        sleep_mean_min: args.sleep_mean_min,
        sleep_mean_max: args.sleep_mean_max,
        max_weight_step: args.max_weight_step,
        stress_autocorr_min: args.min_stress_autocorr,
        heterogeneity_sd_min: args.min_heterogeneity_sd,
        vacation_attenuation_min: args.min_vacation_attenuation,
    };
    let report = match validate_dataset(&args.dir, &thresholds) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for check in &report.checks {
        let status = match check.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skip => "SKIP",
        };
        let observed = check
            .observed
            .map(|o| format!(" observed={o:.4}"))
            .unwrap_or_default();
        println!(
            "{status} {name}{observed} [{threshold}] {detail}",
            name = check.name,
            threshold = check.threshold,
            detail = check.detail
        );
    }
    let report_path = args
        .report
        .unwrap_or_else(|| args.dir.join("validation_report.json"));
    if let Err(e) = report.write_json(&report_path) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    println!(
        "OVERALL {} ({} rows across tables) -> {}",
        if report.overall_pass { "PASS" } else { "FAIL" },
        report.row_counts.daily_logs
            + report.row_counts.users
            + report.row_counts.weekly_summaries
            + report.row_counts.interventions
            + report.row_counts.daily_all,
        report_path.display()
    );
    if report.overall_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
