//! Generator -> validator round trips and discrimination against injected
//! corruptions.

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use flow_core::config::{default_config, GeneratorConfig};
use flow_core::export::generate_dataset;
use flow_core::validate::{validate_dataset, CheckStatus, Thresholds, ValidationReport};

fn fixture_config() -> GeneratorConfig {
    let mut cfg = default_config();
    cfg.population_size = 30;
    cfg
}

/// One shared 30-user default-span dataset; corruption tests copy it.
fn fixture() -> &'static Path {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap().keep();
        generate_dataset(&fixture_config(), &dir, 0).unwrap();
        dir
    })
}

fn copy_fixture() -> tempfile::TempDir {
    let dst = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(fixture()).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dst.path().join(entry.file_name())).unwrap();
    }
    dst
}

fn validate(dir: &Path) -> ValidationReport {
    validate_dataset(dir, &Thresholds::default()).unwrap()
}

fn check<'r>(report: &'r ValidationReport, name: &str) -> &'r flow_core::validate::CheckResult {
    report
        .checks
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("missing check {name}"))
}

/// Rewrite one cell in a CSV file (0-based data row, named column).
fn edit_cell(dir: &Path, file: &str, row: usize, column: &str, value: &str) {
    let path = dir.join(file);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    let col = header.iter().position(|c| *c == column).unwrap();
    let mut fields: Vec<String> = lines[row + 1].split(',').map(str::to_string).collect();
    fields[col] = value.to_string();
    lines[row + 1] = fields.join(",");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
}

fn map_column(dir: &Path, file: &str, column: &str, mut f: impl FnMut(usize, &str) -> String) {
    let path = dir.join(file);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    let col = header.iter().position(|c| *c == column).unwrap();
    for (i, line) in lines.iter_mut().enumerate().skip(1) {
        let mut fields: Vec<String> = line.split(',').map(str::to_string).collect();
        fields[col] = f(i - 1, &fields[col]);
        *line = fields.join(",");
    }
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
}

#[test]
fn fresh_output_passes_every_check() {
    let report = validate(fixture());
    for c in &report.checks {
        assert_ne!(
            c.status,
            CheckStatus::Fail,
            "{} failed: {}",
            c.name,
            c.detail
        );
    }
    assert!(report.overall_pass);
    assert_eq!(report.row_counts.daily_logs, 30 * 731);
    assert_eq!(report.row_counts.daily_all, 30 * 731);
    assert_eq!(report.row_counts.weekly_summaries, 30 * 105);
}

#[test]
fn out_of_range_cell_fails_ranges_naming_the_row() {
    let dir = copy_fixture();
    edit_cell(dir.path(), "daily_logs.csv", 4, "stress_level", "12.00");
    let report = validate(dir.path());
    let c = check(&report, "ranges.bounds");
    assert_eq!(c.status, CheckStatus::Fail);
    assert!(c.detail.contains("line 6"), "detail: {}", c.detail);
    assert!(c.detail.contains("stress_level"));
    assert!(!report.overall_pass);
}

#[test]
fn shuffled_stress_column_breaks_directional_checks() {
    let dir = copy_fixture();
    // Deterministic shuffle: reverse the column across all rows.
    let path = dir.path().join("daily_logs.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let col = lines[0].split(',').position(|c| c == "stress_level").unwrap();
    let mut values: Vec<String> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(col).unwrap().to_string())
        .collect();
    values.reverse();
    drop(lines);
    let mut i = 0;
    map_column(dir.path(), "daily_logs.csv", "stress_level", |_, _| {
        let v = values[i].clone();
        i += 1;
        v
    });
    let report = validate(dir.path());
    assert_eq!(check(&report, "directional.stress_sleep").status, CheckStatus::Fail);
    assert_eq!(check(&report, "directional.stress_mood").status, CheckStatus::Fail);
    assert!(!report.overall_pass);
}

#[test]
fn white_noise_weight_column_breaks_smoothness() {
    let dir = copy_fixture();
    let mut x = 0x2545_F491_4F6C_DD1Du64;
    map_column(dir.path(), "daily_logs.csv", "weight_kg", |_, _| {
        // xorshift noise in [60, 100): plausible values, implausible jumps.
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        format!("{:.3}", 60.0 + (x % 40_000) as f64 / 1000.0)
    });
    let report = validate(dir.path());
    assert_eq!(check(&report, "temporal.weight_step").status, CheckStatus::Fail);
    assert!(!report.overall_pass);
}

#[test]
fn perturbed_weekly_aggregate_fails_recompute_naming_user_and_week() {
    let dir = copy_fixture();
    // Row 7 of weekly_summaries.csv is user 1, week 7.
    edit_cell(dir.path(), "weekly_summaries.csv", 7, "avg_stress", "9.99");
    let report = validate(dir.path());
    let c = check(&report, "consistency.weekly_recompute");
    assert_eq!(c.status, CheckStatus::Fail);
    assert!(c.detail.contains("user 1 week 7"), "detail: {}", c.detail);
    assert!(c.detail.contains("avg_stress"));
    assert!(!report.overall_pass);
}

#[test]
fn deleted_daily_all_row_fails_reconciliation() {
    let dir = copy_fixture();
    let path = dir.path().join("daily_all.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.remove(100);
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let report = validate(dir.path());
    let join = check(&report, "consistency.daily_all_join");
    let counts = check(&report, "consistency.row_counts");
    assert!(
        join.status == CheckStatus::Fail || counts.status == CheckStatus::Fail,
        "neither join nor row counts failed"
    );
    assert!(!report.overall_pass);
}

#[test]
fn constant_column_fails_variance_check() {
    let dir = copy_fixture();
    map_column(dir.path(), "daily_logs.csv", "mood", |_, _| "5.00".into());
    let report = validate(dir.path());
    let c = check(&report, "ranges.nonzero_variance");
    assert_eq!(c.status, CheckStatus::Fail);
    assert!(c.detail.contains("mood"));
}

#[test]
fn foreign_daily_value_in_wide_table_fails_join() {
    let dir = copy_fixture();
    edit_cell(dir.path(), "daily_all.csv", 42, "mood", "1.23");
    let report = validate(dir.path());
    assert_eq!(check(&report, "consistency.daily_all_join").status, CheckStatus::Fail);
}

#[test]
fn dataset_without_interventions_skips_those_checks() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = fixture_config();
    cfg.population_size = 10;
    cfg.intervention_params.vacation.annual_rate = 0.0;
    cfg.intervention_params.sick_leave.annual_rate = 0.0;
    cfg.intervention_params.workload_cap.annual_rate = 0.0;
    cfg.intervention_params.lifestyle_program.annual_rate = 0.0;
    generate_dataset(&cfg, dir.path(), 0).unwrap();
    let report = validate(dir.path());
    assert_eq!(check(&report, "interventions.vacation_relief").status, CheckStatus::Skip);
    assert_eq!(check(&report, "interventions.attenuation").status, CheckStatus::Skip);
    assert!(report.overall_pass, "skips must not fail the run");
}

#[test]
fn missing_table_is_a_hard_error_naming_the_file() {
    let dir = copy_fixture();
    std::fs::remove_file(dir.path().join("weekly_summaries.csv")).unwrap();
    let err = validate_dataset(dir.path(), &Thresholds::default()).unwrap_err();
    assert!(err.to_string().contains("weekly_summaries.csv"), "{err}");
}

#[test]
fn unparseable_cell_is_a_hard_error_with_location() {
    let dir = copy_fixture();
    edit_cell(dir.path(), "daily_logs.csv", 2, "sleep_hours", "seven");
    let err = validate_dataset(dir.path(), &Thresholds::default()).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("daily_logs.csv"), "{msg}");
    assert!(msg.contains(":4:"), "should carry the line number: {msg}");
    assert!(msg.contains("sleep_hours"));
}

#[test]
fn report_serializes_with_statuses() {
    let report = validate(fixture());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("validation_report.json");
    report.write_json(&path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["overall_pass"], serde_json::Value::Bool(true));
    assert!(parsed["checks"].as_array().unwrap().len() >= 15);
    assert_eq!(parsed["checks"][0]["status"], "pass");
    assert_eq!(parsed["row_counts"]["daily_logs"], 30 * 731);
}

#[test]
fn single_user_dataset_is_still_evaluable() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = fixture_config();
    cfg.population_size = 1;
    generate_dataset(&cfg, dir.path(), 0).unwrap();
    let report = validate(dir.path());
    // Per-user temporal statistics remain defined for a single user.
    assert_eq!(check(&report, "temporal.weight_step").status, CheckStatus::Pass);
    assert_eq!(check(&report, "temporal.stress_autocorr").status, CheckStatus::Pass);
    assert_eq!(check(&report, "consistency.weekly_recompute").status, CheckStatus::Pass);
    assert_eq!(check(&report, "consistency.weight_conservation").status, CheckStatus::Pass);
}
