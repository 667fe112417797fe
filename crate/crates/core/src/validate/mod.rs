//! Sanity-check suite for any dataset directory in the release format.
//!
//! The validator reads only the CSV contract, so it can assess third-party
//! data. Checks cover plausible ranges and non-degenerate variance,
//! directional relationships, temporal smoothness and volatility tiers,
//! cross-user heterogeneity, attenuated intervention effects, and exact
//! consistency between tables (weekly aggregates recompute from daily logs,
//! the weight trajectory replays from the energy columns, and the wide table
//! equals the join of its sources).
//!
//! Structural accumulation is streaming — daily logs are folded one user
//! group at a time and the wide table is compared in lockstep with the daily
//! table — so the default 731k-row release validates in bounded memory.
//! Range, smoothness, and consistency checks hold for any valid config;
//! the directional and distribution checks are tuned to the
//! default-parameter neighborhood.

mod reader;
mod stats;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Serialize;

use crate::aggregate::summarize_user;
use crate::calendar::Date;
use crate::dynamics::{replay_weight, DailyRecord, MAX_DAILY_WEIGHT_DELTA};
use crate::export::{daily_row, weekly_row, RowCounts};
use crate::interventions::{InterventionEvent, InterventionType};
use crate::schema;

pub use reader::ValidateError;
use reader::{DailyReader, UserRow, WeeklyRow};
use stats::{lag1_autocorr, median, CoMoments, ColumnMoments};

/// Absolute slack for comparisons between parsed fixed-decimal values.
const EPS: f64 = 1e-9;
/// Weight-conservation tolerance in kg.
const CONSERVATION_TOL: f64 = 1e-6;
/// How many example rows a failing check names.
const MAX_DETAILS: usize = 3;

/// Overridable check thresholds; defaults are the declared tolerances.
#[derive(Debug, Clone)]
pub struct Thresholds {
    pub corr_work_hours_stress_min: f64,
    pub corr_stress_sleep_max: f64,
    pub corr_stress_mood_max: f64,
    pub corr_exercise_mood_min: f64,
    pub sleep_mean_min: f64,
    pub sleep_mean_max: f64,
    pub max_weight_step: f64,
    pub stress_autocorr_min: f64,
    pub heterogeneity_sd_min: f64,
    pub vacation_attenuation_min: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            corr_work_hours_stress_min: 0.15,
            corr_stress_sleep_max: -0.15,
            corr_stress_mood_max: -0.15,
            corr_exercise_mood_min: 0.05,
            sleep_mean_min: 6.7,
            sleep_mean_max: 7.3,
            max_weight_step: MAX_DAILY_WEIGHT_DELTA,
            stress_autocorr_min: 0.3,
            heterogeneity_sd_min: 0.5,
            vacation_attenuation_min: 0.10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<f64>,
    pub threshold: String,
    pub detail: String,
}

impl CheckResult {
    fn gate(name: &str, pass: bool, observed: f64, threshold: String, detail: String) -> Self {
        CheckResult {
            name: name.to_string(),
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            observed: Some(observed),
            threshold,
            detail,
        }
    }

    fn skip(name: &str, threshold: String, detail: String) -> Self {
        CheckResult {
            name: name.to_string(),
            status: CheckStatus::Skip,
            observed: None,
            threshold,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub overall_pass: bool,
    pub row_counts: RowCounts,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn write_json(&self, path: &Path) -> Result<(), ValidateError> {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        std::fs::write(path, text).map_err(|source| ValidateError::Report {
            path: path.display().to_string(),
            source,
        })
    }
}

/// Bounded list of example failures plus a total count.
#[derive(Debug, Default)]
struct Failures {
    count: u64,
    details: Vec<String>,
}

impl Failures {
    fn push(&mut self, detail: impl FnOnce() -> String) {
        self.count += 1;
        if self.details.len() < MAX_DETAILS {
            self.details.push(detail());
        }
    }

    fn summary(&self, ok: &str) -> String {
        if self.count == 0 {
            ok.to_string()
        } else {
            format!("{} violation(s): {}", self.count, self.details.join(" | "))
        }
    }
}

/// Daily numeric columns checked for bounds and non-degenerate variance:
/// (name, min, max).
const NUMERIC_BOUNDS: &[(&str, f64, f64)] = &[
    ("work_hours", 0.0, 16.0),
    ("meetings_count", 0.0, f64::INFINITY),
    ("emails_received", 0.0, f64::INFINITY),
    ("stress_level", 0.0, 10.0),
    ("sleep_hours", 3.0, 12.0),
    ("sleep_quality", 0.0, 10.0),
    ("mood", 0.0, 10.0),
    ("energy", 0.0, 10.0),
    ("focus", 0.0, 10.0),
    ("exercise_minutes", 0.0, 240.0),
    ("outdoor_minutes", 0.0, 480.0),
    ("caffeine_mg", 0.0, 800.0),
    ("diet_quality", 0.0, 10.0),
    ("screen_time_hours", 0.0, 16.0),
    ("calories_intake", f64::MIN_POSITIVE, f64::INFINITY),
    ("calories_expended", f64::MIN_POSITIVE, f64::INFINITY),
    ("weight_kg", f64::MIN_POSITIVE, f64::INFINITY),
];

fn numeric_values(r: &DailyRecord) -> [f64; 17] {
    [
        r.work_hours,
        f64::from(r.meetings_count),
        f64::from(r.emails_received),
        r.stress_level,
        r.sleep_hours,
        r.sleep_quality,
        r.mood,
        r.energy,
        r.focus,
        f64::from(r.exercise_minutes),
        f64::from(r.outdoor_minutes),
        f64::from(r.caffeine_mg),
        r.diet_quality,
        r.screen_time_hours,
        r.calories_intake,
        r.calories_expended,
        r.weight_kg,
    ]
}

/// Everything the streaming pass over daily_logs accumulates.
struct Scan {
    range_failures: Failures,
    columns: Vec<ColumnMoments>,
    corr_work_stress: CoMoments,
    corr_stress_sleep: CoMoments,
    corr_stress_mood: CoMoments,
    corr_exercise_mood: CoMoments,
    ordering_failures: Failures,
    weekly_failures: Failures,
    conservation_failures: Failures,
    conservation_worst: f64,
    max_weight_step: f64,
    autocorrs: Vec<f64>,
    volatility_violators: Failures,
    delta_q_total: f64,
    delta_s_total: f64,
    delta_pairs: u64,
    user_mean_stress: ColumnMoments,
    vacation_days: u64,
    vacation_stress_sum: f64,
    vacation_above_own_mean: u64,
    clean_workdays: u64,
    clean_workday_stress_sum: f64,
    daily_rows: u64,
    users_seen: BTreeSet<u64>,
    day_span: Option<(Date, Date)>,
}

impl Scan {
    fn new() -> Self {
        Scan {
            range_failures: Failures::default(),
            columns: vec![ColumnMoments::default(); NUMERIC_BOUNDS.len()],
            corr_work_stress: CoMoments::default(),
            corr_stress_sleep: CoMoments::default(),
            corr_stress_mood: CoMoments::default(),
            corr_exercise_mood: CoMoments::default(),
            ordering_failures: Failures::default(),
            weekly_failures: Failures::default(),
            conservation_failures: Failures::default(),
            conservation_worst: 0.0,
            max_weight_step: 0.0,
            autocorrs: Vec::new(),
            volatility_violators: Failures::default(),
            delta_q_total: 0.0,
            delta_s_total: 0.0,
            delta_pairs: 0,
            user_mean_stress: ColumnMoments::default(),
            vacation_days: 0,
            vacation_stress_sum: 0.0,
            vacation_above_own_mean: 0,
            clean_workdays: 0,
            clean_workday_stress_sum: 0.0,
            daily_rows: 0,
            users_seen: BTreeSet::new(),
            day_span: None,
        }
    }

    fn add_row(&mut self, line: u64, r: &DailyRecord) {
        self.daily_rows += 1;
        let values = numeric_values(r);
        for (i, ((name, lo, hi), v)) in NUMERIC_BOUNDS.iter().zip(values).enumerate() {
            if !v.is_finite() || v < lo - EPS || v > hi + EPS {
                self.range_failures
                    .push(|| format!("line {line}: {name}={v} outside [{lo}, {hi}]"));
            }
            self.columns[i].add(v);
        }
        self.corr_work_stress.add(r.work_hours, r.stress_level);
        self.corr_stress_sleep.add(r.stress_level, r.sleep_hours);
        self.corr_stress_mood.add(r.stress_level, r.mood);
        self.corr_exercise_mood
            .add(f64::from(r.exercise_minutes), r.mood);
    }

    fn finalize_user(
        &mut self,
        user_id: u64,
        records: &[DailyRecord],
        baseline_weight: Option<f64>,
        events: &[InterventionEvent],
        weekly: &[WeeklyRow],
        start_date: Date,
    ) {
        // Date contiguity and one-record-per-day.
        for pair in records.windows(2) {
            if pair[1].date.days() != pair[0].date.days() + 1 {
                self.ordering_failures.push(|| {
                    format!(
                        "user {user_id}: dates {} -> {} not contiguous",
                        pair[0].date, pair[1].date
                    )
                });
            }
        }
        let span = (records[0].date, records[records.len() - 1].date);
        match self.day_span {
            None => self.day_span = Some(span),
            Some(expected) if expected != span => {
                self.ordering_failures.push(|| {
                    format!(
                        "user {user_id}: date span {} .. {} differs from {} .. {}",
                        span.0, span.1, expected.0, expected.1
                    )
                });
            }
            _ => {}
        }

        // Temporal smoothness and volatility tiers.
        let stress: Vec<f64> = records.iter().map(|r| r.stress_level).collect();
        if let Some(ac) = lag1_autocorr(&stress) {
            self.autocorrs.push(ac);
        }
        let mut dq = 0.0;
        let mut ds = 0.0;
        for pair in records.windows(2) {
            let step = (pair[1].weight_kg - pair[0].weight_kg).abs();
            self.max_weight_step = self.max_weight_step.max(step);
            dq += (pair[1].sleep_quality - pair[0].sleep_quality).abs();
            ds += (pair[1].stress_level - pair[0].stress_level).abs();
        }
        if records.len() > 1 {
            let n = (records.len() - 1) as f64;
            self.delta_q_total += dq;
            self.delta_s_total += ds;
            self.delta_pairs += records.len() as u64 - 1;
            if dq / n >= ds / n {
                self.volatility_violators.push(|| {
                    format!(
                        "user {user_id}: mean |d sleep_quality| {:.4} >= mean |d stress| {:.4}",
                        dq / n,
                        ds / n
                    )
                });
            }
        }

        // Heterogeneity and intervention attenuation.
        let mean_stress =
            records.iter().map(|r| r.stress_level).sum::<f64>() / records.len() as f64;
        self.user_mean_stress.add(mean_stress);
        for r in records {
            let vacation = events
                .iter()
                .any(|e| e.ty == InterventionType::Vacation && e.covers(r.date));
            let any_active = events.iter().any(|e| e.covers(r.date));
            if vacation {
                self.vacation_days += 1;
                self.vacation_stress_sum += r.stress_level;
                if r.stress_level > mean_stress {
                    self.vacation_above_own_mean += 1;
                }
            }
            if r.is_workday && !any_active {
                self.clean_workdays += 1;
                self.clean_workday_stress_sum += r.stress_level;
            }
        }

        // Weekly recomputation, exact at written precision.
        match summarize_user(records, start_date, events) {
            Err(e) => self
                .weekly_failures
                .push(|| format!("user {user_id}: cannot recompute weeks: {e}")),
            Ok(recomputed) => {
                if recomputed.len() != weekly.len() {
                    self.weekly_failures.push(|| {
                        format!(
                            "user {user_id}: {} weekly rows, recomputed {}",
                            weekly.len(),
                            recomputed.len()
                        )
                    });
                } else {
                    for (expected, actual) in recomputed.iter().zip(weekly) {
                        let fields = weekly_row(expected);
                        if fields != actual.fields {
                            let week = expected.week_index;
                            let diff = fields
                                .iter()
                                .zip(&actual.fields)
                                .enumerate()
                                .find(|(_, (a, b))| a != b)
                                .map(|(i, (a, b))| {
                                    format!(
                                        "{}: recomputed {a}, file {b}",
                                        schema::WEEKLY_COLUMNS[i]
                                    )
                                })
                                .unwrap_or_default();
                            self.weekly_failures.push(|| {
                                format!("user {user_id} week {week}: {diff}")
                            });
                        }
                    }
                }
            }
        }

        // Weight trajectory replay from the energy columns.
        match baseline_weight {
            None => self
                .conservation_failures
                .push(|| format!("user {user_id}: missing from {}", schema::USERS_FILE)),
            Some(baseline) => {
                let mut w = baseline;
                for r in records {
                    w = replay_weight(w, r.calories_intake, r.calories_expended);
                }
                let diff = (w - records[records.len() - 1].weight_kg).abs();
                self.conservation_worst = self.conservation_worst.max(diff);
                if diff > CONSERVATION_TOL {
                    self.conservation_failures.push(|| {
                        format!("user {user_id}: final weight off by {diff:.2e} kg")
                    });
                }
            }
        }
    }
}

fn group_by_user<T>(items: Vec<T>, user_of: impl Fn(&T) -> u64) -> BTreeMap<u64, Vec<T>> {
    let mut map: BTreeMap<u64, Vec<T>> = BTreeMap::new();
    for item in items {
        map.entry(user_of(&item)).or_default().push(item);
    }
    map
}

/// Run the full check suite against a dataset directory.
pub fn validate_dataset(dir: &Path, thresholds: &Thresholds) -> Result<ValidationReport, ValidateError> {
    let users = reader::read_users(dir)?;
    let mut user_fields: BTreeMap<u64, &UserRow> = BTreeMap::new();
    for u in &users {
        if user_fields.insert(u.user_id, u).is_some() {
            return Err(ValidateError::Parse {
                file: dir.join(schema::USERS_FILE).display().to_string(),
                line: 0,
                detail: format!("duplicate user_id {}", u.user_id),
            });
        }
    }

    let events_all = reader::read_interventions(dir)?;
    let intervention_rows = events_all.len() as u64;
    let weekly_all = reader::read_weekly(dir)?;
    let weekly_rows_total = weekly_all.len() as u64;

    let mut referential = Failures::default();
    for e in &events_all {
        if !user_fields.contains_key(&e.user_id) {
            referential.push(|| {
                format!("interventions row {} references unknown user {}", e.intervention_id, e.user_id)
            });
        }
    }
    for w in &weekly_all {
        if !user_fields.contains_key(&w.user_id) {
            referential.push(|| format!("weekly row references unknown user {}", w.user_id));
        }
    }

    let events_by_user = group_by_user(events_all, |e| e.user_id);
    let weekly_by_user = group_by_user(weekly_all, |w| w.user_id);
    let no_events: Vec<InterventionEvent> = Vec::new();
    let no_weekly: Vec<WeeklyRow> = Vec::new();

    // Pass 1: stream daily_logs one user group at a time.
    let mut scan = Scan::new();
    let mut daily = DailyReader::open(dir)?;
    let mut current: Vec<DailyRecord> = Vec::new();
    let mut start_date: Option<Date> = None;
    loop {
        let next = daily.next_record()?;
        let boundary = match (&next, current.last()) {
            (Some((_, r)), Some(last)) => r.user_id != last.user_id,
            _ => true,
        };
        if boundary && !current.is_empty() {
            let user_id = current[0].user_id;
            if let Some(prev) = scan.users_seen.iter().next_back() {
                if user_id <= *prev {
                    return Err(ValidateError::Parse {
                        file: dir.join(schema::DAILY_FILE).display().to_string(),
                        line: 0,
                        detail: format!("rows not sorted by user_id near user {user_id}"),
                    });
                }
            }
            scan.users_seen.insert(user_id);
            if !user_fields.contains_key(&user_id) {
                referential.push(|| format!("daily rows reference unknown user {user_id}"));
            }
            let start = *start_date.get_or_insert(current[0].date);
            scan.finalize_user(
                user_id,
                &current,
                user_fields.get(&user_id).map(|u| u.baseline_weight_kg),
                events_by_user.get(&user_id).unwrap_or(&no_events),
                weekly_by_user.get(&user_id).map_or(&no_weekly[..], |v| &v[..]),
                start,
            );
            current.clear();
        }
        match next {
            None => break,
            Some((line, record)) => {
                scan.add_row(line, &record);
                current.push(record);
            }
        }
    }

    // Pass 2: the wide table against the lockstep join of its sources.
    let (daily_all_rows, join_failures) =
        check_daily_all(dir, &user_fields, &weekly_by_user, &events_by_user)?;

    let row_counts = RowCounts {
        users: users.len() as u64,
        daily_logs: scan.daily_rows,
        weekly_summaries: weekly_rows_total,
        interventions: intervention_rows,
        daily_all: daily_all_rows,
    };

    let checks = build_checks(
        &scan,
        thresholds,
        &row_counts,
        users.len() as u64,
        referential,
        join_failures,
    );
    let overall_pass = checks.iter().all(|c| c.status != CheckStatus::Fail);
    Ok(ValidationReport {
        overall_pass,
        row_counts,
        checks,
    })
}

fn check_daily_all(
    dir: &Path,
    user_fields: &BTreeMap<u64, &UserRow>,
    weekly_by_user: &BTreeMap<u64, Vec<WeeklyRow>>,
    events_by_user: &BTreeMap<u64, Vec<InterventionEvent>>,
) -> Result<(u64, Failures), ValidateError> {
    let wide_path = dir.join(schema::DAILY_ALL_FILE);
    let wide_columns = schema::daily_all_columns();
    let wide_cols: Vec<&str> = wide_columns.clone();
    let mut wide = reader::RowReader::open(&wide_path, &wide_cols)?;
    let mut daily = DailyReader::open(dir)?;

    let mut failures = Failures::default();
    let mut rows = 0u64;
    let mut day_offset = 0usize;
    let mut current_user = 0u64;
    let no_events: Vec<InterventionEvent> = Vec::new();

    loop {
        let daily_next = daily.next_record()?;
        let wide_next = wide.next_fields()?;
        match (daily_next, wide_next) {
            (None, None) => break,
            (Some((line, _)), None) => {
                failures.push(|| {
                    format!("{} ends before daily_logs line {line}", schema::DAILY_ALL_FILE)
                });
                break;
            }
            (None, Some(_)) => {
                failures.push(|| {
                    format!("{} has more rows than daily_logs", schema::DAILY_ALL_FILE)
                });
                rows += 1;
                while wide.next_fields()?.is_some() {
                    rows += 1;
                }
                break;
            }
            (Some((line, record)), Some(fields)) => {
                rows += 1;
                if fields.len() != wide_columns.len() {
                    failures.push(|| {
                        format!(
                            "line {}: expected {} fields, found {}",
                            wide.line_no,
                            wide_columns.len(),
                            fields.len()
                        )
                    });
                    continue;
                }
                if record.user_id != current_user {
                    current_user = record.user_id;
                    day_offset = 0;
                }

                let users_n = schema::USERS_COLUMNS.len();
                let daily_n = schema::DAILY_COLUMNS.len();
                let weekly_n = schema::WEEKLY_COLUMNS.len();

                if let Some(u) = user_fields.get(&record.user_id) {
                    if fields[..users_n] != u.fields[..] {
                        failures.push(|| {
                            format!("line {}: static columns differ from users.csv", wide.line_no)
                        });
                    }
                } else {
                    failures
                        .push(|| format!("line {}: unknown user {}", wide.line_no, record.user_id));
                }

                let daily_fields = daily_row(&record);
                if fields[users_n..users_n + daily_n - 1] != daily_fields[1..] {
                    failures.push(|| {
                        format!(
                            "line {}: daily columns differ from daily_logs line {line}",
                            wide.line_no
                        )
                    });
                }

                let week = day_offset / 7;
                let weekly = weekly_by_user
                    .get(&record.user_id)
                    .and_then(|rows| rows.get(week));
                match weekly {
                    Some(w) => {
                        let base = users_n + daily_n - 1;
                        if fields[base..base + weekly_n - 1] != w.fields[1..] {
                            failures.push(|| {
                                format!(
                                    "line {}: weekly columns differ from weekly_summaries (user {} week {})",
                                    wide.line_no, record.user_id, week
                                )
                            });
                        }
                    }
                    None => {
                        failures.push(|| {
                            format!(
                                "line {}: no weekly row for user {} week {}",
                                wide.line_no, record.user_id, week
                            )
                        });
                    }
                }

                let events = events_by_user.get(&record.user_id).unwrap_or(&no_events);
                let flag_base = wide_columns.len() - 4;
                for (slot, ty) in InterventionType::ALL.iter().enumerate() {
                    let expected = events
                        .iter()
                        .any(|e| e.ty == *ty && e.covers(record.date))
                        .to_string();
                    if fields[flag_base + slot] != expected {
                        failures.push(|| {
                            format!(
                                "line {}: {}_active should be {expected}",
                                wide.line_no,
                                ty.as_str()
                            )
                        });
                    }
                }

                day_offset += 1;
            }
        }
    }
    Ok((rows, failures))
}

fn build_checks(
    scan: &Scan,
    thresholds: &Thresholds,
    counts: &RowCounts,
    user_count: u64,
    referential: Failures,
    join_failures: Failures,
) -> Vec<CheckResult> {
    let mut checks = Vec::new();

    checks.push(CheckResult::gate(
        "ranges.bounds",
        scan.range_failures.count == 0,
        scan.range_failures.count as f64,
        "0 out-of-range or non-finite cells".into(),
        scan.range_failures
            .summary("all daily cells finite and inside their declared bounds"),
    ));

    let degenerate: Vec<&str> = NUMERIC_BOUNDS
        .iter()
        .zip(&scan.columns)
        .filter(|(_, m)| m.variance() <= 0.0)
        .map(|((name, _, _), _)| *name)
        .collect();
    checks.push(CheckResult::gate(
        "ranges.nonzero_variance",
        degenerate.is_empty(),
        degenerate.len() as f64,
        "every numeric daily column varies".into(),
        if degenerate.is_empty() {
            "no degenerate distributions".into()
        } else {
            format!("zero-variance columns: {}", degenerate.join(", "))
        },
    ));

    let sleep_mean = scan.columns[4].mean();
    checks.push(CheckResult::gate(
        "ranges.sleep_centering",
        (thresholds.sleep_mean_min..=thresholds.sleep_mean_max).contains(&sleep_mean),
        sleep_mean,
        format!(
            "mean sleep_hours in [{}, {}]",
            thresholds.sleep_mean_min, thresholds.sleep_mean_max
        ),
        format!("mean nightly sleep {sleep_mean:.3} h"),
    ));

    // (name, observed, bound, true = require corr above the bound)
    let corr_checks = [
        (
            "directional.work_hours_stress",
            scan.corr_work_stress.corr(),
            thresholds.corr_work_hours_stress_min,
            true,
        ),
        (
            "directional.stress_sleep",
            scan.corr_stress_sleep.corr(),
            thresholds.corr_stress_sleep_max,
            false,
        ),
        (
            "directional.stress_mood",
            scan.corr_stress_mood.corr(),
            thresholds.corr_stress_mood_max,
            false,
        ),
        (
            "directional.exercise_mood",
            scan.corr_exercise_mood.corr(),
            thresholds.corr_exercise_mood_min,
            true,
        ),
    ];
    for (name, corr, bound, above) in corr_checks {
        let threshold = format!("{} {bound}", if above { ">" } else { "<" });
        match corr {
            Some(c) => checks.push(CheckResult::gate(
                name,
                if above { c > bound } else { c < bound },
                c,
                threshold,
                format!("pooled Pearson correlation {c:.4}"),
            )),
            None => checks.push(CheckResult::skip(
                name,
                threshold,
                "undefined correlation (degenerate column)".into(),
            )),
        }
    }

    checks.push(CheckResult::gate(
        "temporal.weight_step",
        scan.max_weight_step <= thresholds.max_weight_step + EPS,
        scan.max_weight_step,
        format!("max daily |d weight| <= {} kg", thresholds.max_weight_step),
        format!("largest daily weight step {:.4} kg", scan.max_weight_step),
    ));

    let mut autocorrs = scan.autocorrs.clone();
    match median(&mut autocorrs) {
        Some(med) => checks.push(CheckResult::gate(
            "temporal.stress_autocorr",
            med > thresholds.stress_autocorr_min,
            med,
            format!("median lag-1 autocorrelation > {}", thresholds.stress_autocorr_min),
            format!("median per-user stress lag-1 autocorrelation {med:.4}"),
        )),
        None => checks.push(CheckResult::skip(
            "temporal.stress_autocorr",
            format!("median lag-1 autocorrelation > {}", thresholds.stress_autocorr_min),
            "no user had enough varying stress data".into(),
        )),
    }

    let (mean_dq, mean_ds) = if scan.delta_pairs > 0 {
        (
            scan.delta_q_total / scan.delta_pairs as f64,
            scan.delta_s_total / scan.delta_pairs as f64,
        )
    } else {
        (0.0, 0.0)
    };
    checks.push(CheckResult::gate(
        "temporal.volatility_tiers",
        scan.volatility_violators.count == 0,
        scan.volatility_violators.count as f64,
        "every user: mean |d sleep_quality| < mean |d stress|".into(),
        format!(
            "population mean |d sleep_quality| {mean_dq:.4} vs mean |d stress| {mean_ds:.4}; {}",
            scan.volatility_violators.summary("no violators")
        ),
    ));

    let stress_sd = scan.user_mean_stress.variance().sqrt();
    checks.push(CheckResult::gate(
        "heterogeneity.stress_sd",
        stress_sd > thresholds.heterogeneity_sd_min,
        stress_sd,
        format!("sd of per-user mean stress > {}", thresholds.heterogeneity_sd_min),
        format!("across-user sd of mean stress {stress_sd:.4}"),
    ));

    if scan.vacation_days == 0 || scan.clean_workdays == 0 {
        checks.push(CheckResult::skip(
            "interventions.vacation_relief",
            "vacation mean stress < non-intervention workday mean".into(),
            "no vacation days in the dataset".into(),
        ));
        checks.push(CheckResult::skip(
            "interventions.attenuation",
            format!(">= {:.0}% of vacation days above own mean", thresholds.vacation_attenuation_min * 100.0),
            "no vacation days in the dataset".into(),
        ));
    } else {
        let vac_mean = scan.vacation_stress_sum / scan.vacation_days as f64;
        let work_mean = scan.clean_workday_stress_sum / scan.clean_workdays as f64;
        checks.push(CheckResult::gate(
            "interventions.vacation_relief",
            vac_mean < work_mean,
            vac_mean,
            format!("< non-intervention workday mean {work_mean:.4}"),
            format!(
                "vacation-day mean stress {vac_mean:.4} vs clean workday mean {work_mean:.4}"
            ),
        ));
        let frac = scan.vacation_above_own_mean as f64 / scan.vacation_days as f64;
        checks.push(CheckResult::gate(
            "interventions.attenuation",
            frac >= thresholds.vacation_attenuation_min,
            frac,
            format!(">= {}", thresholds.vacation_attenuation_min),
            format!(
                "{:.2}% of {} vacation days exceed the user's own mean stress",
                frac * 100.0,
                scan.vacation_days
            ),
        ));
    }

    checks.push(CheckResult::gate(
        "consistency.ordering",
        scan.ordering_failures.count == 0,
        scan.ordering_failures.count as f64,
        "contiguous per-user dates over a shared span".into(),
        scan.ordering_failures.summary("per-user dates contiguous, one record per day"),
    ));

    checks.push(CheckResult::gate(
        "consistency.weekly_recompute",
        scan.weekly_failures.count == 0,
        scan.weekly_failures.count as f64,
        "weekly_summaries.csv equals recomputation from daily_logs.csv".into(),
        scan.weekly_failures.summary("weekly summaries reproduce exactly at written precision"),
    ));

    checks.push(CheckResult::gate(
        "consistency.weight_conservation",
        scan.conservation_failures.count == 0,
        scan.conservation_worst,
        format!("replayed final weight within {CONSERVATION_TOL:.0e} kg for every user"),
        if scan.conservation_failures.count == 0 {
            format!("worst final-weight deviation {:.2e} kg", scan.conservation_worst)
        } else {
            scan.conservation_failures.summary("")
        },
    ));

    checks.push(CheckResult::gate(
        "consistency.daily_all_join",
        join_failures.count == 0,
        join_failures.count as f64,
        "daily_all.csv equals the join of its source tables".into(),
        join_failures.summary("wide table introduces no novel values"),
    ));

    checks.push(CheckResult::gate(
        "consistency.referential",
        referential.count == 0,
        referential.count as f64,
        "every user_id resolves to users.csv".into(),
        referential.summary("referential integrity holds"),
    ));

    let days = scan
        .day_span
        .map(|(a, b)| (b.days() - a.days() + 1) as u64)
        .unwrap_or(0);
    let expected_daily = user_count * days;
    let expected_weeks = user_count * days.div_ceil(7);
    let counts_ok = counts.daily_logs == expected_daily
        && counts.weekly_summaries == expected_weeks
        && counts.daily_all == counts.daily_logs
        && scan.users_seen.len() as u64 == user_count;
    checks.push(CheckResult::gate(
        "consistency.row_counts",
        counts_ok,
        counts.daily_logs as f64,
        format!(
            "daily {} = users {} x days {days}; weekly {}; daily_all = daily",
            expected_daily, user_count, expected_weeks
        ),
        format!(
            "users {} daily {} weekly {} interventions {} daily_all {}",
            counts.users,
            counts.daily_logs,
            counts.weekly_summaries,
            counts.interventions,
            counts.daily_all
        ),
    ));

    checks
}
