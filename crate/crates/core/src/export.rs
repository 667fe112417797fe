//! Bit-stable CSV export of the five release tables plus a manifest.
//!
//! Output contract: UTF-8, LF line endings, no BOM, a header row per table,
//! fixed-decimal formatting (2 decimals for reals, 3 for weights, never
//! scientific notation), and no quoting — no field can contain a comma,
//! quote, or newline. Rows are ordered by user id (then date / week /
//! start date), imposed here regardless of how generation was parallelized,
//! so a fixed config produces byte-identical files at any thread count.
//!
//! Generation streams: users are simulated in parallel batches, then each
//! batch is appended in user order, so memory stays bounded at large
//! population sizes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::aggregate::{summarize_user, AggregateError, WeeklySummary};
use crate::calendar::Date;
use crate::config::{config_digest, validate_config, ConfigViolation, GeneratorConfig};
use crate::dynamics::{simulate_user, DailyRecord};
use crate::interventions::{schedule_interventions, InterventionEvent, InterventionType};
use crate::num::{fmt_fixed, round3};
use crate::population::{sample_profile, UserProfile};
use crate::schema;

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("duplicate daily record for user {user_id} on {date}")]
    DuplicateDay { user_id: u64, date: Date },
    #[error("rows not sorted: user {prev} precedes user {next}")]
    UnsortedUsers { prev: u64, next: u64 },
    #[error("invalid config: {}", violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidConfig { violations: Vec<ConfigViolation> },
    #[error(transparent)]
    Aggregate(#[from] AggregateError),
    #[error("missing weekly summary for user {user_id} week {week_index}")]
    MissingWeek { user_id: u64, week_index: u32 },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExportError + '_ {
    move |source| ExportError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Everything generated for one user, in write-ready order.
#[derive(Debug, Clone)]
pub struct UserBundle {
    pub profile: UserProfile,
    pub events: Vec<InterventionEvent>,
    pub records: Vec<DailyRecord>,
    pub summaries: Vec<WeeklySummary>,
}

/// Simulate one user end to end.
pub fn build_user_bundle(user_id: u64, config: &GeneratorConfig) -> Result<UserBundle, ExportError> {
    let profile = sample_profile(config.seed, user_id, config);
    let events = schedule_interventions(user_id, config);
    let records = simulate_user(&profile, &events, config);
    let summaries = summarize_user(&records, config.start_date, &events)?;
    Ok(UserBundle {
        profile,
        events,
        records,
        summaries,
    })
}

pub fn user_row(p: &UserProfile) -> Vec<String> {
    vec![
        p.user_id.to_string(),
        p.age.to_string(),
        p.sex.as_str().to_string(),
        fmt_fixed(p.height_cm, 1),
        p.profession.name.to_string(),
        p.work_mode.as_str().to_string(),
        p.chronotype.as_str().to_string(),
        fmt_fixed(p.baseline_bmi, 2),
        // Quantized the same way the simulation anchors its starting weight,
        // so the weight trajectory replays exactly from this cell.
        fmt_fixed(round3(p.baseline_weight_kg), 3),
        fmt_fixed(p.activity_tendency, 3),
        fmt_fixed(p.diet_tendency, 3),
        fmt_fixed(p.caffeine_tendency, 3),
        fmt_fixed(p.base_stress, 2),
        fmt_fixed(p.base_sleep_hours, 2),
    ]
}

pub fn daily_row(r: &DailyRecord) -> Vec<String> {
    vec![
        r.user_id.to_string(),
        r.date.to_string(),
        r.is_workday.to_string(),
        fmt_fixed(r.work_hours, 2),
        r.meetings_count.to_string(),
        r.emails_received.to_string(),
        r.pressure_state.as_str().to_string(),
        fmt_fixed(r.stress_level, 2),
        fmt_fixed(r.sleep_hours, 2),
        fmt_fixed(r.sleep_quality, 2),
        fmt_fixed(r.mood, 2),
        fmt_fixed(r.energy, 2),
        fmt_fixed(r.focus, 2),
        r.exercise_minutes.to_string(),
        r.outdoor_minutes.to_string(),
        r.caffeine_mg.to_string(),
        fmt_fixed(r.diet_quality, 2),
        fmt_fixed(r.screen_time_hours, 2),
        fmt_fixed(r.calories_intake, 2),
        fmt_fixed(r.calories_expended, 2),
        fmt_fixed(r.weight_kg, 3),
    ]
}

pub fn weekly_row(s: &WeeklySummary) -> Vec<String> {
    vec![
        s.user_id.to_string(),
        s.week_index.to_string(),
        s.week_start_date.to_string(),
        s.days_covered.to_string(),
        fmt_fixed(s.avg_stress, 2),
        fmt_fixed(s.avg_sleep_hours, 2),
        fmt_fixed(s.sleep_debt_hours, 2),
        fmt_fixed(s.job_satisfaction, 2),
        fmt_fixed(s.anxiety_score, 2),
        fmt_fixed(s.depression_score, 2),
        fmt_fixed(s.avg_weight_kg, 3),
        s.low_diet_days.to_string(),
    ]
}

pub fn intervention_row(e: &InterventionEvent) -> Vec<String> {
    vec![
        e.intervention_id.to_string(),
        e.user_id.to_string(),
        e.ty.as_str().to_string(),
        e.start_date.to_string(),
        e.end_date.to_string(),
        fmt_fixed(e.intensity, 2),
    ]
}

fn write_line<W: Write>(w: &mut W, fields: &[String], path: &Path) -> Result<(), ExportError> {
    let mut first = true;
    for f in fields {
        debug_assert!(!f.contains(',') && !f.contains('"') && !f.contains('\n'));
        if !first {
            w.write_all(b",").map_err(io_err(path))?;
        }
        first = false;
        w.write_all(f.as_bytes()).map_err(io_err(path))?;
    }
    w.write_all(b"\n").map_err(io_err(path))
}

fn write_header<W: Write>(w: &mut W, columns: &[&str], path: &Path) -> Result<(), ExportError> {
    w.write_all(columns.join(",").as_bytes())
        .map_err(io_err(path))?;
    w.write_all(b"\n").map_err(io_err(path))
}

struct TableFile {
    path: PathBuf,
    writer: BufWriter<File>,
    rows: u64,
}

impl TableFile {
    fn create(dir: &Path, name: &str, columns: &[&str]) -> Result<Self, ExportError> {
        let path = dir.join(name);
        let file = File::create(&path).map_err(io_err(&path))?;
        let mut writer = BufWriter::with_capacity(1 << 18, file);
        write_header(&mut writer, columns, &path)?;
        Ok(TableFile {
            path,
            writer,
            rows: 0,
        })
    }

    fn row(&mut self, fields: &[String]) -> Result<(), ExportError> {
        self.rows += 1;
        write_line(&mut self.writer, fields, &self.path)
    }

    fn finish(mut self) -> Result<u64, ExportError> {
        self.writer.flush().map_err(io_err(&self.path))?;
        Ok(self.rows)
    }
}

/// Row counts per table, recorded in the manifest and returned by
/// [`generate_dataset`].
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct RowCounts {
    pub users: u64,
    pub daily_logs: u64,
    pub weekly_summaries: u64,
    pub interventions: u64,
    pub daily_all: u64,
}

#[derive(Debug, Clone, Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    config_digest: String,
    population_size: u32,
    start_date: String,
    end_date: String,
    emit_denormalized: bool,
    row_counts: RowCounts,
}

/// Streaming writer over all five tables.
pub struct DatasetWriter {
    users: TableFile,
    daily: TableFile,
    weekly: TableFile,
    interventions: TableFile,
    daily_all: Option<TableFile>,
    daily_all_columns: Vec<&'static str>,
    next_intervention_id: u64,
    last_user: u64,
    last_day: Option<(u64, Date)>,
}

impl DatasetWriter {
    pub fn create(dir: &Path, emit_denormalized: bool) -> Result<Self, ExportError> {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        let daily_all_columns = schema::daily_all_columns();
        Ok(DatasetWriter {
            users: TableFile::create(dir, schema::USERS_FILE, schema::USERS_COLUMNS)?,
            daily: TableFile::create(dir, schema::DAILY_FILE, schema::DAILY_COLUMNS)?,
            weekly: TableFile::create(dir, schema::WEEKLY_FILE, schema::WEEKLY_COLUMNS)?,
            interventions: TableFile::create(
                dir,
                schema::INTERVENTIONS_FILE,
                schema::INTERVENTIONS_COLUMNS,
            )?,
            daily_all: if emit_denormalized {
                Some(TableFile::create(
                    dir,
                    schema::DAILY_ALL_FILE,
                    &daily_all_columns,
                )?)
            } else {
                None
            },
            daily_all_columns,
            next_intervention_id: 1,
            last_user: 0,
            last_day: None,
        })
    }

    /// Append one user's rows to every table. Users must arrive in ascending
    /// id order; intervention ids are assigned densely here.
    pub fn append(&mut self, bundle: &UserBundle) -> Result<(), ExportError> {
        let user_id = bundle.profile.user_id;
        if user_id <= self.last_user {
            return Err(ExportError::UnsortedUsers {
                prev: self.last_user,
                next: user_id,
            });
        }
        self.last_user = user_id;

        let user_fields = user_row(&bundle.profile);
        self.users.row(&user_fields)?;

        let mut events = bundle.events.clone();
        events.sort_by_key(|e| (e.start_date, e.intervention_id, e.ty));
        for event in &mut events {
            event.intervention_id = self.next_intervention_id;
            self.next_intervention_id += 1;
            self.interventions.row(&intervention_row(event))?;
        }

        let weekly_fields: Vec<Vec<String>> = bundle.summaries.iter().map(weekly_row).collect();
        for fields in &weekly_fields {
            self.weekly.row(fields)?;
        }

        for (i, record) in bundle.records.iter().enumerate() {
            let key = (record.user_id, record.date);
            if self.last_day == Some(key) {
                return Err(ExportError::DuplicateDay {
                    user_id: record.user_id,
                    date: record.date,
                });
            }
            self.last_day = Some(key);

            let daily_fields = daily_row(record);
            self.daily.row(&daily_fields)?;

            if let Some(wide) = &mut self.daily_all {
                let week = i / 7;
                let weekly = weekly_fields.get(week).ok_or(ExportError::MissingWeek {
                    user_id,
                    week_index: week as u32,
                })?;
                let mut fields =
                    Vec::with_capacity(self.daily_all_columns.len());
                fields.extend_from_slice(&user_fields);
                fields.extend_from_slice(&daily_fields[1..]);
                fields.extend_from_slice(&weekly[1..]);
                for ty in InterventionType::ALL {
                    let active = events
                        .iter()
                        .any(|e| e.ty == ty && e.covers(record.date));
                    fields.push(active.to_string());
                }
                wide.row(&fields)?;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<RowCounts, ExportError> {
        Ok(RowCounts {
            users: self.users.finish()?,
            daily_logs: self.daily.finish()?,
            weekly_summaries: self.weekly.finish()?,
            interventions: self.interventions.finish()?,
            daily_all: match self.daily_all {
                Some(t) => t.finish()?,
                None => 0,
            },
        })
    }
}

/// Users simulated per parallel batch; memory is bounded by
/// `BATCH_SIZE * days` records.
const BATCH_SIZE: usize = 64;

/// Generate the full dataset into `out_dir`. `threads == 0` uses the rayon
/// default. Output bytes are independent of `threads`.
pub fn generate_dataset(
    config: &GeneratorConfig,
    out_dir: &Path,
    threads: usize,
) -> Result<RowCounts, ExportError> {
    let violations = validate_config(config);
    if !violations.is_empty() {
        return Err(ExportError::InvalidConfig { violations });
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ExportError::Io {
            path: out_dir.display().to_string(),
            source: std::io::Error::other(e),
        })?;

    let mut writer = DatasetWriter::create(out_dir, config.emit_denormalized)?;
    let user_ids: Vec<u64> = (1..=u64::from(config.population_size)).collect();
    for chunk in user_ids.chunks(BATCH_SIZE) {
        let bundles: Vec<Result<UserBundle, ExportError>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&user_id| build_user_bundle(user_id, config))
                .collect()
        });
        for bundle in bundles {
            writer.append(&bundle?)?;
        }
    }
    let counts = writer.finish()?;
    write_manifest(config, out_dir, &counts)?;
    Ok(counts)
}

fn write_manifest(
    config: &GeneratorConfig,
    dir: &Path,
    counts: &RowCounts,
) -> Result<(), ExportError> {
    let manifest = Manifest {
        tool: "flow",
        version: env!("CARGO_PKG_VERSION"),
        seed: config.seed,
        config_digest: config_digest(config),
        population_size: config.population_size,
        start_date: config.start_date.to_string(),
        end_date: config.end_date.to_string(),
        emit_denormalized: config.emit_denormalized,
        row_counts: counts.clone(),
    };
    let path = dir.join(schema::MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    std::fs::write(&path, text).map_err(io_err(&path))
}
