//! CSV readers for the five release tables.
//!
//! The format contract has no quoting, so a line is exactly its
//! comma-separated fields. Structural problems (missing file, wrong header,
//! unparseable cell) are hard errors carrying file and line; semantic
//! problems are left to the checks.

use std::fs::File;
use std::io::{BufRead, BufReader, Lines};
use std::path::{Path, PathBuf};

use crate::calendar::Date;
use crate::dynamics::{DailyRecord, Pressure};
use crate::interventions::{InterventionEvent, InterventionType};
use crate::schema;

#[derive(Debug, thiserror::Error)]
pub enum ValidateError {
    #[error("missing table file {0}")]
    MissingFile(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{file}:{line}: {detail}")]
    Parse {
        file: String,
        line: u64,
        detail: String,
    },
    #[error("cannot write report {path}: {source}")]
    Report {
        path: String,
        source: std::io::Error,
    },
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>, ValidateError> {
    if !path.exists() {
        return Err(ValidateError::MissingFile(path.display().to_string()));
    }
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| ValidateError::Io {
            path: path.display().to_string(),
            source,
        })
}

pub(crate) struct RowReader {
    path: PathBuf,
    lines: Lines<BufReader<File>>,
    pub line_no: u64,
}

impl RowReader {
    pub fn open(path: &Path, columns: &[&str]) -> Result<Self, ValidateError> {
        let reader = open(path)?;
        let mut rr = RowReader {
            path: path.to_path_buf(),
            lines: reader.lines(),
            line_no: 0,
        };
        let header = rr
            .next_fields()?
            .ok_or_else(|| rr.err(1, "empty file, expected a header row".to_string()))?;
        let expected = columns.join(",");
        if header.join(",") != expected {
            return Err(rr.err(1, format!("unexpected header, expected {expected:?}")));
        }
        Ok(rr)
    }

    pub fn err(&self, line: u64, detail: String) -> ValidateError {
        ValidateError::Parse {
            file: self.path.display().to_string(),
            line,
            detail,
        }
    }

    pub fn next_fields(&mut self) -> Result<Option<Vec<String>>, ValidateError> {
        match self.lines.next() {
            None => Ok(None),
            Some(Err(source)) => Err(ValidateError::Io {
                path: self.path.display().to_string(),
                source,
            }),
            Some(Ok(line)) => {
                self.line_no += 1;
                Ok(Some(line.split(',').map(str::to_string).collect()))
            }
        }
    }
}

pub(crate) struct FieldParser<'a> {
    reader: &'a RowReader,
    line: u64,
    columns: &'static [&'static str],
}

impl<'a> FieldParser<'a> {
    pub fn new(reader: &'a RowReader, columns: &'static [&'static str]) -> Self {
        FieldParser {
            line: reader.line_no,
            reader,
            columns,
        }
    }

    fn col_name(&self, idx: usize) -> &str {
        self.columns.get(idx).copied().unwrap_or("?")
    }

    pub fn check_len(&self, fields: &[String]) -> Result<(), ValidateError> {
        if fields.len() != self.columns.len() {
            return Err(self.reader.err(
                self.line,
                format!("expected {} fields, found {}", self.columns.len(), fields.len()),
            ));
        }
        Ok(())
    }

    pub fn f64(&self, fields: &[String], idx: usize) -> Result<f64, ValidateError> {
        fields[idx].parse().map_err(|_| {
            self.reader.err(
                self.line,
                format!("column {}: not a number: {:?}", self.col_name(idx), fields[idx]),
            )
        })
    }

    pub fn u64(&self, fields: &[String], idx: usize) -> Result<u64, ValidateError> {
        fields[idx].parse().map_err(|_| {
            self.reader.err(
                self.line,
                format!("column {}: not an integer: {:?}", self.col_name(idx), fields[idx]),
            )
        })
    }

    pub fn u32(&self, fields: &[String], idx: usize) -> Result<u32, ValidateError> {
        fields[idx].parse().map_err(|_| {
            self.reader.err(
                self.line,
                format!("column {}: not an integer: {:?}", self.col_name(idx), fields[idx]),
            )
        })
    }

    pub fn date(&self, fields: &[String], idx: usize) -> Result<Date, ValidateError> {
        fields[idx].parse().map_err(|_| {
            self.reader.err(
                self.line,
                format!("column {}: not a date: {:?}", self.col_name(idx), fields[idx]),
            )
        })
    }

    pub fn bool(&self, fields: &[String], idx: usize) -> Result<bool, ValidateError> {
        match fields[idx].as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(self.reader.err(
                self.line,
                format!("column {}: not a boolean: {other:?}", self.col_name(idx)),
            )),
        }
    }
}

/// One users.csv row: parsed join keys plus the raw fields for the
/// denormalized-equality check.
#[derive(Debug, Clone)]
pub struct UserRow {
    pub user_id: u64,
    pub baseline_weight_kg: f64,
    pub fields: Vec<String>,
}

pub fn read_users(dir: &Path) -> Result<Vec<UserRow>, ValidateError> {
    let path = dir.join(schema::USERS_FILE);
    let mut reader = RowReader::open(&path, schema::USERS_COLUMNS)?;
    let mut out = Vec::new();
    while let Some(fields) = reader.next_fields()? {
        let p = FieldParser::new(&reader, schema::USERS_COLUMNS);
        p.check_len(&fields)?;
        out.push(UserRow {
            user_id: p.u64(&fields, 0)?,
            baseline_weight_kg: p.f64(&fields, 8)?,
            fields,
        });
    }
    Ok(out)
}

/// One weekly_summaries.csv row: the user key plus raw fields; content
/// equality against the recomputation is a string comparison.
#[derive(Debug, Clone)]
pub struct WeeklyRow {
    pub user_id: u64,
    pub fields: Vec<String>,
}

pub fn read_weekly(dir: &Path) -> Result<Vec<WeeklyRow>, ValidateError> {
    let path = dir.join(schema::WEEKLY_FILE);
    let mut reader = RowReader::open(&path, schema::WEEKLY_COLUMNS)?;
    let mut out = Vec::new();
    while let Some(fields) = reader.next_fields()? {
        let p = FieldParser::new(&reader, schema::WEEKLY_COLUMNS);
        p.check_len(&fields)?;
        // week_index well-formedness is covered by the recompute comparison.
        p.u32(&fields, 1)?;
        out.push(WeeklyRow {
            user_id: p.u64(&fields, 0)?,
            fields,
        });
    }
    Ok(out)
}

pub fn read_interventions(dir: &Path) -> Result<Vec<InterventionEvent>, ValidateError> {
    let path = dir.join(schema::INTERVENTIONS_FILE);
    let mut reader = RowReader::open(&path, schema::INTERVENTIONS_COLUMNS)?;
    let mut out = Vec::new();
    while let Some(fields) = reader.next_fields()? {
        let p = FieldParser::new(&reader, schema::INTERVENTIONS_COLUMNS);
        p.check_len(&fields)?;
        let ty = InterventionType::parse(&fields[2]).ok_or_else(|| {
            reader.err(reader.line_no, format!("unknown intervention type {:?}", fields[2]))
        })?;
        out.push(InterventionEvent {
            intervention_id: p.u64(&fields, 0)?,
            user_id: p.u64(&fields, 1)?,
            ty,
            start_date: p.date(&fields, 3)?,
            end_date: p.date(&fields, 4)?,
            intensity: p.f64(&fields, 5)?,
        });
    }
    Ok(out)
}

/// Streaming daily_logs.csv reader yielding parsed records with their line
/// numbers.
pub struct DailyReader {
    reader: RowReader,
}

impl DailyReader {
    pub fn open(dir: &Path) -> Result<Self, ValidateError> {
        let path = dir.join(schema::DAILY_FILE);
        Ok(DailyReader {
            reader: RowReader::open(&path, schema::DAILY_COLUMNS)?,
        })
    }

    pub fn next_record(&mut self) -> Result<Option<(u64, DailyRecord)>, ValidateError> {
        let Some(fields) = self.reader.next_fields()? else {
            return Ok(None);
        };
        let p = FieldParser::new(&self.reader, schema::DAILY_COLUMNS);
        p.check_len(&fields)?;
        let pressure = Pressure::parse(&fields[6]).ok_or_else(|| {
            self.reader
                .err(self.reader.line_no, format!("unknown pressure state {:?}", fields[6]))
        })?;
        let record = DailyRecord {
            user_id: p.u64(&fields, 0)?,
            date: p.date(&fields, 1)?,
            is_workday: p.bool(&fields, 2)?,
            work_hours: p.f64(&fields, 3)?,
            meetings_count: p.u32(&fields, 4)?,
            emails_received: p.u32(&fields, 5)?,
            pressure_state: pressure,
            stress_level: p.f64(&fields, 7)?,
            sleep_hours: p.f64(&fields, 8)?,
            sleep_quality: p.f64(&fields, 9)?,
            mood: p.f64(&fields, 10)?,
            energy: p.f64(&fields, 11)?,
            focus: p.f64(&fields, 12)?,
            exercise_minutes: p.u32(&fields, 13)?,
            outdoor_minutes: p.u32(&fields, 14)?,
            caffeine_mg: p.u32(&fields, 15)?,
            diet_quality: p.f64(&fields, 16)?,
            screen_time_hours: p.f64(&fields, 17)?,
            calories_intake: p.f64(&fields, 18)?,
            calories_expended: p.f64(&fields, 19)?,
            weight_kg: p.f64(&fields, 20)?,
        };
        Ok(Some((self.reader.line_no, record)))
    }
}
