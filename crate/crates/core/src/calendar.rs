//! Pure date logic: civil-date arithmetic, workday classification,
//! seasonality, 28-day workload cycles, and anchored week indexing.
//!
//! Weeks are 7-day blocks counted from the simulation start date (not ISO
//! weeks); the final block may be partial. Dates render as ISO-8601
//! `YYYY-MM-DD` everywhere.

use std::fmt;
use std::str::FromStr;

use crate::population::{SchedulePattern, UserProfile};
use crate::rng::{tags, Channel};

/// Calendar date stored as days since 1970-01-01.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Date(i64);

impl Date {
    pub fn from_days(days: i64) -> Self {
        Date(days)
    }

    pub fn days(self) -> i64 {
        self.0
    }

    /// Build from a civil year/month/day triple.
    pub fn from_ymd(year: i32, month: u32, day: u32) -> Option<Self> {
        if !(1..=12).contains(&month) || day == 0 || day > days_in_month(year, month) {
            return None;
        }
        Some(Date(days_from_civil(year, month, day)))
    }

    pub fn ymd(self) -> (i32, u32, u32) {
        civil_from_days(self.0)
    }

    pub fn year(self) -> i32 {
        self.ymd().0
    }

    /// Monday = 0 .. Sunday = 6.
    pub fn weekday(self) -> u32 {
        (self.0 + 3).rem_euclid(7) as u32
    }

    pub fn is_weekend(self) -> bool {
        self.weekday() >= 5
    }

    /// 1-based ordinal day within the year.
    pub fn day_of_year(self) -> u32 {
        let (y, _, _) = self.ymd();
        (self.0 - days_from_civil(y, 1, 1) + 1) as u32
    }

    pub fn succ(self) -> Date {
        Date(self.0 + 1)
    }
}

impl fmt::Display for Date {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (y, m, d) = self.ymd();
        write!(f, "{y:04}-{m:02}-{d:02}")
    }
}

/// Error for unparseable ISO dates.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid date {0:?}, expected YYYY-MM-DD")]
pub struct DateParseError(pub String);

impl FromStr for Date {
    type Err = DateParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DateParseError(s.to_string());
        let mut parts = s.split('-');
        let y: i32 = parts.next().ok_or_else(err)?.parse().map_err(|_| err())?;
        let m: u32 = parts.next().ok_or_else(err)?.parse().map_err(|_| err())?;
        let d: u32 = parts.next().ok_or_else(err)?.parse().map_err(|_| err())?;
        if parts.next().is_some() {
            return Err(err());
        }
        Date::from_ymd(y, m, d).ok_or_else(err)
    }
}

fn is_leap(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

fn days_in_month(year: i32, month: u32) -> u32 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap(year) => 29,
        2 => 28,
        _ => 0,
    }
}

// Civil <-> epoch-day conversions (proleptic Gregorian).
fn days_from_civil(y: i32, m: u32, d: u32) -> i64 {
    let y = i64::from(y) - i64::from(m <= 2);
    let era = y.div_euclid(400);
    let yoe = y - era * 400;
    let mp = i64::from((m + 9) % 12);
    let doy = (153 * mp + 2) / 5 + i64::from(d) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

fn civil_from_days(z: i64) -> (i32, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = ((mp + 2) % 12 + 1) as u32;
    ((y + i64::from(m <= 2)) as i32, m, d)
}

/// A date positioned within the simulation range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimDate {
    pub date: Date,
    /// 0 at the simulation start date, incrementing by one per calendar day.
    pub day_index: u32,
}

impl SimDate {
    pub fn day_of_week(self) -> u32 {
        self.date.weekday()
    }

    pub fn day_of_year(self) -> u32 {
        self.date.day_of_year()
    }
}

/// All simulation days from `start` to `end`, inclusive.
pub fn sim_days(start: Date, end: Date) -> Vec<SimDate> {
    let n = (end.days() - start.days() + 1).max(0) as u32;
    (0..n)
        .map(|i| SimDate {
            date: Date::from_days(start.days() + i64::from(i)),
            day_index: i,
        })
        .collect()
}

/// Number of days in the inclusive range.
pub fn span_days(start: Date, end: Date) -> i64 {
    end.days() - start.days() + 1
}

/// Workday classification. Standard-weekday professions work Mon-Fri;
/// rotating-shift professions additionally work weekend days with the
/// profession's weekend probability, decided by a keyed per-(user, day) draw.
pub fn is_workday(d: SimDate, profile: &UserProfile, seed: u64) -> bool {
    if !d.date.is_weekend() {
        return true;
    }
    match profile.profession.schedule_pattern {
        SchedulePattern::StandardWeekday => false,
        SchedulePattern::RotatingShift => {
            let ch = Channel::new(seed, profile.user_id, i64::from(d.day_index), tags::WEEKEND_SHIFT);
            ch.bernoulli(0, profile.profession.weekend_work_probability)
        }
    }
}

/// Annual seasonality in [-1, 1], peaking near mid-January.
pub fn season_factor(d: SimDate) -> f64 {
    let doy = f64::from(d.day_of_year());
    (std::f64::consts::TAU * (doy - 15.0) / 365.25).cos()
}

/// Per-user 28-day workload cycle in [-1, 1]. The phase offset is a fixed
/// per-user draw so users' cycles are not synchronized.
pub fn workload_cycle_factor(d: SimDate, user_id: u64, seed: u64) -> f64 {
    let phase = cycle_phase(user_id, seed);
    (std::f64::consts::TAU * (f64::from(d.day_index) + phase) / 28.0).sin()
}

/// Deterministic per-user phase in [0, 28).
pub fn cycle_phase(user_id: u64, seed: u64) -> f64 {
    Channel::new(seed, user_id, -1, tags::CYCLE_PHASE).uniform(0) * 28.0
}

/// Anchored week block: floor(day_index / 7).
pub fn week_index(d: SimDate) -> u32 {
    d.day_index / 7
}
