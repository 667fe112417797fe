//! Column layouts for the five release tables, shared by the writer and the
//! validator so headers and field order have one source of truth.

pub const USERS_COLUMNS: &[&str] = &[
    "user_id",
    "age",
    "sex",
    "height_cm",
    "profession",
    "work_mode",
    "chronotype",
    "baseline_bmi",
    "baseline_weight_kg",
    "activity_tendency",
    "diet_tendency",
    "caffeine_tendency",
    "base_stress",
    "base_sleep_hours",
];

pub const DAILY_COLUMNS: &[&str] = &[
    "user_id",
    "date",
    "is_workday",
    "work_hours",
    "meetings_count",
    "emails_received",
    "pressure_state",
    "stress_level",
    "sleep_hours",
    "sleep_quality",
    "mood",
    "energy",
    "focus",
    "exercise_minutes",
    "outdoor_minutes",
    "caffeine_mg",
    "diet_quality",
    "screen_time_hours",
    "calories_intake",
    "calories_expended",
    "weight_kg",
];

pub const WEEKLY_COLUMNS: &[&str] = &[
    "user_id",
    "week_index",
    "week_start_date",
    "days_covered",
    "avg_stress",
    "avg_sleep_hours",
    "sleep_debt_hours",
    "job_satisfaction",
    "anxiety_score",
    "depression_score",
    "avg_weight_kg",
    "low_diet_days",
];

pub const INTERVENTIONS_COLUMNS: &[&str] = &[
    "intervention_id",
    "user_id",
    "type",
    "start_date",
    "end_date",
    "intensity",
];

/// Wide table: all users columns, the daily columns (minus the repeated
/// user_id), the week's summary columns prefixed `week_`, and four
/// active-intervention flags.
pub fn daily_all_columns() -> Vec<&'static str> {
    let mut cols: Vec<&'static str> = USERS_COLUMNS.to_vec();
    cols.extend(DAILY_COLUMNS.iter().skip(1));
    cols.extend([
        "week_index",
        "week_start_date",
        "week_days_covered",
        "week_avg_stress",
        "week_avg_sleep_hours",
        "week_sleep_debt_hours",
        "week_job_satisfaction",
        "week_anxiety_score",
        "week_depression_score",
        "week_avg_weight_kg",
        "week_low_diet_days",
    ]);
    cols.extend([
        "vacation_active",
        "sick_leave_active",
        "workload_cap_active",
        "lifestyle_program_active",
    ]);
    cols
}

pub const USERS_FILE: &str = "users.csv";
pub const DAILY_FILE: &str = "daily_logs.csv";
pub const WEEKLY_FILE: &str = "weekly_summaries.csv";
pub const INTERVENTIONS_FILE: &str = "interventions.csv";
pub const DAILY_ALL_FILE: &str = "daily_all.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
