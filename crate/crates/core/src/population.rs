//! Static population sampling: per-user profiles and the built-in
//! profession context table.
//!
//! Profiles are pure functions of `(seed, user_id)` plus the configured
//! mixes, so the first N profiles never change when the population grows.
//! Demographic priors are simple documented stand-ins, deliberately not
//! calibrated to any real population.

use crate::config::GeneratorConfig;
use crate::num::{clamp, quantize};
use crate::rng::{tags, Channel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sex {
    Female,
    Male,
}

impl Sex {
    pub fn as_str(self) -> &'static str {
        match self {
            Sex::Female => "female",
            Sex::Male => "male",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorkMode {
    Remote,
    Onsite,
    Hybrid,
}

impl WorkMode {
    pub const ALL: [WorkMode; 3] = [WorkMode::Remote, WorkMode::Onsite, WorkMode::Hybrid];

    pub fn as_str(self) -> &'static str {
        match self {
            WorkMode::Remote => "remote",
            WorkMode::Onsite => "onsite",
            WorkMode::Hybrid => "hybrid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chronotype {
    Early,
    Intermediate,
    Late,
}

impl Chronotype {
    pub fn as_str(self) -> &'static str {
        match self {
            Chronotype::Early => "early",
            Chronotype::Intermediate => "intermediate",
            Chronotype::Late => "late",
        }
    }

    /// Baseline sleep-duration shift in hours.
    pub fn sleep_shift(self) -> f64 {
        match self {
            Chronotype::Early => 0.2,
            Chronotype::Intermediate => 0.0,
            Chronotype::Late => -0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchedulePattern {
    StandardWeekday,
    RotatingShift,
}

/// Baseline workload characteristics for one professional category.
/// Professions are contextual modifiers only; they carry no policy logic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfessionSpec {
    pub name: &'static str,
    pub base_work_hours: f64,
    /// Expected meetings per workday at baseline hours.
    pub meeting_rate: f64,
    /// Expected emails per workday at baseline hours.
    pub email_rate: f64,
    pub schedule_pattern: SchedulePattern,
    /// Probability a weekend day is worked (rotating shift only).
    pub weekend_work_probability: f64,
}

const PROFESSIONS: [ProfessionSpec; 5] = [
    ProfessionSpec {
        name: "manager",
        base_work_hours: 8.5,
        meeting_rate: 5.0,
        email_rate: 70.0,
        schedule_pattern: SchedulePattern::StandardWeekday,
        weekend_work_probability: 0.0,
    },
    ProfessionSpec {
        name: "engineer",
        base_work_hours: 8.0,
        meeting_rate: 2.5,
        email_rate: 45.0,
        schedule_pattern: SchedulePattern::StandardWeekday,
        weekend_work_probability: 0.0,
    },
    ProfessionSpec {
        name: "nurse",
        base_work_hours: 10.0,
        meeting_rate: 1.0,
        email_rate: 15.0,
        schedule_pattern: SchedulePattern::RotatingShift,
        weekend_work_probability: 0.4,
    },
    ProfessionSpec {
        name: "teacher",
        base_work_hours: 7.5,
        meeting_rate: 2.0,
        email_rate: 30.0,
        schedule_pattern: SchedulePattern::StandardWeekday,
        weekend_work_probability: 0.0,
    },
    ProfessionSpec {
        name: "analyst",
        base_work_hours: 8.0,
        meeting_rate: 3.5,
        email_rate: 55.0,
        schedule_pattern: SchedulePattern::StandardWeekday,
        weekend_work_probability: 0.0,
    },
];

/// The fixed built-in profession table.
pub fn profession_table() -> &'static [ProfessionSpec] {
    &PROFESSIONS
}

pub fn profession_by_name(name: &str) -> Option<&'static ProfessionSpec> {
    PROFESSIONS.iter().find(|p| p.name == name)
}

/// Static per-individual attributes, immutable for the whole simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct UserProfile {
    pub user_id: u64,
    pub age: u32,
    pub sex: Sex,
    pub height_cm: f64,
    pub profession: &'static ProfessionSpec,
    pub work_mode: WorkMode,
    pub chronotype: Chronotype,
    pub baseline_bmi: f64,
    /// baseline_bmi * (height_cm / 100)^2, kept at full precision.
    pub baseline_weight_kg: f64,
    pub activity_tendency: f64,
    pub diet_tendency: f64,
    pub caffeine_tendency: f64,
    pub base_stress: f64,
    pub base_sleep_hours: f64,
}

fn clamped_normal(ch: &Channel, k: u64, mean: f64, sd: f64, lo: f64, hi: f64) -> f64 {
    clamp(ch.normal(k, mean, sd), lo, hi)
}

/// Sample user `user_id`'s profile. Deterministic in `(seed, user_id)` and
/// the configured mixes; independent of population size.
pub fn sample_profile(seed: u64, user_id: u64, config: &GeneratorConfig) -> UserProfile {
    debug_assert!(user_id >= 1);
    let ch = |tag| Channel::new(seed, user_id, -1, tag);

    let age = 22 + (ch(tags::PROFILE_AGE).uniform(0) * 44.0) as u32;

    let sex = if ch(tags::PROFILE_SEX).bernoulli(0, 0.5) {
        Sex::Female
    } else {
        Sex::Male
    };
    let (h_mean, h_sd) = match sex {
        Sex::Female => (165.0, 6.0),
        Sex::Male => (178.0, 7.0),
    };
    let height_cm = quantize(
        clamped_normal(&ch(tags::PROFILE_HEIGHT), 0, h_mean, h_sd, 145.0, 205.0),
        1,
    );

    let baseline_bmi = quantize(
        clamped_normal(&ch(tags::PROFILE_BMI), 0, 25.0, 3.5, 17.0, 40.0),
        2,
    );
    let baseline_weight_kg = baseline_bmi * (height_cm / 100.0).powi(2);

    let profession = {
        let names: Vec<&str> = PROFESSIONS.iter().map(|p| p.name).collect();
        let weights: Vec<f64> = names
            .iter()
            .map(|n| config.profession_mix.get(*n).copied().unwrap_or(0.0))
            .collect();
        let idx = ch(tags::PROFILE_PROFESSION)
            .categorical(0, &weights)
            .expect("validated profession mix");
        &PROFESSIONS[idx]
    };

    let work_mode = {
        let weights: Vec<f64> = WorkMode::ALL
            .iter()
            .map(|m| config.work_mode_mix.get(m.as_str()).copied().unwrap_or(0.0))
            .collect();
        let idx = ch(tags::PROFILE_WORK_MODE)
            .categorical(0, &weights)
            .expect("validated work mode mix");
        WorkMode::ALL[idx]
    };

    let chronotype = match ch(tags::PROFILE_CHRONOTYPE)
        .categorical(0, &[0.25, 0.5, 0.25])
        .expect("constant weights")
    {
        0 => Chronotype::Early,
        1 => Chronotype::Intermediate,
        _ => Chronotype::Late,
    };

    let tendency = |tag| {
        quantize(
            clamped_normal(&ch(tag), 0, 0.5, 0.18, 0.0, 1.0),
            3,
        )
    };

    UserProfile {
        user_id,
        age,
        sex,
        height_cm,
        profession,
        work_mode,
        chronotype,
        baseline_bmi,
        baseline_weight_kg,
        activity_tendency: tendency(tags::PROFILE_ACTIVITY),
        diet_tendency: tendency(tags::PROFILE_DIET),
        caffeine_tendency: tendency(tags::PROFILE_CAFFEINE),
        base_stress: quantize(
            clamped_normal(&ch(tags::PROFILE_BASE_STRESS), 0, 5.0, 1.15, 1.5, 8.5),
            2,
        ),
        base_sleep_hours: quantize(
            clamped_normal(&ch(tags::PROFILE_BASE_SLEEP), 0, 7.45, 0.45, 6.0, 9.0),
            2,
        ),
    }
}

/// Sample the whole population: exactly `population_size` profiles with
/// dense user ids from 1.
pub fn sample_population(config: &GeneratorConfig) -> Vec<UserProfile> {
    (1..=u64::from(config.population_size))
        .map(|user_id| sample_profile(config.seed, user_id, config))
        .collect()
}

/// Test helper: a profile forced to the given profession.
#[cfg(test)]
pub(crate) fn profile_with_profession(
    user_id: u64,
    config: &GeneratorConfig,
    profession: &str,
) -> UserProfile {
    let mut cfg = config.clone();
    cfg.profession_mix = [(profession.to_string(), 1.0)].into_iter().collect();
    sample_profile(cfg.seed, user_id, &cfg)
}
