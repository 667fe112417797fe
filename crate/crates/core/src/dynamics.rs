//! The daily simulation loop: sequential per-user state updates with
//! feedback between workload, stress, sleep, mood, lifestyle, and weight.
//!
//! Update order within a day: pressure regime -> workday resolution -> work
//! variables -> stress -> lifestyle -> sleep -> sleep quality -> mood/energy/
//! focus -> energy balance -> weight. Lifestyle runs before sleep because
//! the night's sleep responds to the same day's caffeine; nothing in the
//! lifestyle block depends on sleep. Sleep for night t is attributed to day
//! t's record.
//!
//! Values are quantized to their written CSV precision as each record is
//! built, and the carried weight state is re-quantized to 3 decimals after
//! every update, so weekly aggregates and the full weight trajectory can be
//! recomputed exactly from the released files. The per-operation formulas
//! below stay full-precision; quantization happens only at the record
//! boundary.

use crate::calendar::{self, Date, SimDate};
use crate::config::{GeneratorConfig, SensitivityParams};
use crate::interventions::{self, ActiveModifiers, InterventionEvent};
use crate::num::{clamp, round2, round3};
use crate::population::{ProfessionSpec, UserProfile, WorkMode};
use crate::rng::{tags, Channel, Tag};

/// Latent work-intensity regime following a 3-state Markov chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pressure {
    Normal,
    Elevated,
    Critical,
}

impl Pressure {
    pub fn as_str(self) -> &'static str {
        match self {
            Pressure::Normal => "normal",
            Pressure::Elevated => "elevated",
            Pressure::Critical => "critical",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "normal" => Some(Pressure::Normal),
            "elevated" => Some(Pressure::Elevated),
            "critical" => Some(Pressure::Critical),
            _ => None,
        }
    }
}

/// Transition rows for normal/elevated/critical. Long-run occupancy is
/// roughly 71% / 23% / 6%.
pub const PRESSURE_MATRIX: [[f64; 3]; 3] = [
    [0.92, 0.08, 0.00],
    [0.25, 0.65, 0.10],
    [0.00, 0.40, 0.60],
];

/// Extra stress on critical days.
const CRITICAL_STRESS_BONUS: f64 = 0.8;
/// Stress contribution of the 28-day workload cycle.
const CYCLE_STRESS_COEF: f64 = 0.3;
/// Work-hours modulation by the cycle.
const CYCLE_HOURS_COEF: f64 = 0.1;
/// Bounded recovery: on non-workdays the (large, negative) workload index is
/// floored here before it reaches stress, so days off relax rather than
/// zero out the stress state.
const NONWORKDAY_WI_FLOOR: f64 = -0.4;
/// Stress relief per fired vacation/sick-leave day, scaled by intensity.
const RELIEF_PER_INTENSITY: f64 = 1.5;
/// Extra sleep on non-workdays.
const NONWORKDAY_SLEEP_BONUS: f64 = 0.5;
/// Sleep hours lost per mg of caffeine.
const CAFFEINE_SLEEP_COEF: f64 = 0.0015;
/// kcal equivalent of one kilogram of body weight.
pub const KCAL_PER_KG: f64 = 7700.0;
/// Daily weight change clamp in kg.
pub const MAX_DAILY_WEIGHT_DELTA: f64 = 0.3;

/// Mutable simulation state carried day to day.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyState {
    pub stress: f64,
    pub sleep_quality: f64,
    /// Quantized to 3 decimals (the written precision) after every update.
    pub weight_kg: f64,
    pub pressure: Pressure,
    pub prev_sleep_hours: f64,
}

impl DailyState {
    /// Warm start at the profile's baselines.
    pub fn initial(profile: &UserProfile) -> Self {
        let q0 = clamp(
            10.0 - (profile.base_sleep_hours - 8.0).abs()
                - 0.4 * (profile.base_stress - 5.0).max(0.0),
            0.0,
            10.0,
        );
        DailyState {
            stress: profile.base_stress,
            sleep_quality: q0,
            weight_kg: round3(profile.baseline_weight_kg),
            pressure: Pressure::Normal,
            prev_sleep_hours: profile.base_sleep_hours,
        }
    }
}

/// One emitted individual-day observation. All fields are already at their
/// written precision.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyRecord {
    pub user_id: u64,
    pub date: Date,
    pub is_workday: bool,
    pub work_hours: f64,
    pub meetings_count: u32,
    pub emails_received: u32,
    pub pressure_state: Pressure,
    pub stress_level: f64,
    pub sleep_hours: f64,
    pub sleep_quality: f64,
    pub mood: f64,
    pub energy: f64,
    pub focus: f64,
    pub exercise_minutes: u32,
    pub outdoor_minutes: u32,
    pub caffeine_mg: u32,
    pub diet_quality: f64,
    pub screen_time_hours: f64,
    pub calories_intake: f64,
    pub calories_expended: f64,
    pub weight_kg: f64,
}

/// Key for one day's draw channels.
#[derive(Debug, Clone, Copy)]
pub struct DayCtx {
    pub seed: u64,
    pub user_id: u64,
    pub day_index: u32,
}

impl DayCtx {
    pub fn ch(&self, tag: Tag) -> Channel {
        Channel::new(self.seed, self.user_id, i64::from(self.day_index), tag)
    }

    fn noise(&self, tag: Tag, variable: &str, params: &SensitivityParams) -> f64 {
        self.ch(tag).normal(0, 0.0, params.noise(variable))
    }
}

/// Advance the pressure regime one day.
pub fn update_pressure(current: Pressure, ch: &Channel) -> Pressure {
    let row = match current {
        Pressure::Normal => &PRESSURE_MATRIX[0],
        Pressure::Elevated => &PRESSURE_MATRIX[1],
        Pressure::Critical => &PRESSURE_MATRIX[2],
    };
    match ch.categorical(0, row).expect("transition rows are positive") {
        0 => Pressure::Normal,
        1 => Pressure::Elevated,
        _ => Pressure::Critical,
    }
}

fn pressure_hours_bump(p: Pressure) -> f64 {
    match p {
        Pressure::Normal => 0.0,
        Pressure::Elevated => 0.1,
        Pressure::Critical => 0.25,
    }
}

/// Work variables for one day. Non-workdays produce zeros; workday hours
/// scale the profession baseline by the cycle and pressure bump, a fired
/// workload cap multiplies hours down, and meeting/email counts are Poisson
/// in the realized-hours ratio.
pub fn gen_work_vars(
    profile: &UserProfile,
    workday: bool,
    cycle: f64,
    pressure: Pressure,
    mods: &ActiveModifiers,
    params: &SensitivityParams,
    ctx: &DayCtx,
) -> (f64, u32, u32) {
    if !workday {
        return (0.0, 0, 0);
    }
    let spec = profile.profession;
    let mut hours = spec.base_work_hours
        * (1.0 + CYCLE_HOURS_COEF * cycle + pressure_hours_bump(pressure))
        + ctx.noise(tags::WORK_HOURS, "work_hours", params);
    if let Some(cap) = mods.workload_cap {
        if cap.fires {
            hours *= 1.0 - 0.25 * cap.intensity;
        }
    }
    let hours = round2(clamp(hours, 0.0, 16.0));

    let ratio = hours / spec.base_work_hours;
    let meetings = ctx.ch(tags::MEETINGS).poisson(0, spec.meeting_rate * ratio) as u32;
    let emails = ctx.ch(tags::EMAILS).poisson(0, spec.email_rate * ratio) as u32;
    (hours, meetings, emails)
}

/// Z-like workload score centered on the profession baselines.
pub fn workload_index(
    work_hours: f64,
    meetings: f64,
    emails: f64,
    profession: &ProfessionSpec,
) -> f64 {
    (work_hours - profession.base_work_hours) / 2.0
        + (meetings - profession.meeting_rate) / 4.0
        + (emails - profession.email_rate) / 30.0
}

/// Mean-reverting stress update. The workload index enters in full on
/// workdays and floored at [`NONWORKDAY_WI_FLOOR`] on days off.
#[allow(clippy::too_many_arguments)]
pub fn update_stress(
    prev_stress: f64,
    base_stress: f64,
    wi: f64,
    workday: bool,
    season: f64,
    cycle: f64,
    critical: bool,
    relief: f64,
    params: &SensitivityParams,
    ctx: &DayCtx,
) -> f64 {
    let rho = params.stress_persistence;
    let wi_effective = if workday { wi } else { wi.max(NONWORKDAY_WI_FLOOR) };
    let critical_bonus = if critical { CRITICAL_STRESS_BONUS } else { 0.0 };
    let s = rho * prev_stress
        + (1.0 - rho) * base_stress
        + params.workload_to_stress * wi_effective
        + params.season_amplitude * season
        + CYCLE_STRESS_COEF * cycle
        + critical_bonus
        - relief
        + ctx.noise(tags::STRESS, "stress", params);
    clamp(s, 0.0, 10.0)
}

/// Night-t sleep duration from stress, chronotype, caffeine, and workday
/// status.
pub fn gen_sleep(
    profile: &UserProfile,
    stress: f64,
    caffeine_mg: f64,
    workday: bool,
    params: &SensitivityParams,
    ctx: &DayCtx,
) -> f64 {
    let h = profile.base_sleep_hours
        + profile.chronotype.sleep_shift()
        - params.stress_to_sleep * (stress - 5.0).max(0.0)
        - CAFFEINE_SLEEP_COEF * caffeine_mg
        + if workday { 0.0 } else { NONWORKDAY_SLEEP_BONUS }
        + ctx.noise(tags::SLEEP, "sleep", params);
    clamp(h, 3.0, 12.0)
}

/// Slow sleep-quality evolution: a 0.9/0.1 exponential blend toward a target
/// set by how close sleep was to 8h and by stress overload. Per-day change
/// is bounded by 1.0.
pub fn update_sleep_quality(prev_quality: f64, sleep_hours: f64, stress: f64) -> f64 {
    let target = 10.0 - (sleep_hours - 8.0).abs() - 0.4 * (stress - 5.0).max(0.0);
    clamp(0.9 * prev_quality + 0.1 * target, 0.0, 10.0)
}

/// Lifestyle block output (already at written precision).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lifestyle {
    pub exercise_minutes: u32,
    pub outdoor_minutes: u32,
    pub caffeine_mg: u32,
    pub diet_quality: f64,
    pub screen_time_hours: f64,
}

/// Lifestyle variables as conditional responses to stress, regime,
/// day-of-week, season, and active interventions.
#[allow(clippy::too_many_arguments)]
pub fn gen_lifestyle(
    profile: &UserProfile,
    workday: bool,
    stress: f64,
    pressure: Pressure,
    season: f64,
    mods: &ActiveModifiers,
    work_hours: f64,
    params: &SensitivityParams,
    ctx: &DayCtx,
) -> Lifestyle {
    let critical = pressure == Pressure::Critical;
    let overload = (stress - 5.0).max(0.0);
    let program_boost = match mods.lifestyle_program {
        Some(m) if m.fires => m.intensity,
        _ => 0.0,
    };
    let day_off = !workday;

    let mut exercise = clamp(
        60.0 * profile.activity_tendency * (1.0 - 0.5 * f64::from(critical))
            + 15.0 * f64::from(day_off)
            + 20.0 * program_boost
            + ctx.noise(tags::EXERCISE, "exercise", params),
        0.0,
        240.0,
    );
    if matches!(mods.sick_leave, Some(m) if m.fires) {
        exercise = exercise.min(15.0);
    }

    let outdoor = clamp(
        30.0 + 40.0 * f64::from(day_off) - 20.0 * season
            + ctx.noise(tags::OUTDOOR, "outdoor", params),
        0.0,
        480.0,
    );

    let caffeine = clamp(
        150.0 + 250.0 * profile.caffeine_tendency + 20.0 * overload
            + ctx.noise(tags::CAFFEINE, "caffeine", params),
        0.0,
        800.0,
    );

    let diet = clamp(
        4.0 + 4.0 * profile.diet_tendency - 0.3 * overload - 0.8 * f64::from(critical)
            + 0.5 * program_boost
            + ctx.noise(tags::DIET, "diet", params),
        0.0,
        10.0,
    );

    let screen = clamp(
        3.0 + 0.3 * work_hours + ctx.noise(tags::SCREEN, "screen", params),
        0.0,
        16.0,
    );

    Lifestyle {
        exercise_minutes: exercise.round() as u32,
        outdoor_minutes: outdoor.round() as u32,
        caffeine_mg: caffeine.round() as u32,
        diet_quality: round2(diet),
        screen_time_hours: round2(screen),
    }
}

/// Mood, energy, and focus derived from sleep, stress, and lifestyle.
#[allow(clippy::too_many_arguments)]
pub fn gen_mood_energy_focus(
    sleep_hours: f64,
    sleep_quality: f64,
    stress: f64,
    exercise_minutes: f64,
    diet_quality: f64,
    params: &SensitivityParams,
    ctx: &DayCtx,
) -> (f64, f64, f64) {
    let h = sleep_hours - 7.0;
    let s = stress - 5.0;
    let q = sleep_quality - 5.0;
    let mood = clamp(
        5.0 + params.sleep_to_mood * h - params.stress_to_mood * s
            + 0.01 * exercise_minutes
            + 0.1 * (diet_quality - 5.0)
            + ctx.noise(tags::MOOD, "mood", params),
        0.0,
        10.0,
    );
    let energy = clamp(
        5.0 + 0.5 * h + 0.2 * q - 0.25 * s + 0.008 * exercise_minutes
            + ctx.noise(tags::ENERGY, "energy", params),
        0.0,
        10.0,
    );
    let focus = clamp(
        5.0 + 0.3 * h - 0.35 * s + 0.15 * q + ctx.noise(tags::FOCUS, "focus", params),
        0.0,
        10.0,
    );
    (mood, energy, focus)
}

/// Mifflin-St Jeor basal metabolic rate in kcal/day.
pub fn bmr(profile: &UserProfile, current_weight_kg: f64) -> f64 {
    debug_assert!(current_weight_kg > 0.0);
    let sex_term = match profile.sex {
        crate::population::Sex::Male => 5.0,
        crate::population::Sex::Female => -161.0,
    };
    10.0 * current_weight_kg + 6.25 * profile.height_cm - 5.0 * f64::from(profile.age) + sex_term
}

/// Daily energy expenditure and intake. Expenditure is BMR times a 1.2
/// activity factor plus exercise and commute terms; intake tracks
/// expenditure, inflated by stress overeating above stress 6 and deflated by
/// diet quality.
#[allow(clippy::too_many_arguments)]
pub fn energy_balance(
    profile: &UserProfile,
    current_weight_kg: f64,
    workday: bool,
    stress: f64,
    exercise_minutes: f64,
    diet_quality: f64,
    params: &SensitivityParams,
    ctx: &DayCtx,
) -> (f64, f64) {
    let commute = match profile.work_mode {
        WorkMode::Onsite => 80.0,
        WorkMode::Hybrid if workday => 40.0,
        _ => 0.0,
    };
    let expended = bmr(profile, current_weight_kg) * 1.2 + 6.0 * exercise_minutes + commute;
    let intake = expended
        * (1.0 + params.stress_overeat_gain * (stress - 6.0).max(0.0)
            - 0.01 * (diet_quality - 5.0))
        + ctx.noise(tags::INTAKE, "intake", params);
    debug_assert!(intake > 0.0 && expended > 0.0);
    (intake, expended)
}

/// Apply one day's clamped energy balance to the weight (full precision; the
/// step quantizes the result to the written 3 decimals).
pub fn update_weight(weight_kg: f64, intake: f64, expended: f64) -> f64 {
    let delta = clamp(
        (intake - expended) / KCAL_PER_KG,
        -MAX_DAILY_WEIGHT_DELTA,
        MAX_DAILY_WEIGHT_DELTA,
    );
    weight_kg + delta
}

/// Advance one user one day, updating `state` and emitting the day's record.
pub fn step_day(
    state: &mut DailyState,
    profile: &UserProfile,
    d: SimDate,
    mods: &ActiveModifiers,
    config: &GeneratorConfig,
) -> DailyRecord {
    let params = &config.sensitivities;
    let ctx = DayCtx {
        seed: config.seed,
        user_id: profile.user_id,
        day_index: d.day_index,
    };

    state.pressure = update_pressure(state.pressure, &ctx.ch(tags::PRESSURE));
    let critical = state.pressure == Pressure::Critical;

    let workday = if mods.forces_non_workday() {
        false
    } else {
        calendar::is_workday(d, profile, config.seed)
    };

    let cycle = calendar::workload_cycle_factor(d, profile.user_id, config.seed);
    let season = calendar::season_factor(d);

    let (work_hours, meetings, emails) =
        gen_work_vars(profile, workday, cycle, state.pressure, mods, params, &ctx);
    let wi = workload_index(work_hours, f64::from(meetings), f64::from(emails), profile.profession);

    let mut relief = 0.0;
    if let Some(m) = mods.vacation {
        if m.fires {
            relief += RELIEF_PER_INTENSITY * m.intensity;
        }
    }
    if let Some(m) = mods.sick_leave {
        if m.fires {
            relief += RELIEF_PER_INTENSITY * m.intensity;
        }
    }

    let stress = update_stress(
        state.stress,
        profile.base_stress,
        wi,
        workday,
        season,
        cycle,
        critical,
        relief,
        params,
        &ctx,
    );

    let lifestyle = gen_lifestyle(
        profile,
        workday,
        stress,
        state.pressure,
        season,
        mods,
        work_hours,
        params,
        &ctx,
    );

    let sleep_hours = gen_sleep(
        profile,
        stress,
        f64::from(lifestyle.caffeine_mg),
        workday,
        params,
        &ctx,
    );
    let sleep_quality = update_sleep_quality(state.sleep_quality, sleep_hours, stress);

    let (mood, mut energy, focus) = gen_mood_energy_focus(
        sleep_hours,
        sleep_quality,
        stress,
        f64::from(lifestyle.exercise_minutes),
        lifestyle.diet_quality,
        params,
        &ctx,
    );
    if matches!(mods.sick_leave, Some(m) if m.fires) {
        energy = clamp(energy - 1.0, 0.0, 10.0);
    }

    let (intake, expended) = energy_balance(
        profile,
        state.weight_kg,
        workday,
        stress,
        f64::from(lifestyle.exercise_minutes),
        lifestyle.diet_quality,
        params,
        &ctx,
    );
    let intake = round2(intake);
    let expended = round2(expended);
    let weight = round3(update_weight(state.weight_kg, intake, expended));

    state.stress = stress;
    state.sleep_quality = sleep_quality;
    state.weight_kg = weight;
    state.prev_sleep_hours = sleep_hours;

    DailyRecord {
        user_id: profile.user_id,
        date: d.date,
        is_workday: workday,
        work_hours,
        meetings_count: meetings,
        emails_received: emails,
        pressure_state: state.pressure,
        stress_level: round2(stress),
        sleep_hours: round2(sleep_hours),
        sleep_quality: round2(sleep_quality),
        mood: round2(mood),
        energy: round2(energy),
        focus: round2(focus),
        exercise_minutes: lifestyle.exercise_minutes,
        outdoor_minutes: lifestyle.outdoor_minutes,
        caffeine_mg: lifestyle.caffeine_mg,
        diet_quality: lifestyle.diet_quality,
        screen_time_hours: lifestyle.screen_time_hours,
        calories_intake: intake,
        calories_expended: expended,
        weight_kg: weight,
    }
}

/// Simulate one user across the whole configured range: one record per day,
/// chronological, derived only from the profile, carried state, calendar,
/// active interventions, and keyed draws.
pub fn simulate_user(
    profile: &UserProfile,
    events: &[InterventionEvent],
    config: &GeneratorConfig,
) -> Vec<DailyRecord> {
    let days = calendar::sim_days(config.start_date, config.end_date);
    let mut state = DailyState::initial(profile);
    let mut records = Vec::with_capacity(days.len());
    for d in days {
        let mods = interventions::active_modifiers(
            events,
            d.date,
            d.day_index,
            config.seed,
            profile.user_id,
            config,
        );
        records.push(step_day(&mut state, profile, d, &mods, config));
    }
    records
}

/// The quantized-at-written-precision weight recurrence the released files
/// satisfy; the validator and the conservation oracle recompute it from the
/// CSV columns alone.
pub fn replay_weight(baseline_weight_kg: f64, intake: f64, expended: f64) -> f64 {
    round3(update_weight(baseline_weight_kg, intake, expended))
}
