//! Intervention scheduling and per-day probabilistic modifiers.
//!
//! Interventions are stochastic exposure windows (vacation, sick leave,
//! workload cap, lifestyle program). Absence is deterministic — vacation and
//! sick leave always make the day a non-workday — but the wellbeing effect
//! only applies on days its per-(user, day, type) Bernoulli fires, so
//! effects show up in aggregate without pointwise guarantees.

use crate::calendar::Date;
use crate::config::GeneratorConfig;
use crate::rng::{tags, Channel, Tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum InterventionType {
    Vacation,
    SickLeave,
    WorkloadCap,
    LifestyleProgram,
}

impl InterventionType {
    pub const ALL: [InterventionType; 4] = [
        InterventionType::Vacation,
        InterventionType::SickLeave,
        InterventionType::WorkloadCap,
        InterventionType::LifestyleProgram,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InterventionType::Vacation => "vacation",
            InterventionType::SickLeave => "sick_leave",
            InterventionType::WorkloadCap => "workload_cap",
            InterventionType::LifestyleProgram => "lifestyle_program",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.as_str() == s)
    }

    fn sched_tag(self) -> Tag {
        match self {
            InterventionType::Vacation => tags::SCHED_VACATION,
            InterventionType::SickLeave => tags::SCHED_SICK_LEAVE,
            InterventionType::WorkloadCap => tags::SCHED_WORKLOAD_CAP,
            InterventionType::LifestyleProgram => tags::SCHED_LIFESTYLE_PROGRAM,
        }
    }

    fn fire_tag(self) -> Tag {
        match self {
            InterventionType::Vacation => tags::FIRE_VACATION,
            InterventionType::SickLeave => tags::FIRE_SICK_LEAVE,
            InterventionType::WorkloadCap => tags::FIRE_WORKLOAD_CAP,
            InterventionType::LifestyleProgram => tags::FIRE_LIFESTYLE_PROGRAM,
        }
    }
}

/// A scheduled exposure window. `intervention_id` is assigned globally by
/// the export layer; scheduling itself is purely per-user.
#[derive(Debug, Clone, PartialEq)]
pub struct InterventionEvent {
    pub intervention_id: u64,
    pub user_id: u64,
    pub ty: InterventionType,
    pub start_date: Date,
    /// Inclusive.
    pub end_date: Date,
    pub intensity: f64,
}

impl InterventionEvent {
    pub fn covers(&self, d: Date) -> bool {
        self.start_date <= d && d <= self.end_date
    }

    #[cfg(test)]
    fn overlaps(&self, start: Date, end: Date) -> bool {
        self.start_date <= end && start <= self.end_date
    }
}

/// Schedule all intervention windows for one user. Event counts are Poisson
/// in the configured annual rate; starts are uniform over the range;
/// durations uniform in the type's range; same-type overlaps are re-drawn up
/// to 10 times and then dropped; events are truncated at the simulation end.
pub fn schedule_interventions(
    user_id: u64,
    config: &GeneratorConfig,
) -> Vec<InterventionEvent> {
    let total_days = config.total_days() as u64;
    let years = config.years();
    let mut events: Vec<InterventionEvent> = Vec::new();

    for ty in InterventionType::ALL {
        let params = config.intervention_params.for_type(ty);
        let ch = Channel::new(config.seed, user_id, -1, ty.sched_tag());
        let count = ch.poisson(0, params.annual_rate * years);
        // Draw slots: k=0.. reserved above for the count; proposals use a
        // disjoint region so adding attempts never shifts the count draw.
        let mut k = 1000;
        let mut accepted: Vec<(Date, Date, f64)> = Vec::new();
        for _ in 0..count {
            for _attempt in 0..10 {
                let start_offset = (ch.uniform(k) * total_days as f64) as i64;
                let dur_span = f64::from(params.duration_range.1 - params.duration_range.0 + 1);
                let duration =
                    i64::from(params.duration_range.0) + (ch.uniform(k + 1) * dur_span) as i64;
                let intensity = crate::num::quantize(
                    params.intensity_range.0
                        + ch.uniform(k + 2)
                            * (params.intensity_range.1 - params.intensity_range.0),
                    2,
                );
                k += 3;
                let start = Date::from_days(config.start_date.days() + start_offset);
                let end = Date::from_days(
                    (start.days() + duration - 1).min(config.end_date.days()),
                );
                if accepted.iter().all(|(s, e, _)| !(s <= &end && &start <= e)) {
                    accepted.push((start, end, intensity));
                    break;
                }
            }
        }
        for (start_date, end_date, intensity) in accepted {
            events.push(InterventionEvent {
                intervention_id: 0,
                user_id,
                ty,
                start_date,
                end_date,
                intensity,
            });
        }
    }

    events.sort_by_key(|e| (e.start_date, e.ty));
    events
}

/// One active intervention's daily modifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modifier {
    pub intensity: f64,
    /// Whether the wellbeing effect applies today.
    pub fires: bool,
}

/// The per-day modifier set the dynamics step consumes.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ActiveModifiers {
    pub vacation: Option<Modifier>,
    pub sick_leave: Option<Modifier>,
    pub workload_cap: Option<Modifier>,
    pub lifestyle_program: Option<Modifier>,
}

impl ActiveModifiers {
    /// Vacation and sick leave force absence regardless of firing.
    pub fn forces_non_workday(&self) -> bool {
        self.vacation.is_some() || self.sick_leave.is_some()
    }

    pub fn any_active(&self) -> bool {
        self.vacation.is_some()
            || self.sick_leave.is_some()
            || self.workload_cap.is_some()
            || self.lifestyle_program.is_some()
    }
}

/// Resolve which interventions cover day `d` and whether each fires.
pub fn active_modifiers(
    events: &[InterventionEvent],
    d: Date,
    day_index: u32,
    seed: u64,
    user_id: u64,
    config: &GeneratorConfig,
) -> ActiveModifiers {
    let mut out = ActiveModifiers::default();
    for event in events.iter().filter(|e| e.covers(d)) {
        let p = config.intervention_params.for_type(event.ty).effect_probability;
        let fires = Channel::new(seed, user_id, i64::from(day_index), event.ty.fire_tag())
            .bernoulli(0, p);
        let modifier = Modifier {
            intensity: event.intensity,
            fires,
        };
        match event.ty {
            InterventionType::Vacation => out.vacation = Some(modifier),
            InterventionType::SickLeave => out.sick_leave = Some(modifier),
            InterventionType::WorkloadCap => out.workload_cap = Some(modifier),
            InterventionType::LifestyleProgram => out.lifestyle_program = Some(modifier),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::default_config;

    #[test]
    fn zero_rates_schedule_nothing() {
        let mut cfg = default_config();
        cfg.intervention_params.vacation.annual_rate = 0.0;
        cfg.intervention_params.sick_leave.annual_rate = 0.0;
        cfg.intervention_params.workload_cap.annual_rate = 0.0;
        cfg.intervention_params.lifestyle_program.annual_rate = 0.0;
        for user in 1..=50 {
            assert!(schedule_interventions(user, &cfg).is_empty());
        }
    }

    #[test]
    fn vacation_count_matches_poisson_mean() {
        let cfg = default_config();
        let total: usize = (1..=1000u64)
            .map(|u| {
                schedule_interventions(u, &cfg)
                    .iter()
                    .filter(|e| e.ty == InterventionType::Vacation)
                    .count()
            })
            .sum();
        let mean = total as f64 / 1000.0;
        assert!((2.6..=3.4).contains(&mean), "mean vacation events {mean}");
    }

    #[test]
    fn events_stay_inside_the_simulation_range() {
        let cfg = default_config();
        for user in 1..=200 {
            for e in schedule_interventions(user, &cfg) {
                assert!(e.start_date >= cfg.start_date);
                assert!(e.end_date <= cfg.end_date);
                assert!(e.start_date <= e.end_date);
                assert!((0.0..=1.0).contains(&e.intensity));
            }
        }
    }

    #[test]
    fn same_type_events_never_overlap() {
        let cfg = default_config();
        for user in 1..=300 {
            let events = schedule_interventions(user, &cfg);
            for ty in InterventionType::ALL {
                let of_type: Vec<&InterventionEvent> =
                    events.iter().filter(|e| e.ty == ty).collect();
                for (i, a) in of_type.iter().enumerate() {
                    for b in &of_type[i + 1..] {
                        assert!(
                            !a.overlaps(b.start_date, b.end_date),
                            "user {user}: overlapping {ty:?} events"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn scheduling_is_deterministic() {
        let cfg = default_config();
        assert_eq!(schedule_interventions(7, &cfg), schedule_interventions(7, &cfg));
    }

    #[test]
    fn modifiers_empty_when_nothing_covers_the_day() {
        let cfg = default_config();
        let events = vec![InterventionEvent {
            intervention_id: 1,
            user_id: 1,
            ty: InterventionType::Vacation,
            start_date: "2024-03-01".parse().unwrap(),
            end_date: "2024-03-10".parse().unwrap(),
            intensity: 0.5,
        }];
        let mods = active_modifiers(&events, "2024-02-01".parse().unwrap(), 31, cfg.seed, 1, &cfg);
        assert_eq!(mods, ActiveModifiers::default());
        assert!(!mods.any_active());
    }

    #[test]
    fn effect_probability_extremes_and_frequency() {
        let mut cfg = default_config();
        let event = |u| InterventionEvent {
            intervention_id: 1,
            user_id: u,
            ty: InterventionType::Vacation,
            start_date: cfg.start_date,
            end_date: cfg.end_date,
            intensity: 0.5,
        };

        cfg.intervention_params.vacation.effect_probability = 1.0;
        for day in 0..100u32 {
            let d = Date::from_days(cfg.start_date.days() + i64::from(day));
            let mods = active_modifiers(&[event(1)], d, day, cfg.seed, 1, &cfg);
            assert!(mods.vacation.unwrap().fires);
        }

        cfg.intervention_params.vacation.effect_probability = 0.7;
        let mut fired = 0u32;
        let mut active = 0u32;
        for user in 1..=20u64 {
            for day in 0..500u32 {
                let d = Date::from_days(cfg.start_date.days() + i64::from(day));
                let mods = active_modifiers(&[event(user)], d, day, cfg.seed, user, &cfg);
                active += 1;
                if mods.vacation.unwrap().fires {
                    fired += 1;
                }
            }
        }
        let freq = f64::from(fired) / f64::from(active);
        assert!((0.68..=0.72).contains(&freq), "firing frequency {freq}");
    }
}
