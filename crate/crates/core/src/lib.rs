//! Deterministic generator for the FLOW synthetic work-life/wellbeing dataset.
//!
//! A rule-based daily simulation with explicit feedback loops between
//! workload, stress, sleep, mood, lifestyle, and body weight. Given a seed
//! and a configuration it emits a five-table CSV release (users, daily logs,
//! weekly summaries, interventions, and a denormalized wide table) and can
//! validate any dataset directory in that format against a built-in
//! sanity-check suite.
//!
//! Every random draw is a pure function of `(seed, user, day, channel)`, so
//! output is byte-identical across runs, thread counts, and population
//! subsets: user 17's rows do not change when the population grows.

pub mod aggregate;
pub mod calendar;
pub mod config;
pub mod dynamics;
pub mod export;
pub mod interventions;
pub mod num;
pub mod population;
pub mod rng;
pub mod schema;
pub mod validate;

pub use calendar::{Date, SimDate};
pub use config::{GeneratorConfig, InterventionParams, SensitivityParams};
pub use dynamics::{DailyRecord, DailyState};
pub use interventions::{InterventionEvent, InterventionType};
pub use population::{ProfessionSpec, UserProfile};
