//! Generator configuration: the full parameter surface, defaults, a flat
//! dotted-key JSON file format, and validation.
//!
//! The file format is a single flat JSON object whose keys use dots for
//! nested groups, e.g.:
//!
//! ```json
//! {
//!   "seed": 7,
//!   "population_size": 200,
//!   "sensitivities.stress_persistence": 0.5,
//!   "intervention_params.vacation.annual_rate": 2.0,
//!   "profession_mix.nurse": 3.0
//! }
//! ```
//!
//! Unspecified keys take defaults; unknown keys are rejected. Resolution
//! precedence for the seed is CLI flag > `FLOW_SEED` environment variable >
//! config file > default (the CLI layer applies the first two).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde_json::{Map, Value};

use crate::calendar::{span_days, Date};
use crate::interventions::InterventionType;

/// Default noise scale per daily variable (standard deviation of the
/// additive Gaussian term). Setting a scale to zero removes that noise
/// channel entirely, which the exact-formula tests rely on.
pub const NOISE_VARIABLES: &[(&str, f64)] = &[
    ("work_hours", 0.8),
    ("stress", 1.0),
    ("sleep", 0.45),
    ("exercise", 20.0),
    ("outdoor", 15.0),
    ("caffeine", 60.0),
    ("diet", 0.8),
    ("screen", 1.0),
    ("mood", 0.7),
    ("energy", 0.6),
    ("focus", 0.7),
    ("intake", 120.0),
];

/// Behavioral responsiveness parameters (all tunable via config).
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityParams {
    /// Day-to-day stress carryover rho in [0, 1).
    pub stress_persistence: f64,
    /// Stress points per workload-index unit.
    pub workload_to_stress: f64,
    /// Sleep hours lost per stress point above 5.
    pub stress_to_sleep: f64,
    /// Mood points lost per stress point above 5.
    pub stress_to_mood: f64,
    /// Mood points gained per sleep hour above 7.
    pub sleep_to_mood: f64,
    /// Fractional intake increase per stress point above 6.
    pub stress_overeat_gain: f64,
    /// Amplitude of the annual stress seasonality term.
    pub season_amplitude: f64,
    /// Per-variable additive noise standard deviations.
    pub noise_scales: BTreeMap<String, f64>,
}

impl Default for SensitivityParams {
    fn default() -> Self {
        SensitivityParams {
            stress_persistence: 0.6,
            workload_to_stress: 0.8,
            stress_to_sleep: 0.15,
            stress_to_mood: 0.35,
            sleep_to_mood: 0.4,
            stress_overeat_gain: 0.04,
            season_amplitude: 0.3,
            noise_scales: NOISE_VARIABLES
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        }
    }
}

impl SensitivityParams {
    pub fn noise(&self, variable: &str) -> f64 {
        self.noise_scales.get(variable).copied().unwrap_or(0.0)
    }

    /// All noise scales set to zero; structural variation only.
    pub fn with_zero_noise(mut self) -> Self {
        for v in self.noise_scales.values_mut() {
            *v = 0.0;
        }
        self
    }
}

/// Scheduling and effect parameters for one intervention type.
#[derive(Debug, Clone, PartialEq)]
pub struct InterventionTypeParams {
    /// Expected events per user per year.
    pub annual_rate: f64,
    /// Inclusive duration range in days.
    pub duration_range: (u32, u32),
    /// Intensity sampled uniformly from this range within [0, 1].
    pub intensity_range: (f64, f64),
    /// Per-day probability that the wellbeing modifier applies.
    pub effect_probability: f64,
}

/// Per-type intervention parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct InterventionParams {
    pub vacation: InterventionTypeParams,
    pub sick_leave: InterventionTypeParams,
    pub workload_cap: InterventionTypeParams,
    pub lifestyle_program: InterventionTypeParams,
}

impl Default for InterventionParams {
    fn default() -> Self {
        InterventionParams {
            vacation: InterventionTypeParams {
                annual_rate: 1.5,
                duration_range: (5, 14),
                intensity_range: (0.2, 0.7),
                effect_probability: 0.7,
            },
            sick_leave: InterventionTypeParams {
                annual_rate: 2.0,
                duration_range: (1, 5),
                intensity_range: (0.3, 1.0),
                effect_probability: 0.7,
            },
            workload_cap: InterventionTypeParams {
                annual_rate: 0.3,
                duration_range: (14, 60),
                intensity_range: (0.2, 0.8),
                effect_probability: 0.7,
            },
            lifestyle_program: InterventionTypeParams {
                annual_rate: 0.4,
                duration_range: (30, 90),
                intensity_range: (0.3, 0.9),
                effect_probability: 0.7,
            },
        }
    }
}

impl InterventionParams {
    pub fn for_type(&self, ty: InterventionType) -> &InterventionTypeParams {
        match ty {
            InterventionType::Vacation => &self.vacation,
            InterventionType::SickLeave => &self.sick_leave,
            InterventionType::WorkloadCap => &self.workload_cap,
            InterventionType::LifestyleProgram => &self.lifestyle_program,
        }
    }
}

/// The full generator parameter surface.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub population_size: u32,
    pub start_date: Date,
    /// Inclusive.
    pub end_date: Date,
    pub sensitivities: SensitivityParams,
    pub intervention_params: InterventionParams,
    /// Probability weights over the built-in profession table.
    pub profession_mix: BTreeMap<String, f64>,
    /// Probability weights over {remote, onsite, hybrid}.
    pub work_mode_mix: BTreeMap<String, f64>,
    pub emit_denormalized: bool,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 42,
            population_size: 1000,
            start_date: Date::from_ymd(2024, 1, 1).unwrap(),
            end_date: Date::from_ymd(2025, 12, 31).unwrap(),
            sensitivities: SensitivityParams::default(),
            intervention_params: InterventionParams::default(),
            profession_mix: crate::population::profession_table()
                .iter()
                .map(|p| (p.name.to_string(), 1.0))
                .collect(),
            work_mode_mix: [("remote", 0.35), ("onsite", 0.35), ("hybrid", 0.30)]
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            emit_denormalized: true,
        }
    }
}

/// The reference configuration reproducing the published release shape
/// (1,000 users over 2024-2025; 731 days).
pub fn default_config() -> GeneratorConfig {
    GeneratorConfig::default()
}

impl GeneratorConfig {
    pub fn total_days(&self) -> i64 {
        span_days(self.start_date, self.end_date)
    }

    pub fn years(&self) -> f64 {
        self.total_days() as f64 / 365.25
    }
}

/// One invariant violation, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigViolation {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error in {path}: {detail}")]
    Parse { path: String, detail: String },
    #[error("invalid config: {}", violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid { violations: Vec<ConfigViolation> },
}

/// Returns every invariant violation; empty means the config is valid for
/// all downstream modules.
pub fn validate_config(config: &GeneratorConfig) -> Vec<ConfigViolation> {
    let mut out = Vec::new();
    let mut violation = |field: &str, message: String| {
        out.push(ConfigViolation {
            field: field.to_string(),
            message,
        });
    };

    if config.population_size < 1 {
        violation("population_size", "must be at least 1".into());
    }
    if config.start_date > config.end_date {
        violation("start_date", "must not be after end_date".into());
    }

    let s = &config.sensitivities;
    let finite_nonneg = [
        ("sensitivities.workload_to_stress", s.workload_to_stress),
        ("sensitivities.stress_to_sleep", s.stress_to_sleep),
        ("sensitivities.stress_to_mood", s.stress_to_mood),
        ("sensitivities.sleep_to_mood", s.sleep_to_mood),
        ("sensitivities.stress_overeat_gain", s.stress_overeat_gain),
        ("sensitivities.season_amplitude", s.season_amplitude),
    ];
    for (field, v) in finite_nonneg {
        if !v.is_finite() || v < 0.0 {
            violation(field, format!("must be finite and nonnegative, got {v}"));
        }
    }
    if !s.stress_persistence.is_finite()
        || !(0.0..1.0).contains(&s.stress_persistence)
    {
        violation(
            "sensitivities.stress_persistence",
            format!("must lie in [0, 1), got {}", s.stress_persistence),
        );
    }
    for (name, v) in &s.noise_scales {
        if !v.is_finite() || *v < 0.0 {
            violation(
                &format!("sensitivities.noise_scales.{name}"),
                format!("must be finite and nonnegative, got {v}"),
            );
        }
    }

    for ty in InterventionType::ALL {
        let p = config.intervention_params.for_type(ty);
        let base = format!("intervention_params.{}", ty.as_str());
        if !p.annual_rate.is_finite() || p.annual_rate < 0.0 {
            violation(
                &format!("{base}.annual_rate"),
                format!("must be finite and nonnegative, got {}", p.annual_rate),
            );
        }
        if p.duration_range.0 < 1 || p.duration_range.0 > p.duration_range.1 {
            violation(
                &format!("{base}.duration_min"),
                format!(
                    "duration range [{}, {}] must be nonempty with min >= 1",
                    p.duration_range.0, p.duration_range.1
                ),
            );
        }
        let (lo, hi) = p.intensity_range;
        if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi > 1.0 || lo > hi {
            violation(
                &format!("{base}.intensity_min"),
                format!("intensity range [{lo}, {hi}] must be nonempty within [0, 1]"),
            );
        }
        if !p.effect_probability.is_finite() || !(0.0..=1.0).contains(&p.effect_probability) {
            violation(
                &format!("{base}.effect_probability"),
                format!("must lie in [0, 1], got {}", p.effect_probability),
            );
        }
    }

    check_mix(
        "profession_mix",
        &config.profession_mix,
        &crate::population::profession_table()
            .iter()
            .map(|p| p.name)
            .collect::<Vec<_>>(),
        &mut out,
    );
    check_mix(
        "work_mode_mix",
        &config.work_mode_mix,
        &["remote", "onsite", "hybrid"],
        &mut out,
    );

    out
}

fn check_mix(
    field: &str,
    mix: &BTreeMap<String, f64>,
    known: &[&str],
    out: &mut Vec<ConfigViolation>,
) {
    let mut total = 0.0;
    for (name, w) in mix {
        if !known.contains(&name.as_str()) {
            out.push(ConfigViolation {
                field: format!("{field}.{name}"),
                message: format!("unknown name; expected one of {known:?}"),
            });
        }
        if !w.is_finite() || *w < 0.0 {
            out.push(ConfigViolation {
                field: format!("{field}.{name}"),
                message: format!("weight must be finite and nonnegative, got {w}"),
            });
        } else {
            total += w;
        }
    }
    if total <= 0.0 || total.is_nan() {
        out.push(ConfigViolation {
            field: field.to_string(),
            message: "weights must sum to a positive value".into(),
        });
    }
}

/// Load a config file, applying defaults for unspecified keys and
/// validating the result. An empty file yields the default config.
pub fn load_config(path: &Path) -> Result<GeneratorConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text, &path.display().to_string())
}

/// Parse config text (the file body) against the defaults.
pub fn parse_config(text: &str, origin: &str) -> Result<GeneratorConfig, ConfigError> {
    let mut config = GeneratorConfig::default();
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(config);
    }
    let map: Map<String, Value> =
        serde_json::from_str(trimmed).map_err(|e| ConfigError::Parse {
            path: origin.to_string(),
            detail: e.to_string(),
        })?;
    for (key, value) in &map {
        apply_key(&mut config, key, value).map_err(|detail| ConfigError::Parse {
            path: origin.to_string(),
            detail,
        })?;
    }
    let violations = validate_config(&config);
    if violations.is_empty() {
        Ok(config)
    } else {
        Err(ConfigError::Invalid { violations })
    }
}

fn as_f64(key: &str, v: &Value) -> Result<f64, String> {
    v.as_f64().ok_or_else(|| format!("{key}: expected a number, got {v}"))
}

fn as_u64(key: &str, v: &Value) -> Result<u64, String> {
    v.as_u64().ok_or_else(|| format!("{key}: expected a nonnegative integer, got {v}"))
}

fn as_bool(key: &str, v: &Value) -> Result<bool, String> {
    v.as_bool().ok_or_else(|| format!("{key}: expected true or false, got {v}"))
}

fn as_date(key: &str, v: &Value) -> Result<Date, String> {
    let s = v.as_str().ok_or_else(|| format!("{key}: expected a YYYY-MM-DD string, got {v}"))?;
    s.parse().map_err(|e| format!("{key}: {e}"))
}

fn apply_key(config: &mut GeneratorConfig, key: &str, v: &Value) -> Result<(), String> {
    match key {
        "seed" => config.seed = as_u64(key, v)?,
        "population_size" => {
            config.population_size = u32::try_from(as_u64(key, v)?)
                .map_err(|_| format!("{key}: value out of range"))?;
        }
        "start_date" => config.start_date = as_date(key, v)?,
        "end_date" => config.end_date = as_date(key, v)?,
        "emit_denormalized" => config.emit_denormalized = as_bool(key, v)?,
        _ => {
            if let Some(rest) = key.strip_prefix("sensitivities.") {
                return apply_sensitivity(&mut config.sensitivities, key, rest, v);
            }
            if let Some(rest) = key.strip_prefix("intervention_params.") {
                return apply_intervention(&mut config.intervention_params, key, rest, v);
            }
            if let Some(name) = key.strip_prefix("profession_mix.") {
                config.profession_mix.insert(name.to_string(), as_f64(key, v)?);
                return Ok(());
            }
            if let Some(name) = key.strip_prefix("work_mode_mix.") {
                config.work_mode_mix.insert(name.to_string(), as_f64(key, v)?);
                return Ok(());
            }
            return Err(format!("unknown config key {key:?}"));
        }
    }
    Ok(())
}

fn apply_sensitivity(
    s: &mut SensitivityParams,
    key: &str,
    rest: &str,
    v: &Value,
) -> Result<(), String> {
    match rest {
        "stress_persistence" => s.stress_persistence = as_f64(key, v)?,
        "workload_to_stress" => s.workload_to_stress = as_f64(key, v)?,
        "stress_to_sleep" => s.stress_to_sleep = as_f64(key, v)?,
        "stress_to_mood" => s.stress_to_mood = as_f64(key, v)?,
        "sleep_to_mood" => s.sleep_to_mood = as_f64(key, v)?,
        "stress_overeat_gain" => s.stress_overeat_gain = as_f64(key, v)?,
        "season_amplitude" => s.season_amplitude = as_f64(key, v)?,
        _ => {
            if let Some(name) = rest.strip_prefix("noise_scales.") {
                if !NOISE_VARIABLES.iter().any(|(n, _)| *n == name) {
                    return Err(format!("unknown noise variable {name:?} in {key:?}"));
                }
                s.noise_scales.insert(name.to_string(), as_f64(key, v)?);
                return Ok(());
            }
            return Err(format!("unknown config key {key:?}"));
        }
    }
    Ok(())
}

fn apply_intervention(
    p: &mut InterventionParams,
    key: &str,
    rest: &str,
    v: &Value,
) -> Result<(), String> {
    let (ty_name, field) = rest
        .split_once('.')
        .ok_or_else(|| format!("unknown config key {key:?}"))?;
    let ty = InterventionType::parse(ty_name)
        .ok_or_else(|| format!("unknown intervention type {ty_name:?} in {key:?}"))?;
    let params = match ty {
        InterventionType::Vacation => &mut p.vacation,
        InterventionType::SickLeave => &mut p.sick_leave,
        InterventionType::WorkloadCap => &mut p.workload_cap,
        InterventionType::LifestyleProgram => &mut p.lifestyle_program,
    };
    match field {
        "annual_rate" => params.annual_rate = as_f64(key, v)?,
        "duration_min" => {
            params.duration_range.0 = u32::try_from(as_u64(key, v)?)
                .map_err(|_| format!("{key}: value out of range"))?;
        }
        "duration_max" => {
            params.duration_range.1 = u32::try_from(as_u64(key, v)?)
                .map_err(|_| format!("{key}: value out of range"))?;
        }
        "intensity_min" => params.intensity_range.0 = as_f64(key, v)?,
        "intensity_max" => params.intensity_range.1 = as_f64(key, v)?,
        "effect_probability" => params.effect_probability = as_f64(key, v)?,
        _ => return Err(format!("unknown config key {key:?}")),
    }
    Ok(())
}

/// Serialize to the flat dotted-key JSON document `load_config` accepts.
/// Keys are emitted in sorted order so the output is canonical.
pub fn serialize_config(config: &GeneratorConfig) -> String {
    let map = to_flat_map(config);
    let mut out = String::from("{\n");
    let mut first = true;
    for (k, v) in &map {
        if !first {
            out.push_str(",\n");
        }
        first = false;
        let _ = write!(out, "  {}: {}", Value::String(k.clone()), v);
    }
    out.push_str("\n}\n");
    out
}

fn to_flat_map(config: &GeneratorConfig) -> BTreeMap<String, Value> {
    let mut map = BTreeMap::new();
    let num = |x: f64| Value::from(x);
    map.insert("seed".into(), Value::from(config.seed));
    map.insert("population_size".into(), Value::from(config.population_size));
    map.insert("start_date".into(), Value::from(config.start_date.to_string()));
    map.insert("end_date".into(), Value::from(config.end_date.to_string()));
    map.insert("emit_denormalized".into(), Value::from(config.emit_denormalized));

    let s = &config.sensitivities;
    map.insert("sensitivities.stress_persistence".into(), num(s.stress_persistence));
    map.insert("sensitivities.workload_to_stress".into(), num(s.workload_to_stress));
    map.insert("sensitivities.stress_to_sleep".into(), num(s.stress_to_sleep));
    map.insert("sensitivities.stress_to_mood".into(), num(s.stress_to_mood));
    map.insert("sensitivities.sleep_to_mood".into(), num(s.sleep_to_mood));
    map.insert("sensitivities.stress_overeat_gain".into(), num(s.stress_overeat_gain));
    map.insert("sensitivities.season_amplitude".into(), num(s.season_amplitude));
    for (name, v) in &s.noise_scales {
        map.insert(format!("sensitivities.noise_scales.{name}"), num(*v));
    }

    for ty in InterventionType::ALL {
        let p = config.intervention_params.for_type(ty);
        let base = format!("intervention_params.{}", ty.as_str());
        map.insert(format!("{base}.annual_rate"), num(p.annual_rate));
        map.insert(format!("{base}.duration_min"), Value::from(p.duration_range.0));
        map.insert(format!("{base}.duration_max"), Value::from(p.duration_range.1));
        map.insert(format!("{base}.intensity_min"), num(p.intensity_range.0));
        map.insert(format!("{base}.intensity_max"), num(p.intensity_range.1));
        map.insert(format!("{base}.effect_probability"), num(p.effect_probability));
    }

    for (name, w) in &config.profession_mix {
        map.insert(format!("profession_mix.{name}"), num(*w));
    }
    for (name, w) in &config.work_mode_mix {
        map.insert(format!("work_mode_mix.{name}"), num(*w));
    }
    map
}

/// Stable hex digest of the canonical flat serialization, recorded in the
/// output manifest.
pub fn config_digest(config: &GeneratorConfig) -> String {
    let text = serialize_config(config);
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for b in text.bytes() {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_reproduce_reference_shape() {
        let cfg = default_config();
        assert_eq!(cfg.population_size, 1000);
        assert_eq!(cfg.start_date.to_string(), "2024-01-01");
        assert_eq!(cfg.end_date.to_string(), "2025-12-31");
        assert_eq!(cfg.total_days(), 731);
        assert!(cfg.emit_denormalized);
        assert!(cfg.sensitivities.noise_scales.values().all(|v| *v > 0.0));
        assert!(validate_config(&cfg).is_empty());
    }

    #[test]
    fn partial_override_keeps_defaults() {
        let cfg = parse_config(r#"{"seed": 7}"#, "test").unwrap();
        let mut expected = default_config();
        expected.seed = 7;
        assert_eq!(cfg, expected);
    }

    #[test]
    fn empty_file_is_default() {
        assert_eq!(parse_config("", "test").unwrap(), default_config());
        assert_eq!(parse_config("  \n", "test").unwrap(), default_config());
    }

    #[test]
    fn reversed_dates_name_the_field() {
        let err = parse_config(
            r#"{"start_date": "2025-01-01", "end_date": "2024-01-01"}"#,
            "test",
        )
        .unwrap_err();
        match err {
            ConfigError::Invalid { violations } => {
                assert!(violations.iter().any(|v| v.field == "start_date"));
            }
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = parse_config(r#"{"sensitivities.nope": 1.0}"#, "test").unwrap_err();
        assert!(err.to_string().contains("nope"));
    }

    #[test]
    fn validate_flags_each_violation_by_field() {
        let mut cfg = default_config();
        cfg.population_size = 0;
        cfg.sensitivities.stress_persistence = 1.0;
        let violations = validate_config(&cfg);
        let fields: Vec<&str> = violations.iter().map(|v| v.field.as_str()).collect();
        assert!(fields.contains(&"population_size"));
        assert!(fields.contains(&"sensitivities.stress_persistence"));
        assert_eq!(violations.len(), 2);
    }

    #[test]
    fn zero_weight_mix_is_invalid() {
        let mut cfg = default_config();
        for w in cfg.work_mode_mix.values_mut() {
            *w = 0.0;
        }
        let violations = validate_config(&cfg);
        assert!(violations.iter().any(|v| v.field == "work_mode_mix"));
    }

    #[test]
    fn serialize_round_trips() {
        let mut cfg = default_config();
        cfg.seed = 123456789;
        cfg.population_size = 17;
        cfg.sensitivities.stress_persistence = 0.45;
        cfg.sensitivities.noise_scales.insert("stress".into(), 0.0);
        cfg.intervention_params.vacation.annual_rate = 0.25;
        cfg.intervention_params.sick_leave.duration_range = (2, 3);
        cfg.profession_mix.insert("nurse".into(), 4.0);
        cfg.emit_denormalized = false;
        let text = serialize_config(&cfg);
        let back = parse_config(&text, "round-trip").unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn digest_is_stable_and_sensitive() {
        let a = config_digest(&default_config());
        let mut cfg = default_config();
        assert_eq!(a, config_digest(&cfg));
        cfg.seed = 43;
        assert_ne!(a, config_digest(&cfg));
    }
}
