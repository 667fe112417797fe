//! Deterministic, order-independent randomness keyed by
//! `(seed, user, day, channel, draw index)`.
//!
//! Every draw is a pure function of its full key: there is no shared RNG
//! state to advance, so results do not depend on iteration or
//! parallelization order, and adding users or extending the date range never
//! changes existing draws. A channel identifies one simulated variable
//! (e.g. `stress`, `profile.age`); day index -1 is reserved for static
//! profile and scheduling draws.
//!
//! Construction: the key is folded through a splitmix64-style avalanche into
//! a 64-bit base, and draw `k` is `mix64(base + k * GOLDEN)` — the splitmix64
//! stream seeded at the base. The normal transform is a single-branch
//! Box-Muller (cosine) over two uniform draws; this choice is fixed so
//! outputs are bit-stable for a given platform and build.

/// A registered channel tag (an FNV-1a hash of the tag name).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tag(pub u64);

const fn fnv1a64(s: &str) -> u64 {
    let bytes = s.as_bytes();
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    let mut i = 0;
    while i < bytes.len() {
        hash ^= bytes[i] as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        i += 1;
    }
    hash
}

const fn tag(name: &str) -> Tag {
    Tag(fnv1a64(name))
}

/// The full channel-tag registry. Tags live here and nowhere else so streams
/// cannot collide by accident.
pub mod tags {
    use super::{tag, Tag};

    // Static profile draws (day index -1).
    pub const PROFILE_AGE: Tag = tag("profile.age");
    pub const PROFILE_SEX: Tag = tag("profile.sex");
    pub const PROFILE_HEIGHT: Tag = tag("profile.height");
    pub const PROFILE_BMI: Tag = tag("profile.bmi");
    pub const PROFILE_PROFESSION: Tag = tag("profile.profession");
    pub const PROFILE_WORK_MODE: Tag = tag("profile.work_mode");
    pub const PROFILE_CHRONOTYPE: Tag = tag("profile.chronotype");
    pub const PROFILE_ACTIVITY: Tag = tag("profile.activity_tendency");
    pub const PROFILE_DIET: Tag = tag("profile.diet_tendency");
    pub const PROFILE_CAFFEINE: Tag = tag("profile.caffeine_tendency");
    pub const PROFILE_BASE_STRESS: Tag = tag("profile.base_stress");
    pub const PROFILE_BASE_SLEEP: Tag = tag("profile.base_sleep_hours");

    // Per-user scheduling draws (day index -1).
    pub const CYCLE_PHASE: Tag = tag("cycle_phase");
    pub const SCHED_VACATION: Tag = tag("sched.vacation");
    pub const SCHED_SICK_LEAVE: Tag = tag("sched.sick_leave");
    pub const SCHED_WORKLOAD_CAP: Tag = tag("sched.workload_cap");
    pub const SCHED_LIFESTYLE_PROGRAM: Tag = tag("sched.lifestyle_program");

    // Daily draws.
    pub const WEEKEND_SHIFT: Tag = tag("workday.weekend");
    pub const PRESSURE: Tag = tag("pressure");
    pub const WORK_HOURS: Tag = tag("work_hours");
    pub const MEETINGS: Tag = tag("meetings");
    pub const EMAILS: Tag = tag("emails");
    pub const STRESS: Tag = tag("stress");
    pub const SLEEP: Tag = tag("sleep");
    pub const EXERCISE: Tag = tag("exercise");
    pub const OUTDOOR: Tag = tag("outdoor");
    pub const CAFFEINE: Tag = tag("caffeine");
    pub const DIET: Tag = tag("diet");
    pub const SCREEN: Tag = tag("screen");
    pub const MOOD: Tag = tag("mood");
    pub const ENERGY: Tag = tag("energy");
    pub const FOCUS: Tag = tag("focus");
    pub const INTAKE: Tag = tag("intake");
    pub const FIRE_VACATION: Tag = tag("fire.vacation");
    pub const FIRE_SICK_LEAVE: Tag = tag("fire.sick_leave");
    pub const FIRE_WORKLOAD_CAP: Tag = tag("fire.workload_cap");
    pub const FIRE_LIFESTYLE_PROGRAM: Tag = tag("fire.lifestyle_program");
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const USER_SALT: u64 = 0xA076_1D64_78BD_642F;
const DAY_SALT: u64 = 0xE703_7ED1_A0B4_28DB;

/// One independent draw stream for a `(seed, user, day, tag)` key.
#[derive(Debug, Clone, Copy)]
pub struct Channel {
    base: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RngError {
    #[error("categorical weights must be nonempty with a positive sum")]
    ZeroWeights,
}

impl Channel {
    pub fn new(seed: u64, user_id: u64, day_index: i64, tag: Tag) -> Self {
        let mut h = mix64(seed ^ GOLDEN);
        h = mix64(h ^ user_id.wrapping_mul(USER_SALT));
        h = mix64(h ^ (day_index as u64).wrapping_mul(DAY_SALT));
        h = mix64(h ^ tag.0);
        Channel { base: h }
    }

    #[inline]
    fn value(&self, k: u64) -> u64 {
        mix64(self.base.wrapping_add(k.wrapping_mul(GOLDEN)))
    }

    /// Uniform draw in [0, 1).
    #[inline]
    pub fn uniform(&self, k: u64) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.value(k) >> 11) as f64 * SCALE
    }

    /// Normal draw; `sd == 0` returns `mean` exactly. Consumes uniform slots
    /// `2k` and `2k + 1`.
    pub fn normal(&self, k: u64, mean: f64, sd: f64) -> f64 {
        debug_assert!(sd >= 0.0);
        if sd == 0.0 {
            return mean;
        }
        let u1 = self.uniform(2 * k);
        let u2 = self.uniform(2 * k + 1);
        // 1 - u1 is in (0, 1], keeping the log finite.
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        mean + sd * r * (std::f64::consts::TAU * u2).cos()
    }

    /// True with probability `p`.
    #[inline]
    pub fn bernoulli(&self, k: u64, p: f64) -> bool {
        debug_assert!((0.0..=1.0).contains(&p));
        self.uniform(k) < p
    }

    /// Index `i` with probability `weights[i] / sum(weights)`.
    pub fn categorical(&self, k: u64, weights: &[f64]) -> Result<usize, RngError> {
        let total: f64 = weights.iter().sum();
        if weights.is_empty()
            || total <= 0.0
            || total.is_nan()
            || weights.iter().any(|w| *w < 0.0)
        {
            return Err(RngError::ZeroWeights);
        }
        let mut target = self.uniform(k) * total;
        for (i, w) in weights.iter().enumerate() {
            if target < *w {
                return Ok(i);
            }
            target -= w;
        }
        // Floating-point edge: the final positive weight wins.
        Ok(weights.iter().rposition(|w| *w > 0.0).unwrap())
    }

    /// Poisson draw with mean `lambda`, consuming uniform slots from
    /// `k_base` upward. Product method for small means, rounded-normal
    /// approximation for large ones (the cutoff is fixed, so draws stay
    /// deterministic for a given lambda).
    pub fn poisson(&self, k_base: u64, lambda: f64) -> u64 {
        if lambda <= 0.0 {
            return 0;
        }
        if lambda > 30.0 {
            let x = self.normal(k_base, lambda, lambda.sqrt());
            return x.max(0.0).round() as u64;
        }
        let limit = (-lambda).exp();
        let mut product = 1.0;
        let mut count = 0u64;
        loop {
            product *= self.uniform(k_base + count);
            if product <= limit {
                return count;
            }
            count += 1;
        }
    }
}
