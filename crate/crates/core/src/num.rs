//! Fixed-decimal quantization and formatting shared by the simulation,
//! export, and validation paths.
//!
//! Every value that reaches a CSV cell is quantized with [`quantize`] first
//! and formatted with [`fmt_fixed`]. Parsing the formatted text back yields
//! bit-identical `f64`s, which is what lets the validator recompute weekly
//! aggregates and weight trajectories exactly from the released files.

/// Round `x` to `decimals` fractional digits (half away from zero).
///
/// Negative zero is normalized to +0.0 so formatted output never carries a
/// stray sign.
pub fn quantize(x: f64, decimals: u32) -> f64 {
    let p = 10f64.powi(decimals as i32);
    let v = (x * p).round() / p;
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// Round to 2 decimals.
pub fn round2(x: f64) -> f64 {
    quantize(x, 2)
}

/// Round to 3 decimals.
pub fn round3(x: f64) -> f64 {
    quantize(x, 3)
}

/// Fixed-decimal rendering, never scientific notation.
pub fn fmt_fixed(x: f64, decimals: usize) -> String {
    let v = if x == 0.0 { 0.0 } else { x };
    format!("{v:.decimals$}")
}

/// Clamp helper that keeps NaN out of the simulation state.
pub fn clamp(x: f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(x.is_finite(), "clamp input must be finite");
    x.max(lo).min(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantize_round_trips_through_text() {
        for &(v, dp) in &[(3.17159, 2u32), (0.005, 2), (123.4567, 3), (-2.75828, 2)] {
            let q = quantize(v, dp);
            let s = fmt_fixed(q, dp as usize);
            let back: f64 = s.parse().unwrap();
            assert_eq!(q.to_bits(), back.to_bits(), "{v} -> {s}");
        }
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(fmt_fixed(quantize(-0.0004, 2), 2), "0.00");
    }
}
