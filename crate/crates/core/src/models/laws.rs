//! Edge-probability laws of the model family.

use super::params::{DeltaIgamParams, Igam2Params, IgamParams};
use crate::error::{Error, Result};

/// `c^(-1 - min(hu, hv))`.
pub fn edge_probability(p: &IgamParams, hu: u32, hv: u32) -> Result<f64> {
    p.check_level(hu)?;
    p.check_level(hv)?;
    Ok(scale_law(p.c, hu.min(hv) as f64))
}

#[inline]
pub(crate) fn scale_law(c: f64, h: f64) -> f64 {
    c.powf(-1.0 - h)
}

/// Core pairs (both heights at most `H0`) decay with `c1`, every other pair with `c2`.
pub fn edge_probability_igam2(p: &Igam2Params, hu: u32, hv: u32) -> Result<f64> {
    for h in [hu, hv] {
        if h > p.height {
            return Err(Error::LevelOutOfRange { level: h, max: p.height });
        }
    }
    Ok(igam2_law(p, hu, hv))
}

#[inline]
pub(crate) fn igam2_law(p: &Igam2Params, hu: u32, hv: u32) -> f64 {
    let c = if hu.max(hv) > p.core_threshold { p.c2 } else { p.c1 };
    scale_law(c, hu.min(hv) as f64)
}

/// Power mean `((a^δ + b^δ) / 2)^(1/δ)` of two nonnegative reals.
///
/// For `δ < 0` and a zero argument the mean is defined by its `δ -> -∞`
/// limit, the minimum (zero).
pub fn power_mean(a: f64, b: f64, delta: f64) -> f64 {
    if delta < 0.0 && (a == 0.0 || b == 0.0) {
        return a.min(b);
    }
    if a == b {
        return a;
    }
    // factor out the dominant term so large |delta| neither overflows nor underflows
    let (lo, hi) = (a.min(b), a.max(b));
    let pivot = if delta < 0.0 { lo } else { hi };
    let other = if delta < 0.0 { hi } else { lo };
    let ratio = (other / pivot).powf(delta);
    pivot * ((1.0 + ratio) / 2.0).powf(1.0 / delta)
}

/// `c^(-1 - M_δ(hu, hv))`. Heights may be real (continuous variant).
///
/// With `δ < 0` and a zero height, returns `c^(-1 - min(hu, hv)) = 1/c`.
pub fn edge_probability_delta(p: &DeltaIgamParams, hu: f64, hv: f64) -> Result<f64> {
    for h in [hu, hv] {
        if !(h >= 0.0) {
            return Err(Error::InvalidParams(format!("height {h} must be nonnegative")));
        }
    }
    Ok(scale_law(p.base.c, power_mean(hu, hv, p.delta)))
}

/// Directed law: the arc `x -> y` appears with probability `c^(-1 - h(y))`,
/// so arcs into prestigious nodes are likely and arcs out of them are not.
pub fn arc_probability(p: &IgamParams, h_tail: u32, h_head: u32) -> Result<f64> {
    p.check_level(h_tail)?;
    p.check_level(h_head)?;
    Ok(scale_law(p.c, h_head as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn base_law_examples() {
        let p = IgamParams::new(3, 2.0, 5).unwrap();
        assert_eq!(edge_probability(&p, 0, 5).unwrap(), 0.5);
        assert_eq!(edge_probability(&p, 1, 5).unwrap(), 0.25);
        assert_eq!(edge_probability(&p, 0, 0).unwrap(), 1.0 / p.c);
        assert!(matches!(edge_probability(&p, 0, 6), Err(Error::LevelOutOfRange { level: 6, max: 5 })));
    }

    #[test]
    fn igam2_examples() {
        let p = Igam2Params::new(3, 1.5, 2.5, 2, 6).unwrap();
        assert!(close(edge_probability_igam2(&p, 1, 1).unwrap(), 1.5f64.powi(-2), 1e-15));
        assert!(close(edge_probability_igam2(&p, 1, 1).unwrap(), 0.4444, 1e-4));
        assert!(close(edge_probability_igam2(&p, 1, 4).unwrap(), 0.16, 1e-15));
        assert!(close(edge_probability_igam2(&p, 3, 5).unwrap(), 0.0256, 1e-15));
        assert!(edge_probability_igam2(&p, 7, 0).is_err());
    }

    #[test]
    fn igam2_pair_at_bottom_uses_periphery_scale() {
        let p = Igam2Params::new(3, 1.5, 2.5, 5, 6).unwrap();
        assert_eq!(edge_probability_igam2(&p, 6, 6).unwrap(), 2.5f64.powi(-7));
        assert_eq!(edge_probability_igam2(&p, 5, 5).unwrap(), 1.5f64.powi(-6));
    }

    #[test]
    fn delta_law_examples() {
        let base = IgamParams::new(3, 2.0, 10).unwrap();
        let arith = DeltaIgamParams::new(base, 1.0).unwrap();
        for h in 0..=10 {
            let expect = 2f64.powi(-1 - h);
            assert!(close(edge_probability_delta(&arith, h as f64, h as f64).unwrap(), expect, 1e-15));
        }
        assert!(close(edge_probability_delta(&arith, 1.0, 3.0).unwrap(), 0.125, 1e-15));
    }

    #[test]
    fn delta_law_zero_height_singular_case() {
        let base = IgamParams::new(3, 2.0, 10).unwrap();
        let p = DeltaIgamParams::new(base, -3.0).unwrap();
        assert_eq!(edge_probability_delta(&p, 0.0, 4.0).unwrap(), 0.5);
        assert!(DeltaIgamParams::new(base, 0.0).is_err());
    }

    #[test]
    fn delta_law_approaches_min_as_delta_decreases() {
        // the gap to the min law shrinks monotonically as delta -> -inf
        let base = IgamParams::new(3, 2.0, 10).unwrap();
        let target = 2f64.powi(-3);
        let mut last = f64::INFINITY;
        for delta in [-1.0, -5.0, -50.0, -500.0, -5e4, -5e7] {
            let p = DeltaIgamParams::new(base, delta).unwrap();
            let gap = (edge_probability_delta(&p, 2.0, 7.0).unwrap() - target).abs();
            assert!(gap < last, "delta {delta}: gap {gap} >= {last}");
            last = gap;
        }
        assert!(last < 1e-6);
    }

    #[test]
    fn power_mean_extremes() {
        assert!(close(power_mean(2.0, 7.0, -1e6), 2.0, 1e-5));
        assert!(close(power_mean(2.0, 7.0, 1e6), 7.0, 1e-4));
        assert!(close(power_mean(2.0, 8.0, 1.0), 5.0, 1e-15));
        assert!(close(power_mean(2.0, 8.0, -1.0), 3.2, 1e-14));
    }

    #[test]
    fn directed_law() {
        let p = IgamParams::new(3, 2.0, 4).unwrap();
        // prestigious head is likely, prestigious tail pointing down is not
        assert_eq!(arc_probability(&p, 4, 0).unwrap(), 0.5);
        assert_eq!(arc_probability(&p, 0, 4).unwrap(), 2f64.powi(-5));
        assert_eq!(arc_probability(&p, 2, 2).unwrap(), 2f64.powi(-3));
    }
}
