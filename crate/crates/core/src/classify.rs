//! Operating-condition labels from the frequency decomposition.
//!
//! Unbalance shows up as shear-strain terms (`ρ_r`, `ω_r`) with no local
//! time variation; harmonics show up as local time variation (`ρ_t`, `ω_t`)
//! with no shear strain. The exact path reads those components directly; the
//! sampled path only has `ρ_v` and `ω_v` and attributes their ripple by its
//! dominant frequency.

use std::fmt;

use crate::error::{Error, Result};
use crate::geomfreq::GfSample;
use crate::lagrange::FrequencyComponents;

/// Minimum series length accepted by [`classify_components`].
pub const MIN_COMPONENT_SAMPLES: usize = 10;

/// Default threshold relative to the fundamental: `tol = 1e-3·ω_o`.
pub const DEFAULT_RELATIVE_TOL: f64 = 1e-3;

/// Ripple-to-fundamental ratio below which ripple is attributed to unbalance
/// (an ellipse ripples at 2ω_o, a harmonic h at (h−1)ω_o ≥ 4ω_o).
const UNBALANCE_RIPPLE_MAX: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionLabel {
    Dc,
    BalancedSinusoidal,
    UnbalancedSinusoidal,
    BalancedNonsinusoidal,
    MixedOrUnknown,
}

impl ConditionLabel {
    pub fn token(&self) -> &'static str {
        match self {
            ConditionLabel::Dc => "DC",
            ConditionLabel::BalancedSinusoidal => "BALANCED_SINUSOIDAL",
            ConditionLabel::UnbalancedSinusoidal => "UNBALANCED_SINUSOIDAL",
            ConditionLabel::BalancedNonsinusoidal => "BALANCED_NONSINUSOIDAL",
            ConditionLabel::MixedOrUnknown => "MIXED_OR_UNKNOWN",
        }
    }
}

impl fmt::Display for ConditionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Summary statistics used by the label rules.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FeatureVector {
    pub rms_rho_r: f64,
    pub rms_rho_t: f64,
    pub rms_omega_r: f64,
    pub rms_omega_t: f64,
    pub mean_omega_v: f64,
    /// Dominant ripple frequency of ρ_v over mean |ω_v|.
    pub dominant_ripple_ratio: f64,
    /// `(max|ω_v| + min|ω_v|) / (2·mean|ω_v|)`; equals ξ for an unbalanced
    /// ellipse. Reported only, not used for labelling.
    pub xi_estimate: f64,
}

impl FeatureVector {
    /// `key = value` lines, one per feature.
    pub fn report(&self) -> String {
        let rows = [
            ("rms_rho_r", self.rms_rho_r),
            ("rms_rho_t", self.rms_rho_t),
            ("rms_omega_r", self.rms_omega_r),
            ("rms_omega_t", self.rms_omega_t),
            ("mean_omega_v", self.mean_omega_v),
            ("dominant_ripple_ratio", self.dominant_ripple_ratio),
            ("xi_estimate", self.xi_estimate),
        ];
        rows.iter()
            .map(|(k, v)| format!("{k} = {v:.9e}\n"))
            .collect()
    }
}

fn rms(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut n) = (0.0, 0usize);
    for x in xs {
        s += x * x;
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        (s / n as f64).sqrt()
    }
}

fn label_from(
    rho_r: f64,
    omega_r: f64,
    rho_t: f64,
    omega_t: f64,
    rotation: f64,
    tol: f64,
) -> ConditionLabel {
    if rotation <= tol && omega_r <= tol && omega_t <= tol {
        return ConditionLabel::Dc;
    }
    let r_on = (rho_r > tol, omega_r > tol);
    let t_on = (rho_t > tol, omega_t > tol);
    match (r_on, t_on) {
        ((false, false), (false, false)) => ConditionLabel::BalancedSinusoidal,
        ((true, true), (false, false)) => ConditionLabel::UnbalancedSinusoidal,
        ((false, false), (true, true)) => ConditionLabel::BalancedNonsinusoidal,
        _ => ConditionLabel::MixedOrUnknown,
    }
}

/// Exact-path classification from decomposed components.
pub fn classify_components(series: &[FrequencyComponents], tol: f64) -> Result<ConditionLabel> {
    if series.len() < MIN_COMPONENT_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_COMPONENT_SAMPLES,
            got: series.len(),
        });
    }
    let rho_r = rms(series.iter().map(|c| c.rho_r));
    let rho_t = rms(series.iter().map(|c| c.rho_t));
    let omega_r = rms(series.iter().map(|c| c.omega_r.norm()));
    let omega_t = rms(series.iter().map(|c| c.omega_t.norm()));
    let rotation = rms(series.iter().map(|c| c.half_w.norm().max(c.omega_v.norm())));
    Ok(label_from(rho_r, omega_r, rho_t, omega_t, rotation, tol))
}

/// Features from a sampled geometric-frequency series. Uses the trailing
/// whole number of periods of `omega_est`; flagged samples are skipped.
pub fn features_from_samples(series: &[GfSample], omega_est: f64) -> Result<FeatureVector> {
    if series.len() < 3 || !(omega_est > 0.0) {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: series.len(),
        });
    }
    let dt = series[1].t - series[0].t;
    if !(dt > 0.0) {
        return Err(Error::InvalidGrid("sample times must increase".into()));
    }
    let period = 2.0 * std::f64::consts::PI / omega_est;
    let per = (period / dt).round().max(1.0) as usize;
    let periods = series.len() / per;
    if periods < 2 {
        return Err(Error::TooFewSamples {
            needed: 2 * per,
            got: series.len(),
        });
    }
    let window = &series[series.len() - periods * per..];
    let span = window.len() as f64 * dt;

    let valid: Vec<(f64, f64)> = window
        .iter()
        .filter_map(|s| s.gf.as_ref().map(|g| (g.rho, g.azimuthal())))
        .collect();
    if valid.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: valid.len(),
        });
    }
    let n = valid.len() as f64;
    let mean_rho = valid.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_omega = valid.iter().map(|p| p.1).sum::<f64>() / n;
    let rho_ripple = rms(valid.iter().map(|p| p.0 - mean_rho));
    let omega_ripple = rms(valid.iter().map(|p| p.1 - mean_omega));
    let (om_min, om_max) = valid.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), p| {
        (lo.min(p.1), hi.max(p.1))
    });

    // Below this the ripple is rounding noise and its crossings are meaningless.
    let noise_floor = 1e-9 * mean_omega.max(mean_rho.abs()).max(f64::MIN_POSITIVE);
    let ratio = if rho_ripple > noise_floor && mean_omega > 0.0 {
        let mut crossings = 0usize;
        let mut last = 0.0f64;
        for p in &valid {
            let x = p.0 - mean_rho;
            if x != 0.0 {
                if last != 0.0 && x.signum() != last.signum() {
                    crossings += 1;
                }
                last = x;
            }
        }
        let ripple_omega = std::f64::consts::PI * crossings as f64 / span;
        ripple_omega / mean_omega
    } else {
        0.0
    };
    let xi_estimate = if mean_omega > 0.0 {
        (om_min + om_max) / (2.0 * mean_omega)
    } else {
        0.0
    };

    let unbalance_like = ratio > 0.0 && ratio < UNBALANCE_RIPPLE_MAX;
    let (r, t) = if unbalance_like {
        ((rho_ripple, omega_ripple), (0.0, 0.0))
    } else {
        ((0.0, 0.0), (rho_ripple, omega_ripple))
    };
    Ok(FeatureVector {
        rms_rho_r: r.0,
        rms_rho_t: t.0,
        rms_omega_r: r.1,
        rms_omega_t: t.1,
        mean_omega_v: mean_omega,
        dominant_ripple_ratio: ratio,
        xi_estimate,
    })
}

pub fn classify_features(f: &FeatureVector, tol: f64) -> ConditionLabel {
    label_from(
        f.rms_rho_r,
        f.rms_omega_r,
        f.rms_rho_t,
        f.rms_omega_t,
        f.mean_omega_v,
        tol,
    )
}

/// Heuristic classification of a sampled series.
pub fn classify_samples(series: &[GfSample], omega_est: f64, tol: f64) -> Result<ConditionLabel> {
    Ok(classify_features(
        &features_from_samples(series, omega_est)?,
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomalg::{Bivector, VecN};
    use crate::geomfreq::GeometricFrequency;

    fn comp(rho_r: f64, rho_t: f64, om_r: f64, om_t: f64, half_w: f64) -> FrequencyComponents {
        let z = |x: f64| VecN::from([0.0, 0.0, x]);
        FrequencyComponents {
            rho_t,
            rho_s: 0.0,
            rho_r,
            rho_v: rho_t + rho_r,
            w_t: Bivector::zero(3),
            w_r: Bivector::zero(3),
            w_q: Bivector::zero(3),
            w_v: Bivector::zero(3),
            omega_t: z(om_t),
            omega_r: z(om_r),
            half_w: z(half_w),
            omega_v: z(om_t + om_r + half_w),
        }
    }

    #[test]
    fn label_rules() {
        let tol = 0.3;
        let cases = [
            (comp(0.0, 0.0, 0.0, 0.0, 0.0), ConditionLabel::Dc),
            (
                comp(0.0, 0.0, 0.0, 0.0, 314.0),
                ConditionLabel::BalancedSinusoidal,
            ),
            (
                comp(50.0, 0.0, 30.0, 0.0, 320.0),
                ConditionLabel::UnbalancedSinusoidal,
            ),
            (
                comp(0.0, 40.0, 0.0, 20.0, 314.0),
                ConditionLabel::BalancedNonsinusoidal,
            ),
            (
                comp(50.0, 40.0, 30.0, 20.0, 314.0),
                ConditionLabel::MixedOrUnknown,
            ),
            (
                comp(50.0, 0.0, 0.0, 0.0, 314.0),
                ConditionLabel::MixedOrUnknown,
            ),
        ];
        for (c, label) in cases {
            assert_eq!(classify_components(&vec![c; 12], tol).unwrap(), label);
        }
    }

    #[test]
    fn short_series_rejected() {
        let err = classify_components(&vec![comp(0.0, 0.0, 0.0, 0.0, 1.0); 5], 0.1).unwrap_err();
        assert_eq!(err, Error::TooFewSamples { needed: 10, got: 5 });
    }

    #[test]
    fn tokens() {
        assert_eq!(
            ConditionLabel::UnbalancedSinusoidal.to_string(),
            "UNBALANCED_SINUSOIDAL"
        );
        assert_eq!(ConditionLabel::Dc.token(), "DC");
    }

    fn synthetic(
        rho: impl Fn(f64) -> f64,
        om: impl Fn(f64) -> f64,
        n: usize,
        dt: f64,
    ) -> Vec<GfSample> {
        (0..n)
            .map(|k| {
                let t = k as f64 * dt;
                let w = crate::geomalg::embed3(&VecN::from([0.0, 0.0, om(t)])).unwrap();
                GfSample {
                    t,
                    magnitude: 1.0,
                    gf: Some(GeometricFrequency {
                        rho: rho(t),
                        w,
                        omega: Some(VecN::from([0.0, 0.0, om(t)])),
                    }),
                }
            })
            .collect()
    }

    #[test]
    fn features_need_two_periods() {
        let s = synthetic(|_| 0.0, |_| 100.0, 150, 1e-3);
        // Period 2π/100 ≈ 62.8 ms → 63 samples; 150 samples is two periods.
        assert!(features_from_samples(&s, 100.0).is_ok());
        assert!(features_from_samples(&s[..100], 100.0).is_err());
    }

    #[test]
    fn ripple_ratio_from_crossings() {
        let w = 100.0;
        let s = synthetic(|t| (5.0 * w * t + 0.1).sin(), |_| w, 20_000, 1e-5);
        let f = features_from_samples(&s, w).unwrap();
        assert!((f.dominant_ripple_ratio - 5.0).abs() < 0.1, "{f:?}");
        assert!(f.rms_rho_t > 0.5 && f.rms_rho_r == 0.0);
    }
}
