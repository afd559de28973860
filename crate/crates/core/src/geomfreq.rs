//! Geometric frequency of a time-dependent vector: the scalar radial rate
//! `ρ = v·v′/|v|²` plus the rotation bivector `W = v∧v′/|v|²`.

use crate::error::{Error, Result};
use crate::geomalg::{bivector_apply, hodge3, wedge, Bivector, Multivector, VecN};
use crate::signalmodel::{numeric_derivative, SignalBundle};

/// Relative magnitude guard applied to sampled series.
pub const MAGNITUDE_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricFrequency {
    /// Radial frequency (1/s).
    pub rho: f64,
    /// Rotation bivector (1/s).
    pub w: Bivector,
    /// Azimuthal frequency `⋆W`, present only in three dimensions.
    pub omega: Option<VecN>,
}

impl GeometricFrequency {
    pub fn multivector(&self) -> Multivector {
        Multivector::new(self.rho, self.w.clone())
    }

    /// Magnitude of the rotation rate, `|ω_v|` in 3-d; valid in any dimension.
    pub fn azimuthal(&self) -> f64 {
        self.w.frobenius() / std::f64::consts::SQRT_2
    }

    /// Rotation rate about the axis normal to the first two coordinates.
    pub fn omega_z(&self) -> f64 {
        match &self.omega {
            Some(o) => o[2],
            None if self.w.dim() >= 2 => self.w.get(0, 1),
            None => 0.0,
        }
    }
}

/// Geometric frequency of `v` with derivative `v_prime`. Fails only when
/// `|v|` is zero or not finite.
pub fn geometric_frequency(v: &VecN, v_prime: &VecN) -> Result<GeometricFrequency> {
    geometric_frequency_guarded(v, v_prime, 0.0)
}

/// As [`geometric_frequency`] but rejects `|v| <= eps_mag`.
pub fn geometric_frequency_guarded(
    v: &VecN,
    v_prime: &VecN,
    eps_mag: f64,
) -> Result<GeometricFrequency> {
    let n2 = v.norm_sq();
    let mag = n2.sqrt();
    if !(mag > eps_mag) || !n2.is_normal() {
        return Err(Error::SingularMagnitude {
            magnitude: mag,
            threshold: eps_mag,
        });
    }
    let rho = v.dot(v_prime)? / n2;
    let w = wedge(v, v_prime)?.scale(1.0 / n2);
    let omega = if v.dim() == 3 {
        Some(hodge3(&w)?)
    } else {
        None
    };
    Ok(GeometricFrequency { rho, w, omega })
}

/// `v′ = ρ·v − W·v`.
pub fn reconstruct_derivative(gf: &GeometricFrequency, v: &VecN) -> Result<VecN> {
    let rot = bivector_apply(&gf.w, v)?;
    v.scale(gf.rho).try_sub(&rot)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeSource {
    Analytic,
    Numeric,
}

/// One entry of a geometric-frequency series. `gf` is `None` when the sample
/// failed the magnitude guard.
#[derive(Debug, Clone, PartialEq)]
pub struct GfSample {
    pub t: f64,
    pub magnitude: f64,
    pub gf: Option<GeometricFrequency>,
}

impl GfSample {
    pub fn is_flagged(&self) -> bool {
        self.gf.is_none()
    }
}

pub fn geometric_frequency_series(
    bundle: &SignalBundle,
    source: DerivativeSource,
) -> Result<Vec<GfSample>> {
    let derivative = match source {
        DerivativeSource::Analytic => bundle.v_prime.clone(),
        DerivativeSource::Numeric => numeric_derivative(&bundle.v, bundle.grid.dt())?,
    };
    let times: Vec<f64> = bundle.grid.times().collect();
    series_from_samples(&times, &bundle.v, &derivative)
}

/// Per-sample geometric frequency with the running-RMS magnitude guard
/// `|v| > MAGNITUDE_GUARD · rms(|v|[..=k])`.
pub fn series_from_samples(times: &[f64], v: &[VecN], v_prime: &[VecN]) -> Result<Vec<GfSample>> {
    if v.len() != times.len() || v_prime.len() != times.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            found: v.len().min(v_prime.len()),
        });
    }
    let mut sum_sq = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for (k, ((&t, vk), dk)) in times.iter().zip(v).zip(v_prime).enumerate() {
        let n2 = vk.norm_sq();
        sum_sq += n2;
        let eps = MAGNITUDE_GUARD * (sum_sq / (k + 1) as f64).sqrt();
        let gf = match geometric_frequency_guarded(vk, dk, eps) {
            Ok(gf) => Some(gf),
            Err(Error::SingularMagnitude { .. }) => None,
            Err(e) => return Err(e),
        };
        out.push(GfSample {
            t,
            magnitude: n2.sqrt(),
            gf,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signalmodel::{synthesize, SampleGrid, SignalSpec};
    use std::f64::consts::PI;

    const W50: f64 = 2.0 * PI * 50.0;

    #[test]
    fn balanced_point() {
        let v0 = 230.0;
        let th: f64 = 0.7;
        let v = VecN::from([v0 * th.cos(), v0 * th.sin(), 0.0]);
        let vp = VecN::from([-W50 * v0 * th.sin(), W50 * v0 * th.cos(), 0.0]);
        let gf = geometric_frequency(&v, &vp).unwrap();
        assert!(gf.rho.abs() < 1e-12);
        let om = gf.omega.unwrap();
        assert!(om[0] == 0.0 && om[1] == 0.0);
        assert!((om[2] - W50).abs() < 1e-10);
    }

    #[test]
    fn dc_point() {
        let lambda = -0.5;
        let t: f64 = 0.8;
        let v = VecN::from_scalar((lambda * t).exp());
        let vp = VecN::from_scalar(lambda * (lambda * t).exp());
        let gf = geometric_frequency(&v, &vp).unwrap();
        assert!((gf.rho - lambda).abs() < 1e-15);
        assert!(gf.omega.is_none());
        assert!(gf.w.is_zero());
    }

    #[test]
    fn unbalanced_point() {
        // Oracle: closed forms rho = ½ω(Vβ²−Vα²)sin2θ/|v|², ω = ωVαVβ/|v|²
        // at θ = π/4, |v|² = (1 + 1.44)/2 = 1.22.
        let (va, vb, th) = (1.0, 1.2, PI / 4.0);
        let v = VecN::from([va * th.cos(), vb * th.sin(), 0.0]);
        let vp = VecN::from([-W50 * va * th.sin(), W50 * vb * th.cos(), 0.0]);
        let gf = geometric_frequency(&v, &vp).unwrap();
        let rho_expected = 0.5 * W50 * 0.44 / 1.22;
        let om_expected = W50 * 1.2 / 1.22;
        assert!((gf.rho - rho_expected).abs() < 1e-10);
        assert!((gf.azimuthal() - om_expected).abs() < 1e-10);
        assert!((gf.rho - 56.66).abs() < 0.01);
        assert!((gf.azimuthal() - 309.0).abs() < 0.05);
    }

    #[test]
    fn zero_vector_is_singular() {
        let err = geometric_frequency(&VecN::zeros(3), &VecN::from([1.0, 0.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::SingularMagnitude { .. }));
    }

    #[test]
    fn reconstruct_examples() {
        let v = VecN::from([2.0, 0.0, 0.0]);
        let gf = GeometricFrequency {
            rho: 0.0,
            w: crate::geomalg::embed3(&VecN::from([0.0, 0.0, W50])).unwrap(),
            omega: Some(VecN::from([0.0, 0.0, W50])),
        };
        assert_eq!(
            reconstruct_derivative(&gf, &v).unwrap(),
            VecN::from([0.0, 2.0 * W50, 0.0])
        );

        let dc = GeometricFrequency {
            rho: -0.5,
            w: Bivector::zero(1),
            omega: None,
        };
        assert_eq!(
            reconstruct_derivative(&dc, &VecN::from_scalar(3.0)).unwrap(),
            VecN::from_scalar(-1.5)
        );
        assert!(reconstruct_derivative(&dc, &v).is_err());
    }

    #[test]
    fn frenet_form_matches() {
        let v = VecN::from([0.3, -1.2, 0.8]);
        let vp = VecN::from([2.0, 0.5, -0.1]);
        let gf = geometric_frequency(&v, &vp).unwrap();
        let om = gf.omega.clone().unwrap();
        let frenet = v.scale(gf.rho).try_add(&om.cross3(&v).unwrap()).unwrap();
        let back = reconstruct_derivative(&gf, &v).unwrap();
        assert!(frenet.try_sub(&back).unwrap().max_abs() < 1e-14);
        assert!(back.try_sub(&vp).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn balanced_series_constant() {
        let spec = SignalSpec::Balanced {
            amplitude: 1.0,
            omega0: W50,
            phase: 0.2,
        };
        let grid = SampleGrid::with_duration(0.0, 1e-4, 0.04).unwrap();
        let b = synthesize(&spec, &grid).unwrap();
        for s in geometric_frequency_series(&b, DerivativeSource::Analytic).unwrap() {
            let gf = s.gf.unwrap();
            assert!(gf.rho.abs() < 1e-9);
            assert!((gf.azimuthal() - W50).abs() < 1e-9);
        }
    }

    #[test]
    fn numeric_vs_analytic_rho() {
        let spec = SignalSpec::Unbalanced {
            v_alpha: 1.0,
            v_beta: 1.2,
            omega0: W50,
            phase: PI / 6.0,
        };
        let grid = SampleGrid::with_duration(0.0, 1e-6, 0.02).unwrap();
        let b = synthesize(&spec, &grid).unwrap();
        let a = geometric_frequency_series(&b, DerivativeSource::Analytic).unwrap();
        let n = geometric_frequency_series(&b, DerivativeSource::Numeric).unwrap();
        let worst = a
            .iter()
            .zip(&n)
            .map(|(x, y)| (x.gf.as_ref().unwrap().rho - y.gf.as_ref().unwrap().rho).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-3, "max |Δrho| = {worst}");
    }

    #[test]
    fn zero_crossing_dc_sample_is_flagged() {
        let times = [0.0, 1.0, 2.0];
        let v = [
            VecN::from_scalar(1.0),
            VecN::from_scalar(0.0),
            VecN::from_scalar(-1.0),
        ];
        let d = vec![VecN::from_scalar(-1.0); 3];
        let s = series_from_samples(&times, &v, &d).unwrap();
        assert!(!s[0].is_flagged());
        assert!(s[1].is_flagged());
        assert!(!s[2].is_flagged());
    }
}
