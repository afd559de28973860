//! Velocity-field view of a voltage: `v(t, φ)` as a function of time and the
//! flux coordinates, its Jacobian split into normal strain, shear strain and
//! rigid-body rotation, and the resulting breakdown of the geometric
//! frequency into local-time, strain and rotation terms.

use crate::error::{Error, Result};
use crate::geomalg::{
    check_dim, decompose_matrix, hodge3, wedge, Bivector, MatrixSplit, Tensor, VecN,
};
use crate::geomfreq::{geometric_frequency, GeometricFrequency};
use crate::signalmodel::{SampleGrid, SignalSpec};

/// A velocity field `v(t, φ)` over flux coordinates.
///
/// Implementations must keep `eval`, `partial_t` and `jacobian` consistent:
/// along a stream-line `φ′ = v`, the total derivative of `v` equals
/// `partial_t + jacobian·v`.
pub trait VelocityField {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, flux: &VecN) -> Result<VecN>;
    fn partial_t(&self, t: f64, flux: &VecN) -> Result<VecN>;
    /// `J[i][j] = ∂v_i/∂φ_j`.
    fn jacobian(&self, t: f64, flux: &VecN) -> Result<Tensor>;
}

/// Reference frame used to express a harmonic voltage as a field over flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Frame {
    /// Rotates at the fundamental ω_o.
    #[default]
    Fundamental,
    /// Rotates at hω_o; `h` must be one of the signal's harmonic orders.
    Harmonic(u32),
}

/// Explicit-time forcing `coeff·(cos θ_k, sin θ_k, 0)`, `θ_k = kω_o t + φ_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Forcing {
    pub order: u32,
    pub coeff: f64,
    pub phase: f64,
}

/// Closed-form field `v(t, φ) = J·φ + offset + Σ forcing_k(t)` for the
/// synthesized signal families. The flux coupling `J` is constant.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxField {
    jacobian: Tensor,
    offset: VecN,
    forcing: Vec<Forcing>,
    omega0: f64,
    frame: Frame,
}

impl FluxField {
    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn forcing(&self) -> &[Forcing] {
        &self.forcing
    }

    fn forcing_term(&self, f: &Forcing, t: f64) -> [f64; 2] {
        let th = f.order as f64 * self.omega0 * t + f.phase;
        [f.coeff * th.cos(), f.coeff * th.sin()]
    }

    fn forcing_rate(&self, f: &Forcing, t: f64) -> [f64; 2] {
        let w = f.order as f64 * self.omega0;
        let th = w * t + f.phase;
        [-w * f.coeff * th.sin(), w * f.coeff * th.cos()]
    }

    /// `∂_t` contribution of a single forcing term.
    pub fn partial_t_of(&self, f: &Forcing, t: f64) -> VecN {
        let [x, y] = self.forcing_rate(f, t);
        VecN::from([x, y, 0.0])
    }
}

impl VelocityField for FluxField {
    fn dim(&self) -> usize {
        self.jacobian.dim()
    }

    fn eval(&self, t: f64, flux: &VecN) -> Result<VecN> {
        let mut v = self.jacobian.apply(flux)?.try_add(&self.offset)?;
        if !self.forcing.is_empty() {
            let mut c = [0.0; 3];
            for f in &self.forcing {
                let [x, y] = self.forcing_term(f, t);
                c[0] += x;
                c[1] += y;
            }
            v = v.try_add(&VecN::from(c))?;
        }
        Ok(v)
    }

    fn partial_t(&self, t: f64, flux: &VecN) -> Result<VecN> {
        check_dim(self.dim(), flux.dim())?;
        let mut c = vec![0.0; self.dim()];
        for f in &self.forcing {
            let [x, y] = self.forcing_rate(f, t);
            c[0] += x;
            c[1] += y;
        }
        VecN::new(c)
    }

    fn jacobian(&self, _t: f64, flux: &VecN) -> Result<Tensor> {
        check_dim(self.dim(), flux.dim())?;
        Ok(self.jacobian.clone())
    }
}

/// Build the flux-parameterized field of a signal family.
///
/// Balanced and unbalanced signals are stationary (`∂_t v = 0`). A harmonic
/// signal in frame `m` (1 for the fundamental) has flux coupling
/// `mω_o·[[0,−1],[1,0]]` and forcing coefficients `V_k(1 − m/k)` over all
/// components `k` including the fundamental. Dc is the 1-d field
/// `v = λφ + V_0`.
pub fn make_field(spec: &SignalSpec, frame: Frame) -> Result<FluxField> {
    spec.validate()?;
    let rot = |a: f64, b: f64| {
        Tensor::from_rows(&[vec![0.0, -a, 0.0], vec![b, 0.0, 0.0], vec![0.0, 0.0, 0.0]])
    };
    let stationary_only = |spec: &SignalSpec| -> Result<()> {
        match frame {
            Frame::Fundamental => Ok(()),
            Frame::Harmonic(h) => Err(Error::InvalidFrame(format!(
                "harmonic({h}) frame requires a harmonic signal, got {}",
                family_name(spec)
            ))),
        }
    };
    match spec {
        SignalSpec::Balanced { omega0, .. } => {
            stationary_only(spec)?;
            Ok(FluxField {
                jacobian: rot(*omega0, *omega0)?,
                offset: VecN::zeros(3),
                forcing: Vec::new(),
                omega0: *omega0,
                frame,
            })
        }
        SignalSpec::Unbalanced {
            v_alpha,
            v_beta,
            omega0,
            ..
        } => {
            stationary_only(spec)?;
            if !(*v_alpha > 0.0 && *v_beta > 0.0) {
                return Err(Error::InvalidSpec(
                    "unbalanced field needs positive V_alpha and V_beta".into(),
                ));
            }
            Ok(FluxField {
                jacobian: rot(omega0 * v_alpha / v_beta, omega0 * v_beta / v_alpha)?,
                offset: VecN::zeros(3),
                forcing: Vec::new(),
                omega0: *omega0,
                frame,
            })
        }
        SignalSpec::Harmonic {
            omega0, harmonics, ..
        } => {
            let m = match frame {
                Frame::Fundamental => 1,
                Frame::Harmonic(h) => {
                    if !harmonics.iter().any(|x| x.order == h) {
                        return Err(Error::InvalidFrame(format!(
                            "harmonic({h}) frame: order {h} is not present in the signal"
                        )));
                    }
                    h
                }
            };
            let forcing = spec
                .rotors()
                .into_iter()
                .map(|r| Forcing {
                    order: r.order as u32,
                    coeff: r.a_alpha * (1.0 - m as f64 / r.order),
                    phase: r.phase,
                })
                .filter(|f| f.coeff != 0.0)
                .collect();
            let w = m as f64 * omega0;
            Ok(FluxField {
                jacobian: rot(w, w)?,
                offset: VecN::zeros(3),
                forcing,
                omega0: *omega0,
                frame,
            })
        }
        SignalSpec::Dc { v0, lambda } => {
            stationary_only(spec)?;
            Ok(FluxField {
                jacobian: Tensor::identity(1).scale(*lambda),
                offset: VecN::from_scalar(*v0),
                forcing: Vec::new(),
                omega0: 0.0,
                frame,
            })
        }
    }
}

fn family_name(spec: &SignalSpec) -> &'static str {
    match spec {
        SignalSpec::Balanced { .. } => "balanced",
        SignalSpec::Unbalanced { .. } => "unbalanced",
        SignalSpec::Harmonic { .. } => "harmonic",
        SignalSpec::Dc { .. } => "dc",
    }
}

/// Strain/rotation split of the field Jacobian at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDecomposition {
    pub jacobian: Tensor,
    /// Normal strain S.
    pub normal: Tensor,
    /// Shear strain R.
    pub shear: Tensor,
    /// Rigid-body rotation Q.
    pub rotation: Tensor,
    /// `tr J = ∇·v`.
    pub divergence: f64,
    /// `∇×v`, three dimensions only.
    pub vorticity: Option<VecN>,
}

impl FieldDecomposition {
    /// The bivector `∇∧v`, whose matrix is `Jᵀ − J = −2Q`.
    pub fn curl_bivector(&self) -> Bivector {
        let m = &self.jacobian.transpose() - &self.jacobian;
        Bivector::from_skew(m).unwrap_or_else(|_| Bivector::zero(self.jacobian.dim()))
    }
}

pub fn decompose(field: &dyn VelocityField, t: f64, flux: &VecN) -> Result<FieldDecomposition> {
    let jacobian = field.jacobian(t, flux)?;
    let MatrixSplit {
        normal,
        shear,
        rotation,
    } = decompose_matrix(&jacobian);
    let divergence = jacobian.trace();
    let vorticity = if jacobian.dim() == 3 {
        Some(rotation.scale(2.0).axial3()?)
    } else {
        None
    };
    Ok(FieldDecomposition {
        jacobian,
        normal,
        shear,
        rotation,
        divergence,
        vorticity,
    })
}

/// `v′ = ∂_t v + S·v + R·v + Q·v`.
pub fn lagrange_derivative(field: &dyn VelocityField, t: f64, flux: &VecN) -> Result<VecN> {
    let v = field.eval(t, flux)?;
    let d = decompose(field, t, flux)?;
    field
        .partial_t(t, flux)?
        .try_add(&d.normal.apply(&v)?)?
        .try_add(&d.shear.apply(&v)?)?
        .try_add(&d.rotation.apply(&v)?)
}

/// Breakdown of the geometric frequency of `v` into local-time (`_t`),
/// normal-strain (`_s`), shear-strain (`_r`) and rotation terms.
///
/// The 3-vectors are axial vectors of the corresponding bivectors. For a
/// one-dimensional field they are identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyComponents {
    pub rho_t: f64,
    pub rho_s: f64,
    pub rho_r: f64,
    pub rho_v: f64,
    /// `v∧∂_t v / |v|²`.
    pub w_t: Bivector,
    /// `v∧(R v) / |v|²`.
    pub w_r: Bivector,
    /// `v∧(Q v) / |v|²`.
    pub w_q: Bivector,
    /// `w_t + w_r + w_q`.
    pub w_v: Bivector,
    pub omega_t: VecN,
    pub omega_r: VecN,
    /// Half the vorticity.
    pub half_w: VecN,
    /// `omega_t + omega_r + half_w`.
    pub omega_v: VecN,
}

pub fn frequency_components(
    field: &dyn VelocityField,
    t: f64,
    flux: &VecN,
) -> Result<FrequencyComponents> {
    let v = field.eval(t, flux)?;
    let n2 = v.norm_sq();
    if !n2.is_normal() {
        return Err(Error::SingularMagnitude {
            magnitude: n2.sqrt(),
            threshold: 0.0,
        });
    }
    let n = v.dim();
    let dtv = field.partial_t(t, flux)?;
    let d = decompose(field, t, flux)?;
    let rv = d.shear.apply(&v)?;
    let qv = d.rotation.apply(&v)?;

    let rho_t = v.dot(&dtv)? / n2;
    let rho_s = d.divergence / n as f64;
    let rho_r = v.dot(&rv)? / n2;

    let inv = 1.0 / n2;
    let w_t = wedge(&v, &dtv)?.scale(inv);
    let w_r = wedge(&v, &rv)?.scale(inv);
    let w_q = wedge(&v, &qv)?.scale(inv);
    let w_v = w_t.try_add(&w_r)?.try_add(&w_q)?;

    let omega_t = axial(&w_t)?;
    let omega_r = axial(&w_r)?;
    let half_w = match &d.vorticity {
        Some(w) => w.scale(0.5),
        None => axial(&w_q)?,
    };
    let omega_v = omega_t.try_add(&omega_r)?.try_add(&half_w)?;
    Ok(FrequencyComponents {
        rho_t,
        rho_s,
        rho_r,
        rho_v: rho_t + rho_s + rho_r,
        w_t,
        w_r,
        w_q,
        w_v,
        omega_t,
        omega_r,
        half_w,
        omega_v,
    })
}

/// Three-vector view of a bivector: the Hodge dual in 3-d, the planar rate
/// on the third axis in 2-d, zero in 1-d.
fn axial(b: &Bivector) -> Result<VecN> {
    match b.dim() {
        1 => Ok(VecN::zeros(3)),
        2 => Ok(VecN::from([0.0, 0.0, b.get(0, 1)])),
        3 => hodge3(b),
        n => Err(Error::UnsupportedDimension {
            op: "axial vector",
            required: 3,
            found: n,
        }),
    }
}

/// Geometric frequency of the field's own Lagrange derivative, the reference
/// the component sum must reproduce.
pub fn geometric_frequency_of_field(
    field: &dyn VelocityField,
    t: f64,
    flux: &VecN,
) -> Result<GeometricFrequency> {
    let v = field.eval(t, flux)?;
    geometric_frequency(&v, &lagrange_derivative(field, t, flux)?)
}

/// Radial and rotational distortion contributed by one forcing term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicComponent {
    pub order: u32,
    pub rho: f64,
    pub omega_z: f64,
}

/// Per-term split of `rho_t` and `omega_t` for a harmonic field; summing the
/// entries reproduces the totals.
pub fn harmonic_components(
    field: &FluxField,
    t: f64,
    flux: &VecN,
) -> Result<Vec<HarmonicComponent>> {
    let v = field.eval(t, flux)?;
    let n2 = v.norm_sq();
    if !n2.is_normal() {
        return Err(Error::SingularMagnitude {
            magnitude: n2.sqrt(),
            threshold: 0.0,
        });
    }
    field
        .forcing
        .iter()
        .map(|f| {
            let d = field.partial_t_of(f, t);
            Ok(HarmonicComponent {
                order: f.order,
                rho: v.dot(&d)? / n2,
                omega_z: v.cross3(&d)?[2] / n2,
            })
        })
        .collect()
}

/// Frobenius norm of `v∧∂_t v / |v|²`; zero when stream-lines are material
/// curves.
pub fn helmholtz_residual(field: &dyn VelocityField, t: f64, flux: &VecN) -> Result<f64> {
    let v = field.eval(t, flux)?;
    let n2 = v.norm_sq();
    if !n2.is_normal() {
        return Err(Error::SingularMagnitude {
            magnitude: n2.sqrt(),
            threshold: 0.0,
        });
    }
    Ok(wedge(&v, &field.partial_t(t, flux)?)?.frobenius() / n2)
}

/// Central-difference Jacobian `∂v_i/∂φ_j` with flux step `step`.
pub fn fd_jacobian(field: &dyn VelocityField, t: f64, flux: &VecN, step: f64) -> Result<Tensor> {
    if !(step > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "step must be positive, got {step}"
        )));
    }
    let n = field.dim();
    check_dim(n, flux.dim())?;
    let mut j = Tensor::zeros(n);
    let base = flux.as_slice().to_vec();
    for col in 0..n {
        let mut plus = base.clone();
        let mut minus = base.clone();
        plus[col] += step;
        minus[col] -= step;
        let vp = field.eval(t, &VecN::new(plus)?)?;
        let vm = field.eval(t, &VecN::new(minus)?)?;
        for row in 0..n {
            j.set(row, col, (vp[row] - vm[row]) / (2.0 * step));
        }
    }
    Ok(j)
}

/// Classic fourth-order Runge–Kutta integration of `φ′ = v(t, φ)` over the
/// grid, starting from `flux0` at `grid.t0()`.
pub fn integrate_streamline(
    field: &dyn VelocityField,
    flux0: &VecN,
    grid: &SampleGrid,
) -> Result<Vec<VecN>> {
    check_dim(field.dim(), flux0.dim())?;
    let h = grid.dt();
    let mut out = Vec::with_capacity(grid.count());
    let mut phi = flux0.clone();
    out.push(phi.clone());
    for step in 1..grid.count() {
        let t = grid.time(step - 1);
        let wrap = |e: Error| Error::Integration {
            step,
            reason: e.to_string(),
        };
        let k1 = field.eval(t, &phi).map_err(wrap)?;
        let p2 = phi.try_add(&k1.scale(0.5 * h))?;
        let k2 = field.eval(t + 0.5 * h, &p2).map_err(wrap)?;
        let p3 = phi.try_add(&k2.scale(0.5 * h))?;
        let k3 = field.eval(t + 0.5 * h, &p3).map_err(wrap)?;
        let p4 = phi.try_add(&k3.scale(h))?;
        let k4 = field.eval(t + h, &p4).map_err(wrap)?;
        let incr = k1
            .try_add(&k2.scale(2.0))?
            .try_add(&k3.scale(2.0))?
            .try_add(&k4)?
            .scale(h / 6.0);
        phi = phi.try_add(&incr).map_err(wrap)?;
        if phi.as_slice().iter().any(|x| !x.is_finite()) {
            return Err(Error::Integration {
                step,
                reason: "state overflowed".into(),
            });
        }
        out.push(phi.clone());
    }
    Ok(out)
}

/// Components along the analytic trajectory of `spec` at every grid point.
pub fn components_series(
    field: &dyn VelocityField,
    spec: &SignalSpec,
    grid: &SampleGrid,
) -> Result<Vec<FrequencyComponents>> {
    grid.times()
        .map(|t| frequency_components(field, t, &spec.flux(t)))
        .collect()
}

/// Shape factor κ = ½(V_β/V_α − V_α/V_β) of an unbalanced ellipse.
pub fn unbalance_kappa(v_alpha: f64, v_beta: f64) -> f64 {
    0.5 * (v_beta / v_alpha - v_alpha / v_beta)
}

/// Frequency correction ξ = ½(V_α/V_β + V_β/V_α) of an unbalanced ellipse.
pub fn unbalance_xi(v_alpha: f64, v_beta: f64) -> f64 {
    0.5 * (v_alpha / v_beta + v_beta / v_alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signalmodel::synthesize;
    use std::f64::consts::PI;

    const W50: f64 = 2.0 * PI * 50.0;

    fn balanced() -> SignalSpec {
        SignalSpec::Balanced {
            amplitude: 1.0,
            omega0: W50,
            phase: 0.0,
        }
    }

    fn unbalanced() -> SignalSpec {
        SignalSpec::Unbalanced {
            v_alpha: 1.0,
            v_beta: 1.2,
            omega0: W50,
            phase: PI / 6.0,
        }
    }

    fn harmonic(orders: &[u32]) -> SignalSpec {
        SignalSpec::harmonic_fixture(1.0, W50, PI / 6.0, orders)
    }

    #[test]
    fn balanced_jacobian_everywhere() {
        let f = make_field(&balanced(), Frame::Fundamental).unwrap();
        let expected = Tensor::from_rows(&[
            vec![0.0, -W50, 0.0],
            vec![W50, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        for phi in [[0.0, 0.0, 0.0], [1.0, -2.0, 3.0]] {
            assert_eq!(f.jacobian(0.3, &VecN::from(phi)).unwrap(), expected);
            assert_eq!(f.partial_t(0.3, &VecN::from(phi)).unwrap(), VecN::zeros(3));
        }
    }

    #[test]
    fn unbalanced_jacobian() {
        let f = make_field(&unbalanced(), Frame::Fundamental).unwrap();
        let j = f.jacobian(0.0, &VecN::zeros(3)).unwrap();
        assert_eq!(j.get(0, 1), -W50 / 1.2);
        assert_eq!(j.get(1, 0), W50 * 1.2);
    }

    #[test]
    fn dc_field() {
        let spec = SignalSpec::Dc {
            v0: 2.0,
            lambda: -0.5,
        };
        let f = make_field(&spec, Frame::Fundamental).unwrap();
        let phi = spec.flux(0.7);
        assert!((f.eval(0.7, &phi).unwrap()[0] - spec.voltage(0.7)[0]).abs() < 1e-14);
        assert_eq!(f.jacobian(0.7, &phi).unwrap().get(0, 0), -0.5);
        assert_eq!(f.partial_t(0.7, &phi).unwrap(), VecN::zeros(1));
        let d = decompose(&f, 0.7, &phi).unwrap();
        assert_eq!(d.normal.get(0, 0), -0.5);
        assert_eq!(d.shear.get(0, 0), 0.0);
        assert_eq!(d.rotation.get(0, 0), 0.0);
        assert!(d.vorticity.is_none());
        let ld = lagrange_derivative(&f, 0.0, &spec.flux(0.0)).unwrap();
        assert!((ld[0] - (-0.5 * 2.0)).abs() < 1e-15);
    }

    #[test]
    fn invalid_frames() {
        assert!(matches!(
            make_field(&balanced(), Frame::Harmonic(7)),
            Err(Error::InvalidFrame(_))
        ));
        assert!(matches!(
            make_field(&harmonic(&[7, 11]), Frame::Harmonic(5)),
            Err(Error::InvalidFrame(_))
        ));
        assert!(make_field(&harmonic(&[7, 11]), Frame::Harmonic(11)).is_ok());
    }

    #[test]
    fn fields_reproduce_signal_on_trajectory() {
        let specs = [
            (balanced(), Frame::Fundamental),
            (unbalanced(), Frame::Fundamental),
            (harmonic(&[7, 11]), Frame::Fundamental),
            (harmonic(&[7, 11]), Frame::Harmonic(7)),
            (harmonic(&[7, 11]), Frame::Harmonic(11)),
        ];
        for (spec, frame) in specs {
            let f = make_field(&spec, frame).unwrap();
            for k in 0..200 {
                let t = k as f64 * 1e-4;
                let v = f.eval(t, &spec.flux(t)).unwrap();
                let err = v.try_sub(&spec.voltage(t)).unwrap().max_abs();
                assert!(err < 1e-12, "{frame:?} t={t} err={err}");
            }
        }
    }

    #[test]
    fn balanced_decomposition() {
        let spec = balanced();
        let f = make_field(&spec, Frame::Fundamental).unwrap();
        let d = decompose(&f, 0.0, &spec.flux(0.0)).unwrap();
        assert_eq!(d.normal, Tensor::zeros(3));
        assert_eq!(d.shear, Tensor::zeros(3));
        assert_eq!(d.divergence, 0.0);
        assert_eq!(
            d.vorticity.clone().unwrap(),
            VecN::from([0.0, 0.0, 2.0 * W50])
        );
        // ⋆(∇∧v) is the curl.
        assert_eq!(hodge3(&d.curl_bivector()).unwrap(), d.vorticity.unwrap());
    }

    #[test]
    fn unbalanced_decomposition_matrices() {
        let spec = unbalanced();
        let f = make_field(&spec, Frame::Fundamental).unwrap();
        let d = decompose(&f, 0.0, &spec.flux(0.0)).unwrap();
        let kappa = unbalance_kappa(1.0, 1.2);
        let xi = unbalance_xi(1.0, 1.2);
        assert!((d.shear.get(0, 1) - kappa * W50).abs() < 1e-10);
        assert!((d.shear.get(1, 0) - kappa * W50).abs() < 1e-10);
        assert!((d.rotation.get(0, 1) + xi * W50).abs() < 1e-10);
        assert!((d.rotation.get(1, 0) - xi * W50).abs() < 1e-10);
        assert_eq!(d.normal, Tensor::zeros(3));
    }

    #[test]
    fn balanced_lagrange_derivative_at_zero() {
        let spec = SignalSpec::Balanced {
            amplitude: 1.0,
            omega0: 100.0 * PI,
            phase: 0.0,
        };
        let f = make_field(&spec, Frame::Fundamental).unwrap();
        let ld = lagrange_derivative(&f, 0.0, &spec.flux(0.0)).unwrap();
        assert!(
            ld.try_sub(&VecN::from([0.0, 100.0 * PI, 0.0]))
                .unwrap()
                .max_abs()
                < 1e-12
        );
    }

    #[test]
    fn harmonic_lagrange_derivative_matches_bundle() {
        let spec = harmonic(&[7, 11]);
        let f = make_field(&spec, Frame::Fundamental).unwrap();
        let grid = SampleGrid::with_duration(0.0, 2e-5, 0.02).unwrap();
        let b = synthesize(&spec, &grid).unwrap();
        for k in 0..b.len() {
            let ld = lagrange_derivative(&f, grid.time(k), &b.flux[k]).unwrap();
            let err = ld.try_sub(&b.v_prime[k]).unwrap().norm();
            assert!(err <= 1e-9 * b.v_prime[k].norm(), "k={k}");
        }
    }

    #[test]
    fn balanced_components() {
        let spec = balanced();
        let f = make_field(&spec, Frame::Fundamental).unwrap();
        let c = frequency_components(&f, 0.01, &spec.flux(0.01)).unwrap();
        assert_eq!(c.rho_t, 0.0);
        assert_eq!(c.rho_s, 0.0);
        assert_eq!(c.rho_r, 0.0);
        assert_eq!(c.omega_t, VecN::zeros(3));
        assert_eq!(c.omega_r, VecN::zeros(3));
        assert_eq!(c.half_w, VecN::from([0.0, 0.0, W50]));
        assert_eq!(c.omega_v, VecN::from([0.0, 0.0, W50]));
    }

    #[test]
    fn unbalanced_components() {
        let spec = unbalanced();
        let f = make_field(&spec, Frame::Fundamental).unwrap();
        let xi = unbalance_xi(1.0, 1.2);
        assert!((xi - 1.0167).abs() < 1e-4);
        for k in 0..100 {
            let t = k as f64 * 2e-4;
            let c = frequency_components(&f, t, &spec.flux(t)).unwrap();
            assert!((c.half_w[2] - xi * W50).abs() < 1e-9 * W50);
            assert_eq!(c.rho_t, 0.0);
            assert!((c.rho_v - c.rho_r).abs() < 1e-12);
            assert!((c.omega_v[2] - (c.omega_r[2] + xi * W50)).abs() < 1e-9 * W50);
        }
    }

    #[test]
    fn harmonic_components_in_fundamental_frame() {
        let spec = harmonic(&[7, 11]);
        let f = make_field(&spec, Frame::Fundamental).unwrap();
        for k in 0..100 {
            let t = k as f64 * 2e-4;
            let c = frequency_components(&f, t, &spec.flux(t)).unwrap();
            assert_eq!(c.rho_r, 0.0);
            assert_eq!(c.omega_r, VecN::zeros(3));
            assert_eq!(c.rho_v, c.rho_t);
            assert!((c.omega_v[2] - (c.omega_t[2] + W50)).abs() < 1e-9 * W50);
            let parts = harmonic_components(&f, t, &spec.flux(t)).unwrap();
            let rho_sum: f64 = parts.iter().map(|p| p.rho).sum();
            let om_sum: f64 = parts.iter().map(|p| p.omega_z).sum();
            assert!((rho_sum - c.rho_t).abs() < 1e-9 * W50);
            assert!((om_sum - c.omega_t[2]).abs() < 1e-9 * W50);
        }
    }

    #[test]
    fn single_harmonic_closed_forms() {
        // For one harmonic h, with Δ = θ_h − θ and |v|² = V² + V_h² + 2VV_h cos Δ:
        //   ρ_h = −ω_o(h−1)V V_h sin Δ / |v|²
        //   ω_h = +ω_o(h−1)V_h(V cos Δ + V_h) / |v|²
        // (signs obtained by differentiating the synthesized signal directly).
        let (v, h) = (1.0, 7.0);
        let vh = v / (3.0 * h);
        let spec = harmonic(&[7]);
        let f = make_field(&spec, Frame::Fundamental).unwrap();
        for k in 0..200 {
            let t = k as f64 * 1e-4;
            let th = W50 * t + PI / 6.0;
            let thh = h * W50 * t + h * PI / 6.0;
            let d = thh - th;
            let m2 = v * v + vh * vh + 2.0 * v * vh * d.cos();
            let rho = -W50 * (h - 1.0) * v * vh * d.sin() / m2;
            let om = W50 * (h - 1.0) * vh * (v * d.cos() + vh) / m2;
            let c = frequency_components(&f, t, &spec.flux(t)).unwrap();
            assert!((c.rho_t - rho).abs() < 1e-9 * W50, "t={t}");
            assert!((c.omega_t[2] - om).abs() < 1e-9 * W50, "t={t}");
        }
    }

    #[test]
    fn harmonic_frame_vorticity() {
        let spec = harmonic(&[7, 11]);
        let f1 = make_field(&spec, Frame::Fundamental).unwrap();
        let f7 = make_field(&spec, Frame::Harmonic(7)).unwrap();
        let phi = spec.flux(0.003);
        let w1 = decompose(&f1, 0.003, &phi).unwrap().vorticity.unwrap();
        let w7 = decompose(&f7, 0.003, &phi).unwrap().vorticity.unwrap();
        assert!((w1[2] - 2.0 * W50).abs() < 1e-9);
        assert!((w7[2] - 14.0 * W50).abs() < 1e-9);
        let c1 = frequency_components(&f1, 0.003, &phi).unwrap();
        let c7 = frequency_components(&f7, 0.003, &phi).unwrap();
        assert!((c1.omega_v[2] - c7.omega_v[2]).abs() < 1e-9 * W50);
        assert!((c1.rho_v - c7.rho_v).abs() < 1e-9 * W50);
    }

    #[test]
    fn helmholtz_residuals() {
        for spec in [balanced(), unbalanced()] {
            let f = make_field(&spec, Frame::Fundamental).unwrap();
            assert_eq!(
                helmholtz_residual(&f, 0.004, &spec.flux(0.004)).unwrap(),
                0.0
            );
        }
        let dc = SignalSpec::Dc {
            v0: 1.0,
            lambda: 0.3,
        };
        let f = make_field(&dc, Frame::Fundamental).unwrap();
        assert_eq!(helmholtz_residual(&f, 0.5, &dc.flux(0.5)).unwrap(), 0.0);

        let spec = harmonic(&[7]);
        let f = make_field(&spec, Frame::Fundamental).unwrap();
        let grid = SampleGrid::with_duration(0.0, 1e-5, 0.02).unwrap();
        let res: Vec<f64> = grid
            .times()
            .map(|t| helmholtz_residual(&f, t, &spec.flux(t)).unwrap())
            .collect();
        let rms = (res.iter().map(|r| r * r).sum::<f64>() / res.len() as f64).sqrt();
        assert!(rms > 1.0, "rms = {rms}");
        assert!(res.iter().all(|r| *r >= 0.0));
    }

    #[test]
    fn fd_jacobian_linear_fields() {
        for spec in [balanced(), unbalanced(), harmonic(&[7, 11])] {
            let f = make_field(&spec, Frame::Fundamental).unwrap();
            let phi = spec.flux(0.0037);
            let fd = fd_jacobian(&f, 0.0037, &phi, 1e-6).unwrap();
            let exact = f.jacobian(0.0037, &phi).unwrap();
            assert!((&fd - &exact).max_abs() <= 1e-8, "{spec:?}");
        }
        assert!(fd_jacobian(
            &make_field(&balanced(), Frame::Fundamental).unwrap(),
            0.0,
            &VecN::zeros(3),
            0.0
        )
        .is_err());
    }

    #[test]
    fn streamline_dc_constant() {
        let spec = SignalSpec::Dc {
            v0: 1.5,
            lambda: 0.0,
        };
        let f = make_field(&spec, Frame::Fundamental).unwrap();
        let grid = SampleGrid::new(0.0, 0.01, 101).unwrap();
        let phi = integrate_streamline(&f, &VecN::from_scalar(0.0), &grid).unwrap();
        for (k, p) in phi.iter().enumerate() {
            assert!((p[0] - 1.5 * grid.time(k)).abs() < 1e-13);
        }
    }

    #[test]
    fn streamline_overflow_reported() {
        let spec = SignalSpec::Dc {
            v0: 1.0,
            lambda: 800.0,
        };
        let f = make_field(&spec, Frame::Fundamental).unwrap();
        let grid = SampleGrid::new(0.0, 0.01, 200).unwrap();
        let err = integrate_streamline(&f, &VecN::from_scalar(0.0), &grid).unwrap_err();
        assert!(matches!(err, Error::Integration { .. }));
    }

    #[test]
    fn kappa_xi_limits() {
        assert_eq!(unbalance_kappa(1.0, 1.0), 0.0);
        assert_eq!(unbalance_xi(1.0, 1.0), 1.0);
        assert!((unbalance_kappa(1.0, 1.2) - 0.18333).abs() < 1e-4);
        // Below 15 % magnitude difference the correction stays under 1 %.
        assert!(unbalance_xi(1.0, 1.15) - 1.0 < 0.01);
    }
}
