//! Parametric test waveforms, the amplitude-invariant Clarke transform,
//! sampling, numeric differentiation and flux recovery.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geomalg::{require_dim, VecN};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Amplitude-invariant Clarke transform, abc → αβγ.
pub fn clarke_forward(v_abc: &VecN) -> Result<VecN> {
    require_dim("clarke_forward", 3, v_abc.dim())?;
    let (a, b, c) = (v_abc[0], v_abc[1], v_abc[2]);
    let k = 2.0 / 3.0;
    VecN::new(vec![
        k * (a - 0.5 * b - 0.5 * c),
        k * SQRT3_2 * (b - c),
        k * 0.5 * (a + b + c),
    ])
}

/// Inverse of [`clarke_forward`], αβγ → abc.
pub fn clarke_inverse(v_abg: &VecN) -> Result<VecN> {
    require_dim("clarke_inverse", 3, v_abg.dim())?;
    let (al, be, ga) = (v_abg[0], v_abg[1], v_abg[2]);
    VecN::new(vec![
        al + ga,
        -0.5 * al + SQRT3_2 * be + ga,
        -0.5 * al - SQRT3_2 * be + ga,
    ])
}

/// One harmonic term of a non-sinusoidal voltage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicTerm {
    pub order: u32,
    /// Peak magnitude in the αβ plane (V).
    pub amplitude: f64,
    /// Phase offset φ_h (rad).
    pub phase: f64,
}

/// Parametric description of a test waveform.
///
/// The ac variants are given directly in αβγ (Clarke) coordinates with
/// `v_γ = 0`; the dc variant is one-dimensional.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalSpec {
    Balanced {
        amplitude: f64,
        omega0: f64,
        phase: f64,
    },
    Unbalanced {
        v_alpha: f64,
        v_beta: f64,
        omega0: f64,
        phase: f64,
    },
    Harmonic {
        amplitude: f64,
        omega0: f64,
        phase: f64,
        harmonics: Vec<HarmonicTerm>,
    },
    /// `v(t) = v0·exp(λt)`.
    Dc { v0: f64, lambda: f64 },
}

/// A rotating component `(A_α cos θ_k, A_β sin θ_k)` with `θ_k = kω_o t + φ_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Rotor {
    pub order: f64,
    pub a_alpha: f64,
    pub a_beta: f64,
    pub phase: f64,
}

impl SignalSpec {
    /// Harmonic fixture with `V_h = V/(3h)` and `φ_h = hφ` for each order.
    pub fn harmonic_fixture(amplitude: f64, omega0: f64, phase: f64, orders: &[u32]) -> Self {
        let harmonics = orders
            .iter()
            .map(|&h| HarmonicTerm {
                order: h,
                amplitude: amplitude / (3.0 * h as f64),
                phase: h as f64 * phase,
            })
            .collect();
        SignalSpec::Harmonic {
            amplitude,
            omega0,
            phase,
            harmonics,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        let bad = |msg: &str| Err(Error::InvalidSpec(msg.to_string()));
        match self {
            SignalSpec::Balanced {
                amplitude,
                omega0,
                phase,
            } => {
                if !finite(&[*amplitude, *omega0, *phase]) {
                    return bad("non-finite parameter");
                }
                if *amplitude < 0.0 {
                    return bad("amplitude must be non-negative");
                }
                check_omega(*omega0)
            }
            SignalSpec::Unbalanced {
                v_alpha,
                v_beta,
                omega0,
                phase,
            } => {
                if !finite(&[*v_alpha, *v_beta, *omega0, *phase]) {
                    return bad("non-finite parameter");
                }
                if *v_alpha < 0.0 || *v_beta < 0.0 {
                    return bad("amplitudes must be non-negative");
                }
                check_omega(*omega0)
            }
            SignalSpec::Harmonic {
                amplitude,
                omega0,
                phase,
                harmonics,
            } => {
                if !finite(&[*amplitude, *omega0, *phase]) {
                    return bad("non-finite parameter");
                }
                if *amplitude < 0.0 {
                    return bad("amplitude must be non-negative");
                }
                check_omega(*omega0)?;
                for (i, h) in harmonics.iter().enumerate() {
                    if h.order < 2 {
                        return bad("harmonic orders must be >= 2");
                    }
                    if !finite(&[h.amplitude, h.phase]) || h.amplitude < 0.0 {
                        return bad("harmonic amplitude must be finite and non-negative");
                    }
                    if harmonics[..i].iter().any(|o| o.order == h.order) {
                        return bad("harmonic orders must be distinct");
                    }
                }
                Ok(())
            }
            SignalSpec::Dc { v0, lambda } => {
                if !finite(&[*v0, *lambda]) {
                    return bad("non-finite parameter");
                }
                Ok(())
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SignalSpec::Dc { .. } => 1,
            _ => 3,
        }
    }

    /// Fundamental angular frequency; `None` for dc.
    pub fn omega0(&self) -> Option<f64> {
        match self {
            SignalSpec::Balanced { omega0, .. }
            | SignalSpec::Unbalanced { omega0, .. }
            | SignalSpec::Harmonic { omega0, .. } => Some(*omega0),
            SignalSpec::Dc { .. } => None,
        }
    }

    /// Fundamental phase angle θ(t) = ω_o t + φ; `None` for dc.
    pub fn theta(&self, t: f64) -> Option<f64> {
        match self {
            SignalSpec::Balanced { omega0, phase, .. }
            | SignalSpec::Unbalanced { omega0, phase, .. }
            | SignalSpec::Harmonic { omega0, phase, .. } => Some(omega0 * t + phase),
            SignalSpec::Dc { .. } => None,
        }
    }

    /// Highest harmonic order present (1 for sinusoidal, 0 for dc).
    pub fn max_order(&self) -> u32 {
        match self {
            SignalSpec::Dc { .. } => 0,
            SignalSpec::Harmonic { harmonics, .. } => {
                harmonics.iter().map(|h| h.order).max().unwrap_or(1).max(1)
            }
            _ => 1,
        }
    }

    /// Flux scale Φ = V/ω_o of the fundamental (largest αβ amplitude for
    /// unbalanced signals); `|v0|` for dc.
    pub fn flux_scale(&self) -> f64 {
        match self {
            SignalSpec::Balanced {
                amplitude, omega0, ..
            }
            | SignalSpec::Harmonic {
                amplitude, omega0, ..
            } => amplitude / omega0,
            SignalSpec::Unbalanced {
                v_alpha,
                v_beta,
                omega0,
                ..
            } => v_alpha.max(*v_beta) / omega0,
            SignalSpec::Dc { v0, .. } => v0.abs(),
        }
    }

    pub(crate) fn rotors(&self) -> Vec<Rotor> {
        match self {
            SignalSpec::Balanced {
                amplitude, phase, ..
            } => vec![Rotor {
                order: 1.0,
                a_alpha: *amplitude,
                a_beta: *amplitude,
                phase: *phase,
            }],
            SignalSpec::Unbalanced {
                v_alpha,
                v_beta,
                phase,
                ..
            } => vec![Rotor {
                order: 1.0,
                a_alpha: *v_alpha,
                a_beta: *v_beta,
                phase: *phase,
            }],
            SignalSpec::Harmonic {
                amplitude,
                phase,
                harmonics,
                ..
            } => std::iter::once(Rotor {
                order: 1.0,
                a_alpha: *amplitude,
                a_beta: *amplitude,
                phase: *phase,
            })
            .chain(harmonics.iter().map(|h| Rotor {
                order: h.order as f64,
                a_alpha: h.amplitude,
                a_beta: h.amplitude,
                phase: h.phase,
            }))
            .collect(),
            SignalSpec::Dc { .. } => Vec::new(),
        }
    }

    pub fn voltage(&self, t: f64) -> VecN {
        match self {
            SignalSpec::Dc { v0, lambda } => VecN::from_scalar(v0 * (lambda * t).exp()),
            _ => self.sum_rotors(t, |r, th, _| [r.a_alpha * th.cos(), r.a_beta * th.sin()]),
        }
    }

    pub fn voltage_derivative(&self, t: f64) -> VecN {
        match self {
            SignalSpec::Dc { v0, lambda } => VecN::from_scalar(lambda * v0 * (lambda * t).exp()),
            _ => self.sum_rotors(t, |r, th, w| {
                [-w * r.a_alpha * th.sin(), w * r.a_beta * th.cos()]
            }),
        }
    }

    /// Zero-mean flux trajectory, the time integral of [`voltage`](Self::voltage).
    pub fn flux(&self, t: f64) -> VecN {
        match self {
            SignalSpec::Dc { v0, lambda } => {
                let phi = if *lambda == 0.0 {
                    v0 * t
                } else {
                    v0 / lambda * (lambda * t).exp_m1()
                };
                VecN::from_scalar(phi)
            }
            _ => self.sum_rotors(t, |r, th, w| {
                [r.a_alpha / w * th.sin(), -r.a_beta / w * th.cos()]
            }),
        }
    }

    fn sum_rotors(&self, t: f64, term: impl Fn(&Rotor, f64, f64) -> [f64; 2]) -> VecN {
        let omega0 = self.omega0().unwrap_or(0.0);
        let mut acc = [0.0; 3];
        for r in self.rotors() {
            let w = r.order * omega0;
            let [x, y] = term(&r, w * t + r.phase, w);
            acc[0] += x;
            acc[1] += y;
        }
        VecN::from(acc)
    }
}

fn check_omega(omega0: f64) -> Result<()> {
    if omega0 > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSpec("omega0 must be positive".into()))
    }
}

/// Uniform time grid `t_k = t0 + k·dt`, `k = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleGrid {
    t0: f64,
    dt: f64,
    count: usize,
}

impl SampleGrid {
    pub fn new(t0: f64, dt: f64, count: usize) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() || !t0.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "dt must be positive and finite, got {dt}"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples, got {count}"
            )));
        }
        Ok(Self { t0, dt, count })
    }

    /// Grid of `round(duration/dt)` samples starting at `t0`.
    pub fn with_duration(t0: f64, dt: f64, duration: f64) -> Result<Self> {
        if !(duration > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "duration must be positive, got {duration}"
            )));
        }
        Self::new(t0, dt, (duration / dt).round() as usize)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|k| self.time(k))
    }

    /// Number of samples spanning `period`, if it is a whole number.
    pub fn samples_per(&self, period: f64) -> Result<usize> {
        let ratio = period / self.dt;
        let k = ratio.round();
        if !(k >= 1.0) || (ratio - k).abs() > 1e-6 * k.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "period {period} is not a whole number of steps dt = {}",
                self.dt
            )));
        }
        Ok(k as usize)
    }
}

/// A sampled signal together with its analytic derivative and flux.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalBundle {
    pub grid: SampleGrid,
    pub v: Vec<VecN>,
    pub v_prime: Vec<VecN>,
    pub flux: Vec<VecN>,
}

impl SignalBundle {
    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }
}

/// Evaluate the closed forms of `spec` on every grid point.
pub fn synthesize(spec: &SignalSpec, grid: &SampleGrid) -> Result<SignalBundle> {
    spec.validate()?;
    let v = grid.times().map(|t| spec.voltage(t)).collect();
    let v_prime = grid.times().map(|t| spec.voltage_derivative(t)).collect();
    let flux = grid.times().map(|t| spec.flux(t)).collect();
    Ok(SignalBundle {
        grid: *grid,
        v,
        v_prime,
        flux,
    })
}

/// Second-order finite-difference derivative: central in the interior,
/// one-sided three-point stencils at both ends.
pub fn numeric_derivative(series: &[VecN], dt: f64) -> Result<Vec<VecN>> {
    let n = series.len();
    if n < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: n });
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidGrid(format!("dt must be positive, got {dt}")));
    }
    let dim = series[0].dim();
    if let Some(bad) = series.iter().find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let h2 = 2.0 * dt;
    let comb = |c: [f64; 3], idx: [usize; 3]| -> VecN {
        let out = (0..dim)
            .map(|d| {
                (c[0] * series[idx[0]][d] + c[1] * series[idx[1]][d] + c[2] * series[idx[2]][d])
                    / h2
            })
            .collect();
        VecN::new(out).unwrap_or_else(|_| VecN::zeros(dim))
    };
    let mut out = Vec::with_capacity(n);
    out.push(comb([-3.0, 4.0, -1.0], [0, 1, 2]));
    for k in 1..n - 1 {
        out.push(comb([-1.0, 0.0, 1.0], [k - 1, k, k + 1]));
    }
    out.push(comb([1.0, -4.0, 3.0], [n - 3, n - 2, n - 1]));
    Ok(out)
}

/// Cumulative trapezoidal integral of `series` starting from zero. When
/// `detrend_period` is given, the per-component mean over the trailing whole
/// number of periods is subtracted.
pub fn flux_from_samples(
    series: &[VecN],
    grid: &SampleGrid,
    detrend_period: Option<f64>,
) -> Result<Vec<VecN>> {
    let n = series.len();
    if n != grid.count() {
        return Err(Error::InvalidGrid(format!(
            "series has {n} samples but grid has {}",
            grid.count()
        )));
    }
    let dim = series[0].dim();
    let dt = grid.dt();
    let mut acc = vec![0.0; dim];
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(n);
    out.push(acc.clone());
    for k in 1..n {
        let (a, b) = (&series[k - 1], &series[k]);
        if b.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.dim(),
            });
        }
        for d in 0..dim {
            acc[d] += 0.5 * dt * (a[d] + b[d]);
        }
        out.push(acc.clone());
    }
    if let Some(period) = detrend_period {
        let per = grid.samples_per(period)?;
        let windows = n / per;
        if windows == 0 {
            return Err(Error::InvalidGrid(format!(
                "detrend period {period} is longer than the series"
            )));
        }
        let span = windows * per;
        let tail = &out[n - span..];
        let mean: Vec<f64> = (0..dim)
            .map(|d| tail.iter().map(|row| row[d]).sum::<f64>() / span as f64)
            .collect();
        for row in out.iter_mut() {
            for d in 0..dim {
                row[d] -= mean[d];
            }
        }
    }
    out.into_iter().map(VecN::new).collect()
}

/// Period of the fundamental, `2π/ω_o`.
pub fn period_of(omega0: f64) -> f64 {
    2.0 * PI / omega0
}
