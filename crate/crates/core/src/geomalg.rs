//! Small exterior-algebra and tensor kernel.
//!
//! Bivectors are stored as skew-symmetric matrices with the convention
//! `M[i][j] = a_i b_j - a_j b_i` for `a ∧ b`. The action of a bivector on a
//! vector is the plain matrix-vector product `M·v`, and in three dimensions
//! the Hodge map sends `a ∧ b` to `a × b`.

use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// An n-dimensional real vector.
#[derive(Debug, Clone, PartialEq)]
pub struct VecN(Vec<f64>);

impl VecN {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Empty);
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(components))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// One-dimensional vector.
    pub fn from_scalar(x: f64) -> Self {
        Self(vec![x])
    }

    /// Unit basis vector `e_k` (zero-based `k`).
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &VecN) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, k: f64) -> VecN {
        VecN(self.0.iter().map(|c| c * k).collect())
    }

    pub fn try_add(&self, other: &VecN) -> Result<VecN> {
        check_dim(self.dim(), other.dim())?;
        Ok(VecN(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn try_sub(&self, other: &VecN) -> Result<VecN> {
        check_dim(self.dim(), other.dim())?;
        Ok(VecN(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Cross product; both operands must be three-dimensional.
    pub fn cross3(&self, other: &VecN) -> Result<VecN> {
        require_dim("cross3", 3, self.dim())?;
        require_dim("cross3", 3, other.dim())?;
        let (a, b) = (&self.0, &other.0);
        Ok(VecN(vec![
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]))
    }
}

impl From<[f64; 3]> for VecN {
    fn from(c: [f64; 3]) -> Self {
        VecN(c.to_vec())
    }
}

impl Index<usize> for VecN {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Neg for &VecN {
    type Output = VecN;
    fn neg(self) -> VecN {
        self.scale(-1.0)
    }
}

/// Square n×n real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    n: usize,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut t = Self::zeros(n);
        for i in 0..n {
            t.set(i, i, 1.0);
        }
        t
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.n + j] = x;
    }

    pub fn transpose(&self) -> Tensor {
        Tensor::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, k: f64) -> Tensor {
        Tensor {
            n: self.n,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn try_add(&self, other: &Tensor) -> Result<Tensor> {
        check_dim(self.n, other.n)?;
        Ok(Tensor {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Tensor) -> Result<Tensor> {
        check_dim(self.n, other.n)?;
        Ok(Tensor {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn apply(&self, v: &VecN) -> Result<VecN> {
        check_dim(self.n, v.dim())?;
        let out = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect();
        Ok(VecN(out))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// Axial vector of the skew part: `(A[2][1], A[0][2], A[1][0])` for the
    /// skew matrix `A`, so that `A·v = axial × v`. Three dimensions only.
    pub fn axial3(&self) -> Result<VecN> {
        require_dim("axial3", 3, self.n)?;
        let q = skew_part(self);
        Ok(VecN(vec![q.get(2, 1), q.get(0, 2), q.get(1, 0)]))
    }
}

impl Add for &Tensor {
    type Output = Tensor;
    fn add(self, rhs: &Tensor) -> Tensor {
        self.try_add(rhs).expect("tensor dimensions differ")
    }
}

impl Sub for &Tensor {
    type Output = Tensor;
    fn sub(self, rhs: &Tensor) -> Tensor {
        self.try_sub(rhs).expect("tensor dimensions differ")
    }
}

/// A bivector in n dimensions, stored as a skew-symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Bivector(Tensor);

impl Bivector {
    pub fn zero(n: usize) -> Self {
        Self(Tensor::zeros(n))
    }

    /// Wraps an exactly skew-symmetric matrix.
    pub fn from_skew(m: Tensor) -> Result<Self> {
        for i in 0..m.n {
            for j in 0..=i {
                if m.get(i, j) != -m.get(j, i) {
                    return Err(Error::NotSkew { i, j });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &Tensor {
        &self.0
    }

    pub fn scale(&self, k: f64) -> Bivector {
        Bivector(self.0.scale(k))
    }

    pub fn try_add(&self, other: &Bivector) -> Result<Bivector> {
        Ok(Bivector(self.0.try_add(&other.0)?))
    }

    /// Frobenius norm of the matrix representation (√2 times the blade magnitude).
    pub fn frobenius(&self) -> f64 {
        self.0.frobenius()
    }

    pub fn is_zero(&self) -> bool {
        self.0.data.iter().all(|&x| x == 0.0)
    }
}

impl Mul<f64> for &Bivector {
    type Output = Bivector;
    fn mul(self, k: f64) -> Bivector {
        self.scale(k)
    }
}

/// Scalar plus bivector.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    pub scalar: f64,
    pub bivector: Bivector,
}

impl Multivector {
    pub fn new(scalar: f64, bivector: Bivector) -> Self {
        Self { scalar, bivector }
    }

    pub fn conjugate(&self) -> Multivector {
        Multivector {
            scalar: self.scalar,
            bivector: self.bivector.scale(-1.0),
        }
    }

    /// `scalar·v + B·v`.
    pub fn act(&self, v: &VecN) -> Result<VecN> {
        let rot = bivector_apply(&self.bivector, v)?;
        v.scale(self.scalar).try_add(&rot)
    }
}

/// Outer product `a ∧ b` as the skew matrix `a_i b_j - a_j b_i`.
pub fn wedge(a: &VecN, b: &VecN) -> Result<Bivector> {
    check_dim(a.dim(), b.dim())?;
    let n = a.dim();
    let mut m = Tensor::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let x = a[i] * b[j] - a[j] * b[i];
            m.set(i, j, x);
            m.set(j, i, -x);
        }
    }
    Ok(Bivector(m))
}

/// Hodge dual of a 3-d bivector: `⋆(a ∧ b) = a × b`.
pub fn hodge3(b: &Bivector) -> Result<VecN> {
    require_dim("hodge3", 3, b.dim())?;
    Ok(VecN(vec![b.get(1, 2), b.get(2, 0), b.get(0, 1)]))
}

/// Inverse of [`hodge3`].
pub fn embed3(w: &VecN) -> Result<Bivector> {
    require_dim("embed3", 3, w.dim())?;
    let m = Tensor::from_fn(3, |i, j| match (i, j) {
        (1, 2) => w[0],
        (2, 1) => -w[0],
        (2, 0) => w[1],
        (0, 2) => -w[1],
        (0, 1) => w[2],
        (1, 0) => -w[2],
        _ => 0.0,
    });
    Ok(Bivector(m))
}

/// Bivector acting on a vector as `B·v` (matrix-vector product).
pub fn bivector_apply(b: &Bivector, v: &VecN) -> Result<VecN> {
    b.0.apply(v)
}

/// Split of a square matrix into its isotropic, traceless-symmetric and skew
/// parts.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSplit {
    /// Normal strain `(tr J / n)·I`.
    pub normal: Tensor,
    /// Shear strain, symmetric and traceless.
    pub shear: Tensor,
    /// Rigid-body rotation, skew-symmetric.
    pub rotation: Tensor,
}

pub fn decompose_matrix(j: &Tensor) -> MatrixSplit {
    let n = j.dim();
    let normal = Tensor::identity(n).scale(j.trace() / n as f64);
    let sym = Tensor::from_fn(n, |a, b| 0.5 * (j.get(a, b) + j.get(b, a)));
    let shear = &sym - &normal;
    let rotation = skew_part(j);
    MatrixSplit {
        normal,
        shear,
        rotation,
    }
}

fn skew_part(j: &Tensor) -> Tensor {
    let n = j.dim();
    let mut q = Tensor::zeros(n);
    for a in 0..n {
        for b in (a + 1)..n {
            let x = 0.5 * (j.get(a, b) - j.get(b, a));
            q.set(a, b, x);
            q.set(b, a, -x);
        }
    }
    q
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn require_dim(op: &'static str, required: usize, found: usize) -> Result<()> {
    if found != required {
        return Err(Error::UnsupportedDimension {
            op,
            required,
            found,
        });
    }
    Ok(())
}
