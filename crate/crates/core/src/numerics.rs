//! Uniform grids, composite Simpson quadrature, central finite differences
//! and a complex Jacobi eigensolver for 4x4 Hermitian matrices.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Uniformly spaced nodes `lo, lo + step, ..., hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::InvalidGrid(format!("need finite lo < hi, got [{lo}, {hi}]")));
        }
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 nodes, got {n}")));
        }
        Ok(Self { lo, hi, n })
    }

    /// Grid on `center ± half_width`.
    pub fn centered(center: f64, half_width: f64, n: usize) -> Result<Self> {
        Self::new(center - half_width, center + half_width, n)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.n - 1 {
            self.hi
        } else {
            self.lo + i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.node(i))
    }

    /// Nodes and composite Simpson weights. An even node count is padded
    /// with one extra node at `hi + step` so the panel count is even.
    pub fn simpson_rule(&self) -> (Vec<f64>, Vec<f64>) {
        let h = self.step();
        let n = if self.n.is_multiple_of(2) { self.n + 1 } else { self.n };
        let nodes: Vec<f64> = (0..n).map(|i| if i < self.n { self.node(i) } else { self.hi + h }).collect();
        let weights = (0..n)
            .map(|i| {
                let w = if i == 0 || i == n - 1 {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * h / 3.0
            })
            .collect();
        (nodes, weights)
    }
}

/// Tensor-product grid over phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub qgrid: Grid1D,
    pub pgrid: Grid1D,
}

impl Grid2D {
    pub fn new(qgrid: Grid1D, pgrid: Grid1D) -> Self {
        Self { qgrid, pgrid }
    }

    /// Number of nodes, `nq * np`.
    pub fn len(&self) -> usize {
        self.qgrid.len() * self.pgrid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major index of node `(iq, ip)`.
    pub fn index(&self, iq: usize, ip: usize) -> usize {
        iq * self.pgrid.len() + ip
    }

    pub fn node(&self, iq: usize, ip: usize) -> (f64, f64) {
        (self.qgrid.node(iq), self.pgrid.node(ip))
    }
}

fn check_finite(z: Complex64, at: impl FnOnce() -> String) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFiniteSample { at: at(), value: z.to_string() })
    }
}

/// Composite Simpson approximation of `∫ f` over the grid.
pub fn quadrature_1d<F>(f: F, grid: &Grid1D) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let (nodes, weights) = grid.simpson_rule();
    let mut acc = ZERO;
    for (i, (&x, &w)) in nodes.iter().zip(&weights).enumerate() {
        let v = check_finite(f(x), || format!("{i} (x = {x})"))?;
        acc += v * w;
    }
    Ok(acc)
}

/// Tensor-product Simpson approximation of `∫∫ f dq dp`.
pub fn quadrature_2d<F>(f: F, grid: &Grid2D) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64,
{
    let (qs, wq) = grid.qgrid.simpson_rule();
    let (ps, wp) = grid.pgrid.simpson_rule();
    let mut acc = ZERO;
    for (i, (&q, &a)) in qs.iter().zip(&wq).enumerate() {
        let mut row = ZERO;
        for (j, (&p, &b)) in ps.iter().zip(&wp).enumerate() {
            let v = check_finite(f(q, p), || format!("({i}, {j}) (q = {q}, p = {p})"))?;
            row += v * b;
        }
        acc += row * a;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Q,
    P,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOrder {
    First,
    Second,
}

/// Complex samples on a phase-space grid, optionally over several equally
/// spaced times. Frames are stored row-major, see [`Grid2D::index`].
#[derive(Debug, Clone)]
pub struct SampledField {
    pub grid: Grid2D,
    pub dt: Option<f64>,
    pub frames: Vec<Vec<Complex64>>,
}

impl SampledField {
    /// Single time slice of `f` on the grid.
    pub fn sample<F>(grid: Grid2D, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64,
    {
        Self { grid, dt: None, frames: vec![sample_frame(&grid, f)] }
    }

    /// `f(q, p, t)` at times `t0 + k dt` for `k = 0..count`.
    pub fn sample_in_time<F>(grid: Grid2D, t0: f64, dt: f64, count: usize, f: F) -> Self
    where
        F: Fn(f64, f64, f64) -> Complex64,
    {
        let frames = (0..count)
            .map(|k| {
                let t = t0 + k as f64 * dt;
                sample_frame(&grid, |q, p| f(q, p, t))
            })
            .collect();
        Self { grid, dt: Some(dt), frames }
    }
}

fn sample_frame<F: Fn(f64, f64) -> Complex64>(grid: &Grid2D, f: F) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(grid.len());
    for iq in 0..grid.qgrid.len() {
        let q = grid.qgrid.node(iq);
        for ip in 0..grid.pgrid.len() {
            out.push(f(q, grid.pgrid.node(ip)));
        }
    }
    out
}

/// Output of [`finite_diff`]. `valid[k]` is false at boundary nodes, whose
/// values are left as zero and must be excluded from norms.
#[derive(Debug, Clone)]
pub struct Derivative {
    pub frames: Vec<Vec<Complex64>>,
    pub valid: Vec<bool>,
}

/// Second-order central differences along one axis. For [`Axis::T`] the
/// result holds one frame per interior time sample.
pub fn finite_diff(field: &SampledField, axis: Axis, order: DiffOrder) -> Result<Derivative> {
    let grid = field.grid;
    let (nq, np) = (grid.qgrid.len(), grid.pgrid.len());
    if nq < 5 || np < 5 {
        return Err(Error::InvalidGrid(format!("finite differences need at least 5 nodes per axis, got {nq} x {np}")));
    }
    let stencil = |m: Complex64, c: Complex64, pl: Complex64, h: f64| match order {
        DiffOrder::First => (pl - m) / (2.0 * h),
        DiffOrder::Second => (pl - 2.0 * c + m) / (h * h),
    };
    match axis {
        Axis::T => {
            let dt = field.dt.ok_or_else(|| Error::InvalidGrid("time derivative needs a time step".into()))?;
            if field.frames.len() < 3 {
                return Err(Error::InvalidGrid(format!(
                    "time derivative needs at least 3 frames, got {}",
                    field.frames.len()
                )));
            }
            let frames = field
                .frames
                .windows(3)
                .map(|w| (0..grid.len()).map(|k| stencil(w[0][k], w[1][k], w[2][k], dt)).collect())
                .collect();
            Ok(Derivative { frames, valid: vec![true; grid.len()] })
        }
        Axis::Q | Axis::P => {
            let mut valid = vec![false; grid.len()];
            for iq in 0..nq {
                for ip in 0..np {
                    let interior = match axis {
                        Axis::Q => iq > 0 && iq + 1 < nq,
                        _ => ip > 0 && ip + 1 < np,
                    };
                    valid[grid.index(iq, ip)] = interior;
                }
            }
            let (h, stride) = match axis {
                Axis::Q => (grid.qgrid.step(), np),
                _ => (grid.pgrid.step(), 1),
            };
            let frames =
                field
                    .frames
                    .iter()
                    .map(|frame| {
                        (0..grid.len())
                            .map(|k| {
                                if valid[k] {
                                    stencil(frame[k - stride], frame[k], frame[k + stride], h)
                                } else {
                                    ZERO
                                }
                            })
                            .collect()
                    })
                    .collect();
            Ok(Derivative { frames, valid })
        }
    }
}

pub type ComplexMatrix2 = [[Complex64; 2]; 2];

/// Pauli matrix `σ_i` for `i ∈ {0, 1, 2, 3}`, with `σ_0` the identity.
pub fn pauli(i: usize) -> ComplexMatrix2 {
    match i {
        0 => [[ONE, ZERO], [ZERO, ONE]],
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("pauli index {i} out of range"),
    }
}

/// Dense 4x4 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix4 {
    pub entries: [[Complex64; 4]; 4],
}

impl ComplexMatrix4 {
    pub fn zero() -> Self {
        Self { entries: [[ZERO; 4]; 4] }
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn diag(d: [f64; 4]) -> Self {
        Self::from_fn(|i, j| if i == j { Complex64::new(d[i], 0.0) } else { ZERO })
    }

    /// Kronecker product `a ⊗ b`, first factor on the high bit.
    pub fn kron(a: &ComplexMatrix2, b: &ComplexMatrix2) -> Self {
        Self::from_fn(|i, j| a[i / 2][j / 2] * b[i % 2][j % 2])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] * s)
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                m = m.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        m
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn hermitize(&self) -> Self {
        (*self + self.adjoint()).scale(Complex64::new(0.5, 0.0))
    }
}

impl Add for ComplexMatrix4 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] + rhs.entries[i][j])
    }
}

impl Sub for ComplexMatrix4 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] - rhs.entries[i][j])
    }
}

impl Mul for ComplexMatrix4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..4).map(|k| self.entries[i][k] * rhs.entries[k][j]).sum())
    }
}

/// Maximum tolerated `max |m - m^H|` entry for Hermitian inputs.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Eigenvalues (ascending) and the unitary whose columns are the matching
/// eigenvectors.
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen {
    pub values: [f64; 4],
    pub vectors: ComplexMatrix4,
}

impl HermitianEigen {
    /// `V diag(f(λ)) V^H`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix4 {
        let v = &self.vectors.entries;
        ComplexMatrix4::from_fn(|i, j| (0..4).map(|k| v[i][k] * f(self.values[k]) * v[j][k].conj()).sum())
    }
}

/// Cyclic complex Jacobi diagonalization of the Hermitized input.
pub fn hermitian_eigen_4(m: &ComplexMatrix4) -> Result<HermitianEigen> {
    let defect = m.hermiticity_defect();
    if !(defect <= HERMITIAN_TOLERANCE) {
        return Err(Error::NotHermitian { defect, tolerance: HERMITIAN_TOLERANCE });
    }
    let mut a = m.hermitize();
    for i in 0..4 {
        a.entries[i][i].im = 0.0;
    }
    let mut v = ComplexMatrix4::identity();
    let scale: f64 = a.entries.iter().flatten().map(|z| z.norm_sqr()).sum();

    for _sweep in 0..64 {
        let off: f64 =
            (0..4).flat_map(|p| (p + 1..4).map(move |q| (p, q))).map(|(p, q)| a.entries[p][q].norm_sqr()).sum();
        if off <= 1e-34 * scale || off == 0.0 {
            break;
        }
        for p in 0..3 {
            for q in p + 1..4 {
                let apq = a.entries[p][q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a.entries[p][p].re;
                let aqq = a.entries[q][q].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = D R, D = diag(.., 1 at p, conj(phase) at q, ..).
                let mut g = ComplexMatrix4::identity();
                g.entries[p][p] = Complex64::new(c, 0.0);
                g.entries[p][q] = Complex64::new(s, 0.0);
                g.entries[q][p] = -phase.conj() * s;
                g.entries[q][q] = phase.conj() * c;
                a = g.adjoint() * a * g;
                a.entries[p][q] = ZERO;
                a.entries[q][p] = ZERO;
                for i in 0..4 {
                    a.entries[i][i].im = 0.0;
                }
                v = v * g;
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&x, &y| a.entries[x][x].re.total_cmp(&a.entries[y][y].re));
    let values = order.map(|k| a.entries[k][k].re);
    let vectors = ComplexMatrix4::from_fn(|i, j| v.entries[i][order[j]]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues of a Hermitian 4x4 matrix in ascending order.
pub fn hermitian_eigenvalues_4(m: &ComplexMatrix4) -> Result<[f64; 4]> {
    hermitian_eigen_4(m).map(|e| e.values)
}

/// Singular values of a complex 4x4 matrix in ascending order, by one-sided
/// Jacobi. Small singular values come out with absolute accuracy near
/// machine epsilon times the norm, unlike square roots of the eigenvalues of
/// `A A†`.
pub fn singular_values_4(m: &ComplexMatrix4) -> [f64; 4] {
    let mut cols: [[Complex64; 4]; 4] = std::array::from_fn(|j| std::array::from_fn(|i| m.entries[i][j]));
    let dot =
        |a: &[Complex64; 4], b: &[Complex64; 4]| -> Complex64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    for _sweep in 0..64 {
        let mut rotated = false;
        for j in 0..3 {
            for k in j + 1..4 {
                let alpha = dot(&cols[j], &cols[j]).re;
                let beta = dot(&cols[k], &cols[k]).re;
                let gamma = dot(&cols[j], &cols[k]);
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // rotate column k by the phase of gamma so the pair's overlap is real
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 { 1.0 } else { zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..4 {
                    let a = cols[j][i];
                    let b = cols[k][i] * phase;
                    cols[j][i] = a * c - b * s;
                    cols[k][i] = a * s + b * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut out = cols.map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    out.sort_by(f64::total_cmp);
    out
}
