//! Purity, spin flip, Wootters concurrence and the Bloch–Fano decomposition
//! of two-qubit density matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigen_4, hermitian_eigenvalues_4, pauli, singular_values_4, ComplexMatrix4};
use crate::spin_oscillator::SpinDensityMatrix;

/// Eigenvalues of `√ρ ρ̃ √ρ` below this are rejected; those between it and
/// zero are clamped.
pub const EIGENVALUE_CLAMP: f64 = -1e-10;

/// Eigenvalues of ρ at or below this are treated as exact zeros before the
/// square root is taken. Round-off of a null eigenvalue is ~1e-17, and its
/// square root would otherwise leak ~1e-9 into the concurrence.
pub const RANK_CUTOFF: f64 = 64.0 * f64::EPSILON;

/// `tr(ρ²)`.
pub fn purity(rho: &SpinDensityMatrix) -> f64 {
    let m = rho.matrix();
    // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
    m.entries.iter().flatten().map(|z| z.norm_sqr()).sum()
}

/// Purity of the spin states of this crate, `(3 + 4e^{−R} + e^{−4R}) / 8`.
pub fn purity_from_r(r: f64) -> f64 {
    (3.0 + 4.0 * (-r).exp() + (-4.0 * r).exp()) / 8.0
}

fn sigma_y_pair() -> ComplexMatrix4 {
    ComplexMatrix4::kron(&pauli(2), &pauli(2))
}

/// `(σ₂⊗σ₂) ρ* (σ₂⊗σ₂)`.
pub fn spin_flip(rho: &SpinDensityMatrix) -> ComplexMatrix4 {
    let yy = sigma_y_pair();
    yy * rho.matrix().conj() * yy
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)` with `λ_i` the square
/// roots, in descending order, of the eigenvalues of `ρρ̃`.
///
/// They are taken from the Hermitian matrix `M = √ρ ρ̃ √ρ`, which has the same
/// spectrum. Since `M = A A†` with `A = √ρ (σ₂⊗σ₂) √ρ*`, the `λ_i` are read off
/// as the singular values of `A`; this avoids a second square root of
/// round-off for the null eigenvalues every rank-deficient state has.
pub fn concurrence(rho: &SpinDensityMatrix) -> Result<f64> {
    let sqrt_rho = hermitian_eigen_4(rho.matrix())?.map_spectrum(|x| if x <= RANK_CUTOFF { 0.0 } else { x.sqrt() });
    let a = sqrt_rho * sigma_y_pair() * sqrt_rho.conj();
    let m = (a * a.adjoint()).hermitize();
    for v in hermitian_eigenvalues_4(&m)? {
        if v < EIGENVALUE_CLAMP {
            return Err(Error::NegativeEigenvalue { value: v, threshold: EIGENVALUE_CLAMP });
        }
    }
    let l = singular_values_4(&a);
    // ascending order: l[3] is the largest
    Ok((l[3] - l[2] - l[1] - l[0]).max(0.0))
}

/// Bloch vectors of both spins and the correlation tensor:
/// `ρ = ¼ (I + a1·σ⊗I + I⊗a2·σ + Σ t_ij σ_i⊗σ_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochFano {
    pub a1: [f64; 3],
    pub a2: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl BlochFano {
    pub fn recompose(&self) -> ComplexMatrix4 {
        let id = pauli(0);
        let mut m = ComplexMatrix4::identity();
        for i in 0..3 {
            let s = pauli(i + 1);
            m = m + ComplexMatrix4::kron(&s, &id).scale(self.a1[i].into());
            m = m + ComplexMatrix4::kron(&id, &s).scale(self.a2[i].into());
            for j in 0..3 {
                m = m + ComplexMatrix4::kron(&s, &pauli(j + 1)).scale(self.t[i][j].into());
            }
        }
        m.scale(Complex64::new(0.25, 0.0))
    }

    /// Same correlations, both Bloch vectors reversed.
    pub fn flipped(&self) -> Self {
        Self { a1: self.a1.map(|x| -x), a2: self.a2.map(|x| -x), t: self.t }
    }
}

fn expectation(rho: &ComplexMatrix4, op: &ComplexMatrix4) -> f64 {
    (*rho * *op).trace().re
}

pub fn bloch_fano_decompose(rho: &SpinDensityMatrix) -> BlochFano {
    let m = rho.matrix();
    let id = pauli(0);
    let mut out = BlochFano { a1: [0.0; 3], a2: [0.0; 3], t: [[0.0; 3]; 3] };
    for i in 0..3 {
        let s = pauli(i + 1);
        out.a1[i] = expectation(m, &ComplexMatrix4::kron(&s, &id));
        out.a2[i] = expectation(m, &ComplexMatrix4::kron(&id, &s));
        for j in 0..3 {
            out.t[i][j] = expectation(m, &ComplexMatrix4::kron(&s, &pauli(j + 1)));
        }
    }
    out
}
