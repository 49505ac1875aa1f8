//! Two spins coupled through the position of a quantum or classical
//! harmonic oscillator.
//!
//! Each spin-basis component `k` evolves under the oscillator Hamiltonian
//! displaced by `s_k = g_k / mω²` with energy offset `ε_k − g_k²/2mω²`,
//! where `(ε_k) = (ε, 0, 0, −ε)` and `(g_k) = (g, 0, 0, −g)`. The spins start
//! in `|++⟩`, so tracing out the oscillator leaves a reduced density matrix
//! fixed by three real functions `(R, S, U)`.

use num_complex::Complex64;

use crate::classical_states::{
    classical_gaussian_state, coherent_state, InitialCondition, OscillatorParams, PhaseMode,
};
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigenvalues_4, ComplexMatrix4};

/// Product basis `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinBasis {
    UpUp,
    UpDown,
    DownUp,
    DownDown,
}

impl SpinBasis {
    pub const ALL: [SpinBasis; 4] = [SpinBasis::UpUp, SpinBasis::UpDown, SpinBasis::DownUp, SpinBasis::DownDown];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Eigenvalue of `(σ₃⊗I + I⊗σ₃)/2`.
    pub fn total_spin(self) -> f64 {
        match self {
            SpinBasis::UpUp => 1.0,
            SpinBasis::UpDown | SpinBasis::DownUp => 0.0,
            SpinBasis::DownDown => -1.0,
        }
    }
}

/// Physical parameters of the spin–oscillator scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub osc: OscillatorParams,
    /// Coupling strength (energy per length).
    pub g: f64,
    /// Level splitting ε.
    pub epsilon: f64,
    pub ic: InitialCondition,
}

impl ScenarioParams {
    pub fn new(osc: OscillatorParams, g: f64, epsilon: f64, ic: InitialCondition) -> Result<Self> {
        if !g.is_finite() || !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coupling and splitting must be finite, got g = {g}, epsilon = {epsilon}"
            )));
        }
        Ok(Self { osc, g, epsilon, ic })
    }

    /// Scenario in units `m = ω = ħ = 1`: `g = √κ`, `ε = ε̃`, coordinates and
    /// width in units of `√(ħ/mω)` and `√(mωħ)`.
    pub fn dimensionless(kappa: f64, epsilon: f64, q0: f64, p0: f64, sigma: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::InvalidParameter(format!("kappa must be >= 0, got {kappa}")));
        }
        let osc = OscillatorParams::natural();
        let ic = InitialCondition::new(q0, p0, sigma, &osc)?;
        Self::new(osc, kappa.sqrt(), epsilon, ic)
    }

    /// Dimensionless coupling `κ = g²/(mω³ħ)`.
    pub fn kappa(&self) -> f64 {
        let o = &self.osc;
        self.g * self.g / (o.m * o.omega.powi(3) * o.hbar)
    }

    pub fn epsilon_k(&self, k: SpinBasis) -> f64 {
        k.total_spin() * self.epsilon
    }

    pub fn g_k(&self, k: SpinBasis) -> f64 {
        k.total_spin() * self.g
    }

    /// Position displacement `g_k / mω²`.
    pub fn shift(&self, k: SpinBasis) -> f64 {
        self.g_k(k) / (self.osc.m * self.osc.omega * self.osc.omega)
    }

    fn energy_phase(&self, k: SpinBasis, t: f64) -> Complex64 {
        let o = &self.osc;
        let offset = self.epsilon_k(k) - self.g_k(k).powi(2) / (2.0 * o.m * o.omega * o.omega);
        Complex64::from_polar(1.0, -offset * t / o.hbar)
    }
}

/// Exponent and phases that fix the reduced spin state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rsu {
    pub r: f64,
    pub s: f64,
    pub u: f64,
}

impl Rsu {
    pub fn new(r: f64, s: f64, u: f64) -> Self {
        Self { r, s, u }
    }
}

/// Closed form for the quantum oscillator mediator.
pub fn rsu_quantum(t: f64, sp: &ScenarioParams) -> Rsu {
    let o = &sp.osc;
    let kappa = sp.kappa();
    let wt = o.omega * t;
    let (s, c) = wt.sin_cos();
    let u = sp.g / (o.m * o.omega * o.omega * o.hbar)
        * (2.0 * o.m * o.omega * sp.ic.q0 * s + sp.ic.p0 * (1.0 - 2.0 * c))
        + 2.0 * sp.epsilon * t / o.hbar;
    Rsu { r: kappa * (1.0 - c), s: 0.5 * kappa * (s - wt), u }
}

/// Closed form for the classical oscillator mediator with Gaussian width Σ.
pub fn rsu_hybrid(t: f64, sp: &ScenarioParams) -> Rsu {
    let o = &sp.osc;
    let kappa = sp.kappa();
    let wt = o.omega * t;
    let (s, c) = wt.sin_cos();
    let sigma2 = sp.ic.sigma * sp.ic.sigma;
    let g2 = sp.g * sp.g;
    let r = g2 / (o.m * o.m * o.omega.powi(4) * sigma2) * (1.0 - c)
        + g2 * sigma2 / (8.0 * o.omega * o.omega * o.hbar * o.hbar);
    let u = sp.g * sp.ic.q0 / (o.omega * o.hbar) * s - sp.g * sp.ic.p0 / (o.m * o.omega * o.omega * o.hbar) * c
        + 2.0 * sp.epsilon * t / o.hbar;
    Rsu { r, s: 0.5 * kappa * (0.5 * s - wt), u }
}

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Validated two-spin density matrix in the basis of [`SpinBasis`].
///
/// Matrices produced by marginalization follow `ρ_ij = ∫ ψ_i* ψ_j`, the
/// complex conjugate of `|ψ⟩⟨ψ|`; spectra, purity and concurrence do not
/// depend on which of the two is used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinDensityMatrix(ComplexMatrix4);

impl SpinDensityMatrix {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(m: ComplexMatrix4) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if !(defect <= HERMITIAN_TOL) {
            return Err(Error::InvalidDensity(format!("Hermiticity defect {defect:e}")));
        }
        let tr = m.trace();
        if !((tr - 1.0).norm() <= TRACE_TOL) {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        let lowest = hermitian_eigenvalues_4(&m)?[0];
        if lowest < -PSD_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(Self(m))
    }

    /// Pure state `|ψ⟩⟨ψ|`; the vector is normalized first.
    pub fn pure(psi: [Complex64; 4]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidDensity("zero state vector".into()));
        }
        Self::new(ComplexMatrix4::from_fn(|i, j| psi[i] * psi[j].conj() / (norm * norm)))
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.0
    }

    pub fn entry(&self, i: SpinBasis, j: SpinBasis) -> Complex64 {
        self.0.entries[i.index()][j.index()]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }
}

impl From<SpinDensityMatrix> for ComplexMatrix4 {
    fn from(rho: SpinDensityMatrix) -> Self {
        rho.0
    }
}

/// Reduced spin density matrix for given `(R, S, U)`.
///
/// With `b± = e^{−R/2 − iU/2 ∓ iS}` and `a = e^{−2R − iU}`, the coherences
/// below the diagonal are `ρ₂₁ = ρ₃₁ = b₊/4`, `ρ₄₂ = ρ₄₃ = b₋/4`,
/// `ρ₄₁ = a/4`, `ρ₃₂ = 1/4`, and every population is `1/4`. At `S = 0` this
/// is the Bloch–Fano form with Bloch vectors `(Re b, Im b, 0)` and no σ₃
/// correlations; nonzero `S` adds the `σ_i⊗σ₃` and `σ₃⊗σ_i` terms produced
/// by tracing out the oscillator.
pub fn assemble_density(rsu: Rsu) -> Result<SpinDensityMatrix> {
    if !(rsu.r >= 0.0) {
        return Err(Error::InvalidParameter(format!("R must be >= 0, got {}", rsu.r)));
    }
    let Rsu { r, s, u } = rsu;
    let b_plus = Complex64::from_polar((-0.5 * r).exp(), -0.5 * u - s);
    let b_minus = Complex64::from_polar((-0.5 * r).exp(), -0.5 * u + s);
    let a = Complex64::from_polar((-2.0 * r).exp(), -u);
    let quarter = Complex64::new(0.25, 0.0);
    let mut m = ComplexMatrix4::from_fn(|i, j| if i == j { quarter } else { Complex64::new(0.0, 0.0) });
    let lower =
        [(1, 0, b_plus), (2, 0, b_plus), (3, 1, b_minus), (3, 2, b_minus), (3, 0, a), (2, 1, Complex64::new(1.0, 0.0))];
    for (i, j, z) in lower {
        m.entries[i][j] = z * 0.25;
        m.entries[j][i] = z.conj() * 0.25;
    }
    SpinDensityMatrix::new(m)
}

/// Component `k` of the spin–oscillator wavefunction with a quantum oscillator
/// prepared in the coherent state through `(q₀, p₀)`.
pub fn psi_quantum(k: SpinBasis, q: f64, t: f64, sp: &ScenarioParams) -> Complex64 {
    let s = sp.shift(k);
    sp.energy_phase(k, t) * coherent_state(q + s, t, &sp.osc, sp.ic.q0 + s, sp.ic.p0)
}

/// Component `k` of the hybrid wavefunction over phase space with the
/// classical oscillator in the Gaussian van Hove state of width Σ.
pub fn psi_hybrid(k: SpinBasis, q: f64, p: f64, t: f64, sp: &ScenarioParams, mode: PhaseMode) -> Result<Complex64> {
    let s = sp.shift(k);
    let ic = sp.ic.shifted(s, &sp.osc);
    Ok(sp.energy_phase(k, t) * classical_gaussian_state(q + s, p, t, &sp.osc, &ic, mode)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical_states::eta;
    use crate::numerics::{quadrature_1d, quadrature_2d, Grid1D, Grid2D};
    use std::f64::consts::PI;

    fn natural(kappa: f64, eps: f64, q0: f64, p0: f64) -> ScenarioParams {
        ScenarioParams::dimensionless(kappa, eps, q0, p0, 1.0).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn quantum_rsu_examples() {
        let sp = natural(0.7, 0.3, 0.9, 0.0);
        let r = rsu_quantum(0.0, &sp);
        assert_eq!((r.r, r.s), (0.0, 0.0));
        // U(0) = −g p₀/(mω²ħ) vanishes for p₀ = 0
        assert_eq!(r.u, 0.0);

        let r = rsu_quantum(PI, &natural(0.5, 0.0, 0.0, 0.0));
        assert!(close(r.r, 1.0, 1e-15) && close(r.s, -PI / 4.0, 1e-15) && r.u == 0.0);

        let r = rsu_quantum(2.0 * PI, &natural(1.0, 0.0, 0.0, 0.0));
        assert!(close(r.r, 0.0, 1e-15) && close(r.s, -PI, 1e-14) && r.u == 0.0);
    }

    #[test]
    fn hybrid_rsu_examples() {
        let r = rsu_hybrid(0.0, &natural(1.0, 0.0, 0.0, 0.0));
        assert_eq!((r.r, r.s, r.u), (0.125, 0.0, 0.0));
        for kappa in [0.25, 0.5, 1.0, 3.0] {
            let r = rsu_hybrid(2.0 * PI, &natural(kappa, 0.0, 0.0, 0.0));
            assert!(close(r.r, kappa / 8.0, 1e-14));
            assert!(close(r.s, -PI * kappa, 1e-13));
        }
        let sp = natural(0.6, 0.2, 1.0, 0.5);
        let expected = -sp.g * sp.ic.p0;
        assert!(close(rsu_hybrid(0.0, &sp).u, expected, 1e-15));
        assert!(close(rsu_quantum(0.0, &sp).u, expected, 1e-15));
    }

    #[test]
    fn rsu_in_physical_units() {
        // Σ = √(ħ/mω) reduces the hybrid R to κ(1 − cos ωt) + κ/8.
        let osc = OscillatorParams::new(1.7, 2.3, 0.4).unwrap();
        let ic = InitialCondition::new(0.3, -0.2, osc.natural_width(), &osc).unwrap();
        let sp = ScenarioParams::new(osc, 0.9, 0.1, ic).unwrap();
        let kappa = sp.kappa();
        for t in [0.0, 0.37, 1.9] {
            let c = (osc.omega * t).cos();
            let h = rsu_hybrid(t, &sp);
            assert!(close(h.r, kappa * (1.0 - c) + kappa / 8.0, 1e-13));
            let q = rsu_quantum(t, &sp);
            assert!(close(q.r, kappa * (1.0 - c), 1e-13));
        }
    }

    #[test]
    fn rsu_invariants() {
        let base = natural(0.8, 0.0, 0.0, 0.0);
        for i in 0..200 {
            let t = i as f64 * 0.173;
            let q = rsu_quantum(t, &base);
            let h = rsu_hybrid(t, &base);
            assert!(q.r >= 0.0);
            assert!(h.r >= 0.8 / 8.0 - 1e-15);
            let later = rsu_quantum(t + 2.0 * PI, &base);
            assert!(close(q.r, later.r, 1e-12));
            for sp in [natural(0.8, 1.3, 0.0, 0.0), natural(0.8, 0.0, -2.0, 0.7)] {
                let (q2, h2) = (rsu_quantum(t, &sp), rsu_hybrid(t, &sp));
                assert_eq!((q.r, q.s), (q2.r, q2.s));
                assert_eq!((h.r, h.s), (h2.r, h2.s));
            }
        }
    }

    #[test]
    fn zero_coupling_gives_pure_product_state() {
        let sp = natural(0.0, 0.4, 1.0, -0.5);
        for t in [0.0, 0.9, 4.2] {
            for rsu in [rsu_quantum(t, &sp), rsu_hybrid(t, &sp)] {
                assert_eq!((rsu.r, rsu.s), (0.0, 0.0));
                assert!(close(rsu.u, 2.0 * 0.4 * t, 1e-14));
                let rho = assemble_density(rsu).unwrap();
                let m = rho.matrix();
                let purity: f64 = (*m * *m).trace().re;
                assert!(close(purity, 1.0, 1e-12));
            }
        }
    }

    #[test]
    fn assemble_trivial_limits() {
        let rho = assemble_density(Rsu::new(0.0, 0.0, 0.0)).unwrap();
        for i in SpinBasis::ALL {
            for j in SpinBasis::ALL {
                assert!((rho.entry(i, j) - 0.25).norm() < 1e-15);
            }
        }
        let rho = assemble_density(Rsu::new(60.0, 0.4, -1.0)).unwrap();
        let mut expected = ComplexMatrix4::diag([0.25; 4]);
        expected.entries[1][2] = Complex64::new(0.25, 0.0);
        expected.entries[2][1] = Complex64::new(0.25, 0.0);
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-12);
        assert!(assemble_density(Rsu::new(-0.1, 0.0, 0.0)).is_err());
    }

    #[test]
    fn assembled_states_satisfy_density_invariants() {
        for i in 0..60 {
            let rsu = Rsu::new(0.05 * i as f64, (i as f64 * 0.71).sin() * 3.0, i as f64 * 0.37);
            let rho = assemble_density(rsu).unwrap();
            for k in SpinBasis::ALL {
                assert_eq!(rho.entry(k, k), Complex64::new(0.25, 0.0));
            }
        }
    }

    #[test]
    fn pure_state_amplitudes_at_zero_r() {
        // R = 0: entries ρ_ij = c_i* c_j with c = (e^{iγ₁}, 1, 1, e^{iγ₄})/2,
        // γ₁ = −U/2 − S and γ₄ = U/2 − S, i.e. ρ = |c*⟩⟨c*|.
        let (s, u) = (-0.7, 1.3);
        let rho = assemble_density(Rsu::new(0.0, s, u)).unwrap();
        let psi = [
            Complex64::from_polar(0.5, 0.5 * u + s),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::from_polar(0.5, -0.5 * u + s),
        ];
        let pure = SpinDensityMatrix::pure(psi).unwrap();
        assert!(rho.max_abs_diff(&pure) < 1e-15);
    }

    #[test]
    fn quantum_components() {
        let sp = natural(0.9, 0.3, 1.0, 0.5);
        for &(q, t) in &[(0.2, 0.0), (-1.0, 1.3), (2.0, 3.0)] {
            assert_eq!(psi_quantum(SpinBasis::UpDown, q, t, &sp), coherent_state(q, t, &sp.osc, sp.ic.q0, sp.ic.p0));
        }
        // at t = 0 the displacement cancels up to the phase p₀s/2ħ
        let s = sp.shift(SpinBasis::UpUp);
        for q in [-0.5, 0.4, 1.7] {
            let v = psi_quantum(SpinBasis::UpUp, q, 0.0, &sp);
            let base = coherent_state(q, 0.0, &sp.osc, sp.ic.q0, sp.ic.p0);
            let extra = Complex64::from_polar(1.0, 0.5 * sp.ic.p0 * s / sp.osc.hbar);
            assert!((v - base * extra).norm() < 1e-14);
        }
        let g = Grid1D::centered(1.0, 12.0, 1201).unwrap();
        for t in [0.0, 1.0, PI] {
            for k in SpinBasis::ALL {
                let n = quadrature_1d(|q| psi_quantum(k, q, t, &sp).norm_sqr().into(), &g).unwrap();
                assert!(close(n.re, 1.0, 1e-10));
            }
        }
    }

    #[test]
    fn hybrid_components() {
        let sp = natural(0.9, 0.3, 1.0, 0.5);
        let base = crate::classical_states::ClassicalGaussian::new(sp.osc, sp.ic);
        for mode in [PhaseMode::WeakEquality, PhaseMode::Full] {
            for &(q, p, t) in &[(0.2, 0.3, 0.0), (-1.0, 0.6, 1.3)] {
                assert_eq!(
                    psi_hybrid(SpinBasis::DownUp, q, p, t, &sp, mode).unwrap(),
                    base.value(q, p, t, mode).unwrap()
                );
            }
        }
        let grid = Grid2D::new(Grid1D::centered(0.0, 10.0, 301).unwrap(), Grid1D::centered(0.0, 10.0, 301).unwrap());
        for k in SpinBasis::ALL {
            let n = quadrature_2d(
                |q, p| psi_hybrid(k, q, p, 0.8, &sp, PhaseMode::WeakEquality).unwrap().norm_sqr().into(),
                &grid,
            )
            .unwrap();
            assert!(close(n.re, 1.0, 1e-9), "{k:?} {n}");
        }
    }

    #[test]
    fn weak_phase_difference_between_extreme_components() {
        let sp = natural(0.9, 0.0, 1.0, 0.5);
        let (q, p) = (0.3, 0.8);
        let up = psi_hybrid(SpinBasis::UpUp, q, p, 0.0, &sp, PhaseMode::WeakEquality).unwrap();
        let down = psi_hybrid(SpinBasis::DownDown, q, p, 0.0, &sp, PhaseMode::WeakEquality).unwrap();
        let (s1, s4) = (sp.shift(SpinBasis::UpUp), sp.shift(SpinBasis::DownDown));
        let expected = (eta(q + s4, p) - eta(q + s1, p)) / sp.osc.hbar;
        assert!(close(expected, (s4 - s1) * p / 2.0, 1e-15));
        let measured = (down / up).arg();
        assert!(close(measured, expected, 1e-12));
    }
}
