//! Brute-force checks of the closed forms: marginal integrals over the
//! oscillator, residuals of the evolution equations on sampled grids, and the
//! expectation value of van Hove operators in a Gaussian state.

use num_complex::Complex64;

use crate::classical_states::{trajectory, ClassicalGaussian, OscillatorParams, PhaseMode, TauReference};
use crate::error::{Error, Result};
use crate::numerics::{finite_diff, quadrature_2d, Axis, ComplexMatrix4, DiffOrder, Grid1D, Grid2D, SampledField};
use crate::spin_oscillator::{psi_hybrid, psi_quantum, ScenarioParams, SpinBasis, SpinDensityMatrix};
use crate::vanhove_algebra::{vanhove_operator, PolyPhaseFunction, Rational};

/// Integration windows must reach this many standard deviations of every
/// density they integrate past its center.
pub const COVERAGE_STDS: f64 = 8.0;

/// Radius, in grid steps, of the excluded neighbourhood of the origin and of
/// the τ branch cut.
pub const MASK_STEPS: f64 = 3.0;

/// Fewer admissible nodes than this make a residual meaningless.
pub const MIN_ADMISSIBLE_NODES: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn check_window(axis: &str, grid: &Grid1D, lo: f64, hi: f64) -> Result<()> {
    if grid.lo() > lo || grid.hi() < hi {
        return Err(Error::Coverage(format!(
            "{axis} window [{}, {}] does not contain [{lo}, {hi}]",
            grid.lo(),
            grid.hi()
        )));
    }
    Ok(())
}

/// Smallest interval holding `centers` widened by `COVERAGE_STDS · std`.
fn span(centers: impl IntoIterator<Item = f64>, std: f64) -> (f64, f64) {
    let (lo, hi) = centers.into_iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| (lo.min(c), hi.max(c)));
    (lo - COVERAGE_STDS * std, hi + COVERAGE_STDS * std)
}

fn quantum_centers(t: f64, sp: &ScenarioParams) -> impl Iterator<Item = f64> + '_ {
    SpinBasis::ALL.into_iter().map(move |k| {
        let s = sp.shift(k);
        trajectory(sp.ic.q0 + s, sp.ic.p0, t, &sp.osc).0 - s
    })
}

fn hybrid_centers(t: f64, sp: &ScenarioParams) -> impl Iterator<Item = (f64, f64)> + '_ {
    SpinBasis::ALL.into_iter().map(move |k| {
        let s = sp.shift(k);
        let (x, y) = trajectory(sp.ic.q0 + s, sp.ic.p0, t, &sp.osc);
        (x - s, y)
    })
}

fn quantum_std(osc: &OscillatorParams) -> f64 {
    (osc.hbar / (2.0 * osc.m * osc.omega)).sqrt()
}

fn hybrid_std(sp: &ScenarioParams) -> (f64, f64) {
    let s = sp.ic.sigma / std::f64::consts::SQRT_2;
    (s, sp.osc.m * sp.osc.omega * s)
}

/// Position window that covers every component of the quantum wavefunction
/// at all of the given times.
pub fn quantum_window(sp: &ScenarioParams, times: &[f64]) -> (f64, f64) {
    span(times.iter().flat_map(|&t| quantum_centers(t, sp)), quantum_std(&sp.osc))
}

/// Phase-space windows `((q_lo, q_hi), (p_lo, p_hi))` covering every
/// component of the hybrid wavefunction at all of the given times.
pub fn hybrid_window(sp: &ScenarioParams, times: &[f64]) -> ((f64, f64), (f64, f64)) {
    let (sq, sp_) = hybrid_std(sp);
    let centers: Vec<(f64, f64)> = times.iter().flat_map(|&t| hybrid_centers(t, sp)).collect();
    (span(centers.iter().map(|c| c.0), sq), span(centers.iter().map(|c| c.1), sp_))
}

/// Window of `stds` standard deviations of `|Φ|²` around the center of a
/// transported Gaussian.
pub fn gaussian_window(state: &ClassicalGaussian, t: f64, stds: f64) -> ((f64, f64), (f64, f64)) {
    let (x, y) = trajectory(state.ic.q0, state.ic.p0, t, &state.osc);
    let sq = stds * state.ic.sigma / std::f64::consts::SQRT_2;
    let sp = state.osc.m * state.osc.omega * sq;
    ((x - sq, x + sq), (y - sp, y + sp))
}

fn finish(mut acc: ComplexMatrix4) -> Result<SpinDensityMatrix> {
    // ρ_ij = ¼ ∫ ψ_i* ψ_j, the ¼ from the initial |+⟩|+⟩ spin amplitudes;
    // only i ≤ j was accumulated
    for i in 0..4 {
        for j in 0..i {
            acc.entries[i][j] = acc.entries[j][i].conj();
        }
    }
    SpinDensityMatrix::new(acc.scale(Complex64::new(0.25, 0.0)).hermitize())
}

fn accumulate(acc: &mut ComplexMatrix4, psi: &[Complex64; 4], w: f64) {
    for i in 0..4 {
        let a = psi[i].conj() * w;
        for j in i..4 {
            acc.entries[i][j] += a * psi[j];
        }
    }
}

/// Reduced spin state with the quantum oscillator traced out by quadrature
/// over position.
pub fn quantum_marginal_quadrature(t: f64, sp: &ScenarioParams, grid: &Grid1D) -> Result<SpinDensityMatrix> {
    let (lo, hi) = span(quantum_centers(t, sp), quantum_std(&sp.osc));
    check_window("q", grid, lo, hi)?;
    let (nodes, weights) = grid.simpson_rule();
    let mut acc = ComplexMatrix4::zero();
    for (&q, &w) in nodes.iter().zip(&weights) {
        let psi = SpinBasis::ALL.map(|k| psi_quantum(k, q, t, sp));
        accumulate(&mut acc, &psi, w);
    }
    finish(acc)
}

/// Reduced spin state with the classical oscillator integrated out over
/// phase space, using the trajectory-constrained phase.
pub fn hybrid_marginal_quadrature(t: f64, sp: &ScenarioParams, grid: &Grid2D) -> Result<SpinDensityMatrix> {
    let ((qlo, qhi), (plo, phi)) = hybrid_window(sp, &[t]);
    check_window("q", &grid.qgrid, qlo, qhi)?;
    check_window("p", &grid.pgrid, plo, phi)?;
    let (qs, wq) = grid.qgrid.simpson_rule();
    let (ps, wp) = grid.pgrid.simpson_rule();
    let mut acc = ComplexMatrix4::zero();
    for (&q, &a) in qs.iter().zip(&wq) {
        for (&p, &b) in ps.iter().zip(&wp) {
            let mut psi = [ZERO; 4];
            for k in SpinBasis::ALL {
                psi[k.index()] = psi_hybrid(k, q, p, t, sp, PhaseMode::WeakEquality)?;
            }
            accumulate(&mut acc, &psi, a * b);
        }
    }
    finish(acc)
}

/// Sup-norm of a residual over the admissible nodes of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub residual: f64,
    pub admissible: usize,
    /// Fraction of interior nodes dropped by the singularity mask.
    pub masked_fraction: f64,
}

/// Nodes within `MASK_STEPS` of the origin or of the ray `q = 0, p < 0`,
/// where τ is undefined or jumps by one period.
fn near_singularity(q: f64, p: f64, hq: f64, hp: f64) -> bool {
    let r = MASK_STEPS;
    let (x, y) = (q / hq, p / hp);
    x * x + y * y <= r * r || (x.abs() <= r && y < r)
}

fn sup_residual<F>(grid: &Grid2D, masked: impl Fn(f64, f64) -> bool, residual_at: F) -> Result<ResidualReport>
where
    F: Fn(usize) -> Complex64,
{
    let (nq, np) = (grid.qgrid.len(), grid.pgrid.len());
    let (mut sup, mut admissible, mut interior) = (0.0f64, 0usize, 0usize);
    for iq in 1..nq - 1 {
        for ip in 1..np - 1 {
            interior += 1;
            let (q, p) = grid.node(iq, ip);
            if masked(q, p) {
                continue;
            }
            admissible += 1;
            let v = residual_at(grid.index(iq, ip)).norm();
            sup = sup.max(v);
        }
    }
    if admissible < MIN_ADMISSIBLE_NODES {
        return Err(Error::Coverage(format!("only {admissible} admissible nodes, need {MIN_ADMISSIBLE_NODES}")));
    }
    Ok(ResidualReport { residual: sup, admissible, masked_fraction: (interior - admissible) as f64 / interior as f64 })
}

fn check_grid(grid: &Grid2D, dt: f64) -> Result<()> {
    if grid.qgrid.len() < 5 || grid.pgrid.len() < 5 {
        return Err(Error::InvalidGrid(format!(
            "need at least 5 nodes per axis, got {} x {}",
            grid.qgrid.len(),
            grid.pgrid.len()
        )));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidGrid(format!("time step must be positive, got {dt}")));
    }
    Ok(())
}

/// Residual of `iħ ∂_t φ = 𝒪_{H₀} φ` for an arbitrary trial function, with
/// all derivatives by central differences.
pub fn pde_residual<F>(trial: F, osc: &OscillatorParams, grid: &Grid2D, t: f64, dt: f64) -> Result<ResidualReport>
where
    F: Fn(f64, f64, f64) -> Complex64,
{
    check_grid(grid, dt)?;
    let field = SampledField::sample_in_time(*grid, t - dt, dt, 3, trial);
    let dphi_dt = finite_diff(&field, Axis::T, DiffOrder::First)?;
    let dphi_dq = finite_diff(&field, Axis::Q, DiffOrder::First)?;
    let dphi_dp = finite_diff(&field, Axis::P, DiffOrder::First)?;
    let (hq, hp) = (grid.qgrid.step(), grid.pgrid.step());
    let i_hbar = Complex64::new(0.0, osc.hbar);
    let np = grid.pgrid.len();
    sup_residual(
        grid,
        |q, p| near_singularity(q, p, hq, hp),
        |k| {
            let (q, p) = grid.node(k / np, k % np);
            let phi = field.frames[1][k];
            // 𝒪_H = H − p ∂_p H + iħ (∂_q H ∂_p − ∂_p H ∂_q)
            let op = (osc.hamiltonian(q, p) - p * p / osc.m) * phi
                + i_hbar
                    * (osc.m * osc.omega * osc.omega * q * dphi_dp.frames[1][k] - p / osc.m * dphi_dq.frames[1][k]);
            i_hbar * dphi_dt.frames[0][k] - op
        },
    )
}

/// [`pde_residual`] of the Gaussian van Hove state with its full phase.
pub fn pde_residual_classical(state: &ClassicalGaussian, grid: &Grid2D, t: f64, dt: f64) -> Result<ResidualReport> {
    // τ is undefined at the origin only, which the mask removes
    pde_residual(|q, p, t| state.value(q, p, t, PhaseMode::Full).unwrap_or(ZERO), &state.osc, grid, t, dt)
}

/// Residual of `∂_t ρ + {ρ, H₀} = 0` for an arbitrary density. No mask.
pub fn liouville_residual_of<F>(
    density: F,
    osc: &OscillatorParams,
    grid: &Grid2D,
    t: f64,
    dt: f64,
) -> Result<ResidualReport>
where
    F: Fn(f64, f64, f64) -> f64,
{
    check_grid(grid, dt)?;
    let field = SampledField::sample_in_time(*grid, t - dt, dt, 3, |q, p, t| Complex64::new(density(q, p, t), 0.0));
    let drho_dt = finite_diff(&field, Axis::T, DiffOrder::First)?;
    let drho_dq = finite_diff(&field, Axis::Q, DiffOrder::First)?;
    let drho_dp = finite_diff(&field, Axis::P, DiffOrder::First)?;
    let np = grid.pgrid.len();
    sup_residual(
        grid,
        |_, _| false,
        |k| {
            let (q, p) = grid.node(k / np, k % np);
            // {ρ, H} = ∂_q ρ · p/m − ∂_p ρ · mω² q
            drho_dt.frames[0][k] + drho_dq.frames[1][k] * (p / osc.m)
                - drho_dp.frames[1][k] * (osc.m * osc.omega * osc.omega * q)
        },
    )
}

/// [`liouville_residual_of`] for `|Φ|²` of the Gaussian van Hove state.
pub fn liouville_residual(state: &ClassicalGaussian, grid: &Grid2D, t: f64, dt: f64) -> Result<ResidualReport> {
    liouville_residual_of(|q, p, t| state.density(q, p, t), &state.osc, grid, t, dt)
}

/// Both sides of `⟨Φ|𝒪_f|Φ⟩ = ∫ |Φ|² f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationCheck {
    /// `⟨Φ|𝒪_f|Φ⟩` with τ′ taken from the trajectory through each point.
    pub lhs: Complex64,
    /// The same with the single offset τ₀ of the state everywhere.
    pub lhs_fixed_tau0: Complex64,
    pub rhs: f64,
}

impl ExpectationCheck {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

/// Expectation of the van Hove operator of `f` in the Gaussian state, with
/// derivatives of Φ taken from its closed form.
pub fn expectation_vanhove(
    f: &PolyPhaseFunction,
    state: &ClassicalGaussian,
    grid: &Grid2D,
    t: f64,
) -> Result<ExpectationCheck> {
    let ((qlo, qhi), (plo, phi)) = gaussian_window(state, t, COVERAGE_STDS);
    check_window("q", &grid.qgrid, qlo, qhi)?;
    check_window("p", &grid.pgrid, plo, phi)?;
    let hbar = Rational::from_float(state.osc.hbar)
        .ok_or_else(|| Error::InvalidParameter(format!("hbar {} is not finite", state.osc.hbar)))?;
    let op = vanhove_operator(f, &hbar)?;
    let (c0, cq, cp) = (op.c0(), op.cq(), op.cp());
    let as_complex = |(re, im): (f64, f64)| Complex64::new(re, im);
    let integrand = |reference: TauReference| {
        let (c0, cq, cp) = (&c0, &cq, &cp);
        move |q: f64, p: f64| {
            let rho = state.density(q, p, t);
            if rho == 0.0 {
                return ZERO;
            }
            let (lq, lp) = state.log_gradient(q, p, t, reference);
            rho * (as_complex(c0.eval(q, p)) + as_complex(cq.eval(q, p)) * lq + as_complex(cp.eval(q, p)) * lp)
        }
    };
    let lhs = quadrature_2d(integrand(TauReference::Trajectory), grid)?;
    let lhs_fixed_tau0 = quadrature_2d(integrand(TauReference::Fixed), grid)?;
    let rhs = quadrature_2d(|q, p| Complex64::new(state.density(q, p, t) * f.eval(q, p), 0.0), grid)?.re;
    Ok(ExpectationCheck { lhs, lhs_fixed_tau0, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical_states::InitialCondition;
    use crate::entanglement::{concurrence, purity, purity_from_r};
    use crate::spin_oscillator::{assemble_density, rsu_hybrid, rsu_quantum, Rsu};
    use crate::vanhove_algebra::rational;
    use std::f64::consts::PI;

    fn natural(kappa: f64, eps: f64, q0: f64, p0: f64) -> ScenarioParams {
        ScenarioParams::dimensionless(kappa, eps, q0, p0, 1.0).unwrap()
    }

    fn qgrid(sp: &ScenarioParams, t: f64, n: usize) -> Grid1D {
        let (lo, hi) = quantum_window(sp, &[t]);
        Grid1D::new(lo, hi, n).unwrap()
    }

    fn hgrid(sp: &ScenarioParams, t: f64, n: usize) -> Grid2D {
        let ((a, b), (c, d)) = hybrid_window(sp, &[t]);
        Grid2D::new(Grid1D::new(a, b, n).unwrap(), Grid1D::new(c, d, n).unwrap())
    }

    fn gaussian(q0: f64, p0: f64) -> ClassicalGaussian {
        let osc = OscillatorParams::natural();
        ClassicalGaussian::new(osc, InitialCondition::new(q0, p0, 1.0, &osc).unwrap())
    }

    fn ggrid(state: &ClassicalGaussian, t: f64, stds: f64, n: usize) -> Grid2D {
        let ((a, b), (c, d)) = gaussian_window(state, t, stds);
        Grid2D::new(Grid1D::new(a, b, n).unwrap(), Grid1D::new(c, d, n).unwrap())
    }

    #[test]
    fn quantum_marginal_at_t0_is_flat() {
        let sp = natural(0.8, 0.3, 0.6, 0.0);
        let rho = quantum_marginal_quadrature(0.0, &sp, &qgrid(&sp, 0.0, 801)).unwrap();
        let flat = assemble_density(Rsu::new(0.0, 0.0, 0.0)).unwrap();
        assert!(rho.max_abs_diff(&flat) < 1e-9);
    }

    #[test]
    fn quantum_marginal_matches_closed_form() {
        let sp = natural(1.0, 0.0, 0.0, 0.0);
        let t = PI / 2.0;
        let rho = quantum_marginal_quadrature(t, &sp, &qgrid(&sp, t, 801)).unwrap();
        let closed = assemble_density(rsu_quantum(t, &sp)).unwrap();
        assert!(rho.max_abs_diff(&closed) < 1e-8);

        let sp = natural(0.6, 0.4, -0.7, 1.3);
        for t in [0.3, 2.0, 5.5] {
            let rho = quantum_marginal_quadrature(t, &sp, &qgrid(&sp, t, 801)).unwrap();
            for i in 0..4 {
                assert!((rho.matrix().entries[i][i].re - 0.25).abs() < 1e-10);
            }
            assert!(rho.max_abs_diff(&assemble_density(rsu_quantum(t, &sp)).unwrap()) < 1e-8);
        }
    }

    #[test]
    fn quantum_marginal_rejects_narrow_window() {
        let sp = natural(1.0, 0.0, 0.0, 0.0);
        let grid = Grid1D::new(-2.0, 2.0, 201).unwrap();
        assert!(matches!(quantum_marginal_quadrature(0.5, &sp, &grid), Err(Error::Coverage(_))));
    }

    #[test]
    fn hybrid_marginal_without_coupling_is_flat() {
        let sp = natural(0.0, 0.0, 0.5, -0.5);
        let rho = hybrid_marginal_quadrature(1.0, &sp, &hgrid(&sp, 1.0, 201)).unwrap();
        let flat = assemble_density(Rsu::new(0.0, 0.0, 0.0)).unwrap();
        assert!(rho.max_abs_diff(&flat) < 1e-9);
    }

    #[test]
    fn hybrid_marginal_matches_closed_form() {
        let sp = natural(1.0, 0.0, 0.0, 0.0);
        let rho = hybrid_marginal_quadrature(0.0, &sp, &hgrid(&sp, 0.0, 201)).unwrap();
        let closed = assemble_density(rsu_hybrid(0.0, &sp)).unwrap();
        assert!(rho.max_abs_diff(&closed) < 1e-6);
        assert!((purity(&rho) - purity_from_r(0.125)).abs() < 1e-6);

        let sp = natural(0.5, 0.5, 1.0, 0.5);
        let t = 2.0 * PI;
        let rho = hybrid_marginal_quadrature(t, &sp, &hgrid(&sp, t, 201)).unwrap();
        let closed = assemble_density(rsu_hybrid(t, &sp)).unwrap();
        assert!(rho.max_abs_diff(&closed) < 1e-6);
        assert!((concurrence(&rho).unwrap() - concurrence(&closed).unwrap()).abs() < 1e-6);
    }

    fn residual_grid(n: usize) -> (ClassicalGaussian, Grid2D) {
        let state = gaussian(1.0, 0.5);
        let grid = ggrid(&state, 0.0, 6.0, n);
        (state, grid)
    }

    #[test]
    fn pde_residual_is_small_and_second_order() {
        let (state, coarse) = residual_grid(101);
        let (_, fine) = residual_grid(201);
        let a = pde_residual_classical(&state, &coarse, 0.0, 2e-4).unwrap();
        let b = pde_residual_classical(&state, &fine, 0.0, 1e-4).unwrap();
        assert!(b.residual < 1e-3, "{b:?}");
        assert!(b.masked_fraction > 0.0 && b.masked_fraction < 0.05);
        let ratio = a.residual / b.residual;
        assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn pde_residual_rejects_static_trial() {
        let (state, grid) = residual_grid(201);
        let frozen = |q: f64, p: f64, _t: f64| state.value(q, p, 0.0, PhaseMode::Full).unwrap_or(ZERO);
        let r = pde_residual(frozen, &state.osc, &grid, 0.0, 1e-4).unwrap();
        assert!(r.residual > 0.1, "{r:?}");
    }

    #[test]
    fn pde_residual_needs_admissible_nodes() {
        let state = gaussian(1.0, 0.5);
        let g = Grid1D::new(-0.01, 0.01, 7).unwrap();
        let grid = Grid2D::new(g, g);
        assert!(matches!(pde_residual_classical(&state, &grid, 0.0, 1e-4), Err(Error::Coverage(_))));
    }

    #[test]
    fn liouville_residual_of_gaussian() {
        let (state, coarse) = residual_grid(101);
        let (_, fine) = residual_grid(201);
        let a = liouville_residual(&state, &coarse, 0.0, 2e-4).unwrap();
        let b = liouville_residual(&state, &fine, 0.0, 1e-4).unwrap();
        assert!(b.residual < 1e-3);
        assert_eq!(b.masked_fraction, 0.0);
        let ratio = a.residual / b.residual;
        assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn liouville_residual_examples() {
        let osc = OscillatorParams::natural();
        let g = Grid1D::new(-2.0, 2.0, 41).unwrap();
        let grid = Grid2D::new(g, g);
        let r = liouville_residual_of(|_, _, _| 0.3, &osc, &grid, 0.0, 1e-3).unwrap();
        assert_eq!(r.residual, 0.0);
        // ρ = q: residual {q, H} = p/m, largest at the interior edge
        let r = liouville_residual_of(|q, _, _| q, &osc, &grid, 0.0, 1e-3).unwrap();
        let edge = grid.pgrid.node(grid.pgrid.len() - 2).abs();
        assert!((r.residual - edge).abs() < 1e-6);
    }

    #[test]
    fn expectation_of_polynomials() {
        let state = gaussian(1.0, 0.5);
        let grid = ggrid(&state, 0.0, COVERAGE_STDS, 201);
        let h0 = PolyPhaseFunction::oscillator_hamiltonian(&rational(1, 1), &rational(1, 1));
        let (q0, p0) = (1.0, 0.5);
        let cases = [
            (PolyPhaseFunction::one(), 1.0),
            (PolyPhaseFunction::q(), q0),
            (PolyPhaseFunction::p(), p0),
            (PolyPhaseFunction::monomial(rational(1, 1), 1, 1), q0 * p0),
            (PolyPhaseFunction::monomial(rational(1, 1), 2, 0), q0 * q0 + 0.5),
            (PolyPhaseFunction::monomial(rational(1, 1), 0, 2), p0 * p0 + 0.5),
            (h0, 0.5 * (q0 * q0 + p0 * p0) + 0.5),
        ];
        for (f, moment) in cases {
            let e = expectation_vanhove(&f, &state, &grid, 0.0).unwrap();
            assert!((e.rhs - moment).abs() < 1e-9, "{f}: rhs {} vs {moment}", e.rhs);
            assert!(e.gap() <= 5e-3, "{f}: {e:?}");
            assert!(e.lhs.im.abs() <= 1e-8, "{f}: {e:?}");
        }
    }

    #[test]
    fn fixed_offset_misses_off_trajectory_phase() {
        let state = gaussian(1.0, 0.5);
        let grid = ggrid(&state, 0.0, COVERAGE_STDS, 201);
        let e = expectation_vanhove(&PolyPhaseFunction::q(), &state, &grid, 0.0).unwrap();
        assert!((e.lhs_fixed_tau0 - e.rhs).norm() > 1e-2, "{e:?}");
    }
}
