//! Harmonic-oscillator trajectories, the action and time functions η and τ,
//! the quantum coherent state and the Gaussian van Hove state of the
//! classical oscillator.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Mass, angular frequency and action scale of `H₀ = p²/2m + mω²q²/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub m: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl OscillatorParams {
    pub fn new(m: f64, omega: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("omega", omega), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { m, omega, hbar })
    }

    /// `m = ω = ħ = 1`.
    pub fn natural() -> Self {
        Self { m: 1.0, omega: 1.0, hbar: 1.0 }
    }

    pub fn hamiltonian(&self, q: f64, p: f64) -> f64 {
        p * p / (2.0 * self.m) + 0.5 * self.m * self.omega * self.omega * q * q
    }

    pub fn lagrangian(&self, q: f64, p: f64) -> f64 {
        p * p / (2.0 * self.m) - 0.5 * self.m * self.omega * self.omega * q * q
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Position width `√(ħ/mω)` of the coherent state.
    pub fn natural_width(&self) -> f64 {
        (self.hbar / (self.m * self.omega)).sqrt()
    }
}

/// Initial center, width Σ and time-function offset τ₀ of a Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCondition {
    pub q0: f64,
    pub p0: f64,
    pub sigma: f64,
    pub tau0: f64,
}

impl InitialCondition {
    /// τ₀ defaults to `τ(q₀, p₀)`, or zero when the center is the origin.
    pub fn new(q0: f64, p0: f64, sigma: f64, osc: &OscillatorParams) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
        }
        let tau0 = tau(q0, p0, osc).unwrap_or(0.0);
        Ok(Self { q0, p0, sigma, tau0 })
    }

    pub fn with_tau0(self, tau0: f64) -> Self {
        Self { tau0, ..self }
    }

    /// Same width, center moved to `(q0 + dq, p0)`, τ₀ recomputed.
    pub fn shifted(&self, dq: f64, osc: &OscillatorParams) -> Self {
        let tau0 = tau(self.q0 + dq, self.p0, osc).unwrap_or(0.0);
        Self { q0: self.q0 + dq, tau0, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    /// Phase `η/ħ − H₀(t + τ₀ − τ)/ħ`, valid for operator manipulations.
    Full,
    /// Numerical value `η/ħ` after the trajectory constraint `τ ≃ τ₀ + t`.
    WeakEquality,
}

/// Point reached at time `t` along the trajectory through `(q1, p1)` at `t = 0`.
pub fn trajectory(q1: f64, p1: f64, t: f64, osc: &OscillatorParams) -> (f64, f64) {
    let (s, c) = (osc.omega * t).sin_cos();
    let mw = osc.m * osc.omega;
    (q1 * c + p1 / mw * s, p1 * c - q1 * mw * s)
}

/// `η = q p / 2`.
pub fn eta(q: f64, p: f64) -> f64 {
    0.5 * q * p
}

/// `τ = atan2(mωq, p) / ω`, angle in `(−π, π]`.
pub fn tau(q: f64, p: f64, osc: &OscillatorParams) -> Result<f64> {
    if q == 0.0 && p == 0.0 {
        return Err(Error::UndefinedPhase);
    }
    Ok(raw_tau(q, p, osc))
}

fn raw_tau(q: f64, p: f64, osc: &OscillatorParams) -> f64 {
    (osc.m * osc.omega * q).atan2(p) / osc.omega
}

/// Reduces `x` to the interval `(−period/2, period/2]`.
pub fn wrap_to_period(x: f64, period: f64) -> f64 {
    let r = x - period * (x / period).round();
    if r <= -0.5 * period {
        r + period
    } else {
        r
    }
}

/// Coherent state of the quantum oscillator centered on the classical
/// trajectory through `(q0, p0)`.
pub fn coherent_state(q: f64, t: f64, osc: &OscillatorParams, q0: f64, p0: f64) -> Complex64 {
    let (qt, pt) = trajectory(q0, p0, t, osc);
    let theta = 0.5 * osc.omega * t + qt * pt / (2.0 * osc.hbar);
    let norm = (osc.m * osc.omega / (PI * osc.hbar)).powf(0.25);
    let d = q - qt;
    Complex64::new(-osc.m * osc.omega / (2.0 * osc.hbar) * d * d, pt * q / osc.hbar - theta).exp() * norm
}

/// Reference value of τ′ used when evaluating the phase gradient of a
/// Gaussian van Hove state after operator manipulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauReference {
    /// The single offset τ₀ carried by the state.
    Fixed,
    /// τ′ of the trajectory through the evaluation point, so that
    /// `τ − τ′ − t` vanishes on every trajectory.
    Trajectory,
}

/// Gaussian van Hove state of the classical oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalGaussian {
    pub osc: OscillatorParams,
    pub ic: InitialCondition,
}

impl ClassicalGaussian {
    pub fn new(osc: OscillatorParams, ic: InitialCondition) -> Self {
        Self { osc, ic }
    }

    fn momentum_width(&self) -> f64 {
        self.osc.m * self.osc.omega * self.ic.sigma
    }

    /// `√ρ`: the initial Gaussian pulled back along the flow.
    pub fn amplitude(&self, q: f64, p: f64, t: f64) -> f64 {
        let (x, y) = trajectory(q, p, -t, &self.osc);
        let s = self.ic.sigma;
        let sp = self.momentum_width();
        let dq = self.ic.q0 - x;
        let dp = self.ic.p0 - y;
        (-dq * dq / (2.0 * s * s) - dp * dp / (2.0 * sp * sp)).exp() / (s * (PI * self.osc.m * self.osc.omega).sqrt())
    }

    pub fn density(&self, q: f64, p: f64, t: f64) -> f64 {
        self.amplitude(q, p, t).powi(2)
    }

    /// Phase `σ/ħ` in the requested mode.
    pub fn phase(&self, q: f64, p: f64, t: f64, mode: PhaseMode) -> Result<f64> {
        let h = self.osc.hbar;
        match mode {
            PhaseMode::WeakEquality => Ok(eta(q, p) / h),
            PhaseMode::Full => {
                let tq = tau(q, p, &self.osc)?;
                Ok(eta(q, p) / h - self.osc.hamiltonian(q, p) * (t + self.ic.tau0 - tq) / h)
            }
        }
    }

    pub fn value(&self, q: f64, p: f64, t: f64, mode: PhaseMode) -> Result<Complex64> {
        Ok(Complex64::from_polar(self.amplitude(q, p, t), self.phase(q, p, t, mode)?))
    }

    /// `τ(q, p) − τ′ − t` for the chosen reference.
    pub fn tau_offset(&self, q: f64, p: f64, t: f64, reference: TauReference) -> f64 {
        let tq = raw_tau(q, p, &self.osc);
        match reference {
            TauReference::Fixed => tq - self.ic.tau0 - t,
            TauReference::Trajectory => {
                let (x, y) = trajectory(q, p, -t, &self.osc);
                wrap_to_period(tq - raw_tau(x, y, &self.osc) - t, self.osc.period())
            }
        }
    }

    /// Analytic `(∂_q Φ / Φ, ∂_p Φ / Φ)` of the Full-mode state, with the
    /// derivatives of σ taken at fixed τ′ and then evaluated with τ′ from
    /// `reference`. Bounded everywhere, including the origin.
    pub fn log_gradient(&self, q: f64, p: f64, t: f64, reference: TauReference) -> (Complex64, Complex64) {
        let osc = &self.osc;
        let mw = osc.m * osc.omega;
        let (s, c) = (osc.omega * t).sin_cos();
        let (x, y) = trajectory(q, p, -t, osc);
        let s2 = self.ic.sigma.powi(2);
        let sp2 = self.momentum_width().powi(2);
        let rq = (self.ic.q0 - x) / s2;
        let rp = (self.ic.p0 - y) / sp2;
        // (x, y) = (q c − p s/mω, p c + q mω s)
        let dlna_dq = rq * c + rp * mw * s;
        let dlna_dp = -rq * s / mw + rp * c;
        let delta = self.tau_offset(q, p, t, reference);
        let dsigma_dq = p + osc.m * osc.omega * osc.omega * q * delta;
        let dsigma_dp = p / osc.m * delta;
        (Complex64::new(dlna_dq, dsigma_dq / osc.hbar), Complex64::new(dlna_dp, dsigma_dp / osc.hbar))
    }
}

/// Gaussian van Hove state `Φ(q, p, t)` of the classical oscillator.
pub fn classical_gaussian_state(
    q: f64,
    p: f64,
    t: f64,
    osc: &OscillatorParams,
    ic: &InitialCondition,
    mode: PhaseMode,
) -> Result<Complex64> {
    ClassicalGaussian::new(*osc, *ic).value(q, p, t, mode)
}

/// Exact solution of the Liouville equation: the initial density evaluated
/// at the point that flows into `(q, p)` after time `t`.
pub fn liouville_flow_density<F>(initial_density: F, q: f64, p: f64, t: f64, osc: &OscillatorParams) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let (x, y) = trajectory(q, p, -t, osc);
    initial_density(x, y)
}
