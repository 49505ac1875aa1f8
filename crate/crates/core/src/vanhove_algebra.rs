//! Exact polynomial calculus on phase space and van Hove operators.
//!
//! The van Hove operator of a phase-space function `f(q, p)` is the
//! first-order differential operator
//!
//! ```text
//! O_f = f - p ∂_p f + iħ (∂_q f ∂_p - ∂_p f ∂_q)
//! ```
//!
//! whose commutators realize the Poisson algebra, `[O_f, O_g] = iħ O_{f,g}`.
//! Everything here is computed over exact rationals with ħ fixed to a rational
//! value, so the commutator identity can be checked by coefficient equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Maximum total degree allowed for any polynomial coefficient.
pub const DEGREE_CAP: u32 = 8;

pub type Rational = BigRational;

/// Exact rational `num / den`.
pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Monomial exponents `(a, b)` for `q^a p^b`.
pub type Exponents = (u32, u32);

/// Exact bivariate polynomial in `(q, p)` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PolyPhaseFunction {
    terms: BTreeMap<Exponents, Rational>,
}

impl PolyPhaseFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn q() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn p() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn monomial(coeff: Rational, q_exp: u32, p_exp: u32) -> Self {
        let mut out = Self::zero();
        out.add_term((q_exp, p_exp), coeff);
        out
    }

    /// Builds from `(q exponent, p exponent, coefficient)` triples; repeated
    /// exponents are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut out = Self::zero();
        for (a, b, c) in terms {
            out.add_term((a, b), c);
        }
        out
    }

    /// `p²/2m + m ω² q²/2`.
    pub fn oscillator_hamiltonian(m: &Rational, omega: &Rational) -> Self {
        let half = rational(1, 2);
        Self::from_terms([(0, 2, &half / m), (2, 0, &half * m * omega * omega)])
    }

    /// The action-like function `η = q p / 2`.
    pub fn eta() -> Self {
        Self::monomial(rational(1, 2), 1, 1)
    }

    fn add_term(&mut self, key: Exponents, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponents, &Rational)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coefficient(&self, q_exp: u32, p_exp: u32) -> Rational {
        self.terms.get(&(q_exp, p_exp)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(a, b), c)| (a, b, c * s)))
    }

    pub fn dq(&self) -> Self {
        Self::from_terms(
            self.terms.iter().filter(|((a, _), _)| *a > 0).map(|(&(a, b), c)| (a - 1, b, c * BigInt::from(a))),
        )
    }

    pub fn dp(&self) -> Self {
        Self::from_terms(
            self.terms.iter().filter(|((_, b), _)| *b > 0).map(|(&(a, b), c)| (a, b - 1, c * BigInt::from(b))),
        )
    }

    /// Partial derivative `∂_q^i ∂_p^j`.
    pub fn derivative(&self, i: u32, j: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..i {
            out = out.dq();
        }
        for _ in 0..j {
            out = out.dp();
        }
        out
    }

    /// Product with the degree cap enforced.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        let degree = if self.is_zero() || rhs.is_zero() { 0 } else { self.degree() + rhs.degree() };
        if degree > DEGREE_CAP {
            return Err(Error::DegreeOverflow { degree, cap: DEGREE_CAP });
        }
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            for (&(x, y), d) in &rhs.terms {
                out.add_term((a + x, b + y), c * d);
            }
        }
        Ok(out)
    }

    pub fn try_pow(&self, n: u32) -> Result<Self> {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.try_mul(self)?;
        }
        Ok(out)
    }

    /// Evaluates at a real point (coefficients rounded to `f64`).
    pub fn eval(&self, q: f64, p: f64) -> f64 {
        self.terms.iter().map(|(&(a, b), c)| to_f64(c) * q.powi(a as i32) * p.powi(b as i32)).sum()
    }
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Debug for PolyPhaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PolyPhaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (&(a, b), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            match a {
                0 => {}
                1 => write!(f, "·q")?,
                _ => write!(f, "·q^{a}")?,
            }
            match b {
                0 => {}
                1 => write!(f, "·p")?,
                _ => write!(f, "·p^{b}")?,
            }
        }
        Ok(())
    }
}

impl Add for &PolyPhaseFunction {
    type Output = PolyPhaseFunction;
    fn add(self, rhs: Self) -> PolyPhaseFunction {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &PolyPhaseFunction {
    type Output = PolyPhaseFunction;
    fn sub(self, rhs: Self) -> PolyPhaseFunction {
        self + &(-rhs)
    }
}

impl Neg for &PolyPhaseFunction {
    type Output = PolyPhaseFunction;
    fn neg(self) -> PolyPhaseFunction {
        self.scale(&-Rational::one())
    }
}

/// `∂_q f ∂_p g − ∂_p f ∂_q g`.
pub fn poisson_bracket(f: &PolyPhaseFunction, g: &PolyPhaseFunction) -> Result<PolyPhaseFunction> {
    Ok(&f.dq().try_mul(&g.dp())? - &f.dp().try_mul(&g.dq())?)
}

/// Exact complex rational `re + i im`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self::new(re, Rational::zero())
    }

    pub fn imag(im: Rational) -> Self {
        Self::new(Rational::zero(), im)
    }
}

/// Polynomial with exact complex rational coefficients, stored as real and
/// imaginary parts.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ComplexPoly {
    pub re: PolyPhaseFunction,
    pub im: PolyPhaseFunction,
}

impl ComplexPoly {
    pub fn real(re: PolyPhaseFunction) -> Self {
        Self { re, im: PolyPhaseFunction::zero() }
    }

    pub fn imag(im: PolyPhaseFunction) -> Self {
        Self { re: PolyPhaseFunction::zero(), im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn degree(&self) -> u32 {
        self.re.degree().max(self.im.degree())
    }

    pub fn scale(&self, s: &ComplexRational) -> Self {
        Self { re: &self.re.scale(&s.re) - &self.im.scale(&s.im), im: &self.re.scale(&s.im) + &self.im.scale(&s.re) }
    }

    pub fn derivative(&self, i: u32, j: u32) -> Self {
        Self { re: self.re.derivative(i, j), im: self.im.derivative(i, j) }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        Ok(Self {
            re: &self.re.try_mul(&rhs.re)? - &self.im.try_mul(&rhs.im)?,
            im: &self.re.try_mul(&rhs.im)? + &self.im.try_mul(&rhs.re)?,
        })
    }

    /// Evaluates at a real point as `(re, im)`.
    pub fn eval(&self, q: f64, p: f64) -> (f64, f64) {
        (self.re.eval(q, p), self.im.eval(q, p))
    }
}

impl fmt::Debug for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + i[{}]", self.re, self.im)
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: Self) -> ComplexPoly {
        ComplexPoly { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: Self) -> ComplexPoly {
        ComplexPoly { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

/// Derivative multi-index `(i, j)` for `∂_q^i ∂_p^j`.
pub type DerivOrder = (u32, u32);

/// Linear differential operator `Σ c_{ij}(q, p) ∂_q^i ∂_p^j` with complex
/// polynomial coefficients written to the left of the derivatives.
#[derive(Clone, PartialEq, Eq)]
pub struct PhaseSpaceOperator {
    hbar: Rational,
    coeffs: BTreeMap<DerivOrder, ComplexPoly>,
}

impl PhaseSpaceOperator {
    pub fn zero(hbar: Rational) -> Self {
        Self { hbar, coeffs: BTreeMap::new() }
    }

    /// Multiplication by a complex polynomial.
    pub fn multiplication(hbar: Rational, c: ComplexPoly) -> Self {
        let mut out = Self::zero(hbar);
        out.add_coeff((0, 0), c);
        out
    }

    pub fn hbar(&self) -> &Rational {
        &self.hbar
    }

    fn add_coeff(&mut self, order: DerivOrder, c: ComplexPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(order).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.coeffs.remove(&order);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `∂_q^i ∂_p^j`.
    pub fn coeff(&self, i: u32, j: u32) -> ComplexPoly {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn c0(&self) -> ComplexPoly {
        self.coeff(0, 0)
    }

    pub fn cq(&self) -> ComplexPoly {
        self.coeff(1, 0)
    }

    pub fn cp(&self) -> ComplexPoly {
        self.coeff(0, 1)
    }

    pub fn cqq(&self) -> ComplexPoly {
        self.coeff(2, 0)
    }

    pub fn cpp(&self) -> ComplexPoly {
        self.coeff(0, 2)
    }

    pub fn cqp(&self) -> ComplexPoly {
        self.coeff(1, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (DerivOrder, &ComplexPoly)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    /// Highest total derivative order present; zero for multiplication
    /// operators and for the zero operator.
    pub fn order(&self) -> u32 {
        self.coeffs.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn is_first_order(&self) -> bool {
        self.order() <= 1
    }

    pub fn scale(&self, s: &ComplexRational) -> Self {
        let mut out = Self::zero(self.hbar.clone());
        for (k, c) in &self.coeffs {
            out.add_coeff(*k, c.scale(s));
        }
        out
    }

    fn check_hbar(&self, other: &Self) -> Result<()> {
        if self.hbar != other.hbar {
            return Err(Error::HbarMismatch { left: self.hbar.to_string(), right: other.hbar.to_string() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_hbar(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_coeff(*k, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&ComplexRational::real(-Rational::one())))
    }

    /// Composition `self ∘ other`, normalized with the Leibniz rule
    /// `∂^α (b ∂^β) = Σ_{γ≤α} C(α,γ) (∂^γ b) ∂^{α−γ+β}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_hbar(other)?;
        let mut out = Self::zero(self.hbar.clone());
        for (&(a1, a2), ca) in &self.coeffs {
            for (&(b1, b2), cb) in &other.coeffs {
                for g1 in 0..=a1 {
                    for g2 in 0..=a2 {
                        let d = cb.derivative(g1, g2);
                        if d.is_zero() {
                            continue;
                        }
                        let binom = binomial(a1, g1) * binomial(a2, g2);
                        let c = ca.try_mul(&d)?.scale(&ComplexRational::real(binom));
                        out.add_coeff((a1 - g1 + b1, a2 - g2 + b2), c);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

impl fmt::Debug for PhaseSpaceOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (&(i, j), c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{{{c:?}}}∂q^{i}∂p^{j}")?;
        }
        Ok(())
    }
}

impl Mul for &PhaseSpaceOperator {
    type Output = Result<PhaseSpaceOperator>;
    fn mul(self, rhs: Self) -> Self::Output {
        self.compose(rhs)
    }
}

/// `O_f = (f − p ∂_p f) + iħ(∂_q f ∂_p − ∂_p f ∂_q)`.
pub fn vanhove_operator(f: &PolyPhaseFunction, hbar: &Rational) -> Result<PhaseSpaceOperator> {
    let p_dpf = PolyPhaseFunction::p().try_mul(&f.dp())?;
    let mut op = PhaseSpaceOperator::zero(hbar.clone());
    op.add_coeff((0, 0), ComplexPoly::real(f - &p_dpf));
    op.add_coeff((0, 1), ComplexPoly::imag(f.dq().scale(hbar)));
    op.add_coeff((1, 0), ComplexPoly::imag(-&f.dp().scale(hbar)));
    Ok(op)
}

/// `ab − ba`.
pub fn commutator(a: &PhaseSpaceOperator, b: &PhaseSpaceOperator) -> Result<PhaseSpaceOperator> {
    a.compose(b)?.try_sub(&b.compose(a)?)
}

/// Whether `[O_f, O_g] = iħ O_{f,g}` holds with exact coefficient equality.
pub fn check_isomorphism(f: &PolyPhaseFunction, g: &PolyPhaseFunction, hbar: &Rational) -> Result<bool> {
    let lhs = commutator(&vanhove_operator(f, hbar)?, &vanhove_operator(g, hbar)?)?;
    let rhs = vanhove_operator(&poisson_bracket(f, g)?, hbar)?.scale(&ComplexRational::imag(hbar.clone()));
    Ok(lhs == rhs)
}

/// `(O_f)^n − O_{f^n}`, the failure of van Hove operators to form a product
/// algebra.
pub fn power_gap(f: &PolyPhaseFunction, n: u32, hbar: &Rational) -> Result<PhaseSpaceOperator> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("power_gap needs n >= 2, got {n}")));
    }
    let of = vanhove_operator(f, hbar)?;
    let mut power = of.clone();
    for _ in 1..n {
        power = power.compose(&of)?;
    }
    power.try_sub(&vanhove_operator(&f.try_pow(n)?, hbar)?)
}
