//! Fractional derivative operators.
//!
//! Closed-form power rules in the Riemann-Liouville and Caputo senses, the
//! shifted-terminal rules used for derivatives in the deformation parameter ε,
//! and two numerical oracles ([`rl_numeric`] and [`gl_fractional_derivative`])
//! that check them independently.

mod oracle;

pub use oracle::{gl_fractional_derivative, rl_numeric, RlOracle};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{gamma_ratio, gauss_2f1, recip_gamma, HypergeometricArgs};

/// A fractional order α ≥ 0 with its whole part ⌊α⌋ and fractional part {α}.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Order {
    alpha: f64,
}

impl Order {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "order must be finite and non-negative, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    /// An order restricted to [0, 1], as required by every variation operation.
    pub fn unit(alpha: f64) -> Result<Self> {
        let order = Self::new(alpha)?;
        order.ensure_unit()?;
        Ok(order)
    }

    pub fn ensure_unit(&self) -> Result<()> {
        if self.alpha > 1.0 {
            return Err(Error::InvalidArgument(format!(
                "order must lie in [0, 1], got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn value(&self) -> f64 {
        self.alpha
    }

    /// ⌊α⌋
    pub fn whole(&self) -> u32 {
        self.alpha.floor() as u32
    }

    /// {α} = α - ⌊α⌋
    pub fn frac(&self) -> f64 {
        self.alpha - self.alpha.floor()
    }

    /// The least whole number m ≥ α.
    pub fn ceil(&self) -> u32 {
        self.alpha.ceil() as u32
    }

    pub fn is_integer(&self) -> bool {
        self.frac() == 0.0
    }

    pub fn is_zero(&self) -> bool {
        self.alpha == 0.0
    }

    pub fn is_one(&self) -> bool {
        self.alpha == 1.0
    }
}

/// c·(x - a)^k, the operand of the power rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coeff: f64,
    pub exponent: f64,
    pub base: f64,
}

impl PowerTerm {
    pub fn new(coeff: f64, exponent: f64, base: f64) -> Result<Self> {
        if !(coeff.is_finite() && exponent.is_finite() && base.is_finite()) {
            return Err(Error::InvalidArgument("power term must be finite".into()));
        }
        if exponent <= -1.0 {
            return Err(Error::Domain(format!(
                "power rule requires exponent > -1, got {exponent}"
            )));
        }
        Ok(Self {
            coeff,
            exponent,
            base,
        })
    }

    /// c·x^k about the origin.
    pub fn monomial(coeff: f64, exponent: f64) -> Result<Self> {
        Self::new(coeff, exponent, 0.0)
    }

    pub fn value_at(&self, x: f64) -> f64 {
        self.coeff * (x - self.base).powf(self.exponent)
    }
}

/// Γ(k+1)/Γ(k+1-α) with 1/Γ(pole) taken as 0.
pub fn power_rule_coefficient(order: Order, exponent: f64) -> Result<f64> {
    gamma_ratio(exponent + 1.0, exponent + 1.0 - order.value())
}

/// Riemann-Liouville derivative of c·(x-a)^k with terminal a:
/// c·Γ(k+1)/Γ(k+1-α)·(x-a)^(k-α).
pub fn rl_power_rule(order: Order, term: &PowerTerm, x: f64) -> Result<f64> {
    if x <= term.base {
        return Err(Error::Domain(format!(
            "power rule needs x > a (x = {x}, a = {})",
            term.base
        )));
    }
    if order.is_zero() {
        return Ok(term.value_at(x));
    }
    let coeff = power_rule_coefficient(order, term.exponent)?;
    if coeff == 0.0 {
        return Ok(0.0);
    }
    Ok(term.coeff * coeff * (x - term.base).powf(term.exponent - order.value()))
}

/// Riemann-Liouville derivative of the constant c with terminal 0: c·x^(-α)/Γ(1-α).
pub fn rl_constant(order: Order, c: f64, x: f64) -> Result<f64> {
    if order.value() >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "constant rule needs α in [0, 1), got {}",
            order.value()
        )));
    }
    if order.is_zero() {
        return Ok(c);
    }
    if x <= 0.0 {
        return Err(Error::Domain(format!("constant rule needs x > 0, got {x}")));
    }
    Ok(c * x.powf(-order.value()) * recip_gamma(1.0 - order.value()))
}

/// Caputo derivative of c·(x-a)^k, k ≥ 0.
///
/// Integer powers below m = ⌈α⌉ are annihilated (constants in particular);
/// powers k > m-1 agree with the Riemann-Liouville value because every
/// initial-value correction vanishes at the terminal.
pub fn caputo_power_rule(order: Order, term: &PowerTerm, x: f64) -> Result<f64> {
    if term.exponent < 0.0 {
        return Err(Error::Domain(format!(
            "Caputo power rule needs exponent >= 0, got {}",
            term.exponent
        )));
    }
    if x <= term.base {
        return Err(Error::Domain(format!(
            "power rule needs x > a (x = {x}, a = {})",
            term.base
        )));
    }
    if order.is_zero() {
        return Ok(term.value_at(x));
    }
    let m = order.ceil() as f64;
    let k = term.exponent;
    if k == k.floor() && k < m {
        return Ok(0.0);
    }
    if k <= m - 1.0 {
        return Err(Error::Domain(format!(
            "Caputo derivative of order {} undefined for non-integer power {k}",
            order.value()
        )));
    }
    rl_power_rule(order, term, x)
}

/// Riemann-Liouville derivative in ε with terminal ε₀ of (ε-ε₀)^β.
pub fn rl_shifted_power(order: Order, beta: f64, eps0: f64, eps: f64) -> Result<f64> {
    if eps <= eps0 {
        return Err(Error::Domain(format!(
            "shifted power rule needs eps > eps0 ({eps} <= {eps0})"
        )));
    }
    let term = PowerTerm::new(1.0, beta, eps0)?;
    rl_power_rule(order, &term, eps)
}

/// Riemann-Liouville derivative in ε with terminal ε₀ of (ε-ε₀)^β·ε^γ:
///
/// Γ(β+1)/Γ(β+1-α) · ₂F₁(-γ, β+1; β+1-α; z) · ε₀^γ · (ε-ε₀)^(β-α),
/// with z = -(ε-ε₀)/ε₀.
///
/// The hypergeometric argument must lie in [0, 1], so ε₀ < 0 and ε ≤ 0;
/// γ must then be a non-negative integer for ε^γ to be real.
pub fn rl_shifted_product(
    order: Order,
    beta: f64,
    gamma_exp: f64,
    eps0: f64,
    eps: f64,
) -> Result<f64> {
    if beta <= -1.0 {
        return Err(Error::Domain(format!("need beta > -1, got {beta}")));
    }
    if eps <= eps0 {
        return Err(Error::Domain(format!(
            "shifted product rule needs eps > eps0 ({eps} <= {eps0})"
        )));
    }
    if gamma_exp < 0.0 || gamma_exp != gamma_exp.floor() {
        return Err(Error::Domain(format!(
            "gamma exponent must be a non-negative integer, got {gamma_exp}"
        )));
    }
    if gamma_exp == 0.0 {
        return rl_shifted_power(order, beta, eps0, eps);
    }
    let z = -(eps - eps0) / eps0;
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain(format!(
            "induced hypergeometric argument z = {z} outside [0, 1]"
        )));
    }
    let c = beta + 1.0 - order.value();
    if c <= 0.0 && c == c.floor() {
        // Γ(β+1)/Γ(c)·₂F₁(…; c; z) stays finite as c hits a pole; expand instead.
        return shifted_product_at_pole(order, beta, gamma_exp as u32, eps0, eps);
    }
    let coeff = power_rule_coefficient(order, beta)?;
    let series = gauss_2f1(&HypergeometricArgs::new(-gamma_exp, beta + 1.0, c, z)?)?;
    Ok(coeff * series * eps0.powi(gamma_exp as i32) * (eps - eps0).powf(beta - order.value()))
}

/// Binomial expansion ε^γ = Σ C(γ, j) ε₀^(γ-j) (ε-ε₀)^j applied term by term.
fn shifted_product_at_pole(
    order: Order,
    beta: f64,
    gamma_exp: u32,
    eps0: f64,
    eps: f64,
) -> Result<f64> {
    let mut sum = 0.0;
    let mut binom = 1.0;
    for j in 0..=gamma_exp {
        if j > 0 {
            binom *= (gamma_exp - j + 1) as f64 / j as f64;
        }
        let d = rl_shifted_power(order, beta + j as f64, eps0, eps)?;
        sum += binom * eps0.powi((gamma_exp - j) as i32) * d;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    #[test]
    fn order_decomposition() {
        let o = ord(2.75);
        assert_eq!(o.whole(), 2);
        assert_eq!(o.frac(), 0.75);
        assert_eq!(o.ceil(), 3);
        let one = ord(1.0);
        assert_eq!((one.whole(), one.ceil()), (1, 1));
        assert!(one.is_integer());
        assert!(Order::new(-0.1).is_err());
        assert!(Order::unit(1.2).is_err());
        assert!(Order::unit(1.0).is_ok());
    }

    #[test]
    fn power_term_domain() {
        assert!(PowerTerm::new(1.0, -1.0, 0.0).is_err());
        assert!(PowerTerm::new(1.0, -0.5, 0.0).is_ok());
    }

    #[test]
    fn rl_power_rule_examples() {
        let t = PowerTerm::monomial(1.0, 1.0).unwrap();
        let v = rl_power_rule(ord(0.5), &t, 1.0).unwrap();
        assert!((v - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-14);

        let sq = PowerTerm::monomial(1.0, 2.0).unwrap();
        for &x in &[0.3, 1.0, 2.5] {
            assert!((rl_power_rule(ord(1.0), &sq, x).unwrap() - 2.0 * x).abs() < 1e-14);
        }

        let half = PowerTerm::monomial(1.0, 0.5).unwrap();
        let v = rl_power_rule(ord(0.5), &half, 1.0).unwrap();
        assert!((v - 0.886_226_925_452_758).abs() < 1e-14);
    }

    #[test]
    fn rl_power_rule_pole_limit_and_domain() {
        // over-differentiated monomial: D^2 x = 0
        let t = PowerTerm::monomial(3.0, 1.0).unwrap();
        assert_eq!(rl_power_rule(ord(2.0), &t, 0.7).unwrap(), 0.0);
        assert!(rl_power_rule(ord(0.5), &t, 0.0).is_err());
        // shifted base uses (x - a)^(k - α)
        let s = PowerTerm::new(1.0, 2.0, 1.0).unwrap();
        assert!((rl_power_rule(ord(1.0), &s, 3.0).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn identity_at_order_zero() {
        let t = PowerTerm::new(2.5, 1.7, 0.3).unwrap();
        assert_eq!(rl_power_rule(ord(0.0), &t, 1.3).unwrap(), t.value_at(1.3));
        assert_eq!(
            caputo_power_rule(ord(0.0), &t, 1.3).unwrap(),
            t.value_at(1.3)
        );
        assert_eq!(rl_constant(ord(0.0), 7.0, 3.0).unwrap(), 7.0);
        assert_eq!(
            rl_shifted_power(ord(0.0), 1.5, -2.0, 0.5).unwrap(),
            2.5f64.powf(1.5)
        );
    }

    #[test]
    fn rl_constant_examples() {
        let v = rl_constant(ord(0.5), 1.0, 1.0).unwrap();
        assert!((v - 0.564_189_583_547_756_3).abs() < 1e-14);
        assert_eq!(rl_constant(ord(0.5), 0.0, 2.0).unwrap(), 0.0);
        assert!(rl_constant(ord(0.5), 1.0, 0.0).is_err());
        assert!(rl_constant(ord(1.0), 1.0, 1.0).is_err());
    }

    #[test]
    fn caputo_examples() {
        let c = PowerTerm::monomial(4.0, 0.0).unwrap();
        assert_eq!(caputo_power_rule(ord(0.5), &c, 1.0).unwrap(), 0.0);
        let lin = PowerTerm::monomial(1.0, 1.0).unwrap();
        let v = caputo_power_rule(ord(0.5), &lin, 1.0).unwrap();
        assert!((v - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-14);
        let cube = PowerTerm::monomial(1.0, 3.0).unwrap();
        assert!((caputo_power_rule(ord(1.0), &cube, 2.0).unwrap() - 12.0).abs() < 1e-13);
        // D^{1.5}_* x = 0 while the RL value is not
        assert_eq!(caputo_power_rule(ord(1.5), &lin, 1.0).unwrap(), 0.0);
        assert!(rl_power_rule(ord(1.5), &lin, 1.0).unwrap() != 0.0);
    }

    #[test]
    fn shifted_power_examples() {
        let v = rl_shifted_power(ord(0.5), 1.0, -1.0, 0.0).unwrap();
        assert!((v - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-14);
        // β = α: Γ(α+1), constant in ε
        let a = 0.3;
        let g = crate::specfun::gamma(1.3).unwrap();
        for &eps in &[-0.5, 0.0, 2.0] {
            assert!((rl_shifted_power(ord(a), a, -1.0, eps).unwrap() - g).abs() < 1e-14);
        }
        assert!(rl_shifted_power(ord(0.5), 1.0, 0.0, 0.0).is_err());
        assert!(rl_shifted_power(ord(0.5), -1.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn shifted_product_reduces_to_shifted_power() {
        let a = rl_shifted_product(ord(0.4), 1.5, 0.0, -2.0, -0.5).unwrap();
        let b = rl_shifted_power(ord(0.4), 1.5, -2.0, -0.5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shifted_product_terminating_at_zero() {
        let (alpha, beta) = (0.5, 0.7);
        let eps0 = -1.5;
        let coeff = crate::specfun::gamma(beta + 1.0).unwrap()
            / crate::specfun::gamma(beta + 1.0 - alpha).unwrap();
        let expected =
            coeff * (1.0 - (beta + 1.0) / (beta + 1.0 - alpha)) * eps0 * (-eps0).powf(beta - alpha);
        let v = rl_shifted_product(ord(alpha), beta, 1.0, eps0, 0.0).unwrap();
        assert!((v - expected).abs() < 1e-13 * expected.abs());
    }

    #[test]
    fn shifted_product_linear_split() {
        // (ε-ε₀)^β ε = (ε-ε₀)^(β+1) + ε₀ (ε-ε₀)^β
        let (alpha, beta, eps0, eps) = (0.35, 0.5, -2.0, -0.4);
        let o = ord(alpha);
        let split = rl_shifted_power(o, beta + 1.0, eps0, eps).unwrap()
            + eps0 * rl_shifted_power(o, beta, eps0, eps).unwrap();
        let v = rl_shifted_product(o, beta, 1.0, eps0, eps).unwrap();
        assert!((v - split).abs() < 1e-13 * split.abs().max(1.0));
    }

    #[test]
    fn shifted_product_domain() {
        assert!(rl_shifted_product(ord(0.5), 1.0, 1.0, 1.0, 2.0).is_err()); // z < 0
        assert!(rl_shifted_product(ord(0.5), 1.0, 0.5, -1.0, 0.0).is_err());
        assert!(rl_shifted_product(ord(0.5), 1.0, 1.0, -1.0, 0.5).is_err()); // z > 1
    }

    #[test]
    fn shifted_product_with_pole_in_c() {
        // β+1-α = 0 → c = 0: β = -0.5, α = 0.5
        let o = ord(0.5);
        let v = rl_shifted_product(o, -0.5, 1.0, -1.0, -0.25).unwrap();
        let split = rl_shifted_power(o, 0.5, -1.0, -0.25).unwrap()
            - rl_shifted_power(o, -0.5, -1.0, -0.25).unwrap();
        assert!((v - split).abs() < 1e-13);
    }
}
