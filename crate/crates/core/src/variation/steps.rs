//! The three preliminary constructs that motivate the deformation u^(1-α)(u + εh)^α.
//!
//! Each fails in an instructive way: the plain ε-derivative of F[u + εh]
//! diverges, and the first two deformations do not reduce to F at α = 0.
//! They are kept as diagnostics, reproducing those failures on purpose.

use super::{check_nonnegative, check_variation, pow_field, Method, VariationResult};
use crate::density::Density;
use crate::error::{Error, Result};
use crate::fracops::Order;
use crate::gridfield::{derivative_x, quadrature, Field};
use crate::specfun::{gamma, recip_gamma};

/// Riemann-Liouville ε-derivative of ∫(u + εh)² with terminal 0, term by term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step1Diagnostic {
    /// ε^(-α)/Γ(1-α)·∫u², 2ε^(1-α)/Γ(2-α)·∫uh, 2ε^(2-α)/Γ(3-α)·∫h²
    pub rl_terms: [f64; 3],
    /// The same derivative in the Caputo sense: the constant term dropped.
    pub caputo_value: f64,
}

impl Step1Diagnostic {
    pub fn rl_value(&self) -> f64 {
        self.rl_terms.iter().sum()
    }
}

pub fn step1_diagnostic(u: &Field, h: &Field, alpha: Order, eps: f64) -> Result<Step1Diagnostic> {
    u.ensure_same_grid(h)?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "ε must be positive, got {eps}"
        )));
    }
    if alpha.is_zero() {
        return Err(Error::InvalidArgument("step 1 needs α in (0, 1]".into()));
    }
    alpha.ensure_unit()?;
    let a = alpha.value();
    let uu = quadrature(&u.map(|v| v * v)?);
    let uh = quadrature(&u.zip_map(h, |a, b| a * b)?);
    let hh = quadrature(&h.map(|v| v * v)?);
    let rl_terms = [
        eps.powf(-a) * recip_gamma(1.0 - a) * uu,
        2.0 * eps.powf(1.0 - a) * recip_gamma(2.0 - a) * uh,
        2.0 * eps.powf(2.0 - a) * recip_gamma(3.0 - a) * hh,
    ];
    Ok(Step1Diagnostic {
        rl_terms,
        caputo_value: rl_terms[1] + rl_terms[2],
    })
}

fn positive_power(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("power n must be positive".into()));
    }
    Ok(())
}

/// n·Γ(α+1)·∫u^(n-1)·h^α dx, from the deformation u + ε^(1/α)h applied to uⁿ.
/// At α = 0 this is n∫u^(n-1), which is not F\[u\].
pub fn step2_variation(n: u32, u: &Field, h: &Field, alpha: Order) -> Result<VariationResult> {
    positive_power(n)?;
    alpha.ensure_unit()?;
    u.ensure_same_grid(h)?;
    check_variation(h, alpha)?;
    let c = n as f64 * gamma(alpha.value() + 1.0)?;
    let un = pow_field(u, (n - 1) as f64, "u")?;
    let ha = pow_field(h, alpha.value(), "h")?;
    integrand(c, &un, &ha, alpha)
}

/// n·Γ(α+1)·∫u^(n-α)·h^α dx, from the deformation u + ε^(1/α)u^(1-1/α)h.
/// At α = 0 this is n·F\[u\].
pub fn step3_variation(n: u32, u: &Field, h: &Field, alpha: Order) -> Result<VariationResult> {
    positive_power(n)?;
    alpha.ensure_unit()?;
    u.ensure_same_grid(h)?;
    check_nonnegative(u, "u")?;
    check_variation(h, alpha)?;
    let c = n as f64 * gamma(alpha.value() + 1.0)?;
    let un = pow_field(u, n as f64 - alpha.value(), "u")?;
    let ha = pow_field(h, alpha.value(), "h")?;
    integrand(c, &un, &ha, alpha)
}

fn integrand(c: f64, a: &Field, b: &Field, alpha: Order) -> Result<VariationResult> {
    let values = a.zip_map(b, |a, b| c * a * b)?;
    Ok(VariationResult::new(alpha, values, Method::ClosedForm))
}

/// F\[u\] = ∫uⁿ dx, for comparing the α = 0 outputs.
pub fn functional_value(f: &Density, u: &Field) -> Result<f64> {
    let zero = Field::constant(*u.grid(), 0.0)?;
    let ux = if f.depends_on_ux() {
        derivative_x(u)
    } else {
        zero
    };
    Ok(quadrature(&f.evaluate(u, &ux)?))
}
