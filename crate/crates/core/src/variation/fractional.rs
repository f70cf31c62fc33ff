//! Closed forms for the fractional variation δ^αF[u] = D^α_ε F[u^(1-α)(u + εh)^α] at ε = 0.
//!
//! The ε-derivative is taken with the terminal ε₀ = -u/h, where the deformed
//! field vanishes. For uᵖ the deformed density is u^(p(1-α))h^(pα)(ε - ε₀)^(pα)
//! and the power rule gives Γ(pα+1)/Γ((p-1)α+1)·u^(p-α)h^α.

use super::{
    check_nonnegative, check_variation, gateaux_differential, pow_field, Method, VariationResult,
};
use crate::density::{frac_partial_u, Convention, Density, Monomial};
use crate::error::{Error, Result};
use crate::fracops::Order;
use crate::gridfield::{derivative_x, Field};
use crate::specfun::gamma_ratio;

fn zero_result(u: &Field, alpha: Order) -> Result<VariationResult> {
    Ok(VariationResult::new(
        alpha,
        Field::constant(*u.grid(), 0.0)?,
        Method::ClosedForm,
    ))
}

/// δ^αF for a density without uₓ dependence.
pub fn frac_variation(f: &Density, u: &Field, h: &Field, alpha: Order) -> Result<VariationResult> {
    alpha.ensure_unit()?;
    u.ensure_same_grid(h)?;
    if f.depends_on_ux() {
        return Err(Error::InvalidArgument(format!(
            "closed-form variation needs a density in u only, got `{f}`"
        )));
    }
    check_nonnegative(u, "u")?;
    check_variation(h, alpha)?;
    let a = alpha.value();
    let ha = pow_field(h, a, "h")?;
    let mut parts = Vec::with_capacity(f.terms().len());
    for m in f.terms() {
        let p = m.p as f64;
        let k = gamma_ratio(p * a + 1.0, (p - 1.0) * a + 1.0)?;
        if k == 0.0 {
            continue;
        }
        parts.push((m.coeff * k, pow_field(u, p - a, "u")?));
    }
    let values = (0..u.grid().len())
        .map(|i| {
            parts
                .iter()
                .map(|(c, up)| c * up.values()[i] * ha.values()[i])
                .sum()
        })
        .collect();
    Ok(VariationResult::new(
        alpha,
        Field::new(*u.grid(), values)?,
        Method::ClosedForm,
    ))
}

/// λ(α, n) = Γ(nα+1)Γ(n+1-α) / (Γ((n-1)α+1)Γ(n+1))
pub fn prop1_lambda(alpha: Order, n: u32) -> Result<f64> {
    alpha.ensure_unit()?;
    if n == 0 {
        return Err(Error::InvalidArgument("power n must be positive".into()));
    }
    let a = alpha.value();
    let n = n as f64;
    Ok(gamma_ratio(n * a + 1.0, (n - 1.0) * a + 1.0)? * gamma_ratio(n + 1.0 - a, n + 1.0)?)
}

/// λ(α, n)·∫(D^α_u uⁿ)·h^α dx, the factorized form of δ^α∫uⁿ.
pub fn prop1_factorized(n: u32, u: &Field, h: &Field, alpha: Order) -> Result<VariationResult> {
    let lambda = prop1_lambda(alpha, n)?;
    u.ensure_same_grid(h)?;
    check_nonnegative(u, "u")?;
    check_variation(h, alpha)?;
    let du = frac_partial_u(&Density::power(1.0, n), alpha, Convention::Caputo)?;
    let zero = Field::constant(*u.grid(), 0.0)?;
    let du = du.evaluate(u, &zero)?;
    let ha = pow_field(h, alpha.value(), "h")?;
    let values = du.zip_map(&ha, |d, h| lambda * d * h)?;
    Ok(VariationResult::new(alpha, values, Method::ClosedForm))
}

/// Coefficients (A₁, A₂) of δ^α∫u·uₓ:
/// A₁·u^(1-α)h^α·uₓ + A₂·u^(2-α)h^(α-1)·hₓ.
pub fn uux_coefficients(alpha: Order) -> Result<(f64, f64)> {
    alpha.ensure_unit()?;
    if alpha.is_zero() {
        // limits as α → 0, where αΓ(2α)/Γ(α) → 0
        return Ok((1.0, 0.0));
    }
    let a = alpha.value();
    let a1 = (1.0 - a) * gamma_ratio(2.0 * a + 1.0, a + 1.0)? + a * gamma_ratio(2.0 * a, a)?;
    let a2 = a * a * gamma_ratio(2.0 * a, a + 1.0)?;
    Ok((a1, a2))
}

/// The alternative coefficient form, where the hₓ-term carries an extra
/// factor α and the uₓ-term lacks u^(1-α)h^(α-1).
pub fn uux_statement_coefficients(alpha: Order) -> Result<(f64, f64)> {
    let (a1, a2) = uux_coefficients(alpha)?;
    Ok((a1, alpha.value() * a2))
}

fn uux_integrand(
    u: &Field,
    h: &Field,
    alpha: Order,
    term: impl Fn(f64, f64, f64, f64, f64) -> f64,
) -> Result<Field> {
    alpha.ensure_unit()?;
    u.ensure_same_grid(h)?;
    check_nonnegative(u, "u")?;
    check_variation(h, alpha)?;
    let ux = derivative_x(u);
    let hx = derivative_x(h);
    let values = (0..u.grid().len())
        .map(|i| {
            term(
                u.values()[i],
                h.values()[i],
                ux.values()[i],
                hx.values()[i],
                alpha.value(),
            )
        })
        .collect();
    Field::new(*u.grid(), values)
}

/// h^(α-1)·hₓ, taken as 0 where h = 0 (an endpoint, where the variation vanishes).
fn singular_factor(h: f64, hx: f64, a: f64) -> f64 {
    if h == 0.0 && a < 1.0 {
        0.0
    } else {
        h.powf(a - 1.0) * hx
    }
}

/// δ^α∫u·uₓ dx.
pub fn frac_variation_uux(u: &Field, h: &Field, alpha: Order) -> Result<VariationResult> {
    let (a1, a2) = uux_coefficients(alpha)?;
    let values = uux_integrand(u, h, alpha, |u, h, ux, hx, a| {
        a1 * u.powf(1.0 - a) * h.powf(a) * ux + a2 * u.powf(2.0 - a) * singular_factor(h, hx, a)
    })?;
    Ok(VariationResult::new(alpha, values, Method::ClosedForm))
}

/// δ^α∫u·uₓ dx with [`uux_statement_coefficients`]. It disagrees with the
/// numerical oracle for α < 1 and is kept only to document that.
pub fn frac_variation_uux_statement(u: &Field, h: &Field, alpha: Order) -> Result<VariationResult> {
    let (a1, a2) = uux_statement_coefficients(alpha)?;
    let values = uux_integrand(u, h, alpha, |u, h, ux, hx, a| {
        a1 * ux * h + a2 * u.powf(2.0 - a) * singular_factor(h, hx, a)
    })?;
    Ok(VariationResult::new(alpha, values, Method::ClosedForm))
}

/// Closed-form δ^αF for densities Σ c·uᵖ + c'·u·uₓ; any density at α = 1.
pub fn closed_form_variation(
    f: &Density,
    u: &Field,
    h: &Field,
    alpha: Order,
) -> Result<VariationResult> {
    let (local, rest): (Vec<Monomial>, Vec<Monomial>) = f.terms().iter().partition(|m| m.q == 0);
    let uux = match rest.as_slice() {
        [] => None,
        [m] if m.p == 1 && m.q == 1 => Some(m.coeff),
        _ if alpha.is_one() => return gateaux_differential(f, u, h),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "no closed form for `{f}` at α = {}; use the numerical oracle",
                alpha.value()
            )))
        }
    };
    let base = if local.is_empty() {
        zero_result(u, alpha)?
    } else {
        frac_variation(&Density::from_terms(local)?, u, h, alpha)?
    };
    match uux {
        None => Ok(base),
        Some(c) => {
            let extra = frac_variation_uux(u, h, alpha)?;
            let values = base.integrand.zip_map(&extra.integrand, |a, b| a + c * b)?;
            Ok(VariationResult::new(alpha, values, Method::ClosedForm))
        }
    }
}
