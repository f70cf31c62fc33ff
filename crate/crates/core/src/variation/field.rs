//! Variations over the slots u₁ = u, u₂ = uₓ and the fractional Euler-Lagrange residual.
//!
//! The substitution (δu_k)^α = Γ(2-α)·u_k^(α-1)·δ^αu_k turns the fractional
//! variation into Γ(2-α)∫Σ(D^α_{u_k}f)·u_k^(α-1)·δ^αu_k dx. Treating u₂ as an
//! independent field tied to uₓ by a multiplier gives the residual
//! (D^α_{u₁}f)·u₁^(2α-2) - d/dx(u₁^(α-1)·u₂^(α-1)·D^α_{u₂}f).

use super::{pow_field, Method, VariationResult};
use crate::density::{frac_partial_u, frac_partial_ux, Convention, Density};
use crate::error::{Error, Result};
use crate::fracops::Order;
use crate::gridfield::{derivative_x, Field};
use crate::specfun::{gamma, recip_gamma};

/// Pointwise left-hand side of the fractional Euler-Lagrange equation.
#[derive(Debug, Clone)]
pub struct Residual {
    pub alpha: Order,
    pub values: Field,
}

fn mul(a: &Field, b: &Field) -> Result<Field> {
    a.zip_map(b, |a, b| a * b)
}

/// Γ(2-α)∫Σ(D^α_{u_k}f)·u_k^(α-1)·δ^αu_k dx for one or two slots.
///
/// The second slot is treated as independent of the first, so nothing ties
/// δ^αu₂ to δ^αu₁ for α < 1. Use [`fele_residual`], which enforces u₂ = uₓ
/// through a multiplier, when the constraint matters.
pub fn field_frac_variation(
    f: &Density,
    fields: &[Field],
    variations: &[Field],
    alpha: Order,
) -> Result<VariationResult> {
    alpha.ensure_unit()?;
    if fields.is_empty() || fields.len() > 2 {
        return Err(Error::Shape(format!(
            "one or two fields expected, got {}",
            fields.len()
        )));
    }
    if variations.len() != fields.len() {
        return Err(Error::Shape(format!(
            "{} fields but {} variations",
            fields.len(),
            variations.len()
        )));
    }
    if fields.len() == 1 && f.depends_on_ux() {
        return Err(Error::Shape(format!("`{f}` needs a second field for uₓ")));
    }
    let u1 = &fields[0];
    for x in fields.iter().chain(variations) {
        u1.ensure_same_grid(x)?;
    }
    let a = alpha.value();
    let slot_names = ["u", "ux"];
    if !alpha.is_one() {
        for (k, x) in fields.iter().enumerate() {
            x.ensure_positive(slot_names[k])?;
        }
    }
    let zero = Field::constant(*u1.grid(), 0.0)?;
    let u2 = fields.get(1).unwrap_or(&zero);
    let g = gamma(2.0 - a)?;
    let mut total = Field::constant(*u1.grid(), 0.0)?;
    for (k, dv) in variations.iter().enumerate() {
        let partial = if k == 0 {
            frac_partial_u(f, alpha, Convention::Caputo)?
        } else {
            frac_partial_ux(f, alpha, Convention::Caputo)?
        };
        let d = partial.evaluate(u1, u2)?;
        let w = pow_field(&fields[k], a - 1.0, slot_names[k])?;
        let term = mul(&mul(&d, &w)?, dv)?;
        total = total.zip_map(&term, |s, t| s + g * t)?;
    }
    Ok(VariationResult::new(alpha, total, Method::FieldFormalism))
}

struct Slots {
    du: Field,
    dux: Field,
    u_pow: Field,
    ux_pow: Field,
}

fn slots(f: &Density, u: &Field, alpha: Order, conv: Convention) -> Result<Slots> {
    alpha.ensure_unit()?;
    if alpha.is_zero() {
        return Err(Error::InvalidArgument(
            "the Euler-Lagrange residual needs α in (0, 1]".into(),
        ));
    }
    let ux = derivative_x(u);
    if !alpha.is_one() {
        u.ensure_positive("u")?;
        ux.ensure_positive("ux")?;
    }
    let a = alpha.value();
    Ok(Slots {
        du: frac_partial_u(f, alpha, conv)?.evaluate(u, &ux)?,
        dux: frac_partial_ux(f, alpha, conv)?.evaluate(u, &ux)?,
        u_pow: pow_field(u, a - 1.0, "u")?,
        ux_pow: pow_field(&ux, a - 1.0, "ux")?,
    })
}

/// Residual with Caputo partials.
pub fn fele_residual(f: &Density, u: &Field, alpha: Order) -> Result<Residual> {
    fele_residual_with(f, u, alpha, Convention::Caputo)
}

pub fn fele_residual_with(
    f: &Density,
    u: &Field,
    alpha: Order,
    conv: Convention,
) -> Result<Residual> {
    let s = slots(f, u, alpha, conv)?;
    let first = mul(&mul(&s.du, &s.u_pow)?, &s.u_pow)?;
    let flux = derivative_x(&mul(&mul(&s.u_pow, &s.ux_pow)?, &s.dux)?);
    Ok(Residual {
        alpha,
        values: first.zip_map(&flux, |a, b| a - b)?,
    })
}

/// λ = -(D^α_{u₂}f)/(D^α_{u₂}u₂) = -(D^α_{u₂}f)·Γ(2-α)·u₂^(α-1)
pub fn lagrange_multiplier(f: &Density, u: &Field, alpha: Order) -> Result<Field> {
    let s = slots(f, u, alpha, Convention::Caputo)?;
    let g = gamma(2.0 - alpha.value())?;
    mul(&s.dux, &s.ux_pow)?.map(|v| -g * v)
}

/// The residual rebuilt from λ:
/// u^(α-1)·[(D^α_u f)·u^(α-1) + u^(1-α)/Γ(2-α)·d/dx(λ·u^(α-1))].
pub fn multiplier_reconstruction(f: &Density, u: &Field, alpha: Order) -> Result<Field> {
    let s = slots(f, u, alpha, Convention::Caputo)?;
    let lambda = lagrange_multiplier(f, u, alpha)?;
    let a = alpha.value();
    let rg = recip_gamma(2.0 - a);
    let tail = derivative_x(&mul(&lambda, &s.u_pow)?);
    let inv = pow_field(u, 1.0 - a, "u")?;
    let values = (0..u.grid().len())
        .map(|i| {
            s.u_pow.values()[i]
                * (s.du.values()[i] * s.u_pow.values()[i] + inv.values()[i] * rg * tail.values()[i])
        })
        .collect();
    Field::new(*u.grid(), values)
}

/// max |d/dx(δ^αu) - δ^α(uₓ)| with δ^αu = u^(1-α)h^α/Γ(2-α).
///
/// The second path expands the derivative by the product rule with sampled
/// uₓ and hₓ, so the gap measures only discretization error, O(Δx²).
pub fn commutation_check(u: &Field, h: &Field, alpha: Order) -> Result<f64> {
    alpha.ensure_unit()?;
    u.ensure_same_grid(h)?;
    if !(alpha.is_zero() || alpha.is_one()) {
        u.ensure_positive("u")?;
    }
    super::check_nonnegative(h, "h")?;
    let a = alpha.value();
    let rg = recip_gamma(2.0 - a);
    let u_a = pow_field(u, 1.0 - a, "u")?;
    let h_a = pow_field(h, a, "h")?;
    let before = derivative_x(&mul(&u_a, &h_a)?.map(|v| v * rg)?);
    let ux = derivative_x(u);
    let hx = derivative_x(h);
    let mut worst = 0.0f64;
    for i in 0..u.grid().len() {
        let (uv, hv) = (u.values()[i], h.values()[i]);
        let du = if a == 0.0 {
            ux.values()[i]
        } else if a == 1.0 {
            0.0
        } else {
            (1.0 - a) * uv.powf(-a) * ux.values()[i] * h_a.values()[i]
        };
        let dh = if a == 0.0 || (hv == 0.0 && a < 1.0) {
            0.0
        } else {
            a * u_a.values()[i] * hv.powf(a - 1.0) * hx.values()[i]
        };
        let after = rg * (du + dh);
        worst = worst.max((before.values()[i] - after).abs());
    }
    Ok(worst)
}
