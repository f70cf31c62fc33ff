//! Direct numerical evaluation of δ^αF, independent of every closed form.
//!
//! At each grid point the deformed density ψ(ε) = f(U, Uₓ), with
//! U = u^(1-α)(u + εh)^α, is differentiated to order α in ε by the product
//! integration oracle, with terminal ε₀ = -u/h and evaluated at ε = 0. Uₓ is
//! formed from the chain rule with the sampled uₓ and hₓ, so the spatial
//! derivative never crosses into neighbouring points whose own terminals differ.
//! At α = 0 the result is f itself and at α = 1 the terminal plays no role.

use rayon::prelude::*;

use super::{check_nonnegative, check_variation, Method, VariationResult};
use crate::density::Density;
use crate::error::{Error, Result};
use crate::fracops::{Order, RlOracle};
use crate::gridfield::{derivative_x, Field};

struct Point {
    u: f64,
    h: f64,
    ux: f64,
    hx: f64,
}

impl Point {
    /// f(U, Uₓ) at offset τ = ε - ε₀, so u + εh = h·τ without cancellation.
    fn deformed(&self, f: &Density, a: f64, with_ux: bool, tau: f64) -> f64 {
        let s = self.h * tau;
        let sa = s.powf(a);
        let big_u = self.u.powf(1.0 - a) * sa;
        let big_ux = if with_ux {
            let eps = tau - self.u / self.h;
            (1.0 - a) * self.u.powf(-a) * sa * self.ux
                + a * self.u.powf(1.0 - a) * s.powf(a - 1.0) * (self.ux + eps * self.hx)
        } else {
            0.0
        };
        f.value(big_u, big_ux)
    }
}

pub fn frac_variation_numeric(
    f: &Density,
    u: &Field,
    h: &Field,
    alpha: Order,
    steps: usize,
) -> Result<VariationResult> {
    frac_variation_numeric_with(f, u, h, alpha, &RlOracle::new(steps))
}

pub fn frac_variation_numeric_with(
    f: &Density,
    u: &Field,
    h: &Field,
    alpha: Order,
    oracle: &RlOracle,
) -> Result<VariationResult> {
    alpha.ensure_unit()?;
    u.ensure_same_grid(h)?;
    check_nonnegative(u, "u")?;
    check_variation(h, alpha)?;
    let a = alpha.value();
    let ux = derivative_x(u);
    let hx = derivative_x(h);
    let with_ux = f.depends_on_ux();
    let values = (0..u.grid().len())
        .into_par_iter()
        .map(|i| {
            let p = Point {
                u: u.values()[i],
                h: h.values()[i],
                ux: ux.values()[i],
                hx: hx.values()[i],
            };
            if alpha.is_zero() {
                return Ok(f.value(p.u, p.ux));
            }
            if alpha.is_one() {
                // the terminal drops out; differentiate f(u + εh, uₓ + εhₓ) directly
                return oracle.derivative(
                    |tau| f.value(p.u + (tau - 1.0) * p.h, p.ux + (tau - 1.0) * p.hx),
                    alpha,
                    -1.0,
                    0.0,
                );
            }
            if p.h == 0.0 {
                // endpoint of a vanishing variation
                return Ok(0.0);
            }
            if p.u == 0.0 {
                // U ≡ 0 for every ε
                if !with_ux && f.value(0.0, 0.0) == 0.0 {
                    return Ok(0.0);
                }
                return Err(Error::Positivity {
                    what: "u",
                    index: i,
                    value: 0.0,
                });
            }
            oracle.derivative(|tau| p.deformed(f, a, with_ux, tau), alpha, -p.u / p.h, 0.0)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(VariationResult::new(
        alpha,
        Field::new(*u.grid(), values)?,
        Method::GateauxNumeric,
    ))
}
