//! First variations of integral functionals F\[u\] = ∫ f(u, uₓ) dx.
//!
//! Integer-order variations and variational derivatives live here, next to the
//! result types. The fractional variation, obtained by differentiating
//! F[u^(1-α)(u + εh)^α] to order α in ε at ε = 0, is split into closed forms
//! (`fractional`), the numerical oracle (`numeric`) and the multi-field
//! formalism with its Euler-Lagrange residual (`field`).

mod field;
mod fractional;
mod numeric;
mod steps;

use std::io::Write;

use serde::Serialize;

pub use field::{
    commutation_check, fele_residual, fele_residual_with, field_frac_variation,
    lagrange_multiplier, multiplier_reconstruction, Residual,
};
pub use fractional::{
    closed_form_variation, frac_variation, frac_variation_uux, frac_variation_uux_statement,
    prop1_factorized, prop1_lambda, uux_coefficients, uux_statement_coefficients,
};
pub use numeric::{frac_variation_numeric, frac_variation_numeric_with};
pub use steps::{
    functional_value, step1_diagnostic, step2_variation, step3_variation, Step1Diagnostic,
};

use crate::density::{real_power, Density};
use crate::error::{Error, Result};
use crate::fracops::Order;
use crate::gridfield::{derivative_x, format_number, quadrature, Field};

/// Endpoint magnitude below which h counts as vanishing.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    GateauxNumeric,
    FieldFormalism,
}

/// δ^αF together with its integrand. `value` is always `quadrature(&integrand)`.
#[derive(Debug, Clone)]
pub struct VariationResult {
    pub alpha: Order,
    pub integrand: Field,
    pub value: f64,
    pub method: Method,
}

#[derive(Serialize)]
struct VariationJson<'a> {
    alpha: Order,
    value: f64,
    method: Method,
    integrand: &'a [f64],
}

impl VariationResult {
    pub fn new(alpha: Order, integrand: Field, method: Method) -> Self {
        let value = quadrature(&integrand);
        Self {
            alpha,
            integrand,
            value,
            method,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&VariationJson {
            alpha: self.alpha,
            value: self.value,
            method: self.method,
            integrand: self.integrand.values(),
        })
        .expect("finite values serialize")
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,integrand")?;
        for (x, v) in self
            .integrand
            .grid()
            .points()
            .iter()
            .zip(self.integrand.values())
        {
            writeln!(out, "{},{}", format_number(*x), format_number(*v))?;
        }
        Ok(())
    }
}

fn classical() -> Order {
    Order::unit(1.0).expect("1 is a valid order")
}

/// x^e on a field, with the first offending index when the power is undefined.
pub(crate) fn pow_field(f: &Field, e: f64, what: &'static str) -> Result<Field> {
    let values = f
        .values()
        .iter()
        .enumerate()
        .map(|(index, &x)| {
            real_power(x, e).ok_or(Error::Positivity {
                what,
                index,
                value: x,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Field::new(*f.grid(), values)
}

/// Sign conditions on a variation h used under a fractional power:
/// h ≥ 0 everywhere and h > 0 strictly inside.
pub(crate) fn check_variation(h: &Field, alpha: Order) -> Result<()> {
    if alpha.is_zero() || alpha.is_one() {
        return Ok(());
    }
    let v = h.values();
    let last = v.len() - 1;
    for (index, &value) in v.iter().enumerate() {
        let ok = if index == 0 || index == last {
            value >= 0.0
        } else {
            value > 0.0
        };
        if !ok {
            return Err(Error::Positivity {
                what: "h",
                index,
                value,
            });
        }
    }
    Ok(())
}

pub(crate) fn check_nonnegative(u: &Field, what: &'static str) -> Result<()> {
    match u.values().iter().position(|&v| v.is_nan() || v < 0.0) {
        Some(index) => Err(Error::Positivity {
            what,
            index,
            value: u.values()[index],
        }),
        None => Ok(()),
    }
}

/// ∫ [∂f/∂u·h + ∂f/∂uₓ·hₓ] dx without any boundary condition on h.
pub fn gateaux_differential(f: &Density, u: &Field, h: &Field) -> Result<VariationResult> {
    u.ensure_same_grid(h)?;
    let ux = derivative_x(u);
    let hx = derivative_x(h);
    let fu = f.partial_u().evaluate(u, &ux)?;
    let fux = f.partial_ux().evaluate(u, &ux)?;
    let values = (0..u.grid().len())
        .map(|i| fu.values()[i] * h.values()[i] + fux.values()[i] * hx.values()[i])
        .collect();
    Ok(VariationResult::new(
        classical(),
        Field::new(*u.grid(), values)?,
        Method::ClosedForm,
    ))
}

/// The classical first variation. h must vanish at both endpoints.
pub fn first_variation(f: &Density, u: &Field, h: &Field) -> Result<VariationResult> {
    let v = h.values();
    for index in [0, v.len() - 1] {
        if v[index].abs() > BOUNDARY_TOLERANCE {
            return Err(Error::Boundary {
                index,
                value: v[index],
            });
        }
    }
    gateaux_differential(f, u, h)
}

/// δF/δu = ∂f/∂u - d/dx ∂f/∂uₓ
pub fn variational_derivative(f: &Density, u: &Field) -> Result<Field> {
    let ux = derivative_x(u);
    let fu = f.partial_u().evaluate(u, &ux)?;
    let flux = derivative_x(&f.partial_ux().evaluate(u, &ux)?);
    fu.zip_map(&flux, |a, b| a - b)
}

/// δ/δu ∫ g·u dx = g
pub fn appendix_linear_vd(g: &Field) -> Field {
    g.clone()
}

/// δ/δu ∫ uⁿ dx = n·u^(n-1)
pub fn appendix_power_vd(n: u32, u: &Field) -> Result<Field> {
    variational_derivative(&Density::power(1.0, n), u)
}

/// δ/δu ∫ g·uₓ dx = -gₓ
pub fn appendix_throw_over(g: &Field) -> Field {
    let d = derivative_x(g);
    d.map(|v| -v).expect("finite derivative")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridfield::Grid;

    fn grid() -> Grid {
        Grid::uniform(0.0, 1.0, 201).unwrap()
    }

    fn d(e: &str) -> Density {
        e.parse().unwrap()
    }

    #[test]
    fn first_variation_of_square() {
        let g = grid();
        let u = Field::from_fn(g, |x| x + 1.0).unwrap();
        let h = Field::from_fn(g, |x| x * (1.0 - x)).unwrap();
        let r = first_variation(&d("u^2"), &u, &h).unwrap();
        let expect = 2.0 * quadrature(&u.zip_map(&h, |a, b| a * b).unwrap());
        assert!((r.value - expect).abs() < 1e-14);
        assert_eq!(r.value, quadrature(&r.integrand));
        assert_eq!(r.alpha.value(), 1.0);
    }

    #[test]
    fn total_derivative_density_has_zero_variation() {
        let g = grid();
        let u = Field::from_fn(g, |x| x + 1.0).unwrap();
        let h = Field::from_fn(g, |x| x * (1.0 - x)).unwrap();
        let r = first_variation(&d("u*ux"), &u, &h).unwrap();
        assert!(r.value.abs() < 1e-4, "{}", r.value);
    }

    #[test]
    fn boundary_rule() {
        let g = grid();
        let u = Field::from_fn(g, |x| x + 1.0).unwrap();
        let h = Field::constant(g, 0.5).unwrap();
        assert!(matches!(
            first_variation(&d("u^2"), &u, &h),
            Err(Error::Boundary { index: 0, .. })
        ));
        let zero = Field::constant(g, 0.0).unwrap();
        assert_eq!(first_variation(&d("u^2"), &u, &zero).unwrap().value, 0.0);
    }

    #[test]
    fn variational_derivatives() {
        let g = grid();
        let u = Field::from_fn(g, |x| x * x).unwrap();
        let vd = variational_derivative(&d("0.5*ux^2"), &u).unwrap();
        assert!(vd.values().iter().all(|v| (v + 2.0).abs() < 1e-9));

        let u = Field::from_fn(g, |x| x + 0.5).unwrap();
        let vd = appendix_power_vd(4, &u).unwrap();
        for (v, x) in vd.values().iter().zip(u.values()) {
            assert!((v - 4.0 * x.powi(3)).abs() < 1e-12);
        }
    }

    #[test]
    fn appendix_rules() {
        let g = grid();
        let sq = Field::from_fn(g, |x| x * x).unwrap();
        assert_eq!(appendix_linear_vd(&sq), sq);
        let t = appendix_throw_over(&sq);
        for (v, x) in t.values().iter().zip(g.points()) {
            assert!((v + 2.0 * x).abs() < 1e-12);
        }
        let c = Field::constant(g, 7.0).unwrap();
        assert!(appendix_throw_over(&c).max_abs() < 1e-12);
    }

    #[test]
    fn json_and_csv() {
        let g = Grid::uniform(0.0, 1.0, 3).unwrap();
        let r = VariationResult::new(
            Order::unit(0.5).unwrap(),
            Field::new(g, vec![0.0, 1.0, 2.0]).unwrap(),
            Method::GateauxNumeric,
        );
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["alpha"], 0.5);
        assert_eq!(v["value"], 1.0);
        assert_eq!(v["method"], "gateaux_numeric");
        assert_eq!(v["integrand"].as_array().unwrap().len(), 3);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,integrand\n0.0000000000000000e0,"));
        assert_eq!(text.lines().count(), 4);
    }
}
