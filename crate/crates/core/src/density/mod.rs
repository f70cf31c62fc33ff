//! Polynomial densities f(u, uₓ) and their classical and fractional partials.

mod parse;

use std::fmt;
use std::str::FromStr;

pub use parse::parse_density;

use crate::error::{Error, Result};
use crate::fracops::Order;
use crate::gridfield::Field;
use crate::specfun::{gamma_ratio, recip_gamma};

/// Largest exponent accepted by the parser.
pub const MAX_EXPONENT: u32 = 12;

/// c·u^p·uₓ^q
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub p: u32,
    pub q: u32,
}

impl Monomial {
    pub fn new(coeff: f64, p: u32, q: u32) -> Self {
        Self { coeff, p, q }
    }

    pub fn value(&self, u: f64, ux: f64) -> f64 {
        self.coeff * u.powi(self.p as i32) * ux.powi(self.q as i32)
    }
}

/// A sum of monomials with distinct (p, q), sorted by (p, q), no zero coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Density {
    terms: Vec<Monomial>,
}

impl Density {
    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut terms: Vec<Monomial> = terms.into_iter().collect();
        if let Some(m) = terms.iter().find(|m| !m.coeff.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite coefficient {}",
                m.coeff
            )));
        }
        terms.sort_by_key(|m| (m.p, m.q));
        let mut merged: Vec<Monomial> = Vec::with_capacity(terms.len());
        for m in terms {
            match merged.last_mut() {
                Some(last) if (last.p, last.q) == (m.p, m.q) => last.coeff += m.coeff,
                _ => merged.push(m),
            }
        }
        merged.retain(|m| m.coeff != 0.0);
        Ok(Self { terms: merged })
    }

    /// c·uⁿ
    pub fn power(c: f64, n: u32) -> Self {
        Self::from_terms([Monomial::new(c, n, 0)]).expect("finite coefficient")
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn depends_on_ux(&self) -> bool {
        self.terms.iter().any(|m| m.q > 0)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|m| Monomial::new(c * m.coeff, m.p, m.q)),
        )
        .expect("finite coefficient")
    }

    pub fn add(&self, other: &Density) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).copied())
            .expect("finite coefficient")
    }

    pub fn partial_u(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|m| m.p > 0)
                .map(|m| Monomial::new(m.coeff * m.p as f64, m.p - 1, m.q)),
        )
        .expect("finite coefficient")
    }

    pub fn partial_ux(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|m| m.q > 0)
                .map(|m| Monomial::new(m.coeff * m.q as f64, m.p, m.q - 1)),
        )
        .expect("finite coefficient")
    }

    pub fn value(&self, u: f64, ux: f64) -> f64 {
        self.terms.iter().map(|m| m.value(u, ux)).sum()
    }

    /// Pointwise f(u, uₓ). Integer exponents need no sign condition.
    pub fn evaluate(&self, u: &Field, ux: &Field) -> Result<Field> {
        u.zip_map(ux, |u, ux| self.value(u, ux))
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            let c = if i == 0 {
                if m.coeff < 0.0 {
                    f.write_str("-")?;
                }
                m.coeff.abs()
            } else {
                f.write_str(if m.coeff < 0.0 { " - " } else { " + " })?;
                m.coeff.abs()
            };
            let mut factors = Vec::new();
            for (name, k) in [("u", m.p), ("ux", m.q)] {
                match k {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    k => factors.push(format!("{name}^{k}")),
                }
            }
            if factors.is_empty() || c != 1.0 {
                f.write_str(&format_coeff(c))?;
                if !factors.is_empty() {
                    f.write_str("*")?;
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

fn format_coeff(c: f64) -> String {
    if c == c.trunc() && c.abs() < 1e15 {
        format!("{}", c as i64)
    } else {
        format!("{c:?}")
    }
}

impl FromStr for Density {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_density(s)
    }
}

/// How a term constant in the differentiated slot transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// Constants map to 0.
    #[default]
    Caputo,
    /// Constants map to c·x^(-α)/Γ(1-α).
    RiemannLiouville,
}

/// c·u^p·uₓ^q with real exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracMonomial {
    pub coeff: f64,
    pub p: f64,
    pub q: f64,
}

/// Result of a fractional partial. Not re-parseable by design.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FracDensity {
    terms: Vec<FracMonomial>,
}

pub(crate) fn real_power(x: f64, e: f64) -> Option<f64> {
    if e == 0.0 {
        Some(1.0)
    } else if e == e.trunc() && e.abs() <= i32::MAX as f64 && (x != 0.0 || e > 0.0) {
        Some(x.powi(e as i32))
    } else if x > 0.0 {
        Some(x.powf(e))
    } else if x == 0.0 && e > 0.0 {
        Some(0.0)
    } else {
        None
    }
}

impl FracMonomial {
    pub fn value(&self, u: f64, ux: f64) -> Result<f64> {
        let a = real_power(u, self.p).ok_or(Error::Positivity {
            what: "u",
            index: 0,
            value: u,
        })?;
        let b = real_power(ux, self.q).ok_or(Error::Positivity {
            what: "ux",
            index: 0,
            value: ux,
        })?;
        Ok(self.coeff * a * b)
    }
}

impl FracDensity {
    pub fn from_terms(terms: impl IntoIterator<Item = FracMonomial>) -> Self {
        let mut merged: Vec<FracMonomial> = Vec::new();
        for m in terms {
            if m.coeff == 0.0 {
                continue;
            }
            match merged.iter_mut().find(|t| t.p == m.p && t.q == m.q) {
                Some(t) => t.coeff += m.coeff,
                None => merged.push(m),
            }
        }
        merged.retain(|m| m.coeff != 0.0);
        Self { terms: merged }
    }

    pub fn terms(&self) -> &[FracMonomial] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn value(&self, u: f64, ux: f64) -> Result<f64> {
        self.terms
            .iter()
            .try_fold(0.0, |s, m| Ok(s + m.value(u, ux)?))
    }

    /// Pointwise evaluation; a bad sign reports the first offending grid index.
    pub fn evaluate(&self, u: &Field, ux: &Field) -> Result<Field> {
        u.ensure_same_grid(ux)?;
        let values = u
            .values()
            .iter()
            .zip(ux.values())
            .enumerate()
            .map(|(i, (&u, &ux))| {
                self.value(u, ux).map_err(|e| match e {
                    Error::Positivity { what, value, .. } => Error::Positivity {
                        what,
                        index: i,
                        value,
                    },
                    e => e,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Field::new(*u.grid(), values)
    }
}

impl From<&Density> for FracDensity {
    fn from(d: &Density) -> Self {
        Self::from_terms(d.terms.iter().map(|m| FracMonomial {
            coeff: m.coeff,
            p: m.p as f64,
            q: m.q as f64,
        }))
    }
}

impl fmt::Display for FracDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{:?}*u^{:?}*ux^{:?}", m.coeff, m.p, m.q)?;
        }
        Ok(())
    }
}

/// Power-rule factor Γ(k+1)/Γ(k+1-α) for integer k ≥ 0 under `conv`.
fn slot_factor(k: u32, order: Order, conv: Convention) -> f64 {
    let a = order.value();
    if order.is_zero() {
        return 1.0;
    }
    if k == 0 {
        return match conv {
            Convention::Caputo => 0.0,
            Convention::RiemannLiouville => recip_gamma(1.0 - a),
        };
    }
    gamma_ratio(k as f64 + 1.0, k as f64 + 1.0 - a).expect("k + 1 is never a pole")
}

fn frac_partial(f: &Density, order: Order, conv: Convention, in_u: bool) -> Result<FracDensity> {
    order.ensure_unit()?;
    let a = order.value();
    Ok(FracDensity::from_terms(f.terms.iter().map(|m| {
        let k = if in_u { m.p } else { m.q };
        let coeff = m.coeff * slot_factor(k, order, conv);
        let shifted = k as f64 - a;
        if in_u {
            FracMonomial {
                coeff,
                p: shifted,
                q: m.q as f64,
            }
        } else {
            FracMonomial {
                coeff,
                p: m.p as f64,
                q: shifted,
            }
        }
    })))
}

/// D^α_u f with terminal 0, term by term.
pub fn frac_partial_u(f: &Density, order: Order, conv: Convention) -> Result<FracDensity> {
    frac_partial(f, order, conv, true)
}

/// D^α_{uₓ} f with terminal 0, term by term.
pub fn frac_partial_ux(f: &Density, order: Order, conv: Convention) -> Result<FracDensity> {
    frac_partial(f, order, conv, false)
}
