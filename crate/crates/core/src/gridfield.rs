//! Uniform 1-D grids, sampled fields, quadrature and spatial differentiation.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fracops::Order;

/// Uniform grid x1 = x_0 < x_1 < … < x_{n-1} = x2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x1: f64,
    x2: f64,
    n: usize,
    dx: f64,
}

impl Grid {
    pub fn uniform(x1: f64, x2: f64, n: usize) -> Result<Self> {
        if !(x1.is_finite() && x2.is_finite()) || x1 >= x2 {
            return Err(Error::InvalidRange(format!(
                "need x1 < x2, got [{x1}, {x2}]"
            )));
        }
        if n < 3 {
            return Err(Error::InvalidRange(format!(
                "need at least 3 points, got {n}"
            )));
        }
        let dx = (x2 - x1) / (n - 1) as f64;
        if !(dx.is_finite() && dx > 0.0) {
            return Err(Error::InvalidRange(format!(
                "degenerate spacing on [{x1}, {x2}]"
            )));
        }
        Ok(Self { x1, x2, n, dx })
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.dx
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.x2
        } else {
            self.x1 + i as f64 * self.dx
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }
}

/// Finite samples of a function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite field value {} at grid index {i}",
                values[i]
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        Self::new(grid, vec![c; grid.len()])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.ensure_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.grid, values)
    }

    pub fn ensure_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Shape("fields live on different grids".into()));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Fails with the first index where the value is not strictly positive.
    pub fn ensure_positive(&self, what: &'static str) -> Result<()> {
        match self.values.iter().position(|&v| v.is_nan() || v <= 0.0) {
            Some(index) => Err(Error::Positivity {
                what,
                index,
                value: self.values[index],
            }),
            None => Ok(()),
        }
    }
}

/// Composite trapezoid rule, summed left to right.
pub fn quadrature(f: &Field) -> f64 {
    let v = f.values();
    let inner: f64 = v[1..v.len() - 1].iter().sum();
    f.grid().spacing() * (0.5 * (v[0] + v[v.len() - 1]) + inner)
}

/// d/dx: central differences inside, one-sided second-order stencils at the ends.
pub fn derivative_x(f: &Field) -> Field {
    let v = f.values();
    let n = v.len();
    let inv = 1.0 / (2.0 * f.grid().spacing());
    let mut d = Vec::with_capacity(n);
    d.push((-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv);
    for i in 1..n - 1 {
        d.push((v[i + 1] - v[i - 1]) * inv);
    }
    d.push((3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) * inv);
    Field {
        grid: *f.grid(),
        values: d,
    }
}

/// u^(1-α)(u + εh)^α sampled on the grid of `base`.
#[derive(Debug, Clone)]
pub struct DeformedField {
    pub base: Field,
    pub variation: Field,
    pub epsilon: f64,
    pub alpha: Order,
    pub values: Field,
}

/// u^(1-α)(u + εh)^α for a single sample.
pub fn deform_value(u: f64, h: f64, epsilon: f64, alpha: f64) -> f64 {
    if epsilon == 0.0 || alpha == 0.0 {
        u
    } else if alpha == 1.0 {
        u + epsilon * h
    } else {
        u.powf(1.0 - alpha) * (u + epsilon * h).powf(alpha)
    }
}

pub fn deform_field(u: &Field, h: &Field, epsilon: f64, alpha: Order) -> Result<DeformedField> {
    alpha.ensure_unit()?;
    u.ensure_same_grid(h)?;
    if epsilon < 0.0 || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "deformation parameter must be non-negative, got {epsilon}"
        )));
    }
    let a = alpha.value();
    if !(alpha.is_zero() || alpha.is_one()) {
        u.ensure_positive("u")?;
        let shifted = u.zip_map(h, |u, h| u + epsilon * h)?;
        shifted.ensure_positive("u + εh")?;
    }
    let values = u.zip_map(h, |u, h| deform_value(u, h, epsilon, a))?;
    Ok(DeformedField {
        base: u.clone(),
        variation: h.clone(),
        epsilon,
        alpha,
        values,
    })
}

/// Fields read from a CSV file with header `x,u[,h]`.
#[derive(Debug, Clone)]
pub struct FieldSet {
    pub u: Field,
    pub h: Option<Field>,
}

impl FieldSet {
    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    pub fn require_h(&self) -> Result<&Field> {
        self.h
            .as_ref()
            .ok_or_else(|| Error::FieldFile("column `h` is required for this command".into()))
    }
}

/// 17 significant digits, '.' as decimal separator.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn read_fields_csv<R: Read>(reader: R) -> Result<FieldSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let has_h = match headers
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>()
        .as_slice()
    {
        ["x", "u"] => false,
        ["x", "u", "h"] => true,
        _ => {
            return Err(Error::FieldFile(format!(
                "header must be `x,u` or `x,u,h`, got `{}`",
                headers.join(",")
            )))
        }
    };
    let mut xs = Vec::new();
    let mut us = Vec::new();
    let mut hs = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let parse = |col: usize| -> Result<f64> {
            record
                .get(col)
                .ok_or_else(|| Error::FieldFile(format!("row {}: missing column {col}", row + 1)))?
                .parse::<f64>()
                .map_err(|e| Error::FieldFile(format!("row {}: {e}", row + 1)))
        };
        xs.push(parse(0)?);
        us.push(parse(1)?);
        if has_h {
            hs.push(parse(2)?);
        }
    }
    if xs.len() < 3 {
        return Err(Error::FieldFile(format!(
            "need at least 3 rows, got {}",
            xs.len()
        )));
    }
    let grid = Grid::uniform(xs[0], xs[xs.len() - 1], xs.len())?;
    let tol = 1e-9 * (grid.x2() - grid.x1());
    for (i, &x) in xs.iter().enumerate() {
        if (x - grid.point(i)).abs() > tol {
            return Err(Error::FieldFile(format!(
                "grid is not uniform at row {} (x = {x}, expected {})",
                i + 1,
                grid.point(i)
            )));
        }
    }
    let u = Field::new(grid, us)?;
    let h = if has_h {
        Some(Field::new(grid, hs)?)
    } else {
        None
    };
    Ok(FieldSet { u, h })
}

pub fn read_fields_file(path: &Path) -> Result<FieldSet> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::FieldFile(format!("{}: {e}", path.display())))?;
    read_fields_csv(file)
}

pub fn write_fields_csv<W: Write>(mut out: W, u: &Field, h: Option<&Field>) -> Result<()> {
    if let Some(h) = h {
        u.ensure_same_grid(h)?;
        writeln!(out, "x,u,h")?;
    } else {
        writeln!(out, "x,u")?;
    }
    for (i, x) in u.grid().points().into_iter().enumerate() {
        match h {
            Some(h) => writeln!(
                out,
                "{},{},{}",
                format_number(x),
                format_number(u.values()[i]),
                format_number(h.values()[i])
            )?,
            None => writeln!(out, "{},{}", format_number(x), format_number(u.values()[i]))?,
        }
    }
    Ok(())
}
