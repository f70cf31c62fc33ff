//! The `fracvar` command line: evaluation, verification and α-sweeps.
//!
//! Exit status is 0 on success, 1 on input errors and 2 when a verification
//! or tolerance check fails.

pub mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::density::{Convention, Density};
use crate::error::{Error, Result};
use crate::fracops::{
    caputo_power_rule, rl_constant, rl_numeric, rl_power_rule, rl_shifted_power,
    rl_shifted_product, Order, PowerTerm,
};
use crate::gridfield::{format_number, read_fields_file, FieldSet};
use crate::specfun::{gamma, gauss_2f1, gauss_2f1_derivative, pochhammer, HypergeometricArgs};
use crate::variation::{
    closed_form_variation, fele_residual_with, frac_variation_numeric, lagrange_multiplier,
    prop1_lambda, VariationResult,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CHECK: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fracvar",
    version,
    about = "Fractional variations of integral functionals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gamma, Pochhammer and Gauss hypergeometric values
    Specfun {
        #[command(subcommand)]
        function: SpecfunCommand,
    },
    /// Closed-form fractional derivatives of power terms
    Deriv(DerivArgs),
    /// Fractional variation of ∫f(u, uₓ)dx for sampled u and h
    Variation(VariationArgs),
    /// Fractional Euler-Lagrange residual for a sampled u
    EulerLagrange(EulerLagrangeArgs),
    /// Run the built-in verification table
    Verify(VerifyArgs),
    /// Closed form and oracle over a range of orders
    Sweep(SweepArgs),
}

#[derive(Debug, Subcommand)]
pub enum SpecfunCommand {
    /// Γ(x)
    Gamma { x: f64 },
    /// (z)_k
    Pochhammer { z: f64, k: u32 },
    /// ₂F₁(a, b; c; z) or its k-th z-derivative
    Hyp2f1 {
        #[arg(allow_negative_numbers = true)]
        a: f64,
        #[arg(allow_negative_numbers = true)]
        b: f64,
        #[arg(allow_negative_numbers = true)]
        c: f64,
        z: f64,
        #[arg(long, default_value_t = 0)]
        derivative: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    /// Riemann-Liouville power rule for c·(x-a)^k
    Power,
    /// Caputo power rule for c·(x-a)^k
    Caputo,
    /// Riemann-Liouville derivative of a constant c, terminal a
    Constant,
    /// (ε-ε₀)^β in ε at ε
    Shifted,
    /// (ε-ε₀)^β·ε^γ in ε at ε
    Product,
}

#[derive(Debug, Args)]
pub struct DerivArgs {
    #[arg(long, value_enum)]
    pub rule: Rule,
    #[arg(long)]
    pub alpha: f64,
    /// k or β
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub exponent: f64,
    /// lower terminal a or ε₀
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub base: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub coeff: f64,
    /// evaluation point x or ε
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    /// γ for the product rule
    #[arg(long = "gamma-exp", default_value_t = 0.0)]
    pub gamma_exp: f64,
    /// also evaluate the product-integration oracle
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 4096)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Caputo,
    Rl,
}

#[derive(Debug, Args)]
pub struct VariationArgs {
    /// density, e.g. "u^2" or "u*ux"
    #[arg(short = 'f', long = "density")]
    pub density: String,
    #[arg(long)]
    pub alpha: f64,
    /// CSV file with header x,u,h
    #[arg(long)]
    pub field: PathBuf,
    /// also evaluate the numerical variation
    #[arg(long)]
    pub oracle: bool,
    /// exit 2 when the oracle deviates by more than --tolerance
    #[arg(long, requires = "oracle")]
    pub check: bool,
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 4096)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EulerLagrangeArgs {
    #[arg(short = 'f', long = "density")]
    pub density: String,
    #[arg(long)]
    pub alpha: f64,
    /// CSV file with header x,u or x,u,h
    #[arg(long)]
    pub field: PathBuf,
    /// treatment of terms constant in the differentiated slot
    #[arg(long, value_enum, default_value_t = ConventionArg::Caputo)]
    pub convention: ConventionArg,
    /// also write the Lagrange multiplier
    #[arg(long)]
    pub multiplier: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// run only these checks or groups (e.g. prop1, specfun.gamma_half)
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// replace every check tolerance
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum, default_value_t = TableFormat::Table)]
    pub format: TableFormat,
    /// list check names and exit
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(short = 'f', long = "density", required_unless_present = "lambda")]
    pub density: Option<String>,
    #[arg(long, required_unless_present = "lambda")]
    pub field: Option<PathBuf>,
    /// start:end:step, or a single order
    #[arg(long)]
    pub alpha: AlphaRange,
    /// sweep λ(α, n) instead of a variation
    #[arg(long, conflicts_with_all = ["density", "field"])]
    pub lambda: Option<u32>,
    /// skip the numerical variation
    #[arg(long)]
    pub no_oracle: bool,
    #[arg(long, default_value_t = 4096)]
    pub steps: usize,
}

/// Orders start, start + step, … ≤ end.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaRange {
    pub values: Vec<f64>,
}

impl FromStr for AlphaRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("malformed number `{t}` in order range"))
        };
        let (start, end, step) = match parts.as_slice() {
            [a] => {
                let a = num(a)?;
                (a, a, 1.0)
            }
            [a, b, c] => (num(a)?, num(b)?, num(c)?),
            _ => return Err("order range must be `start:end:step` or a single value".into()),
        };
        for v in [start, end] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("order {v} outside [0, 1]"));
            }
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(format!("step must be positive, got {step}"));
        }
        if start > end {
            return Err(format!("empty order range {start}:{end}"));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize + 1;
        let values = (0..count)
            .map(|k| {
                let a = start + k as f64 * step;
                ((a * 1e12).round() / 1e12).min(end)
            })
            .collect();
        Ok(Self { values })
    }
}

fn order(alpha: f64) -> Result<Order> {
    Order::unit(alpha)
}

fn rel_dev(value: f64, reference: f64) -> f64 {
    if value == reference {
        0.0
    } else {
        (value - reference).abs() / reference.abs()
    }
}

fn load_fields(path: &std::path::Path) -> Result<FieldSet> {
    read_fields_file(path)
}

fn density(expr: &str) -> Result<Density> {
    expr.parse()
}

/// Parse `args` and run; output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Specfun { function } => run_specfun(function, out),
        Command::Deriv(a) => run_deriv(a, out),
        Command::Variation(a) => run_variation(a, out),
        Command::EulerLagrange(a) => run_euler_lagrange(a, out),
        Command::Verify(a) => run_verify(a, out),
        Command::Sweep(a) => run_sweep(a, out),
    }
}

fn run_specfun(function: &SpecfunCommand, out: &mut dyn Write) -> Result<i32> {
    let value = match *function {
        SpecfunCommand::Gamma { x } => gamma(x)?,
        SpecfunCommand::Pochhammer { z, k } => pochhammer(z, k),
        SpecfunCommand::Hyp2f1 {
            a,
            b,
            c,
            z,
            derivative,
        } => {
            let args = HypergeometricArgs::new(a, b, c, z)?;
            if derivative == 0 {
                gauss_2f1(&args)?
            } else {
                gauss_2f1_derivative(derivative, &args)?
            }
        }
    };
    writeln!(out, "{}", format_number(value))?;
    Ok(EXIT_OK)
}

fn run_deriv(a: &DerivArgs, out: &mut dyn Write) -> Result<i32> {
    let ord = order(a.alpha)?;
    let (value, oracle) = match a.rule {
        Rule::Power | Rule::Caputo => {
            let term = PowerTerm::new(a.coeff, a.exponent, a.base)?;
            let v = if a.rule == Rule::Power {
                rl_power_rule(ord, &term, a.x)?
            } else {
                caputo_power_rule(ord, &term, a.x)?
            };
            let o = if a.oracle {
                let (c, k) = (a.coeff, a.exponent);
                // Caputo for α ≤ 1 is the Riemann-Liouville derivative of φ - φ(a)
                let at_base = if a.rule == Rule::Caputo && k == 0.0 {
                    c
                } else {
                    0.0
                };
                Some(rl_numeric(
                    |t| c * t.powf(k) - at_base,
                    ord,
                    a.base,
                    a.x,
                    a.steps,
                )?)
            } else {
                None
            };
            (v, o)
        }
        Rule::Constant => {
            let v = rl_constant(ord, a.coeff, a.x - a.base)?;
            let c = a.coeff;
            let o = if a.oracle {
                Some(rl_numeric(|_| c, ord, a.base, a.x, a.steps)?)
            } else {
                None
            };
            (v, o)
        }
        Rule::Shifted => {
            let v = a.coeff * rl_shifted_power(ord, a.exponent, a.base, a.x)?;
            let (c, b) = (a.coeff, a.exponent);
            let o = if a.oracle {
                Some(rl_numeric(|t| c * t.powf(b), ord, a.base, a.x, a.steps)?)
            } else {
                None
            };
            (v, o)
        }
        Rule::Product => {
            let v = a.coeff * rl_shifted_product(ord, a.exponent, a.gamma_exp, a.base, a.x)?;
            let (c, b, g, e0) = (a.coeff, a.exponent, a.gamma_exp, a.base);
            let o = if a.oracle {
                Some(rl_numeric(
                    |t| c * t.powf(b) * (t + e0).powf(g),
                    ord,
                    a.base,
                    a.x,
                    a.steps,
                )?)
            } else {
                None
            };
            (v, o)
        }
    };
    let rule = a.rule.to_possible_value().expect("named rule");
    match a.format {
        Format::Json => {
            let mut doc = json!({ "rule": rule.get_name(), "alpha": a.alpha, "value": value });
            if let Some(o) = oracle {
                doc["oracle"] = json!(o);
                doc["rel_dev"] = json!(rel_dev(o, value));
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
        Format::Csv => match oracle {
            Some(o) => {
                writeln!(out, "rule,alpha,value,oracle,rel_dev")?;
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    rule.get_name(),
                    format_number(a.alpha),
                    format_number(value),
                    format_number(o),
                    format_number(rel_dev(o, value))
                )?;
            }
            None => {
                writeln!(out, "rule,alpha,value")?;
                writeln!(
                    out,
                    "{},{},{}",
                    rule.get_name(),
                    format_number(a.alpha),
                    format_number(value)
                )?;
            }
        },
    }
    Ok(EXIT_OK)
}

fn variation_json(r: &VariationResult) -> serde_json::Value {
    serde_json::from_str(&r.to_json()).expect("own output parses")
}

fn run_variation(a: &VariationArgs, out: &mut dyn Write) -> Result<i32> {
    let ord = order(a.alpha)?;
    if a.tolerance.is_nan() || a.tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            a.tolerance
        )));
    }
    let f = density(&a.density)?;
    let fields = load_fields(&a.field)?;
    let h = fields.require_h()?;
    let closed = closed_form_variation(&f, &fields.u, h, ord)?;
    let oracle = if a.oracle {
        Some(frac_variation_numeric(&f, &fields.u, h, ord, a.steps)?)
    } else {
        None
    };
    let dev = oracle.as_ref().map(|o| rel_dev(o.value, closed.value));
    match a.format {
        Format::Json => {
            let mut doc = json!({ "density": f.to_string(), "result": variation_json(&closed) });
            if let (Some(o), Some(d)) = (&oracle, dev) {
                doc["oracle"] = variation_json(o);
                doc["rel_dev"] = json!(d);
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
        Format::Csv => {
            let grid = closed.integrand.grid();
            match &oracle {
                Some(o) => {
                    writeln!(out, "x,integrand,oracle_integrand")?;
                    for i in 0..grid.len() {
                        writeln!(
                            out,
                            "{},{},{}",
                            format_number(grid.point(i)),
                            format_number(closed.integrand.values()[i]),
                            format_number(o.integrand.values()[i])
                        )?;
                    }
                }
                None => closed.write_csv(&mut *out)?,
            }
        }
    }
    match dev {
        Some(d) if a.check && (d.is_nan() || d > a.tolerance) => Ok(EXIT_CHECK),
        _ => Ok(EXIT_OK),
    }
}

fn run_euler_lagrange(a: &EulerLagrangeArgs, out: &mut dyn Write) -> Result<i32> {
    let ord = order(a.alpha)?;
    let f = density(&a.density)?;
    let fields = load_fields(&a.field)?;
    let conv = match a.convention {
        ConventionArg::Caputo => Convention::Caputo,
        ConventionArg::Rl => Convention::RiemannLiouville,
    };
    let residual = fele_residual_with(&f, &fields.u, ord, conv)?;
    let multiplier = if a.multiplier {
        Some(lagrange_multiplier(&f, &fields.u, ord)?)
    } else {
        None
    };
    let grid = fields.grid();
    match a.format {
        Format::Json => {
            let mut doc = json!({
                "density": f.to_string(),
                "alpha": a.alpha,
                "residual": residual.values.values(),
            });
            if let Some(m) = &multiplier {
                doc["multiplier"] = json!(m.values());
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
        Format::Csv => {
            writeln!(
                out,
                "{}",
                if multiplier.is_some() {
                    "x,residual,multiplier"
                } else {
                    "x,residual"
                }
            )?;
            for i in 0..grid.len() {
                write!(
                    out,
                    "{},{}",
                    format_number(grid.point(i)),
                    format_number(residual.values.values()[i])
                )?;
                if let Some(m) = &multiplier {
                    write!(out, ",{}", format_number(m.values()[i]))?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn run_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    if a.list {
        for name in verify::check_names() {
            writeln!(out, "{name}")?;
        }
        return Ok(EXIT_OK);
    }
    if let Some(t) = a.tolerance {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {t}"
            )));
        }
    }
    let checks = verify::run_checks(&a.only, a.tolerance);
    if checks.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no check matches --only {}",
            a.only.join(",")
        )));
    }
    match a.format {
        TableFormat::Table => write!(out, "{}", verify::to_table(&checks))?,
        TableFormat::Json => write!(out, "{}", verify::to_json(&checks))?,
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "name",
                "anchor",
                "expected",
                "computed",
                "deviation",
                "pass",
            ])?;
            for c in &checks {
                w.write_record([
                    c.name.clone(),
                    c.anchor.clone(),
                    format_number(c.expected),
                    format_number(c.computed),
                    format_number(c.deviation),
                    c.pass.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(if checks.iter().all(|c| c.pass) {
        EXIT_OK
    } else {
        EXIT_CHECK
    })
}

fn run_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(n) = a.lambda {
        writeln!(out, "alpha,lambda")?;
        for &alpha in &a.alpha.values {
            let l = prop1_lambda(order(alpha)?, n)?;
            writeln!(out, "{},{}", format_number(alpha), format_number(l))?;
        }
        return Ok(EXIT_OK);
    }
    let f = density(a.density.as_deref().expect("required by clap"))?;
    let fields = load_fields(a.field.as_deref().expect("required by clap"))?;
    let h = fields.require_h()?;
    let rows = a
        .alpha
        .values
        .par_iter()
        .map(|&alpha| -> Result<(f64, f64, Option<f64>)> {
            let ord = order(alpha)?;
            let closed = closed_form_variation(&f, &fields.u, h, ord)?.value;
            let oracle = if a.no_oracle {
                None
            } else {
                Some(frac_variation_numeric(&f, &fields.u, h, ord, a.steps)?.value)
            };
            Ok((alpha, closed, oracle))
        })
        .collect::<Result<Vec<_>>>()?;
    writeln!(out, "alpha,value_closed,value_oracle,rel_dev")?;
    for (alpha, closed, oracle) in rows {
        match oracle {
            Some(o) => writeln!(
                out,
                "{},{},{},{}",
                format_number(alpha),
                format_number(closed),
                format_number(o),
                format_number(rel_dev(o, closed))
            )?,
            None => writeln!(out, "{},{},,", format_number(alpha), format_number(closed))?,
        }
    }
    Ok(EXIT_OK)
}
