//! Numerical fractional derivatives used to check the closed forms.

use super::Order;
use crate::error::{Error, Result};
use crate::gridfield::Field;
use crate::specfun::recip_gamma;

/// Grünwald-Letnikov approximation of the Riemann-Liouville derivative at
/// `x_index`, with terminal at the left end of the grid:
/// Δx^(-α) Σ_{j=0..i} (-1)^j C(α, j) f(x_{i-j}).
pub fn gl_fractional_derivative(samples: &Field, order: Order, x_index: usize) -> Result<f64> {
    order.ensure_unit()?;
    let values = samples.values();
    if x_index == 0 || x_index >= values.len() {
        return Err(Error::InvalidArgument(format!(
            "Grünwald-Letnikov index {x_index} outside 1..{}",
            values.len()
        )));
    }
    let alpha = order.value();
    let mut weight = 1.0;
    let mut sum = values[x_index];
    for j in 1..=x_index {
        weight *= 1.0 - (alpha + 1.0) / j as f64;
        sum += weight * values[x_index - j];
    }
    Ok(sum * samples.grid().spacing().powf(-alpha))
}

const SCALE_SAMPLES: usize = 16;

/// Grading exponent of the quadrature mesh σ_j = (j/N)^GRADING near the terminal.
const GRADING: i32 = 4;

/// Riemann-Liouville derivative of a sampled function by product integration.
///
/// The fractional integral I(t) = ∫_{ε₀}^{t} φ(s)(t-s)^(-α) ds is rescaled to
/// the unit interval, so the mesh moves with t and I is a smooth function of
/// t. On each panel φ is interpolated linearly and the weakly singular kernel
/// is integrated exactly. The first panel uses a local power-law fit so that
/// integrable singularities of φ at the terminal are resolved. dI/dt is then
/// taken by Richardson-extrapolated central differences.
#[derive(Debug, Clone, Copy)]
pub struct RlOracle {
    /// Quadrature panels; also sets the differencing step (t - ε₀)/steps.
    pub steps: usize,
    /// Relative disagreement allowed between `steps` and `steps / 2`, measured
    /// against the larger of the result and max|φ|·(t - ε₀)^(-α).
    pub tolerance: f64,
}

impl Default for RlOracle {
    fn default() -> Self {
        Self {
            steps: 4096,
            tolerance: 1e-4,
        }
    }
}

impl RlOracle {
    pub fn new(steps: usize) -> Self {
        Self {
            steps,
            ..Self::default()
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// D^α φ at `eps` with terminal `eps0`. `phi` receives the offset `s - eps0`.
    ///
    /// α = 0 returns φ itself and α = 1 the ordinary derivative, so sweeps over
    /// [0, 1] can run through the same routine.
    pub fn derivative<F>(&self, phi: F, order: Order, eps0: f64, eps: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        order.ensure_unit()?;
        if eps <= eps0 {
            return Err(Error::Domain(format!(
                "oracle needs eps > eps0 ({eps} <= {eps0})"
            )));
        }
        if self.steps < 16 {
            return Err(Error::InvalidArgument(format!(
                "oracle needs at least 16 steps, got {}",
                self.steps
            )));
        }
        let span = eps - eps0;
        if order.is_zero() {
            return Ok(phi(span));
        }
        let fine = self.evaluate(&phi, order.value(), span, self.steps)?;
        let coarse = self.evaluate(&phi, order.value(), span, self.steps / 2)?;
        // a small result can come from cancellation, so also measure against max|φ|·span^(-α)
        let peak = (1..=SCALE_SAMPLES)
            .map(|j| phi(span * j as f64 / SCALE_SAMPLES as f64).abs())
            .fold(0.0, f64::max);
        let natural = peak * span.powf(-order.value());
        let scale = fine.abs().max(coarse.abs()).max(natural);
        if (fine - coarse).abs() > self.tolerance * scale {
            return Err(Error::NonConvergence(format!(
                "fractional derivative refinements disagree: {fine} vs {coarse}"
            )));
        }
        Ok(fine)
    }

    fn evaluate<F>(&self, phi: &F, alpha: f64, span: f64, panels: usize) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        let delta = span / panels as f64;
        let value = if alpha == 1.0 {
            richardson_central(|l| Ok(phi(l)), span, delta)?
        } else {
            let mesh = GradedMesh::new(panels, alpha);
            richardson_central(|l| mesh.fractional_integral(phi, l), span, delta)?
                * recip_gamma(1.0 - alpha)
        };
        if !value.is_finite() {
            return Err(Error::NonConvergence(format!(
                "non-finite fractional derivative over span {span}"
            )));
        }
        Ok(value)
    }
}

/// Shorthand for [`RlOracle::derivative`] with the default tolerance.
pub fn rl_numeric<F>(phi: F, order: Order, eps0: f64, eps: f64, steps: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    RlOracle::new(steps).derivative(phi, order, eps0, eps)
}

fn richardson_central<G>(g: G, x: f64, delta: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let d1 = (g(x + delta)? - g(x - delta)?) / (2.0 * delta);
    let half = 0.5 * delta;
    let d2 = (g(x + half)? - g(x - half)?) / (2.0 * half);
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Product-integration weights on σ_j = (j/N)^GRADING against (1-σ)^(-α).
struct GradedMesh {
    nodes: Vec<f64>,
    /// weight of φ(σ_j) for j ≥ 1 (node 0 is handled by the power-law panel)
    weights: Vec<f64>,
    alpha: f64,
}

impl GradedMesh {
    fn new(panels: usize, alpha: f64) -> Self {
        let n = panels as f64;
        let nodes: Vec<f64> = (0..=panels)
            .map(|j| {
                if j == panels {
                    1.0
                } else {
                    (j as f64 / n).powi(GRADING)
                }
            })
            .collect();
        let mut weights = vec![0.0; panels + 1];
        for j in 1..panels {
            let (left, right) = (nodes[j], nodes[j + 1]);
            let h = right - left;
            let w = 1.0 - left;
            let (m0, m1) = panel_moments(h / w, alpha);
            // ∫ (1-σ)^(-α) over the panel = h w^(-α) m0, first moment about `left` = h² w^(-α) m1
            let scale = h * w.powf(-alpha);
            weights[j] += scale * (m0 - m1);
            weights[j + 1] += scale * m1;
        }
        Self {
            nodes,
            weights,
            alpha,
        }
    }

    /// I(ℓ) = ℓ^(1-α) ∫_0^1 φ(ℓσ)(1-σ)^(-α) dσ
    fn fractional_integral<F>(&self, phi: &F, span: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        let s1 = self.nodes[1];
        let s2 = self.nodes[2];
        let f1 = phi(span * s1);
        let f2 = phi(span * s2);
        // first panel: φ ≈ f1 (σ/σ₁)^b, kernel ≈ 1
        let b = if f1 != 0.0 && f2 != 0.0 && f1.signum() == f2.signum() {
            (f2 / f1).ln() / (s2 / s1).ln()
        } else {
            0.0
        };
        if b <= -1.0 {
            return Err(Error::NonConvergence(format!(
                "integrand not integrable at the terminal (local exponent {b})"
            )));
        }
        let mut sum = f1 * s1 / (1.0 + b) * (1.0 - 0.5 * s1).powf(-self.alpha);
        sum += self.weights[1] * f1 + self.weights[2] * f2;
        for j in 3..self.nodes.len() {
            sum += self.weights[j] * phi(span * self.nodes[j]);
        }
        Ok(span.powf(1.0 - self.alpha) * sum)
    }
}

/// m0 = ∫_0^1 (1-rθ)^(-α) dθ and m1 = ∫_0^1 θ(1-rθ)^(-α) dθ for r in (0, 1].
fn panel_moments(r: f64, alpha: f64) -> (f64, f64) {
    if r < 0.125 {
        // (1-rθ)^(-α) = Σ (α)_k (rθ)^k / k!
        let mut coef = 1.0;
        let mut m0 = 0.0;
        let mut m1 = 0.0;
        let mut rk = 1.0;
        for k in 0..60 {
            let kf = k as f64;
            let t0 = coef * rk / (kf + 1.0);
            m0 += t0;
            m1 += coef * rk / (kf + 2.0);
            if t0.abs() < 1e-17 * m0.abs() {
                break;
            }
            coef *= (alpha + kf) / (kf + 1.0);
            rk *= r;
        }
        (m0, m1)
    } else {
        let q = 1.0 - r;
        let m0 = (1.0 - q.powf(1.0 - alpha)) / (r * (1.0 - alpha));
        let m1 = (m0 - (1.0 - q.powf(2.0 - alpha)) / (r * (2.0 - alpha))) / r;
        (m0, m1)
    }
}
