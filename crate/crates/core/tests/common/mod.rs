//! Independent quadrature oracles shared by the integration tests.

use fracvar::specfun::gamma;

fn simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    [fa, fm, fb]: [f64; 3],
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, [fa, flm, fm], 0.5 * tol, depth - 1)
        + simpson(f, m, b, [fm, frm, fb], 0.5 * tol, depth - 1)
}

fn adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    simpson(&f, a, b, [f(a), f(m), f(b)], tol, 50)
}

/// Γ(c)/(Γ(b)Γ(c-b)) ∫₀¹ t^(b-1)(1-t)^(c-b-1)(1-zt)^(-a) dt, with the endpoint
/// singularities removed by t = s^(1/b) on [0, 1/2] and 1 - t = r^(1/(c-b)) on [1/2, 1].
pub fn euler_integral(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let d = c - b;
    let g = |t: f64| (1.0 - t).powf(d - 1.0) * (1.0 - z * t).powf(-a);
    let left = adaptive(|s| g(s.powf(1.0 / b)) / b, 0.0, 0.5f64.powf(b), 1e-13);
    let right = adaptive(
        |r| {
            let t = 1.0 - r.powf(1.0 / d);
            t.powf(b - 1.0) * (1.0 - z * t).powf(-a) / d
        },
        0.0,
        0.5f64.powf(d),
        1e-13,
    );
    gamma(c).unwrap() / (gamma(b).unwrap() * gamma(d).unwrap()) * (left + right)
}
