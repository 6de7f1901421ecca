//! Grid calculus and scalar solvers shared by synthesis and dynamics.

/// First derivative on a uniform grid: centered second-order stencil inside,
/// one-sided second-order stencils at both ends.
pub fn derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 3, "derivative needs at least 3 samples");
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    d
}

/// Second derivative on a uniform grid, second order everywhere.
pub fn second_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 4, "second derivative needs at least 4 samples");
    let h2 = h * h;
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    }
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    d
}

/// Values at the interval midpoints of a uniform grid by four-point Lagrange
/// interpolation (fourth order); the end intervals use one-sided stencils.
pub fn midpoints(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    match n {
        0 | 1 => Vec::new(),
        2 | 3 => f.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect(),
        _ => {
            let mut m = vec![0.0; n - 1];
            for i in 1..n - 2 {
                m[i] = (-f[i - 1] + 9.0 * f[i] + 9.0 * f[i + 1] - f[i + 2]) / 16.0;
            }
            m[0] = (5.0 * f[0] + 15.0 * f[1] - 5.0 * f[2] + f[3]) / 16.0;
            m[n - 2] = (5.0 * f[n - 1] + 15.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]) / 16.0;
            m
        }
    }
}

/// Cumulative trapezoidal integral of `f` over the abscissae `x`.
pub fn cumulative_trapezoid(x: &[f64], f: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(f.len());
    let mut acc = 0.0;
    out.push(acc);
    for i in 1..f.len() {
        acc += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
        out.push(acc);
    }
    out
}

/// Least-squares line through (x, y); returns (slope, intercept).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx) * (xi - mx);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Uniform grid of `n` points on [0, t_f].
pub fn uniform_grid(t_f: f64, n: usize) -> Vec<f64> {
    let h = t_f / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { t_f } else { i as f64 * h }).collect()
}

/// Root of `f` in the sign-changing bracket [a, b] by bisection interleaved
/// with secant (Illinois false-position) steps.
///
/// Stops when |f| ≤ `ftol` or the bracket is narrower than a few ulps.
/// Returns `None` if f(a) and f(b) do not differ in sign.
pub fn bisect_secant<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, ftol: f64) -> Option<f64> {
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    // which end was retained on the last step: -1 = a, +1 = b
    let mut side = 0i8;
    for iter in 0..400 {
        let width = (b - a).abs();
        if width <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
            break;
        }
        let mut x = if iter % 4 == 3 {
            0.5 * (a + b)
        } else {
            (a * fb - b * fa) / (fb - fa)
        };
        if !(x > a.min(b) && x < a.max(b)) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx.abs() <= ftol || fx == 0.0 {
            return Some(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    Some(if fa.abs() < fb.abs() { a } else { b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn derivatives_exact_on_quadratics() {
        let h = 0.1;
        let f: Vec<f64> = (0..11).map(|i| { let x = i as f64 * h; 3.0 * x * x - x + 2.0 }).collect();
        for (i, d) in derivative(&f, h).iter().enumerate() {
            assert_relative_eq!(*d, 6.0 * i as f64 * h - 1.0, epsilon = 1e-12);
        }
        for d in second_derivative(&f, h) {
            assert_relative_eq!(d, 6.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn midpoints_exact_on_cubics() {
        let h = 0.25;
        let p = |x: f64| x * x * x - 2.0 * x + 1.0;
        let f: Vec<f64> = (0..9).map(|i| p(i as f64 * h)).collect();
        for (i, m) in midpoints(&f).iter().enumerate() {
            assert_relative_eq!(*m, p((i as f64 + 0.5) * h), epsilon = 1e-12);
        }
    }

    #[test]
    fn root_of_polynomial() {
        let r = bisect_secant(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert_relative_eq!(r, 2f64.sqrt(), max_relative = 1e-14);
        assert!(bisect_secant(|x| x * x + 1.0, -1.0, 1.0, 1e-15).is_none());
        let r = bisect_secant(|x: f64| (x - 3.0).exp_m1(), 0.0, 50.0, 0.0).unwrap();
        assert_relative_eq!(r, 3.0, max_relative = 1e-14);
    }

    #[test]
    fn linear_fit_exact() {
        let x = [0.0, 1.0, 2.0, 5.0];
        let y: Vec<f64> = x.iter().map(|x| -0.3 * x + 2.0).collect();
        let (m, c) = linear_fit(&x, &y);
        assert_relative_eq!(m, -0.3, epsilon = 1e-14);
        assert_relative_eq!(c, 2.0, epsilon = 1e-14);
    }
}
