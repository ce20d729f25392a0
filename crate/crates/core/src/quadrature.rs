//! Fixed-grid quadrature and differentiation on uniformly spaced samples.

/// Composite Simpson rule; an odd interval count closes with Simpson's 3/8
/// rule on the last three intervals. Falls back to the trapezoid rule below
/// three intervals.
pub(crate) fn integrate_uniform(values: &[f64], h: f64) -> f64 {
    let n = values.len().saturating_sub(1);
    if n == 0 {
        0.0
    } else if n == 1 {
        0.5 * h * (values[0] + values[1])
    } else if n.is_multiple_of(2) {
        simpson(values, h)
    } else {
        let head = if n > 3 {
            simpson(&values[..n - 2], h)
        } else {
            0.0
        };
        let t = &values[n - 3..];
        head + 3.0 * h / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3])
    }
}

fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    debug_assert!(n.is_multiple_of(2) && n >= 2);
    let mut odd = 0.0;
    let mut even = 0.0;
    for (k, v) in values.iter().enumerate().take(n).skip(1) {
        if k % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (values[0] + values[n] + 4.0 * odd + 2.0 * even)
}

/// Fourth-order finite-difference derivative: central five-point stencil in
/// the interior, one-sided five-point stencils at the two ends.
pub(crate) fn derivative_uniform(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 5, "need at least five samples");
    let f = values;
    let mut out = vec![0.0; n];
    let fwd = |i: usize| {
        (-25.0 * f[i] + 48.0 * f[i + 1] - 36.0 * f[i + 2] + 16.0 * f[i + 3] - 3.0 * f[i + 4])
            / (12.0 * h)
    };
    let bwd = |i: usize| {
        (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] + 3.0 * f[i - 4])
            / (12.0 * h)
    };
    out[0] = fwd(0);
    out[n - 1] = bwd(n - 1);
    // Second point from each end: shifted four-point-ahead stencil.
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    out[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5])
        / (12.0 * h);
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    out
}

/// Returns the common spacing when `times` is uniform to a relative 1e-9.
pub(crate) fn uniform_spacing(times: &[f64]) -> Option<f64> {
    if times.len() < 2 {
        return None;
    }
    let h = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if h <= 0.0 {
        return None;
    }
    let uniform = times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.max(1.0));
    uniform.then_some(h)
}
