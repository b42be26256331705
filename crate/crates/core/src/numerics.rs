//! Compensated summation, stable log-space primitives and small fitting /
//! root-finding helpers used throughout the crate.
//!
//! All partition-function work happens in log space; the two functions that
//! matter most are [`log_sum_exp`] (max-shifted, compensated) and
//! [`log1p_exp`] (the stable branch of `ln(1 + e^x)`).

/// Neumaier-compensated accumulator.
///
/// Order-independent enough for our purposes: replica aggregation always
/// feeds it in a fixed (replica-indexed) order, so results are bit-stable
/// across thread counts.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of a slice.
pub fn sum(xs: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Max-shifted log-sum-exp of a slice: `ln Σ e^{x_i}`.
///
/// Two passes: find the maximum, then accumulate `e^{x - max}` with
/// compensation. Entries equal to `-∞` contribute nothing; an empty or
/// all-`-∞` input returns `-∞`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let mut max = f64::NEG_INFINITY;
    for &x in xs {
        if x > max {
            max = x;
        }
    }
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = CompensatedSum::new();
    for &x in xs {
        if x > f64::NEG_INFINITY {
            acc.add((x - max).exp());
        }
    }
    max + acc.value().ln()
}

/// Stable `ln(1 + e^x)`.
#[inline]
pub fn log1p_exp(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Stable `ln((1 + e^x) / 2)`, the sign-integrated excursion log-weight.
#[inline]
pub fn log_half_one_plus_exp(x: f64) -> f64 {
    log1p_exp(x) - std::f64::consts::LN_2
}

/// Mean and standard error of the mean (compensated, fixed order).
///
/// Returns `(mean, stderr)`; `stderr` is the sample standard deviation over
/// `sqrt(n)`, zero when fewer than two values are given.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = sum(values) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let mut acc = CompensatedSum::new();
    for &v in values {
        let d = v - mean;
        acc.add(d * d);
    }
    let var = acc.value() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Weighted least-squares fit of `y = intercept + slope * x`.
///
/// Returns `(intercept, slope, intercept_stderr)` where the standard error is
/// inflated by the reduced chi-square whenever the fit is worse than its
/// error bars claim. With all-equal (or zero) weights this degrades to
/// ordinary least squares with a residual-based error estimate.
pub fn weighted_line_fit(xs: &[f64], ys: &[f64], sigmas: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert_eq!(xs.len(), sigmas.len());
    let n = xs.len();
    assert!(n >= 2, "need at least two points for a line fit");

    // Floor the weights so exact (sigma = 0) inputs stay usable.
    let max_sigma = sigmas.iter().cloned().fold(0.0f64, f64::max);
    let floor = if max_sigma > 0.0 {
        max_sigma * 1e-9
    } else {
        1.0
    };
    let w: Vec<f64> = sigmas
        .iter()
        .map(|&s| {
            let s = s.max(floor);
            1.0 / (s * s)
        })
        .collect();

    let sw = sum(&w);
    let swx = sum(&w.iter().zip(xs).map(|(&w, &x)| w * x).collect::<Vec<_>>());
    let swy = sum(&w.iter().zip(ys).map(|(&w, &y)| w * y).collect::<Vec<_>>());
    let swxx = sum(&w.iter().zip(xs).map(|(&w, &x)| w * x * x).collect::<Vec<_>>());
    let swxy = sum(
        &w.iter()
            .zip(xs.iter().zip(ys))
            .map(|(&w, (&x, &y))| w * x * y)
            .collect::<Vec<_>>(),
    );

    let det = sw * swxx - swx * swx;
    let intercept = (swxx * swy - swx * swxy) / det;
    let slope = (sw * swxy - swx * swy) / det;

    // Variance of the intercept from the normal equations.
    let var_intercept = swxx / det;

    // Reduced chi-square inflation.
    let mut chi2 = 0.0;
    for i in 0..n {
        let r = ys[i] - intercept - slope * xs[i];
        chi2 += w[i] * r * r;
    }
    let dof = (n as f64 - 2.0).max(1.0);
    // With supplied sigmas the errors are trusted unless the fit is worse
    // than they claim; without sigmas the residuals are the only scale.
    let inflation = if max_sigma > 0.0 {
        (chi2 / dof).max(1.0)
    } else {
        chi2 / dof
    };

    (intercept, slope, (var_intercept * inflation).sqrt())
}

/// Bisection for a continuous, strictly decreasing function.
///
/// Requires `f(lo) >= 0 >= f(hi)`. Stops once `|f(mid)| <= residual_tol` or
/// the interval is at floating-point resolution; returns `(root, residual)`.
pub fn bisect_decreasing<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    residual_tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    let mut mid = 0.5 * (lo + hi);
    let mut res = f(mid);
    for _ in 0..max_iter {
        if res.abs() <= residual_tol {
            break;
        }
        if res > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        let next = 0.5 * (lo + hi);
        if next == mid || next == lo || next == hi {
            break;
        }
        mid = next;
        res = f(mid);
    }
    (mid, res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp_matches_naive_small() {
        let xs = [0.5f64, 2.0, -1.0];
        let naive = xs.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&xs) - naive).abs() < 1e-14);
    }

    #[test]
    fn log_sum_exp_survives_large_inputs() {
        let xs = [1234.0, 1232.0];
        let expected = 1234.0 + (1.0f64 + (-2.0f64).exp()).ln();
        assert!((log_sum_exp(&xs) - expected).abs() < 1e-12);
        assert!(log_sum_exp(&[]).is_infinite());
    }

    #[test]
    fn log1p_exp_branches_agree_at_zero() {
        assert!((log1p_exp(0.0) - std::f64::consts::LN_2).abs() < 1e-16);
        // Deep negative branch underflows gracefully.
        assert!(log1p_exp(-800.0) >= 0.0);
        // Large positive branch is ~x.
        assert!((log1p_exp(60.0) - 60.0).abs() < 1e-12);
    }

    #[test]
    fn line_fit_recovers_exact_model() {
        // y = 0.05 + 1.0 * x, x = 1/N over three decades
        let xs = [1e-3, 1e-4, 1e-5];
        let ys: Vec<f64> = xs.iter().map(|x| 0.05 + x).collect();
        let sig = [0.0, 0.0, 0.0];
        let (b, a, _err) = weighted_line_fit(&xs, &ys, &sig);
        assert!((b - 0.05).abs() < 1e-12);
        assert!((a - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bisection_finds_decreasing_root() {
        let (x, res) = bisect_decreasing(|x| 1.0 - x * x, 0.0, 5.0, 1e-13, 200);
        assert!((x - 1.0).abs() < 1e-12);
        assert!(res.abs() <= 1e-13);
    }
}
