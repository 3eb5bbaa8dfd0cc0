//! Statistics used by the verification harness: Kolmogorov-Smirnov tests,
//! chi-square goodness of fit, exact 1-D Wasserstein distance, and small
//! regression helpers.

use statrs::function::gamma::gamma_ur;

/// Survival function of the Kolmogorov distribution,
/// Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} exp(−2 k² λ²).
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0f64;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Two-sample KS statistic sup |F_a − F_b|.
pub fn ks_two_sample_statistic(a: &[f64], b: &[f64]) -> f64 {
    let a = sorted(a);
    let b = sorted(b);
    let (n, m) = (a.len(), b.len());
    assert!(n > 0 && m > 0);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    d
}

/// Two-sample KS test with the asymptotic Kolmogorov p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let d = ks_two_sample_statistic(a, b);
    let n = a.len() as f64;
    let m = b.len() as f64;
    let ne = n * m / (n + m);
    (d, kolmogorov_sf(ne.sqrt() * d))
}

/// One-sample KS test against a CDF given as a closure.
pub fn ks_one_sample<F: Fn(f64) -> f64>(xs: &[f64], cdf: F) -> (f64, f64) {
    let xs = sorted(xs);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 / n - f).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    (d, kolmogorov_sf(n.sqrt() * d))
}

/// Chi-square goodness-of-fit p-value for observed counts against expected
/// counts (upper tail of the chi-square distribution with df degrees).
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> (f64, f64) {
    assert_eq!(observed.len(), expected.len());
    let mut chi2 = 0.0f64;
    for (&o, &e) in observed.iter().zip(expected) {
        assert!(e > 0.0);
        let d = o as f64 - e;
        chi2 += d * d / e;
    }
    let df = (observed.len() - 1) as f64;
    (chi2, gamma_ur(df / 2.0, chi2 / 2.0))
}

/// Exact 1-D Wasserstein-1 distance between empirical measures
/// (computed on the merged quantile function; sizes may differ).
pub fn wasserstein1(a: &[f64], b: &[f64]) -> f64 {
    let a = sorted(a);
    let b = sorted(b);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut prev = f64::NAN;
    let mut acc = 0.0f64;
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        if !prev.is_nan() && x > prev {
            let fa = i as f64 / n;
            let fb = j as f64 / m;
            acc += (fa - fb).abs() * (x - prev);
        }
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        prev = x;
    }
    acc
}

/// Ordinary least squares y = intercept + slope·x.
/// Returns (slope, intercept, standard error of the slope).
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    assert!(xs.len() >= 2, "regression needs at least two points");
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut sse = 0.0f64;
    for (x, y) in xs.iter().zip(ys) {
        let r = y - (intercept + slope * x);
        sse += r * r;
    }
    let se = if xs.len() > 2 {
        (sse / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (slope, intercept, se)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// (mean, standard error of the mean)
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, (var / n).sqrt())
}

pub fn median(xs: &[f64]) -> f64 {
    let v = sorted(xs);
    let n = v.len();
    assert!(n > 0);
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Standard normal CDF (used for stable-path marginal sanity checks).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn kolmogorov_sf_known_points() {
        // Q(0.8275) ≈ 0.5 (the Kolmogorov median), Q large → 0
        assert!((kolmogorov_sf(0.8276) - 0.5).abs() < 5e-4);
        assert!(kolmogorov_sf(2.5) < 1e-4);
        assert!((kolmogorov_sf(1e-9) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ks_uniform_samples_pass() {
        let mut rng = crate::rng::stream_rng(5, 0);
        let xs: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let (_, p) = ks_one_sample(&xs, |x| x.clamp(0.0, 1.0));
        assert!(p > 0.01, "p = {p}");
        let ys: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let (_, p2) = ks_two_sample(&xs, &ys);
        assert!(p2 > 0.01, "p2 = {p2}");
        // a shifted sample must be rejected
        let zs: Vec<f64> = xs.iter().map(|x| x + 0.08).collect();
        let (_, p3) = ks_two_sample(&xs, &zs);
        assert!(p3 < 1e-6, "p3 = {p3}");
    }

    #[test]
    fn chi_square_matches_reference_values() {
        // chi2 = df: p close to 0.44-0.48 for moderate df
        let observed: Vec<u64> = vec![10; 11];
        let expected: Vec<f64> = vec![10.0; 11];
        let (chi2, p) = chi_square_gof(&observed, &expected);
        assert_eq!(chi2, 0.0);
        assert!((p - 1.0).abs() < 1e-12);
        // hand value: chi2 = 3.84, df = 1 → p ≈ 0.05
        let (_, p2) = chi_square_gof(&[69, 31], &[50.0, 50.0]);
        let chi2 = (19.0f64 * 19.0) * 2.0 / 50.0;
        let _ = chi2;
        assert!(p2 < 0.01);
    }

    #[test]
    fn wasserstein_simple_cases() {
        assert_eq!(wasserstein1(&[0.0, 1.0], &[0.0, 1.0]), 0.0);
        // point masses at 0 and 1: distance 1
        assert!((wasserstein1(&[0.0], &[1.0]) - 1.0).abs() < 1e-15);
        // shift by c moves W1 by c
        let a = [0.0, 0.25, 0.5, 0.75];
        let b: Vec<f64> = a.iter().map(|x| x + 0.1).collect();
        assert!((wasserstein1(&a, &b) - 0.1).abs() < 1e-12);
        // equal-size distinct samples: mean absolute order-statistic gap
        let c = [0.0, 1.0, 2.0];
        let d = [0.5, 1.5, 2.5];
        assert!((wasserstein1(&c, &d) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ols_recovers_line() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 0.5 * x).collect();
        let (slope, intercept, se) = ols_slope(&xs, &ys);
        assert!((slope + 0.5).abs() < 1e-12);
        assert!((intercept - 3.0).abs() < 1e-12);
        assert!(se < 1e-12);
    }
}
