//! Discrete bridges: uniform samples from
//! E_p = { (x_1..x_p) ∈ {−1,0,1,...}^p : Σ x_i = 0 }, the label-increment law
//! around a black vertex. #E_p = N(p) = C(2p−1, p−1).
//!
//! Two interchangeable samplers: an exact sequential one (stars-and-bars
//! conditionals after the shift y_i = x_i + 1) and a rejection one (the
//! ν*-walk with ν*(k) = 2^{-k-2} run p steps and accepted on return to 0).

use rand::Rng;

use crate::rng::Rng64;

/// A bridge path Y_0 = 0, Y_1, ..., Y_p = 0 with increments ≥ −1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bridge {
    pub values: Vec<i64>,
}

impl Bridge {
    pub fn p(&self) -> usize {
        self.values.len() - 1
    }

    pub fn increments(&self) -> Vec<i64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn is_valid(&self) -> bool {
        self.values.first() == Some(&0)
            && self.values.last() == Some(&0)
            && self.values.windows(2).all(|w| w[1] - w[0] >= -1)
    }

    fn from_shifted(ys: &[u64]) -> Bridge {
        let mut values = Vec::with_capacity(ys.len() + 1);
        values.push(0i64);
        let mut acc = 0i64;
        for &y in ys {
            acc += y as i64 - 1;
            values.push(acc);
        }
        Bridge { values }
    }
}

pub trait BridgeSampler: Send + Sync {
    fn name(&self) -> &'static str;
    fn sample(&self, p: usize, rng: &mut Rng64) -> Bridge;
}

/// Exact sequential sampler. After the shift y_i = x_i + 1, a uniform element
/// of E_p is a uniform weak composition of p into p nonnegative parts; each
/// coordinate is drawn from its exact conditional law, whose masses are
/// small-integer ratios: P(y = 0) = (r−1)/(m+r−1) and
/// P(y = j+1)/P(y = j) = (m−j)/(m−j+r−2).
#[derive(Debug, Clone, Copy, Default)]
pub struct SequentialBridgeSampler;

impl BridgeSampler for SequentialBridgeSampler {
    fn name(&self) -> &'static str {
        "sequential"
    }

    fn sample(&self, p: usize, rng: &mut Rng64) -> Bridge {
        assert!(p >= 1);
        let mut ys = Vec::with_capacity(p);
        let mut m = p as u64; // remaining sum
        for r in (1..=p as u64).rev() {
            if r == 1 {
                ys.push(m);
                break;
            }
            if m == 0 {
                ys.push(0);
                continue;
            }
            let u: f64 = rng.random();
            let mut j = 0u64;
            let mut prob = (r - 1) as f64 / (m + r - 1) as f64;
            let mut cum = prob;
            while cum <= u && j < m {
                prob *= (m - j) as f64 / (m - j + r - 2) as f64;
                cum += prob;
                j += 1;
            }
            ys.push(j);
            m -= j;
        }
        Bridge::from_shifted(&ys)
    }
}

/// Rejection sampler: run the ν*-walk p steps and accept on Y_p = 0. Each
/// accepted path is exactly uniform on E_p because every path in E_p has
/// probability 2^{-2p} under the walk.
#[derive(Debug, Clone, Copy, Default)]
pub struct RejectionBridgeSampler;

/// One step of the ν* walk, ν*(k) = 2^{-k-2} for k ≥ −1.
#[inline]
pub fn nu_star_step(rng: &mut Rng64) -> i64 {
    loop {
        let u: u64 = rng.random();
        if u != 0 {
            // P(trailing_zeros = j) = 2^{-j-1}; shift to k = j − 1 ≥ −1
            return u.trailing_zeros() as i64 - 1;
        }
    }
}

impl BridgeSampler for RejectionBridgeSampler {
    fn name(&self) -> &'static str {
        "rejection"
    }

    fn sample(&self, p: usize, rng: &mut Rng64) -> Bridge {
        assert!(p >= 1);
        let mut values = Vec::with_capacity(p + 1);
        loop {
            values.clear();
            values.push(0i64);
            let mut acc = 0i64;
            for _ in 0..p {
                acc += nu_star_step(rng);
                values.push(acc);
            }
            if acc == 0 {
                return Bridge {
                    values: std::mem::take(&mut values),
                };
            }
        }
    }
}

/// Visits every increment vector of E_p in lexicographic order.
pub fn enumerate_bridges_with<F: FnMut(&[i64])>(p: usize, mut f: F) {
    let mut xs = vec![0i64; p];
    fn rec<F: FnMut(&[i64])>(xs: &mut Vec<i64>, idx: usize, sum: i64, p: usize, f: &mut F) {
        if idx == p {
            if sum == 0 {
                f(xs);
            }
            return;
        }
        let remaining = (p - idx - 1) as i64;
        // x must leave the rest able to come back to 0: sum + x ≤ remaining
        let hi = remaining - sum;
        let mut x = -1i64;
        while x <= hi {
            xs[idx] = x;
            rec(xs, idx + 1, sum + x, p, f);
            x += 1;
        }
    }
    rec(&mut xs, 0, 0, p, &mut f);
}

/// All increment vectors of E_p (use only for small p; #E_p = N(p)).
pub fn enumerate_bridges(p: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    enumerate_bridges_with(p, |xs| out.push(xs.to_vec()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::stats::chi_square_gof;
    use crate::weights::{binom_n, BinomN};
    use std::collections::HashMap;

    #[test]
    fn enumeration_count_matches_binomial() {
        for p in 1..=8usize {
            let n = enumerate_bridges(p).len() as u128;
            match binom_n(p as u64) {
                BinomN::Exact(v) => assert_eq!(n, v, "p={p}"),
                BinomN::Log(_) => unreachable!(),
            }
        }
    }

    #[test]
    fn p1_is_the_unique_trivial_bridge() {
        let mut rng = stream_rng(1, 0);
        for sampler in [
            &SequentialBridgeSampler as &dyn BridgeSampler,
            &RejectionBridgeSampler,
        ] {
            let b = sampler.sample(1, &mut rng);
            assert_eq!(b.values, vec![0, 0]);
        }
        assert_eq!(enumerate_bridges(1), vec![vec![0]]);
    }

    #[test]
    fn p2_has_three_bridges() {
        let e = enumerate_bridges(2);
        assert_eq!(e, vec![vec![-1, 1], vec![0, 0], vec![1, -1]]);
    }

    #[test]
    fn samplers_produce_valid_bridges() {
        let mut rng = stream_rng(2, 0);
        for p in [1usize, 2, 3, 7, 40, 200] {
            for sampler in [
                &SequentialBridgeSampler as &dyn BridgeSampler,
                &RejectionBridgeSampler,
            ] {
                let b = sampler.sample(p, &mut rng);
                assert_eq!(b.p(), p);
                assert!(b.is_valid(), "{} p={p}", sampler.name());
            }
        }
    }

    /// Chi-square uniformity of both samplers against the enumeration of E_4
    /// (the heavy p = 6 / 10^6-draw version runs in the acceptance suite).
    #[test]
    fn samplers_uniform_on_e4() {
        let e = enumerate_bridges(4);
        let idx: HashMap<Vec<i64>, usize> =
            e.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        for (stream, sampler) in [
            (0u64, &SequentialBridgeSampler as &dyn BridgeSampler),
            (1, &RejectionBridgeSampler),
        ] {
            let mut rng = stream_rng(9, stream);
            let draws = 70_000usize;
            let mut counts = vec![0u64; e.len()];
            for _ in 0..draws {
                let b = sampler.sample(4, &mut rng);
                counts[idx[&b.increments()]] += 1;
            }
            let expected = vec![draws as f64 / e.len() as f64; e.len()];
            let (_, p) = chi_square_gof(&counts, &expected);
            assert!(p > 0.001, "{}: p = {p}", sampler.name());
        }
    }

    #[test]
    fn nu_star_step_law() {
        let mut rng = stream_rng(3, 0);
        let n = 400_000;
        let mut counts = [0u64; 5];
        for _ in 0..n {
            let k = nu_star_step(&mut rng);
            if (-1..=3).contains(&k) {
                counts[(k + 1) as usize] += 1;
            }
        }
        for (i, &c) in counts.iter().enumerate() {
            let p = 2f64.powi(-(i as i32) - 1); // ν*(i−1) = 2^{-i-1}
            let emp = c as f64 / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!((emp - p).abs() < 5.0 * se, "i={i}");
        }
    }
}
