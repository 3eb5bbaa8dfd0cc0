//! First-passage checks for the ν-walk: the direct DP for P_j(V = n)
//! (V = hitting time of −1) against Kemperman's identity
//! P_j(V = n) = ((j+1)/n) P_0(S_n = −j−1).
//!
//! Both routes are exact up to f64 rounding: since increments are ≥ −1, a
//! state s at step k can only reach −1 by step n if s ≤ n − k − 1, so states
//! above that are pruned with provably zero contribution, and no ν-support
//! truncation error enters. The reported truncation bound is therefore 0.

use crate::weights::WeightModel;

#[derive(Debug, Clone)]
pub struct KempermanTable {
    pub j_max: usize,
    pub n_max: usize,
    /// first_passage[j][n−1] = P_j(V = n) from the absorbing DP.
    pub first_passage: Vec<Vec<f64>>,
    /// identity[j][n−1] = ((j+1)/n) P_0(S_n = −j−1) from the free-walk DP.
    pub identity: Vec<Vec<f64>>,
    pub truncation_bound: f64,
    pub max_abs_discrepancy: f64,
}

/// ν(k) for k = −1..=n_max−1 is all a walk confined below n_max can use.
fn nu_table(model: &WeightModel, n_max: usize) -> Vec<f64> {
    let mm = model.mu_mass(n_max + 1);
    (0..=n_max).map(|i| mm.mass[i]).collect() // index i ↦ ν(i−1) = μ(i)
}

pub fn kemperman_check(model: &WeightModel, j_max: usize, n_max: usize) -> KempermanTable {
    assert!(n_max >= 1 && n_max <= 60, "exact DP is sized for n ≤ 60");
    assert!(j_max + 1 <= n_max, "P_j(V = n) = 0 for all n ≤ j");
    let nu = nu_table(model, n_max); // nu[i] = ν(i−1)

    // ---- absorbing DP: states 0..=n_max−1, absorption at −1 ----
    // alive[k][s] = P_j(S_k = s, V > k); P_j(V = n) = alive[n−1][0] ν(−1)
    let mut first_passage = vec![vec![0.0f64; n_max]; j_max + 1];
    for (j, row) in first_passage.iter_mut().enumerate() {
        let mut alive = vec![0.0f64; n_max];
        if j < n_max {
            alive[j] = 1.0;
        }
        for n in 1..=n_max {
            // hitting −1 at step n requires being at 0 with a −1 step
            row[n - 1] = alive[0] * nu[0];
            let mut next = vec![0.0f64; n_max];
            // prune: to reach −1 by n_max from s at step n, s ≤ n_max − n − 1
            let cap = n_max.saturating_sub(n + 1);
            for s in 0..n_max {
                let p = alive[s];
                if p == 0.0 {
                    continue;
                }
                // step to s' = s + k, k ≥ 0 (k = −1 handled via absorption)
                for (i, &mass) in nu.iter().enumerate().skip(1) {
                    let s2 = s + i - 1;
                    if s2 > cap {
                        break;
                    }
                    next[s2] += p * mass;
                }
                if s >= 1 {
                    next[s - 1] += p * nu[0];
                }
            }
            // the s−1 = −1 case above double-counts nothing: nu[0] from s = 0
            // is absorption, excluded because the s ≥ 1 guard skips it
            alive = next;
            // clear states above the cap (stale mass from the s−1 shift)
            for s in (cap + 1)..n_max {
                alive[s] = 0.0;
            }
        }
    }

    // ---- free-walk DP for P_0(S_n = x) ----
    // the walk stays in [−n, n_max − 1] once states that can no longer
    // descend to −1 by step n_max are pruned (value ≤ n_max − n − 1 at
    // step n); the lower range must NOT be clipped above −n_max, since the
    // walk may dip below a target and come back up
    let offset = n_max as i64; // state index = value + offset
    let width = 2 * n_max;
    let mut dist = vec![0.0f64; width];
    dist[offset as usize] = 1.0; // S_0 = 0
    let mut identity = vec![vec![0.0f64; n_max]; j_max + 1];
    for n in 1..=n_max {
        let value_cap = n_max as i64 - n as i64 - 1;
        let mut next = vec![0.0f64; width];
        for m in 0..width {
            let p = dist[m];
            if p == 0.0 {
                continue;
            }
            for (i, &mass) in nu.iter().enumerate() {
                let v = m as i64 + i as i64 - 1;
                if v < 0 || v - offset > value_cap {
                    if v - offset > value_cap {
                        break; // larger steps only go further over the cap
                    }
                    continue;
                }
                next[v as usize] += p * mass;
            }
        }
        dist = next;
        for j in 0..=j_max {
            // P_0(S_n = −j−1): state index offset − (j+1)
            let p = dist[(offset - (j as i64 + 1)) as usize];
            identity[j][n - 1] = (j as f64 + 1.0) / n as f64 * p;
        }
    }

    let mut max_abs = 0.0f64;
    for j in 0..=j_max {
        for n in 0..n_max {
            max_abs = max_abs.max((first_passage[j][n] - identity[j][n]).abs());
        }
    }

    KempermanTable {
        j_max,
        n_max,
        first_passage,
        identity,
        truncation_bound: 0.0,
        max_abs_discrepancy: max_abs,
    }
}

/// P_0(V = n) for n = 1..=n_max: the exact law of the white-vertex count of
/// an unconditioned mobile. Used as the oracle for conditioned-sampler
/// frequencies and the size-tail slope anchor.
pub fn tree_size_distribution(model: &WeightModel, n_max: usize) -> Vec<f64> {
    let nu = nu_table(model, n_max);
    let mut alive = vec![0.0f64; n_max];
    alive[0] = 1.0;
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        out.push(alive[0] * nu[0]);
        let cap = n_max.saturating_sub(n + 1);
        let mut next = vec![0.0f64; n_max];
        for s in 0..n_max {
            let p = alive[s];
            if p == 0.0 {
                continue;
            }
            for (i, &mass) in nu.iter().enumerate().skip(1) {
                let s2 = s + i - 1;
                if s2 > cap {
                    break;
                }
                next[s2] += p * mass;
            }
            if s >= 1 {
                next[s - 1] += p * nu[0];
            }
        }
        alive = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{calibrate, RawSequence};

    #[test]
    fn single_step_is_nu_minus_one() {
        let model = calibrate(&RawSequence::power(2.0)).unwrap();
        let table = kemperman_check(&model, 3, 12);
        let mm = model.mu_mass(4);
        // P_0(V = 1) = ν(−1) = μ(0)
        assert!((table.first_passage[0][0] - mm.mass[0]).abs() < 1e-15);
        assert!((table.identity[0][0] - mm.mass[0]).abs() < 1e-15);
    }

    #[test]
    fn two_step_identity_by_enumeration() {
        let model = calibrate(&RawSequence::power(2.0)).unwrap();
        let table = kemperman_check(&model, 3, 12);
        let mm = model.mu_mass(4);
        let nu_m1 = mm.mass[0];
        // j = 1, n = 2: the only path is two −1 steps
        let expect = nu_m1 * nu_m1;
        assert!((table.first_passage[1][1] - expect).abs() < 1e-15);
        assert!((table.identity[1][1] - expect).abs() < 1e-15);
        // j = 0, n = 2: step to +k then k+1 down-steps... only k = 0 works:
        // ν(0) then ν(−1)
        let expect02 = mm.mass[1] * nu_m1;
        assert!((table.first_passage[0][1] - expect02).abs() < 1e-14);
    }

    #[test]
    fn routes_agree_to_rounding() {
        let model = calibrate(&RawSequence::power(2.0)).unwrap();
        let table = kemperman_check(&model, 20, 40);
        assert_eq!(table.truncation_bound, 0.0);
        assert!(
            table.max_abs_discrepancy < 1e-10,
            "discrepancy {}",
            table.max_abs_discrepancy
        );
    }

    #[test]
    fn impossible_passages_are_zero() {
        let model = calibrate(&RawSequence::power(2.0)).unwrap();
        let table = kemperman_check(&model, 5, 20);
        // from j, hitting −1 needs at least j+1 steps
        for j in 0..=5usize {
            for n in 1..=j {
                assert_eq!(table.first_passage[j][n - 1], 0.0);
                assert!(table.identity[j][n - 1].abs() < 1e-18);
            }
        }
    }

    #[test]
    fn size_distribution_matches_first_passage_row() {
        let model = calibrate(&RawSequence::power(2.0)).unwrap();
        let table = kemperman_check(&model, 0, 30);
        let sizes = tree_size_distribution(&model, 30);
        for n in 1..=30usize {
            assert!((sizes[n - 1] - table.first_passage[0][n - 1]).abs() < 1e-15);
        }
        // probabilities sum below 1 with a heavy tail remaining
        let total: f64 = sizes.iter().sum();
        assert!(total < 1.0 && total > 0.9);
    }
}
