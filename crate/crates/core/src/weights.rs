//! Calibration of an admissible, critical weight sequence from a raw
//! heavy-tailed sequence, and the offspring laws it induces.
//!
//! Starting from q°_k ~ k^{-a} with a in (3/2, 5/2), the calibrated sequence
//! is q_k = c (β/4)^{k-1} q°_k with
//!
//!   c = 4 / (4 f°(1/4) + f°'(1/4)),   β = f°'(1/4) / (4 f°(1/4) + f°'(1/4)),
//!
//! which makes f_q tangent to x ↦ 1 − 1/x at Z_q = 1/β. The generating
//! function f_q(x) = Σ N(k) q_k x^{k-1}, N(k) = C(2k−1, k−1), is evaluated
//! with a certified truncation: the terms decay like k^{-a∓1/2} at the radius,
//! so a partial sum alone cannot reach 1e-9 there; an asymptotic tail built
//! from the central-binomial expansion and Euler-Maclaurin zeta tails is
//! added, with an explicit error bound.

use std::sync::{Arc, RwLock};

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::rng::Rng64;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Terms summed directly before switching to the asymptotic tail.
const CALIBRATION_TERMS: usize = 20_000;
/// Independent (larger) truncation used when verifying the invariants, so the
/// reported residuals measure real evaluator error instead of reproducing the
/// calibration arithmetic identically.
const CHECK_TERMS: usize = 45_000;

/// Asymptotic expansion of C(2k,k) 4^{-k} √(πk) in powers of 1/k.
const BINOM_EXPANSION: [f64; 5] = [
    1.0,
    -1.0 / 8.0,
    1.0 / 128.0,
    5.0 / 1024.0,
    -21.0 / 32768.0,
];
/// Magnitude of the first omitted expansion coefficient (399/262144).
const BINOM_EXPANSION_NEXT: f64 = 399.0 / 262144.0;

#[derive(Debug, Error)]
pub enum WeightsError {
    #[error("exponent a = {0} outside (3/2, 5/2)")]
    ExponentOutOfRange(f64),
    #[error("raw weight q°_{k} = {value} must be positive")]
    NonPositiveRawWeight { k: u64, value: f64 },
    #[error("x = {x} beyond radius of convergence {radius}")]
    BeyondRadius { x: f64, radius: f64 },
    #[error("series tolerance not reached: certified bound {bound:e} > tol {tol:e}")]
    SeriesTolerance { bound: f64, tol: f64 },
    #[error("{name} residual {residual:e} exceeds tolerance {tol:e}")]
    InvariantViolated {
        name: &'static str,
        residual: f64,
        tol: f64,
    },
    #[error("raw rule head ({head} entries) exceeds direct summation range")]
    HeadTooLong { head: usize },
    #[error("unknown raw rule {0:?}")]
    UnknownRule(String),
}

/// Rule producing the raw sequence q°_k. All variants satisfy
/// q°_k = amplitude · k^{-a} for k beyond a finite head, which is what the
/// boundary tail estimate needs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RawRule {
    /// q°_k = k^{-a} (the default rule).
    Power,
    /// q°_k = amplitude · k^{-a}.
    ScaledPower { amplitude: f64 },
    /// Explicit overrides for k = 1..=head.len(), k^{-a} beyond.
    PatchedHead { head: Vec<f64> },
}

impl RawRule {
    pub fn value(&self, a: f64, k: u64) -> f64 {
        match self {
            RawRule::Power => (k as f64).powf(-a),
            RawRule::ScaledPower { amplitude } => amplitude * (k as f64).powf(-a),
            RawRule::PatchedHead { head } => {
                if (k as usize) <= head.len() {
                    head[k as usize - 1]
                } else {
                    (k as f64).powf(-a)
                }
            }
        }
    }

    fn tail_amplitude(&self) -> f64 {
        match self {
            RawRule::Power | RawRule::PatchedHead { .. } => 1.0,
            RawRule::ScaledPower { amplitude } => *amplitude,
        }
    }

    fn head_len(&self) -> usize {
        match self {
            RawRule::PatchedHead { head } => head.len(),
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawSequence {
    pub a: f64,
    pub rule: RawRule,
    pub truncation_tol: f64,
}

impl RawSequence {
    pub fn power(a: f64) -> Self {
        RawSequence {
            a,
            rule: RawRule::Power,
            truncation_tol: DEFAULT_TOL,
        }
    }

    pub fn validate(&self) -> Result<(), WeightsError> {
        if !(self.a > 1.5 && self.a < 2.5) {
            return Err(WeightsError::ExponentOutOfRange(self.a));
        }
        let check_up_to = self.rule.head_len().max(8) as u64;
        for k in 1..=check_up_to {
            let v = self.rule.value(self.a, k);
            if !(v > 0.0) {
                return Err(WeightsError::NonPositiveRawWeight { k, value: v });
            }
        }
        Ok(())
    }
}

/// C(2k−1, k−1), exact as long as checked u128 arithmetic holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinomN {
    Exact(u128),
    /// Natural log of the value, for k beyond the exactness limit.
    Log(f64),
}

impl BinomN {
    pub fn ln(&self) -> f64 {
        match self {
            BinomN::Exact(v) => (*v as f64).ln(),
            BinomN::Log(l) => *l,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            BinomN::Exact(v) => *v as f64,
            BinomN::Log(l) => l.exp(),
        }
    }
}

/// Every k up to this is guaranteed exact (verified in tests).
pub const BINOM_EXACT_LIMIT: u64 = 60;

pub fn binom_n(k: u64) -> BinomN {
    assert!(k >= 1, "binom_n requires k >= 1");
    // C(2k-1, k-1) via the recurrence N(k+1) = N(k) * 2(2k+1)/(k+1),
    // kept exact with checked ops; on overflow switch to the log domain.
    let mut value: u128 = 1;
    let mut j: u64 = 1;
    while j < k {
        match value
            .checked_mul(2 * (2 * j as u128 + 1))
            .map(|v| v / (j as u128 + 1))
        {
            Some(v) => value = v,
            None => {
                let kf = k as f64;
                return BinomN::Log(ln_gamma(2.0 * kf) - ln_gamma(kf) - ln_gamma(kf + 1.0));
            }
        }
        j += 1;
    }
    BinomN::Exact(value)
}

/// A certified series evaluation: |value − truth| ≤ error_bound.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: f64,
    pub error_bound: f64,
    pub terms_used: usize,
}

/// Σ_{k>n} k^{-s}, Euler-Maclaurin with three correction terms.
fn zeta_tail(s: f64, n: f64) -> f64 {
    n.powf(1.0 - s) / (s - 1.0) - 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0
}

fn zeta_tail_error(s: f64, n: f64) -> f64 {
    (s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0)).abs() * n.powf(-s - 5.0) / 30240.0
}

/// Evaluates f°(ρ/4) (deriv = false) or f°'(ρ/4) (deriv = true) where ρ = 4y
/// is the radius-relative coordinate, ρ ∈ [0, 1]. The boundary ρ = 1 gets the
/// asymptotic tail added; interior points get a certified geometric bound.
fn raw_series(
    a: f64,
    rule: &RawRule,
    rho: f64,
    deriv: bool,
    max_terms: usize,
    tol: f64,
) -> Result<SeriesValue, WeightsError> {
    if rho > 1.0 + 1e-12 {
        return Err(WeightsError::BeyondRadius {
            x: rho / 4.0,
            radius: 0.25,
        });
    }
    if rule.head_len() >= max_terms {
        return Err(WeightsError::HeadTooLong {
            head: rule.head_len(),
        });
    }
    let rho = rho.min(1.0);
    let boundary = rho == 1.0;

    // b(k) = N(k) 4^{1-k}; b(1) = 1, b(k+1) = b(k) (2k+1) / (2(k+1)).
    let mut b = 1.0f64;
    let mut pw = 1.0f64; // ρ^{k-1}
    let mut pw_d = 1.0f64; // ρ^{k-2}, meaningful from k = 2 on
    let mut sum = 0.0f64;
    let mut comp = 0.0f64; // Kahan compensation
    let mut last_term = 0.0f64;
    let mut terms = 0usize;
    for k in 1..=max_terms {
        let kf = k as f64;
        let q = rule.value(a, k as u64);
        let term = if deriv {
            // 4 (k-1) b(k) ρ^{k-2} q°_k ; zero at k = 1.
            if k == 1 {
                0.0
            } else {
                4.0 * (kf - 1.0) * b * pw_d * q
            }
        } else {
            b * pw * q
        };
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        last_term = term;
        terms = k;

        if !boundary && k > rule.head_len() + 2 && rho > 0.0 {
            // ratio of consecutive terms is at most ρ (1 + 3/k) for the power
            // tail; once that is < 1 the geometric bound applies.
            let ratio = rho * (1.0 + 3.0 / kf);
            if ratio < 1.0 {
                let bound = term.abs() * ratio / (1.0 - ratio);
                if bound <= tol * sum.abs().max(1e-300) {
                    return Ok(SeriesValue {
                        value: sum,
                        error_bound: bound + 1e-16 * sum.abs(),
                        terms_used: k,
                    });
                }
            }
        }
        if rho == 0.0 && k >= 2 {
            // only k = 1 (f) or k = 2 (f') survives at the origin
            break;
        }
        b *= (2.0 * kf + 1.0) / (2.0 * (kf + 1.0));
        pw *= rho;
        if k >= 2 {
            pw_d *= rho;
        }
    }

    if boundary {
        let n = terms as f64;
        let amp = rule.tail_amplitude();
        let c = 2.0 / std::f64::consts::PI.sqrt();
        let mut tail = 0.0f64;
        let mut tail_err = 0.0f64;
        for (j, coef) in BINOM_EXPANSION.iter().enumerate() {
            let jf = j as f64;
            if deriv {
                // Σ_{k>n} 4 (k-1) b(k) k^{-a} = 4 C Σ_j c_j (Z(a-1/2+j) - Z(a+1/2+j))
                tail += 4.0 * c * amp * coef * (zeta_tail(a - 0.5 + jf, n) - zeta_tail(a + 0.5 + jf, n));
                tail_err += 4.0 * c * amp * (zeta_tail_error(a - 0.5 + jf, n) + zeta_tail_error(a + 0.5 + jf, n));
            } else {
                tail += c * amp * coef * zeta_tail(a + 0.5 + jf, n);
                tail_err += c * amp * zeta_tail_error(a + 0.5 + jf, n);
            }
        }
        // first omitted expansion coefficient
        tail_err += if deriv {
            4.0 * c * amp * BINOM_EXPANSION_NEXT * zeta_tail(a - 0.5 + 5.0, n)
        } else {
            c * amp * BINOM_EXPANSION_NEXT * zeta_tail(a + 0.5 + 5.0, n)
        };
        // accumulated rounding of the b-recurrence over `terms` steps
        tail_err += sum.abs() * terms as f64 * 0.5 * f64::EPSILON;
        let value = sum + tail;
        let bound = tail_err + 1e-16 * value.abs();
        if bound > tol * value.abs().max(1.0) {
            return Err(WeightsError::SeriesTolerance { bound, tol });
        }
        return Ok(SeriesValue {
            value,
            error_bound: bound,
            terms_used: terms,
        });
    }

    // interior point that never reached the requested tolerance: certify with
    // the cruder bound ρ^K · (boundary tail at K)
    let n = terms as f64;
    let amp = rule.tail_amplitude();
    let c = 2.0 / std::f64::consts::PI.sqrt();
    let crude = if deriv {
        4.0 * c * amp * zeta_tail(a - 0.5, n)
    } else {
        c * amp * zeta_tail(a + 0.5, n)
    };
    let bound = (rho.powf(n) * crude).abs() + last_term.abs();
    if bound > tol * sum.abs().max(1e-300) {
        return Err(WeightsError::SeriesTolerance { bound, tol });
    }
    Ok(SeriesValue {
        value: sum,
        error_bound: bound,
        terms_used: terms,
    })
}

/// f°(x) for the raw sequence; x must lie within the radius 1/4.
pub fn eval_raw_fq(raw: &RawSequence, x: f64) -> Result<SeriesValue, WeightsError> {
    raw.validate()?;
    if x < 0.0 || x > 0.25 * (1.0 + 1e-12) {
        return Err(WeightsError::BeyondRadius { x, radius: 0.25 });
    }
    raw_series(raw.a, &raw.rule, (4.0 * x).min(1.0), false, CALIBRATION_TERMS, raw.truncation_tol)
}

/// f°'(x) for the raw sequence.
pub fn eval_raw_fq_prime(raw: &RawSequence, x: f64) -> Result<SeriesValue, WeightsError> {
    raw.validate()?;
    if x < 0.0 || x > 0.25 * (1.0 + 1e-12) {
        return Err(WeightsError::BeyondRadius { x, radius: 0.25 });
    }
    raw_series(raw.a, &raw.rule, (4.0 * x).min(1.0), true, CALIBRATION_TERMS, raw.truncation_tol)
}

/// Exact (to floating precision) point masses of μ truncated at kmax, with
/// the remaining tail mass reported as `tail`.
#[derive(Debug, Clone)]
pub struct MuMass {
    pub mass: Vec<f64>,
    pub tail: f64,
}

impl MuMass {
    pub fn kmax(&self) -> usize {
        self.mass.len() - 1
    }

    /// ν(k) = μ(k+1) for k ≥ −1.
    pub fn nu(&self, k: i64) -> f64 {
        if k < -1 {
            return 0.0;
        }
        let idx = (k + 1) as usize;
        if idx < self.mass.len() {
            self.mass[idx]
        } else {
            0.0
        }
    }

    /// μ̄(k) = μ([k, ∞)). Includes the truncated tail, so it is exact for
    /// k ≤ kmax up to rounding.
    pub fn mu_bar(&self, k: usize) -> f64 {
        let head: f64 = self.mass[..k.min(self.mass.len())].iter().sum();
        (1.0 - head).max(0.0)
    }

    /// ν̄(k) = ν([k, ∞)) = μ̄(k+1) for k ≥ 0.
    pub fn nu_bar(&self, k: usize) -> f64 {
        self.mu_bar(k + 1)
    }
}

/// Calibrated weight model. Immutable after calibration; the lazy μ1
/// prefix-sum cache is internally synchronized, so the model can be shared
/// across concurrent samplers.
#[derive(Debug)]
pub struct WeightModel {
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub zq: f64,
    pub c0: f64,
    pub rule: RawRule,
    pub truncation_tol: f64,
    pub residual_admissibility: f64,
    pub residual_criticality: f64,
    mu1_cdf: RwLock<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub zq: f64,
    pub c0: f64,
    pub residual_admissibility: f64,
    pub residual_criticality: f64,
    pub tol: f64,
}

/// Configuration file schema: `{ "a": 2.0, "raw_rule": "power", "tol": 1e-9 }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightsConfig {
    pub a: f64,
    #[serde(default = "default_rule_name")]
    pub raw_rule: String,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_rule_name() -> String {
    "power".to_string()
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

impl WeightsConfig {
    pub fn raw_sequence(&self) -> Result<RawSequence, WeightsError> {
        let rule = match self.raw_rule.as_str() {
            "power" => RawRule::Power,
            other => return Err(WeightsError::UnknownRule(other.to_string())),
        };
        Ok(RawSequence {
            a: self.a,
            rule,
            truncation_tol: self.tol,
        })
    }
}

pub fn calibrate(raw: &RawSequence) -> Result<WeightModel, WeightsError> {
    raw.validate()?;
    let a = raw.a;
    let tol = raw.truncation_tol;
    let f0 = raw_series(a, &raw.rule, 1.0, false, CALIBRATION_TERMS, tol)?;
    let f1 = raw_series(a, &raw.rule, 1.0, true, CALIBRATION_TERMS, tol)?;
    let denom = 4.0 * f0.value + f1.value;
    let c = 4.0 / denom;
    let beta = f1.value / denom;
    let alpha = a - 0.5;
    let zq = 1.0 / beta;
    // c0 = (2c Γ(2−α) / (α(α−1)β√π))^{1/α}, via logs
    let ln_c0 = (std::f64::consts::LN_2 + c.ln() + ln_gamma(2.0 - alpha)
        - alpha.ln()
        - (alpha - 1.0).ln()
        - beta.ln()
        - 0.5 * std::f64::consts::PI.ln())
        / alpha;
    let c0 = ln_c0.exp();

    // verify admissibility (eq f_q(Z_q) = 1 − 1/Z_q) and criticality
    // (Z_q² f'_q(Z_q) = 1) with an independent truncation point
    let g0 = raw_series(a, &raw.rule, 1.0, false, CHECK_TERMS, tol)?;
    let g1 = raw_series(a, &raw.rule, 1.0, true, CHECK_TERMS, tol)?;
    let residual_admissibility = (c * g0.value - (1.0 - beta)).abs();
    let residual_criticality = (c * g1.value / (4.0 * beta) - 1.0).abs();
    if residual_admissibility > tol {
        return Err(WeightsError::InvariantViolated {
            name: "admissibility",
            residual: residual_admissibility,
            tol,
        });
    }
    if residual_criticality > tol {
        return Err(WeightsError::InvariantViolated {
            name: "criticality",
            residual: residual_criticality,
            tol,
        });
    }

    Ok(WeightModel {
        a,
        alpha,
        beta,
        c,
        zq,
        c0,
        rule: raw.rule.clone(),
        truncation_tol: tol,
        residual_admissibility,
        residual_criticality,
        mu1_cdf: RwLock::new(Vec::new()),
    })
}

impl WeightModel {
    pub fn report(&self) -> CalibrationReport {
        CalibrationReport {
            a: self.a,
            alpha: self.alpha,
            beta: self.beta,
            c: self.c,
            zq: self.zq,
            c0: self.c0,
            residual_admissibility: self.residual_admissibility,
            residual_criticality: self.residual_criticality,
            tol: self.truncation_tol,
        }
    }

    /// q_k = c (β/4)^{k−1} q°_k.
    pub fn qk(&self, k: u64) -> f64 {
        self.c * (self.beta / 4.0).powi(k as i32 - 1) * self.rule.value(self.a, k)
    }

    /// f_q(x), evaluated in the radius-relative coordinate ρ = x / Z_q so the
    /// boundary x = Z_q is hit exactly.
    pub fn eval_fq(&self, x: f64) -> Result<SeriesValue, WeightsError> {
        if x < 0.0 || x > self.zq * (1.0 + 1e-12) {
            return Err(WeightsError::BeyondRadius { x, radius: self.zq });
        }
        let rho = (x / self.zq).min(1.0);
        let mut v = raw_series(self.a, &self.rule, rho, false, CHECK_TERMS, self.truncation_tol)?;
        v.value *= self.c;
        v.error_bound *= self.c;
        Ok(v)
    }

    /// f'_q(x) = (cβ/4) f°'(βx/4).
    pub fn eval_fq_prime(&self, x: f64) -> Result<SeriesValue, WeightsError> {
        if x < 0.0 || x > self.zq * (1.0 + 1e-12) {
            return Err(WeightsError::BeyondRadius { x, radius: self.zq });
        }
        let rho = (x / self.zq).min(1.0);
        let mut v = raw_series(self.a, &self.rule, rho, true, CHECK_TERMS, self.truncation_tol)?;
        let scale = self.c * self.beta / 4.0;
        v.value *= scale;
        v.error_bound *= scale;
        Ok(v)
    }

    /// μ0(k) = β(1−β)^k: geometric offspring law of white vertices.
    pub fn mu0(&self, k: u64) -> f64 {
        self.beta * (1.0 - self.beta).powi(k as i32)
    }

    /// m0 = (1−β)/β.
    pub fn mu0_mean(&self) -> f64 {
        (1.0 - self.beta) / self.beta
    }

    /// m1 = β/(1−β).
    pub fn mu1_mean(&self) -> f64 {
        self.beta / (1.0 - self.beta)
    }

    /// μ1(k) = (c/(1−β)) · N(k+1) 4^{-k} · q°_{k+1}, evaluated pointwise.
    pub fn mu1(&self, k: u64) -> f64 {
        let kf = (k + 1) as f64;
        // b(k+1) = N(k+1) 4^{-k}
        let ln_b = ln_gamma(2.0 * kf) - ln_gamma(kf) - ln_gamma(kf + 1.0) - (kf - 1.0) * 4f64.ln();
        self.c / (1.0 - self.beta) * ln_b.exp() * self.rule.value(self.a, k + 1)
    }

    /// μ1(0..=kmax) in one pass via the b-recurrence (cheaper and slightly
    /// more accurate than pointwise log-gamma for batches).
    pub fn mu1_masses(&self, kmax: usize) -> Vec<f64> {
        let scale = self.c / (1.0 - self.beta);
        let mut out = Vec::with_capacity(kmax + 1);
        let mut b = 1.0f64; // b(j) at j = k+1, starting k=0 -> b(1) = 1
        for k in 0..=kmax {
            let j = (k + 1) as f64;
            out.push(scale * b * self.rule.value(self.a, k as u64 + 1));
            b *= (2.0 * j + 1.0) / (2.0 * (j + 1.0));
        }
        out
    }

    /// A = (α−1) c0^α / Γ(2−α), the constant with k^α μ̄(k) → A.
    pub fn mu_tail_constant(&self) -> f64 {
        (self.alpha - 1.0) * self.c0.powf(self.alpha) / ln_gamma(2.0 - self.alpha).exp()
    }

    pub fn sample_mu0(&self, rng: &mut Rng64) -> u64 {
        let u: f64 = rng.random();
        // P(X = k) = β(1−β)^k  ⇒  X = ⌊ln(1−u)/ln(1−β)⌋
        ((1.0 - u).ln() / (1.0 - self.beta).ln()).floor() as u64
    }

    /// Exact inversion by binary search on the incrementally extended
    /// prefix-sum cache. No asymptotic approximation enters the draw.
    pub fn sample_mu1(&self, rng: &mut Rng64) -> u64 {
        let u: f64 = rng.random();
        {
            let cdf = self.mu1_cdf.read().unwrap();
            if let Some(&last) = cdf.last() {
                if u < last {
                    return cdf.partition_point(|&c| c <= u) as u64;
                }
            }
        }
        let mut cdf = self.mu1_cdf.write().unwrap();
        while cdf.last().map_or(true, |&last| last <= u) {
            let start = cdf.len();
            let end = (start * 2).max(64);
            let mut cum = cdf.last().copied().unwrap_or(0.0);
            let mut stalled = true;
            for k in start..end {
                let next = cum + self.mu1_pointwise_fast(k as u64);
                if next > cum {
                    stalled = false;
                }
                cum = next;
                cdf.push(cum);
            }
            if stalled {
                // masses below one ulp of the accumulated CDF: exact at
                // double precision, clamp to the cache end
                return (cdf.len() - 1) as u64;
            }
        }
        cdf.partition_point(|&c| c <= u) as u64
    }

    fn mu1_pointwise_fast(&self, k: u64) -> f64 {
        self.mu1(k)
    }

    /// Pre-extends the μ1 cache so read-only sampling dominates afterwards.
    pub fn warm_mu1_cache(&self, kmax: usize) {
        let mut cdf = self.mu1_cdf.write().unwrap();
        if cdf.len() >= kmax {
            return;
        }
        let masses = self.mu1_masses(kmax);
        let mut cum = 0.0;
        cdf.clear();
        for m in masses {
            cum += m;
            cdf.push(cum);
        }
    }

    /// One draw from μ: Σ_{i=1}^U V_i with U ~ μ0 and V_i ~ μ1 independent.
    pub fn sample_mu(&self, rng: &mut Rng64) -> u64 {
        let u = self.sample_mu0(rng);
        let mut total = 0u64;
        for _ in 0..u {
            total += self.sample_mu1(rng);
        }
        total
    }

    /// One draw from ν: ν(k) = μ(k+1), k ≥ −1.
    pub fn sample_nu(&self, rng: &mut Rng64) -> i64 {
        self.sample_mu(rng) as i64 - 1
    }

    /// μ(0..=kmax) by the renewal form of the compound law:
    /// μ(j) = β·1{j=0} + (1−β)(μ1 ∗ μ)(j). Exact to floating precision; the
    /// deficit 1 − Σ masses is the reported tail.
    pub fn mu_mass(&self, kmax: usize) -> MuMass {
        let mu1 = self.mu1_masses(kmax);
        let beta = self.beta;
        let q = 1.0 - beta;
        let denom = 1.0 - q * mu1[0];
        let mut mass = vec![0.0f64; kmax + 1];
        mass[0] = beta / denom;
        for j in 1..=kmax {
            let mut s = 0.0f64;
            for i in 1..=j {
                s += mu1[i] * mass[j - i];
            }
            mass[j] = q * s / denom;
        }
        let total: f64 = mass.iter().sum();
        MuMass {
            mass,
            tail: (1.0 - total).max(0.0),
        }
    }
}

/// Shareable handle used by samplers.
pub type Model = Arc<WeightModel>;
