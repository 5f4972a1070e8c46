//! Exact law of the output distance of a word pair sent through two
//! independent `BSC(gamma)^n`, and the decoder errors it implies.

use super::formulas::{epsilon_max, theta};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// `Binomial(n, p)` probabilities for `0..=n`, computed in the log domain.
pub fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    if p <= 0.0 {
        let mut v = vec![0.0; n + 1];
        v[0] = 1.0;
        return v;
    }
    if p >= 1.0 {
        let mut v = vec![0.0; n + 1];
        v[n] = 1.0;
        return v;
    }
    let mut ln_fact = vec![0.0f64; n + 1];
    for i in 1..=n {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    (0..=n)
        .map(|k| (ln_fact[n] - ln_fact[k] - ln_fact[n - k] + k as f64 * lp + (n - k) as f64 * lq).exp())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDistanceLaw {
    pub n: usize,
    pub k: usize,
    pub gamma: f64,
    /// Probabilities of output distances `0..=n`.
    pub pmf: Vec<f64>,
}

impl PairDistanceLaw {
    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(d, p)| d as f64 * p).sum()
    }

    pub fn total(&self) -> f64 {
        self.pmf.iter().sum()
    }

    /// Probability that the distance satisfies `pred`, clamped to `[0, 1]`
    /// against rounding in long sums.
    pub fn mass(&self, pred: impl Fn(usize) -> bool) -> f64 {
        let total: f64 = self
            .pmf
            .iter()
            .enumerate()
            .filter(|(d, _)| pred(*d))
            .map(|(_, p)| p)
            .sum();
        total.clamp(0.0, 1.0)
    }
}

/// Agreeing positions differ at the output with probability `beta`,
/// disagreeing ones with `1 - beta`.
pub fn pair_distance_distribution(n: usize, k: usize, gamma: f64) -> Result<PairDistanceLaw> {
    if k > n {
        return Err(Error::Range(format!("input distance {k} exceeds n = {n}")));
    }
    let b = super::formulas::beta(gamma)?;
    let same = binomial_pmf(n - k, b);
    let diff = binomial_pmf(k, 1.0 - b);
    let mut pmf = vec![0.0; n + 1];
    for (i, &p) in same.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        for (j, &q) in diff.iter().enumerate() {
            pmf[i + j] += p * q;
        }
    }
    Ok(PairDistanceLaw { n, k, gamma, pmf })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderMode {
    /// Accept iff `d <= n (1 + eps) theta_0`.
    #[default]
    OneSidedThreshold,
    /// Accept iff `|d - n theta_0| < n eps theta_0`; reject inside the
    /// `delta` window and flag anything else.
    TwoSidedWindows,
}

impl std::str::FromStr for DecoderMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-sided-threshold" | "threshold" => Ok(DecoderMode::OneSidedThreshold),
            "two-sided-windows" | "windows" => Ok(DecoderMode::TwoSidedWindows),
            _ => Err(Error::Parse(format!("unknown decoder mode '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    /// 1 when the pair is judged equal.
    pub bit: u8,
    /// Two-sided windows mode only: distance in neither window.
    pub outside: bool,
}

/// Distance test deciding whether two received words stem from the same
/// message.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdDecoder {
    pub n: usize,
    pub gamma: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub mode: DecoderMode,
    theta0: f64,
    theta_delta: f64,
}

impl IdDecoder {
    /// Requires `0 < epsilon < epsilon_max(delta, gamma)`.
    pub fn new(n: usize, gamma: f64, epsilon: f64, delta: f64, mode: DecoderMode) -> Result<Self> {
        let max = epsilon_max(delta, gamma)?;
        if !(epsilon > 0.0) {
            return Err(Error::Range(format!("epsilon = {epsilon} must be positive")));
        }
        if epsilon >= max {
            return Err(Error::EpsilonTooLarge { epsilon, max });
        }
        Ok(Self {
            n,
            gamma,
            epsilon,
            delta,
            mode,
            theta0: theta(0.0, gamma)?,
            theta_delta: theta(delta, gamma)?,
        })
    }

    /// Largest accepted distance in threshold mode, `n (1 + eps) theta_0`.
    pub fn threshold(&self) -> f64 {
        self.n as f64 * (1.0 + self.epsilon) * self.theta0
    }

    fn in_window(&self, d: usize, theta: f64) -> bool {
        let n = self.n as f64;
        (d as f64 - n * theta).abs() < n * self.epsilon * theta
    }

    pub fn decide(&self, d: usize) -> Decision {
        match self.mode {
            DecoderMode::OneSidedThreshold => Decision {
                bit: u8::from(d as f64 <= self.threshold()),
                outside: false,
            },
            DecoderMode::TwoSidedWindows => {
                if self.in_window(d, self.theta0) {
                    Decision { bit: 1, outside: false }
                } else {
                    Decision {
                        bit: 0,
                        outside: !self.in_window(d, self.theta_delta),
                    }
                }
            }
        }
    }

    /// Exact error for a pair at input distance `k`: the probability of
    /// rejecting when `k = 0`, of accepting otherwise.
    pub fn exact_error(&self, k: usize) -> Result<f64> {
        let law = pair_distance_distribution(self.n, k, self.gamma)?;
        let want = u8::from(k == 0);
        Ok(law.mass(|d| self.decide(d).bit != want))
    }
}

/// `Pr{|d - n theta| >= n eps theta}` with `theta = theta(delta_nominal)`,
/// for a pair at input distance `k`.
pub fn exact_window_miss(n: usize, k: usize, gamma: f64, epsilon: f64, delta_nominal: f64) -> Result<f64> {
    let law = pair_distance_distribution(n, k, gamma)?;
    let t = theta(delta_nominal, gamma)?;
    let (center, half) = (n as f64 * t, n as f64 * epsilon * t);
    Ok(law.mass(|d| (d as f64 - center).abs() >= half))
}
