//! Monte Carlo estimate of identification errors.

use super::codebook::{BitWord, Codebook};
use super::distance::{DecoderMode, IdDecoder};
use crate::error::{Error, Result};
use crate::rng::RngStreams;
use rand::Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Environment variable read for the default worker count.
pub const WORKERS_ENV: &str = "LHC_KIT_WORKERS";

pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&w: &usize| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Sends `word` through `BSC(gamma)^n`, jumping between flipped positions.
pub fn transmit<R: Rng + ?Sized>(word: &BitWord, n: usize, gamma: f64, rng: &mut R) -> BitWord {
    let mut out = word.clone();
    if gamma <= 0.0 {
        return out;
    }
    if gamma >= 1.0 {
        (0..n).for_each(|i| out.flip(i));
        return out;
    }
    let gaps = Geometric::new(gamma).expect("0 < gamma < 1");
    let mut pos = gaps.sample(rng);
    while pos < n as u64 {
        out.flip(pos as usize);
        pos += 1 + gaps.sample(rng);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub trials: u64,
    pub seed: u64,
    pub equal_trials: u64,
    pub distinct_trials: u64,
    pub false_accepts: u64,
    pub false_rejects: u64,
    /// Two-sided windows mode: received distance in neither window.
    pub outside: u64,
    /// Among distinct-message trials.
    pub false_accept_rate: f64,
    /// Among equal-message trials.
    pub false_reject_rate: f64,
    pub false_accept_half_width: f64,
    pub false_reject_half_width: f64,
}

/// 95% normal-approximation half-width; a zero count is treated as half
/// an event.
pub fn half_width(count: u64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    let p = (count as f64 / n).max(0.5 / n);
    1.96 * (p * (1.0 - p) / n).sqrt()
}

fn rate(count: u64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        count as f64 / n as f64
    }
}

/// Even trials send one message twice, odd trials two distinct messages,
/// each drawn uniformly. Trial `i` uses stream `(seed, "id-sim", i)` and
/// counts are summed as integers, so the result does not depend on
/// `workers`.
pub fn monte_carlo_id(
    codebook: &Codebook,
    gamma: f64,
    epsilon: f64,
    trials: u64,
    seed: u64,
    mode: DecoderMode,
    workers: usize,
) -> Result<ErrorEstimate> {
    if trials == 0 {
        return Err(Error::Range("at least one trial is required".into()));
    }
    let m = codebook.len();
    if m < 2 {
        return Err(Error::Range("identification needs at least 2 messages".into()));
    }
    let n = codebook.n();
    let decoder = IdDecoder::new(n, gamma, epsilon, codebook.delta(), mode)?;
    let streams = RngStreams::new(seed);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    let (fa, fr, outside) = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = streams.stream("id-sim", i);
                let a = rng.random_range(0..m);
                let b = if i % 2 == 0 {
                    a
                } else {
                    let b = rng.random_range(0..m - 1);
                    if b >= a {
                        b + 1
                    } else {
                        b
                    }
                };
                let y1 = transmit(codebook.word(a), n, gamma, &mut rng);
                let y2 = transmit(codebook.word(b), n, gamma, &mut rng);
                let d = decoder.decide(y1.distance(&y2));
                let wrong = (d.bit == 1) != (a == b);
                let (fa, fr) = if a == b { (0, u64::from(wrong)) } else { (u64::from(wrong), 0) };
                (fa, fr, u64::from(d.outside))
            })
            .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2))
    });
    let equal = trials.div_ceil(2);
    let distinct = trials / 2;
    Ok(ErrorEstimate {
        trials,
        seed,
        equal_trials: equal,
        distinct_trials: distinct,
        false_accepts: fa,
        false_rejects: fr,
        outside,
        false_accept_rate: rate(fa, distinct),
        false_reject_rate: rate(fr, equal),
        false_accept_half_width: half_width(fa, distinct),
        false_reject_half_width: half_width(fr, equal),
    })
}

pub const SIM_HEADER: &str = "trials,false_accept,false_reject,bound";

pub fn sim_csv(estimate: &ErrorEstimate, bound: f64) -> String {
    let mut out = format!("{SIM_HEADER}\n");
    writeln!(
        out,
        "{},{},{},{}",
        estimate.trials, estimate.false_accept_rate, estimate.false_reject_rate, bound
    )
    .unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::super::codebook::{gen_codebook, Strategy};
    use super::*;

    #[test]
    fn noiseless_channel_makes_no_errors() {
        let cb = gen_codebook(16, 0.25, 8, 1, Strategy::LexicographicGreedy).unwrap();
        let est = monte_carlo_id(&cb, 0.0, 0.5, 500, 3, DecoderMode::OneSidedThreshold, 2).unwrap();
        assert_eq!((est.false_accepts, est.false_rejects), (0, 0));
        assert_eq!(est.equal_trials + est.distinct_trials, 500);
    }

    #[test]
    fn flip_fraction() {
        let mut rng = RngStreams::new(9).stream("t", 0);
        let n = 100_000;
        let y = transmit(&BitWord::zeros(n), n, 0.03, &mut rng);
        let frac = y.weight() as f64 / n as f64;
        assert!((frac - 0.03).abs() < 0.002, "{frac}");
        assert_eq!(transmit(&BitWord::zeros(8), 8, 1.0, &mut rng).weight(), 8);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let cb = gen_codebook(64, 0.25, 4, 2, Strategy::RandomGreedy).unwrap();
        let runs: Vec<_> = [1, 3, 8]
            .into_iter()
            .map(|w| monte_carlo_id(&cb, 0.05, 0.3, 2000, 5, DecoderMode::OneSidedThreshold, w).unwrap())
            .collect();
        assert_eq!(runs[0], runs[1]);
        assert_eq!(runs[0], runs[2]);
    }

    #[test]
    fn interval_guard() {
        assert!(half_width(0, 100) > 0.0);
        assert_eq!(half_width(0, 0), 0.0);
        assert!((half_width(50, 100) - 1.96 * 0.05).abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let est = ErrorEstimate {
            trials: 4,
            seed: 0,
            equal_trials: 2,
            distinct_trials: 2,
            false_accepts: 1,
            false_rejects: 0,
            outside: 0,
            false_accept_rate: 0.5,
            false_reject_rate: 0.0,
            false_accept_half_width: 0.0,
            false_reject_half_width: 0.0,
        };
        assert_eq!(sim_csv(&est, 0.25), "trials,false_accept,false_reject,bound\n4,0.5,0,0.25\n");
    }
}
