use crate::error::{Error, Result};
use std::fmt::Write as _;

fn check_prob(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Range(format!("{name} = {p} must lie in [0, 1]")))
    }
}

/// Probability that exactly one of two independent `BSC(gamma)` uses flips.
pub fn beta(gamma: f64) -> Result<f64> {
    check_prob("gamma", gamma)?;
    Ok(2.0 * gamma * (1.0 - gamma))
}

/// Expected normalized output distance of two words at relative distance
/// `delta`.
pub fn theta(delta: f64, gamma: f64) -> Result<f64> {
    check_prob("delta", delta)?;
    let b = beta(gamma)?;
    Ok(b + delta * (1.0 - 2.0 * b))
}

/// `(theta_delta - theta_0) / (theta_delta + theta_0)`, or 0 when both
/// vanish.
pub fn epsilon_max(delta: f64, gamma: f64) -> Result<f64> {
    check_prob("delta", delta)?;
    let b = beta(gamma)?;
    let num = delta * (1.0 - 2.0 * b);
    let den = 2.0 * b + num;
    Ok(if den == 0.0 { 0.0 } else { num / den })
}

/// `min(1, 2 exp(-n eps² theta_delta / 2))`.
pub fn chernoff_bound(n: usize, epsilon: f64, delta: f64, gamma: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::Range(format!("epsilon = {epsilon} must be positive")));
    }
    let t = theta(delta, gamma)?;
    Ok((2.0 * (-(n as f64) * epsilon * epsilon * t / 2.0).exp()).min(1.0))
}

/// Binary entropy in bits, with `h(0) = h(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    pub delta: f64,
    /// `1 - h(delta)`.
    pub gv_rate: f64,
    /// `1 - h(gamma)`.
    pub tx_rate: f64,
}

pub fn rate_table(gamma: f64, deltas: &[f64]) -> Result<Vec<RateRow>> {
    if !(0.0..=0.5).contains(&gamma) {
        return Err(Error::Range(format!("gamma = {gamma} must lie in [0, 1/2]")));
    }
    let tx_rate = 1.0 - binary_entropy(gamma);
    deltas
        .iter()
        .map(|&delta| {
            check_prob("delta", delta)?;
            Ok(RateRow {
                delta,
                gv_rate: 1.0 - binary_entropy(delta),
                tx_rate,
            })
        })
        .collect()
}

pub const RATES_HEADER: &str = "delta,gv_rate,tx_rate";

pub fn rates_csv(rows: &[RateRow]) -> String {
    let mut out = format!("{RATES_HEADER}\n");
    for r in rows {
        writeln!(out, "{},{},{}", r.delta, r.gv_rate, r.tx_rate).unwrap();
    }
    out
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Parses `start:stop:step` into the inclusive arithmetic grid, each value
/// rounded to 12 decimals.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(Error::Parse(format!("grid '{spec}' is not start:stop:step")));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("grid '{spec}': '{s}': {e}")))
    };
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::Parse(format!(
            "grid '{spec}' needs start <= stop and a positive step"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(Error::Parse(format!("grid '{spec}' has {count} points")));
    }
    Ok((0..count).map(|i| round12(start + i as f64 * step)).collect())
}
