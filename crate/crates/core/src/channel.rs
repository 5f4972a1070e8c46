//! Discrete memoryless channels as row-stochastic matrices.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::hypergraph::FunctionTable;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Tolerance on row sums and on the upper bound of entries.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Default cap on the size of any materialized alphabet.
pub const MAX_ALPHABET: usize = 1 << 20;

/// Cap on the number of entries of a materialized transition matrix.
pub const MAX_ENTRIES: usize = 1 << 26;

/// A channel `input -> output` given by one probability row per input
/// symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChannel", into = "RawChannel")]
pub struct Channel {
    input: Alphabet,
    output: Alphabet,
    // row-major, input.len() x output.len()
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawChannel {
    input: Alphabet,
    output: Alphabet,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<RawChannel> for Channel {
    type Error = Error;
    fn try_from(raw: RawChannel) -> Result<Self> {
        Channel::new(raw.input, raw.output, raw.rows)
    }
}

impl From<Channel> for RawChannel {
    fn from(c: Channel) -> Self {
        let rows = c.rows().map(<[f64]>::to_vec).collect();
        RawChannel {
            input: c.input,
            output: c.output,
            rows,
        }
    }
}

/// Checks one probability row; returns a description of the first problem.
pub fn row_problem(row: &[f64]) -> Option<String> {
    if let Some((j, p)) = row
        .iter()
        .enumerate()
        .find(|(_, p)| !p.is_finite() || **p < 0.0 || **p > 1.0 + STOCHASTIC_TOL)
    {
        return Some(format!("entry {j} = {p} is not a probability"));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > STOCHASTIC_TOL {
        return Some(format!("row sums to {sum}, off by {:e}", sum - 1.0));
    }
    None
}

fn check_capacity(what: &str, size: u128, cap: usize) -> Result<usize> {
    if size > cap as u128 {
        Err(Error::Capacity {
            what: what.to_string(),
            size,
            cap: cap as u128,
        })
    } else {
        Ok(size as usize)
    }
}

impl Channel {
    pub fn new(input: Alphabet, output: Alphabet, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != input.len() {
            return Err(Error::Shape(format!(
                "{} rows for {} input symbols",
                rows.len(),
                input.len()
            )));
        }
        check_capacity("matrix", input.len() as u128 * output.len() as u128, MAX_ENTRIES)?;
        let mut probs = Vec::with_capacity(input.len() * output.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != output.len() {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries for {} output symbols",
                    row.len(),
                    output.len()
                )));
            }
            if let Some(problem) = row_problem(&row) {
                return Err(Error::Range(format!("row {i}: {problem}")));
            }
            probs.extend(row);
        }
        Ok(Self {
            input,
            output,
            probs,
        })
    }

    fn from_parts(input: Alphabet, output: Alphabet, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), input.len() * output.len());
        Self {
            input,
            output,
            probs,
        }
    }

    /// Channel that outputs `map[x]` with certainty.
    pub fn from_map(input: Alphabet, output: Alphabet, map: &[usize]) -> Result<Self> {
        let f = FunctionTable::new(input, output, map.to_vec())?;
        Ok(Self::deterministic(&f))
    }

    pub fn deterministic(f: &FunctionTable) -> Self {
        let (n, m) = (f.domain().len(), f.codomain().len());
        let mut probs = vec![0.0; n * m];
        for (a, &b) in f.as_slice().iter().enumerate() {
            probs[a * m + b] = 1.0;
        }
        Self::from_parts(f.domain().clone(), f.codomain().clone(), probs)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Self::deterministic(&FunctionTable::identity(alphabet))
    }

    /// Binary symmetric channel with crossover probability `gamma`.
    pub fn bsc(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Range(format!("crossover {gamma} outside [0, 1]")));
        }
        let b = Alphabet::binary();
        Ok(Self::from_parts(
            b.clone(),
            b,
            vec![1.0 - gamma, gamma, gamma, 1.0 - gamma],
        ))
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn row(&self, x: usize) -> &[f64] {
        let m = self.output.len();
        &self.probs[x * m..(x + 1) * m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.probs.chunks_exact(self.output.len())
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.output.len() + y]
    }

    /// Probability that the output of `x` lands in `set`.
    pub fn mass(&self, x: usize, set: &[usize]) -> f64 {
        let row = self.row(x);
        set.iter().map(|&y| row[y]).sum()
    }

    /// Every row is one-hot.
    pub fn is_deterministic(&self) -> bool {
        self.rows()
            .all(|r| r.iter().filter(|&&p| p == 1.0).count() == 1 && r.iter().all(|&p| p == 0.0 || p == 1.0))
    }

    /// The function computed by a deterministic channel.
    pub fn as_function(&self) -> Option<FunctionTable> {
        if !self.is_deterministic() {
            return None;
        }
        let map = self
            .rows()
            .map(|r| r.iter().position(|&p| p == 1.0).expect("one-hot row"))
            .collect();
        FunctionTable::new(self.input.clone(), self.output.clone(), map).ok()
    }

    /// Largest deviation of a row sum from 1.
    pub fn stochasticity_error(&self) -> f64 {
        self.rows()
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `second ∘ first`: the channel that applies `first`, then `second`.
    ///
    /// Alphabets are identified by index, so only sizes must agree.
    pub fn compose(first: &Channel, second: &Channel) -> Result<Channel> {
        if first.output.len() != second.input.len() {
            return Err(Error::Shape(format!(
                "cannot compose: first channel has {} outputs, second has {} inputs",
                first.output.len(),
                second.input.len()
            )));
        }
        let (n, m) = (first.input.len(), second.output.len());
        check_capacity("matrix", n as u128 * m as u128, MAX_ENTRIES)?;
        let mut probs = vec![0.0; n * m];
        for (x, out) in probs.chunks_exact_mut(m).enumerate() {
            for (k, &p) in first.row(x).iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                for (o, &q) in out.iter_mut().zip(second.row(k)) {
                    *o += p * q;
                }
            }
        }
        Ok(Self::from_parts(
            first.input.clone(),
            second.output.clone(),
            probs,
        ))
    }

    /// Composition of a chain of channels, applied left to right.
    pub fn chain(stages: &[&Channel]) -> Result<Channel> {
        let (first, rest) = stages
            .split_first()
            .ok_or_else(|| Error::Shape("empty channel chain".into()))?;
        rest.iter()
            .try_fold((*first).clone(), |acc, next| Channel::compose(&acc, next))
    }

    /// Tensor product with the default alphabet cap.
    pub fn tensor(left: &Channel, right: &Channel) -> Result<Channel> {
        Self::tensor_with_cap(left, right, MAX_ALPHABET)
    }

    /// `(left ⊗ right)((x, a)) = (left(x), right(a))` with independent
    /// components; product alphabets are row-major.
    pub fn tensor_with_cap(left: &Channel, right: &Channel, cap: usize) -> Result<Channel> {
        let n = check_capacity(
            "tensor input alphabet",
            left.input.len() as u128 * right.input.len() as u128,
            cap,
        )?;
        let m = check_capacity(
            "tensor output alphabet",
            left.output.len() as u128 * right.output.len() as u128,
            cap,
        )?;
        check_capacity("matrix", n as u128 * m as u128, MAX_ENTRIES)?;
        let input = left.input.product(&right.input)?;
        let output = left.output.product(&right.output)?;
        let (rn, rm) = (right.input.len(), right.output.len());
        let mut probs = vec![0.0; n * m];
        for (x, out) in probs.chunks_exact_mut(m).enumerate() {
            let (x1, x2) = (x / rn, x % rn);
            let r2 = right.row(x2);
            for (y1, &p) in left.row(x1).iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                for (o, &q) in out[y1 * rm..(y1 + 1) * rm].iter_mut().zip(r2) {
                    *o = p * q;
                }
            }
        }
        Ok(Self::from_parts(input, output, probs))
    }

    /// The `n`-fold memoryless extension with the default cap.
    pub fn power(&self, n: usize) -> Result<Channel> {
        self.power_with_cap(n, MAX_ALPHABET)
    }

    pub fn power_with_cap(&self, n: usize, cap: usize) -> Result<Channel> {
        if n == 0 {
            return Err(Error::Range("block length must be at least 1".into()));
        }
        let size = |a: usize| {
            (a as u128)
                .checked_pow(n as u32)
                .unwrap_or(u128::MAX)
        };
        check_capacity("power input alphabet", size(self.input.len()), cap)?;
        check_capacity("power output alphabet", size(self.output.len()), cap)?;
        let mut acc = self.clone();
        for _ in 1..n {
            acc = Self::tensor_with_cap(&acc, self, cap)?;
        }
        Ok(acc)
    }

    /// Draws an output for input `x`.
    pub fn sample<R: Rng + ?Sized>(&self, x: usize, rng: &mut R) -> usize {
        let row = self.row(x);
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (y, &p) in row.iter().enumerate() {
            if p > 0.0 {
                acc += p;
                last = y;
                if u < acc {
                    return y;
                }
            }
        }
        last
    }
}
