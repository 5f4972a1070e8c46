//! Binary codebooks with a guaranteed minimum Hamming distance.

use crate::error::{Error, Result};
use crate::rng::RngStreams;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Bit-packed binary word; bit `i` of the word is bit `i % 64` of limb
/// `i / 64`. The length is carried by the owner.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord(Vec<u64>);

impl BitWord {
    pub fn zeros(n: usize) -> Self {
        BitWord(vec![0; n.div_ceil(64)])
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut w = BitWord((0..n.div_ceil(64)).map(|_| rng.random()).collect());
        w.mask(n);
        w
    }

    fn mask(&mut self, n: usize) {
        if n % 64 != 0 {
            if let Some(last) = self.0.last_mut() {
                *last &= (1u64 << (n % 64)) - 1;
            }
        }
    }

    /// The word whose letters read `index` in binary, most significant
    /// letter first. Matches the row-major order of `{0,1}^n`.
    pub fn from_index(index: u64, n: usize) -> Self {
        let mut w = Self::zeros(n);
        for i in 0..n.min(64) {
            if (index >> (n - 1 - i)) & 1 == 1 {
                w.flip(i);
            }
        }
        w
    }

    /// Inverse of [`BitWord::from_index`]; requires `n <= 64`.
    pub fn index(&self, n: usize) -> u64 {
        assert!(n <= 64, "word index needs n <= 64");
        (0..n).fold(0, |acc, i| (acc << 1) | u64::from(self.get(i)))
    }

    pub fn get(&self, i: usize) -> bool {
        (self.0[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }

    pub fn distance(&self, other: &BitWord) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|x| x.count_ones() as usize).sum()
    }

    pub fn to_bits(&self, n: usize) -> String {
        (0..n).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    pub fn parse(bits: &str) -> Result<Self> {
        let mut w = Self::zeros(bits.len());
        for (i, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => w.flip(i),
                other => return Err(Error::Parse(format!("invalid bit '{other}' in word"))),
            }
        }
        Ok(w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    LexicographicGreedy,
    RandomGreedy,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lexicographic-greedy" | "lex" => Ok(Strategy::LexicographicGreedy),
            "random-greedy" | "random" => Ok(Strategy::RandomGreedy),
            _ => Err(Error::Parse(format!("unknown codebook strategy '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    n: usize,
    min_distance: usize,
    words: Vec<BitWord>,
}

/// Largest block length accepted by the lexicographic strategy.
pub const LEXICOGRAPHIC_MAX_N: usize = 24;

/// `ceil(n delta)`, ignoring rounding noise in `n delta`.
pub fn required_distance(n: usize, delta: f64) -> usize {
    (n as f64 * delta - 1e-9).ceil().max(0.0) as usize
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    let ln_fact = |m: usize| (1..=m).map(|i| (i as f64).ln()).sum::<f64>();
    ln_fact(n) - ln_fact(k) - ln_fact(n - k)
}

/// `2^n / sum_{j < d} C(n, j)`, evaluated in log space.
pub fn gv_guarantee(n: usize, d: usize) -> f64 {
    let terms: Vec<f64> = (0..d.min(n + 1)).map(|j| ln_binomial(n, j)).collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_ball = top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln();
    (n as f64 * std::f64::consts::LN_2 - ln_ball).exp()
}

impl Codebook {
    /// Validates lengths, distinctness and the distance guarantee.
    pub fn new(n: usize, min_distance: usize, words: Vec<BitWord>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Range("block length must be at least 1".into()));
        }
        if words.is_empty() {
            return Err(Error::Range("codebook is empty".into()));
        }
        for (i, w) in words.iter().enumerate() {
            if w.0.len() != n.div_ceil(64) || (n % 64 != 0 && w.0.last().unwrap() >> (n % 64) != 0) {
                return Err(Error::Shape(format!("word {i} does not have length {n}")));
            }
        }
        let cb = Self {
            n,
            min_distance,
            words,
        };
        if let Some((i, j, d)) = cb.closest_pair() {
            if d < min_distance.max(1) {
                return Err(Error::Range(format!(
                    "words {i} and {j} are at distance {d} < {}",
                    min_distance.max(1)
                )));
            }
        }
        Ok(cb)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Guaranteed minimum distance between distinct words.
    pub fn min_distance(&self) -> usize {
        self.min_distance
    }

    pub fn delta(&self) -> f64 {
        self.min_distance as f64 / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[BitWord] {
        &self.words
    }

    pub fn word(&self, m: usize) -> &BitWord {
        &self.words[m]
    }

    /// Closest pair `(i, j, distance)` among distinct indices.
    pub fn closest_pair(&self) -> Option<(usize, usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..self.words.len() {
            for j in i + 1..self.words.len() {
                let d = self.words[i].distance(&self.words[j]);
                if best.is_none_or(|b| d < b.2) {
                    best = Some((i, j, d));
                }
            }
        }
        best
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# n={} d={}\n", self.n, self.min_distance);
        for w in &self.words {
            writeln!(out, "{}", w.to_bits(self.n)).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("codebook file is empty".into()))?;
        let (n, d) = parse_header(header)?;
        let words = lines
            .enumerate()
            .map(|(i, l)| {
                let l = l.trim();
                if l.len() != n {
                    return Err(Error::Parse(format!(
                        "word {i} has {} letters, header says n={n}",
                        l.len()
                    )));
                }
                BitWord::parse(l)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, d, words).map_err(|e| Error::Parse(format!("codebook: {e}")))
    }
}

fn parse_header(line: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("codebook header '{line}' is not '# n=<n> d=<d>'"));
    let rest = line.strip_prefix('#').ok_or_else(bad)?;
    let mut n = None;
    let mut d = None;
    for field in rest.split_whitespace() {
        let (k, v) = field.split_once('=').ok_or_else(bad)?;
        let v: usize = v.parse().map_err(|_| bad())?;
        match k {
            "n" => n = Some(v),
            "d" => d = Some(v),
            _ => return Err(bad()),
        }
    }
    Ok((n.ok_or_else(bad)?, d.ok_or_else(bad)?))
}

/// Greedily collects `m` words of length `n` at pairwise distance at least
/// `ceil(n delta)`.
///
/// The lexicographic strategy scans `{0,1}^n` in order and is limited to
/// `n <= 24`. The random strategy draws candidates from stream
/// `(seed, "codebook", 0)` and gives up after a bounded number of draws.
pub fn gen_codebook(n: usize, delta: f64, m: usize, seed: u64, strategy: Strategy) -> Result<Codebook> {
    if n == 0 || m == 0 {
        return Err(Error::Range("n and M must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Range(format!("delta = {delta} must lie in [0, 1]")));
    }
    let d = required_distance(n, delta);
    if d < 1 {
        return Err(Error::Range(format!("ceil(n delta) = {d} must be at least 1")));
    }
    let mut words: Vec<BitWord> = Vec::with_capacity(m);
    let fits = |w: &BitWord, words: &[BitWord]| words.iter().all(|u| u.distance(w) >= d);
    match strategy {
        Strategy::LexicographicGreedy => {
            if n > LEXICOGRAPHIC_MAX_N {
                return Err(Error::Range(format!(
                    "lexicographic greedy supports n <= {LEXICOGRAPHIC_MAX_N}, got {n}"
                )));
            }
            for index in 0..(1u64 << n) {
                let w = BitWord::from_index(index, n);
                if fits(&w, &words) {
                    words.push(w);
                    if words.len() == m {
                        break;
                    }
                }
            }
        }
        Strategy::RandomGreedy => {
            let mut rng = RngStreams::new(seed).stream("codebook", 0);
            let attempts = 1000 + 100 * m;
            for _ in 0..attempts {
                let w = BitWord::random(n, &mut rng);
                if fits(&w, &words) {
                    words.push(w);
                    if words.len() == m {
                        break;
                    }
                }
            }
        }
    }
    if words.len() < m {
        return Err(Error::Infeasible {
            achieved: words.len(),
            requested: m,
            gv_guarantee: gv_guarantee(n, d),
        });
    }
    Codebook::new(n, d, words)
}
