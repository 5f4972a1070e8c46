//! The hypergraphs of deterministic identification over two parallel
//! binary symmetric channels.
//!
//! `H`, `G1`, `G2` and `C` only involve codewords and messages and are
//! kept small. `F` and `D` live on pairs of `n`-bit words and are given by
//! membership tests; [`ExampleHypergraphs::materialize`] expands them for
//! short block lengths.

use super::codebook::{BitWord, Codebook};
use super::distance::{pair_distance_distribution, DecoderMode, IdDecoder};
use super::formulas::theta;
use crate::alphabet::Alphabet;
use crate::channel::{Channel, MAX_ALPHABET};
use crate::error::{Error, Result};
use crate::hypergraph::{characteristic_hypergraph, FunctionTable, Hypergraph};

/// Edge order shared by `F`, `C` and `D`: equal pairs first.
pub const EQUAL_EDGE: usize = 0;
pub const DISTANT_EDGE: usize = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleHypergraphs {
    pub codebook: Codebook,
    pub decoder: IdDecoder,
    /// Characteristic hypergraph of identification on `M × M`.
    pub h: Hypergraph,
    /// Non-isolated part of `G1` on codeword × message pairs `(x_m, m')`,
    /// indexed `m * M + m'`: the matching pairs, then the rest.
    pub g1: Hypergraph,
    /// Same for `G2` on `(m', x_m)`, indexed `m' * M + m`.
    pub g2: Hypergraph,
    /// `F` restricted to codeword pairs.
    pub c: Hypergraph,
}

fn diag_split(m: usize, labels: Alphabet, swap: bool) -> Result<Hypergraph> {
    let (mut diag, mut off) = (Vec::new(), Vec::new());
    for a in 0..m {
        for b in 0..m {
            let (i, j) = if swap { (b, a) } else { (a, b) };
            if a == b {
                diag.push(i * m + j);
            } else {
                off.push(i * m + j);
            }
        }
    }
    let edges = if off.is_empty() { vec![diag] } else { vec![diag, off] };
    Hypergraph::new(labels, edges)
}

impl ExampleHypergraphs {
    /// The nominal relative distance is the codebook's `d / n`.
    pub fn new(codebook: Codebook, gamma: f64, epsilon: f64, mode: DecoderMode) -> Result<Self> {
        let m = codebook.len();
        if m < 2 {
            return Err(Error::Range("identification needs at least 2 messages".into()));
        }
        let decoder = IdDecoder::new(codebook.n(), gamma, epsilon, codebook.delta(), mode)?;
        let t0 = theta(0.0, gamma)?;
        let td = theta(codebook.delta(), gamma)?;
        if (1.0 + epsilon) * t0 >= (1.0 - epsilon) * td {
            return Err(Error::EpsilonTooLarge {
                epsilon,
                max: (td - t0) / (td + t0),
            });
        }
        let msgs = Alphabet::messages(m)?;
        let cw = Alphabet::new((0..m).map(|i| format!("x{}", i + 1)))?;
        let h = characteristic_hypergraph(&FunctionTable::identification(m)?);
        let g1 = diag_split(m, cw.product(&msgs)?, false)?;
        let g2 = diag_split(m, msgs.product(&cw)?, true)?;
        let c = diag_split(m, cw.product(&cw)?, false)?;
        debug_assert!(c.is_partition());
        Ok(Self {
            codebook,
            decoder,
            h,
            g1,
            g2,
            c,
        })
    }

    pub fn n(&self) -> usize {
        self.codebook.n()
    }

    /// Edge of `F` holding the input pair, if any.
    pub fn f_edge_of(&self, x: &BitWord, y: &BitWord) -> Option<usize> {
        match x.distance(y) {
            0 => Some(EQUAL_EDGE),
            d if d >= self.codebook.min_distance() => Some(DISTANT_EDGE),
            _ => None,
        }
    }

    /// Edge of `D` holding the output pair, if any. In threshold mode the
    /// two edges are the accepted and rejected distances and cover every
    /// pair.
    pub fn d_edge_of(&self, y: &BitWord, z: &BitWord) -> Option<usize> {
        let decision = self.decoder.decide(y.distance(z));
        if decision.outside {
            None
        } else if decision.bit == 1 {
            Some(EQUAL_EDGE)
        } else {
            Some(DISTANT_EDGE)
        }
    }

    /// Error of `BSC^n ⊗ BSC^n : F → D` per edge of `F`: the largest
    /// probability, over input distances in the edge, that the output pair
    /// leaves the matching edge of `D`.
    pub fn channel_lambda(&self) -> Result<Vec<f64>> {
        let n = self.n();
        let miss = |k: usize, want: usize| -> Result<f64> {
            let law = pair_distance_distribution(n, k, self.decoder.gamma)?;
            Ok(law.mass(|d| {
                let dec = self.decoder.decide(d);
                dec.outside || (dec.bit == 1) != (want == EQUAL_EDGE)
            }))
        };
        let equal = miss(0, EQUAL_EDGE)?;
        let mut distant = 0.0f64;
        for k in self.codebook.min_distance()..=n {
            distant = distant.max(miss(k, DISTANT_EDGE)?);
        }
        Ok(vec![equal, distant])
    }

    /// Expands everything on full word alphabets. Requires `4^n` to fit the
    /// alphabet cap.
    pub fn materialize(&self) -> Result<MaterializedExample> {
        let n = self.n();
        let size = if n < 64 { 1u128 << (2 * n) } else { u128::MAX };
        if size > MAX_ALPHABET as u128 {
            return Err(Error::Capacity {
                what: "word-pair alphabet".into(),
                size,
                cap: MAX_ALPHABET as u128,
            });
        }
        let m = self.codebook.len();
        let words = word_alphabet(n)?;
        let msgs = Alphabet::messages(m)?;
        let nw = words.len();
        let index: Vec<usize> = self
            .codebook
            .words()
            .iter()
            .map(|w| w.index(n) as usize)
            .collect();
        let enc = Channel::from_map(msgs.clone(), words.clone(), &index)?;
        let bsc = bsc_words(n, self.decoder.gamma, &words)?;
        let phi = Channel::tensor(&bsc, &bsc)?;

        let g1 = Hypergraph::new(
            words.product(&msgs)?,
            split_pairs(m, |a, b| index[a] * m + b),
        )?;
        let g2 = Hypergraph::new(
            msgs.product(&words)?,
            split_pairs(m, |a, b| b * nw + index[a]),
        )?;
        let all: Vec<BitWord> = (0..nw as u64).map(|i| BitWord::from_index(i, n)).collect();
        let mut f_edges = vec![Vec::new(), Vec::new()];
        let mut d_edges = vec![Vec::new(), Vec::new()];
        for (i, x) in all.iter().enumerate() {
            for (j, y) in all.iter().enumerate() {
                if let Some(e) = self.f_edge_of(x, y) {
                    f_edges[e].push(i * nw + j);
                }
                if let Some(e) = self.d_edge_of(x, y) {
                    d_edges[e].push(i * nw + j);
                }
            }
        }
        let pair_alphabet = words.product(&words)?;
        let nonempty = |edges: Vec<Vec<usize>>| edges.into_iter().filter(|e| !e.is_empty()).collect();
        Ok(MaterializedExample {
            enc,
            phi,
            h: self.h.clone(),
            g1,
            g2,
            f: Hypergraph::new(pair_alphabet.clone(), nonempty(f_edges))?,
            d: Hypergraph::new(pair_alphabet, nonempty(d_edges))?,
        })
    }
}

/// Diagonal message pairs, then the others, mapped to vertex indices.
fn split_pairs(m: usize, vertex: impl Fn(usize, usize) -> usize) -> Vec<Vec<usize>> {
    let diag = (0..m).map(|a| vertex(a, a)).collect();
    let off = (0..m)
        .flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| (a, b)))
        .map(|(a, b)| vertex(a, b))
        .collect();
    vec![diag, off]
}

/// All `n`-bit words as bit strings, in row-major order.
pub fn word_alphabet(n: usize) -> Result<Alphabet> {
    if n == 0 || n > 20 {
        return Err(Error::Range(format!("word alphabet needs 1 <= n <= 20, got {n}")));
    }
    Alphabet::new((0..1u64 << n).map(|i| BitWord::from_index(i, n).to_bits(n)))
}

/// `BSC(gamma)^n` on a word alphabet.
pub fn bsc_words(n: usize, gamma: f64, words: &Alphabet) -> Result<Channel> {
    let single = Channel::bsc(gamma)?;
    let power = single.power(n)?;
    let rows = power.rows().map(<[f64]>::to_vec).collect();
    Channel::new(words.clone(), words.clone(), rows)
}

/// Every object of the example on explicit alphabets.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterializedExample {
    /// `m ↦ x_m`.
    pub enc: Channel,
    /// `BSC^n ⊗ BSC^n`.
    pub phi: Channel,
    pub h: Hypergraph,
    pub g1: Hypergraph,
    pub g2: Hypergraph,
    pub f: Hypergraph,
    pub d: Hypergraph,
}

#[cfg(test)]
mod tests {
    use super::super::codebook::{gen_codebook, Strategy};
    use super::*;

    fn repetition() -> ExampleHypergraphs {
        let cb = gen_codebook(6, 1.0, 2, 0, Strategy::LexicographicGreedy).unwrap();
        ExampleHypergraphs::new(cb, 0.03, 0.5, DecoderMode::OneSidedThreshold).unwrap()
    }

    #[test]
    fn repetition_structure() {
        let ex = repetition();
        assert_eq!(ex.h.edge_count(), 2);
        assert!(ex.c.is_partition());
        assert_eq!(ex.c.edges(), &[vec![0, 3], vec![1, 2]]);
        assert_eq!(ex.g1.edges(), &[vec![0, 3], vec![1, 2]]);
    }

    #[test]
    fn epsilon_limit() {
        let cb = gen_codebook(6, 1.0, 2, 0, Strategy::LexicographicGreedy).unwrap();
        let max = super::super::formulas::epsilon_max(1.0, 0.03).unwrap();
        assert!(matches!(
            ExampleHypergraphs::new(cb.clone(), 0.03, max, DecoderMode::TwoSidedWindows),
            Err(Error::EpsilonTooLarge { .. })
        ));
        assert!(ExampleHypergraphs::new(cb, 0.03, 0.9 * max, DecoderMode::TwoSidedWindows).is_ok());
    }

    #[test]
    fn materialized_shapes() {
        let ex = repetition();
        let mat = ex.materialize().unwrap();
        assert_eq!(mat.phi.input().len(), 4096);
        assert_eq!(mat.g1.vertex_count(), 128);
        assert_eq!(mat.g1.edges(), &[vec![0, 127], vec![1, 126]]);
        assert_eq!(mat.g2.edges(), &[vec![0, 127], vec![63, 64]]);
        // equal pairs, complementary pairs; everything else is isolated
        assert_eq!(mat.f.edge(0).len(), 64);
        assert_eq!(mat.f.edge(1).len(), 64);
        assert!(!mat.f.is_partition() && mat.f.has_disjoint_edges());
        // threshold 0: D splits all pairs into equal and unequal
        assert!(mat.d.is_partition());
        assert_eq!(mat.d.edge(0).len(), 64);
        assert_eq!(mat.enc.as_function().unwrap().as_slice(), &[0, 63]);
    }

    #[test]
    fn repetition_channel_lambda() {
        let lam = repetition().channel_lambda().unwrap();
        let b: f64 = 0.0582;
        assert!((lam[EQUAL_EDGE] - (1.0 - (1.0 - b).powi(6))).abs() < 1e-12);
        assert!((lam[DISTANT_EDGE] - b.powi(6)).abs() < 1e-15);
    }
}
