//! Random instance builders and brute-force oracles shared by the
//! integration tests. Everything is driven by an explicit seed so proptest
//! only has to shrink integers.

#![allow(dead_code)]

use lhc_kit::bipartite::BranchSwapInstance;
use lhc_kit::code_bridge::Hom;
use lhc_kit::{Alphabet, Channel, EdgeMap, FunctionCode, FunctionTable, Hypergraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn alpha(n: usize) -> Alphabet {
    Alphabet::range(n).unwrap()
}

/// A probability row; one in five rows is deterministic and some entries
/// are exactly zero.
pub fn random_row<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    if rng.random_bool(0.2) {
        let mut row = vec![0.0; m];
        row[rng.random_range(0..m)] = 1.0;
        return row;
    }
    let w: Vec<f64> = (0..m)
        .map(|_| if rng.random_bool(0.15) { 0.0 } else { rng.random::<f64>() + 1e-3 })
        .collect();
    let s: f64 = w.iter().sum();
    if s == 0.0 {
        let mut row = vec![0.0; m];
        row[0] = 1.0;
        return row;
    }
    w.iter().map(|x| x / s).collect()
}

pub fn random_channel<R: Rng>(rng: &mut R, n: usize, m: usize) -> Channel {
    let rows = (0..n).map(|_| random_row(rng, m)).collect();
    Channel::new(alpha(n), alpha(m), rows).unwrap()
}

/// `k` non-empty sorted blocks covering `0..n`, in order of smallest element.
pub fn random_blocks<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(1 <= k && k <= n);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut blocks: Vec<Vec<usize>> = perm[..k].iter().map(|&v| vec![v]).collect();
    for &v in &perm[k..] {
        blocks[rng.random_range(0..k)].push(v);
    }
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort();
    blocks
}

pub fn random_partition<R: Rng>(rng: &mut R, n: usize, k: usize) -> Hypergraph {
    Hypergraph::partition(alpha(n), random_blocks(rng, n, k)).unwrap()
}

/// Partition of `0..n` with a random number of blocks.
pub fn any_partition<R: Rng>(rng: &mut R, n: usize) -> Hypergraph {
    let k = rng.random_range(1..=n);
    random_partition(rng, n, k)
}

pub fn random_function<R: Rng>(rng: &mut R, na: usize, nb: usize) -> FunctionTable {
    let map = (0..na).map(|_| rng.random_range(0..nb)).collect();
    FunctionTable::new(alpha(na), alpha(nb), map).unwrap()
}

pub fn random_permutation<R: Rng>(rng: &mut R, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    p.shuffle(rng);
    p
}

pub fn random_edge_map<R: Rng>(rng: &mut R, k: usize, l: usize) -> EdgeMap {
    EdgeMap::new((0..k).map(|_| rng.random_range(0..l)).collect(), l).unwrap()
}

/// A stochastic code for `f` over a random channel with `|X|, |Y| <= 3`.
pub fn random_code<R: Rng>(rng: &mut R, f: FunctionTable) -> FunctionCode {
    let (x, y) = (rng.random_range(1..=3), rng.random_range(1..=3));
    let enc = random_channel(rng, f.domain().len(), x);
    let phi = random_channel(rng, x, y);
    let dec = random_channel(rng, y, f.codomain().len());
    FunctionCode::new(f, enc, phi, dec).unwrap()
}

/// Probability that the code outputs `b` on input `a`, by explicit
/// summation over the channel input and output.
pub fn oracle_output_prob(code: &FunctionCode, a: usize, b: usize) -> f64 {
    let (enc, phi, dec) = (code.encoder(), code.channel(), code.decoder());
    let mut p = 0.0;
    for x in 0..phi.input().len() {
        for y in 0..phi.output().len() {
            p += enc.prob(a, x) * phi.prob(x, y) * dec.prob(y, b);
        }
    }
    p
}

/// Error profile indexed by attained values in ascending order.
pub fn oracle_error_profile(code: &FunctionCode) -> Vec<f64> {
    let f = code.function();
    let mut values: Vec<usize> = f.as_slice().to_vec();
    values.sort_unstable();
    values.dedup();
    values
        .iter()
        .map(|&b| {
            (0..f.domain().len())
                .filter(|&a| f.eval(a) == b)
                .map(|a| 1.0 - oracle_output_prob(code, a, b))
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Every total map from `k` edges to `l` edges.
pub fn all_edge_maps(k: usize, l: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..l).map(move |j| {
                    let mut m = m.clone();
                    m.push(j);
                    m
                })
            })
            .collect();
    }
    out
}

/// A sandwich `F -f-> G -gamma-> H -h-> I` with partitions throughout,
/// edge-bijective homomorphisms and `f` onto `V(G)`.
pub struct Sandwich {
    pub f: Hom,
    pub h: Hom,
    pub gamma: Channel,
    pub e_edge: EdgeMap,
    pub big_f: Hypergraph,
    pub g: Hypergraph,
    pub big_h: Hypergraph,
    pub i: Hypergraph,
    pub lambda: Vec<f64>,
}

pub fn random_sandwich<R: Rng>(rng: &mut R) -> Sandwich {
    let k = rng.random_range(1..=3);
    let ng = rng.random_range(k..=4);
    let g = random_partition(rng, ng, k);
    // F covers G: every G vertex has at least one preimage
    let nf = rng.random_range(ng..=5);
    let mut fv: Vec<usize> = (0..ng).chain((ng..nf).map(|_| rng.random_range(0..ng))).collect();
    fv.shuffle(rng);
    let sigma = random_permutation(rng, k);
    let f_blocks: Vec<Vec<usize>> = (0..k)
        .map(|e| (0..nf).filter(|&v| g.contains(sigma[e], fv[v])).collect())
        .collect();
    let big_f = Hypergraph::new(alpha(nf), f_blocks).unwrap();
    let f = Hom {
        vertex_map: fv,
        edge_map: EdgeMap::new(sigma, k).unwrap(),
    };

    let nh = rng.random_range(k..=4);
    let big_h = random_partition(rng, nh, k);
    let ni = rng.random_range(k..=4);
    let i = random_partition(rng, ni, k);
    let tau = random_permutation(rng, k);
    let mut hv = vec![0; nh];
    for (e, verts) in big_h.edges().iter().enumerate() {
        let target = i.edge(tau[e]);
        for &v in verts {
            hv[v] = target[rng.random_range(0..target.len())];
        }
    }
    let h = Hom {
        vertex_map: hv,
        edge_map: EdgeMap::new(tau, k).unwrap(),
    };
    let gamma = random_channel(rng, ng, nh);
    let e_edge = EdgeMap::new(random_permutation(rng, k), k).unwrap();
    let lambda = (0..k).map(|_| rng.random_range(0.0..0.6)).collect();
    Sandwich {
        f,
        h,
        gamma,
        e_edge,
        big_f,
        g,
        big_h,
        i,
        lambda,
    }
}

/// A random decomposition instance: `H` a partition of `|A| <= 5` inputs,
/// `F` a partition of `|Y| <= 5` outputs with the same edge count,
/// `phi : A -> X`, `gamma : X -> Y` with `|X| <= 5`, concentrated enough
/// that the composite often is a good LHC.
pub struct DecomposeInstance {
    pub phi: Channel,
    pub gamma: Channel,
    pub h: Hypergraph,
    pub f: Hypergraph,
    pub e_edge: EdgeMap,
}

/// Row with mass `1 - noise` on `target` and the rest spread at random.
pub fn peaked_row<R: Rng>(rng: &mut R, m: usize, target: usize, noise: f64) -> Vec<f64> {
    let spread = random_row(rng, m);
    (0..m)
        .map(|j| (1.0 - noise) * f64::from(u8::from(j == target)) + noise * spread[j])
        .collect()
}

pub fn random_decompose_instance<R: Rng>(rng: &mut R) -> DecomposeInstance {
    let k = rng.random_range(1..=3);
    let na = rng.random_range(k..=5);
    let nx = rng.random_range(k..=5);
    let ny = rng.random_range(k..=5);
    let h = random_partition(rng, na, k);
    let mid = random_partition(rng, nx, k);
    let f = random_partition(rng, ny, k);
    let e_perm = random_permutation(rng, k);
    let noise = rng.random_range(0.0..0.3);
    let phi_rows = (0..na)
        .map(|a| {
            let e = h.unique_edge_of(a).unwrap();
            let block = mid.edge(e);
            let target = block[rng.random_range(0..block.len())];
            peaked_row(rng, nx, target, noise)
        })
        .collect();
    let gamma_rows = (0..nx)
        .map(|x| {
            let e = mid.unique_edge_of(x).unwrap();
            let block = f.edge(e_perm[e]);
            let target = block[rng.random_range(0..block.len())];
            peaked_row(rng, ny, target, noise)
        })
        .collect();
    DecomposeInstance {
        phi: Channel::new(alpha(na), alpha(nx), phi_rows).unwrap(),
        gamma: Channel::new(alpha(nx), alpha(ny), gamma_rows).unwrap(),
        h,
        f,
        e_edge: EdgeMap::new(e_perm, k).unwrap(),
    }
}

/// Shape-valid branch-swap instance built from explicit random parts.
pub fn random_swap_instance<R: Rng>(rng: &mut R) -> BranchSwapInstance {
    lhc_kit::bipartite::random_branch_swap_instance(rng)
}

/// `Binomial(n, p)` pmf by multiplicative recursion, independent of the
/// library's log-domain version.
pub fn oracle_binomial(n: usize, p: f64) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    let mut c = 1.0f64;
    for k in 0..=n {
        out[k] = c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
        c = c * (n - k) as f64 / (k + 1) as f64;
    }
    out
}

/// Output distance law as a direct convolution of the agreeing and the
/// disagreeing positions.
pub fn oracle_distance_law(n: usize, k: usize, gamma: f64) -> Vec<f64> {
    let b = 2.0 * gamma * (1.0 - gamma);
    let same = oracle_binomial(n - k, b);
    let diff = oracle_binomial(k, 1.0 - b);
    let mut out = vec![0.0; n + 1];
    for (i, p) in same.iter().enumerate() {
        for (j, q) in diff.iter().enumerate() {
            out[i + j] += p * q;
        }
    }
    out
}

/// A code whose stochastic parts stay close to deterministic maps that
/// compute `f` exactly over an identity-like channel.
pub fn concentrated_code<R: Rng>(r: &mut R, f: FunctionTable) -> FunctionCode {
    let nb = f.codomain().len();
    let noise = r.random_range(0.0..0.1);
    let enc = Channel::new(
        f.domain().clone(),
        alpha(nb),
        (0..f.domain().len()).map(|a| peaked_row(r, nb, f.eval(a), noise)).collect(),
    )
    .unwrap();
    let phi = Channel::new(alpha(nb), alpha(nb), (0..nb).map(|x| peaked_row(r, nb, x, noise)).collect()).unwrap();
    let dec = Channel::new(alpha(nb), f.codomain().clone(), (0..nb).map(|y| peaked_row(r, nb, y, noise)).collect()).unwrap();
    FunctionCode::new(f, enc, phi, dec).unwrap()
}
