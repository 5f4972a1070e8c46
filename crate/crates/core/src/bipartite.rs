//! Channels with two independently encoded branches.

use crate::alphabet::Alphabet;
use crate::channel::Channel;
use crate::code_bridge::{code_error_profile, FunctionCode};
use crate::decompose::{decompose, DecompositionResult};
use crate::error::{Error, Result};
use crate::hypergraph::{characteristic_hypergraph, EdgeMap, FunctionTable, Hypergraph};
use crate::lhc::{find_bijective_edge_map, infer_edge_map, LhcCertificate, VERIFY_TOL};
use crate::rng::RngStreams;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

fn id_left(alphabet: &Alphabet, phi: &Channel) -> Result<Channel> {
    Channel::tensor(&Channel::identity(alphabet.clone()), phi)
}

fn id_right(phi: &Channel, alphabet: &Alphabet) -> Result<Channel> {
    Channel::tensor(phi, &Channel::identity(alphabet.clone()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiDetSplit {
    /// On `A1 × B2`.
    pub g1: Hypergraph,
    /// On `B1 × A2`.
    pub g2: Hypergraph,
    /// `id ⊗ φ2 : H → G1` at `mu`.
    pub cert_g1: LhcCertificate,
    /// `φ1 ⊗ id : H → G2` at `mu`.
    pub cert_g2: LhcCertificate,
    pub first: DecompositionResult,
    pub second: DecompositionResult,
}

/// Splits `φ1 ⊗ φ2 : H → F` (passing at `lambda`) through either branch,
/// with `kappa = 1/2` and the caller's `mu >= 2 lambda`.
pub fn semi_det_split(
    phi1: &Channel,
    phi2: &Channel,
    h: &Hypergraph,
    f: &Hypergraph,
    e_edge: &EdgeMap,
    mu: &[f64],
    lambda: &[f64],
) -> Result<SemiDetSplit> {
    let half = vec![0.5; h.edge_count()];
    let first = decompose(
        &id_left(phi1.input(), phi2)?,
        &id_right(phi1, phi2.output())?,
        h,
        f,
        e_edge,
        &half,
        mu,
        lambda,
    )?;
    let second = decompose(
        &id_right(phi1, phi2.input())?,
        &id_left(phi1.output(), phi2)?,
        h,
        f,
        e_edge,
        &half,
        mu,
        lambda,
    )?;
    Ok(SemiDetSplit {
        g1: first.g.clone(),
        g2: second.g.clone(),
        cert_g1: first.cert_phi.clone(),
        cert_g2: second.cert_phi.clone(),
        first,
        second,
    })
}

/// A self-contained instance of the branch-swap claim: `id ⊗ φ` from `H`
/// to `G` and from `I` to `F`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchSwapInstance {
    pub phi: Channel,
    pub h: Hypergraph,
    pub g: Hypergraph,
    pub i: Hypergraph,
    pub f: Hypergraph,
    pub lambda: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchSwapReport {
    /// Certificate of `id ⊗ φ : H → G` under the smallest admissible
    /// bijective edge map, if one exists.
    pub hypothesis: Option<LhcCertificate>,
    /// Same for `id ⊗ φ : I → F`.
    pub conclusion: Option<LhcCertificate>,
    /// JSON of the instance when the hypothesis holds and the conclusion
    /// does not.
    pub counterexample: Option<String>,
}

impl BranchSwapReport {
    pub fn hypothesis_holds(&self) -> bool {
        self.hypothesis.is_some()
    }

    pub fn conclusion_holds(&self) -> bool {
        self.conclusion.is_some()
    }
}

fn split_factor(total: usize, known: usize, what: &str) -> Result<usize> {
    if known == 0 || total % known != 0 {
        return Err(Error::Shape(format!(
            "{what}: {total} vertices are not a product with a factor of size {known}"
        )));
    }
    Ok(total / known)
}

/// Checks whether `id_{A1} ⊗ φ : H → G` and `id_{X1} ⊗ φ : I → F` are
/// edge-bijective LHCs at `lambda`, where `V(H) = A1 × A2`,
/// `V(G) = A1 × X2`, `V(I) = X1 × A2`, `V(F) = X1 × X2` and `φ : A2 → X2`.
/// `lambda` is applied position by position to `E(H)` and to `E(I)`.
pub fn check_branch_swap(instance: &BranchSwapInstance) -> Result<BranchSwapReport> {
    let BranchSwapInstance { phi, h, g, i, f, lambda } = instance;
    let (a2, x2) = (phi.input().len(), phi.output().len());
    let a1 = split_factor(h.vertex_count(), a2, "H")?;
    let x1 = split_factor(i.vertex_count(), a2, "I")?;
    if g.vertex_count() != a1 * x2 || f.vertex_count() != x1 * x2 {
        return Err(Error::Shape(format!(
            "expected |V(G)| = {} and |V(F)| = {}, got {} and {}",
            a1 * x2,
            x1 * x2,
            g.vertex_count(),
            f.vertex_count()
        )));
    }
    for (name, hg) in [("H", h), ("G", g), ("I", i), ("F", f)] {
        hg.require_partition(name)?;
        if hg.edge_count() != h.edge_count() {
            return Err(Error::EdgeCountMismatch(format!(
                "{name} has {} edges, H has {}",
                hg.edge_count(),
                h.edge_count()
            )));
        }
    }
    let left = id_left(&Alphabet::range(a1)?, phi)?;
    let right = id_left(&Alphabet::range(x1)?, phi)?;
    let hypothesis = find_bijective_edge_map(&left, h, g, lambda)?;
    let conclusion = find_bijective_edge_map(&right, i, f, lambda)?;
    let counterexample = if hypothesis.is_some() && conclusion.is_none() {
        Some(serde_json::to_string(instance)?)
    } else {
        None
    };
    Ok(BranchSwapReport {
        hypothesis,
        conclusion,
        counterexample,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FalsifyReport {
    pub seed: u64,
    pub instances: usize,
    pub hypothesis_held: usize,
    pub conclusion_held: usize,
    /// Instances where the hypothesis held but the conclusion did not.
    pub counterexamples: Vec<String>,
}

fn random_partition<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut blocks: Vec<Vec<usize>> = order[..k].iter().map(|&v| vec![v]).collect();
    for &v in &order[k..] {
        blocks[rng.random_range(0..k)].push(v);
    }
    blocks
}

fn random_channel<R: Rng>(rng: &mut R, n: usize, m: usize) -> Channel {
    let deterministic = rng.random_bool(0.3);
    let rows = (0..n)
        .map(|_| {
            if deterministic {
                let mut row = vec![0.0; m];
                row[rng.random_range(0..m)] = 1.0;
                return row;
            }
            let w: Vec<f64> = (0..m).map(|_| rng.random::<f64>().powi(3)).collect();
            let total: f64 = w.iter().sum();
            if total == 0.0 {
                let mut row = vec![0.0; m];
                row[0] = 1.0;
                return row;
            }
            let mut row: Vec<f64> = w.iter().map(|x| x / total).collect();
            let drift: f64 = 1.0 - row.iter().sum::<f64>();
            row[0] += drift;
            row
        })
        .collect();
    Channel::new(Alphabet::range(n).unwrap(), Alphabet::range(m).unwrap(), rows)
        .expect("normalized rows")
}

/// Draws a shape-valid random instance. Alphabet sizes lie in `1..=3` and
/// there are at most 3 edges. A share of instances use the optimal error
/// profile of `H → G` as `lambda`, or reuse `H`, `G` as `I`, `F`, so that
/// the hypothesis is known to hold.
pub fn random_branch_swap_instance<R: Rng>(rng: &mut R) -> BranchSwapInstance {
    let (a1, a2, x2) = (rng.random_range(1..=3), rng.random_range(1..=3), rng.random_range(1..=3));
    let mode = rng.random_range(0..3);
    let x1 = if mode == 2 { a1 } else { rng.random_range(1..=3) };
    let k_max = [a1 * a2, a1 * x2, x1 * a2, x1 * x2, 3].into_iter().min().unwrap();
    let k = rng.random_range(1..=k_max);
    let phi = random_channel(rng, a2, x2);
    let part = |rng: &mut R, n: usize| {
        Hypergraph::partition(Alphabet::range(n).unwrap(), random_partition(rng, n, k)).unwrap()
    };
    let h = part(rng, a1 * a2);
    let g = part(rng, a1 * x2);
    let (i, f) = if mode == 2 {
        (h.clone(), g.clone())
    } else {
        (part(rng, x1 * a2), part(rng, x1 * x2))
    };
    let lambda = if mode == 0 {
        (0..k).map(|_| rng.random_range(0.0..0.5)).collect()
    } else {
        let left = id_left(&Alphabet::range(a1).unwrap(), &phi).unwrap();
        infer_edge_map(&left, &h, &g, true).unwrap().1
    };
    BranchSwapInstance { phi, h, g, i, f, lambda }
}

/// Runs the branch-swap check on `instances` random instances in
/// parallel. Instance `j` draws from stream `(seed, "falsify", j)`, so the
/// report does not depend on the thread count.
pub fn falsify_branch_swap(instances: usize, seed: u64) -> Result<FalsifyReport> {
    let streams = RngStreams::new(seed);
    let reports: Vec<BranchSwapReport> = (0..instances)
        .into_par_iter()
        .map(|j| {
            let mut rng = streams.stream("falsify", j as u64);
            check_branch_swap(&random_branch_swap_instance(&mut rng))
        })
        .collect::<Result<_>>()?;
    let mut out = FalsifyReport {
        seed,
        instances,
        ..Default::default()
    };
    for r in reports {
        out.hypothesis_held += usize::from(r.hypothesis_holds());
        out.conclusion_held += usize::from(r.hypothesis_holds() && r.conclusion_holds());
        out.counterexamples.extend(r.counterexample);
    }
    Ok(out)
}

/// An identification code assembled from two per-branch encoders.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledId {
    pub code: FunctionCode,
    /// `alpha + beta + mu`, indexed by `E(H)`.
    pub bound: Vec<f64>,
    /// Exact error profile, when the composite fits the size caps.
    pub exact_error: Option<Vec<f64>>,
    /// `E(H) → E(D)` along `H → G1 → F → D`.
    pub chain: EdgeMap,
    pub cert_enc1: LhcCertificate,
    pub cert_enc2: LhcCertificate,
    pub cert_swap: LhcCertificate,
    pub cert_channel: LhcCertificate,
}

fn require_two_edges(name: &str, hg: &Hypergraph) -> Result<()> {
    if hg.edge_count() != 2 {
        return Err(Error::EdgeCountMismatch(format!(
            "{name} has {} edges, expected 2",
            hg.edge_count()
        )));
    }
    Ok(())
}

fn require_vertices(name: &str, hg: &Hypergraph, n: usize) -> Result<()> {
    if hg.vertex_count() != n {
        return Err(Error::Shape(format!(
            "{name} has {} vertices, expected {n}",
            hg.vertex_count()
        )));
    }
    Ok(())
}

fn require_map(cert: Option<LhcCertificate>, what: &str) -> Result<LhcCertificate> {
    cert.ok_or_else(|| Error::HypothesisViolated(format!("{what} has no bijective edge map at the given errors")))
}

/// Builds `(Enc1 ⊗ Enc2, Dec)` for identification over `φ : X1 × X2 → Y`.
///
/// Verifies `Enc1 ⊗ id : H → G1` at `alpha`, `id ⊗ Enc2 : H → G2` at
/// `beta`, `id ⊗ Enc2 : G1 → F` at the transported `beta`, and
/// `φ : F → D` at the transported `mu`; all vectors are indexed by `E(H)`.
/// `Dec` outputs 1 on the edge of `D` reached from the diagonal of `H`,
/// and 0 elsewhere.
#[allow(clippy::too_many_arguments)]
pub fn assemble_id_code(
    enc1: &Channel,
    enc2: &Channel,
    phi: &Channel,
    h: &Hypergraph,
    g1: &Hypergraph,
    g2: &Hypergraph,
    f: &Hypergraph,
    d: &Hypergraph,
    alpha: &[f64],
    beta: &[f64],
    mu: &[f64],
) -> Result<AssembledId> {
    let m = enc1.input().len();
    if enc2.input().len() != m {
        return Err(Error::Shape(format!(
            "encoders take {m} and {} messages",
            enc2.input().len()
        )));
    }
    let f_id = FunctionTable::identification(m)?;
    let expected = characteristic_hypergraph(&f_id);
    if h.vertex_count() != m * m || h.edges() != expected.edges() {
        return Err(Error::HypothesisViolated(
            "H must be the characteristic hypergraph of identification".into(),
        ));
    }
    require_two_edges("D", d)?;
    for (name, hg) in [("G1", g1), ("G2", g2), ("F", f)] {
        require_two_edges(name, hg)?;
    }
    let (x1, x2) = (enc1.output().len(), enc2.output().len());
    require_vertices("G1", g1, x1 * m)?;
    require_vertices("G2", g2, m * x2)?;
    require_vertices("F", f, x1 * x2)?;
    require_vertices("D", d, phi.output().len())?;
    if phi.input().len() != x1 * x2 {
        return Err(Error::Shape(format!(
            "channel takes {} symbols, encoders produce {}",
            phi.input().len(),
            x1 * x2
        )));
    }
    for (name, v) in [("alpha", alpha), ("beta", beta), ("mu", mu)] {
        if v.len() != 2 {
            return Err(Error::Shape(format!("{name} has {} entries, expected 2", v.len())));
        }
    }
    if !d.has_disjoint_edges() {
        return Err(Error::ChainInconsistent("the two edges of D overlap".into()));
    }

    let msgs = enc1.input().clone();
    let cert_enc1 = require_map(
        find_bijective_edge_map(&id_right(enc1, &msgs)?, h, g1, alpha)?,
        "Enc1 ⊗ id : H → G1",
    )?;
    let cert_enc2 = require_map(
        find_bijective_edge_map(&id_left(&msgs, enc2)?, h, g2, beta)?,
        "id ⊗ Enc2 : H → G2",
    )?;
    let a = cert_enc1.edge_map.clone();
    let a_inv = a.inverse()?;
    let beta_g1: Vec<f64> = (0..2).map(|e| beta[a_inv.apply(e)]).collect();
    let cert_swap = require_map(
        find_bijective_edge_map(&id_left(enc1.output(), enc2)?, g1, f, &beta_g1)?,
        "id ⊗ Enc2 : G1 → F",
    )?;
    let ca = a.then(&cert_swap.edge_map)?;
    let ca_inv = ca.inverse()?;
    let mu_f: Vec<f64> = (0..2).map(|e| mu[ca_inv.apply(e)]).collect();
    let cert_channel = require_map(find_bijective_edge_map(phi, f, d, &mu_f)?, "φ : F → D")?;
    let chain = ca.then(&cert_channel.edge_map)?;
    if !chain.is_bijective() {
        return Err(Error::ChainInconsistent(format!("chain {:?}", chain.as_slice())));
    }

    // H's diagonal is the preimage of 1, which is edge 1
    let accept = chain.apply(1);
    let dec_map: Vec<usize> = (0..phi.output().len())
        .map(|y| usize::from(d.contains(accept, y)))
        .collect();
    let decoder = Channel::from_map(phi.output().clone(), Alphabet::binary(), &dec_map)?;
    let encoder = Channel::tensor(enc1, enc2)?;
    let code = FunctionCode::new(f_id, encoder, phi.clone(), decoder)?;
    let bound: Vec<f64> = (0..2).map(|e| alpha[e] + beta[e] + mu[e]).collect();
    let exact_error = match code_error_profile(&code) {
        Ok(p) => Some(p),
        Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(p) = &exact_error {
        if let Some(e) = (0..2).find(|&e| p[e] > bound[e] + VERIFY_TOL) {
            return Err(Error::Counterexample {
                what: format!("assembled code has error {} > {} on edge {e}", p[e], bound[e]),
                dump: serde_json::json!({
                    "enc1": enc1, "enc2": enc2, "phi": phi,
                    "h": h, "g1": g1, "g2": g2, "f": f, "d": d,
                    "alpha": alpha, "beta": beta, "mu": mu,
                })
                .to_string(),
            });
        }
    }
    Ok(AssembledId {
        code,
        bound,
        exact_error,
        chain,
        cert_enc1,
        cert_enc2,
        cert_swap,
        cert_channel,
    })
}
