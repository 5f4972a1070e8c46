//! Exact verification of locally homomorphic channels.
//!
//! A channel `phi : V(G) -> V(H)` is locally homomorphic with edge map
//! `f_E` and error vector `lambda` when every non-isolated vertex `a`
//! lands in the intersection of `f_E(A)` over all edges `A ∋ a` with
//! probability at least `1 - min_{A ∋ a} lambda_A`. Vertices in no edge
//! are unconstrained.

use crate::assignment::{bottleneck_assignment, lexicographic_matching};
use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeMap, Hypergraph};
use serde::{Deserialize, Serialize};

/// Slack allowed when comparing a success probability to its requirement.
pub const VERIFY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The first vertex whose success probability falls short.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub vertex: usize,
    /// Edge containing `vertex` with the smallest allowed error.
    pub edge: usize,
    pub success: f64,
    pub required: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhcCertificate {
    pub edge_map: EdgeMap,
    pub lambda: Vec<f64>,
    /// Pointwise-minimal error vector for this edge map.
    pub lambda_profile: Vec<f64>,
    /// `None` for isolated vertices.
    pub per_vertex_success: Vec<Option<f64>>,
    pub verdict: Verdict,
    pub edge_bijective: bool,
    pub violation: Option<Violation>,
}

impl LhcCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

pub(crate) fn check_channel_shape(phi: &Channel, g: &Hypergraph, h: &Hypergraph) -> Result<()> {
    if phi.input().len() != g.vertex_count() || phi.output().len() != h.vertex_count() {
        return Err(Error::Shape(format!(
            "channel is {} -> {} symbols, hypergraphs have {} -> {} vertices",
            phi.input().len(),
            phi.output().len(),
            g.vertex_count(),
            h.vertex_count()
        )));
    }
    Ok(())
}

fn check_shapes(phi: &Channel, g: &Hypergraph, h: &Hypergraph, f_e: &EdgeMap) -> Result<()> {
    check_channel_shape(phi, g, h)?;
    f_e.check_shape(g, h)
}

fn success_unchecked(phi: &Channel, g: &Hypergraph, h: &Hypergraph, f_e: &EdgeMap, a: usize) -> Option<f64> {
    let mut targets: Vec<usize> = g.edges_containing(a).iter().map(|&e| f_e.apply(e)).collect();
    targets.sort_unstable();
    targets.dedup();
    match targets.as_slice() {
        [] => None,
        [t] => Some(phi.mass(a, h.edge(*t))),
        [first, rest @ ..] => {
            let inter: Vec<usize> = h
                .edge(*first)
                .iter()
                .copied()
                .filter(|&y| rest.iter().all(|&t| h.contains(t, y)))
                .collect();
            Some(phi.mass(a, &inter))
        }
    }
}

/// Probability that `phi(a)` lies in every `f_E(A)` with `a ∈ A`.
pub fn success_prob(phi: &Channel, g: &Hypergraph, h: &Hypergraph, f_e: &EdgeMap, a: usize) -> Result<f64> {
    check_shapes(phi, g, h, f_e)?;
    if a >= g.vertex_count() {
        return Err(Error::Shape(format!("vertex {a} out of range")));
    }
    success_unchecked(phi, g, h, f_e, a).ok_or(Error::IsolatedVertex(a))
}

fn all_successes(phi: &Channel, g: &Hypergraph, h: &Hypergraph, f_e: &EdgeMap) -> Vec<Option<f64>> {
    (0..g.vertex_count())
        .map(|a| success_unchecked(phi, g, h, f_e, a))
        .collect()
}

fn profile_from(g: &Hypergraph, successes: &[Option<f64>]) -> Vec<f64> {
    g.edges()
        .iter()
        .map(|edge| {
            edge.iter()
                .map(|&a| 1.0 - successes[a].expect("edge vertices are covered"))
                .fold(0.0, f64::max)
        })
        .collect()
}

/// `lambda_A = max_{a ∈ A} (1 - p_a)`: the smallest error vector for which
/// the certificate passes.
pub fn lambda_profile(phi: &Channel, g: &Hypergraph, h: &Hypergraph, f_e: &EdgeMap) -> Result<Vec<f64>> {
    check_shapes(phi, g, h, f_e)?;
    Ok(profile_from(g, &all_successes(phi, g, h, f_e)))
}

pub fn verify_lhc(
    phi: &Channel,
    g: &Hypergraph,
    h: &Hypergraph,
    f_e: &EdgeMap,
    lambda: &[f64],
) -> Result<LhcCertificate> {
    check_shapes(phi, g, h, f_e)?;
    if lambda.len() != g.edge_count() {
        return Err(Error::Shape(format!(
            "lambda has {} entries for {} edges",
            lambda.len(),
            g.edge_count()
        )));
    }
    if let Some((i, l)) = lambda
        .iter()
        .enumerate()
        .find(|(_, l)| !(0.0..=1.0).contains(*l))
    {
        return Err(Error::Range(format!("lambda[{i}] = {l} outside [0, 1]")));
    }
    let successes = all_successes(phi, g, h, f_e);
    let violation = successes.iter().enumerate().find_map(|(a, p)| {
        let p = (*p)?;
        let (edge, min_lambda) = g
            .edges_containing(a)
            .iter()
            .map(|&e| (e, lambda[e]))
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        let required = 1.0 - min_lambda;
        (p < required - VERIFY_TOL).then_some(Violation {
            vertex: a,
            edge,
            success: p,
            required,
        })
    });
    Ok(LhcCertificate {
        edge_map: f_e.clone(),
        lambda: lambda.to_vec(),
        lambda_profile: profile_from(g, &successes),
        per_vertex_success: successes,
        verdict: if violation.is_none() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        edge_bijective: f_e.is_bijective(),
        violation,
    })
}

/// `cost[A][B] = max_{a ∈ A} (1 - Pr{phi(a) ∈ B})` for source edges with
/// pairwise disjoint supports.
pub fn cost_matrix(phi: &Channel, g: &Hypergraph, h: &Hypergraph) -> Result<Vec<Vec<f64>>> {
    g.require_disjoint("source hypergraph")?;
    h.require_disjoint("target hypergraph")?;
    check_channel_shape(phi, g, h)?;
    Ok(g.edges()
        .iter()
        .map(|a_edge| {
            h.edges()
                .iter()
                .map(|b_edge| {
                    a_edge
                        .iter()
                        .map(|&a| 1.0 - phi.mass(a, b_edge))
                        .fold(0.0, f64::max)
                })
                .collect()
        })
        .collect())
}

/// Edge map minimizing the largest entry of the error profile, together
/// with that profile.
///
/// Without `require_bijective` each source edge independently takes its
/// cheapest target (lowest index on ties), which is pointwise optimal. With
/// it, a bottleneck assignment is solved and the lexicographically smallest
/// optimal permutation is returned.
pub fn infer_edge_map(
    phi: &Channel,
    g: &Hypergraph,
    h: &Hypergraph,
    require_bijective: bool,
) -> Result<(EdgeMap, Vec<f64>)> {
    if h.edge_count() == 0 {
        return Err(Error::SizeMismatch("target hypergraph has no edges".into()));
    }
    let cost = cost_matrix(phi, g, h)?;
    let map: Vec<usize> = if require_bijective {
        if g.edge_count() != h.edge_count() {
            return Err(Error::SizeMismatch(format!(
                "bijective edge map needs equal edge counts, got {} and {}",
                g.edge_count(),
                h.edge_count()
            )));
        }
        bottleneck_assignment(&cost)
    } else {
        cost.iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .min_by(|x, y| x.1.total_cmp(y.1).then(x.0.cmp(&y.0)))
                    .map(|(j, _)| j)
                    .expect("target has edges")
            })
            .collect()
    };
    let lambda = map.iter().enumerate().map(|(i, &j)| cost[i][j]).collect();
    Ok((EdgeMap::new(map, h.edge_count())?, lambda))
}

/// Searches for a bijective edge map under which `phi` is locally
/// homomorphic at `lambda`. Returns the certificate of the
/// lexicographically smallest such map, or `None`.
pub fn find_bijective_edge_map(
    phi: &Channel,
    g: &Hypergraph,
    h: &Hypergraph,
    lambda: &[f64],
) -> Result<Option<LhcCertificate>> {
    if g.edge_count() != h.edge_count() {
        return Err(Error::SizeMismatch(format!(
            "bijective edge map needs equal edge counts, got {} and {}",
            g.edge_count(),
            h.edge_count()
        )));
    }
    if lambda.len() != g.edge_count() {
        return Err(Error::Shape(format!(
            "lambda has {} entries for {} edges",
            lambda.len(),
            g.edge_count()
        )));
    }
    let cost = cost_matrix(phi, g, h)?;
    let Some(map) = lexicographic_matching(g.edge_count(), |i, j| cost[i][j] <= lambda[i] + VERIFY_TOL)
    else {
        return Ok(None);
    };
    let f_e = EdgeMap::new(map, h.edge_count())?;
    let cert = verify_lhc(phi, g, h, &f_e, lambda)?;
    debug_assert!(cert.passed());
    Ok(Some(cert))
}

/// Transports an error vector indexed by the source edges of `m` to the
/// target edges of a bijective `m`.
pub fn transport(lambda: &[f64], m: &EdgeMap) -> Result<Vec<f64>> {
    let inv = m.inverse()?;
    Ok((0..m.target_edge_count()).map(|b| lambda[inv.apply(b)]).collect())
}
