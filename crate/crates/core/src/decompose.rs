//! Splitting a locally homomorphic composite `γ ∘ φ` through the
//! intermediate alphabet, and the consequences for function codes.

use crate::channel::Channel;
use crate::code_bridge::{code_error_profile, FunctionCode};
use crate::error::{Error, Result};
use crate::hypergraph::{characteristic_hypergraph, image_singletons, EdgeMap, Hypergraph};
use crate::lhc::{verify_lhc, LhcCertificate, VERIFY_TOL};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionResult {
    /// Intermediate hypergraph over `φ`'s output alphabet; symbols in no
    /// block are isolated.
    pub g: Hypergraph,
    /// `A ↦ B_A`, which is the identity on edge indices.
    pub edge_map_phi: EdgeMap,
    /// `e_E ∘ f_E⁻¹`.
    pub edge_map_gamma: EdgeMap,
    pub cert_phi: LhcCertificate,
    pub cert_gamma: LhcCertificate,
}

#[derive(Serialize)]
struct Instance<'a> {
    phi: &'a Channel,
    gamma: &'a Channel,
    h: &'a Hypergraph,
    f: &'a Hypergraph,
    e_edge: &'a EdgeMap,
    kappa: &'a [f64],
    mu: &'a [f64],
    lambda: &'a [f64],
}

fn check_len(name: &str, v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::Shape(format!("{name} has {} entries for {n} edges", v.len())));
    }
    Ok(())
}

/// Builds `B_A = {b : Pr(γ(b) ∈ e_E(A)) > 1 - κ_A}` for every edge `A` of
/// `H` and certifies `φ : H → G` at `mu` and `γ : G → F` at `kappa`.
///
/// All three vectors are indexed by the edges of `H`. Requires
/// `γ ∘ φ : H → F` to pass at `lambda` with bijective `e_E`,
/// `lambda < 1/2`, `0 < kappa <= 1/2` and `lambda <= kappa * mu`.
#[allow(clippy::too_many_arguments)]
pub fn decompose(
    phi: &Channel,
    gamma: &Channel,
    h: &Hypergraph,
    f: &Hypergraph,
    e_edge: &EdgeMap,
    kappa: &[f64],
    mu: &[f64],
    lambda: &[f64],
) -> Result<DecompositionResult> {
    h.require_partition("H")?;
    f.require_disjoint("F")?;
    e_edge.check_shape(h, f)?;
    if !e_edge.is_bijective() {
        return Err(Error::RequiresBijective(format!("e_E = {:?}", e_edge.as_slice())));
    }
    let n = h.edge_count();
    check_len("kappa", kappa, n)?;
    check_len("mu", mu, n)?;
    check_len("lambda", lambda, n)?;
    for a in 0..n {
        let (k, m, l) = (kappa[a], mu[a], lambda[a]);
        if !(0.0..=1.0).contains(&m) || !(0.0..=1.0).contains(&l) {
            return Err(Error::Range(format!("mu[{a}] = {m}, lambda[{a}] = {l} must lie in [0, 1]")));
        }
        if !(k > 0.0 && k <= 0.5) {
            return Err(Error::HypothesisViolated(format!("kappa[{a}] = {k} must lie in (0, 1/2]")));
        }
        if l >= 0.5 {
            return Err(Error::HypothesisViolated(format!("lambda[{a}] = {l} must be below 1/2")));
        }
        if l > k * m + VERIFY_TOL {
            return Err(Error::HypothesisViolated(format!(
                "lambda[{a}] = {l} exceeds kappa[{a}] * mu[{a}] = {}",
                k * m
            )));
        }
    }
    let eta = Channel::compose(phi, gamma)?;
    let composite = verify_lhc(&eta, h, f, e_edge, lambda)?;
    if let Some(v) = composite.violation {
        return Err(Error::HypothesisViolated(format!(
            "composite channel fails at vertex {}: success {} < {}",
            v.vertex, v.success, v.required
        )));
    }

    let mut owner: Vec<Option<usize>> = vec![None; gamma.input().len()];
    let mut blocks = Vec::with_capacity(n);
    for a in 0..n {
        let target = f.edge(e_edge.apply(a));
        let block: Vec<usize> = (0..gamma.input().len())
            .filter(|&b| gamma.mass(b, target) > 1.0 - kappa[a])
            .collect();
        if block.is_empty() {
            return Err(Error::EmptyBlock { edge: a });
        }
        for &b in &block {
            if let Some(prev) = owner[b].replace(a) {
                return Err(Error::HypothesisViolated(format!(
                    "symbol {b} lies in the blocks of edges {prev} and {a}"
                )));
            }
        }
        blocks.push(block);
    }
    let g = Hypergraph::new(gamma.input().clone(), blocks)?;
    let edge_map_phi = EdgeMap::identity(n);
    let cert_phi = verify_lhc(phi, h, &g, &edge_map_phi, mu)?;
    let cert_gamma = verify_lhc(gamma, &g, f, e_edge, kappa)?;
    if !cert_phi.passed() || !cert_gamma.passed() {
        let which = if cert_phi.passed() { "second stage" } else { "first stage" };
        let dump = serde_json::to_string(&Instance {
            phi,
            gamma,
            h,
            f,
            e_edge,
            kappa,
            mu,
            lambda,
        })?;
        return Err(Error::Counterexample {
            what: format!("decomposition {which} failed under verified hypotheses"),
            dump,
        });
    }
    Ok(DecompositionResult {
        g,
        edge_map_phi,
        edge_map_gamma: e_edge.clone(),
        cert_phi,
        cert_gamma,
    })
}

/// Parameters of the two decompositions behind [`channel_is_lhc`].
///
/// Unset fields take the defaults `mu = 2 lambda`, `kappa = 1/2` for the
/// decoder split and `mu' = 1/2` for the encoder split.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChannelLhcOptions {
    pub decoder_mu: Option<Vec<f64>>,
    pub decoder_kappa: Option<Vec<f64>>,
    pub encoder_mu: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelLhc {
    /// Partition-like hypergraph on the channel input alphabet.
    pub g: Hypergraph,
    /// Partition-like hypergraph on the channel output alphabet.
    pub f: Hypergraph,
    /// `φ : G → F` at the requested `kappa`.
    pub certificate: LhcCertificate,
    /// Error profile of the original code.
    pub lambda: Vec<f64>,
    pub decoder_split: DecompositionResult,
    pub encoder_split: DecompositionResult,
}

/// Shows the bare channel of a code to be an edge-bijective LHC at `kappa`
/// (indexed like `function.image()`), by splitting off the decoder and
/// then the encoder.
pub fn channel_is_lhc(code: &FunctionCode, kappa: &[f64], options: &ChannelLhcOptions) -> Result<ChannelLhc> {
    let lambda = code_error_profile(code)?;
    let n = lambda.len();
    check_len("kappa", kappa, n)?;
    let mu1 = options
        .decoder_mu
        .clone()
        .unwrap_or_else(|| lambda.iter().map(|l| (2.0 * l).min(1.0)).collect());
    let kappa1 = options.decoder_kappa.clone().unwrap_or_else(|| vec![0.5; n]);
    let mu2 = options.encoder_mu.clone().unwrap_or_else(|| vec![0.5; n]);

    let hf = characteristic_hypergraph(code.function());
    let values = image_singletons(code.function());
    let psi = Channel::compose(code.encoder(), code.channel())?;
    let decoder_split = decompose(
        &psi,
        code.decoder(),
        &hf,
        &values,
        &EdgeMap::identity(n),
        &kappa1,
        &mu1,
        &lambda,
    )?;
    let f = decoder_split.g.clone();
    let encoder_split = decompose(
        code.encoder(),
        code.channel(),
        &hf,
        &f,
        &EdgeMap::identity(n),
        kappa,
        &mu2,
        &mu1,
    )?;
    Ok(ChannelLhc {
        g: encoder_split.g.clone(),
        f,
        certificate: encoder_split.cert_gamma.clone(),
        lambda,
        decoder_split,
        encoder_split,
    })
}

/// Smallest `kappa` used when a value is decoded without error.
pub const KAPPA_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Derandomized {
    pub encoder: Channel,
    pub decoder: Channel,
    /// Error profile of the input code.
    pub lambda_in: Vec<f64>,
    /// Exact error profile of the deterministic code.
    pub lambda_out: Vec<f64>,
    pub kappa: Vec<f64>,
}

/// Replaces encoder and decoder by deterministic maps whose error is at
/// most four times the original, per function value.
pub fn derandomize(code: &FunctionCode) -> Result<Derandomized> {
    let lambda = code_error_profile(code)?;
    if let Some((edge, &value)) = lambda.iter().enumerate().find(|(_, &l)| l >= 0.125) {
        return Err(Error::LambdaTooLarge { edge, value });
    }
    let kappa: Vec<f64> = lambda.iter().map(|l| (4.0 * l).max(KAPPA_FLOOR)).collect();
    let lhc = channel_is_lhc(code, &kappa, &ChannelLhcOptions::default())?;
    let image = code.function().image();
    let phi = code.channel();

    let enc_map: Vec<usize> = (0..code.function().domain().len())
        .map(|a| {
            let e = image.binary_search(&code.function().eval(a)).expect("value is attained");
            let target = lhc.f.edge(e);
            let mut best = (f64::NEG_INFINITY, 0);
            for &x in lhc.g.edge(e) {
                let p = phi.mass(x, target);
                if p > best.0 {
                    best = (p, x);
                }
            }
            best.1
        })
        .collect();
    let dec_map: Vec<usize> = (0..phi.output().len())
        .map(|y| lhc.f.unique_edge_of(y).map_or(0, |e| image[e]))
        .collect();
    let encoder = Channel::from_map(code.encoder().input().clone(), code.encoder().output().clone(), &enc_map)?;
    let decoder = Channel::from_map(code.decoder().input().clone(), code.decoder().output().clone(), &dec_map)?;
    let derived = code.with_encoder(encoder.clone())?.with_decoder(decoder.clone())?;
    let lambda_out = code_error_profile(&derived)?;
    if let Some(b) = (0..lambda.len()).find(|&b| lambda_out[b] > 4.0 * lambda[b] + VERIFY_TOL) {
        return Err(Error::Counterexample {
            what: format!(
                "deterministic code has error {} > 4 * {} at value {}",
                lambda_out[b], lambda[b], image[b]
            ),
            dump: serde_json::json!({
                "function": code.function(),
                "encoder": code.encoder(),
                "channel": code.channel(),
                "decoder": code.decoder(),
            })
            .to_string(),
        });
    }
    Ok(Derandomized {
        encoder,
        decoder,
        lambda_in: lambda,
        lambda_out,
        kappa,
    })
}
