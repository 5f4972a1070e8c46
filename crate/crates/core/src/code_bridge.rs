//! Conversions between function codes and locally homomorphic channels,
//! and the transfer of the LHC property through edge-bijective
//! homomorphisms on either side of a channel.

use crate::alphabet::Alphabet;
use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::hypergraph::{
    characteristic_hypergraph, check_homomorphism, image_singletons, relabel_hom, EdgeMap,
    FunctionTable, Hypergraph,
};
use crate::lhc::{verify_lhc, LhcCertificate};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// An encoder, channel and decoder meant to compute `function`.
///
/// Alphabets are matched by size: the decoder's output alphabet is the
/// function's codomain.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionCode {
    function: FunctionTable,
    encoder: Channel,
    channel: Channel,
    decoder: Channel,
}

/// On-disk bundle: paths to the four component files, relative to the
/// bundle's own directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeBundle {
    pub function: PathBuf,
    pub encoder: PathBuf,
    pub channel: PathBuf,
    pub decoder: PathBuf,
}

impl FunctionCode {
    pub fn new(function: FunctionTable, encoder: Channel, channel: Channel, decoder: Channel) -> Result<Self> {
        let checks = [
            ("function domain", function.domain().len(), "encoder input", encoder.input().len()),
            ("encoder output", encoder.output().len(), "channel input", channel.input().len()),
            ("channel output", channel.output().len(), "decoder input", decoder.input().len()),
            ("decoder output", decoder.output().len(), "function codomain", function.codomain().len()),
        ];
        for (a, x, b, y) in checks {
            if x != y {
                return Err(Error::Shape(format!("{a} has {x} symbols but {b} has {y}")));
            }
        }
        Ok(Self {
            function,
            encoder,
            channel,
            decoder,
        })
    }

    pub fn function(&self) -> &FunctionTable {
        &self.function
    }

    pub fn encoder(&self) -> &Channel {
        &self.encoder
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    pub fn decoder(&self) -> &Channel {
        &self.decoder
    }

    /// `Dec ∘ φ ∘ Enc`.
    pub fn composite(&self) -> Result<Channel> {
        Channel::chain(&[&self.encoder, &self.channel, &self.decoder])
    }

    pub fn with_encoder(&self, encoder: Channel) -> Result<Self> {
        Self::new(self.function.clone(), encoder, self.channel.clone(), self.decoder.clone())
    }

    pub fn with_decoder(&self, decoder: Channel) -> Result<Self> {
        Self::new(self.function.clone(), self.encoder.clone(), self.channel.clone(), decoder)
    }

    pub fn load(bundle_path: &Path) -> Result<Self> {
        let bundle: CodeBundle = read_json(bundle_path)?;
        let base = bundle_path.parent().unwrap_or(Path::new(""));
        Self::new(
            read_json(&base.join(&bundle.function))?,
            read_json(&base.join(&bundle.encoder))?,
            read_json(&base.join(&bundle.channel))?,
            read_json(&base.join(&bundle.decoder))?,
        )
    }

    /// Writes the four components next to `bundle_path` using `stem` as a
    /// file-name prefix, then the bundle itself.
    pub fn save(&self, bundle_path: &Path, stem: &str) -> Result<()> {
        let base = bundle_path.parent().unwrap_or(Path::new(""));
        let bundle = CodeBundle {
            function: format!("{stem}.function.json").into(),
            encoder: format!("{stem}.encoder.json").into(),
            channel: format!("{stem}.channel.json").into(),
            decoder: format!("{stem}.decoder.json").into(),
        };
        write_json(&base.join(&bundle.function), &self.function)?;
        write_json(&base.join(&bundle.encoder), &self.encoder)?;
        write_json(&base.join(&bundle.channel), &self.channel)?;
        write_json(&base.join(&bundle.decoder), &self.decoder)?;
        write_json(bundle_path, &bundle)
    }
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Per-value error of a code, indexed like `function.image()`:
/// `lambda_b = max_{f(a) = b} (1 - Pr{Dec∘φ∘Enc(a) = b})`.
pub fn code_error_profile(code: &FunctionCode) -> Result<Vec<f64>> {
    let psi = code.composite()?;
    Ok(profile_of(&psi, &code.function))
}

fn profile_of(psi: &Channel, f: &FunctionTable) -> Vec<f64> {
    let image = f.image();
    let mut slot = vec![usize::MAX; f.codomain().len()];
    for (i, &b) in image.iter().enumerate() {
        slot[b] = i;
    }
    let mut lambda = vec![0.0f64; image.len()];
    for a in 0..f.domain().len() {
        let b = f.eval(a);
        // summing the wrong outputs avoids cancellation for tiny errors
        let wrong: f64 = psi
            .row(a)
            .iter()
            .enumerate()
            .filter(|&(y, _)| y != b)
            .map(|(_, p)| p)
            .sum();
        lambda[slot[b]] = lambda[slot[b]].max(wrong.min(1.0));
    }
    lambda
}

/// The certificate view of a code.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeLhc {
    /// `Dec ∘ φ ∘ Enc`.
    pub psi: Channel,
    /// Characteristic hypergraph of the function.
    pub source: Hypergraph,
    /// Singletons of the attained values over the full codomain.
    pub target: Hypergraph,
    pub certificate: LhcCertificate,
}

/// Certifies `Dec ∘ φ ∘ Enc` as an edge-bijective LHC from `H_f` to the
/// attained-value singletons, at the code's own error profile.
pub fn code_to_lhc(code: &FunctionCode) -> Result<CodeLhc> {
    let psi = code.composite()?;
    let source = characteristic_hypergraph(&code.function);
    let target = image_singletons(&code.function);
    let lambda = profile_of(&psi, &code.function);
    let certificate = verify_lhc(&psi, &source, &target, &EdgeMap::identity(lambda.len()), &lambda)?;
    Ok(CodeLhc {
        psi,
        source,
        target,
        certificate,
    })
}

/// Repairs a decoder whose edge map permutes the function values.
///
/// `cert` must be a passing, edge-bijective certificate for
/// `Dec ∘ φ ∘ Enc` from `H_f` to the attained-value singletons. The
/// returned code post-composes the decoder with the relabeling `g`
/// undoing that permutation; values outside the image are left fixed.
pub fn lhc_to_code(cert: &LhcCertificate, code: &FunctionCode) -> Result<FunctionCode> {
    if !cert.edge_map.is_bijective() {
        return Err(Error::RequiresBijective(format!(
            "certificate edge map {:?}",
            cert.edge_map.as_slice()
        )));
    }
    let psi = code.composite()?;
    let source = characteristic_hypergraph(&code.function);
    let target = image_singletons(&code.function);
    let recheck = verify_lhc(&psi, &source, &target, &cert.edge_map, &cert.lambda)?;
    if !recheck.passed() {
        return Err(Error::HypothesisViolated(
            "certificate does not hold for this code".into(),
        ));
    }
    let image = code.function.image();
    let proper = Hypergraph::complete_1_uniform(Alphabet::range(image.len())?);
    let (g_vertex, _) = relabel_hom(&EdgeMap::identity(image.len()), &cert.edge_map, &proper)?;
    let mut relabel: Vec<usize> = (0..code.function.codomain().len()).collect();
    for (i, &b) in image.iter().enumerate() {
        relabel[b] = image[g_vertex[i]];
    }
    let codomain = code.function.codomain().clone();
    let g = Channel::from_map(codomain.clone(), codomain, &relabel)?;
    code.with_decoder(Channel::compose(code.decoder(), &g)?)
}

/// A vertex map together with its edge map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hom {
    pub vertex_map: Vec<usize>,
    pub edge_map: EdgeMap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    /// `h_E⁻¹ ∘ e_E ∘ f_E⁻¹`.
    pub g_edge: EdgeMap,
    /// `lambda` carried over to the edges of `G`.
    pub lambda_g: Vec<f64>,
    /// `h ∘ γ ∘ f : F → I` with edge map `e_E`.
    pub outer: LhcCertificate,
    /// `γ : G → H` with edge map `g_edge`.
    pub inner: LhcCertificate,
}

impl SandwichReport {
    pub fn agree(&self) -> bool {
        self.outer.verdict == self.inner.verdict
    }
}

fn require_bijective_hom(hom: &Hom, from: &Hypergraph, to: &Hypergraph, name: &str) -> Result<()> {
    let report = check_homomorphism(&hom.vertex_map, &hom.edge_map, from, to)?;
    if !report.edge_bijective {
        return Err(Error::RequiresBijective(format!("{name} is not edge-bijective")));
    }
    if !report.is_hom {
        let (e, v) = report.witness.expect("non-homomorphism has a witness");
        return Err(Error::HypothesisViolated(format!(
            "{name} is not a homomorphism: vertex {v} of edge {e} leaves its image edge"
        )));
    }
    Ok(())
}

/// Verifies `h ∘ γ ∘ f : F → I` at `lambda` (indexed by `E(F)`) with edge
/// map `e_E`, and `γ : G → H` at the transported vector with edge map
/// `h_E⁻¹ ∘ e_E ∘ f_E⁻¹`.
///
/// The two verdicts coincide when all four hypergraphs are partitions and
/// `f` hits every vertex of `G`; other inputs are rejected.
#[allow(clippy::too_many_arguments)]
pub fn sandwich_transfer(
    f: &Hom,
    h: &Hom,
    gamma: &Channel,
    e_edge: &EdgeMap,
    big_f: &Hypergraph,
    g: &Hypergraph,
    big_h: &Hypergraph,
    i: &Hypergraph,
    lambda: &[f64],
) -> Result<SandwichReport> {
    big_f.require_partition("F")?;
    g.require_partition("G")?;
    big_h.require_partition("H")?;
    i.require_partition("I")?;
    require_bijective_hom(f, big_f, g, "f")?;
    require_bijective_hom(h, big_h, i, "h")?;
    let mut hit = vec![false; g.vertex_count()];
    for &v in &f.vertex_map {
        hit[v] = true;
    }
    if let Some(v) = hit.iter().position(|&x| !x) {
        return Err(Error::HypothesisViolated(format!(
            "f misses vertex {v} of G"
        )));
    }
    if lambda.len() != big_f.edge_count() {
        return Err(Error::Shape(format!(
            "lambda has {} entries for {} edges of F",
            lambda.len(),
            big_f.edge_count()
        )));
    }
    let f_inv = f.edge_map.inverse()?;
    let h_inv = h.edge_map.inverse()?;
    let g_edge = f_inv.then(e_edge)?.then(&h_inv)?;
    let lambda_g: Vec<f64> = (0..g.edge_count()).map(|b| lambda[f_inv.apply(b)]).collect();

    let f_ch = Channel::from_map(big_f.vertices().clone(), g.vertices().clone(), &f.vertex_map)?;
    let h_ch = Channel::from_map(big_h.vertices().clone(), i.vertices().clone(), &h.vertex_map)?;
    let outer_ch = Channel::chain(&[&f_ch, gamma, &h_ch])?;
    let outer = verify_lhc(&outer_ch, big_f, i, e_edge, lambda)?;
    let inner = verify_lhc(gamma, g, big_h, &g_edge, &lambda_g)?;
    Ok(SandwichReport {
        g_edge,
        lambda_g,
        outer,
        inner,
    })
}
