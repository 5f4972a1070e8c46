use super::Profile;
use crate::bipartite::{assemble_id_code, falsify_branch_swap, AssembledId};
use crate::bsc_id::{
    chernoff_bound, gen_codebook, monte_carlo_id, parse_grid, rate_table, rates_csv, sim_csv, Codebook,
    DecoderMode, ExampleHypergraphs, Strategy,
};
use crate::bsc_id::codebook::LEXICOGRAPHIC_MAX_N;
use crate::bsc_id::example::{DISTANT_EDGE, EQUAL_EDGE};
use crate::bsc_id::sim::default_workers;
use crate::channel::Channel;
use crate::code_bridge::{read_json, write_json, FunctionCode};
use crate::decompose::{channel_is_lhc, decompose, derandomize, ChannelLhcOptions};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeMap, Hypergraph};
use crate::lhc::{infer_edge_map, verify_lhc, LhcCertificate};
use crate::rng::DEFAULT_SEED;
use clap::{Args, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub enum Outcome {
    Success,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case")]
pub enum Task {
    /// Check a channel against a pair of hypergraphs.
    Verify(VerifyArgs),
    /// Split a locally homomorphic composite, or show a code's channel is one.
    Decompose(DecomposeArgs),
    /// Replace a code's encoder and decoder by deterministic maps.
    Derandomize(DerandomizeArgs),
    /// Assemble an identification code from per-branch encoders.
    AssembleId(AssembleIdArgs),
    /// Monte Carlo identification over two binary symmetric channels.
    IdSim(IdSimArgs),
    /// Rate table for plotting.
    Rates(RatesArgs),
    /// Generate a minimum-distance codebook.
    Codebook(CodebookArgs),
    /// Random search for branch-swap counterexamples.
    Falsify(FalsifyArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct VerifyArgs {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    /// Inferred pointwise when absent.
    #[arg(long)]
    #[serde(default)]
    pub edge_map: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Profile,
    /// Certificate path; stdout when absent.
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
}

/// Either `--code` alone, or `--phi --gamma --source --target --mu --lambda`.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct DecomposeArgs {
    #[arg(long)]
    #[serde(default)]
    pub code: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub phi: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub gamma: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub source: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub target: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub edge_map: Option<PathBuf>,
    #[arg(long)]
    pub kappa: Profile,
    #[arg(long)]
    #[serde(default)]
    pub mu: Option<Profile>,
    #[arg(long)]
    #[serde(default)]
    pub lambda: Option<Profile>,
    #[arg(long)]
    #[serde(default)]
    pub decoder_mu: Option<Profile>,
    #[arg(long)]
    #[serde(default)]
    pub decoder_kappa: Option<Profile>,
    #[arg(long)]
    #[serde(default)]
    pub encoder_mu: Option<Profile>,
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct DerandomizeArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Bundle path for the deterministic code.
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    #[serde(default)]
    pub report: Option<PathBuf>,
}

/// Either explicit files (`--enc1 ... --mu`) or the binary symmetric
/// example built from `--n --gamma --delta --eps --M`.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct AssembleIdArgs {
    #[arg(long)]
    #[serde(default)]
    pub enc1: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub enc2: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub phi: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub h: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub g1: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub g2: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub f: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub d: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub alpha: Option<Profile>,
    #[arg(long)]
    #[serde(default)]
    pub beta: Option<Profile>,
    #[arg(long)]
    #[serde(default)]
    pub mu: Option<Profile>,
    #[command(flatten)]
    #[serde(flatten)]
    pub example: BscParams,
    /// Bundle path for the assembled code.
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    #[serde(default)]
    pub report: Option<PathBuf>,
}

/// Codebook and decoder parameters shared by `id-sim` and `assemble-id`.
#[derive(Debug, Clone, PartialEq, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct BscParams {
    #[arg(long)]
    #[serde(default)]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(default)]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub delta: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub eps: Option<f64>,
    /// Number of messages.
    #[arg(long = "M")]
    #[serde(default, rename = "M", alias = "m")]
    pub messages: Option<usize>,
    #[arg(long)]
    #[serde(default)]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub mode: Option<DecoderMode>,
    /// Defaults to lexicographic for short blocks, random otherwise.
    #[arg(long)]
    #[serde(default)]
    pub strategy: Option<Strategy>,
    /// Codebook file; replaces `--n --delta --M`.
    #[arg(long)]
    #[serde(default)]
    pub codebook: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct IdSimArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: BscParams,
    #[arg(long, default_value_t = 100_000)]
    #[serde(default = "default_trials")]
    pub trials: u64,
    /// CSV path; stdout when absent.
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Full estimate as JSON.
    #[arg(long)]
    #[serde(default)]
    pub json: Option<PathBuf>,
}

fn default_trials() -> u64 {
    100_000
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RatesArgs {
    #[arg(long)]
    pub gamma: f64,
    /// `start:stop:step`, inclusive.
    #[arg(long, default_value = "0:0.5:0.01")]
    #[serde(default = "default_grid")]
    pub grid: String,
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_grid() -> String {
    "0:0.5:0.01".into()
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CodebookArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub delta: f64,
    #[arg(long = "M")]
    #[serde(rename = "M", alias = "m")]
    pub messages: usize,
    #[arg(long)]
    #[serde(default)]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub strategy: Option<Strategy>,
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FalsifyArgs {
    #[arg(long, default_value_t = 500)]
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[arg(long)]
    #[serde(default)]
    pub seed: Option<u64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_instances() -> usize {
    500
}

/// What an input file holds, for loading and diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Channel,
    Hypergraph,
    EdgeMap,
    Code,
    Codebook,
}

fn opt<'a>(name: &'static str, p: &'a Option<PathBuf>, kind: InputKind) -> Option<(&'static str, &'a Path, InputKind)> {
    p.as_deref().map(|p| (name, p, kind))
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Verify(_) => "verify",
            Task::Decompose(_) => "decompose",
            Task::Derandomize(_) => "derandomize",
            Task::AssembleId(_) => "assemble-id",
            Task::IdSim(_) => "id-sim",
            Task::Rates(_) => "rates",
            Task::Codebook(_) => "codebook",
            Task::Falsify(_) => "falsify",
        }
    }

    /// Every input file with its field name.
    pub fn inputs(&self) -> Vec<(&'static str, &Path, InputKind)> {
        use InputKind::*;
        let v = match self {
            Task::Verify(a) => vec![
                Some(("channel", a.channel.as_path(), Channel)),
                Some(("source", a.source.as_path(), Hypergraph)),
                Some(("target", a.target.as_path(), Hypergraph)),
                opt("edge-map", &a.edge_map, EdgeMap),
            ],
            Task::Decompose(a) => vec![
                opt("code", &a.code, Code),
                opt("phi", &a.phi, Channel),
                opt("gamma", &a.gamma, Channel),
                opt("source", &a.source, Hypergraph),
                opt("target", &a.target, Hypergraph),
                opt("edge-map", &a.edge_map, EdgeMap),
            ],
            Task::Derandomize(a) => vec![Some(("code", a.code.as_path(), Code))],
            Task::AssembleId(a) => vec![
                opt("enc1", &a.enc1, Channel),
                opt("enc2", &a.enc2, Channel),
                opt("phi", &a.phi, Channel),
                opt("h", &a.h, Hypergraph),
                opt("g1", &a.g1, Hypergraph),
                opt("g2", &a.g2, Hypergraph),
                opt("f", &a.f, Hypergraph),
                opt("d", &a.d, Hypergraph),
                opt("codebook", &a.example.codebook, Codebook),
            ],
            Task::IdSim(a) => vec![opt("codebook", &a.params.codebook, Codebook)],
            Task::Rates(_) | Task::Codebook(_) | Task::Falsify(_) => vec![],
        };
        v.into_iter().flatten().collect()
    }

    /// Every input and output path, for rebasing.
    pub fn paths_mut(&mut self) -> Vec<&mut PathBuf> {
        let v: Vec<Option<&mut PathBuf>> = match self {
            Task::Verify(a) => vec![
                Some(&mut a.channel),
                Some(&mut a.source),
                Some(&mut a.target),
                a.edge_map.as_mut(),
                a.out.as_mut(),
            ],
            Task::Decompose(a) => vec![
                a.code.as_mut(),
                a.phi.as_mut(),
                a.gamma.as_mut(),
                a.source.as_mut(),
                a.target.as_mut(),
                a.edge_map.as_mut(),
                a.out.as_mut(),
            ],
            Task::Derandomize(a) => vec![Some(&mut a.code), a.out.as_mut(), a.report.as_mut()],
            Task::AssembleId(a) => vec![
                a.enc1.as_mut(),
                a.enc2.as_mut(),
                a.phi.as_mut(),
                a.h.as_mut(),
                a.g1.as_mut(),
                a.g2.as_mut(),
                a.f.as_mut(),
                a.d.as_mut(),
                a.example.codebook.as_mut(),
                a.out.as_mut(),
                a.report.as_mut(),
            ],
            Task::IdSim(a) => vec![a.params.codebook.as_mut(), a.out.as_mut(), a.json.as_mut()],
            Task::Rates(a) => vec![a.out.as_mut()],
            Task::Codebook(a) => vec![a.out.as_mut()],
            Task::Falsify(a) => vec![a.out.as_mut()],
        };
        v.into_iter().flatten().collect()
    }

    pub fn execute(&self) -> Result<Outcome> {
        match self {
            Task::Verify(a) => a.run(),
            Task::Decompose(a) => a.run(),
            Task::Derandomize(a) => a.run(),
            Task::AssembleId(a) => a.run(),
            Task::IdSim(a) => a.run(),
            Task::Rates(a) => a.run(),
            Task::Codebook(a) => a.run(),
            Task::Falsify(a) => a.run(),
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    match out {
        Some(path) => write_json(path, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

fn need<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| Error::Parse(format!("missing required argument --{flag}")))
}

fn announce_seed(seed: u64) {
    eprintln!("seed: {seed}");
}

fn failure_message(what: &str, cert: &LhcCertificate) -> String {
    match &cert.violation {
        Some(v) => format!(
            "{what}: vertex {} in edge {} reaches its target with probability {} < {}",
            v.vertex, v.edge, v.success, v.required
        ),
        None => format!("{what}: certificate failed"),
    }
}

impl VerifyArgs {
    fn run(&self) -> Result<Outcome> {
        let phi: Channel = read_json(&self.channel)?;
        let g: Hypergraph = read_json(&self.source)?;
        let h: Hypergraph = read_json(&self.target)?;
        let edge_map = match &self.edge_map {
            Some(p) => read_json::<EdgeMap>(p)?,
            None => infer_edge_map(&phi, &g, &h, false)?.0,
        };
        let lambda = self.lambda.expand("lambda", g.edge_count())?;
        let cert = verify_lhc(&phi, &g, &h, &edge_map, &lambda)?;
        emit_json(self.out.as_deref(), &cert)?;
        if cert.passed() {
            eprintln!("pass: lambda profile {:?}", cert.lambda_profile);
            Ok(Outcome::Success)
        } else {
            Ok(Outcome::Failed(failure_message("verify", &cert)))
        }
    }
}

impl DecomposeArgs {
    fn run(&self) -> Result<Outcome> {
        if let Some(code) = &self.code {
            let code = FunctionCode::load(code)?;
            let k = code.function().image().len();
            let expand = |p: &Option<Profile>, name: &str| p.as_ref().map(|p| p.expand(name, k)).transpose();
            let options = ChannelLhcOptions {
                decoder_mu: expand(&self.decoder_mu, "decoder-mu")?,
                decoder_kappa: expand(&self.decoder_kappa, "decoder-kappa")?,
                encoder_mu: expand(&self.encoder_mu, "encoder-mu")?,
            };
            let result = channel_is_lhc(&code, &self.kappa.expand("kappa", k)?, &options)?;
            emit_json(self.out.as_deref(), &result)?;
            eprintln!("pass: channel is locally homomorphic at kappa {:?}", result.certificate.lambda);
            return Ok(Outcome::Success);
        }
        let phi: Channel = read_json(need(&self.phi, "phi")?)?;
        let gamma: Channel = read_json(need(&self.gamma, "gamma")?)?;
        let h: Hypergraph = read_json(need(&self.source, "source")?)?;
        let f: Hypergraph = read_json(need(&self.target, "target")?)?;
        let e = match &self.edge_map {
            Some(p) => read_json::<EdgeMap>(p)?,
            None => infer_edge_map(&Channel::compose(&phi, &gamma)?, &h, &f, true)?.0,
        };
        let k = h.edge_count();
        let result = decompose(
            &phi,
            &gamma,
            &h,
            &f,
            &e,
            &self.kappa.expand("kappa", k)?,
            &need(&self.mu, "mu")?.expand("mu", k)?,
            &need(&self.lambda, "lambda")?.expand("lambda", k)?,
        )?;
        emit_json(self.out.as_deref(), &result)?;
        eprintln!("pass: both certificates hold");
        Ok(Outcome::Success)
    }
}

fn stem_of(path: &Path) -> String {
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("code");
    name.strip_suffix(".bundle").unwrap_or(name).to_string()
}

impl DerandomizeArgs {
    fn run(&self) -> Result<Outcome> {
        let code = FunctionCode::load(&self.code)?;
        let result = derandomize(&code)?;
        if let Some(out) = &self.out {
            code.with_encoder(result.encoder.clone())?
                .with_decoder(result.decoder.clone())?
                .save(out, &stem_of(out))?;
        }
        emit_json(self.report.as_deref(), &result)?;
        eprintln!("pass: deterministic error {:?} <= 4 x {:?}", result.lambda_out, result.lambda_in);
        Ok(Outcome::Success)
    }
}

#[derive(Serialize)]
struct AssembleReport<'a> {
    bound: &'a [f64],
    exact_error: &'a Option<Vec<f64>>,
    chain: &'a EdgeMap,
    cert_enc1: &'a LhcCertificate,
    cert_enc2: &'a LhcCertificate,
    cert_swap: &'a LhcCertificate,
    cert_channel: &'a LhcCertificate,
}

impl BscParams {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn gamma(&self) -> Result<f64> {
        need(&self.gamma, "gamma").copied()
    }

    fn eps(&self) -> Result<f64> {
        need(&self.eps, "eps").copied()
    }

    /// The codebook file, or a generated one.
    pub fn codebook(&self) -> Result<Codebook> {
        if let Some(path) = &self.codebook {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            return Codebook::parse(&text);
        }
        let n = *need(&self.n, "n")?;
        let strategy = self.strategy.unwrap_or(if n <= LEXICOGRAPHIC_MAX_N {
            Strategy::LexicographicGreedy
        } else {
            Strategy::RandomGreedy
        });
        gen_codebook(
            n,
            *need(&self.delta, "delta")?,
            *need(&self.messages, "M")?,
            self.seed(),
            strategy,
        )
    }
}

impl AssembleIdArgs {
    fn run(&self) -> Result<Outcome> {
        let assembled = if self.enc1.is_some() { self.from_files()? } else { self.from_example()? };
        let report = AssembleReport {
            bound: &assembled.bound,
            exact_error: &assembled.exact_error,
            chain: &assembled.chain,
            cert_enc1: &assembled.cert_enc1,
            cert_enc2: &assembled.cert_enc2,
            cert_swap: &assembled.cert_swap,
            cert_channel: &assembled.cert_channel,
        };
        if let Some(out) = &self.out {
            assembled.code.save(out, &stem_of(out))?;
        }
        emit_json(self.report.as_deref(), &report)?;
        eprintln!("pass: assembled code error within {:?}", assembled.bound);
        Ok(Outcome::Success)
    }

    fn from_files(&self) -> Result<AssembledId> {
        let ch = |p: &Option<PathBuf>, flag: &str| -> Result<Channel> { read_json(need(p, flag)?) };
        let hg = |p: &Option<PathBuf>, flag: &str| -> Result<Hypergraph> { read_json(need(p, flag)?) };
        let h = hg(&self.h, "h")?;
        let k = h.edge_count();
        assemble_id_code(
            &ch(&self.enc1, "enc1")?,
            &ch(&self.enc2, "enc2")?,
            &ch(&self.phi, "phi")?,
            &h,
            &hg(&self.g1, "g1")?,
            &hg(&self.g2, "g2")?,
            &hg(&self.f, "f")?,
            &hg(&self.d, "d")?,
            &need(&self.alpha, "alpha")?.expand("alpha", k)?,
            &need(&self.beta, "beta")?.expand("beta", k)?,
            &need(&self.mu, "mu")?.expand("mu", k)?,
        )
    }

    /// Deterministic encoders contribute no error; `mu` defaults to the
    /// exact channel error, moved from the edges of `F` to those of `H`.
    fn from_example(&self) -> Result<AssembledId> {
        let p = &self.example;
        if p.codebook.is_none() {
            announce_seed(p.seed());
        }
        let ex = ExampleHypergraphs::new(p.codebook()?, p.gamma()?, p.eps()?, p.mode.unwrap_or_default())?;
        let mat = ex.materialize()?;
        let lam = ex.channel_lambda()?;
        // H edge 0 holds the unequal pairs, edge 1 the diagonal
        let mu_default = vec![lam[DISTANT_EDGE], lam[EQUAL_EDGE]];
        let pick = |p: &Option<Profile>, name: &str, default: Vec<f64>| match p {
            Some(p) => p.expand(name, 2),
            None => Ok(default),
        };
        assemble_id_code(
            &mat.enc,
            &mat.enc,
            &mat.phi,
            &mat.h,
            &mat.g1,
            &mat.g2,
            &mat.f,
            &mat.d,
            &pick(&self.alpha, "alpha", vec![0.0; 2])?,
            &pick(&self.beta, "beta", vec![0.0; 2])?,
            &pick(&self.mu, "mu", mu_default)?,
        )
    }
}

impl IdSimArgs {
    fn run(&self) -> Result<Outcome> {
        let p = &self.params;
        let seed = p.seed();
        announce_seed(seed);
        let codebook = p.codebook()?;
        let (gamma, eps) = (p.gamma()?, p.eps()?);
        let delta = p.delta.unwrap_or(codebook.delta());
        let estimate = monte_carlo_id(
            &codebook,
            gamma,
            eps,
            self.trials,
            seed,
            p.mode.unwrap_or_default(),
            default_workers(),
        )?;
        let bound = chernoff_bound(codebook.n(), eps, delta, gamma)?;
        emit(self.out.as_deref(), &sim_csv(&estimate, bound))?;
        if let Some(json) = &self.json {
            write_json(json, &estimate)?;
        }
        Ok(Outcome::Success)
    }
}

impl RatesArgs {
    fn run(&self) -> Result<Outcome> {
        let rows = rate_table(self.gamma, &parse_grid(&self.grid)?)?;
        emit(self.out.as_deref(), &rates_csv(&rows))?;
        Ok(Outcome::Success)
    }
}

impl CodebookArgs {
    fn run(&self) -> Result<Outcome> {
        let params = BscParams {
            n: Some(self.n),
            delta: Some(self.delta),
            messages: Some(self.messages),
            seed: self.seed,
            strategy: self.strategy,
            ..BscParams::default()
        };
        announce_seed(params.seed());
        let codebook = params.codebook()?;
        emit(self.out.as_deref(), &codebook.to_text())?;
        Ok(Outcome::Success)
    }
}

impl FalsifyArgs {
    fn run(&self) -> Result<Outcome> {
        let seed = self.seed.unwrap_or(DEFAULT_SEED);
        announce_seed(seed);
        let report = falsify_branch_swap(self.instances, seed)?;
        emit_json(self.out.as_deref(), &report)?;
        eprintln!(
            "{} instances, hypothesis held in {}, conclusion held in {}, {} counterexamples",
            report.instances,
            report.hypothesis_held,
            report.conclusion_held,
            report.counterexamples.len()
        );
        Ok(Outcome::Success)
    }
}
