use super::tasks::{BscParams, InputKind, Task};
use super::Profile;
use crate::bsc_id::{epsilon_max, parse_grid, theta, Codebook};
use crate::channel::{row_problem, Channel};
use crate::code_bridge::{read_json, FunctionCode};
use crate::hypergraph::{EdgeMap, Hypergraph};
use serde::Deserialize;
use std::fmt;
use std::path::Path;

/// One problem found in a config, tied to the field it concerns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Deserialize)]
struct RawRows {
    rows: Vec<Vec<f64>>,
}

fn check_file(field: &str, path: &Path, kind: InputKind, out: &mut Vec<Diagnostic>) {
    if !path.is_file() {
        out.push(Diagnostic::new(field, format!("file not found: {}", path.display())));
        return;
    }
    let parsed = match kind {
        InputKind::Channel => {
            if let Ok(raw) = read_json::<RawRows>(path) {
                for (i, row) in raw.rows.iter().enumerate() {
                    if let Some(problem) = row_problem(row) {
                        out.push(Diagnostic::new(field, format!("not stochastic: row {i}: {problem}")));
                        return;
                    }
                }
            }
            read_json::<Channel>(path).map(drop)
        }
        InputKind::Hypergraph => read_json::<Hypergraph>(path).map(drop),
        InputKind::EdgeMap => read_json::<EdgeMap>(path).map(drop),
        InputKind::Code => FunctionCode::load(path).map(drop),
        InputKind::Codebook => std::fs::read_to_string(path)
            .map_err(crate::error::Error::from)
            .and_then(|t| Codebook::parse(&t))
            .map(drop),
    };
    if let Err(e) = parsed {
        out.push(Diagnostic::new(field, e.to_string()));
    }
}

fn check_profile(field: &str, p: Option<&Profile>, lo: f64, hi: f64, open_lo: bool, out: &mut Vec<Diagnostic>) {
    let Some(p) = p else { return };
    for (i, &v) in p.0.iter().enumerate() {
        let below = if open_lo { v <= lo } else { v < lo };
        if !v.is_finite() || below || v > hi {
            let left = if open_lo { "(" } else { "[" };
            out.push(Diagnostic::new(field, format!("entry {i} = {v} is outside {left}{lo}, {hi}]")));
        }
    }
}

fn check_bsc(p: &BscParams, require_codebook: bool, out: &mut Vec<Diagnostic>) {
    if let Some(g) = p.gamma {
        if !(0.0..=0.5).contains(&g) {
            out.push(Diagnostic::new("gamma", format!("crossover probability {g} is outside [0, 1/2]")));
        }
    } else {
        out.push(Diagnostic::new("gamma", "missing"));
    }
    if p.eps.is_none() {
        out.push(Diagnostic::new("eps", "missing"));
    }
    if let Some(d) = p.delta {
        if !(d > 0.0 && d <= 1.0) {
            out.push(Diagnostic::new("delta", format!("relative distance {d} is outside (0, 1]")));
        }
    }
    if require_codebook && p.codebook.is_none() {
        for (field, present) in [("n", p.n.is_some()), ("delta", p.delta.is_some()), ("M", p.messages.is_some())] {
            if !present {
                out.push(Diagnostic::new(field, "missing (or give a codebook file)"));
            }
        }
    }
    if p.n == Some(0) {
        out.push(Diagnostic::new("n", "block length must be at least 1"));
    }
    if matches!(p.messages, Some(m) if m < 2) {
        out.push(Diagnostic::new("M", "identification needs at least 2 messages"));
    }
    if let (Some(g), Some(e), Some(d)) = (p.gamma, p.eps, p.delta) {
        if let (Ok(max), Ok(t0), Ok(td)) = (epsilon_max(d, g), theta(0.0, g), theta(d, g)) {
            if !(e > 0.0 && e < max) {
                out.push(Diagnostic::new(
                    "eps",
                    format!(
                        "epsilon = {e} violates 0 < epsilon < (theta_delta - theta_0) / (theta_delta + theta_0) = {max} \
                         (theta_0 = {t0}, theta_delta = {td}); the acceptance windows would overlap"
                    ),
                ));
            }
        }
    }
}

/// Schema and range problems of a task, without running it.
pub fn diagnose(task: &Task) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (field, path, kind) in task.inputs() {
        check_file(field, path, kind, &mut out);
    }
    match task {
        Task::Verify(a) => check_profile("lambda", Some(&a.lambda), 0.0, 1.0, false, &mut out),
        Task::Decompose(a) => {
            check_profile("kappa", Some(&a.kappa), 0.0, 0.5, true, &mut out);
            check_profile("mu", a.mu.as_ref(), 0.0, 1.0, false, &mut out);
            check_profile("lambda", a.lambda.as_ref(), 0.0, 1.0, false, &mut out);
            if a.code.is_none() {
                for (field, present) in [
                    ("phi", a.phi.is_some()),
                    ("gamma", a.gamma.is_some()),
                    ("source", a.source.is_some()),
                    ("target", a.target.is_some()),
                    ("mu", a.mu.is_some()),
                    ("lambda", a.lambda.is_some()),
                ] {
                    if !present {
                        out.push(Diagnostic::new(field, "missing (or give a code bundle)"));
                    }
                }
            }
        }
        Task::Derandomize(_) => {}
        Task::AssembleId(a) => {
            for (field, p) in [("alpha", &a.alpha), ("beta", &a.beta), ("mu", &a.mu)] {
                check_profile(field, p.as_ref(), 0.0, 1.0, false, &mut out);
            }
            if a.enc1.is_some() {
                for (field, present) in [
                    ("enc2", a.enc2.is_some()),
                    ("phi", a.phi.is_some()),
                    ("h", a.h.is_some()),
                    ("g1", a.g1.is_some()),
                    ("g2", a.g2.is_some()),
                    ("f", a.f.is_some()),
                    ("d", a.d.is_some()),
                    ("alpha", a.alpha.is_some()),
                    ("beta", a.beta.is_some()),
                    ("mu", a.mu.is_some()),
                ] {
                    if !present {
                        out.push(Diagnostic::new(field, "missing"));
                    }
                }
            } else {
                check_bsc(&a.example, true, &mut out);
            }
        }
        Task::IdSim(a) => {
            check_bsc(&a.params, true, &mut out);
            if a.trials == 0 {
                out.push(Diagnostic::new("trials", "at least one trial is required"));
            }
        }
        Task::Rates(a) => {
            if !(0.0..=0.5).contains(&a.gamma) {
                out.push(Diagnostic::new("gamma", format!("{} is outside [0, 1/2]", a.gamma)));
            }
            if let Err(e) = parse_grid(&a.grid) {
                out.push(Diagnostic::new("grid", e.to_string()));
            }
        }
        Task::Codebook(a) => {
            if a.n == 0 {
                out.push(Diagnostic::new("n", "block length must be at least 1"));
            }
            if !(a.delta > 0.0 && a.delta <= 1.0) {
                out.push(Diagnostic::new("delta", format!("{} is outside (0, 1]", a.delta)));
            }
            if a.messages == 0 {
                out.push(Diagnostic::new("M", "at least one word is required"));
            }
        }
        Task::Falsify(a) => {
            if a.instances == 0 {
                out.push(Diagnostic::new("instances", "at least one instance is required"));
            }
        }
    }
    out
}
