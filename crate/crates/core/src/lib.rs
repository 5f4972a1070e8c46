//! Finite-alphabet toolkit for locally homomorphic channels: hypergraphs,
//! channels, certificates, the bridge to function codes, decomposition and
//! derandomization, bipartite identification codes, and deterministic
//! identification over binary symmetric channels.

pub mod alphabet;
pub mod assignment;
pub mod bipartite;
pub mod bsc_id;
pub mod channel;
pub mod cli;
pub mod code_bridge;
pub mod decompose;
pub mod error;
pub mod hypergraph;
pub mod lhc;
pub mod rng;

pub use alphabet::Alphabet;
pub use channel::Channel;
pub use code_bridge::{code_error_profile, code_to_lhc, lhc_to_code, sandwich_transfer, FunctionCode};
pub use decompose::{channel_is_lhc, decompose, derandomize};
pub use error::{Error, Result};
pub use hypergraph::{characteristic_hypergraph, image_singletons, EdgeMap, FunctionTable, Hypergraph};
pub use lhc::{verify_lhc, LhcCertificate, Verdict, VERIFY_TOL};
pub use rng::{RngStreams, DEFAULT_SEED};
