//! Deterministic identification over two parallel binary symmetric
//! channels: closed forms, codebooks, exact distance laws, the example
//! hypergraphs and Monte Carlo.

pub mod codebook;
pub mod distance;
pub mod example;
pub mod formulas;
pub mod sim;

pub use codebook::{gen_codebook, BitWord, Codebook, Strategy};
pub use distance::{
    binomial_pmf, exact_window_miss, pair_distance_distribution, DecoderMode, Decision, IdDecoder,
    PairDistanceLaw,
};
pub use example::{ExampleHypergraphs, MaterializedExample};
pub use formulas::{
    beta, binary_entropy, chernoff_bound, epsilon_max, parse_grid, rate_table, rates_csv, theta,
    RateRow,
};
pub use sim::{monte_carlo_id, sim_csv, ErrorEstimate};
