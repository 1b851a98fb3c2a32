//! Finite-temperature decoding of random codes over discrete memoryless
//! channels, seen as a random energy model.
//!
//! The crate computes the ferromagnetic / paramagnetic / glassy phase
//! diagram of the finite-temperature MAP and universal decoders, the
//! correct-decoding and error exponents of random codes through their free
//! energies, and checks both against Monte Carlo codebooks.
//!
//! All rates, entropies and free energies are in nats.

pub mod channel;
pub mod error;
pub mod exponents;
pub mod gibbs;
pub mod numeric;
pub mod phases;
pub mod rem_sim;
pub mod simplex;

pub use channel::{
    binary_divergence, binary_entropy, bsc_tilted_crossover, distortion, gv_distance_bsc,
    mutual_information_uniform, Channel, ConditionalDistribution, InfoMeasures, OutputDistribution,
};
pub use error::{Error, Result};
pub use exponents::{
    correct_decoding_exponent, error_exponent, gallager_e0, gamma_of_y, optimize_rho, ExponentAux,
    ExponentResult,
};
pub use gibbs::{
    delta_y, gibbs_state, h0, j_function, solve_beta_r, BetaRoot, GibbsFamily, GibbsState, BETA_MAX,
};
pub use phases::{
    beta_0, beta_c, boundary_curves, classify, classify_grid, free_energy_glassy, free_energy_para,
    universal_boundary_curves, universal_classify, BoundaryCurve, BoundaryKind, Decoder, Phase,
    PhasePoint,
};
pub use rem_sim::{
    empirical_free_energy, event_probabilities, rank_statistics, sample_spectrum, simulate,
    symbolwise_marginal, Codebook, DistanceClass, SimConfig, SimMode, SpectrumBin, SpectrumSample,
};
