//! Discrete-time quantum walk search on two-dimensional grids driven by
//! position-dependent phase potentials.
//!
//! The walker lives on an `L x L` grid with a four-dimensional coin. One step
//! of the evolution applies the coin, the shift and then the diagonal phase
//! `exp(i f(x, y))` of a [`PotentialField`]. With a Grover coin, flip-flop
//! shift and a delta potential of height `pi` this is the AKR search; a
//! peak-normalized bivariate Gaussian turns the oracle into a tunable noisy
//! one.
//!
//! ```
//! use qwsearch::{EvolutionConfig, GaussianParams, GridGeometry, Vertex, WalkModel};
//!
//! let grid = GridGeometry::new(20).unwrap();
//! let params = GaussianParams::centered(grid, 0.01, std::f64::consts::PI).unwrap();
//! let field = qwsearch::bivariate_gaussian_field(grid, &params).unwrap();
//! let config = EvolutionConfig::new(WalkModel::model1(), field, Vertex::new(10, 10));
//! let record = qwsearch::run(&config).unwrap();
//! assert!(record.peak.probability > 10.0 / grid.n_vertices() as f64);
//! ```

pub mod cli;
pub mod engine;
mod error;
pub mod experiments;
pub mod io;
pub mod operators;
pub mod potentials;
pub mod state;

pub use engine::{peak_in_window, run, step, EvolutionConfig, Peak, Propagator, RunRecord, Window};
pub use error::{Error, Result};
pub use operators::{
    apply_coin, apply_shift, walk_substep, CoinKind, CoinOperator, ModelLabel, ShiftKind, ShiftRule, WalkModel,
};
pub use potentials::{
    ackley_field, apply_phase, bivariate_gaussian_field, delta_oracle_field, linear_field, rastrigin_field,
    GaussianParams, OracleSpec, PotentialField, PotentialKind,
};
pub use state::{
    inner_product, norm, position_distribution, success_probability, CoinIndex, GridGeometry, PositionDistribution,
    Vertex, WalkerState,
};
