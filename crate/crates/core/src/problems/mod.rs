//! Benchmark saddle-point problem families with exact subgradient and metric
//! oracles.

pub mod dro;
pub mod loader;
pub mod matrix_game;
pub mod mdp;

pub use dro::{dro_synthetic, DroLogistic};
pub use loader::load_sparse_classification;
pub use matrix_game::{matrix_game_random, EntryDist, MatrixGame};
pub use mdp::{garnet, MdpSaddle};
