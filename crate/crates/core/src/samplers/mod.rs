//! Weight-vector generators. Every sampler is a pure function of its
//! arguments and seed; the same inputs give a bit-identical batch.

mod lhs;
mod random;
mod slhs;
mod uniform;

pub use lhs::{sample_lhs_general, sample_lhs_p2};
pub use random::{gamma_ln, sample_dirichlet, sample_random};
pub use slhs::{
    admissible_multisets, sample_slhs_general, sample_slhs_p2, slhs_general_tuples,
    slhs_p2_from_draws, slhs_p2_pairs, SlhsPair, SlhsTuple,
};
pub use uniform::{
    count_uniform, enumerate_uniform, enumerate_uniform_capped, log10_count_uniform,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{SamplerConfig, WeightVector};

/// Which generator produced a batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    UniformIncrement,
    Random,
    Lhs,
    Slhs,
    Adaptive,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Strategy::UniformIncrement => "uniform-increment",
            Strategy::Random => "random",
            Strategy::Lhs => "lhs",
            Strategy::Slhs => "slhs",
            Strategy::Adaptive => "adaptive",
        };
        f.write_str(s)
    }
}

/// A batch of weight vectors with the strategy and configuration that made it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightBatch {
    pub vectors: Vec<WeightVector>,
    pub strategy: Strategy,
    pub config: SamplerConfig,
}

impl WeightBatch {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, WeightVector> {
        self.vectors.iter()
    }

    pub fn p(&self) -> usize {
        self.config.p
    }
}

/// The RNG stream every sampler draws from.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
