//! Every random stage of a run draws from its own stream, derived from the
//! single run seed by a fixed offset.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Balance,
    Split,
    Init,
    Frozen,
    Mlp,
}

impl Stage {
    fn offset(self) -> u64 {
        match self {
            Stage::Balance => 1,
            Stage::Split => 2,
            Stage::Init => 3,
            Stage::Frozen => 4,
            Stage::Mlp => 5,
        }
    }
}

pub fn stage_seed(seed: u64, stage: Stage) -> u64 {
    seed.wrapping_add(stage.offset())
}

pub fn stage_rng(seed: u64, stage: Stage) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stage_seed(seed, stage))
}
