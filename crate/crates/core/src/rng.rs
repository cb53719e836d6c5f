// SPDX-License-Identifier: Apache-2.0
//! Seeded random streams.
//!
//! Every generator is ChaCha8 keyed by the user seed; independent consumers
//! draw from distinct ChaCha stream ids, so adding draws to one consumer
//! never shifts another. Stream ids in use:
//!
//! | stream            | consumer                                  |
//! |-------------------|-------------------------------------------|
//! | 0                 | random graph structure                    |
//! | 1                 | sampling from a probability table         |
//! | 2                 | solver initialisation noise               |
//! | 3                 | order-search restarts                     |
//! | 4                 | second-stage order restarts               |
//! | 16 + 2·node       | interaction weights of `node`             |
//! | 17 + 2·node       | Bernoulli draws of `node`                 |

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const GRAPH_STREAM: u64 = 0;
pub const TABLE_SAMPLE_STREAM: u64 = 1;
pub const SOLVER_INIT_STREAM: u64 = 2;
pub const SOLVER_ORDER_STREAM: u64 = 3;
pub const STAGE2_ORDER_STREAM: u64 = 4;

pub fn weight_stream(node: usize) -> u64 {
    16 + 2 * node as u64
}

pub fn draw_stream(node: usize) -> u64 {
    17 + 2 * node as u64
}

pub fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}
