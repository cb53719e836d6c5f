// SPDX-License-Identifier: Apache-2.0
//! Causal structure learning for binary data under the multivariate
//! Bernoulli (MVB) model.
//!
//! Variables are 0-based in the API and 1-based in text files. A
//! configuration `x ∈ {0,1}^p` is indexed by `Σ_j x_j 2^j`.

pub mod dataset;
pub mod datagen;
pub mod error;
pub mod exact;
pub mod features;
pub mod graph;
pub mod io;
pub mod learner;
pub mod mvb;
pub mod rng;
pub mod subset;
pub mod transform;

pub use dataset::BinaryDataset;
pub use datagen::{generate, random_dag, Family, GraphSpec, GroundTruth};
pub use error::{Error, Result};
pub use exact::{enumerate_equivalence_class, minimal_equivalence_class, recover_dag, recover_parents, RecoveredModel};
pub use features::{InteractionKind, InteractionMap};
pub use graph::{is_acyclic, markov_equivalent, shd_cpdag, Cpdag, Dag, WeightedAdjacency};
pub use learner::{binotears, solve, ParamMatrix, PenaltyParams, ScoreInput, SolverConfig};
pub use mvb::{sem_induced_distribution, ConditionalCoeffs, GeneralParams, NaturalParams};
pub use subset::{Subset, SubsetIndex};
