//! Ordered Bratteli diagrams, their premorphisms, Vershik dynamics,
//! Kakutani–Rokhlin tower calculus and dimension groups, in exact arithmetic.
//!
//! Matrices are generic over the scalar type ([`matrix::Matrix`]); the
//! aliases below fix the scalars used throughout the crate.

pub mod diagram;
pub mod dimgroup;
pub mod dot;
pub mod edgeset;
pub mod error;
pub mod gen;
pub mod io;
pub mod matrix;
pub mod matrix_form;
pub mod morphism;
pub mod order;
pub mod path;
pub mod perron;
pub mod verdict;
pub mod vershik;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use diagram::{BratteliDiagram, Edge, LevelSequence, PathSet, Presentation, ValidationReport};
pub use dimgroup::{DimensionGroup, Element};
pub use edgeset::EdgeSet;
pub use error::{Error, Result};
pub use morphism::{EquivalenceVariant, LevelMap, Premorphism};
pub use order::{Extreme, OrderedBratteliDiagram, PathOrder};
pub use path::{PathWord, RankWord};
pub use perron::{PerronData, StationaryInfo};
pub use verdict::Verdict;
pub use vershik::{KRPartition, Successor, TowerEdgeSet};

/// Edge multiplicities and path counts.
pub type IntMatrix = matrix::Matrix<BigInt>;
/// Exact linear algebra over the rationals.
pub type RatMatrix = matrix::Matrix<BigRational>;
