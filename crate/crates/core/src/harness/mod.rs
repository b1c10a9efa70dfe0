//! Corpus generation, theorem checks against the oracle, and file formats.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::EmbedError;

pub mod check;
pub mod generate;
pub mod instances;
pub mod io;

pub use check::{run_theorem_check, CheckMode, Record, Report, Summary};
pub use generate::{enumerate_families, enumerate_small_plane_graphs, generate_near_triangulation};
pub use instances::{generate_instance_suite, Instance, Target};
pub use io::{CanvasFile, ColoringFile, GraphFile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("bad input: {0}")]
    Format(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("invalid corpus spec: {0}")]
    Spec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Cycles,
    /// Cycles with every set of non-crossing chords.
    ChordedCycles,
    Wheels,
    Fans,
    StackedTriangulations,
    /// Chorded cycles with vertices added one at a time inside bounded
    /// faces.
    FaceStacked,
    RandomNearTriangulations,
}

impl Family {
    pub fn all() -> Vec<Family> {
        vec![
            Family::Cycles,
            Family::ChordedCycles,
            Family::Wheels,
            Family::Fans,
            Family::StackedTriangulations,
            Family::FaceStacked,
            Family::RandomNearTriangulations,
        ]
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Cycles => "cycles",
            Family::ChordedCycles => "chorded-cycles",
            Family::Wheels => "wheels",
            Family::Fans => "fans",
            Family::StackedTriangulations => "stacked-triangulations",
            Family::FaceStacked => "face-stacked",
            Family::RandomNearTriangulations => "random-near-triangulations",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::all()
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| HarnessError::Spec(format!("unknown family {s:?}")))
    }
}

/// What to generate and check. The enumerated part covers all families but
/// the random one up to `max_vertices`; the random part draws
/// `random_instances` near-triangulations on at most `random_max_vertices`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusSpec {
    pub max_vertices: usize,
    pub palette_size: u32,
    pub families: BTreeSet<Family>,
    pub seed: u64,
    pub samples_per_shape: usize,
    pub random_instances: usize,
    pub random_max_vertices: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            max_vertices: 8,
            palette_size: 5,
            families: Family::all().into_iter().collect(),
            seed: 0,
            samples_per_shape: 3,
            random_instances: 1000,
            random_max_vertices: 14,
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.max_vertices > generate::MAX_ENUMERATED_VERTICES {
            return Err(HarnessError::BudgetExceeded(format!(
                "max_vertices {} is above {}",
                self.max_vertices,
                generate::MAX_ENUMERATED_VERTICES
            )));
        }
        if !(3..=crate::canvas::ColorSet::MAX_COLOR + 1).contains(&self.palette_size) {
            return Err(HarnessError::Spec(format!("palette size {} is not in 3..=64", self.palette_size)));
        }
        if self.families.contains(&Family::RandomNearTriangulations) && self.random_max_vertices < 3 {
            return Err(HarnessError::Spec("random graphs need at least three vertices".into()));
        }
        Ok(())
    }
}
