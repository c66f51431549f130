//! Two-stage dataset manifests.
//!
//! T1 trains on real-world data only; T2 mixes both corpora in one stage;
//! T3 runs real-world then synthetic; T4 runs synthetic then real-world.
//! Stage contents are shuffled deterministically from the manifest seed.

use super::QaError;
use crate::rng::{derive_seed, rng_for_seed};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DatasetStrategy {
    T1,
    T2,
    T3,
    T4,
}

impl DatasetStrategy {
    pub const ALL: [DatasetStrategy; 4] = [
        DatasetStrategy::T1,
        DatasetStrategy::T2,
        DatasetStrategy::T3,
        DatasetStrategy::T4,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DatasetStrategy::T1 => "T1",
            DatasetStrategy::T2 => "T2",
            DatasetStrategy::T3 => "T3",
            DatasetStrategy::T4 => "T4",
        }
    }

    pub fn parse(s: &str) -> Result<Self, QaError> {
        match s {
            "T1" | "t1" => Ok(DatasetStrategy::T1),
            "T2" | "t2" => Ok(DatasetStrategy::T2),
            "T3" | "t3" => Ok(DatasetStrategy::T3),
            "T4" | "t4" => Ok(DatasetStrategy::T4),
            other => Err(QaError::UnknownStrategy(other.to_string())),
        }
    }
}

/// One training stage: a name and the sample ids it trains on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub samples: Vec<String>,
}

/// Ordered training stages for one dataset strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageManifest {
    pub strategy: DatasetStrategy,
    pub seed: u64,
    pub stages: Vec<Stage>,
}

fn check_unique(samples: &[String]) -> Result<(), QaError> {
    let mut sorted: Vec<&String> = samples.iter().collect();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(QaError::DuplicateSample { id: pair[0].clone() });
        }
    }
    Ok(())
}

fn stage(name: &str, mut samples: Vec<String>, seed: u64, index: u64) -> Result<Stage, QaError> {
    check_unique(&samples)?;
    let mut rng = rng_for_seed(derive_seed(seed, index));
    samples.shuffle(&mut rng);
    Ok(Stage { name: name.to_string(), samples })
}

/// Builds the stage manifest for a dataset strategy from synthetic and
/// real-world sample id lists. Every stage must end up non-empty.
pub fn build_manifest(
    synthetic: &[String],
    real_world: &[String],
    strategy: DatasetStrategy,
    seed: u64,
) -> Result<StageManifest, QaError> {
    let need_real = |required: bool| -> Result<(), QaError> {
        if required && real_world.is_empty() {
            return Err(QaError::EmptyCorpus { strategy: strategy.as_str(), which: "real-world" });
        }
        Ok(())
    };
    let need_synth = |required: bool| -> Result<(), QaError> {
        if required && synthetic.is_empty() {
            return Err(QaError::EmptyCorpus { strategy: strategy.as_str(), which: "synthetic" });
        }
        Ok(())
    };

    let stages = match strategy {
        DatasetStrategy::T1 => {
            need_real(true)?;
            vec![stage("real-world", real_world.to_vec(), seed, 0)?]
        }
        DatasetStrategy::T2 => {
            if synthetic.is_empty() && real_world.is_empty() {
                return Err(QaError::EmptyCorpus {
                    strategy: strategy.as_str(),
                    which: "real-world or synthetic",
                });
            }
            let mut mixed = real_world.to_vec();
            mixed.extend_from_slice(synthetic);
            vec![stage("mixed", mixed, seed, 0)?]
        }
        DatasetStrategy::T3 => {
            need_real(true)?;
            need_synth(true)?;
            vec![
                stage("real-world", real_world.to_vec(), seed, 0)?,
                stage("synthetic", synthetic.to_vec(), seed, 1)?,
            ]
        }
        DatasetStrategy::T4 => {
            need_real(true)?;
            need_synth(true)?;
            vec![
                stage("synthetic", synthetic.to_vec(), seed, 0)?,
                stage("real-world", real_world.to_vec(), seed, 1)?,
            ]
        }
    };
    Ok(StageManifest { strategy, seed, stages })
}
