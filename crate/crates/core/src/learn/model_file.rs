use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ForestModel, LearnError, LinearModel};
use crate::features::FeatureVocabulary;

pub const MODEL_FILE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrainedModel {
    Linear {
        model: LinearModel,
        /// Labels for the positive and negative side.
        positive: String,
        negative: String,
    },
    Forest {
        model: ForestModel,
    },
}

/// A trained model bundled with the vocabulary it expects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub version: u32,
    pub vocabulary_checksum: String,
    pub seed: u64,
    pub model: TrainedModel,
}

impl ModelFile {
    pub fn new(model: TrainedModel, vocabulary: &FeatureVocabulary, seed: u64) -> Self {
        Self {
            version: MODEL_FILE_VERSION,
            vocabulary_checksum: vocabulary.checksum(),
            seed,
            model,
        }
    }

    /// Refuse vocabularies other than the one the model was trained with.
    pub fn check_vocabulary(&self, vocabulary: &FeatureVocabulary) -> Result<(), LearnError> {
        let found = vocabulary.checksum();
        if found != self.vocabulary_checksum {
            return Err(LearnError::VocabularyChecksum {
                expected: self.vocabulary_checksum.clone(),
                found,
            });
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), LearnError> {
        let raw = serde_json::to_string(self)?;
        std::fs::write(path, raw).map_err(|source| LearnError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, LearnError> {
        let raw = std::fs::read_to_string(path).map_err(|source| LearnError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let file: ModelFile = serde_json::from_str(&raw)?;
        if file.version != MODEL_FILE_VERSION {
            return Err(LearnError::Version(file.version));
        }
        Ok(file)
    }
}
