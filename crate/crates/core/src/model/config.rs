use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a document without labels is treated when labels are in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmptyLabelPolicy {
    /// The document may use every topic, as in the unlabeled model.
    #[default]
    AllTopics,
    /// An empty label set is an error.
    Strict,
}

impl FromStr for EmptyLabelPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-topics" => Ok(Self::AllTopics),
            "strict" => Ok(Self::Strict),
            other => Err(Error::Config(format!(
                "unknown empty-label policy `{other}` (expected all-topics or strict)"
            ))),
        }
    }
}

/// The four members of the model family. All of them run on the same
/// sampler; they differ in whether labels restrict topics and in how many
/// languages are modeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelVariant {
    Lda,
    Llda,
    Pltm,
    Plltm,
}

impl ModelVariant {
    pub fn uses_labels(self) -> bool {
        matches!(self, Self::Llda | Self::Plltm)
    }

    pub fn is_polylingual(self) -> bool {
        matches!(self, Self::Pltm | Self::Plltm)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Lda => "lda",
            Self::Llda => "llda",
            Self::Pltm => "pltm",
            Self::Plltm => "plltm",
        }
    }
}

impl fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lda" => Ok(Self::Lda),
            "llda" | "l-lda" => Ok(Self::Llda),
            "pltm" => Ok(Self::Pltm),
            "plltm" | "pll-tm" => Ok(Self::Plltm),
            other => Err(Error::Config(format!(
                "unknown model `{other}` (expected lda, llda, pltm or plltm)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub num_topics: usize,
    pub num_languages: usize,
    /// Symmetric document-topic concentration.
    pub alpha: f64,
    /// Per-language topic-term concentration.
    pub beta: Vec<f64>,
    pub use_labels: bool,
    pub sweeps: usize,
    pub burn_in: usize,
    pub seed: u64,
    #[serde(default)]
    pub empty_labels: EmptyLabelPolicy,
    /// Average phi over the post-burn-in sweeps instead of using the
    /// final state only.
    #[serde(default)]
    pub average_samples: bool,
}

pub const DEFAULT_ALPHA: f64 = 0.1;
pub const DEFAULT_BETA: f64 = 0.01;

impl ModelConfig {
    pub fn new(num_topics: usize, num_languages: usize) -> Self {
        Self {
            num_topics,
            num_languages,
            alpha: DEFAULT_ALPHA,
            beta: vec![DEFAULT_BETA; num_languages],
            use_labels: false,
            sweeps: 500,
            burn_in: 0,
            seed: 0,
            empty_labels: EmptyLabelPolicy::AllTopics,
            average_samples: false,
        }
    }

    pub fn for_variant(variant: ModelVariant, num_topics: usize, num_languages: usize) -> Self {
        Self {
            use_labels: variant.uses_labels(),
            ..Self::new(num_topics, num_languages)
        }
    }

    pub fn with_labels(mut self, use_labels: bool) -> Self {
        self.use_labels = use_labels;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// A single value is broadcast to every language.
    pub fn with_beta(mut self, beta: &[f64]) -> Self {
        self.beta = if beta.len() == 1 {
            vec![beta[0]; self.num_languages]
        } else {
            beta.to_vec()
        };
        self
    }

    pub fn with_sweeps(mut self, sweeps: usize, burn_in: usize) -> Self {
        self.sweeps = sweeps;
        self.burn_in = burn_in;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.num_topics == 0 {
            return fail("number of topics must be at least 1".into());
        }
        if self.num_topics > u32::MAX as usize {
            return fail("too many topics".into());
        }
        if self.num_languages == 0 {
            return fail("number of languages must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return fail(format!("alpha must be positive, got {}", self.alpha));
        }
        if self.beta.len() != self.num_languages {
            return fail(format!(
                "expected {} beta values (one per language), got {}",
                self.num_languages,
                self.beta.len()
            ));
        }
        if let Some(b) = self.beta.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
            return fail(format!("beta must be positive, got {b}"));
        }
        if self.burn_in >= self.sweeps {
            return fail(format!(
                "burn-in ({}) must be smaller than the number of sweeps ({})",
                self.burn_in, self.sweeps
            ));
        }
        Ok(())
    }
}
