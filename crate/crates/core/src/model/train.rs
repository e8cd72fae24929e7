use super::{
    build_label_mask, init_state, Assignments, LabelMask, Matrix, ModelConfig, ModelState, Sampler,
};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::rng::{seeded, ChainRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepProgress {
    /// 1-based index of the sweep just finished.
    pub sweep: usize,
    /// Tokens whose topic changed during the sweep.
    pub reassigned: usize,
}

/// Topic-term distributions and the settings that produced them. Shared
/// read-only between evaluation workers.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub config: ModelConfig,
    pub label_mask: LabelMask,
    /// For each model language, the corpus language it was trained on.
    pub source_languages: Vec<usize>,
    /// Per language, a `K x V^l` matrix whose rows are distributions.
    pub phi: Vec<Matrix>,
    /// Assignments of the last sweep; counts can be rebuilt with
    /// [`TrainedModel::final_state`].
    pub final_assignments: Option<Assignments>,
}

impl TrainedModel {
    pub fn num_topics(&self) -> usize {
        self.config.num_topics
    }

    pub fn num_languages(&self) -> usize {
        self.phi.len()
    }

    pub fn vocab_sizes(&self) -> Vec<usize> {
        self.phi.iter().map(Matrix::cols).collect()
    }

    /// Rebuilds the final sampler state against the training corpus.
    pub fn final_state(&self, corpus: &Corpus) -> Result<ModelState> {
        let z = self
            .final_assignments
            .clone()
            .ok_or_else(|| Error::Config("model was saved without assignments".into()))?;
        ModelState::from_assignments(corpus, z, self.num_topics())
    }

    /// Model language index for a corpus language.
    pub fn model_language(&self, corpus_language: usize) -> Option<usize> {
        self.source_languages.iter().position(|&l| l == corpus_language)
    }
}

/// Incremental trainer: one chain, one state, one random stream.
pub struct Trainer<'a> {
    corpus: &'a Corpus,
    config: ModelConfig,
    mask: LabelMask,
    state: ModelState,
    sampler: Sampler,
    rng: ChainRng,
    sweeps_done: usize,
    phi_sum: Option<(Vec<Matrix>, usize)>,
}

impl<'a> Trainer<'a> {
    pub fn new(corpus: &'a Corpus, config: ModelConfig) -> Result<Self> {
        config.validate()?;
        if corpus.num_languages() != config.num_languages {
            return Err(Error::Config(format!(
                "configuration has {} languages, corpus has {}",
                config.num_languages,
                corpus.num_languages()
            )));
        }
        if corpus.num_documents() == 0 {
            return Err(Error::NoDocuments);
        }
        let mask = build_label_mask(corpus, &config)?;
        let mut rng = seeded(config.seed);
        let state = init_state(corpus, &mask, &config, &mut rng)?;
        let sampler = Sampler::new(&config, state.vocab_sizes());
        Ok(Self {
            corpus,
            config,
            mask,
            state,
            sampler,
            rng,
            sweeps_done: 0,
            phi_sum: None,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn mask(&self) -> &LabelMask {
        &self.mask
    }

    pub fn state(&self) -> &ModelState {
        &self.state
    }

    pub fn sweeps_done(&self) -> usize {
        self.sweeps_done
    }

    pub fn sweep(&mut self) -> SweepProgress {
        let reassigned = self.sampler.sweep_observed(
            &mut self.state,
            &self.mask,
            &self.config,
            self.corpus,
            &mut self.rng,
            |_, _, _, _, _| {},
        );
        self.sweeps_done += 1;
        if self.config.average_samples && self.sweeps_done > self.config.burn_in {
            let phi = self.state.phi(&self.config.beta);
            match &mut self.phi_sum {
                Some((sum, n)) => {
                    for (s, p) in sum.iter_mut().zip(&phi) {
                        s.add_assign(p);
                    }
                    *n += 1;
                }
                None => self.phi_sum = Some((phi, 1)),
            }
        }
        SweepProgress {
            sweep: self.sweeps_done,
            reassigned,
        }
    }

    /// Point estimate of phi from the current state.
    pub fn current_phi(&self) -> Vec<Matrix> {
        self.state.phi(&self.config.beta)
    }

    /// Snapshot usable for evaluation mid-run.
    pub fn snapshot(&self) -> TrainedModel {
        TrainedModel {
            config: self.config.clone(),
            label_mask: self.mask.clone(),
            source_languages: (0..self.config.num_languages).collect(),
            phi: self.current_phi(),
            final_assignments: None,
        }
    }

    pub fn finish(self) -> TrainedModel {
        let phi = match self.phi_sum {
            Some((mut sum, n)) => {
                for m in &mut sum {
                    m.scale(1.0 / n as f64);
                }
                sum
            }
            None => self.state.phi(&self.config.beta),
        };
        TrainedModel {
            source_languages: (0..self.config.num_languages).collect(),
            config: self.config,
            label_mask: self.mask,
            phi,
            final_assignments: Some(self.state.into_assignments()),
        }
    }
}

pub fn train(corpus: &Corpus, config: &ModelConfig) -> Result<TrainedModel> {
    train_with_progress(corpus, config, |_| {})
}

pub fn train_with_progress<F>(corpus: &Corpus, config: &ModelConfig, mut progress: F) -> Result<TrainedModel>
where
    F: FnMut(SweepProgress),
{
    let mut trainer = Trainer::new(corpus, config.clone())?;
    for _ in 0..config.sweeps {
        progress(trainer.sweep());
    }
    Ok(trainer.finish())
}

/// Independent chains, one per configuration (typically differing only in
/// seed). Each chain owns its state; chains run concurrently under
/// [`Execution::Parallel`].
pub fn train_chains(corpus: &Corpus, configs: &[ModelConfig], exec: Execution) -> Result<Vec<TrainedModel>> {
    exec::map_indexed(exec, configs, |_, cfg| train(corpus, cfg))
        .into_iter()
        .collect()
}
