use crate::corpus::TermId;
use crate::error::{Error, Result};
use crate::model::TrainedModel;

/// The `n` most probable terms of a topic, most probable first; equal
/// probabilities are ordered by term id.
pub fn top_terms(model: &TrainedModel, topic: usize, language: usize, n: usize) -> Result<Vec<(TermId, f64)>> {
    let phi = model.phi.get(language).ok_or_else(|| {
        Error::Config(format!(
            "language {language} does not exist; the model has {}",
            model.num_languages()
        ))
    })?;
    if topic >= phi.rows() {
        return Err(Error::Config(format!(
            "topic {topic} does not exist; the model has {}",
            phi.rows()
        )));
    }
    Ok(ranked(phi.row(topic), n))
}

pub(crate) fn ranked(row: &[f64], n: usize) -> Vec<(TermId, f64)> {
    let mut order: Vec<(TermId, f64)> = row.iter().enumerate().map(|(t, &p)| (t as TermId, p)).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    order.truncate(n);
    order
}
