use crate::error::{Error, Result};
use crate::model::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct TopicMatching {
    /// `assignment[learned] = true topic`.
    pub assignment: Vec<usize>,
    /// L1 distance of each learned topic to its match, over all languages
    /// concatenated.
    pub distances: Vec<f64>,
    pub mean_l1: f64,
}

/// Greedy matching: repeatedly pairs the globally closest unused
/// (learned, true) topics. Not guaranteed optimal.
pub fn match_topics(learned: &[Matrix], truth: &[Matrix]) -> Result<TopicMatching> {
    let shape = |ms: &[Matrix]| ms.iter().map(|m| (m.rows(), m.cols())).collect::<Vec<_>>();
    if learned.is_empty() || shape(learned) != shape(truth) {
        return Err(Error::Config(format!(
            "topic matrices differ in shape: {:?} vs {:?}",
            shape(learned),
            shape(truth)
        )));
    }
    let k = learned[0].rows();
    if learned.iter().any(|m| m.rows() != k) {
        return Err(Error::Config("languages disagree on the number of topics".into()));
    }

    let mut pairs = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let dist: f64 = learned
                .iter()
                .zip(truth)
                .map(|(a, b)| a.row(i).iter().zip(b.row(j)).map(|(x, y)| (x - y).abs()).sum::<f64>())
                .sum();
            pairs.push((dist, i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut assignment = vec![usize::MAX; k];
    let mut distances = vec![0.0; k];
    let mut used = vec![false; k];
    let mut matched = 0;
    for (dist, i, j) in pairs {
        if assignment[i] != usize::MAX || used[j] {
            continue;
        }
        assignment[i] = j;
        distances[i] = dist;
        used[j] = true;
        matched += 1;
        if matched == k {
            break;
        }
    }
    let mean_l1 = distances.iter().sum::<f64>() / k as f64;
    Ok(TopicMatching {
        assignment,
        distances,
        mean_l1,
    })
}
