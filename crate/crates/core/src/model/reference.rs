//! Plain samplers for the unlabeled special cases, written directly
//! against nested count vectors with no label masks. They consume random
//! numbers in the same order as the unified sampler, so the unified
//! sampler with full masks must reproduce their trajectories bit for bit.

// Index loops keep the arithmetic in the same order as the unified sampler.
#![allow(clippy::needless_range_loop)]

use rand::Rng;

use super::{Assignments, TopicId};

/// Standard collapsed Gibbs LDA over a single language.
#[derive(Debug, Clone)]
pub struct LdaReference {
    num_topics: usize,
    vocab_size: usize,
    alpha: f64,
    beta: f64,
    /// `[document][position]`
    pub z: Vec<Vec<TopicId>>,
    ndk: Vec<Vec<u32>>,
    nkw: Vec<Vec<u32>>,
    nk: Vec<u32>,
}

impl LdaReference {
    pub fn new<R: Rng + ?Sized>(
        docs: &[Vec<u32>],
        vocab_size: usize,
        num_topics: usize,
        alpha: f64,
        beta: f64,
        rng: &mut R,
    ) -> Self {
        let mut lda = Self {
            num_topics,
            vocab_size,
            alpha,
            beta,
            z: Vec::with_capacity(docs.len()),
            ndk: vec![vec![0; num_topics]; docs.len()],
            nkw: vec![vec![0; vocab_size]; num_topics],
            nk: vec![0; num_topics],
        };
        for (d, doc) in docs.iter().enumerate() {
            let mut zd = Vec::with_capacity(doc.len());
            for &w in doc {
                let k = rng.random_range(0..num_topics);
                lda.ndk[d][k] += 1;
                lda.nkw[k][w as usize] += 1;
                lda.nk[k] += 1;
                zd.push(k as TopicId);
            }
            lda.z.push(zd);
        }
        lda
    }

    pub fn sweep<R: Rng + ?Sized>(&mut self, docs: &[Vec<u32>], rng: &mut R) {
        let vb = self.vocab_size as f64 * self.beta;
        let mut p = vec![0.0; self.num_topics];
        for (d, doc) in docs.iter().enumerate() {
            for (i, &w) in doc.iter().enumerate() {
                let w = w as usize;
                let old = self.z[d][i] as usize;
                self.ndk[d][old] -= 1;
                self.nkw[old][w] -= 1;
                self.nk[old] -= 1;

                let mut sum = 0.0;
                for k in 0..self.num_topics {
                    p[k] = (self.ndk[d][k] as f64 + self.alpha) * (self.nkw[k][w] as f64 + self.beta)
                        / (self.nk[k] as f64 + vb);
                    sum += p[k];
                }
                let u = rng.random::<f64>() * sum;
                let mut new = self.num_topics - 1;
                let mut acc = 0.0;
                for (k, pk) in p.iter().enumerate() {
                    acc += pk;
                    if u < acc {
                        new = k;
                        break;
                    }
                }

                self.ndk[d][new] += 1;
                self.nkw[new][w] += 1;
                self.nk[new] += 1;
                self.z[d][i] = new as TopicId;
            }
        }
    }
}

/// Unlabeled polylingual model: one topic mixture per document shared by
/// all languages, separate topic-term counts per language.
#[derive(Debug, Clone)]
pub struct PolylingualReference {
    num_topics: usize,
    alpha: f64,
    beta: Vec<f64>,
    vocab_sizes: Vec<usize>,
    pub z: Assignments,
    ndk: Vec<Vec<u32>>,
    /// `[language][topic][term]`
    nkw: Vec<Vec<Vec<u32>>>,
    nk: Vec<Vec<u32>>,
}

impl PolylingualReference {
    /// `docs[d][l]` is the token sequence of language `l` in document `d`.
    pub fn new<R: Rng + ?Sized>(
        docs: &[Vec<Vec<u32>>],
        vocab_sizes: &[usize],
        num_topics: usize,
        alpha: f64,
        beta: &[f64],
        rng: &mut R,
    ) -> Self {
        let langs = vocab_sizes.len();
        let mut m = Self {
            num_topics,
            alpha,
            beta: beta.to_vec(),
            vocab_sizes: vocab_sizes.to_vec(),
            z: Vec::with_capacity(docs.len()),
            ndk: vec![vec![0; num_topics]; docs.len()],
            nkw: vocab_sizes.iter().map(|&v| vec![vec![0; v]; num_topics]).collect(),
            nk: vec![vec![0; num_topics]; langs],
        };
        for (d, doc) in docs.iter().enumerate() {
            let mut zd = Vec::with_capacity(langs);
            for l in 0..langs {
                let mut zl = Vec::new();
                for &w in doc.get(l).map(Vec::as_slice).unwrap_or_default() {
                    let k = rng.random_range(0..num_topics);
                    m.ndk[d][k] += 1;
                    m.nkw[l][k][w as usize] += 1;
                    m.nk[l][k] += 1;
                    zl.push(k as TopicId);
                }
                zd.push(zl);
            }
            m.z.push(zd);
        }
        m
    }

    pub fn sweep<R: Rng + ?Sized>(&mut self, docs: &[Vec<Vec<u32>>], rng: &mut R) {
        let mut p = vec![0.0; self.num_topics];
        for (d, doc) in docs.iter().enumerate() {
            for (l, tokens) in doc.iter().enumerate() {
                let beta = self.beta[l];
                let vb = self.vocab_sizes[l] as f64 * beta;
                for (i, &w) in tokens.iter().enumerate() {
                    let w = w as usize;
                    let old = self.z[d][l][i] as usize;
                    self.ndk[d][old] -= 1;
                    self.nkw[l][old][w] -= 1;
                    self.nk[l][old] -= 1;

                    let mut sum = 0.0;
                    for k in 0..self.num_topics {
                        p[k] = (self.ndk[d][k] as f64 + self.alpha) * (self.nkw[l][k][w] as f64 + beta)
                            / (self.nk[l][k] as f64 + vb);
                        sum += p[k];
                    }
                    let u = rng.random::<f64>() * sum;
                    let mut new = self.num_topics - 1;
                    let mut acc = 0.0;
                    for (k, pk) in p.iter().enumerate() {
                        acc += pk;
                        if u < acc {
                            new = k;
                            break;
                        }
                    }

                    self.ndk[d][new] += 1;
                    self.nkw[l][new][w] += 1;
                    self.nk[l][new] += 1;
                    self.z[d][l][i] = new as TopicId;
                }
            }
        }
    }
}
