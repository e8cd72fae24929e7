//! Binary model file.
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! magic            8 bytes  "PLLTMMOD"
//! version          u32      1
//! num_topics       u32      K
//! num_languages    u32      L
//! alpha            f64
//! beta             f64 x L
//! use_labels       u8
//! sweeps           u64
//! burn_in          u64
//! seed             u64
//! empty_labels     u8       0 = all-topics, 1 = strict
//! average_samples  u8
//! source_language  u32 x L
//! vocab_size       u64 x L
//! num_documents    u64      D
//! label mask       D x (u32 count, u32 x count topic ids)
//! phi              for each language, K x V^l f64, row-major
//! has_assignments  u8
//! assignments      if present: D x L x (u32 count, u32 x count topic ids)
//! ```

use std::fs;
use std::path::Path;

use super::{Assignments, EmptyLabelPolicy, LabelMask, Matrix, ModelConfig, TrainedModel};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"PLLTMMOD";
pub const VERSION: u32 = 1;

#[derive(Default)]
pub(crate) struct ByteWriter {
    buf: Vec<u8>,
}

impl ByteWriter {
    pub(crate) fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }
    pub(crate) fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }
    pub(crate) fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    pub(crate) fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    pub(crate) fn f64(&mut self, v: f64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    pub(crate) fn u32_list(&mut self, vs: &[u32]) {
        self.u32(vs.len() as u32);
        for &v in vs {
            self.u32(v);
        }
    }
    pub(crate) fn matrix(&mut self, m: &Matrix) {
        for &v in m.as_slice() {
            self.f64(v);
        }
    }
    pub(crate) fn into_inner(self) -> Vec<u8> {
        self.buf
    }
}

pub(crate) struct ByteReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::Format(format!("truncated at byte {}", self.pos)))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    pub(crate) fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
    pub(crate) fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
    pub(crate) fn usize(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| Error::Format("size overflows usize".into()))
    }
    pub(crate) fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
    pub(crate) fn bool(&mut self) -> Result<bool> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            b => Err(Error::Format(format!("invalid flag byte {b}"))),
        }
    }
    pub(crate) fn u32_list(&mut self) -> Result<Vec<u32>> {
        let n = self.u32()? as usize;
        if n.saturating_mul(4) > self.buf.len() - self.pos {
            return Err(Error::Format(format!("list of {n} entries overruns the file")));
        }
        (0..n).map(|_| self.u32()).collect()
    }
    pub(crate) fn matrix(&mut self, rows: usize, cols: usize) -> Result<Matrix> {
        let n = rows
            .checked_mul(cols)
            .filter(|n| n.saturating_mul(8) <= self.buf.len() - self.pos)
            .ok_or_else(|| Error::Format(format!("{rows}x{cols} matrix overruns the file")))?;
        let data = (0..n).map(|_| self.f64()).collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_vec(rows, cols, data))
    }
    pub(crate) fn magic(&mut self, expected: &[u8; 8]) -> Result<()> {
        if self.take(8)? != expected {
            return Err(Error::Format("bad magic header".into()));
        }
        Ok(())
    }
    pub(crate) fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Format(format!(
                "{} trailing bytes",
                self.buf.len() - self.pos
            )));
        }
        Ok(())
    }
}

pub fn encode_model(model: &TrainedModel, include_assignments: bool) -> Vec<u8> {
    let cfg = &model.config;
    let mut w = ByteWriter::default();
    w.bytes(MAGIC);
    w.u32(VERSION);
    w.u32(cfg.num_topics as u32);
    w.u32(cfg.num_languages as u32);
    w.f64(cfg.alpha);
    for &b in &cfg.beta {
        w.f64(b);
    }
    w.u8(cfg.use_labels as u8);
    w.u64(cfg.sweeps as u64);
    w.u64(cfg.burn_in as u64);
    w.u64(cfg.seed);
    w.u8(match cfg.empty_labels {
        EmptyLabelPolicy::AllTopics => 0,
        EmptyLabelPolicy::Strict => 1,
    });
    w.u8(cfg.average_samples as u8);
    for &l in &model.source_languages {
        w.u32(l as u32);
    }
    for m in &model.phi {
        w.u64(m.cols() as u64);
    }
    w.u64(model.label_mask.num_documents() as u64);
    for set in model.label_mask.sets() {
        w.u32_list(set);
    }
    for m in &model.phi {
        w.matrix(m);
    }
    match (&model.final_assignments, include_assignments) {
        (Some(z), true) => {
            w.u8(1);
            for zd in z {
                for zl in zd {
                    w.u32_list(zl);
                }
            }
        }
        _ => w.u8(0),
    }
    w.into_inner()
}

pub fn decode_model(bytes: &[u8]) -> Result<TrainedModel> {
    let mut r = ByteReader::new(bytes);
    r.magic(MAGIC)?;
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let num_topics = r.u32()? as usize;
    let num_languages = r.u32()? as usize;
    if num_languages > 1 << 16 {
        return Err(Error::Format(format!("implausible language count {num_languages}")));
    }
    let alpha = r.f64()?;
    let beta = (0..num_languages).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
    let use_labels = r.bool()?;
    let sweeps = r.usize()?;
    let burn_in = r.usize()?;
    let seed = r.u64()?;
    let empty_labels = match r.u8()? {
        0 => EmptyLabelPolicy::AllTopics,
        1 => EmptyLabelPolicy::Strict,
        b => return Err(Error::Format(format!("invalid empty-label policy {b}"))),
    };
    let average_samples = r.bool()?;
    let config = ModelConfig {
        num_topics,
        num_languages,
        alpha,
        beta,
        use_labels,
        sweeps,
        burn_in,
        seed,
        empty_labels,
        average_samples,
    };
    config.validate().map_err(|e| Error::Format(e.to_string()))?;

    let source_languages = (0..num_languages)
        .map(|_| r.u32().map(|l| l as usize))
        .collect::<Result<Vec<_>>>()?;
    let vocab_sizes = (0..num_languages).map(|_| r.usize()).collect::<Result<Vec<_>>>()?;
    let num_documents = r.usize()?;
    let mut sets = Vec::new();
    for _ in 0..num_documents {
        let set = r.u32_list()?;
        if set.iter().any(|&k| k as usize >= num_topics) {
            return Err(Error::Format("label mask topic out of range".into()));
        }
        sets.push(set);
    }
    let phi = vocab_sizes
        .iter()
        .map(|&v| r.matrix(num_topics, v))
        .collect::<Result<Vec<_>>>()?;
    let final_assignments = if r.bool()? {
        let mut z: Assignments = Vec::with_capacity(num_documents);
        for _ in 0..num_documents {
            let zd = (0..num_languages).map(|_| r.u32_list()).collect::<Result<Vec<_>>>()?;
            z.push(zd);
        }
        Some(z)
    } else {
        None
    };
    r.finish()?;
    Ok(TrainedModel {
        config,
        label_mask: LabelMask::from_sets(sets),
        source_languages,
        phi,
        final_assignments,
    })
}

pub fn save_model(model: &TrainedModel, path: &Path, include_assignments: bool) -> Result<()> {
    fs::write(path, encode_model(model, include_assignments))
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

pub fn load_model(path: &Path) -> Result<TrainedModel> {
    let bytes = fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    decode_model(&bytes)
}
