//! Ground-truth file, little-endian:
//!
//! ```text
//! magic          8 bytes "PLLTMTRU"
//! version        u32     1
//! num_topics     u32
//! num_languages  u32
//! num_documents  u64
//! vocab_size     u64 x L
//! phi_true       for each language, K x V^l f64
//! theta_true     D x K f64
//! masks          D x (u32 count, u32 x count)
//! assignments    D x L x (u32 count, u32 x count)
//! ```

use std::fs;
use std::path::Path;

use super::GroundTruth;
use crate::error::{Error, Result};
use crate::model::persist::{ByteReader, ByteWriter};
use crate::model::LabelMask;

const MAGIC: &[u8; 8] = b"PLLTMTRU";
const VERSION: u32 = 1;

pub fn encode_ground_truth(truth: &GroundTruth) -> Vec<u8> {
    let mut w = ByteWriter::default();
    w.bytes(MAGIC);
    w.u32(VERSION);
    w.u32(truth.theta_true.cols() as u32);
    w.u32(truth.phi_true.len() as u32);
    w.u64(truth.theta_true.rows() as u64);
    for m in &truth.phi_true {
        w.u64(m.cols() as u64);
    }
    for m in &truth.phi_true {
        w.matrix(m);
    }
    w.matrix(&truth.theta_true);
    for set in truth.masks.sets() {
        w.u32_list(set);
    }
    for zd in &truth.assignments {
        for zl in zd {
            w.u32_list(zl);
        }
    }
    w.into_inner()
}

pub fn decode_ground_truth(bytes: &[u8]) -> Result<GroundTruth> {
    let mut r = ByteReader::new(bytes);
    r.magic(MAGIC)?;
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported ground-truth version {version}")));
    }
    let k = r.u32()? as usize;
    let l = r.u32()? as usize;
    let d = r.usize()?;
    if l > 1 << 16 {
        return Err(Error::Format(format!("implausible language count {l}")));
    }
    let vocab_sizes = (0..l).map(|_| r.usize()).collect::<Result<Vec<_>>>()?;
    let phi_true = vocab_sizes.iter().map(|&v| r.matrix(k, v)).collect::<Result<Vec<_>>>()?;
    let theta_true = r.matrix(d, k)?;
    let sets = (0..d).map(|_| r.u32_list()).collect::<Result<Vec<_>>>()?;
    let assignments = (0..d)
        .map(|_| (0..l).map(|_| r.u32_list()).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    r.finish()?;
    Ok(GroundTruth {
        phi_true,
        theta_true,
        masks: LabelMask::from_sets(sets),
        assignments,
    })
}

pub fn save_ground_truth(truth: &GroundTruth, path: &Path) -> Result<()> {
    fs::write(path, encode_ground_truth(truth)).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

pub fn load_ground_truth(path: &Path) -> Result<GroundTruth> {
    let bytes = fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    decode_ground_truth(&bytes)
}
