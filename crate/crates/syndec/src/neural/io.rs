//! Model persistence and training-history export.
//!
//! Model files are a fixed little-endian binary layout:
//!
//! ```text
//! magic "NDEC" | version u16 | n u16 | k u16 | layer count u16
//! per layer: kind tag u8, then its u32 dims
//!   0 = dense (inputs, outputs)   1 = batch norm (width)
//!   2 = relu                      3 = sigmoid
//!   4 = concat skip (source layer index)
//! all parameter tensors as f64, in declaration order
//!   dense: W row-major, b; batch norm: gamma, beta, running mean, running var
//! crc32 over everything above
//! ```
//!
//! Loading rebuilds the layer chain, refuses anything with a bad magic,
//! version, checksum, or byte count, and re-validates the chain shape.

use crate::error::{Error, Result};
use crate::neural::layer::{Activation, LayerSpec};
use crate::neural::mlp::Mlp;
use crate::neural::train::EpochRecord;
use crate::textio::real6;
use std::io::Write;
use std::path::Path;

const MAGIC: &[u8; 4] = b"NDEC";
const VERSION: u16 = 1;

const TAG_DENSE: u8 = 0;
const TAG_BATCH_NORM: u8 = 1;
const TAG_RELU: u8 = 2;
const TAG_SIGMOID: u8 = 3;
const TAG_CONCAT: u8 = 4;

fn push_u16(buf: &mut Vec<u8>, v: u16) {
    buf.extend_from_slice(&v.to_le_bytes());
}

fn push_u32(buf: &mut Vec<u8>, v: u32) {
    buf.extend_from_slice(&v.to_le_bytes());
}

/// Serialize a model together with the code dimensions it was trained for.
pub fn save_model(path: &Path, model: &Mlp, n: usize, k: usize) -> Result<()> {
    let specs = model.specs();
    if n > u16::MAX as usize || k > u16::MAX as usize || specs.len() > u16::MAX as usize {
        return Err(Error::Capacity("model header field exceeds 16 bits".into()));
    }
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    push_u16(&mut buf, VERSION);
    push_u16(&mut buf, n as u16);
    push_u16(&mut buf, k as u16);
    push_u16(&mut buf, specs.len() as u16);
    for spec in &specs {
        match *spec {
            LayerSpec::Dense { inputs, outputs } => {
                buf.push(TAG_DENSE);
                push_u32(&mut buf, inputs as u32);
                push_u32(&mut buf, outputs as u32);
            }
            LayerSpec::BatchNorm { width } => {
                buf.push(TAG_BATCH_NORM);
                push_u32(&mut buf, width as u32);
            }
            LayerSpec::Activation { which: Activation::Relu } => buf.push(TAG_RELU),
            LayerSpec::Activation { which: Activation::Sigmoid } => buf.push(TAG_SIGMOID),
            LayerSpec::ConcatSkip { source } => {
                buf.push(TAG_CONCAT);
                push_u32(&mut buf, source as u32);
            }
        }
    }
    for tensor in model.all_tensors() {
        for &v in tensor {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    let mut file = std::fs::File::create(path)?;
    file.write_all(&buf)?;
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, count: usize) -> Result<&'a [u8]> {
        if self.pos + count > self.bytes.len() {
            return Err(Error::CorruptModel("file truncated".into()));
        }
        let out = &self.bytes[self.pos..self.pos + count];
        self.pos += count;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }
}

/// Load a model saved by [`save_model`]; returns the model and the `(n, k)`
/// it was saved for.
pub fn load_model(path: &Path) -> Result<(Mlp, usize, usize)> {
    let bytes = std::fs::read(path)?;
    if bytes.len() < MAGIC.len() + 2 + 2 + 2 + 2 + 4 {
        return Err(Error::CorruptModel("file too short".into()));
    }
    let (body, crc_bytes) = bytes.split_at(bytes.len() - 4);
    let stored_crc = u32::from_le_bytes(crc_bytes.try_into().unwrap());
    if crc32fast::hash(body) != stored_crc {
        return Err(Error::CorruptModel("checksum mismatch".into()));
    }
    let mut cur = Cursor { bytes: body, pos: 0 };
    if cur.take(4)? != MAGIC {
        return Err(Error::CorruptModel("bad magic".into()));
    }
    let version = cur.u16()?;
    if version != VERSION {
        return Err(Error::CorruptModel(format!("unsupported format version {version}")));
    }
    let n = cur.u16()? as usize;
    let k = cur.u16()? as usize;
    if k >= n || n == 0 {
        return Err(Error::CorruptModel(format!("implausible code dimensions ({n},{k})")));
    }
    let layer_count = cur.u16()? as usize;
    let mut specs = Vec::with_capacity(layer_count);
    for _ in 0..layer_count {
        let spec = match cur.u8()? {
            TAG_DENSE => LayerSpec::Dense {
                inputs: cur.u32()? as usize,
                outputs: cur.u32()? as usize,
            },
            TAG_BATCH_NORM => LayerSpec::BatchNorm { width: cur.u32()? as usize },
            TAG_RELU => LayerSpec::Activation { which: Activation::Relu },
            TAG_SIGMOID => LayerSpec::Activation { which: Activation::Sigmoid },
            TAG_CONCAT => LayerSpec::ConcatSkip { source: cur.u32()? as usize },
            tag => return Err(Error::CorruptModel(format!("unknown layer tag {tag}"))),
        };
        specs.push(spec);
    }
    let input_dim = (n - k) + n;
    let mut model = Mlp::from_specs(input_dim, &specs, 0)
        .map_err(|e| Error::CorruptModel(format!("invalid layer chain: {e}")))?;
    if model.output_dim() != n {
        return Err(Error::CorruptModel(format!(
            "network output width {} does not match code length {n}",
            model.output_dim()
        )));
    }
    let expected_f64: usize = model.all_tensors().iter().map(|t| t.len()).sum();
    if cur.remaining() != expected_f64 * 8 {
        return Err(Error::CorruptModel(format!(
            "parameter payload is {} bytes, expected {}",
            cur.remaining(),
            expected_f64 * 8
        )));
    }
    for tensor in model.all_tensors_mut() {
        for v in tensor.iter_mut() {
            *v = cur.f64()?;
        }
    }
    Ok((model, n, k))
}

/// Write the per-epoch training history as CSV.
pub fn write_history(path: &Path, records: &[EpochRecord]) -> Result<()> {
    let mut out = String::from("epoch,train_loss,val_loss,lr\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.epoch,
            real6(r.train_loss),
            real6(r.val_loss),
            real6(r.lr)
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}
