//! Bit-exact network persistence.
//!
//! Layout (all integers and floats little-endian regardless of host):
//!
//! ```text
//! magic    8 bytes  "MLPCKPT\0"
//! version  u8       currently 1
//! layers   u32      layer count
//! per layer: in u32, out u32, activation code u8
//! per layer: weights row-major f64 (out*in), then bias f64 (out)
//! ```

use crate::error::{Error, Result};
use crate::nn::mlp::{Activation, LayerParams, Matrix, MlpParams};
use std::path::Path;

pub const MAGIC: [u8; 8] = *b"MLPCKPT\0";
pub const VERSION: u8 = 1;

/// Serialize network parameters into the checkpoint byte layout.
pub fn to_bytes(params: &MlpParams) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(params.layers.len() as u32).to_le_bytes());
    for layer in &params.layers {
        out.extend_from_slice(&(layer.in_dim() as u32).to_le_bytes());
        out.extend_from_slice(&(layer.out_dim() as u32).to_le_bytes());
        out.push(layer.activation.code());
    }
    for layer in &params.layers {
        for v in layer.weights.data() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for v in &layer.bias {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::Checkpoint(format!(
                "truncated checkpoint: wanted {} bytes at offset {}, have {}",
                n,
                self.pos,
                self.bytes.len() - self.pos
            )));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Parse one checkpoint block starting at `bytes[0]`, returning the network
/// and the number of bytes consumed (so blocks can be concatenated).
pub fn parse_block(bytes: &[u8]) -> Result<(MlpParams, usize)> {
    let mut cur = Cursor { bytes, pos: 0 };
    if cur.take(8)? != MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let version = cur.u8()?;
    if version != VERSION {
        return Err(Error::Checkpoint(format!(
            "unsupported checkpoint version {version}"
        )));
    }
    let n_layers = cur.u32()? as usize;
    if n_layers == 0 {
        return Err(Error::Checkpoint("checkpoint has zero layers".into()));
    }
    let mut shapes = Vec::with_capacity(n_layers);
    for _ in 0..n_layers {
        let in_dim = cur.u32()? as usize;
        let out_dim = cur.u32()? as usize;
        let code = cur.u8()?;
        let activation = Activation::from_code(code)
            .ok_or_else(|| Error::Checkpoint(format!("unknown activation code {code}")))?;
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::Checkpoint("zero-width layer in header".into()));
        }
        shapes.push((in_dim, out_dim, activation));
    }
    for w in shapes.windows(2) {
        if w[0].1 != w[1].0 {
            return Err(Error::Checkpoint(format!(
                "layer dims do not chain: {} out vs {} in",
                w[0].1, w[1].0
            )));
        }
    }
    let mut layers = Vec::with_capacity(n_layers);
    for (in_dim, out_dim, activation) in shapes {
        let mut weights = Matrix::zeros(out_dim, in_dim);
        for i in 0..out_dim * in_dim {
            weights.data_mut()[i] = cur.f64()?;
        }
        let mut bias = vec![0.0; out_dim];
        for b in bias.iter_mut() {
            *b = cur.f64()?;
        }
        layers.push(LayerParams {
            weights,
            bias,
            activation,
        });
    }
    Ok((MlpParams { layers }, cur.pos))
}

pub fn save_checkpoint(params: &MlpParams, path: &Path) -> Result<()> {
    std::fs::write(path, to_bytes(params))?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<MlpParams> {
    let bytes = std::fs::read(path)?;
    let (params, consumed) = parse_block(&bytes)?;
    if consumed != bytes.len() {
        return Err(Error::Checkpoint(format!(
            "trailing bytes after checkpoint: {} consumed, {} total",
            consumed,
            bytes.len()
        )));
    }
    Ok(params)
}
