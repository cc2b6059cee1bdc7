//! Checkpoint files, little-endian:
//!
//! ```text
//! "INVW" | version u32 = 1 | tensor count u32
//! | per tensor: name (u16 length + UTF-8) | rank u8 | dims u32 each | f64 data
//! | Adam step count u64
//! ```
//!
//! Parameter tensors come first, then the Adam moments under
//! `adam.m.<name>` and `adam.v.<name>`.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, ErrorKind, Read, Write};
use std::path::Path;

use super::adam::{AdamConfig, AdamState};
use super::lstm::LstmStack;
use crate::error::{Error, Result};

pub const CHECKPOINT_MAGIC: [u8; 4] = *b"INVW";
pub const CHECKPOINT_VERSION: u32 = 1;

pub fn save_checkpoint(path: impl AsRef<Path>, stack: &LstmStack, adam: &AdamState) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_checkpoint(&mut w, stack, adam)?;
    w.flush()?;
    Ok(())
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<(LstmStack, AdamState)> {
    read_checkpoint(&mut BufReader::new(File::open(path)?))
}

pub fn write_checkpoint(w: &mut impl Write, stack: &LstmStack, adam: &AdamState) -> Result<()> {
    let params = stack.named_tensors();
    let moments = |prefix: &str, s: &LstmStack| {
        s.named_tensors()
            .into_iter()
            .map(|(n, d, t)| (format!("adam.{prefix}.{n}"), d, t.to_vec()))
            .collect::<Vec<_>>()
    };
    let mut all: Vec<(String, Vec<usize>, Vec<f64>)> = params
        .into_iter()
        .map(|(n, d, t)| (n, d, t.to_vec()))
        .collect();
    all.extend(moments("m", &adam.m));
    all.extend(moments("v", &adam.v));

    w.write_all(&CHECKPOINT_MAGIC)?;
    w.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
    w.write_all(&(all.len() as u32).to_le_bytes())?;
    for (name, dims, data) in &all {
        w.write_all(&(name.len() as u16).to_le_bytes())?;
        w.write_all(name.as_bytes())?;
        w.write_all(&[dims.len() as u8])?;
        for &d in dims {
            w.write_all(&(d as u32).to_le_bytes())?;
        }
        for v in data {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.write_all(&adam.step.to_le_bytes())?;
    Ok(())
}

fn read_exact(r: &mut impl Read, buf: &mut [u8], what: &'static str) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        ErrorKind::UnexpectedEof => Error::TruncatedFile(what),
        _ => Error::Io(e),
    })
}

fn read_u32(r: &mut impl Read, what: &'static str) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b, what)?;
    Ok(u32::from_le_bytes(b))
}

/// Reads a checkpoint; layer count and width come from the tensor shapes.
/// Adam hyperparameters are not stored and come back as defaults.
pub fn read_checkpoint(r: &mut impl Read) -> Result<(LstmStack, AdamState)> {
    let mut magic = [0u8; 4];
    read_exact(r, &mut magic, "magic")?;
    if magic != CHECKPOINT_MAGIC {
        return Err(Error::BadMagic {
            expected: CHECKPOINT_MAGIC,
            found: magic,
        });
    }
    let version = read_u32(r, "version")?;
    if version != CHECKPOINT_VERSION {
        return Err(Error::BadVersion(version));
    }
    let count = read_u32(r, "tensor count")? as usize;
    let mut tensors: HashMap<String, (Vec<usize>, Vec<f64>)> = HashMap::with_capacity(count);
    for _ in 0..count {
        let mut len = [0u8; 2];
        read_exact(r, &mut len, "tensor name")?;
        let mut name = vec![0u8; u16::from_le_bytes(len) as usize];
        read_exact(r, &mut name, "tensor name")?;
        let name = String::from_utf8(name)
            .map_err(|_| Error::Malformed("tensor name is not UTF-8".into()))?;
        let mut rank = [0u8; 1];
        read_exact(r, &mut rank, "tensor rank")?;
        let mut dims = Vec::with_capacity(rank[0] as usize);
        for _ in 0..rank[0] {
            dims.push(read_u32(r, "tensor dims")? as usize);
        }
        let n: usize = dims.iter().product();
        let mut raw = vec![0u8; n * 8];
        read_exact(r, &mut raw, "tensor data")?;
        let data = raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        tensors.insert(name, (dims, data));
    }
    let mut step = [0u8; 8];
    read_exact(r, &mut step, "adam step count")?;

    let (units, layers) = {
        let head = tensors
            .get("head.weight")
            .ok_or_else(|| Error::Malformed("missing tensor head.weight".into()))?;
        let units = head.0.first().copied().unwrap_or(0);
        let layers = (0..)
            .take_while(|l| tensors.contains_key(&format!("lstm.{l}.w_input")))
            .count();
        (units, layers)
    };
    if units == 0 || layers == 0 {
        return Err(Error::Malformed("checkpoint holds no LSTM layers".into()));
    }

    let mut fill = |prefix: &str| -> Result<LstmStack> {
        let mut stack = LstmStack::zeros(layers, units);
        let names: Vec<(String, Vec<usize>)> = stack
            .named_tensors()
            .into_iter()
            .map(|(n, d, _)| (n, d))
            .collect();
        for ((name, dims), dest) in names.into_iter().zip(stack.tensors_mut()) {
            let key = format!("{prefix}{name}");
            let (got_dims, data) = tensors
                .remove(&key)
                .ok_or_else(|| Error::Malformed(format!("missing tensor {key}")))?;
            if got_dims != dims {
                return Err(Error::ShapeMismatch(format!(
                    "{key}: expected {dims:?}, found {got_dims:?}"
                )));
            }
            dest.copy_from_slice(&data);
        }
        Ok(stack)
    };
    let stack = fill("")?;
    let m = fill("adam.m.")?;
    let v = fill("adam.v.")?;
    let adam = AdamState {
        config: AdamConfig::default(),
        m,
        v,
        step: u64::from_le_bytes(step),
    };
    Ok((stack, adam))
}
