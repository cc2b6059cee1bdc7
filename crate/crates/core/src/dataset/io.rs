//! Binary dataset files, little-endian:
//!
//! ```text
//! "INVC" | version u32 = 1 | rate numerator u32 = 44100 | rate denominator u32 = 16
//! | segment length u32 = 1024 | segment count u32 | shuffle seed u64
//! | preset name (u16 length + UTF-8) | train, val, test counts (3 x u32)
//! | per segment: 1024 x f32 audio, 1024 x f32 gesture (metres)
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Dataset, SegmentPair};
use crate::error::{Error, Result};
use crate::{DECIMATION, SAMPLE_RATE, SEGMENT_LEN};

pub const DATASET_MAGIC: [u8; 4] = *b"INVC";
pub const DATASET_VERSION: u32 = 1;

pub fn save_dataset(d: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_dataset(d, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let mut r = BufReader::new(File::open(path)?);
    read_dataset(&mut r)
}

pub fn write_dataset(d: &Dataset, w: &mut impl Write) -> Result<()> {
    let name = d.preset.as_bytes();
    let name_len = u16::try_from(name.len())
        .map_err(|_| Error::InvalidArgument("preset name longer than 65535 bytes".into()))?;
    w.write_all(&DATASET_MAGIC)?;
    for v in [
        DATASET_VERSION,
        SAMPLE_RATE as u32,
        DECIMATION as u32,
        SEGMENT_LEN as u32,
        d.len() as u32,
    ] {
        w.write_all(&v.to_le_bytes())?;
    }
    w.write_all(&d.seed.to_le_bytes())?;
    w.write_all(&name_len.to_le_bytes())?;
    w.write_all(name)?;
    for c in d.counts() {
        w.write_all(&(c as u32).to_le_bytes())?;
    }
    for seg in d.segments() {
        for v in seg.audio.iter().chain(&seg.gesture) {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

struct Source<'a, R> {
    inner: &'a mut R,
}

impl<R: Read> Source<'_, R> {
    fn bytes<const N: usize>(&mut self, what: &'static str) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.inner.read_exact(&mut buf).map_err(|e| match e.kind() {
            std::io::ErrorKind::UnexpectedEof => Error::TruncatedFile(what),
            _ => Error::Io(e),
        })?;
        Ok(buf)
    }

    fn u32(&mut self, what: &'static str) -> Result<u32> {
        self.bytes::<4>(what).map(u32::from_le_bytes)
    }

    fn f32s(&mut self, n: usize, what: &'static str) -> Result<Vec<f32>> {
        let mut raw = vec![0u8; n * 4];
        self.inner.read_exact(&mut raw).map_err(|e| match e.kind() {
            std::io::ErrorKind::UnexpectedEof => Error::TruncatedFile(what),
            _ => Error::Io(e),
        })?;
        Ok(raw
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect())
    }
}

pub fn read_dataset(r: &mut impl Read) -> Result<Dataset> {
    let mut src = Source { inner: r };
    let magic = src.bytes::<4>("magic")?;
    if magic != DATASET_MAGIC {
        return Err(Error::BadMagic {
            expected: DATASET_MAGIC,
            found: magic,
        });
    }
    let version = src.u32("version")?;
    if version != DATASET_VERSION {
        return Err(Error::BadVersion(version));
    }
    let numerator = src.u32("rate numerator")?;
    let denominator = src.u32("rate denominator")?;
    let segment_len = src.u32("segment length")?;
    if numerator != SAMPLE_RATE as u32
        || denominator != DECIMATION as u32
        || segment_len != SEGMENT_LEN as u32
    {
        return Err(Error::Malformed(format!(
            "unsupported layout {numerator}/{denominator} Hz with {segment_len}-sample segments"
        )));
    }
    let count = src.u32("segment count")? as usize;
    let seed = u64::from_le_bytes(src.bytes::<8>("shuffle seed")?);
    let name_len = u16::from_le_bytes(src.bytes::<2>("preset name length")?) as usize;
    let mut name = vec![0u8; name_len];
    src.inner.read_exact(&mut name).map_err(|_| Error::TruncatedFile("preset name"))?;
    let preset = String::from_utf8(name)
        .map_err(|_| Error::Malformed("preset name is not UTF-8".into()))?;
    let mut counts = [0usize; 3];
    for c in &mut counts {
        *c = src.u32("split counts")? as usize;
    }
    if counts.iter().sum::<usize>() != count {
        return Err(Error::Malformed(format!(
            "split counts {counts:?} do not add up to {count}"
        )));
    }
    let mut segments = Vec::with_capacity(count);
    for _ in 0..count {
        let audio = src.f32s(SEGMENT_LEN, "segment audio")?;
        let gesture = src.f32s(SEGMENT_LEN, "segment gesture")?;
        segments.push(SegmentPair { audio, gesture });
    }
    Dataset::from_parts(preset, seed, segments, counts)
}
