//! WAV reading and writing.
//!
//! Everything on disk is 44100 Hz. Reads accept 16-bit PCM or 32-bit float;
//! writes are always 16-bit PCM with hard clipping at full scale.

use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{Error, Result};
use crate::SAMPLE_RATE;

/// PCM code for +1.0, used in both directions so full scale round-trips exactly.
const PCM_FULL_SCALE: f64 = 32767.0;

/// Reads a mono 44100 Hz file as samples in `[-1, 1]`.
pub fn read_mono(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let mut reader = WavReader::open(path)
        .map_err(|e| Error::BadWav(format!("{}: unreadable ({e})", path.display())))?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(Error::BadWav(format!(
            "{}: expected 1 channel, found {}",
            path.display(),
            spec.channels
        )));
    }
    if spec.sample_rate != SAMPLE_RATE as u32 {
        return Err(Error::BadWav(format!(
            "{}: expected {} Hz, found {} Hz",
            path.display(),
            SAMPLE_RATE as u32,
            spec.sample_rate
        )));
    }
    let bad = |e: hound::Error| Error::BadWav(format!("{}: unreadable ({e})", path.display()));
    match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .map(|s| s.map(|v| (v as f64 / PCM_FULL_SCALE).max(-1.0)).map_err(bad))
            .collect(),
        (SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .map(|s| s.map(f64::from).map_err(bad))
            .collect(),
        (fmt, bits) => Err(Error::BadWav(format!(
            "{}: unsupported sample format {fmt:?} at {bits} bits",
            path.display()
        ))),
    }
}

fn to_pcm16(x: f64) -> i16 {
    let clipped = if x.is_nan() { 0.0 } else { x.clamp(-1.0, 1.0) };
    (clipped * PCM_FULL_SCALE).round() as i16
}

fn pcm16_spec(channels: u16) -> WavSpec {
    WavSpec {
        channels,
        sample_rate: SAMPLE_RATE as u32,
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    }
}

fn wav_err(e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::Io(io),
        other => Error::BadWav(other.to_string()),
    }
}

/// Writes a mono 16-bit PCM file.
pub fn write_mono(path: impl AsRef<Path>, samples: &[f64]) -> Result<()> {
    let mut writer = WavWriter::create(path, pcm16_spec(1)).map_err(wav_err)?;
    for &s in samples {
        writer.write_sample(to_pcm16(s)).map_err(wav_err)?;
    }
    writer.finalize().map_err(wav_err)
}

/// Writes a stereo 16-bit PCM file; both channels must have equal length.
pub fn write_stereo(path: impl AsRef<Path>, left: &[f64], right: &[f64]) -> Result<()> {
    if left.len() != right.len() {
        return Err(Error::ShapeMismatch(format!(
            "stereo channels differ in length: {} vs {}",
            left.len(),
            right.len()
        )));
    }
    let mut writer = WavWriter::create(path, pcm16_spec(2)).map_err(wav_err)?;
    for (&l, &r) in left.iter().zip(right) {
        writer.write_sample(to_pcm16(l)).map_err(wav_err)?;
        writer.write_sample(to_pcm16(r)).map_err(wav_err)?;
    }
    writer.finalize().map_err(wav_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pcm16_clips() {
        assert_eq!(to_pcm16(2.0), 32767);
        assert_eq!(to_pcm16(-2.0), -32767);
        assert_eq!(to_pcm16(0.0), 0);
        assert_eq!(to_pcm16(f64::NAN), 0);
    }

    #[test]
    fn mono_round_trip_within_quantization() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.wav");
        let x: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.01).sin() * 0.7).collect();
        write_mono(&path, &x).unwrap();
        let y = read_mono(&path).unwrap();
        assert_eq!(y.len(), x.len());
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1.0 / 16384.0);
        }
    }

    #[test]
    fn rejects_stereo_and_wrong_rate() {
        let dir = tempfile::tempdir().unwrap();
        let stereo = dir.path().join("s.wav");
        write_stereo(&stereo, &[0.0; 10], &[0.0; 10]).unwrap();
        let err = read_mono(&stereo).unwrap_err();
        assert!(matches!(&err, Error::BadWav(m) if m.contains("channel")), "{err}");

        let slow = dir.path().join("r.wav");
        let spec = WavSpec { sample_rate: 22050, ..pcm16_spec(1) };
        let mut w = WavWriter::create(&slow, spec).unwrap();
        w.write_sample(0i16).unwrap();
        w.finalize().unwrap();
        let err = read_mono(&slow).unwrap_err();
        assert!(matches!(&err, Error::BadWav(m) if m.contains("22050")), "{err}");
    }

    #[test]
    fn missing_file_is_bad_wav() {
        assert!(matches!(read_mono("/nonexistent/none.wav"), Err(Error::BadWav(_))));
    }
}
