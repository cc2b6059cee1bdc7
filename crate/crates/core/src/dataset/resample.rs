//! Rate conversion by 16 between the synthesis rate and the network rate.
//!
//! Both directions share one linear-phase windowed-sinc lowpass: 255 taps,
//! Blackman window, cutoff at 0.45 of the decimated rate (about 1240 Hz),
//! normalized to unity DC gain. Its 127-sample group delay is removed so
//! outputs stay sample-aligned with inputs, and signal edges are extended by
//! point reflection about the first and last samples.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::{DECIMATED_RATE, DECIMATION, SAMPLE_RATE};

pub const FILTER_TAPS: usize = 255;
pub const FILTER_DELAY: usize = (FILTER_TAPS - 1) / 2;
pub const CUTOFF_HZ: f64 = 0.45 * DECIMATED_RATE;

/// Windowed-sinc lowpass with `taps` taps (odd) and `cutoff` as a fraction of
/// the sample rate.
pub fn blackman_sinc(taps: usize, cutoff: f64) -> Vec<f64> {
    assert!(taps % 2 == 1, "linear-phase design needs an odd tap count");
    let centre = (taps - 1) as f64 / 2.0;
    let last = (taps - 1) as f64;
    let mut h: Vec<f64> = (0..taps)
        .map(|n| {
            let t = n as f64 - centre;
            let sinc = if t == 0.0 {
                2.0 * cutoff
            } else {
                (2.0 * PI * cutoff * t).sin() / (PI * t)
            };
            let phase = 2.0 * PI * n as f64 / last;
            let window = 0.42 - 0.5 * phase.cos() + 0.08 * (2.0 * phase).cos();
            sinc * window
        })
        .collect();
    // mirror so the response is exactly linear phase
    for n in 0..taps / 2 {
        h[taps - 1 - n] = h[n];
    }
    let sum: f64 = h.iter().sum();
    h.iter_mut().for_each(|v| *v /= sum);
    h
}

/// The shared anti-aliasing / anti-imaging filter.
pub fn filter() -> &'static [f64] {
    static TAPS: OnceLock<Vec<f64>> = OnceLock::new();
    TAPS.get_or_init(|| blackman_sinc(FILTER_TAPS, CUTOFF_HZ / SAMPLE_RATE))
}

/// Sample `i` of `signal` continued past both ends by point reflection
/// (`x[-k] = 2 x[0] - x[k]`), which keeps value and slope continuous at the
/// edges so smooth signals stay smooth.
fn extended(signal: &[f64], i: isize) -> f64 {
    let last = signal.len() as isize - 1;
    let mirror = |j: isize| signal[j.clamp(0, last) as usize];
    if i < 0 {
        2.0 * signal[0] - mirror(-i)
    } else if i > last {
        2.0 * signal[last as usize] - mirror(2 * last - i)
    } else {
        signal[i as usize]
    }
}

/// Lowpass then keep every 16th sample. Output has `floor(len / 16)` samples.
pub fn decimate(signal: &[f64], factor: usize) -> Result<Vec<f64>> {
    if factor != DECIMATION {
        return Err(Error::InvalidArgument(format!(
            "only decimation by {DECIMATION} is supported, got {factor}"
        )));
    }
    if signal.len() < FILTER_TAPS {
        return Err(Error::TooShort {
            needed: FILTER_TAPS,
            got: signal.len(),
        });
    }
    let h = filter();
    let at = |i: isize| extended(signal, i);
    let out = (0..signal.len() / factor)
        .map(|k| {
            let centre = (k * factor + FILTER_DELAY) as isize;
            h.iter()
                .enumerate()
                .map(|(j, &c)| c * at(centre - j as isize))
                .sum()
        })
        .collect();
    Ok(out)
}

/// Zero-stuff by 16, lowpass with gain 16. Output has `16 * len` samples.
pub fn upsample(signal: &[f64], factor: usize) -> Result<Vec<f64>> {
    if factor != DECIMATION {
        return Err(Error::InvalidArgument(format!(
            "only upsampling by {DECIMATION} is supported, got {factor}"
        )));
    }
    if signal.is_empty() {
        return Err(Error::EmptyInput);
    }
    let h = filter();
    let f = factor as isize;
    let gain = factor as f64;
    let out = (0..signal.len() * factor)
        .map(|n| {
            // taps j where n + delay - j lands on a stuffed (nonzero) sample
            let top = n as isize + FILTER_DELAY as isize;
            let first = top.rem_euclid(f) as usize;
            (first..FILTER_TAPS)
                .step_by(factor)
                .map(|j| {
                    let q = (top - j as isize).div_euclid(f);
                    h[j] * extended(signal, q)
                })
                .sum::<f64>()
                * gain
        })
        .collect();
    Ok(out)
}
