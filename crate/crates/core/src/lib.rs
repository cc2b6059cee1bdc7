//! Physics-based sound synthesizers driven by gesture signals, and an LSTM
//! trained to recover the gesture that produced a given sound.
//!
//! The pipeline runs in five stages:
//!
//! 1. [`gestures`] produces position signals in metres at 44100 Hz.
//! 2. [`physics`] renders them through one of four synthesizers.
//! 3. [`dataset`] decimates audio and gesture by 16, cuts 1024-sample
//!    segments and splits them 80/10/10.
//! 4. [`nn`] trains a stacked LSTM to map audio segments to gesture segments.
//! 5. [`eval`] scores predictions with the normalized absolute error and
//!    renders predicted gestures back into sound.

pub mod cli;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod gestures;
pub mod nn;
pub mod physics;
pub mod rng;
pub mod wav;

pub use error::{Error, Result};

/// Audio and gesture rate of the synthesizers, in Hz.
pub const SAMPLE_RATE: f64 = 44_100.0;

/// Gestures live in `[-GESTURE_LIMIT, GESTURE_LIMIT]` metres.
pub const GESTURE_LIMIT: f64 = 0.05;

/// Decimation factor between the synthesis rate and the network rate.
pub const DECIMATION: usize = 16;

/// Network-side sample rate, `44100 / 16` Hz.
pub const DECIMATED_RATE: f64 = SAMPLE_RATE / DECIMATION as f64;

/// Length of one training segment, in decimated samples.
pub const SEGMENT_LEN: usize = 1024;
