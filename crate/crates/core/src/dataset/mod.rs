//! Decimated, segmented and split training data.

mod io;
pub mod resample;

pub use io::{load_dataset, save_dataset, DATASET_MAGIC, DATASET_VERSION};
pub use resample::{decimate, upsample};

use crate::error::{Error, Result};
use crate::physics::ModelPreset;
use crate::rng::SplitMix64;
use crate::{DECIMATION, SEGMENT_LEN};

/// Default number of segments per training batch.
pub const BATCH_SIZE: usize = 98;

/// One aligned window of audio (dimensionless) and gesture (metres) at the
/// decimated rate.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentPair {
    pub audio: Vec<f32>,
    pub gesture: Vec<f32>,
}

impl SegmentPair {
    pub fn new(audio: Vec<f32>, gesture: Vec<f32>) -> Result<Self> {
        if audio.len() != SEGMENT_LEN || gesture.len() != SEGMENT_LEN {
            return Err(Error::ShapeMismatch(format!(
                "segments are {SEGMENT_LEN} samples, got audio {} and gesture {}",
                audio.len(),
                gesture.len()
            )));
        }
        Ok(Self { audio, gesture })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

/// Segments stored in split order: all training segments, then validation,
/// then test.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub preset: String,
    pub seed: u64,
    segments: Vec<SegmentPair>,
    counts: [usize; 3],
}

impl Dataset {
    pub fn from_parts(
        preset: String,
        seed: u64,
        segments: Vec<SegmentPair>,
        counts: [usize; 3],
    ) -> Result<Self> {
        if counts.iter().sum::<usize>() != segments.len() {
            return Err(Error::ShapeMismatch(format!(
                "split counts {counts:?} do not cover {} segments",
                segments.len()
            )));
        }
        Ok(Self {
            preset,
            seed,
            segments,
            counts,
        })
    }

    pub fn segments(&self) -> &[SegmentPair] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn counts(&self) -> [usize; 3] {
        self.counts
    }

    pub fn decimation(&self) -> usize {
        DECIMATION
    }

    pub fn preset(&self) -> Option<ModelPreset> {
        self.preset.parse().ok()
    }

    fn range(&self, split: Split) -> std::ops::Range<usize> {
        let [train, val, test] = self.counts;
        match split {
            Split::Train => 0..train,
            Split::Val => train..train + val,
            Split::Test => train + val..train + val + test,
        }
    }

    pub fn split(&self, split: Split) -> &[SegmentPair] {
        &self.segments[self.range(split)]
    }

    /// One epoch over `split` in batches of at most `batch_size`, order
    /// shuffled from `epoch_seed`. The last batch may be short.
    pub fn batches(
        &self,
        split: Split,
        batch_size: usize,
        epoch_seed: u64,
    ) -> impl Iterator<Item = Vec<&SegmentPair>> + '_ {
        assert!(batch_size > 0, "batch size must be positive");
        let segments = self.split(split);
        let mut order: Vec<usize> = (0..segments.len()).collect();
        SplitMix64::new(epoch_seed).shuffle(&mut order);
        let batches: Vec<Vec<usize>> = order.chunks(batch_size).map(<[usize]>::to_vec).collect();
        batches
            .into_iter()
            .map(move |idx| idx.into_iter().map(|i| &segments[i]).collect())
    }
}

/// Size of the validation and test splits for `n` segments: 10% each,
/// rounded half away from zero.
pub fn holdout_size(n: usize) -> usize {
    (n as f64 * 0.1).round() as usize
}

/// Cuts aligned decimated signals into consecutive non-overlapping
/// 1024-sample windows (the remainder is dropped), shuffles them with `seed`
/// and splits 80/10/10.
pub fn segment_and_split(
    audio: &[f64],
    gesture: &[f64],
    preset: &str,
    seed: u64,
) -> Result<Dataset> {
    if audio.len() != gesture.len() {
        return Err(Error::ShapeMismatch(format!(
            "audio has {} samples, gesture {}",
            audio.len(),
            gesture.len()
        )));
    }
    let n = audio.len() / SEGMENT_LEN;
    let holdout = holdout_size(n);
    if holdout == 0 || n <= 2 * holdout {
        // smallest corpus with every split nonempty: 5 segments
        return Err(Error::TooShort {
            needed: 5 * SEGMENT_LEN,
            got: audio.len(),
        });
    }
    let to_f32 = |x: &[f64]| x.iter().map(|&v| v as f32).collect::<Vec<f32>>();
    let mut segments: Vec<SegmentPair> = audio
        .chunks_exact(SEGMENT_LEN)
        .zip(gesture.chunks_exact(SEGMENT_LEN))
        .map(|(a, g)| SegmentPair {
            audio: to_f32(a),
            gesture: to_f32(g),
        })
        .collect();
    SplitMix64::new(seed).shuffle(&mut segments);
    Dataset::from_parts(preset.to_owned(), seed, segments, [n - 2 * holdout, holdout, holdout])
}
