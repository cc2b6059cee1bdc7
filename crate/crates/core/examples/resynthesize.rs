//! Predict gestures for held-out audio, score them and play them back.
//!
//! ```text
//! cargo run --release --example resynthesize -- [epochs] [out_dir]
//! ```

use inverse_control::cli::build_dataset;
use inverse_control::dataset::Split;
use inverse_control::eval::{evaluate, pearson, resynthesize, rms_envelope, write_comparison_wavs};
use inverse_control::gestures::{random_gesture, GestureSpec};
use inverse_control::nn::{train, TrainConfig};
use inverse_control::physics::ModelPreset;

fn main() -> inverse_control::Result<()> {
    let mut args = std::env::args().skip(1);
    let epochs: usize = args.next().map_or(6, |s| s.parse().expect("epochs"));
    let out = args.next().unwrap_or_else(|| "resynth".into());

    let preset = ModelPreset::PluckAResonator;
    let gesture = random_gesture(&GestureSpec::new(30.0, 2));
    let dataset = build_dataset(preset, gesture.samples(), 2)?;
    let config = TrainConfig { epochs, batch_size: 8, units: 32, seed: 2, ..Default::default() };
    let stack = train(&dataset, &config)?.stack;

    let report = evaluate(&stack, &dataset, Split::Test)?;
    println!("test NAE {:.3}, MSE {:.2e} (predict-the-mean {:.2e})", report.mean_nae, report.mse, report.baseline_mse);

    let r = resynthesize(&stack, &dataset, Split::Test, 0, preset)?;
    let corr = pearson(&rms_envelope(&r.audio, 1024), &rms_envelope(&r.target_audio, 1024));
    match corr {
        Some(c) => println!("segment 0 loudness envelope correlation {c:.3}"),
        None => println!("segment 0 is silent in one of the renders"),
    }
    write_comparison_wavs(&r, &out)?;
    println!("wrote comparison files to {out}/");
    Ok(())
}
