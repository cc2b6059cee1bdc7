//! Turn a random gesture into a training corpus and save it.
//!
//! ```text
//! cargo run --release --example build_corpus -- [preset] [seconds] [out.invc]
//! ```

use inverse_control::cli::build_dataset;
use inverse_control::dataset::{load_dataset, save_dataset, Split};
use inverse_control::gestures::{random_gesture, GestureSpec};
use inverse_control::physics::ModelPreset;

fn main() -> inverse_control::Result<()> {
    let mut args = std::env::args().skip(1);
    let preset: ModelPreset = args.next().map_or(Ok(ModelPreset::PluckAResonator), |s| s.parse())?;
    let seconds: f64 = args.next().map_or(30.0, |s| s.parse().expect("seconds"));
    let out = args.next().unwrap_or_else(|| "corpus.invc".into());

    let gesture = random_gesture(&GestureSpec::new(seconds, 0));
    let dataset = build_dataset(preset, gesture.samples(), 0)?;
    let [train, val, test] = dataset.counts();
    println!("{}: {} segments (train {train}, val {val}, test {test})", preset.name(), dataset.len());

    let first = &dataset.split(Split::Train)[0];
    let loud = first.audio.iter().fold(0.0f32, |m, a| m.max(a.abs()));
    println!("first training segment: audio peak {loud:.3}, gesture starts at {:+.4} m", first.gesture[0]);

    save_dataset(&dataset, &out)?;
    assert!(load_dataset(&out)? == dataset);
    println!("saved {out} ({} bytes)", std::fs::metadata(&out)?.len());
    Ok(())
}
