//! Render one random gesture through every synthesizer and write the audio.
//!
//! ```text
//! cargo run --release --example render_presets -- [out_dir] [seconds] [seed]
//! ```

use std::path::PathBuf;

use inverse_control::gestures::{random_gesture, GestureSpec};
use inverse_control::physics::{build_preset, ModelPreset};
use inverse_control::wav;

fn main() -> inverse_control::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "rendered".into()));
    let seconds: f64 = args.next().map_or(5.0, |s| s.parse().expect("seconds"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));
    std::fs::create_dir_all(&out)?;

    let gesture = random_gesture(&GestureSpec::new(seconds, seed));
    wav::write_mono(out.join("gesture.wav"), &gesture.samples().iter().map(|g| g / 0.05).collect::<Vec<_>>())?;

    for preset in ModelPreset::ALL {
        let mut graph = build_preset(preset);
        let audio = graph.render(gesture.samples())?;
        let peak = audio.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        let rms = (audio.iter().map(|a| a * a).sum::<f64>() / audio.len() as f64).sqrt();
        let path = out.join(format!("{}.wav", preset.name()));
        wav::write_mono(&path, &audio)?;
        println!("{:<22} peak {peak:.3}  rms {rms:.4}  -> {}", preset.name(), path.display());
    }
    Ok(())
}
