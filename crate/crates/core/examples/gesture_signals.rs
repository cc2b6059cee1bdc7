//! Generate a smooth random gesture, save it as a WAV and read it back.
//!
//! ```text
//! cargo run --release --example gesture_signals -- [seconds] [seed]
//! ```

use inverse_control::gestures::{export_gesture, import_gesture, random_gesture, GestureSpec};
use inverse_control::GESTURE_LIMIT;

fn main() -> inverse_control::Result<()> {
    let mut args = std::env::args().skip(1);
    let seconds: f64 = args.next().map_or(10.0, |s| s.parse().expect("seconds"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));

    let spec = GestureSpec::new(seconds, seed);
    let gesture = random_gesture(&spec);
    let x = gesture.samples();
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let crossings = x.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    println!("{} samples ({:.1} s) at {} Hz", gesture.len(), gesture.duration(), gesture.sample_rate());
    println!("mean {mean:+.4} m, peak {peak:.4} m (limit {GESTURE_LIMIT} m), {crossings} zero crossings");

    // WAV full scale is the gesture limit, so the round trip costs one PCM step at most
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("gesture.wav");
    export_gesture(&path, &gesture)?;
    let back = import_gesture(&path)?;
    let err = x.iter().zip(back.samples()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!("WAV round trip error {err:.2e} m");
    Ok(())
}

