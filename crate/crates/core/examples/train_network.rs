//! Train the gesture-recovery LSTM on a freshly rendered corpus.
//!
//! ```text
//! cargo run --release --example train_network -- [epochs] [seconds]
//! ```

use inverse_control::cli::build_dataset;
use inverse_control::gestures::{random_gesture, GestureSpec};
use inverse_control::nn::{save_checkpoint, train_with, TrainConfig};
use inverse_control::physics::ModelPreset;

fn main() -> inverse_control::Result<()> {
    let mut args = std::env::args().skip(1);
    let epochs: usize = args.next().map_or(8, |s| s.parse().expect("epochs"));
    let seconds: f64 = args.next().map_or(30.0, |s| s.parse().expect("seconds"));

    let gesture = random_gesture(&GestureSpec::new(seconds, 1));
    let dataset = build_dataset(ModelPreset::PluckAResonator, gesture.samples(), 1)?;
    let config = TrainConfig { epochs, batch_size: 8, units: 32, seed: 1, ..Default::default() };
    println!("{:?} segments, {} epochs", dataset.counts(), config.epochs);

    let outcome = train_with(&dataset, &config, |e| {
        println!("epoch {:>3}  train {:.5}  val {:.5}  ({:.1} s)", e.epoch, e.train_mse, e.val_mse, e.seconds)
    })?;
    println!("best validation epoch {}", outcome.best_epoch);
    save_checkpoint("network.invw", &outcome.stack, &outcome.adam)?;
    println!("saved network.invw");
    Ok(())
}
