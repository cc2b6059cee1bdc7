//! Strike a single modal resonator and watch it ring down.
//!
//! A mode with a 1 s T60 should lose 60 dB after one second.

use inverse_control::physics::modal::{pole_radius, ModalResonator, Mode};
use inverse_control::SAMPLE_RATE;

fn main() {
    let (frequency, t60) = (440.0, 1.0);
    let mut resonator = ModalResonator::new(vec![Mode::new(frequency, t60, 1.0, SAMPLE_RATE)], 1e-3);
    println!("pole radius {:.8}", pole_radius(t60, SAMPLE_RATE));

    let dt = 1.0 / SAMPLE_RATE;
    let total = (2.0 * SAMPLE_RATE) as usize;
    let mut trace = Vec::with_capacity(total);
    for n in 0..total {
        resonator.advance(if n == 0 { 1.0 } else { 0.0 }, dt);
        trace.push(resonator.contact_position());
    }

    let frame = (0.1 * SAMPLE_RATE) as usize;
    let reference = trace[..frame].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (k, chunk) in trace.chunks(frame).enumerate().step_by(2) {
        let peak = chunk.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!("t = {:.1} s  {:>7.1} dB", k as f64 * 0.1, 20.0 * (peak / reference).log10());
    }
}
