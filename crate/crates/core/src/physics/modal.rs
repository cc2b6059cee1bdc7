//! Modal resonators: banks of two-pole filters driven by force.

use std::f64::consts::PI;

/// One exponentially decaying sinusoidal mode.
///
/// The pole radius is chosen so the impulse response falls by 60 dB after
/// `t60` seconds: `r = exp(-ln(1000) / (t60 * fs))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mode {
    pub frequency: f64,
    pub t60: f64,
    pub gain: f64,
    a1: f64,
    a2: f64,
    current: f64,
    previous: f64,
}

impl Mode {
    pub fn new(frequency: f64, t60: f64, gain: f64, sample_rate: f64) -> Self {
        assert!(
            frequency > 0.0 && frequency < sample_rate / 2.0,
            "mode frequency {frequency} Hz outside (0, {}) Hz",
            sample_rate / 2.0
        );
        assert!(t60 > 0.0, "mode t60 must be positive, got {t60}");
        let r = pole_radius(t60, sample_rate);
        let theta = 2.0 * PI * frequency / sample_rate;
        Self {
            frequency,
            t60,
            gain,
            a1: 2.0 * r * theta.cos(),
            a2: r * r,
            current: 0.0,
            previous: 0.0,
        }
    }

    /// Displacement of this mode at the current sample.
    pub fn state(&self) -> f64 {
        self.current
    }

    fn advance(&mut self, drive: f64) {
        let next = self.a1 * self.current - self.a2 * self.previous + drive;
        self.previous = self.current;
        self.current = next;
    }

    fn reset(&mut self) {
        self.current = 0.0;
        self.previous = 0.0;
    }
}

pub fn pole_radius(t60: f64, sample_rate: f64) -> f64 {
    (-(1000f64.ln()) / (t60 * sample_rate)).exp()
}

/// A vibrating object reduced to its modes.
///
/// Each mode behaves as a mass-spring-damper of mass `modal_mass` whose
/// coupling to the contact point is weighted by the mode gain, both for the
/// force going in and for the displacement read back out.
#[derive(Clone, Debug, PartialEq)]
pub struct ModalResonator {
    modes: Vec<Mode>,
    modal_mass: f64,
    contact_position: f64,
    previous_contact: f64,
}

impl ModalResonator {
    pub fn new(modes: Vec<Mode>, modal_mass: f64) -> Self {
        assert!(!modes.is_empty(), "a resonator needs at least one mode");
        assert!(modal_mass > 0.0, "modal mass must be positive");
        Self {
            modes,
            modal_mass,
            contact_position: 0.0,
            previous_contact: 0.0,
        }
    }

    /// Builds `count` harmonic modes of `fundamental` with the given decay
    /// times and gains (cycled if shorter than `count`).
    pub fn harmonic(
        fundamental: f64,
        count: usize,
        t60s: &[f64],
        gains: &[f64],
        modal_mass: f64,
        sample_rate: f64,
    ) -> Self {
        let modes = (0..count)
            .map(|k| {
                Mode::new(
                    fundamental * (k + 1) as f64,
                    t60s[k % t60s.len()],
                    gains[k % gains.len()],
                    sample_rate,
                )
            })
            .collect();
        Self::new(modes, modal_mass)
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn modal_mass(&self) -> f64 {
        self.modal_mass
    }

    /// Gain-weighted sum of mode displacements.
    pub fn contact_position(&self) -> f64 {
        self.contact_position
    }

    pub fn previous_contact_position(&self) -> f64 {
        self.previous_contact
    }

    /// Advances every mode one sample under `force` (newtons).
    pub fn advance(&mut self, force: f64, sample_period: f64) {
        let scale = sample_period * sample_period / self.modal_mass * force;
        let mut position = 0.0;
        for mode in &mut self.modes {
            mode.advance(mode.gain * scale);
            position += mode.gain * mode.current;
        }
        self.previous_contact = self.contact_position;
        self.contact_position = position;
    }

    pub fn reset(&mut self) {
        self.modes.iter_mut().for_each(Mode::reset);
        self.contact_position = 0.0;
        self.previous_contact = 0.0;
    }
}
