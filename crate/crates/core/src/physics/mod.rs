//! Sample-by-sample mass-interaction simulation of the four synthesizers.

mod graph;
pub mod links;
pub mod modal;
mod presets;

pub use graph::{Element, ModelGraph, PointMass};
pub use links::{Endpoint, FrictionLink, Link, LinkKind, PluckLink, SpringDamper, TouchLink};
pub use modal::{ModalResonator, Mode};
pub use presets::{build_preset, ModelPreset};

use crate::error::Result;

/// Renders `gesture` through a freshly built preset.
pub fn render_preset(preset: ModelPreset, gesture: &[f64]) -> Result<Vec<f64>> {
    build_preset(preset).render(gesture)
}
