//! The four synthesizers, with every physical constant fixed here.
//!
//! | preset                  | elements                                         | excitation                          |
//! |-------------------------|--------------------------------------------------|-------------------------------------|
//! | `PluckAResonator`       | 1 resonator, modes 440/880/1320 Hz               | plectrum at 0 m                      |
//! | `TouchSeveralModalResn` | 3 resonators on 330/440/550 Hz, 3 harmonics each | contacts at -0.02, 0, +0.02 m        |
//! | `ScratchMassLinkChain`  | 8 masses of 5 g between two grounded springs     | friction on the third mass           |
//! | `PluckHarp10`           | 10 resonators, A minor pentatonic from 220 Hz    | plectra spread over -0.045..0.045 m  |

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::physics::graph::{Element, ModelGraph, PointMass};
use crate::physics::links::{
    Endpoint, FrictionLink, Link, LinkKind, PluckLink, SpringDamper, TouchLink,
};
use crate::physics::modal::{ModalResonator, Mode};
use crate::SAMPLE_RATE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelPreset {
    PluckAResonator,
    TouchSeveralModalResn,
    ScratchMassLinkChain,
    PluckHarp10,
}

impl ModelPreset {
    pub const ALL: [ModelPreset; 4] = [
        ModelPreset::PluckAResonator,
        ModelPreset::TouchSeveralModalResn,
        ModelPreset::ScratchMassLinkChain,
        ModelPreset::PluckHarp10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelPreset::PluckAResonator => "PluckAResonator",
            ModelPreset::TouchSeveralModalResn => "TouchSeveralModalResn",
            ModelPreset::ScratchMassLinkChain => "ScratchMassLinkChain",
            ModelPreset::PluckHarp10 => "PluckHarp10",
        }
    }

    pub fn build(self) -> ModelGraph {
        build_preset(self)
    }
}

impl fmt::Display for ModelPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelPreset {
    type Err = Error;

    /// Exact, case-sensitive match on the preset name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_owned()))
    }
}

const MODAL_MASS: f64 = 1e-3;

const PLUCK_STIFFNESS: f64 = 2000.0;
const PLUCK_THRESHOLD: f64 = 0.005;

// An engaged plectrum drags its string along, so it lets go only once the
// gesture is `d (1 + k / K)` past the string, K being the string's modal
// stiffness. The harp's outer strings sit 5 mm inside the gesture range,
// which leaves room for that only with a softer, shorter plectrum
// (about 3.3 mm on the 220 Hz string).
const HARP_PLUCK_STIFFNESS: f64 = 1000.0;
const HARP_PLUCK_THRESHOLD: f64 = 0.002;

const TOUCH_STIFFNESS: f64 = 1000.0;
const TOUCH_DAMPING: f64 = 0.1;

const CHAIN_MASSES: usize = 8;
const CHAIN_MASS: f64 = 0.005;
const CHAIN_STIFFNESS: f64 = 5000.0;
const CHAIN_DAMPING: f64 = 0.05;
const FRICTION_MASS_INDEX: usize = 2;
const CHAIN_LISTEN_INDEX: usize = 5;

// A minor pentatonic, equal temperament, two octaves up from A3.
const HARP_FUNDAMENTALS: [f64; 10] = [
    220.0, 261.626, 293.665, 329.628, 391.995, 440.0, 523.251, 587.330, 659.255, 783.991,
];

/// Output scaling so a full-range sweep peaks within `[0.1, 0.9]`.
const PLUCK_A_GAIN: f64 = 300.0;
const TOUCH_GAIN: f64 = 20.0;
const CHAIN_GAIN: f64 = 600.0;
const HARP_GAIN: f64 = 200.0;

pub fn build_preset(preset: ModelPreset) -> ModelGraph {
    let graph = match preset {
        ModelPreset::PluckAResonator => {
            let modes = vec![
                Mode::new(440.0, 1.0, 1.0, SAMPLE_RATE),
                Mode::new(880.0, 0.7, 0.5, SAMPLE_RATE),
                Mode::new(1320.0, 0.4, 0.25, SAMPLE_RATE),
            ];
            let resonator = Element::Resonator(ModalResonator::new(modes, MODAL_MASS));
            let pluck = Link::new(
                Endpoint::Gesture,
                Endpoint::Element(0),
                LinkKind::Pluck(PluckLink::new(PLUCK_STIFFNESS, PLUCK_THRESHOLD, 0.0)),
            );
            ModelGraph::new(vec![resonator], vec![pluck], vec![0], PLUCK_A_GAIN)
        }
        ModelPreset::TouchSeveralModalResn => {
            let fundamentals = [330.0, 440.0, 550.0];
            let offsets = [-0.02, 0.0, 0.02];
            let elements = fundamentals
                .iter()
                .map(|&f| {
                    Element::Resonator(ModalResonator::harmonic(
                        f,
                        3,
                        &[1.0, 0.7, 0.4],
                        &[1.0, 0.5, 0.25],
                        MODAL_MASS,
                        SAMPLE_RATE,
                    ))
                })
                .collect();
            let links = offsets
                .iter()
                .enumerate()
                .map(|(i, &offset)| {
                    Link::new(
                        Endpoint::Gesture,
                        Endpoint::Element(i),
                        LinkKind::Touch(TouchLink::new(TOUCH_STIFFNESS, TOUCH_DAMPING, offset)),
                    )
                })
                .collect();
            ModelGraph::new(elements, links, vec![0, 1, 2], TOUCH_GAIN)
        }
        ModelPreset::ScratchMassLinkChain => {
            let elements = (0..CHAIN_MASSES)
                .map(|_| Element::Mass(PointMass::new(CHAIN_MASS)))
                .collect();
            let spring = || {
                LinkKind::Spring(SpringDamper {
                    stiffness: CHAIN_STIFFNESS,
                    damping: CHAIN_DAMPING,
                })
            };
            let mut links = Vec::with_capacity(CHAIN_MASSES + 2);
            links.push(Link::new(Endpoint::Ground, Endpoint::Element(0), spring()));
            for i in 1..CHAIN_MASSES {
                links.push(Link::new(Endpoint::Element(i - 1), Endpoint::Element(i), spring()));
            }
            links.push(Link::new(
                Endpoint::Ground,
                Endpoint::Element(CHAIN_MASSES - 1),
                spring(),
            ));
            links.push(Link::new(
                Endpoint::Gesture,
                Endpoint::Element(FRICTION_MASS_INDEX),
                LinkKind::Friction(FrictionLink::new(0.5, 0.05)),
            ));
            ModelGraph::new(elements, links, vec![CHAIN_LISTEN_INDEX], CHAIN_GAIN)
        }
        ModelPreset::PluckHarp10 => {
            let n = HARP_FUNDAMENTALS.len();
            let elements = HARP_FUNDAMENTALS
                .iter()
                .map(|&f| {
                    Element::Resonator(ModalResonator::harmonic(
                        f,
                        5,
                        &[1.2, 0.9, 0.7, 0.5, 0.4],
                        &[1.0, 0.5, 0.33, 0.25, 0.2],
                        MODAL_MASS,
                        SAMPLE_RATE,
                    ))
                })
                .collect();
            let links = (0..n)
                .map(|i| {
                    let offset = -0.045 + 0.09 * i as f64 / (n - 1) as f64;
                    Link::new(
                        Endpoint::Gesture,
                        Endpoint::Element(i),
                        LinkKind::Pluck(PluckLink::new(
                            HARP_PLUCK_STIFFNESS,
                            HARP_PLUCK_THRESHOLD,
                            offset,
                        )),
                    )
                })
                .collect();
            ModelGraph::new(elements, links, (0..n).collect(), HARP_GAIN)
        }
    };
    graph.expect("preset graphs are well formed")
}
