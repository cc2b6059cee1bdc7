use crate::error::{Error, Result};
use crate::physics::links::{Endpoint, Kinematics, Link};
use crate::physics::modal::ModalResonator;
use crate::{GESTURE_LIMIT, SAMPLE_RATE};

/// A lumped mass advanced by the explicit two-step update
/// `x[n+1] = 2 x[n] - x[n-1] + (T^2 / m) F[n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointMass {
    pub mass: f64,
    position: f64,
    previous_position: f64,
}

impl PointMass {
    pub fn new(mass: f64) -> Self {
        assert!(mass > 0.0, "mass must be positive, got {mass}");
        Self {
            mass,
            position: 0.0,
            previous_position: 0.0,
        }
    }

    pub fn position(&self) -> f64 {
        self.position
    }

    fn advance(&mut self, force: f64, sample_period: f64) {
        let next = 2.0 * self.position - self.previous_position
            + sample_period * sample_period / self.mass * force;
        self.previous_position = self.position;
        self.position = next;
    }

    fn reset(&mut self) {
        self.position = 0.0;
        self.previous_position = 0.0;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Mass(PointMass),
    Resonator(ModalResonator),
}

impl Element {
    /// Displacement seen by links and by the listening point.
    pub fn position(&self) -> f64 {
        match self {
            Element::Mass(m) => m.position,
            Element::Resonator(r) => r.contact_position(),
        }
    }

    fn kinematics(&self, sample_rate: f64) -> Kinematics {
        let (now, before) = match self {
            Element::Mass(m) => (m.position, m.previous_position),
            Element::Resonator(r) => (r.contact_position(), r.previous_contact_position()),
        };
        Kinematics {
            position: now,
            velocity: (now - before) * sample_rate,
        }
    }

    fn advance(&mut self, force: f64, sample_period: f64) {
        match self {
            Element::Mass(m) => m.advance(force, sample_period),
            Element::Resonator(r) => r.advance(force, sample_period),
        }
    }

    fn reset(&mut self) {
        match self {
            Element::Mass(m) => m.reset(),
            Element::Resonator(r) => r.reset(),
        }
    }
}

/// A fixed network of elements and links, driven at one gesture point.
///
/// Each sample: clamp the gesture to +-5 cm, evaluate every link against the
/// current state, accumulate forces, advance every element, then read the
/// output as `output_gain` times the summed displacement of the listening
/// elements.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelGraph {
    elements: Vec<Element>,
    links: Vec<Link>,
    listen: Vec<usize>,
    output_gain: f64,
    sample_rate: f64,
    gesture: Option<f64>,
    previous_gesture: f64,
    forces: Vec<f64>,
}

impl ModelGraph {
    pub fn new(
        elements: Vec<Element>,
        links: Vec<Link>,
        listen: Vec<usize>,
        output_gain: f64,
    ) -> Result<Self> {
        let check = |e: Endpoint| match e {
            Endpoint::Element(i) if i >= elements.len() => Err(Error::InvalidArgument(format!(
                "link endpoint references element {i}, graph has {}",
                elements.len()
            ))),
            _ => Ok(()),
        };
        for link in &links {
            check(link.a)?;
            check(link.b)?;
        }
        if let Some(&i) = listen.iter().find(|&&i| i >= elements.len()) {
            return Err(Error::InvalidArgument(format!(
                "listening point references element {i}, graph has {}",
                elements.len()
            )));
        }
        let forces = vec![0.0; elements.len()];
        Ok(Self {
            elements,
            links,
            listen,
            output_gain,
            sample_rate: SAMPLE_RATE,
            gesture: None,
            previous_gesture: 0.0,
            forces,
        })
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn listening_points(&self) -> &[usize] {
        &self.listen
    }

    pub fn output_gain(&self) -> f64 {
        self.output_gain
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    /// Largest absolute displacement over all elements right now.
    pub fn max_abs_position(&self) -> f64 {
        self.elements
            .iter()
            .map(|e| e.position().abs())
            .fold(0.0, f64::max)
    }

    /// Advances the simulation by one sample and returns the output sample.
    pub fn step(&mut self, gesture_sample: f64) -> f64 {
        let g = if gesture_sample.is_nan() {
            0.0
        } else {
            gesture_sample.clamp(-GESTURE_LIMIT, GESTURE_LIMIT)
        };
        let previous = self.gesture.unwrap_or(g);
        self.previous_gesture = previous;
        self.gesture = Some(g);
        let fs = self.sample_rate;
        let gesture = Kinematics {
            position: g,
            velocity: (g - previous) * fs,
        };

        self.forces.iter_mut().for_each(|f| *f = 0.0);
        for link in &mut self.links {
            let kin = |e: Endpoint| match e {
                Endpoint::Gesture => gesture,
                Endpoint::Ground => Kinematics::default(),
                Endpoint::Element(i) => self.elements[i].kinematics(fs),
            };
            let (a, b) = (kin(link.a), kin(link.b));
            let force = link.evaluate(a, b, fs);
            if let Endpoint::Element(i) = link.b {
                self.forces[i] += force;
            }
            if let Endpoint::Element(i) = link.a {
                self.forces[i] -= force;
            }
        }

        let period = 1.0 / fs;
        for (element, &force) in self.elements.iter_mut().zip(&self.forces) {
            element.advance(force, period);
        }

        self.output_gain
            * self
                .listen
                .iter()
                .map(|&i| self.elements[i].position())
                .sum::<f64>()
    }

    /// Runs `step` over the whole gesture, continuing from the current state.
    pub fn render(&mut self, gesture: &[f64]) -> Result<Vec<f64>> {
        if gesture.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(gesture.iter().map(|&g| self.step(g)).collect())
    }

    /// Zeroes every element state, link arming state and filter memory.
    pub fn reset(&mut self) {
        self.elements.iter_mut().for_each(Element::reset);
        self.links.iter_mut().for_each(Link::reset);
        self.forces.iter_mut().for_each(|f| *f = 0.0);
        self.gesture = None;
        self.previous_gesture = 0.0;
    }
}
