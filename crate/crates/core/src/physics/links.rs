//! Interaction links between the gesture point, elements and ground.
//!
//! Every link computes one scalar force acting on its `b` endpoint; the `a`
//! endpoint receives the opposite force when it is an element. The gesture
//! point and ground are kinematic and ignore forces.

/// Where a link attaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Gesture,
    Ground,
    Element(usize),
}

/// Position and backward-difference velocity of an endpoint at the current sample.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Kinematics {
    pub position: f64,
    pub velocity: f64,
}

/// Virtual plectrum.
///
/// With `delta = (a - attach_offset) - b`, the plectrum is on the side
/// `last_sign` of the resonator after a release. It arms once `delta` crosses
/// over to `-last_sign`, drags the resonator (force `stiffness * delta`) while
/// `|delta| < threshold`, and releases when `|delta|` reaches `threshold` on the
/// far side, at which point `last_sign` flips. Backing out to the original
/// side disengages without a release, so releases strictly alternate in sign.
#[derive(Clone, Debug, PartialEq)]
pub struct PluckLink {
    pub stiffness: f64,
    pub threshold: f64,
    pub attach_offset: f64,
    armed: bool,
    engaged: bool,
    placed: bool,
    last_sign: f64,
    releases: u64,
}

impl PluckLink {
    pub fn new(stiffness: f64, threshold: f64, attach_offset: f64) -> Self {
        assert!(threshold > 0.0, "pluck threshold must be positive");
        Self {
            stiffness,
            threshold,
            attach_offset,
            armed: false,
            engaged: false,
            placed: false,
            last_sign: -1.0,
            releases: 0,
        }
    }

    pub fn is_armed(&self) -> bool {
        self.armed
    }

    pub fn is_engaged(&self) -> bool {
        self.engaged
    }

    /// Side of the resonator the plectrum ended on after the latest release.
    pub fn last_sign(&self) -> f64 {
        self.last_sign
    }

    /// Number of releases since the last reset.
    pub fn release_count(&self) -> u64 {
        self.releases
    }

    fn force(&mut self, a: Kinematics, b: Kinematics) -> f64 {
        let delta = (a.position - self.attach_offset) - b.position;
        let side = signum(delta);

        // The first sample after a reset decides which side the plectrum is on.
        if !self.placed {
            self.placed = true;
            if side > 0.0 && delta.abs() >= self.threshold {
                self.last_sign = 1.0;
            }
        }

        if self.engaged {
            if delta.abs() >= self.threshold && side == -self.last_sign {
                self.engaged = false;
                self.armed = false;
                self.last_sign = side;
                self.releases += 1;
                return 0.0;
            }
            if side == self.last_sign {
                // backed out the way it came
                self.engaged = false;
                self.armed = false;
                return 0.0;
            }
            return self.stiffness * delta;
        }

        if !self.armed && side == -self.last_sign {
            self.armed = true;
        }
        if self.armed && side == -self.last_sign && delta.abs() < self.threshold {
            self.engaged = true;
            return self.stiffness * delta;
        }
        0.0
    }

    fn reset(&mut self) {
        *self = Self::new(self.stiffness, self.threshold, self.attach_offset);
    }
}

fn signum(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Unilateral spring-damper contact. Pushes only while the gesture penetrates
/// past `contact_offset` into the element.
#[derive(Clone, Debug, PartialEq)]
pub struct TouchLink {
    pub stiffness: f64,
    pub damping: f64,
    pub contact_offset: f64,
    previous_penetration: Option<f64>,
    penetration: f64,
}

impl TouchLink {
    pub fn new(stiffness: f64, damping: f64, contact_offset: f64) -> Self {
        Self {
            stiffness,
            damping,
            contact_offset,
            previous_penetration: None,
            penetration: f64::NEG_INFINITY,
        }
    }

    /// Penetration at the latest evaluated sample.
    pub fn penetration(&self) -> f64 {
        self.penetration
    }

    fn force(&mut self, a: Kinematics, b: Kinematics, sample_rate: f64) -> f64 {
        let p = (a.position - self.contact_offset) - b.position;
        let rate = self
            .previous_penetration
            .map_or(0.0, |prev| (p - prev) * sample_rate);
        self.previous_penetration = Some(p);
        self.penetration = p;
        if p > 0.0 {
            self.stiffness * p + self.damping * rate
        } else {
            0.0
        }
    }

    fn reset(&mut self) {
        self.previous_penetration = None;
        self.penetration = f64::NEG_INFINITY;
    }
}

/// Velocity-dependent friction with a single smooth peak at `v0`, falling
/// off for faster sliding:
/// `mu(v) = peak_force * (v / v0) * exp(0.5 - 0.5 * (v / v0)^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrictionLink {
    pub peak_force: f64,
    pub characteristic_velocity: f64,
}

impl FrictionLink {
    pub fn new(peak_force: f64, characteristic_velocity: f64) -> Self {
        assert!(characteristic_velocity > 0.0);
        Self {
            peak_force,
            characteristic_velocity,
        }
    }

    /// Friction force for relative velocity `v`. Odd in `v`, bounded by
    /// `peak_force` (reached at `|v| = v0`).
    pub fn curve(&self, v: f64) -> f64 {
        let u = v / self.characteristic_velocity;
        self.peak_force * u * (0.5 - 0.5 * u * u).exp()
    }
}

/// Linear spring with viscous damping.
#[derive(Clone, Debug, PartialEq)]
pub struct SpringDamper {
    pub stiffness: f64,
    pub damping: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LinkKind {
    Pluck(PluckLink),
    Touch(TouchLink),
    Friction(FrictionLink),
    Spring(SpringDamper),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Link {
    pub a: Endpoint,
    pub b: Endpoint,
    pub kind: LinkKind,
    force: f64,
}

impl Link {
    pub fn new(a: Endpoint, b: Endpoint, kind: LinkKind) -> Self {
        Self { a, b, kind, force: 0.0 }
    }

    /// Force applied to `b` at the latest sample.
    pub fn last_force(&self) -> f64 {
        self.force
    }

    pub(crate) fn evaluate(&mut self, a: Kinematics, b: Kinematics, sample_rate: f64) -> f64 {
        self.force = match &mut self.kind {
            LinkKind::Pluck(p) => p.force(a, b),
            LinkKind::Touch(t) => t.force(a, b, sample_rate),
            LinkKind::Friction(f) => f.curve(a.velocity - b.velocity),
            LinkKind::Spring(s) => {
                s.stiffness * (a.position - b.position) + s.damping * (a.velocity - b.velocity)
            }
        };
        self.force
    }

    pub(crate) fn reset(&mut self) {
        self.force = 0.0;
        match &mut self.kind {
            LinkKind::Pluck(p) => p.reset(),
            LinkKind::Touch(t) => t.reset(),
            LinkKind::Friction(_) | LinkKind::Spring(_) => {}
        }
    }
}
