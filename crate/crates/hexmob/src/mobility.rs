//! Mobile-station kinematics: random-direction motion at constant speed with
//! exponentially distributed direction-holding times (mean `tau`) and
//! specular reflection at the walls of a bounding box.

use std::f64::consts::TAU;

use rand::Rng;

use crate::hexgrid::{Grid, Point};
use crate::Error;

/// Position and motion state of one station. The speed is fixed for the
/// lifetime of a run; only the heading changes.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Kinematics {
    pub position: Point,
    pub speed: f64,
    /// Radians in `[0, 2*pi)`.
    pub heading: f64,
}

/// Axis-aligned rectangle the stations are confined to.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MotionBox {
    pub min: Point,
    pub max: Point,
}

impl MotionBox {
    pub fn new(min: Point, max: Point) -> Result<Self, Error> {
        if !(min.x < max.x && min.y < max.y) {
            return Err(Error::Config(format!(
                "motion box must have positive extent, got [{},{}]x[{},{}]",
                min.x, max.x, min.y, max.y
            )));
        }
        Ok(Self { min, max })
    }

    /// The grid's bounding box expanded by one cell diameter on every side,
    /// so stations can drift out of coverage but never escape.
    pub fn around_grid(grid: &Grid) -> MotionBox {
        let (lo, hi) = grid.bounding_box();
        let margin = 2.0 * grid.cell_radius();
        MotionBox {
            min: Point::new(lo.x - margin, lo.y - margin),
            max: Point::new(hi.x + margin, hi.y + margin),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        self.min.x <= p.x && p.x <= self.max.x && self.min.y <= p.y && p.y <= self.max.y
    }
}

/// Per-tick step constants, precomputed once per run.
#[derive(Copy, Clone, Debug)]
pub struct StepParams {
    dt: f64,
    resample_prob: f64,
}

impl StepParams {
    /// Panics if `dt` or `tau` is not positive; `tau = +inf` is allowed and
    /// yields straight-line motion.
    pub fn new(dt: f64, tau: f64) -> StepParams {
        assert!(dt > 0.0 && dt.is_finite(), "dt must be positive, got {dt}");
        assert!(tau > 0.0, "tau must be positive, got {tau}");
        StepParams {
            dt,
            resample_prob: 1.0 - (-dt / tau).exp(),
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }
}

/// Place `n` stations uniformly over `bounds` with uniform headings and a
/// common speed, drawing from a single stream in station order.
pub fn init_stations<R: Rng>(
    n: u32,
    bounds: &MotionBox,
    speed: f64,
    rng: &mut R,
) -> Vec<Kinematics> {
    (0..n).map(|_| random_kinematics(bounds, speed, rng)).collect()
}

/// One station with a uniform position and heading.
pub fn random_kinematics<R: Rng>(bounds: &MotionBox, speed: f64, rng: &mut R) -> Kinematics {
    let x = bounds.min.x + rng.random::<f64>() * (bounds.max.x - bounds.min.x);
    let y = bounds.min.y + rng.random::<f64>() * (bounds.max.y - bounds.min.y);
    Kinematics {
        position: Point::new(x, y),
        speed,
        heading: normalize_angle(rng.random::<f64>() * TAU),
    }
}

/// Advance one station by `dt`: with probability `1 - exp(-dt/tau)` the
/// heading is first resampled uniformly, then the station travels
/// `speed * dt` along it, reflecting specularly off the box walls.
pub fn step<R: Rng>(k: Kinematics, dt: f64, tau: f64, bounds: &MotionBox, rng: &mut R) -> Kinematics {
    step_params(k, &StepParams::new(dt, tau), bounds, rng)
}

/// `step` with precomputed per-tick constants; the engine's hot path.
pub fn step_params<R: Rng>(
    k: Kinematics,
    params: &StepParams,
    bounds: &MotionBox,
    rng: &mut R,
) -> Kinematics {
    let mut heading = k.heading;
    if rng.random::<f64>() < params.resample_prob {
        heading = rng.random::<f64>() * TAU;
    }
    let (sin, cos) = heading.sin_cos();
    let raw_x = k.position.x + k.speed * params.dt * cos;
    let raw_y = k.position.y + k.speed * params.dt * sin;
    let (x, flip_x) = reflect_axis(raw_x, bounds.min.x, bounds.max.x);
    let (y, flip_y) = reflect_axis(raw_y, bounds.min.y, bounds.max.y);
    if flip_x || flip_y {
        let vx = if flip_x { -cos } else { cos };
        let vy = if flip_y { -sin } else { sin };
        heading = vy.atan2(vx);
    }
    Kinematics {
        position: Point::new(x, y),
        speed: k.speed,
        heading: normalize_angle(heading),
    }
}

/// Fold a coordinate back into `[min, max]` by repeated mirror reflection.
/// The second value reports whether the velocity component ends up negated
/// (an odd number of reflections).
fn reflect_axis(mut x: f64, min: f64, max: f64) -> (f64, bool) {
    let mut flipped = false;
    while x < min || x > max {
        x = if x < min { 2.0 * min - x } else { 2.0 * max - x };
        flipped = !flipped;
    }
    (x, flipped)
}

/// Map an angle into `[0, 2*pi)`, guarding the rounding case where
/// `rem_euclid` lands exactly on `2*pi`.
fn normalize_angle(a: f64) -> f64 {
    let h = a.rem_euclid(TAU);
    if h >= TAU {
        0.0
    } else {
        h
    }
}
