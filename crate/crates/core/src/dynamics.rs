//! The two-body problem with the attracting body fixed at the origin.
//!
//! The combined gravitational parameter `mu` is the only mass quantity used.
//! Motion is integrated with classical fixed-step RK4; conserved quantities and
//! conic elements are recovered from any single state.

use std::f64::consts::{PI, TAU};
use std::io::{self, Write};

use crate::geom::{cross3, cross_z, polar_radius, EllipseGeometry, Vec2, Vec3};
use crate::{KeplerError, Result};

/// Distances below this are treated as a collision with the centre.
pub const SINGULARITY_RADIUS: f64 = 1e-12;

/// Instantaneous position, velocity and time of the orbiting body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyState {
    pub pos: Vec3,
    pub vel: Vec3,
    pub t: f64,
}

impl BodyState {
    pub fn new(pos: Vec3, vel: Vec3, t: f64) -> Result<Self> {
        if !(pos.is_finite() && vel.is_finite() && t.is_finite()) {
            return Err(KeplerError::Domain("state components must be finite".into()));
        }
        let radius = pos.norm();
        if radius < SINGULARITY_RADIUS {
            return Err(KeplerError::Singularity { radius });
        }
        Ok(Self { pos, vel, t })
    }

    pub fn radius(&self) -> f64 {
        self.pos.norm()
    }
}

/// Conserved quantities of one state.
///
/// `angular` holds the plane constants `(A, B, C) = pos x vel`, so the orbit
/// lies in `A x + B y + C z = 0`. `energy` is `h = |vel|^2 - 2 mu / |pos|`
/// (twice the specific orbital energy).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstIntegrals {
    pub angular: Vec3,
    pub energy: f64,
    pub mu: f64,
}

impl FirstIntegrals {
    /// Drift of `(A, B, C, h)` relative to `reference`.
    ///
    /// The plane constants are scaled by `|(A, B, C)|` of the reference, since
    /// individual components are often exactly zero; `h` by `|h|`.
    pub fn drift_from(&self, reference: &FirstIntegrals) -> [f64; 4] {
        let scale = reference.angular.norm().max(f64::MIN_POSITIVE);
        let diff = self.angular - reference.angular;
        let energy_scale = reference.energy.abs().max(f64::MIN_POSITIVE);
        [
            diff.x.abs() / scale,
            diff.y.abs() / scale,
            diff.z.abs() / scale,
            (self.energy - reference.energy).abs() / energy_scale,
        ]
    }
}

/// Rotation sense of the orbit seen from the plane normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    CounterClockwise,
    Clockwise,
}

impl Sense {
    pub fn signum(self) -> f64 {
        match self {
            Sense::CounterClockwise => 1.0,
            Sense::Clockwise => -1.0,
        }
    }
}

/// Orthonormal in-plane basis of an orbit.
///
/// The normal is chosen with a nonnegative z-component, so an orbit in the XY
/// plane gets the identity basis and the sign of its areal constant is the sign
/// of `x vy - y vx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitalPlane {
    pub e1: Vec3,
    pub e2: Vec3,
    pub normal: Vec3,
}

impl OrbitalPlane {
    pub fn from_normal(n: Vec3) -> Result<Self> {
        let len = n.norm();
        if len == 0.0 || !len.is_finite() {
            return Err(KeplerError::DegenerateOrbit);
        }
        let mut normal = n * (1.0 / len);
        let flip = normal.z < 0.0
            || (normal.z == 0.0 && (normal.y < 0.0 || (normal.y == 0.0 && normal.x < 0.0)));
        if flip {
            normal = -normal;
        }
        let x_axis = Vec3::new(1.0, 0.0, 0.0);
        let mut e1 = x_axis - normal * normal.dot(x_axis);
        if e1.norm() < 1e-8 {
            let y_axis = Vec3::new(0.0, 1.0, 0.0);
            e1 = y_axis - normal * normal.dot(y_axis);
        }
        let e1 = e1 * (1.0 / e1.norm());
        let e2 = cross3(normal, e1);
        Ok(Self { e1, e2, normal })
    }

    pub fn project(&self, v: Vec3) -> Vec2 {
        Vec2::new(v.dot(self.e1), v.dot(self.e2))
    }
}

/// Conic elements of a bound orbit, `r = p / (1 - eps cos(theta - phase))`.
///
/// `theta` is the polar angle in the orbital plane measured from `plane.e1`
/// (the +x axis for orbits in the XY plane), so `phase` is the direction of the
/// far apsis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitElements {
    pub p: f64,
    pub eps: f64,
    pub phase: f64,
    pub mu: f64,
    /// Signed areal constant `x vy - y vx` in plane coordinates.
    pub areal: f64,
    pub energy: f64,
    pub sense: Sense,
    pub plane: OrbitalPlane,
}

impl OrbitElements {
    pub fn geometry(&self) -> Result<EllipseGeometry> {
        EllipseGeometry::from_conic(self.p, self.eps)
    }

    pub fn semi_major_axis(&self) -> f64 {
        self.p / ((1.0 - self.eps) * (1.0 + self.eps))
    }

    /// Polar angle of `pos` in the orbital plane.
    pub fn polar_angle(&self, pos: Vec3) -> f64 {
        let q = self.plane.project(pos);
        q.y.atan2(q.x)
    }

    /// Focal distance predicted at in-plane polar angle `theta`.
    pub fn radius_at(&self, theta: f64) -> f64 {
        polar_radius(self.p, self.eps, theta - self.phase)
    }
}

/// Ordered states at a uniform time step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: Vec<BodyState>,
    dt: f64,
}

impl Trajectory {
    pub fn states(&self) -> &[BodyState] {
        &self.states
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first(&self) -> &BodyState {
        &self.states[0]
    }

    pub fn last(&self) -> &BodyState {
        &self.states[self.states.len() - 1]
    }

    /// Worst drift of the first integrals along the run, relative to the first state.
    pub fn max_drift(&self, mu: f64) -> [f64; 4] {
        let reference = first_integrals(self.first(), mu);
        self.states.iter().fold([0.0; 4], |mut worst, s| {
            let d = first_integrals(s, mu).drift_from(&reference);
            for (w, v) in worst.iter_mut().zip(d) {
                *w = w.max(v);
            }
            worst
        })
    }

    /// Writes `t,x,y,z,vx,vy,vz,A,B,C,h`, one row per state, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mu: f64, mut out: W) -> io::Result<()> {
        writeln!(out, "t,x,y,z,vx,vy,vz,A,B,C,h")?;
        for s in &self.states {
            let fi = first_integrals(s, mu);
            let row = [
                s.t,
                s.pos.x,
                s.pos.y,
                s.pos.z,
                s.vel.x,
                s.vel.y,
                s.vel.z,
                fi.angular.x,
                fi.angular.y,
                fi.angular.z,
                fi.energy,
            ];
            let cells: Vec<String> = row.iter().map(|v| format_f64(*v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Lossless decimal rendering with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Inverse-square acceleration `-(mu / r^2) * pos / r`.
pub fn gravity_accel(pos: Vec3, mu: f64) -> Result<Vec3> {
    let r2 = pos.norm_squared();
    let r = r2.sqrt();
    if r.is_nan() || r < SINGULARITY_RADIUS {
        return Err(KeplerError::Singularity { radius: r });
    }
    Ok(pos * (-mu / (r2 * r)))
}

/// One classical fourth-order Runge-Kutta step of `pos'' = gravity_accel(pos)`.
pub fn rk4_step(state: &BodyState, mu: f64, dt: f64) -> Result<BodyState> {
    let (p, v) = (state.pos, state.vel);
    let half = 0.5 * dt;

    let k1p = v;
    let k1v = gravity_accel(p, mu)?;
    let k2p = v + k1v * half;
    let k2v = gravity_accel(p + k1p * half, mu)?;
    let k3p = v + k2v * half;
    let k3v = gravity_accel(p + k2p * half, mu)?;
    let k4p = v + k3v * dt;
    let k4v = gravity_accel(p + k3p * dt, mu)?;

    let sixth = dt / 6.0;
    let pos = p + (k1p + (k2p + k3p) * 2.0 + k4p) * sixth;
    let vel = v + (k1v + (k2v + k3v) * 2.0 + k4v) * sixth;
    let radius = pos.norm();
    if radius.is_nan() || radius < SINGULARITY_RADIUS || !vel.is_finite() {
        return Err(KeplerError::Singularity { radius });
    }
    Ok(BodyState { pos, vel, t: state.t + dt })
}

/// Integrates `steps` RK4 steps of size `dt`; returns `steps + 1` states.
pub fn propagate(state0: &BodyState, mu: f64, dt: f64, steps: usize) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(KeplerError::Domain(format!("step must be > 0, got {dt}")));
    }
    if steps == 0 {
        return Err(KeplerError::Domain("need at least one step".into()));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(KeplerError::Domain(format!("mu must be > 0, got {mu}")));
    }
    let mut states = Vec::with_capacity(steps + 1);
    states.push(*state0);
    let mut current = *state0;
    for i in 1..=steps {
        current = rk4_step(&current, mu, dt)?;
        // keep the grid exactly uniform instead of accumulating t += dt
        current.t = state0.t + i as f64 * dt;
        states.push(current);
    }
    Ok(Trajectory { states, dt })
}

pub fn first_integrals(state: &BodyState, mu: f64) -> FirstIntegrals {
    FirstIntegrals {
        angular: cross3(state.pos, state.vel),
        energy: state.vel.norm_squared() - 2.0 * mu / state.pos.norm(),
        mu,
    }
}

/// Largest normalised distance `|A x + B y + C z| / (|(A,B,C)| |pos|)` of the
/// trajectory from the plane of `fi`.
pub fn plane_residual(traj: &Trajectory, fi: &FirstIntegrals) -> Result<f64> {
    let n = fi.angular;
    let len = n.norm();
    if len == 0.0 {
        return Err(KeplerError::DegenerateOrbit);
    }
    Ok(traj
        .states
        .iter()
        .map(|s| n.dot(s.pos).abs() / (len * s.pos.norm()))
        .fold(0.0, f64::max))
}

/// Recovers the conic elements of a bound orbit from one state.
pub fn elements_from_state(state: &BodyState, mu: f64) -> Result<OrbitElements> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(KeplerError::Domain(format!("mu must be > 0, got {mu}")));
    }
    let fi = first_integrals(state, mu);
    let r = state.pos.norm();
    if fi.angular.norm() <= 1e-14 * r * state.vel.norm() || fi.angular.norm() == 0.0 {
        return Err(KeplerError::DegenerateOrbit);
    }
    let plane = OrbitalPlane::from_normal(fi.angular)?;
    let q = plane.project(state.pos);
    let w = plane.project(state.vel);
    let areal = cross_z(q, w);
    let h = fi.energy;

    let eps_sq = 1.0 + areal * areal * h / (mu * mu);
    let eps = eps_sq.max(0.0).sqrt();
    if eps >= 1.0 || h >= 0.0 {
        return Err(KeplerError::UnboundOrbit { eps });
    }

    // eccentricity vector points at the near apsis; the phase is the far one
    let ecc = (q * (w.dot(w) - mu / r) - w * q.dot(w)) * (1.0 / mu);
    let phase = if ecc.norm() < 1e-14 {
        0.0
    } else {
        let k = (-ecc.y).atan2(-ecc.x);
        if k <= -PI {
            k + TAU
        } else {
            k
        }
    };

    Ok(OrbitElements {
        p: areal * areal / mu,
        eps,
        phase,
        mu,
        areal,
        energy: h,
        sense: if areal >= 0.0 { Sense::CounterClockwise } else { Sense::Clockwise },
        plane,
    })
}

/// Orbital period `2 pi a b / |C|`.
///
/// `C = x vy - y vx` is twice the rate at which the radius vector sweeps area,
/// so one revolution takes `2 * area / |C|`.
pub fn period(elements: &OrbitElements) -> Result<f64> {
    let g = elements.geometry()?;
    Ok(2.0 * g.area() / elements.areal.abs())
}

/// Time until the body first returns to its starting polar angle, measured by
/// integration (independent of [`period`]). The crossing step is refined by
/// bisection on a partial RK4 step.
pub fn return_time(state0: &BodyState, mu: f64, dt: f64, max_steps: usize) -> Result<f64> {
    let elements = elements_from_state(state0, mu)?;
    let plane = elements.plane;
    let start = plane.project(state0.pos);
    let sense = elements.sense.signum();
    // signed angle swept from the start direction, in (-pi, pi]
    let offset = |pos: Vec3| {
        let q = plane.project(pos);
        sense * cross_z(start, q).atan2(start.dot(q))
    };

    let mut swept = 0.0;
    let mut prev_angle = 0.0;
    let mut current = *state0;
    for _ in 0..max_steps {
        let next = rk4_step(&current, mu, dt)?;
        let angle = offset(next.pos);
        let mut delta = angle - prev_angle;
        if delta < -PI {
            delta += TAU;
        }
        swept += delta;
        if swept >= TAU {
            // crossing inside (current, next]: offset goes from < 0 to >= 0
            let (mut lo, mut hi) = (0.0, dt);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let probe = rk4_step(&current, mu, mid)?;
                if offset(probe.pos) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(current.t + 0.5 * (lo + hi) - state0.t);
        }
        prev_angle = angle;
        current = next;
    }
    Err(KeplerError::Domain(format!(
        "no full revolution within {max_steps} steps of {dt}"
    )))
}
