//! Plane and space geometry used by the orbit code.
//!
//! Angles are in radians. Polar coordinates put the focus at the origin and use
//! `r = p / (1 - eps * cos(theta))`, so `theta = 0` is the far apsis.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{KeplerError, Result};

/// Relative tolerance used when checking that the five ellipse parameters agree.
const GEOMETRY_RTOL: f64 = 1e-12;

/// `|P3[v, a]|` below this fraction of `|v|^3` counts as straight-line motion.
const CURVATURE_DEGENERACY: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

macro_rules! impl_vector_ops {
    ($ty:ident { $($field:ident),+ }) => {
        impl Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                $ty { $($field: self.$field + rhs.$field),+ }
            }
        }

        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                $ty { $($field: self.$field - rhs.$field),+ }
            }
        }

        impl Mul<f64> for $ty {
            type Output = $ty;
            fn mul(self, rhs: f64) -> $ty {
                $ty { $($field: self.$field * rhs),+ }
            }
        }

        impl Mul<$ty> for f64 {
            type Output = $ty;
            fn mul(self, rhs: $ty) -> $ty {
                rhs * self
            }
        }

        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty { $($field: -self.$field),+ }
            }
        }
    };
}

impl_vector_ops!(Vec2 { x, y });
impl_vector_ops!(Vec3 { x, y, z });

/// The parameter bundle of an ellipse: semi-axes `a >= b > 0`, focal
/// half-distance `f`, eccentricity `eps = f / a` and semi-latus rectum
/// `p = b^2 / a`.
///
/// All five values are stored and checked for mutual consistency when the
/// bundle is built, so a value of this type is always a valid ellipse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseGeometry {
    a: f64,
    b: f64,
    f: f64,
    eps: f64,
    p: f64,
}

impl EllipseGeometry {
    /// Builds the bundle from explicit values, rejecting any inconsistent set.
    pub fn new(a: f64, b: f64, f: f64, eps: f64, p: f64) -> Result<Self> {
        let values = [a, b, f, eps, p];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(KeplerError::Domain("ellipse parameters must be finite".into()));
        }
        if !(b > 0.0 && a >= b) {
            return Err(KeplerError::Domain(format!(
                "ellipse needs a >= b > 0, got a = {a}, b = {b}"
            )));
        }
        if !(0.0..1.0).contains(&eps) || f < 0.0 {
            return Err(KeplerError::Domain(format!(
                "ellipse needs 0 <= eps < 1 and f >= 0, got eps = {eps}, f = {f}"
            )));
        }
        let scale = a * a;
        let focal_ok = (f * f - (a - b) * (a + b)).abs() <= GEOMETRY_RTOL * scale;
        let eps_ok = (eps - f / a).abs() <= GEOMETRY_RTOL;
        let p_ok = (p - b * b / a).abs() <= GEOMETRY_RTOL * p;
        if !(focal_ok && eps_ok && p_ok) {
            return Err(KeplerError::Domain(format!(
                "inconsistent ellipse parameters a = {a}, b = {b}, f = {f}, eps = {eps}, p = {p}"
            )));
        }
        Ok(Self { a, b, f, eps, p })
    }

    /// Ellipse `x^2/a^2 + y^2/b^2 = 1` from its semi-axes.
    pub fn from_axes(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= 0.0 || b > a {
            return Err(KeplerError::Domain(format!(
                "ellipse needs a >= b > 0, got a = {a}, b = {b}"
            )));
        }
        let f = ((a - b) * (a + b)).sqrt();
        Self::new(a, b, f, f / a, b * b / a)
    }

    /// Ellipse from the conic form `r = p / (1 - eps cos theta)`.
    pub fn from_conic(p: f64, eps: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(KeplerError::Domain(format!("semi-latus rectum must be > 0, got {p}")));
        }
        if !(0.0..1.0).contains(&eps) {
            return Err(KeplerError::Domain(format!(
                "eccentricity {eps} is not elliptic (need 0 <= eps < 1)"
            )));
        }
        let one_minus = (1.0 - eps) * (1.0 + eps);
        let a = p / one_minus;
        let b = p / one_minus.sqrt();
        Self::new(a, b, a * eps, eps, p)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `pi * a * b`.
    pub fn area(&self) -> f64 {
        PI * self.a * self.b
    }
}

/// Focal distance `p / (1 - eps cos theta)`; `theta = 0` is the far apsis.
pub fn polar_radius(p: f64, eps: f64, theta: f64) -> f64 {
    p / (1.0 - eps * theta.cos())
}

pub fn polar_to_cartesian(r: f64, theta: f64) -> Vec2 {
    let (sin, cos) = theta.sin_cos();
    Vec2::new(r * cos, r * sin)
}

/// Signed parallelogram area `x1 y2 - x2 y1` (z-component of the vector product).
pub fn cross_z(u: Vec2, v: Vec2) -> f64 {
    u.x * v.y - v.x * u.y
}

pub fn cross3(u: Vec3, v: Vec3) -> Vec3 {
    Vec3::new(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.x * v.y - u.y * v.x,
    )
}

/// Radius of the osculating circle of a plane curve from its first and second
/// derivatives at one point: `|v|^3 / |P3[v, acc]|`.
pub fn curvature_radius(v: Vec2, acc: Vec2) -> Result<f64> {
    let speed = v.norm();
    let area = cross_z(v, acc).abs();
    if area <= CURVATURE_DEGENERACY * speed.powi(3) || !area.is_finite() {
        return Err(KeplerError::DegenerateCurvature);
    }
    Ok(speed.powi(3) / area)
}

/// Length of the acceleration component normal to the velocity.
pub fn normal_accel_projection(acc: Vec2, v: Vec2) -> Result<f64> {
    let speed = v.norm();
    if speed == 0.0 || !speed.is_finite() {
        return Err(KeplerError::Domain(
            "normal projection needs a nonzero velocity".into(),
        ));
    }
    Ok(cross_z(acc, v).abs() / speed)
}
