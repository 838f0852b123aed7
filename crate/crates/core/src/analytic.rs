//! Analytic law of motion along an elliptic orbit.
//!
//! With `r = p / (1 - eps cos theta)` and constant areal velocity
//! `r^2 theta' = C`, the polar angle obeys
//!
//! ```text
//! d theta / (1 - eps cos theta)^2 = (C / p^2) dt
//! ```
//!
//! so the time since the far apsis is `t = I(theta) / (C / p^2)` with
//! `I(theta) = integral_0^theta dx / (1 - eps cos x)^2`.
//!
//! `I` has an elementary antiderivative built from `arctan` of
//! `zeta = sqrt((1 + eps) / (1 - eps)) * tan(theta / 2)`. That expression jumps
//! at every odd multiple of `pi`, where `tan(theta / 2)` has a pole, so
//! [`antiderivative_continuous`] stitches the branches together: it reduces
//! `theta` to `(-pi, pi]`, evaluates the closed form there and adds one full
//! period of area per revolution. The result is continuous, strictly
//! increasing and zero at `theta = 0`.
//!
//! [`quadrature_oracle`] evaluates the same integral numerically and is used
//! only to verify the closed form.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::dynamics::OrbitElements;
use crate::geom::Vec2;
use crate::{KeplerError, Result};

/// Absolute tolerance of [`quadrature_oracle`].
pub const QUADRATURE_TOL: f64 = 1e-11;

const MAX_SIMPSON_DEPTH: u32 = 50;

fn check_eps(eps: f64) -> Result<()> {
    if (0.0..1.0).contains(&eps) {
        Ok(())
    } else {
        Err(KeplerError::Domain(format!(
            "eccentricity must satisfy 0 <= eps < 1, got {eps}"
        )))
    }
}

/// Angular density `1 / (1 - eps cos theta)^2`, the integrand of the time law.
pub fn theta_density(theta: f64, eps: f64) -> f64 {
    let d = 1.0 - eps * theta.cos();
    1.0 / (d * d)
}

/// Angular rate `theta' = (C / p^2) (1 - eps cos theta)^2`.
pub fn theta_rate(theta: f64, eps: f64, areal: f64, p: f64) -> f64 {
    let d = 1.0 - eps * theta.cos();
    areal / (p * p) * d * d
}

/// Scale factor in front of the arctan bracket:
/// `sqrt(1 - eps) / sqrt(1 + eps) * 2 / ((1 - eps^2)(1 - eps))`.
fn prefactor(eps: f64) -> f64 {
    let one_minus = 1.0 - eps;
    let one_plus = 1.0 + eps;
    (one_minus / one_plus).sqrt() * 2.0 / (one_minus * one_plus * one_minus)
}

fn closed_form(tan_half: f64, eps: f64) -> f64 {
    let zeta = ((1.0 + eps) / (1.0 - eps)).sqrt() * tan_half;
    prefactor(eps) * (zeta.atan() + eps * zeta / (zeta * zeta + 1.0))
}

/// Splits `theta = 2 pi n + phi` with `phi` in `[-pi, pi]`.
fn reduce(theta: f64) -> (f64, f64) {
    let n = (theta / TAU).round();
    (n, theta - n * TAU)
}

/// The closed-form antiderivative as written, without branch repair.
///
/// Valid for `0 < eps < 1`. It is discontinuous at odd multiples of `pi`
/// (reported as [`KeplerError::Pole`]) and drops by one period of area at each
/// of them, so away from `(-pi, pi)` it differs from the true area integral by
/// whole periods.
pub fn antiderivative_raw(theta: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(KeplerError::Domain(format!(
            "closed form needs 0 < eps < 1, got {eps}"
        )));
    }
    let (_, phi) = reduce(theta);
    if phi.abs() >= PI {
        return Err(KeplerError::Pole { theta });
    }
    Ok(closed_form((0.5 * theta).tan(), eps))
}

/// Area `I(theta)` under the density over one full revolution:
/// twice the closed form's limit as `theta -> pi` from below, where the
/// arctan bracket tends to `pi / 2`. Equals `2 pi / (1 - eps^2)^(3/2)`.
pub fn period_integral(eps: f64) -> f64 {
    if eps == 0.0 {
        return TAU;
    }
    2.0 * prefactor(eps) * FRAC_PI_2
}

/// Continuous antiderivative `I(theta)` with `I(0) = 0`, defined for every real
/// `theta` (pole values are the one-sided limits). Requires `0 <= eps < 1`;
/// returns NaN otherwise.
pub fn antiderivative_continuous(theta: f64, eps: f64) -> f64 {
    if check_eps(eps).is_err() {
        return f64::NAN;
    }
    if eps == 0.0 {
        return theta;
    }
    let period = period_integral(eps);
    let (n, phi) = reduce(theta);
    let within = if phi.abs() >= PI {
        0.5 * period * phi.signum()
    } else {
        closed_form((0.5 * phi).tan(), eps)
    };
    n * period + within
}

/// Numerical value of `integral_0^theta dx / (1 - eps cos x)^2` by adaptive
/// Simpson quadrature with absolute tolerance [`QUADRATURE_TOL`].
pub fn quadrature_oracle(theta: f64, eps: f64) -> f64 {
    if check_eps(eps).is_err() {
        return f64::NAN;
    }
    if theta < 0.0 {
        return -quadrature_oracle(-theta, eps);
    }
    if theta == 0.0 {
        return 0.0;
    }
    let f = |x: f64| theta_density(x, eps);
    let panels = (theta / (PI / 8.0)).ceil().max(1.0) as usize;
    let width = theta / panels as f64;
    let tol = QUADRATURE_TOL / panels as f64;
    (0..panels)
        .map(|i| {
            let a = i as f64 * width;
            let b = if i + 1 == panels { theta } else { a + width };
            adaptive_simpson(&f, a, b, tol)
        })
        .sum()
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, MAX_SIMPSON_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // below a few ulps of the panel value the estimate is rounding noise
    let floor = 8.0 * f64::EPSILON * (left + right).abs();
    if depth == 0 || delta.abs() <= 15.0 * tol.max(floor) {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Time law `t = I(theta) / rate` with `rate = C / p^2`, normalised so that
/// `t = 0` at `theta = 0` (the far apsis).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeLaw {
    eps: f64,
    rate: f64,
    period_integral: f64,
}

impl TimeLaw {
    pub fn new(eps: f64, rate: f64) -> Result<Self> {
        check_eps(eps)?;
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(KeplerError::Domain(format!("rate must be > 0, got {rate}")));
        }
        Ok(Self { eps, rate, period_integral: period_integral(eps) })
    }

    /// Law for a dynamical orbit: `rate = |C| / p^2`.
    pub fn from_elements(elements: &OrbitElements) -> Result<Self> {
        Self::new(elements.eps, elements.areal.abs() / (elements.p * elements.p))
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn period_integral(&self) -> f64 {
        self.period_integral
    }

    /// Orbital period `I(2 pi) / rate`.
    pub fn period(&self) -> f64 {
        self.period_integral / self.rate
    }

    pub fn time_from_angle(&self, theta: f64) -> f64 {
        time_from_angle(theta, self)
    }

    pub fn angle_from_time(&self, t: f64) -> f64 {
        angle_from_time(t, self)
    }
}

pub fn time_from_angle(theta: f64, law: &TimeLaw) -> f64 {
    antiderivative_continuous(theta, law.eps) / law.rate
}

/// Inverse of [`time_from_angle`]: safeguarded Newton iteration on the
/// strictly increasing `I`, bracketed within one revolution.
pub fn angle_from_time(t: f64, law: &TimeLaw) -> f64 {
    let target = t * law.rate;
    if law.eps == 0.0 {
        return target;
    }
    let period = law.period_integral;
    let n = (target / period).round();
    let rest = target - n * period;

    let (mut lo, mut hi) = (-PI, PI);
    // start from uniform motion
    let mut phi = (rest / period * TAU).clamp(lo, hi);
    for _ in 0..200 {
        let residual = antiderivative_continuous(phi, law.eps) - rest;
        if residual == 0.0 {
            break;
        }
        if residual < 0.0 {
            lo = phi;
        } else {
            hi = phi;
        }
        let mut next = phi - residual / theta_density(phi, law.eps);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - phi).abs();
        phi = next;
        if step <= 2.0 * f64::EPSILON * phi.abs().max(1.0) || hi - lo <= f64::EPSILON {
            break;
        }
    }
    phi + n * TAU
}

/// Speed as a function of polar angle, `scale = C / p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedProfile {
    eps: f64,
    scale: f64,
}

impl SpeedProfile {
    pub fn new(eps: f64, scale: f64) -> Result<Self> {
        check_eps(eps)?;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(KeplerError::Domain(format!("scale must be > 0, got {scale}")));
        }
        Ok(Self { eps, scale })
    }

    pub fn from_elements(elements: &OrbitElements) -> Result<Self> {
        Self::new(elements.eps, elements.areal.abs() / elements.p)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// `|v| = sqrt((eps sin theta / (1 - eps cos theta))^2 + 1) (1 - eps cos theta) C / p`.
pub fn speed_from_angle(theta: f64, profile: &SpeedProfile) -> f64 {
    let (sin, cos) = theta.sin_cos();
    let d = 1.0 - profile.eps * cos;
    let ratio = profile.eps * sin / d;
    (ratio * ratio + 1.0).sqrt() * d * profile.scale
}

/// Squared speed from the reciprocal-radius form `C^2 ((du/dtheta)^2 + u^2)`
/// with `u = 1 / r`.
pub fn speed_u_form_check(theta: f64, elements: &OrbitElements) -> f64 {
    let (sin, cos) = theta.sin_cos();
    let (p, eps) = (elements.p, elements.eps);
    let du = -eps * sin / p;
    let u = (1.0 - eps * cos) / p;
    elements.areal * elements.areal * (du * du + u * u)
}

/// Acceleration at polar angle `theta` (measured from the far apsis): magnitude
/// `C^2 / (p r^2)`, directed at the focus.
pub fn acceleration_from_angle(theta: f64, elements: &OrbitElements) -> Vec2 {
    let (sin, cos) = theta.sin_cos();
    let p = elements.p;
    let r = p / (1.0 - elements.eps * cos);
    let magnitude = elements.areal * elements.areal / (p * r * r);
    Vec2::new(-magnitude * cos, -magnitude * sin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{elements_from_state, period, BodyState};
    use crate::geom::Vec3;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn apoapsis_elements(a: f64, eps: f64, mu: f64) -> OrbitElements {
        let r = a * (1.0 + eps);
        let v = (mu * (2.0 / r - 1.0 / a)).sqrt();
        let s = BodyState::new(Vec3::new(r, 0.0, 0.0), Vec3::new(0.0, v, 0.0), 0.0).unwrap();
        elements_from_state(&s, mu).unwrap()
    }

    fn closed_period(eps: f64) -> f64 {
        TAU / (1.0 - eps * eps).powf(1.5)
    }

    #[test]
    fn theta_density_examples() {
        for theta in [0.0, 1.0, -7.0] {
            assert_eq!(theta_density(theta, 0.0), 1.0);
        }
        assert!(rel(theta_density(0.0, 0.9), 100.0) < 1e-13);
        assert!(rel(theta_density(PI, 0.5), 4.0 / 9.0) < 1e-15);
    }

    #[test]
    fn theta_rate_examples() {
        for eps in [0.0, 0.3, 0.9] {
            assert!((theta_rate(FRAC_PI_2, eps, 1.0, 1.0) - 1.0).abs() < 1e-15);
        }
        assert!((theta_rate(0.0, 0.8, 1.0, 1.0) - 0.04).abs() < 1e-15);
        let slow = theta_rate(0.0, 0.5, 1.0, 1.0);
        let fast = theta_rate(PI, 0.5, 1.0, 1.0);
        for k in 1..100 {
            let r = theta_rate(k as f64 * PI / 100.0, 0.5, 1.0, 1.0);
            assert!(slow < r && r < fast);
        }
        assert!(rel(theta_rate(1.1, 0.4, 2.0, 3.0) * theta_density(1.1, 0.4), 2.0 / 9.0) < 1e-15);
    }

    #[test]
    fn raw_examples() {
        assert_eq!(antiderivative_raw(0.0, 0.3).unwrap(), 0.0);
        let q = quadrature_oracle(FRAC_PI_2, 0.3);
        assert!((antiderivative_raw(FRAC_PI_2, 0.3).unwrap() - q).abs() < 1e-9);

        // past the pole the raw form has dropped exactly one period of area
        let raw = antiderivative_raw(1.5 * PI, 0.3).unwrap();
        let q = quadrature_oracle(1.5 * PI, 0.3);
        let jump = q - raw;
        assert!((jump - quadrature_oracle(TAU, 0.3)).abs() < 1e-9);
    }

    #[test]
    fn raw_rejects_pole_and_bad_eps() {
        assert_eq!(antiderivative_raw(PI, 0.3), Err(KeplerError::Pole { theta: PI }));
        assert!(matches!(antiderivative_raw(-3.0 * PI, 0.3), Err(KeplerError::Pole { .. })));
        assert!(antiderivative_raw(1.0, 0.0).is_err());
        assert!(antiderivative_raw(1.0, 1.0).is_err());
    }

    #[test]
    fn raw_derivative_is_density() {
        let h = 1e-5;
        for eps in [0.1, 0.5, 0.9] {
            for theta in [-2.5, -1.0, 0.3, 1.7, 2.9] {
                let d = (antiderivative_raw(theta + h, eps).unwrap()
                    - antiderivative_raw(theta - h, eps).unwrap())
                    / (2.0 * h);
                assert!(rel(d, theta_density(theta, eps)) < 1e-8, "eps={eps} theta={theta}");
            }
        }
    }

    #[test]
    fn literal_angle_scaling_fails_derivative_check() {
        // scaling the angle inside tan instead of tan itself does not integrate the density
        let eps: f64 = 0.3;
        let k = ((1.0 + eps) / (1.0 - eps)).sqrt();
        let literal = |x: f64| {
            let t = (0.5 * x * k).tan();
            prefactor(eps) * (t.atan() + eps * t / (t * t + 1.0))
        };
        let h = 1e-5;
        let d = (literal(0.5 + h) - literal(0.5 - h)) / (2.0 * h);
        assert!(rel(d, theta_density(0.5, eps)) > 1e-2);
    }

    #[test]
    fn continuous_examples() {
        assert_eq!(antiderivative_continuous(TAU, 0.0), TAU);
        for eps in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let q = quadrature_oracle(TAU, eps);
            assert!((q - closed_period(eps)).abs() < 1e-9);
            assert!((antiderivative_continuous(TAU, eps) - q).abs() < 1e-9);
        }
        assert_eq!(antiderivative_continuous(0.0, 0.4), 0.0);
        assert!(antiderivative_continuous(1.0, 1.0).is_nan());
    }

    #[test]
    fn continuous_at_poles() {
        let eps = 0.6;
        let p = period_integral(eps);
        for k in [-3i32, -1, 1, 3, 5] {
            let pole = k as f64 * PI;
            let at = antiderivative_continuous(pole, eps);
            let below = antiderivative_continuous(pole - 1e-9, eps);
            let above = antiderivative_continuous(pole + 1e-9, eps);
            assert!((at - 0.5 * p * k as f64).abs() < 1e-12);
            assert!((below - at).abs() < 1e-7 && (above - at).abs() < 1e-7);
            assert!(below < at && at < above);
        }
    }

    #[test]
    fn quadrature_examples() {
        assert_eq!(quadrature_oracle(0.0, 0.7), 0.0);
        // doubling the resolution: the adaptive result agrees with a fine composite Simpson rule
        let n = 200_000;
        let h = TAU / n as f64;
        let composite: f64 = (0..n)
            .map(|i| {
                let a = i as f64 * h;
                h / 6.0
                    * (theta_density(a, 0.5)
                        + 4.0 * theta_density(a + 0.5 * h, 0.5)
                        + theta_density(a + h, 0.5))
            })
            .sum();
        let q = quadrature_oracle(TAU, 0.5);
        assert!((q - composite).abs() < 1e-10);
        assert!((q - TAU / 0.75f64.powf(1.5)).abs() < 1e-10);
        assert_eq!(quadrature_oracle(-2.0, 0.4), -quadrature_oracle(2.0, 0.4));
    }

    #[test]
    fn time_law_examples() {
        let el = apoapsis_elements(5.0, 0.8, 1.0);
        let law = TimeLaw::from_elements(&el).unwrap();
        assert_eq!(law.time_from_angle(0.0), 0.0);
        let t = period(&el).unwrap();
        assert!(rel(law.time_from_angle(TAU), t) < 1e-6);
        assert!(rel(law.time_from_angle(PI), 0.5 * t) < 1e-12);

        assert_eq!(law.angle_from_time(0.0), 0.0);
        assert!((law.angle_from_time(0.5 * t) - PI).abs() < 1e-12);
        assert!(law.angle_from_time(0.25 * t) < FRAC_PI_2);
        assert!(quadrature_oracle(FRAC_PI_2, 0.8) > law.period_integral() / 4.0);

        assert!(TimeLaw::new(1.0, 1.0).is_err());
        assert!(TimeLaw::new(0.5, 0.0).is_err());
    }

    #[test]
    fn angle_from_time_accuracy() {
        for eps in [0.0, 0.1, 0.5, 0.9, 0.99] {
            let law = TimeLaw::new(eps, 0.37).unwrap();
            let t_period = law.period();
            for k in -40..=40 {
                let t = k as f64 * 0.0731 * t_period;
                let theta = law.angle_from_time(t);
                let back = law.time_from_angle(theta);
                assert!((back - t).abs() < 1e-10 * t_period.max(1.0), "eps={eps} t={t}");
            }
        }
    }

    #[test]
    fn speed_examples() {
        let flat = SpeedProfile::new(0.0, 1.0).unwrap();
        for theta in [0.0, 1.0, 4.0] {
            assert_eq!(speed_from_angle(theta, &flat), 1.0);
        }
        let profile = SpeedProfile::new(0.5, 1.0).unwrap();
        let ratio = speed_from_angle(PI, &profile) / speed_from_angle(0.0, &profile);
        assert!((ratio - 3.0).abs() < 1e-14);
        assert!(SpeedProfile::new(0.5, -1.0).is_err());
    }

    #[test]
    fn speed_u_form_examples() {
        let mut el = apoapsis_elements(1.0, 0.0, 1.0);
        let c2p2 = el.areal * el.areal / (el.p * el.p);
        for theta in [0.0, 2.0, 5.0] {
            assert!(rel(speed_u_form_check(theta, &el), c2p2) < 1e-14);
        }
        el.p = 1.0;
        el.eps = 0.3;
        el.areal = 1.0;
        assert!(rel(speed_u_form_check(FRAC_PI_2, &el), 0.09 + 1.0) < 1e-15);
    }

    #[test]
    fn acceleration_examples() {
        let el = apoapsis_elements(1.0, 0.0, 1.0);
        let acc = acceleration_from_angle(0.0, &el);
        assert!((acc.x + 1.0).abs() < 1e-15 && acc.y.abs() < 1e-15);

        let el = apoapsis_elements(3.0, 0.6, 2.0);
        for theta in [0.0, 0.9, 2.0, 3.1, 4.4] {
            let r = crate::geom::polar_radius(el.p, el.eps, theta);
            let acc = acceleration_from_angle(theta, &el);
            assert!(rel(acc.norm(), el.mu / (r * r)) < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn fundamental_theorem(theta in -12.0f64..12.0, eps in 0.0f64..0.95) {
            let d = 1e-6;
            let fd = (antiderivative_continuous(theta + d, eps)
                - antiderivative_continuous(theta - d, eps)) / (2.0 * d);
            prop_assert!((fd - theta_density(theta, eps)).abs() < 1e-6);
        }

        #[test]
        fn fundamental_theorem_near_pole(offset in -1e-3f64..1e-3, eps in 0.0f64..0.95) {
            let theta = PI + offset;
            let d = 1e-6;
            let fd = (antiderivative_continuous(theta + d, eps)
                - antiderivative_continuous(theta - d, eps)) / (2.0 * d);
            prop_assert!((fd - theta_density(theta, eps)).abs() < 1e-6);
        }

        #[test]
        fn revolution_adds_constant_area(theta in -20.0f64..20.0, eps in 0.0f64..0.95) {
            let step = antiderivative_continuous(theta + TAU, eps) - antiderivative_continuous(theta, eps);
            prop_assert!((step - period_integral(eps)).abs() < 1e-11 * period_integral(eps).max(1.0) * 10.0);
        }

        #[test]
        fn round_trip_on_two_revolutions(theta in 0.0f64..(4.0 * PI), eps in 0.0f64..0.95) {
            let law = TimeLaw::new(eps, 1.0).unwrap();
            let back = law.angle_from_time(law.time_from_angle(theta));
            prop_assert!((back - theta).abs() < 1e-9);
        }

        #[test]
        fn u_form_matches_polar_speed(theta in -7.0f64..7.0, a in 0.5f64..10.0, eps in 0.0f64..0.95) {
            let el = apoapsis_elements(a, eps, 1.0);
            // chain rule: r' = dr/dtheta * theta', speed^2 = r'^2 + r^2 theta'^2
            let d = 1.0 - eps * theta.cos();
            let r = el.p / d;
            let dr_dtheta = -el.p * eps * theta.sin() / (d * d);
            let rate = theta_rate(theta, eps, el.areal, el.p);
            let polar = (dr_dtheta * rate).powi(2) + (r * rate).powi(2);
            let u_form = speed_u_form_check(theta, &el);
            let profile = SpeedProfile::from_elements(&el).unwrap();
            prop_assert!(rel(u_form, polar) < 1e-10);
            prop_assert!(rel(u_form, speed_from_angle(theta, &profile).powi(2)) < 1e-10);
        }
    }
}
