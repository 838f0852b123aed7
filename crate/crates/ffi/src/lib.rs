//! C ABI for `kepler-core`.
//!
//! Every fallible function returns a [`KeplerStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can be
//! read with [`kepler_last_error_message`]. Time laws and trajectories are
//! opaque handles that must be released with their `_free` function.
//!
//! The header `include/kepler.h` is regenerated by the build script.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::OnceLock;

use kepler_core::analytic::{self, TimeLaw};
use kepler_core::dynamics::{
    self, BodyState, OrbitElements, OrbitalPlane, Sense, Trajectory,
};
use kepler_core::geom::{self, EllipseGeometry, Vec2, Vec3};
use kepler_core::solardata;
use kepler_core::KeplerError;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeplerStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    DegenerateCurvature = 3,
    Singularity = 4,
    DegenerateOrbit = 5,
    UnboundOrbit = 6,
    Pole = 7,
    OutOfRange = 8,
    Io = 9,
    Panic = 10,
}

impl From<&KeplerError> for KeplerStatus {
    fn from(e: &KeplerError) -> Self {
        match e {
            KeplerError::Domain(_) => KeplerStatus::Domain,
            KeplerError::DegenerateCurvature => KeplerStatus::DegenerateCurvature,
            KeplerError::Singularity { .. } => KeplerStatus::Singularity,
            KeplerError::DegenerateOrbit => KeplerStatus::DegenerateOrbit,
            KeplerError::UnboundOrbit { .. } => KeplerStatus::UnboundOrbit,
            KeplerError::Pole { .. } => KeplerStatus::Pole,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KeplerVec2 {
    pub x: f64,
    pub y: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KeplerVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KeplerState {
    pub pos: KeplerVec3,
    pub vel: KeplerVec3,
    pub t: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KeplerEllipse {
    pub a: f64,
    pub b: f64,
    pub f: f64,
    pub eps: f64,
    pub p: f64,
}

/// Plane constants `(A, B, C)`, energy `h` and `mu` of one state.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KeplerFirstIntegrals {
    pub angular: KeplerVec3,
    pub energy: f64,
    pub mu: f64,
}

/// Conic elements; `sense` is +1 for counter-clockwise, -1 for clockwise
/// motion about `normal`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KeplerElements {
    pub p: f64,
    pub eps: f64,
    pub phase: f64,
    pub mu: f64,
    pub areal: f64,
    pub energy: f64,
    pub sense: i32,
    pub normal: KeplerVec3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct KeplerPlanet {
    /// NUL-terminated, static lifetime.
    pub name: *const c_char,
    pub eps: f64,
}

/// Opaque time-law handle.
pub struct KeplerTimeLaw {
    law: TimeLaw,
}

/// Opaque trajectory handle.
pub struct KeplerTrajectory {
    traj: Trajectory,
    mu: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(e: KeplerError) -> KeplerStatus {
    let status = KeplerStatus::from(&e);
    set_error(e.to_string());
    status
}

fn null(what: &str) -> KeplerStatus {
    set_error(format!("null pointer: {what}"));
    KeplerStatus::NullPointer
}

/// Runs `body`, turning panics into [`KeplerStatus::Panic`].
fn guard<F: FnOnce() -> KeplerStatus>(body: F) -> KeplerStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".into());
            KeplerStatus::Panic
        }
    }
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> KeplerStatus {
    if out.is_null() {
        return null(what);
    }
    out.write(value);
    KeplerStatus::Ok
}

impl From<KeplerVec2> for Vec2 {
    fn from(v: KeplerVec2) -> Self {
        Vec2::new(v.x, v.y)
    }
}

impl From<KeplerVec3> for Vec3 {
    fn from(v: KeplerVec3) -> Self {
        Vec3::new(v.x, v.y, v.z)
    }
}

impl From<Vec3> for KeplerVec3 {
    fn from(v: Vec3) -> Self {
        KeplerVec3 { x: v.x, y: v.y, z: v.z }
    }
}

impl From<&BodyState> for KeplerState {
    fn from(s: &BodyState) -> Self {
        KeplerState { pos: s.pos.into(), vel: s.vel.into(), t: s.t }
    }
}

impl From<EllipseGeometry> for KeplerEllipse {
    fn from(g: EllipseGeometry) -> Self {
        KeplerEllipse { a: g.a(), b: g.b(), f: g.f(), eps: g.eps(), p: g.p() }
    }
}

impl From<&OrbitElements> for KeplerElements {
    fn from(el: &OrbitElements) -> Self {
        KeplerElements {
            p: el.p,
            eps: el.eps,
            phase: el.phase,
            mu: el.mu,
            areal: el.areal,
            energy: el.energy,
            sense: el.sense.signum() as i32,
            normal: el.plane.normal.into(),
        }
    }
}

fn elements_from_c(el: &KeplerElements) -> Result<OrbitElements, KeplerError> {
    Ok(OrbitElements {
        p: el.p,
        eps: el.eps,
        phase: el.phase,
        mu: el.mu,
        areal: el.areal,
        energy: el.energy,
        sense: if el.sense < 0 { Sense::Clockwise } else { Sense::CounterClockwise },
        plane: OrbitalPlane::from_normal(el.normal.into())?,
    })
}

fn state_from_c(s: &KeplerState) -> Result<BodyState, KeplerError> {
    BodyState::new(s.pos.into(), s.vel.into(), s.t)
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn kepler_status_name(status: KeplerStatus) -> *const c_char {
    let name: &'static CStr = match status {
        KeplerStatus::Ok => c"ok",
        KeplerStatus::NullPointer => c"null pointer",
        KeplerStatus::Domain => c"domain error",
        KeplerStatus::DegenerateCurvature => c"degenerate curvature",
        KeplerStatus::Singularity => c"singularity",
        KeplerStatus::DegenerateOrbit => c"degenerate orbit",
        KeplerStatus::UnboundOrbit => c"unbound orbit",
        KeplerStatus::Pole => c"pole",
        KeplerStatus::OutOfRange => c"index out of range",
        KeplerStatus::Io => c"i/o error",
        KeplerStatus::Panic => c"panic",
    };
    name.as_ptr()
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length including the NUL, or
/// 0 when no error has been recorded.
#[no_mangle]
pub unsafe extern "C" fn kepler_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let slot = slot.borrow();
        let Some(msg) = slot.as_ref() else { return 0 };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

// ---- geometry ----

#[no_mangle]
pub unsafe extern "C" fn kepler_ellipse_from_axes(a: f64, b: f64, out: *mut KeplerEllipse) -> KeplerStatus {
    guard(|| match EllipseGeometry::from_axes(a, b) {
        Ok(g) => write_out(out, g.into(), "out"),
        Err(e) => fail(e),
    })
}

#[no_mangle]
pub unsafe extern "C" fn kepler_ellipse_from_conic(p: f64, eps: f64, out: *mut KeplerEllipse) -> KeplerStatus {
    guard(|| match EllipseGeometry::from_conic(p, eps) {
        Ok(g) => write_out(out, g.into(), "out"),
        Err(e) => fail(e),
    })
}

#[no_mangle]
pub extern "C" fn kepler_polar_radius(p: f64, eps: f64, theta: f64) -> f64 {
    geom::polar_radius(p, eps, theta)
}

#[no_mangle]
pub extern "C" fn kepler_cross_z(u: KeplerVec2, v: KeplerVec2) -> f64 {
    geom::cross_z(u.into(), v.into())
}

#[no_mangle]
pub extern "C" fn kepler_cross3(u: KeplerVec3, v: KeplerVec3) -> KeplerVec3 {
    geom::cross3(u.into(), v.into()).into()
}

#[no_mangle]
pub unsafe extern "C" fn kepler_curvature_radius(v: KeplerVec2, acc: KeplerVec2, out: *mut f64) -> KeplerStatus {
    guard(|| match geom::curvature_radius(v.into(), acc.into()) {
        Ok(r) => write_out(out, r, "out"),
        Err(e) => fail(e),
    })
}

// ---- dynamics ----

#[no_mangle]
pub unsafe extern "C" fn kepler_gravity_accel(pos: KeplerVec3, mu: f64, out: *mut KeplerVec3) -> KeplerStatus {
    guard(|| match dynamics::gravity_accel(pos.into(), mu) {
        Ok(a) => write_out(out, a.into(), "out"),
        Err(e) => fail(e),
    })
}

#[no_mangle]
pub unsafe extern "C" fn kepler_first_integrals(
    state: *const KeplerState,
    mu: f64,
    out: *mut KeplerFirstIntegrals,
) -> KeplerStatus {
    guard(|| {
        let Some(state) = state.as_ref() else { return null("state") };
        match state_from_c(state) {
            Ok(s) => {
                let fi = dynamics::first_integrals(&s, mu);
                let value = KeplerFirstIntegrals { angular: fi.angular.into(), energy: fi.energy, mu };
                write_out(out, value, "out")
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn kepler_elements_from_state(
    state: *const KeplerState,
    mu: f64,
    out: *mut KeplerElements,
) -> KeplerStatus {
    guard(|| {
        let Some(state) = state.as_ref() else { return null("state") };
        match state_from_c(state).and_then(|s| dynamics::elements_from_state(&s, mu)) {
            Ok(el) => write_out(out, (&el).into(), "out"),
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn kepler_period(elements: *const KeplerElements, out: *mut f64) -> KeplerStatus {
    guard(|| {
        let Some(el) = elements.as_ref() else { return null("elements") };
        match elements_from_c(el).and_then(|el| dynamics::period(&el)) {
            Ok(t) => write_out(out, t, "out"),
            Err(e) => fail(e),
        }
    })
}

/// Integrates `steps` RK4 steps; on success `*out` owns a new trajectory.
#[no_mangle]
pub unsafe extern "C" fn kepler_propagate(
    state: *const KeplerState,
    mu: f64,
    dt: f64,
    steps: usize,
    out: *mut *mut KeplerTrajectory,
) -> KeplerStatus {
    guard(|| {
        let Some(state) = state.as_ref() else { return null("state") };
        if out.is_null() {
            return null("out");
        }
        match state_from_c(state).and_then(|s| dynamics::propagate(&s, mu, dt, steps)) {
            Ok(traj) => {
                out.write(Box::into_raw(Box::new(KeplerTrajectory { traj, mu })));
                KeplerStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn kepler_trajectory_len(traj: *const KeplerTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.traj.len())
}

#[no_mangle]
pub unsafe extern "C" fn kepler_trajectory_state(
    traj: *const KeplerTrajectory,
    index: usize,
    out: *mut KeplerState,
) -> KeplerStatus {
    guard(|| {
        let Some(t) = traj.as_ref() else { return null("trajectory") };
        match t.traj.states().get(index) {
            Some(s) => write_out(out, s.into(), "out"),
            None => {
                set_error(format!("index {index} out of range (len {})", t.traj.len()));
                KeplerStatus::OutOfRange
            }
        }
    })
}

/// Worst relative drift of `(A, B, C, h)` along the trajectory, written to `out[0..4]`.
#[no_mangle]
pub unsafe extern "C" fn kepler_trajectory_max_drift(traj: *const KeplerTrajectory, out: *mut f64) -> KeplerStatus {
    guard(|| {
        let Some(t) = traj.as_ref() else { return null("trajectory") };
        if out.is_null() {
            return null("out");
        }
        let drift = t.traj.max_drift(t.mu);
        ptr::copy_nonoverlapping(drift.as_ptr(), out, 4);
        KeplerStatus::Ok
    })
}

/// Plane residual of the trajectory against the plane of its first state.
#[no_mangle]
pub unsafe extern "C" fn kepler_trajectory_plane_residual(
    traj: *const KeplerTrajectory,
    out: *mut f64,
) -> KeplerStatus {
    guard(|| {
        let Some(t) = traj.as_ref() else { return null("trajectory") };
        let fi = dynamics::first_integrals(t.traj.first(), t.mu);
        match dynamics::plane_residual(&t.traj, &fi) {
            Ok(r) => write_out(out, r, "out"),
            Err(e) => fail(e),
        }
    })
}

/// Writes the trajectory CSV (`t,x,y,z,vx,vy,vz,A,B,C,h`) to `path`.
#[no_mangle]
pub unsafe extern "C" fn kepler_trajectory_write_csv(
    traj: *const KeplerTrajectory,
    path: *const c_char,
) -> KeplerStatus {
    guard(|| {
        let Some(t) = traj.as_ref() else { return null("trajectory") };
        if path.is_null() {
            return null("path");
        }
        let Ok(path) = CStr::from_ptr(path).to_str() else {
            set_error("path is not valid UTF-8".into());
            return KeplerStatus::Io;
        };
        let result = File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            t.traj.write_csv(t.mu, &mut w)?;
            w.flush()
        });
        match result {
            Ok(()) => KeplerStatus::Ok,
            Err(e) => {
                set_error(format!("cannot write {path}: {e}"));
                KeplerStatus::Io
            }
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn kepler_trajectory_free(traj: *mut KeplerTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

// ---- analytic ----

#[no_mangle]
pub extern "C" fn kepler_theta_density(theta: f64, eps: f64) -> f64 {
    analytic::theta_density(theta, eps)
}

/// Continuous time-law integral `I(theta)`; NaN when `eps` is outside `[0, 1)`.
#[no_mangle]
pub extern "C" fn kepler_antiderivative(theta: f64, eps: f64) -> f64 {
    analytic::antiderivative_continuous(theta, eps)
}

#[no_mangle]
pub unsafe extern "C" fn kepler_antiderivative_raw(theta: f64, eps: f64, out: *mut f64) -> KeplerStatus {
    guard(|| match analytic::antiderivative_raw(theta, eps) {
        Ok(v) => write_out(out, v, "out"),
        Err(e) => fail(e),
    })
}

#[no_mangle]
pub extern "C" fn kepler_quadrature(theta: f64, eps: f64) -> f64 {
    analytic::quadrature_oracle(theta, eps)
}

#[no_mangle]
pub unsafe extern "C" fn kepler_time_law_new(eps: f64, rate: f64, out: *mut *mut KeplerTimeLaw) -> KeplerStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        match TimeLaw::new(eps, rate) {
            Ok(law) => {
                out.write(Box::into_raw(Box::new(KeplerTimeLaw { law })));
                KeplerStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn kepler_time_law_from_elements(
    elements: *const KeplerElements,
    out: *mut *mut KeplerTimeLaw,
) -> KeplerStatus {
    guard(|| {
        let Some(el) = elements.as_ref() else { return null("elements") };
        if out.is_null() {
            return null("out");
        }
        match elements_from_c(el).and_then(|el| TimeLaw::from_elements(&el)) {
            Ok(law) => {
                out.write(Box::into_raw(Box::new(KeplerTimeLaw { law })));
                KeplerStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Returns NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn kepler_time_law_period(law: *const KeplerTimeLaw) -> f64 {
    law.as_ref().map_or(f64::NAN, |l| l.law.period())
}

/// Returns NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn kepler_time_from_angle(law: *const KeplerTimeLaw, theta: f64) -> f64 {
    law.as_ref().map_or(f64::NAN, |l| l.law.time_from_angle(theta))
}

/// Returns NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn kepler_angle_from_time(law: *const KeplerTimeLaw, t: f64) -> f64 {
    law.as_ref().map_or(f64::NAN, |l| l.law.angle_from_time(t))
}

#[no_mangle]
pub unsafe extern "C" fn kepler_time_law_free(law: *mut KeplerTimeLaw) {
    if !law.is_null() {
        drop(Box::from_raw(law));
    }
}

#[no_mangle]
pub unsafe extern "C" fn kepler_speed_from_angle(theta: f64, eps: f64, scale: f64, out: *mut f64) -> KeplerStatus {
    guard(|| match analytic::SpeedProfile::new(eps, scale) {
        Ok(profile) => write_out(out, analytic::speed_from_angle(theta, &profile), "out"),
        Err(e) => fail(e),
    })
}

// ---- planet table ----

fn planet_names() -> &'static [CString] {
    static NAMES: OnceLock<Vec<CString>> = OnceLock::new();
    NAMES.get_or_init(|| {
        solardata::load_planets()
            .iter()
            .map(|p| CString::new(p.name).expect("planet names have no NUL"))
            .collect()
    })
}

#[no_mangle]
pub extern "C" fn kepler_planet_count() -> usize {
    solardata::load_planets().len()
}

#[no_mangle]
pub unsafe extern "C" fn kepler_planet(index: usize, out: *mut KeplerPlanet) -> KeplerStatus {
    guard(|| {
        let planets = solardata::load_planets();
        let Some(p) = planets.get(index) else {
            set_error(format!("planet index {index} out of range"));
            return KeplerStatus::OutOfRange;
        };
        let value = KeplerPlanet { name: planet_names()[index].as_ptr(), eps: p.eps };
        write_out(out, value, "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn kepler_planet_speed_ratio(index: usize, out: *mut f64) -> KeplerStatus {
    guard(|| match solardata::load_planets().get(index) {
        Some(p) => write_out(out, solardata::planet_speed_ratio(p), "out"),
        None => {
            set_error(format!("planet index {index} out of range"));
            KeplerStatus::OutOfRange
        }
    })
}
