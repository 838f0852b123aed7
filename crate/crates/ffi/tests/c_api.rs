use std::ffi::{c_char, CStr};
use std::f64::consts::{PI, TAU};
use std::ptr;

use kepler_ffi::*;

fn apoapsis(a: f64, eps: f64) -> KeplerState {
    let r = a * (1.0 + eps);
    let v = (2.0 / r - 1.0 / a).sqrt();
    KeplerState {
        pos: KeplerVec3 { x: r, y: 0.0, z: 0.0 },
        vel: KeplerVec3 { x: 0.0, y: v, z: 0.0 },
        t: 0.0,
    }
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let n = unsafe { kepler_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn ellipse_and_errors() {
    let mut g = KeplerEllipse::default();
    let status = unsafe { kepler_ellipse_from_axes(5.0, 3.0, &mut g) };
    assert_eq!(status, KeplerStatus::Ok);
    assert_eq!(g.f, 4.0);

    let status = unsafe { kepler_ellipse_from_conic(1.8, 1.2, &mut g) };
    assert_eq!(status, KeplerStatus::Domain);
    assert!(last_error().contains("eccentricity"));

    let status = unsafe { kepler_ellipse_from_axes(5.0, 3.0, ptr::null_mut()) };
    assert_eq!(status, KeplerStatus::NullPointer);

    let name = unsafe { CStr::from_ptr(kepler_status_name(KeplerStatus::UnboundOrbit)) };
    assert_eq!(name.to_str().unwrap(), "unbound orbit");
}

#[test]
fn error_message_truncates() {
    let mut g = KeplerEllipse::default();
    unsafe { kepler_ellipse_from_axes(1.0, 2.0, &mut g) };
    let mut buf = [1 as c_char; 4];
    let full = unsafe { kepler_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(full > 4);
    assert_eq!(buf[3], 0);
}

#[test]
fn geometry_values() {
    let k = kepler_cross3(KeplerVec3 { x: 1.0, y: 0.0, z: 0.0 }, KeplerVec3 { x: 0.0, y: 1.0, z: 0.0 });
    assert_eq!(k, KeplerVec3 { x: 0.0, y: 0.0, z: 1.0 });
    assert_eq!(kepler_cross_z(KeplerVec2 { x: 3.0, y: 1.0 }, KeplerVec2 { x: 1.0, y: 2.0 }), 5.0);
    assert!((kepler_polar_radius(1.8, 0.8, 0.0) - 9.0).abs() < 1e-12);

    let mut r = 0.0;
    let v = KeplerVec2 { x: 0.0, y: 1.0 };
    let status = unsafe { kepler_curvature_radius(v, KeplerVec2 { x: -1.0, y: 0.0 }, &mut r) };
    assert_eq!((status, r), (KeplerStatus::Ok, 1.0));
    let status = unsafe { kepler_curvature_radius(v, KeplerVec2 { x: 0.0, y: 2.0 }, &mut r) };
    assert_eq!(status, KeplerStatus::DegenerateCurvature);
}

#[test]
fn elements_period_and_time_law() {
    let s = apoapsis(5.0, 0.8);
    let mut el = KeplerElements::default();
    assert_eq!(unsafe { kepler_elements_from_state(&s, 1.0, &mut el) }, KeplerStatus::Ok);
    assert!((el.eps - 0.8).abs() < 1e-12 && el.sense == 1);

    let mut t = 0.0;
    assert_eq!(unsafe { kepler_period(&el, &mut t) }, KeplerStatus::Ok);
    assert!((t - TAU * 125f64.sqrt()).abs() < 1e-10 * t);

    let mut law = ptr::null_mut();
    assert_eq!(unsafe { kepler_time_law_from_elements(&el, &mut law) }, KeplerStatus::Ok);
    unsafe {
        assert!((kepler_time_law_period(law) - t).abs() < 1e-9 * t);
        assert!((kepler_time_from_angle(law, PI) - 0.5 * t).abs() < 1e-9 * t);
        assert!((kepler_angle_from_time(law, 0.5 * t) - PI).abs() < 1e-12);
        kepler_time_law_free(law);
        assert!(kepler_time_from_angle(ptr::null(), 1.0).is_nan());
        kepler_time_law_free(ptr::null_mut());
    }

    let mut law = ptr::null_mut();
    assert_eq!(unsafe { kepler_time_law_new(1.0, 1.0, &mut law) }, KeplerStatus::Domain);
    assert!(law.is_null());
}

#[test]
fn dynamics_errors_map_to_codes() {
    let mut el = KeplerElements::default();
    let mut radial = apoapsis(1.0, 0.0);
    radial.vel = KeplerVec3 { x: 2.0, y: 0.0, z: 0.0 };
    assert_eq!(unsafe { kepler_elements_from_state(&radial, 1.0, &mut el) }, KeplerStatus::DegenerateOrbit);

    let mut fast = apoapsis(1.0, 0.0);
    fast.vel.y = 2.0;
    assert_eq!(unsafe { kepler_elements_from_state(&fast, 1.0, &mut el) }, KeplerStatus::UnboundOrbit);

    let mut acc = KeplerVec3::default();
    let status = unsafe { kepler_gravity_accel(KeplerVec3::default(), 1.0, &mut acc) };
    assert_eq!(status, KeplerStatus::Singularity);
    assert_eq!(unsafe { kepler_elements_from_state(ptr::null(), 1.0, &mut el) }, KeplerStatus::NullPointer);

    let mut v = 0.0;
    assert_eq!(unsafe { kepler_antiderivative_raw(PI, 0.3, &mut v) }, KeplerStatus::Pole);
}

#[test]
fn trajectory_handle() {
    let s = apoapsis(1.0, 0.3);
    let mut traj = ptr::null_mut();
    let status = unsafe { kepler_propagate(&s, 1.0, 1e-3, 500, &mut traj) };
    assert_eq!(status, KeplerStatus::Ok);
    unsafe {
        assert_eq!(kepler_trajectory_len(traj), 501);
        let mut st = KeplerState::default();
        assert_eq!(kepler_trajectory_state(traj, 500, &mut st), KeplerStatus::Ok);
        assert!((st.t - 0.5).abs() < 1e-12);
        assert_eq!(kepler_trajectory_state(traj, 501, &mut st), KeplerStatus::OutOfRange);

        let mut residual = 1.0;
        assert_eq!(kepler_trajectory_plane_residual(traj, &mut residual), KeplerStatus::Ok);
        assert!(residual < 1e-12);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traj.csv");
        let cpath = std::ffi::CString::new(path.to_str().unwrap()).unwrap();
        assert_eq!(kepler_trajectory_write_csv(traj, cpath.as_ptr()), KeplerStatus::Ok);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), "t,x,y,z,vx,vy,vz,A,B,C,h");
        assert_eq!(text.lines().count(), 502);

        let bad = std::ffi::CString::new("/nonexistent-dir/x.csv").unwrap();
        assert_eq!(kepler_trajectory_write_csv(traj, bad.as_ptr()), KeplerStatus::Io);
        kepler_trajectory_free(traj);
    }
}

#[test]
fn analytic_values() {
    let q = kepler_quadrature(TAU, 0.5);
    assert!((q - TAU / 0.75f64.powf(1.5)).abs() < 1e-10);
    assert!((kepler_antiderivative(TAU, 0.5) - q).abs() < 1e-10);
    assert_eq!(kepler_theta_density(PI, 0.5), 1.0 / 2.25);
    let mut v = 0.0;
    assert_eq!(unsafe { kepler_speed_from_angle(PI, 0.5, 1.0, &mut v) }, KeplerStatus::Ok);
    assert!((v - 1.5).abs() < 1e-15);
}

#[test]
fn planets() {
    assert_eq!(kepler_planet_count(), 8);
    let mut p = KeplerPlanet { name: ptr::null(), eps: 0.0 };
    assert_eq!(unsafe { kepler_planet(7, &mut p) }, KeplerStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(p.name) }.to_str().unwrap(), "Neptune");
    assert_eq!(p.eps, 0.00858587);
    let mut ratio = 0.0;
    assert_eq!(unsafe { kepler_planet_speed_ratio(1, &mut ratio) }, KeplerStatus::Ok);
    assert!((ratio - 1.01364).abs() < 1e-5);
    assert_eq!(unsafe { kepler_planet(8, &mut p) }, KeplerStatus::OutOfRange);
}
