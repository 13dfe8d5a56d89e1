use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use virateich_ffi::*;

const N: usize = 64;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    unsafe {
        vt_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn grid() -> Vec<f64> {
    (0..N).map(|k| k as f64 / N as f64).collect()
}

#[test]
fn periodic_roundtrip_and_derivative() {
    let tau = 2.0 * std::f64::consts::PI;
    let values: Vec<f64> = grid().iter().map(|x| (tau * x).sin()).collect();
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(vt_periodic_new(values.as_ptr(), N, 0, &mut f), VtStatus::Ok);
        assert_eq!(vt_periodic_len(f), N);
        let mut d = ptr::null_mut();
        assert_eq!(vt_periodic_derivative(f, 1, &mut d), VtStatus::Ok);
        let mut out = vec![0.0; N];
        assert_eq!(vt_periodic_values(d, out.as_mut_ptr(), N), VtStatus::Ok);
        for (x, v) in grid().iter().zip(&out) {
            assert!((v - tau * (tau * x).cos()).abs() < 1e-11);
        }
        let mut short = [0.0; 4];
        assert_eq!(vt_periodic_values(d, short.as_mut_ptr(), 4), VtStatus::BufferTooSmall);
        let mut integral = 1.0;
        assert_eq!(vt_periodic_integral(f, &mut integral), VtStatus::Ok);
        assert!(integral.abs() < 1e-15);
        vt_periodic_free(d);
        vt_periodic_free(f);
    }
}

#[test]
fn invalid_inputs_map_to_codes() {
    unsafe {
        let mut f = ptr::null_mut();
        let v = [0.0; 10];
        assert_eq!(vt_periodic_new(v.as_ptr(), 10, 0, &mut f), VtStatus::InvalidInput);
        assert!(f.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(vt_periodic_new(ptr::null(), 16, 0, &mut f), VtStatus::NullPointer);
        assert_eq!(vt_periodic_len(ptr::null()), 0);

        let steep: Vec<f64> = grid().iter().map(|x| -2.0 * x).collect();
        let mut d = ptr::null_mut();
        assert_eq!(vt_diffeo_new(steep.as_ptr(), N, 0, &mut d), VtStatus::Precondition);
        let name = CStr::from_ptr(vt_status_str(VtStatus::Precondition));
        assert_eq!(name.to_str().unwrap(), "precondition violated");
    }
}

#[test]
fn diffeo_group_operations() {
    let tau = 2.0 * std::f64::consts::PI;
    let phi: Vec<f64> = grid().iter().map(|x| 0.1 * (tau * x).sin()).collect();
    unsafe {
        let (mut f, mut g, mut fg) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(vt_diffeo_new(phi.as_ptr(), N, 0, &mut f), VtStatus::Ok);
        assert_eq!(vt_diffeo_invert(f, &mut g), VtStatus::Ok);
        assert_eq!(vt_diffeo_compose(f, g, &mut fg), VtStatus::Ok);
        let mut disp = vec![1.0; N];
        assert_eq!(vt_diffeo_displacement(fg, disp.as_mut_ptr(), N), VtStatus::Ok);
        assert!(disp.iter().all(|v| v.abs() < 1e-10));

        let (mut rot, mut s) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(vt_diffeo_rotation(N, 0.3, &mut rot), VtStatus::Ok);
        assert_eq!(vt_diffeo_schwarzian(rot, &mut s), VtStatus::Ok);
        let mut sv = vec![1.0; N];
        vt_periodic_values(s, sv.as_mut_ptr(), N);
        assert!(sv.iter().all(|v| v.abs() < 1e-12));

        let t = vec![-1.0; N];
        let (mut pot, mut moved) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(vt_potential_new(t.as_ptr(), N, &mut pot), VtStatus::Ok);
        assert_eq!(vt_potential_act(rot, pot, &mut moved), VtStatus::Ok);
        let mut mv = vec![0.0; N];
        vt_potential_values(moved, mv.as_mut_ptr(), N);
        assert!(mv.iter().all(|v| (v + 1.0).abs() < 1e-12));

        for p in [f, g, fg, rot] {
            vt_diffeo_free(p);
        }
        vt_periodic_free(s);
        vt_potential_free(pot);
        vt_potential_free(moved);
    }
}

#[test]
fn connection_routes_agree() {
    let tau = 2.0 * std::f64::consts::PI;
    let a: Vec<f64> = grid().iter().map(|x| (0.3 * (tau * x).cos()).exp()).collect();
    let s: Vec<f64> = grid().iter().map(|x| 0.2 * (tau * x).sin()).collect();
    let u = vec![0.1; N];
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(vt_connection_new(a.as_ptr(), s.as_ptr(), u.as_ptr(), N, &mut c), VtStatus::Ok);
        let (mut t1, mut t2) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(vt_hill_from_asu(c, &mut t1), VtStatus::Ok);
        assert_eq!(vt_ds_normalize(c, &mut t2), VtStatus::Ok);
        let (mut v1, mut v2) = (vec![0.0; N], vec![0.0; N]);
        vt_potential_values(t1, v1.as_mut_ptr(), N);
        vt_potential_values(t2, v2.as_mut_ptr(), N);
        assert!(v1.iter().zip(&v2).all(|(x, y)| (x - y).abs() < 1e-8));
        let mut m = [0.0; 4];
        let mut tr = 0.0;
        assert_eq!(vt_potential_monodromy(t1, m.as_mut_ptr(), &mut tr, ptr::null_mut()), VtStatus::Ok);
        assert!((m[0] * m[3] - m[1] * m[2] - 1.0).abs() < 1e-8);
        assert!((m[0] + m[3] - tr).abs() < 1e-14);
        vt_potential_free(t1);
        vt_potential_free(t2);
        vt_connection_free(c);
    }
}

#[test]
fn trumpet_form_pairs_length_and_rotation() {
    unsafe {
        let mut id = ptr::null_mut();
        assert_eq!(vt_diffeo_rotation(N, 0.0, &mut id), VtStatus::Ok);
        let (zero, one) = (vec![0.0; N], vec![1.0; N]);
        let mut w = 0.0;
        assert_eq!(vt_trumpet_omega(1.4, id, 1.0, zero.as_ptr(), 0.0, one.as_ptr(), &mut w), VtStatus::Ok);
        assert!((w + 0.7).abs() < 1e-14);
        assert_eq!(vt_trumpet_omega(-1.0, id, 1.0, zero.as_ptr(), 0.0, one.as_ptr(), &mut w), VtStatus::InvalidInput);
        vt_diffeo_free(id);
    }
}

#[test]
fn verify_returns_json_report() {
    let suite = CString::new("groupoid").unwrap();
    unsafe {
        let mut json = ptr::null_mut();
        let mut passed = 0;
        assert_eq!(vt_verify(suite.as_ptr(), 64, 2, 7, &mut json, &mut passed), VtStatus::Ok);
        assert_eq!(passed, 1);
        let text = CStr::from_ptr(json).to_str().unwrap();
        assert!(text.contains("\"suite\": \"groupoid\""));
        vt_string_free(json);
        let bad = CString::new("nope").unwrap();
        assert_eq!(vt_verify(bad.as_ptr(), 64, 2, 7, &mut json, &mut passed), VtStatus::InvalidInput);
        assert_eq!(vt_verify(suite.as_ptr(), 100, 2, 7, &mut json, &mut passed), VtStatus::InvalidInput);
    }
}

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libvirateich_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_against_header() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = static_lib().expect("static library is built alongside the tests");
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
