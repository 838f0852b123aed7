//! Compiles `tests/c/smoke.c` against the generated header and the static
//! library, then runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

fn static_lib() -> Option<PathBuf> {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    [profile_dir.join("libkepler_ffi.a"), profile_dir.join("deps").join("libkepler_ffi.a")]
        .into_iter()
        .find(|p| p.exists())
}

#[test]
fn c_program_links_and_runs() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = crate_dir.join("include").join("kepler.h");
    assert!(header.exists(), "header not generated");

    let Some(lib) = static_lib() else {
        panic!("libkepler_ffi.a not found next to the test binary");
    };
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c11")
        .arg("-D_DEFAULT_SOURCE")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests").join("c").join("smoke.c"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("failed to run cc");
    assert!(status.success(), "C compile failed");

    let output = Command::new(&exe).output().unwrap();
    assert!(
        output.status.success(),
        "smoke test failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&output.stdout).trim(), "ok");
}
