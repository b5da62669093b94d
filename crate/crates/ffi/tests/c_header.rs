//! Compile and run a C program against the generated header and the static
//! library.

use std::path::{Path, PathBuf};
use std::process::Command;

const HEADER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/include/zblab.h");

const FUNCTIONS: [&str; 17] = [
    "zblab_version",
    "zblab_last_error",
    "zblab_spinors",
    "zblab_polarization",
    "zblab_pair_spectra",
    "zblab_decomposition_new",
    "zblab_decomposition_dimension",
    "zblab_decomposition_verify",
    "zblab_decomposition_free",
    "zblab_packet_simulate",
    "zblab_trajectory_len",
    "zblab_trajectory_sample",
    "zblab_trajectory_spectrum",
    "zblab_trajectory_write_csv",
    "zblab_trajectory_free",
    "zblab_horizon_validate",
    "zblab_horizon_render",
];

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(HEADER).expect("generated header");
    for f in FUNCTIONS.iter().chain(&["zblab_flat_render"]) {
        assert!(h.contains(&format!("{f}(")), "{f} missing from header");
    }
    for t in [
        "typedef struct ZblabDecomposition ZblabDecomposition;",
        "typedef struct ZblabTrajectory ZblabTrajectory;",
    ] {
        assert!(h.contains(t), "opaque handle {t}");
    }
    assert!(h.contains("ZBLAB_STATUS_OK = 0"));
}

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let deps = exe.parent()?;
    [deps.to_path_buf(), deps.parent()?.to_path_buf()]
        .into_iter()
        .map(|d| d.join("libzblab_ffi.a"))
        .find(|p| p.exists())
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include <stdlib.h>
#include "zblab.h"

#define EXPECT(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, zblab_last_error()); return 1; } } while (0)

int main(void) {
    double k[3] = {0.0, 0.0, 0.0};
    ZblabSpinorSet set;
    EXPECT(zblab_spinors(k, 1.0, false, &set) == ZBLAB_STATUS_OK);
    EXPECT(set.omega == 1.0 && set.u[0][0].re == 1.0);
    EXPECT(zblab_spinors(k, 0.0, false, &set) == ZBLAB_STATUS_ZERO_ENERGY_MODE);
    EXPECT(strlen(zblab_last_error()) > 0);

    ZblabDecomposition *d = NULL;
    EXPECT(zblab_decomposition_new(1.0, 1.0, 1, true, &d) == ZBLAB_STATUS_OK);
    double times[2] = {0.0, 0.9};
    ZblabDecompositionResult r;
    EXPECT(zblab_decomposition_verify(d, times, 2, 1e-10, &r) == ZBLAB_STATUS_OK);
    EXPECT(r.reading == ZBLAB_READING_RELABELED);
    zblab_decomposition_free(d);

    ZblabScenario s = {1.0, 0.6, 2.0, 0.3, 10.0};
    uint32_t mask = 99; int32_t variant = 99;
    EXPECT(zblab_horizon_validate(&s, &mask, &variant) == ZBLAB_STATUS_OK);
    EXPECT(mask == 0 && variant == ZBLAB_VARIANT_R2_INSIDE_R);
    size_t needed = 0;
    EXPECT(zblab_horizon_render(&s, ZBLAB_FORMAT_SVG, NULL, 0, &needed) == ZBLAB_STATUS_BUFFER_TOO_SMALL);
    char *buf = malloc(needed);
    EXPECT(zblab_horizon_render(&s, ZBLAB_FORMAT_SVG, buf, needed, &needed) == ZBLAB_STATUS_OK);
    EXPECT(strstr(buf, "stroke-dasharray") != NULL);
    free(buf);
    printf("ok %s\n", zblab_version());
    return 0;
}
"#;

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc)
        .arg("--version")
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|_| cc)
}

fn run(cmd: &mut Command) -> std::process::Output {
    let out = cmd.output().expect("spawn");
    assert!(
        out.status.success(),
        "{:?} failed:\n{}{}",
        cmd,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn c_program_links_and_runs() {
    let (Some(lib), Some(cc)) = (static_lib(), compiler()) else {
        eprintln!("skipping: static library or C compiler not available");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let exe = dir.path().join("smoke");
    let include = Path::new(HEADER).parent().unwrap();
    run(Command::new(cc)
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(include)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"]));
    let out = run(&mut Command::new(&exe));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
