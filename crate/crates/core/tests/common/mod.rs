#![allow(dead_code)]

use std::collections::BTreeMap;
use std::ffi::OsStr;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mdframe::funcmodel::{Domain, FuncExpr};
use num_complex::Complex64;

/// Prints one verdict line and returns whether it passed.
pub fn verdict(id: &str, what: &str, pass: bool, detail: String) -> bool {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {what} -- {detail}");
    pass
}

pub fn chi_half(b: f64) -> FuncExpr {
    FuncExpr::char_interval(Domain::PositiveHalfLine, 1.0, b).unwrap()
}

/// Gaussian bump on the half-line, negligible (< 1e-12) at the origin.
pub fn smooth_half() -> FuncExpr {
    FuncExpr::gaussian(Domain::PositiveHalfLine, 1.5, 0.5).unwrap()
}

pub fn normalized_gaussian() -> FuncExpr {
    FuncExpr::gaussian(Domain::RealLine, 0.0, 1.0)
        .unwrap()
        .scale(Complex64::new(2f64.powf(0.25), 0.0))
        .unwrap()
}

/// Points in `[lo, hi]` at least `1e-9` away from every integer.
pub fn off_breakpoints(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64 + 1.234e-4)
        .filter(|x| (x - x.round()).abs() > 1e-9)
        .collect()
}

pub fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// Every golden config with the subcommand that consumes it.
pub const GOLDEN: [(&str, &str); 11] = [
    ("generators", "generators_critical.json"),
    ("generators", "generators_two_windows.json"),
    ("generators", "generators_six_windows.json"),
    ("verify", "verify_chi.json"),
    ("verify", "verify_gaussian.json"),
    ("verify", "verify_dropped_phase.json"),
    ("frame-bounds", "frame_gabor_orthonormal.json"),
    ("frame-bounds", "frame_md_orthonormal.json"),
    ("frame-bounds", "frame_gabor_undersampled.json"),
    ("density-scan", "density_scan.json"),
    ("uncertainty", "uncertainty.json"),
];

pub fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub fn mdframe(args: &[&OsStr]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdframe"))
        .args(args)
        .output()
        .expect("spawn mdframe")
}

/// Runs a config-driven subcommand into `out`.
pub fn run_config(cmd: &str, config: &Path, out: &Path, threads: usize, extra: &[&str]) -> Output {
    let threads = threads.to_string();
    let mut args: Vec<&OsStr> = vec![
        OsStr::new("--threads"),
        OsStr::new(&threads),
        OsStr::new(cmd),
        OsStr::new("--config"),
        config.as_os_str(),
        OsStr::new("--out"),
        out.as_os_str(),
    ];
    args.extend(extra.iter().map(OsStr::new));
    mdframe(&args)
}

/// File name to contents for every file in `dir`, sorted by name.
pub fn dir_contents(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}
