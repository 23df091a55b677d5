#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

use posassoc::fui::SplitMix64;
use posassoc::monotone::{increasing_masks, nonempty_masks};
use posassoc::{IncreasingEvent, TableMeasure};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_posassoc")
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    pub fn json(&self) -> serde_json::Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", self.stdout))
    }
}

pub fn run(args: &[&str]) -> Output {
    run_in(Path::new("."), args)
}

pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    let out = Command::new(bin())
        .args(args)
        .current_dir(dir)
        .env_remove("POSASSOC_WORKERS")
        .output()
        .expect("binary runs");
    Output {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf8 stderr"),
    }
}

/// Up-closed masks of `{0,1}^n` by filtering all `2^(2^n)` subsets.
pub fn brute_force_masks(n: usize) -> Vec<u64> {
    let points = 1u64 << n;
    (0..1u64 << points)
        .filter(|&mask| (0..points).all(|x| mask >> x & 1 == 0 || (0..n).all(|i| mask >> (x | 1 << i) & 1 == 1)))
        .collect()
}

pub fn random_event(rng: &mut SplitMix64, n: usize, nonempty: bool) -> IncreasingEvent {
    let pool = if nonempty { nonempty_masks(n) } else { increasing_masks(n) };
    let mask = pool[rng.below(pool.len() as u64) as usize];
    IncreasingEvent::from_mask(n, mask).unwrap()
}

/// Random full-support table on `{0,1}^n` with integer weights in 1..=8.
pub fn random_table(rng: &mut SplitMix64, n: usize) -> TableMeasure {
    let counts: Vec<u64> = (0..1 << n).map(|_| 1 + rng.below(8)).collect();
    TableMeasure::from_counts(n, &counts).unwrap()
}

/// Rejection-samples a full-support table satisfying the lattice condition.
pub fn random_fkg_table(rng: &mut SplitMix64, n: usize) -> TableMeasure {
    loop {
        let m = random_table(rng, n);
        if m.check_fkg().is_none() {
            return m;
        }
    }
}
