//! Golden cases shared by the CLI tests and the acceptance runner.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub struct Case {
    pub id: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

macro_rules! case {
    ($id:literal, $exit:literal, [$($a:literal),* $(,)?]) => {
        Case { id: $id, args: &[$($a),*], exit: $exit }
    };
}

pub const CASES: &[Case] = &[
    case!(
        "trivial_mult",
        0,
        ["check", "hopffgl", "trivial_mult.fg", "--name", "FF"]
    ),
    case!("trivial_add", 0, ["check", "hopffgl", "trivial_add.fg", "--name", "FF"]),
    case!(
        "trivial_mult_binom",
        0,
        ["check", "hopffgl", "trivial_mult_binom.fg", "--name", "FF"]
    ),
    case!("bperturb", 1, ["check", "hopffgl", "bperturb.fg", "--name", "FF"]),
    case!(
        "unit_perturb_left",
        1,
        ["check", "hopffgl", "unit_perturb.fg", "--name", "Left"]
    ),
    case!(
        "unit_perturb_right",
        1,
        ["check", "hopffgl", "unit_perturb.fg", "--name", "Right"]
    ),
    case!("symmetric", 1, ["check", "hopffgl", "symmetric.fg", "--name", "FF"]),
    case!("skew", 1, ["check", "hopffgl", "skew.fg", "--name", "FF"]),
    case!(
        "binom_extra",
        1,
        ["check", "hopffgl", "multiplicative_binom_extra.fg", "--name", "FF"]
    ),
    case!(
        "binom_extra_skip",
        0,
        [
            "check",
            "hopffgl",
            "multiplicative_binom_extra.fg",
            "--name",
            "FF",
            "--skip",
            "1",
            "--skip",
            "3"
        ]
    ),
    case!("binomial_hopf", 0, ["check", "hopf", "binomial.fg", "--name", "Binom"]),
    case!("bad_antipode", 1, ["check", "hopf", "bad_antipode.fg", "--name", "Bad"]),
    case!("laws_add", 0, ["check", "fgl", "laws.fg", "--name", "Add"]),
    case!("laws_mult", 0, ["check", "fgl", "laws.fg", "--name", "Mult"]),
    case!("laws_cubic", 1, ["check", "fgl", "laws.fg", "--name", "Cubic"]),
    case!("laws_param", 0, ["check", "fgl", "laws.fg", "--name", "Param"]),
    case!(
        "extend_hopf_trivial",
        0,
        ["extend-hopf", "trivial_mult.fg", "--name", "FF"]
    ),
    case!("gproperty_trivial", 0, ["gproperty", "trivial_add.fg", "--name", "FF"]),
    case!("gproperty_bperturb", 1, ["gproperty", "bperturb.fg", "--name", "FF"]),
    case!(
        "chain_lim",
        0,
        ["fab", "chain", "chains.fg", "--name", "Lim", "--mode", "limit"]
    ),
    case!(
        "chain_not_coprime",
        1,
        ["fab", "chain", "chains.fg", "--name", "NotCoprime", "--mode", "limit"]
    ),
    case!(
        "chain_not_divisible",
        1,
        ["fab", "chain", "chains.fg", "--name", "NotDivisible", "--mode", "limit"]
    ),
    case!(
        "chain_stable",
        0,
        ["fab", "chain", "chains.fg", "--name", "Stable", "--mode", "stable"]
    ),
    case!(
        "chain_unstable",
        1,
        ["fab", "chain", "chains.fg", "--name", "Unstable", "--mode", "stable"]
    ),
    case!("theta_trivial", 0, ["theta", "trivial_mult.fg", "--name", "FF"]),
    case!("multiplier", 0, ["fab", "multiplier", "2", "2", "4", "4"]),
    case!(
        "missing_name",
        2,
        ["check", "hopffgl", "trivial_mult.fg", "--name", "Nope"]
    ),
    case!(
        "over_trunc",
        2,
        ["check", "fgl", "laws.fg", "--name", "Cubic", "--trunc", "7"]
    ),
    case!("bad_multiplier", 2, ["fab", "multiplier", "2", "3", "4", "4"]),
    case!("unknown_subcommand", 2, ["frobnicate"]),
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixtures() -> PathBuf {
    crate_dir().join("tests/fixtures")
}

pub fn golden_path(id: &str) -> PathBuf {
    crate_dir().join("tests/golden").join(format!("{id}.jsonl"))
}

pub fn hopfgroup(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopfgroup"))
        .current_dir(dir)
        .args(args)
        .env_remove("NO_COLOR")
        .output()
        .expect("binary runs")
}

pub fn machine(case: &Case) -> Output {
    let mut args = vec!["--format", "machine"];
    args.extend_from_slice(case.args);
    hopfgroup(&fixtures(), &args)
}

/// Replaces every `"timing_ms":<digits>` value with 0.
pub fn mask_timing(s: &str) -> String {
    const KEY: &str = "\"timing_ms\":";
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(i) = rest.find(KEY) {
        out.push_str(&rest[..i + KEY.len()]);
        out.push('0');
        rest = rest[i + KEY.len()..].trim_start_matches(|c: char| c.is_ascii_digit());
    }
    out.push_str(rest);
    out
}

/// Compares one case against its frozen file; `HOPFGROUP_BLESS=1` rewrites it.
pub fn check_case(case: &Case) -> Result<(), String> {
    let out = machine(case);
    let code = out.status.code().unwrap_or(-1);
    if code != case.exit {
        return Err(format!("{}: exit {code}, expected {}", case.id, case.exit));
    }
    let actual = mask_timing(&String::from_utf8_lossy(&out.stdout));
    let path = golden_path(case.id);
    if std::env::var_os("HOPFGROUP_BLESS").is_some() {
        std::fs::write(&path, &actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if actual != expected {
        return Err(format!(
            "{}: output differs from {}\n--- actual\n{actual}",
            case.id,
            path.display()
        ));
    }
    Ok(())
}
