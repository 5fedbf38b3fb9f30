//! CLI acceptance: output determinism and the exit-code map.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_eckart-kg")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn report(name: &str, pass: bool, detail: &str, started: Instant) {
    println!(
        "criterion {name}: {} ({detail}, {:.2}s)",
        if pass { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    assert!(pass, "criterion {name} failed: {detail}");
}

#[test]
fn criterion_9_cli_determinism_and_exit_codes() {
    let started = Instant::now();
    let attractive = fixture("attractive.toml");
    let attractive = attractive.to_str().unwrap();

    // Byte-identical repeated runs.
    let s1 = run(&["spectrum", attractive]);
    let s2 = run(&["spectrum", attractive]);
    let spectrum_deterministic = s1.status.success() && s1.stdout == s2.stdout;
    let v1 = run(&["verify", attractive]);
    let v2 = run(&["verify", attractive]);
    let verify_deterministic = v1.status.success() && v1.stdout == v2.stdout;

    // Stored regression fixture, byte-for-byte.
    let frozen = std::fs::read(fixture("expected_spectrum_attractive.csv")).unwrap();
    let matches_fixture = s1.stdout == frozen;

    // Exit-code map: 2 config, 3 convergence, 4 missing level, 5 verification.
    let code = |out: &Output| out.status.code().unwrap_or(-1);
    let malformed = run(&["spectrum", fixture("malformed.toml").to_str().unwrap()]);
    let no_conv = run(&["spectrum", fixture("no_converge.toml").to_str().unwrap()]);
    let missing =
        run(&["wavefunction", fixture("symmetric.toml").to_str().unwrap(), "--level", "5"]);
    let too_tight = run(&["verify", attractive, "--rtol", "1e-15"]);
    let unreadable = run(&["spectrum", fixture("does_not_exist.toml").to_str().unwrap()]);
    let bad_sweep = run(&[
        "sweep", attractive, "--param", "v1", "--from", "-1", "--to", "-2", "--steps", "0",
    ]);
    let bad_param = run(&[
        "sweep", attractive, "--param", "v9", "--from", "-1", "--to", "-2", "--steps", "3",
    ]);
    let codes_ok = code(&malformed) == 2
        && code(&no_conv) == 3
        && code(&missing) == 4
        && code(&too_tight) == 5
        && code(&unreadable) == 2
        && code(&bad_sweep) == 2
        && code(&bad_param) == 2;

    let pass =
        spectrum_deterministic && verify_deterministic && matches_fixture && codes_ok;
    report(
        "9 CLI determinism and exit codes",
        pass,
        &format!(
            "spectrum deterministic = {spectrum_deterministic}, \
             verify deterministic = {verify_deterministic}, \
             frozen fixture match = {matches_fixture}, exit codes ok = {codes_ok} \
             (got {}/{}/{}/{}/{}/{}/{})",
            code(&malformed),
            code(&no_conv),
            code(&missing),
            code(&too_tight),
            code(&unreadable),
            code(&bad_sweep),
            code(&bad_param),
        ),
        started,
    );
}
