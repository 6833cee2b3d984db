//! CLI golden cases shared by the integration targets.

use std::path::{Path, PathBuf};
use std::process::Command;

pub const BIN: &str = env!("CARGO_BIN_EXE_efg-lattice");

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Name and arguments, run from the fixtures directory.
pub const CASES: &[(&str, &[&str])] = &[
    ("poset_filters_v", &["poset", "filters", "v.poset"]),
    ("poset_filters_n", &["poset", "filters", "n.poset"]),
    ("lattice_check_b2", &["lattice", "check", "b2.poset"]),
    (
        "lattice_check_chain3",
        &["lattice", "check", "chain3.poset"],
    ),
    ("lattice_check_v", &["lattice", "check", "v.poset"]),
    ("lattice_check_m3", &["lattice", "check", "m3.poset"]),
    ("lattice_check_n5", &["lattice", "check", "n5.poset"]),
    (
        "lattice_irreducibles_b2",
        &["lattice", "irreducibles", "b2.poset"],
    ),
    (
        "lattice_irreducibles_n5",
        &["lattice", "irreducibles", "n5.poset"],
    ),
    ("lattice_to_efg_b2", &["lattice", "to-efg", "b2.poset"]),
    (
        "lattice_to_efg_chain3_ascii",
        &["--ascii-sink", "lattice", "to-efg", "chain3.poset"],
    ),
    ("efg_explore_star", &["efg", "explore", "star.efg"]),
    ("efg_explore_path", &["efg", "explore", "path.efg"]),
    ("efg_explore_square", &["efg", "explore", "square.efg"]),
    (
        "efg_explore_triangle_quiet",
        &["--quiet", "efg", "explore", "triangle.efg"],
    ),
    (
        "efg_explore_missing_direction",
        &["efg", "explore", "missing_direction.efg"],
    ),
    (
        "efg_explore_square_capped",
        &["--max-edges", "3", "efg", "explore", "square.efg"],
    ),
    ("efg_simplify_square", &["efg", "simplify", "square.efg"]),
    ("efg_simplify_star", &["efg", "simplify", "star.efg"]),
    (
        "efg_verify_b2_star",
        &["efg", "verify", "b2.poset", "star.efg"],
    ),
    (
        "efg_verify_chain3_star",
        &["efg", "verify", "chain3.poset", "star.efg"],
    ),
    ("propp_check_square", &["propp-check", "square.efg"]),
    (
        "propp_check_star_seeded",
        &["--seed", "7", "propp-check", "star.efg"],
    ),
    ("missing_file", &["poset", "filters", "nope.poset"]),
    ("bad_usage", &["lattice", "frobnicate"]),
];

/// Runs the binary and renders command, streams and exit code as one
/// document.
pub fn transcript(args: &[&str]) -> String {
    let out = Command::new(BIN)
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs");
    format!(
        "$ efg-lattice {}\n--- stdout\n{}--- stderr\n{}--- exit {}\n",
        args.join(" "),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr),
        out.status
            .code()
            .map_or("signal".to_string(), |c| c.to_string()),
    )
}
