//! Self-check of the geometric layer, printed one check per line.

use std::io::Write;

use hypvol::bounds::{BCB_A_LONGEST_FOUR, BCB_A_LONGEST_THREE, BCB_A_LONG_CHAIN, BCB_A_NO_BIGONS};
use hypvol::geometry::{
    face_bipyramid_volume, log_volume_bound, regular_bipyramid_volume, v_oct, v_tet, LOG_DIVISOR, LOG_DIVISOR_SHARP,
};
use hypvol::optimize::maximize_volume;

const TABLE: [(u64, f64); 18] = [
    (2, 0.0),
    (3, 2.0298),
    (4, 3.6638),
    (5, 4.9867),
    (6, 6.0896),
    (7, 7.0325),
    (8, 7.8549),
    (9, 8.5836),
    (10, 9.2375),
    (11, 9.8304),
    (12, 10.3725),
    (13, 10.8719),
    (14, 11.3347),
    (20, 13.5668),
    (100, 23.6709),
    (1_000, 38.1382),
    (1_000_000, 81.5409),
    (1_000_000_000, 124.944),
];

struct Check {
    label: String,
    residual: f64,
    tolerance: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

fn checks() -> Vec<Check> {
    let mut out = Vec::new();
    let mut push = |label: String, residual: f64, tolerance: f64| out.push(Check { label, residual, tolerance });

    for (n, v) in TABLE {
        let got = regular_bipyramid_volume(n).unwrap_or(f64::NAN);
        push(format!("table B_{n} = {got:.6} (listed {v})"), (got - v).abs(), 1e-3);
    }

    let b = face_bipyramid_volume;
    push("B_3 = 2 v_tet".into(), (b(3) - 2.0 * v_tet()).abs(), 1e-12);
    push("B_4 = v_oct".into(), (b(4) - v_oct()).abs(), 1e-12);
    push("B_6 = 6 v_tet".into(), (b(6) - 6.0 * v_tet()).abs(), 1e-9);
    let combos = [
        ("2 B_8 + B_6 - v_tet - B_4 - B_7", 2.0 * b(8) + b(6) - v_tet() - b(4) - b(7), BCB_A_LONGEST_THREE, 1e-3),
        ("2 B_10 + B_6 - 2 v_tet - B_4 - B_9", 2.0 * b(10) + b(6) - 2.0 * v_tet() - b(4) - b(9), BCB_A_LONGEST_FOUR, 1e-3),
        ("2 B_6 - v_tet", 2.0 * b(6) - v_tet(), 11.0 * v_tet(), 1e-3),
        ("10 v_tet + 3 (B_10 - B_9)", 10.0 * v_tet() + 3.0 * (b(10) - b(9)), BCB_A_LONG_CHAIN, 1e-3),
        ("7 v_oct - 10 v_tet", 7.0 * v_oct() - 10.0 * v_tet(), BCB_A_NO_BIGONS, 5e-3),
    ];
    for (label, got, want, tol) in combos {
        push(format!("{label} = {got:.5} (stated {want:.5})"), (got - want).abs(), tol);
    }

    // smallest margin of the logarithmic bound over a log-spaced grid
    let mut margin = f64::INFINITY;
    let mut sharp_margin = f64::INFINITY;
    for i in 0..200 {
        let n = (3.0 * (1e6f64 / 3.0).powf(i as f64 / 199.0)).round() as u64;
        let v = regular_bipyramid_volume(n).unwrap_or(f64::NAN);
        margin = margin.min(log_volume_bound(n, LOG_DIVISOR).unwrap_or(f64::NAN) - v);
        if n >= 4 {
            sharp_margin = sharp_margin.min(log_volume_bound(n, LOG_DIVISOR_SHARP).unwrap_or(f64::NAN) - v);
        }
    }
    push(format!("B_n < 2 pi ln(n/2) on 200 points, min margin {margin:.4}"), (-margin).max(0.0), 0.0);
    push(
        format!("B_n < 2 pi ln(n/2.1818) for n >= 4, min margin {sharp_margin:.4}"),
        if sharp_margin > 0.0 { 0.0 } else { 1.0 },
        0.0,
    );

    for n in [3usize, 4, 5, 8, 13] {
        let regular = regular_bipyramid_volume(n as u64).unwrap_or(f64::NAN);
        let (label, residual) = match maximize_volume(n, 1e-12, 500) {
            Ok(m) => (
                format!("optimizer n={n}: {:.9} in {} iterations", m.volume, m.iterations),
                (m.volume - regular).abs().max(m.shape.distance_to_regular()),
            ),
            Err(e) => (format!("optimizer n={n}: {e}"), f64::INFINITY),
        };
        push(label, residual, 1e-6);
    }
    out
}

/// Prints every check and returns whether all passed.
pub fn run<W: Write>(mut out: W) -> std::io::Result<bool> {
    let all = checks();
    let passed = all.iter().filter(|c| c.passed()).count();
    for c in &all {
        let status = if c.passed() { "ok  " } else { "FAIL" };
        writeln!(out, "{status} {}  residual {:.2e} (tol {:.0e})", c.label, c.residual, c.tolerance)?;
    }
    writeln!(out, "{passed}/{} checks passed", all.len())?;
    Ok(passed == all.len())
}
