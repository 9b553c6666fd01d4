//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls into the series or traversal code under test: the
//! Lobachevsky function is integrated numerically, diagrams are generated
//! from braid words, and alternation and nugatory crossings are decided by
//! walking strands and checking graph connectivity.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use hypvol::diagram::{parse_batch, LinkDiagram};

const SIMPSON_PANELS: usize = 4000;
/// `π − PI` in double precision.
const PI_LOW: f64 = 1.224_646_799_147_353_2e-16;

/// `−∫₀^θ ln|2 sin t| dt` for `θ ∈ [0, π]` by composite Simpson, after
/// subtracting the logarithmic singularities at both ends analytically.
pub fn lobachevsky_quadrature(theta: f64) -> f64 {
    assert!((0.0..=PI).contains(&theta));
    if theta == 0.0 {
        return 0.0;
    }
    // ln(2 sin t) = ln t + ln(π − t) + h(t), h smooth on [0, π]
    let h = |t: f64| {
        if t <= 0.0 || t >= PI {
            (2.0 / PI).ln()
        } else if t > PI / 2.0 {
            // sin t = sin(π − t), with π − t carrying the rounding of PI
            let rest = (PI - t) + PI_LOW;
            (2.0 * rest.sin() / (t * rest)).ln()
        } else {
            (2.0 * t.sin() / (t * (PI - t))).ln()
        }
    };
    let m = SIMPSON_PANELS;
    let step = theta / m as f64;
    let mut acc = h(0.0) + h(theta);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * h(i as f64 * step);
    }
    let smooth = acc * step / 3.0;
    let log_t = theta * theta.ln() - theta;
    let rest = PI - theta;
    let rest_log = if rest > 0.0 { rest * rest.ln() } else { 0.0 };
    let log_pi_minus_t = PI * PI.ln() - rest_log - theta;
    -(log_t + log_pi_minus_t + smooth)
}

/// Λ at any real angle, using only oddness and π-periodicity to reach `[0, π]`.
pub fn lobachevsky_oracle(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    lobachevsky_quadrature(r)
}

pub fn tetrahedron_oracle(alpha: f64, beta: f64, gamma: f64) -> f64 {
    lobachevsky_oracle(alpha) + lobachevsky_oracle(beta) + lobachevsky_oracle(gamma)
}

/// Regular ideal `n`-bipyramid: `n` tetrahedra with central angle `2π/n`
/// and two side angles `(π − 2π/n)/2`.
pub fn bipyramid_oracle(n: f64) -> f64 {
    let alpha = 2.0 * PI / n;
    let side = (PI - alpha) / 2.0;
    n * tetrahedron_oracle(alpha, side, side)
}

pub fn v_tet_oracle() -> f64 {
    3.0 * lobachevsky_quadrature(PI / 3.0)
}

pub fn v_oct_oracle() -> f64 {
    8.0 * lobachevsky_quadrature(PI / 4.0)
}

/// PD code of the closure of a braid word. Generator `±i` crosses strand
/// positions `i` and `i + 1` (1-based); positive letters carry the left
/// strand over.
pub fn braid_closure_pd(strands: usize, word: &[i32]) -> Vec<[u32; 4]> {
    let mut next = 1u32;
    let start: Vec<u32> = (0..strands)
        .map(|_| {
            let l = next;
            next += 1;
            l
        })
        .collect();
    let mut current = start.clone();
    let mut crossings = Vec::new();
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        assert!(i + 1 < strands, "generator {g} out of range");
        let (a, b) = (current[i], current[i + 1]);
        let (top_left, top_right) = (next, next + 1);
        next += 2;
        if g > 0 {
            // under strand runs bottom-right to top-left
            crossings.push([b, top_right, top_left, a]);
        } else {
            // under strand runs bottom-left to top-right
            crossings.push([a, b, top_right, top_left]);
        }
        current[i] = top_left;
        current[i + 1] = top_right;
    }
    // close the braid: each final label becomes the matching starting label
    let close: BTreeMap<u32, u32> = current.iter().copied().zip(start.iter().copied()).collect();
    for q in &mut crossings {
        for l in q.iter_mut() {
            if let Some(&s) = close.get(l) {
                *l = s;
            }
        }
    }
    crossings
}

/// Passes of each strand through crossings, read by walking the link:
/// `true` for an over-pass. Entering a crossing at slot `s` leaves at
/// `s + 2`; even slots belong to the under-strand.
pub fn strand_passes(quads: &[[u32; 4]]) -> Vec<Vec<bool>> {
    let mut ends: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (x, q) in quads.iter().enumerate() {
        for (s, &l) in q.iter().enumerate() {
            ends.entry(l).or_default().push((x, s));
        }
    }
    let other_end = |x: usize, s: usize| {
        let e = &ends[&quads[x][s]];
        if e[0] == (x, s) {
            e[1]
        } else {
            e[0]
        }
    };
    let mut used = vec![[false; 4]; quads.len()];
    let mut components = Vec::new();
    for x0 in 0..quads.len() {
        for s0 in 0..4 {
            if used[x0][s0] {
                continue;
            }
            let mut passes = Vec::new();
            let (mut x, mut s) = (x0, s0);
            while !used[x][s] {
                let out = (s + 2) % 4;
                used[x][s] = true;
                used[x][out] = true;
                passes.push(s % 2 == 1);
                (x, s) = other_end(x, out);
            }
            components.push(passes);
        }
    }
    components
}

pub fn alternates_by_walking(quads: &[[u32; 4]]) -> bool {
    strand_passes(quads).iter().all(|passes| {
        let n = passes.len();
        (0..n).all(|i| passes[i] != passes[(i + 1) % n])
    })
}

/// Crossings whose removal disconnects the diagram graph into pieces
/// hanging off different slots.
pub fn nugatory_by_connectivity(quads: &[[u32; 4]]) -> Vec<usize> {
    let c = quads.len();
    let mut ends: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (x, q) in quads.iter().enumerate() {
        for (s, &l) in q.iter().enumerate() {
            ends.entry(l).or_default().push((x, s));
        }
    }
    let mut out = Vec::new();
    for cut in 0..c {
        // nodes: crossings other than `cut`, plus the four slots of `cut`
        let slot_node = |s: usize| c + s;
        let mut parent: Vec<usize> = (0..c + 4).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        let node = |(x, s): (usize, usize)| if x == cut { slot_node(s) } else { x };
        for e in ends.values() {
            let (a, b) = (node(e[0]), node(e[1]));
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let roots: std::collections::BTreeSet<usize> =
            (0..4).map(|s| find(&mut parent, slot_node(s))).collect();
        if roots.len() > 1 {
            out.push(cut);
        }
    }
    out
}

pub fn fixture_path(name: &str) -> String {
    format!("{}/tests/fixtures/{}", env!("CARGO_MANIFEST_DIR"), name)
}

pub fn load_fixture(name: &str) -> Vec<(String, LinkDiagram)> {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    parse_batch(&text)
        .into_iter()
        .map(|(line, entry)| entry.unwrap_or_else(|e| panic!("{name}:{line}: {e}")))
        .collect()
}

pub fn fixture(name: &str, knot: &str) -> LinkDiagram {
    load_fixture(name)
        .into_iter()
        .find(|(n, _)| n == knot)
        .unwrap_or_else(|| panic!("{knot} missing from {name}"))
        .1
}

/// Standard alternating diagrams shipped with the tests.
pub fn alternating_corpus() -> Vec<(String, LinkDiagram)> {
    load_fixture("alternating.pd")
}
