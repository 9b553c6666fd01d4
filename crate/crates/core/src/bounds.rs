//! Volume upper bounds computed from diagram statistics.
//!
//! Every bound is exposed twice: as a plain formula over its inputs, and as
//! a [`BoundReport`] that also records whether the diagram satisfies the
//! hypotheses the bound needs. Hyperbolicity of the link is always taken on
//! trust; only diagrammatic hypotheses are checked.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{
    bigon_chain_stats, borromean_detect, compute_faces, flype_obstructions, is_alternating,
    reducedness_check, shorten_chain, DiagramError, FaceDecomposition, LinkDiagram, TwistStats,
};
use crate::geometry::{face_bipyramid_volume, v_oct, v_tet};

/// Drop when no twist region has a bigon (`g_2 = 0`). The exact
/// combination `7 v_oct − 10 v_tet` is 15.49762.
pub const BCB_A_NO_BIGONS: f64 = 15.4972;
/// Drop when the longest chains have three crossings.
pub const BCB_A_LONGEST_THREE: f64 = 10.088;
/// Drop when the longest chains have four crossings.
pub const BCB_A_LONGEST_FOUR: f64 = 10.2873;
/// Drop when some chain has five or more crossings.
pub const BCB_A_LONG_CHAIN: f64 = 12.111;

/// Values closer than this are treated as tied when picking the best bound.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("{bound} bound needs at least {min} crossings, got {got}")]
    TooFewCrossings { bound: BoundName, min: usize, got: usize },
    #[error("twist number must be at least 1")]
    NoTwistRegions,
    #[error("no applicable bound among the reports")]
    NoApplicable,
    #[error("unknown bound name `{0}`")]
    UnknownBound(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    Tetrahedral,
    Octahedral,
    NaiveOctahedral,
    At,
    Dt,
    Bcb,
    JonesBcb,
    FcbRaw,
    Fcb,
    FcbDrilled,
}

impl BoundName {
    pub const ALL: [BoundName; 10] = [
        BoundName::Tetrahedral,
        BoundName::Octahedral,
        BoundName::NaiveOctahedral,
        BoundName::At,
        BoundName::Dt,
        BoundName::Bcb,
        BoundName::JonesBcb,
        BoundName::FcbRaw,
        BoundName::Fcb,
        BoundName::FcbDrilled,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::Tetrahedral => "tetrahedral",
            BoundName::Octahedral => "octahedral",
            BoundName::NaiveOctahedral => "naive_octahedral",
            BoundName::At => "at",
            BoundName::Dt => "dt",
            BoundName::Bcb => "bcb",
            BoundName::JonesBcb => "jones_bcb",
            BoundName::FcbRaw => "fcb_raw",
            BoundName::Fcb => "fcb",
            BoundName::FcbDrilled => "fcb_drilled",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            BoundName::Tetrahedral => "tetrahedral bound (4c-16) v_tet for hyperbolic knots other than the figure-eight",
            BoundName::Octahedral => "octahedral bound (c-5) v_oct + 4 v_tet for c >= 5",
            BoundName::NaiveOctahedral => "one ideal octahedron per crossing, c v_oct",
            BoundName::At => "twist-number bound 10 v_tet (t(P)-1) for reduced alternating diagrams",
            BoundName::Dt => "refined twist-class bound (4t_1+6t_2+8t_3+10g_4-a) v_tet",
            BoundName::Bcb => "bigon-chain bipyramid bound",
            BoundName::JonesBcb => "bigon-chain bipyramid bound in colored Jones coefficients",
            BoundName::FcbRaw => "face-centered bipyramid sum, sum_i b_i vol(B_i)",
            BoundName::Fcb => "face-centered bipyramid bound with drill/collapse drop max{r,s}",
            BoundName::FcbDrilled => "face-centered bipyramid bound after drilling long bigon chains",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundName {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundName::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| BoundsError::UnknownBound(s.to_string()))
    }
}

/// One bound's verdict for one diagram.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: BoundName,
    pub value: Option<f64>,
    pub applicable: bool,
    pub reason: String,
    pub citation: &'static str,
}

impl BoundReport {
    pub fn applicable(name: BoundName, value: f64, reason: impl Into<String>) -> Self {
        if !(value >= 0.0) {
            return Self::inapplicable(
                name,
                format!("formula evaluates to {value:.6}, so the hypotheses cannot all hold"),
            );
        }
        BoundReport {
            name,
            value: Some(value),
            applicable: true,
            reason: reason.into(),
            citation: name.citation(),
        }
    }

    pub fn inapplicable(name: BoundName, reason: impl Into<String>) -> Self {
        let reason = reason.into();
        debug_assert!(!reason.is_empty());
        BoundReport { name, value: None, applicable: false, reason, citation: name.citation() }
    }
}

pub fn tetrahedral_bound(c: usize) -> Result<f64, BoundsError> {
    if c < 4 {
        return Err(BoundsError::TooFewCrossings { bound: BoundName::Tetrahedral, min: 4, got: c });
    }
    Ok((4 * c - 16) as f64 * v_tet())
}

pub fn octahedral_bound(c: usize) -> Result<f64, BoundsError> {
    if c < 5 {
        return Err(BoundsError::TooFewCrossings { bound: BoundName::Octahedral, min: 5, got: c });
    }
    Ok((c - 5) as f64 * v_oct() + 4.0 * v_tet())
}

pub fn naive_octahedral_bound(c: usize) -> Result<f64, BoundsError> {
    if c < 1 {
        return Err(BoundsError::TooFewCrossings { bound: BoundName::NaiveOctahedral, min: 1, got: c });
    }
    Ok(c as f64 * v_oct())
}

pub fn at_bound(twist_number: usize) -> Result<f64, BoundsError> {
    if twist_number < 1 {
        return Err(BoundsError::NoTwistRegions);
    }
    Ok(10.0 * v_tet() * (twist_number - 1) as f64)
}

/// `(4t_1 + 6t_2 + 8t_3 + 10g_4 − a) v_tet` with `a = 10` if `g_4 ≥ 1`,
/// `a = 7` if `g_4 = 0` and `t_3 ≥ 1`, and `a = 6` otherwise.
pub fn dt_bound(s: &TwistStats) -> f64 {
    let a = if s.g(4) >= 1 {
        10
    } else if s.t(3) >= 1 {
        7
    } else {
        6
    };
    let weighted = 4 * s.t(1) + 6 * s.t(2) + 8 * s.t(3) + 10 * s.g(4);
    (weighted as f64 - a as f64) * v_tet()
}

/// Diagram facts the bigon-chain bipyramid bound depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BcbGate {
    pub alternating: bool,
    pub crossing_count: usize,
    pub reduced: bool,
    pub twist_reduced: bool,
    pub borromean: bool,
}

/// The bigon-chain drop `a`, chosen by the longest chain present.
pub fn bcb_drop(s: &TwistStats) -> f64 {
    if s.g(2) == 0 {
        BCB_A_NO_BIGONS
    } else if s.g(3) == 0 {
        11.0 * v_tet()
    } else if s.g(4) == 0 {
        BCB_A_LONGEST_THREE
    } else if s.g(5) == 0 {
        BCB_A_LONGEST_FOUR
    } else {
        BCB_A_LONG_CHAIN
    }
}

/// `t_1 v_oct + 6 t_2 v_tet + t_3 vol(B_8) + t_4 vol(B_10) + 10 g_5 v_tet − a`.
pub fn bcb_formula(s: &TwistStats) -> f64 {
    s.t(1) as f64 * v_oct()
        + s.t(2) as f64 * 6.0 * v_tet()
        + s.t(3) as f64 * face_bipyramid_volume(8)
        + s.t(4) as f64 * face_bipyramid_volume(10)
        + s.g(5) as f64 * 10.0 * v_tet()
        - bcb_drop(s)
}

pub fn bcb_bound(s: &TwistStats, gate: &BcbGate) -> BoundReport {
    let name = BoundName::Bcb;
    if !gate.alternating {
        return BoundReport::inapplicable(name, "diagram is not alternating");
    }
    if gate.crossing_count < 5 {
        return BoundReport::inapplicable(name, "needs at least five crossings");
    }
    if !gate.reduced {
        return BoundReport::inapplicable(name, "diagram is not reduced");
    }
    if !gate.twist_reduced {
        return BoundReport::inapplicable(name, "diagram not known to be twist reduced");
    }
    if gate.borromean {
        return BoundReport::applicable(name, 2.0 * v_oct(), "Borromean rings: volume is at most 2 v_oct");
    }
    match s.twist_number {
        0 | 1 => BoundReport::inapplicable(name, "needs at least three twist regions"),
        2 => BoundReport::applicable(
            name,
            2.0 * v_oct(),
            "two twist regions: Dehn filling of the Borromean rings, volume at most 2 v_oct",
        ),
        _ => BoundReport::applicable(name, bcb_formula(s), format!("drop a = {:.6}", bcb_drop(s))),
    }
}

/// Second and third coefficients of the colored Jones polynomial at colors
/// 2 and 3, read from each end.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct JonesData {
    pub b2: i64,
    pub c2: i64,
    pub beta2: i64,
    pub gamma2: i64,
    pub c3: i64,
    pub gamma3: i64,
}

/// The bigon-chain bound rewritten in colored Jones coefficients. May be
/// negative when fed coefficients of a link outside its hypotheses.
pub fn jones_bcb_bound(j: &JonesData) -> f64 {
    let second = j.c2 + j.gamma2;
    let third = j.c3 + j.gamma3;
    let bigon_term = j.b2 + j.beta2;
    let a = if bigon_term != (j.c2 - j.c3) + (j.gamma2 - j.gamma3) {
        BCB_A_LONGEST_THREE
    } else {
        BCB_A_NO_BIGONS
    };
    (10.0 * v_tet() - v_oct()) * (second - third) as f64
        - (10.0 * v_tet() - 2.0 * v_oct()) * bigon_term as f64
        - a
}

/// `Σ_i b_i vol(B_i)`, with bigons contributing nothing.
pub fn fcb_raw(f: &FaceDecomposition) -> f64 {
    f.b.iter().map(|(&i, &n)| n as f64 * face_bipyramid_volume(i)).sum()
}

/// Volume left in a face-centered bipyramid with `edges` sides after one
/// of its edges collapses.
pub fn collapsed_face_volume(edges: usize) -> f64 {
    match edges {
        0..=2 => 0.0,
        3..=11 => (edges - 2) as f64 * v_tet(),
        _ => face_bipyramid_volume(edges - 1),
    }
}

/// Where the face-centered drop `a = max{r, s}` comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DropWitness {
    /// Drilling through two nonadjacent faces.
    Drill { faces: [usize; 2], sizes: [usize; 2] },
    /// Collapsing along an edge between two faces, shrinking four flanking faces.
    Collapse { edge: usize, faces: [usize; 2], sizes: [usize; 2], flank_sizes: [usize; 4] },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FcbDrop {
    pub r: Option<(f64, [usize; 2])>,
    pub s: Option<(f64, usize)>,
    pub value: f64,
    pub witness: Option<DropWitness>,
}

/// The two candidate drops: `r` over nonadjacent face pairs and `s` over
/// edges (collapse of the two faces along the edge plus the four flanking
/// faces at its endpoints).
pub fn fcb_drop(f: &FaceDecomposition) -> FcbDrop {
    let size = |face: usize| f.face_size(face);
    let vol = |face: usize| face_bipyramid_volume(size(face));

    let mut r: Option<(f64, [usize; 2])> = None;
    for a in 0..f.face_count() {
        for b in a + 1..f.face_count() {
            if f.adjacent(a, b) {
                continue;
            }
            let v = vol(a) + vol(b);
            if r.is_none_or(|(best, _)| v > best) {
                r = Some((v, [a, b]));
            }
        }
    }

    let mut s: Option<(f64, usize)> = None;
    for (e, &[fc, fd]) in f.edge_faces.iter().enumerate() {
        if fc == fd {
            continue;
        }
        let flanks: f64 = f.edge_flanks[e]
            .iter()
            .map(|&g| vol(g) - collapsed_face_volume(size(g)))
            .sum();
        let v = vol(fc) + vol(fd) + flanks;
        // on ties prefer the edge whose own faces carry more volume
        let better = s.is_none_or(|(best, at)| {
            let [bc, bd] = f.edge_faces[at];
            v > best + 1e-12 || (v > best - 1e-12 && vol(fc) + vol(fd) > vol(bc) + vol(bd) + 1e-12)
        });
        if better {
            s = Some((v, e));
        }
    }

    let r_value = r.map_or(f64::NEG_INFINITY, |(v, _)| v);
    let s_value = s.map_or(f64::NEG_INFINITY, |(v, _)| v);
    let witness = if r.is_some() && r_value >= s_value {
        r.map(|(_, faces)| DropWitness::Drill { faces, sizes: faces.map(size) })
    } else {
        s.map(|(_, edge)| {
            let faces = f.edge_faces[edge];
            DropWitness::Collapse {
                edge,
                faces,
                sizes: faces.map(size),
                flank_sizes: f.edge_flanks[edge].map(size),
            }
        })
    };
    FcbDrop { r, s, value: r_value.max(s_value).max(0.0), witness }
}

fn describe_drop(drop: &FcbDrop) -> String {
    let mut reason = match &drop.witness {
        Some(DropWitness::Drill { faces, sizes }) => format!(
            "drill nonadjacent faces {} and {} ({}- and {}-gon), a = {:.6}",
            faces[0], faces[1], sizes[0], sizes[1], drop.value
        ),
        Some(DropWitness::Collapse { edge, sizes, flank_sizes, .. }) => format!(
            "collapse edge {} between a {}-gon and a {}-gon flanked by {:?}, a = {:.6}",
            edge, sizes[0], sizes[1], flank_sizes, drop.value
        ),
        None => "no drop available".to_string(),
    };
    if drop.r.is_none() {
        reason.push_str("; every pair of faces is adjacent, so the drilling term is omitted");
    }
    reason
}

/// Face-centered bound `Σ b_i vol(B_i) − max{r, s}`.
pub fn fcb_bound(f: &FaceDecomposition) -> BoundReport {
    let drop = fcb_drop(f);
    BoundReport::applicable(BoundName::Fcb, fcb_raw(f) - drop.value, describe_drop(&drop))
}

/// Volume saved by drilling a chain of crossing length `k` between faces
/// with `r` and `s` sides: the two faces shrink to `r − k + 2` and
/// `s − k + 2` sides and the drilled pair contributes one regular
/// 6-bipyramid. Drilling is worthwhile only when this is positive.
pub fn drill_saving(r: usize, s: usize, k: usize) -> f64 {
    assert!(k >= 2 && r >= k && s >= k, "side faces run along the whole chain");
    face_bipyramid_volume(r) + face_bipyramid_volume(s)
        - face_bipyramid_volume(r - k + 2)
        - face_bipyramid_volume(s - k + 2)
        - face_bipyramid_volume(6)
}

/// Face-centered bound after greedily drilling bigon chains.
///
/// Each round shortens whichever chain gives the largest positive saving
/// to two crossings (recomputing faces), charging one regular 6-bipyramid
/// per drilled chain. When no chain saves volume the face-centered drop is
/// taken on the final diagram.
pub fn fcb_drill_refine(d: &LinkDiagram, f: &FaceDecomposition, s: &TwistStats) -> BoundReport {
    let b6 = face_bipyramid_volume(6);
    let mut diagram = d.clone();
    let mut faces = f.clone();
    let mut stats = s.clone();
    let mut drilled = Vec::new();
    loop {
        let raw = fcb_raw(&faces);
        let mut best: Option<(f64, LinkDiagram, FaceDecomposition)> = None;
        for chain in stats.chains.iter().filter(|c| c.crossing_length() >= 3) {
            let Ok(shorter) = shorten_chain(&diagram, &faces, chain, 2) else { continue };
            let Ok(shorter_faces) = compute_faces(&shorter) else { continue };
            let saving = raw - fcb_raw(&shorter_faces) - b6;
            if saving > 0.0 && best.as_ref().is_none_or(|(b, _, _)| saving > *b) {
                best = Some((saving, shorter, shorter_faces));
            }
        }
        let Some((saving, next, next_faces)) = best else { break };
        let Ok(next_stats) = bigon_chain_stats(&next, &next_faces) else { break };
        drilled.push(saving);
        diagram = next;
        faces = next_faces;
        stats = next_stats;
    }
    let drop = fcb_drop(&faces);
    let value = fcb_raw(&faces) + drilled.len() as f64 * b6 - drop.value;
    let reason = if drilled.is_empty() {
        format!("no chain worth drilling; {}", describe_drop(&drop))
    } else {
        format!(
            "drilled {} chain(s) saving {:?}; {}",
            drilled.len(),
            drilled.iter().map(|v| (v * 1e6).round() / 1e6).collect::<Vec<_>>(),
            describe_drop(&drop)
        )
    };
    BoundReport::applicable(BoundName::FcbDrilled, value, reason)
}

/// The smallest applicable bound; ties within [`TIE_TOLERANCE`] go to the
/// bound listed first in [`BoundName::ALL`].
pub fn best_bound(reports: &[BoundReport]) -> Result<&BoundReport, BoundsError> {
    let mut best: Option<&BoundReport> = None;
    for r in reports.iter().filter(|r| r.applicable) {
        let v = r.value.expect("applicable reports carry a value");
        best = match best {
            None => Some(r),
            Some(b) => {
                let bv = b.value.expect("applicable reports carry a value");
                if v < bv - TIE_TOLERANCE || ((v - bv).abs() <= TIE_TOLERANCE && r.name < b.name) {
                    Some(r)
                } else {
                    Some(b)
                }
            }
        };
    }
    best.ok_or(BoundsError::NoApplicable)
}

/// Everything computed about one diagram.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub faces: FaceDecomposition,
    pub alternating: bool,
    pub reduced: bool,
    pub nugatory: Vec<usize>,
    pub twist: Result<TwistStats, DiagramError>,
    pub flype_obstructions: Vec<(usize, usize)>,
    pub borromean: bool,
    pub reports: Vec<BoundReport>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EvaluationOptions {
    /// The caller vouches that the diagram is twist reduced.
    pub assert_twist_reduced: bool,
    pub jones: Option<JonesData>,
}

/// Evaluates every bound on a diagram, in [`BoundName::ALL`] order.
pub fn evaluate(d: &LinkDiagram, options: &EvaluationOptions) -> Result<Evaluation, DiagramError> {
    let faces = compute_faces(d)?;
    let alternating = is_alternating(d);
    let (reduced, nugatory) = reducedness_check(d, &faces);
    let twist = bigon_chain_stats(d, &faces);
    let obstructions = twist
        .as_ref()
        .map(|s| flype_obstructions(&faces, s))
        .unwrap_or_default();
    let borromean = borromean_detect(d, &faces);
    let c = d.crossing_count();

    let twist_problem = |e: &DiagramError| format!("bigon chains unavailable: {e}");
    let alt_reduced = |name: BoundName| -> Option<BoundReport> {
        if !alternating {
            Some(BoundReport::inapplicable(name, "diagram is not alternating"))
        } else if !reduced {
            Some(BoundReport::inapplicable(name, format!("nugatory crossings {nugatory:?}")))
        } else {
            None
        }
    };

    let mut reports = Vec::with_capacity(BoundName::ALL.len());

    reports.push(if d.component_count() != 1 {
        BoundReport::inapplicable(BoundName::Tetrahedral, "stated for knots only")
    } else if c <= 4 {
        BoundReport::inapplicable(
            BoundName::Tetrahedral,
            "needs at least five crossings (the figure-eight knot is excluded)",
        )
    } else {
        BoundReport::applicable(BoundName::Tetrahedral, tetrahedral_bound(c).expect("c ≥ 5"), "")
    });

    reports.push(match octahedral_bound(c) {
        Ok(v) => BoundReport::applicable(BoundName::Octahedral, v, ""),
        Err(e) => BoundReport::inapplicable(BoundName::Octahedral, e.to_string()),
    });

    reports.push(BoundReport::applicable(
        BoundName::NaiveOctahedral,
        naive_octahedral_bound(c).expect("diagrams have a crossing"),
        "",
    ));

    for name in [BoundName::At, BoundName::Dt] {
        reports.push(match (alt_reduced(name), &twist) {
            (Some(r), _) => r,
            (None, Err(e)) => BoundReport::inapplicable(name, twist_problem(e)),
            (None, Ok(s)) if name == BoundName::At => {
                BoundReport::applicable(name, at_bound(s.twist_number).expect("t ≥ 1"), "")
            }
            (None, Ok(s)) => BoundReport::applicable(name, dt_bound(s), ""),
        });
    }

    reports.push(match &twist {
        Err(e) => alt_reduced(BoundName::Bcb)
            .unwrap_or_else(|| BoundReport::inapplicable(BoundName::Bcb, twist_problem(e))),
        Ok(s) => {
            let gate = BcbGate {
                alternating,
                crossing_count: c,
                reduced,
                twist_reduced: options.assert_twist_reduced && obstructions.is_empty(),
                borromean,
            };
            let mut report = bcb_bound(s, &gate);
            if !report.applicable && gate.alternating && gate.reduced && c >= 5 && !gate.twist_reduced {
                report.reason = if obstructions.is_empty() {
                    "twist reducedness not asserted".to_string()
                } else {
                    format!("not twist reduced: chains {obstructions:?} can be merged by a flype")
                };
            }
            report
        }
    });

    reports.push(match &options.jones {
        None => BoundReport::inapplicable(BoundName::JonesBcb, "no colored Jones coefficients supplied"),
        Some(j) => alt_reduced(BoundName::JonesBcb)
            .unwrap_or_else(|| BoundReport::applicable(BoundName::JonesBcb, jones_bcb_bound(j), "")),
    });

    reports.push(if reduced {
        BoundReport::applicable(BoundName::FcbRaw, fcb_raw(&faces), faces.census())
    } else {
        BoundReport::inapplicable(BoundName::FcbRaw, format!("nugatory crossings {nugatory:?}"))
    });

    reports.push(alt_reduced(BoundName::Fcb).unwrap_or_else(|| fcb_bound(&faces)));

    reports.push(match (alt_reduced(BoundName::FcbDrilled), &twist) {
        (Some(r), _) => r,
        (None, Err(e)) => BoundReport::inapplicable(BoundName::FcbDrilled, twist_problem(e)),
        (None, Ok(s)) => fcb_drill_refine(d, &faces, s),
    });

    Ok(Evaluation {
        faces,
        alternating,
        reduced,
        nugatory,
        twist,
        flype_obstructions: obstructions,
        borromean,
        reports,
    })
}
