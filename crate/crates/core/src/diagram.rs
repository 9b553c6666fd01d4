//! Planar diagram codes and the combinatorics the volume bounds consume.
//!
//! A diagram is written as comma-separated terms `X(a,b,c,d)`, one per
//! crossing. The four positive integer labels name the edges at the crossing
//! in counterclockwise order, starting with the incoming under-strand; so
//! slots 0 and 2 carry the under-strand and slots 1 and 3 the over-strand.
//! Whitespace is ignored. Batch files hold one diagram per line as
//! `name: X(...),X(...)`.
//!
//! The crossings and their slot orders form a rotation system on the sphere.
//! Faces are traced by leaving a crossing along an edge, arriving at the far
//! end through some slot `j`, and continuing out of slot `j + 1`. The turn
//! from slot `j` to slot `j + 1` passes through corner `j` of that crossing.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagramError {
    #[error("empty diagram")]
    Empty,
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("edge label {label} appears {count} times (expected exactly 2)")]
    LabelMultiplicity { label: u32, count: usize },
    #[error("diagram is disconnected ({pieces} pieces)")]
    Disconnected { pieces: usize },
    #[error("face traversal found {faces} faces for {crossings} crossings; the code is not planar")]
    TraversalInconsistency { faces: usize, crossings: usize },
    #[error("diagram is not reduced (nugatory crossings {0:?})")]
    NotReduced(Vec<usize>),
    #[error("crossing {crossing} has bigons on adjacent corners; chain membership is ambiguous")]
    SideBySideBigons { crossing: usize },
    #[error("bigon chain through crossings {crossings:?} closes up on itself")]
    CyclicChain { crossings: Vec<usize> },
    #[error("bigon face {face} touches crossing {crossing} twice")]
    DegenerateBigon { face: usize, crossing: usize },
    #[error("batch line is missing the `name:` prefix")]
    MissingName,
}

/// One crossing: edge labels in counterclockwise order from the incoming
/// under-strand.
pub type Quadruple = [u32; 4];

/// A validated planar diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Quadruple>,
    /// `ends[e]` = the two (crossing, slot) positions of edge `e`.
    ends: Vec<[(usize, usize); 2]>,
    /// `slot_edge[x][s]` = edge index at slot `s` of crossing `x`.
    slot_edge: Vec<[usize; 4]>,
    labels: Vec<u32>,
    component_count: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&i| self.find(i) == i).count()
    }
}

impl LinkDiagram {
    pub fn from_crossings(crossings: Vec<Quadruple>) -> Result<Self, DiagramError> {
        if crossings.is_empty() {
            return Err(DiagramError::Empty);
        }
        let mut positions: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
        for (x, quad) in crossings.iter().enumerate() {
            for (s, &label) in quad.iter().enumerate() {
                positions.entry(label).or_default().push((x, s));
            }
        }
        let mut labels = Vec::with_capacity(positions.len());
        let mut ends = Vec::with_capacity(positions.len());
        let mut slot_edge = vec![[usize::MAX; 4]; crossings.len()];
        for (label, pos) in positions {
            if pos.len() != 2 {
                return Err(DiagramError::LabelMultiplicity { label, count: pos.len() });
            }
            let e = labels.len();
            for &(x, s) in &pos {
                slot_edge[x][s] = e;
            }
            labels.push(label);
            ends.push([pos[0], pos[1]]);
        }

        let mut pieces = UnionFind::new(crossings.len());
        for [(x, _), (y, _)] in &ends {
            pieces.union(*x, *y);
        }
        let piece_count = pieces.classes();
        if piece_count != 1 {
            return Err(DiagramError::Disconnected { pieces: piece_count });
        }

        // strands run straight through each crossing: slot 0 to 2, 1 to 3
        let mut strands = UnionFind::new(labels.len());
        for edges in &slot_edge {
            strands.union(edges[0], edges[2]);
            strands.union(edges[1], edges[3]);
        }
        let component_count = strands.classes();

        Ok(LinkDiagram { crossings, ends, slot_edge, labels, component_count })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn crossings(&self) -> &[Quadruple] {
        &self.crossings
    }

    pub fn edge_label(&self, edge: usize) -> u32 {
        self.labels[edge]
    }

    /// The two (crossing, slot) ends of an edge.
    pub fn edge_ends(&self, edge: usize) -> [(usize, usize); 2] {
        self.ends[edge]
    }

    pub fn edge_at(&self, crossing: usize, slot: usize) -> usize {
        self.slot_edge[crossing][slot]
    }

    /// The (crossing, slot) at the far end of the edge leaving `crossing`
    /// through `slot`.
    pub fn across(&self, crossing: usize, slot: usize) -> (usize, usize) {
        let [a, b] = self.ends[self.slot_edge[crossing][slot]];
        if a == (crossing, slot) {
            b
        } else {
            a
        }
    }

    /// Builds a diagram from a new crossing list with labels renumbered
    /// `1..=2c` in order of first appearance.
    fn relabeled(crossings: Vec<Quadruple>) -> Result<Self, DiagramError> {
        let mut map = HashMap::new();
        let renamed = crossings
            .into_iter()
            .map(|q| {
                q.map(|l| {
                    let next = map.len() as u32 + 1;
                    *map.entry(l).or_insert(next)
                })
            })
            .collect();
        Self::from_crossings(renamed)
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, [a, b, c, d]) in self.crossings.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "X({a},{b},{c},{d})")?;
        }
        Ok(())
    }
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
    offset: usize,
}

impl<'a> Scanner<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn error(&self, message: impl Into<String>) -> DiagramError {
        DiagramError::Syntax { position: self.offset + self.pos, message: message.into() }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.bytes.len()
    }

    fn expect(&mut self, byte: u8) -> Result<(), DiagramError> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", byte as char)))
        }
    }

    fn label(&mut self) -> Result<u32, DiagramError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a positive integer label"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        match text.parse::<u32>() {
            Ok(0) => Err(DiagramError::Syntax {
                position: self.offset + start,
                message: "labels must be positive".into(),
            }),
            Ok(v) => Ok(v),
            Err(_) => Err(DiagramError::Syntax {
                position: self.offset + start,
                message: "label out of range".into(),
            }),
        }
    }
}

fn parse_terms(text: &str, offset: usize) -> Result<Vec<Quadruple>, DiagramError> {
    let mut sc = Scanner { bytes: text.as_bytes(), pos: 0, offset };
    if sc.at_end() {
        return Err(DiagramError::Empty);
    }
    let mut crossings = Vec::new();
    loop {
        sc.expect(b'X')?;
        sc.expect(b'(')?;
        let mut quad = [0; 4];
        for (i, slot) in quad.iter_mut().enumerate() {
            if i > 0 {
                sc.expect(b',')?;
            }
            *slot = sc.label()?;
        }
        sc.expect(b')')?;
        crossings.push(quad);
        if sc.at_end() {
            break;
        }
        sc.expect(b',')?;
    }
    Ok(crossings)
}

/// Parses and validates a diagram code such as `X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)`.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    LinkDiagram::from_crossings(parse_terms(text, 0)?)
}

/// Parses one batch line `name: X(...),...` into its name and diagram.
pub fn parse_named_line(line: &str) -> Result<(String, LinkDiagram), DiagramError> {
    let (name, code) = line.split_once(':').ok_or(DiagramError::MissingName)?;
    let name = name.trim();
    if name.is_empty() {
        return Err(DiagramError::MissingName);
    }
    let crossings = parse_terms(code, name.len() + 1)?;
    Ok((name.to_string(), LinkDiagram::from_crossings(crossings)?))
}

/// A line of a batch file: its 1-based line number and parse outcome.
pub type BatchEntry = (usize, Result<(String, LinkDiagram), DiagramError>);

/// Parses a batch file, skipping blank lines and `#` comments.
pub fn parse_batch(text: &str) -> Vec<BatchEntry> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| (i + 1, parse_named_line(l)))
        .collect()
}

/// The complementary regions of a diagram on the sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceDecomposition {
    /// Each face as the cyclic sequence of (crossing, slot) darts along its
    /// boundary; a dart is the edge side leaving that crossing through that slot.
    pub faces: Vec<Vec<(usize, usize)>>,
    /// Number of faces with each edge count.
    pub b: BTreeMap<usize, usize>,
    /// Unordered pairs of distinct faces sharing at least one edge.
    pub adjacency: BTreeSet<(usize, usize)>,
    /// Faces at the four corners of each crossing; corner `k` lies between
    /// slots `k` and `k + 1`.
    pub corner_faces: Vec<[usize; 4]>,
    /// Faces on either side of each edge.
    pub edge_faces: Vec<[usize; 2]>,
    /// For each edge, the two corner faces at each endpoint crossing that
    /// are not on either side of the edge (four faces, with repetition).
    pub edge_flanks: Vec<[usize; 4]>,
}

impl FaceDecomposition {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn face_size(&self, face: usize) -> usize {
        self.faces[face].len()
    }

    pub fn b(&self, i: usize) -> usize {
        self.b.get(&i).copied().unwrap_or(0)
    }

    pub fn adjacent(&self, f: usize, g: usize) -> bool {
        self.adjacency.contains(&(f.min(g), f.max(g)))
    }

    /// `Σ (4 − i) b_i`, which is 8 for every connected diagram.
    pub fn euler_sum(&self) -> i64 {
        self.b.iter().map(|(&i, &n)| (4 - i as i64) * n as i64).sum()
    }

    /// Face census as `size:count` pairs, e.g. `2:2 3:4`.
    pub fn census(&self) -> String {
        self.b
            .iter()
            .map(|(i, n)| format!("{i}:{n}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Traces the faces of the diagram's rotation system.
pub fn compute_faces(d: &LinkDiagram) -> Result<FaceDecomposition, DiagramError> {
    let c = d.crossing_count();
    let mut face_of = vec![usize::MAX; 4 * c];
    let mut corner_faces = vec![[usize::MAX; 4]; c];
    let mut faces = Vec::new();
    for start in 0..4 * c {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut boundary = Vec::new();
        let mut dart = start;
        loop {
            if face_of[dart] != usize::MAX {
                if dart == start {
                    break;
                }
                return Err(DiagramError::TraversalInconsistency { faces: id + 1, crossings: c });
            }
            face_of[dart] = id;
            let (x, s) = (dart / 4, dart % 4);
            boundary.push((x, s));
            let (y, j) = d.across(x, s);
            corner_faces[y][j] = id;
            dart = 4 * y + (j + 1) % 4;
        }
        faces.push(boundary);
    }
    if faces.len() != c + 2 {
        return Err(DiagramError::TraversalInconsistency { faces: faces.len(), crossings: c });
    }

    let mut b = BTreeMap::new();
    for f in &faces {
        *b.entry(f.len()).or_insert(0) += 1;
    }
    let mut adjacency = BTreeSet::new();
    let mut edge_faces = Vec::with_capacity(d.edge_count());
    let mut edge_flanks = Vec::with_capacity(d.edge_count());
    for e in 0..d.edge_count() {
        let [(x, s), (y, j)] = d.edge_ends(e);
        let (f, g) = (face_of[4 * x + s], face_of[4 * y + j]);
        edge_faces.push([f, g]);
        // the edge sits between corners s−1 and s at x, so s+1 and s+2 are the far corners
        let (cx, cy) = (corner_faces[x], corner_faces[y]);
        edge_flanks.push([cx[(s + 1) % 4], cx[(s + 2) % 4], cy[(j + 1) % 4], cy[(j + 2) % 4]]);
        if f != g {
            adjacency.insert((f.min(g), f.max(g)));
        }
    }
    Ok(FaceDecomposition { faces, b, adjacency, corner_faces, edge_faces, edge_flanks })
}

/// True when every edge joins an over-passage to an under-passage, i.e.
/// walking along any component the crossings alternate over and under.
pub fn is_alternating(d: &LinkDiagram) -> bool {
    (0..d.edge_count()).all(|e| {
        let [(_, s), (_, t)] = d.edge_ends(e);
        s % 2 != t % 2
    })
}

/// Crossings whose opposite corners lie in the same face (nugatory
/// crossings). The diagram is reduced when the list is empty.
pub fn reducedness_check(d: &LinkDiagram, f: &FaceDecomposition) -> (bool, Vec<usize>) {
    let offenders: Vec<usize> = (0..d.crossing_count())
        .filter(|&x| {
            let cf = f.corner_faces[x];
            cf[0] == cf[2] || cf[1] == cf[3]
        })
        .collect();
    (offenders.is_empty(), offenders)
}

/// A maximal chain of bigons touching end to end, or a lone crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigonChain {
    /// Crossings in order along the chain.
    pub crossings: Vec<usize>,
    /// Bigon faces in order; empty for a lone crossing.
    pub bigons: Vec<usize>,
    /// The two faces running along the chain; `None` for a lone crossing.
    pub side_faces: Option<[usize; 2]>,
}

impl BigonChain {
    /// Number of crossings in the chain.
    pub fn crossing_length(&self) -> usize {
        self.crossings.len()
    }
}

/// Census of maximal bigon chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistStats {
    pub twist_number: usize,
    /// Crossing lengths, in decreasing order.
    pub chain_lengths: Vec<usize>,
    /// `t[i]` = number of chains of crossing length `i`.
    pub t: BTreeMap<usize, usize>,
    pub chains: Vec<BigonChain>,
}

impl TwistStats {
    /// Builds the census from a list of chain lengths alone.
    pub fn from_lengths(lengths: &[usize]) -> Self {
        let mut chain_lengths = lengths.to_vec();
        chain_lengths.sort_unstable_by(|a, b| b.cmp(a));
        let mut t = BTreeMap::new();
        for &l in &chain_lengths {
            *t.entry(l).or_insert(0) += 1;
        }
        TwistStats { twist_number: chain_lengths.len(), chain_lengths, t, chains: Vec::new() }
    }

    /// Builds the census from counts `t_1, t_2, …`.
    pub fn from_counts(counts: &[usize]) -> Self {
        let lengths: Vec<usize> = counts
            .iter()
            .enumerate()
            .flat_map(|(i, &n)| std::iter::repeat_n(i + 1, n))
            .collect();
        Self::from_lengths(&lengths)
    }

    pub fn t(&self, i: usize) -> usize {
        self.t.get(&i).copied().unwrap_or(0)
    }

    /// Number of chains of crossing length at least `i`.
    pub fn g(&self, i: usize) -> usize {
        self.t.range(i..).map(|(_, n)| n).sum()
    }

    pub fn total_crossings(&self) -> usize {
        self.chain_lengths.iter().sum()
    }
}

/// Groups the crossings of a reduced diagram into maximal bigon chains.
pub fn bigon_chain_stats(d: &LinkDiagram, f: &FaceDecomposition) -> Result<TwistStats, DiagramError> {
    let (reduced, offenders) = reducedness_check(d, f);
    if !reduced {
        return Err(DiagramError::NotReduced(offenders));
    }
    let c = d.crossing_count();
    let is_bigon = |face: usize| f.face_size(face) == 2;

    // bigon -> the (crossing, corner) pairs where it appears
    let mut bigon_corners: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    // bigon -> bigons it meets end to end
    let mut links: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for x in 0..c {
        let cf = f.corner_faces[x];
        let corners: Vec<usize> = (0..4).filter(|&k| is_bigon(cf[k])).collect();
        for &k in &corners {
            bigon_corners.entry(cf[k]).or_default().push((x, k));
        }
        match corners.as_slice() {
            [] | [_] => {}
            [k, l] if l - k == 2 => {
                let (p, q) = (cf[*k], cf[*l]);
                links.entry(p).or_default().push((q, x));
                links.entry(q).or_default().push((p, x));
            }
            _ => return Err(DiagramError::SideBySideBigons { crossing: x }),
        }
    }
    for (&face, corners) in &bigon_corners {
        if corners[0].0 == corners[1].0 {
            return Err(DiagramError::DegenerateBigon { face, crossing: corners[0].0 });
        }
    }

    let degree = |b: usize| links.get(&b).map_or(0, Vec::len);
    let mut chains = Vec::new();
    let mut visited = BTreeSet::new();
    let mut on_chain = vec![false; c];
    for &start in bigon_corners.keys() {
        if !visited.insert(start) {
            continue;
        }
        let mut component = vec![start];
        let mut stack = vec![start];
        while let Some(b) = stack.pop() {
            for &(g, _) in links.get(&b).into_iter().flatten() {
                if visited.insert(g) {
                    component.push(g);
                    stack.push(g);
                }
            }
        }
        let Some(&end) = component.iter().find(|&&b| degree(b) <= 1) else {
            let crossings: BTreeSet<usize> = component
                .iter()
                .flat_map(|b| bigon_corners[b].iter().map(|&(x, _)| x))
                .collect();
            return Err(DiagramError::CyclicChain { crossings: crossings.into_iter().collect() });
        };

        let mut bigons = vec![end];
        let mut inner = Vec::new();
        let mut prev = None;
        let mut cur = end;
        while let Some(&(g, x)) = links
            .get(&cur)
            .into_iter()
            .flatten()
            .find(|&&(g, _)| Some(g) != prev)
        {
            inner.push(x);
            bigons.push(g);
            prev = Some(cur);
            cur = g;
        }
        let outer = |bigon: usize, skip: Option<usize>| {
            bigon_corners[&bigon]
                .iter()
                .copied()
                .find(|&(x, _)| Some(x) != skip)
                .expect("bigons have two corners")
        };
        let first = outer(end, inner.first().copied());
        let last = if bigons.len() == 1 {
            bigon_corners[&end][1]
        } else {
            outer(cur, inner.last().copied())
        };
        let mut crossings = vec![first.0];
        crossings.extend(&inner);
        crossings.push(last.0);

        let (x, k) = first;
        let cf = f.corner_faces[x];
        let side_faces = Some([cf[(k + 1) % 4], cf[(k + 3) % 4]]);
        for &x in &crossings {
            on_chain[x] = true;
        }
        chains.push(BigonChain { crossings, bigons, side_faces });
    }
    for (x, _) in on_chain.iter().enumerate().filter(|(_, &on)| !on) {
        chains.push(BigonChain { crossings: vec![x], bigons: Vec::new(), side_faces: None });
    }

    let lengths: Vec<usize> = chains.iter().map(BigonChain::crossing_length).collect();
    let mut stats = TwistStats::from_lengths(&lengths);
    stats.chains = chains;
    Ok(stats)
}

/// Pairs of distinct chains that pass through the same two faces at
/// opposite corners of one of their crossings. Such a pair can be merged by
/// a flype, so a twist-reduced diagram has none.
pub fn flype_obstructions(f: &FaceDecomposition, stats: &TwistStats) -> Vec<(usize, usize)> {
    let mut seen: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    for (id, chain) in stats.chains.iter().enumerate() {
        let pairs: Vec<(usize, usize)> = match chain.side_faces {
            Some([a, b]) => vec![(a.min(b), a.max(b))],
            None => {
                let cf = f.corner_faces[chain.crossings[0]];
                vec![(cf[0].min(cf[2]), cf[0].max(cf[2])), (cf[1].min(cf[3]), cf[1].max(cf[3]))]
            }
        };
        for p in pairs {
            seen.entry(p).or_default().insert(id);
        }
    }
    let mut out = BTreeSet::new();
    for ids in seen.values() {
        let ids: Vec<usize> = ids.iter().copied().collect();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                out.insert((a, b));
            }
        }
    }
    out.into_iter().collect()
}

/// Recognizes the standard diagram of the Borromean rings: six crossings,
/// three components, alternating, all eight faces triangles.
pub fn borromean_detect(d: &LinkDiagram, f: &FaceDecomposition) -> bool {
    d.crossing_count() == 6 && d.component_count() == 3 && is_alternating(d) && f.b(3) == 8
}

/// Replaces a chain of bigons by a chain of `target` crossings (at least
/// 2), smoothing interior crossings so that their two bigons merge.
/// Smoothing preserves alternation; the number of components may change.
pub fn shorten_chain(
    d: &LinkDiagram,
    f: &FaceDecomposition,
    chain: &BigonChain,
    target: usize,
) -> Result<LinkDiagram, DiagramError> {
    assert!(target >= 2, "a drilled chain keeps two crossings");
    let k = chain.crossing_length();
    if k <= target {
        return Ok(d.clone());
    }
    let interior = &chain.crossings[1..k - 1];
    let mut quads: Vec<Option<Quadruple>> = d.crossings.iter().copied().map(Some).collect();
    for &x in &interior[..k - target] {
        let cf = f.corner_faces[x];
        let p = (0..4)
            .find(|&p| f.face_size(cf[p]) == 2 && f.face_size(cf[(p + 2) % 4]) == 2)
            .expect("interior chain crossings lie between two bigons");
        let q = quads[x].take().expect("each crossing is smoothed once");
        // join slots p+1 with p+2 and p+3 with p
        for (keep, drop) in [(q[(p + 1) % 4], q[(p + 2) % 4]), (q[(p + 3) % 4], q[p])] {
            for other in quads.iter_mut().flatten() {
                for l in other.iter_mut() {
                    if *l == drop {
                        *l = keep;
                    }
                }
            }
        }
    }
    LinkDiagram::relabeled(quads.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)";
    const FIGURE_EIGHT: &str = "X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)";
    const BORROMEAN: &str = "X(5,1,6,4),X(1,9,2,12),X(7,2,8,3),X(3,10,4,11),X(9,5,10,8),X(11,6,12,7)";
    // trefoil with a Reidemeister I kink spliced into edge 6
    const TREFOIL_KINK: &str = "X(1,4,2,5),X(3,6,4,1),X(5,2,7,3),X(6,8,8,7)";

    #[test]
    fn parses_trefoil() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.edge_count(), 6);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.to_string(), TREFOIL);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_pd(""), Err(DiagramError::Empty));
        assert_eq!(parse_pd("  \n "), Err(DiagramError::Empty));
        assert_eq!(
            parse_pd("X(1,1,1,1)"),
            Err(DiagramError::LabelMultiplicity { label: 1, count: 4 })
        );
        assert!(matches!(parse_pd("X(1,2,3)"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(parse_pd("X(1,2,3,4"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(parse_pd("X(0,1,1,0)"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(parse_pd("X(1,-2,2,1)"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(parse_pd("X(1,2,2,1) X(3,4,4,3)"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(parse_pd("X(1,2,2,1),"), Err(DiagramError::Syntax { .. })));
        assert_eq!(
            parse_pd("X(1,2,2,1),X(3,4,4,3)"),
            Err(DiagramError::Disconnected { pieces: 2 })
        );
    }

    #[test]
    fn whitespace_is_ignored() {
        let d = parse_pd(" X( 1, 4 ,2,5 ) ,\tX(3,6,4,1),X(5,2,6,3)\n").unwrap();
        assert_eq!(d, parse_pd(TREFOIL).unwrap());
    }

    #[test]
    fn named_lines() {
        let (name, d) = parse_named_line("3_1: X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)").unwrap();
        assert_eq!(name, "3_1");
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(parse_named_line("X(1,2,2,1)"), Err(DiagramError::MissingName));
        assert_eq!(parse_named_line(" : X(1,2,2,1)"), Err(DiagramError::MissingName));
        let entries = parse_batch("# header\n\na: X(1,2,2,1)\nb: X(1,1\n");
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].0, 3);
        assert!(entries[0].1.is_ok());
        assert_eq!(entries[1].0, 4);
        assert!(entries[1].1.is_err());
    }

    #[test]
    fn trefoil_faces() {
        let d = parse_pd(TREFOIL).unwrap();
        let f = compute_faces(&d).unwrap();
        assert_eq!(f.face_count(), 5);
        assert_eq!(f.b(2), 3);
        assert_eq!(f.b(3), 2);
        assert_eq!(f.euler_sum(), 8);
        assert_eq!(f.census(), "2:3 3:2");
    }

    #[test]
    fn figure_eight_faces() {
        let d = parse_pd(FIGURE_EIGHT).unwrap();
        let f = compute_faces(&d).unwrap();
        assert_eq!((f.b(2), f.b(3), f.face_count()), (2, 4, 6));
        assert_eq!(f.b.values().sum::<usize>(), 6);
    }

    #[test]
    fn non_planar_code_is_rejected() {
        // virtual trefoil: two crossings whose rotation system has genus one
        let d = parse_pd("X(1,3,2,4),X(4,1,3,2)").unwrap();
        assert!(matches!(compute_faces(&d), Err(DiagramError::TraversalInconsistency { .. })));
    }

    #[test]
    fn alternation() {
        assert!(is_alternating(&parse_pd(TREFOIL).unwrap()));
        assert!(is_alternating(&parse_pd("X(1,2,2,1)").unwrap()));
        assert!(is_alternating(&parse_pd("X(1,1,2,2)").unwrap()));
        // first quadruple rotated one step: that crossing's over/under swaps
        assert!(!is_alternating(&parse_pd("X(4,2,5,1),X(3,6,4,1),X(5,2,6,3)").unwrap()));
    }

    #[test]
    fn one_crossing_kink() {
        let d = parse_pd("X(1,2,2,1)").unwrap();
        let f = compute_faces(&d).unwrap();
        assert_eq!(f.face_count(), 3);
        assert_eq!(reducedness_check(&d, &f), (false, vec![0]));
    }

    #[test]
    fn reducedness() {
        for code in [TREFOIL, FIGURE_EIGHT] {
            let d = parse_pd(code).unwrap();
            let f = compute_faces(&d).unwrap();
            assert_eq!(reducedness_check(&d, &f), (true, vec![]));
        }
        let d = parse_pd(TREFOIL_KINK).unwrap();
        let f = compute_faces(&d).unwrap();
        assert!(is_alternating(&d));
        assert_eq!(reducedness_check(&d, &f), (false, vec![3]));
        assert!(matches!(bigon_chain_stats(&d, &f), Err(DiagramError::NotReduced(_))));
    }

    #[test]
    fn figure_eight_chains() {
        let d = parse_pd(FIGURE_EIGHT).unwrap();
        let f = compute_faces(&d).unwrap();
        let s = bigon_chain_stats(&d, &f).unwrap();
        assert_eq!(s.twist_number, 2);
        assert_eq!(s.t(2), 2);
        assert_eq!(s.t(1) + s.t(3) + s.t(4), 0);
        assert_eq!(s.total_crossings(), 4);
        for chain in &s.chains {
            let [a, b] = chain.side_faces.unwrap();
            assert_eq!((f.face_size(a), f.face_size(b)), (3, 3));
        }
        assert!(flype_obstructions(&f, &s).is_empty());
    }

    #[test]
    fn borromean_chains_and_detection() {
        let d = parse_pd(BORROMEAN).unwrap();
        let f = compute_faces(&d).unwrap();
        assert_eq!(f.b(3), 8);
        assert!(borromean_detect(&d, &f));
        let s = bigon_chain_stats(&d, &f).unwrap();
        assert_eq!((s.twist_number, s.t(1)), (6, 6));
        assert!(flype_obstructions(&f, &s).is_empty());

        let fig8 = parse_pd(FIGURE_EIGHT).unwrap();
        assert!(!borromean_detect(&fig8, &compute_faces(&fig8).unwrap()));
        // 6_2^2: six crossings, two components
        let l = parse_pd("X(7,1,8,6),X(1,7,2,12),X(9,3,10,2),X(3,11,4,10),X(11,5,12,4),X(5,9,6,8)").unwrap();
        assert_eq!(l.component_count(), 2);
        assert!(!borromean_detect(&l, &compute_faces(&l).unwrap()));
    }

    #[test]
    fn trefoil_chain_is_cyclic() {
        let d = parse_pd(TREFOIL).unwrap();
        let f = compute_faces(&d).unwrap();
        assert!(matches!(bigon_chain_stats(&d, &f), Err(DiagramError::CyclicChain { .. })));
    }

    #[test]
    fn hopf_link_has_side_by_side_bigons() {
        let d = parse_pd("X(4,1,3,2),X(2,3,1,4)").unwrap();
        let f = compute_faces(&d).unwrap();
        assert_eq!(f.b(2), 4);
        assert!(matches!(
            bigon_chain_stats(&d, &f),
            Err(DiagramError::SideBySideBigons { .. })
        ));
    }

    #[test]
    fn stats_from_counts() {
        let s = TwistStats::from_counts(&[1, 0, 2, 0, 1]);
        assert_eq!(s.chain_lengths, vec![5, 3, 3, 1]);
        assert_eq!((s.t(1), s.t(3), s.t(5)), (1, 2, 1));
        assert_eq!((s.g(1), s.g(2), s.g(4), s.g(6)), (4, 3, 1, 0));
        assert_eq!(s.total_crossings(), 12);
    }

    #[test]
    fn shortening_a_twist_region() {
        // 6_1 has a four-crossing chain beside a clasp
        let d = parse_pd("X(7,12,8,1),X(1,6,2,7),X(11,3,12,2),X(3,11,4,10),X(9,5,10,4),X(5,9,6,8)").unwrap();
        let f = compute_faces(&d).unwrap();
        let s = bigon_chain_stats(&d, &f).unwrap();
        assert_eq!(s.chain_lengths, vec![4, 2]);
        let long = s.chains.iter().find(|c| c.crossing_length() == 4).unwrap();
        let short = shorten_chain(&d, &f, long, 2).unwrap();
        assert_eq!(short.crossing_count(), 4);
        assert!(is_alternating(&short));
        let g = compute_faces(&short).unwrap();
        let t = bigon_chain_stats(&short, &g).unwrap();
        assert_eq!(t.chain_lengths, vec![2, 2]);
        assert_eq!(g.census(), "2:2 3:4");
        let [a, b] = long.side_faces.unwrap();
        assert_eq!(f.face_size(a) + f.face_size(b), 10);
    }
}
