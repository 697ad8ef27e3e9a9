//! Counting quasimorphisms on the ray graph, and the direction/reversal
//! analysis along the translation axis that powers them.
//!
//! The star object is the axis `(α_k)_{k∈Z}` of the translation `h`. A word
//! `w` is a finite oriented run along that axis; `c_w(g)` measures how many
//! disjoint translated copies of `w` a most-economical path from `p` to
//! `g·p` must carry, and `q_w = c_w − c_{w⁻¹}` is the antisymmetrized count.
//! Everything here is certificate-driven: distances come from
//! [`crate::graphs`] slices, copies from explicitly verified translates
//! below and crossing-profile screens above, and every report says which
//! enumeration produced it.

use std::collections::{BinaryHeap, HashMap};

use serde::Serialize;

use crate::coding::{a_value, alpha, alpha_neg, Code, RayCode};
use crate::graphs::{distance, multi_bfs, GraphSlice, SliceKind};
use crate::mcg::{apply_ray, power, MappingClass};
use crate::model::{
    build_model, canonical_ray, codes_disjoint, positive_intersection, realize, tighten,
};

/// Largest axis index the reversal analysis will compare against by
/// equality; vertex words grow like 3^|k|, so this stays desk-sized.
const MAX_EQ_INDEX: i64 = 10;

/// Largest axis index tested by full disjointness (quadratic in the word
/// lengths, so capped tighter than the equality window).
const MAX_FULL_INDEX: i64 = 8;

/// Length cap for the move-word search that certifies copy witnesses.
const MOVE_SEARCH_DEPTH: usize = 3;

// ---------------------------------------------------------------------------
// The axis
// ---------------------------------------------------------------------------

/// Canonical vertex `α_k` of the translation axis, any `k ∈ Z`. Negative
/// indices are the backward orbit, spelled by the index mirror.
pub fn axis_vertex(k: i64) -> RayCode {
    let raw = if k >= 0 { alpha(k as u32) } else { alpha_neg((-k) as u32) };
    canonical_ray(&raw)
}

/// Axis index of a canonical ray, if it is an axis vertex. For k ≥ 0 the
/// index equals the prefix depth `A`; for k < 0 it equals the attachment
/// index, so at most two candidates are ever compared.
fn axis_index_of(r: &RayCode) -> Option<i64> {
    if r.north {
        return None;
    }
    let j = a_value(r) as i64;
    if *r == axis_vertex(j) {
        return Some(j);
    }
    let j = r.attach.0;
    if j < 0 && *r == axis_vertex(j) {
        return Some(j);
    }
    None
}

fn rays_disjoint(a: &RayCode, b: &RayCode) -> bool {
    codes_disjoint(&Code::Ray(a.clone()), &Code::Ray(b.clone()))
}

/// Both oriented crossing numbers of a pair in one model build.
fn crossing_pair(a: &Code, b: &Code) -> (u64, u64) {
    let m = build_model(&[a.clone(), b.clone()]);
    let ta = tighten(&m, &realize(&m, a).expect("window fits"));
    let tb = tighten(&m, &realize(&m, b).expect("window fits"));
    (positive_intersection(&m, &ta, &tb), positive_intersection(&m, &tb, &ta))
}

/// A contiguous oriented run `(α_m, …, α_n)` along the axis, `m < n`.
/// Construction verifies the chain: consecutive vertices are adjacent.
#[derive(Clone, Debug, Serialize)]
pub struct AxisSegment {
    lo: i64,
    vertices: Vec<RayCode>,
}

impl AxisSegment {
    pub fn new(lo: i64, hi: i64) -> AxisSegment {
        assert!(lo < hi, "an axis segment needs at least one edge");
        let vertices: Vec<RayCode> = (lo..=hi).map(axis_vertex).collect();
        for pair in vertices.windows(2) {
            assert!(
                pair[0] != pair[1] && rays_disjoint(&pair[0], &pair[1]),
                "consecutive axis vertices must be adjacent"
            );
        }
        AxisSegment { lo, vertices }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.vertices.len() as i64 - 1
    }

    /// Length in edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> &[RayCode] {
        &self.vertices
    }
}

/// Stability parameter for quasi-geodesics in the ray graph, used as a
/// knob: the true constant is not computed here, and every verdict that
/// depends on it records the value used.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MorseConfig {
    pub b: u32,
}

impl MorseConfig {
    pub fn new(b: u32) -> MorseConfig {
        assert!(b >= 1, "the stability parameter must be at least 1");
        MorseConfig { b }
    }

    /// Segment length under which the reversal analysis loses its teeth.
    pub fn min_w_len(&self) -> usize {
        10 * self.b as usize
    }
}

impl Default for MorseConfig {
    fn default() -> MorseConfig {
        MorseConfig::new(1)
    }
}

// ---------------------------------------------------------------------------
// Certified small distances
// ---------------------------------------------------------------------------

/// Sound bounded-distance tester over a fixed vertex pool: BFS in the
/// induced subgraph only overestimates distances, so a positive answer is a
/// certificate and a negative answer is merely "not certified".
struct DistOracle {
    codes: Vec<RayCode>,
    index: HashMap<RayCode, usize>,
    memo: HashMap<(usize, usize), bool>,
}

impl DistOracle {
    fn new(pool: &[&[RayCode]]) -> DistOracle {
        let mut o =
            DistOracle { codes: Vec::new(), index: HashMap::new(), memo: HashMap::new() };
        for group in pool {
            for r in *group {
                o.intern(r);
            }
        }
        o
    }

    fn intern(&mut self, r: &RayCode) -> usize {
        if let Some(&i) = self.index.get(r) {
            return i;
        }
        let i = self.codes.len();
        self.codes.push(r.clone());
        self.index.insert(r.clone(), i);
        i
    }

    fn disjoint_idx(&mut self, i: usize, j: usize) -> bool {
        let key = (i.min(j), i.max(j));
        if let Some(&d) = self.memo.get(&key) {
            return d;
        }
        let d = rays_disjoint(&self.codes[key.0], &self.codes[key.1]);
        self.memo.insert(key, d);
        d
    }

    /// True when the pool certifies `d(x, y) ≤ k`.
    fn dist_le(&mut self, x: &RayCode, y: &RayCode, k: u32) -> bool {
        let xi = self.intern(x);
        let yi = self.intern(y);
        if xi == yi {
            return true;
        }
        let mut seen = vec![false; self.codes.len()];
        seen[xi] = true;
        let mut frontier = vec![xi];
        for _ in 0..k {
            let mut next = Vec::new();
            for &f in &frontier {
                for c in 0..self.codes.len() {
                    if !seen[c] && self.disjoint_idx(f, c) {
                        if c == yi {
                            return true;
                        }
                        seen[c] = true;
                        next.push(c);
                    }
                }
            }
            frontier = next;
        }
        false
    }
}

// ---------------------------------------------------------------------------
// Same-direction test
// ---------------------------------------------------------------------------

/// Outcome of comparing two oriented segments along a carrier path.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Same,
    Opposite,
    Indeterminate,
}

/// Evidence for a direction verdict. `witness` is the decisive carrier
/// vertex certified within `C` of the second segment's endpoint;
/// `end_distance_within_triple` reports whether the two endpoints were
/// certified within `3C` of each other, the expected consequence of a
/// same-direction pair; `start_within_c` records the start-proximity
/// hypothesis, which comparisons of carrier subruns may stretch.
#[derive(Clone, Debug, Serialize)]
pub struct DirectionReport {
    pub verdict: Direction,
    pub c: u32,
    pub start_within_c: bool,
    pub witness: Option<RayCode>,
    pub end_distance_within_triple: Option<bool>,
    pub notices: Vec<String>,
}

/// Decides whether `g2` runs the same way as `g1` along `carrier`.
///
/// `g1` must be a contiguous block of `carrier` in matching orientation;
/// both segments have the same edge length, at least `3C`. Containment of
/// `g2` in the `C`-neighborhood of the carrier is verified by certificate,
/// and failure to certify yields an indeterminate verdict rather than a
/// guess; the start-proximity hypothesis is recorded but not gating. The
/// verdict scans the carrier vertices certified within `C` of `g2`'s
/// endpoint: same direction means every one of them sits strictly ahead of
/// `g1`'s start — under the full hypotheses they cluster on one side, so a
/// single straggler already decides the opposite.
pub fn same_direction(
    g1: &[RayCode],
    g2: &[RayCode],
    carrier: &[RayCode],
    c: u32,
) -> DirectionReport {
    assert!(c >= 1, "the comparison constant must be at least 1");
    assert!(g1.len() == g2.len(), "segments must have equal length");
    assert!(g1.len() >= 3 * c as usize + 1, "segments must be at least 3C edges long");
    let g1: Vec<RayCode> = g1.iter().map(canonical_ray).collect();
    let g2: Vec<RayCode> = g2.iter().map(canonical_ray).collect();
    let carrier: Vec<RayCode> = carrier.iter().map(canonical_ray).collect();
    for pair in carrier.windows(2) {
        assert!(
            pair[0] != pair[1] && rays_disjoint(&pair[0], &pair[1]),
            "carrier must be a path"
        );
    }
    let p1 = carrier
        .windows(g1.len())
        .position(|w| *w == g1[..])
        .expect("first segment must lie on the carrier in its orientation");
    let q1 = p1 + g1.len() - 1;

    let mut oracle = DistOracle::new(&[&carrier, &g1, &g2]);
    let mut notices = Vec::new();

    let start_within_c = oracle.dist_le(&g2[0], &g1[0], c);
    if !start_within_c {
        notices.push("start vertices not certified within C of each other".into());
    }
    for v in &g2 {
        if !carrier.iter().any(|u| oracle.dist_le(v, u, c)) {
            notices.push(format!("{v} not certified within C of the carrier"));
            return DirectionReport {
                verdict: Direction::Indeterminate,
                c,
                start_within_c,
                witness: None,
                end_distance_within_triple: None,
                notices,
            };
        }
    }

    let q2 = &g2[g2.len() - 1];
    let qualifying: Vec<usize> =
        (0..carrier.len()).filter(|&i| oracle.dist_le(&carrier[i], q2, c)).collect();
    if qualifying.is_empty() {
        notices.push("no carrier vertex certified within C of the second endpoint".into());
        return DirectionReport {
            verdict: Direction::Indeterminate,
            c,
            start_within_c,
            witness: None,
            end_distance_within_triple: None,
            notices,
        };
    }
    let laggard = qualifying.iter().copied().find(|&i| i <= p1);
    let (verdict, witness_at) = match laggard {
        None => (
            Direction::Same,
            *qualifying.iter().min_by_key(|&&i| i.abs_diff(q1)).expect("nonempty"),
        ),
        Some(i) => (Direction::Opposite, i),
    };
    let end_ok = oracle.dist_le(&carrier[q1], q2, 3 * c);
    DirectionReport {
        verdict,
        c,
        start_within_c,
        witness: Some(carrier[witness_at].clone()),
        end_distance_within_triple: Some(end_ok),
        notices,
    }
}

// ---------------------------------------------------------------------------
// Non-reversal of the axis
// ---------------------------------------------------------------------------

/// Verdict of [`non_reversal_check`]. `Reversed` would witness a mapping
/// class carrying a long axis run into the tight axis neighborhood with
/// flipped orientation; no test has ever produced one.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonReversalVerdict {
    SameDirection,
    Reversed,
    Escapes,
    Indeterminate,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonReversalReport {
    pub b: u32,
    pub verdict: NonReversalVerdict,
    /// Prefix depths `A` along the image of the segment. An exact double
    /// step down `A(i+2) = A(i) − 2` is impossible — it would force a
    /// positive crossing where translation invariance forbids one — and is
    /// asserted away, so readers can lean on this profile.
    pub a_profile: Vec<u32>,
    /// Axis indices the image vertices were located at, when all were.
    pub located: Vec<i64>,
    pub direction: Option<DirectionReport>,
    pub notices: Vec<String>,
}

/// Tests whether `g` carries the axis run `w` back into the `B`-neighborhood
/// of the axis, and with which orientation.
///
/// The image is located vertex by vertex: for prefix depth above `B` the
/// 1-Lipschitz bound pins the only axis indices a near vertex could have,
/// so failure there is a certified escape; at depth ≤ `B` the negative half
/// of the axis is screened within a bounded window only, so failure is
/// reported indeterminate, never guessed. When every vertex lands, the
/// image is compared against the axis run it landed on.
pub fn non_reversal_check(
    w: &AxisSegment,
    g: &MappingClass,
    cfg: &MorseConfig,
) -> NonReversalReport {
    let b = cfg.b;
    let blen = b as usize;
    assert!(w.len() > 8 * blen + 1, "the segment must be longer than 8B + 1 edges");

    let image: Vec<RayCode> = w.vertices().iter().map(|v| canonical_ray(&apply_ray(g, v))).collect();
    let a_profile: Vec<u32> = image.iter().map(a_value).collect();
    for i in 0..a_profile.len().saturating_sub(2) {
        assert!(
            a_profile[i + 2] + 2 != a_profile[i],
            "a double step down of 2 in A contradicts crossing invariance"
        );
    }

    let report = |verdict, located, direction, notices| NonReversalReport {
        b,
        verdict,
        a_profile: a_profile.clone(),
        located,
        direction,
        notices,
    };

    // Locate each image vertex on the axis. Cheap certified escapes first:
    // a vertex with prefix depth above B has at most 2B + 1 possible axis
    // neighbors, all with positive index.
    let window_lo = (w.lo() - (b as i64 + 2)).max(-MAX_FULL_INDEX);
    let mut located = vec![None; image.len()];
    let mut order: Vec<usize> = (0..image.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(a_profile[i]));
    for &i in &order {
        let x = &image[i];
        let ax = a_profile[i] as i64;
        let mut candidates: Vec<i64> = if ax > b as i64 {
            (ax - b as i64..=ax + b as i64).collect()
        } else {
            (window_lo..=ax + b as i64).collect()
        };
        // Word length grows with |index| (shifted by one on the negative
        // side), so test small spellings first — and equality before any
        // quadratic disjointness work, so exact translates land exactly.
        candidates.sort_by_key(|&j| if j >= 0 { j } else { -j - 1 });
        let mut skipped = false;
        let mut found = None;
        for &j in &candidates {
            if j.abs() > MAX_EQ_INDEX {
                skipped = true;
            } else if *x == axis_vertex(j) {
                found = Some(j);
                break;
            }
        }
        if found.is_none() {
            for &j in &candidates {
                if j.abs() > MAX_FULL_INDEX {
                    skipped = true;
                    continue;
                }
                let v = axis_vertex(j);
                if b == 1 {
                    if rays_disjoint(x, &v) {
                        found = Some(j);
                        break;
                    }
                } else {
                    let axis_window: Vec<RayCode> =
                        (window_lo..=(w.hi() + b as i64 + 2).min(MAX_FULL_INDEX))
                            .map(axis_vertex)
                            .collect();
                    let mut oracle = DistOracle::new(&[&axis_window, &image]);
                    if oracle.dist_le(x, &v, b) {
                        found = Some(j);
                        break;
                    }
                }
            }
        }
        match found {
            Some(j) => located[i] = Some(j),
            None if ax > b as i64 && !skipped => {
                return report(
                    NonReversalVerdict::Escapes,
                    Vec::new(),
                    None,
                    vec![format!(
                        "image vertex {i} has prefix depth {ax} and is certified \
                         farther than B from every possible axis vertex"
                    )],
                );
            }
            None => {
                return report(
                    NonReversalVerdict::Indeterminate,
                    Vec::new(),
                    None,
                    vec![format!(
                        "image vertex {i} found no axis neighbor within the tested \
                         window; vertices beyond it were not screened"
                    )],
                );
            }
        }
    }

    let located: Vec<i64> = located.into_iter().map(|j| j.expect("all located")).collect();
    let j0 = located[0];
    let len = w.len() as i64;
    let lo_c = (j0.min(*located.iter().min().expect("nonempty")) - 1).max(-MAX_EQ_INDEX);
    let hi_c = (j0 + len).max(*located.iter().max().expect("nonempty")) + 1;
    if hi_c > MAX_EQ_INDEX {
        return report(
            NonReversalVerdict::Indeterminate,
            located,
            None,
            vec!["the aligned comparison run leaves the tested axis window".into()],
        );
    }
    let g1: Vec<RayCode> = (j0..=j0 + len).map(axis_vertex).collect();
    let carrier: Vec<RayCode> = (lo_c..=hi_c).map(axis_vertex).collect();
    let dir = same_direction(&g1, &image, &carrier, b);
    let verdict = match dir.verdict {
        Direction::Same => NonReversalVerdict::SameDirection,
        Direction::Opposite => NonReversalVerdict::Reversed,
        Direction::Indeterminate => NonReversalVerdict::Indeterminate,
    };
    report(verdict, located, Some(dir), Vec::new())
}

// ---------------------------------------------------------------------------
// Copies of a word along a path
// ---------------------------------------------------------------------------

/// Matches windows of a path against translated copies of a fixed vertex
/// sequence: exactly by axis powers and bounded move words (the witnesses),
/// and necessarily by the translation-invariant crossing profile (the
/// screen for the upper bound).
struct CopyMatcher {
    seq_axis: Vec<i64>,
    profile: Vec<Vec<(u64, u64)>>,
    move_images: HashMap<Vec<RayCode>, String>,
}

impl CopyMatcher {
    fn new(seq: &[RayCode]) -> CopyMatcher {
        assert!(seq.len() >= 2, "a copy needs at least one edge");
        let n = seq.len();
        let codes: Vec<Code> = seq.iter().map(|r| Code::Ray(r.clone())).collect();
        let mut profile = vec![vec![(0, 0); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let (ij, ji) = crossing_pair(&codes[i], &codes[j]);
                profile[i][j] = (ij, ji);
                profile[j][i] = (ji, ij);
                if j == i + 1 {
                    assert!(ij == 0 && ji == 0, "consecutive vertices must be disjoint");
                }
            }
        }
        let seq_axis: Vec<i64> = seq
            .iter()
            .map(|r| axis_index_of(r).expect("copy templates are axis runs"))
            .collect();

        // Images of the template under every move word up to the search
        // depth, shortest spelling first.
        let moves = ["t1", "t1'", "t2", "t2'", "phi"];
        let mut move_images: HashMap<Vec<RayCode>, String> = HashMap::new();
        let mut layer: Vec<(String, Vec<RayCode>)> = vec![(String::new(), seq.to_vec())];
        move_images.insert(seq.to_vec(), "h^0".into());
        for _ in 0..MOVE_SEARCH_DEPTH {
            let mut next = Vec::new();
            for (word, vertices) in &layer {
                for m in moves {
                    let mc: MappingClass = m.parse().expect("move token");
                    let image: Vec<RayCode> =
                        vertices.iter().map(|v| canonical_ray(&apply_ray(&mc, v))).collect();
                    let spelled =
                        if word.is_empty() { m.to_string() } else { format!("{m} {word}") };
                    if !move_images.contains_key(&image) {
                        move_images.insert(image.clone(), spelled.clone());
                    }
                    next.push((spelled, image));
                }
            }
            layer = next;
        }
        CopyMatcher { seq_axis, profile, move_images }
    }

    fn len(&self) -> usize {
        self.seq_axis.len()
    }

    /// Exact witness for a window being a translate of the template.
    fn witness(&self, window: &[RayCode]) -> Option<String> {
        if let Some(idx) =
            window.iter().map(axis_index_of).collect::<Option<Vec<i64>>>()
        {
            let k = idx[0] - self.seq_axis[0];
            if (1..idx.len()).all(|i| idx[i] - self.seq_axis[i] == k) {
                return Some(format!("h^{k}"));
            }
        }
        self.move_images.get(window).cloned()
    }

    /// Translation-invariant necessary conditions: the full oriented
    /// crossing profile, and no exact double step down in prefix depth.
    fn is_candidate(&self, window: &[&RayCode]) -> bool {
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                if window[i] == window[j] {
                    return false;
                }
                if j == i + 1 {
                    continue; // adjacency along the path already says (0, 0)
                }
                let (ij, ji) = crossing_pair(
                    &Code::Ray(window[i].clone()),
                    &Code::Ray(window[j].clone()),
                );
                if (ij, ji) != self.profile[i][j] {
                    return false;
                }
            }
        }
        let depths: Vec<u32> = window.iter().map(|r| a_value(r)).collect();
        for i in 0..n.saturating_sub(2) {
            if depths[i + 2] + 2 == depths[i] {
                return false;
            }
        }
        true
    }
}

/// One certified copy: the path offset it starts at and the move word (or
/// axis power) that carries the template onto it.
#[derive(Clone, Debug, Serialize)]
pub struct CopyWitness {
    pub start: usize,
    pub moves: String,
}

/// Two-sided count of disjoint copies along a path. `lower` packs verified
/// translates, `upper` packs every window that survives the invariant
/// screen; the truth lies between.
#[derive(Clone, Debug, Serialize)]
pub struct CopyCount {
    pub lower: u32,
    pub upper: u32,
    pub witnesses: Vec<CopyWitness>,
    pub candidate_starts: Vec<usize>,
}

/// Maximum number of pairwise edge-disjoint windows of edge length `m`
/// taken greedily from ascending starts — optimal for equal lengths.
fn pack_disjoint(starts: &[usize], m: usize) -> Vec<usize> {
    let mut taken = Vec::new();
    let mut next_free = 0usize;
    for &s in starts {
        if s >= next_free {
            taken.push(s);
            next_free = s + m;
        }
    }
    taken
}

/// Counts disjoint translated copies of `w` read forward along `path`.
/// Copies are whole-window translates under a single mapping class each and
/// may share endpoint vertices but no edges.
pub fn count_copies(path: &[RayCode], w: &AxisSegment) -> CopyCount {
    assert!(!path.is_empty(), "the path must have at least one vertex");
    let path: Vec<RayCode> = path.iter().map(canonical_ray).collect();
    for pair in path.windows(2) {
        assert!(
            pair[0] != pair[1] && rays_disjoint(&pair[0], &pair[1]),
            "path edges must be certified: {} / {} is not an edge",
            pair[0],
            pair[1]
        );
    }
    let m = w.len();
    if path.len() < m + 1 {
        return CopyCount { lower: 0, upper: 0, witnesses: Vec::new(), candidate_starts: Vec::new() };
    }
    let matcher = CopyMatcher::new(w.vertices());
    let mut candidate_starts = Vec::new();
    let mut verified: Vec<(usize, String)> = Vec::new();
    for s in 0..=path.len() - 1 - m {
        let window: Vec<&RayCode> = path[s..=s + m].iter().collect();
        if !matcher.is_candidate(&window) {
            continue;
        }
        candidate_starts.push(s);
        if let Some(moves) = matcher.witness(&path[s..=s + m]) {
            verified.push((s, moves));
        }
    }
    let verified_starts: Vec<usize> = verified.iter().map(|(s, _)| *s).collect();
    let packed_lower = pack_disjoint(&verified_starts, m);
    let packed_upper = pack_disjoint(&candidate_starts, m);
    let witnesses: Vec<CopyWitness> = verified
        .into_iter()
        .filter(|(s, _)| packed_lower.contains(s))
        .map(|(start, moves)| CopyWitness { start, moves })
        .collect();
    CopyCount {
        lower: packed_lower.len() as u32,
        upper: packed_upper.len() as u32,
        witnesses,
        candidate_starts,
    }
}

// ---------------------------------------------------------------------------
// The counting functions c_w and q_w
// ---------------------------------------------------------------------------

/// Interval report for one evaluation of the counting function. The value
/// is `d − inf(length − copies)` over the enumerated paths: the lower end
/// discounts only verified translate windows, the upper end discounts every
/// window passing the invariant screen, so the slice-scoped truth sits
/// between the two. `restriction` records the enumeration universe.
#[derive(Clone, Debug, Serialize)]
pub struct CwReport {
    pub d: u32,
    pub m: usize,
    pub lower: i64,
    pub upper: i64,
    pub exact: bool,
    pub b: u32,
    pub verified_windows: usize,
    pub candidate_windows: usize,
    pub slice_vertices: usize,
    pub slice_edges: usize,
    pub restriction: String,
}

/// Shortest cost from `from` to `to` over unit edges plus discount arcs.
fn discounted_cost(
    n: usize,
    edges: &[Vec<usize>],
    arcs: &[(usize, usize, u32)],
    from: usize,
    to: usize,
) -> Option<u32> {
    let mut jump: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    for &(a, b, w) in arcs {
        jump[a].push((b, w));
    }
    let mut best: Vec<Option<u32>> = vec![None; n];
    let mut heap: BinaryHeap<std::cmp::Reverse<(u32, usize)>> = BinaryHeap::new();
    heap.push(std::cmp::Reverse((0, from)));
    while let Some(std::cmp::Reverse((cost, v))) = heap.pop() {
        if best[v].is_some_and(|b| b <= cost) {
            continue;
        }
        best[v] = Some(cost);
        if v == to {
            return Some(cost);
        }
        for &u in &edges[v] {
            if best[u].is_none() {
                heap.push(std::cmp::Reverse((cost + 1, u)));
            }
        }
        for &(u, w) in &jump[v] {
            if best[u].is_none() {
                heap.push(std::cmp::Reverse((cost + w, u)));
            }
        }
    }
    best[to]
}

/// Core of [`c_w`], shared with the reversed word: the template is any
/// oriented vertex sequence with adjacent consecutive entries.
fn c_of_sequence(
    g: &MappingClass,
    seq: &[RayCode],
    basepoint: &RayCode,
    slice: &GraphSlice,
    cfg: &MorseConfig,
) -> CwReport {
    assert!(slice.kind == SliceKind::RayGraph, "counting runs in the ray graph");
    let p = canonical_ray(basepoint);
    let gp = canonical_ray(&apply_ray(g, &p));
    let cp = Code::Ray(p.clone());
    let cgp = Code::Ray(gp.clone());
    let cert = distance(slice, &cp, &cgp);
    assert!(
        cert.exact,
        "the distance from the basepoint to its image must be certified exactly"
    );
    let d = cert.lower;
    let m = seq.len() - 1;

    // Enumeration universe: the B-neighborhood of the certified geodesics —
    // the slice path behind the certificate, plus the axis run between the
    // endpoints when it lies in the slice (it has the same length, so it is
    // a geodesic too).
    let mut sources: Vec<usize> = cert
        .path
        .as_ref()
        .expect("exact certificates carry a path")
        .iter()
        .map(|c| slice.position(c).expect("certificate path lies in the slice"))
        .collect();
    if let (Some(i), Some(j)) = (axis_index_of(&p), axis_index_of(&gp)) {
        if i.abs_diff(j) == d as u64 {
            let step = if j >= i { 1 } else { -1 };
            let run: Option<Vec<usize>> = (0..=d as i64)
                .map(|t| slice.position(&Code::Ray(axis_vertex(i + step * t))))
                .collect();
            if let Some(run) = run {
                sources.extend(run);
            }
        }
    }
    sources.sort_unstable();
    sources.dedup();
    let depths = multi_bfs(slice, &sources);
    let allowed: Vec<bool> =
        depths.iter().map(|d| d.is_some_and(|d| d <= cfg.b)).collect();

    let n = slice.vertex_count();
    let edges: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            if !allowed[v] {
                return Vec::new();
            }
            slice.neighbors(v).into_iter().filter(|&u| allowed[u]).collect()
        })
        .collect();

    // Profile-pruned window search inside the allowed region.
    let matcher = CopyMatcher::new(seq);
    let mut pair_memo: HashMap<(usize, usize), (u64, u64)> = HashMap::new();
    let vertices = slice.vertices();
    let mut crossing = |a: usize, b: usize| -> (u64, u64) {
        let key = (a.min(b), a.max(b));
        let (ij, ji) =
            *pair_memo.entry(key).or_insert_with(|| crossing_pair(&vertices[key.0], &vertices[key.1]));
        if a <= b {
            (ij, ji)
        } else {
            (ji, ij)
        }
    };
    let ray_at = |v: usize| match &vertices[v] {
        Code::Ray(r) => r,
        Code::Loop(_) => unreachable!("ray slices hold rays"),
    };
    let mut windows: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).filter(|&v| allowed[v]).map(|v| vec![v]).collect();
    while let Some(prefix) = stack.pop() {
        if prefix.len() == m + 1 {
            windows.push(prefix);
            continue;
        }
        let k = prefix.len();
        'next: for &u in &edges[*prefix.last().expect("nonempty")] {
            if prefix.contains(&u) {
                continue;
            }
            for t in 0..k - 1 {
                if crossing(prefix[t], u) != matcher.profile[t][k] {
                    continue 'next;
                }
            }
            let mut ext = prefix.clone();
            ext.push(u);
            stack.push(ext);
        }
    }

    let mut verified_arcs: Vec<(usize, usize, u32)> = Vec::new();
    let mut candidate_arcs: Vec<(usize, usize, u32)> = Vec::new();
    let mut verified_windows = 0usize;
    for window in &windows {
        let codes: Vec<RayCode> = window.iter().map(|&v| ray_at(v).clone()).collect();
        let refs: Vec<&RayCode> = codes.iter().collect();
        if !matcher.is_candidate(&refs) {
            continue;
        }
        let arc = (window[0], window[m], m as u32 - 1);
        candidate_arcs.push(arc);
        if matcher.witness(&codes).is_some() {
            verified_arcs.push(arc);
            verified_windows += 1;
        }
    }
    let candidate_windows = candidate_arcs.len();

    let from = slice.position(&cp).expect("basepoint in slice");
    let to = slice.position(&cgp).expect("image in slice");
    let cost_verified =
        discounted_cost(n, &edges, &verified_arcs, from, to).expect("certificate path connects");
    let cost_candidates =
        discounted_cost(n, &edges, &candidate_arcs, from, to).expect("certificate path connects");
    let lower = d as i64 - cost_verified as i64;
    let upper = d as i64 - cost_candidates as i64;
    assert!((0..=lower.max(0)).contains(&0) && lower <= upper && upper <= d as i64);
    CwReport {
        d,
        m,
        lower,
        upper,
        exact: lower == upper,
        b: cfg.b,
        verified_windows,
        candidate_windows,
        slice_vertices: slice.vertex_count(),
        slice_edges: slice.edge_count(),
        restriction: format!(
            "infimum over slice paths within {} of a certified geodesic; copy \
             witnesses from axis powers and move words of length at most {}",
            cfg.b, MOVE_SEARCH_DEPTH
        ),
    }
}

/// The counting function `c_w(g) = d(p, g·p) − inf(length − copies of w)`,
/// reported as a sound interval over the slice-enumerable paths.
pub fn c_w(
    g: &MappingClass,
    w: &AxisSegment,
    basepoint: &RayCode,
    slice: &GraphSlice,
    cfg: &MorseConfig,
) -> CwReport {
    c_of_sequence(g, w.vertices(), basepoint, slice, cfg)
}

/// The antisymmetrized count `q_w = c_w − c_{w⁻¹}` as an interval.
#[derive(Clone, Debug, Serialize)]
pub struct QwReport {
    pub lower: i64,
    pub upper: i64,
    pub exact: bool,
    pub forward: CwReport,
    pub backward: CwReport,
}

pub fn q_w(
    g: &MappingClass,
    w: &AxisSegment,
    basepoint: &RayCode,
    slice: &GraphSlice,
    cfg: &MorseConfig,
) -> QwReport {
    let forward = c_of_sequence(g, w.vertices(), basepoint, slice, cfg);
    let reversed: Vec<RayCode> = w.vertices().iter().rev().cloned().collect();
    let backward = c_of_sequence(g, &reversed, basepoint, slice, cfg);
    QwReport {
        lower: forward.lower - backward.upper,
        upper: forward.upper - backward.lower,
        exact: forward.exact && backward.exact,
        forward,
        backward,
    }
}

// ---------------------------------------------------------------------------
// Homogenization
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct HomogenizeTerm {
    pub n: u32,
    pub lower: i64,
    pub upper: i64,
    pub exact: bool,
    pub ratio_lower: f64,
    pub ratio_upper: f64,
}

/// Finite homogenization data: the sequence `q_w(gⁿ)/n` and the largest
/// additivity defect `|q(g^{i+j}) − q(g^i) − q(g^j)|` over the exactly
/// evaluated pairs.
#[derive(Clone, Debug, Serialize)]
pub struct HomogenizeReport {
    pub terms: Vec<HomogenizeTerm>,
    pub defect: Option<i64>,
    pub defect_pairs: usize,
    pub notices: Vec<String>,
}

/// Evaluates `q_w(gⁿ)/n` for `n ≤ n_max` on an internally built slice
/// seeded with the orbit of the basepoint and an axis window wide enough to
/// carry the template and the orbit's prefix depths.
pub fn homogenize(
    g: &MappingClass,
    w: &AxisSegment,
    basepoint: &RayCode,
    n_max: u32,
) -> HomogenizeReport {
    assert!(n_max >= 1, "need at least one power");
    let cfg = MorseConfig::default();
    let p = canonical_ray(basepoint);
    let mut seeds: Vec<Code> = Vec::new();
    let mut max_a = 0u32;
    for n in 0..=n_max {
        let gnp = canonical_ray(&apply_ray(&power(g, n as i32), &p));
        max_a = max_a.max(a_value(&gnp));
        seeds.push(Code::Ray(gnp));
    }
    let axis_lo = w.lo() - 1;
    let axis_hi = (w.hi() + 1).max(max_a as i64 + 1).min(MAX_EQ_INDEX);
    for j in axis_lo..=axis_hi {
        seeds.push(Code::Ray(axis_vertex(j)));
    }
    let slice = crate::graphs::build_slice(SliceKind::RayGraph, 2, 3, &seeds);

    let mut terms = Vec::new();
    let mut notices = Vec::new();
    let mut exact_q: HashMap<u32, i64> = HashMap::new();
    for n in 1..=n_max {
        let q = q_w(&power(g, n as i32), w, &p, &slice, &cfg);
        if q.exact {
            exact_q.insert(n, q.lower);
        } else {
            notices.push(format!("q at power {n} did not collapse to a point"));
        }
        terms.push(HomogenizeTerm {
            n,
            lower: q.lower,
            upper: q.upper,
            exact: q.exact,
            ratio_lower: q.lower as f64 / n as f64,
            ratio_upper: q.upper as f64 / n as f64,
        });
    }
    let mut defect = None;
    let mut defect_pairs = 0usize;
    for i in 1..=n_max {
        for j in i..=n_max {
            if i + j > n_max {
                continue;
            }
            if let (Some(&qi), Some(&qj), Some(&qij)) =
                (exact_q.get(&i), exact_q.get(&j), exact_q.get(&(i + j)))
            {
                defect_pairs += 1;
                let gap = (qij - qi - qj).abs();
                defect = Some(defect.map_or(gap, |d: i64| d.max(gap)));
            }
        }
    }
    HomogenizeReport { terms, defect, defect_pairs, notices }
}

// ---------------------------------------------------------------------------
