//! Geometric ground truth: a finite marked sphere built from a finite code
//! set, arcs realized in it, tightening to minimal position, exact crossing
//! counts, and the hat map into the loop world.
//!
//! The equator circle carries, in east cyclic order: ∞, the explicit
//! attachment points, and a single far point absorbing everything beyond the
//! window (including the accumulation point opposite ∞). All Cantor material
//! between consecutive explicit segments is collapsed onto the enclosed
//! attachment point — arcs coded in the segment alphabet never separate a
//! point from its flanking blocks, so the collapse changes no isotopy class,
//! no crossing count, and no essentialness verdict; the collapse-stability
//! tests exercise this. The sphere is two ideal polygons (hemispheres) glued
//! along the equator; each face is fan-triangulated from ∞.
//!
//! Arcs are stored as itineraries: a start hemisphere plus the ordered list
//! of crossed edges. Tightening removes interior bigons and endpoint
//! half-bigons; tight itineraries are unique per isotopy class, which makes
//! [`canonical`] a decision procedure for code equality. Crossing counts are
//! computed combinatorially in exact integer arithmetic by [`diagram`].

mod diagram;

use crate::coding::{AttachId, Code, LoopCode, RayCode, SegmentId};
use serde::Serialize;
use thiserror::Error;

/// One of the two hemisphere faces.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum Side {
    South,
    North,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::South => Side::North,
            Side::North => Side::South,
        }
    }
}

/// Reading direction for a loop word; rays are always read from ∞.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Forward,
    Backward,
}

/// Errors from realizing or encoding arcs.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    /// A code references a segment or attachment point outside the window.
    #[error("index {index} outside model window {window}")]
    WindowExceeded { index: i64, window: i64 },
    /// A tight arc crosses a collapsed-block boundary, so its crossing
    /// sequence is not expressible in the segment alphabet.
    #[error("arc crosses a collapsed-block boundary (window {window})")]
    AlphabetInsufficiency { window: i64 },
}

/// The finite marked sphere at a given window size N: explicit points
/// p_{-N}..p_N plus ∞ and one far point, equator edges between cyclically
/// consecutive points, two hemisphere faces, and a fan triangulation from ∞.
///
/// Vertices are numbered east-cyclically: 0 = ∞, 1..=N+1 = p_0..p_N,
/// N+2 = far, N+3..=2N+2 = p_{-N}..p_{-1}. Edge k joins vertices k and k+1;
/// the two edges incident to the far point are block boundaries, never
/// crossed by alphabet-expressible arcs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FiniteModel {
    window: i64,
}

/// Builds the model for a code set: window = 1 + largest absolute index
/// referenced (window 1 for the empty set).
pub fn build_model(codes: &[Code]) -> FiniteModel {
    let max = codes.iter().map(|c| c.max_abs_index()).max().unwrap_or(0);
    FiniteModel::with_window(1 + max)
}

impl FiniteModel {
    pub fn with_window(window: i64) -> FiniteModel {
        assert!(window >= 1, "window must be at least 1");
        FiniteModel { window }
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// Number of marked points on the equator (= number of equator edges).
    pub fn vertex_count(&self) -> usize {
        (2 * self.window + 3) as usize
    }

    /// Vertices and edges interleaved around the equator circle: vertex k at
    /// position 2k, edge k at 2k+1, ascending = east.
    pub(crate) fn item_count(&self) -> usize {
        2 * self.vertex_count()
    }

    pub(crate) fn infinity_vertex(&self) -> usize {
        0
    }

    pub(crate) fn far_vertex(&self) -> usize {
        (self.window + 2) as usize
    }

    pub(crate) fn vertex_of_attach(&self, a: AttachId) -> Option<usize> {
        let n = self.window;
        if a.0 >= 0 && a.0 <= n {
            Some((a.0 + 1) as usize)
        } else if a.0 < 0 && a.0 >= -n {
            Some((2 * n + 3 + a.0) as usize)
        } else {
            None
        }
    }

    pub(crate) fn attach_of_vertex(&self, v: usize) -> Option<AttachId> {
        let n = self.window;
        let v = v as i64;
        if v >= 1 && v <= n + 1 {
            Some(AttachId(v - 1))
        } else if v >= n + 3 && v <= 2 * n + 2 {
            Some(AttachId(v - (2 * n + 3)))
        } else {
            None
        }
    }

    pub(crate) fn edge_of_segment(&self, s: SegmentId) -> Option<usize> {
        let n = self.window;
        if s.0 >= 0 && s.0 <= n {
            Some(s.0 as usize)
        } else if s.0 < 0 && s.0 >= -n {
            Some((2 * n + 3 + s.0) as usize)
        } else {
            None
        }
    }

    pub(crate) fn segment_of_edge(&self, e: usize) -> Option<SegmentId> {
        let n = self.window;
        let e = e as i64;
        if e <= n {
            Some(SegmentId(e))
        } else if e >= n + 3 {
            Some(SegmentId(e - (2 * n + 3)))
        } else {
            None
        }
    }

    /// Edge e joins vertices e (west end) and e+1 mod M (east end).
    pub(crate) fn edge_incident(&self, e: usize, v: usize) -> bool {
        let m = self.vertex_count();
        e == v || (e + 1) % m == v
    }

    pub(crate) fn item_of_vertex(&self, v: usize) -> usize {
        2 * v
    }

    pub(crate) fn item_of_edge(&self, e: usize) -> usize {
        2 * e + 1
    }

    /// Steps from one item to another along a face's boundary orientation.
    /// The north face runs east (ascending items), the south face west.
    pub(crate) fn ccw_pos(&self, face: Side, from_item: usize, to_item: usize) -> usize {
        let n = self.item_count();
        match face {
            Side::North => (to_item + n - from_item) % n,
            Side::South => (from_item + n - to_item) % n,
        }
    }

    pub fn vertex_label(&self, v: usize) -> String {
        if v == 0 {
            "inf".to_string()
        } else if v == self.far_vertex() {
            "far".to_string()
        } else {
            let a = self.attach_of_vertex(v).expect("non-special vertex is an attachment");
            a.to_string()
        }
    }

    pub fn edge_label(&self, e: usize) -> String {
        match self.segment_of_edge(e) {
            Some(s) => s.to_string(),
            // The two collapsed-block boundary edges around the far point.
            None if e as i64 == self.window + 1 => "block_east".to_string(),
            None => "block_west".to_string(),
        }
    }
}

/// The far end of an arc: a marked attachment point for rays, ∞ for loops.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ArcEnd {
    Attach { vertex: usize },
    Infinity,
}

/// An arc realized in a model, stored as its itinerary: the start
/// hemisphere and the ordered edge crossings from ∞ to the far end. The
/// itinerary is the corner-routing data; per-edge intersection counts are
/// derived by [`NormalArc::coords`]. Arcs are oriented from ∞ and belong to
/// the model that realized them.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NormalArc {
    start_side: Side,
    edges: Vec<usize>,
    end: ArcEnd,
}

impl NormalArc {
    pub fn start_side(&self) -> Side {
        self.start_side
    }

    pub fn crossing_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_ray(&self) -> bool {
        matches!(self.end, ArcEnd::Attach { .. })
    }

    pub(crate) fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// Hemisphere of the c-th component (component c lies between crossings
    /// c-1 and c; component 0 leaves ∞).
    pub(crate) fn component_face(&self, c: usize) -> Side {
        if c % 2 == 0 {
            self.start_side
        } else {
            self.start_side.flip()
        }
    }

    pub(crate) fn end_vertex(&self) -> usize {
        match self.end {
            ArcEnd::Attach { vertex } => vertex,
            ArcEnd::Infinity => 0,
        }
    }

    pub fn attach(&self, m: &FiniteModel) -> Option<AttachId> {
        match self.end {
            ArcEnd::Attach { vertex } => m.attach_of_vertex(vertex),
            ArcEnd::Infinity => None,
        }
    }

    /// Boundary items of the c-th component: the crossing edges around it,
    /// or the endpoint vertices at the two ends.
    pub(crate) fn component_items(&self, m: &FiniteModel, c: usize) -> (usize, usize) {
        let entry = if c == 0 { m.item_of_vertex(0) } else { m.item_of_edge(self.edges[c - 1]) };
        let exit = if c == self.edges.len() {
            m.item_of_vertex(self.end_vertex())
        } else {
            m.item_of_edge(self.edges[c])
        };
        (entry, exit)
    }

    /// The same loop read from its other end. Rays carry the ∞-to-attachment
    /// orientation only, hence `None`.
    pub fn reversed(&self) -> Option<NormalArc> {
        match self.end {
            ArcEnd::Attach { .. } => None,
            ArcEnd::Infinity => Some(NormalArc {
                start_side: self.component_face(self.edges.len()),
                edges: self.edges.iter().rev().copied().collect(),
                end: ArcEnd::Infinity,
            }),
        }
    }

    /// Whether the itinerary is free of interior bigons and endpoint
    /// half-bigons (and empty words are side-normalized).
    pub fn is_tight(&self, m: &FiniteModel) -> bool {
        if self.edges.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        if let Some(&first) = self.edges.first() {
            if m.edge_incident(first, m.infinity_vertex()) {
                return false;
            }
        }
        if let Some(&last) = self.edges.last() {
            if m.edge_incident(last, self.end_vertex()) {
                return false;
            }
        }
        if self.edges.is_empty() && self.start_side == Side::North {
            match self.end {
                ArcEnd::Infinity => return false,
                ArcEnd::Attach { vertex } => {
                    // Next to ∞ the two direct arcs are isotopic; only the
                    // south spelling is tight there.
                    if vertex == 1 || vertex == m.vertex_count() - 1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Intersection counts with every triangulation edge: the equator edges
    /// in index order, then the fan diagonals ∞–v (v = 2..=M−2) of each face.
    pub fn coords(&self, m: &FiniteModel) -> ArcCoords {
        let mv = m.vertex_count();
        let mut equator = vec![0u64; mv];
        for &e in &self.edges {
            equator[e] += 1;
        }
        let mut north = vec![0u64; mv.saturating_sub(3)];
        let mut south = vec![0u64; mv.saturating_sub(3)];
        for c in 0..=self.edges.len() {
            let face = self.component_face(c);
            let (p, q) = self.component_items(m, c);
            let counts = match face {
                Side::North => &mut north,
                Side::South => &mut south,
            };
            for v in 2..=mv - 2 {
                if diagonal_separates(m, face, v, p, q) {
                    counts[v - 2] += 1;
                }
            }
        }
        ArcCoords { equator, north_diagonals: north, south_diagonals: south }
    }
}

/// Whether the fan diagonal ∞–v of the given face separates boundary items
/// p and q of that face. A component with an endpoint at either corner of
/// the diagonal is never forced across it: chords sharing an endpoint do
/// not cross.
fn diagonal_separates(m: &FiniteModel, face: Side, v: usize, p: usize, q: usize) -> bool {
    let vi = m.item_of_vertex(v);
    if p == 0 || q == 0 || p == vi || q == vi {
        return false;
    }
    let inside = |x: usize| match face {
        Side::North => x < vi,
        Side::South => x > vi,
    };
    inside(p) != inside(q)
}

/// Per-edge intersection counts of an arc with the triangulation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ArcCoords {
    pub equator: Vec<u64>,
    pub north_diagonals: Vec<u64>,
    pub south_diagonals: Vec<u64>,
}

/// Realizes a code as the arc crossing the equator exactly in the coded
/// sequence, first component in the south hemisphere unless the code is
/// north-marked. Fails if any index falls outside the window.
pub fn realize(m: &FiniteModel, c: &Code) -> Result<NormalArc, ModelError> {
    let (word, north, end) = match c {
        Code::Ray(r) => {
            let vertex = m
                .vertex_of_attach(r.attach)
                .ok_or(ModelError::WindowExceeded { index: r.attach.0, window: m.window })?;
            (&r.word, r.north, ArcEnd::Attach { vertex })
        }
        Code::Loop(l) => (&l.word, l.north, ArcEnd::Infinity),
    };
    let mut edges = Vec::with_capacity(word.len());
    for &s in word {
        edges.push(
            m.edge_of_segment(s)
                .ok_or(ModelError::WindowExceeded { index: s.0, window: m.window })?,
        );
    }
    Ok(NormalArc { start_side: if north { Side::North } else { Side::South }, edges, end })
}

/// Removes every bigon with the equator and every endpoint half-bigon,
/// yielding the unique tight itinerary of the class.
///
/// One stack pass removes nested interior bigons; a leading crossing of an
/// ∞-incident edge is a half-bigon at the ∞ cusp whose removal flips the
/// start hemisphere; a trailing crossing of an edge incident to the far
/// endpoint is removed without stored effect (the end hemisphere is parity
/// data). None of the later steps can recreate earlier patterns, so a
/// single round reaches the fixpoint.
pub fn tighten(m: &FiniteModel, a: &NormalArc) -> NormalArc {
    let mut word: Vec<usize> = Vec::with_capacity(a.edges.len());
    for &e in &a.edges {
        if word.last() == Some(&e) {
            word.pop();
        } else {
            word.push(e);
        }
    }
    let mut side = a.start_side;
    let mut lo = 0;
    let mut hi = word.len();
    while lo < hi && m.edge_incident(word[lo], m.infinity_vertex()) {
        lo += 1;
        side = side.flip();
    }
    let end_vertex = a.end_vertex();
    while lo < hi && m.edge_incident(word[hi - 1], end_vertex) {
        hi -= 1;
    }
    let edges: Vec<usize> = word[lo..hi].to_vec();
    if edges.is_empty() {
        match a.end {
            ArcEnd::Infinity => side = Side::South,
            ArcEnd::Attach { vertex } => {
                if vertex == 1 || vertex == m.vertex_count() - 1 {
                    side = Side::South;
                }
            }
        }
    }
    NormalArc { start_side: side, edges, end: a.end }
}

/// Reads a tight arc back into a code: crossings with explicit segments in
/// order from ∞. An arc through a collapsed-block boundary edge has no
/// spelling in the alphabet and is reported, not guessed.
pub fn encode(m: &FiniteModel, a: &NormalArc) -> Result<Code, ModelError> {
    debug_assert!(a.is_tight(m), "encode expects a tightened arc");
    let mut word = Vec::with_capacity(a.edges.len());
    for &e in &a.edges {
        word.push(
            m.segment_of_edge(e)
                .ok_or(ModelError::AlphabetInsufficiency { window: m.window })?,
        );
    }
    let north = a.start_side == Side::North;
    Ok(match a.end {
        ArcEnd::Attach { vertex } => {
            let attach = m.attach_of_vertex(vertex).expect("ray ends at an attachment point");
            Code::Ray(RayCode { word, attach, north })
        }
        ArcEnd::Infinity => Code::Loop(LoopCode { word, north }),
    })
}

/// The loop read in the opposite direction: reversed word, and the start
/// hemisphere moves to the other face exactly when the word length is odd.
pub fn reverse_loop(l: &LoopCode) -> LoopCode {
    LoopCode {
        word: l.word.iter().rev().copied().collect(),
        north: l.north ^ (l.word.len() % 2 == 1),
    }
}

/// A loop word in a chosen reading direction.
pub fn oriented_loop(l: &LoopCode, o: Orientation) -> LoopCode {
    match o {
        Orientation::Forward => l.clone(),
        Orientation::Backward => reverse_loop(l),
    }
}

/// Canonical form: realize in an automatically sized model, tighten, and
/// re-encode; loops are additionally normalized over their two reading
/// directions (south start preferred, then lexicographically smaller word).
/// Two codes denote the same class exactly when their canonical forms agree.
pub fn canonical(c: &Code) -> Code {
    let m = build_model(std::slice::from_ref(c));
    let arc = realize(&m, c).expect("auto-sized window covers the code");
    let tight = tighten(&m, &arc);
    let out = encode(&m, &tight).expect("tightening never adds block-boundary crossings");
    match out {
        Code::Ray(r) => Code::Ray(r),
        Code::Loop(l) => {
            let rev = reverse_loop(&l);
            let key = |x: &LoopCode| (x.north, x.word.clone());
            Code::Loop(if key(&rev) < key(&l) { rev } else { l })
        }
    }
}

pub fn canonical_ray(r: &RayCode) -> RayCode {
    match canonical(&Code::Ray(r.clone())) {
        Code::Ray(r) => r,
        Code::Loop(_) => unreachable!("canonical preserves the code kind"),
    }
}

pub fn canonical_loop(l: &LoopCode) -> LoopCode {
    match canonical(&Code::Loop(l.clone())) {
        Code::Loop(l) => l,
        Code::Ray(_) => unreachable!("canonical preserves the code kind"),
    }
}

/// Whether two arcs are copies of one class (equal itineraries, or the same
/// loop read from opposite ends). Such pairs are realized disjointly by a
/// parallel push-off and never enter the crossing machinery.
fn same_class(a: &NormalArc, b: &NormalArc) -> bool {
    a == b || (!a.is_ray() && b.reversed().as_ref() == Some(a))
}

/// Minimal number of transverse crossings between representatives of the
/// two classes; contacts at shared endpoints (∞ or a common attachment) are
/// never counted.
pub fn geometric_intersection(m: &FiniteModel, a: &NormalArc, b: &NormalArc) -> u64 {
    assert!(a.is_tight(m) && b.is_tight(m), "intersection expects tightened arcs");
    if same_class(a, b) || a.is_trivial_loop() || b.is_trivial_loop() {
        return 0;
    }
    let d = diagram::Diagram::build(m, &[a, b]);
    let (pos, neg) = d.oriented_crossings(0, 1);
    pos + neg
}

/// Count of crossings where the second arc passes the first from right to
/// left (the ordered tangent frame is positively oriented); in general
/// I(a,b) ≠ I(b,a), and the two add up to the full geometric count.
pub fn positive_intersection(m: &FiniteModel, a: &NormalArc, b: &NormalArc) -> u64 {
    assert!(a.is_tight(m) && b.is_tight(m), "intersection expects tightened arcs");
    if same_class(a, b) || a.is_trivial_loop() || b.is_trivial_loop() {
        return 0;
    }
    let d = diagram::Diagram::build(m, &[a, b]);
    d.oriented_crossings(0, 1).0
}

/// The edge predicate of the ray and loop graphs.
pub fn disjoint(m: &FiniteModel, a: &NormalArc, b: &NormalArc) -> bool {
    geometric_intersection(m, a, b) == 0
}

/// True iff the class has an embedded representative.
pub fn is_simple(m: &FiniteModel, a: &NormalArc) -> bool {
    assert!(a.is_tight(m), "is_simple expects a tightened arc");
    if a.edges.is_empty() {
        return true;
    }
    let d = diagram::Diagram::build(m, &[a]);
    d.self_crossings(0) == 0
}

impl NormalArc {
    fn is_trivial_loop(&self) -> bool {
        self.end == ArcEnd::Infinity && self.edges.is_empty()
    }
}

/// One crossing between two oriented arcs, located along both: component
/// index and rank within the component, in traversal order from ∞.
#[derive(Clone, Copy, Debug)]
pub(crate) struct CrossingSite {
    pub a_component: usize,
    pub a_rank: usize,
    pub b_component: usize,
    pub b_rank: usize,
}

/// All crossings between two tight arcs of distinct classes, with positions
/// along both arcs.
pub(crate) fn crossing_sites(m: &FiniteModel, a: &NormalArc, b: &NormalArc) -> Vec<CrossingSite> {
    assert!(a.is_tight(m) && b.is_tight(m));
    if same_class(a, b) || a.is_trivial_loop() || b.is_trivial_loop() {
        return Vec::new();
    }
    let d = diagram::Diagram::build(m, &[a, b]);
    d.crossing_sites(0, 1)
}

/// The boundary loop of a thin neighborhood of a ray: out along the ray,
/// once around the attachment point, and back. Disjoint from the ray and
/// essential; meets it only at ∞.
pub fn hat(c: &RayCode) -> LoopCode {
    let r = canonical_ray(c);
    let [u, v] = r.attach.incident_segments();
    let mut word = r.word.clone();
    // Circle the attachment point: cross its far incident segment, then the
    // near one, then retrace.
    word.push(v);
    word.push(u);
    word.extend(r.word.iter().rev());
    canonical_loop(&LoopCode { word, north: r.north })
}

/// Whether a simple loop at ∞ bounds Cantor material on both sides. Each
/// marked point is placed relative to the far point by counting the
/// south-face strands of the loop that separate them; the loop is essential
/// iff some marked point ends up on the other side.
pub fn essential_loop(l: &LoopCode) -> bool {
    let l = canonical_loop(l);
    if l.word.is_empty() {
        return false;
    }
    let code = Code::Loop(l);
    let m = build_model(std::slice::from_ref(&code));
    let arc = realize(&m, &code).expect("auto-sized window");
    let far = m.item_of_vertex(m.far_vertex());
    let n = m.item_count();
    let south_chords: Vec<(usize, usize)> = (0..=arc.edges.len())
        .filter(|&c| arc.component_face(c) == Side::South)
        .map(|c| arc.component_items(&m, c))
        .collect();
    for v in 1..m.vertex_count() {
        if v == m.far_vertex() {
            continue;
        }
        let vi = m.item_of_vertex(v);
        let span = (vi + n - far) % n;
        let inside = |x: usize| (x + n - far) % n > 0 && (x + n - far) % n < span;
        let parity = south_chords.iter().filter(|&&(p, q)| inside(p) != inside(q)).count();
        if parity % 2 == 1 {
            return true;
        }
    }
    false
}

/// The germ of a ray: its start hemisphere and an initial crossing word,
/// with the continuation left open.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RayGerm {
    pub north: bool,
    pub word: Vec<SegmentId>,
}

/// Certifies that every pair of rays extending the two germs crosses, by
/// either of two independent mechanisms: a strand pair that already
/// diverges within both known words on both sides with contradictory order
/// demands, or a pair of fully pinned chords (both endpoints at known
/// crossings) in one face whose boundary items strictly interleave — no
/// continuation can reroute either. Sound but not complete — `false`
/// certifies nothing.
pub fn germs_force_crossing(g1: &RayGerm, g2: &RayGerm) -> bool {
    let max = g1
        .word
        .iter()
        .chain(g2.word.iter())
        .map(|s| s.0.abs())
        .max()
        .unwrap_or(0);
    let m = FiniteModel::with_window(1 + max);
    let to_edges = |g: &RayGerm| -> Vec<usize> {
        g.word
            .iter()
            .map(|&s| m.edge_of_segment(s).expect("window covers the germ"))
            .collect()
    };
    let side = |g: &RayGerm| if g.north { Side::North } else { Side::South };
    if diagram::germs_conflict(&m, (side(g1), &to_edges(g1)), (side(g2), &to_edges(g2))) {
        return true;
    }

    // Pinned chords: the i-th crossing component of any extension joins the
    // same two items (∞, or the edges of consecutive known letters) through
    // the same face; only the component after the last known letter is open.
    let chords = |g: &RayGerm| -> Vec<(usize, usize, Side)> {
        let mut out = Vec::with_capacity(g.word.len());
        let mut at = m.item_of_vertex(0);
        let mut face = side(g);
        for &s in &g.word {
            let next = m.item_of_edge(m.edge_of_segment(s).expect("window covers the germ"));
            out.push((at, next, face));
            at = next;
            face = face.flip();
        }
        out
    };
    let n = m.item_count();
    // Strictly between `a` and `b` in the cyclic item order (either face's
    // boundary is the full equator circle; reversal preserves separation).
    let inside = |a: usize, b: usize, t: usize| -> bool {
        let span = (b + n - a) % n;
        let off = (t + n - a) % n;
        0 < off && off < span
    };
    for &(a1, a2, fa) in &chords(g1) {
        for &(b1, b2, fb) in &chords(g2) {
            if fa != fb || a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2 {
                continue;
            }
            if inside(a1, a2, b1) != inside(a1, a2, b2) {
                return true;
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Code-level conveniences
// ---------------------------------------------------------------------------

fn pair_model(a: &Code, b: &Code) -> FiniteModel {
    FiniteModel::with_window(1 + a.max_abs_index().max(b.max_abs_index()))
}

fn realize_tight(m: &FiniteModel, c: &Code) -> NormalArc {
    tighten(m, &realize(m, c).expect("window sized for the codes"))
}

/// [`geometric_intersection`] on codes, with the model handled internally.
pub fn code_geometric_intersection(a: &Code, b: &Code) -> u64 {
    let m = pair_model(a, b);
    geometric_intersection(&m, &realize_tight(&m, a), &realize_tight(&m, b))
}

/// [`positive_intersection`] on codes, with the model handled internally.
pub fn code_positive_intersection(a: &Code, b: &Code) -> u64 {
    let m = pair_model(a, b);
    positive_intersection(&m, &realize_tight(&m, a), &realize_tight(&m, b))
}

/// Disjointness of two codes' classes.
pub fn codes_disjoint(a: &Code, b: &Code) -> bool {
    code_geometric_intersection(a, b) == 0
}

// ---------------------------------------------------------------------------
// Exports
// ---------------------------------------------------------------------------

/// Serializable description of a model: marked points in east cyclic order,
/// equator edges, and the fan triangles of both faces. Field order is fixed
/// for diffability.
#[derive(Serialize)]
pub struct ModelExport {
    pub window: i64,
    pub marked_points: Vec<String>,
    pub equator_edges: Vec<EdgeExport>,
    pub north_triangles: Vec<[String; 3]>,
    pub south_triangles: Vec<[String; 3]>,
}

#[derive(Serialize)]
pub struct EdgeExport {
    pub label: String,
    pub west: String,
    pub east: String,
}

pub fn export_model(m: &FiniteModel) -> ModelExport {
    let mv = m.vertex_count();
    let marked_points = (0..mv).map(|v| m.vertex_label(v)).collect();
    let equator_edges = (0..mv)
        .map(|e| EdgeExport {
            label: m.edge_label(e),
            west: m.vertex_label(e),
            east: m.vertex_label((e + 1) % mv),
        })
        .collect();
    let fan = |_face: Side| -> Vec<[String; 3]> {
        (1..mv - 1)
            .map(|k| [m.vertex_label(0), m.vertex_label(k), m.vertex_label(k + 1)])
            .collect()
    };
    ModelExport {
        window: m.window,
        marked_points,
        equator_edges,
        north_triangles: fan(Side::North),
        south_triangles: fan(Side::South),
    }
}

/// Serializable description of a realized arc: endpoints, routing, and
/// per-edge counts.
#[derive(Serialize)]
pub struct ArcExport {
    pub kind: String,
    pub from: String,
    pub to: String,
    pub start_side: Side,
    pub crossings: Vec<String>,
    pub coords: ArcCoords,
}

pub fn export_arc(m: &FiniteModel, a: &NormalArc) -> ArcExport {
    ArcExport {
        kind: if a.is_ray() { "ray" } else { "loop" }.to_string(),
        from: m.vertex_label(0),
        to: m.vertex_label(a.end_vertex()),
        start_side: a.start_side,
        crossings: a.edges.iter().map(|&e| m.edge_label(e)).collect(),
        coords: a.coords(m),
    }
}

/// Checks the triangle matching conditions: cutting the arc's components
/// along the fan diagonals yields pieces whose per-triangle side tallies
/// reproduce the coordinate counts. Exact for arcs in minimal position.
///
/// Each face is the fan of triangles T_k = (∞, v_k, v_{k+1}) for
/// k = 1..=M−2, with sides: west (∞–v_k; equator edge 0 when k = 1),
/// base (equator edge k), and east (∞–v_{k+1}; equator edge M−1 when
/// k = M−2). A component occupies a contiguous triangle interval; pieces
/// from ∞ stay inside one sector since every diagonal emanates from ∞.
pub fn triangulation_consistent(m: &FiniteModel, a: &NormalArc) -> bool {
    let coords = a.coords(m);
    let mv = m.vertex_count();
    const W: usize = 0;
    const B: usize = 1;
    const E: usize = 2;
    // tallies[face][k−1][side] counts piece endpoints on that side of T_k.
    let mut tallies = vec![vec![[0u64; 3]; mv - 2]; 2];
    for c in 0..=a.edges.len() {
        let fi = a.component_face(c) as usize;
        let (p, q) = a.component_items(m, c);
        // Triangle and touched side of one endpoint; corners touch no side
        // and adopt the sector nearest the other endpoint's triangle.
        let place = |x: usize, t_other: usize| -> (usize, Option<usize>) {
            if x % 2 == 1 {
                let e = x / 2;
                if e == 0 {
                    (1, Some(W))
                } else if e == mv - 1 {
                    (mv - 2, Some(E))
                } else {
                    (e, Some(B))
                }
            } else if x == 0 {
                (t_other.clamp(1, mv - 2), None)
            } else {
                let j = x / 2;
                (t_other.clamp(j.saturating_sub(1).max(1), j.min(mv - 2)), None)
            }
        };
        // Resolve corner sectors from the concrete endpoint first.
        let rough = |x: usize| -> Option<usize> {
            if x % 2 == 1 {
                Some((x / 2).clamp(1, mv - 2))
            } else {
                None
            }
        };
        let (tp, sp, tq, sq) = match (rough(p), rough(q)) {
            (None, None) => continue, // corner-to-corner: crosses nothing
            (rp, rq) => {
                let seed = rp.or(rq).unwrap();
                let (tp, sp) = place(p, rq.unwrap_or(seed));
                let (tq, sq) = place(q, rp.unwrap_or(seed));
                (tp, sp, tq, sq)
            }
        };
        let (lo, hi) = (tp.min(tq), tp.max(tq));
        for t in lo..=hi {
            if t > lo {
                tallies[fi][t - 1][W] += 1;
            }
            if t < hi {
                tallies[fi][t - 1][E] += 1;
            }
        }
        for (t, s) in [(tp, sp), (tq, sq)] {
            if let Some(s) = s {
                tallies[fi][t - 1][s] += 1;
            }
        }
    }
    for fi in [Side::South as usize, Side::North as usize] {
        let diagonals = if fi == Side::North as usize {
            &coords.north_diagonals
        } else {
            &coords.south_diagonals
        };
        // Diagonal ∞–v_k is the east side of T_{k−1} and the west of T_k.
        for k in 2..=mv - 2 {
            let d = diagonals[k - 2];
            if tallies[fi][k - 1][W] != d || tallies[fi][k - 2][E] != d {
                return false;
            }
        }
    }
    // Equator edges are shared by the two faces: their base/fan-end tallies
    // from both faces must sum to the letter multiplicity.
    let side_of_edge = |e: usize| -> (usize, usize) {
        if e == 0 {
            (1, W)
        } else if e == mv - 1 {
            (mv - 2, E)
        } else {
            (e, B)
        }
    };
    for e in 0..mv {
        let (t, s) = side_of_edge(e);
        let total = tallies[0][t - 1][s] + tallies[1][t - 1][s];
        if total != 2 * coords.equator[e] {
            return false;
        }
    }
    true
}

/// Euler characteristic of the triangulated model (must be the sphere's 2).
pub fn euler_characteristic(m: &FiniteModel) -> i64 {
    let v = m.vertex_count() as i64;
    let equator = v;
    let diagonals = 2 * (v - 3);
    let faces = 2 * (v - 2);
    v - (equator + diagonals) + faces
}
