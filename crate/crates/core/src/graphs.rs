//! Finite slices of the ray graph and the loop graph, with BFS distances
//! wrapped in honest certificates.
//!
//! Both graphs have one vertex per isotopy class of simple arc from ∞ — to a
//! Cantor point for the ray graph, back to ∞ (and essential) for the loop
//! graph — and an edge between classes with disjoint representatives. Every
//! vertex has infinite degree, so nothing global is computable; all work
//! happens on *slices*: the canonical codes whose word length and segment
//! indices fit declared bounds, plus caller-chosen seed codes, restricted to
//! the components reachable from the seeds. A path found inside a slice is a
//! genuine path of the full graph, so slice BFS yields true upper bounds;
//! lower bounds come from the prefix-depth function `A` (1-Lipschitz across
//! disjointness) and from crossing data. A [`DistanceCertificate`] keeps the
//! two sides separate and claims exactness only when they meet.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use petgraph::algo::astar;
use petgraph::graph::{NodeIndex, UnGraph};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coding::{a_value, alpha, alpha_neg, alpha_word, Code, LoopCode, RayCode, SegmentId};
use crate::mcg;
use crate::model::{
    self, build_model, canonical, canonical_ray, codes_disjoint, essential_loop,
    germs_force_crossing, hat, is_simple, realize, tighten, RayGerm,
};

/// Which of the two arc graphs a slice approximates.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum SliceKind {
    #[serde(rename = "ray-graph")]
    RayGraph,
    #[serde(rename = "loop-graph")]
    LoopGraph,
}

/// Default cap on the number of enumerated (non-seed) vertices.
pub const DEFAULT_SLICE_CAP: usize = 4000;

/// A finite induced subgraph of the ray or loop graph.
///
/// Vertices are canonical codes; edges are exactly the disjoint pairs, so
/// the slice is an induced subgraph of the infinite graph and every path in
/// it is a genuine path. The vertex set is the union of the seeds with every
/// in-bounds canonical code, cut down to the components containing a seed.
pub struct GraphSlice {
    pub kind: SliceKind,
    /// Declared bound on word length for enumerated vertices.
    pub max_word_len: usize,
    /// Declared bound on absolute segment and attachment indices.
    pub window: i64,
    /// True when enumeration hit the vertex cap before exhausting the
    /// declared bounds; the slice is then a flagged partial slice.
    pub truncated: bool,
    vertices: Vec<Code>,
    index: HashMap<Code, usize>,
    graph: UnGraph<(), (), u32>,
}

impl GraphSlice {
    pub fn vertices(&self) -> &[Code] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Index of a code's class in the slice, after canonicalization.
    pub fn position(&self, c: &Code) -> Option<usize> {
        self.index.get(&canonical(c)).copied()
    }

    pub fn contains(&self, c: &Code) -> bool {
        self.position(c).is_some()
    }

    /// Neighbor indices in ascending order.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.graph.neighbors(NodeIndex::new(v)).map(|n| n.index()).collect();
        out.sort_unstable();
        out
    }

    /// All edges as index pairs (u < v), ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .graph
            .edge_indices()
            .map(|e| {
                let (a, b) = self.graph.edge_endpoints(e).expect("edge exists");
                let (a, b) = (a.index(), b.index());
                (a.min(b), a.max(b))
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// Deterministic vertex order: word length, then word, then attachment,
/// then start side — the enumeration order, so slices are reproducible.
fn sort_key(c: &Code) -> (usize, Vec<i64>, i64, bool) {
    match c {
        Code::Ray(r) => {
            (r.word.len(), r.word.iter().map(|s| s.0).collect(), r.attach.0, r.north)
        }
        Code::Loop(l) => (l.word.len(), l.word.iter().map(|s| s.0).collect(), 0, l.north),
    }
}

/// Canonical form of a candidate code if it is a slice vertex: canonical,
/// simple, and (for loops) essential. Returns `None` otherwise.
fn vet_vertex(c: &Code) -> Option<Code> {
    let k = canonical(c);
    let m = build_model(std::slice::from_ref(&k));
    let arc = tighten(&m, &realize(&m, &k).expect("auto-sized window"));
    if !is_simple(&m, &arc) {
        return None;
    }
    if let Code::Loop(l) = &k {
        if !essential_loop(l) {
            return None;
        }
    }
    Some(k)
}

/// Every reduced word of the given length over `letters`, in lexicographic
/// order, fed to `emit` until it asks to stop (returns `false`).
fn reduced_words(
    letters: &[SegmentId],
    len: usize,
    prefix: &mut Vec<SegmentId>,
    emit: &mut impl FnMut(&[SegmentId]) -> bool,
) -> bool {
    if prefix.len() == len {
        return emit(prefix);
    }
    for &l in letters {
        if prefix.last() == Some(&l) {
            continue;
        }
        prefix.push(l);
        let go_on = reduced_words(letters, len, prefix, emit);
        prefix.pop();
        if !go_on {
            return false;
        }
    }
    true
}

/// Builds a slice with the default vertex cap. See [`build_slice_capped`].
pub fn build_slice(kind: SliceKind, max_word_len: usize, window: i64, seeds: &[Code]) -> GraphSlice {
    build_slice_capped(kind, max_word_len, window, seeds, DEFAULT_SLICE_CAP)
}

/// Builds the slice of the chosen graph spanned by the seeds: every
/// canonical simple (and essential, for loops) code with word length
/// ≤ `max_word_len` and all indices within `window` is enumerated in
/// length-lexicographic order, the seeds are added regardless of bounds,
/// edges are computed by pairwise disjointness, and only components
/// containing a seed are kept. Enumeration stops at `cap` vertices and
/// flags the slice as truncated.
pub fn build_slice_capped(
    kind: SliceKind,
    max_word_len: usize,
    window: i64,
    seeds: &[Code],
    cap: usize,
) -> GraphSlice {
    assert!(window >= 0, "window must be non-negative");
    let letters: Vec<SegmentId> = (-window..=window).map(SegmentId).collect();

    let mut seen: HashSet<Code> = HashSet::new();
    let mut all: Vec<Code> = Vec::new();
    let mut seed_set: HashSet<Code> = HashSet::new();
    for s in seeds {
        match (kind, s) {
            (SliceKind::RayGraph, Code::Ray(_)) | (SliceKind::LoopGraph, Code::Loop(_)) => {}
            _ => panic!("seed kind does not match the slice kind"),
        }
        if let Some(k) = vet_vertex(s) {
            seed_set.insert(k.clone());
            if seen.insert(k.clone()) {
                all.push(k);
            }
        }
    }

    let mut truncated = false;
    let mut enumerated = 0usize;
    'lens: for len in 0..=max_word_len {
        let mut prefix = Vec::with_capacity(len);
        let mut candidates: Vec<Code> = Vec::new();
        reduced_words(&letters, len, &mut prefix, &mut |w| {
            match kind {
                SliceKind::RayGraph => {
                    for j in -window..=window {
                        for north in [false, true] {
                            let r = RayCode {
                                word: w.to_vec(),
                                attach: crate::coding::AttachId(j),
                                north,
                            };
                            if r.is_canonical_form() {
                                candidates.push(Code::Ray(r));
                            }
                        }
                    }
                }
                SliceKind::LoopGraph => {
                    for north in [false, true] {
                        let l = LoopCode { word: w.to_vec(), north };
                        if l.is_canonical_form() {
                            candidates.push(Code::Loop(l));
                        }
                    }
                }
            }
            true
        });
        for c in candidates {
            if enumerated >= cap {
                truncated = true;
                break 'lens;
            }
            if let Some(k) = vet_vertex(&c) {
                if k == c && seen.insert(k.clone()) {
                    all.push(k);
                    enumerated += 1;
                }
            }
        }
    }

    all.sort_by_key(sort_key);

    // Edges by pairwise disjointness of tight representatives in one shared
    // model, then keep only components reachable from a seed.
    let adjacency = pairwise_disjointness(&all);
    let keep = seed_component(&all, &adjacency, &seed_set);

    let mut vertices: Vec<Code> = Vec::new();
    let mut remap: HashMap<usize, usize> = HashMap::new();
    for (i, c) in all.iter().enumerate() {
        if keep[i] {
            remap.insert(i, vertices.len());
            vertices.push(c.clone());
        }
    }
    let mut graph = UnGraph::<(), (), u32>::default();
    for _ in 0..vertices.len() {
        graph.add_node(());
    }
    for (i, nbrs) in adjacency.iter().enumerate() {
        if !keep[i] {
            continue;
        }
        for &j in nbrs {
            if j > i && keep[j] {
                graph.add_edge(NodeIndex::new(remap[&i]), NodeIndex::new(remap[&j]), ());
            }
        }
    }
    let index = vertices.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    GraphSlice { kind, max_word_len, window, truncated, vertices, index, graph }
}

/// Adjacency lists over `codes` by exact disjointness, computed on tight
/// representatives realized in one shared model.
fn pairwise_disjointness(codes: &[Code]) -> Vec<Vec<usize>> {
    if codes.is_empty() {
        return Vec::new();
    }
    let m = build_model(codes);
    let arcs: Vec<model::NormalArc> = codes
        .iter()
        .map(|c| tighten(&m, &realize(&m, c).expect("slice model covers all vertices")))
        .collect();
    let mut adj = vec![Vec::new(); codes.len()];
    for i in 0..codes.len() {
        for j in (i + 1)..codes.len() {
            if model::disjoint(&m, &arcs[i], &arcs[j]) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    adj
}

/// Marks the vertices connected to some seed (seeds themselves included).
fn seed_component(codes: &[Code], adj: &[Vec<usize>], seeds: &HashSet<Code>) -> Vec<bool> {
    let mut keep = vec![false; codes.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (i, c) in codes.iter().enumerate() {
        if seeds.contains(c) {
            keep[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        for &j in &adj[i] {
            if !keep[j] {
                keep[j] = true;
                queue.push_back(j);
            }
        }
    }
    keep
}

/// Where a certificate's lower bound comes from.
///
/// `ABound` is the prefix-depth difference `|A(u) − A(v)|` (1-Lipschitz
/// across edges); `IBound` is crossing data (distinct classes are at
/// distance ≥ 1, crossing classes at distance ≥ 2); `BfsExhaustion` marks
/// the trivial cases where no structural bound applies and the number comes
/// from the search itself (equal classes, or a slice that ran out).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum LowerProvenance {
    #[serde(rename = "A-bound")]
    ABound,
    #[serde(rename = "I-bound")]
    IBound,
    #[serde(rename = "BFS-exhaustion")]
    BfsExhaustion,
}

/// A two-sided distance estimate. The lower bound is valid in the full
/// graph; the upper bound comes with an explicit path whose edges are
/// re-verified by exact disjointness tests. `exact` means the two meet, and
/// only then is the BFS figure the true distance — otherwise slice BFS is
/// an upper bound and says so.
#[derive(Clone, Debug, Serialize)]
pub struct DistanceCertificate {
    pub lower: u32,
    pub lower_provenance: LowerProvenance,
    pub upper: Option<u32>,
    pub path: Option<Vec<Code>>,
    pub exact: bool,
}

/// Structural lower bound for two canonical codes, with its provenance.
fn structural_lower(u: &Code, v: &Code) -> (u32, LowerProvenance) {
    if u == v {
        return (0, LowerProvenance::BfsExhaustion);
    }
    let class_bound = if codes_disjoint(u, v) { 1 } else { 2 };
    let a_diff = match (u, v) {
        (Code::Ray(a), Code::Ray(b)) => a_value(a).abs_diff(a_value(b)),
        _ => 0,
    };
    if a_diff > class_bound {
        (a_diff, LowerProvenance::ABound)
    } else {
        (class_bound, LowerProvenance::IBound)
    }
}

/// Distance certificate for two codes already present in the slice.
///
/// The upper bound is BFS within the slice (disconnected-in-slice leaves it
/// unknown); the lower bound is the best of the `A`-difference and the
/// crossing bound. Panics if either code is not a slice vertex.
pub fn distance(slice: &GraphSlice, u: &Code, v: &Code) -> DistanceCertificate {
    let cu = canonical(u);
    let cv = canonical(v);
    let iu = slice.index.get(&cu).copied().unwrap_or_else(|| panic!("{cu} is not in the slice"));
    let iv = slice.index.get(&cv).copied().unwrap_or_else(|| panic!("{cv} is not in the slice"));
    let (lower, lower_provenance) = structural_lower(&cu, &cv);
    let found = astar(
        &slice.graph,
        NodeIndex::new(iu),
        |n| n == NodeIndex::new(iv),
        |_| 1u32,
        |_| 0u32,
    );
    match found {
        None => DistanceCertificate { lower, lower_provenance, upper: None, path: None, exact: false },
        Some((len, nodes)) => {
            let path: Vec<Code> =
                nodes.iter().map(|n| slice.vertices[n.index()].clone()).collect();
            for w in path.windows(2) {
                assert!(
                    w[0] != w[1] && codes_disjoint(&w[0], &w[1]),
                    "slice path fails re-verification: {} / {}",
                    w[0],
                    w[1]
                );
            }
            assert!(lower <= len, "structural lower bound exceeds a verified path");
            DistanceCertificate {
                lower,
                lower_provenance,
                upper: Some(len),
                path: Some(path),
                exact: lower == len,
            }
        }
    }
}

/// BFS depths from a set of source indices (multi-source), slice-wide.
pub(crate) fn multi_bfs(slice: &GraphSlice, sources: &[usize]) -> Vec<Option<u32>> {
    let mut depth = vec![None; slice.vertex_count()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in sources {
        if depth[s].is_none() {
            depth[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(i) = queue.pop_front() {
        let d = depth[i].expect("queued vertices have depths");
        for n in slice.graph.neighbors(NodeIndex::new(i)) {
            let j = n.index();
            if depth[j].is_none() {
                depth[j] = Some(d + 1);
                queue.push_back(j);
            }
        }
    }
    depth
}

#[derive(Clone, Debug, Serialize)]
pub struct CompanionCheck {
    /// An alternative loop disjoint from the ray, found in the slice.
    pub companion: Code,
    /// BFS upper bound on its loop-graph distance to the ray's hat loop.
    pub distance_upper: Option<u32>,
    /// Whether the ≤ 2 claim is witnessed inside the slice.
    pub within_two: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QiPairReport {
    pub x: Code,
    pub y: Code,
    pub ray_certificate: DistanceCertificate,
    pub loop_certificate: DistanceCertificate,
    /// Both certificates exact, so the comparison below is meaningful.
    pub certified: bool,
    /// d(x̂,ŷ) ≥ d(x,y) − 2, when certified.
    pub lower_ok: Option<bool>,
    /// d(x̂,ŷ) ≤ d(x,y) + 4, when certified.
    pub upper_ok: Option<bool>,
    pub companions: Vec<CompanionCheck>,
    pub notice: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QiReport {
    pub pairs: Vec<QiPairReport>,
    pub certified: usize,
    pub skipped: usize,
    /// True when every certified pair satisfies both displayed inequalities.
    pub all_bounds_hold: bool,
}

/// Compares ray-graph distances with loop-graph distances of the hat images
/// over the given pairs: checks d(x,y) − 2 ≤ d(x̂,ŷ) ≤ d(x,y) + 4 whenever
/// both distances carry exact certificates, and additionally verifies that
/// alternative loops disjoint from x stay within loop-distance 2 of x̂.
/// Pairs without exact certificates on both sides are skipped with notice.
pub fn qi_check(pairs: &[(RayCode, RayCode)]) -> QiReport {
    let mut members: Vec<RayCode> = Vec::new();
    let mut seen: HashSet<RayCode> = HashSet::new();
    for (x, y) in pairs {
        for r in [x, y] {
            let c = canonical_ray(r);
            if seen.insert(c.clone()) {
                members.push(c);
            }
        }
    }
    let max_a = members.iter().map(a_value).max().unwrap_or(0);

    // Ray slice: the pair members, the standard axis far enough to connect
    // them, and a thin enumerated layer for glue.
    let mut ray_seeds: Vec<Code> = members.iter().cloned().map(Code::Ray).collect();
    for k in 0..=max_a + 1 {
        ray_seeds.push(Code::Ray(alpha(k)));
    }
    let ray_slice = build_slice(SliceKind::RayGraph, 2, 2, &ray_seeds);

    // Loop slice: hats of every ray seed plus the same enumerated layer —
    // the candidate pool for companions and intermediate loops.
    let mut loop_seeds: Vec<Code> = Vec::new();
    for s in &ray_seeds {
        if let Code::Ray(r) = s {
            loop_seeds.push(Code::Loop(hat(r)));
        }
    }
    let loop_slice = build_slice(SliceKind::LoopGraph, 2, 2, &loop_seeds);

    let mut out = QiReport { pairs: Vec::new(), certified: 0, skipped: 0, all_bounds_hold: true };
    for (x, y) in pairs {
        let cx = canonical_ray(x);
        let cy = canonical_ray(y);
        let hx = hat(&cx);
        let hy = hat(&cy);
        let ray_certificate = distance(&ray_slice, &Code::Ray(cx.clone()), &Code::Ray(cy.clone()));
        let loop_certificate =
            distance(&loop_slice, &Code::Loop(hx.clone()), &Code::Loop(hy.clone()));
        let certified = ray_certificate.exact && loop_certificate.exact;
        let (lower_ok, upper_ok, notice) = if certified {
            let d = ray_certificate.upper.expect("exact certificate has an upper bound");
            let dh = loop_certificate.upper.expect("exact certificate has an upper bound");
            let lo = dh + 2 >= d;
            let hi = dh <= d + 4;
            if !(lo && hi) {
                out.all_bounds_hold = false;
            }
            (Some(lo), Some(hi), None)
        } else {
            out.skipped += 1;
            (None, None, Some("inexact certificate; pair skipped".to_string()))
        };
        if certified {
            out.certified += 1;
        }

        // Alternative disjoint companions for x: loops of the slice disjoint
        // from the ray itself, other than its hat.
        let mut companions = Vec::new();
        for z in loop_slice.vertices() {
            if companions.len() >= 2 {
                break;
            }
            if *z == Code::Loop(hx.clone()) {
                continue;
            }
            if codes_disjoint(&Code::Ray(cx.clone()), z) {
                let cert = distance(&loop_slice, &Code::Loop(hx.clone()), z);
                let within_two = cert.upper.is_some_and(|u| u <= 2);
                companions.push(CompanionCheck {
                    companion: z.clone(),
                    distance_upper: cert.upper,
                    within_two,
                });
            }
        }

        out.pairs.push(QiPairReport {
            x: Code::Ray(cx),
            y: Code::Ray(cy),
            ray_certificate,
            loop_certificate,
            certified,
            lower_ok,
            upper_ok,
            companions,
            notice,
        });
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleSample {
    pub corners: [Code; 3],
    pub side_lengths: [u32; 3],
    pub thinness: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    pub rng_seed: u64,
    pub requested: usize,
    pub attempts: usize,
    pub triangles: Vec<TriangleSample>,
    pub max_thinness: Option<u32>,
}

/// Geodesic triangle on three slice vertices, when every side carries an
/// exact certificate (the BFS paths are then genuine geodesics of the full
/// graph): the worst distance from a side to the union of the other two.
/// `None` when some side is inexact or unreachable.
pub fn triangle_thinness(slice: &GraphSlice, corners: [usize; 3]) -> Option<TriangleSample> {
    let codes =
        [&slice.vertices[corners[0]], &slice.vertices[corners[1]], &slice.vertices[corners[2]]];
    let certs = [
        distance(slice, codes[0], codes[1]),
        distance(slice, codes[1], codes[2]),
        distance(slice, codes[2], codes[0]),
    ];
    if !certs.iter().all(|c| c.exact) {
        return None;
    }
    let paths: Vec<Vec<usize>> = certs
        .iter()
        .map(|c| {
            c.path
                .as_ref()
                .expect("exact certificate has a path")
                .iter()
                .map(|code| slice.index[code])
                .collect()
        })
        .collect();
    let mut thinness = 0u32;
    for s in 0..3 {
        let mut others: Vec<usize> = Vec::new();
        others.extend(&paths[(s + 1) % 3]);
        others.extend(&paths[(s + 2) % 3]);
        let depth = multi_bfs(slice, &others);
        for &w in &paths[s] {
            let d = depth[w].expect("triangle sides live in one component");
            thinness = thinness.max(d);
        }
    }
    Some(TriangleSample {
        corners: [codes[0].clone(), codes[1].clone(), codes[2].clone()],
        side_lengths: [
            certs[0].upper.expect("exact"),
            certs[1].upper.expect("exact"),
            certs[2].upper.expect("exact"),
        ],
        thinness,
    })
}

/// Samples geodesic triangles in the slice and records the worst observed
/// thinness. Only triangles whose three sides carry exact certificates are
/// used. Sampling is seeded and reproducible.
pub fn delta_sample(slice: &GraphSlice, n_triangles: usize, rng_seed: u64) -> DeltaReport {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut report = DeltaReport {
        rng_seed,
        requested: n_triangles,
        attempts: 0,
        triangles: Vec::new(),
        max_thinness: None,
    };
    let v = slice.vertex_count();
    if v < 3 {
        return report;
    }
    let max_attempts = n_triangles.saturating_mul(60).max(60);
    while report.triangles.len() < n_triangles && report.attempts < max_attempts {
        report.attempts += 1;
        let i = rng.gen_range(0..v);
        let j = rng.gen_range(0..v);
        let k = rng.gen_range(0..v);
        if i == j || j == k || i == k {
            continue;
        }
        if let Some(t) = triangle_thinness(slice, [i, j, k]) {
            report.max_thinness =
                Some(report.max_thinness.map_or(t.thinness, |m: u32| m.max(t.thinness)));
            report.triangles.push(t);
        }
    }
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct PrefixClaim {
    pub family: String,
    pub n: u32,
    pub ray: Code,
    pub expected_prefix: Vec<SegmentId>,
    pub expected_north: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GermCrossing {
    pub first: String,
    pub second: String,
    pub forced: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceBound {
    pub n: u32,
    pub m: u32,
    /// The claimed lower bound n + m − 1 on d(h2^n(φα_0), h^m(α_0)).
    pub lower: u32,
    /// Matching explicit path through the common vertex of the two axes,
    /// re-verified edge by edge.
    pub upper_path: Vec<Code>,
    pub upper_verified: bool,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub prefix_claims: Vec<PrefixClaim>,
    pub germ_crossings: Vec<GermCrossing>,
    pub bounds: Vec<IndependenceBound>,
    pub all_certified: bool,
    pub notice: Option<String>,
}

/// Letterwise half-turn of a germ word (`s_j ↦ s_{−j−1}`) with the start
/// hemisphere flipped.
fn half_turn_germ(north: bool, word: &[SegmentId]) -> RayGerm {
    RayGerm { north: !north, word: word.iter().map(|s| s.mirror()).collect() }
}

/// Equator reflection of a ray class: flip the start hemisphere, then
/// canonicalize.
fn reflect(r: &RayCode) -> RayCode {
    canonical_ray(&RayCode { word: r.word.clone(), attach: r.attach, north: !r.north })
}

/// Checks the evidence behind the independence of the two translation
/// actions: the four image families h^±n(α_0), h2^±n(φα_0) begin with the
/// four expected prefixes, the four prefix germs pairwise force crossings
/// (so the balls around deep images are far apart), and the displayed lower
/// bound d(h2^n(φα_0), h^m(α_0)) ≥ n + m − 1 is matched by an explicit
/// verified path of exactly that length through the common vertex α_0 of
/// the two axes.
pub fn independence_check(n_max: u32, m_max: u32) -> IndependenceReport {
    let mut report = IndependenceReport {
        prefix_claims: Vec::new(),
        germ_crossings: Vec::new(),
        bounds: Vec::new(),
        all_certified: true,
        notice: None,
    };
    if n_max < 2 || m_max < 2 {
        report.notice = Some("range below the hypothesis |n|, |m| ≥ 2; nothing checked".into());
        report.all_certified = false;
        return report;
    }

    let h = mcg::h();
    let h2 = mcg::h2();
    let phi = mcg::generator("phi");
    let phi_alpha0 = mcg::apply_ray(&phi, &alpha(0));

    // The four prefix germs: α̊_2, φα̊_{−2}, φα̊_2, α̊_{−2}.
    let a2 = alpha_word(2);
    let an2 = alpha_neg(2);
    let germs: [(String, RayGerm); 4] = [
        ("alpha_2".into(), RayGerm { north: false, word: a2.clone() }),
        ("phi alpha_-2".into(), half_turn_germ(an2.north, &an2.word)),
        ("phi alpha_2".into(), half_turn_germ(false, &a2)),
        ("alpha_-2".into(), RayGerm { north: an2.north, word: an2.word.clone() }),
    ];

    let families: [(&str, mcg::MappingClass, RayCode, usize); 4] = [
        ("h^n(alpha_0)", h.clone(), alpha(0), 0),
        ("h2^n(phi alpha_0)", h2.clone(), phi_alpha0.clone(), 1),
        ("h2^-n(phi alpha_0)", mcg::invert(&h2), phi_alpha0.clone(), 2),
        ("h^-n(alpha_0)", mcg::invert(&h), alpha(0), 3),
    ];
    for n in 2..=n_max.max(m_max) {
        for (name, mc, base, gi) in &families {
            let image = mcg::apply_ray(&mcg::power(mc, n as i32), base);
            let germ = &germs[*gi].1;
            let holds = image.north == germ.north
                && image.word.len() >= germ.word.len()
                && image.word[..germ.word.len()] == germ.word[..];
            if !holds {
                report.all_certified = false;
            }
            report.prefix_claims.push(PrefixClaim {
                family: (*name).to_string(),
                n,
                ray: Code::Ray(image),
                expected_prefix: germ.word.clone(),
                expected_north: germ.north,
                holds,
            });
        }
    }

    for i in 0..4 {
        for j in (i + 1)..4 {
            let forced = germs_force_crossing(&germs[i].1, &germs[j].1);
            if !forced {
                report.all_certified = false;
            }
            report.germ_crossings.push(GermCrossing {
                first: germs[i].0.clone(),
                second: germs[j].0.clone(),
                forced,
            });
        }
    }

    let claims_hold = report.prefix_claims.iter().all(|c| c.holds)
        && report.germ_crossings.iter().all(|c| c.forced);
    for n in 2..=n_max {
        for m in 2..=m_max {
            // h2^n(φα_0) = reflect(α_{n−1}) sits on the reflected axis; the
            // two axes meet at α_0 = reflect(α_0), giving a path of length
            // (n−1) + m that matches the claimed lower bound exactly.
            let start = mcg::apply_ray(&mcg::power(&h2, n as i32), &phi_alpha0);
            let end = mcg::apply_ray(&mcg::power(&h, m as i32), &alpha(0));
            let mut path: Vec<Code> = Vec::new();
            for k in (1..n).rev() {
                path.push(Code::Ray(reflect(&alpha(k))));
            }
            path.push(Code::Ray(canonical_ray(&alpha(0))));
            for k in 1..=m {
                path.push(Code::Ray(canonical_ray(&alpha(k))));
            }
            let mut upper_verified = *path.first().expect("nonempty") == Code::Ray(start.clone())
                && *path.last().expect("nonempty") == Code::Ray(end.clone())
                && path.len() as u32 == n + m;
            for w in path.windows(2) {
                if !(w[0] != w[1] && codes_disjoint(&w[0], &w[1])) {
                    upper_verified = false;
                }
            }
            let certified = claims_hold && upper_verified;
            if !certified {
                report.all_certified = false;
            }
            report.bounds.push(IndependenceBound {
                n,
                m,
                lower: n + m - 1,
                upper_path: path,
                upper_verified,
                certified,
            });
        }
    }
    report
}

/// JSON-ready slice export: adjacency list keyed by code strings.
#[derive(Clone, Debug, Serialize)]
pub struct SliceExport {
    pub kind: SliceKind,
    pub max_word_len: usize,
    pub window: i64,
    pub truncated: bool,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub adjacency: BTreeMap<String, Vec<String>>,
}

pub fn export_slice(slice: &GraphSlice) -> SliceExport {
    let mut adjacency = BTreeMap::new();
    for (i, c) in slice.vertices().iter().enumerate() {
        let nbrs: Vec<String> =
            slice.neighbors(i).into_iter().map(|j| slice.vertices[j].to_string()).collect();
        adjacency.insert(c.to_string(), nbrs);
    }
    SliceExport {
        kind: slice.kind,
        max_word_len: slice.max_word_len,
        window: slice.window,
        truncated: slice.truncated,
        vertex_count: slice.vertex_count(),
        edge_count: slice.edge_count(),
        adjacency,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::parse_code;

    fn ray(s: &str) -> Code {
        parse_code(s).expect("test code parses")
    }

    #[test]
    fn axis_neighbours_are_adjacent() {
        let seeds: Vec<Code> = (0..=3).map(|k| Code::Ray(alpha(k))).collect();
        let slice = build_slice(SliceKind::RayGraph, 3, 2, &seeds);
        assert!(!slice.truncated);
        for k in 0..3u32 {
            let c = distance(&slice, &Code::Ray(alpha(k)), &Code::Ray(alpha(k + 1)));
            assert_eq!(c.upper, Some(1));
            assert!(c.exact, "axis step {k} should be certified");
        }
    }

    #[test]
    fn empty_seeds_give_an_empty_slice() {
        let slice = build_slice(SliceKind::RayGraph, 2, 1, &[]);
        assert_eq!(slice.vertex_count(), 0);
        assert_eq!(slice.edge_count(), 0);
    }

    #[test]
    fn slice_vertices_are_canonical_and_simple() {
        let seeds = [ray("@p0"), ray("s1 @p0")];
        let slice = build_slice(SliceKind::RayGraph, 3, 2, &seeds);
        assert!(slice.vertex_count() > 2, "enumeration joins the seeds");
        for c in slice.vertices() {
            assert_eq!(canonical(c), *c);
            match c {
                Code::Ray(r) => assert!(r.is_canonical_form()),
                Code::Loop(_) => panic!("ray slice holds rays"),
            }
        }
    }

    #[test]
    fn loop_slice_vertices_are_essential() {
        let seeds = [Code::Loop(hat(&alpha(0))), Code::Loop(hat(&alpha(1)))];
        let slice = build_slice(SliceKind::LoopGraph, 2, 2, &seeds);
        assert!(slice.vertex_count() >= 2);
        for c in slice.vertices() {
            match c {
                Code::Loop(l) => assert!(essential_loop(l)),
                Code::Ray(_) => panic!("loop slice holds loops"),
            }
        }
    }

    #[test]
    fn axis_distances_are_exact() {
        let seeds: Vec<Code> = (0..=6).map(|k| Code::Ray(alpha(k))).collect();
        let slice = build_slice(SliceKind::RayGraph, 2, 2, &seeds);
        for n in 1..=6u32 {
            let c = distance(&slice, &Code::Ray(alpha(0)), &Code::Ray(alpha(n)));
            assert_eq!(c.lower, n);
            assert_eq!(c.upper, Some(n), "axis path realizes the A-bound");
            assert!(c.exact);
            if n > 2 {
                assert_eq!(c.lower_provenance, LowerProvenance::ABound);
            }
        }
        let same = distance(&slice, &Code::Ray(alpha(2)), &Code::Ray(alpha(2)));
        assert_eq!(same.upper, Some(0));
        assert!(same.exact);
    }

    #[test]
    fn enlarging_bounds_never_worsens_upper_bounds() {
        let seeds = [ray("@p0"), ray("^ s1 s-2 @p-1")];
        let small = build_slice(SliceKind::RayGraph, 1, 2, &seeds);
        let large = build_slice(SliceKind::RayGraph, 2, 2, &seeds);
        let (u, v) = (&seeds[0], &seeds[1]);
        let cs = distance(&small, u, v);
        let cl = distance(&large, u, v);
        match (cs.upper, cl.upper) {
            (Some(a), Some(b)) => assert!(b <= a),
            (Some(_), None) => panic!("larger slice lost a path"),
            (None, _) => {}
        }
    }

    #[test]
    fn a_function_is_lipschitz_across_edges() {
        let seeds: Vec<Code> = (0..=4).map(|k| Code::Ray(alpha(k))).collect();
        let slice = build_slice(SliceKind::RayGraph, 3, 2, &seeds);
        assert!(slice.edge_count() > 50);
        for (i, j) in slice.edges() {
            let (a, b) = match (&slice.vertices()[i], &slice.vertices()[j]) {
                (Code::Ray(a), Code::Ray(b)) => (a_value(a), a_value(b)),
                _ => unreachable!("ray slice"),
            };
            assert!(
                a.abs_diff(b) <= 1,
                "edge {} – {} breaks the Lipschitz bound",
                slice.vertices()[i],
                slice.vertices()[j]
            );
        }
    }

    #[test]
    fn qi_bounds_hold_on_axis_pairs() {
        let pairs: Vec<(RayCode, RayCode)> =
            (0..=3).map(|n| (alpha(0), alpha(n))).chain([(alpha(1), alpha(3))]).collect();
        let report = qi_check(&pairs);
        assert!(report.all_bounds_hold);
        assert!(report.certified >= 2, "small axis pairs certify");
        // (x, x): both distances zero, bounds trivially hold.
        let same = qi_check(&[(alpha(2), alpha(2))]);
        assert!(same.all_bounds_hold);
        assert_eq!(same.certified, 1);
        let first = &same.pairs[0];
        assert_eq!(first.loop_certificate.upper, Some(0));
    }

    #[test]
    fn hat_neighbours_stay_close() {
        let report = qi_check(&[(alpha(0), alpha(1))]);
        let pair = &report.pairs[0];
        assert!(pair.certified);
        assert!(pair.loop_certificate.upper.expect("exact") <= 5);
        for c in &pair.companions {
            assert!(c.within_two, "companion {} strays", c.companion);
        }
    }

    #[test]
    fn delta_sampling_is_reproducible_and_small() {
        let seeds: Vec<Code> = (0..=4).map(|k| Code::Ray(alpha(k))).collect();
        let slice = build_slice(SliceKind::RayGraph, 2, 2, &seeds);
        let a = delta_sample(&slice, 12, 7);
        let b = delta_sample(&slice, 12, 7);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(!a.triangles.is_empty());
        assert!(a.max_thinness.expect("sampled") <= 20);
    }

    #[test]
    fn degenerate_triangles_have_zero_thinness() {
        // In a slice reduced to the axis start, the only geodesic between
        // the ends runs along the axis itself: each side lies inside the
        // union of the other two.
        let seeds: Vec<Code> = (0..=2).map(|k| Code::Ray(alpha(k))).collect();
        let slice = build_slice(SliceKind::RayGraph, 0, 0, &seeds);
        let idx = |k: u32| slice.position(&Code::Ray(alpha(k))).expect("seeded");
        let t = triangle_thinness(&slice, [idx(0), idx(1), idx(2)]).expect("axis is exact");
        assert_eq!(t.side_lengths, [1, 1, 2]);
        assert_eq!(t.thinness, 0);
    }

    #[test]
    fn independence_evidence_checks_out() {
        let report = independence_check(3, 3);
        assert!(report.all_certified, "evidence: {report:?}");
        assert_eq!(report.germ_crossings.len(), 6);
        for b in &report.bounds {
            assert_eq!(b.lower, b.n + b.m - 1);
            assert!(b.upper_verified);
            assert_eq!(b.upper_path.len() as u32, b.n + b.m);
        }
        let skipped = independence_check(1, 3);
        assert!(!skipped.all_certified);
        assert!(skipped.notice.is_some());
    }

    #[test]
    fn slice_export_is_deterministic() {
        let seeds = [ray("@p0"), ray("@p1")];
        let a = export_slice(&build_slice(SliceKind::RayGraph, 2, 1, &seeds));
        let b = export_slice(&build_slice(SliceKind::RayGraph, 2, 1, &seeds));
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.adjacency.len(), a.vertex_count);
    }
}
