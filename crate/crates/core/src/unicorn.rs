//! Unicorn paths between loops and their thin-triangle and subpath checks.
//!
//! Given two oriented loops `a⁺`, `b⁺` in minimal position, every crossing π
//! splits them into the initial segment `a′` of `a⁺` up to π and the initial
//! segment `b′` of `b⁺` up to π; when the concatenation `a′ ⋆ b′` is embedded
//! it is a *unicorn arc*. The unicorn arcs are totally ordered — the splice
//! keeps more of `a` exactly when it keeps less of `b` — and threading them
//! between the endpoints yields the *unicorn path* `P(a⁺,b⁺)`, whose
//! consecutive vertices are disjoint. Paths built this way form uniformly
//! thin triangles, contain their own sub-unicorn-paths up to one documented
//! two-step shortcut, and stay near geodesics; each of those statements is
//! implemented here as an executable check that fails loudly rather than
//! returning a sanitized answer.

use serde::Serialize;

use crate::coding::{Code, LoopCode};
use crate::graphs::{self, GraphSlice};
use crate::model::{self, Orientation};

/// A simple essential loop together with a chosen reading direction.
///
/// Unicorn paths depend on the orientations of both endpoints, so the choice
/// is recorded explicitly. The underlying class is kept in canonical form;
/// `Forward` means the canonical reading itself, `Backward` the reversed one.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct OrientedLoop {
    class: LoopCode,
    orientation: Orientation,
}

impl OrientedLoop {
    /// Wraps a loop class with an explicit reading direction.
    ///
    /// Panics if the class is not an embedded essential loop — only those are
    /// vertices of the loop graph, and the splice machinery relies on both
    /// inputs being simple.
    pub fn new(l: &LoopCode, orientation: Orientation) -> OrientedLoop {
        let class = model::canonical_loop(l);
        assert!(
            model::essential_loop(&class),
            "oriented loops must be essential: {class} is not"
        );
        assert!(loop_is_simple(&class), "oriented loops must be embedded: {class} crosses itself");
        OrientedLoop { class, orientation }
    }

    /// The deterministic default orientation: read the canonical form
    /// forwards (the lexicographically preferred of the two readings).
    pub fn standard(l: &LoopCode) -> OrientedLoop {
        OrientedLoop::new(l, Orientation::Forward)
    }

    /// The underlying unoriented vertex, in canonical form.
    pub fn class(&self) -> &LoopCode {
        &self.class
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// The word in the chosen traversal direction, starting at ∞.
    pub fn reading(&self) -> LoopCode {
        model::oriented_loop(&self.class, self.orientation)
    }

    /// The same class read the other way.
    fn flipped(&self) -> OrientedLoop {
        let orientation = match self.orientation {
            Orientation::Forward => Orientation::Backward,
            Orientation::Backward => Orientation::Forward,
        };
        OrientedLoop { class: self.class.clone(), orientation }
    }
}

/// The ordered vertex list of a unicorn path, from `a` to `b`.
///
/// Invariant (asserted on construction): consecutive vertices are disjoint,
/// so the list is a genuine path in the loop graph.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct UnicornPath {
    pub vertices: Vec<LoopCode>,
}

/// Embeddedness of a loop class, tested on its tightened representative.
fn loop_is_simple(l: &LoopCode) -> bool {
    let code = Code::Loop(l.clone());
    let m = model::build_model(std::slice::from_ref(&code));
    let arc = model::realize(&m, &code).expect("auto-sized window covers the code");
    let tight = model::tighten(&m, &arc);
    model::is_simple(&m, &tight)
}

/// One kept splice: the as-built concatenation `a′ ⋆ b′`, its canonical
/// class, and the crossing position along both inputs (component index, then
/// rank within the component, both in traversal order from ∞).
struct Splice {
    raw: LoopCode,
    class: LoopCode,
    pos_a: (usize, usize),
    pos_b: (usize, usize),
}

/// All embedded splices of the two readings, sorted along `b⁺`.
///
/// Each crossing is tried; a splice is kept when it is an embedded essential
/// loop. (A splice whose word collapses entirely, or that only encircles ∞,
/// is not a vertex of the loop graph; such crossings contribute no arc.)
/// After sorting by position along `b⁺` the positions along `a⁺` must be
/// strictly decreasing — the containment duality — and any violation panics.
fn splices(a: &OrientedLoop, b: &OrientedLoop) -> Vec<Splice> {
    if a.class == b.class {
        return Vec::new();
    }
    let aw = a.reading();
    let bw = b.reading();
    let ca = Code::Loop(aw.clone());
    let cb = Code::Loop(bw.clone());
    let m = model::build_model(&[ca.clone(), cb.clone()]);
    let ta = model::tighten(&m, &model::realize(&m, &ca).expect("auto-sized window"));
    let tb = model::tighten(&m, &model::realize(&m, &cb).expect("auto-sized window"));
    assert!(
        ta.edges().len() == aw.word.len() && tb.edges().len() == bw.word.len(),
        "canonical readings are already tight"
    );

    let mut kept: Vec<Splice> = Vec::new();
    for site in model::crossing_sites(&m, &ta, &tb) {
        let mut word = aw.word[..site.a_component].to_vec();
        word.extend(bw.word[..site.b_component].iter().rev().copied());
        let raw = LoopCode { word, north: aw.north };
        let class = model::canonical_loop(&raw);
        if class.word.is_empty() || !model::essential_loop(&class) {
            continue;
        }
        if !loop_is_simple(&class) {
            continue;
        }
        kept.push(Splice {
            raw,
            class,
            pos_a: (site.a_component, site.a_rank),
            pos_b: (site.b_component, site.b_rank),
        });
    }
    kept.sort_by_key(|s| s.pos_b);
    for w in kept.windows(2) {
        assert!(
            w[0].pos_b < w[1].pos_b && w[0].pos_a > w[1].pos_a,
            "containment duality violated: splice order along the two loops disagrees"
        );
    }
    kept
}

/// The unicorn arcs of the oriented pair, as canonical classes.
///
/// Ordered so that the first arc shares the longest initial segment with
/// `a⁺` (its crossing comes first along `b⁺`) and the last shares the
/// longest initial segment with `b⁺`. Disjoint inputs have no crossings and
/// hence no arcs.
pub fn unicorn_arcs(a: &OrientedLoop, b: &OrientedLoop) -> Vec<LoopCode> {
    splices(a, b).into_iter().map(|s| s.class).collect()
}

/// The unicorn path `(a, c_1, …, c_{n−1}, b)`.
///
/// Equal endpoint classes give the one-vertex path; disjoint distinct
/// endpoints give the two-vertex path. Consecutive disjointness is verified
/// on every call and a violation panics: it would mean the splice order or
/// the crossing bookkeeping is wrong, and no downstream check may trust it.
pub fn unicorn_path(a: &OrientedLoop, b: &OrientedLoop) -> UnicornPath {
    if a.class == b.class {
        return UnicornPath { vertices: vec![a.class.clone()] };
    }
    let mut vertices = vec![a.class.clone()];
    vertices.extend(unicorn_arcs(a, b));
    vertices.push(b.class.clone());
    for w in vertices.windows(2) {
        assert!(
            model::codes_disjoint(&Code::Loop(w[0].clone()), &Code::Loop(w[1].clone())),
            "unicorn path invariant violated: consecutive vertices {} and {} cross",
            w[0],
            w[1]
        );
    }
    UnicornPath { vertices }
}

/// One pairing of a path vertex with a nearby vertex on the other two sides
/// of a triangle.
#[derive(Clone, Debug, Serialize)]
pub struct ThinWitness {
    /// Vertex of `P(a,b)` being witnessed.
    pub vertex: LoopCode,
    /// The witness on one of the other two sides, at distance ≤ 1.
    pub witness: LoopCode,
    /// `"a-d"` or `"d-b"`: which side the witness lies on.
    pub side: String,
    /// Index of the witness within its side.
    pub index: usize,
    /// 0 when the vertex itself appears on the other side, else 1.
    pub distance: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThinTriangleReport {
    pub path_ab: Vec<LoopCode>,
    pub path_ad: Vec<LoopCode>,
    pub path_db: Vec<LoopCode>,
    /// One entry per vertex of `path_ab`, in order.
    pub witnesses: Vec<ThinWitness>,
}

/// Checks that the unicorn triangle on `a`, `b`, `d` is 1-thin: every vertex
/// of `P(a,b)` lies within distance 1 of `P(a,d) ∪ P(d,b)`.
///
/// Panics when some vertex has no witness — that would falsify the
/// implementation, so it must not be reported as a mere `false`.
pub fn check_thin_triangle(a: &OrientedLoop, b: &OrientedLoop, d: &OrientedLoop) -> ThinTriangleReport {
    let path_ab = unicorn_path(a, b).vertices;
    let path_ad = unicorn_path(a, d).vertices;
    let path_db = unicorn_path(d, b).vertices;
    let witnesses = path_ab
        .iter()
        .map(|gamma| {
            let gc = Code::Loop(gamma.clone());
            let sides = [("a-d", &path_ad), ("d-b", &path_db)];
            for (side, path) in sides {
                for (index, cand) in path.iter().enumerate() {
                    let distance = if cand == gamma {
                        0
                    } else if model::codes_disjoint(&gc, &Code::Loop(cand.clone())) {
                        1
                    } else {
                        continue;
                    };
                    return ThinWitness {
                        vertex: gamma.clone(),
                        witness: cand.clone(),
                        side: side.to_string(),
                        index,
                        distance,
                    };
                }
            }
            panic!("triangle is not 1-thin at {gamma}: no witness on either other side");
        })
        .collect();
    ThinTriangleReport { path_ab, path_ad, path_db, witnesses }
}

/// Verdict of [`check_subpath_property`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SubpathOutcome {
    /// `P(γ_i⁺, γ_j⁺)` appears verbatim as the block of `P(a⁺,b⁺)` starting
    /// at `start`.
    Subpath { start: usize },
    /// The documented exception: `j = i + 2` while `γ_i` and `γ_j` are
    /// already disjoint, so the inner path skips the middle vertex.
    Shortcut,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubpathReport {
    pub i: usize,
    pub j: usize,
    /// The full path `P(a⁺,b⁺)`.
    pub whole: Vec<LoopCode>,
    /// The recomputed inner path `P(γ_i⁺, γ_j⁺)`.
    pub inner: Vec<LoopCode>,
    pub outcome: SubpathOutcome,
}

/// Recomputes the unicorn path between the `i`-th and `j`-th vertices of
/// `P(a⁺,b⁺)` — with their inherited orientations — and decides whether it
/// is a contiguous block of the outer path or the one admissible shortcut.
///
/// Interior vertices inherit orientations from the splice they came from:
/// as the earlier endpoint `γ_i` is traversed the way `a⁺` runs through it,
/// as the later endpoint `γ_j` the way `b⁺` does (the reverse reading of the
/// as-built splice). Any third outcome panics.
pub fn check_subpath_property(a: &OrientedLoop, b: &OrientedLoop, i: usize, j: usize) -> SubpathReport {
    let sp = splices(a, b);
    let whole = unicorn_path(a, b).vertices;
    let n = whole.len() - 1;
    assert!(i <= j && j <= n, "subpath indices must satisfy 0 <= i <= j <= {n}");

    // Orient an interior splice: `Forward` of its canonical class when the
    // as-built reading (a-part first) survives tightening unreversed.
    let oriented_like_a = |raw: &LoopCode| -> OrientedLoop {
        let code = Code::Loop(raw.clone());
        let m = model::build_model(std::slice::from_ref(&code));
        let arc = model::realize(&m, &code).expect("auto-sized window");
        let tight = model::tighten(&m, &arc);
        let tw = match model::encode(&m, &tight).expect("tightening stays encodable") {
            Code::Loop(l) => l,
            Code::Ray(_) => unreachable!("splices are loops"),
        };
        let class = model::canonical_loop(raw);
        let orientation = if tw == class {
            Orientation::Forward
        } else {
            assert!(
                tw == model::reverse_loop(&class),
                "tightened splice must read as the class or its reverse"
            );
            Orientation::Backward
        };
        OrientedLoop { class, orientation }
    };
    let corner = |k: usize, incoming: bool| -> OrientedLoop {
        if k == 0 {
            a.clone()
        } else if k == n {
            b.clone()
        } else if incoming {
            oriented_like_a(&sp[k - 1].raw)
        } else {
            oriented_like_a(&sp[k - 1].raw).flipped()
        }
    };

    let gi = corner(i, true);
    let gj = corner(j, false);
    let inner = unicorn_path(&gi, &gj).vertices;

    let outcome = if whole[i..=j] == inner[..] {
        SubpathOutcome::Subpath { start: i }
    } else if j == i + 2 && inner.len() == 2 && whole[i] != whole[j] {
        // The inner endpoints are disjoint (their path has no interior), so
        // they cobound the one allowed shortcut past the middle vertex.
        SubpathOutcome::Shortcut
    } else {
        panic!(
            "inner unicorn path between vertices {i} and {j} is neither a \
             contiguous block nor the two-step shortcut"
        );
    };
    SubpathReport { i, j, whole, inner, outcome }
}

#[derive(Clone, Debug, Serialize)]
pub struct NeighborhoodReport {
    pub path: Vec<LoopCode>,
    pub geodesic: Vec<LoopCode>,
    /// Max over the unicorn path of the slice distance to the geodesic.
    pub path_to_geodesic: Option<u32>,
    /// Max over the geodesic of the slice distance to the unicorn path.
    pub geodesic_to_path: Option<u32>,
    /// Set when the slice cannot answer (a vertex is missing or unreachable);
    /// the maxima are then left unset rather than guessed.
    pub unverifiable: Option<String>,
}

/// Measures how far the unicorn path strays from a verified geodesic with
/// the same endpoints, and vice versa, inside the given slice.
///
/// Slice distances can only overestimate the true graph distance, so small
/// maxima are sound evidence for the neighborhood claims; a slice that is
/// too small yields `unverifiable`, never a fabricated number.
pub fn neighborhood_check(
    a: &OrientedLoop,
    b: &OrientedLoop,
    geodesic: &[LoopCode],
    slice: &GraphSlice,
) -> NeighborhoodReport {
    assert!(!geodesic.is_empty(), "geodesic must contain its endpoints");
    let geodesic: Vec<LoopCode> = geodesic.iter().map(model::canonical_loop).collect();
    assert!(
        geodesic.first() == Some(&a.class) && geodesic.last() == Some(&b.class),
        "geodesic endpoints must be the two loops"
    );
    for w in geodesic.windows(2) {
        assert!(
            w[0] != w[1] && model::codes_disjoint(&Code::Loop(w[0].clone()), &Code::Loop(w[1].clone())),
            "geodesic must be a path: {} and {} are not adjacent",
            w[0],
            w[1]
        );
    }
    let path = unicorn_path(a, b).vertices;

    let locate = |codes: &[LoopCode]| -> Result<Vec<usize>, String> {
        codes
            .iter()
            .map(|l| {
                slice
                    .position(&Code::Loop(l.clone()))
                    .ok_or_else(|| format!("slice does not contain {l}"))
            })
            .collect()
    };
    let report_unverifiable = |why: String, path: Vec<LoopCode>, geodesic: Vec<LoopCode>| NeighborhoodReport {
        path,
        geodesic,
        path_to_geodesic: None,
        geodesic_to_path: None,
        unverifiable: Some(why),
    };
    let (path_pos, geo_pos) = match (locate(&path), locate(&geodesic)) {
        (Ok(p), Ok(g)) => (p, g),
        (Err(why), _) | (_, Err(why)) => return report_unverifiable(why, path, geodesic),
    };

    let eccentricity = |sources: &[usize], targets: &[usize]| -> Result<u32, String> {
        let depth = graphs::multi_bfs(slice, sources);
        targets
            .iter()
            .map(|&t| depth[t].ok_or_else(|| "slice disconnects the path from the geodesic".to_string()))
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    };
    match (eccentricity(&geo_pos, &path_pos), eccentricity(&path_pos, &geo_pos)) {
        (Ok(p2g), Ok(g2p)) => NeighborhoodReport {
            path,
            geodesic,
            path_to_geodesic: Some(p2g),
            geodesic_to_path: Some(g2p),
            unverifiable: None,
        },
        (Err(why), _) | (_, Err(why)) => report_unverifiable(why, path, geodesic),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::{alpha, AttachId, RayCode, SegmentId};
    use crate::graphs::SliceKind;
    use crate::model::{canonical_loop, code_geometric_intersection, codes_disjoint, hat};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn ray_at(p: i64) -> RayCode {
        RayCode { word: Vec::new(), attach: AttachId(p), north: false }
    }

    fn standard(l: &LoopCode) -> OrientedLoop {
        OrientedLoop::standard(l)
    }

    fn crossings(x: &LoopCode, y: &LoopCode) -> u64 {
        code_geometric_intersection(&Code::Loop(x.clone()), &Code::Loop(y.clone()))
    }

    #[test]
    fn disjoint_loops_have_no_arcs_and_a_two_step_path() {
        let a = standard(&hat(&ray_at(0)));
        let b = standard(&hat(&ray_at(2)));
        assert_eq!(crossings(a.class(), b.class()), 0);
        assert!(unicorn_arcs(&a, &b).is_empty());
        let p = unicorn_path(&a, &b);
        assert_eq!(p.vertices, vec![a.class().clone(), b.class().clone()]);
    }

    #[test]
    fn equal_classes_give_the_one_vertex_path() {
        let l = hat(&ray_at(0));
        let fwd = OrientedLoop::new(&l, Orientation::Forward);
        let bwd = OrientedLoop::new(&l, Orientation::Backward);
        assert_eq!(unicorn_path(&fwd, &bwd).vertices, vec![fwd.class().clone()]);
    }

    #[test]
    fn one_crossing_pairs_yield_exactly_one_arc() {
        let slice = graphs::build_slice(SliceKind::LoopGraph, 2, 2, &[Code::Loop(hat(&ray_at(0)))]);
        let loops: Vec<LoopCode> = slice
            .vertices()
            .iter()
            .map(|c| match c {
                Code::Loop(l) => l.clone(),
                Code::Ray(_) => unreachable!("loop slice"),
            })
            .collect();
        let mut found = 0;
        for i in 0..loops.len() {
            for j in i + 1..loops.len() {
                if crossings(&loops[i], &loops[j]) != 1 {
                    continue;
                }
                found += 1;
                let a = standard(&loops[i]);
                let b = standard(&loops[j]);
                let arcs = unicorn_arcs(&a, &b);
                assert_eq!(arcs.len(), 1, "one crossing forces one splice");
                let p = unicorn_path(&a, &b).vertices;
                assert_eq!(p.len(), 3);
                assert_eq!(p[1], arcs[0]);
            }
        }
        assert!(found > 0, "the small slice contains crossing pairs");
    }

    /// Independent enumeration for the axis example: splice every crossing
    /// site by hand and keep what is embedded and essential.
    #[test]
    fn axis_hat_arcs_match_exhaustive_splice_enumeration() {
        let a = standard(&hat(&alpha(0)));
        let b = standard(&hat(&alpha(2)));
        let arcs = unicorn_arcs(&a, &b);

        let aw = a.reading();
        let bw = b.reading();
        let ca = Code::Loop(aw.clone());
        let cb = Code::Loop(bw.clone());
        let m = model::build_model(&[ca.clone(), cb.clone()]);
        let ta = model::tighten(&m, &model::realize(&m, &ca).unwrap());
        let tb = model::tighten(&m, &model::realize(&m, &cb).unwrap());
        let mut brute: Vec<LoopCode> = Vec::new();
        for site in model::crossing_sites(&m, &ta, &tb) {
            let mut word: Vec<SegmentId> = aw.word[..site.a_component].to_vec();
            word.extend(bw.word[..site.b_component].iter().rev().copied());
            let class = canonical_loop(&LoopCode { word, north: aw.north });
            if !class.word.is_empty() && model::essential_loop(&class) && loop_is_simple(&class) {
                brute.push(class);
            }
        }
        assert_eq!(arcs.len(), brute.len());

        let key = |l: &LoopCode| (l.north, l.word.clone());
        let mut got: Vec<_> = arcs.iter().map(key).collect();
        let mut want: Vec<_> = brute.iter().map(key).collect();
        got.sort();
        want.sort();
        assert_eq!(got, want);
        assert!(!arcs.is_empty(), "the axis hats cross");
    }

    /// The splice set is orientation-symmetric, and the total order reverses
    /// with the roles of the two loops.
    #[test]
    fn swapping_the_loops_reverses_the_arc_order() {
        let a = standard(&hat(&alpha(0)));
        let b = standard(&hat(&alpha(2)));
        let mut forward = unicorn_arcs(&a, &b);
        forward.reverse();
        assert_eq!(forward, unicorn_arcs(&b, &a));
    }

    #[test]
    fn paths_are_isotopy_invariant_across_representatives() {
        let tidy = hat(&ray_at(0));
        let mut padded = tidy.word.clone();
        padded.insert(0, SegmentId(2));
        padded.insert(0, SegmentId(2));
        let messy = LoopCode { word: padded, north: tidy.north };
        assert_ne!(messy.word, canonical_loop(&messy).word);

        let other = standard(&hat(&alpha(2)));
        let p1 = unicorn_path(&OrientedLoop::new(&tidy, Orientation::Forward), &other);
        let p2 = unicorn_path(&OrientedLoop::new(&messy, Orientation::Forward), &other);
        assert_eq!(p1, p2);
    }

    #[test]
    fn sampled_paths_have_disjoint_consecutive_vertices() {
        let slice = graphs::build_slice(SliceKind::LoopGraph, 3, 2, &[Code::Loop(hat(&ray_at(0)))]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = slice.vertex_count();
        assert!(n > 10);
        for _ in 0..12 {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            let (Code::Loop(x), Code::Loop(y)) = (&slice.vertices()[i], &slice.vertices()[j]) else {
                unreachable!("loop slice");
            };
            let p = unicorn_path(&standard(x), &standard(y)).vertices;
            for w in p.windows(2) {
                assert!(codes_disjoint(&Code::Loop(w[0].clone()), &Code::Loop(w[1].clone())));
            }
        }
    }

    #[test]
    fn apex_disjoint_from_a_side_witnesses_all_of_it() {
        // A splice winds around ∞, so loops far along the equator still
        // cross it; the one loop disjoint from this whole path is its own
        // middle vertex, which makes a legitimate (if cosy) apex.
        let a = standard(&hat(&alpha(0)));
        let b = standard(&hat(&alpha(2)));
        let path = unicorn_path(&a, &b).vertices;
        assert_eq!(path.len(), 3);
        let d = standard(&path[1]);
        for gamma in &path {
            assert!(codes_disjoint(&Code::Loop(gamma.clone()), &Code::Loop(d.class().clone())));
        }
        let report = check_thin_triangle(&a, &b, &d);
        assert_eq!(report.witnesses.len(), report.path_ab.len());
        for w in &report.witnesses {
            assert!(w.distance <= 1);
        }
    }

    #[test]
    fn degenerate_triangles_witness_the_shared_corner() {
        let a = standard(&hat(&alpha(0)));
        let d = standard(&hat(&alpha(2)));
        let report = check_thin_triangle(&a, &a, &d);
        assert_eq!(report.path_ab, vec![a.class().clone()]);
        assert_eq!(report.witnesses[0].distance, 0);
    }

    #[test]
    fn sampled_triangles_are_one_thin() {
        let slice = graphs::build_slice(SliceKind::LoopGraph, 3, 2, &[Code::Loop(hat(&ray_at(0)))]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = slice.vertex_count();
        for _ in 0..8 {
            let pick: Vec<&Code> =
                (0..3).map(|_| &slice.vertices()[rng.gen_range(0..n)]).collect();
            let corner = |c: &Code| match c {
                Code::Loop(l) => standard(l),
                Code::Ray(_) => unreachable!("loop slice"),
            };
            let report =
                check_thin_triangle(&corner(pick[0]), &corner(pick[1]), &corner(pick[2]));
            assert_eq!(report.witnesses.len(), report.path_ab.len());
        }
    }

    #[test]
    fn full_range_and_single_vertices_are_subpaths() {
        let a = standard(&hat(&alpha(0)));
        let b = standard(&hat(&alpha(2)));
        let n = unicorn_path(&a, &b).vertices.len() - 1;
        let full = check_subpath_property(&a, &b, 0, n);
        assert_eq!(full.outcome, SubpathOutcome::Subpath { start: 0 });
        for k in 0..=n {
            let one = check_subpath_property(&a, &b, k, k);
            assert_eq!(one.outcome, SubpathOutcome::Subpath { start: k });
            assert_eq!(one.inner.len(), 1);
        }
    }

    #[test]
    fn every_index_pair_is_a_subpath_or_the_shortcut() {
        let a = standard(&hat(&alpha(0)));
        let b = standard(&hat(&alpha(2)));
        let n = unicorn_path(&a, &b).vertices.len() - 1;
        let mut shortcuts = 0;
        for i in 0..=n {
            for j in i..=n {
                let report = check_subpath_property(&a, &b, i, j);
                match report.outcome {
                    SubpathOutcome::Subpath { start } => assert_eq!(start, i),
                    SubpathOutcome::Shortcut => {
                        assert_eq!(j, i + 2);
                        shortcuts += 1;
                    }
                }
            }
        }
        // Whether any shortcut occurs depends on the pair; the check itself
        // must simply never panic above.
        let _ = shortcuts;
    }

    #[test]
    fn disjoint_pairs_sit_on_their_own_geodesic() {
        let a = standard(&hat(&ray_at(0)));
        let b = standard(&hat(&ray_at(2)));
        let seeds = [Code::Loop(a.class().clone()), Code::Loop(b.class().clone())];
        let slice = graphs::build_slice(SliceKind::LoopGraph, 2, 2, &seeds);
        let geodesic = vec![a.class().clone(), b.class().clone()];
        let report = neighborhood_check(&a, &b, &geodesic, &slice);
        assert_eq!(report.unverifiable, None);
        assert_eq!(report.path_to_geodesic, Some(0));
        assert_eq!(report.geodesic_to_path, Some(0));
    }

    #[test]
    fn distance_two_pairs_stay_within_one_of_a_geodesic() {
        let slice = graphs::build_slice(SliceKind::LoopGraph, 3, 2, &[Code::Loop(hat(&ray_at(0)))]);
        let verts = slice.vertices();
        let mut checked = 0;
        'outer: for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let cert = graphs::distance(&slice, &verts[i], &verts[j]);
                if !(cert.exact && cert.upper == Some(2)) {
                    continue;
                }
                let path: Vec<LoopCode> = cert
                    .path
                    .as_ref()
                    .unwrap()
                    .iter()
                    .map(|c| match c {
                        Code::Loop(l) => l.clone(),
                        Code::Ray(_) => unreachable!("loop slice"),
                    })
                    .collect();
                let (Code::Loop(x), Code::Loop(y)) = (&verts[i], &verts[j]) else {
                    unreachable!("loop slice");
                };
                let report = neighborhood_check(&standard(x), &standard(y), &path, &slice);
                if report.unverifiable.is_some() {
                    // A unicorn vertex may fall outside this small slice;
                    // that is a verdict, not a failure, but don't count it.
                    continue;
                }
                assert!(report.path_to_geodesic.unwrap() <= 1);
                checked += 1;
                if checked >= 6 {
                    break 'outer;
                }
            }
        }
        assert!(checked > 0, "the slice contains distance-two pairs");
    }

    #[test]
    fn missing_vertices_make_the_check_unverifiable() {
        // In the word-length-2 slice some distance-2 pairs have unicorn
        // vertices of length 3; their geodesics are in the slice but the
        // check must refuse to score the path rather than guess.
        let slice = graphs::build_slice(SliceKind::LoopGraph, 2, 2, &[Code::Loop(hat(&ray_at(0)))]);
        let verts = slice.vertices();
        let mut exercised = false;
        'outer: for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let cert = graphs::distance(&slice, &verts[i], &verts[j]);
                if !(cert.exact && cert.upper == Some(2)) {
                    continue;
                }
                let (Code::Loop(x), Code::Loop(y)) = (&verts[i], &verts[j]) else {
                    unreachable!("loop slice");
                };
                let (a, b) = (standard(x), standard(y));
                if unicorn_path(&a, &b)
                    .vertices
                    .iter()
                    .all(|g| slice.contains(&Code::Loop(g.clone())))
                {
                    continue;
                }
                let geodesic: Vec<LoopCode> = cert
                    .path
                    .unwrap()
                    .iter()
                    .map(|c| match c {
                        Code::Loop(l) => l.clone(),
                        Code::Ray(_) => unreachable!("loop slice"),
                    })
                    .collect();
                let report = neighborhood_check(&a, &b, &geodesic, &slice);
                assert!(report.unverifiable.is_some());
                assert_eq!(report.path_to_geodesic, None);
                assert_eq!(report.geodesic_to_path, None);
                exercised = true;
                break 'outer;
            }
        }
        assert!(exercised, "some distance-two pair outgrows the slice");
    }
}
