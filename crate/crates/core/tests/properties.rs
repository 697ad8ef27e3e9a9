//! Randomized cross-layer invariants: word reduction, canonicalization,
//! intersection counts, the mapping-class action, and distance certificates.
//!
//! Each property states a fact that several modules must agree on (for
//! example: the prefix-depth gap forces crossings that the normal-arc
//! diagram must then actually exhibit). Failures here point at a seam
//! between layers rather than at a single function.

use std::sync::OnceLock;

use proptest::prelude::*;

use cantor_rays::coding::{
    a_value, alpha, alpha_neg, reduce_word, AttachId, Code, LoopCode, RayCode, SegmentId,
};
use cantor_rays::graphs::{build_slice, distance, GraphSlice, SliceKind};
use cantor_rays::mcg::{apply, apply_ray, compose, generator, h, invert, power, MappingClass};
use cantor_rays::model::{
    build_model, canonical, canonical_ray, code_geometric_intersection,
    code_positive_intersection, codes_disjoint, is_simple, realize, tighten,
};
use cantor_rays::qm::{axis_vertex, q_w, AxisSegment, MorseConfig};

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

fn seg_letter() -> impl Strategy<Value = SegmentId> {
    (-3i64..=3).prop_map(SegmentId)
}

fn raw_word(max_len: usize) -> impl Strategy<Value = Vec<SegmentId>> {
    prop::collection::vec(seg_letter(), 0..=max_len)
}

fn raw_ray(max_len: usize) -> impl Strategy<Value = RayCode> {
    (raw_word(max_len), -3i64..=3, any::<bool>())
        .prop_map(|(word, j, north)| RayCode { word, attach: AttachId(j), north })
}

fn raw_code(max_len: usize) -> impl Strategy<Value = Code> {
    prop_oneof![
        raw_ray(max_len).prop_map(Code::Ray),
        (raw_word(max_len), any::<bool>())
            .prop_map(|(word, north)| Code::Loop(LoopCode { word, north })),
    ]
}

/// A short composite of the generating moves (and the named words built
/// from them), exercising `apply` on genuinely mixed words.
fn mapping_class() -> impl Strategy<Value = MappingClass> {
    prop::collection::vec(
        prop::sample::select(vec!["t1", "t1'", "t2", "t2'", "phi", "h", "h2", "g"]),
        0..=3,
    )
    .prop_map(|tokens| {
        tokens.iter().fold(MappingClass::identity(), |acc, t| {
            compose(&acc, &t.parse::<MappingClass>().expect("fixed token list parses"))
        })
    })
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

/// Deletes adjacent equal-letter pairs in an order chosen by `picks`
/// (cycling to the first site once the picks run out).
fn reduce_in_some_order(mut w: Vec<SegmentId>, picks: &[prop::sample::Index]) -> Vec<SegmentId> {
    let mut next_pick = 0usize;
    loop {
        let sites: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&i| w[i] == w[i + 1]).collect();
        let Some(&site) = sites.first() else { return w };
        let chosen = match picks.get(next_pick) {
            Some(p) => sites[p.index(sites.len())],
            None => site,
        };
        next_pick += 1;
        w.drain(chosen..chosen + 2);
    }
}

fn code_is_simple(c: &Code) -> bool {
    let k = canonical(c);
    let m = build_model(std::slice::from_ref(&k));
    let arc = tighten(&m, &realize(&m, &k).expect("auto-sized model realizes its own codes"));
    is_simple(&m, &arc)
}

fn axis_seeds(hi: u32) -> Vec<Code> {
    (0..=hi).map(|k| Code::Ray(alpha(k))).collect()
}

/// Shared slices: built once per test binary so proptest cases only pay for
/// the BFS, not for the pairwise disjointness enumeration.
fn small_slice() -> &'static GraphSlice {
    static S: OnceLock<GraphSlice> = OnceLock::new();
    S.get_or_init(|| build_slice(SliceKind::RayGraph, 1, 2, &axis_seeds(2)))
}

fn large_slice() -> &'static GraphSlice {
    static S: OnceLock<GraphSlice> = OnceLock::new();
    S.get_or_init(|| build_slice(SliceKind::RayGraph, 2, 3, &axis_seeds(2)))
}

// ---------------------------------------------------------------------------
// Word reduction
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn word_reduction_is_idempotent(w in raw_word(12)) {
        let once = reduce_word(&w);
        prop_assert_eq!(reduce_word(&once), once);
    }

    /// Adjacent-pair deletion is confluent: any deletion order reaches the
    /// normal form `reduce_word` computes.
    #[test]
    fn word_reduction_is_confluent(
        w in raw_word(12),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 0..8),
    ) {
        prop_assert_eq!(reduce_in_some_order(w.clone(), &picks), reduce_word(&w));
    }
}

// ---------------------------------------------------------------------------
// Canonicalization
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalization_is_idempotent(c in raw_code(10)) {
        let once = canonical(&c);
        prop_assert_eq!(canonical(&once), once);
    }

    #[test]
    fn canonical_forms_pass_the_word_level_checks(c in raw_code(10)) {
        match canonical(&c) {
            Code::Ray(r) => prop_assert!(r.is_canonical_form(), "{r:?}"),
            Code::Loop(l) => prop_assert!(l.is_canonical_form(), "{l:?}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Intersection counts
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn geometric_count_is_symmetric(a in raw_code(6), b in raw_code(6)) {
        prop_assert_eq!(
            code_geometric_intersection(&a, &b),
            code_geometric_intersection(&b, &a)
        );
    }

    /// Every transverse crossing is positively oriented for exactly one
    /// order of the pair, so the two one-sided counts partition the
    /// geometric count.
    #[test]
    fn one_sided_counts_split_the_geometric_count(a in raw_code(6), b in raw_code(6)) {
        let pos_ab = code_positive_intersection(&a, &b);
        let pos_ba = code_positive_intersection(&b, &a);
        prop_assert_eq!(pos_ab + pos_ba, code_geometric_intersection(&a, &b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The prefix-depth function drops by at most one across a disjoint
    /// pair, so a simple ray at depth ≤ k − 2 cannot avoid the k-th spiral:
    /// the diagram must find at least one crossing.
    #[test]
    fn shallow_rays_cross_deep_spirals(r in raw_ray(6)) {
        let c = Code::Ray(canonical_ray(&r));
        prop_assume!(code_is_simple(&c));
        let depth = match &c {
            Code::Ray(cr) => a_value(cr),
            Code::Loop(_) => unreachable!("ray codes canonicalize to rays"),
        };
        for k in 2..=4u32 {
            if depth + 2 <= k {
                let crossings = code_geometric_intersection(&c, &Code::Ray(alpha(k)));
                prop_assert!(crossings >= 1, "depth {depth} ray {c} misses the depth-{k} spiral");
            }
        }
    }

    #[test]
    fn crossing_counts_are_equivariant(a in raw_code(5), b in raw_code(5), f in mapping_class()) {
        let fa = apply(&f, &a);
        let fb = apply(&f, &b);
        prop_assert_eq!(
            code_geometric_intersection(&fa, &fb),
            code_geometric_intersection(&a, &b),
            "geometric count moved under {}",
            f
        );
    }

    /// One-sided counts are equivariant for rays, whose traversal direction
    /// (away from ∞) is intrinsic. Loop codes only carry a side relative to
    /// a chosen traversal, and canonicalization is free to reverse it, so
    /// the ray-ray case is the strongest true statement at the code level.
    #[test]
    fn one_sided_ray_counts_are_equivariant(
        a in raw_ray(5),
        b in raw_ray(5),
        f in mapping_class(),
    ) {
        let (a, b) = (Code::Ray(a), Code::Ray(b));
        let fa = apply(&f, &a);
        let fb = apply(&f, &b);
        prop_assert_eq!(
            code_positive_intersection(&fa, &fb),
            code_positive_intersection(&a, &b),
            "one-sided count moved under {}",
            f
        );
    }

    /// The reversed-order count between consecutive-depth spirals vanishes,
    /// and stays zero across the whole orbit of the pair.
    #[test]
    fn deep_to_shallow_crossings_stay_zero(f in mapping_class(), i in 0u32..=2) {
        let deep = apply(&f, &Code::Ray(alpha(i + 2)));
        let shallow = apply(&f, &Code::Ray(alpha(i)));
        prop_assert_eq!(code_positive_intersection(&deep, &shallow), 0);
    }
}

// ---------------------------------------------------------------------------
// The mapping-class action
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_commutes_with_canonicalization(mc in mapping_class(), c in raw_code(8)) {
        prop_assert_eq!(
            canonical(&apply(&mc, &c)),
            canonical(&apply(&mc, &canonical(&c)))
        );
    }

    #[test]
    fn inverse_words_undo_the_action(mc in mapping_class(), c in raw_code(8)) {
        prop_assert_eq!(apply(&invert(&mc), &apply(&mc, &c)), canonical(&c));
    }

    #[test]
    fn half_turn_is_an_involution(c in raw_code(8)) {
        let phi = generator("phi");
        prop_assert_eq!(apply(&phi, &apply(&phi, &c)), canonical(&c));
    }

    #[test]
    fn half_turn_conjugation_swaps_the_shifts(c in raw_code(8)) {
        let conj: MappingClass = "phi t1 phi".parse().expect("fixed word parses");
        let t2 = generator("t2");
        prop_assert_eq!(apply(&conj, &c), apply(&t2, &c));
    }
}

// ---------------------------------------------------------------------------
// Distance certificates
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Lower ≤ upper, exactness means the bounds meet, and every returned
    /// path re-validates edge by edge in the model.
    #[test]
    fn certificates_bound_consistently(
        iu in any::<prop::sample::Index>(),
        iv in any::<prop::sample::Index>(),
    ) {
        let slice = large_slice();
        let u = &slice.vertices()[iu.index(slice.vertex_count())];
        let v = &slice.vertices()[iv.index(slice.vertex_count())];
        let cert = distance(slice, u, v);
        prop_assert_eq!(cert.upper.is_some(), cert.path.is_some());
        if let Some(up) = cert.upper {
            prop_assert!(cert.lower <= up);
        }
        prop_assert_eq!(cert.exact, cert.upper == Some(cert.lower));
        if let (Some(up), Some(path)) = (cert.upper, cert.path.as_ref()) {
            prop_assert_eq!(path.len() as u32, up + 1);
            prop_assert_eq!(&path[0], &canonical(u));
            prop_assert_eq!(path.last().expect("nonempty path"), &canonical(v));
            for e in path.windows(2) {
                prop_assert!(codes_disjoint(&e[0], &e[1]), "path edge {} — {}", e[0], e[1]);
            }
        }
    }

    /// A slice with longer words and a wider index window contains the
    /// smaller slice, so upper bounds can only improve and nothing that was
    /// connected falls apart.
    #[test]
    fn enlarged_slices_never_worsen_upper_bounds(
        iu in any::<prop::sample::Index>(),
        iv in any::<prop::sample::Index>(),
    ) {
        let small = small_slice();
        let large = large_slice();
        let u = &small.vertices()[iu.index(small.vertex_count())];
        let v = &small.vertices()[iv.index(small.vertex_count())];
        prop_assert!(large.contains(u) && large.contains(v), "slice vertex sets nest");
        let cs = distance(small, u, v);
        let cl = distance(large, u, v);
        match (cs.upper, cl.upper) {
            (Some(a), Some(b)) => prop_assert!(b <= a, "upper bound worsened: {a} → {b}"),
            (Some(a), None) => prop_assert!(false, "a length-{a} path disappeared"),
            (None, _) => {}
        }
    }
}

// ---------------------------------------------------------------------------
// Fixed-family checks that anchor the random ones
// ---------------------------------------------------------------------------

#[test]
fn translation_tracks_the_prefix_depth() {
    for k in 0..=8u32 {
        assert_eq!(a_value(&alpha(k)), k, "depth of the standard spiral");
    }
    for k in 1..=4u32 {
        assert_eq!(a_value(&alpha_neg(k)), 0, "the mirrored axis stays at depth zero");
    }
    for n in 0..=6i32 {
        let image = canonical_ray(&apply_ray(&power(&h(), n), &alpha(0)));
        assert_eq!(a_value(&image), n as u32, "depth after {n} translation steps");
    }
}

#[test]
fn counting_intervals_are_antisymmetric() {
    let mut seeds: Vec<Code> = (-3..=7).map(|k| Code::Ray(axis_vertex(k))).collect();
    for k in 1..=2 {
        seeds.push(Code::Ray(canonical_ray(&apply_ray(
            &power(&generator("t1"), k),
            &axis_vertex(0),
        ))));
    }
    let slice = build_slice(SliceKind::RayGraph, 2, 3, &seeds);
    let w = AxisSegment::new(0, 2);
    let p = axis_vertex(0);
    let cfg = MorseConfig::default();
    let fwd = q_w(&power(&h(), 2), &w, &p, &slice, &cfg);
    let bwd = q_w(&power(&h(), -2), &w, &p, &slice, &cfg);
    assert!(fwd.exact && bwd.exact, "both intervals certify exactly on this slice");
    assert_eq!((fwd.lower, fwd.upper), (1, 1), "one copy of the segment per double step");
    assert_eq!(fwd.lower, -bwd.upper);
    assert_eq!(fwd.upper, -bwd.lower);
}
