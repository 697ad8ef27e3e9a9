//! Exact minimal position for one or two tight arcs: linear orders of
//! strands along each equator edge, fan orders of arc ends around cusps,
//! integer coordinates around each face, and crossing counts as strict
//! interleavings of component chords.
//!
//! Two strands on an edge are compared by walking both itineraries in
//! parallel into each hemisphere until the itineraries first diverge. Where
//! they diverge, the boundary positions of the two exits decide the order;
//! the decision reduces to a launch-side rule because the per-face nesting
//! flips cancel against the face alternation. If the two sides of an edge
//! demand opposite orders, the strands' arcs genuinely cross between the two
//! divergence points; taking the nearer divergence places the forced
//! crossing in the farther face, where it is counted as an interleaving.
//! The resulting relation is transitive (first-difference orders on
//! itinerary prefixes obey an ultrametric exchange), so sorting is sound.
//!
//! Walks can tie only when the compared arcs have identical bi-directional
//! itineraries, i.e. equal codes or a loop against its own reversal; callers
//! filter those classes out beforehand, so a tie here is a logic error.

use std::cmp::Ordering;

use super::{FiniteModel, NormalArc, Side};

/// Itinerary view of one arc inside a diagram. `end_item` is the boundary
/// item of the far endpoint; `None` leaves the continuation open (germs).
struct ArcInfo {
    side: Side,
    edges: Vec<usize>,
    end_item: Option<usize>,
}

impl ArcInfo {
    fn component_face(&self, c: usize) -> Side {
        if c % 2 == 0 {
            self.side
        } else {
            self.side.flip()
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Exit {
    Edge(usize),
    Cusp(usize),
    Open,
}

fn exit_of(m: &FiniteModel, arc: &ArcInfo, idx: i64) -> Exit {
    if idx < 0 {
        Exit::Cusp(m.item_of_vertex(0))
    } else if (idx as usize) < arc.edges.len() {
        Exit::Edge(m.item_of_edge(arc.edges[idx as usize]))
    } else {
        match arc.end_item {
            Some(item) => Exit::Cusp(item),
            None => Exit::Open,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum WalkOutcome {
    /// Itineraries first differ after `depth` faces; positions are the
    /// boundary distances of the two exits from the shared entry, measured
    /// along the divergence face's orientation.
    Diverged { depth: u32, a_pos: usize, b_pos: usize },
    /// Both itineraries terminate together: the arcs coincide on this side.
    Tied,
    /// An open end was reached before any divergence.
    Open,
}

/// Advances two itineraries through the same face sequence until they part.
fn walk(
    m: &FiniteModel,
    a: &ArcInfo,
    mut ia: i64,
    da: i64,
    b: &ArcInfo,
    mut ib: i64,
    db: i64,
    launch: Side,
    entry0: usize,
) -> WalkOutcome {
    let mut face = launch;
    let mut entry = entry0;
    let mut depth = 1u32;
    loop {
        let ea = exit_of(m, a, ia);
        let eb = exit_of(m, b, ib);
        match (ea, eb) {
            (Exit::Open, _) | (_, Exit::Open) => return WalkOutcome::Open,
            (Exit::Edge(x), Exit::Edge(y)) if x == y => {
                entry = x;
                face = face.flip();
                ia += da;
                ib += db;
                depth += 1;
            }
            (Exit::Cusp(x), Exit::Cusp(y)) if x == y => return WalkOutcome::Tied,
            (ea, eb) => {
                let item = |e: Exit| match e {
                    Exit::Edge(x) | Exit::Cusp(x) => x,
                    Exit::Open => unreachable!(),
                };
                let a_pos = m.ccw_pos(face, entry, item(ea));
                let b_pos = m.ccw_pos(face, entry, item(eb));
                debug_assert!(a_pos != 0 && b_pos != 0 && a_pos != b_pos);
                return WalkOutcome::Diverged { depth, a_pos, b_pos };
            }
        }
    }
}

/// Crossing `c` of an arc, viewed as a strand on its edge.
#[derive(Clone, Copy, Debug)]
struct Strand {
    arc: usize,
    c: usize,
}

/// One end of an arc sitting in a cusp fan.
#[derive(Clone, Copy, Debug)]
struct Foot {
    arc: usize,
    start: bool,
}

/// Walk parameters for launching from crossing `c` into a chosen face: the
/// first exit index and the step direction.
fn launch_from_crossing(arc: &ArcInfo, c: usize, launch: Side) -> (i64, i64) {
    if arc.component_face(c) == launch {
        (c as i64 - 1, -1)
    } else {
        (c as i64 + 1, 1)
    }
}

/// East-order verdict from one directional walk: in the north face a
/// smaller exit position means further west, in the south face further east.
fn more_east(launch: Side, a_pos: usize, b_pos: usize) -> bool {
    (a_pos < b_pos) ^ (launch == Side::South)
}

/// Total west-to-east order of two strands on a common edge. When the two
/// hemispheres disagree, the nearer divergence decides (ties to south),
/// which places the forced crossing in the farther hemisphere.
fn east_order(m: &FiniteModel, arcs: &[ArcInfo], x: Strand, y: Strand) -> Ordering {
    let item = m.item_of_edge(arcs[x.arc].edges[x.c]);
    let mut verdicts: [Option<(u32, bool)>; 2] = [None, None];
    for (slot, launch) in [(0, Side::South), (1, Side::North)] {
        let (ia, da) = launch_from_crossing(&arcs[x.arc], x.c, launch);
        let (ib, db) = launch_from_crossing(&arcs[y.arc], y.c, launch);
        match walk(m, &arcs[x.arc], ia, da, &arcs[y.arc], ib, db, launch, item) {
            WalkOutcome::Diverged { depth, a_pos, b_pos } => {
                verdicts[slot] = Some((depth, more_east(launch, a_pos, b_pos)));
            }
            WalkOutcome::Tied => {}
            WalkOutcome::Open => {}
        }
    }
    let east = match (verdicts[0], verdicts[1]) {
        (Some((ds, vs)), Some((dn, vn))) => {
            if ds <= dn {
                vs
            } else {
                vn
            }
        }
        (Some((_, v)), None) | (None, Some((_, v))) => v,
        (None, None) => unreachable!("parallel strands of distinct classes"),
    };
    if east {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Ascending boundary-orientation order of two arc ends in the same cusp
/// fan: walking into the face, a smaller divergence position puts the end
/// later around the face.
fn fan_order(m: &FiniteModel, arcs: &[ArcInfo], face: Side, entry: usize, x: Foot, y: Foot) -> Ordering {
    let launch_foot = |f: Foot| -> (i64, i64) {
        if f.start {
            (0, 1)
        } else {
            (arcs[f.arc].edges.len() as i64 - 1, -1)
        }
    };
    let (ia, da) = launch_foot(x);
    let (ib, db) = launch_foot(y);
    match walk(m, &arcs[x.arc], ia, da, &arcs[y.arc], ib, db, face, entry) {
        WalkOutcome::Diverged { a_pos, b_pos, .. } => {
            if a_pos < b_pos {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
        _ => unreachable!("coinciding arc ends of distinct classes"),
    }
}

/// A component chord in face coordinates, oriented from ∞.
#[derive(Clone, Copy, Debug)]
struct Chord {
    face: Side,
    entry: usize,
    exit: usize,
}

pub(crate) struct Diagram {
    face_len: [usize; 2],
    /// Per arc, per component: the chord in its face's coordinates.
    chords: Vec<Vec<Chord>>,
}

impl Diagram {
    /// Lays out the given tight arcs simultaneously: sorts every edge's
    /// strands west to east and every cusp fan along its face, then reads
    /// off integer coordinates around each face boundary.
    pub(crate) fn build(m: &FiniteModel, arcs: &[&NormalArc]) -> Diagram {
        let infos: Vec<ArcInfo> = arcs
            .iter()
            .map(|a| ArcInfo {
                side: a.start_side(),
                edges: a.edges().to_vec(),
                end_item: Some(m.item_of_vertex(a.end_vertex())),
            })
            .collect();

        let n_items = m.item_count();
        let mut edge_buckets: Vec<Vec<Strand>> = vec![Vec::new(); m.vertex_count()];
        for (k, info) in infos.iter().enumerate() {
            for c in 0..info.edges.len() {
                edge_buckets[info.edges[c]].push(Strand { arc: k, c });
            }
        }
        for bucket in &mut edge_buckets {
            bucket.sort_by(|&x, &y| east_order(m, &infos, x, y));
        }

        // Feet keyed by (vertex item, face).
        let mut fans: Vec<[Vec<Foot>; 2]> = (0..n_items / 2).map(|_| [Vec::new(), Vec::new()]).collect();
        for (k, info) in infos.iter().enumerate() {
            let start_face = info.side;
            fans[0][start_face as usize].push(Foot { arc: k, start: true });
            let end_face = info.component_face(info.edges.len());
            let end_vertex = infos[k].end_item.expect("closed arcs only") / 2;
            fans[end_vertex][end_face as usize].push(Foot { arc: k, start: false });
        }
        for (v, pair) in fans.iter_mut().enumerate() {
            for (f, bucket) in pair.iter_mut().enumerate() {
                let face = if f == 0 { Side::South } else { Side::North };
                let entry = m.item_of_vertex(v);
                bucket.sort_by(|&x, &y| fan_order(m, &infos, face, entry, x, y));
            }
        }

        // Assign coordinates face by face. Every arc end has one coordinate
        // (in its face); every crossing has one per face.
        let mut foot_coord: Vec<[usize; 2]> = vec![[usize::MAX; 2]; infos.len()];
        let mut cross_coord: Vec<Vec<[usize; 2]>> =
            infos.iter().map(|i| vec![[usize::MAX; 2]; i.edges.len()]).collect();
        let mut face_len = [0usize; 2];
        for face in [Side::South, Side::North] {
            let fi = face as usize;
            let mut counter = 0usize;
            let items: Vec<usize> = match face {
                Side::North => (0..n_items).collect(),
                Side::South => std::iter::once(0).chain((1..n_items).rev()).collect(),
            };
            for item in items {
                if item % 2 == 0 {
                    for foot in &fans[item / 2][fi] {
                        foot_coord[foot.arc][if foot.start { 0 } else { 1 }] = counter;
                        counter += 1;
                    }
                } else {
                    let bucket = &edge_buckets[item / 2];
                    let take = |s: &Strand, counter: &mut usize, cc: &mut Vec<Vec<[usize; 2]>>| {
                        cc[s.arc][s.c][fi] = *counter;
                        *counter += 1;
                    };
                    match face {
                        Side::North => {
                            for s in bucket {
                                take(s, &mut counter, &mut cross_coord);
                            }
                        }
                        Side::South => {
                            for s in bucket.iter().rev() {
                                take(s, &mut counter, &mut cross_coord);
                            }
                        }
                    }
                }
            }
            face_len[fi] = counter;
        }

        let chords: Vec<Vec<Chord>> = infos
            .iter()
            .enumerate()
            .map(|(k, info)| {
                (0..=info.edges.len())
                    .map(|c| {
                        let face = info.component_face(c);
                        let fi = face as usize;
                        let entry = if c == 0 { foot_coord[k][0] } else { cross_coord[k][c - 1][fi] };
                        let exit = if c == info.edges.len() {
                            foot_coord[k][1]
                        } else {
                            cross_coord[k][c][fi]
                        };
                        Chord { face, entry, exit }
                    })
                    .collect()
            })
            .collect();

        Diagram { face_len, chords }
    }

    /// Whether chords u and v of one face strictly interleave, and if so
    /// whether v's entry lies on u's left (inside the boundary interval from
    /// u's entry to u's exit) — the positively counted sense for (u, v).
    fn interleave(&self, u: Chord, v: Chord) -> Option<bool> {
        if u.face != v.face {
            return None;
        }
        let l = self.face_len[u.face as usize];
        let span = (u.exit + l - u.entry) % l;
        let tp = (v.entry + l - u.entry) % l;
        let tq = (v.exit + l - u.entry) % l;
        let in_p = tp > 0 && tp < span;
        let in_q = tq > 0 && tq < span;
        if in_p != in_q {
            Some(in_p)
        } else {
            None
        }
    }

    /// Crossings between two arcs, split by sign: `.0` counts those where
    /// arc `b` enters on arc `a`'s left (positive for the ordered pair).
    pub(crate) fn oriented_crossings(&self, a: usize, b: usize) -> (u64, u64) {
        let mut pos = 0;
        let mut neg = 0;
        for &u in &self.chords[a] {
            for &v in &self.chords[b] {
                match self.interleave(u, v) {
                    Some(true) => pos += 1,
                    Some(false) => neg += 1,
                    None => {}
                }
            }
        }
        (pos, neg)
    }

    /// Transverse self-crossings forced between distinct components.
    pub(crate) fn self_crossings(&self, a: usize) -> u64 {
        let cs = &self.chords[a];
        let mut count = 0;
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                if self.interleave(cs[i], cs[j]).is_some() {
                    count += 1;
                }
            }
        }
        count
    }

    /// All crossings between arcs a and b with exact positions along both:
    /// component index and rank within the component in traversal order.
    pub(crate) fn crossing_sites(&self, a: usize, b: usize) -> Vec<super::CrossingSite> {
        struct Hit {
            a_comp: usize,
            b_comp: usize,
            u: Chord,
            v: Chord,
        }
        let mut hits = Vec::new();
        for (i, &u) in self.chords[a].iter().enumerate() {
            for (j, &v) in self.chords[b].iter().enumerate() {
                if self.interleave(u, v).is_some() {
                    hits.push(Hit { a_comp: i, b_comp: j, u, v });
                }
            }
        }
        // Rank hits along each chord by the exact intersection parameter of
        // the two chords, placing coordinates on a convex curve so that
        // interleaving chords meet in one point.
        let param_cmp = |base: Chord, p: Chord, q: Chord| -> Ordering {
            let pt = |x: usize| -> (i128, i128) { (x as i128, (x as i128) * (x as i128)) };
            let sub = |a: (i128, i128), b: (i128, i128)| (a.0 - b.0, a.1 - b.1);
            let cross = |a: (i128, i128), b: (i128, i128)| a.0 * b.1 - a.1 * b.0;
            let d_base = sub(pt(base.exit), pt(base.entry));
            let t_of = |c: Chord| -> (i128, i128) {
                let d = sub(pt(c.exit), pt(c.entry));
                let mut n = cross(sub(pt(c.entry), pt(base.entry)), d);
                let mut e = cross(d_base, d);
                if e < 0 {
                    n = -n;
                    e = -e;
                }
                (n, e)
            };
            let (n1, e1) = t_of(p);
            let (n2, e2) = t_of(q);
            (n1 * e2).cmp(&(n2 * e1))
        };
        let rank_along = |hits: &[Hit], len: usize, along_a: bool| -> Vec<Vec<usize>> {
            let mut per_comp: Vec<Vec<usize>> = vec![Vec::new(); len];
            for (h, hit) in hits.iter().enumerate() {
                per_comp[if along_a { hit.a_comp } else { hit.b_comp }].push(h);
            }
            for list in &mut per_comp {
                list.sort_by(|&h1, &h2| {
                    let (base1, other1) = if along_a { (hits[h1].u, hits[h1].v) } else { (hits[h1].v, hits[h1].u) };
                    let (_base2, other2) = if along_a { (hits[h2].u, hits[h2].v) } else { (hits[h2].v, hits[h2].u) };
                    param_cmp(base1, other1, other2)
                });
            }
            per_comp
        };
        let a_ranked = rank_along(&hits, self.chords[a].len(), true);
        let b_ranked = rank_along(&hits, self.chords[b].len(), false);
        let mut a_rank = vec![0usize; hits.len()];
        let mut b_rank = vec![0usize; hits.len()];
        for list in &a_ranked {
            for (r, &h) in list.iter().enumerate() {
                a_rank[h] = r;
            }
        }
        for list in &b_ranked {
            for (r, &h) in list.iter().enumerate() {
                b_rank[h] = r;
            }
        }
        let mut sites: Vec<super::CrossingSite> = hits
            .iter()
            .enumerate()
            .map(|(h, hit)| super::CrossingSite {
                a_component: hit.a_comp,
                a_rank: a_rank[h],
                b_component: hit.b_comp,
                b_rank: b_rank[h],
            })
            .collect();
        sites.sort_by_key(|s| (s.a_component, s.a_rank));
        sites
    }
}

/// Whether two ray germs already contradict each other: some strand pair
/// diverges within both known words on both sides of its edge with opposite
/// east-order demands. Any completions of the germs then must cross.
pub(crate) fn germs_conflict(
    m: &FiniteModel,
    g1: (Side, &[usize]),
    g2: (Side, &[usize]),
) -> bool {
    let a = ArcInfo { side: g1.0, edges: g1.1.to_vec(), end_item: None };
    let b = ArcInfo { side: g2.0, edges: g2.1.to_vec(), end_item: None };
    for ca in 0..a.edges.len() {
        for cb in 0..b.edges.len() {
            if a.edges[ca] != b.edges[cb] {
                continue;
            }
            let item = m.item_of_edge(a.edges[ca]);
            let mut verdicts = [None, None];
            for (slot, launch) in [(0, Side::South), (1, Side::North)] {
                let (ia, da) = launch_from_crossing(&a, ca, launch);
                let (ib, db) = launch_from_crossing(&b, cb, launch);
                if let WalkOutcome::Diverged { a_pos, b_pos, .. } =
                    walk(m, &a, ia, da, &b, ib, db, launch, item)
                {
                    verdicts[slot] = Some(more_east(launch, a_pos, b_pos));
                }
            }
            if let (Some(s), Some(n)) = (verdicts[0], verdicts[1]) {
                if s != n {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::super::{build_model, realize, tighten};
    use super::*;
    use crate::coding::{alpha, Code};

    #[test]
    fn strand_order_along_first_segment_of_alpha2() {
        // alpha_2 crosses s_1 four times; the comparator must give a strict
        // total order on those strands.
        let c = Code::Ray(alpha(2));
        let m = build_model(std::slice::from_ref(&c));
        let arc = tighten(&m, &realize(&m, &c).unwrap());
        let info = ArcInfo {
            side: arc.start_side(),
            edges: arc.edges().to_vec(),
            end_item: Some(m.item_of_vertex(arc.end_vertex())),
        };
        let e = m.edge_of_segment(crate::coding::SegmentId(1)).unwrap();
        let mut strands: Vec<Strand> = (0..info.edges.len())
            .filter(|&c| info.edges[c] == e)
            .map(|c| Strand { arc: 0, c })
            .collect();
        assert_eq!(strands.len(), 4);
        let infos = vec![info];
        strands.sort_by(|&x, &y| east_order(&m, &infos, x, y));
        for w in strands.windows(2) {
            assert_eq!(east_order(&m, &infos, w[0], w[1]), Ordering::Less);
            assert_eq!(east_order(&m, &infos, w[1], w[0]), Ordering::Greater);
        }
    }

    #[test]
    fn face_coordinates_are_a_bijection() {
        let a = Code::Ray(alpha(2));
        let b = Code::Ray(alpha(3));
        let m = build_model(&[a.clone(), b.clone()]);
        let aa = tighten(&m, &realize(&m, &a).unwrap());
        let bb = tighten(&m, &realize(&m, &b).unwrap());
        let d = Diagram::build(&m, &[&aa, &bb]);
        // Every coordinate in each face is used exactly once.
        for fi in 0..2 {
            let mut seen = vec![false; d.face_len[fi]];
            for chords in &d.chords {
                for ch in chords {
                    if ch.face as usize == fi {
                        for coord in [ch.entry, ch.exit] {
                            assert!(!seen[coord], "coordinate reused");
                            seen[coord] = true;
                        }
                    }
                }
            }
            assert!(seen.iter().all(|&s| s), "coordinate gap");
        }
    }
}
