//! Symbolic codes for rays and loops.
//!
//! The equator passes through ∞ and the Cantor set; its complement in the
//! equator circle is a bi-infinite family of segments `s_n` (n ∈ ℤ), with
//! `s_0` immediately east of ∞ and `s_-1` immediately west. A ray from ∞ to
//! an attachment point `p_j` is coded by the ordered list of segments its
//! tight representative crosses, plus `p_j`; a loop from ∞ to ∞ is coded by
//! the crossing list alone. By convention the component leaving ∞ lies in
//! the south hemisphere; codes whose first component lies in the north
//! hemisphere carry an explicit marker (printed `^`) and arise only as
//! images under mapping classes.
//!
//! This module is purely word-level: it builds the standard families
//! `alpha`/`gamma`, reduces interior bigons (`word_reduce`), and computes the
//! prefix-depth function [`a_value`] with its distance lower bound. Full
//! canonicalization — which must also see endpoint half-bigons — lives in
//! [`crate::model`].

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// An equator segment `s_n`. `s_0` joins ∞ to `p_0` going east, `s_n`
/// (n > 0) joins `p_{n-1}` to `p_n`, `s_-1` joins `p_-1` to ∞, and `s_n`
/// (n < -1) joins `p_n` to `p_{n+1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegmentId(pub i64);

/// An attachment point `p_j` of the Cantor set on the equator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttachId(pub i64);

impl SegmentId {
    /// Image under the half-turn exchanging east and west: `s_n ↦ s_{-n-1}`.
    pub fn mirror(self) -> SegmentId {
        SegmentId(-self.0 - 1)
    }

    /// True for the two segments incident to ∞, namely `s_0` and `s_-1`.
    pub fn touches_infinity(self) -> bool {
        self.0 == 0 || self.0 == -1
    }
}

impl AttachId {
    /// Image under the half-turn exchanging east and west: `p_j ↦ p_{-j-1}`.
    pub fn mirror(self) -> AttachId {
        AttachId(-self.0 - 1)
    }

    /// The two equator segments ending at this point: `{s_j, s_{j+1}}` for
    /// j ≥ 0 and `{s_j, s_{j-1}}` for j < 0.
    pub fn incident_segments(self) -> [SegmentId; 2] {
        let j = self.0;
        if j >= 0 {
            [SegmentId(j), SegmentId(j + 1)]
        } else {
            [SegmentId(j), SegmentId(j - 1)]
        }
    }
}

impl fmt::Display for SegmentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl fmt::Debug for SegmentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl fmt::Display for AttachId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

impl fmt::Debug for AttachId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// Code of a ray: crossing word plus attachment point.
///
/// `north` marks the convention extension for rays whose first component
/// lies in the north hemisphere; it is false for every code built by this
/// module and becomes relevant only for images under mapping classes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RayCode {
    pub word: Vec<SegmentId>,
    pub attach: AttachId,
    pub north: bool,
}

/// Code of a loop based at ∞: the crossing word alone. Same `north` marker
/// convention as [`RayCode`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LoopCode {
    pub word: Vec<SegmentId>,
    pub north: bool,
}

/// Either kind of code; several operations accept both.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Code {
    Ray(RayCode),
    Loop(LoopCode),
}

/// Builds a raw (possibly non-canonical) ray code. Use
/// [`RayCode::is_canonical_form`] to check the word-level invariants.
pub fn make_ray_code(word: Vec<SegmentId>, attach: AttachId) -> RayCode {
    RayCode { word, attach, north: false }
}

/// Builds a raw loop code.
pub fn make_loop_code(word: Vec<SegmentId>) -> LoopCode {
    LoopCode { word, north: false }
}

impl RayCode {
    /// Word-level canonical-form check: no adjacent equal letters, the word
    /// does not start with `s_0`/`s_-1`, the last letter is not incident to
    /// the attachment point, and an empty word on an ∞-adjacent attachment
    /// (`p_0`, `p_-1`) is stored south-side. An empty north word on any other
    /// attachment is a genuine class of its own: the two hemispheric chords
    /// to the point are separated by the marked points between them and ∞.
    ///
    /// This is necessary, not sufficient: equality of isotopy classes is
    /// decided by `model::canonical`.
    pub fn is_canonical_form(&self) -> bool {
        if self.word.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        if let Some(first) = self.word.first() {
            if first.touches_infinity() {
                return false;
            }
        }
        if let Some(last) = self.word.last() {
            if self.attach.incident_segments().contains(last) {
                return false;
            }
        }
        if self.word.is_empty()
            && self.north
            && self.attach.incident_segments().iter().any(|s| s.touches_infinity())
        {
            return false;
        }
        true
    }

    /// Largest absolute segment or attachment index referenced (0 if none).
    pub fn max_abs_index(&self) -> i64 {
        self.word
            .iter()
            .map(|s| s.0.abs())
            .chain(std::iter::once(self.attach.0.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Index mirror `s_n ↦ s_{-n-1}`, `p_j ↦ p_{-j-1}` applied letterwise,
    /// keeping the start hemisphere. Used to build the negative-index rays.
    pub fn mirror(&self) -> RayCode {
        RayCode {
            word: self.word.iter().map(|s| s.mirror()).collect(),
            attach: self.attach.mirror(),
            north: self.north,
        }
    }
}

impl LoopCode {
    /// Word-level canonical-form check for loops: no adjacent equal letters
    /// and neither end of the word hugging ∞ (no leading or trailing
    /// `s_0`/`s_-1`), empty word stored south-side.
    pub fn is_canonical_form(&self) -> bool {
        if self.word.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        if self.word.first().is_some_and(|s| s.touches_infinity()) {
            return false;
        }
        if self.word.last().is_some_and(|s| s.touches_infinity()) {
            return false;
        }
        if self.word.is_empty() && self.north {
            return false;
        }
        true
    }

    /// Largest absolute segment index referenced (0 if none).
    pub fn max_abs_index(&self) -> i64 {
        self.word.iter().map(|s| s.0.abs()).max().unwrap_or(0)
    }
}

impl Code {
    pub fn max_abs_index(&self) -> i64 {
        match self {
            Code::Ray(r) => r.max_abs_index(),
            Code::Loop(l) => l.max_abs_index(),
        }
    }
}

/// Deletes adjacent equal-letter pairs until none remain (each such pair is
/// an interior bigon with the equator). Endpoint half-bigons are not visible
/// at word level and are handled by `model::tighten`.
pub fn reduce_word(word: &[SegmentId]) -> Vec<SegmentId> {
    let mut out: Vec<SegmentId> = Vec::with_capacity(word.len());
    for &s in word {
        if out.last() == Some(&s) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    out
}

/// [`reduce_word`] applied to either kind of code, keeping endpoint data.
pub fn word_reduce(code: &Code) -> Code {
    match code {
        Code::Ray(r) => Code::Ray(RayCode {
            word: reduce_word(&r.word),
            attach: r.attach,
            north: r.north,
        }),
        Code::Loop(l) => Code::Loop(LoopCode { word: reduce_word(&l.word), north: l.north }),
    }
}

/// The word of `alpha(k)` without its attachment, for k ≥ 1 (`α̊_1 = s_1
/// s_-1`, then `α̊_{k+1} = α̊_k s_{k+1} s_k α̊_k⁻¹ s_0 s_-1 α̊_k` where ⁻¹ is
/// word reversal). `alpha_word(0)` is empty.
pub fn alpha_word(k: u32) -> Vec<SegmentId> {
    if k == 0 {
        return Vec::new();
    }
    let mut w = vec![SegmentId(1), SegmentId(-1)];
    for i in 1..k {
        let i = i as i64;
        let mut next = Vec::with_capacity(3 * w.len() + 4);
        next.extend_from_slice(&w);
        next.push(SegmentId(i + 1));
        next.push(SegmentId(i));
        next.extend(w.iter().rev());
        next.push(SegmentId(0));
        next.push(SegmentId(-1));
        next.extend_from_slice(&w);
        w = next;
    }
    w
}

/// The standard ray `α_k`: `α_0 = s_0 (p_0)` (the equator segment east of ∞
/// in its conventional one-letter spelling), `α_1 = s_1 s_-1 (p_1)`, and the
/// recursion of [`alpha_word`] with attachment `p_k`. Canonical for k ≥ 1.
pub fn alpha(k: u32) -> RayCode {
    if k == 0 {
        return make_ray_code(vec![SegmentId(0)], AttachId(0));
    }
    make_ray_code(alpha_word(k), AttachId(k as i64))
}

/// The negative-index ray `α_{-k}` (k ≥ 1), i.e. the k-fold backward shift
/// of `α_0` along the axis; its word is the index mirror of `α_{k-1}`'s.
/// `alpha_neg(1)` is the raw spelling `s_-1 (p_-1)`, same class as the
/// empty-word ray at `p_-1`; for k ≥ 2 the result is canonical.
pub fn alpha_neg(k: u32) -> RayCode {
    assert!(k >= 1, "alpha_neg takes k >= 1");
    alpha(k - 1).mirror()
}

/// The ray `γ_k` of the alternating family: `γ_0 = α_0`, `γ_1 := α_1`, and
/// for k ≥ 1 each step follows the previous ray, loops around its attach
/// point crossing `s_k` then `s_{k+1}`, follows it back, loops around
/// infinity (crossing `s_-1 s_0` after odd steps and `s_0 s_-1` after even
/// ones), follows it once more and re-crosses `s_k` to land on `p_{k+1}`
/// from the opposite hemisphere:
///
/// `γ̊_{k+1} = γ̊_k s_k s_{k+1} γ̊_k⁻¹ P_k γ̊_k s_k`, hemisphere flipped.
///
/// No junction ever cancels, so the word triples-plus-five each step and
/// `long(γ_k) = (3^{k+1} − 3)/2` for k ≥ 1; results for k ≥ 1 are already
/// tight. The even subfamily is the forward orbit of `γ_0` under the
/// shift-pair translation `g` (checked where `g` is defined).
pub fn gamma(k: u32) -> RayCode {
    if k == 0 {
        return alpha(0);
    }
    let mut w = vec![SegmentId(1), SegmentId(-1)];
    let mut north = false;
    for i in 1..k {
        let n = i as i64;
        let mut next = Vec::with_capacity(3 * w.len() + 5);
        next.extend_from_slice(&w);
        next.push(SegmentId(n));
        next.push(SegmentId(n + 1));
        next.extend(w.iter().rev());
        if i % 2 == 1 {
            next.push(SegmentId(-1));
            next.push(SegmentId(0));
        } else {
            next.push(SegmentId(0));
            next.push(SegmentId(-1));
        }
        next.extend_from_slice(&w);
        next.push(SegmentId(n));
        debug_assert_eq!(reduce_word(&next), next);
        w = next;
        north = !north;
    }
    RayCode { word: w, attach: AttachId(k as i64), north }
}

/// The prefix-depth function `A`: the largest i ≥ 0 such that the code's
/// word begins with `α̊_i` (south-started codes only; the empty prefix `α̊_0`
/// always matches, so A ≥ 0). 1-Lipschitz along ray-graph edges.
pub fn a_value(code: &RayCode) -> u32 {
    if code.north {
        return 0;
    }
    let mut best = 0u32;
    let mut prefix = vec![SegmentId(1), SegmentId(-1)];
    let mut i = 1u32;
    while prefix.len() <= code.word.len() {
        if code.word[..prefix.len()] == prefix[..] {
            best = i;
        } else {
            break;
        }
        i += 1;
        // Grow α̊_i to α̊_{i+1} in place.
        let n = i as i64 - 1;
        let mut next = Vec::with_capacity(3 * prefix.len() + 4);
        next.extend_from_slice(&prefix);
        next.push(SegmentId(n + 1));
        next.push(SegmentId(n));
        next.extend(prefix.iter().rev());
        next.push(SegmentId(0));
        next.push(SegmentId(-1));
        next.extend_from_slice(&prefix);
        prefix = next;
    }
    best
}

/// Number of hemisphere components of a tight representative: |word| + 1.
pub fn long(code: &RayCode) -> usize {
    code.word.len() + 1
}

/// Certified ray-graph distance lower bound `|A(c1) − A(c2)|` from the
/// 1-Lipschitz property of `A`.
pub fn dist_lower_bound(c1: &RayCode, c2: &RayCode) -> u32 {
    a_value(c1).abs_diff(a_value(c2))
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// Error from parsing the code text format.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseCodeError {
    #[error("unexpected character {found:?} at byte {at}")]
    Unexpected { found: char, at: usize },
    #[error("expected integer after {after:?} at byte {at}")]
    MissingInt { after: char, at: usize },
    #[error("expected attachment point after '@' at byte {at}")]
    MissingPoint { at: usize },
    #[error("empty north-marked code")]
    EmptyNorth,
}

fn fmt_word(word: &[SegmentId], north: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if north {
        write!(f, "^")?;
    }
    for (i, s) in word.iter().enumerate() {
        if i > 0 || north {
            write!(f, " ")?;
        }
        write!(f, "{s}")?;
    }
    Ok(())
}

impl fmt::Display for RayCode {
    /// `s1 s-1 @p1`; leading `^` marks a north-started first component.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_word(&self.word, self.north, f)?;
        if !self.word.is_empty() || self.north {
            write!(f, " ")?;
        }
        write!(f, "@{}", self.attach)
    }
}

impl fmt::Display for LoopCode {
    /// Letters only, e.g. `s1 s0`; empty word prints as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_word(&self.word, self.north, f)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Code::Ray(r) => r.fmt(f),
            Code::Loop(l) => l.fmt(f),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

#[derive(Debug, PartialEq, Eq)]
enum Token {
    North,
    Letter(i64),
    At,
    Point(i64),
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn next_token(&mut self) -> Result<Option<(Token, usize)>, ParseCodeError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= bytes.len() {
            return Ok(None);
        }
        let at = self.pos;
        let c = self.src[self.pos..].chars().next().unwrap();
        match c {
            '^' => {
                self.pos += 1;
                Ok(Some((Token::North, at)))
            }
            '@' => {
                self.pos += 1;
                Ok(Some((Token::At, at)))
            }
            's' | 'p' => {
                self.pos += 1;
                let n = self.read_int().ok_or(ParseCodeError::MissingInt { after: c, at })?;
                if c == 's' {
                    Ok(Some((Token::Letter(n), at)))
                } else {
                    Ok(Some((Token::Point(n), at)))
                }
            }
            other => Err(ParseCodeError::Unexpected { found: other, at }),
        }
    }

    fn read_int(&mut self) -> Option<i64> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        if self.pos < bytes.len() && (bytes[self.pos] == b'-' || bytes[self.pos] == b'+') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return None;
        }
        self.src[start..self.pos].parse().ok()
    }
}

/// Parses either a ray code (`letter* '@' point`) or a loop code
/// (`letter*`), with an optional leading `^` north marker.
pub fn parse_code(src: &str) -> Result<Code, ParseCodeError> {
    let mut lx = Lexer::new(src);
    let mut north = false;
    let mut word = Vec::new();
    let mut attach: Option<AttachId> = None;
    let mut first = true;
    while let Some((tok, at)) = lx.next_token()? {
        match tok {
            Token::North if first => north = true,
            Token::North => return Err(ParseCodeError::Unexpected { found: '^', at }),
            Token::Letter(n) if attach.is_none() => word.push(SegmentId(n)),
            Token::At if attach.is_none() => {
                match lx.next_token()? {
                    Some((Token::Point(j), _)) => attach = Some(AttachId(j)),
                    _ => return Err(ParseCodeError::MissingPoint { at }),
                }
            }
            Token::Point(_) | Token::Letter(_) | Token::At => {
                return Err(ParseCodeError::Unexpected {
                    found: src[at..].chars().next().unwrap(),
                    at,
                })
            }
        }
        first = false;
    }
    if north && word.is_empty() && attach.is_none() {
        return Err(ParseCodeError::EmptyNorth);
    }
    Ok(match attach {
        Some(attach) => Code::Ray(RayCode { word, attach, north }),
        None => Code::Loop(LoopCode { word, north }),
    })
}

impl FromStr for RayCode {
    type Err = ParseCodeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse_code(s)? {
            Code::Ray(r) => Ok(r),
            Code::Loop(_) => Err(ParseCodeError::MissingPoint { at: s.len() }),
        }
    }
}

impl FromStr for LoopCode {
    type Err = ParseCodeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse_code(s)? {
            Code::Loop(l) => Ok(l),
            Code::Ray(_) => Err(ParseCodeError::Unexpected { found: '@', at: 0 }),
        }
    }
}

impl Serialize for SegmentId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl Serialize for RayCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RayCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl Serialize for LoopCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LoopCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Code {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_code(&s).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(n: i64) -> SegmentId {
        SegmentId(n)
    }

    fn word(ns: &[i64]) -> Vec<SegmentId> {
        ns.iter().map(|&n| seg(n)).collect()
    }

    #[test]
    fn alpha_small_values() {
        assert_eq!(alpha(0), make_ray_code(word(&[0]), AttachId(0)));
        assert_eq!(alpha(1), make_ray_code(word(&[1, -1]), AttachId(1)));
        // The eleven-component ray from the figure caption.
        assert_eq!(
            alpha(2),
            make_ray_code(word(&[1, -1, 2, 1, -1, 1, 0, -1, 1, -1]), AttachId(2))
        );
        assert_eq!(alpha(2).to_string(), "s1 s-1 s2 s1 s-1 s1 s0 s-1 s1 s-1 @p2");
    }

    #[test]
    fn long_recursion_and_oddness() {
        assert_eq!(long(&alpha(0)), 2);
        assert_eq!(long(&alpha(1)), 3);
        assert_eq!(long(&alpha(2)), 11);
        let mut prev = long(&alpha(1));
        for k in 2..=12 {
            let cur = long(&alpha(k));
            assert_eq!(cur, 3 * prev + 2, "long recursion fails at k={k}");
            assert_eq!(cur % 2, 1, "long(alpha_{k}) must be odd");
            // Closed form 4·3^{k-1} − 1.
            assert_eq!(cur as u64, 4 * 3u64.pow(k - 1) - 1);
            prev = cur;
        }
    }

    #[test]
    fn alpha_words_are_canonical_form() {
        for k in 1..=12 {
            let a = alpha(k);
            assert!(a.is_canonical_form(), "alpha({k}) fails word-level canonical form");
        }
        // The base ray's conventional one-letter spelling is the exception:
        // it starts with s_0 and reduces to the empty word at p_0.
        assert!(!alpha(0).is_canonical_form());
    }

    #[test]
    fn alpha_neg_small_values() {
        assert_eq!(alpha_neg(1), make_ray_code(word(&[-1]), AttachId(-1)));
        assert_eq!(alpha_neg(2), make_ray_code(word(&[-2, 0]), AttachId(-2)));
        for k in 2..=6 {
            assert!(alpha_neg(k).is_canonical_form());
        }
    }

    #[test]
    fn gamma_small_values() {
        assert_eq!(gamma(0), alpha(0));
        assert_eq!(gamma(1), alpha(1));
        let g2 = gamma(2);
        assert_eq!(g2.word, word(&[1, -1, 1, 2, -1, 1, -1, 0, 1, -1, 1]));
        assert_eq!(g2.attach, AttachId(2));
        assert!(g2.north);
        // From γ_2 on the family leaves the always-right axis for good.
        assert_ne!(g2, alpha(2));
        let g3 = gamma(3);
        assert!(!g3.north);
        let mut expected = g2.word.clone();
        expected.extend(word(&[2, 3]));
        expected.extend(g2.word.iter().rev());
        expected.extend(word(&[0, -1]));
        expected.extend_from_slice(&g2.word);
        expected.extend(word(&[2]));
        assert_eq!(g3.word, expected);
    }

    #[test]
    fn gamma_lengths_and_sides_alternate() {
        for k in 1..=8 {
            let g = gamma(k);
            assert!(g.is_canonical_form(), "gamma({k}) fails word-level form");
            let expected_long = (3i64.pow(k + 1) - 3) / 2;
            assert_eq!(g.word.len() as i64 + 1, expected_long, "long(gamma_{k})");
            assert_eq!(g.north, k % 2 == 0, "gamma({k}) hemisphere");
            assert_eq!(g.attach, AttachId(k as i64));
        }
    }

    #[test]
    fn reduce_word_examples() {
        assert_eq!(reduce_word(&word(&[0, 0, 1, 0, -1, 0, 0])), word(&[1, 0, -1]));
        assert_eq!(reduce_word(&word(&[1, -1])), word(&[1, -1]));
        assert_eq!(reduce_word(&word(&[2, 2])), word(&[]));
        // Nested cancellation needs the fixpoint, not one pass.
        assert_eq!(reduce_word(&word(&[1, 2, 2, 1, 3])), word(&[3]));
    }

    #[test]
    fn word_reduce_keeps_endpoints() {
        let c = Code::Ray(make_ray_code(word(&[2, 2]), AttachId(0)));
        match word_reduce(&c) {
            Code::Ray(r) => {
                assert!(r.word.is_empty());
                assert_eq!(r.attach, AttachId(0));
            }
            _ => panic!("kind changed"),
        }
    }

    #[test]
    fn a_value_on_families() {
        for n in 0..=12 {
            assert_eq!(a_value(&alpha(n)), n, "A(alpha_{n})");
        }
        assert_eq!(a_value(&make_ray_code(word(&[2, 1]), AttachId(3))), 0);
        assert_eq!(a_value(&make_ray_code(word(&[1, -1, 5]), AttachId(5))), 1);
        for k in 1..=6 {
            assert_eq!(a_value(&alpha_neg(k)), 0, "A(alpha_-{k})");
        }
        let mut northified = alpha(3);
        northified.north = true;
        assert_eq!(a_value(&northified), 0);
    }

    #[test]
    fn dist_lower_bound_examples() {
        for n in 0..=8 {
            assert_eq!(dist_lower_bound(&alpha(0), &alpha(n)), n);
        }
        let c = alpha(4);
        assert_eq!(dist_lower_bound(&c, &c), 0);
        assert_eq!(
            dist_lower_bound(&alpha(3), &make_ray_code(word(&[2, 1]), AttachId(4))),
            3
        );
    }

    #[test]
    fn display_and_parse_round_trip() {
        let samples: Vec<Code> = vec![
            Code::Ray(alpha(0)),
            Code::Ray(alpha(2)),
            Code::Ray(make_ray_code(vec![], AttachId(-3))),
            Code::Ray(RayCode { word: word(&[1, -2]), attach: AttachId(0), north: true }),
            Code::Loop(make_loop_code(word(&[1, 0]))),
            Code::Loop(make_loop_code(vec![])),
            Code::Loop(LoopCode { word: word(&[-2, 4]), north: true }),
        ];
        for c in samples {
            let s = c.to_string();
            assert_eq!(parse_code(&s).unwrap(), c, "round trip of {s:?}");
        }
        assert_eq!(parse_code("  s1   s-1 @ p1 ").unwrap(), Code::Ray(alpha(1)));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_code("s1 q2"), Err(ParseCodeError::Unexpected { .. })));
        assert!(matches!(parse_code("s"), Err(ParseCodeError::MissingInt { .. })));
        assert!(matches!(parse_code("s1 @"), Err(ParseCodeError::MissingPoint { .. })));
        assert!(matches!(parse_code("s1 @p2 s3"), Err(ParseCodeError::Unexpected { .. })));
        assert!(matches!(parse_code("^"), Err(ParseCodeError::EmptyNorth)));
        assert!("s1 s2".parse::<RayCode>().is_err());
        assert!("s1 @p2".parse::<LoopCode>().is_err());
    }

    #[test]
    fn canonical_form_checks() {
        assert!(make_ray_code(word(&[1, -1]), AttachId(1)).is_canonical_form());
        assert!(!make_ray_code(word(&[1, 1]), AttachId(1)).is_canonical_form());
        assert!(!make_ray_code(word(&[0, 1]), AttachId(1)).is_canonical_form());
        assert!(!make_ray_code(word(&[-1, 1]), AttachId(1)).is_canonical_form());
        // Trailing letter incident to the attachment is an endpoint half-bigon.
        assert!(!make_ray_code(word(&[2, 1]), AttachId(1)).is_canonical_form());
        assert!(!make_ray_code(word(&[2, -2]), AttachId(-2)).is_canonical_form());
        assert!(make_loop_code(word(&[1, 2])).is_canonical_form());
        assert!(!make_loop_code(word(&[1, 0])).is_canonical_form());
        assert!(!make_loop_code(word(&[0, 1])).is_canonical_form());
    }

    #[test]
    fn mirror_is_involutive() {
        let c = alpha(3);
        assert_eq!(c.mirror().mirror(), c);
        assert_eq!(seg(0).mirror(), seg(-1));
        assert_eq!(AttachId(2).mirror(), AttachId(-3));
    }

    #[test]
    fn serde_as_strings() {
        let c = alpha(2);
        let j = serde_json::to_string(&c).unwrap();
        assert_eq!(j, "\"s1 s-1 s2 s1 s-1 s1 s0 s-1 s1 s-1 @p2\"");
        let back: RayCode = serde_json::from_str(&j).unwrap();
        assert_eq!(back, c);
    }
}
