//! Unstructured binary codes `C ⊂ F₂ⁿ`: parameters `[n, k, d]`, the three
//! discrete spoiling operations, the cube embedding into `S^{n-1}`, and the
//! controlling cones around a code point in the `(R, δ)` square.
//!
//! Positions are 0-based throughout the API.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::UnitVector;
use crate::plane::{on_segment, Crossing, PlanePoint, Sector};
use crate::spherical::SphericalCode;

/// A word of explicit length; leading zeros are significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<bool>);

impl Word {
    pub fn new(bits: Vec<bool>) -> Self {
        Word(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    fn without(&self, i: usize) -> Word {
        let mut b = self.0.clone();
        b.remove(i);
        Word(b)
    }

    fn with_inserted(&self, i: usize, bit: bool) -> Word {
        let mut b = self.0.clone();
        b.insert(i, bit);
        Word(b)
    }
}

impl std::str::FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(0, format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: &Word, b: &Word) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count())
}

/// A nonempty set of distinct words of a common length `n ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    n: usize,
    words: Vec<Word>,
}

impl BinaryCode {
    /// Rejects duplicates, mixed lengths and the empty set.
    pub fn new(words: Vec<Word>) -> Result<Self> {
        let n = words.first().ok_or(Error::Empty("binary code"))?.len();
        if n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, actual: 0 });
        }
        let mut seen = HashSet::with_capacity(words.len());
        for w in &words {
            if w.len() != n {
                return Err(Error::LengthMismatch(n, w.len()));
            }
            if !seen.insert(w) {
                return Err(Error::DegenerateCode(format!("duplicate word {w}")));
            }
        }
        Ok(BinaryCode { n, words })
    }

    /// Keeps the first occurrence of every word. Used where an operation may
    /// legitimately merge words.
    fn merged(n: usize, words: Vec<Word>) -> Self {
        let mut seen = HashSet::with_capacity(words.len());
        let words = words.into_iter().filter(|w| seen.insert(w.clone())).collect();
        BinaryCode { n, words }
    }

    /// Parses `"0101"`-style strings.
    pub fn from_strs<S: AsRef<str>>(words: &[S]) -> Result<Self> {
        let words = words
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<Word>>>()?;
        Self::new(words)
    }

    /// All `2ⁿ` words of length `n`.
    pub fn full(n: usize) -> Self {
        assert!((1..=20).contains(&n));
        let words = (0..1u32 << n)
            .map(|m| Word((0..n).rev().map(|i| m >> i & 1 == 1).collect()))
            .collect();
        BinaryCode { n, words }
    }

    /// `{0ⁿ, 1ⁿ}`.
    pub fn repetition(n: usize) -> Self {
        assert!(n >= 1);
        BinaryCode {
            n,
            words: vec![Word(vec![false; n]), Word(vec![true; n])],
        }
    }

    /// Even-weight words of length `n` (`[n, n-1, 2]`).
    pub fn even_weight(n: usize) -> Self {
        let full = Self::full(n);
        let words = full
            .words
            .into_iter()
            .filter(|w| w.0.iter().filter(|&&b| b).count() % 2 == 0)
            .collect();
        BinaryCode { n, words }
    }

    /// First-order Reed-Muller code `RM(1, m)`: the Hadamard-type
    /// `[2^m, m + 1, 2^{m-1}]` code of affine Boolean functions.
    pub fn reed_muller_first_order(m: usize) -> Self {
        assert!((1..=10).contains(&m));
        let n = 1usize << m;
        let mut words = Vec::with_capacity(2 * n);
        for a in 0..n {
            for c in [false, true] {
                let w = (0..n)
                    .map(|x| ((a & x).count_ones() % 2 == 1) ^ c)
                    .collect();
                words.push(Word(w));
            }
        }
        BinaryCode { n, words }
    }

    /// The `[7, 4, 3]` Hamming code.
    pub fn hamming7() -> Self {
        let gen: [u8; 4] = [0b1000110, 0b0100101, 0b0010011, 0b0001111];
        let words = (0..16u8)
            .map(|m| {
                let v = (0..4)
                    .filter(|i| m >> i & 1 == 1)
                    .fold(0u8, |acc, i| acc ^ gen[i as usize]);
                Word((0..7).rev().map(|i| v >> i & 1 == 1).collect())
            })
            .collect();
        BinaryCode { n: 7, words }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn card(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Minimum pairwise Hamming distance, `0` for a single word.
    pub fn min_distance(&self) -> usize {
        let mut d = usize::MAX;
        for (i, a) in self.words.iter().enumerate() {
            for b in &self.words[i + 1..] {
                let h = a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count();
                d = d.min(h);
            }
        }
        if d == usize::MAX {
            0
        } else {
            d
        }
    }

    pub fn parameters(&self) -> BinaryCodePoint {
        code_parameters(self)
    }

    /// Parses the text format: one word per line, `#` comments and blank
    /// lines ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut words = Vec::new();
        let mut n = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let w: Word = line
                .parse()
                .map_err(|e| match e {
                    Error::Parse { message, .. } => Error::parse(idx + 1, message),
                    other => other,
                })?;
            match n {
                None => n = Some(w.len()),
                Some(n) if n != w.len() => {
                    return Err(Error::parse(
                        idx + 1,
                        format!("word length {} differs from {n}", w.len()),
                    ))
                }
                _ => {}
            }
            words.push(w);
        }
        BinaryCode::new(words)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for w in &self.words {
            s.push_str(&w.to_string());
            s.push('\n');
        }
        s
    }
}

/// Parameters `[n, k, d]` together with the code point `(R, δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryCodePoint {
    pub n: usize,
    pub k: f64,
    pub d: usize,
    pub card: usize,
    pub rate: f64,
    pub delta: f64,
}

impl BinaryCodePoint {
    pub fn plane(&self) -> PlanePoint {
        PlanePoint::new(self.rate, self.delta)
    }
}

/// `k = log₂ card`, `d` the minimum distance, `R = k/n`, `δ = d/n`.
pub fn code_parameters(code: &BinaryCode) -> BinaryCodePoint {
    let n = code.len();
    let card = code.card();
    let k = (card as f64).log2();
    let d = code.min_distance();
    BinaryCodePoint {
        n,
        k,
        d,
        card,
        rate: k / n as f64,
        delta: d as f64 / n as f64,
    }
}

/// First spoiling: insert `f(c)` at position `i` (`0 ≤ i ≤ n`) of every
/// word `c`. `f` may be partial; an undefined value is an error.
pub fn spoil1_binary<F>(code: &BinaryCode, i: usize, f: F) -> Result<BinaryCode>
where
    F: Fn(&Word) -> Option<bool>,
{
    if i > code.n {
        return Err(Error::OutOfRange {
            name: "position",
            value: i as f64,
            range: "0..=n",
        });
    }
    let words = code
        .words
        .iter()
        .map(|w| {
            f(w).map(|b| w.with_inserted(i, b))
                .ok_or_else(|| Error::Undefined(w.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    // Distinct words stay distinct after inserting one coordinate.
    Ok(BinaryCode { n: code.n + 1, words })
}

/// First spoiling with a constant function; yields `[n + 1, k, d]`.
pub fn spoil1_constant(code: &BinaryCode, i: usize, bit: bool) -> Result<BinaryCode> {
    spoil1_binary(code, i, |_| Some(bit))
}

/// Second spoiling: delete position `i`. Words that coincide afterwards are
/// merged, so `k` and `d` must be read from the result.
pub fn spoil2_binary(code: &BinaryCode, i: usize) -> Result<BinaryCode> {
    if code.n < 2 {
        return Err(Error::DimensionTooSmall {
            min: 2,
            actual: code.n,
        });
    }
    if i >= code.n {
        return Err(Error::OutOfRange {
            name: "position",
            value: i as f64,
            range: "0..n",
        });
    }
    let words = code.words.iter().map(|w| w.without(i)).collect();
    Ok(BinaryCode::merged(code.n - 1, words))
}

/// Third spoiling: the subcode of words with symbol `a` at position `i`.
/// With `a = None` the majority symbol is chosen (ties go to `0`), so the
/// subcode keeps at least half of the words.
pub fn spoil3_binary(code: &BinaryCode, i: usize, a: Option<bool>) -> Result<BinaryCode> {
    if i >= code.n {
        return Err(Error::OutOfRange {
            name: "position",
            value: i as f64,
            range: "0..n",
        });
    }
    let symbol = match a {
        Some(a) => a,
        None => {
            if code.card() < 2 {
                return Err(Error::DegenerateCode(
                    "automatic symbol selection needs at least 2 words".into(),
                ));
            }
            let ones = code.words.iter().filter(|w| w.get(i)).count();
            ones > code.card() - ones
        }
    };
    let words: Vec<Word> = code
        .words
        .iter()
        .filter(|w| w.get(i) == symbol)
        .cloned()
        .collect();
    if words.is_empty() {
        return Err(Error::EmptyHemisphere(if symbol { "1" } else { "0" }));
    }
    Ok(BinaryCode { n: code.n, words })
}

/// Maps `0 ↦ +1/√n`, `1 ↦ -1/√n` coordinatewise. The embedded points satisfy
/// `⟨v_a, v_b⟩ = 1 - 2·d(a, b)/n`.
pub fn embed_binary(code: &BinaryCode) -> Result<SphericalCode> {
    if code.card() < 2 {
        return Err(Error::DegenerateCode(
            "embedding needs at least 2 words".into(),
        ));
    }
    let s = 1.0 / (code.n as f64).sqrt();
    let points = code
        .words
        .iter()
        .map(|w| {
            let c = w.0.iter().map(|&b| if b { -s } else { s }).collect();
            UnitVector::with_tolerance(c, 1e-12)
        })
        .collect::<Result<Vec<_>>>()?;
    SphericalCode::new(points)
}

/// `δ = (1 - cos φ) / 2`.
pub fn delta_from_cos(cos_phi: f64) -> f64 {
    (1.0 - cos_phi) / 2.0
}

/// `cos φ = 1 - 2δ`.
pub fn cos_from_delta(delta: f64) -> f64 {
    1.0 - 2.0 * delta
}

/// Which controlling cone a query point falls in.
pub type Cone = Sector;

/// The lines `ℒ₁(P)` (through `(R, δ) = (0, 1)`) and `ℒ₂(P)` (through
/// `(1, 0)`), their segments `ℐ₁`, `ℐ₂` down to the axes, and the four cones
/// they bound. Plane coordinates are `x = R`, `y = δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSet {
    pub anchor: PlanePoint,
    /// Endpoint `(R/(1-δ), 0)` of `ℐ₁` on the `δ = 0` axis.
    pub i1_end: PlanePoint,
    /// Endpoint `(0, δ/(1-R))` of `ℐ₂` on the `R = 0` axis.
    pub i2_end: PlanePoint,
    crossing: Crossing,
}

impl ConeSet {
    /// Point of `ℒ₁(P)` at parameter `t`: `((1+t)R, (1+t)δ - t)`.
    pub fn line1(&self, t: f64) -> PlanePoint {
        let p = self.anchor;
        PlanePoint::new((1.0 + t) * p.x, (1.0 + t) * p.y - t)
    }

    /// Point of `ℒ₂(P)` at parameter `t`: `((1+t)R - t, (1+t)δ)`.
    pub fn line2(&self, t: f64) -> PlanePoint {
        let p = self.anchor;
        PlanePoint::new((1.0 + t) * p.x - t, (1.0 + t) * p.y)
    }

    pub fn membership(&self, q: PlanePoint) -> Cone {
        self.crossing.classify(q, 1e-12)
    }

    pub fn on_i1(&self, q: PlanePoint, tol: f64) -> bool {
        on_segment(q, self.anchor, self.i1_end, tol)
    }

    pub fn on_i2(&self, q: PlanePoint, tol: f64) -> bool {
        on_segment(q, self.anchor, self.i2_end, tol)
    }
}

/// Controlling cones of an interior point `P = (R, δ) ∈ (0, 1)²`.
pub fn controlling_cones(rate: f64, delta: f64) -> Result<ConeSet> {
    if !(rate > 0.0 && rate < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(Error::DegenerateAnchor(rate, delta));
    }
    let anchor = PlanePoint::new(rate, delta);
    let i1_end = PlanePoint::new(rate / (1.0 - delta), 0.0);
    let i2_end = PlanePoint::new(0.0, delta / (1.0 - rate));
    let crossing = Crossing::new(
        anchor,
        PlanePoint::new(i1_end.x - rate, i1_end.y - delta),
        PlanePoint::new(i2_end.x - rate, i2_end.y - delta),
    )
    .ok_or(Error::DegenerateAnchor(rate, delta))?;
    Ok(ConeSet {
        anchor,
        i1_end,
        i2_end,
        crossing,
    })
}

/// Parameters reached from `P` by the numerical spoilings: `P₁` on `ℐ₁(P)`
/// (second spoiling, `[n-1, k, d-1]`) and `P₂` on `ℐ₂(P)` (third then
/// second, `[n-1, k-1, d]`). Both use `t = 1/(n-1)` in the line
/// parametrizations.
pub fn numerical_spoil_points(rate: f64, delta: f64, n: usize) -> Result<(PlanePoint, PlanePoint)> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, actual: n });
    }
    let s = n as f64 / (n - 1) as f64;
    let t = 1.0 / (n - 1) as f64;
    let p1 = PlanePoint::new(s * rate, s * delta - t);
    let p2 = PlanePoint::new(s * rate - t, s * delta);
    Ok((p1, p2))
}
