//! Signed permutations of `B_n`, the vertex set `H_n` and the auxiliary
//! permutations `π*` and `π°` acting on it.
//!
//! A signed permutation is stored by its window `⟨π₊₁ … π₊ₙ⟩` only; values at
//! negative indices are derived through `π₋ᵢ = −π₊ᵢ`, so that relation cannot
//! be broken by construction. The two zero vertices are fixed by every
//! permutation: `π₊₀ = +0` and `π₋₀ = −0`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Ranks above this are refused by the enumerators unless explicitly overridden.
pub const DEFAULT_RANK_LIMIT: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("a signed permutation needs at least one entry")]
    Empty,
    #[error("entry {position} is zero; window entries must be nonzero")]
    ZeroEntry { position: usize },
    #[error("entry {value} is outside ±1..±{rank}")]
    MagnitudeOutOfRange { value: i64, rank: usize },
    #[error("magnitude {magnitude} appears more than once")]
    DuplicateMagnitude { magnitude: usize },
    #[error("k = {k} is outside 0..={n}")]
    RankOutOfRange { k: usize, n: usize },
    #[error("rank {n} exceeds the size guard {limit}; pass an override to continue")]
    RankTooLargeWithoutOverride { n: usize, limit: usize },
    #[error("index range {start}..{end} is outside 0..{total}")]
    IndexOutOfRange { start: u64, end: u64, total: u64 },
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn of(value: i64) -> Sign {
        if value < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A vertex of `H_n = {+0, …, +n, −0, …, −n}`.
///
/// `+0` and `−0` are distinct. The derived ordering is the fixed vertex order
/// `+0 < +1 < … < +n < −0 < … < −n` used for indexing and rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct HVertex {
    pub sign: Sign,
    pub magnitude: usize,
}

impl HVertex {
    pub const PLUS_ZERO: HVertex = HVertex { sign: Sign::Plus, magnitude: 0 };
    pub const MINUS_ZERO: HVertex = HVertex { sign: Sign::Minus, magnitude: 0 };

    pub fn new(sign: Sign, magnitude: usize) -> Self {
        HVertex { sign, magnitude }
    }

    pub fn plus(magnitude: usize) -> Self {
        HVertex::new(Sign::Plus, magnitude)
    }

    pub fn minus(magnitude: usize) -> Self {
        HVertex::new(Sign::Minus, magnitude)
    }

    /// The vertex carrying a nonzero signed integer.
    pub fn from_value(value: i64) -> Self {
        HVertex::new(Sign::of(value), value.unsigned_abs() as usize)
    }

    /// Signed integer value; both zero vertices map to 0.
    pub fn value(self) -> i64 {
        self.sign.factor() * self.magnitude as i64
    }

    pub fn neg(self) -> Self {
        HVertex::new(self.sign.flip(), self.magnitude)
    }

    pub fn is_zero(self) -> bool {
        self.magnitude == 0
    }

    /// Position in the fixed ordering `+0, …, +n, −0, …, −n`.
    pub fn index(self, n: usize) -> usize {
        match self.sign {
            Sign::Plus => self.magnitude,
            Sign::Minus => n + 1 + self.magnitude,
        }
    }

    pub fn from_index(n: usize, index: usize) -> Self {
        if index <= n {
            HVertex::plus(index)
        } else {
            HVertex::minus(index - n - 1)
        }
    }

    /// The successor `v + 1` on `H_n`.
    ///
    /// Positive vertices step up with `(+n) + 1 = +0`. Negative vertices step
    /// toward `−0` (`(−i) + 1 = −(i − 1)`, so `(−1) + 1 = −0`) and
    /// `(−0) + 1 = −n`.
    pub fn succ(self, n: usize) -> Self {
        match self.sign {
            Sign::Plus if self.magnitude == n => HVertex::PLUS_ZERO,
            Sign::Plus => HVertex::plus(self.magnitude + 1),
            Sign::Minus if self.magnitude == 0 => HVertex::minus(n),
            Sign::Minus => HVertex::minus(self.magnitude - 1),
        }
    }

    /// Inverse of [`HVertex::succ`].
    pub fn pred(self, n: usize) -> Self {
        match self.sign {
            Sign::Plus if self.magnitude == 0 => HVertex::plus(n),
            Sign::Plus => HVertex::plus(self.magnitude - 1),
            Sign::Minus if self.magnitude == n => HVertex::MINUS_ZERO,
            Sign::Minus => HVertex::minus(self.magnitude + 1),
        }
    }

    /// All `2n + 2` vertices in the fixed ordering.
    pub fn all(n: usize) -> impl Iterator<Item = HVertex> {
        (0..2 * n + 2).map(move |i| HVertex::from_index(n, i))
    }
}

impl fmt::Display for HVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "{}{}", s, self.magnitude)
    }
}

impl FromStr for HVertex {
    type Err = PermError;

    /// Accepts `+3`, `-0`, `3` (taken as `+3`). The Unicode minus sign is accepted too.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let t = input.trim();
        let (sign, digits) = if let Some(rest) = t.strip_prefix('+') {
            (Sign::Plus, rest)
        } else if let Some(rest) = t.strip_prefix('-') {
            (Sign::Minus, rest)
        } else if let Some(rest) = t.strip_prefix('\u{2212}') {
            (Sign::Minus, rest)
        } else {
            (Sign::Plus, t)
        };
        let magnitude = digits.parse::<usize>().map_err(|e| PermError::Parse {
            input: input.to_string(),
            reason: e.to_string(),
        })?;
        Ok(HVertex::new(sign, magnitude))
    }
}

/// A bijection of `H_n`, stored as an index table over the fixed vertex ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HPermutation {
    n: usize,
    map: Vec<u16>,
}

impl HPermutation {
    pub fn identity(n: usize) -> Self {
        HPermutation { n, map: (0..(2 * n + 2) as u16).collect() }
    }

    /// Builds the permutation from a table of images, checking bijectivity.
    pub fn from_fn(n: usize, f: impl Fn(HVertex) -> HVertex) -> Option<Self> {
        let size = 2 * n + 2;
        let mut map = vec![0u16; size];
        let mut hit = vec![false; size];
        for (i, slot) in map.iter_mut().enumerate() {
            let image = f(HVertex::from_index(n, i));
            if image.magnitude > n {
                return None;
            }
            let j = image.index(n);
            if hit[j] {
                return None;
            }
            hit[j] = true;
            *slot = j as u16;
        }
        Some(HPermutation { n, map })
    }

    /// Product of cycles written in the usual notation; vertices not listed are fixed.
    /// Returns `None` if a vertex repeats or lies outside `H_n`.
    pub fn from_cycles(n: usize, cycles: &[Vec<HVertex>]) -> Option<Self> {
        let size = 2 * n + 2;
        let mut map: Vec<u16> = (0..size as u16).collect();
        let mut seen = vec![false; size];
        for cycle in cycles {
            for (i, v) in cycle.iter().enumerate() {
                if v.magnitude > n || seen[v.index(n)] {
                    return None;
                }
                seen[v.index(n)] = true;
                let next = cycle[(i + 1) % cycle.len()];
                map[v.index(n)] = next.index(n) as u16;
            }
        }
        Some(HPermutation { n, map })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn apply(&self, v: HVertex) -> HVertex {
        HVertex::from_index(self.n, self.map[v.index(self.n)] as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut map = vec![0u16; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            map[j as usize] = i as u16;
        }
        HPermutation { n: self.n, map }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &HPermutation) -> HPermutation {
        assert_eq!(self.n, other.n, "rank mismatch in composition");
        let map = other.map.iter().map(|&j| self.map[j as usize]).collect();
        HPermutation { n: self.n, map }
    }

    /// Conjugate `relabel ∘ self ∘ relabel⁻¹`: the cycle notation of `self`
    /// with every vertex `v` renamed to `relabel(v)`.
    pub fn relabel(&self, relabel: &HPermutation) -> HPermutation {
        relabel.compose(self).compose(&relabel.inverse())
    }

    /// Disjoint cycles, fixed points included, each starting at its least vertex.
    pub fn cycles(&self) -> Vec<Vec<HVertex>> {
        let mut seen = vec![false; self.map.len()];
        let mut out = Vec::new();
        for start in 0..self.map.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(HVertex::from_index(self.n, i));
                i = self.map[i] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.map.len()];
        let mut count = 0;
        for start in 0..self.map.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.map[i] as usize;
            }
        }
        count
    }

    /// The successor map `v ↦ v + 1`, i.e. `(+0, +1, …, +n)(−n, …, −1, −0)`.
    pub fn successor(n: usize) -> Self {
        HPermutation::from_fn(n, |v| v.succ(n)).expect("successor is a bijection")
    }
}

impl fmt::Display for HPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            write!(f, "(")?;
            for (i, v) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// An element of the hyperoctahedral group `B_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SignedPermutation {
    window: Vec<i32>,
}

impl SignedPermutation {
    pub fn from_window(values: &[i64]) -> Result<Self, PermError> {
        if values.is_empty() {
            return Err(PermError::Empty);
        }
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for (i, &v) in values.iter().enumerate() {
            if v == 0 {
                return Err(PermError::ZeroEntry { position: i + 1 });
            }
            let m = v.unsigned_abs() as usize;
            if m > n {
                return Err(PermError::MagnitudeOutOfRange { value: v, rank: n });
            }
            if seen[m] {
                return Err(PermError::DuplicateMagnitude { magnitude: m });
            }
            seen[m] = true;
        }
        Ok(SignedPermutation { window: values.iter().map(|&v| v as i32).collect() })
    }

    pub(crate) fn from_window_unchecked(window: Vec<i32>) -> Self {
        debug_assert!(SignedPermutation::from_window(
            &window.iter().map(|&v| v as i64).collect::<Vec<_>>()
        )
        .is_ok());
        SignedPermutation { window }
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation { window: (1..=n as i32).collect() }
    }

    /// `I^(−k)`: negates positions `1..=k` and fixes the rest.
    pub fn i_minus_k(n: usize, k: usize) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::Empty);
        }
        if k > n {
            return Err(PermError::RankOutOfRange { k, n });
        }
        let window = (1..=n as i32).map(|j| if j as usize <= k { -j } else { j }).collect();
        Ok(SignedPermutation { window })
    }

    /// `⟨k, k−1, …, 1, k+1, …, n⟩`, the positive element realising the
    /// reversed-product equation on the first `k` letters.
    pub fn prefix_reversal(n: usize, k: usize) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::Empty);
        }
        if k > n {
            return Err(PermError::RankOutOfRange { k, n });
        }
        let k = k as i32;
        let window = (1..=n as i32).map(|j| if j <= k { k + 1 - j } else { j }).collect();
        Ok(SignedPermutation { window })
    }

    pub fn rank(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i32] {
        &self.window
    }

    /// `π₊ᵢ` for `1 ≤ i ≤ n`.
    pub fn at(&self, i: usize) -> i64 {
        self.window[i - 1] as i64
    }

    /// `π(v)` on `H_n`, with `±0` fixed.
    pub fn apply(&self, v: HVertex) -> HVertex {
        if v.magnitude == 0 {
            return v;
        }
        let image = HVertex::from_value(self.window[v.magnitude - 1] as i64);
        match v.sign {
            Sign::Plus => image,
            Sign::Minus => image.neg(),
        }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut window = vec![0i32; self.window.len()];
        for (i, &v) in self.window.iter().enumerate() {
            let pos = (i + 1) as i32;
            window[v.unsigned_abs() as usize - 1] = if v > 0 { pos } else { -pos };
        }
        SignedPermutation { window }
    }

    /// `self ∘ other` as maps of `±1..±n`.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let window = other
            .window
            .iter()
            .map(|&v| self.apply(HVertex::from_value(v as i64)).value() as i32)
            .collect();
        SignedPermutation { window }
    }

    /// `m(π)`: the number of negative window entries.
    pub fn m_count(&self) -> usize {
        self.window.iter().filter(|&&v| v < 0).count()
    }

    pub fn is_positive(&self) -> bool {
        self.m_count() == 0
    }

    /// `ε_i(π)`, the exponent carried by the `i`-th letter of the right-hand side.
    pub fn epsilon(&self, i: usize) -> i32 {
        self.window[i - 1].signum()
    }

    /// `|π|` as a 1-based permutation of `1..=n`.
    pub fn unsigned(&self) -> Vec<usize> {
        self.window.iter().map(|v| v.unsigned_abs() as usize).collect()
    }

    /// `π* = (π₊ₙ, π₊₍ₙ₋₁₎, …, π₊₀)(π₋₀, π₋₁, …, π₋ₙ)`.
    ///
    /// Equivalently `π* = π ∘ pred ∘ π⁻¹`, the successor map read backwards
    /// and relabelled by `π`.
    pub fn pi_star(&self) -> HPermutation {
        let n = self.rank();
        let inv = self.inverse();
        HPermutation::from_fn(n, |v| self.apply(inv.apply(v).pred(n))).expect("π* is a bijection")
    }

    /// `π° = π* · (+0, +1, …, +n) · (−n, …, −1, −0)`, products applied right to left:
    /// `π°(v) = π*(v + 1)`.
    pub fn pi_circ(&self) -> HPermutation {
        let n = self.rank();
        self.pi_star().compose(&HPermutation::successor(n))
    }

    /// Recovers `θ` from a candidate `θ*`, or `None` when the map does not
    /// have the shape of any `θ*` (two `(n+1)`-cycles with `+0` and `−0`
    /// apart and the negation symmetry).
    pub fn from_star(star: &HPermutation) -> Option<SignedPermutation> {
        let n = star.rank();
        let mut window = vec![0i32; n];
        let mut seen = vec![false; n + 1];
        let mut v = HVertex::PLUS_ZERO;
        for i in (1..=n).rev() {
            v = star.apply(v);
            if v.magnitude == 0 || seen[v.magnitude] {
                return None;
            }
            seen[v.magnitude] = true;
            window[i - 1] = v.value() as i32;
        }
        if star.apply(v) != HVertex::PLUS_ZERO {
            return None;
        }
        let theta = SignedPermutation { window };
        if &theta.pi_star() != star {
            return None;
        }
        Some(theta)
    }

    /// Position of this element in the enumeration order of [`enumerate_bn`].
    pub fn enumeration_index(&self) -> u64 {
        let n = self.rank();
        let mut remaining: Vec<usize> = (1..=n).collect();
        let mut index = 0u64;
        for (pos, &v) in self.window.iter().enumerate() {
            let r = n - pos;
            let block = order_bn(r - 1);
            let m = v.unsigned_abs() as usize;
            let slot = remaining.iter().position(|&x| x == m).expect("valid window");
            remaining.remove(slot);
            let digit = 2 * slot as u64 + u64::from(v < 0);
            index += digit * block;
        }
        index
    }

    /// Inverse of [`SignedPermutation::enumeration_index`].
    pub fn from_enumeration_index(n: usize, index: u64) -> Result<Self, PermError> {
        let total = order_bn(n);
        if index >= total {
            return Err(PermError::IndexOutOfRange { start: index, end: index + 1, total });
        }
        let mut window = vec![0i32; n];
        unrank_into(n, index, &mut window);
        Ok(SignedPermutation { window })
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.window.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v:+}")?;
        }
        Ok(())
    }
}

impl FromStr for SignedPermutation {
    type Err = PermError;

    /// Comma-separated signed integers, `+` optional: `"+3,-1,2,+4"`.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let values = input
            .split(',')
            .map(|tok| {
                let t = tok.trim().replace('\u{2212}', "-");
                let t = t.strip_prefix('+').unwrap_or(&t);
                t.parse::<i64>().map_err(|e| PermError::Parse {
                    input: input.to_string(),
                    reason: format!("{tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        SignedPermutation::from_window(&values)
    }
}

impl From<HVertex> for String {
    fn from(v: HVertex) -> String {
        v.to_string()
    }
}

impl TryFrom<String> for HVertex {
    type Error = PermError;

    fn try_from(s: String) -> Result<Self, PermError> {
        s.parse()
    }
}

impl From<SignedPermutation> for String {
    fn from(p: SignedPermutation) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for SignedPermutation {
    type Error = PermError;

    fn try_from(s: String) -> Result<Self, PermError> {
        s.parse()
    }
}

/// `|B_n| = 2ⁿ · n!` (fits in `u64` for `n ≤ 20`).
pub fn order_bn(n: usize) -> u64 {
    (1..=n as u64).fold(1u64, |acc, i| acc * 2 * i)
}

/// Writes the window of the element at `index` into `out` (length `n`).
///
/// The enumeration is lexicographic with entries compared by magnitude first
/// and `+k` before `−k`: `+1 < −1 < +2 < −2 < …`.
pub(crate) fn unrank_into(n: usize, mut index: u64, out: &mut [i32]) {
    debug_assert_eq!(out.len(), n);
    // Remaining magnitudes as a bitmask keeps this allocation-free.
    let mut remaining: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for (pos, slot) in out.iter_mut().enumerate() {
        let r = n - pos;
        let block = order_bn(r - 1);
        let digit = index / block;
        index %= block;
        let mut skip = digit / 2;
        let mut bit = 0;
        loop {
            if remaining & (1 << bit) != 0 {
                if skip == 0 {
                    break;
                }
                skip -= 1;
            }
            bit += 1;
        }
        remaining &= !(1 << bit);
        let m = bit + 1;
        *slot = if digit % 2 == 0 { m } else { -m };
    }
}

/// Iterator over a contiguous index range of the `B_n` enumeration.
#[derive(Debug, Clone)]
pub struct BnIter {
    n: usize,
    next: u64,
    end: u64,
}

impl BnIter {
    /// Elements with enumeration index in `range`; usable as a shard.
    pub fn range(n: usize, range: Range<u64>) -> Result<Self, PermError> {
        let total = order_bn(n);
        if range.start > range.end || range.end > total {
            return Err(PermError::IndexOutOfRange { start: range.start, end: range.end, total });
        }
        Ok(BnIter { n, next: range.start, end: range.end })
    }
}

impl Iterator for BnIter {
    type Item = SignedPermutation;

    fn next(&mut self) -> Option<SignedPermutation> {
        if self.next >= self.end {
            return None;
        }
        let mut window = vec![0i32; self.n];
        unrank_into(self.n, self.next, &mut window);
        self.next += 1;
        Some(SignedPermutation { window })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for BnIter {}

/// Checks `n` against [`DEFAULT_RANK_LIMIT`] (or a caller-supplied limit).
pub fn check_rank(n: usize, limit: usize, allow_large: bool) -> Result<(), PermError> {
    if n == 0 {
        return Err(PermError::Empty);
    }
    if n > limit && !allow_large {
        return Err(PermError::RankTooLargeWithoutOverride { n, limit });
    }
    Ok(())
}

/// Every element of `B_n` exactly once, in the documented lexicographic order.
pub fn enumerate_bn(n: usize, allow_large: bool) -> Result<BnIter, PermError> {
    check_rank(n, DEFAULT_RANK_LIMIT, allow_large)?;
    BnIter::range(n, 0..order_bn(n))
}
