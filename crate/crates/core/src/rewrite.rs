//! The exchange, cyclic and sign-change rewrites, all performed as edits of
//! `π*`, and a normalizer that records a replayable trace.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::s_count;
use crate::signed::{HPermutation, HVertex, Sign, SignedPermutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Exchange,
    Cyclic,
    SignChange,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Exchange => "exchange",
            StepKind::Cyclic => "cyclic",
            StepKind::SignChange => "sign-change",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("{kind} at ([{x}]--[{y}]) does not apply: {reason}")]
    PreconditionViolation { kind: StepKind, x: HVertex, y: HVertex, reason: &'static str },
    #[error("cyclic at ([{x}]--[{y}]) matches several cases: {cases:?}")]
    AmbiguousCase { x: HVertex, y: HVertex, cases: Vec<&'static str> },
    #[error("normalization of {pi} failed: {reason}")]
    NormalizationFailed { pi: String, reason: String },
    #[error("trace step {step} is invalid: {reason}")]
    InvalidTrace { step: usize, reason: String },
    #[error("rank {n} exceeds the normalization guard {limit}; pass an override to continue")]
    RankTooLargeWithoutOverride { n: usize, limit: usize },
}

fn violation(kind: StepKind, x: HVertex, y: HVertex, reason: &'static str) -> RewriteError {
    RewriteError::PreconditionViolation { kind, x, y, reason }
}

fn check_vertex(n: usize, kind: StepKind, x: HVertex, y: HVertex) -> Result<(), RewriteError> {
    if x.magnitude > n || y.magnitude > n {
        return Err(violation(kind, x, y, "vertex outside H_n"));
    }
    Ok(())
}

/// `([x]--[y])`-exchange.
///
/// Requires `y = π*(x + 1)`, i.e. `[x] ⇝ [−(x+1)] ↔ [y]`, with `y ∉ {x, x+1}`.
/// With `w = π*(y)` and `z = π*⁻¹(x)` the result has
/// `θ* = (x, y, w)(−y, −(x+1), −z) · π*`.
pub fn exchange(pi: &SignedPermutation, x: HVertex, y: HVertex) -> Result<SignedPermutation, RewriteError> {
    let kind = StepKind::Exchange;
    let n = pi.rank();
    check_vertex(n, kind, x, y)?;
    let star = pi.pi_star();
    let x1 = x.succ(n);
    if star.apply(x1) != y {
        return Err(violation(kind, x, y, "y is not the black neighbour of -(x+1)"));
    }
    if y == x || y == x1 {
        return Err(violation(kind, x, y, "y must differ from x and x+1"));
    }
    let w = star.apply(y);
    let z = star.inverse().apply(x);
    if w == x || y == z {
        return Ok(pi.clone());
    }
    let left = [x, y, w];
    let right = [y.neg(), x1.neg(), z.neg()];
    if left.iter().any(|v| right.contains(v)) {
        return Err(violation(kind, x, y, "the two 3-cycles overlap"));
    }
    let cycles = HPermutation::from_cycles(n, &[left.to_vec(), right.to_vec()])
        .ok_or(violation(kind, x, y, "degenerate 3-cycle"))?;
    let theta_star = cycles.compose(&star);
    SignedPermutation::from_star(&theta_star)
        .ok_or(violation(kind, x, y, "rewired map is not of the form θ*"))
}

/// Which predecessor of `y` in `π*` opens the cyclic pattern `… → y → x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Head {
    /// `x + 1 → y → x`, `x` positive.
    Succ,
    /// `−(x + 1) → y → x`, `x` positive.
    NegSucc,
    /// `−x + 1 → y → x`, `x` negative.
    NegXSucc,
}

/// Magnitude relabelling `from ↦ to` plus a shift of `lo..=hi` by `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Relabel {
    pub from: i64,
    /// Signed target; its sign multiplies the entry sign.
    pub to: i64,
    pub lo: i64,
    pub hi: i64,
    pub delta: i64,
}

/// One row of the cyclic-operation table.
#[derive(Debug, Clone, Copy)]
pub struct CyclicCase {
    pub name: &'static str,
    pub head: Head,
    pub y_sign: Sign,
    /// `|y| > |x| + 1` when true, `|y| < |x|` otherwise.
    pub above: bool,
    pub rule: fn(i64, i64) -> Relabel,
}

const fn case(name: &'static str, head: Head, y_sign: Sign, above: bool, rule: fn(i64, i64) -> Relabel) -> CyclicCase {
    CyclicCase { name, head, y_sign, above, rule }
}

// Arguments are a = |x|, b = |y|.
pub const CYCLIC_CASES: [CyclicCase; 12] = [
    case("succ/+y/above", Head::Succ, Sign::Plus, true, |a, b| Relabel { from: a + 1, to: b - 1, lo: a + 2, hi: b - 1, delta: -1 }),
    case("succ/+y/below", Head::Succ, Sign::Plus, false, |a, b| Relabel { from: a, to: b + 1, lo: b + 1, hi: a - 1, delta: 1 }),
    case("succ/-y/above", Head::Succ, Sign::Minus, true, |a, b| Relabel { from: a + 1, to: -b, lo: a + 2, hi: b, delta: -1 }),
    // The shift starts at b: starting at b + 1 would leave b without a preimage.
    case("succ/-y/below", Head::Succ, Sign::Minus, false, |a, b| Relabel { from: a, to: -b, lo: b, hi: a - 1, delta: 1 }),
    case("negsucc/+y/above", Head::NegSucc, Sign::Plus, true, |a, b| Relabel { from: a + 1, to: b - 1, lo: a + 2, hi: b - 1, delta: -1 }),
    case("negsucc/+y/below", Head::NegSucc, Sign::Plus, false, |a, b| Relabel { from: a + 1, to: b, lo: b, hi: a, delta: 1 }),
    case("negsucc/-y/above", Head::NegSucc, Sign::Minus, true, |a, b| Relabel { from: a + 1, to: -b, lo: a + 2, hi: b, delta: -1 }),
    case("negsucc/-y/below", Head::NegSucc, Sign::Minus, false, |a, b| Relabel { from: a + 1, to: -(b + 1), lo: b + 1, hi: a, delta: 1 }),
    case("negxsucc/+y/above", Head::NegXSucc, Sign::Plus, true, |a, b| Relabel { from: a, to: b, lo: a + 1, hi: b, delta: -1 }),
    case("negxsucc/+y/below", Head::NegXSucc, Sign::Plus, false, |a, b| Relabel { from: a, to: b + 1, lo: b + 1, hi: a - 1, delta: 1 }),
    case("negxsucc/-y/above", Head::NegXSucc, Sign::Minus, true, |a, b| Relabel { from: a, to: -(b - 1), lo: a + 1, hi: b - 1, delta: -1 }),
    case("negxsucc/-y/below", Head::NegXSucc, Sign::Minus, false, |a, b| Relabel { from: a, to: -b, lo: b, hi: a - 1, delta: 1 }),
];

impl Relabel {
    /// Signed images of `1..=n`, or `None` unless the map is a signed
    /// bijection of `1..=n` (boundary rows can reach 0 or n + 1).
    pub fn table(&self, n: usize) -> Option<Vec<i64>> {
        let n = n as i64;
        let mut sigma: Vec<i64> = (0..=n).collect();
        if !(1..=n).contains(&self.from) || !(1..=n).contains(&self.to.abs()) {
            return None;
        }
        sigma[self.from as usize] = self.to;
        for t in self.lo..=self.hi {
            if !(1..=n).contains(&t) || !(1..=n).contains(&(t + self.delta)) {
                return None;
            }
            sigma[t as usize] = t + self.delta;
        }
        let mut hit = vec![false; n as usize + 1];
        for v in &sigma[1..] {
            let m = v.unsigned_abs() as usize;
            if hit[m] {
                return None;
            }
            hit[m] = true;
        }
        Some(sigma)
    }
}

fn cyclic_head(n: usize, star: &HPermutation, x: HVertex, y: HVertex) -> Option<Head> {
    let before = star.inverse().apply(y);
    match x.sign {
        Sign::Plus if before == x.succ(n) => Some(Head::Succ),
        Sign::Plus if before == x.succ(n).neg() => Some(Head::NegSucc),
        Sign::Minus if before == x.neg().succ(n) => Some(Head::NegXSucc),
        _ => None,
    }
}

/// The table row selected by `(π, x, y)`.
pub fn cyclic_case(pi: &SignedPermutation, x: HVertex, y: HVertex) -> Result<&'static CyclicCase, RewriteError> {
    let kind = StepKind::Cyclic;
    let n = pi.rank();
    check_vertex(n, kind, x, y)?;
    let star = pi.pi_star();
    if star.apply(y) != x {
        return Err(violation(kind, x, y, "y -> x is not an arrow of π*"));
    }
    let head = cyclic_head(n, &star, x, y).ok_or(violation(kind, x, y, "no admissible head before y"))?;
    let (a, b) = (x.magnitude, y.magnitude);
    let above = b > a + 1;
    if !above && b >= a {
        return Err(violation(kind, x, y, "|y| is |x| or |x|+1"));
    }
    let matches: Vec<&'static CyclicCase> = CYCLIC_CASES
        .iter()
        .filter(|c| c.head == head && c.y_sign == y.sign && c.above == above)
        .collect();
    match matches.as_slice() {
        [] => Err(violation(kind, x, y, "no case applies")),
        [one] => Ok(one),
        many => Err(RewriteError::AmbiguousCase { x, y, cases: many.iter().map(|c| c.name).collect() }),
    }
}

/// `([x]--[y])`-cyclic operation: relabels the magnitudes of `π` by the
/// matching table row, `θ_i = sign(π_i) · σ(|π_i|)`.
pub fn cyclic(pi: &SignedPermutation, x: HVertex, y: HVertex) -> Result<SignedPermutation, RewriteError> {
    let row = cyclic_case(pi, x, y)?;
    let n = pi.rank();
    let relabel = (row.rule)(x.magnitude as i64, y.magnitude as i64);
    let sigma = relabel
        .table(n)
        .ok_or(violation(StepKind::Cyclic, x, y, "relabelling leaves 1..n"))?;
    let window: Vec<i32> = pi
        .window()
        .iter()
        .map(|&v| {
            let image = sigma[v.unsigned_abs() as usize];
            (if v < 0 { -image } else { image }) as i32
        })
        .collect();
    Ok(SignedPermutation::from_window_unchecked(window))
}

/// `([mag]--[mag+1])`-sign-change: swaps `x ↔ −x` and `x+1 ↔ −(x+1)` inside `π*`,
/// where `x = +mag` and `+n + 1 = +0`.
pub fn sign_change(pi: &SignedPermutation, mag: usize) -> Result<SignedPermutation, RewriteError> {
    let n = pi.rank();
    let a = HVertex::plus(mag);
    let kind = StepKind::SignChange;
    if mag > n {
        return Err(violation(kind, a, a, "magnitude outside 0..n"));
    }
    let a1 = a.succ(n);
    let star = pi.pi_star();
    let forward = star.apply(a) == a1.neg() && star.apply(a1) == a.neg();
    let backward = star.apply(a.neg()) == a1 && star.apply(a1.neg()) == a;
    if !(forward || backward) {
        return Err(violation(kind, a, a1, "neither sign-change pattern is present"));
    }
    let swap = HPermutation::from_fn(n, |v| if v.magnitude == a.magnitude || v.magnitude == a1.magnitude { v.neg() } else { v })
        .expect("swap is a bijection");
    SignedPermutation::from_star(&star.relabel(&swap))
        .ok_or(violation(kind, a, a1, "swapped map is not of the form θ*"))
}

/// Parameters of one rewrite; for sign-change `x = +mag` and `y = x + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StepParams {
    pub kind: StepKind,
    pub x: HVertex,
    pub y: HVertex,
}

impl fmt::Display for StepParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ([{}]--[{}])", self.kind, self.x, self.y)
    }
}

pub fn apply_step(pi: &SignedPermutation, step: &StepParams) -> Result<SignedPermutation, RewriteError> {
    match step.kind {
        StepKind::Exchange => exchange(pi, step.x, step.y),
        StepKind::Cyclic => cyclic(pi, step.x, step.y),
        StepKind::SignChange => sign_change(pi, step.x.magnitude),
    }
}

/// Every parameter tuple whose operation succeeds on `π`.
///
/// Exchange and cyclic each have at most one candidate `y` per `x`
/// (`π*(x+1)` and `π*⁻¹(x)`), so scanning `x` is complete.
pub fn applicable_steps(pi: &SignedPermutation) -> Vec<StepParams> {
    let n = pi.rank();
    let star = pi.pi_star();
    let star_inv = star.inverse();
    let mut out = Vec::new();
    for x in HVertex::all(n) {
        let y = star.apply(x.succ(n));
        if exchange(pi, x, y).is_ok() {
            out.push(StepParams { kind: StepKind::Exchange, x, y });
        }
    }
    for x in HVertex::all(n) {
        let y = star_inv.apply(x);
        if cyclic(pi, x, y).is_ok() {
            out.push(StepParams { kind: StepKind::Cyclic, x, y });
        }
    }
    for mag in 0..=n {
        if sign_change(pi, mag).is_ok() {
            let x = HVertex::plus(mag);
            out.push(StepParams { kind: StepKind::SignChange, x, y: x.succ(n) });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub kind: StepKind,
    pub x: HVertex,
    pub y: HVertex,
    pub before: SignedPermutation,
    pub after: SignedPermutation,
}

impl RewriteStep {
    pub fn params(&self) -> StepParams {
        StepParams { kind: self.kind, x: self.x, y: self.y }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTrace {
    pub source: SignedPermutation,
    pub target: SignedPermutation,
    pub steps: Vec<RewriteStep>,
}

impl OpTrace {
    /// Re-applies every step and checks chaining, `s` and the sign class.
    pub fn replay(&self) -> Result<(), RewriteError> {
        let bad = |step: usize, reason: String| RewriteError::InvalidTrace { step, reason };
        let mut current = self.source.clone();
        let s = s_count(&current);
        let positive = current.is_positive();
        for (i, step) in self.steps.iter().enumerate() {
            if step.before != current {
                return Err(bad(i, format!("starts at {} but the chain is at {current}", step.before)));
            }
            let after = apply_step(&current, &step.params()).map_err(|e| bad(i, e.to_string()))?;
            if after != step.after {
                return Err(bad(i, format!("recorded {} but the operation gives {after}", step.after)));
            }
            if s_count(&after) != s {
                return Err(bad(i, "s changed".into()));
            }
            if after.is_positive() != positive {
                return Err(bad(i, "sign class changed".into()));
            }
            current = after;
        }
        if current != self.target {
            return Err(bad(self.steps.len(), format!("ends at {current}, not {}", self.target)));
        }
        Ok(())
    }
}

/// The representative of the class of `π`: `I^(−(n−s+1))` when `m(π) > 0`,
/// otherwise `⟨k, k−1, …, 1, k+1, …, n⟩` with `k = n − s + 1`.
pub fn canonical_form(pi: &SignedPermutation) -> SignedPermutation {
    let n = pi.rank();
    let k = n + 1 - s_count(pi);
    if pi.is_positive() {
        SignedPermutation::prefix_reversal(n, k).expect("k <= n")
    } else {
        SignedPermutation::i_minus_k(n, k).expect("k <= n")
    }
}

pub const DEFAULT_NORMALIZE_LIMIT: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizeOptions {
    pub allow_large: bool,
    /// Give up after visiting this many permutations.
    pub max_states: usize,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions { allow_large: false, max_states: 2_000_000 }
    }
}

/// Breadth-first search along applicable steps from `π` to
/// [`canonical_form`]; the returned trace is replay-checked.
pub fn normalize(pi: &SignedPermutation, opts: NormalizeOptions) -> Result<(SignedPermutation, OpTrace), RewriteError> {
    let n = pi.rank();
    if n > DEFAULT_NORMALIZE_LIMIT && !opts.allow_large {
        return Err(RewriteError::RankTooLargeWithoutOverride { n, limit: DEFAULT_NORMALIZE_LIMIT });
    }
    let target = canonical_form(pi);
    let goal = target.enumeration_index();
    let start = pi.enumeration_index();
    let mut parent: HashMap<u64, Option<(u64, StepParams)>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([pi.clone()]);
    while let Some(current) = queue.pop_front() {
        if current.enumeration_index() == goal {
            break;
        }
        let here = current.enumeration_index();
        for step in applicable_steps(&current) {
            let next = apply_step(&current, &step).expect("listed steps apply");
            let id = next.enumeration_index();
            if parent.contains_key(&id) {
                continue;
            }
            parent.insert(id, Some((here, step)));
            if parent.len() > opts.max_states {
                return Err(RewriteError::NormalizationFailed {
                    pi: pi.to_string(),
                    reason: format!("search exceeded {} states", opts.max_states),
                });
            }
            queue.push_back(next);
        }
    }
    if !parent.contains_key(&goal) {
        return Err(RewriteError::NormalizationFailed {
            pi: pi.to_string(),
            reason: format!("{target} is not reachable"),
        });
    }
    let mut path = Vec::new();
    let mut id = goal;
    while let Some(Some((prev, step))) = parent.get(&id) {
        path.push(*step);
        id = *prev;
    }
    path.reverse();
    let mut steps = Vec::with_capacity(path.len());
    let mut current = pi.clone();
    for step in path {
        let after = apply_step(&current, &step)?;
        steps.push(RewriteStep { kind: step.kind, x: step.x, y: step.y, before: current, after: after.clone() });
        current = after;
    }
    let trace = OpTrace { source: pi.clone(), target: target.clone(), steps };
    trace.replay()?;
    Ok((target, trace))
}
