//! Exact signed commuting probabilities: brute force, the squares
//! convolution, and closed forms over class constants.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::census::{signed_hultman_table, CensusError, CensusOptions};
use crate::graph::s_count;
use crate::group::{CayleyGroup, GroupError};
use crate::serde_big::biguint_string;
use crate::signed::{check_rank, enumerate_bn, order_bn, PermError, SignedPermutation};

/// Largest `|G|ⁿ` scanned by the brute-force evaluator.
pub const BRUTE_FORCE_LIMIT: u64 = 100_000_000;
/// Total tuple evaluations allowed for one exhaustive theorem check.
pub const VERIFY_BUDGET: u64 = 2_000_000_000;

#[derive(Debug, Error)]
pub enum ProbError {
    #[error("|G|^n = {order}^{vars} exceeds the brute-force limit {limit}")]
    InstanceTooLarge { order: usize, vars: usize, limit: u64 },
    #[error("{0}")]
    MethodUnavailable(String),
    #[error("exponent must be positive")]
    InvalidExponent,
    #[error("exhaustive check needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("{0} is not a probability")]
    OutOfRange(String),
    #[error("cannot parse probability {0:?}")]
    Parse(String),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A rational in `[0, 1]`, always in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Probability(BigRational);

impl Probability {
    pub fn new(value: BigRational) -> Result<Self, ProbError> {
        if value.is_negative() || value > BigRational::one() {
            return Err(ProbError::OutOfRange(value.to_string()));
        }
        Ok(Probability(value))
    }

    /// `hits / total`; panics if `total` is zero.
    pub fn ratio(hits: BigUint, total: BigUint) -> Result<Self, ProbError> {
        Self::new(BigRational::new(hits.into(), total.into()))
    }

    pub fn one() -> Self {
        Probability(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> BigUint {
        self.0.numer().magnitude().clone()
    }

    pub fn denom(&self) -> BigUint {
        self.0.denom().magnitude().clone()
    }

    pub fn mul(&self, other: &Probability) -> Probability {
        Probability(&self.0 * &other.0)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Probability {
    type Err = ProbError;

    fn from_str(s: &str) -> Result<Self, ProbError> {
        let v: BigRational = s.trim().parse().map_err(|_| ProbError::Parse(s.to_string()))?;
        Probability::new(v)
    }
}

impl From<Probability> for String {
    fn from(p: Probability) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Probability {
    type Error = ProbError;

    fn try_from(s: String) -> Result<Self, ProbError> {
        s.parse()
    }
}

/// One factor `a_var` or `a_var⁻¹` of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub var: usize,
    pub inverse: bool,
}

/// A word equation `lhs = rhs` in `vars` independent uniform variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub vars: usize,
    pub lhs: Vec<Letter>,
    pub rhs: Vec<Letter>,
}

fn plain(var: usize) -> Letter {
    Letter { var, inverse: false }
}

impl Equation {
    /// `a₁⋯aₙ = a_{|π₁|}^{ε₁}⋯a_{|πₙ|}^{εₙ}`.
    pub fn for_permutation(pi: &SignedPermutation) -> Self {
        let n = pi.rank();
        let rhs = pi
            .window()
            .iter()
            .map(|&v| Letter { var: v.unsigned_abs() as usize - 1, inverse: v < 0 })
            .collect();
        Equation { vars: n, lhs: (0..n).map(plain).collect(), rhs }
    }

    /// `a₁⋯a_m = a_m⋯a₁`.
    pub fn reversal(m: usize) -> Self {
        Equation { vars: m, lhs: (0..m).map(plain).collect(), rhs: (0..m).rev().map(plain).collect() }
    }

    /// `a₁⋯a_k = a₁⁻¹⋯a_k⁻¹`.
    pub fn inverted(k: usize) -> Self {
        Equation {
            vars: k,
            lhs: (0..k).map(plain).collect(),
            rhs: (0..k).map(|var| Letter { var, inverse: true }).collect(),
        }
    }

    /// `a₁²⋯a_k² = 1`.
    pub fn squares(k: usize) -> Self {
        Equation { vars: k, lhs: (0..k).flat_map(|v| [plain(v), plain(v)]).collect(), rhs: Vec::new() }
    }

    /// Number of satisfying assignments, parallel over the first variable.
    pub fn count_solutions(&self, g: &CayleyGroup) -> Result<BigUint, ProbError> {
        let order = g.order();
        let work = (order as u64).checked_pow(self.vars as u32).filter(|&w| w <= BRUTE_FORCE_LIMIT);
        if work.is_none() {
            return Err(ProbError::InstanceTooLarge { order, vars: self.vars, limit: BRUTE_FORCE_LIMIT });
        }
        let eval = |word: &[Letter], tuple: &[usize]| {
            word.iter().fold(0, |acc, l| {
                let a = tuple[l.var];
                g.mul(acc, if l.inverse { g.inv(a) } else { a })
            })
        };
        let scan = |first: usize| -> u64 {
            let mut tuple = vec![0usize; self.vars];
            if self.vars > 0 {
                tuple[0] = first;
            }
            let mut hits = 0u64;
            loop {
                if eval(&self.lhs, &tuple) == eval(&self.rhs, &tuple) {
                    hits += 1;
                }
                let mut i = 1;
                while i < self.vars {
                    tuple[i] += 1;
                    if tuple[i] < order {
                        break;
                    }
                    tuple[i] = 0;
                    i += 1;
                }
                if i >= self.vars {
                    return hits;
                }
            }
        };
        let total: u64 = if self.vars == 0 { scan(0) } else { (0..order).into_par_iter().map(scan).sum() };
        Ok(BigUint::from(total))
    }

    pub fn probability(&self, g: &CayleyGroup) -> Result<Probability, ProbError> {
        let hits = self.count_solutions(g)?;
        Probability::ratio(hits, BigUint::from(g.order()).pow(self.vars as u32))
    }
}

/// `Pr_π(G)` by scanning all `|G|ⁿ` tuples.
pub fn pr_pi_bruteforce(g: &CayleyGroup, pi: &SignedPermutation) -> Result<Probability, ProbError> {
    Equation::for_permutation(pi).probability(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerMethod {
    Bruteforce,
    ClassFormula,
    /// Class formula for even `m`, brute force for odd `m ≥ 3`.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NegMethod {
    Bruteforce,
    Squares,
    ClassFormula,
}

impl FromStr for NegMethod {
    type Err = ProbError;

    fn from_str(s: &str) -> Result<Self, ProbError> {
        match s {
            "bruteforce" => Ok(NegMethod::Bruteforce),
            "squares" => Ok(NegMethod::Squares),
            "classformula" => Ok(NegMethod::ClassFormula),
            _ => Err(ProbError::MethodUnavailable(format!("unknown method {s:?}"))),
        }
    }
}

impl FromStr for PowerMethod {
    type Err = ProbError;

    fn from_str(s: &str) -> Result<Self, ProbError> {
        match s {
            "bruteforce" => Ok(PowerMethod::Bruteforce),
            "classformula" => Ok(PowerMethod::ClassFormula),
            "auto" => Ok(PowerMethod::Auto),
            _ => Err(ProbError::MethodUnavailable(format!("unknown method {s:?}"))),
        }
    }
}

/// Visits every class tuple `I ∈ C(G)ⁿ` with the vector `c_{I;·}`.
fn for_each_class_tuple(g: &CayleyGroup, n: usize, visit: &mut dyn FnMut(&[usize], &[BigUint])) {
    let k = g.constants();
    let c = k.class_count();
    let mut start = vec![BigUint::zero(); c];
    start[0] = BigUint::one();
    let mut stack = vec![start];
    let mut tuple = Vec::with_capacity(n);
    fn go(
        k: &crate::group::ClassConstants,
        n: usize,
        c: usize,
        tuple: &mut Vec<usize>,
        stack: &mut Vec<Vec<BigUint>>,
        visit: &mut dyn FnMut(&[usize], &[BigUint]),
    ) {
        if tuple.len() == n {
            visit(tuple, stack.last().expect("nonempty"));
            return;
        }
        for i in 0..c {
            let next = k.fold(stack.last().expect("nonempty"), i);
            tuple.push(i);
            stack.push(next);
            go(k, n, c, tuple, stack, visit);
            stack.pop();
            tuple.pop();
        }
    }
    go(k, n, c, &mut tuple, &mut stack, visit);
}

/// `lcm(|Ω_j|)ⁿ`, a common multiple of every `Π|Ω_{i_t}|`.
fn size_lcm_power(g: &CayleyGroup, n: usize) -> BigUint {
    let l = g.classes().sizes.iter().fold(1usize, |acc, &s| acc.lcm(&s));
    BigUint::from(l).pow(n as u32)
}

fn size_product(g: &CayleyGroup, tuple: &[usize]) -> BigUint {
    tuple.iter().map(|&i| BigUint::from(g.classes().sizes[i])).product()
}

/// `Pr^{2n}(G) = Σ_{I,j} |Ω_j|·c_{I;j}² / (Π|Ω_I|·|G|ⁿ)`.
fn pr_power_even_formula(g: &CayleyGroup, m: usize) -> Result<Probability, ProbError> {
    let n = m / 2;
    let l = size_lcm_power(g, n);
    let sizes = &g.classes().sizes;
    let mut acc = BigUint::zero();
    for_each_class_tuple(g, n, &mut |tuple, v| {
        let inner: BigUint = v.iter().zip(sizes).map(|(x, &s)| x * x * BigUint::from(s)).sum();
        acc += inner * (&l / size_product(g, tuple));
    });
    Probability::ratio(acc, l * BigUint::from(g.order()).pow(n as u32))
}

/// `Pr^m(G)`; `m = 0` is the empty equation and gives 1.
pub fn pr_power(g: &CayleyGroup, m: usize, method: PowerMethod) -> Result<Probability, ProbError> {
    if m <= 1 {
        return Ok(Probability::one());
    }
    match (method, m % 2 == 0) {
        (PowerMethod::Bruteforce, _) | (PowerMethod::Auto, false) => Equation::reversal(m).probability(g),
        (PowerMethod::ClassFormula | PowerMethod::Auto, true) => pr_power_even_formula(g, m),
        (PowerMethod::ClassFormula, false) => {
            Err(ProbError::MethodUnavailable(format!("no class formula for odd exponent {m}")))
        }
    }
}

/// `Pr(a₁²⋯a_k² = 1)` by `k`-fold convolution of `#{a : a² = g}`.
fn pr_neg_squares(g: &CayleyGroup, k: usize) -> Result<Probability, ProbError> {
    let order = g.order();
    let mut sq = vec![0u64; order];
    for a in 0..order {
        sq[g.mul(a, a)] += 1;
    }
    let mut dist: Vec<BigUint> = sq.iter().map(|&c| BigUint::from(c)).collect();
    for _ in 1..k {
        let mut next = vec![BigUint::zero(); order];
        for (h, dh) in dist.iter().enumerate() {
            if dh.is_zero() {
                continue;
            }
            for (s, &cs) in sq.iter().enumerate() {
                if cs != 0 {
                    next[g.mul(h, s)] += dh * cs;
                }
            }
        }
        dist = next;
    }
    Probability::ratio(dist.swap_remove(0), BigUint::from(order).pow(k as u32))
}

/// For `k = 2n`: `Σ_I c_{I,I;1} / (Π|Ω_I|·|G|ⁿ)`.
/// For `k = 2n + 1`: `Σ_{I,j} |Ω_j|·c_{I,I;j²} / (Π|Ω_I|·|G|ⁿ⁺¹)`.
///
/// The odd branch weights each `j` by `|Ω_j|/|G|`, the chance that the last
/// variable lands in `Ω_j`; see [`pr_neg_odd_formula_unnormalised`].
fn pr_neg_class_formula(g: &CayleyGroup, k: usize) -> Result<Probability, ProbError> {
    let n = k / 2;
    let odd = k % 2 == 1;
    let consts = g.constants();
    let c = g.classes();
    let l = size_lcm_power(g, n);
    let mut acc = BigUint::zero();
    for_each_class_tuple(g, n, &mut |tuple, v| {
        let mut w = v.to_vec();
        for &i in tuple {
            w = consts.fold(&w, i);
        }
        let term = if odd {
            (0..c.count()).map(|j| &w[c.square_class[j]] * BigUint::from(c.sizes[j])).sum()
        } else {
            w[0].clone()
        };
        acc += term * (&l / size_product(g, tuple));
    });
    let extra = if odd { n + 1 } else { n };
    Probability::ratio(acc, l * BigUint::from(g.order()).pow(extra as u32))
}

/// The odd closed form with weight `|Ω(G, j²)|` in place of `|Ω_j|/|G|`,
/// as an unconstrained rational. It is not a probability in general:
/// `S₃` gives 2 at `k = 1` and `3/2` at `k = 3`.
pub fn pr_neg_odd_formula_unnormalised(g: &CayleyGroup, k: usize) -> BigRational {
    assert!(k % 2 == 1, "odd exponents only");
    let n = k / 2;
    let consts = g.constants();
    let c = g.classes();
    let l = size_lcm_power(g, n);
    let mut acc = BigUint::zero();
    for_each_class_tuple(g, n, &mut |tuple, v| {
        let mut w = v.to_vec();
        for &i in tuple {
            w = consts.fold(&w, i);
        }
        let term: BigUint =
            (0..c.count()).map(|j| &w[c.square_class[j]] * BigUint::from(c.sizes[c.square_class[j]])).sum();
        acc += term * (&l / size_product(g, tuple));
    });
    BigRational::new(acc.into(), (l * BigUint::from(g.order()).pow(n as u32)).into())
}

/// `Pr^{−k}(G)`.
pub fn pr_neg(g: &CayleyGroup, k: usize, method: NegMethod) -> Result<Probability, ProbError> {
    if k == 0 {
        return Err(ProbError::InvalidExponent);
    }
    match method {
        NegMethod::Bruteforce => Equation::inverted(k).probability(g),
        NegMethod::Squares => pr_neg_squares(g, k),
        NegMethod::ClassFormula => pr_neg_class_formula(g, k),
    }
}

/// The value the main theorem assigns to the class `(s, positive?)` in `B_n`.
/// Nonpositive elements have `s ≤ n`.
pub fn predicted(g: &CayleyGroup, n: usize, s: usize, positive: bool) -> Result<Probability, ProbError> {
    let e = n + 1 - s;
    if positive {
        pr_power(g, e, PowerMethod::Auto)
    } else {
        pr_neg(g, e, NegMethod::Squares)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub probability: Probability,
    #[serde(with = "biguint_string")]
    pub count: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub n: usize,
    pub group: String,
    /// Ascending by probability.
    pub entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    pub fn total(&self) -> BigUint {
        self.entries.iter().map(|e| e.count.clone()).sum()
    }

    pub fn get(&self, p: &Probability) -> Option<&BigUint> {
        self.entries.iter().find(|e| &e.probability == p).map(|e| &e.count)
    }

    /// CSV with header `n,group,probability,count`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "group", "probability", "count"]).expect("in-memory write");
        for e in &self.entries {
            w.write_record([self.n.to_string(), self.group.clone(), e.probability.to_string(), e.count.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// Distribution of `Pr_π(G)` over `B_n`, assembled from the census and the
/// class values, merging equal probabilities.
pub fn spectrum(g: &CayleyGroup, n: usize, opts: CensusOptions) -> Result<Spectrum, ProbError> {
    let table = signed_hultman_table(n, opts)?;
    let mut merged: BTreeMap<Probability, BigUint> = BTreeMap::new();
    for (&s, counts) in &table.counts {
        if !counts.positive.is_zero() {
            *merged.entry(predicted(g, n, s, true)?).or_default() += &counts.positive;
        }
        if !counts.nonpositive.is_zero() {
            *merged.entry(predicted(g, n, s, false)?).or_default() += &counts.nonpositive;
        }
    }
    let entries = merged.into_iter().map(|(probability, count)| SpectrumEntry { probability, count }).collect();
    Ok(Spectrum { n, group: g.label().to_string(), entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum VerifyMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub pi: SignedPermutation,
    pub s: usize,
    pub observed: Probability,
    pub predicted: Probability,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub s: usize,
    pub positive: bool,
    pub checked: u64,
    pub predicted: Probability,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub group: String,
    pub n: usize,
    #[serde(flatten)]
    pub mode: VerifyMode,
    pub checked: u64,
    pub counterexamples: Vec<Counterexample>,
    pub tallies: Vec<Tally>,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Compares brute-force `Pr_π(G)` with [`predicted`] for every `π ∈ B_n`
/// or for `count` seeded uniform draws (with replacement).
pub fn verify_main_theorem(g: &CayleyGroup, n: usize, mode: VerifyMode) -> Result<TheoremReport, ProbError> {
    check_rank(n, crate::census::CENSUS_RANK_LIMIT, false)?;
    let per_pi = (g.order() as u64).checked_pow(n as u32).filter(|&w| w <= BRUTE_FORCE_LIMIT);
    if per_pi.is_none() {
        return Err(ProbError::InstanceTooLarge { order: g.order(), vars: n, limit: BRUTE_FORCE_LIMIT });
    }
    let sample: Vec<SignedPermutation> = match mode {
        VerifyMode::Exhaustive => {
            let needed = order_bn(n) as u128 * (g.order() as u128).pow(n as u32);
            if needed > VERIFY_BUDGET as u128 {
                return Err(ProbError::BudgetExceeded { needed, budget: VERIFY_BUDGET });
            }
            enumerate_bn(n, false)?.collect()
        }
        VerifyMode::Sampled { count, seed } => {
            let needed = count as u128 * (g.order() as u128).pow(n as u32);
            if needed > VERIFY_BUDGET as u128 {
                return Err(ProbError::BudgetExceeded { needed, budget: VERIFY_BUDGET });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let total = order_bn(n);
            (0..count)
                .map(|_| SignedPermutation::from_enumeration_index(n, rng.gen_range(0..total)))
                .collect::<Result<_, _>>()?
        }
    };
    let mut predictions: BTreeMap<(usize, bool), Probability> = BTreeMap::new();
    for s in 1..=n + 1 {
        predictions.insert((s, true), predicted(g, n, s, true)?);
        if s <= n {
            predictions.insert((s, false), predicted(g, n, s, false)?);
        }
    }
    let observed: Vec<(usize, bool, Probability)> = sample
        .iter()
        .map(|pi| Ok((s_count(pi), pi.is_positive(), pr_pi_bruteforce(g, pi)?)))
        .collect::<Result<_, ProbError>>()?;
    let mut counts: BTreeMap<(usize, bool), u64> = BTreeMap::new();
    let mut counterexamples = Vec::new();
    for (pi, (s, positive, obs)) in sample.iter().zip(observed) {
        *counts.entry((s, positive)).or_default() += 1;
        let want = &predictions[&(s, positive)];
        if &obs != want {
            counterexamples.push(Counterexample { pi: pi.clone(), s, observed: obs, predicted: want.clone() });
        }
    }
    let tallies = counts
        .into_iter()
        .map(|((s, positive), checked)| Tally { s, positive, checked, predicted: predictions[&(s, positive)].clone() })
        .collect();
    Ok(TheoremReport {
        group: g.label().to_string(),
        n,
        mode,
        checked: sample.len() as u64,
        counterexamples,
        tallies,
    })
}

/// One probability-side statement compared with its structural counterpart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredicateCheck {
    pub name: &'static str,
    /// Group-theoretic side, from the class data.
    pub structural: bool,
    /// Probability side, from the computed values.
    pub probabilistic: bool,
    /// Whether the statement claims `structural ⇔ probabilistic`
    /// (otherwise only `structural ⇒ probabilistic`).
    pub biconditional: bool,
    pub consistent: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredicateReport {
    pub group: String,
    pub ks: Vec<usize>,
    pub checks: Vec<PredicateCheck>,
}

impl PredicateReport {
    pub fn consistent(&self) -> bool {
        self.checks.iter().all(|c| c.consistent)
    }
}

fn check(name: &'static str, structural: bool, probabilistic: bool, biconditional: bool, detail: String) -> PredicateCheck {
    let consistent = if biconditional { structural == probabilistic } else { !structural || probabilistic };
    PredicateCheck { name, structural, probabilistic, biconditional, consistent, detail }
}

fn join(values: &[Probability]) -> String {
    values.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

fn is_two_group(order: usize) -> bool {
    order.is_power_of_two()
}

/// Evaluates the corollaries linking `Pr^{±k}` to group structure at each `k` in `ks`.
pub fn structural_predicates_from_probabilities(g: &CayleyGroup, ks: &[usize]) -> Result<PredicateReport, ProbError> {
    if ks.contains(&0) {
        return Err(ProbError::InvalidExponent);
    }
    let ks = ks.to_vec();
    let counts = g.structural_counts();
    let order = BigUint::from(g.order());
    let inv_over_order = Probability::ratio(BigUint::from(counts.inv_count), order.clone())?;
    let one_over_order = Probability::ratio(BigUint::one(), order)?;
    let neg: Vec<Probability> = ks.iter().map(|&k| pr_neg(g, k, NegMethod::Squares)).collect::<Result<_, _>>()?;
    let pos_even: Vec<Probability> =
        ks.iter().map(|&k| pr_power(g, 2 * k, PowerMethod::ClassFormula)).collect::<Result<_, _>>()?;
    let neg_even: Vec<Probability> =
        ks.iter().map(|&k| pr_neg(g, 2 * k, NegMethod::Squares)).collect::<Result<_, _>>()?;

    let mut checks = Vec::new();
    checks.push(check(
        "ambivalent",
        counts.is_ambivalent,
        pos_even.iter().zip(&neg_even).all(|(a, b)| a == b),
        true,
        format!("Pr^2k = [{}], Pr^-2k = [{}]", join(&pos_even), join(&neg_even)),
    ));
    checks.push(check(
        "odd-order",
        counts.is_odd_order,
        neg.iter().all(|p| p == &one_over_order),
        true,
        format!("Pr^-k = [{}], 1/|G| = {one_over_order}", join(&neg)),
    ));
    checks.push(check(
        "abelian",
        counts.is_abelian,
        neg.iter().all(|p| p == &inv_over_order),
        false,
        format!("Pr^-k = [{}], inv/|G| = {inv_over_order}", join(&neg)),
    ));
    if !g.factors().is_empty() {
        let mut product_values = Vec::new();
        for &k in &ks {
            let mut p = Probability::one();
            for f in g.factors() {
                p = p.mul(&pr_neg(f, k, NegMethod::Squares)?);
            }
            product_values.push(p);
        }
        checks.push(check(
            "direct-sum",
            true,
            product_values == neg,
            false,
            format!("product of factors = [{}], Pr^-k = [{}]", join(&product_values), join(&neg)),
        ));
        let abelian_two_and_odd = g.factors().len() == 2 && {
            let (a, b) = (&g.factors()[0], &g.factors()[1]);
            let a_ok = a.is_abelian() && is_two_group(a.order());
            let b_ok = b.order() % 2 == 1;
            a_ok && b_ok
        };
        if abelian_two_and_odd {
            checks.push(check(
                "abelian-2-group-plus-odd",
                true,
                neg.iter().all(|p| p == &inv_over_order),
                false,
                format!("Pr^-k = [{}], inv/|G| = {inv_over_order}", join(&neg)),
            ));
        }
    }
    Ok(PredicateReport { group: g.label().to_string(), ks, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn g(spec: &str) -> CayleyGroup {
        spec.parse::<GroupSpec>().unwrap().build().unwrap()
    }

    fn p(s: &str) -> Probability {
        s.parse().unwrap()
    }

    fn pi(s: &str) -> SignedPermutation {
        s.parse().unwrap()
    }

    #[test]
    fn probability_basics() {
        assert_eq!(p("2/4").to_string(), "1/2");
        assert!("3/2".parse::<Probability>().is_err());
        assert!("-1/2".parse::<Probability>().is_err());
        assert_eq!(serde_json::to_string(&p("5/8")).unwrap(), "\"5/8\"");
        assert_eq!(serde_json::from_str::<Probability>("\"5/8\"").unwrap(), p("5/8"));
        assert!(p("1/3") < p("1/2"));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(pr_pi_bruteforce(&g("cyclic:6"), &pi("3,1,2")).unwrap(), Probability::one());
        assert_eq!(pr_pi_bruteforce(&g("quaternion8"), &pi("-1")).unwrap(), p("1/4"));
        assert_eq!(pr_pi_bruteforce(&g("symmetric:3"), &pi("2,1")).unwrap(), p("1/2"));
        assert!(matches!(
            pr_pi_bruteforce(&g("symmetric:5"), &pi("1,2,3,4")),
            Err(ProbError::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn power_values() {
        for spec in ["symmetric:3", "quaternion8", "frobenius21"] {
            assert_eq!(pr_power(&g(spec), 1, PowerMethod::Bruteforce).unwrap(), Probability::one());
        }
        assert_eq!(pr_power(&g("symmetric:3"), 2, PowerMethod::Auto).unwrap(), p("1/2"));
        assert_eq!(pr_power(&g("quaternion8"), 2, PowerMethod::Auto).unwrap(), p("5/8"));
        assert_eq!(pr_power(&g("dihedral:8"), 2, PowerMethod::Auto).unwrap(), p("5/8"));
        assert_eq!(pr_power(&g("symmetric:3"), 4, PowerMethod::ClassFormula).unwrap(), p("3/8"));
        assert_eq!(pr_power(&g("frobenius21"), 4, PowerMethod::ClassFormula).unwrap(), p("29/189"));
        assert!(matches!(
            pr_power(&g("symmetric:3"), 3, PowerMethod::ClassFormula),
            Err(ProbError::MethodUnavailable(_))
        ));
    }

    #[test]
    fn even_power_paths_agree() {
        for spec in ["symmetric:3", "quaternion8", "dihedral:8", "frobenius21", "alternating:4", "symmetric:4"] {
            let grp = g(spec);
            for m in [2, 4] {
                assert_eq!(
                    pr_power(&grp, m, PowerMethod::Bruteforce).unwrap(),
                    pr_power(&grp, m, PowerMethod::ClassFormula).unwrap(),
                    "{spec} m={m}"
                );
            }
        }
    }

    #[test]
    fn neg_values() {
        assert_eq!(pr_neg(&g("quaternion8"), 1, NegMethod::Squares).unwrap(), p("1/4"));
        assert_eq!(pr_neg(&g("symmetric:3"), 2, NegMethod::ClassFormula).unwrap(), p("1/2"));
        for k in 1..=5 {
            assert_eq!(pr_neg(&g("cyclic:5"), k, NegMethod::Squares).unwrap(), p("1/5"));
        }
        assert_eq!(pr_neg(&g("symmetric:3"), 3, NegMethod::Bruteforce).unwrap(), p("5/12"));
        assert_eq!(pr_neg(&g("symmetric:4"), 3, NegMethod::Squares).unwrap(), p("19/144"));
        assert!(matches!(pr_neg(&g("cyclic:2"), 0, NegMethod::Squares), Err(ProbError::InvalidExponent)));
    }

    #[test]
    fn neg_methods_agree() {
        for spec in ["symmetric:3", "quaternion8", "dihedral:8", "cyclic:4", "frobenius21", "symmetric:4"] {
            let grp = g(spec);
            for k in 1..=3 {
                let b = pr_neg(&grp, k, NegMethod::Bruteforce).unwrap();
                assert_eq!(pr_neg(&grp, k, NegMethod::Squares).unwrap(), b, "{spec} k={k}");
                assert_eq!(pr_neg(&grp, k, NegMethod::ClassFormula).unwrap(), b, "{spec} k={k}");
            }
        }
    }

    #[test]
    fn unnormalised_odd_formula_leaves_the_unit_interval() {
        let s3 = g("symmetric:3");
        assert_eq!(pr_neg_odd_formula_unnormalised(&s3, 1), BigRational::from_integer(2.into()));
        assert_eq!(pr_neg_odd_formula_unnormalised(&s3, 3), BigRational::new(3.into(), 2.into()));
    }

    #[test]
    fn spectrum_small() {
        let s = spectrum(&g("symmetric:3"), 1, CensusOptions::default()).unwrap();
        assert_eq!(s.entries.len(), 2);
        assert_eq!(s.get(&Probability::one()), Some(&BigUint::from(1u8)));
        assert_eq!(s.get(&p("2/3")), Some(&BigUint::from(1u8)));
        assert_eq!(s.to_csv(), "n,group,probability,count\n1,symmetric:3,2/3,1\n1,symmetric:3,1,1\n");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<Spectrum>(&json).unwrap(), s);
    }

    #[test]
    fn spectrum_odd_order_mass() {
        for n in 1..=4 {
            let s = spectrum(&g("frobenius21"), n, CensusOptions::default()).unwrap();
            assert_eq!(s.total(), BigUint::from(order_bn(n)));
            let fact: u64 = (1..=n as u64).product();
            let at_min = s.get(&p("1/21")).cloned().unwrap_or_default();
            // Positive elements never reach 1/21 here, so the nonpositive mass is all of it.
            assert_eq!(at_min, BigUint::from(order_bn(n) - fact));
        }
    }

    #[test]
    fn theorem_small_cases() {
        let r = verify_main_theorem(&g("symmetric:3"), 2, VerifyMode::Exhaustive).unwrap();
        assert!(r.holds());
        assert_eq!(r.checked, 8);
        let r = verify_main_theorem(&g("frobenius21"), 2, VerifyMode::Exhaustive).unwrap();
        let nonpositive: u64 = r.tallies.iter().filter(|t| !t.positive).map(|t| t.checked).sum();
        assert_eq!(nonpositive, 6);
        assert!(r.tallies.iter().filter(|t| !t.positive).all(|t| t.predicted == p("1/21")));
        let r = verify_main_theorem(&g("quaternion8"), 3, VerifyMode::Exhaustive).unwrap();
        assert!(r.holds());
        assert_eq!(r.checked, 48);
    }

    #[test]
    fn theorem_budget() {
        assert!(matches!(
            verify_main_theorem(&g("symmetric:4"), 5, VerifyMode::Exhaustive),
            Err(ProbError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn sampled_mode_is_seeded() {
        let grp = g("dihedral:8");
        let a = verify_main_theorem(&grp, 4, VerifyMode::Sampled { count: 50, seed: 7 }).unwrap();
        let b = verify_main_theorem(&grp, 4, VerifyMode::Sampled { count: 50, seed: 7 }).unwrap();
        assert_eq!(a, b);
        assert!(a.holds());
    }

    #[test]
    fn predicate_examples() {
        let s3 = structural_predicates_from_probabilities(&g("symmetric:3"), &[1, 2, 3]).unwrap();
        assert!(s3.consistent());
        let amb = s3.checks.iter().find(|c| c.name == "ambivalent").unwrap();
        assert!(amb.structural && amb.probabilistic);
        let z3 = structural_predicates_from_probabilities(&g("cyclic:3"), &[1, 2]).unwrap();
        assert!(z3.consistent());
        let amb = z3.checks.iter().find(|c| c.name == "ambivalent").unwrap();
        assert!(!amb.structural && !amb.probabilistic);
        let sum = structural_predicates_from_probabilities(&g("direct_sum(klein4,frobenius21)"), &[1, 2]).unwrap();
        assert!(sum.consistent());
        assert!(sum.checks.iter().any(|c| c.name == "abelian-2-group-plus-odd" && c.probabilistic));
    }
}
