//! Built-in group constructors and the textual descriptor syntax.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::{CayleyGroup, GroupError};

pub const SYMMETRIC_LIMIT: usize = 5;
/// Largest order accepted for cyclic and dihedral constructors.
pub const ORDER_LIMIT: usize = 4096;

/// `cyclic:M`, `dihedral:2M`, `quaternion8`, `symmetric:K`, `alternating:K`,
/// `frobenius21`, `klein4`, `direct_sum(A,B,…)`, `file:PATH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Quaternion8,
    Symmetric(usize),
    Alternating(usize),
    Frobenius21,
    Klein4,
    DirectSum(Vec<GroupSpec>),
    File(PathBuf),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(m) => write!(f, "cyclic:{m}"),
            GroupSpec::Dihedral(m) => write!(f, "dihedral:{m}"),
            GroupSpec::Quaternion8 => write!(f, "quaternion8"),
            GroupSpec::Symmetric(k) => write!(f, "symmetric:{k}"),
            GroupSpec::Alternating(k) => write!(f, "alternating:{k}"),
            GroupSpec::Frobenius21 => write!(f, "frobenius21"),
            GroupSpec::Klein4 => write!(f, "klein4"),
            GroupSpec::DirectSum(parts) => {
                write!(f, "direct_sum(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            GroupSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

fn split_top_level(s: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    (depth == 0).then(|| {
        parts.push(&s[start..]);
        parts
    })
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(input: &str) -> Result<Self, GroupError> {
        let s = input.trim();
        let unknown = || GroupError::UnknownSpec(input.to_string());
        if let Some(inner) = s.strip_prefix("direct_sum(").and_then(|r| r.strip_suffix(')')) {
            let parts = split_top_level(inner).ok_or_else(unknown)?;
            if parts.iter().any(|p| p.trim().is_empty()) {
                return Err(unknown());
            }
            return Ok(GroupSpec::DirectSum(parts.into_iter().map(str::parse).collect::<Result<_, _>>()?));
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(GroupSpec::File(PathBuf::from(path)));
        }
        let (family, arg) = match s.split_once(':') {
            Some((f, a)) => (f, Some(a.parse::<usize>().map_err(|_| unknown())?)),
            None => (s, None),
        };
        match (family, arg) {
            ("cyclic", Some(m)) => Ok(GroupSpec::Cyclic(m)),
            ("dihedral", Some(m)) => Ok(GroupSpec::Dihedral(m)),
            ("symmetric", Some(k)) => Ok(GroupSpec::Symmetric(k)),
            ("alternating", Some(k)) => Ok(GroupSpec::Alternating(k)),
            ("quaternion8", None) => Ok(GroupSpec::Quaternion8),
            ("frobenius21", None) => Ok(GroupSpec::Frobenius21),
            ("klein4", None) => Ok(GroupSpec::Klein4),
            _ => Err(unknown()),
        }
    }
}

fn table_from(order: usize, f: impl Fn(usize, usize) -> usize) -> Vec<u32> {
    let mut mul = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            mul.push(f(a, b) as u32);
        }
    }
    mul
}

/// Permutations of `0..k` in lexicographic order (identity first).
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

fn is_even(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// Group of the given permutations under `(g·h)(i) = g(h(i))`.
fn permutation_group(perms: Vec<Vec<usize>>, label: String) -> Result<CayleyGroup, GroupError> {
    let index: std::collections::HashMap<Vec<usize>, usize> =
        perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let n = perms.len();
    let mul = table_from(n, |a, b| {
        let c: Vec<usize> = perms[b].iter().map(|&i| perms[a][i]).collect();
        index[&c]
    });
    CayleyGroup::from_flat(n, mul, None, label, Vec::new())
}

fn check_order(family: &'static str, degree: usize) -> Result<(), GroupError> {
    if degree > ORDER_LIMIT {
        return Err(GroupError::DegreeTooLarge { family, degree, limit: ORDER_LIMIT });
    }
    Ok(())
}

impl GroupSpec {
    pub fn build(&self) -> Result<CayleyGroup, GroupError> {
        let label = self.to_string();
        let bad = || GroupError::UnknownSpec(label.clone());
        match self {
            GroupSpec::Cyclic(m) => {
                let m = *m;
                if m == 0 {
                    return Err(bad());
                }
                check_order("cyclic", m)?;
                CayleyGroup::from_flat(m, table_from(m, |a, b| (a + b) % m), None, label, Vec::new())
            }
            GroupSpec::Dihedral(order) => {
                // r^i s^j ↦ i + m·j, with s r s = r⁻¹.
                let order = *order;
                if order < 2 || order % 2 != 0 {
                    return Err(bad());
                }
                check_order("dihedral", order)?;
                let m = order / 2;
                let mul = table_from(order, |a, b| {
                    let (i1, j1) = (a % m, a / m);
                    let (i2, j2) = (b % m, b / m);
                    let i = if j1 == 0 { (i1 + i2) % m } else { (i1 + m - i2) % m };
                    i + m * ((j1 + j2) % 2)
                });
                CayleyGroup::from_flat(order, mul, None, label, Vec::new())
            }
            GroupSpec::Quaternion8 => {
                // 1, -1, i, -i, j, -j, k, -k as (unit, sign).
                let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
                let unit_mul = |u: usize, v: usize| -> (usize, bool) {
                    // Units 0..4 = 1, i, j, k; result (unit, negated).
                    match (u, v) {
                        (0, x) | (x, 0) => (x, false),
                        (a, b) if a == b => (0, true),
                        (1, 2) => (3, false),
                        (2, 3) => (1, false),
                        (3, 1) => (2, false),
                        (2, 1) => (3, true),
                        (3, 2) => (1, true),
                        (1, 3) => (2, true),
                        _ => unreachable!(),
                    }
                };
                let mul = table_from(8, |a, b| {
                    let (u, neg) = unit_mul(a / 2, b / 2);
                    let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
                    2 * u + usize::from(sign)
                });
                let names = Some(names.iter().map(|s| s.to_string()).collect());
                CayleyGroup::from_flat(8, mul, names, label, Vec::new())
            }
            GroupSpec::Symmetric(k) => {
                if *k == 0 {
                    return Err(bad());
                }
                if *k > SYMMETRIC_LIMIT {
                    return Err(GroupError::DegreeTooLarge { family: "symmetric", degree: *k, limit: SYMMETRIC_LIMIT });
                }
                permutation_group(permutations(*k), label)
            }
            GroupSpec::Alternating(k) => {
                if *k == 0 {
                    return Err(bad());
                }
                if *k > SYMMETRIC_LIMIT {
                    return Err(GroupError::DegreeTooLarge { family: "alternating", degree: *k, limit: SYMMETRIC_LIMIT });
                }
                permutation_group(permutations(*k).into_iter().filter(|p| is_even(p)).collect(), label)
            }
            GroupSpec::Frobenius21 => {
                // a^x b^y ↦ x + 7y with b a b⁻¹ = a², so (x₀,y₀)(x₁,y₁) = (x₀ + 2^{y₀} x₁, y₀ + y₁).
                let pow2 = [1, 2, 4];
                let mul = table_from(21, |p, q| {
                    let (x0, y0) = (p % 7, p / 7);
                    let (x1, y1) = (q % 7, q / 7);
                    (x0 + pow2[y0] * x1) % 7 + 7 * ((y0 + y1) % 3)
                });
                CayleyGroup::from_flat(21, mul, None, label, Vec::new())
            }
            GroupSpec::Klein4 => {
                Ok(direct_sum(&[GroupSpec::Cyclic(2).build()?, GroupSpec::Cyclic(2).build()?])?.with_label(label))
            }
            GroupSpec::DirectSum(parts) => {
                if parts.is_empty() {
                    return Err(bad());
                }
                let groups = parts.iter().map(GroupSpec::build).collect::<Result<Vec<_>, _>>()?;
                Ok(direct_sum(&groups)?.with_label(label))
            }
            GroupSpec::File(path) => CayleyGroup::load(path),
        }
    }
}

/// `G₁ ⊕ … ⊕ G_m` with `(g₁,…,g_m) ↦ g₁ + |G₁|·(g₂ + |G₂|·(…))`.
pub fn direct_sum(groups: &[CayleyGroup]) -> Result<CayleyGroup, GroupError> {
    let order: usize = groups.iter().map(CayleyGroup::order).product();
    check_order("direct_sum", order)?;
    let split = |mut e: usize| -> Vec<usize> {
        groups
            .iter()
            .map(|g| {
                let c = e % g.order();
                e /= g.order();
                c
            })
            .collect()
    };
    let mul = table_from(order, |a, b| {
        let (xa, xb) = (split(a), split(b));
        let mut e = 0;
        for (i, g) in groups.iter().enumerate().rev() {
            e = e * g.order() + g.mul(xa[i], xb[i]);
        }
        e
    });
    let label = format!("direct_sum({})", groups.iter().map(|g| g.label().to_string()).collect::<Vec<_>>().join(","));
    CayleyGroup::from_flat(order, mul, None, label, groups.to_vec())
}
