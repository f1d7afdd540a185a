//! Finite groups given by Cayley tables, with conjugacy data computed once at
//! construction.

mod builtin;
mod constants;

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builtin::{direct_sum, GroupSpec, ORDER_LIMIT, SYMMETRIC_LIMIT};
pub use constants::{ClassConstants, STAB_LIMIT};

/// Tables up to this order get the full O(N³) associativity check.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 64;
/// Random triples tested above [`FULL_ASSOCIATIVITY_LIMIT`].
pub const ASSOCIATIVITY_SAMPLES: usize = 200_000;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("table is not a nonempty square matrix with entries in 0..N")]
    MalformedTable,
    #[error("index 0 does not act as the identity")]
    NoIdentityAtZero,
    #[error("table is not a Latin square (row or column {0} repeats an entry)")]
    NotLatinSquare(usize),
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("({a}·{b})·{c} differs from {a}·({b}·{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("unknown group descriptor {0:?}")]
    UnknownSpec(String),
    #[error("{family} of degree {degree} is beyond the built-in limit {limit}")]
    DegreeTooLarge { family: &'static str, degree: usize, limit: usize },
    #[error("class index {index} is outside 0..{classes}")]
    ClassIndexOutOfRange { index: usize, classes: usize },
    #[error("element index {index} is outside 0..{order}")]
    ElementOutOfRange { index: usize, order: usize },
    #[error("|G|^n = {order}^{n} exceeds the brute-force limit {limit}")]
    InstanceTooLarge { order: usize, n: usize, limit: u64 },
    #[error("names list has {got} entries for a group of order {order}")]
    NamesLength { got: usize, order: usize },
    #[error("order field {declared} does not match a {actual}×{actual} table")]
    OrderMismatch { declared: usize, actual: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Conjugacy classes with the identity class first, the rest ordered by least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassData {
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    /// Class of the inverses of class `j`.
    pub inverse_class: Vec<usize>,
    /// Class of the squares of class `j`.
    pub square_class: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl ClassData {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    /// First element of class `j`; the fixed target `y ∈ Ω_j` of class constants.
    pub fn representative(&self, j: usize) -> usize {
        self.classes[j][0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructuralCounts {
    /// `|{b : b² = 1}|`, identity included.
    pub inv_count: usize,
    pub rc_count: usize,
    pub class_count: usize,
    pub is_ambivalent: bool,
    pub is_odd_order: bool,
    pub is_abelian: bool,
}

/// On-disk form: `{"order": N, "table": [[…]], "names": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct CayleyGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    names: Option<Vec<String>>,
    label: String,
    factors: Vec<CayleyGroup>,
    classes: ClassData,
    constants: ClassConstants,
}

impl PartialEq for CayleyGroup {
    fn eq(&self, other: &Self) -> bool {
        self.mul == other.mul && self.names == other.names
    }
}

impl Eq for CayleyGroup {}

impl CayleyGroup {
    /// Validates a table (row `g`, column `h` holding `g·h`) and derives all
    /// class data.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&e| e >= n)) {
            return Err(GroupError::MalformedTable);
        }
        let mul: Vec<u32> = table.iter().flatten().map(|&e| e as u32).collect();
        Self::from_flat(n, mul, None, format!("table:{n}"), Vec::new())
    }

    pub(crate) fn from_flat(
        order: usize,
        mul: Vec<u32>,
        names: Option<Vec<String>>,
        label: String,
        factors: Vec<CayleyGroup>,
    ) -> Result<Self, GroupError> {
        let n = order;
        let at = |a: usize, b: usize| mul[a * n + b] as usize;
        for g in 0..n {
            if at(0, g) != g || at(g, 0) != g {
                return Err(GroupError::NoIdentityAtZero);
            }
        }
        let mut seen = vec![0usize; n];
        for line in 0..n {
            let stamp = 2 * line + 1;
            for h in 0..n {
                let e = at(line, h);
                if seen[e] == stamp {
                    return Err(GroupError::NotLatinSquare(line));
                }
                seen[e] = stamp;
            }
            for g in 0..n {
                let e = at(g, line);
                if seen[e] == stamp + 1 {
                    return Err(GroupError::NotLatinSquare(line));
                }
                seen[e] = stamp + 1;
            }
        }
        let mut inv = vec![0u32; n];
        for g in 0..n {
            let h = (0..n).find(|&h| at(g, h) == 0).ok_or(GroupError::NoInverse(g))?;
            if at(h, g) != 0 {
                return Err(GroupError::NoInverse(g));
            }
            inv[g] = h as u32;
        }
        let assoc = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(GroupError::NotAssociative { a, b, c });
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(GroupError::NotAssociative { a, b, c });
                }
            }
        }
        if let Some(names) = &names {
            if names.len() != n {
                return Err(GroupError::NamesLength { got: names.len(), order: n });
            }
        }
        let classes = conjugacy(n, &mul, &inv);
        let constants = ClassConstants::build(n, &mul, &inv, &classes);
        Ok(CayleyGroup { order, mul, inv, names, label, factors, classes, constants })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Descriptor this group was built from (`table:N` for raw tables).
    pub fn label(&self) -> &str {
        &self.label
    }

    pub(crate) fn with_label(mut self, label: String) -> Self {
        self.label = label;
        self
    }

    /// Summands when the group was built as a direct sum, otherwise empty.
    pub fn factors(&self) -> &[CayleyGroup] {
        &self.factors
    }

    pub fn classes(&self) -> &ClassData {
        &self.classes
    }

    pub fn constants(&self) -> &ClassConstants {
        &self.constants
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.iter().map(|&e| e as usize).collect()).collect()
    }

    /// `g^h = h⁻¹ g h`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(self.inv(h), g), h)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn structural_counts(&self) -> StructuralCounts {
        let c = &self.classes;
        let inv_count = (0..self.order).filter(|&b| self.mul(b, b) == 0).count();
        let rc_count = (0..c.count()).filter(|&j| c.inverse_class[j] == j).count();
        StructuralCounts {
            inv_count,
            rc_count,
            class_count: c.count(),
            is_ambivalent: rc_count == c.count(),
            is_odd_order: self.order % 2 == 1,
            is_abelian: self.is_abelian(),
        }
    }

    /// `|Stab_n(g₁,…,gₙ)|`: tuples `(a₁,…,aₙ)` with `g₁^{a₁}⋯gₙ^{aₙ} = g₁⋯gₙ`.
    pub fn stab_count(&self, elements: &[usize]) -> Result<num_bigint::BigUint, GroupError> {
        constants::stab_count(self, elements)
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile { order: self.order, table: self.table(), names: self.names.clone() }
    }

    pub fn from_file(file: &GroupFile) -> Result<Self, GroupError> {
        if file.table.len() != file.order {
            return Err(GroupError::OrderMismatch { declared: file.order, actual: file.table.len() });
        }
        let g = Self::from_cayley_table(&file.table)?;
        let n = g.order;
        Self::from_flat(n, g.mul, file.names.clone(), g.label, Vec::new())
    }

    pub fn load(path: &Path) -> Result<Self, GroupError> {
        let text = std::fs::read_to_string(path)?;
        let file: GroupFile = serde_json::from_str(&text)?;
        Ok(Self::from_file(&file)?.with_label(format!("file:{}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("plain data")
    }
}

fn conjugacy(n: usize, mul: &[u32], inv: &[u32]) -> ClassData {
    let at = |a: usize, b: usize| mul[a * n + b] as usize;
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for g in 0..n {
        if class_of[g] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        for h in 0..n {
            let c = at(at(inv[h] as usize, g), h);
            if class_of[c] == usize::MAX {
                class_of[c] = id;
                members.push(c);
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    let inverse_class = classes.iter().map(|c| class_of[inv[c[0]] as usize]).collect();
    let square_class = classes.iter().map(|c| class_of[at(c[0], c[0])]).collect();
    let sizes = classes.iter().map(Vec::len).collect();
    ClassData { class_of, classes, inverse_class, square_class, sizes }
}
