//! Class constants `c_{i₁…iₙ;j}` by convolution of the two-fold tensor.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{CayleyGroup, ClassData, GroupError};

/// Largest `|G|ⁿ` enumerated by [`stab_count`].
pub const STAB_LIMIT: u64 = 10_000_000;

/// `two_fold[(i·C + j)·C + k] = c_{i,j;k}`: pairs `(a, b) ∈ Ω_i × Ω_j` with
/// `ab = y_k` for the fixed representative `y_k` of `Ω_k`.
///
/// Entries are bounded by `|G|`, so machine integers hold them exactly; all
/// folds beyond two factors are carried out in `BigUint`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassConstants {
    classes: usize,
    sizes: Vec<usize>,
    two_fold: Vec<u64>,
}

impl ClassConstants {
    pub(crate) fn build(n: usize, mul: &[u32], inv: &[u32], data: &ClassData) -> Self {
        let c = data.count();
        let mut two_fold = vec![0u64; c * c * c];
        for k in 0..c {
            let y = data.representative(k);
            for a in 0..n {
                let b = mul[inv[a] as usize * n + y] as usize;
                let (i, j) = (data.class_of[a], data.class_of[b]);
                two_fold[(i * c + j) * c + k] += 1;
            }
        }
        ClassConstants { classes: c, sizes: data.sizes.clone(), two_fold }
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn two_fold(&self, i: usize, j: usize, k: usize) -> u64 {
        self.two_fold[(i * self.classes + j) * self.classes + k]
    }

    fn check(&self, index: usize) -> Result<(), GroupError> {
        if index >= self.classes {
            return Err(GroupError::ClassIndexOutOfRange { index, classes: self.classes });
        }
        Ok(())
    }

    /// Appends one factor from class `i`: `out[s] = Σ_r v[r]·c_{r,i;s}`.
    pub fn fold(&self, v: &[BigUint], i: usize) -> Vec<BigUint> {
        let c = self.classes;
        let mut out = vec![BigUint::zero(); c];
        for (r, vr) in v.iter().enumerate() {
            if vr.is_zero() {
                continue;
            }
            for (s, slot) in out.iter_mut().enumerate() {
                let t = self.two_fold(r, i, s);
                if t != 0 {
                    *slot += vr * t;
                }
            }
        }
        out
    }

    /// `c_{i₁…iₙ;j}` for every target `j`; the empty product is the identity.
    pub fn vector(&self, indices: &[usize]) -> Result<Vec<BigUint>, GroupError> {
        for &i in indices {
            self.check(i)?;
        }
        let mut v = vec![BigUint::zero(); self.classes];
        v[0] = BigUint::one();
        for &i in indices {
            v = self.fold(&v, i);
        }
        Ok(v)
    }

    /// `c_{i₁…iₙ;j}`.
    pub fn get(&self, indices: &[usize], target: usize) -> Result<BigUint, GroupError> {
        self.check(target)?;
        Ok(self.vector(indices)?.swap_remove(target))
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }
}

impl CayleyGroup {
    /// `c_{i₁…iₙ;j}(G)`.
    pub fn class_constants(&self, indices: &[usize], target: usize) -> Result<BigUint, GroupError> {
        self.constants().get(indices, target)
    }
}

pub(super) fn stab_count(g: &CayleyGroup, elements: &[usize]) -> Result<BigUint, GroupError> {
    let order = g.order();
    let n = elements.len();
    for &e in elements {
        if e >= order {
            return Err(GroupError::ElementOutOfRange { index: e, order });
        }
    }
    let work = (order as u64).checked_pow(n as u32).filter(|&w| w <= STAB_LIMIT);
    if work.is_none() {
        return Err(GroupError::InstanceTooLarge { order, n, limit: STAB_LIMIT });
    }
    let target = elements.iter().fold(0, |acc, &e| g.mul(acc, e));
    let mut tuple = vec![0usize; n];
    let mut count = 0u64;
    loop {
        let product = elements.iter().zip(&tuple).fold(0, |acc, (&e, &a)| g.mul(acc, g.conjugate(e, a)));
        if product == target {
            count += 1;
        }
        let mut i = 0;
        while i < n {
            tuple[i] += 1;
            if tuple[i] < order {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok(BigUint::from(count))
}
