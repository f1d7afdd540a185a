//! Breakpoint graphs `Gr(π)` and the alternating-cycle count `s(π)`.

use thiserror::Error;

use crate::signed::{HVertex, SignedPermutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("π° of {pi} has an odd number of cycles ({cycles})")]
    OddCircCycleCount { pi: String, cycles: usize },
}

/// Gray partner of `v`: `[v] ~ [−(v + 1)]`.
pub fn gray_partner(n: usize, v: HVertex) -> HVertex {
    v.succ(n).neg()
}

/// Black partner of `v`: the black edge `[π_i]~[π_{−(i+1)}]` read at `i = π⁻¹(v)`.
///
/// Defined through the index `i` on all of `H_n`, so both the positive-side
/// and negative-side copies of every edge are produced.
pub fn black_partner(pi: &SignedPermutation, inverse: &SignedPermutation, v: HVertex) -> HVertex {
    let n = pi.rank();
    pi.apply(inverse.apply(v).succ(n).neg())
}

/// An unordered edge, stored with the smaller vertex first.
pub type Edge = (HVertex, HVertex);

fn edge(a: HVertex, b: HVertex) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrowStyle {
    /// `⇝` gray, `↔` black.
    Unicode,
    /// `~` gray, `-` black.
    Ascii,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakpointGraph {
    n: usize,
    gray: Vec<Edge>,
    black: Vec<Edge>,
    cycles: Vec<Vec<HVertex>>,
}

impl BreakpointGraph {
    pub fn rank(&self) -> usize {
        self.n
    }

    /// The `n + 1` gray edges, sorted.
    pub fn gray_edges(&self) -> &[Edge] {
        &self.gray
    }

    /// The `n + 1` black edges, sorted.
    pub fn black_edges(&self) -> &[Edge] {
        &self.black
    }

    /// Alternating cycles as vertex walks `v₀ ⇝ v₁ ↔ v₂ ⇝ v₃ ↔ … ↔ v₀`,
    /// each starting at its least vertex, in order of those starting vertices.
    pub fn cycles(&self) -> &[Vec<HVertex>] {
        &self.cycles
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn render(&self, style: ArrowStyle) -> Vec<String> {
        let (g, b) = match style {
            ArrowStyle::Unicode => ("\u{21dd}", "\u{2194}"),
            ArrowStyle::Ascii => ("~", "-"),
        };
        self.cycles
            .iter()
            .map(|walk| {
                let mut out = String::new();
                for (i, v) in walk.iter().chain(std::iter::once(&walk[0])).enumerate() {
                    if i > 0 {
                        out.push_str(if i % 2 == 1 { g } else { b });
                    }
                    out.push_str(&format!("[{v}]"));
                }
                out
            })
            .collect()
    }
}

/// Builds `Gr(π)` from all `2n + 2` endpoints of each colour.
///
/// Panics if the edges generated from the two sides fail to pair up, which
/// would mean the successor map is broken.
pub fn build_graph(pi: &SignedPermutation) -> BreakpointGraph {
    let n = pi.rank();
    let inverse = pi.inverse();
    let mut gray = Vec::with_capacity(2 * n + 2);
    let mut black = Vec::with_capacity(2 * n + 2);
    for v in HVertex::all(n) {
        let g = gray_partner(n, v);
        let b = black_partner(pi, &inverse, v);
        assert_eq!(gray_partner(n, g), v, "gray edge at {v} is not symmetric");
        assert_eq!(black_partner(pi, &inverse, b), v, "black edge at {v} is not symmetric");
        gray.push(edge(v, g));
        black.push(edge(v, b));
    }
    for list in [&mut gray, &mut black] {
        list.sort();
        let before = list.len();
        list.dedup();
        assert_eq!(list.len() * 2, before, "edges do not pair up");
    }

    let size = 2 * n + 2;
    let mut seen = vec![false; size];
    let mut cycles = Vec::new();
    for start in HVertex::all(n) {
        if seen[start.index(n)] {
            continue;
        }
        let mut walk = Vec::new();
        let mut v = start;
        while !seen[v.index(n)] {
            let g = gray_partner(n, v);
            seen[v.index(n)] = true;
            seen[g.index(n)] = true;
            walk.push(v);
            walk.push(g);
            v = black_partner(pi, &inverse, g);
        }
        debug_assert_eq!(v, start);
        cycles.push(walk);
    }
    BreakpointGraph { n, gray, black, cycles }
}

/// Allocation-reusing cycle counter for the census hot loop.
///
/// Works on raw windows and never builds the graph.
#[derive(Debug, Default, Clone)]
pub struct CycleCounter {
    full: Vec<i32>,
    position: Vec<i32>,
    seen: Vec<bool>,
}

impl CycleCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// `s(π)` for a valid window; same walk as [`build_graph`] on signed integers.
    pub fn count(&mut self, window: &[i32]) -> usize {
        let n = window.len();
        // full[j] = π_{+j} for j in 0..=n, with π_{+0} = +0.
        self.full.clear();
        self.full.push(0);
        self.full.extend_from_slice(window);
        // position[m] = signed index j with π_{+j} = ±m, sign carried on j.
        self.position.clear();
        self.position.resize(n + 1, 0);
        for (j, &v) in window.iter().enumerate() {
            let j = (j + 1) as i32;
            self.position[v.unsigned_abs() as usize] = if v > 0 { j } else { -j };
        }
        self.seen.clear();
        self.seen.resize(2 * n + 2, false);
        let idx = |v: i32, neg_zero: bool| -> usize {
            if v > 0 || (v == 0 && !neg_zero) {
                v as usize
            } else {
                n + 1 + v.unsigned_abs() as usize
            }
        };
        let mut count = 0;
        for start in 0..2 * n + 2 {
            if self.seen[start] {
                continue;
            }
            count += 1;
            // Vertices as (value, is_minus_zero).
            let (mut v, mut vz) = if start <= n {
                (start as i32, false)
            } else {
                (-((start - n - 1) as i32), true)
            };
            loop {
                let i = idx(v, vz);
                if self.seen[i] {
                    break;
                }
                self.seen[i] = true;
                // gray partner: −(v + 1)
                let (g, gz) = self.neg_succ(n, v, vz);
                self.seen[idx(g, gz)] = true;
                // black partner of g: π(−(π⁻¹(g) + 1))
                let (p, pz) = self.pre_image(g, gz);
                let (q, qz) = self.neg_succ(n, p, pz);
                let (b, bz) = self.image(q, qz);
                v = b;
                vz = bz;
            }
        }
        count
    }

    // −(v + 1) for vertex (v, minus-zero flag).
    fn neg_succ(&self, n: usize, v: i32, vz: bool) -> (i32, bool) {
        let n = n as i32;
        let is_plus = v > 0 || (v == 0 && !vz);
        if is_plus {
            if v == n {
                (0, true)
            } else {
                (-(v + 1), false)
            }
        } else if v == 0 {
            (n, false)
        } else if v == -1 {
            (0, false)
        } else {
            (-(v + 1), false)
        }
    }

    fn image(&self, v: i32, vz: bool) -> (i32, bool) {
        if v == 0 {
            return (0, vz);
        }
        let w = self.full[v.unsigned_abs() as usize];
        (if v > 0 { w } else { -w }, false)
    }

    fn pre_image(&self, v: i32, vz: bool) -> (i32, bool) {
        if v == 0 {
            return (0, vz);
        }
        let j = self.position[v.unsigned_abs() as usize];
        (if v > 0 { j } else { -j }, false)
    }
}

/// `s(π)`, the number of alternating cycles of `Gr(π)`.
pub fn s_count(pi: &SignedPermutation) -> usize {
    CycleCounter::new().count(pi.window())
}

/// `s(π)` computed as half the cycle count of `π°`.
pub fn s_via_circ(pi: &SignedPermutation) -> Result<usize, GraphError> {
    let cycles = pi.pi_circ().cycle_count();
    if cycles % 2 != 0 {
        return Err(GraphError::OddCircCycleCount { pi: pi.to_string(), cycles });
    }
    Ok(cycles / 2)
}

/// One rendered walk per alternating cycle, gray-first from the least vertex.
pub fn arrow_view(pi: &SignedPermutation, style: ArrowStyle) -> Vec<String> {
    build_graph(pi).render(style)
}
