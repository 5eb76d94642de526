//! Submonoids of ℕ and numerical semigroups.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumsgError {
    #[error("generator set is empty")]
    Empty,
    #[error("generators must be positive")]
    NonPositive,
    #[error("generators have gcd {0}, expected 1")]
    NotNormalized(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumSubmonoid {
    /// Sorted, deduplicated generators.
    pub generators: Vec<u64>,
    pub d: u64,
    /// Generators divided by `d`.
    pub normalized: Vec<u64>,
}

impl NumSubmonoid {
    pub fn denormalize(&self) -> Vec<u64> {
        self.normalized.iter().map(|g| g * self.d).collect()
    }

    pub fn contains(&self, n: u64) -> bool {
        membership(&self.generators, n)
    }
}

pub fn normalize(generators: &[u64]) -> Result<NumSubmonoid, NumsgError> {
    if generators.is_empty() {
        return Err(NumsgError::Empty);
    }
    if generators.contains(&0) {
        return Err(NumsgError::NonPositive);
    }
    let mut gens = generators.to_vec();
    gens.sort_unstable();
    gens.dedup();
    let d = gens.iter().fold(0, |acc, g| acc.gcd(g));
    let normalized = gens.iter().map(|g| g / d).collect();
    Ok(NumSubmonoid {
        generators: gens,
        d,
        normalized,
    })
}

/// Whether `n` is a nonnegative integer combination of `generators`.
pub fn membership(generators: &[u64], n: u64) -> bool {
    if n == 0 {
        return true;
    }
    let gens: Vec<u64> = generators.iter().copied().filter(|&g| g > 0).collect();
    if gens.is_empty() {
        return false;
    }
    let n = n as usize;
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for i in 1..=n {
        reach[i] = gens
            .iter()
            .any(|&g| (g as usize) <= i && reach[i - g as usize]);
    }
    reach[n]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub gaps: Vec<u64>,
    /// Largest gap, or -1 when there is none.
    pub frobenius: i64,
}

/// Gaps of a numerical semigroup given by gcd-1 generators.
pub fn gaps(generators: &[u64]) -> Result<GapReport, NumsgError> {
    let s = normalize(generators)?;
    if s.d != 1 {
        return Err(NumsgError::NotNormalized(s.d));
    }
    let g = &s.generators;
    let min = g[0] as usize;
    let cap = if g.len() >= 2 {
        10 * g[0] * g[1]
    } else {
        10 * g[0]
    } as usize;
    let mut reach = vec![false; cap + 1];
    reach[0] = true;
    let mut run = 1;
    let mut out = Vec::new();
    let mut i = 1;
    // A run of `min` consecutive members means every larger integer is a member.
    while run < min && i <= cap {
        reach[i] = g
            .iter()
            .any(|&x| (x as usize) <= i && reach[i - x as usize]);
        if reach[i] {
            run += 1;
        } else {
            run = 0;
            out.push(i as u64);
        }
        i += 1;
    }
    let frobenius = out.last().map_or(-1, |&x| x as i64);
    Ok(GapReport {
        gaps: out,
        frobenius,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnihilatorAnalysis {
    pub window: u64,
    /// Sums `a + b ≤ window` of members that are missing from the set.
    pub closure_violations: Vec<(u64, u64)>,
    /// Minimal generators of the set as seen inside the window.
    pub generators: Vec<u64>,
    pub d: u64,
    pub normalized: Vec<u64>,
    /// Gaps of the normalized semigroup, when the window pins them down.
    pub normalized_gaps: Option<GapReport>,
}

impl AnnihilatorAnalysis {
    pub fn is_closed(&self) -> bool {
        self.closure_violations.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Structural analysis of a truncated submonoid `points ⊆ [0, window]`.
pub fn analyze_annihilator(points: &[u64], window: u64) -> AnnihilatorAnalysis {
    let mut set: Vec<u64> = points.iter().copied().filter(|&p| p <= window).collect();
    set.sort_unstable();
    set.dedup();
    let member = |x: u64| set.binary_search(&x).is_ok();
    let mut violations = Vec::new();
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i..] {
            if a + b <= window && !member(a + b) {
                violations.push((a, b));
            }
        }
    }
    let mut generators: Vec<u64> = Vec::new();
    for &p in set.iter().filter(|&&p| p > 0) {
        if !membership(&generators, p) {
            generators.push(p);
        }
    }
    let d = generators.iter().fold(0u64, |acc, g| acc.gcd(g));
    let normalized: Vec<u64> = if d == 0 {
        Vec::new()
    } else {
        generators.iter().map(|g| g / d).collect()
    };
    let normalized_gaps = if normalized.is_empty() {
        None
    } else {
        gaps(&normalized).ok()
    };
    AnnihilatorAnalysis {
        window,
        closure_violations: violations,
        generators,
        d: d.max(1),
        normalized,
        normalized_gaps,
    }
}
