//! Multi-indices: exponent vectors used as monomial keys.

use num::bigint::BigInt;
use num::One;
use std::cmp::Ordering;
use std::fmt;

/// An exponent vector `(e_0, …, e_{v-1})`.
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically on the exponents. Every map keyed by `MultiIndex`
/// therefore iterates in a deterministic, degree-sorted order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    pub fn zero(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    /// The standard basis index `e_i` of the given length.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut e = vec![0; len];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    /// Total degree `|I|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.len(), other.len(), "multi-index length mismatch");
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` if any component would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        assert_eq!(self.len(), other.len(), "multi-index length mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Componentwise `self ≤ other`.
    pub fn leq(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Copy with one exponent bumped by `delta` (which may be negative;
    /// panics on underflow).
    pub fn with_step(&self, i: usize, delta: i64) -> MultiIndex {
        let mut e = self.0.clone();
        let v = e[i] as i64 + delta;
        assert!(v >= 0, "negative exponent");
        e[i] = v as u32;
        MultiIndex(e)
    }

    /// `I! = Π_k I_k!` as an exact integer.
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &e in &self.0 {
            for k in 2..=e as u64 {
                acc *= k;
            }
        }
        acc
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

/// All multi-indices of length `nvars` and total degree exactly `d`,
/// in lexicographically ascending order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill(&mut out, &mut cur, 0, d);
    out
}

fn fill(out: &mut Vec<MultiIndex>, cur: &mut Vec<u32>, pos: usize, rem: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = rem;
        out.push(MultiIndex(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in 0..=rem {
        cur[pos] = e;
        fill(out, cur, pos + 1, rem - e);
    }
    cur[pos] = 0;
}

/// All multi-indices of total degree `≤ d`, graded-lex ascending.
pub fn monomials_up_to_degree(nvars: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for k in 0..=d {
        out.extend(monomials_of_degree(nvars, k));
    }
    out
}

/// All multi-indices `R` with `R ≤ bound` componentwise, in odometer order.
pub fn multi_indices_below(bound: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::zero(bound.len())];
    for v in 0..bound.len() {
        let reach = bound.get(v);
        if reach == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (reach as usize + 1));
        for r in &out {
            for e in 0..=reach {
                next.push(r.with_step(v, i64::from(e)));
            }
        }
        out = next;
    }
    out
}
