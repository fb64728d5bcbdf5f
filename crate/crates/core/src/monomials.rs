//! Exponent vectors, the bitwise order `<=_2`, the `mod*` degree map and
//! good/bad monomial classification.
//!
//! Throughout, `q` and `s` are powers of two. For an exponent vector `d`
//! the set `{deg(i) : i <=_2 d}` is computed from the column weights
//! `w_t = #{j : bit t of d_j is set}`: it is exactly
//! `{ sum_t c_t 2^t : 0 <= c_t <= w_t }`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonomialError {
    #[error("exponent vectors have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("exponent vector {0} is not of type s={1} (deg_q must be at most s-1)")]
    NotTypeS(ExponentVector, u32),
    #[error("exponent {exp} out of range (must be < {bound})")]
    ExponentOutOfRange { exp: u32, bound: u32 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("enumeration needs about {needed} steps, over the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

/// A monomial exponent tuple `(d_1, ..., d_m)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn new(exps: Vec<u32>) -> Self {
        ExponentVector(exps)
    }

    pub fn zero(m: usize) -> Self {
        ExponentVector(vec![0; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    /// Total degree.
    pub fn deg(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `sum_j floor(d_j / q)`.
    pub fn deg_q(&self, q: u32) -> u32 {
        self.0.iter().map(|&d| d / q).sum()
    }

    /// Total number of set bits over all components.
    pub fn weight(&self) -> u32 {
        self.0.iter().map(|d| d.count_ones()).sum()
    }

    pub fn le2(&self, other: &ExponentVector) -> Result<bool, MonomialError> {
        if self.len() != other.len() {
            return Err(MonomialError::LengthMismatch(self.len(), other.len()));
        }
        Ok(self.0.iter().zip(&other.0).all(|(&a, &b)| a & !b == 0))
    }

    /// Every `i` with `i <=_2 self`, in lexicographic order.
    pub fn submasks(&self) -> Vec<ExponentVector> {
        let mut out = vec![Vec::with_capacity(self.len())];
        for &d in &self.0 {
            let subs = submasks_ascending(d);
            let mut next = Vec::with_capacity(out.len() * subs.len());
            for prefix in &out {
                for &a in &subs {
                    let mut v = prefix.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(ExponentVector).collect()
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, d) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

/// Graded lexicographic order: total degree first, then the tuples
/// compared lexicographically. Used for derivative vectors and bases alike.
pub fn graded_lex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Submasks of `d` in increasing numeric order.
pub fn submasks_ascending(d: u32) -> Vec<u32> {
    let mut subs = Vec::with_capacity(1 << d.count_ones());
    let mut a = d;
    loop {
        subs.push(a);
        if a == 0 {
            break;
        }
        a = (a - 1) & d;
    }
    subs.reverse();
    subs
}

/// All multi-indices `i` of length `m` with `deg(i) < s`, in graded-lex order.
/// There are `C(s+m-1, m)` of them.
pub fn multi_indices(m: usize, s: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..s {
        let mut layer = Vec::new();
        compositions(m, total, &mut Vec::with_capacity(m), &mut layer);
        out.extend(layer);
    }
    out
}

/// Multi-indices of length `m` with `deg(i) == total`, lexicographic.
pub fn multi_indices_of_degree(m: usize, total: u32) -> Vec<Vec<u32>> {
    let mut layer = Vec::new();
    compositions(m, total, &mut Vec::with_capacity(m), &mut layer);
    layer
}

fn compositions(m: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == m {
        prefix.push(remaining);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    if m == 0 {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for a in 0..=remaining {
        prefix.push(a);
        compositions(m, remaining - a, prefix, out);
        prefix.pop();
    }
}

/// The degree map onto `Z_{qs}`: `a` itself when `a < s`, otherwise the
/// unique `b` in `[s, qs)` with `a = b (mod qs - s)`.
pub fn mod_star(a: u64, q: u32, s: u32) -> u64 {
    let (q, s) = (u64::from(q), u64::from(s));
    if a < s {
        return a;
    }
    let period = q * s - s;
    if period == 0 {
        // q = 1 is not a field size; keep the map total anyway.
        return s;
    }
    (a - s) % period + s
}

/// The set `{deg(i) : i <=_2 d}` as a bitmap over `0..=deg(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSet {
    present: Vec<bool>,
}

impl DegreeSet {
    pub fn contains(&self, v: u64) -> bool {
        usize::try_from(v)
            .ok()
            .and_then(|v| self.present.get(v))
            .copied()
            .unwrap_or(false)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.present
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(|(v, _)| v as u64)
    }

    pub fn len(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max(&self) -> u64 {
        (self.present.len() - 1) as u64
    }
}

/// Bounded-multiplicity subset sum over bit positions: bit `t` may be used
/// between 0 and `w_t` times.
pub fn achievable_degrees(d: &ExponentVector) -> DegreeSet {
    let bits =
        d.0.iter()
            .map(|&x| 32 - x.leading_zeros())
            .max()
            .unwrap_or(0);
    let total = d.deg() as usize;
    let mut present = vec![false; total + 1];
    present[0] = true;
    let mut reach = 0usize;
    for t in 0..bits {
        let w = d.0.iter().filter(|&&x| x >> t & 1 == 1).count();
        if w == 0 {
            continue;
        }
        let step = 1usize << t;
        // Descending sweep so each copy of 2^t is used at most w times.
        for v in (0..=reach).rev() {
            if present[v] {
                for c in 1..=w {
                    present[v + c * step] = true;
                }
            }
        }
        reach += w * step;
    }
    DegreeSet { present }
}

/// Lexicographically smallest `i <=_2 d` whose degree satisfies `accept`.
pub fn find_witness(d: &ExponentVector, accept: impl Fn(u64) -> bool) -> Option<ExponentVector> {
    let m = d.len();
    // suffix[k]: achievable degrees of d_k, ..., d_{m-1}.
    let mut suffix = vec![
        DegreeSet {
            present: vec![true]
        };
        m + 1
    ];
    for k in (0..m).rev() {
        suffix[k] = achievable_degrees(&ExponentVector(d.0[k..].to_vec()));
    }
    let targets: Vec<u64> = suffix[0].iter().filter(|&v| accept(v)).collect();
    if targets.is_empty() {
        return None;
    }
    let mut acc = 0u64;
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let pick = submasks_ascending(d.0[k]).into_iter().find(|&a| {
            let base = acc + u64::from(a);
            targets
                .iter()
                .any(|&v| v >= base && suffix[k + 1].contains(v - base))
        })?;
        acc += u64::from(pick);
        out.push(pick);
    }
    Some(ExponentVector(out))
}

/// A certificate that a monomial is bad.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadnessWitness {
    pub witness: ExponentVector,
    pub reduced_degree: u64,
}

/// `d*`-badness for `s = 1`: some `i <=_2 d` has `mod*_q(deg i)` in `[threshold, q)`.
pub fn is_dstar_bad(d: &ExponentVector, q: u32, threshold: u32) -> Result<bool, MonomialError> {
    check_entries(d, q)?;
    Ok(classify_window(d, q, 1, threshold).is_some())
}

pub fn dstar_witness(
    d: &ExponentVector,
    q: u32,
    threshold: u32,
) -> Result<Option<BadnessWitness>, MonomialError> {
    check_entries(d, q)?;
    Ok(classify_window(d, q, 1, threshold))
}

/// `(threshold, s)*`-badness of a type-s vector.
pub fn is_ds_star_bad(
    d: &ExponentVector,
    q: u32,
    s: u32,
    threshold: u32,
) -> Result<bool, MonomialError> {
    Ok(ds_star_witness(d, q, s, threshold)?.is_some())
}

pub fn ds_star_witness(
    d: &ExponentVector,
    q: u32,
    s: u32,
    threshold: u32,
) -> Result<Option<BadnessWitness>, MonomialError> {
    check_entries(d, q * s)?;
    if d.deg_q(q) + 1 > s {
        return Err(MonomialError::NotTypeS(d.clone(), s));
    }
    Ok(classify_window(d, q, s, threshold))
}

fn in_window(v: u64, q: u32, s: u32, threshold: u32) -> bool {
    let reduced = mod_star(v, q, s);
    reduced >= u64::from(threshold) && reduced < u64::from(q) * u64::from(s)
}

fn classify_window(d: &ExponentVector, q: u32, s: u32, threshold: u32) -> Option<BadnessWitness> {
    let degrees = achievable_degrees(d);
    if !degrees.iter().any(|v| in_window(v, q, s, threshold)) {
        return None;
    }
    let witness = find_witness(d, |v| in_window(v, q, s, threshold))?;
    let reduced_degree = mod_star(u64::from(witness.deg()), q, s);
    Some(BadnessWitness {
        witness,
        reduced_degree,
    })
}

/// The plain mod-q variant: some `i <=_2 d` has `deg(i) = q - r (mod q)`.
pub fn is_qr_bad(d: &ExponentVector, q: u32, r: u32) -> Result<bool, MonomialError> {
    check_entries(d, q)?;
    if r == 0 || r > q {
        return Err(MonomialError::InvalidParameters(format!(
            "need 1 <= r <= q, got r={r}"
        )));
    }
    let target = u64::from(q - r);
    Ok(achievable_degrees(d)
        .iter()
        .any(|v| v % u64::from(q) == target))
}

fn check_entries(d: &ExponentVector, bound: u32) -> Result<(), MonomialError> {
    match d.0.iter().find(|&&x| x >= bound) {
        Some(&exp) => Err(MonomialError::ExponentOutOfRange { exp, bound }),
        None => Ok(()),
    }
}

fn check_qs(q: u32, s: u32) -> Result<(), MonomialError> {
    if q < 2 || !q.is_power_of_two() || s == 0 || !s.is_power_of_two() || s > q {
        return Err(MonomialError::InvalidParameters(format!(
            "q and s must be powers of two with s <= q, got q={q}, s={s}"
        )));
    }
    Ok(())
}

/// All type-s vectors in `Z_{qs}^m`, in graded-lex order.
pub fn type_s_vectors(m: usize, s: u32, q: u32) -> Vec<ExponentVector> {
    let qs = q * s;
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    loop {
        if cur.iter().map(|&x| x / q).sum::<u32>() < s {
            out.push(ExponentVector(cur.clone()));
        }
        let mut k = m;
        loop {
            if k == 0 {
                out.sort_by(|a, b| graded_lex_cmp(&a.0, &b.0));
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < qs {
                break;
            }
            cur[k] = 0;
        }
    }
}

/// The good set `F_q(m, s, threshold)` in graded-lex order. A threshold of
/// `qs` empties the bad window.
pub fn enumerate_good(
    m: usize,
    s: u32,
    q: u32,
    threshold: u32,
) -> Result<Vec<ExponentVector>, MonomialError> {
    check_qs(q, s)?;
    if threshold > q * s {
        return Err(MonomialError::InvalidParameters(format!(
            "threshold {threshold} exceeds qs={}",
            q * s
        )));
    }
    Ok(type_s_vectors(m, s, q)
        .into_iter()
        .filter(|d| classify_window(d, q, s, threshold).is_none())
        .collect())
}

/// Default cap on brute-force work, in elementary steps.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// Number of bad type-s vectors, found by listing every `i <=_2 d`
/// explicitly. Independent of the subset-sum characterization.
pub fn count_bad_bruteforce(
    m: usize,
    s: u32,
    q: u32,
    threshold: u32,
    budget: u128,
) -> Result<u64, MonomialError> {
    check_qs(q, s)?;
    check_bruteforce_budget(m, q * s, budget)?;
    let qs = u64::from(q * s);
    let mut bad = 0;
    for d in type_s_vectors(m, s, q) {
        let hit = d.submasks().iter().any(|i| {
            let v = mod_star(u64::from(i.deg()), q, s);
            v >= u64::from(threshold) && v < qs
        });
        bad += u64::from(hit);
    }
    Ok(bad)
}

/// Brute-force count of vectors in `Z_q^m` that are bad in the mod-q sense.
pub fn count_qr_bad_bruteforce(
    m: usize,
    q: u32,
    r: u32,
    budget: u128,
) -> Result<u64, MonomialError> {
    check_qs(q, 1)?;
    check_bruteforce_budget(m, q, budget)?;
    let mut bad = 0;
    for d in type_s_vectors(m, 1, q) {
        let hit = d
            .submasks()
            .iter()
            .any(|i| u64::from(i.deg()) % u64::from(q) == u64::from(q - r));
        bad += u64::from(hit);
    }
    Ok(bad)
}

// Listing all submasks of all vectors in Z_n^m costs (sum_{a<n} 2^popcount(a))^m = 3^{m log n}.
fn check_bruteforce_budget(m: usize, n: u32, budget: u128) -> Result<(), MonomialError> {
    let per_coord: u128 = (0..n).map(|a| 1u128 << a.count_ones()).sum();
    let needed = per_coord.checked_pow(m as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(MonomialError::BudgetExceeded { needed, budget });
    }
    Ok(())
}
