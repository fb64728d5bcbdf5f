//! Exact counting of bad monomials through the transfer-matrix recurrence,
//! the dominant eigenvalue of that matrix, the bit-level procedures behind
//! the recurrence, and rate/distance/redundancy calculators.
//!
//! `S_j(l)` is the set of `d` in `Z_{2^l}^m` having some `i <=_2 d` with
//! `deg(i) = (2^l - r) + j 2^l`; `s_j(l) = |S_j(l)|`. One step of the
//! recurrence is `s(l + 1) = A_m s(l)`.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monomials::{achievable_degrees, enumerate_good, type_s_vectors, ExponentVector};
use crate::polynomial::symbol_len;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CountingError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("brute force over {needed} vectors exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("power iteration did not converge in {0} iterations")]
    NoConvergence(usize),
    #[error("epsilon {eps} outside the valid range for {family}")]
    EpsilonOutOfRange { eps: f64, family: String },
}

/// Binomial coefficient as u64; zero outside `0..=n`.
pub fn binomial(n: u64, k: i64) -> u64 {
    if k < 0 || k as u64 > n {
        return 0;
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * u128::from(n - t) / u128::from(t + 1);
    }
    acc as u64
}

/// The matrix `A_m` of the recurrence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferMatrix {
    pub m: usize,
    pub entries: Vec<Vec<u64>>,
}

impl TransferMatrix {
    /// Row `j`: `C(m, >= 2j+1)` in column 0, then `C(m, 2j + 1 - c)` in column `c >= 1`.
    pub fn new(m: usize) -> Result<Self, CountingError> {
        if m < 2 {
            return Err(CountingError::InvalidParameters(format!(
                "need m >= 2, got {m}"
            )));
        }
        let mu = m as u64;
        let entries = (0..m as i64)
            .map(|j| {
                (0..m as i64)
                    .map(|c| {
                        if c == 0 {
                            (2 * j + 1..=m as i64).map(|t| binomial(mu, t)).sum()
                        } else {
                            binomial(mu, 2 * j + 1 - c)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(TransferMatrix { m, entries })
    }

    pub fn apply(&self, v: &[BigUint]) -> Vec<BigUint> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(&a, x)| x * a).sum())
            .collect()
    }
}

/// `(s_0(l), ..., s_{m-1}(l))` for fixed `m` and `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceState {
    pub m: usize,
    pub r: u32,
    pub ell: u32,
    pub counts: Vec<BigUint>,
}

fn check_mr(m: usize, r: u32) -> Result<(), CountingError> {
    if m < 2 || r == 0 || r as usize > m {
        return Err(CountingError::InvalidParameters(format!(
            "need m >= 2 and 1 <= r <= m, got m={m}, r={r}"
        )));
    }
    Ok(())
}

/// Smallest `l` with `2^l >= max(r, 2)`.
pub fn base_ell(r: u32) -> u32 {
    let mut ell = 1;
    while (1u32 << ell) < r.max(2) {
        ell += 1;
    }
    ell
}

/// Whether `d` (entries below `2^ell`) lies in `S_j(ell)`.
pub fn in_s_j(d: &ExponentVector, ell: u32, r: u32, j: u32) -> bool {
    let q = 1u64 << ell;
    match q.checked_sub(u64::from(r)) {
        Some(base) => achievable_degrees(d).contains(base + u64::from(j) * q),
        None => false,
    }
}

/// Exact `s_j(ell)` for all `j < m` by enumerating `Z_{2^ell}^m`.
pub fn bruteforce_base_state(
    m: usize,
    r: u32,
    ell: u32,
    budget: u128,
) -> Result<RecurrenceState, CountingError> {
    check_mr(m, r)?;
    if ell == 0 || ell > 16 || r > (1 << ell) {
        return Err(CountingError::InvalidParameters(format!(
            "need r <= 2^ell, got r={r}, ell={ell}"
        )));
    }
    let needed = 1u128.checked_shl(ell * m as u32).unwrap_or(u128::MAX);
    if ell as usize * m >= 128 || needed > budget {
        return Err(CountingError::BudgetExceeded { needed, budget });
    }
    let q = 1u32 << ell;
    let mut counts = vec![0u64; m];
    for d in type_s_vectors(m, 1, q) {
        let degrees = achievable_degrees(&d);
        let base = u64::from(q - r);
        for (j, c) in counts.iter_mut().enumerate() {
            if degrees.contains(base + j as u64 * u64::from(q)) {
                *c += 1;
            }
        }
    }
    Ok(RecurrenceState {
        m,
        r,
        ell,
        counts: counts.into_iter().map(BigUint::from).collect(),
    })
}

pub fn iterate_recurrence(
    state: &RecurrenceState,
    target_ell: u32,
) -> Result<RecurrenceState, CountingError> {
    if target_ell < state.ell {
        return Err(CountingError::Precondition(format!(
            "target ell {target_ell} is below the current ell {}",
            state.ell
        )));
    }
    let a = TransferMatrix::new(state.m)?;
    let mut counts = state.counts.clone();
    for _ in state.ell..target_ell {
        counts = a.apply(&counts);
    }
    Ok(RecurrenceState {
        counts,
        ell: target_ell,
        ..state.clone()
    })
}

/// States for every `l` from the brute-forced base up to `ell_max`.
pub fn recurrence_table(
    m: usize,
    r: u32,
    ell_max: u32,
    budget: u128,
) -> Result<Vec<RecurrenceState>, CountingError> {
    let mut state = bruteforce_base_state(m, r, base_ell(r), budget)?;
    let mut out = vec![state.clone()];
    while state.ell < ell_max {
        state = iterate_recurrence(&state, state.ell + 1)?;
        out.push(state.clone());
    }
    Ok(out)
}

/// Clears bits of `i`, most significant level first, to lower its degree
/// by exactly `(j - l) 2^ell`. The result is `<=_2 i`.
pub fn weight_reduction(
    i: &ExponentVector,
    j: u32,
    l: u32,
    ell: u32,
) -> Result<ExponentVector, CountingError> {
    if l > j {
        return Err(CountingError::Precondition(format!(
            "need l <= j, got l={l}, j={j}"
        )));
    }
    if let Some(&x) = i.exps().iter().find(|&&x| u64::from(x) >= 1u64 << ell) {
        return Err(CountingError::Precondition(format!(
            "entry {x} is not below 2^{ell}"
        )));
    }
    let drop = u64::from(j - l) << ell;
    if u64::from(i.deg()) < drop {
        return Err(CountingError::Precondition(format!(
            "deg(i) = {} is below (j-l) 2^ell = {drop}",
            i.deg()
        )));
    }
    let mut a = i.exps().to_vec();
    let mut delta = i64::from(j - l);
    let mut h = ell;
    loop {
        if h == 0 {
            if delta == 0 {
                return Ok(ExponentVector(a));
            }
            return Err(CountingError::Precondition(
                "procedure ran out of bits".into(),
            ));
        }
        h -= 1;
        delta *= 2;
        let column: i64 = a.iter().map(|&x| i64::from(x >> h & 1)).sum();
        let slack = delta - column;
        if slack > 0 {
            for x in a.iter_mut() {
                *x &= !(1 << h);
            }
            delta = slack;
        } else {
            let mut need = delta;
            for x in a.iter_mut() {
                if need == 0 {
                    break;
                }
                if *x >> h & 1 == 1 {
                    *x &= !(1 << h);
                    need -= 1;
                }
            }
            return Ok(ExponentVector(a));
        }
    }
}

/// Splits every entry into its bit `ell-1` and the remaining low bits.
pub fn drop_and_lead(
    d: &ExponentVector,
    ell: u32,
) -> Result<(Vec<u32>, ExponentVector), CountingError> {
    if ell == 0 {
        return Err(CountingError::InvalidParameters(
            "ell must be positive".into(),
        ));
    }
    if let Some(&x) = d.exps().iter().find(|&&x| u64::from(x) >= 1u64 << ell) {
        return Err(CountingError::Precondition(format!(
            "entry {x} is not below 2^{ell}"
        )));
    }
    let lead = d.exps().iter().map(|&x| x >> (ell - 1)).collect();
    let dropped = d
        .exps()
        .iter()
        .map(|&x| x & ((1 << (ell - 1)) - 1))
        .collect();
    Ok((lead, ExponentVector(dropped)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub m: usize,
    pub lambda_m: f64,
    /// `m - log2(lambda_m)`.
    pub gap: f64,
    pub p_m: f64,
    pub bounds_ok: bool,
    pub iterations: usize,
    /// Newton refinement on the characteristic polynomial, for `m <= 4`.
    pub charpoly_root: Option<f64>,
}

/// `-log2(1 - 2^{-m c}) / c` with `c = ceil(log2 m)`.
pub fn p_m(m: usize) -> f64 {
    let c = (m as f64).log2().ceil();
    -(-(2f64.powf(-(m as f64) * c))).ln_1p() / std::f64::consts::LN_2 / c
}

/// `-log2(1 - 2^{-m})`, the upper end of the gap sandwich.
pub fn gap_upper(m: usize) -> f64 {
    -(-(2f64.powi(-(m as i32)))).ln_1p() / std::f64::consts::LN_2
}

pub const POWER_ITERATION_CAP: usize = 1_000_000;

/// Dominant eigenvalue by power iteration from the all-ones vector, stopping
/// when two successive estimates agree to relative tolerance `tol`.
pub fn top_eigenvalue(a: &TransferMatrix, tol: f64) -> Result<SpectralReport, CountingError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(CountingError::InvalidParameters(
            "tol must be positive".into(),
        ));
    }
    let m = a.m;
    let mat: Vec<Vec<f64>> = a
        .entries
        .iter()
        .map(|row| row.iter().map(|&x| x as f64).collect())
        .collect();
    let mut x = vec![1.0f64; m];
    let mut lambda = 0.0f64;
    let mut calm = 0;
    let mut iterations = 0;
    while iterations < POWER_ITERATION_CAP {
        iterations += 1;
        let y: Vec<f64> = mat
            .iter()
            .map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum())
            .collect();
        let norm = y.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let prev_norm = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let est = norm / prev_norm;
        x = y.iter().map(|v| v / norm).collect();
        if (est - lambda).abs() <= tol * est {
            calm += 1;
            if calm >= 3 {
                lambda = est;
                break;
            }
        } else {
            calm = 0;
        }
        lambda = est;
    }
    if calm < 3 {
        return Err(CountingError::NoConvergence(iterations));
    }
    let gap = m as f64 - lambda.log2();
    let p = p_m(m);
    let lo = 2f64.powi(m as i32 - 1);
    let hi = 2f64.powi(m as i32);
    let slack = 1e-12;
    let bounds_ok = lambda >= lo * (1.0 - slack)
        && lambda <= hi * (1.0 + slack)
        && p <= gap * (1.0 + 1e-6)
        && gap <= gap_upper(m) * (1.0 + 1e-6);
    let charpoly_root = (m <= 4).then(|| newton_on_charpoly(a, lambda));
    Ok(SpectralReport {
        m,
        lambda_m: lambda,
        gap,
        p_m: p,
        bounds_ok,
        iterations,
        charpoly_root,
    })
}

/// Characteristic polynomial coefficients, highest degree first, by
/// Faddeev-LeVerrier in exact integers.
pub fn characteristic_polynomial(a: &TransferMatrix) -> Vec<i128> {
    let n = a.m;
    let mat: Vec<Vec<i128>> = a
        .entries
        .iter()
        .map(|row| row.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut coeffs = vec![1i128];
    let mut mk = vec![vec![0i128; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|t| mat[i][t] * mk[t][j]).sum();
            }
            next[i][i] += coeffs[k - 1];
        }
        mk = next;
        let am: i128 = (0..n)
            .map(|i| (0..n).map(|t| mat[i][t] * mk[t][i]).sum::<i128>())
            .sum();
        coeffs.push(-am / k as i128);
    }
    coeffs
}

fn newton_on_charpoly(a: &TransferMatrix, start: f64) -> f64 {
    let c: Vec<f64> = characteristic_polynomial(a)
        .iter()
        .map(|&x| x as f64)
        .collect();
    let mut x = start;
    for _ in 0..100 {
        let (mut p, mut dp) = (0.0, 0.0);
        for &ci in &c {
            dp = dp * x + p;
            p = p * x + ci;
        }
        if dp == 0.0 {
            break;
        }
        let step = p / dp;
        x -= step;
        if step.abs() <= 1e-15 * x.abs() {
            break;
        }
    }
    x
}

/// Spectral data for a single `m`, computed to near machine precision.
pub fn spectral_report(m: usize) -> Result<SpectralReport, CountingError> {
    top_eigenvalue(&TransferMatrix::new(m)?, 1e-15)
}

pub fn lambda(m: usize) -> Result<f64, CountingError> {
    Ok(spectral_report(m)?.lambda_m)
}

fn check_code_params(m: usize, s: u32, q: u32) -> Result<(), CountingError> {
    if m == 0 || q < 2 || !q.is_power_of_two() || s == 0 || !s.is_power_of_two() || s > q {
        return Err(CountingError::InvalidParameters(format!(
            "need m >= 1 and powers of two s <= q, got m={m}, s={s}, q={q}"
        )));
    }
    Ok(())
}

/// Good monomials over `C(s+m-1, m) q^m`.
pub fn exact_rate(m: usize, s: u32, q: u32, threshold: u32) -> Result<Ratio<u64>, CountingError> {
    check_code_params(m, s, q)?;
    let good = enumerate_good(m, s, q, threshold)
        .map_err(|e| CountingError::InvalidParameters(e.to_string()))?
        .len() as u64;
    let total = symbol_len(m, s) as u64 * u64::from(q).pow(m as u32);
    Ok(Ratio::new(good, total))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceBound {
    /// Minimum number of nonzero symbols in a nonzero codeword.
    pub absolute: u64,
    /// `ceil((r-s+1)/s) (q-s) / q^2`.
    pub relative: (u64, u64),
}

impl DistanceBound {
    pub fn relative_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.relative.0, self.relative.1)
    }
}

fn ceil_div_signed(a: i64, b: i64) -> i64 {
    let q = a.div_euclid(b);
    if a.rem_euclid(b) == 0 {
        q
    } else {
        q + 1
    }
}

pub fn distance_lower_bound(
    m: usize,
    s: u32,
    q: u32,
    r: u32,
) -> Result<DistanceBound, CountingError> {
    check_code_params(m, s, q)?;
    if m < 2 || r == 0 || r >= q * s {
        return Err(CountingError::InvalidParameters(format!(
            "need m >= 2 and 1 <= r < qs, got m={m}, r={r}"
        )));
    }
    let (r, s64, q64) = (i64::from(r), i64::from(s), u64::from(q));
    let layers = ceil_div_signed(r + 1 - s64, s64).max(0) as u64;
    let absolute = 1 + layers * (q64 - u64::from(s)) * q64.pow(m as u32 - 2);
    let rel = Ratio::new(layers * (q64 - u64::from(s)), q64 * q64);
    Ok(DistanceBound {
        absolute,
        relative: (*rel.numer(), *rel.denom()),
    })
}

/// Exponent families for redundancy `n^delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// PIR from lifted multiplicity codes.
    LiftedMultiplicity,
    LiftedMultiplicityBinary,
    /// PIR from plain multiplicity codes.
    Multiplicity,
    MultiplicityBinary,
    /// PIR from lifted RS codes: the lifted multiplicity exponent at `(m-1)/m`.
    LiftedRs,
    LiftedRsBinary,
    /// Batch codes from lifted RS codes.
    BatchLiftedRs,
    /// Batch codes from lifted multiplicity PIR codes.
    BatchFromPir,
    BatchFromPirBinary,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::LiftedMultiplicity,
        Family::LiftedMultiplicityBinary,
        Family::Multiplicity,
        Family::MultiplicityBinary,
        Family::LiftedRs,
        Family::LiftedRsBinary,
        Family::BatchLiftedRs,
        Family::BatchFromPir,
        Family::BatchFromPirBinary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::LiftedMultiplicity => "lifted-multiplicity",
            Family::LiftedMultiplicityBinary => "lifted-multiplicity-binary",
            Family::Multiplicity => "multiplicity",
            Family::MultiplicityBinary => "multiplicity-binary",
            Family::LiftedRs => "lifted-rs",
            Family::LiftedRsBinary => "lifted-rs-binary",
            Family::BatchLiftedRs => "batch-lifted-rs",
            Family::BatchFromPir => "batch-from-pir",
            Family::BatchFromPirBinary => "batch-from-pir-binary",
        }
    }

    /// Whether `m` is admissible for `eps`.
    pub fn admits(self, eps: f64, m: usize) -> bool {
        let mf = m as f64;
        if m < 2 || !(eps > 0.0 && eps < 1.0) {
            return false;
        }
        let tiny = 1e-12;
        match self {
            Family::BatchLiftedRs => eps > (mf - 2.0) / mf + tiny && eps < (mf - 1.0) / mf - tiny,
            // (1 + eps) / 2 <= (m - 1) / m, i.e. m >= 2 / (1 - eps).
            Family::BatchFromPir | Family::BatchFromPirBinary => {
                m >= 3 && (1.0 + eps) / 2.0 <= (mf - 1.0) / mf + tiny
            }
            _ => eps <= (mf - 1.0) / mf + tiny,
        }
    }

    /// The exponent at a single admissible `m`.
    pub fn exponent(self, eps: f64, m: usize) -> Result<f64, CountingError> {
        if !self.admits(eps, m) {
            return Err(CountingError::EpsilonOutOfRange {
                eps,
                family: format!("{} at m={m}", self.name()),
            });
        }
        let mf = m as f64;
        let ll = lambda(m)?.log2();
        Ok(match self {
            Family::LiftedMultiplicity => delta_lm_raw(eps, mf, ll),
            Family::LiftedMultiplicityBinary => delta_lm_binary_raw(eps, mf, ll),
            Family::Multiplicity => (mf - 1.0) / mf + eps / (mf - 1.0),
            Family::MultiplicityBinary => (2.0 * mf - 1.0) / (2.0 * mf) + eps / (2.0 * mf - 2.0),
            Family::LiftedRs => delta_lm_raw((mf - 1.0) / mf, mf, ll),
            Family::LiftedRsBinary => delta_lm_binary_raw((mf - 1.0) / mf, mf, ll),
            Family::BatchLiftedRs => (mf - ll) * eps + (mf - 1.0) * ll / mf - mf + 2.0,
            Family::BatchFromPir => delta_lm_raw((1.0 + eps) / 2.0, mf, ll),
            Family::BatchFromPirBinary => delta_lm_binary_raw((1.0 + eps) / 2.0, mf, ll),
        })
    }
}

fn delta_lm_raw(eps: f64, m: f64, log_lambda: f64) -> f64 {
    (m - 1.0) / m + (1.0 + log_lambda - m) / (m - 1.0) * eps
}

fn delta_lm_binary_raw(eps: f64, m: f64, log_lambda: f64) -> f64 {
    (2.0 * m - 1.0) / (2.0 * m) + (1.0 + 2.0 * log_lambda - 2.0 * m) / (2.0 * m - 2.0) * eps
}

/// `delta_LM(eps, m)`.
pub fn delta_lm(eps: f64, m: usize) -> Result<f64, CountingError> {
    Family::LiftedMultiplicity.exponent(eps, m)
}

/// `delta_LRS(m)`, independent of `eps`.
pub fn delta_lrs(m: usize) -> Result<f64, CountingError> {
    Family::LiftedMultiplicity.exponent((m as f64 - 1.0) / m as f64, m)
}

/// Slope of `delta_LM(., m)` in `eps`.
pub fn delta_lm_slope(m: usize) -> Result<f64, CountingError> {
    let mf = m as f64;
    Ok((1.0 + lambda(m)?.log2() - mf) / (mf - 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RedundancyReport {
    pub family: Family,
    pub epsilon: f64,
    pub best_m: usize,
    pub exponent: f64,
    /// Every admissible `(m, exponent)` that was compared.
    pub candidates: Vec<(usize, f64)>,
}

/// Minimizes the family's exponent over admissible `m` in `2..=m_max`.
pub fn optimize_redundancy(
    family: Family,
    eps: f64,
    m_max: usize,
) -> Result<RedundancyReport, CountingError> {
    let mut candidates = Vec::new();
    for m in 2..=m_max {
        if family.admits(eps, m) {
            candidates.push((m, family.exponent(eps, m)?));
        }
    }
    let &(best_m, exponent) = candidates
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| CountingError::EpsilonOutOfRange {
            eps,
            family: family.name().into(),
        })?;
    Ok(RedundancyReport {
        family,
        epsilon: eps,
        best_m,
        exponent,
        candidates,
    })
}

/// Exact count of vectors in `Z_q^m` bad for threshold `q - r` (s = 1).
pub fn count_dstar_bad(m: usize, q: u32, r: u32) -> Result<u64, CountingError> {
    check_code_params(m, 1, q)?;
    let good = enumerate_good(m, 1, q, q - r)
        .map_err(|e| CountingError::InvalidParameters(e.to_string()))?;
    Ok(u64::from(q).pow(m as u32) - good.len() as u64)
}

pub fn biguint_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

pub fn is_zero_state(s: &RecurrenceState) -> bool {
    s.counts.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_matrix() {
        assert_eq!(
            TransferMatrix::new(2).unwrap().entries,
            vec![vec![3, 1], vec![0, 1]]
        );
        let a3 = TransferMatrix::new(3).unwrap();
        assert_eq!(a3.entries[0][0], 7);
        for m in 2..8 {
            assert_eq!(TransferMatrix::new(m).unwrap().entries[m - 1][m - 1], 1);
        }
    }

    #[test]
    fn weight_reduction_worked_example() {
        let a = weight_reduction(&ExponentVector(vec![3, 3]), 1, 0, 2).unwrap();
        assert_eq!(a, ExponentVector(vec![1, 1]));
        let a = weight_reduction(&ExponentVector(vec![3, 2]), 1, 0, 2).unwrap();
        assert_eq!(a.deg(), 1);
        let id = weight_reduction(&ExponentVector(vec![3, 2]), 1, 1, 2).unwrap();
        assert_eq!(id, ExponentVector(vec![3, 2]));
    }

    #[test]
    fn charpoly_m2() {
        // (x - 3)(x - 1)
        assert_eq!(
            characteristic_polynomial(&TransferMatrix::new(2).unwrap()),
            vec![1, -4, 3]
        );
    }

    #[test]
    fn distance_examples() {
        let b = distance_lower_bound(2, 2, 8, 4).unwrap();
        assert_eq!(b.absolute, 13);
        let b = distance_lower_bound(2, 1, 8, 3).unwrap();
        assert_eq!(b.absolute, 1 + 3 * 7);
        let b = distance_lower_bound(2, 2, 8, 2).unwrap();
        assert_eq!(b.relative_ratio(), Ratio::new(6, 64));
    }
}
