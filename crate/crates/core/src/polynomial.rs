//! Polynomials over GF(2^l), Hasse derivatives, restriction to lines,
//! reduction modulo `T^{qs} + T^s`, Hermite interpolation and a
//! bounded-distance decoder for univariate multiplicity codes.
//!
//! Hasse derivative coefficients are binomials taken mod 2, so
//! `[X^{d-i}] f^{(i)} = [X^d] f` when `i <=_2 d` and zero otherwise.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gf2e::{binom_is_odd, Field, FieldElement};
use crate::linalg::{solve, SolveOutcome};
use crate::monomials::{mod_star, multi_indices, ExponentVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("interpolation is underdetermined ({constraints} constraints, {unknowns} unknowns, rank {rank})")]
    Underdetermined {
        constraints: usize,
        unknowns: usize,
        rank: usize,
    },
    #[error("interpolation constraints are inconsistent")]
    Inconsistent,
    #[error("not enough samples: {have} constraints, need at least {need}")]
    InsufficientData { have: usize, need: usize },
    #[error("no codeword within {radius} errors")]
    DecodeFailure { radius: usize },
}

/// Dense univariate polynomial, coefficients indexed by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn monomial(k: usize, c: FieldElement) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, field: &Field, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (a, &x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, &y) in other.coeffs.iter().enumerate() {
                out[a + b] += field.mul(x, y);
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, field: &Field, c: FieldElement) -> UniPoly {
        Self::from_coeffs(self.coeffs.iter().map(|&x| field.mul(x, c)).collect())
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, field: &Field, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = field
            .inv(divisor.coeffs[dd])
            .expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = field.mul(rem[k], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k - dd] = c;
            for (a, &y) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + a] += field.mul(c, y);
            }
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn eval(&self, field: &Field, x: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| field.mul(acc, x) + c)
    }

    /// The `j`-th Hasse derivative.
    pub fn hasse(&self, j: usize) -> UniPoly {
        if j >= self.coeffs.len() {
            return UniPoly::zero();
        }
        Self::from_coeffs(
            (j..self.coeffs.len())
                .map(|k| {
                    if binom_is_odd(k as u32, j as u32) {
                        self.coeffs[k]
                    } else {
                        FieldElement::ZERO
                    }
                })
                .collect(),
        )
    }

    /// `(g^{(0)}(x), ..., g^{(s-1)}(x))`.
    pub fn derivatives_at(&self, field: &Field, x: FieldElement, s: usize) -> Vec<FieldElement> {
        (0..s).map(|j| self.hasse(j).eval(field, x)).collect()
    }
}

/// Multivariate polynomial as a sparse map from exponent tuples to
/// nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exps: &[u32], c: FieldElement) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(num_vars: usize, terms: &[(&[u32], FieldElement)]) -> Self {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            p.add_term(e, *c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, FieldElement)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exps: &[u32]) -> FieldElement {
        self.terms.get(exps).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds `c X^exps`, dropping the term if it cancels.
    pub fn add_term(&mut self, exps: &[u32], c: FieldElement) {
        assert_eq!(
            exps.len(),
            self.num_vars,
            "exponent length must match the variable count"
        );
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.to_vec()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(exps);
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_vars(other.num_vars)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn scale(&self, field: &Field, c: FieldElement) -> MultiPoly {
        let mut out = Self::zero(self.num_vars);
        for (e, x) in self.terms() {
            out.add_term(e, field.mul(x, c));
        }
        out
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn check_vars(&self, n: usize) -> Result<(), PolyError> {
        if n != self.num_vars {
            return Err(PolyError::DimensionMismatch {
                expected: self.num_vars,
                got: n,
            });
        }
        Ok(())
    }

    pub fn eval(&self, field: &Field, x: &[FieldElement]) -> Result<FieldElement, PolyError> {
        self.check_vars(x.len())?;
        let mut acc = FieldElement::ZERO;
        for (e, c) in self.terms() {
            let mut t = c;
            for (&xi, &ei) in x.iter().zip(e) {
                t = field.mul(t, field.pow(xi, u64::from(ei)));
            }
            acc += t;
        }
        Ok(acc)
    }

    /// The `i`-th Hasse derivative.
    pub fn hasse_derivative(&self, i: &[u32]) -> Result<MultiPoly, PolyError> {
        self.check_vars(i.len())?;
        let mut out = Self::zero(self.num_vars);
        for (d, c) in self.terms() {
            if d.iter()
                .zip(i)
                .all(|(&dj, &ij)| ij <= dj && binom_is_odd(dj, ij))
            {
                let e: Vec<u32> = d.iter().zip(i).map(|(&dj, &ij)| dj - ij).collect();
                out.add_term(&e, c);
            }
        }
        Ok(out)
    }

    /// Value of `f^{(i)}` at `x` for every `deg(i) < s`.
    pub fn eval_with_derivatives(
        &self,
        field: &Field,
        x: &[FieldElement],
        s: u32,
    ) -> Result<DerivativeVector, PolyError> {
        self.check_vars(x.len())?;
        let indices = multi_indices(self.num_vars, s);
        let mut entries = vec![FieldElement::ZERO; indices.len()];
        for (d, c) in self.terms() {
            for (slot, i) in entries.iter_mut().zip(&indices) {
                if d.iter()
                    .zip(i)
                    .all(|(&dj, &ij)| ij <= dj && binom_is_odd(dj, ij))
                {
                    let mut t = c;
                    for ((&xj, &dj), &ij) in x.iter().zip(d).zip(i) {
                        t = field.mul(t, field.pow(xj, u64::from(dj - ij)));
                    }
                    *slot += t;
                }
            }
        }
        Ok(DerivativeVector {
            m: self.num_vars,
            s,
            entries,
        })
    }
}

/// All Hasse derivatives of order `< s` at one point, indexed by the
/// multi-indices of [`multi_indices`] (graded-lex order).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DerivativeVector {
    pub m: usize,
    pub s: u32,
    pub entries: Vec<FieldElement>,
}

impl DerivativeVector {
    pub fn zero(m: usize, s: u32) -> Self {
        DerivativeVector {
            m,
            s,
            entries: vec![FieldElement::ZERO; symbol_len(m, s)],
        }
    }

    pub fn get(&self, i: &[u32]) -> Option<FieldElement> {
        multi_indices(self.m, self.s)
            .iter()
            .position(|x| x == i)
            .map(|k| self.entries[k])
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }
}

/// `C(s + m - 1, m)`, the number of entries in a derivative vector.
pub fn symbol_len(m: usize, s: u32) -> usize {
    let n = s as usize + m - 1;
    let k = m.min(n - m.min(n));
    let mut acc: usize = 1;
    for t in 0..k {
        acc = acc * (n - t) / (t + 1);
    }
    acc
}

/// An affine line `{w + v t : t in F_q}` stored in canonical form: the
/// first nonzero coordinate of `v` is 1 and `w` is zero at that coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    base: Vec<FieldElement>,
    direction: Vec<FieldElement>,
}

impl Line {
    pub fn new(
        field: &Field,
        base: Vec<FieldElement>,
        direction: Vec<FieldElement>,
    ) -> Result<Line, PolyError> {
        if base.len() != direction.len() {
            return Err(PolyError::DimensionMismatch {
                expected: base.len(),
                got: direction.len(),
            });
        }
        let pivot = direction
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(PolyError::ZeroDirection)?;
        let inv = field.inv(direction[pivot]).expect("pivot is nonzero");
        let direction: Vec<FieldElement> = direction.iter().map(|&c| field.mul(c, inv)).collect();
        let shift = base[pivot];
        let base = base
            .iter()
            .zip(&direction)
            .map(|(&b, &v)| b + field.mul(v, shift))
            .collect();
        Ok(Line { base, direction })
    }

    pub fn base(&self) -> &[FieldElement] {
        &self.base
    }

    pub fn direction(&self) -> &[FieldElement] {
        &self.direction
    }

    pub fn point(&self, field: &Field, t: FieldElement) -> Vec<FieldElement> {
        point_on(field, &self.base, &self.direction, t)
    }

    pub fn points(&self, field: &Field) -> Vec<Vec<FieldElement>> {
        field.elements().map(|t| self.point(field, t)).collect()
    }
}

pub fn point_on(
    field: &Field,
    base: &[FieldElement],
    direction: &[FieldElement],
    t: FieldElement,
) -> Vec<FieldElement> {
    base.iter()
        .zip(direction)
        .map(|(&w, &v)| w + field.mul(v, t))
        .collect()
}

/// `f(w + v T)` computed symbolically, without any reduction.
pub fn restrict_along(
    field: &Field,
    f: &MultiPoly,
    base: &[FieldElement],
    direction: &[FieldElement],
) -> Result<UniPoly, PolyError> {
    f.check_vars(base.len())?;
    f.check_vars(direction.len())?;
    let mut out = UniPoly::zero();
    for (d, c) in f.terms() {
        // (w + vT)^d = sum over a <=_2 d of w^{d-a} v^a T^a.
        let mut prod = UniPoly::from_coeffs(vec![c]);
        for ((&w, &v), &dj) in base.iter().zip(direction).zip(d) {
            let mut factor = vec![FieldElement::ZERO; dj as usize + 1];
            for a in crate::monomials::submasks_ascending(dj) {
                let term = field.mul(field.pow(w, u64::from(dj - a)), field.pow(v, u64::from(a)));
                factor[a as usize] += term;
            }
            prod = prod.mul(field, &UniPoly::from_coeffs(factor));
        }
        out = out.add(&prod);
    }
    Ok(out)
}

pub fn restrict_to_line(field: &Field, f: &MultiPoly, line: &Line) -> Result<UniPoly, PolyError> {
    restrict_along(field, f, line.base(), line.direction())
}

/// Restriction of `f` to the generic line `w + v T`, with `w` and `v`
/// left as indeterminates. Entry `k` is the coefficient of `T^k`, a
/// polynomial in `2m` variables ordered `w_1..w_m, v_1..v_m`.
pub fn restrict_to_generic_line(f: &MultiPoly) -> Vec<MultiPoly> {
    let m = f.num_vars();
    let mut out: Vec<MultiPoly> = Vec::new();
    for (d, c) in f.terms() {
        for i in ExponentVector(d.clone()).submasks() {
            let k = i.deg() as usize;
            if out.len() <= k {
                out.resize(k + 1, MultiPoly::zero(2 * m));
            }
            let exps: Vec<u32> = d
                .iter()
                .zip(i.exps())
                .map(|(&dj, &ij)| dj - ij)
                .chain(i.exps().iter().copied())
                .collect();
            out[k].add_term(&exps, c);
        }
    }
    out
}

/// Remainder modulo `T^{qs} + T^s`. Since `T^{qs} = T^s` there, the
/// coefficient of `T^k` moves to `T^{mod*(k)}`.
pub fn reduce_equiv(g: &UniPoly, q: u32, s: u32) -> UniPoly {
    let mut out = vec![FieldElement::ZERO; (q * s) as usize];
    for (k, &c) in g.coeffs().iter().enumerate() {
        out[mod_star(k as u64, q, s) as usize] += c;
    }
    UniPoly::from_coeffs(out)
}

/// [`reduce_equiv`] applied to a restriction with symbolic coefficients.
pub fn reduce_equiv_symbolic(g: &[MultiPoly], q: u32, s: u32) -> Vec<MultiPoly> {
    let nv = g.first().map_or(0, MultiPoly::num_vars);
    let mut out = vec![MultiPoly::zero(nv); (q * s) as usize];
    for (k, coeff) in g.iter().enumerate() {
        let target = mod_star(k as u64, q, s) as usize;
        for (e, c) in coeff.terms() {
            out[target].add_term(e, c);
        }
    }
    while out.last().is_some_and(MultiPoly::is_zero) {
        out.pop();
    }
    out
}

/// Derivative data at one point: `values[j]` is `g^{(j)}(point)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub point: FieldElement,
    pub values: Vec<FieldElement>,
}

impl Sample {
    pub fn new(point: FieldElement, values: Vec<FieldElement>) -> Self {
        Sample { point, values }
    }
}

// Row of the linear map coeffs -> g^{(j)}(t) restricted to the first n coefficients.
fn hasse_row(field: &Field, t: FieldElement, j: usize, n: usize) -> Vec<FieldElement> {
    (0..n)
        .map(|k| {
            if k >= j && binom_is_odd(k as u32, j as u32) {
                field.pow(t, (k - j) as u64)
            } else {
                FieldElement::ZERO
            }
        })
        .collect()
}

/// The unique polynomial of degree `< degree_bound` matching every
/// supplied derivative value.
pub fn hermite_interpolate(
    field: &Field,
    samples: &[Sample],
    degree_bound: usize,
) -> Result<UniPoly, PolyError> {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for sample in samples {
        for (j, &y) in sample.values.iter().enumerate() {
            rows.push(hasse_row(field, sample.point, j, degree_bound));
            rhs.push(y);
        }
    }
    if rows.len() < degree_bound {
        return Err(PolyError::Underdetermined {
            constraints: rows.len(),
            unknowns: degree_bound,
            rank: rows.len(),
        });
    }
    if degree_bound == 0 {
        return if rhs.iter().all(|y| y.is_zero()) {
            Ok(UniPoly::zero())
        } else {
            Err(PolyError::Inconsistent)
        };
    }
    match solve(field, &rows, &rhs) {
        SolveOutcome::Inconsistent => Err(PolyError::Inconsistent),
        SolveOutcome::Solved { rank, .. } if rank < degree_bound => {
            Err(PolyError::Underdetermined {
                constraints: rows.len(),
                unknowns: degree_bound,
                rank,
            })
        }
        SolveOutcome::Solved { solution, .. } => Ok(UniPoly::from_coeffs(solution)),
    }
}

/// Number of samples whose derivative data disagrees with `g`.
pub fn disagreements(field: &Field, g: &UniPoly, samples: &[Sample]) -> usize {
    samples
        .iter()
        .filter(|smp| g.derivatives_at(field, smp.point, smp.values.len()) != smp.values)
        .count()
}

/// Minimum distance `ceil((r+1)/s)` of the length-q univariate
/// multiplicity code of degree `< qs - r`.
pub fn line_distance(r: u32, s: u32) -> u32 {
    (r + 1).div_ceil(s)
}

/// Unique-decoding radius when all `q` points of the line are read.
pub fn full_line_radius(r: u32, s: u32) -> u32 {
    (line_distance(r, s) - 1) / 2
}

/// Unique-decoding radius when the line is read at `q - 1` points
/// (the target excluded). The distance drops by one, to `ceil((r-s+1)/s)`.
pub fn punctured_line_radius(r: u32, s: u32) -> u32 {
    (line_distance(r, s).saturating_sub(1)).saturating_sub(1) / 2
}

/// Bounded-distance decoding of a univariate multiplicity code.
///
/// Every sample must carry `s` derivative values. Solves the key equation
/// `N = E * y (mod (T - t)^s)` at every sample point, where `E` is monic of
/// degree `e s` and `deg N < D + e s`, then returns `N / E` if it lies
/// within `e` errors of the received data. Needs `n s >= D + 2 e s`.
pub fn decode_univariate_multiplicity(
    field: &Field,
    samples: &[Sample],
    degree_bound: usize,
    max_errors: usize,
) -> Result<UniPoly, PolyError> {
    let s = samples.first().map_or(1, |x| x.values.len());
    if let Some(bad) = samples.iter().find(|x| x.values.len() != s) {
        return Err(PolyError::DimensionMismatch {
            expected: s,
            got: bad.values.len(),
        });
    }
    let es = max_errors * s;
    let need = degree_bound + 2 * es;
    let have = samples.len() * s;
    if have < need {
        return Err(PolyError::InsufficientData { have, need });
    }
    let n_len = degree_bound + es;
    let mut rows = Vec::with_capacity(have);
    let mut rhs = Vec::with_capacity(have);
    for smp in samples {
        let t = smp.point;
        for j in 0..s {
            let mut row = hasse_row(field, t, j, n_len);
            // Unknown coefficients e_0..e_{es-1} of E contribute
            // sum_{a<=j} E^{(a)}(t) y^{(j-a)}.
            for k in 0..es {
                let mut acc = FieldElement::ZERO;
                for a in 0..=j.min(k) {
                    if binom_is_odd(k as u32, a as u32) {
                        acc += field.mul(field.pow(t, (k - a) as u64), smp.values[j - a]);
                    }
                }
                row.push(acc);
            }
            // The monic term T^{es} moves to the right-hand side.
            let mut b = FieldElement::ZERO;
            for a in 0..=j.min(es) {
                if binom_is_odd(es as u32, a as u32) {
                    b += field.mul(field.pow(t, (es - a) as u64), smp.values[j - a]);
                }
            }
            rows.push(row);
            rhs.push(b);
        }
    }
    let solution = match solve(field, &rows, &rhs) {
        SolveOutcome::Solved { solution, .. } => solution,
        SolveOutcome::Inconsistent => return Err(PolyError::DecodeFailure { radius: max_errors }),
    };
    let numer = UniPoly::from_coeffs(solution[..n_len].to_vec());
    let mut e_coeffs = solution[n_len..].to_vec();
    e_coeffs.push(FieldElement::ONE);
    let locator = UniPoly::from_coeffs(e_coeffs);
    let (quot, rem) = numer.div_rem(field, &locator);
    if !rem.is_zero() || quot.degree().is_some_and(|d| d >= degree_bound) {
        return Err(PolyError::DecodeFailure { radius: max_errors });
    }
    if disagreements(field, &quot, samples) > max_errors {
        return Err(PolyError::DecodeFailure { radius: max_errors });
    }
    Ok(quot)
}

/// Decoding by trying every error support of size at most `max_errors`.
/// Exponential; kept as a cross-check for small parameters.
pub fn decode_by_support_search(
    field: &Field,
    samples: &[Sample],
    degree_bound: usize,
    max_errors: usize,
) -> Result<UniPoly, PolyError> {
    let n = samples.len();
    for k in 0..=max_errors.min(n) {
        let mut found = None;
        for_each_subset(n, k, &mut |skip| {
            let kept: Vec<Sample> = samples
                .iter()
                .enumerate()
                .filter(|(i, _)| !skip.contains(i))
                .map(|(_, x)| x.clone())
                .collect();
            if let Ok(g) = hermite_interpolate(field, &kept, degree_bound) {
                if disagreements(field, &g, samples) <= max_errors {
                    found = Some(g);
                    return true;
                }
            }
            false
        });
        if let Some(g) = found {
            return Ok(g);
        }
    }
    Err(PolyError::DecodeFailure { radius: max_errors })
}

// Calls `f` on each k-subset of 0..n in lexicographic order until it returns true.
fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        if f(&idx) {
            return;
        }
        let Some(p) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return;
        };
        idx[p] += 1;
        for t in p + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}
