//! Lifted Reed-Solomon (`s = 1`) and lifted multiplicity codes.
//!
//! Points of `F_q^m` are indexed row-major: the point `(a_1, ..., a_m)` has
//! index `a_1 q^{m-1} + ... + a_m`. A codeword stores, for every point, the
//! Hasse derivatives of order `< s` in the graded-lex order of
//! [`multi_indices`].

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting::{distance_lower_bound, DistanceBound};
use crate::gf2e::{binom_is_odd, Field, FieldElement, GfError};
use crate::linalg::{rank, row_reduce};
use crate::monomials::{enumerate_good, multi_indices, ExponentVector, MonomialError};
use crate::polynomial::{
    hermite_interpolate, point_on, reduce_equiv, symbol_len, DerivativeVector, Line, MultiPoly,
    PolyError, Sample, UniPoly,
};

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("invalid code parameters: {0}")]
    InvalidSpec(String),
    #[error("message has {got} symbols, the basis has {expected}")]
    MessageLength { expected: usize, got: usize },
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("exact enumeration of {needed} codewords exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("generator dump parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parameters `(m, s, q, r)` of a lifted code; the degree bound is `d = qs - r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeSpec {
    pub m: usize,
    pub s: u32,
    pub q: u32,
    pub r: u32,
}

impl CodeSpec {
    pub fn new(m: usize, s: u32, q: u32, r: u32) -> Result<Self, CodeError> {
        if m == 0 {
            return Err(CodeError::InvalidSpec("m must be positive".into()));
        }
        if !(2..=1 << 16).contains(&q) || !q.is_power_of_two() {
            return Err(CodeError::InvalidSpec(format!(
                "q={q} must be a power of two in 2..=65536"
            )));
        }
        if s == 0 || !s.is_power_of_two() || s > q {
            return Err(CodeError::InvalidSpec(format!(
                "s={s} must be a power of two at most q={q}"
            )));
        }
        if r == 0 || r >= q * s {
            return Err(CodeError::InvalidSpec(format!(
                "r={r} must satisfy 1 <= r < qs={}",
                q * s
            )));
        }
        Ok(CodeSpec { m, s, q, r })
    }

    /// Degree bound `d = qs - r`.
    pub fn d(&self) -> u32 {
        self.q * self.s - self.r
    }

    pub fn field(&self) -> Field {
        Field::of_order(self.q).expect("validated field size")
    }

    /// Number of points, `q^m`.
    pub fn length(&self) -> usize {
        (self.q as usize).pow(self.m as u32)
    }

    /// Entries per symbol, `C(s+m-1, m)`.
    pub fn symbol_len(&self) -> usize {
        symbol_len(self.m, self.s)
    }

    pub fn distance_bound(&self) -> Result<DistanceBound, CodeError> {
        distance_lower_bound(self.m, self.s, self.q, self.r)
            .map_err(|e| CodeError::InvalidSpec(e.to_string()))
    }
}

impl std::fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "m={} s={} q={} r={}", self.m, self.s, self.q, self.r)
    }
}

pub fn point_index(q: u32, point: &[FieldElement]) -> usize {
    point
        .iter()
        .fold(0usize, |acc, a| acc * q as usize + a.value() as usize)
}

pub fn point_from_index(q: u32, m: usize, mut idx: usize) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::ZERO; m];
    for slot in out.iter_mut().rev() {
        *slot = FieldElement::from_raw((idx % q as usize) as u32);
        idx /= q as usize;
    }
    out
}

/// The good monomials for a spec, in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodBasis {
    pub spec: CodeSpec,
    pub monomials: Vec<ExponentVector>,
}

impl GoodBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, d: &[u32]) -> bool {
        self.monomials.iter().any(|x| x.exps() == d)
    }

    /// `sum_i message_i X^{d_i}`.
    pub fn polynomial(&self, message: &[FieldElement]) -> Result<MultiPoly, CodeError> {
        if message.len() != self.len() {
            return Err(CodeError::MessageLength {
                expected: self.len(),
                got: message.len(),
            });
        }
        let mut f = MultiPoly::zero(self.spec.m);
        for (d, &c) in self.monomials.iter().zip(message) {
            f.add_term(d.exps(), c);
        }
        Ok(f)
    }
}

pub fn build_code(spec: &CodeSpec) -> Result<GoodBasis, CodeError> {
    let monomials = enumerate_good(spec.m, spec.s, spec.q, spec.d())?;
    Ok(GoodBasis {
        spec: *spec,
        monomials,
    })
}

/// Anything that can hand out the symbol stored at a point.
pub trait SymbolSource {
    fn symbol(&self, point: usize) -> Vec<FieldElement>;
}

/// A full word: `q^m` symbols of `C(s+m-1, m)` entries each, flattened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub spec: CodeSpec,
    entries: Vec<FieldElement>,
}

impl Codeword {
    pub fn zero(spec: &CodeSpec) -> Self {
        Codeword {
            spec: *spec,
            entries: vec![FieldElement::ZERO; spec.length() * spec.symbol_len()],
        }
    }

    pub fn from_entries(spec: &CodeSpec, entries: Vec<FieldElement>) -> Result<Self, CodeError> {
        let want = spec.length() * spec.symbol_len();
        if entries.len() != want {
            return Err(CodeError::MalformedWord(format!(
                "{} entries, expected {want}",
                entries.len()
            )));
        }
        let q = spec.q;
        if let Some(bad) = entries.iter().find(|e| e.value() >= q) {
            return Err(CodeError::MalformedWord(format!(
                "entry {bad} is not in GF({q})"
            )));
        }
        Ok(Codeword {
            spec: *spec,
            entries,
        })
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn symbol_at(&self, point: usize) -> &[FieldElement] {
        let k = self.spec.symbol_len();
        &self.entries[point * k..(point + 1) * k]
    }

    pub fn symbol_mut(&mut self, point: usize) -> &mut [FieldElement] {
        let k = self.spec.symbol_len();
        &mut self.entries[point * k..(point + 1) * k]
    }

    pub fn derivative_vector(&self, point: usize) -> DerivativeVector {
        DerivativeVector {
            m: self.spec.m,
            s: self.spec.s,
            entries: self.symbol_at(point).to_vec(),
        }
    }

    /// Number of points with a nonzero symbol.
    pub fn weight(&self) -> usize {
        self.entries
            .chunks(self.spec.symbol_len())
            .filter(|c| c.iter().any(|e| !e.is_zero()))
            .count()
    }

    pub fn add(&self, other: &Codeword) -> Codeword {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a + b)
            .collect();
        Codeword {
            spec: self.spec,
            entries,
        }
    }

    pub fn scale(&self, field: &Field, c: FieldElement) -> Codeword {
        Codeword {
            spec: self.spec,
            entries: self.entries.iter().map(|&a| field.mul(a, c)).collect(),
        }
    }

    /// Entries in order, each expanded least significant bit first to `l` bits.
    pub fn binary_image(&self) -> Vec<bool> {
        let ell = self.spec.q.trailing_zeros();
        self.entries
            .iter()
            .flat_map(|e| (0..ell).map(move |b| e.value() >> b & 1 == 1))
            .collect()
    }

    pub fn from_binary_image(spec: &CodeSpec, bits: &[bool]) -> Result<Self, CodeError> {
        let ell = spec.q.trailing_zeros() as usize;
        if bits.len() != spec.length() * spec.symbol_len() * ell {
            return Err(CodeError::MalformedWord(format!(
                "{} bits do not fit the spec",
                bits.len()
            )));
        }
        let entries = bits
            .chunks(ell)
            .map(|c| {
                FieldElement::from_raw(c.iter().rev().fold(0, |acc, &b| acc << 1 | u32::from(b)))
            })
            .collect();
        Self::from_entries(spec, entries)
    }
}

impl SymbolSource for Codeword {
    fn symbol(&self, point: usize) -> Vec<FieldElement> {
        self.symbol_at(point).to_vec()
    }
}

/// Evaluates `f` with all derivatives of order `< s` at every point.
pub fn evaluate(spec: &CodeSpec, f: &MultiPoly) -> Result<Codeword, CodeError> {
    let field = spec.field();
    let mut word = Codeword::zero(spec);
    for p in 0..spec.length() {
        let x = point_from_index(spec.q, spec.m, p);
        let dv = f.eval_with_derivatives(&field, &x, spec.s)?;
        word.symbol_mut(p).copy_from_slice(&dv.entries);
    }
    Ok(word)
}

/// Generator rows: row `k` is the evaluation of the `k`-th basis monomial.
#[derive(Clone, Debug)]
pub struct Encoder {
    pub basis: GoodBasis,
    field: Field,
    rows: Vec<Vec<FieldElement>>,
}

impl Encoder {
    pub fn new(basis: GoodBasis) -> Self {
        let spec = basis.spec;
        let field = spec.field();
        let indices = multi_indices(spec.m, spec.s);
        let q = spec.q as usize;
        // pow[a][e] = a^e for e < qs.
        let pow: Vec<Vec<FieldElement>> = field
            .elements()
            .map(|a| {
                (0..(spec.q * spec.s) as u64)
                    .map(|e| field.pow(a, e))
                    .collect()
            })
            .collect();
        let rows = basis
            .monomials
            .iter()
            .map(|d| {
                let mut row = Vec::with_capacity(spec.length() * indices.len());
                for p in 0..spec.length() {
                    let x = point_from_index(spec.q, spec.m, p);
                    for i in &indices {
                        let mut v = FieldElement::ONE;
                        for ((&dj, &ij), a) in d.exps().iter().zip(i).zip(&x) {
                            if ij > dj || !binom_is_odd(dj, ij) {
                                v = FieldElement::ZERO;
                                break;
                            }
                            v = field.mul(v, pow[a.value() as usize][(dj - ij) as usize]);
                        }
                        row.push(v);
                    }
                }
                debug_assert_eq!(row.len(), q.pow(spec.m as u32) * indices.len());
                row
            })
            .collect();
        Encoder { basis, field, rows }
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.basis.spec
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn encode(&self, message: &[FieldElement]) -> Result<Codeword, CodeError> {
        if message.len() != self.rows.len() {
            return Err(CodeError::MessageLength {
                expected: self.rows.len(),
                got: message.len(),
            });
        }
        let mut entries = vec![FieldElement::ZERO; self.rows.first().map_or(0, Vec::len)];
        if self.rows.is_empty() {
            return Ok(Codeword::zero(self.spec()));
        }
        for (row, &c) in self.rows.iter().zip(message) {
            if c.is_zero() {
                continue;
            }
            for (e, &g) in entries.iter_mut().zip(row) {
                *e += self.field.mul(c, g);
            }
        }
        Ok(Codeword {
            spec: *self.spec(),
            entries,
        })
    }

    pub fn random_message<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<FieldElement> {
        (0..self.rows.len())
            .map(|_| FieldElement::from_raw(rng.gen_range(0..self.spec().q)))
            .collect()
    }

    /// A message whose codeword is computed point by point on demand.
    pub fn lazy<'a>(&'a self, message: &'a [FieldElement]) -> LazyCodeword<'a> {
        LazyCodeword {
            encoder: self,
            message,
        }
    }

    /// Whether `word` lies in the span of the generator rows.
    pub fn in_span(&self, word: &Codeword) -> bool {
        let base = rank(&self.field, &self.rows);
        let mut with = self.rows.clone();
        with.push(word.entries.clone());
        rank(&self.field, &with) == base
    }

    /// Coordinates `(point, entry)` on which the generator matrix has full
    /// rank, chosen greedily by column order.
    pub fn information_set(&self) -> Vec<(usize, usize)> {
        let k = self.spec().symbol_len();
        let ncols = self.rows.first().map_or(0, Vec::len);
        let mut m = self.rows.clone();
        row_reduce(&self.field, &mut m, ncols)
            .into_iter()
            .map(|c| (c / k, c % k))
            .collect()
    }
}

/// Codeword symbols evaluated lazily from a message.
pub struct LazyCodeword<'a> {
    encoder: &'a Encoder,
    message: &'a [FieldElement],
}

impl SymbolSource for LazyCodeword<'_> {
    fn symbol(&self, point: usize) -> Vec<FieldElement> {
        let k = self.encoder.spec().symbol_len();
        let mut out = vec![FieldElement::ZERO; k];
        for (row, &c) in self.encoder.rows.iter().zip(self.message) {
            if c.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(&row[point * k..(point + 1) * k]) {
                *o += self.encoder.field.mul(c, g);
            }
        }
        out
    }
}

/// Every affine line once: canonical directions (first nonzero entry 1) in
/// index order, and for each the bases vanishing at the pivot coordinate.
pub fn all_lines(field: &Field, m: usize) -> Vec<Line> {
    let q = field.order();
    let mut out = Vec::new();
    for v in canonical_directions(q, m) {
        let pivot = v
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero direction");
        for b in 0..(q as usize).pow(m as u32) {
            let w = point_from_index(q, m, b);
            if w[pivot].is_zero() {
                out.push(Line::new(field, w, v.clone()).expect("canonical input"));
            }
        }
    }
    out
}

/// Directions whose first nonzero coordinate is 1, in point-index order.
pub fn canonical_directions(q: u32, m: usize) -> Vec<Vec<FieldElement>> {
    (1..(q as usize).pow(m as u32))
        .map(|i| point_from_index(q, m, i))
        .filter(|v| v.iter().find(|c| !c.is_zero()) == Some(&FieldElement::ONE))
        .collect()
}

/// Derivative data of `g(T) = f(w + vT)` at the given parameters: by the
/// chain rule `g^{(j)}(t) = sum_{deg i = j} f^{(i)}(w + vt) v^i`.
pub fn line_samples<S: SymbolSource + ?Sized>(
    spec: &CodeSpec,
    field: &Field,
    word: &S,
    base: &[FieldElement],
    direction: &[FieldElement],
    params: impl IntoIterator<Item = FieldElement>,
) -> Vec<Sample> {
    let indices = multi_indices(spec.m, spec.s);
    // Weight v^i of each derivative index.
    let weights: Vec<FieldElement> = indices
        .iter()
        .map(|i| {
            i.iter()
                .zip(direction)
                .fold(FieldElement::ONE, |acc, (&e, &v)| {
                    field.mul(acc, field.pow(v, u64::from(e)))
                })
        })
        .collect();
    params
        .into_iter()
        .map(|t| {
            let p = point_on(field, base, direction, t);
            let sym = word.symbol(point_index(spec.q, &p));
            let mut values = vec![FieldElement::ZERO; spec.s as usize];
            for ((i, &wgt), &y) in indices.iter().zip(&weights).zip(&sym) {
                let j = i.iter().sum::<u32>() as usize;
                values[j] += field.mul(wgt, y);
            }
            Sample::new(t, values)
        })
        .collect()
}

/// The unique degree `< qs` representative of the word along `line`.
pub fn line_representative<S: SymbolSource + ?Sized>(
    spec: &CodeSpec,
    field: &Field,
    word: &S,
    line: &Line,
) -> Result<UniPoly, CodeError> {
    let samples = line_samples(
        spec,
        field,
        word,
        line.base(),
        line.direction(),
        field.elements(),
    );
    Ok(hermite_interpolate(
        field,
        &samples,
        (spec.q * spec.s) as usize,
    )?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub passes: bool,
    pub failing_line: Option<Line>,
    /// Degree of the representative on the failing line.
    pub failing_degree: Option<usize>,
}

/// Checks every line: the degree-`< qs` representative of the word's data
/// along the line must have degree `< d`.
pub fn membership_test(spec: &CodeSpec, word: &Codeword) -> Result<Membership, CodeError> {
    if word.spec != *spec {
        return Err(CodeError::MalformedWord(format!(
            "word is for {}, not {spec}",
            word.spec
        )));
    }
    let field = spec.field();
    for line in all_lines(&field, spec.m) {
        let g = line_representative(spec, &field, word, &line)?;
        if let Some(deg) = g.degree() {
            if deg >= spec.d() as usize {
                return Ok(Membership {
                    passes: false,
                    failing_line: Some(line),
                    failing_degree: Some(deg),
                });
            }
        }
    }
    Ok(Membership {
        passes: true,
        failing_line: None,
        failing_degree: None,
    })
}

/// Degree of `reduce_equiv(f|_L)` for every line, in [`all_lines`] order.
pub fn reduced_line_degrees(
    spec: &CodeSpec,
    f: &MultiPoly,
) -> Result<Vec<Option<usize>>, CodeError> {
    let field = spec.field();
    all_lines(&field, spec.m)
        .iter()
        .map(|l| {
            let g = crate::polynomial::restrict_to_line(&field, f, l)?;
            Ok(reduce_equiv(&g, spec.q, spec.s).degree())
        })
        .collect()
}

pub const DEFAULT_DISTANCE_BUDGET: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistanceReport {
    Exact {
        distance: usize,
        codewords: u128,
    },
    Sampled {
        min_weight_seen: usize,
        samples: usize,
        lower_bound: u64,
    },
}

/// Minimum symbol weight over all nonzero codewords.
pub fn min_distance_exact(encoder: &Encoder, budget: u128) -> Result<DistanceReport, CodeError> {
    let q = encoder.spec().q;
    let k = encoder.dimension() as u32;
    let needed = u128::from(q).checked_pow(k).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(CodeError::BudgetExceeded { needed, budget });
    }
    let field = encoder.field().clone();
    let mut message = vec![FieldElement::ZERO; k as usize];
    let mut word = Codeword::zero(encoder.spec());
    let mut best = usize::MAX;
    // Odometer over messages; each step adds (new - old) times one row.
    'outer: loop {
        let mut pos = 0;
        loop {
            if pos == k as usize {
                break 'outer;
            }
            let old = message[pos];
            let new = FieldElement::from_raw((old.value() + 1) % q);
            message[pos] = new;
            let delta = old + new;
            for (e, &g) in word.entries.iter_mut().zip(&encoder.rows[pos]) {
                *e += field.mul(delta, g);
            }
            if !new.is_zero() {
                break;
            }
            pos += 1;
        }
        if message.iter().any(|c| !c.is_zero()) {
            best = best.min(word.weight());
        }
    }
    Ok(DistanceReport::Exact {
        distance: if k == 0 { 0 } else { best },
        codewords: needed,
    })
}

/// Minimum weight over `samples` random nonzero codewords.
pub fn min_distance_sampled<R: Rng + ?Sized>(
    encoder: &Encoder,
    samples: usize,
    rng: &mut R,
) -> Result<DistanceReport, CodeError> {
    let lower_bound = encoder.spec().distance_bound()?.absolute;
    let mut best = usize::MAX;
    let mut done = 0;
    while done < samples && encoder.dimension() > 0 {
        let msg = encoder.random_message(rng);
        if msg.iter().all(|c| c.is_zero()) {
            continue;
        }
        best = best.min(encoder.encode(&msg)?.weight());
        done += 1;
    }
    Ok(DistanceReport::Sampled {
        min_weight_seen: best,
        samples: done,
        lower_bound,
    })
}

/// Exact when `q^k <= budget`, sampled otherwise.
pub fn min_distance_oracle<R: Rng + ?Sized>(
    encoder: &Encoder,
    budget: u128,
    rng: &mut R,
) -> Result<DistanceReport, CodeError> {
    match min_distance_exact(encoder, budget) {
        Err(CodeError::BudgetExceeded { .. }) => min_distance_sampled(encoder, 10_000, rng),
        other => other,
    }
}

/// Header `m s q r basis_size`, then per monomial its exponents followed by
/// the row of the generator matrix, all space-separated decimal.
pub fn write_generator_dump<W: Write>(encoder: &Encoder, mut out: W) -> Result<(), CodeError> {
    let spec = encoder.spec();
    writeln!(
        out,
        "{} {} {} {} {}",
        spec.m,
        spec.s,
        spec.q,
        spec.r,
        encoder.dimension()
    )?;
    for (d, row) in encoder.basis.monomials.iter().zip(&encoder.rows) {
        let mut line = String::new();
        for e in d.exps() {
            line.push_str(&e.to_string());
            line.push(' ');
        }
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                line.push(' ');
            }
            line.push_str(&v.value().to_string());
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Parsed generator dump.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDump {
    pub spec: CodeSpec,
    pub monomials: Vec<ExponentVector>,
    pub rows: Vec<Vec<FieldElement>>,
}

pub fn read_generator_dump<R: BufRead>(input: R) -> Result<GeneratorDump, CodeError> {
    let mut lines = input.lines();
    let parse_err = |line: usize, reason: &str| CodeError::Parse {
        line,
        reason: reason.to_string(),
    };
    let header = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header"))??;
    let h: Vec<u64> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| parse_err(1, "non-numeric header"))?;
    if h.len() != 5 {
        return Err(parse_err(1, "header needs 5 fields"));
    }
    let spec = CodeSpec::new(h[0] as usize, h[1] as u32, h[2] as u32, h[3] as u32)?;
    let n = spec.length() * spec.symbol_len();
    let mut monomials = Vec::new();
    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let nums: Vec<u32> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| parse_err(k + 2, "non-numeric entry"))?;
        if nums.len() != spec.m + n {
            return Err(parse_err(k + 2, "wrong number of fields"));
        }
        let d = ExponentVector(nums[..spec.m].to_vec());
        if !seen.insert(d.0.clone()) {
            return Err(parse_err(k + 2, "duplicate monomial"));
        }
        monomials.push(d);
        rows.push(
            nums[spec.m..]
                .iter()
                .map(|&v| FieldElement::from_raw(v))
                .collect(),
        );
    }
    if monomials.len() as u64 != h[4] {
        return Err(parse_err(1, "basis size does not match the number of rows"));
    }
    Ok(GeneratorDump {
        spec,
        monomials,
        rows,
    })
}
