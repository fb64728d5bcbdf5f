//! Recovery procedures: disjoint PIR recovery sets, greedy batch recovery
//! for lifted RS codes, and randomized local self-correction.
//!
//! All three read a word along lines `w0 + v T` through the target `w0`
//! with `v = (1, v_2, ..., v_m)`. From the univariate data on `s^{m-1}` such
//! lines, with `(v_2, ..., v_m)` ranging over a grid `Q_2 x ... x Q_m` of
//! size-`s` sets, the target's derivatives are recovered one degree layer at
//! a time from `g_v^{(i0)}(0) = sum_{deg i = i0} f^{(i)}(w0) v^i`.

use std::cell::RefCell;
use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{
    build_code, canonical_directions, line_samples, point_from_index, point_index, CodeError,
    CodeSpec, Codeword, Encoder, SymbolSource,
};
use crate::gf2e::{Field, FieldElement};
use crate::linalg::{solve, SolveOutcome};
use crate::monomials::{multi_indices, multi_indices_of_degree};
use crate::polynomial::{
    decode_univariate_multiplicity, full_line_radius, hermite_interpolate, point_on,
    punctured_line_radius, DerivativeVector, PolyError, Sample,
};

#[derive(Debug, Error)]
pub enum RecoveryError {
    #[error("invalid parameters: {0}")]
    InvalidSpec(String),
    #[error("too many requests: {got} exceeds the bound {bound}")]
    TooManyRequests { got: usize, bound: usize },
    #[error("no admissible line through request {0}")]
    NoAdmissibleLine(usize),
    #[error("layer {layer} system is singular")]
    SingularLayer { layer: u32 },
    #[error("interpolation along a recovery line failed: {0}")]
    Interpolation(PolyError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// For each coordinate `2..=m`, a partition of `F_q` into blocks of size `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFamily {
    pub blocks: Vec<Vec<Vec<FieldElement>>>,
}

impl QFamily {
    /// Consecutive blocks `{0..s-1}, {s..2s-1}, ...` in every coordinate.
    pub fn consecutive(q: u32, m: usize, s: u32) -> Self {
        let coord: Vec<Vec<FieldElement>> = (0..q / s)
            .map(|b| (b * s..(b + 1) * s).map(FieldElement::from_raw).collect())
            .collect();
        QFamily {
            blocks: vec![coord; m.saturating_sub(1)],
        }
    }
}

/// A set of coordinates read to recover the symbol at `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoverySet {
    pub target: Vec<FieldElement>,
    /// Point indices, sorted.
    pub points: Vec<usize>,
    /// The directions `v` whose punctured lines make up the set.
    pub directions: Vec<Vec<FieldElement>>,
}

/// Directions `(1, v_2, ..., v_m)` with `v_j` drawn from `sets[j-2]`, in
/// lexicographic order.
fn grid_directions(sets: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    let mut out = vec![vec![FieldElement::ONE]];
    for set in sets {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                set.iter().map(move |&x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

fn punctured_points(
    field: &Field,
    q: u32,
    target: &[FieldElement],
    dirs: &[Vec<FieldElement>],
) -> Vec<usize> {
    let mut pts: Vec<usize> = dirs
        .iter()
        .flat_map(|v| {
            field
                .elements()
                .skip(1)
                .map(move |t| point_index(q, &point_on(field, target, v, t)))
        })
        .collect();
    pts.sort_unstable();
    pts
}

fn check_target(spec: &CodeSpec, target: &[FieldElement]) -> Result<(), RecoveryError> {
    if target.len() != spec.m || target.iter().any(|a| a.value() >= spec.q) {
        return Err(RecoveryError::InvalidSpec(format!(
            "target {target:?} is not a point of F_q^m"
        )));
    }
    Ok(())
}

/// The `(q/s)^{m-1}` pairwise disjoint recovery sets for `target`.
pub fn pir_recovery_sets(
    spec: &CodeSpec,
    target: &[FieldElement],
) -> Result<Vec<RecoverySet>, RecoveryError> {
    if spec.m < 2 {
        return Err(RecoveryError::InvalidSpec("PIR sets need m >= 2".into()));
    }
    if spec.r < spec.s {
        return Err(RecoveryError::InvalidSpec(format!(
            "reconstruction from q-1 points per line needs r >= s, got r={} s={}",
            spec.r, spec.s
        )));
    }
    check_target(spec, target)?;
    let field = spec.field();
    let family = QFamily::consecutive(spec.q, spec.m, spec.s);
    let per_coord = (spec.q / spec.s) as usize;
    let count = per_coord.pow(spec.m as u32 - 1);
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        // Block choice (i_2, ..., i_m) in lexicographic order.
        let mut rest = idx;
        let mut choice = vec![0usize; spec.m - 1];
        for c in choice.iter_mut().rev() {
            *c = rest % per_coord;
            rest /= per_coord;
        }
        let sets: Vec<Vec<FieldElement>> = choice
            .iter()
            .enumerate()
            .map(|(j, &b)| family.blocks[j][b].clone())
            .collect();
        let directions = grid_directions(&sets);
        let points = punctured_points(&field, spec.q, target, &directions);
        out.push(RecoverySet {
            target: target.to_vec(),
            points,
            directions,
        });
    }
    Ok(out)
}

/// Solves for the target's derivative vector given, for every direction,
/// the univariate derivatives `g_v^{(j)}(0)`, `j < s`.
pub fn layered_solve(
    field: &Field,
    m: usize,
    s: u32,
    directions: &[Vec<FieldElement>],
    at_zero: &[Vec<FieldElement>],
) -> Result<DerivativeVector, RecoveryError> {
    let indices = multi_indices(m, s);
    let mut out = DerivativeVector::zero(m, s);
    for layer in 0..s {
        let unknowns = multi_indices_of_degree(m, layer);
        let rows: Vec<Vec<FieldElement>> = directions
            .iter()
            .map(|v| {
                unknowns
                    .iter()
                    .map(|i| {
                        i.iter().zip(v).fold(FieldElement::ONE, |acc, (&e, &x)| {
                            field.mul(acc, field.pow(x, u64::from(e)))
                        })
                    })
                    .collect()
            })
            .collect();
        let rhs: Vec<FieldElement> = at_zero.iter().map(|g| g[layer as usize]).collect();
        let solution = match solve(field, &rows, &rhs) {
            SolveOutcome::Solved { solution, rank } if rank == unknowns.len() => solution,
            SolveOutcome::Solved { .. } => return Err(RecoveryError::SingularLayer { layer }),
            SolveOutcome::Inconsistent => {
                return Err(RecoveryError::Interpolation(PolyError::Inconsistent));
            }
        };
        for (i, val) in unknowns.iter().zip(solution) {
            let slot = indices.iter().position(|x| x == i).expect("index present");
            out.entries[slot] = val;
        }
    }
    Ok(out)
}

/// Recovers the symbol at `set.target` from the points of `set` only.
pub fn reconstruct_from_set<S: SymbolSource + ?Sized>(
    spec: &CodeSpec,
    word: &S,
    set: &RecoverySet,
) -> Result<DerivativeVector, RecoveryError> {
    let field = spec.field();
    let s = spec.s as usize;
    let mut at_zero = Vec::with_capacity(set.directions.len());
    for v in &set.directions {
        let samples = line_samples(spec, &field, word, &set.target, v, field.elements().skip(1));
        let h = hermite_interpolate(&field, &samples, spec.d() as usize)
            .map_err(RecoveryError::Interpolation)?;
        at_zero.push(h.derivatives_at(&field, FieldElement::ZERO, s));
    }
    layered_solve(&field, spec.m, spec.s, &set.directions, &at_zero)
}

/// One answered batch request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchAnswer {
    pub value: FieldElement,
    pub set: RecoverySet,
}

/// `r q^{m-2}`, the number of requests the greedy allocation always serves.
pub fn batch_capacity(spec: &CodeSpec) -> usize {
    spec.r as usize * (spec.q as usize).pow(spec.m.saturating_sub(2) as u32)
}

/// Greedy batch recovery for a lifted RS code (`s = 1`). Each request gets
/// the first line through it, in canonical direction order, that meets the
/// already used points in fewer than `r` places off the request point;
/// `q - r` unused points of it are read.
pub fn batch_recover<S: SymbolSource + ?Sized>(
    spec: &CodeSpec,
    word: &S,
    requests: &[Vec<FieldElement>],
) -> Result<Vec<BatchAnswer>, RecoveryError> {
    if spec.s != 1 || spec.m < 2 || spec.r >= spec.q {
        return Err(RecoveryError::InvalidSpec(format!(
            "batch recovery needs s = 1, m >= 2, r < q; got {spec}"
        )));
    }
    let bound = batch_capacity(spec);
    if requests.len() > bound {
        return Err(RecoveryError::TooManyRequests {
            got: requests.len(),
            bound,
        });
    }
    let field = spec.field();
    let dirs = canonical_directions(spec.q, spec.m);
    let keep = (spec.q - spec.r) as usize;
    let mut used: BTreeSet<usize> = BTreeSet::new();
    let mut answers = Vec::with_capacity(requests.len());
    for (k, target) in requests.iter().enumerate() {
        check_target(spec, target)?;
        let mut chosen = None;
        for v in &dirs {
            let line: Vec<(FieldElement, usize)> = field
                .elements()
                .skip(1)
                .map(|t| (t, point_index(spec.q, &point_on(&field, target, v, t))))
                .collect();
            let hits = line.iter().filter(|(_, p)| used.contains(p)).count();
            if hits < spec.r as usize {
                let free: Vec<(FieldElement, usize)> = line
                    .into_iter()
                    .filter(|(_, p)| !used.contains(p))
                    .take(keep)
                    .collect();
                chosen = Some((v.clone(), free));
                break;
            }
        }
        let (v, free) = chosen.ok_or(RecoveryError::NoAdmissibleLine(k))?;
        let samples: Vec<Sample> = free
            .iter()
            .map(|&(t, p)| Sample::new(t, word.symbol(p)))
            .collect();
        let g =
            hermite_interpolate(&field, &samples, keep).map_err(RecoveryError::Interpolation)?;
        let mut points: Vec<usize> = free.iter().map(|&(_, p)| p).collect();
        used.extend(points.iter().copied());
        points.sort_unstable();
        answers.push(BatchAnswer {
            value: g.eval(&field, FieldElement::ZERO),
            set: RecoverySet {
                target: target.clone(),
                points,
                directions: vec![v],
            },
        });
    }
    Ok(answers)
}

/// Which points of each line the self-corrector reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineReading {
    /// The `q - 1` points other than the target, decoded at the radius the
    /// punctured distance `ceil((r-s+1)/s)` allows.
    Punctured,
    /// All `q` points including the target, decoded at radius
    /// `(ceil((r+1)/s) - 1) / 2`. Reads one point more than `Punctured`.
    FullLine,
}

impl LineReading {
    pub fn radius(self, spec: &CodeSpec) -> u32 {
        match self {
            LineReading::Punctured => punctured_line_radius(spec.r, spec.s),
            LineReading::FullLine => full_line_radius(spec.r, spec.s),
        }
    }

    /// Upper bound on distinct points read per call.
    pub fn query_bound(self, spec: &CodeSpec) -> usize {
        let lines = (spec.s as usize).pow(spec.m as u32 - 1);
        let per_line = (spec.q - 1) as usize;
        match self {
            LineReading::Punctured => lines * per_line,
            LineReading::FullLine => lines * per_line + 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectionOutcome {
    /// The recovered symbol; all zero when `succeeded` is false.
    pub recovered: DerivativeVector,
    pub queries_used: usize,
    pub succeeded: bool,
    /// Directions whose line could not be decoded.
    pub failed_directions: Vec<Vec<FieldElement>>,
}

/// Uniform size-`s` subset of `F_q` by rejection sampling, sorted.
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, q: u32, s: u32) -> Vec<FieldElement> {
    loop {
        let mut pick: Vec<u32> = (0..s).map(|_| rng.gen_range(0..q)).collect();
        pick.sort_unstable();
        pick.dedup();
        if pick.len() == s as usize {
            return pick.into_iter().map(FieldElement::from_raw).collect();
        }
    }
}

struct QueryLog<'a, S: ?Sized> {
    inner: &'a S,
    seen: RefCell<BTreeSet<usize>>,
}

impl<S: SymbolSource + ?Sized> SymbolSource for QueryLog<'_, S> {
    fn symbol(&self, point: usize) -> Vec<FieldElement> {
        self.seen.borrow_mut().insert(point);
        self.inner.symbol(point)
    }
}

/// Randomized local self-correction of the symbol at `target`.
///
/// Samples `Q_2, ..., Q_m`, decodes each line `target + vT` for `v` in
/// `{1} x Q_2 x ... x Q_m` with the univariate multiplicity decoder, and
/// recombines the decoded derivatives at `T = 0` by the layered solve.
pub fn local_self_correct<S: SymbolSource + ?Sized, R: Rng + ?Sized>(
    spec: &CodeSpec,
    noisy: &S,
    target: &[FieldElement],
    reading: LineReading,
    rng: &mut R,
) -> Result<CorrectionOutcome, RecoveryError> {
    if spec.m < 2 {
        return Err(RecoveryError::InvalidSpec(
            "self-correction needs m >= 2".into(),
        ));
    }
    check_target(spec, target)?;
    let field = spec.field();
    let sets: Vec<Vec<FieldElement>> = (1..spec.m)
        .map(|_| random_subset(rng, spec.q, spec.s))
        .collect();
    let directions = grid_directions(&sets);
    let log = QueryLog {
        inner: noisy,
        seen: RefCell::new(BTreeSet::new()),
    };
    let radius = reading.radius(spec) as usize;
    let s = spec.s as usize;
    let mut at_zero = Vec::with_capacity(directions.len());
    let mut failed = Vec::new();
    for v in &directions {
        let params: Vec<FieldElement> = match reading {
            LineReading::Punctured => field.elements().skip(1).collect(),
            LineReading::FullLine => field.elements().collect(),
        };
        let samples = line_samples(spec, &field, &log, target, v, params);
        match decode_univariate_multiplicity(&field, &samples, spec.d() as usize, radius) {
            Ok(g) => at_zero.push(g.derivatives_at(&field, FieldElement::ZERO, s)),
            Err(PolyError::DecodeFailure { .. }) => failed.push(v.clone()),
            Err(e) => return Err(RecoveryError::Interpolation(e)),
        }
    }
    let queries_used = log.seen.borrow().len();
    assert!(
        queries_used <= reading.query_bound(spec),
        "query budget exceeded"
    );
    if !failed.is_empty() {
        return Ok(CorrectionOutcome {
            recovered: DerivativeVector::zero(spec.m, spec.s),
            queries_used,
            succeeded: false,
            failed_directions: failed,
        });
    }
    let recovered = layered_solve(&field, spec.m, spec.s, &directions, &at_zero)?;
    Ok(CorrectionOutcome {
        recovered,
        queries_used,
        succeeded: true,
        failed_directions: failed,
    })
}

/// Outcome of a Monte Carlo experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub spec: CodeSpec,
    pub trials: usize,
    pub alpha: Option<f64>,
    pub success_rate: f64,
    pub mean_queries: f64,
    pub seed: u64,
}

/// Trial `t` of an experiment with master seed `seed` draws from ChaCha20
/// seeded with `seed`, on stream `t`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A word with some symbols replaced.
pub struct Corrupted<'a, S: ?Sized> {
    pub inner: &'a S,
    pub replaced: std::collections::BTreeMap<usize, Vec<FieldElement>>,
}

impl<S: SymbolSource + ?Sized> SymbolSource for Corrupted<'_, S> {
    fn symbol(&self, point: usize) -> Vec<FieldElement> {
        match self.replaced.get(&point) {
            Some(v) => v.clone(),
            None => self.inner.symbol(point),
        }
    }
}

/// Number of corrupted symbols used by [`simulate_lcc`]: the largest count
/// strictly below `alpha * Delta_min * q^m`.
pub fn lcc_error_count(spec: &CodeSpec, alpha: f64) -> Result<usize, RecoveryError> {
    let bound = spec.distance_bound()?;
    let (num, den) = bound.relative;
    let budget = alpha * num as f64 / den as f64 * spec.length() as f64;
    let ceil = budget.ceil();
    Ok((ceil as usize).saturating_sub(1))
}

/// Replaces `count` distinct uniformly chosen symbols by different symbols.
pub fn corrupt<'a, S: SymbolSource + ?Sized, R: Rng + ?Sized>(
    spec: &CodeSpec,
    word: &'a S,
    count: usize,
    rng: &mut R,
) -> Corrupted<'a, S> {
    let k = spec.symbol_len();
    let mut replaced = std::collections::BTreeMap::new();
    for p in sample(rng, spec.length(), count).into_vec() {
        let orig = word.symbol(p);
        let err = loop {
            let e: Vec<u32> = (0..k).map(|_| rng.gen_range(0..spec.q)).collect();
            if e.iter().any(|&x| x != 0) {
                break e;
            }
        };
        let noisy = orig
            .iter()
            .zip(err)
            .map(|(&a, e)| a + FieldElement::from_raw(e))
            .collect();
        replaced.insert(p, noisy);
    }
    Corrupted {
        inner: word,
        replaced,
    }
}

/// Monte Carlo self-correction: random codeword, random corruption of
/// [`lcc_error_count`] symbols, random target; success means the
/// recovered symbol equals the true one.
pub fn simulate_lcc(
    spec: &CodeSpec,
    alpha: f64,
    trials: usize,
    seed: u64,
    reading: LineReading,
) -> Result<SimulationReport, RecoveryError> {
    let encoder = Encoder::new(build_code(spec)?);
    let errors = lcc_error_count(spec, alpha)?;
    let mut successes = 0usize;
    let mut queries = 0usize;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let message = encoder.random_message(&mut rng);
        let clean = encoder.lazy(&message);
        let noisy = corrupt(spec, &clean, errors, &mut rng);
        let target = point_from_index(spec.q, spec.m, rng.gen_range(0..spec.length()));
        let out = local_self_correct(spec, &noisy, &target, reading, &mut rng)?;
        queries += out.queries_used;
        if out.succeeded && out.recovered.entries == clean.symbol(point_index(spec.q, &target)) {
            successes += 1;
        }
    }
    Ok(SimulationReport {
        spec: *spec,
        trials,
        alpha: Some(alpha),
        success_rate: ratio(successes, trials),
        mean_queries: ratio(queries, trials),
        seed,
    })
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Monte Carlo PIR: each trial draws a codeword and `targets` target points
/// and reconstructs each target from every one of its recovery sets.
pub fn simulate_pir(
    spec: &CodeSpec,
    trials: usize,
    targets: usize,
    seed: u64,
) -> Result<SimulationReport, RecoveryError> {
    let encoder = Encoder::new(build_code(spec)?);
    let (mut ok, mut total, mut queries) = (0usize, 0usize, 0usize);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let word = encoder.encode(&encoder.random_message(&mut rng))?;
        for _ in 0..targets {
            let p = rng.gen_range(0..spec.length());
            let target = point_from_index(spec.q, spec.m, p);
            for set in pir_recovery_sets(spec, &target)? {
                total += 1;
                queries += set.points.len();
                if reconstruct_from_set(spec, &word, &set)?.entries == word.symbol_at(p) {
                    ok += 1;
                }
            }
        }
    }
    Ok(SimulationReport {
        spec: *spec,
        trials,
        alpha: None,
        success_rate: ratio(ok, total),
        mean_queries: ratio(queries, total),
        seed,
    })
}

/// Whether the recovery sets are pairwise disjoint and avoid their targets.
pub fn sets_disjoint(q: u32, sets: &[RecoverySet]) -> bool {
    let mut seen = BTreeSet::new();
    sets.iter()
        .all(|s| s.points.iter().all(|&p| seen.insert(p)))
        && sets
            .iter()
            .all(|s| !s.points.contains(&point_index(q, &s.target)))
}

/// Monte Carlo batch recovery with `batch_capacity` random requests per trial.
pub fn simulate_batch(
    spec: &CodeSpec,
    trials: usize,
    seed: u64,
) -> Result<SimulationReport, RecoveryError> {
    let encoder = Encoder::new(build_code(spec)?);
    let k = batch_capacity(spec);
    let (mut ok, mut queries, mut requests) = (0usize, 0usize, 0usize);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let word: Codeword = encoder.encode(&encoder.random_message(&mut rng))?;
        let reqs: Vec<Vec<FieldElement>> = (0..k)
            .map(|_| point_from_index(spec.q, spec.m, rng.gen_range(0..spec.length())))
            .collect();
        let answers = batch_recover(spec, &word, &reqs)?;
        let sets: Vec<RecoverySet> = answers.iter().map(|a| a.set.clone()).collect();
        let correct = answers
            .iter()
            .all(|a| a.value == word.symbol_at(point_index(spec.q, &a.set.target))[0]);
        requests += answers.len();
        queries += sets.iter().map(|s| s.points.len()).sum::<usize>();
        if correct && sets_disjoint(spec.q, &sets) {
            ok += 1;
        }
    }
    Ok(SimulationReport {
        spec: *spec,
        trials,
        alpha: None,
        success_rate: ratio(ok, trials),
        mean_queries: ratio(queries, requests),
        seed,
    })
}
