//! Fast self-checks of the library's core invariants, for the `verify`
//! command. Every check is deterministic and finishes in well under a second.

use serde::Serialize;

use crate::codes::{
    build_code, evaluate, membership_test, min_distance_exact, point_from_index, CodeSpec, Encoder,
};
use crate::counting::{base_ell, bruteforce_base_state, iterate_recurrence, spectral_report};
use crate::gf2e::{Field, FieldElement};
use crate::monomials::{count_bad_bruteforce, enumerate_good, type_s_vectors, DEFAULT_BUDGET};
use crate::polynomial::{
    decode_univariate_multiplicity, full_line_radius, MultiPoly, Sample, UniPoly,
};
use crate::recovery::{
    batch_recover, local_self_correct, pir_recovery_sets, reconstruct_from_set, sets_disjoint,
    trial_rng, LineReading,
};
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, run: impl FnOnce() -> Result<String, String>) -> Check {
    match run() {
        Ok(detail) => Check {
            name,
            passed: true,
            detail,
        },
        Err(detail) => Check {
            name,
            passed: false,
            detail,
        },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field_axioms() -> Result<String, String> {
    for ell in 1..=6 {
        let f = Field::new(ell).map_err(|e| e.to_string())?;
        for a in f.elements() {
            if !a.is_zero() {
                let inv = f.inv(a).map_err(|e| e.to_string())?;
                ensure(f.mul(a, inv) == FieldElement::ONE, || {
                    format!("inverse of {a} in GF(2^{ell})")
                })?;
            }
            for b in f.elements() {
                ensure(f.mul(a, b) == f.mul(b, a), || {
                    format!("commutativity in GF(2^{ell})")
                })?;
                let c = f.add(a, FieldElement::ONE);
                ensure(
                    f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)),
                    || format!("distributivity in GF(2^{ell})"),
                )?;
            }
        }
    }
    Ok("GF(2^l), l = 1..6, exhaustive".into())
}

fn good_counts() -> Result<String, String> {
    for (m, s, q) in [(2usize, 1u32, 8u32), (2, 2, 4), (3, 1, 4)] {
        let total = type_s_vectors(m, s, q).len() as u64;
        for threshold in 0..=q * s {
            let good = enumerate_good(m, s, q, threshold)
                .map_err(|e| e.to_string())?
                .len() as u64;
            let bad = count_bad_bruteforce(m, s, q, threshold, DEFAULT_BUDGET)
                .map_err(|e| e.to_string())?;
            ensure(good + bad == total, || {
                format!("m={m} s={s} q={q} threshold={threshold}")
            })?;
        }
    }
    Ok("subset-sum classification equals submask enumeration".into())
}

fn recurrence() -> Result<String, String> {
    for (m, r, top) in [(2usize, 1u32, 5u32), (2, 2, 5), (3, 2, 3)] {
        let base =
            bruteforce_base_state(m, r, base_ell(r), DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        for ell in base.ell..=top {
            let brute =
                bruteforce_base_state(m, r, ell, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            let fast = iterate_recurrence(&base, ell).map_err(|e| e.to_string())?;
            ensure(brute.counts == fast.counts, || {
                format!("m={m} r={r} l={ell}")
            })?;
        }
    }
    Ok("transfer-matrix iteration equals brute force".into())
}

fn spectra() -> Result<String, String> {
    for m in 2..=10 {
        let rep = spectral_report(m).map_err(|e| e.to_string())?;
        ensure(rep.bounds_ok, || format!("spectral bounds fail at m={m}"))?;
    }
    Ok("2^{m-1} <= lambda_m <= 2^m and p_m <= gap for m = 2..10".into())
}

fn decoder() -> Result<String, String> {
    let mut rng = trial_rng(0x5EED, 0);
    for (q, s, r) in [(16u32, 1usize, 6u32), (8, 2, 5)] {
        let f = Field::of_order(q).map_err(|e| e.to_string())?;
        let bound = q as usize * s - r as usize;
        let radius = full_line_radius(r, s as u32) as usize;
        for _ in 0..200 {
            let g = UniPoly::from_coeffs(
                (0..bound)
                    .map(|_| FieldElement::from_raw(rng.gen_range(0..q)))
                    .collect(),
            );
            let mut samples: Vec<Sample> = f
                .elements()
                .map(|x| Sample::new(x, g.derivatives_at(&f, x, s)))
                .collect();
            for smp in samples.iter_mut().take(radius) {
                smp.values[0] += FieldElement::ONE;
            }
            let got = decode_univariate_multiplicity(&f, &samples, bound, radius)
                .map_err(|e| e.to_string())?;
            ensure(got == g, || {
                format!("decoding failed for q={q} s={s} r={r}")
            })?;
        }
    }
    Ok("univariate decoding at full radius".into())
}

fn membership() -> Result<String, String> {
    let one = FieldElement::ONE;
    let rs = CodeSpec::new(2, 1, 4, 1).map_err(|e| e.to_string())?;
    let w = evaluate(&rs, &MultiPoly::monomial(&[2, 2], one)).map_err(|e| e.to_string())?;
    ensure(
        membership_test(&rs, &w).map_err(|e| e.to_string())?.passes,
        || "X1^2 X2^2 over F_4".into(),
    )?;
    let mult = CodeSpec::new(2, 2, 4, 1).map_err(|e| e.to_string())?;
    let a = evaluate(&mult, &MultiPoly::monomial(&[6, 1], one)).map_err(|e| e.to_string())?;
    let b = evaluate(&mult, &MultiPoly::monomial(&[3, 4], one)).map_err(|e| e.to_string())?;
    let pa = membership_test(&mult, &a)
        .map_err(|e| e.to_string())?
        .passes;
    let pb = membership_test(&mult, &b)
        .map_err(|e| e.to_string())?
        .passes;
    let pab = membership_test(&mult, &a.add(&b))
        .map_err(|e| e.to_string())?
        .passes;
    ensure(!pa && !pb && pab, || {
        format!("X1^6X2: {pa}, X1^3X2^4: {pb}, sum: {pab}")
    })?;
    Ok("line-by-line membership on known words".into())
}

fn distance() -> Result<String, String> {
    let spec = CodeSpec::new(2, 1, 4, 2).map_err(|e| e.to_string())?;
    let enc = Encoder::new(build_code(&spec).map_err(|e| e.to_string())?);
    let bound = spec.distance_bound().map_err(|e| e.to_string())?.absolute as usize;
    match min_distance_exact(&enc, 1 << 24).map_err(|e| e.to_string())? {
        crate::codes::DistanceReport::Exact { distance, .. } if distance >= bound => {
            Ok(format!("exact distance {distance} >= {bound} for {spec}"))
        }
        other => Err(format!("{other:?} against bound {bound}")),
    }
}

fn pir_and_batch() -> Result<String, String> {
    let spec = CodeSpec::new(2, 2, 8, 2).map_err(|e| e.to_string())?;
    let enc = Encoder::new(build_code(&spec).map_err(|e| e.to_string())?);
    let mut rng = trial_rng(0x5EED, 1);
    let word = enc
        .encode(&enc.random_message(&mut rng))
        .map_err(|e| e.to_string())?;
    for p in [0usize, 9, 63] {
        let target = point_from_index(spec.q, spec.m, p);
        let sets = pir_recovery_sets(&spec, &target).map_err(|e| e.to_string())?;
        ensure(sets.len() == 4 && sets_disjoint(spec.q, &sets), || {
            format!("PIR sets at point {p}")
        })?;
        for set in &sets {
            let dv = reconstruct_from_set(&spec, &word, set).map_err(|e| e.to_string())?;
            ensure(dv.entries == word.symbol_at(p), || {
                format!("PIR reconstruction at point {p}")
            })?;
        }
    }
    let bspec = CodeSpec::new(2, 1, 8, 2).map_err(|e| e.to_string())?;
    let benc = Encoder::new(build_code(&bspec).map_err(|e| e.to_string())?);
    let bword = benc
        .encode(&benc.random_message(&mut rng))
        .map_err(|e| e.to_string())?;
    let reqs = vec![point_from_index(8, 2, 5), point_from_index(8, 2, 5)];
    let answers = batch_recover(&bspec, &bword, &reqs).map_err(|e| e.to_string())?;
    let sets: Vec<_> = answers.iter().map(|a| a.set.clone()).collect();
    ensure(
        sets_disjoint(8, &sets) && answers.iter().all(|a| a.value == bword.symbol_at(5)[0]),
        || "batch recovery of a repeated request".into(),
    )?;
    Ok("PIR sets and batch recovery".into())
}

fn self_correction() -> Result<String, String> {
    let spec = CodeSpec::new(2, 2, 8, 5).map_err(|e| e.to_string())?;
    let enc = Encoder::new(build_code(&spec).map_err(|e| e.to_string())?);
    let mut rng = trial_rng(0x5EED, 2);
    let word = enc
        .encode(&enc.random_message(&mut rng))
        .map_err(|e| e.to_string())?;
    for p in (0..spec.length()).step_by(9) {
        let target = point_from_index(spec.q, spec.m, p);
        for reading in [LineReading::Punctured, LineReading::FullLine] {
            let out = local_self_correct(&spec, &word, &target, reading, &mut rng)
                .map_err(|e| e.to_string())?;
            ensure(
                out.succeeded && out.recovered.entries == word.symbol_at(p),
                || format!("noiseless self-correction at point {p}"),
            )?;
        }
    }
    Ok("noiseless self-correction recovers every probed symbol".into())
}

/// Runs every quick check in a fixed order.
pub fn run_quick_checks() -> Vec<Check> {
    vec![
        check("field-axioms", field_axioms),
        check("good-monomial-counts", good_counts),
        check("recurrence", recurrence),
        check("spectral-bounds", spectra),
        check("univariate-decoder", decoder),
        check("membership", membership),
        check("distance", distance),
        check("pir-and-batch", pir_and_batch),
        check("self-correction", self_correction),
    ]
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}
