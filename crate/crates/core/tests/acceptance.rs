//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL
//! line each, and exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use lifted::codes::{
    build_code, evaluate, membership_test, min_distance_exact, min_distance_sampled,
    point_from_index, point_index, reduced_line_degrees, CodeSpec, DistanceReport, Encoder,
};
use lifted::counting::{
    base_ell, bruteforce_base_state, delta_lm, delta_lm_slope, delta_lrs, in_s_j,
    iterate_recurrence, spectral_report, weight_reduction,
};
use lifted::gf2e::FieldElement;
use lifted::monomials::{
    dstar_witness, is_dstar_bad, is_qr_bad, type_s_vectors, ExponentVector, DEFAULT_BUDGET,
};
use lifted::polynomial::{reduce_equiv_symbolic, restrict_to_generic_line, MultiPoly};
use lifted::recovery::{
    batch_recover, pir_recovery_sets, reconstruct_from_set, sets_disjoint, simulate_lcc, trial_rng,
    LineReading,
};
use rand::Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn ev(v: &[u32]) -> ExponentVector {
    ExponentVector(v.to_vec())
}

fn el(v: u32) -> FieldElement {
    FieldElement::from_raw(v)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    ((a - b) / b).abs() <= tol
}

// Reference values (m, lambda_m, m - log lambda_m, p_m).
const REFERENCE_SPECTRA: [(usize, f64, f64, f64); 9] = [
    (2, 3.0000, 4.1504e-1, 4.1504e-1),
    (3, 7.2361, 1.4479e-1, 1.1360e-2),
    (4, 15.5436, 4.1747e-2, 2.8233e-3),
    (5, 31.7877, 9.6043e-3, 4.6986e-4),
    (6, 63.9217, 1.7653e-3, 1.1742e-4),
    (7, 127.9763, 2.6714e-4, 2.9353e-5),
    (8, 255.9939, 3.4467e-5, 2.8664e-8),
    (9, 511.9986, 3.8959e-6, 2.6872e-9),
    (10, 1023.9997, 3.9323e-7, 3.3590e-10),
];

fn spectra_reference() -> Outcome {
    let start = Instant::now();
    let mut bad_lambda = Vec::new();
    let mut bad_p = Vec::new();
    for &(m, lambda, gap, p) in &REFERENCE_SPECTRA {
        let rep = spectral_report(m).expect("spectral report");
        if !rel_close(rep.lambda_m, lambda, 5e-5)
            || !rel_close(rep.gap, gap, 5e-5)
            || !rep.bounds_ok
        {
            bad_lambda.push(format!(
                "m={m}: lambda {:.4} gap {:.4e}",
                rep.lambda_m, rep.gap
            ));
        }
        if !rel_close(rep.p_m, p, 5e-5) {
            bad_p.push(format!("m={m}: p_m {:.4e} vs {:.4e}", rep.p_m, p));
        }
    }
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(1);
    let detail = format!(
        "lambda/gap rows ok: {}/9; p_m rows ok: {}/9 [{}]; {:?}",
        9 - bad_lambda.len(),
        9 - bad_p.len(),
        bad_lambda
            .iter()
            .chain(&bad_p)
            .cloned()
            .collect::<Vec<_>>()
            .join("; "),
        elapsed
    );
    outcome(bad_lambda.is_empty() && bad_p.is_empty() && fast, detail)
}

fn recurrence_vs_bruteforce() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for &(m, r, ell_max) in &[
        (2usize, 1u32, 4u32),
        (2, 2, 4),
        (3, 1, 3),
        (3, 2, 3),
        (3, 3, 3),
    ] {
        let base = bruteforce_base_state(m, r, base_ell(r), DEFAULT_BUDGET).unwrap();
        for ell in base.ell..=ell_max {
            let brute = bruteforce_base_state(m, r, ell, DEFAULT_BUDGET).unwrap();
            let iterated = iterate_recurrence(&base, ell).unwrap();
            checked += 1;
            if brute.counts != iterated.counts {
                mismatches.push(format!(
                    "(m={m}, r={r}, l={ell}): {:?} vs {:?}",
                    brute.counts, iterated.counts
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches.is_empty() && elapsed < Duration::from_secs(120),
        format!("{checked} (m, r, l) states compared, mismatches: {mismatches:?}; {elapsed:?}"),
    )
}

fn worked_goldens() -> Outcome {
    let expected: BTreeSet<Vec<u32>> = [
        [3, 0],
        [2, 1],
        [3, 1],
        [1, 2],
        [3, 2],
        [0, 3],
        [1, 3],
        [2, 3],
        [3, 3],
    ]
    .iter()
    .map(|x| x.to_vec())
    .collect();
    let s0: BTreeSet<Vec<u32>> = type_s_vectors(2, 1, 4)
        .into_iter()
        .filter(|d| in_s_j(d, 2, 1, 0))
        .map(|d| d.0)
        .collect();
    let by_qr: BTreeSet<Vec<u32>> = type_s_vectors(2, 1, 4)
        .into_iter()
        .filter(|d| is_qr_bad(d, 4, 1).unwrap())
        .map(|d| d.0)
        .collect();
    let set_ok = s0 == expected && by_qr == expected;

    let reduced = weight_reduction(&ev(&[3, 3]), 1, 0, 2).unwrap();
    let reduction_ok = reduced == ev(&[1, 1]);

    // 0110|1110, 0110|1111, 0111|1110, 0111|1111 with q = 16, r = 2.
    let tuples = [[6u32, 14], [6, 15], [7, 14], [7, 15]];
    let witness = ev(&[6, 8]);
    let bad_ok = tuples.iter().all(|d| {
        let d = ev(d);
        let w = dstar_witness(&d, 16, 14).unwrap();
        is_dstar_bad(&d, 16, 14).unwrap()
            && witness.le2(&d).unwrap()
            && witness.deg() == 14
            && w.is_some_and(|w| w.witness.le2(&d).unwrap() && (14..16).contains(&w.reduced_degree))
    });
    outcome(
        set_ok && reduction_ok && bad_ok,
        format!(
            "S_0(2) = {s0:?} (|S_0| = {}); reduction -> {reduced}; four tuples bad: {bad_ok}",
            s0.len()
        ),
    )
}

fn lifted_rs_example() -> Outcome {
    let spec = CodeSpec::new(2, 1, 4, 1).unwrap();
    let f = MultiPoly::monomial(&[2, 2], el(1));
    let word = evaluate(&spec, &f).unwrap();
    let member = membership_test(&spec, &word).unwrap();
    let degrees = reduced_line_degrees(&spec, &f).unwrap();
    let all_low = degrees.len() == 20 && degrees.iter().all(|d| d.is_none_or(|d| d <= 2));
    // Generic restriction: (v1^2 w2^2 + v2^2 w1^2) T^2 + v1^2 v2^2 T + w1^2 w2^2, variables (w1, w2, v1, v2).
    let reduced = reduce_equiv_symbolic(&restrict_to_generic_line(&f), 4, 1);
    let one = el(1);
    let expected = vec![
        MultiPoly::monomial(&[2, 2, 0, 0], one),
        MultiPoly::monomial(&[0, 0, 2, 2], one),
        MultiPoly::from_terms(4, &[(&[0, 2, 2, 0], one), (&[2, 0, 0, 2], one)]),
    ];
    let symbolic_ok = reduced == expected;
    outcome(
        member.passes && all_low && symbolic_ok,
        format!(
            "membership: {}; {} lines, max reduced degree {:?}; symbolic restriction matches: {symbolic_ok}",
            member.passes,
            degrees.len(),
            degrees.iter().flatten().max()
        ),
    )
}

fn bad_monomial_examples() -> Outcome {
    let spec = CodeSpec::new(2, 2, 4, 1).unwrap();
    let one = el(1);
    let m1 = MultiPoly::monomial(&[6, 1], one);
    let m2 = MultiPoly::monomial(&[3, 4], one);
    let w1 = evaluate(&spec, &m1).unwrap();
    let w2 = evaluate(&spec, &m2).unwrap();
    let r1 = membership_test(&spec, &w1).unwrap();
    let r2 = membership_test(&spec, &w2).unwrap();
    let sum = membership_test(&spec, &w1.add(&w2)).unwrap();
    let fail_dir_ok = r1
        .failing_line
        .as_ref()
        .is_some_and(|l| l.direction()[0] == one);

    // Top coefficient [T^{qs-1}] on the generic line: v1^6 v2 and v1^3 v2^4.
    let top1 = restrict_to_generic_line(&m1)[7].clone();
    let top2 = restrict_to_generic_line(&m2)[7].clone();
    let tops_ok = top1 == MultiPoly::monomial(&[0, 0, 6, 1], one)
        && top2 == MultiPoly::monomial(&[0, 0, 3, 4], one);

    let m = MultiPoly::monomial(&[2, 6], one);
    let star = reduce_equiv_symbolic(&restrict_to_generic_line(&m), 4, 2);
    let mono = |e: [u32; 4]| e;
    let coeff = |terms: &[[u32; 4]]| {
        let mut p = MultiPoly::zero(4);
        for t in terms {
            p.add_term(t, one);
        }
        p
    };
    // Variables (w1, w2, v1, v2).
    let c0 = coeff(&[mono([2, 6, 0, 0])]);
    let c2 = coeff(&[[2, 4, 0, 2], [0, 6, 2, 0], [0, 0, 2, 6]]);
    let c4 = coeff(&[[2, 2, 0, 4], [0, 4, 2, 2]]);
    let c6 = coeff(&[[2, 0, 0, 6], [0, 2, 2, 4]]);
    let zero = MultiPoly::zero(4);
    let expected = vec![c0, zero.clone(), c2, zero.clone(), c4, zero, c6];
    let star_ok = star == expected;
    outcome(
        !r1.passes && !r2.passes && sum.passes && fail_dir_ok && tops_ok && star_ok,
        format!(
            "X1^6X2 member: {}, X1^3X2^4 member: {}, sum member: {}; top coefficients ok: {tops_ok}; M* coefficients ok: {star_ok}",
            r1.passes, r2.passes, sum.passes
        ),
    )
}

fn pir_round_trip() -> Outcome {
    let start = Instant::now();
    let spec = CodeSpec::new(2, 2, 8, 2).unwrap();
    let encoder = Encoder::new(build_code(&spec).unwrap());
    let probe = pir_recovery_sets(&spec, &[el(3), el(5)]).unwrap();
    let shape_ok = probe.len() == 4
        && probe.iter().all(|s| s.points.len() == 14)
        && sets_disjoint(spec.q, &probe);
    let mut failures = 0;
    let mut checks = 0;
    for t in 0..1000u64 {
        let mut rng = trial_rng(0xC0DE, t);
        let word = encoder.encode(&encoder.random_message(&mut rng)).unwrap();
        for _ in 0..10 {
            let p = rng.gen_range(0..spec.length());
            let target = point_from_index(spec.q, spec.m, p);
            let sets = pir_recovery_sets(&spec, &target).unwrap();
            if sets.len() != 4 || !sets_disjoint(spec.q, &sets) {
                failures += 1;
            }
            for set in &sets {
                checks += 1;
                match reconstruct_from_set(&spec, &word, set) {
                    Ok(dv) if dv.entries == word.symbol_at(p) => {}
                    _ => failures += 1,
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        shape_ok && failures == 0 && elapsed < Duration::from_secs(60),
        format!("4 sets x 14 points, disjoint: {shape_ok}; {checks} reconstructions, {failures} failures; {elapsed:?}"),
    )
}

fn batch_exhaustive() -> Outcome {
    let start = Instant::now();
    let spec = CodeSpec::new(2, 1, 8, 2).unwrap();
    let encoder = Encoder::new(build_code(&spec).unwrap());
    let words: Vec<_> = (0..4u64)
        .map(|t| {
            encoder
                .encode(&encoder.random_message(&mut trial_rng(0xBA7C, t)))
                .unwrap()
        })
        .collect();
    let n = spec.length();
    let (mut total, mut failures) = (0, 0);
    for a in 0..n {
        for b in a..n {
            let word = &words[total % words.len()];
            total += 1;
            let reqs = vec![
                point_from_index(spec.q, 2, a),
                point_from_index(spec.q, 2, b),
            ];
            match batch_recover(&spec, word, &reqs) {
                Ok(ans) => {
                    let sets: Vec<_> = ans.iter().map(|x| x.set.clone()).collect();
                    let values_ok = ans
                        .iter()
                        .all(|x| x.value == word.symbol_at(point_index(spec.q, &x.set.target))[0]);
                    if !values_ok || !sets_disjoint(spec.q, &sets) {
                        failures += 1;
                    }
                }
                Err(_) => failures += 1,
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        total == 2080 && failures == 0 && elapsed < Duration::from_secs(120),
        format!("{total} multisets, {failures} failures; {elapsed:?}"),
    )
}

fn distance_property() -> Outcome {
    let small = CodeSpec::new(2, 1, 2, 1).unwrap();
    let exact = min_distance_exact(&Encoder::new(build_code(&small).unwrap()), 1 << 24).unwrap();
    let exact_ok = matches!(exact, DistanceReport::Exact { distance, .. } if distance >= 3);

    let spec = CodeSpec::new(2, 2, 8, 4).unwrap();
    let bound = spec.distance_bound().unwrap().absolute;
    let encoder = Encoder::new(build_code(&spec).unwrap());
    let sampled = min_distance_sampled(&encoder, 10_000, &mut trial_rng(0xD157, 0)).unwrap();
    let sampled_ok = bound == 13
        && matches!(sampled, DistanceReport::Sampled { min_weight_seen, samples, .. } if samples == 10_000 && min_weight_seen >= 13);
    outcome(
        exact_ok && sampled_ok,
        format!("exact (2,1,2,1): {exact:?}; sampled (2,2,8,4): {sampled:?}"),
    )
}

fn lcc_success() -> Outcome {
    let start = Instant::now();
    let alpha = 0.1;
    let main = simulate_lcc(
        &CodeSpec::new(2, 1, 16, 4).unwrap(),
        alpha,
        10_000,
        0x1CC,
        LineReading::Punctured,
    )
    .unwrap();
    let main_ok = main.success_rate >= 1.0 - 2.0 * alpha - 0.05;
    // Slack is the shortfall below 1 - 2 alpha; r grows with q as q / 4.
    let mut slacks = Vec::new();
    let mut rates = Vec::new();
    for q in [8u32, 16, 32] {
        let spec = CodeSpec::new(2, 1, q, q / 4).unwrap();
        let rep = simulate_lcc(&spec, alpha, 10_000, 0x1CC, LineReading::Punctured).unwrap();
        rates.push((q, rep.success_rate));
        slacks.push((1.0 - 2.0 * alpha - rep.success_rate).max(0.0));
    }
    let trend_ok = slacks.windows(2).all(|w| w[1] <= w[0]);
    let elapsed = start.elapsed();
    outcome(
        main_ok && trend_ok && elapsed < Duration::from_secs(300),
        format!(
            "q=16 r=4 success {:.4} (mean queries {:.1}); success by q {rates:?}, slack {slacks:?}; {elapsed:?}",
            main.success_rate, main.mean_queries
        ),
    )
}

fn rate_trend() -> Outcome {
    let gap = spectral_report(2).unwrap().gap;
    let mut scaled = Vec::new();
    for ell in 2..=7u32 {
        let q = 1u32 << ell;
        let bad = type_s_vectors(2, 1, q)
            .iter()
            .filter(|d| is_dstar_bad(d, q, q - 1).unwrap())
            .count();
        let fraction = bad as f64 / f64::from(q * q);
        scaled.push(fraction * f64::from(q).powf(gap));
    }
    let hi = scaled.iter().cloned().fold(f64::MIN, f64::max);
    let lo = scaled.iter().cloned().fold(f64::MAX, f64::min);
    outcome(
        lo > 0.0 && hi / lo <= 4.0,
        format!("scaled bad fractions {scaled:.4?}, spread {:.3}", hi / lo),
    )
}

fn formula_calculators() -> Outcome {
    let slope = delta_lm_slope(3).unwrap();
    let lrs = delta_lrs(3).unwrap();
    let line_ok = [0.55, 0.6, 2.0 / 3.0]
        .iter()
        .all(|&e| (delta_lm(e, 3).unwrap() - (2.0 / 3.0 + slope * e)).abs() < 1e-12);
    outcome(
        (slope - 0.4276).abs() <= 1e-4 && (lrs - 0.9517).abs() <= 1e-4 && line_ok,
        format!("delta_LM(eps,3) = 2/3 + {slope:.6} eps; delta_LRS(2/3,3) = {lrs:.6}"),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        (
            "spectra (lambda_m, gap, p_m for m = 2..10)",
            spectra_reference,
        ),
        (
            "recurrence equals brute-force counts",
            recurrence_vs_bruteforce,
        ),
        ("worked-example goldens", worked_goldens),
        (
            "X1^2 X2^2 over F_4 is a lifted RS codeword",
            lifted_rs_example,
        ),
        (
            "bad monomials X1^6 X2, X1^3 X2^4 and the reduced restriction of X1^2 X2^6",
            bad_monomial_examples,
        ),
        ("PIR recovery sets and reconstruction", pir_round_trip),
        ("batch recovery over all 2-multisets", batch_exhaustive),
        ("distance lower bounds", distance_property),
        ("local self-correction success rate", lcc_success),
        ("bad-fraction growth exponent", rate_trend),
        ("redundancy exponent calculators", formula_calculators),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {}: {name} -- {}", k + 1, out.detail);
        if !out.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
