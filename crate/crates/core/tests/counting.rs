use lifted::counting::{
    base_ell, binomial, bruteforce_base_state, characteristic_polynomial, count_dstar_bad,
    delta_lm, delta_lrs, distance_lower_bound, drop_and_lead, exact_rate, gap_upper, in_s_j,
    iterate_recurrence, optimize_redundancy, p_m, recurrence_table, spectral_report,
    top_eigenvalue, weight_reduction, CountingError, Family, RecurrenceState, TransferMatrix,
};
use lifted::monomials::{type_s_vectors, ExponentVector, DEFAULT_BUDGET};
use num_bigint::BigUint;
use num_rational::Ratio;

fn ev(v: &[u32]) -> ExponentVector {
    ExponentVector(v.to_vec())
}

#[test]
fn transfer_matrix_small_cases() {
    assert_eq!(
        TransferMatrix::new(2).unwrap().entries,
        vec![vec![3, 1], vec![0, 1]]
    );
    assert_eq!(
        TransferMatrix::new(3).unwrap().entries,
        vec![vec![7, 1, 0], vec![1, 3, 3], vec![0, 0, 1]]
    );
    assert!(TransferMatrix::new(1).is_err());
}

#[test]
fn recurrence_matches_bruteforce_beyond_the_acceptance_range() {
    for (m, r, ell_max) in [
        (2usize, 1u32, 7u32),
        (2, 2, 7),
        (3, 1, 4),
        (3, 2, 4),
        (3, 3, 4),
        (4, 1, 3),
        (4, 4, 3),
    ] {
        for state in recurrence_table(m, r, ell_max, 1 << 26).unwrap() {
            let brute = bruteforce_base_state(m, r, state.ell, 1 << 26).unwrap();
            assert_eq!(brute.counts, state.counts, "m={m} r={r} ell={}", state.ell);
        }
    }
}

#[test]
fn state_membership_is_consistent_with_counts() {
    let (m, r, ell) = (3usize, 2u32, 3u32);
    let state = bruteforce_base_state(m, r, ell, DEFAULT_BUDGET).unwrap();
    for j in 0..m as u32 {
        let n = type_s_vectors(m, 1, 1 << ell)
            .iter()
            .filter(|d| in_s_j(d, ell, r, j))
            .count();
        assert_eq!(BigUint::from(n), state.counts[j as usize]);
    }
}

#[test]
fn recurrence_rejects_bad_input() {
    assert!(bruteforce_base_state(2, 3, 2, DEFAULT_BUDGET).is_err());
    assert!(bruteforce_base_state(4, 1, 8, 1000).is_err());
    let s = RecurrenceState {
        m: 2,
        r: 1,
        ell: 3,
        counts: vec![BigUint::from(1u8); 2],
    };
    assert!(matches!(
        iterate_recurrence(&s, 2),
        Err(CountingError::Precondition(_))
    ));
    assert_eq!(base_ell(1), 1);
    assert_eq!(base_ell(3), 2);
}

#[test]
fn bivariate_bad_count_is_a_power_of_three() {
    for ell in 1..=7 {
        assert_eq!(count_dstar_bad(2, 1 << ell, 1).unwrap(), 3u64.pow(ell));
    }
}

#[test]
fn spectral_sandwich() {
    for m in 2..=12 {
        let rep = spectral_report(m).unwrap();
        assert!(rep.bounds_ok, "m={m}");
        let lo = 2f64.powi(m as i32 - 1);
        assert!(rep.lambda_m > lo && rep.lambda_m < 2.0 * lo);
        assert!(p_m(m) <= rep.gap * (1.0 + 1e-12) && rep.gap <= gap_upper(m) * (1.0 + 1e-12));
    }
}

#[test]
fn eigenvalue_is_a_root_of_the_characteristic_polynomial() {
    for m in 2..=8 {
        let a = TransferMatrix::new(m).unwrap();
        let rep = top_eigenvalue(&a, 1e-15).unwrap();
        let c = characteristic_polynomial(&a);
        assert_eq!(c[0], 1);
        let trace: u64 = (0..m).map(|i| a.entries[i][i]).sum();
        assert_eq!(c[1], -(trace as i128));
        // Relative residual against the magnitude of the terms.
        let (mut p, mut scale) = (0.0f64, 0.0f64);
        for &ci in &c {
            p = p * rep.lambda_m + ci as f64;
            scale = scale * rep.lambda_m + (ci as f64).abs();
        }
        assert!(p.abs() <= 1e-9 * scale, "m={m}: residual {p} of {scale}");
        if let Some(root) = rep.charpoly_root {
            assert!((root - rep.lambda_m).abs() <= 1e-12 * root);
        }
    }
}

#[test]
fn lambda_two_is_three() {
    assert!((spectral_report(2).unwrap().lambda_m - 3.0).abs() < 1e-12);
    // The top 2x2 block of A_3 has characteristic polynomial x^2 - 10x + 20.
    assert!((spectral_report(3).unwrap().lambda_m - (5.0 + 5f64.sqrt())).abs() < 1e-12);
}

#[test]
fn weight_reduction_hits_the_target_degree_exhaustively() {
    for (m, ell) in [(2usize, 1u32), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
        for i in type_s_vectors(m, 1, 1 << ell) {
            for j in 0..m as u32 {
                for l in 0..=j {
                    let drop = (j - l) << ell;
                    let res = weight_reduction(&i, j, l, ell);
                    if i.deg() < drop {
                        assert!(matches!(res, Err(CountingError::Precondition(_))));
                        continue;
                    }
                    let a = res.unwrap_or_else(|e| panic!("i={i} j={j} l={l}: {e}"));
                    assert!(a.le2(&i).unwrap());
                    assert_eq!(a.deg() + drop, i.deg(), "i={i} j={j} l={l}");
                }
            }
        }
    }
}

#[test]
fn weight_reduction_example() {
    assert_eq!(
        weight_reduction(&ev(&[3, 3]), 1, 0, 2).unwrap(),
        ev(&[1, 1])
    );
    assert!(weight_reduction(&ev(&[3, 3]), 0, 1, 2).is_err());
    assert!(weight_reduction(&ev(&[4, 3]), 1, 0, 2).is_err());
}

#[test]
fn drop_and_lead_round_trip() {
    for ell in 1..=4 {
        for d in type_s_vectors(3, 1, 1 << ell) {
            let (lead, low) = drop_and_lead(&d, ell).unwrap();
            let back: Vec<u32> = lead
                .iter()
                .zip(&low.0)
                .map(|(&b, &x)| b << (ell - 1) | x)
                .collect();
            assert_eq!(back, d.0);
            assert!(lead.iter().all(|&b| b <= 1));
        }
    }
    assert!(drop_and_lead(&ev(&[8]), 3).is_err());
}

#[test]
fn exact_rates() {
    // Empty window: every type-s vector is good.
    for (m, s, q) in [(2usize, 1u32, 4u32), (2, 2, 4), (3, 2, 8)] {
        assert_eq!(exact_rate(m, s, q, q * s).unwrap(), Ratio::from_integer(1));
    }
    // Bivariate, r = 1: q^2 - 3^l good out of q^2.
    assert_eq!(exact_rate(2, 1, 8, 7).unwrap(), Ratio::new(64 - 27, 64));
    let r = exact_rate(2, 2, 8, 12).unwrap();
    assert!(r > Ratio::from_integer(0) && r < Ratio::from_integer(1));
}

#[test]
fn distance_bounds() {
    let b = distance_lower_bound(2, 2, 8, 4).unwrap();
    assert_eq!(b.absolute, 13);
    assert_eq!(b.relative_ratio(), Ratio::new(12, 64));
    assert_eq!(distance_lower_bound(2, 1, 2, 1).unwrap().absolute, 2);
    assert_eq!(
        distance_lower_bound(3, 1, 4, 2).unwrap().absolute,
        1 + 2 * 3 * 4
    );
    assert!(distance_lower_bound(1, 1, 4, 1).is_err());
    assert!(distance_lower_bound(2, 1, 4, 4).is_err());
}

#[test]
fn redundancy_exponents() {
    for m in 2..=6 {
        let edge = (m as f64 - 1.0) / m as f64;
        assert!((delta_lm(edge, m).unwrap() - delta_lrs(m).unwrap()).abs() < 1e-12);
        for fam in Family::ALL {
            if fam.admits(0.3, m) {
                let x = fam.exponent(0.3, m).unwrap();
                assert!(x > 0.0 && x < 1.0, "{} at m={m}: {x}", fam.name());
            } else {
                assert!(fam.exponent(0.3, m).is_err());
            }
        }
    }
    assert!((delta_lrs(3).unwrap() - 0.9517).abs() < 1e-4);
    // Lifting beats plain multiplicity codes at the same m.
    assert!(delta_lm(0.5, 3).unwrap() < Family::Multiplicity.exponent(0.5, 3).unwrap());
}

#[test]
fn redundancy_optimizer_takes_the_minimum() {
    for fam in Family::ALL {
        if let Ok(rep) = optimize_redundancy(fam, 0.6, 10) {
            let min = rep
                .candidates
                .iter()
                .map(|c| c.1)
                .fold(f64::INFINITY, f64::min);
            assert_eq!(rep.exponent, min);
            assert!(rep.candidates.iter().all(|&(m, _)| fam.admits(0.6, m)));
        }
    }
    assert!(optimize_redundancy(Family::LiftedMultiplicity, 1.5, 10).is_err());
}

#[test]
fn binomials() {
    assert_eq!(binomial(5, 2), 10);
    assert_eq!(binomial(5, -1), 0);
    assert_eq!(binomial(5, 6), 0);
    assert_eq!(binomial(40, 20), 137_846_528_820);
}
