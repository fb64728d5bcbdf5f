use lifted::gf2e::{Field, FieldElement};
use lifted::monomials::multi_indices;
use lifted::polynomial::{
    decode_by_support_search, decode_univariate_multiplicity, disagreements, full_line_radius,
    hermite_interpolate, punctured_line_radius, reduce_equiv, restrict_along,
    restrict_to_generic_line, Line, MultiPoly, PolyError, Sample, UniPoly,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn random_poly(f: &Field, r: &mut ChaCha20Rng, len: usize) -> UniPoly {
    UniPoly::from_coeffs(
        (0..len)
            .map(|_| FieldElement::from_raw(r.gen_range(0..f.order())))
            .collect(),
    )
}

fn random_multi(f: &Field, r: &mut ChaCha20Rng, m: usize, max_exp: u32, terms: usize) -> MultiPoly {
    let mut p = MultiPoly::zero(m);
    for _ in 0..terms {
        let e: Vec<u32> = (0..m).map(|_| r.gen_range(0..=max_exp)).collect();
        p.add_term(&e, FieldElement::from_raw(r.gen_range(1..f.order())));
    }
    p
}

/// Hasse derivative of order j straight from the definition:
/// coefficient of Z^j in g(x + Z), with binomials computed mod 2.
fn hasse_oracle(f: &Field, g: &UniPoly, x: FieldElement, j: usize) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    for (k, &c) in g.coeffs().iter().enumerate() {
        if k < j {
            continue;
        }
        // Pascal's triangle mod 2.
        let mut row = vec![1u8];
        for _ in 0..k {
            let mut next = vec![1u8; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] ^ row[i];
            }
            row = next;
        }
        if row[j] == 1 {
            acc += f.mul(c, f.pow(x, (k - j) as u64));
        }
    }
    acc
}

#[test]
fn hasse_derivatives_match_definition() {
    let f = Field::new(3).unwrap();
    let mut r = rng(1);
    for _ in 0..50 {
        let g = random_poly(&f, &mut r, 20);
        for x in f.elements() {
            let got = g.derivatives_at(&f, x, 5);
            for (j, &v) in got.iter().enumerate() {
                assert_eq!(v, hasse_oracle(&f, &g, x, j));
            }
        }
    }
}

#[test]
fn reduce_equiv_preserves_all_low_order_derivatives() {
    let mut r = rng(2);
    for (q, s) in [(2u32, 1u32), (4, 1), (4, 2), (8, 1), (8, 2), (8, 4), (4, 4)] {
        let f = Field::of_order(q).unwrap();
        for _ in 0..30 {
            let g = random_poly(&f, &mut r, (5 * q * s) as usize);
            let red = reduce_equiv(&g, q, s);
            assert!(red.degree().is_none_or(|d| d < (q * s) as usize));
            for x in f.elements() {
                assert_eq!(
                    g.derivatives_at(&f, x, s as usize),
                    red.derivatives_at(&f, x, s as usize)
                );
            }
        }
    }
}

#[test]
fn reduce_equiv_leaves_low_degree_polynomials_alone() {
    let f = Field::of_order(8).unwrap();
    let mut r = rng(3);
    for _ in 0..20 {
        let g = random_poly(&f, &mut r, 16);
        assert_eq!(reduce_equiv(&g, 8, 2), g);
    }
}

#[test]
fn multiplicity_zero_count_is_bounded_by_degree() {
    let mut r = rng(4);
    for (q, s) in [(8u32, 1u32), (8, 2), (16, 4)] {
        let f = Field::of_order(q).unwrap();
        for _ in 0..200 {
            let len = r.gen_range(1..(q * s) as usize);
            let mut g = random_poly(&f, &mut r, len);
            if g.is_zero() {
                g = UniPoly::monomial(0, FieldElement::ONE);
            }
            let deg = g.degree().unwrap();
            let zeros = f
                .elements()
                .filter(|&x| {
                    g.derivatives_at(&f, x, s as usize)
                        .iter()
                        .all(|v| v.is_zero())
                })
                .count();
            assert!(
                zeros * (s as usize) <= deg,
                "q={q} s={s} deg={deg} zeros={zeros}"
            );
        }
    }
}

#[test]
fn hermite_interpolation_round_trip() {
    let mut r = rng(5);
    for (q, s) in [(8u32, 1usize), (8, 2), (16, 3), (4, 4)] {
        let f = Field::of_order(q).unwrap();
        for _ in 0..100 {
            let n = r.gen_range(1..=q as usize);
            let bound = n * s;
            let g = random_poly(&f, &mut r, bound);
            let samples: Vec<Sample> = f
                .elements()
                .take(n)
                .map(|x| Sample::new(x, g.derivatives_at(&f, x, s)))
                .collect();
            assert_eq!(hermite_interpolate(&f, &samples, bound).unwrap(), g);
        }
    }
}

#[test]
fn plain_interpolation_matches_lagrange() {
    let f = Field::of_order(16).unwrap();
    let mut r = rng(6);
    for _ in 0..50 {
        let n = r.gen_range(1..=16usize);
        let pts: Vec<FieldElement> = f.elements().skip(16 - n).collect();
        let vals: Vec<FieldElement> = pts
            .iter()
            .map(|_| FieldElement::from_raw(r.gen_range(0..16)))
            .collect();
        let mut lagrange = UniPoly::zero();
        for (i, (&xi, &yi)) in pts.iter().zip(&vals).enumerate() {
            let mut basis = UniPoly::monomial(0, yi);
            for (k, &xk) in pts.iter().enumerate() {
                if k != i {
                    let lin = UniPoly::from_coeffs(vec![xk, FieldElement::ONE]);
                    basis = basis.mul(&f, &lin).scale(&f, f.inv(xi + xk).unwrap());
                }
            }
            lagrange = lagrange.add(&basis);
        }
        let samples: Vec<Sample> = pts
            .iter()
            .zip(&vals)
            .map(|(&x, &y)| Sample::new(x, vec![y]))
            .collect();
        assert_eq!(hermite_interpolate(&f, &samples, n).unwrap(), lagrange);
    }
}

#[test]
fn interpolation_reports_missing_data() {
    let f = Field::of_order(8).unwrap();
    let samples = vec![Sample::new(FieldElement::ONE, vec![FieldElement::ONE])];
    assert!(hermite_interpolate(&f, &samples, 3).is_err());
}

fn corrupt_samples(f: &Field, r: &mut ChaCha20Rng, samples: &mut [Sample], count: usize) {
    let n = samples.len();
    for idx in rand::seq::index::sample(r, n, count) {
        let smp = &mut samples[idx];
        loop {
            let e: Vec<FieldElement> = smp
                .values
                .iter()
                .map(|_| FieldElement::from_raw(r.gen_range(0..f.order())))
                .collect();
            if e.iter().any(|x| !x.is_zero()) {
                for (v, e) in smp.values.iter_mut().zip(e) {
                    *v += e;
                }
                break;
            }
        }
    }
}

#[test]
fn decoder_corrects_up_to_its_radius() {
    let mut r = rng(7);
    let mut trials = 0;
    for (q, s, red) in [
        (16u32, 1usize, 4u32),
        (16, 2, 6),
        (8, 1, 4),
        (8, 2, 5),
        (16, 4, 17),
        (32, 1, 10),
    ] {
        let f = Field::of_order(q).unwrap();
        let bound = q as usize * s - red as usize;
        let radius = full_line_radius(red, s as u32) as usize;
        for _ in 0..2000 {
            trials += 1;
            let g = random_poly(&f, &mut r, bound);
            let mut samples: Vec<Sample> = f
                .elements()
                .map(|x| Sample::new(x, g.derivatives_at(&f, x, s)))
                .collect();
            let errs = r.gen_range(0..=radius);
            corrupt_samples(&f, &mut r, &mut samples, errs);
            let got = decode_univariate_multiplicity(&f, &samples, bound, radius).unwrap();
            assert_eq!(got, g, "q={q} s={s} r={red} errors={errs}");
        }
    }
    assert!(trials >= 10_000);
}

#[test]
fn decoder_agrees_with_support_search() {
    let mut r = rng(8);
    for (q, s, red) in [(8u32, 1usize, 4u32), (8, 2, 5), (4, 2, 4)] {
        let f = Field::of_order(q).unwrap();
        let bound = q as usize * s - red as usize;
        let radius = full_line_radius(red, s as u32) as usize;
        for _ in 0..300 {
            let g = random_poly(&f, &mut r, bound);
            let mut samples: Vec<Sample> = f
                .elements()
                .map(|x| Sample::new(x, g.derivatives_at(&f, x, s)))
                .collect();
            // Up to two past the radius, so both failures and miscorrections occur.
            let errs = r.gen_range(0..=radius + 2);
            corrupt_samples(&f, &mut r, &mut samples, errs);
            let fast = decode_univariate_multiplicity(&f, &samples, bound, radius);
            let slow = decode_by_support_search(&f, &samples, bound, radius);
            match (&fast, &slow) {
                (Ok(a), Ok(b)) => assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                _ => panic!("q={q} s={s} errors={errs}: {fast:?} vs {slow:?}"),
            }
        }
    }
}

#[test]
fn decoder_never_returns_a_far_word() {
    let mut r = rng(9);
    let f = Field::of_order(16).unwrap();
    let (s, red) = (2usize, 9u32);
    let bound = 32 - red as usize;
    let radius = full_line_radius(red, s as u32) as usize;
    for _ in 0..500 {
        let samples: Vec<Sample> = f
            .elements()
            .map(|x| {
                Sample::new(
                    x,
                    (0..s)
                        .map(|_| FieldElement::from_raw(r.gen_range(0..16)))
                        .collect(),
                )
            })
            .collect();
        if let Ok(g) = decode_univariate_multiplicity(&f, &samples, bound, radius) {
            assert!(g.degree().is_none_or(|d| d < bound));
            assert!(disagreements(&f, &g, &samples) <= radius);
        }
    }
}

#[test]
fn decoder_rejects_insufficient_data() {
    let f = Field::of_order(8).unwrap();
    let samples: Vec<Sample> = f
        .elements()
        .take(3)
        .map(|x| Sample::new(x, vec![x]))
        .collect();
    assert!(matches!(
        decode_univariate_multiplicity(&f, &samples, 3, 1),
        Err(PolyError::InsufficientData { .. })
    ));
}

#[test]
fn radii() {
    assert_eq!(full_line_radius(4, 1), 2);
    assert_eq!(punctured_line_radius(4, 1), 1);
    assert_eq!(full_line_radius(6, 2), 1);
    assert_eq!(punctured_line_radius(1, 1), 0);
}

#[test]
fn generic_restriction_specializes_to_numeric_restriction() {
    let mut r = rng(10);
    for q in [4u32, 8] {
        let f = Field::of_order(q).unwrap();
        for _ in 0..20 {
            let p = random_multi(&f, &mut r, 2, 2 * q - 1, 6);
            let generic = restrict_to_generic_line(&p);
            for _ in 0..5 {
                let w: Vec<FieldElement> = (0..2)
                    .map(|_| FieldElement::from_raw(r.gen_range(0..q)))
                    .collect();
                let v: Vec<FieldElement> = (0..2)
                    .map(|_| FieldElement::from_raw(r.gen_range(0..q)))
                    .collect();
                let wv: Vec<FieldElement> = w.iter().chain(&v).copied().collect();
                let specialized = UniPoly::from_coeffs(
                    generic.iter().map(|c| c.eval(&f, &wv).unwrap()).collect(),
                );
                assert_eq!(specialized, restrict_along(&f, &p, &w, &v).unwrap());
                for t in f.elements() {
                    let pt: Vec<FieldElement> =
                        w.iter().zip(&v).map(|(&a, &b)| a + f.mul(b, t)).collect();
                    assert_eq!(specialized.eval(&f, t), p.eval(&f, &pt).unwrap());
                }
            }
        }
    }
}

#[test]
fn derivative_vector_matches_individual_hasse_derivatives() {
    let mut r = rng(11);
    let f = Field::of_order(8).unwrap();
    for _ in 0..30 {
        let p = random_multi(&f, &mut r, 3, 9, 5);
        let x: Vec<FieldElement> = (0..3)
            .map(|_| FieldElement::from_raw(r.gen_range(0..8)))
            .collect();
        let dv = p.eval_with_derivatives(&f, &x, 3).unwrap();
        for (slot, i) in multi_indices(3, 3).iter().enumerate() {
            assert_eq!(
                dv.entries[slot],
                p.hasse_derivative(i).unwrap().eval(&f, &x).unwrap()
            );
            assert_eq!(dv.get(i), Some(dv.entries[slot]));
        }
    }
}

#[test]
fn lines_are_canonical() {
    let f = Field::of_order(8).unwrap();
    let e = FieldElement::from_raw;
    let a = Line::new(&f, vec![e(1), e(2)], vec![e(3), e(5)]).unwrap();
    let shifted = a.point(&f, e(6));
    let scaled: Vec<FieldElement> = a.direction().iter().map(|&c| f.mul(c, e(7))).collect();
    let b = Line::new(&f, shifted, scaled).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.direction()[0], FieldElement::ONE);
    assert!(matches!(
        Line::new(&f, vec![e(1)], vec![e(0)]),
        Err(PolyError::ZeroDirection)
    ));
}
