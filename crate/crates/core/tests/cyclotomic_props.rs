use butson::cyclotomic::{cyclotomic_polynomial, CycInt, CyclotomicField};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[test]
fn divisor_product_is_x_m_minus_one() {
    for m in 1..=200usize {
        let mut prod = vec![1i128];
        for d in (1..=m).filter(|d| m % d == 0) {
            let phi: Vec<i128> = cyclotomic_polynomial(d).into_iter().map(i128::from).collect();
            prod = poly_mul(&prod, &phi);
        }
        let mut expect = vec![0i128; m + 1];
        expect[0] = -1;
        expect[m] = 1;
        assert_eq!(prod, expect, "m = {m}");
    }
}

#[test]
fn exact_zero_agrees_with_floating_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut zeros = 0;
    for _ in 0..1000 {
        let m = rng.gen_range(1..=24usize);
        let mut coeffs = vec![0i64; m];
        // Half the samples are sums of full orbits of a subgroup, which vanish.
        if rng.gen_bool(0.5) {
            let divisors: Vec<usize> = (2..=m).filter(|d| m % d == 0).collect();
            if divisors.is_empty() {
                coeffs[0] = rng.gen_range(-3..=3);
            } else {
                for _ in 0..rng.gen_range(1..=3) {
                    let d = divisors[rng.gen_range(0..divisors.len())];
                    let shift = rng.gen_range(0..m);
                    let c = rng.gen_range(-3..=3);
                    for k in 0..d {
                        coeffs[(shift + k * m / d) % m] += c;
                    }
                }
            }
        } else {
            for c in coeffs.iter_mut() {
                *c = rng.gen_range(-2..=2);
            }
        }
        let x = CycInt::new(m, coeffs).unwrap();
        let exact = x.is_zero();
        let approx = x.to_complex().norm() < 1e-9;
        assert_eq!(exact, approx, "{x:?}");
        zeros += usize::from(exact);
    }
    assert!(zeros > 100, "sampler produced only {zeros} zero sums");
}

proptest! {
    #[test]
    fn multiplication_matches_complex(m in 1usize..30, a in prop::collection::vec(-5i64..=5, 30), b in prop::collection::vec(-5i64..=5, 30)) {
        let x = CycInt::new(m, a[..m].to_vec()).unwrap();
        let y = CycInt::new(m, b[..m].to_vec()).unwrap();
        let p = x.mul(&y).unwrap();
        let diff = p.to_complex() - x.to_complex() * y.to_complex();
        prop_assert!(diff.norm() < 1e-6);
    }

    #[test]
    fn norm_of_nonzero_is_nonzero(m in 1usize..30, a in prop::collection::vec(-3i64..=3, 30)) {
        let x = CycInt::new(m, a[..m].to_vec()).unwrap();
        let n = x.mul(&x.conj()).unwrap();
        prop_assert_eq!(x.is_zero(), n.is_zero());
    }

    #[test]
    fn reduction_is_canonical(m in 1usize..40, a in prop::collection::vec(-4i64..=4, 40), k in 0usize..40) {
        let field = CyclotomicField::new(m);
        let x = CycInt::new(m, a[..m].to_vec()).unwrap();
        // Adding a multiple of the orbit sum 1 + zeta + ... over a full cycle changes nothing when m > 1.
        let mut shifted = x.coeffs().to_vec();
        if m > 1 {
            for c in shifted.iter_mut() {
                *c += (k % 3) as i64;
            }
        }
        let y = CycInt::new(m, shifted).unwrap();
        prop_assert_eq!(field.reduce(&x).unwrap(), field.reduce(&y).unwrap());
    }

    #[test]
    fn embedding_is_a_ring_map(m in 1usize..15, k in 1usize..5, a in prop::collection::vec(-3i64..=3, 15), b in prop::collection::vec(-3i64..=3, 15)) {
        let x = CycInt::new(m, a[..m].to_vec()).unwrap();
        let y = CycInt::new(m, b[..m].to_vec()).unwrap();
        let lhs = x.mul(&y).unwrap().embed(m * k).unwrap();
        let rhs = x.embed(m * k).unwrap().mul(&y.embed(m * k).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
