use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fhharm::kuran::{kuran_decompose, primitive_poly, KuranFamily, PrimitiveTerm};
use fhharm::numeric::rat;
use fhharm::random::random_harmonic;
use fhharm::spheremeans::m2_mean_squared;
use fhharm::verify::count_b;
use fhharm::{Exec, Polynomial, Radius};

fn harmonic(seed: u64, n: usize, deg: u32) -> Polynomial {
    random_harmonic(&mut ChaCha8Rng::seed_from_u64(seed), n, deg, 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partials_commute(seed in any::<u64>(), n in 2usize..5) {
        let h = harmonic(seed, n, 4);
        let a = h.differentiate(1, 1).unwrap().differentiate(2, 1).unwrap();
        let b = h.differentiate(2, 1).unwrap().differentiate(1, 1).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn laplacian_commutes_with_d1(seed in any::<u64>(), n in 2usize..5) {
        let p = random_harmonic(&mut ChaCha8Rng::seed_from_u64(seed), n, 3, 5);
        let q = p.try_mul(&Polynomial::var(n, n).unwrap()).unwrap().try_mul(&Polynomial::var(n, 1).unwrap()).unwrap();
        prop_assert_eq!(q.laplacian().differentiate(1, 1).unwrap(), q.differentiate(1, 1).unwrap().laplacian());
    }

    #[test]
    fn components_recombine(seed in any::<u64>(), n in 3usize..5) {
        let h = harmonic(seed, n, 4);
        let mut sum = Polynomial::zero(n);
        for c in h.homogeneous_components().unwrap() {
            let d = kuran_decompose(&c).unwrap();
            for (_, u) in d.nonzero_parts() {
                prop_assert!(!u.depends_on(1));
                prop_assert!(u.is_harmonic());
            }
            sum = sum.try_add(&d.recombine().unwrap()).unwrap();
        }
        prop_assert_eq!(sum, h);
    }

    #[test]
    fn primitive_inverts_d1(seed in any::<u64>(), n in 3usize..5, k in 0u32..4) {
        let h = harmonic(seed, n, 3);
        let p = primitive_poly(&h, k).unwrap();
        prop_assert!(p.is_harmonic());
        prop_assert_eq!(p.differentiate(1, k).unwrap(), h);
    }

    #[test]
    fn text_round_trip(seed in any::<u64>(), n in 2usize..5) {
        let h = harmonic(seed, n, 4);
        prop_assert_eq!(Polynomial::parse(&h.to_text(), Some(n)).unwrap(), h);
    }

    #[test]
    fn m2_of_homogeneous_scales(seed in any::<u64>(), num in 1i64..7, den in 1i64..7) {
        let h = harmonic(seed, 3, 4);
        let r = Radius::from_ratio(num, den).unwrap();
        for c in h.homogeneous_components().unwrap() {
            let m = c.degree() as i32;
            let base = m2_mean_squared(c.poly(), &Radius::one());
            let f = rat(num, den);
            let mut scale = rat(1, 1);
            for _ in 0..2 * m { scale *= &f; }
            prop_assert_eq!(m2_mean_squared(c.poly(), &r), base * scale);
        }
    }

    #[test]
    fn block_norm_matches_expansion(seed in any::<u64>(), order in 0u64..5) {
        let f = harmonic(seed, 3, 2);
        let t = PrimitiveTerm::new(KuranFamily::new(&f).unwrap(), order);
        let r = Radius::from_ratio(3, 2).unwrap();
        prop_assert_eq!(t.norm_squared(&r), m2_mean_squared(&t.expand().unwrap(), &r));
    }

    #[test]
    fn count_b_matches_brute_force(k in 1u32..3, half in 0u64..4, threshold in 1u64..4, t in 0u64..40_000) {
        let ell = 2 * half + 1;
        let mut members = std::collections::BTreeSet::new();
        let mut n = ell << k;
        while n * n <= t {
            if n >= threshold * ell {
                members.extend((1..=n / ell).map(|j| n * n + j * ell).filter(|&b| b <= t));
            }
            n += 2 * (ell << k);
        }
        prop_assert_eq!(count_b(k, ell, threshold, t), members.len() as u64);
    }

    #[test]
    fn sequential_and_parallel_agree(seed in any::<u64>()) {
        let f = harmonic(seed, 3, 2);
        let fam = KuranFamily::new(&f).unwrap();
        let mut sum = fhharm::kuran::HarmonicSum::new(3);
        for o in [2u64, 5, 9] {
            sum.push(PrimitiveTerm::new(fam.clone(), o));
        }
        prop_assert_eq!(sum.profile(Exec::Sequential), sum.profile(Exec::Parallel));
    }
}
