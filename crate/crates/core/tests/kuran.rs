use fhharm::kuran::{
    axial_coefficients, axial_harmonic, block_norm_squared, dim_harmonic, growth_constant_certificate, kuran_decompose,
    primitive, primitive_bound_constant, restrict_axial, KuranFamily, PrimitiveTerm,
};
use fhharm::numeric::{int, rat};
use fhharm::spheremeans::m2_mean_squared;
use fhharm::{HomogeneousHarmonic, Polynomial, Radius};
use num_bigint::BigUint;

fn p(s: &str, n: usize) -> Polynomial {
    Polynomial::parse(s, Some(n)).unwrap()
}

fn hh(s: &str, n: usize) -> HomogeneousHarmonic {
    HomogeneousHarmonic::from_poly(p(s, n)).unwrap()
}

#[test]
fn axial_oracles() {
    assert_eq!(axial_harmonic(2, 3).unwrap().poly.poly(), &p("x1^2 - 1/2 x2^2 - 1/2 x3^2", 3));
    assert_eq!(axial_coefficients(4, 3), vec![int(1), int(-3), rat(3, 8)]);
    assert_eq!(restrict_axial(2, 2, 1).unwrap(), p("x1^2 - 1/3 x2^2", 2));
}

#[test]
fn harmonic_dimensions() {
    assert_eq!(dim_harmonic(2, 3), BigUint::from(5u32));
    assert_eq!(dim_harmonic(3, 4), BigUint::from(16u32));
    assert_eq!(dim_harmonic(0, 7), BigUint::from(1u32));
}

#[test]
fn decomposition_of_a_mixed_harmonic() {
    let h = hh("x1^2 x2 - 1/3 x2^3 + x1 x2 x3", 3);
    let d = kuran_decompose(&h).unwrap();
    assert_eq!(d.recombine().unwrap(), *h.poly());
    for (q, u) in d.nonzero_parts() {
        assert!(!u.depends_on(1));
        assert_eq!(u.degree(), Some(q));
    }
}

#[test]
fn primitive_oracles() {
    let one = HomogeneousHarmonic::new(Polynomial::one(3), 0).unwrap();
    assert_eq!(primitive(&one, 2).unwrap().poly(), &p("1/2 x1^2 - 1/4 x2^2 - 1/4 x3^2", 3));
    assert_eq!(primitive(&hh("x2", 3), 1).unwrap().poly(), &p("x1 x2", 3));
    // M_2²(P_2(1), 1) = 1/20 on S²
    assert_eq!(primitive_bound_constant(2, 0, 3), rat(1, 20));
    assert_eq!(m2_mean_squared(primitive(&one, 2).unwrap().poly(), &Radius::one()), rat(1, 20));
}

#[test]
fn growth_constants() {
    assert_eq!(growth_constant_certificate(0, 3, 40).unwrap().c_squared, int(1));
    assert_eq!(growth_constant_certificate(2, 3, 40).unwrap().c_squared, int(60));
}

#[test]
fn block_norm_agrees_with_expansion() {
    let fam = KuranFamily::new(&p("x1 x2 + x3 - 2", 3)).unwrap();
    let r = Radius::from_ratio(5, 3).unwrap();
    for k in 0..8 {
        let t = PrimitiveTerm::new(fam.clone(), k);
        assert_eq!(block_norm_squared(&t, &r), m2_mean_squared(&t.expand().unwrap(), &r), "k = {k}");
    }
}
