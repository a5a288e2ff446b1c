use fhharm::construct::{explicit_dense_sequence, EllSequence};
use fhharm::numeric::{int, rat};
use fhharm::verify::{
    count_b, density_target, fhc_residual, fhc_residual_expanded, growth_bound_squared, is_concave_at,
    log_concavity_check, lower_density_raw, skip_lemma_check, tail_bound, SkipSequence,
};
use fhharm::{Error, Exec, Polynomial, Radius};

#[test]
fn density_count_oracle() {
    let rep = lower_density_raw(1, 5, 10, 100_000_000).unwrap();
    assert_eq!(rep.count, 499_992);
    assert_eq!(density_target(1, 5), rat(1, 200));
    assert_eq!(count_b(1, 5, 10, 2550), 10);
    assert_eq!(count_b(1, 5, 10, 2504), 0);
}

#[test]
fn tail_bound_decreases_with_truncation() {
    let r = Radius::from_ratio(4, 5).unwrap();
    let a = tail_bound(&int(100), 51, &r, 2550).unwrap();
    let b = tail_bound(&int(100), 52, &r, 2550).unwrap();
    assert!(b.to_f64() < a.to_f64());
    assert!(a.to_f64() < 1e-100);
}

#[test]
fn growth_bound_at_one() {
    // C² e² / 1 at r = 1
    let b = growth_bound_squared(&int(1), &Radius::one(), 3);
    assert!((b.to_f64() - std::f64::consts::E.powi(2)).abs() < 1e-12);
}

#[test]
fn residual_oracle_on_a_relaxed_plan() {
    let plan = explicit_dense_sequence(3, vec![Polynomial::one(3), Polynomial::parse("x3", Some(3)).unwrap()], 3).unwrap();
    let ell = EllSequence::relaxed(vec![1, 3, 5], 1).unwrap();
    let r = Radius::one();
    for s in [5, 6] {
        let rep = fhc_residual(&plan, &ell, 1, 2, s, &r, 4, Exec::Sequential).unwrap();
        let direct = fhc_residual_expanded(&plan, &ell, 1, 2, s, &r, 4).unwrap();
        assert_eq!(rep.residual_squared.as_rational(), Some(&direct));
    }
    assert!(matches!(
        fhc_residual(&plan, &ell, 1, 2, 9, &r, 4, Exec::Sequential),
        Err(Error::NotInWindow { .. })
    ));
}

#[test]
fn concavity_onsets() {
    assert!(is_concave_at(3, 1));
    for n in 2..=6 {
        let rep = log_concavity_check(n, 10.0, 1, 200).unwrap();
        assert!(rep.onset >= 1);
    }
}

#[test]
fn skip_inequality_on_geometric_sequences() {
    for l in 1..=5 {
        for u in 0..l {
            assert!(skip_lemma_check(&SkipSequence::Geometric(rat(1, 2)), l, u).unwrap().holds);
        }
    }
}
