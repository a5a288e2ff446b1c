use fhharm::construct::{
    a_position, assemble_truncated, coefficient_list, default_dense_sequence, explicit_dense_sequence, index_set_a,
    index_set_b, owner, select_ell, select_ell_relaxed, EllSequence, GrowthLemmaConstant, Scale,
};
use fhharm::numeric::{int, rat};
use fhharm::spheremeans::m2_mean_squared;
use fhharm::{Error, Exec, Polynomial, Radius};

fn literal() -> (fhharm::construct::DensePlan, EllSequence) {
    let plan = default_dense_sequence(3, 2, 2, 6).unwrap();
    let cp = GrowthLemmaConstant::new(rat(57, 100), "test value").unwrap();
    let ell = select_ell(&plan, &int(1), cp, 6).unwrap();
    (plan, ell)
}

#[test]
fn dense_sequence_head() {
    let plan = default_dense_sequence(3, 2, 2, 4).unwrap();
    let fs: Vec<&Polynomial> = plan.entries().iter().map(|e| &e.f).collect();
    assert_eq!(fs[0], &Polynomial::one(3));
    assert_eq!(fs[1], &Polynomial::one(3));
    assert_eq!(fs[2], &Polynomial::constant(3, int(-1)));
    assert_eq!(coefficient_list(2), vec![int(1), int(-1), int(2), int(-2), rat(1, 2), rat(-1, 2)]);
}

#[test]
fn literal_ell_sequence() {
    let (_, ell) = literal();
    assert_eq!(ell.scale, Scale::Literal);
    assert_eq!(ell.threshold, 10);
    assert_eq!(ell.ell(1).unwrap(), 5);
    assert!(ell.ells().windows(2).all(|w| w[0] < w[1] && w[1] % 2 == 1));
    assert!(ell.choice_sum <= *ell.choice_limit.as_ref().unwrap());
}

#[test]
fn index_sets() {
    let (_, ell) = literal();
    assert_eq!(owner(50), Some(1));
    assert_eq!(owner(7), None);
    assert_eq!(a_position(50, 1, 5), Some(3));
    let b = index_set_b(50, 1, &ell).unwrap();
    assert_eq!(b.len(), 10);
    assert_eq!((b[0], *b.last().unwrap()), (2505, 2550));
    assert!(matches!(index_set_b(10, 1, &ell), Err(Error::BelowThreshold { .. })));
    let a = index_set_a(1, &ell, 200).unwrap();
    assert_eq!(a, vec![10, 30, 50, 70, 90, 110, 130, 150, 170, 190]);
}

#[test]
fn relaxed_truncation_matches_expansion() {
    let plan = explicit_dense_sequence(3, vec![Polynomial::parse("x1 x2 + 1", Some(3)).unwrap()], 3).unwrap();
    let ell = select_ell_relaxed(3);
    assert_eq!(ell.ells(), &[1, 3, 5]);
    let h = assemble_truncated(&plan, &ell, 4).unwrap();
    let e = h.expand().unwrap();
    for r in [Radius::one(), Radius::from_ratio(3, 4).unwrap()] {
        assert_eq!(h.m2_squared(&r, Exec::Sequential).unwrap(), m2_mean_squared(&e, &r));
        assert_eq!(h.m2_squared(&r, Exec::Parallel).unwrap(), m2_mean_squared(&e, &r));
    }
}

#[test]
fn explicit_plan_rejects_non_harmonic_generators() {
    assert!(explicit_dense_sequence(3, vec![Polynomial::parse("x1^2", Some(3)).unwrap()], 2).is_err());
    assert!(explicit_dense_sequence(3, vec![], 2).is_err());
}
