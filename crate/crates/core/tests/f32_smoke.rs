use bjlab::{
    classify_left, classify_right, is_bj_functional, is_bj_min, operator_norm, search_counterexample, support_set,
    Decision, Direction, OperatorMatrixF32, SearchConfig, SpaceF32, Tolerances,
};

fn tol() -> Tolerances<f32> {
    Tolerances::default()
}

#[test]
fn orthogonality_in_single_precision() {
    let s: SpaceF32 = "lp(inf,2)".parse().unwrap();
    assert_eq!(
        is_bj_min(&s, &[1.0, 1.0], &[0.0, 1.0], &tol()).unwrap().decision,
        Decision::Orthogonal
    );
    assert_eq!(
        is_bj_functional(&s, &[0.0, 1.0], &[1.0, 1.0], &tol()).unwrap().decision,
        Decision::NotOrthogonal
    );
    let s: SpaceF32 = "lp(3,3)".parse().unwrap();
    let (lo, hi) = support_set(&s, &[0.5, -0.25, 1.0], &tol())
        .unwrap()
        .range(&[1.0, 0.0, 0.0])
        .unwrap();
    assert!((lo - hi).abs() < 1e-6 && lo > 0.0);
}

#[test]
fn classification_in_single_precision() {
    let s: SpaceF32 = "sup(lp(2,2),lp(1,2))".parse().unwrap();
    assert!(classify_left(&s, &[0.6, 0.8, 0.0, 0.0], &tol()).unwrap());
    assert!(!classify_right(&s, &[0.6, 0.8, 0.0, 0.0], &tol()).unwrap());
    let l: SpaceF32 = "lp(inf,2)".parse().unwrap();
    let cfg = SearchConfig::default().with_budget(500);
    assert!(search_counterexample(&l, &[1.0, 1.0], Direction::Left, &cfg, &tol())
        .unwrap()
        .is_some());
}

#[test]
fn operator_norm_in_single_precision() {
    let t = OperatorMatrixF32::from_rows(
        vec![vec![1.0, 2.0], vec![-3.0, 0.5]],
        "lp(1,2)".parse().unwrap(),
        "lp(inf,2)".parse().unwrap(),
    )
    .unwrap();
    assert_eq!(operator_norm(&t).unwrap(), 3.0);
}
