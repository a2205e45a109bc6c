use syndrec_core::de::{
    baseline, de_converges, de_evolve, search, threshold, DeParams, DegreeDistribution,
    SearchConfig,
};

fn params() -> DeParams {
    DeParams {
        population: 10_000,
        max_iters: 200,
        ..DeParams::default()
    }
}

#[test]
fn convergence_is_monotone_in_crossover() {
    let dd = DegreeDistribution::regular(3, 6).unwrap();
    let grid: Vec<bool> = (1..=14)
        .map(|k| de_converges(&dd, 0.01 * k as f64, &params()).unwrap())
        .collect();
    let first_failure = grid.iter().position(|&c| !c).unwrap();
    assert!(grid[first_failure..].iter().all(|&c| !c), "{grid:?}");
    assert!((7..=9).contains(&first_failure), "{grid:?}");
}

#[test]
fn threshold_brackets_itself() {
    let dd = DegreeDistribution::regular(3, 6).unwrap();
    let p = params();
    let report = threshold(&dd, 0.004, &p).unwrap();
    assert!(report.upper - report.lower <= 0.004);
    assert!(de_converges(&dd, report.lower, &p).unwrap());
    assert!(!de_converges(&dd, report.upper, &p).unwrap());
    assert!(de_converges(&dd, report.p_star - report.tol, &p).unwrap());
    assert!(!de_converges(&dd, report.p_star + report.tol, &p).unwrap());
    assert!((0.0..=0.5).contains(&report.p_star));
}

#[test]
fn lower_design_rate_tolerates_more_noise() {
    let p = params();
    let half = DegreeDistribution::with_concentrated_checks(vec![(3, 1.0)], 0.5).unwrap();
    let low = DegreeDistribution::with_concentrated_checks(vec![(3, 1.0)], 0.3).unwrap();
    let t_half = threshold(&half, 0.004, &p).unwrap().p_star;
    let t_low = threshold(&low, 0.004, &p).unwrap().p_star;
    assert!(t_low > t_half, "{t_low} vs {t_half}");
}

#[test]
fn evolution_reports_error_rate() {
    let dd = DegreeDistribution::regular(3, 6).unwrap();
    let good = de_evolve(&dd, 0.03, &params()).unwrap();
    assert!(good.converged && good.error_rate < 1e-4);
    let bad = de_evolve(&dd, 0.2, &params()).unwrap();
    assert!(!bad.converged && bad.error_rate > 0.01);
    assert_eq!(bad.iterations, 200);
}

#[test]
fn search_keeps_at_least_the_baseline() {
    let mut cfg = SearchConfig::new(0.5, 8, 10, 17);
    cfg.de = params();
    cfg.tol = 0.004;
    let out = search(&cfg).unwrap();
    assert_eq!(out.baseline, baseline(0.5, 8).unwrap());
    assert!(out.threshold.p_star >= out.baseline_threshold.p_star);
    assert_eq!(search(&cfg).unwrap(), out);
}

#[test]
fn ensembles_round_trip_through_json() {
    let dd = DegreeDistribution::new(vec![(2, 0.4), (3, 0.6)], vec![(6, 1.0)]).unwrap();
    let json = serde_json::to_string(&dd).unwrap();
    assert_eq!(json, r#"{"lambda":[[2,0.4],[3,0.6]],"rho":[[6,1.0]]}"#);
    let back: DegreeDistribution = serde_json::from_str(&json).unwrap();
    assert_eq!(back, dd);
    assert!(serde_json::from_str::<DegreeDistribution>(r#"{"lambda":[[2,0.5]],"rho":[[6,1.0]]}"#)
        .is_err());
}
