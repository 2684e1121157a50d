use std::time::Instant;

use ladder_core::checks::{first_failure, run_suite, Fault, Status, SuiteConfig};
use ladder_core::numeric::solve_lambda;

#[test]
fn default_suite_passes_for_golden_ladder() {
    let p = solve_lambda(2, 1).unwrap();
    let start = Instant::now();
    let verdicts = run_suite(&p, &SuiteConfig::default());
    eprintln!("suite took {:?}", start.elapsed());
    for v in &verdicts {
        eprintln!("{:?} {} {}", v.status, v.name, v.detail);
    }
    assert_eq!(verdicts.len(), 12);
    assert!(first_failure(&verdicts).is_none());
}

#[test]
fn suite_passes_across_parameters() {
    let cfg = SuiteConfig {
        depth: 10,
        max_word_len: 6,
        round_trips: 60,
        random_points: 60,
        ..SuiteConfig::default()
    };
    for (k, l) in [(3, 1), (5, 1), (5, 2), (13, 4)] {
        let p = solve_lambda(k, l).unwrap();
        let verdicts = run_suite(&p, &cfg);
        if let Some(v) = first_failure(&verdicts) {
            panic!("({k},{l}) {}: {}", v.name, v.detail);
        }
    }
}

#[test]
fn each_fault_breaks_its_check() {
    let p = solve_lambda(2, 1).unwrap();
    let base = SuiteConfig {
        depth: 8,
        max_word_len: 0,
        round_trips: 10,
        random_points: 10,
        ..SuiteConfig::default()
    };
    for (fault, name) in [
        (Fault::HexagonGluing, "hexagon-rotation-symmetry"),
        (Fault::ChartFactor, "conjugation-identity"),
        (Fault::AreaTail, "area-identity"),
    ] {
        let verdicts = run_suite(&p, &SuiteConfig { fault: Some(fault), ..base.clone() });
        let failed: Vec<_> = verdicts.iter().filter(|v| v.status == Status::Fail).map(|v| v.name.as_str()).collect();
        assert_eq!(failed, [name], "{fault}");
        let gap = verdicts.iter().find(|v| v.name == "cusp-orbit-gap").unwrap();
        assert_eq!(gap.status, Status::Skipped);
    }
}
