use quartic_lines::bounds::{Series, SeriesProfile};
use quartic_lines::configs::{pipeline, ConfigSystem, PipelineOptions, PipelineReport};

fn report(series: Series) -> (ConfigSystem, PipelineReport) {
    let sys = SeriesProfile::of(series).system().unwrap();
    let report = pipeline(series, &PipelineOptions::default()).unwrap();
    (sys, report)
}

fn assert_pairings(sys: &ConfigSystem, members: &[usize]) {
    let (lo, hi) = (sys.q0 + 2, sys.q0 + 3);
    for (k, &a) in members.iter().enumerate() {
        for &b in &members[k + 1..] {
            let p = sys.lattice.pairing(&sys.vectors[a], &sys.vectors[b]).unwrap();
            assert!(p == lo || p == hi, "pairing {p} between {a} and {b}");
        }
    }
}

#[test]
fn survivors_are_admissible() {
    for series in [Series::X, Series::J, Series::JStar, Series::L] {
        let (sys, report) = report(series);
        assert!(!report.survivors.is_empty(), "{series:?}");
        for s in &report.survivors {
            assert_pairings(&sys, &s.members);
        }
    }
}

#[test]
fn x_sixteen_meets_each_lambda_in_four_disjoint_lines() {
    let (sys, report) = report(Series::X);
    let hit = sys.q0 + 3;
    let sixteen: Vec<_> = report.survivors.iter().filter(|s| s.members.len() == 16).collect();
    assert!(!sixteen.is_empty() && !sys.lambda.is_empty());
    for s in sixteen {
        for l in &sys.lambda {
            let meets: Vec<usize> = s
                .members
                .iter()
                .copied()
                .filter(|&i| sys.lattice.pairing(&sys.vectors[i], l).unwrap() == hit)
                .collect();
            assert_eq!(meets.len(), 4, "{l}");
            assert!(meets.iter().enumerate().all(|(k, &a)| meets[k + 1..].iter().all(|&b| !sys.adjacent(a, b))));
        }
    }
}
