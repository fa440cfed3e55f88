use cascadia::stats::*;
use proptest::prelude::*;

fn sample() -> impl Strategy<Value = Vec<f64>> {
    // small integer support so ties are common
    prop::collection::vec((-20i32..20).prop_map(|v| f64::from(v) / 4.0), 1..40)
}

/// Scans every observed value and compares the two ECDFs there.
fn d_oracle(a: &[f64], b: &[f64]) -> f64 {
    let ecdf = |s: &[f64], x: f64| s.iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
    a.iter()
        .chain(b)
        .map(|&x| (ecdf(a, x) - ecdf(b, x)).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn d_matches_scan(a in sample(), b in sample()) {
        let r = ks_two_sample(&a, &b).unwrap();
        prop_assert!((r.d_statistic - d_oracle(&a, &b)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&r.d_statistic));
        prop_assert!((0.0..=1.0).contains(&r.p_value));
    }

    #[test]
    fn symmetric(a in sample(), b in sample()) {
        let x = ks_two_sample(&a, &b).unwrap();
        let y = ks_two_sample(&b, &a).unwrap();
        prop_assert_eq!(x.d_statistic, y.d_statistic);
        prop_assert_eq!(x.p_value, y.p_value);
    }

    #[test]
    fn monotone_transform_keeps_d(a in sample(), b in sample()) {
        let f = |v: &Vec<f64>| -> Vec<f64> { v.iter().map(|x| x.powi(3) + 2.0 * x + 1.0).collect() };
        let g = |v: &Vec<f64>| -> Vec<f64> { v.iter().map(|x| x.exp()).collect() };
        let base = ks_two_sample(&a, &b).unwrap().d_statistic;
        prop_assert_eq!(ks_two_sample(&f(&a), &f(&b)).unwrap().d_statistic, base);
        prop_assert_eq!(ks_two_sample(&g(&a), &g(&b)).unwrap().d_statistic, base);
    }

    #[test]
    fn q_non_increasing(x in 0.0f64..4.0, y in 0.0f64..4.0) {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        prop_assert!(kolmogorov_q(lo) >= kolmogorov_q(hi));
    }

    #[test]
    fn summary_translation(v in prop::collection::vec(-1000.0f64..1000.0, 1..50), c in -1e4f64..1e4) {
        let s = summary_stats(&v).unwrap();
        let shifted: Vec<f64> = v.iter().map(|x| x + c).collect();
        let t = summary_stats(&shifted).unwrap();
        let tol = 1e-9 * (1.0 + c.abs() + s.max.abs().max(s.min.abs()));
        prop_assert!((t.mean - (s.mean + c)).abs() <= tol);
        prop_assert!((t.min - (s.min + c)).abs() <= tol);
        prop_assert!((t.max - (s.max + c)).abs() <= tol);
        prop_assert!((t.sd - s.sd).abs() <= tol);
        prop_assert!(s.min <= s.mean && s.mean <= s.max);
    }
}

#[test]
fn p_non_increasing_in_d_at_fixed_sizes() {
    // slide a 7-point sample across a 9-point one; sort results by d
    let b: Vec<f64> = (0..9).map(f64::from).collect();
    let mut results: Vec<KsResult> = (-10..=10)
        .map(|s| {
            let a: Vec<f64> = (0..7).map(|i| f64::from(i + s) + 0.5).collect();
            ks_two_sample(&a, &b).unwrap()
        })
        .collect();
    results.sort_by(|x, y| x.d_statistic.total_cmp(&y.d_statistic));
    for w in results.windows(2) {
        assert!(w[0].p_value >= w[1].p_value, "{:?} {:?}", w[0], w[1]);
    }
    assert!(results.first().unwrap().d_statistic < results.last().unwrap().d_statistic);
}

#[test]
fn known_values() {
    let r = ks_two_sample(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
    assert_eq!(r.d_statistic, 1.0);
    // Q(sqrt(1.5)) computed from the alternating series
    let lam: f64 = 1.5f64.sqrt();
    let want: f64 = 2.0
        * (1..200)
            .map(|j| {
                let j = f64::from(j);
                (if j as i32 % 2 == 1 { 1.0 } else { -1.0 }) * (-2.0 * j * j * lam * lam).exp()
            })
            .sum::<f64>();
    assert!((r.p_value - want).abs() < 1e-12);
    let s = summary_stats(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap();
    assert_eq!(s.mean, 5.0);
    assert!((s.sd - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
}
