use cascadia::cascade::*;
use cascadia::ingest::{n_comment, PostThread};
use proptest::prelude::*;

mod common;
use common::arb_thread_span;

fn corpus() -> impl Strategy<Value = Vec<PostThread>> {
    prop::collection::vec(arb_thread_span(4 * 3600, 80), 1..20)
}

proptest! {
    #[test]
    fn dav_telescopes(t in arb_thread_span(4 * 3600, 120), w in 1u32..15, h in 1u32..20) {
        let dav = compute_dav(&t, w, w * h).unwrap();
        prop_assert_eq!(dav.values.len(), h as usize);
        prop_assert_eq!(dav.values.iter().sum::<usize>(), n_comment(&t, w * h));
    }

    #[test]
    fn matrix_cardinality_and_monotone(ts in corpus(), w in prop::sample::select(vec![5u32, 10, 15, 30])) {
        let win = Windowing::new(w, 120, FinalHorizon::All).unwrap();
        let d = build_distribution_matrix(&ts, win);
        prop_assert_eq!(d.cardinality(), ts.len() * win.windows() as usize);
        for (&(_, j), finals) in d.cells() {
            prop_assert!(finals.iter().all(|&f| f >= j));
        }
    }

    #[test]
    fn bound_within_range(samples in prop::collection::vec(0u64..500, 1..60), q in 1.0f64..99.0, seed in any::<u64>()) {
        let b = bootstrap_lower_bound(&samples, 200, q, seed).unwrap();
        prop_assert!(b >= *samples.iter().min().unwrap());
        prop_assert!(b <= *samples.iter().max().unwrap());
    }

    #[test]
    fn constant_cell_returns_constant(v in 0u64..10_000, n in 1usize..50, seed in any::<u64>()) {
        prop_assert_eq!(bootstrap_lower_bound(&vec![v; n], 100, 50.0, seed).unwrap(), v);
    }

    #[test]
    fn prediction_only_at_stored_cells(ts in corpus(), m in 1u32..25, c in 0u64..100) {
        let win = Windowing::new(5, 120, FinalHorizon::All).unwrap();
        let d = build_distribution_matrix(&ts, win);
        let p = build_prediction_matrix(&d, BootstrapParams { resamples: 50, ..Default::default() }).unwrap();
        let got = p.predict_final(m * 5, c).unwrap();
        prop_assert_eq!(got.is_some(), d.cell(m, c).is_some());
        if let (Some(b), Some(cell)) = (got, d.cell(m, c)) {
            prop_assert!(cell[0] <= b && b <= cell[cell.len() - 1]);
        }
    }

    #[test]
    fn cv_counts_ordered(train in corpus(), test in corpus()) {
        let cv = cross_validate(&train, &test, Windowing::default(), BootstrapParams { resamples: 30, ..Default::default() }).unwrap();
        prop_assert!(cv.precision_hits <= cv.predictable && cv.predictable <= cv.total);
    }
}

#[test]
fn matrix_files_round_trip() {
    let t = |mins: &[i64]| {
        let acts = mins
            .iter()
            .enumerate()
            .map(|(k, m)| cascadia::ingest::Activity {
                activity_id: format!("c{k}"),
                kind: cascadia::ingest::ActivityKind::Comment,
                reaction_kind: None,
                actor_id: "u".into(),
                timestamp: m * 60 + 1,
                parent_id: None,
                text: Some("x".into()),
            })
            .collect();
        PostThread::new("p", "g", 0, acts).unwrap()
    };
    let ts = vec![t(&[0, 3, 9, 200]), t(&[1, 2, 4, 6, 8, 300, 301]), t(&[50])];
    let p = build_prediction_matrix(
        &build_distribution_matrix(&ts, Windowing::default()),
        BootstrapParams {
            seed: 9,
            ..Default::default()
        },
    )
    .unwrap();
    let mut csv = Vec::new();
    p.write_csv(&mut csv).unwrap();
    let back = PredictionMatrix::read(csv.as_slice(), p.metadata().as_bytes()).unwrap();
    assert_eq!(back, p);
}
