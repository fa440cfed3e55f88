use cascadia::influence::*;
use cascadia::ingest::{count_activities, PostThread, TimeWindow};
use proptest::prelude::*;

mod common;
use common::arb_thread_span;

fn text_ids(t: &PostThread) -> Vec<String> {
    t.text_activities().map(|a| a.activity_id.clone()).collect()
}

fn recount(t: &PostThread, start: i64, end: i64) -> usize {
    t.activities()
        .iter()
        .filter(|a| a.timestamp >= start && a.timestamp < end)
        .count()
}

proptest! {
    #[test]
    fn piv_sum_is_window_count(t in arb_thread_span(7200, 120), dt in 1u32..120, k in 1usize..70) {
        for id in text_ids(&t) {
            let ts = t.activity(&id).unwrap().timestamp;
            let piv = compute_piv(&t, &id, dt, k).unwrap();
            prop_assert_eq!(piv.len(), k);
            let w = TimeWindow::new(ts - k as i64 * i64::from(dt), ts).unwrap();
            prop_assert_eq!(piv.total(), count_activities(&t, w) as u64);
            // first component is the bucket right before the comment
            prop_assert_eq!(piv.components[0] as usize, recount(&t, ts - i64::from(dt), ts));
        }
    }

    #[test]
    fn ir_matches_recount(t in arb_thread_span(3600, 120), dt in 1u32..300) {
        for id in text_ids(&t) {
            let ts = t.activity(&id).unwrap().timestamp;
            let d = i64::from(dt);
            let up = recount(&t, ts, ts + d) - 1;
            let prev = recount(&t, ts - d, ts) + 1;
            let ir = influence_ratio(&t, &id, dt).unwrap();
            if up == 0 {
                prop_assert_eq!(ir, f64::NEG_INFINITY);
            } else {
                prop_assert_eq!(ir, (up as f64 / prev as f64).ln());
            }
            prop_assert_eq!(ir_label(ir) == IrLabel::Increase, ir > 0.0);
        }
    }

    #[test]
    fn translation_invariance(t in arb_thread_span(7200, 80), shift in -10_000_000i64..10_000_000) {
        let s = t.shifted(shift);
        for id in text_ids(&t) {
            prop_assert_eq!(compute_piv(&t, &id, 60, 60).unwrap(), compute_piv(&s, &id, 60, 60).unwrap());
            prop_assert_eq!(influence_ratio(&t, &id, 60).unwrap(), influence_ratio(&s, &id, 60).unwrap());
        }
    }

    #[test]
    fn swapping_counts_negates(a in 1usize..10_000, b in 1usize..10_000) {
        let fwd = IrCounts { upcoming: a, preceding: b }.ratio();
        let back = IrCounts { upcoming: b, preceding: a }.ratio();
        prop_assert!((fwd + back).abs() <= 1e-12 * fwd.abs().max(1.0));
    }

    #[test]
    fn label_ignores_log_base(up in 1usize..5000, prev in 1usize..5000, base in 1.0001f64..100.0) {
        let r = up as f64 / prev as f64;
        let ln = IrCounts { upcoming: up, preceding: prev }.ratio();
        let other = r.log(base);
        prop_assert_eq!(ln > 0.0, other > 0.0);
        prop_assert_eq!(ln < 0.0, other < 0.0);
    }

    #[test]
    fn stage_is_monotone(x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        prop_assert!(life_stage(lo) <= life_stage(hi));
        prop_assert!(life_stage(x).contains(x));
    }
}

#[test]
fn stage_boundaries() {
    assert_eq!(life_stage(0.0), LifeStage::RapidGrowth);
    assert_eq!(life_stage(0.4999), LifeStage::RapidGrowth);
    assert_eq!(life_stage(0.5), LifeStage::SlowDecay);
    assert_eq!(life_stage(0.8499), LifeStage::SlowDecay);
    assert_eq!(life_stage(0.85), LifeStage::Dormancy);
    assert_eq!(life_stage(1.0), LifeStage::Dormancy);
}
