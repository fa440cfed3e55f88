#![allow(dead_code)]

use cascadia::ingest::{Activity, ActivityKind, PostThread, ReactionKind};
use proptest::prelude::*;

const TEXTS: [&str; 4] = [
    "plain words",
    "look http://shopping-site1.test/a",
    "see https://spyware-site0.test/b",
    "ref https://benign-3.example.org/",
];

/// Random thread with activities spread over `span` seconds after creation.
pub fn arb_thread_span(span: i64, max_len: usize) -> impl Strategy<Value = PostThread> {
    (
        0i64..10_000,
        prop::collection::vec((0i64..span, 0u8..3, 0usize..TEXTS.len()), 0..max_len),
    )
        .prop_map(|(created, evs)| {
            let acts = evs
                .into_iter()
                .enumerate()
                .map(|(i, (dt, k, txt))| {
                    let kind = [ActivityKind::Comment, ActivityKind::Reply, ActivityKind::Reaction][k as usize];
                    let reaction = kind == ActivityKind::Reaction;
                    Activity {
                        activity_id: format!("a{i:03}"),
                        kind,
                        reaction_kind: reaction.then_some(ReactionKind::Like),
                        actor_id: "u".into(),
                        timestamp: created + dt,
                        parent_id: None,
                        text: (!reaction).then(|| TEXTS[txt].to_string()),
                    }
                })
                .collect();
            PostThread::new("p", "g", created, acts).unwrap()
        })
}

pub fn arb_thread() -> impl Strategy<Value = PostThread> {
    arb_thread_span(20_000, 60)
}

use cascadia::influence::IrLabel;
use cascadia::learn::{predict_adaboost, predict_gnb, train_adaboost_traced, train_gnb, FeatureMatrix, StumpEnsemble};

/// Trains GNB on `train` and on its per-feature affine image and returns the
/// test predictions of both.
pub fn gnb_affine_pair(train: &FeatureMatrix, test: &[Vec<f64>], a: &[f64], b: &[f64]) -> (Vec<IrLabel>, Vec<IrLabel>) {
    let map = |r: &Vec<f64>| -> Vec<f64> { r.iter().zip(a).zip(b).map(|((x, a), b)| a * x + b).collect() };
    let mapped = FeatureMatrix::new(train.rows().iter().map(map).collect(), train.labels().to_vec()).unwrap();
    let m1 = train_gnb(train).unwrap();
    let m2 = train_gnb(&mapped).unwrap();
    let p1 = test.iter().map(|x| predict_gnb(&m1, x).unwrap()).collect();
    let p2 = test.iter().map(|x| predict_gnb(&m2, &map(x)).unwrap()).collect();
    (p1, p2)
}

/// Checks after every kept round that the training error of the partial
/// ensemble is at most the product of the per-round normalizers
/// `(1 − ε)e^{−α} + εe^{α}`, which is `2√(ε(1 − ε))` at the optimal α.
/// Returns the number of rounds checked.
pub fn check_product_bound(data: &FeatureMatrix, n_estimators: usize, learning_rate: f64) -> Result<usize, String> {
    let (model, trace) = train_adaboost_traced(data, n_estimators, learning_rate).map_err(|e| e.to_string())?;
    let mut bound = 1.0;
    for (t, r) in trace.iter().enumerate() {
        let (e, a) = (r.weighted_error, r.alpha);
        let z = (1.0 - e) * (-a).exp() + e * a.exp();
        if learning_rate == 1.0 && e > 0.0 {
            let closed = 2.0 * (e * (1.0 - e)).sqrt();
            if (z - closed).abs() > 1e-9 {
                return Err(format!("round {t}: normalizer {z} vs 2√(ε(1−ε)) {closed}"));
            }
        }
        bound *= z;
        let partial = StumpEnsemble {
            stumps: model.stumps[..=t].to_vec(),
            ..model.clone()
        };
        let wrong = data
            .rows()
            .iter()
            .zip(data.labels())
            .filter(|(x, y)| {
                let s = partial.score(x).unwrap();
                // a zero score counts as wrong for both classes
                s == 0.0 || predict_adaboost(&partial, x).unwrap() != **y
            })
            .count();
        let err = wrong as f64 / data.len() as f64;
        if err > bound * (1.0 + 1e-9) + 1e-12 {
            return Err(format!("round {t}: training error {err} above bound {bound}"));
        }
    }
    Ok(trace.len())
}
