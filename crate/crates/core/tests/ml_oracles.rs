mod support;

use founderseg_core::ml::{
    evaluate, evaluate_predictions, make_split, train, Classifier, Forest, ForestParams, GbtModel, GbtParams,
    LabeledSet, LinearModel, ModelFile, ModelKind, ModelParams, SplitError, SplitSpec, DEFAULT_RIDGE,
};
use founderseg_core::features::LabeledMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ridge-penalized simple regression by hand: with the intercept left
/// unpenalized, `b1 = Sxy / (Sxx + ridge)` and `b0 = mean(y) - b1 mean(x)`.
fn closed_form(x: &[f64], y: &[f64], ridge: f64) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let b1 = sxy / (sxx + ridge);
    (my - b1 * mx, b1)
}

#[test]
fn linear_matches_closed_form() {
    let xs = [-3.0, -2.0, -1.5, -0.5, 0.25, 0.5, 1.0, 2.5, 3.0, 4.0];
    let ys = [false, false, false, true, false, true, true, true, true, true];
    let x: Vec<Vec<f64>> = xs.iter().map(|v| vec![*v]).collect();
    let yf: Vec<f64> = ys.iter().map(|b| f64::from(u8::from(*b))).collect();
    for ridge in [0.0, DEFAULT_RIDGE, 0.5] {
        let m = LinearModel::fit(&x, &ys, ridge).unwrap();
        let (b0, b1) = closed_form(&xs, &yf, ridge);
        assert!((m.intercept - b0).abs() < 1e-9, "ridge {ridge}: {} vs {b0}", m.intercept);
        assert!((m.weights[0] - b1).abs() < 1e-9, "ridge {ridge}: {} vs {b1}", m.weights[0]);
    }
}

#[test]
fn linear_separable_toy_and_degenerate_designs() {
    let xs: Vec<f64> = (-10..=10).filter(|v| *v != 0).map(f64::from).collect();
    let x: Vec<Vec<f64>> = xs.iter().map(|v| vec![*v]).collect();
    let y: Vec<bool> = xs.iter().map(|v| *v > 0.0).collect();
    let m = LinearModel::fit(&x, &y, DEFAULT_RIDGE).unwrap();
    assert!(x.iter().zip(&y).all(|(r, t)| m.predict(r, 0.5) == *t));

    // a duplicated column gives the same predictions as the single column
    let x2: Vec<Vec<f64>> = xs.iter().map(|v| vec![*v, *v]).collect();
    let m2 = LinearModel::fit(&x2, &y, DEFAULT_RIDGE).unwrap();
    // the penalty splits the weight evenly, up to conditioning
    assert!((m2.weights[0] + m2.weights[1] - m.weights[0]).abs() < 1e-6);
    assert!(x.iter().zip(&x2).all(|(a, b)| m.predict(a, 0.5) == m2.predict(b, 0.5)));

    // constant label
    let ones = vec![true; x.len()];
    let m1 = LinearModel::fit(&x, &ones, DEFAULT_RIDGE).unwrap();
    assert!(x.iter().all(|r| m1.predict(r, 0.5)));
}

fn xor_points(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
        .collect();
    let y = x.iter().map(|p| (p[0] > 0.0) != (p[1] > 0.0)).collect();
    (x, y)
}

fn accuracy(pred: impl Fn(&[f64]) -> bool, x: &[Vec<f64>], y: &[bool]) -> f64 {
    x.iter().zip(y).filter(|(r, t)| pred(r) == **t).count() as f64 / y.len() as f64
}

/// Exhaustive depth-2 axis-aligned tree, used only to show the toy is
/// tree-learnable without relying on the library's grower.
fn reference_depth2(x: &[Vec<f64>], y: &[bool]) -> impl Fn(&[f64]) -> bool {
    fn thresholds(x: &[Vec<f64>], idx: &[usize], f: usize) -> Vec<f64> {
        let mut v: Vec<f64> = idx.iter().map(|&i| x[i][f]).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect()
    }
    // best single split of `idx`: (errors, feature, threshold, left label, right label)
    fn best_stump(x: &[Vec<f64>], y: &[bool], idx: &[usize]) -> (usize, usize, f64, bool, bool) {
        let pos = idx.iter().filter(|&&i| y[i]).count();
        let mut best = (pos.min(idx.len() - pos), 0, f64::INFINITY, pos * 2 > idx.len(), pos * 2 > idx.len());
        for f in 0..2 {
            for t in thresholds(x, idx, f) {
                let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| x[i][f] <= t);
                let lp = l.iter().filter(|&&i| y[i]).count();
                let rp = r.iter().filter(|&&i| y[i]).count();
                let err = lp.min(l.len() - lp) + rp.min(r.len() - rp);
                if err < best.0 {
                    best = (err, f, t, lp * 2 > l.len(), rp * 2 > r.len());
                }
            }
        }
        best
    }
    let all: Vec<usize> = (0..y.len()).collect();
    let mut best: Option<(usize, usize, f64, (usize, usize, f64, bool, bool), (usize, usize, f64, bool, bool))> = None;
    for f in 0..2 {
        for t in thresholds(x, &all, f) {
            let (l, r): (Vec<usize>, Vec<usize>) = all.iter().partition(|&&i| x[i][f] <= t);
            let (sl, sr) = (best_stump(x, y, &l), best_stump(x, y, &r));
            let err = sl.0 + sr.0;
            if best.as_ref().is_none_or(|b| err < b.0) {
                best = Some((err, f, t, sl, sr));
            }
        }
    }
    let (_, f, t, sl, sr) = best.unwrap();
    move |p: &[f64]| {
        let s = if p[f] <= t { sl } else { sr };
        if p[s.1] <= s.2 {
            s.3
        } else {
            s.4
        }
    }
}

#[test]
fn forest_learns_xor() {
    let (x, y) = xor_points(500, 11);
    let (tx, ty) = xor_points(500, 12);
    let reference = reference_depth2(&x, &y);
    assert!(accuracy(&reference, &tx, &ty) >= 0.95, "toy not tree-learnable");
    let f = Forest::fit(&x, &y, &ForestParams { seed: 3, ..Default::default() }).unwrap();
    let train_acc = accuracy(|r| f.predict(r, 0.5), &x, &y);
    let test_acc = accuracy(|r| f.predict(r, 0.5), &tx, &ty);
    assert!(train_acc >= 0.95, "train accuracy {train_acc}");
    assert!(test_acc >= 0.95, "held-out accuracy {test_acc}");
}

#[test]
fn forest_is_deterministic_and_seed_sensitive() {
    let (x, y) = xor_points(200, 5);
    let p = ForestParams { n_trees: 20, seed: 9, ..Default::default() };
    let a = Forest::fit(&x, &y, &p).unwrap();
    let b = Forest::fit(&x, &y, &p).unwrap();
    assert_eq!(a, b);
    let c = Forest::fit(&x, &y, &ForestParams { seed: 10, ..p }).unwrap();
    assert_ne!(a, c);
}

fn noisy_binary(n: usize, d: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| f64::from(u8::from(rng.gen_bool(0.3)))).collect())
        .collect();
    let y = x
        .iter()
        .map(|r| {
            let s = r[0] + r[1] - r[2] + 0.5 * r[3];
            (s > 0.5) ^ rng.gen_bool(0.15)
        })
        .collect();
    (x, y)
}

#[test]
fn gbt_loss_non_increasing_at_small_rate() {
    for (x, y) in [noisy_binary(240, 55, 1), xor_points(500, 2)] {
        let p = GbtParams { learning_rate: 0.05, ..Default::default() };
        let m = GbtModel::fit(&x, &y, &p).unwrap();
        assert_eq!(m.train_loss.len(), p.rounds + 1);
        for (t, w) in m.train_loss.windows(2).enumerate() {
            assert!(w[1] <= w[0], "round {t}: {} -> {}", w[0], w[1]);
        }
        assert!(m.train_loss[p.rounds] < m.train_loss[0]);
    }
}

#[test]
fn gbt_separable_toy_and_null_ensemble() {
    let xs: Vec<Vec<f64>> = (0..200).map(|i| vec![f64::from(i) / 10.0, f64::from(i % 7)]).collect();
    // Bayes rule of the toy: positive iff the first coordinate exceeds 8
    let y: Vec<bool> = xs.iter().map(|r| r[0] > 8.0).collect();
    let m = GbtModel::fit(&xs, &y, &GbtParams { rounds: 50, ..Default::default() }).unwrap();
    assert!(accuracy(|r| m.predict(r, 0.5), &xs, &y) >= 0.95);

    let null = GbtModel::fit(&xs, &y, &GbtParams { rounds: 0, ..Default::default() }).unwrap();
    // 119 of 200 rows are positive, so the base-rate class is positive
    assert!(xs.iter().all(|r| null.predict(r, 0.5)));
}

#[test]
fn trees_fit_training_data_at_least_as_well_as_linear() {
    let params = ModelParams::default();
    for (x, y) in [xor_points(300, 4), noisy_binary(240, 10, 8)] {
        let set = LabeledSet::new(x.clone(), y.clone());
        let acc = |k| {
            let m = train(k, &set, &params).unwrap();
            accuracy(|r| m.predict(r, params.threshold), &x, &y)
        };
        let lin = acc(ModelKind::Linear);
        assert!(acc(ModelKind::Forest) >= lin);
        assert!(acc(ModelKind::Gbt) >= lin);
    }
}

#[test]
fn invalid_params_rejected() {
    let set = LabeledSet::new(vec![vec![0.0]], vec![true]);
    for threshold in [0.0, 1.0, -0.1, f64::NAN] {
        let p = ModelParams { threshold, ..Default::default() };
        assert!(train(ModelKind::Linear, &set, &p).is_err());
    }
    let p = ModelParams { forest: ForestParams { max_depth: 0, ..Default::default() }, ..Default::default() };
    assert!(train(ModelKind::Forest, &set, &p).is_err());
    assert!(train(ModelKind::Linear, &LabeledSet::default(), &ModelParams::default()).is_err());
}

#[test]
fn model_file_round_trips() {
    let (x, y) = noisy_binary(60, 5, 3);
    let set = LabeledSet::new(x.clone(), y);
    for kind in ModelKind::ALL {
        let m = train(kind, &set, &ModelParams::default()).unwrap();
        let file = ModelFile::new(m, 0.5, 5);
        let text = file.to_json();
        let back = ModelFile::from_json(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.model.kind(), kind);
    }
    assert!(ModelFile::from_json(r#"{"format_version":99}"#).is_err());
}

#[test]
fn split_on_reference_matrix() {
    let m = support::reference_tables::reference_matrix();
    let spec = SplitSpec::with_seed(42);
    let s = make_split(&m, &spec).unwrap();
    assert_eq!((s.train.len(), s.test1.len(), s.test2.len()), (240, 30, 30));
    assert_eq!((s.test1.positives(), s.test2.positives()), (2, 15));
    assert_eq!(s.train.positives(), 120 + 13);
    let mut ids: Vec<&String> = s.train.ids.iter().chain(&s.test1.ids).chain(&s.test2.ids).collect();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), 300);
    assert_eq!(make_split(&m, &spec).unwrap(), s);
    assert_ne!(make_split(&m, &SplitSpec::with_seed(43)).unwrap(), s);

    // drop one successful row
    let fewer = LabeledMatrix::new(m.rows()[1..].to_vec()).unwrap();
    assert_eq!(
        make_split(&fewer, &spec),
        Err(SplitError::Insufficient { success: true, needed: 150, available: 149 })
    );
}

#[test]
fn evaluate_uses_threshold() {
    let set = LabeledSet::new(vec![vec![0.2], vec![0.6], vec![0.9]], vec![false, true, false]);
    struct Identity;
    impl Classifier for Identity {
        fn score(&self, x: &[f64]) -> f64 {
            x[0]
        }
    }
    let r = evaluate(&Identity, &set, 0.5).unwrap();
    assert_eq!((r.confusion.tp, r.confusion.fp, r.confusion.tn, r.confusion.fn_), (1, 1, 1, 0));
    let r = evaluate(&Identity, &set, 0.95).unwrap();
    assert_eq!(r.precision, None);
}

/// Direct scan over the rows, then the textbook definitions.
fn oracle(pred: &[bool], actual: &[bool]) -> (usize, usize, usize, usize) {
    let mut c = (0, 0, 0, 0);
    for i in 0..pred.len() {
        if pred[i] && actual[i] {
            c.0 += 1;
        } else if pred[i] {
            c.1 += 1;
        } else if actual[i] {
            c.3 += 1;
        } else {
            c.2 += 1;
        }
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn confusion_oracle_agrees(v in prop::collection::vec((any::<bool>(), any::<bool>()), 1..120)) {
        let (pred, actual): (Vec<bool>, Vec<bool>) = v.into_iter().unzip();
        let r = evaluate_predictions(&pred, &actual).unwrap();
        let (tp, fp, tn, fn_) = oracle(&pred, &actual);
        prop_assert_eq!((r.confusion.tp, r.confusion.fp, r.confusion.tn, r.confusion.fn_), (tp, fp, tn, fn_));
        let n = pred.len() as f64;
        prop_assert_eq!(r.accuracy, (tp + tn) as f64 / n);
        let p = (tp + fp > 0).then(|| tp as f64 / (tp + fp) as f64);
        let t = (tp + fn_ > 0).then(|| tp as f64 / (tp + fn_) as f64);
        prop_assert_eq!(r.precision, p);
        prop_assert_eq!(r.tpr, t);
    }
}
