mod common;

use nalgebra::DVector;
use prolfa::data::Hyperparameters;
use prolfa::eval::{
    average_precision, bow_histograms, evaluate_split, generate_synthetic, kmeans, knn_classify, leave_one_out_map,
    linear_fit, mean_average_precision, run_sweep, run_timing_benchmark, stratified_split, write_sweep_csv,
    write_timing_csv, Encoder, Metric, Protocol, SweepGrid, SyntheticSpec, Task,
};
use proptest::prelude::*;
use rand::Rng;

use common::*;

fn v(x: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(x)
}

/// Area under the precision-recall step function: precision at each recall
/// increment times the increment.
fn ap_step_sum(rel: &[bool]) -> Option<f64> {
    let total = rel.iter().filter(|r| **r).count();
    if total == 0 {
        return None;
    }
    let mut area = 0.0;
    let mut prev_recall = 0.0;
    let mut hits = 0;
    for (i, r) in rel.iter().enumerate() {
        if *r {
            hits += 1;
        }
        let recall = hits as f64 / total as f64;
        let precision = hits as f64 / (i + 1) as f64;
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    Some(area)
}

proptest! {
    #[test]
    fn ap_matches_step_sum(rel in prop::collection::vec(any::<bool>(), 1..40)) {
        match (average_precision(&rel), ap_step_sum(&rel)) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-12),
            (None, None) => {}
            other => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn minkowski_two_is_euclidean(seed in 0u64..300, k in 1usize..4) {
        let mut r = rng(seed);
        let pts = |r: &mut rand_chacha::ChaCha8Rng, n: usize| -> Vec<DVector<f64>> {
            (0..n).map(|_| DVector::from_fn(3, |_, _| r.random_range(-1.0..1.0))).collect()
        };
        let train = pts(&mut r, 12);
        let labels: Vec<usize> = (0..12).map(|i| i % 3).collect();
        let test = pts(&mut r, 8);
        let a = knn_classify(&train, &labels, &test, k, Metric::Euclidean).unwrap();
        let b = knn_classify(&train, &labels, &test, k, Metric::Minkowski(2.0)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn nearest_neighbour_of_a_training_point_is_itself(seed in 0u64..300) {
        let mut r = rng(seed);
        let train: Vec<DVector<f64>> = (0..15).map(|_| DVector::from_fn(2, |_, _| r.random_range(-1.0..1.0))).collect();
        let labels: Vec<usize> = (0..15).map(|_| r.random_range(0..3)).collect();
        let pred = knn_classify(&train, &labels, &train, 1, Metric::Euclidean).unwrap();
        prop_assert_eq!(pred, labels);
    }

    #[test]
    fn split_keeps_class_fractions(seed in 0u64..200, frac in 0.05f64..0.95, sizes in prop::collection::vec(2usize..30, 1..5)) {
        let labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &n)| std::iter::repeat_n(c, n)).collect();
        let (train, test) = stratified_split(&labels, frac, seed).unwrap();
        prop_assert_eq!(train.len() + test.len(), labels.len());
        for (c, &n) in sizes.iter().enumerate() {
            let got = train.iter().filter(|&&i| labels[i] == c).count() as f64;
            prop_assert!((got - frac * n as f64).abs() <= 1.0, "class {} got {} of {}", c, got, n);
        }
    }
}

#[test]
fn knn_hand_cases() {
    let train = vec![v(&[0.0, 0.0]), v(&[1.0, 1.0])];
    assert_eq!(knn_classify(&train, &[0, 1], &[v(&[0.1, 0.0])], 1, Metric::Euclidean).unwrap(), vec![0]);
    let train = vec![v(&[0.0]), v(&[1.0]), v(&[2.0]), v(&[10.0])];
    let labels = [1, 0, 1, 1];
    let pred = knn_classify(&train, &labels, &[v(&[1.0]), v(&[-50.0])], 4, Metric::Cosine).unwrap();
    assert_eq!(pred, vec![1, 1]);
    assert!(knn_classify(&train, &labels, &[v(&[0.0])], 0, Metric::Euclidean).is_err());
    assert!(knn_classify(&train, &labels, &[v(&[0.0])], 5, Metric::Euclidean).is_err());
    for m in [Metric::Mahalanobis, Metric::Minkowski(3.0), Metric::Cosine] {
        assert_eq!(knn_classify(&train, &labels, &[v(&[1.1])], 1, m).unwrap().len(), 1);
    }
}

#[test]
fn metric_parsing() {
    assert_eq!(Metric::parse("minkowski", Some(3.0)).unwrap(), Metric::Minkowski(3.0));
    assert_eq!(Metric::parse("Euclidean", None).unwrap(), Metric::Euclidean);
    assert!(Metric::parse("minkowski", Some(0.5)).is_err());
    assert!(Metric::parse("hamming", None).is_err());
}

#[test]
fn map_hand_cases() {
    let ap = average_precision(&[true, false, true]).unwrap();
    assert!((ap - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-15);
    assert_eq!(average_precision(&[true, false]), Some(1.0));
    assert_eq!(average_precision(&[false, false]), None);

    let q = vec![v(&[0.0])];
    let db = vec![v(&[3.0]), v(&[1.0]), v(&[2.0])];
    let all = mean_average_precision(&q, &db, &[vec![true; 3]], Metric::Euclidean).unwrap();
    assert_eq!(all.map, 1.0);
    let one = mean_average_precision(&q, &db, &[vec![false, true, false]], Metric::Euclidean).unwrap();
    assert_eq!(one.map, 1.0);
    assert!(mean_average_precision(&q, &db, &[vec![false; 3]], Metric::Euclidean).is_err());
}

#[test]
fn leave_one_out_excludes_the_query() {
    let reps = vec![v(&[0.0]), v(&[0.1]), v(&[5.0]), v(&[5.1])];
    let r = leave_one_out_map(&reps, &[0, 0, 1, 1], &[0, 1, 2, 3], Metric::Euclidean).unwrap();
    assert_eq!(r.map, 1.0);
    assert_eq!(r.average_precisions.len(), 4);
}

#[test]
fn synthetic_generator() {
    let ds = generate_synthetic(&SyntheticSpec::default()).unwrap();
    assert_eq!((ds.n_descriptors(), ds.n_samples(), ds.n_outputs()), (200, 10, 2));
    assert_eq!(ds, generate_synthetic(&SyntheticSpec::default()).unwrap());

    let spec = SyntheticSpec { class_separation: 10.0, noise_sigma: 0.1, seed: 4, ..Default::default() };
    let ds = generate_synthetic(&spec).unwrap();
    let labels = ds.labels().unwrap();
    let mut means = [DVector::zeros(2), DVector::zeros(2)];
    let mut counts = [0.0, 0.0];
    for (i, &l) in labels.iter().enumerate() {
        for j in ds.sample_range(i) {
            means[l] += ds.descriptors().column(j);
            counts[l] += 1.0;
        }
    }
    let dist = (&means[0] / counts[0] - &means[1] / counts[1]).norm();
    assert!((dist - 10.0).abs() <= 0.2, "{dist}");
    assert!(generate_synthetic(&SyntheticSpec { n_points: 199, ..Default::default() }).is_err());
}

#[test]
fn kmeans_recovers_distinct_points() {
    let ds = prolfa::data::DescriptorDataset::new(
        nalgebra::DMatrix::from_column_slice(1, 6, &[0.0, 0.0, 5.0, 9.0, 9.0, 9.0]),
        vec![3, 3],
        None,
        None,
    )
    .unwrap();
    let book = kmeans(ds.descriptors(), 3, 0).unwrap();
    let hist = bow_histograms(&ds, &book);
    let code = |x: f64| book.assign(&nalgebra::DMatrix::from_element(1, 1, x))[0];
    let mut want = [[0.0; 3]; 2];
    want[0][code(0.0)] = 2.0 / 3.0;
    want[0][code(5.0)] = 1.0 / 3.0;
    want[1][code(9.0)] = 1.0;
    for (h, w) in hist.iter().zip(want) {
        for (a, b) in h.vector.iter().zip(w) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}

#[test]
fn reports_are_reproducible_and_carry_every_repetition() {
    let ds = generate_synthetic(&SyntheticSpec { seed: 8, ..Default::default() }).unwrap();
    let p = Protocol::classification(Hyperparameters::default());
    let a = evaluate_split(&ds, 0.8, &p, 6, 40).unwrap();
    let b = evaluate_split(&ds, 0.8, &p, 6, 40).unwrap();
    assert_eq!(a.repetitions(), 6);
    assert_eq!(a.seeds, vec![40, 41, 42, 43, 44, 45]);
    assert_eq!((a.values.clone(), a.mean, a.std), (b.values.clone(), b.mean, b.std));
    assert!(a.mean >= 0.95);
    assert_eq!(a.metric, "accuracy");

    let retrieval = Protocol { task: Task::Retrieval, ..p };
    let r = evaluate_split(&ds, 0.8, &retrieval, 2, 1).unwrap();
    assert_eq!(r.metric, "map");
    assert!(r.values.iter().all(|x| (0.0..=1.0).contains(x)));

    let bow = p.with_encoder(Encoder::KMeansBow { codebook_size: 2 });
    assert_eq!(evaluate_split(&ds, 0.8, &bow, 2, 1).unwrap().repetitions(), 2);
    let semi = p.with_encoder(Encoder::Prolfa { hyper: Hyperparameters::default(), semi: true });
    assert_eq!(evaluate_split(&ds, 0.2, &semi, 2, 1).unwrap().repetitions(), 2);
    assert!(evaluate_split(&ds, 0.8, &p, 0, 1).is_err());
}

#[test]
fn sweep_shape_and_csv() {
    let ds = generate_synthetic(&SyntheticSpec { seed: 2, ..Default::default() }).unwrap();
    let p = Protocol::classification(Hyperparameters::default());
    let grid: SweepGrid = "d_bar=2,4,8".parse().unwrap();
    let points = run_sweep(&ds, &grid, &Hyperparameters::default(), &p, 0.8, 2, 0).unwrap();
    assert_eq!(points.len(), 3);
    assert_eq!(points.iter().map(|x| x.value).collect::<Vec<_>>(), vec![2.0, 4.0, 8.0]);
    assert!(points.iter().all(|x| x.report.repetitions() == 2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    write_sweep_csv(&points, grid.name(), &path, &["command=sweep".into()]).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# command=sweep");
    assert_eq!(lines[1], "d_bar,metric,mean,std,repetitions,exclusivity,final_objective");
    assert_eq!(lines.len(), 5);
}

#[test]
fn lambda1_sweep_lowers_exclusivity() {
    let ds = generate_synthetic(&SyntheticSpec::default()).unwrap();
    let p = Protocol::classification(Hyperparameters::default());
    let grid: SweepGrid = "lambda1=0.01,0.1,1,10".parse().unwrap();
    let points = run_sweep(&ds, &grid, &Hyperparameters::default(), &p, 0.8, 1, 0).unwrap();
    let excl: Vec<f64> = points.iter().map(|x| x.exclusivity).collect();
    let rises: Vec<f64> = excl.windows(2).filter(|w| w[1] > w[0]).map(|w| (w[1] - w[0]) / w[0]).collect();
    assert!(rises.is_empty() || (rises.len() == 1 && rises[0] <= 0.05), "{excl:?}");
}

#[test]
fn timing_table_shape() {
    let spec = SyntheticSpec { dim: 4, ..Default::default() };
    let table = run_timing_benchmark(&[100, 200, 400], &spec, &Hyperparameters::default(), 1).unwrap();
    assert_eq!(table.rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![100, 200, 400]);
    assert!(table.rows.iter().all(|r| r.seconds > 0.0 && r.outer_iterations >= 1));
    assert!((0.0..=1.0).contains(&table.r_squared));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    write_timing_csv(&table, &path, &[]).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# fit slope="));
    assert_eq!(text.lines().count(), 5);
    assert!(run_timing_benchmark(&[110], &spec, &Hyperparameters::default(), 1).is_err());
}

#[test]
fn line_fit_is_exact_on_a_line() {
    let (a, b, r2) = linear_fit(&[500.0, 1000.0, 2000.0], &[1.5, 2.5, 4.5]);
    assert!((a - 0.002).abs() < 1e-15 && (b - 0.5).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
}
