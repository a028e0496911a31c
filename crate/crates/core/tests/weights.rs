use mixedbf::graphs::{ChiralGraph, ChiralVertex};
use mixedbf::quadrature::QuadOptions;
use mixedbf::weights::{
    anomaly_integrand, anomaly_study, anomaly_weight, bulk_integrand, bulk_weight,
    bulk_weight_sweep, t_box_bound, t_box_rhs, TestInput,
};
use num_complex::Complex64;

fn opts() -> QuadOptions {
    QuadOptions::default()
}

fn cubic(orders: [u8; 3]) -> ChiralVertex {
    ChiralVertex::new(2, 1, orders.to_vec(), "cubic").unwrap()
}

fn wheel(n: usize) -> ChiralGraph {
    ChiralGraph::wheel(vec![ChiralVertex::cubic(); n])
}

#[test]
fn short_wheels_vanish_by_degree() {
    let inputs = TestInput::wheel_inputs(2);
    for d in 0..=2u8 {
        let one = ChiralGraph::wheel(vec![cubic([d, 0, d])]);
        let w = bulk_weight(&one, 0.01, 1.0, &inputs[..1], &opts()).unwrap();
        assert!(w.degree_zero_flag && w.value == 0.0);
        let two = ChiralGraph::wheel(vec![cubic([d, d, 0]), cubic([0, d, d])]);
        let w = bulk_weight(&two, 0.01, 1.0, &inputs, &opts()).unwrap();
        assert!(w.degree_zero_flag && w.value == 0.0);
        for e in 0..2 {
            assert!(anomaly_integrand(&two, e, &inputs).unwrap().is_none());
            let w = anomaly_weight(&two, e, 0.01, 1.0, &inputs, &opts()).unwrap();
            assert!(w.degree_zero_flag && w.value == 0.0);
        }
    }
}

#[test]
fn chern_simons_derivative_vertices_vanish_on_two_vertex_wheels() {
    let v = ChiralVertex::new(2, 1, vec![0, 1, 0], "cubic_d").unwrap();
    let two = ChiralGraph::wheel(vec![v.clone(), v]);
    assert!(bulk_integrand(&two, &TestInput::wheel_inputs(2))
        .unwrap()
        .is_none());
}

#[test]
fn inputs_without_form_factors_give_zero() {
    let mut inputs = TestInput::wheel_inputs(3);
    for x in &mut inputs {
        x.f1.clear();
        x.dzbar = false;
    }
    assert!(bulk_integrand(&wheel(3), &inputs).unwrap().is_none());
}

#[test]
fn three_wheel_is_cauchy() {
    let sweep = bulk_weight_sweep(&wheel(3), 1.0, 4, &TestInput::wheel_inputs(3), &opts()).unwrap();
    let v: Vec<f64> = sweep.iter().map(|(_, w)| w.value).collect();
    let d: Vec<f64> = v.windows(2).map(|p| (p[1] - p[0]).abs()).collect();
    assert!(d.windows(2).all(|x| x[1] < x[0]), "{v:?}");
    assert!(v.iter().all(|x| x.is_finite() && *x != 0.0));
}

#[test]
fn weight_is_linear_in_each_leg() {
    let g = wheel(3);
    let base = TestInput::wheel_inputs(3);
    let w0 = bulk_weight(&g, 0.01, 1.0, &base, &opts())
        .unwrap()
        .complex();
    // a -> a + a' on leg 1, with a' = 0.7 z zbar
    let mut extra = base.clone();
    extra[1].a = vec![(1, 1, Complex64::new(0.7, 0.0))];
    let mut sum = base.clone();
    sum[1].a.push((1, 1, Complex64::new(0.7, 0.0)));
    let we = bulk_weight(&g, 0.01, 1.0, &extra, &opts())
        .unwrap()
        .complex();
    let ws = bulk_weight(&g, 0.01, 1.0, &sum, &opts()).unwrap().complex();
    assert!(
        (ws - w0 - we).norm() < 1e-9 * ws.norm().max(1e-12),
        "{ws} vs {}",
        w0 + we
    );
    let c = Complex64::new(0.4, -1.3);
    let mut scaled = base.clone();
    scaled[2] = scaled[2].scaled(c);
    let wc = bulk_weight(&g, 0.01, 1.0, &scaled, &opts())
        .unwrap()
        .complex();
    assert!((wc - c * w0).norm() < 1e-9 * wc.norm());
}

#[test]
fn t_box_examples() {
    let n = 2;
    let b = t_box_bound(n, 1e-3, 1.0, &opts()).unwrap();
    assert!(b.lhs <= b.rhs, "{} > {}", b.lhs, b.rhs);
    let quarter = t_box_bound(n, 0.25e-3, 1.0, &opts()).unwrap();
    assert!(quarter.lhs - b.lhs < t_box_rhs(n, 0.25e-3, 1.0).0 - t_box_rhs(n, 1e-3, 1.0).0);
    let s = 0.3f64;
    let scaled = t_box_bound(n, s * 1e-3, s, &opts()).unwrap();
    assert!((scaled.lhs - s.powf(1.5) * b.lhs).abs() < 1e-6 * b.lhs);
}

#[test]
fn three_wheel_anomaly_has_a_limit() {
    let study = anomaly_study(&wheel(3), 0, 1.0, 4, &TestInput::wheel_inputs(3), &opts()).unwrap();
    assert!(study.limit.is_finite() && study.limit_error.is_finite());
    assert_eq!(study.weights.len(), 4);
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                bulk_weight(&wheel(3), 1e-3, 1.0, &TestInput::wheel_inputs(3), &opts()).unwrap()
            })
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.value_imag.to_bits(), b.value_imag.to_bits());
}

#[test]
fn bad_boxes_are_rejected() {
    assert!(bulk_weight(&wheel(3), 1.0, 0.5, &TestInput::wheel_inputs(3), &opts()).is_err());
    let tree = ChiralGraph::new(vec![ChiralVertex::cubic()], vec![]);
    assert!(bulk_weight(&tree, 0.1, 1.0, &TestInput::wheel_inputs(1), &opts()).is_err());
}
