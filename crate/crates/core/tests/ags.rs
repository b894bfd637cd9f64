use gralg::ags::{
    check_all, check_projection_properties, check_rs_properties, AgsModel, SuiteOptions,
};
use gralg::graph::{chromatic_number, named, Graph};
use gralg::report::{all_ok, CheckOutcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn model(name: &str) -> AgsModel {
    AgsModel::build(&named::by_name(name).unwrap(), 3, 5000).unwrap()
}

fn assert_all_pass(out: &[CheckOutcome]) {
    assert!(all_ok(out), "{out:#?}");
    assert!(out.iter().all(CheckOutcome::passed), "{out:#?}");
}

#[test]
fn every_suite_passes_on_k1_and_k2() {
    for name in ["K1", "K2"] {
        let m = model(name);
        let out = check_all(&m, &SuiteOptions::default());
        assert_eq!(out.len(), 3 + 6 + 6 + 7);
        assert_all_pass(&out);
    }
}

#[test]
fn every_suite_passes_on_p3_with_sampled_vertex_sets() {
    let m = model("P3");
    assert_eq!(m.vertex_count(), 9);
    let opts = SuiteOptions {
        samples: 2000,
        ..SuiteOptions::default()
    };
    let out = check_all(&m, &opts);
    let retraction = out.iter().find(|o| o.name == "rs-retraction").unwrap();
    assert!(retraction.detail.contains("sampled"));
    assert_all_pass(&out);
}

#[test]
fn suites_are_deterministic() {
    let m = model("K2");
    let opts = SuiteOptions {
        samples: 500,
        seed: 7,
        ..SuiteOptions::default()
    };
    assert_eq!(check_all(&m, &opts), check_all(&m, &opts));
}

#[test]
fn non_h_pairs_are_edges_and_copies_partition() {
    for name in ["K1", "K2", "P3", "C5"] {
        let m = model(name);
        let classes = m.h_classes();
        assert_eq!(classes.len(), 3);
        let total: usize = classes.iter().map(|c| c.count()).sum();
        assert_eq!(total, m.vertex_count());
        for x in 0..m.vertex_count() {
            for y in 0..m.vertex_count() {
                if !m.h(x, y) {
                    assert!(m.graph().has_edge(x, y));
                }
            }
        }
    }
}

#[test]
fn lift_fault_is_reported_with_counterexample() {
    let mut m = model("K2");
    m.inject_lift_fault(0, 4);
    let out = check_rs_properties(&m, &SuiteOptions::default());
    let failed: Vec<_> = out
        .iter()
        .filter(|o| o.failed())
        .map(|o| o.name.as_str())
        .collect();
    assert!(failed.contains(&"rs-retraction"), "{failed:?}");
    let cex = out
        .iter()
        .find(|o| o.name == "rs-retraction")
        .and_then(|o| o.counterexample.clone())
        .unwrap();
    let b: Vec<usize> = serde_json::from_value(cex["B"].clone()).unwrap();
    assert!(b.contains(&4));
    // the projection suite does not use S_i and still passes
    assert_all_pass(&check_projection_properties(&m));
}

#[test]
fn theta_is_chromatic_threshold_and_monotone() {
    let m = model("K1");
    assert!(m.theta(2));
    assert!(!m.theta(3));
    for name in ["K1", "K2", "P3", "C5"] {
        let m = model(name);
        for k in 0..=6 {
            assert_eq!(m.theta(k), m.theta_by_covers(k), "{name} k={k}");
            for l in 0..=k {
                if m.theta(k) {
                    assert!(m.theta(l));
                }
            }
        }
    }
}

#[test]
fn theta_oracle_agrees_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let v = rng.gen_range(1..=4);
        let p = rng.gen_range(0.2..0.8);
        let edges: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        let g = Graph::from_edges(v, edges).unwrap();
        let m = AgsModel::build(&g, 3, 100_000).unwrap();
        let chi = chromatic_number(&g).0;
        assert_eq!(m.chromatic_number(), 3 * chi);
        for k in 0..=6 {
            assert_eq!(m.theta(k), m.theta_by_covers(k));
        }
    }
}
