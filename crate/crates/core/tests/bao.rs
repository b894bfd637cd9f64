use gralg::atoms::AtomStructure;
use gralg::bao::{
    canonical_extension, check_ca_axioms, check_canonical_extension, check_discriminator,
    check_pea_axioms, AxiomCheckOptions, FiniteBao, Signature,
};
use gralg::graph::named;
use gralg::report::{all_ok, CheckOutcome};
use std::sync::Arc;

fn algebra(name: &str) -> FiniteBao {
    let s = AtomStructure::enumerate(&named::by_name(name).unwrap(), 3, 5000).unwrap();
    FiniteBao::complex_algebra(&s, Signature::Pea)
}

fn assert_all_pass(out: &[CheckOutcome]) {
    assert!(out.iter().all(CheckOutcome::passed), "{out:#?}");
}

#[test]
fn cylindric_axioms_hold_on_k1_k2_p3() {
    for name in ["K1", "K2", "P3"] {
        let out = check_ca_axioms(&algebra(name), &AxiomCheckOptions::default()).unwrap();
        assert_eq!(out.len(), 7, "{name}");
        assert_all_pass(&out);
    }
}

#[test]
fn polyadic_axioms_hold_on_k1_and_k2() {
    let opts = AxiomCheckOptions {
        samples: 2000,
        ..AxiomCheckOptions::default()
    };
    for name in ["K1", "K2"] {
        let out = check_pea_axioms(&algebra(name), &opts).unwrap();
        assert_eq!(out.len(), 15, "{name}");
        assert_all_pass(&out);
    }
}

#[test]
fn discriminator_holds_on_k1_k2_p3() {
    for name in ["K1", "K2", "P3"] {
        assert_all_pass(&check_discriminator(&algebra(name), 10_000, 1));
    }
}

#[test]
fn corrupted_cylindrification_fails_c2_or_c3() {
    let a = algebra("K2");
    let mut frame = (**a.frame()).clone();
    frame.set_cyl_neighbours(0, 5, vec![]);
    let bad = FiniteBao::new(Arc::new(frame), Signature::Pea);
    let out = check_ca_axioms(&bad, &AxiomCheckOptions::default()).unwrap();
    let failed: Vec<&str> = out
        .iter()
        .filter(|o| o.failed())
        .map(|o| o.name.as_str())
        .collect();
    assert!(
        failed.contains(&"C2") || failed.contains(&"C3"),
        "{failed:?}"
    );
    let cex = out.iter().find(|o| o.failed()).unwrap();
    assert!(cex.counterexample.as_ref().unwrap()["assignment"].is_object());
}

#[test]
fn canonical_extension_of_k1_is_isomorphic() {
    let a = algebra("K1");
    let ext = canonical_extension(&a).unwrap();
    assert_eq!(ext.algebra.size(), a.size());
    let out = check_canonical_extension(&a, &ext, 1000, 1);
    assert!(all_ok(&out));
    assert_all_pass(&out);
    // the embedding is the identity on generators: b ↦ { ν : b ∈ ν }
    for p in 0..a.size() {
        assert_eq!(ext.embed(&a.atom(p)).count(), 1);
    }
}
