use gralg::ags::AgsModel;
use gralg::graph::named;
use gralg::networks::{
    boundary, coherent_by_atoms, exists_survives, first_incoherent, forall_moves, is_coherent,
    naive_survives, network_from_patch, ultrafilter_for_tuple, validate_network, GameOptions,
    GameStrategy, GameVerdict, Mode, MoveKind, PatchSystem, SymmetryChoice, UfNetwork,
};
use std::sync::Mutex;

fn model(name: &str) -> AgsModel {
    AgsModel::build(&named::by_name(name).unwrap(), 3, 5000).unwrap()
}

fn three_node_patches(points: [u32; 3]) -> PatchSystem {
    let mut p = PatchSystem::new(3, 3);
    for (set, x) in [[0, 1], [0, 2], [1, 2]].iter().zip(points) {
        p.set(set, x).unwrap();
    }
    p
}

#[test]
fn coherence_agrees_with_atom_search_on_every_assignment() {
    let m = model("K1");
    let k = m.vertex_count() as u32;
    let mut coherent = 0;
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let p = three_node_patches([a, b, c]);
                let by_points = is_coherent(&m, &p, &[0, 1, 2]).unwrap();
                assert_eq!(by_points, coherent_by_atoms(&m, &p, &[0, 1, 2]).unwrap());
                coherent += by_points as usize;
            }
        }
    }
    // K1 × 3 is a triangle: only constant assignments are independent
    assert_eq!(coherent, 27 - 3);
}

#[test]
fn coherence_on_k2_matches_atom_search() {
    let m = model("K2");
    let k = m.vertex_count() as u32;
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let p = three_node_patches([a, b, c]);
                assert_eq!(
                    is_coherent(&m, &p, &[0, 1, 2]).unwrap(),
                    coherent_by_atoms(&m, &p, &[0, 1, 2]).unwrap()
                );
            }
        }
    }
}

#[test]
fn ultrafilter_for_tuple_matches_the_diagonal_pattern() {
    let m = model("K2");
    let p = three_node_patches([0, 3, 5]);
    assert_eq!(first_incoherent(&m, &p).unwrap(), None);
    for idx in 0..27 {
        let v = gralg::networks::tuple_at(3, 3, idx);
        let mu = ultrafilter_for_tuple(&m, &p, &v).unwrap();
        let atom = m.structure().atom(mu);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(atom.in_diagonal(i, j), v[i] == v[j], "{v:?}");
            }
        }
    }
}

#[test]
fn networks_from_patches_validate_for_two_seeds() {
    let m = model("K2");
    let p = three_node_patches([1, 2, 4]);
    let a = network_from_patch(&m, &p, SymmetryChoice::Seeded(1)).unwrap();
    let b = network_from_patch(&m, &p, SymmetryChoice::Seeded(2)).unwrap();
    for net in [&a, &b] {
        assert_eq!(validate_network(&m, net, Mode::Polyadic), Ok(()));
        assert_eq!(boundary(&m, net).unwrap(), p);
    }
    let bad = three_node_patches([1, 1, 1]);
    assert!(network_from_patch(&m, &bad, SymmetryChoice::Lexicographic).is_err());
}

fn observed_play(m: &AgsModel, opts: &GameOptions) -> (GameVerdict, Vec<UfNetwork>) {
    let seen = Mutex::new(Vec::new());
    let observer = |net: &UfNetwork| seen.lock().unwrap().push(net.clone());
    let report = exists_survives(m, opts, Some(&observer));
    (report.verdict, seen.into_inner().unwrap())
}

#[test]
fn engine_networks_are_valid_and_verdicts_match_the_oracle() {
    let m = model("K1");
    let start = UfNetwork::initial(&m);
    for depth in 0..=2 {
        let opts = GameOptions {
            depth,
            ..GameOptions::default()
        };
        let (verdict, seen) = observed_play(&m, &opts);
        assert!(!seen.is_empty());
        for net in &seen {
            assert_eq!(validate_network(&m, net, Mode::Polyadic), Ok(()));
            assert!(start.is_subnetwork_of(net));
            let p = boundary(&m, net).unwrap();
            assert_eq!(first_incoherent(&m, &p).unwrap(), None);
        }
        let oracle = naive_survives(&m, &start, depth, Mode::Polyadic);
        assert_eq!(
            verdict == GameVerdict::Survives,
            oracle,
            "depth {depth}: {verdict:?}"
        );
        assert!(!matches!(verdict, GameVerdict::Unknown { .. }));
    }
}

#[test]
fn cylindric_mode_agrees_with_the_oracle() {
    let m = model("K1");
    let start = UfNetwork::initial(&m);
    for depth in 1..=2 {
        let opts = GameOptions {
            depth,
            mode: Mode::Cylindric,
            ..GameOptions::default()
        };
        let verdict = exists_survives(&m, &opts, None).verdict;
        assert_eq!(
            verdict == GameVerdict::Survives,
            naive_survives(&m, &start, depth, Mode::Cylindric)
        );
    }
}

#[test]
fn survival_is_monotone_in_depth() {
    let m = model("K1");
    let verdicts: Vec<bool> = (0..=2)
        .map(|depth| {
            let opts = GameOptions {
                depth,
                ..GameOptions::default()
            };
            exists_survives(&m, &opts, None).verdict == GameVerdict::Survives
        })
        .collect();
    for d in 1..verdicts.len() {
        assert!(!verdicts[d] || verdicts[d - 1]);
    }
}

#[test]
fn element_moves_agree_with_atom_moves_at_depth_one() {
    let m = model("K1");
    let start = UfNetwork::initial(&m);
    let atoms = forall_moves(&m, &start, MoveKind::Atoms, 12).unwrap();
    let elements = forall_moves(&m, &start, MoveKind::Elements, 12).unwrap();
    assert!(elements.len() > atoms.len());
    let verdict = |moves| {
        exists_survives(
            &m,
            &GameOptions {
                depth: 1,
                moves,
                ..GameOptions::default()
            },
            None,
        )
        .verdict
    };
    assert_eq!(verdict(MoveKind::Atoms), verdict(MoveKind::Elements));
}

#[test]
fn constructed_strategy_reports_its_precondition_failure() {
    for name in ["K1", "K2"] {
        let m = model(name);
        let play = |depth| {
            let opts = GameOptions {
                depth,
                strategy: GameStrategy::Constructed,
                ..GameOptions::default()
            };
            observed_play(&m, &opts)
        };
        let (first, seen) = play(1);
        assert_eq!(first, GameVerdict::Survives, "{name}");
        for net in &seen {
            assert_eq!(validate_network(&m, net, Mode::Polyadic), Ok(()));
        }
        let (second, _) = play(2);
        match second {
            GameVerdict::PreconditionFailed {
                round,
                reason,
                trace,
            } => {
                assert_eq!(round, 1, "{name}");
                assert!(reason.contains("independent"));
                assert_eq!(trace.len(), 2);
                assert!(trace[1].response.is_none());
            }
            v => panic!("{name}: expected a precondition failure, got {v:?}"),
        }
    }
}
