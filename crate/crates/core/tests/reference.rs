//! Worked instances with values frozen from independent computations.

mod common;

use common::{all_systems, brute_ddpc, brute_max_cover, naive_partition, to_set};
use ddpc::boundary::{boundary_partition, lemma_report};
use ddpc::engine::{
    apply_move, augment_to_cover, find_moves, find_template_moves, solve, EngineConfig, Outcome, SolveError, Template,
};
use ddpc::generators::{generate, GenSpec};
use ddpc::ham::{hamiltonian_cycle, hamiltonian_path, is_hamiltonian_cycle};
use ddpc::oracle::{certify_maximal, exact_ddpc, exact_max_system, exact_st_linkage, VerdictKind, DEFAULT_BUDGET};
use ddpc::{is_ddpc, Digraph, PathSystem};
use itertools::Itertools;

#[test]
fn seeded_partition_matches_double_loop() {
    let d = generate(&GenSpec::semicomplete(9, 0.5, 42)).unwrap();
    let sys = exact_st_linkage(&d, 0, &[1, 2], DEFAULT_BUDGET).unwrap().system.unwrap();
    assert!(sys.cover_count() < 9, "linkage should leave H nonempty");
    let part = boundary_partition(&d, &sys).unwrap();
    let naive = naive_partition(&d, &sys);
    assert_eq!(to_set(&part.f), naive.f);
    assert_eq!(to_set(&part.r), naive.r);
    assert_eq!(to_set(&part.f_minus), naive.f_minus);
    assert_eq!(to_set(&part.r_plus), naive.r_plus);
    assert_eq!(to_set(&part.fm_minus), naive.fm_minus);
    assert_eq!(to_set(&part.rm_plus), naive.rm_plus);
    assert_eq!(to_set(&part.h), naive.h);
}

#[test]
fn seeded_max_cover_matches_enumerator() {
    for d in [generate(&GenSpec::semicomplete(9, 0.5, 7)).unwrap(), generate(&GenSpec::tournament(9, 7)).unwrap()] {
        let v = exact_max_system(&d, 0, &[1, 2], DEFAULT_BUDGET).unwrap();
        assert_eq!(v.max_cover, 9);
        assert_eq!(brute_max_cover(&d, 0, &[1, 2]), Some(9));
    }
}

#[test]
fn strong_tournament_on_four_has_a_four_cycle() {
    let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 1), (3, 2)]).unwrap();
    let c = hamiltonian_cycle(&d).unwrap();
    assert!(is_hamiltonian_cycle(&d, &c));
    let by_brute = (0..4).permutations(4).filter(|p| is_hamiltonian_cycle(&d, p)).count();
    assert!(by_brute > 0);
}

#[test]
fn three_cycle_paths_are_rotations() {
    let c3 = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
    let p = hamiltonian_path(&c3).unwrap();
    assert!([vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]].contains(&p));
}

#[test]
fn small_oracle_examples_agree_with_brute_force() {
    let tt3 = Digraph::from_arcs(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
    assert!(brute_ddpc(&tt3, 0, &[1, 2]));
    assert_eq!(exact_ddpc(&tt3, 0, &[1, 2], DEFAULT_BUDGET).unwrap().kind, VerdictKind::Found);

    // C3 plus 1 -> 0
    let d = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0), (1, 0)]).unwrap();
    let exists = brute_ddpc(&d, 0, &[1, 2]);
    assert!(!exists);
    assert_eq!(exact_ddpc(&d, 0, &[1, 2], DEFAULT_BUDGET).unwrap().kind, VerdictKind::NoneExists);
    // 0 reaches 2 only through 1, so there is not even a linkage
    assert_eq!(solve(&d, 0, &[1, 2], &EngineConfig::default()), Err(SolveError::NoDdpc));
}

#[test]
fn k5_move_completes_the_cover() {
    let d = Digraph::complete(5);
    let sys = PathSystem::from_paths(0, vec![vec![0, 1], vec![0, 2]]);
    let part = boundary_partition(&d, &sys).unwrap();
    let moves = find_moves(&d, &sys, &part).unwrap();
    let t1 = moves.iter().find(|m| m.template == Template::Detour).unwrap();
    let next = apply_move(&d, &sys, t1).unwrap();
    assert_eq!(next.paths(), &[vec![0, 3, 4, 1], vec![0, 2]]);
    assert_eq!(is_ddpc(&d, &next), Ok(true));
    for mv in &moves {
        assert!(apply_move(&d, &sys, mv).unwrap().cover_count() > sys.cover_count());
    }
    assert!(!certify_maximal(&d, &sys, DEFAULT_BUDGET).unwrap().is_maximal());
}

/// One path `0..=7` and a second path `0 8 9`. The only rewiring that
/// absorbs `H = {10, 11}` without losing vertices reverses two crossing
/// segments: `0 1 4 5 11 3 10 2 6 7`.
fn double_cross_instance() -> (Digraph, PathSystem) {
    let mut arcs: Vec<(usize, usize)> = (0..7).map(|v| (v, v + 1)).collect();
    arcs.extend([(0, 8), (8, 9), (1, 4), (2, 6), (3, 10), (10, 2), (5, 11), (11, 3), (10, 11), (11, 10)]);
    let d = Digraph::from_arcs(12, arcs).unwrap();
    (d, PathSystem::from_paths(0, vec![(0..8).collect(), vec![0, 8, 9]]))
}

#[test]
fn double_cross_gains_both_h_paths() {
    let (d, sys) = double_cross_instance();
    let part = boundary_partition(&d, &sys).unwrap();
    let moves = find_template_moves(&d, &sys, &part, Template::DoubleCross).unwrap();
    assert_eq!(moves.len(), 1);
    let mv = &moves[0];
    let q: usize = mv.h_paths.iter().map(Vec::len).sum();
    assert_eq!(q, 2);
    assert_eq!(mv.gain(), q);
    let next = apply_move(&d, &sys, mv).unwrap();
    assert_eq!(next.path(0), &[0, 1, 4, 5, 11, 3, 10, 2, 6, 7]);
    assert_eq!(next.cover_count(), sys.cover_count() + q);
    assert_eq!(mv.to_string(), "T5_double_cross path=0,w1=1,w2=2,a1=4,a2=6,q1=10,q2=11 10 12");
}

#[test]
fn stuck_on_instance_without_ddpc() {
    let d = generate(&GenSpec::tournament(7, 0)).unwrap();
    assert_eq!(exact_ddpc(&d, 0, &[1, 2], DEFAULT_BUDGET).unwrap().kind, VerdictKind::NoneExists);
    let init = exact_st_linkage(&d, 0, &[1, 2], DEFAULT_BUDGET).unwrap().system.unwrap();
    let aug = augment_to_cover(&d, &init).unwrap();
    assert_eq!(aug.outcome, Outcome::Stuck);
    assert_eq!(aug.system.cover_count(), 5);
    assert_eq!(exact_max_system(&d, 0, &[1, 2], DEFAULT_BUDGET).unwrap().max_cover, 5);
    let part = boundary_partition(&d, &aug.system).unwrap();
    assert!(find_moves(&d, &aug.system, &part).unwrap().is_empty());
    let cfg = EngineConfig::default();
    assert_eq!(solve(&d, 0, &[1, 2], &cfg), Err(SolveError::NoDdpc));
    let capped = EngineConfig { fallback: false, ..cfg };
    assert_eq!(solve(&d, 0, &[1, 2], &capped), Err(SolveError::Unknown));
}

#[test]
fn certified_maximum_systems_admit_no_moves() {
    let mut checked = 0;
    for seed in 0..40 {
        let d = generate(&GenSpec::semicomplete(7, 0.3, seed)).unwrap();
        let v = exact_max_system(&d, 0, &[1, 2], DEFAULT_BUDGET).unwrap();
        let Some(sys) = v.system else { continue };
        if sys.cover_count() == d.order() {
            continue;
        }
        assert!(certify_maximal(&d, &sys, DEFAULT_BUDGET).unwrap().is_maximal());
        let part = boundary_partition(&d, &sys).unwrap();
        assert!(find_moves(&d, &sys, &part).unwrap().is_empty());
        let report = lemma_report(&d, &sys, true).unwrap();
        assert_eq!(report.defects().count(), 0, "{report}");
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn every_system_on_a_small_instance() {
    let d = generate(&GenSpec::semicomplete(6, 0.4, 3)).unwrap();
    let systems = all_systems(&d, 0, &[1, 2]);
    assert!(!systems.is_empty());
    let best = systems.iter().map(PathSystem::cover_count).max().unwrap();
    assert_eq!(exact_max_system(&d, 0, &[1, 2], DEFAULT_BUDGET).unwrap().max_cover, best);
    for sys in systems.iter().filter(|s| s.cover_count() < d.order()) {
        let part = boundary_partition(&d, sys).unwrap();
        for mv in find_moves(&d, sys, &part).unwrap() {
            let next = apply_move(&d, sys, &mv).unwrap();
            assert!(next.cover_count() > sys.cover_count());
            assert!(next.cover_count() <= best);
        }
    }
}
