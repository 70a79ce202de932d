use proptest::prelude::*;

use densesf_core::generators::{gen_dense, gen_packing, gen_parallel_bicliques, DenseParams};
use densesf_core::greedy::solve_greedy;
use densesf_core::half_dense::solve_half_dense;
use densesf_core::oracle::oracle_steiner_forest;
use densesf_core::packing::{solve_packing_exact, solve_packing_local_search};
use densesf_core::tree_solver::solve_theorem1;
use densesf_core::{
    verify_solution, Error, OracleCaps, PackingBackend, PackingInstance, Rational, SolutionForest,
    SteinerForestInstance, TreeSolverConfig,
};

fn dense(sizes: Vec<usize>, steiner: usize, num: i64, den: i64, seed: u64) -> SteinerForestInstance {
    gen_dense(&DenseParams {
        sizes,
        steiner_count: steiner,
        delta: Rational::new(num, den),
        intra_edge_prob: 0.3,
        seed,
    })
    .unwrap()
}

fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut x = seed | 1;
    for i in (1..n).rev() {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        perm.swap(i, (x % (i as u64 + 1)) as usize);
    }
    perm
}

fn value(r: Result<SolutionForest, Error>) -> Option<usize> {
    r.ok().map(|f| f.edge_count())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_json_round_trips(sizes in prop::collection::vec(1usize..4, 1..5), steiner in 0usize..3, seed: u64) {
        let inst = dense(sizes, steiner, 3, 5, seed);
        let text = inst.to_json().unwrap();
        let back = SteinerForestInstance::from_json(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn solver_values_ignore_node_labels(sizes in prop::collection::vec(1usize..4, 1..6), seed: u64, perm_seed: u64) {
        let inst = dense(sizes, 0, 2, 3, seed);
        let perm = shuffled(inst.node_count(), perm_seed);
        let moved = inst.permuted(&perm);
        prop_assert_eq!(value(solve_greedy(&inst)), value(solve_greedy(&moved)));
        let caps = OracleCaps::default();
        prop_assert_eq!(value(oracle_steiner_forest(&inst, &caps)), value(oracle_steiner_forest(&moved, &caps)));
    }

    #[test]
    fn combiner_never_beats_the_oracle(sizes in prop::collection::vec(1usize..4, 1..4), steiner in 1usize..4, seed: u64) {
        let inst = dense(sizes, steiner, 3, 4, seed);
        let opt = value(oracle_steiner_forest(&inst, &OracleCaps::default()));
        let eps = TreeSolverConfig::from_epsilon(Rational::new(1, 3)).unwrap();
        match solve_theorem1(&inst, &eps) {
            Ok(f) => {
                prop_assert_eq!(verify_solution(&inst, &f), Ok(()));
                prop_assert!(Some(f.edge_count()) >= opt);
            }
            Err(e) => {
                prop_assert!(matches!(e, Error::NoSolution));
                prop_assert_eq!(opt, None);
            }
        }
    }

    #[test]
    fn half_dense_forests_are_feasible(k in 2usize..6, half in 1usize..3, mask: u16, seed: u64) {
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p)
            .collect();
        let inst = gen_parallel_bicliques(k, half, &pairs, seed).unwrap();
        for backend in [PackingBackend::Exact, PackingBackend::LocalSearch { swap_size: 1 }] {
            if let Ok(f) = solve_half_dense(&inst, backend) {
                prop_assert_eq!(verify_solution(&inst, &f), Ok(()));
            }
        }
    }

    #[test]
    fn exact_packing_dominates_local(universe in 2usize..14, size in 1usize..18, seed: u64) {
        let p: PackingInstance = gen_packing(universe, size, seed).unwrap();
        let exact = solve_packing_exact(&p).unwrap();
        prop_assert!(p.is_packing(&exact.chosen));
        for s in 1..=3 {
            let local = solve_packing_local_search(&p, s).unwrap();
            prop_assert!(p.is_packing(&local.chosen));
            prop_assert!(local.len() <= exact.len());
        }
    }
}
