use super::*;
use crate::encodings::bis_polytope;
use crate::exactgeom::feasible_points_01;
use crate::netmatrix::transpose_network_polytope;
use crate::oracles::{
    count_1p1nsat, count_models, count_odd_cycle_covers, enumerate_p2m_covers,
    exists_hamiltonian_path,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn budget() -> Budget {
    Budget::default()
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn zptm_brute(g: &UGraph) -> BigUint {
    BigUint::from(enumerate_p2m_covers(g, &budget()).unwrap().len())
}

fn satisfied(phi: &CnfFormula, truth: &[bool]) -> bool {
    phi.clauses()
        .iter()
        .all(|c| c.iter().any(|l| truth[l.var as usize] == l.positive))
}

#[test]
fn hampath_examples() {
    let edge = UGraph::bipartite(1, 2, vec![(0, 1)]).unwrap();
    let tri = hampath_to_occ(&edge, 0, 1).unwrap();
    assert_eq!((tri.vertex_count(), tri.edge_count()), (3, 3));
    assert_eq!(count_odd_cycle_covers(&tri, &budget()).unwrap(), big(1));
    assert!(exists_hamiltonian_path(&edge, 0, 1, &budget()).unwrap());

    // s and t share a block: the detour has two fresh vertices.
    let path = UGraph::bipartite(2, 3, vec![(0, 2), (2, 1)]).unwrap();
    let g = hampath_to_occ(&path, 0, 1).unwrap();
    assert_eq!(g.vertex_count(), 5);
    assert!(count_odd_cycle_covers(&g, &budget()).unwrap() >= big(1));
    assert!(exists_hamiltonian_path(&path, 0, 1, &budget()).unwrap());
    let unsided = UGraph::new(3, vec![(0, 2), (2, 1)]).unwrap();
    assert_eq!(hampath_to_occ(&unsided, 0, 1).unwrap().vertex_count(), 5);
    assert!(hampath_to_occ(&UGraph::complete(3), 0, 1).is_err());

    let apart = UGraph::bipartite(1, 2, vec![]).unwrap();
    let g = hampath_to_occ(&apart, 0, 1).unwrap();
    assert_eq!(g.edges(), &[(0, 2), (2, 1)]);
    assert_eq!(count_odd_cycle_covers(&g, &budget()).unwrap(), big(0));
    assert!(!exists_hamiltonian_path(&apart, 0, 1, &budget()).unwrap());

    assert!(hampath_to_occ(&edge, 1, 1).is_err());
    assert!(hampath_to_occ(&edge, 0, 2).is_err());
}

#[test]
fn gadget_shape() {
    let g1 = hexagon_gadget(1).unwrap();
    assert_eq!((g1.graph.vertex_count(), g1.graph.edge_count()), (12, 13));
    let g2 = hexagon_gadget(2).unwrap();
    assert_eq!((g2.graph.vertex_count(), g2.graph.edge_count()), (22, 25));
    assert!(hexagon_gadget(0).is_err());
    let degree =
        |g: &UGraph, v: usize| g.edges().iter().filter(|&&(a, b)| a == v || b == v).count();
    assert_eq!((degree(&g1.graph, 0), degree(&g1.graph, 1)), (2, 1));
}

#[test]
fn census_matches_closed_form() {
    for (ell, p, m) in [(1, 4u64, 2u64), (2, 16, 4)] {
        let census = gadget_census(&hexagon_gadget(ell).unwrap(), &budget()).unwrap();
        assert_eq!(
            census,
            GadgetCensus {
                type_p: big(p),
                type_m: big(m),
                type_u: big(m)
            }
        );
        assert_eq!(census, GadgetCensus::closed_form(ell));
    }
}

#[test]
fn power_graph_examples() {
    let k2 = UGraph::complete(2);
    let p = power_graph(&k2, 1, &budget()).unwrap();
    assert_eq!(p.graph.vertex_count(), 12);
    assert_eq!(zptm_brute(&p.graph), big(2));

    let k3 = UGraph::complete(3);
    let p = power_graph(&k3, 1, &budget()).unwrap();
    assert_eq!((p.graph.vertex_count(), p.graph.edge_count()), (33, 39));
    assert_eq!(p.copies[2].vertices, 23..33);
    assert_eq!(p.copies[1].edges, 13..26);
    assert_eq!(&p.graph.edges()[13], &(0, 13));
    assert_eq!(zptm_brute(&p.graph), big(64));

    let isolated = UGraph::new(3, vec![(0, 1)]).unwrap();
    assert_eq!(
        zptm_brute(&power_graph(&isolated, 1, &budget()).unwrap().graph),
        big(0)
    );
    assert!(power_graph(&k2, 0, &budget()).is_err());
    assert!(power_graph(&k3, 1, &Budget::new(10))
        .unwrap_err()
        .is_budget());
}

#[test]
fn census_formula_examples() {
    assert_eq!(
        zptm_by_census(&UGraph::complete(2), 1, &budget()).unwrap(),
        big(2)
    );
    assert_eq!(
        zptm_by_census(&UGraph::complete(3), 1, &budget()).unwrap(),
        big(64)
    );
    assert_eq!(
        zptm_by_census(&UGraph::cycle(4), 1, &budget()).unwrap(),
        big(32)
    );
    let c4 = power_graph(&UGraph::cycle(4), 1, &budget()).unwrap();
    assert_eq!(zptm_brute(&c4.graph), big(32));
}

#[test]
fn occ_decision_examples() {
    let k3 = UGraph::complete(3);
    let exact = zptm_by_census(&k3, 5, &budget()).unwrap();
    assert!(occ_decision(&k3, &exact, 5).unwrap());
    let c4 = UGraph::cycle(4);
    let exact = zptm_by_census(&c4, 6, &budget()).unwrap();
    assert!(!occ_decision(&c4, &exact, 6).unwrap());
    assert!(!occ_decision(&k3, &BigUint::zero(), 5).unwrap());
    assert!(occ_decision(&k3, &exact, 4).is_err());
}

#[test]
fn tnet_examples() {
    let one = NetworkMatrixSpec::new(2, vec![(0, 1)], vec![]).unwrap();
    let phi = tnet_to_1p1nsat(&one, &[], 0).unwrap();
    assert_eq!(phi.variable_count(), 4);
    assert_eq!(count_1p1nsat(&phi, &budget()).unwrap(), big(2));

    let edge = UGraph::bipartite(1, 2, vec![(0, 1)]).unwrap();
    let bis = bis_polytope(&edge).unwrap();
    let phi = tnet_to_1p1nsat(&bis.spec, &bis.rhs, 0).unwrap();
    assert!(phi.is_1p1n());
    assert_eq!(count_1p1nsat(&phi, &budget()).unwrap(), big(3));

    assert!(tnet_to_1p1nsat(&one, &[], 2).is_err());
    assert!(tnet_to_1p1nsat(&one, &[1], 0).is_err());
}

#[test]
fn single_ladder_has_2n_plus_1_models() {
    for n in 1..6usize {
        let spec =
            NetworkMatrixSpec::new(n + 1, (0..n).map(|i| (i, i + 1)).collect(), vec![]).unwrap();
        let phi = tnet_to_1p1nsat(&spec, &[], 0).unwrap();
        let v = n;
        let ladder: Vec<Vec<Literal>> = phi
            .clauses()
            .iter()
            .filter(|c| c.len() == 2 && c.iter().all(|l| phi.names()[&l.var].0 == v))
            .cloned()
            .collect();
        assert_eq!(ladder.len(), 2 * n - 1);
        let first = ladder_var(n, v, 1 - n as i64);
        let shifted: Vec<Vec<Literal>> = ladder
            .iter()
            .map(|c| {
                c.iter()
                    .map(|l| Literal {
                        var: l.var - first + 1,
                        ..*l
                    })
                    .collect()
            })
            .collect();
        assert_eq!(
            count_models(2 * n as u32, &shifted, &budget()).unwrap(),
            big(2 * n as u64 + 1)
        );
    }
}

#[test]
fn variable_numbering_and_names() {
    let spec = NetworkMatrixSpec::new(3, vec![(0, 1), (2, 1)], vec![(0, 2)]).unwrap();
    let phi = tnet_to_1p1nsat(&spec, &[1], 0).unwrap();
    assert_eq!(phi.variable_count(), 12);
    assert_eq!(ladder_var(2, 0, -1), 1);
    assert_eq!(ladder_var(2, 1, 2), 8);
    assert_eq!(phi.names()[&8], (1, 2));
    assert!(phi.to_dimacs().starts_with("c zeta 0 -1 1\n"));
    assert_eq!(CnfFormula::parse_dimacs(&phi.to_dimacs()).unwrap(), phi);
}

#[test]
fn out_of_range_constants() {
    let spec = NetworkMatrixSpec::new(2, vec![(0, 1)], vec![(0, 1), (1, 0)]).unwrap();
    // z_1 - z_0 <= -3 with n = 1 is infeasible outright.
    let phi = tnet_to_1p1nsat(&spec, &[-3, 5], 0).unwrap();
    assert_eq!(count_1p1nsat(&phi, &budget()).unwrap(), big(0));
    // A huge bound is vacuous.
    let phi = tnet_to_1p1nsat(&spec, &[9, 9], 0).unwrap();
    assert_eq!(count_1p1nsat(&phi, &budget()).unwrap(), big(2));
    // x <= -1 is empty; -x <= -1 pins x = 1.
    let phi = tnet_to_1p1nsat(&spec, &[-1, 5], 0).unwrap();
    assert_eq!(count_1p1nsat(&phi, &budget()).unwrap(), big(0));
    let phi = tnet_to_1p1nsat(&spec, &[5, -1], 0).unwrap();
    assert_eq!(count_1p1nsat(&phi, &budget()).unwrap(), big(1));
}

fn random_instance(
    seed: u64,
    max_t: usize,
    max_e: usize,
    b_range: Range<i64>,
) -> (NetworkMatrixSpec, Vec<i64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(2..=max_t + 1);
    let ne = rng.gen_range(1..=max_e);
    let spec = NetworkMatrixSpec::random(&mut rng, nv, ne);
    let b = (0..ne).map(|_| rng.gen_range(b_range.clone())).collect();
    (spec, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn occ_reduction_tracks_hamiltonian_paths(
        a in 1usize..6,
        b in 1usize..6,
        raw in proptest::collection::vec((0usize..6, 0usize..6), 0..16),
        s in 0usize..10,
        t in 0usize..10,
    ) {
        let n = a + b;
        let (s, t) = (s % n, t % n);
        prop_assume!(s != t);
        let edges: Vec<_> = raw.into_iter().map(|(i, j)| (i % a, a + j % b)).collect();
        let g = UGraph::bipartite(a, n, edges).unwrap();
        let occ = count_odd_cycle_covers(&hampath_to_occ(&g, s, t).unwrap(), &budget()).unwrap();
        prop_assert_eq!(!occ.is_zero(), exists_hamiltonian_path(&g, s, t, &budget()).unwrap());
    }

    #[test]
    fn reduction_is_parsimonious(seed in any::<u64>()) {
        let (spec, b) = random_instance(seed, 6, 8, -2..3);
        let p = transpose_network_polytope(&spec, &b).unwrap();
        let points = feasible_points_01(&p, &budget()).unwrap();
        let root = (seed % spec.vertex_count() as u64) as usize;
        let phi = tnet_to_1p1nsat(&spec, &b, root).unwrap();
        prop_assert!(phi.is_1p1n());
        prop_assert_eq!(count_1p1nsat(&phi, &budget()).unwrap(), BigUint::from(points.len()));
        for x in &points {
            prop_assert!(satisfied(&phi, &ladder_assignment(&spec, x, root).unwrap()));
        }
    }

    #[test]
    fn gadget_census_composes(raw in proptest::collection::vec((0usize..4, 0usize..4), 1..5)) {
        let edges: Vec<_> = raw.into_iter().filter(|(u, v)| u != v).collect();
        prop_assume!(!edges.is_empty());
        let g = UGraph::new(4, edges).unwrap();
        let p = power_graph(&g, 1, &budget()).unwrap();
        prop_assert_eq!(zptm_by_census(&g, 1, &budget()).unwrap(), zptm_brute(&p.graph));
    }
}
