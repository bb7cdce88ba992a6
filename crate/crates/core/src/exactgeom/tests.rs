use super::*;
use crate::budget::Budget;
use crate::encodings::{bis_polytope, p2m_polytope, pm_polytope, UGraph};
use proptest::prelude::*;

fn square() -> HPolytope {
    HPolytope::cube(2, 0, 1).unwrap()
}

fn pt(xs: &[(i64, i64)]) -> RationalPoint {
    RationalPoint::from_fractions(xs).unwrap()
}

#[test]
fn feasibility() {
    assert!(is_feasible(&square(), &pt(&[(1, 2), (1, 2)])).unwrap());
    assert!(!is_feasible(&square(), &RationalPoint::from_integers(&[2, 0])).unwrap());
    let c4 = p2m_polytope(&UGraph::cycle(4)).unwrap();
    assert!(is_feasible(&c4, &RationalPoint::from_integers(&[1, 1, 1, 1])).unwrap());
    assert!(matches!(
        is_feasible(&square(), &RationalPoint::from_integers(&[0])),
        Err(Error::DimensionMismatch {
            expected: 2,
            got: 1
        })
    ));
}

#[test]
fn tight_row_sets() {
    // cube rows: x<=1, -x<=0, y<=1, -y<=0
    assert_eq!(
        tight_rows(&square(), &RationalPoint::from_integers(&[0, 0])).unwrap(),
        vec![1, 3]
    );
    assert!(tight_rows(&square(), &pt(&[(1, 2), (1, 2)]))
        .unwrap()
        .is_empty());
    assert_eq!(
        tight_rows(&square(), &pt(&[(1, 1), (1, 2)])).unwrap(),
        vec![0]
    );
    assert!(matches!(
        tight_rows(&square(), &RationalPoint::from_integers(&[3, 0])),
        Err(Error::Infeasible)
    ));
}

#[test]
fn vertex_tests() {
    assert!(is_vertex(&square(), &RationalPoint::from_integers(&[1, 1])).unwrap());
    assert!(!is_vertex(&square(), &pt(&[(1, 2), (1, 2)])).unwrap());
    assert!(!is_vertex(&square(), &RationalPoint::from_integers(&[5, 5])).unwrap());
    let c4 = p2m_polytope(&UGraph::cycle(4)).unwrap();
    assert!(!is_vertex(&c4, &RationalPoint::from_integers(&[1, 1, 1, 1])).unwrap());
    assert!(is_vertex(&c4, &RationalPoint::from_integers(&[2, 0, 2, 0])).unwrap());
}

#[test]
fn rational_points_are_canonical() {
    assert_eq!(pt(&[(2, 4)]), pt(&[(1, 2)]));
    assert_eq!(pt(&[(3, -6)]), pt(&[(-1, 2)]));
    assert!(RationalPoint::from_fractions(&[(1, 0)]).is_err());
}

#[test]
fn cube_corners() {
    let cube = HPolytope::cube(3, 0, 1).unwrap();
    let verts = enumerate_integral_vertices(
        &cube,
        &IntegerBox::uniform(3, 0, 1).unwrap(),
        &Budget::default(),
    )
    .unwrap();
    let expected: Vec<RationalPoint> = (0..8)
        .map(|m: i64| RationalPoint::from_integers(&[m >> 2 & 1, m >> 1 & 1, m & 1]))
        .collect();
    assert_eq!(verts, expected);
}

#[test]
fn p2m_k3_and_k4() {
    let k3 = p2m_polytope(&UGraph::complete(3)).unwrap();
    let v = enumerate_integral_vertices(
        &k3,
        &IntegerBox::uniform(3, 0, 2).unwrap(),
        &Budget::default(),
    )
    .unwrap();
    assert_eq!(v, vec![RationalPoint::from_integers(&[1, 1, 1])]);
    // K4 edges: 01 02 03 12 13 23; perfect matchings {01,23} {02,13} {03,12}.
    let k4 = p2m_polytope(&UGraph::complete(4)).unwrap();
    let v = enumerate_integral_vertices(
        &k4,
        &IntegerBox::uniform(6, 0, 2).unwrap(),
        &Budget::default(),
    )
    .unwrap();
    let expected = vec![
        RationalPoint::from_integers(&[0, 0, 2, 2, 0, 0]),
        RationalPoint::from_integers(&[0, 2, 0, 0, 2, 0]),
        RationalPoint::from_integers(&[2, 0, 0, 0, 0, 2]),
    ];
    assert_eq!(v, expected);
}

#[test]
fn zero_one_counts() {
    for n in 1..=6 {
        let cube = HPolytope::cube(n, 0, 1).unwrap();
        assert_eq!(
            count_vertices_01(&cube, &Budget::default()).unwrap(),
            BigUint::from(1u32 << n)
        );
    }
    let edge = bis_polytope(&UGraph::complete_bipartite(1, 1))
        .unwrap()
        .polytope;
    assert_eq!(
        count_vertices_01(&edge, &Budget::default()).unwrap(),
        BigUint::from(3u8)
    );
    let k33 = pm_polytope(&UGraph::complete_bipartite(3, 3)).unwrap();
    assert_eq!(
        count_vertices_01(&k33, &Budget::default()).unwrap(),
        BigUint::from(6u8)
    );
}

#[test]
fn budget_refusals() {
    let cube = HPolytope::cube(10, 0, 1).unwrap();
    let small = Budget::new(1000);
    assert!(count_vertices_01(&cube, &small).unwrap_err().is_budget());
    assert!(
        enumerate_integral_vertices(&cube, &IntegerBox::uniform(10, 0, 1).unwrap(), &small)
            .unwrap_err()
            .is_budget()
    );
}

#[test]
fn wide_coefficients_take_the_bigint_path() {
    let huge: BigInt = BigInt::from(1u8) << 100usize;
    let a = vec![
        vec![huge.clone(), BigInt::zero()],
        vec![BigInt::zero(), BigInt::one()],
        vec![-BigInt::one(), BigInt::zero()],
        vec![BigInt::zero(), -BigInt::one()],
    ];
    let p = HPolytope::new(a, vec![huge, BigInt::one(), BigInt::zero(), BigInt::zero()]).unwrap();
    assert_eq!(
        count_vertices_01(&p, &Budget::default()).unwrap(),
        BigUint::from(4u8)
    );
}

#[test]
fn parse_and_errors() {
    let src = "# square\n4 2\n1 0 1\n-1 0 0\n0 1 1\n0 -1 0\n";
    assert_eq!(HPolytope::parse(src).unwrap(), square());
    assert_eq!(HPolytope::parse(&square().to_text()).unwrap(), square());
    assert!(matches!(
        HPolytope::parse("1 2\n1 z 3\n"),
        Err(Error::Parse {
            line: 2,
            column: 3,
            ..
        })
    ));
    assert!(matches!(
        HPolytope::parse("2 1\n1 1\n"),
        Err(Error::Parse { line: 3, .. })
    ));
    assert!(matches!(
        HPolytope::parse("1 1\n1 1 1\n"),
        Err(Error::Parse {
            line: 2,
            column: 5,
            ..
        })
    ));
    assert!(HPolytope::new(
        vec![vec![BigInt::one()], vec![]],
        vec![BigInt::one(), BigInt::one()]
    )
    .is_err());
}

/// Random 0/1 systems: a few random rows with small coefficients plus the
/// cube bounds.
fn random_01_system() -> impl Strategy<Value = HPolytope> {
    (1usize..=5, 0usize..=4).prop_flat_map(|(n, extra)| {
        proptest::collection::vec((proptest::collection::vec(-2i64..=2, n), -1i64..=3), extra)
            .prop_map(move |rows| {
                let mut p = HPolytope::cube(n, 0, 1).unwrap();
                for (row, rhs) in rows {
                    p.push_row(
                        row.into_iter().map(BigInt::from).collect(),
                        BigInt::from(rhs),
                    )
                    .unwrap();
                }
                p
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn feasible_cube_corners_are_vertices(p in random_01_system()) {
        let n = p.dim();
        for mask in 0u32..(1 << n) {
            let x: Vec<i64> = (0..n).map(|i| (mask >> i & 1) as i64).collect();
            let x = RationalPoint::from_integers(&x);
            if is_feasible(&p, &x)? {
                prop_assert!(is_vertex(&p, &x)?);
            }
        }
    }

    #[test]
    fn enumeration_agrees_with_01_count(p in random_01_system()) {
        let window = IntegerBox::uniform(p.dim(), 0, 1)?;
        let verts = enumerate_integral_vertices(&p, &window, &Budget::default())?;
        prop_assert_eq!(BigUint::from(verts.len()), count_vertices_01(&p, &Budget::default())?);
        let mut sorted = verts.clone();
        sorted.sort();
        prop_assert_eq!(sorted, verts);
    }

    #[test]
    fn vertex_test_ignores_duplicate_and_scaled_rows(p in random_01_system(), pick in any::<usize>(), scale in 1i64..=4) {
        let i = pick % p.rows();
        let mut dup = p.clone();
        dup.push_row(p.matrix()[i].clone(), p.rhs()[i].clone())?;
        let mut scaled_a = p.matrix().to_vec();
        let mut scaled_b = p.rhs().to_vec();
        scaled_a[i] = scaled_a[i].iter().map(|c| c * scale).collect();
        scaled_b[i] = &scaled_b[i] * scale;
        let scaled = HPolytope::new(scaled_a, scaled_b)?;
        let n = p.dim();
        for code in 0..3i64.pow(n as u32) {
            let x: Vec<i64> = (0..n).map(|k| code / 3i64.pow(k as u32) % 3).collect();
            let x = RationalPoint::new(x.iter().map(|&v| BigRational::new(BigInt::from(v), BigInt::from(2))).collect());
            let v = is_vertex(&p, &x)?;
            prop_assert_eq!(v, is_vertex(&dup, &x)?);
            prop_assert_eq!(v, is_vertex(&scaled, &x)?);
        }
    }

    #[test]
    fn text_round_trip(p in random_01_system()) {
        prop_assert_eq!(HPolytope::parse(&p.to_text())?, p);
    }
}
