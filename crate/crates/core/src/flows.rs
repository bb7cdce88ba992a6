//! Network-matrix polytopes as integer flow problems.
//!
//! For a spec `(V, T, E)` the flow network lives on `V` with one reversed arc
//! per graph arc (carrying `x_e`) and one arc per tree arc. Circulations are
//! determined by their values on the reversed arcs, and the forced value on
//! tree arc `t` is row `t` of `A x`, so bounds on tree arcs are exactly the
//! rows of `A x <= b`.

use crate::budget::Budget;
use crate::encodings::UGraph;
use crate::error::{Error, Result};
use crate::netmatrix::{generate, NetworkMatrixSpec};
use crate::oracles;
use crate::text::Lines;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Where a flow arc comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcOrigin {
    /// Reversed graph arc `e`.
    GraphArc(usize),
    /// Tree arc `t`.
    TreeArc(usize),
    /// Read from a file or built by hand.
    Input,
}

/// `lower == None` means minus infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FlowArc {
    pub tail: usize,
    pub head: usize,
    pub lower: Option<i64>,
    pub upper: i64,
    pub origin: ArcOrigin,
}

impl FlowArc {
    pub fn new(tail: usize, head: usize, lower: Option<i64>, upper: i64) -> Self {
        FlowArc {
            tail,
            head,
            lower,
            upper,
            origin: ArcOrigin::Input,
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.lower, Some(0) | Some(1)) && self.upper == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlowNetwork {
    node_count: usize,
    arcs: Vec<FlowArc>,
}

impl FlowNetwork {
    pub fn new(node_count: usize, arcs: Vec<FlowArc>) -> Result<Self> {
        for a in &arcs {
            if a.tail >= node_count || a.head >= node_count {
                return Err(Error::IndexOutOfRange {
                    index: a.tail.max(a.head),
                    limit: node_count,
                });
            }
            if let Some(lo) = a.lower {
                if lo > a.upper {
                    return Err(Error::invalid(format!(
                        "arc {}->{} has lower bound {lo} above upper bound {}",
                        a.tail, a.head, a.upper
                    )));
                }
            }
        }
        Ok(FlowNetwork { node_count, arcs })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    /// Whether `flow` respects every bound and conserves at every node.
    pub fn is_flow(&self, flow: &[i64]) -> bool {
        if flow.len() != self.arcs.len() {
            return false;
        }
        let mut excess = vec![0i128; self.node_count];
        for (a, &f) in self.arcs.iter().zip(flow) {
            if f > a.upper || a.lower.is_some_and(|lo| f < lo) {
                return false;
            }
            excess[a.head] += f as i128;
            excess[a.tail] -= f as i128;
        }
        excess.iter().all(|&x| x == 0)
    }

    /// Format: `nodes arcs`, then `tail head lo hi` per arc; `lo` may be
    /// `-inf`.
    pub fn parse(src: &str) -> Result<Self> {
        let mut lines = Lines::new(src, '#');
        let header = lines.next_line("header `nodes arcs`")?;
        header.expect_len(2, "header")?;
        let n: usize = header.parse(0, "node count")?;
        let m: usize = header.parse(1, "arc count")?;
        let mut arcs = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines.next_line("arc `tail head lo hi`")?;
            line.expect_len(4, "arc")?;
            let tail: usize = line.parse(0, "tail")?;
            let head: usize = line.parse(1, "head")?;
            for (i, x) in [(0, tail), (1, head)] {
                if x >= n {
                    return Err(line.error(i, "node out of range"));
                }
            }
            let lower = if line.field(2) == Some("-inf") {
                None
            } else {
                Some(line.parse::<i64>(2, "lower bound")?)
            };
            let upper: i64 = line.parse(3, "upper bound")?;
            if lower.is_some_and(|lo| lo > upper) {
                return Err(line.error(2, "lower bound exceeds upper bound"));
            }
            arcs.push(FlowArc::new(tail, head, lower, upper));
        }
        lines.expect_end()?;
        FlowNetwork::new(n, arcs)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.node_count, self.arcs.len());
        for a in &self.arcs {
            let lo = a
                .lower
                .map_or_else(|| "-inf".to_string(), |x| x.to_string());
            out.push_str(&format!("{} {} {} {}\n", a.tail, a.head, lo, a.upper));
        }
        out
    }
}

/// `L_t(x) = sum_{F_t^+} x_e - sum_{F_t^-} x_e <= b_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    /// One coefficient per graph arc, in `{-1, 0, 1}`.
    pub coefficients: Vec<i64>,
    pub bound: i64,
}

impl LinearForm {
    /// `F_t^+`: graph arcs whose tree path crosses `t` forwards.
    pub fn forward(&self) -> Vec<usize> {
        (0..self.coefficients.len())
            .filter(|&e| self.coefficients[e] > 0)
            .collect()
    }

    /// `F_t^-`: graph arcs whose tree path crosses `t` backwards.
    pub fn backward(&self) -> Vec<usize> {
        (0..self.coefficients.len())
            .filter(|&e| self.coefficients[e] < 0)
            .collect()
    }

    pub fn eval(&self, x: &[i64]) -> i64 {
        self.coefficients.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

/// The inequality for tree arc `t`, computed from the tree paths directly.
pub fn tree_inequality(spec: &NetworkMatrixSpec, b: &[i64], t: usize) -> Result<LinearForm> {
    let limit = spec.tree_arcs().len();
    if t >= limit {
        return Err(Error::IndexOutOfRange { index: t, limit });
    }
    if b.len() != limit {
        return Err(Error::DimensionMismatch {
            expected: limit,
            got: b.len(),
        });
    }
    let mut coefficients = vec![0i64; spec.graph_arcs().len()];
    for (e, &(u, v)) in spec.graph_arcs().iter().enumerate() {
        if let Some(&(_, sign)) = spec.tree_path(u, v).iter().find(|&&(s, _)| s == t) {
            coefficients[e] = sign as i64;
        }
    }
    Ok(LinearForm {
        coefficients,
        bound: b[t],
    })
}

/// Flow network for `{0 <= x <= 1, lower <= A x <= b}`.
///
/// Arcs `0..|E|` are the reversed graph arcs with bounds `[0,1]`, then one arc
/// per tree arc with upper bound `b_t` and lower bound `lower[t]`, or minus
/// infinity without `lower`. `f_e = x_e` on the first block of arcs.
pub fn netmatrix_to_flow(
    spec: &NetworkMatrixSpec,
    b: &[i64],
    lower: Option<&[i64]>,
) -> Result<FlowNetwork> {
    let t_count = spec.tree_arcs().len();
    for v in std::iter::once(b).chain(lower) {
        if v.len() != t_count {
            return Err(Error::DimensionMismatch {
                expected: t_count,
                got: v.len(),
            });
        }
    }
    let mut arcs = Vec::with_capacity(spec.graph_arcs().len() + t_count);
    for (e, &(u, v)) in spec.graph_arcs().iter().enumerate() {
        arcs.push(FlowArc {
            tail: v,
            head: u,
            lower: Some(0),
            upper: 1,
            origin: ArcOrigin::GraphArc(e),
        });
    }
    for (t, &(u, v)) in spec.tree_arcs().iter().enumerate() {
        let lo = lower.map(|l| l[t]);
        if lo.is_some_and(|lo| lo > b[t]) {
            return Err(Error::invalid(format!("tree arc {t}: lower bound above b")));
        }
        arcs.push(FlowArc {
            tail: u,
            head: v,
            lower: lo,
            upper: b[t],
            origin: ArcOrigin::TreeArc(t),
        });
    }
    FlowNetwork::new(spec.vertex_count(), arcs)
}

/// The network's circulation for a point `x` over the graph arcs: `x` on the
/// reversed arcs, `A x` on the tree arcs.
pub fn flow_from_point(spec: &NetworkMatrixSpec, x: &[i64]) -> Result<Vec<i64>> {
    let e_count = spec.graph_arcs().len();
    if x.len() != e_count {
        return Err(Error::DimensionMismatch {
            expected: e_count,
            got: x.len(),
        });
    }
    let a = generate(spec);
    let mut flow = x.to_vec();
    for t in 0..a.rows() {
        flow.push((0..e_count).map(|e| a.get(t, e) as i64 * x[e]).sum());
    }
    Ok(flow)
}

/// Bipartite graph whose perfect matchings cover the flows of a unit-bound
/// network, each exactly `multiplicity` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitFlowGadget {
    /// First block: one vertex per non-loop arc; second block: `indeg(v)`
    /// slots per node.
    pub graph: UGraph,
    /// `prod_v indeg(v)!`.
    pub multiplicity: BigUint,
    /// Loop arcs with bounds `[0,1]`; each doubles the flow count.
    pub free_loops: usize,
}

/// Builds the matching gadget.
///
/// Arc `a = (p, q)` is matched either into a slot of `p` (then `f_a = 1`) or
/// into a slot of `q` (then `f_a = 0`). Node `v` has `indeg(v)` slots, filled
/// by its used out-arcs and unused in-arcs, which is exactly conservation.
/// Arcs with bounds `[1,1]` only see their tail's slots.
pub fn unit_flow_gadget(n: &FlowNetwork) -> Result<UnitFlowGadget> {
    if let Some(a) = n.arcs().iter().find(|a| !a.is_unit()) {
        return Err(Error::invalid(format!(
            "arc {}->{} has bounds [{}, {}]; only [0,1] and [1,1] are supported",
            a.tail,
            a.head,
            a.lower.map_or_else(|| "-inf".into(), |x| x.to_string()),
            a.upper
        )));
    }
    let proper: Vec<&FlowArc> = n.arcs().iter().filter(|a| a.tail != a.head).collect();
    let free_loops = n
        .arcs()
        .iter()
        .filter(|a| a.tail == a.head && a.lower == Some(0))
        .count();
    let mut indeg = vec![0usize; n.node_count()];
    for a in &proper {
        indeg[a.head] += 1;
    }
    let left = proper.len();
    let mut slot_start = vec![0usize; n.node_count()];
    let mut next = left;
    for v in 0..n.node_count() {
        slot_start[v] = next;
        next += indeg[v];
    }
    let mut edges = Vec::new();
    for (i, a) in proper.iter().enumerate() {
        let targets: &[usize] = if a.lower == Some(1) {
            &[a.tail]
        } else {
            &[a.tail, a.head]
        };
        for &v in targets {
            for s in 0..indeg[v] {
                edges.push((i, slot_start[v] + s));
            }
        }
    }
    let multiplicity = indeg.iter().fold(BigUint::one(), |acc, &d| {
        acc * (1..=d).fold(BigUint::one(), |f, k| f * BigUint::from(k))
    });
    Ok(UnitFlowGadget {
        graph: UGraph::bipartite(left, next, edges)?,
        multiplicity,
        free_loops,
    })
}

/// Counts integer flows of a unit-bound network through the perfect-matching
/// oracle applied to [`unit_flow_gadget`].
pub fn count_unit_flows_via_pm(n: &FlowNetwork, budget: &Budget) -> Result<BigUint> {
    let gadget = unit_flow_gadget(n)?;
    let matchings = if gadget.graph.vertex_count() == 0 {
        BigUint::one()
    } else {
        oracles::count_perfect_matchings(&gadget.graph, budget)?
    };
    let (q, r) = matchings.div_rem(&gadget.multiplicity);
    if !r.is_zero() {
        return Err(Error::Structural(format!(
            "{matchings} matchings is not a multiple of {}",
            gadget.multiplicity
        )));
    }
    Ok(q << gadget.free_loops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::matching_polytope_netspec;
    use crate::exactgeom::feasible_points_01;
    use crate::netmatrix::network_polytope;
    use crate::oracles::count_integer_flows;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn budget() -> Budget {
        Budget::default()
    }

    fn unit(tail: usize, head: usize) -> FlowArc {
        FlowArc::new(tail, head, Some(0), 1)
    }

    fn triangle() -> FlowNetwork {
        FlowNetwork::new(3, vec![unit(0, 1), unit(1, 2), unit(2, 0)]).unwrap()
    }

    /// Star spec whose rows are the vertex sums of a bipartite graph.
    fn degree_star(g: &UGraph) -> NetworkMatrixSpec {
        let side = g.sides().unwrap();
        let r = g.vertex_count();
        let tree = (0..r)
            .map(|v| if side[v] { (r, v) } else { (v, r) })
            .collect();
        let arcs = g
            .edges()
            .iter()
            .map(|&(u, v)| if side[u] { (v, u) } else { (u, v) })
            .collect();
        NetworkMatrixSpec::new(r + 1, tree, arcs).unwrap()
    }

    #[test]
    fn single_arc_in_a_tree() {
        let spec = NetworkMatrixSpec::new(2, vec![(0, 1)], vec![(0, 1)]).unwrap();
        let form = tree_inequality(&spec, &[1], 0).unwrap();
        assert_eq!(form.coefficients, vec![1]);
        assert_eq!(form.forward(), vec![0]);
        let n1 = netmatrix_to_flow(&spec, &[1], None).unwrap();
        assert_eq!(
            count_integer_flows(&n1, &budget()).unwrap(),
            BigUint::from(2u8)
        );
        let n0 = netmatrix_to_flow(&spec, &[0], None).unwrap();
        assert_eq!(
            count_integer_flows(&n0, &budget()).unwrap(),
            BigUint::from(1u8)
        );
        assert!(tree_inequality(&spec, &[1], 1).is_err());
        assert!(netmatrix_to_flow(&spec, &[1, 2], None).is_err());
    }

    #[test]
    fn star_rows_are_vertex_sums() {
        let g = UGraph::complete_bipartite(2, 2);
        let spec = degree_star(&g);
        let b = vec![1; 4];
        for (v, expected) in [
            (0, vec![1, 1, 0, 0]),
            (2, vec![1, 0, 1, 0]),
            (3, vec![0, 1, 0, 1]),
        ] {
            assert_eq!(
                tree_inequality(&spec, &b, v).unwrap().coefficients,
                expected
            );
        }
    }

    #[test]
    fn matching_netspec_flows_count_perfect_matchings() {
        let g = UGraph::complete_bipartite(2, 2);
        let (spec, rhs) = matching_polytope_netspec(&g, true).unwrap();
        let n = netmatrix_to_flow(&spec, &rhs, None).unwrap();
        assert_eq!(
            count_integer_flows(&n, &budget()).unwrap(),
            BigUint::from(2u8)
        );
    }

    #[test]
    fn unit_flows_via_pm_examples() {
        let empty = FlowNetwork::new(4, vec![]).unwrap();
        assert_eq!(
            count_unit_flows_via_pm(&empty, &budget()).unwrap(),
            BigUint::one()
        );
        assert_eq!(
            count_unit_flows_via_pm(&triangle(), &budget()).unwrap(),
            BigUint::from(2u8)
        );
        assert_eq!(
            count_integer_flows(&triangle(), &budget()).unwrap(),
            BigUint::from(2u8)
        );

        let g = UGraph::complete_bipartite(3, 3);
        let spec = degree_star(&g);
        let n = netmatrix_to_flow(&spec, &[1; 6], Some(&[1; 6])).unwrap();
        assert_eq!(
            count_unit_flows_via_pm(&n, &budget()).unwrap(),
            BigUint::from(6u8)
        );
        assert_eq!(
            count_integer_flows(&n, &budget()).unwrap(),
            BigUint::from(6u8)
        );

        let wide = FlowNetwork::new(2, vec![FlowArc::new(0, 1, Some(0), 2)]).unwrap();
        assert!(count_unit_flows_via_pm(&wide, &budget()).is_err());
        let open = FlowNetwork::new(2, vec![FlowArc::new(0, 1, None, 1)]).unwrap();
        assert!(count_unit_flows_via_pm(&open, &budget()).is_err());
    }

    #[test]
    fn loops_and_forced_arcs() {
        let n = FlowNetwork::new(
            2,
            vec![
                unit(0, 0),
                FlowArc::new(1, 1, Some(1), 1),
                FlowArc::new(0, 1, Some(1), 1),
                unit(1, 0),
            ],
        )
        .unwrap();
        assert_eq!(
            count_integer_flows(&n, &budget()).unwrap(),
            BigUint::from(2u8)
        );
        assert_eq!(
            count_unit_flows_via_pm(&n, &budget()).unwrap(),
            BigUint::from(2u8)
        );
    }

    #[test]
    fn flow_from_point_is_a_flow() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let nv = rng.gen_range(2..6);
            let ne = rng.gen_range(1..6);
            let spec = NetworkMatrixSpec::random(&mut rng, nv, ne);
            let b: Vec<i64> = (0..spec.tree_arcs().len())
                .map(|_| rng.gen_range(0..3))
                .collect();
            let net = netmatrix_to_flow(&spec, &b, None).unwrap();
            let p = network_polytope(&spec, &b).unwrap();
            for x in feasible_points_01(&p, &budget()).unwrap() {
                assert!(net.is_flow(&flow_from_point(&spec, &x).unwrap()));
            }
        }
    }

    #[test]
    fn text_format() {
        let n = FlowNetwork::new(
            3,
            vec![
                unit(0, 1),
                FlowArc::new(1, 2, None, 4),
                FlowArc::new(2, 0, Some(-1), 0),
            ],
        )
        .unwrap();
        let text = n.to_text();
        assert_eq!(text, "3 3\n0 1 0 1\n1 2 -inf 4\n2 0 -1 0\n");
        assert_eq!(FlowNetwork::parse(&text).unwrap(), n);
        assert!(matches!(
            FlowNetwork::parse("2 1\n0 1 3 1\n"),
            Err(Error::Parse {
                line: 2,
                column: 5,
                ..
            })
        ));
        assert!(matches!(
            FlowNetwork::parse("2 1\n0 2 0 1\n"),
            Err(Error::Parse {
                line: 2,
                column: 3,
                ..
            })
        ));
        assert!(matches!(
            FlowNetwork::parse("2 2\n0 1 0 1\n"),
            Err(Error::Parse { .. })
        ));
    }

    fn unit_network() -> impl Strategy<Value = FlowNetwork> {
        (1usize..6).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n, any::<bool>()), 0..10).prop_map(move |arcs| {
                let arcs = arcs
                    .into_iter()
                    .map(|(t, h, forced)| FlowArc::new(t, h, Some(forced as i64), 1))
                    .collect();
                FlowNetwork::new(n, arcs).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn matching_gadget_agrees_with_enumeration(n in unit_network()) {
            prop_assert_eq!(
                count_unit_flows_via_pm(&n, &budget()).unwrap(),
                count_integer_flows(&n, &budget()).unwrap()
            );
        }

        #[test]
        fn tree_inequalities_rebuild_the_matrix(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let nv = rng.gen_range(2..7);
            let ne = rng.gen_range(0..7);
            let spec = NetworkMatrixSpec::random(&mut rng, nv, ne);
            let a = generate(&spec);
            let b = vec![0; spec.tree_arcs().len()];
            for t in 0..a.rows() {
                let form = tree_inequality(&spec, &b, t).unwrap();
                let row: Vec<i64> = a.row(t).iter().map(|&x| x as i64).collect();
                prop_assert_eq!(form.coefficients, row);
            }
        }

        #[test]
        fn flows_biject_with_points(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let nv = rng.gen_range(2..6);
            let ne = rng.gen_range(1..7);
            let spec = NetworkMatrixSpec::random(&mut rng, nv, ne);
            let b: Vec<i64> = (0..spec.tree_arcs().len()).map(|_| rng.gen_range(0..2)).collect();
            let points = feasible_points_01(&network_polytope(&spec, &b).unwrap(), &budget()).unwrap();
            let net = netmatrix_to_flow(&spec, &b, None).unwrap();
            prop_assert_eq!(count_integer_flows(&net, &budget()).unwrap(), BigUint::from(points.len()));
        }
    }
}
