//! The hardness reductions: Hamiltonian path to odd cycle covers, odd cycle
//! covers to counting P2M covers through the hexagon gadget, and
//! transposed-network polytopes to 1p1n formulas.

pub mod cnf;

use crate::budget::{Budget, Meter};
use crate::encodings::UGraph;
use crate::error::{Error, Result};
use crate::netmatrix::NetworkMatrixSpec;
use crate::oracles;
use cnf::{CnfFormula, Literal};
use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use std::ops::Range;

/// `G` plus a fresh detour from `s` to `t` closing every `s`–`t` path into a
/// cycle of odd length: a single vertex `w = n` (edges `s w`, `w t`) when `s`
/// and `t` lie in different blocks, and two vertices `n, n+1` (edges
/// `s n`, `n n+1`, `n+1 t`) when they share a block. Either way the odd cycle
/// covers of the result are the Hamiltonian `s`–`t` paths of `G`.
pub fn hampath_to_occ(g: &UGraph, s: usize, t: usize) -> Result<UGraph> {
    let n = g.vertex_count();
    for x in [s, t] {
        if x >= n {
            return Err(Error::IndexOutOfRange { index: x, limit: n });
        }
    }
    if s == t {
        return Err(Error::invalid("s and t must differ"));
    }
    let colour = two_colouring(g)?;
    let mut edges = g.edges().to_vec();
    if colour[s] != colour[t] {
        edges.extend([(s, n), (n, t)]);
        UGraph::new(n + 1, edges)
    } else {
        edges.extend([(s, n), (n, n + 1), (n + 1, t)]);
        UGraph::new(n + 2, edges)
    }
}

/// The stored bipartition, or one found by breadth-first search.
fn two_colouring(g: &UGraph) -> Result<Vec<bool>> {
    if let Some(side) = g.sides() {
        return Ok(side.to_vec());
    }
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut colour: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let cx = colour[x].expect("queued vertices are coloured");
            for &y in &adj[x] {
                match colour[y] {
                    None => {
                        colour[y] = Some(!cx);
                        queue.push_back(y);
                    }
                    Some(cy) if cy == cx => {
                        return Err(Error::NotBipartite(format!(
                            "odd cycle through edge {x}-{y}"
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(colour
        .into_iter()
        .map(|c| c.expect("all coloured"))
        .collect())
}

/// Hexagon chain with endpoints `u` and `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub graph: UGraph,
    pub u: usize,
    pub v: usize,
    pub ell: usize,
}

/// Vertices of one gadget copy that are not endpoints.
pub fn gadget_internal_count(ell: usize) -> usize {
    10 * ell
}

pub fn gadget_edge_count(ell: usize) -> usize {
    12 * ell + 1
}

/// Gadget edges over abstract ids: `0 = u`, `1 = v`, internal vertices from 2.
///
/// Hexagon `h` with left corner `c` adds upper vertices `a, b`, lower
/// vertices `a', b'` and right corner `c'`, numbered in that order, with
/// edges `c-a, a-b, b-c', c-a', a'-b', b'-c'`. The last corner is joined to
/// `v`.
fn gadget_edges(ell: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(gadget_edge_count(ell));
    let mut corner = 0;
    let mut next = 2;
    for _ in 0..2 * ell {
        let (a, b, a2, b2, c2) = (next, next + 1, next + 2, next + 3, next + 4);
        next += 5;
        edges.extend([
            (corner, a),
            (a, b),
            (b, c2),
            (corner, a2),
            (a2, b2),
            (b2, c2),
        ]);
        corner = c2;
    }
    edges.push((corner, 1));
    edges
}

pub fn hexagon_gadget(ell: usize) -> Result<Gadget> {
    if ell < 1 {
        return Err(Error::invalid("the gadget needs ell >= 1"));
    }
    Ok(Gadget {
        graph: UGraph::new(gadget_internal_count(ell) + 2, gadget_edges(ell))?,
        u: 0,
        v: 1,
        ell,
    })
}

/// Local cover configurations of one gadget, by type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetCensus {
    /// A path from `u` to `v`.
    pub type_p: BigUint,
    /// `u` and `v` both covered by isolated edges.
    pub type_m: BigUint,
    /// `u` and `v` both uncovered.
    pub type_u: BigUint,
}

impl GadgetCensus {
    /// `(4^ell, 2^ell, 2^ell)`.
    pub fn closed_form(ell: usize) -> Self {
        GadgetCensus {
            type_p: BigUint::one() << (2 * ell),
            type_m: BigUint::one() << ell,
            type_u: BigUint::one() << ell,
        }
    }
}

/// Classifies every assignment of `{0,1,2}` to the gadget edges with internal
/// vertex sums exactly 2, endpoint sums at most 2, and no cycle among the
/// value-1 edges (the only cycles are hexagons, which are even).
pub fn gadget_census(gadget: &Gadget, budget: &Budget) -> Result<GadgetCensus> {
    let g = &gadget.graph;
    let mut search = CensusSearch {
        g,
        ends: [gadget.u, gadget.v],
        sum: vec![0; g.vertex_count()],
        remaining: vec![0; g.vertex_count()],
        x: Vec::with_capacity(g.edge_count()),
        census: GadgetCensus {
            type_p: BigUint::zero(),
            type_m: BigUint::zero(),
            type_u: BigUint::zero(),
        },
        meter: budget.meter("gadget census nodes"),
    };
    for &(a, b) in g.edges() {
        search.remaining[a] += 1;
        search.remaining[b] += 1;
    }
    search.descend()?;
    Ok(search.census)
}

struct CensusSearch<'a> {
    g: &'a UGraph,
    ends: [usize; 2],
    sum: Vec<u8>,
    remaining: Vec<usize>,
    x: Vec<u8>,
    census: GadgetCensus,
    meter: Meter,
}

impl CensusSearch<'_> {
    fn ok_at(&self, w: usize) -> bool {
        let s = self.sum[w] as usize;
        s <= 2 && (self.ends.contains(&w) || s + 2 * self.remaining[w] >= 2)
    }

    fn descend(&mut self) -> Result<()> {
        self.meter.tick()?;
        if self.x.len() == self.g.edge_count() {
            return self.classify();
        }
        let (a, b) = self.g.edges()[self.x.len()];
        self.remaining[a] -= 1;
        self.remaining[b] -= 1;
        for val in 0..=2u8 {
            self.sum[a] += val;
            self.sum[b] += val;
            if self.ok_at(a) && self.ok_at(b) {
                self.x.push(val);
                self.descend()?;
                self.x.pop();
            }
            self.sum[a] -= val;
            self.sum[b] -= val;
        }
        self.remaining[a] += 1;
        self.remaining[b] += 1;
        Ok(())
    }

    fn classify(&mut self) -> Result<()> {
        let n = self.g.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        for (e, &(a, b)) in self.g.edges().iter().enumerate() {
            if self.x[e] == 1 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    // A value-1 cycle inside the gadget is an even hexagon.
                    return Ok(());
                }
                parent[ra] = rb;
            }
        }
        let [u, v] = self.ends;
        let joined = find(&mut parent, u) == find(&mut parent, v);
        let describe = || {
            format!(
                "endpoint sums ({}, {}) in configuration {:?}",
                self.sum[u], self.sum[v], self.x
            )
        };
        match (self.sum[u], self.sum[v]) {
            (1, 1) if joined => self.census.type_p += 1u32,
            (2, 2) if !joined => self.census.type_m += 1u32,
            (0, 0) => self.census.type_u += 1u32,
            _ => return Err(Error::Structural(describe())),
        }
        Ok(())
    }
}

/// Where one gadget copy sits in the power graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetCopy {
    /// The replaced edge of the original graph.
    pub edge: usize,
    pub u: usize,
    pub v: usize,
    /// Internal vertices, numbered in construction order.
    pub vertices: Range<usize>,
    /// Edges of the copy in the power graph.
    pub edges: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerGraph {
    pub graph: UGraph,
    pub ell: usize,
    pub copies: Vec<GadgetCopy>,
}

/// Replaces every edge `(a, b)` by a gadget with `u = a` and `v = b`.
/// Original vertices keep their ids; copy `k` owns vertices
/// `n + 10 ell k .. n + 10 ell (k+1)` and edges
/// `(12 ell + 1) k .. (12 ell + 1)(k+1)`.
pub fn power_graph(g: &UGraph, ell: usize, budget: &Budget) -> Result<PowerGraph> {
    if ell < 1 {
        return Err(Error::invalid("the gadget needs ell >= 1"));
    }
    let n = g.vertex_count();
    let m = g.edge_count();
    let per_vertices = gadget_internal_count(ell);
    let per_edges = gadget_edge_count(ell);
    let total_edges = (m as u128) * per_edges as u128;
    budget.check("power-graph edges", &BigUint::from(total_edges))?;
    let local = gadget_edges(ell);
    let mut edges = Vec::with_capacity(total_edges as usize);
    let mut copies = Vec::with_capacity(m);
    for (k, &(a, b)) in g.edges().iter().enumerate() {
        let base = n + per_vertices * k;
        let map = |x: usize| match x {
            0 => a,
            1 => b,
            _ => base + x - 2,
        };
        let first = edges.len();
        edges.extend(local.iter().map(|&(p, q)| (map(p), map(q))));
        copies.push(GadgetCopy {
            edge: k,
            u: a,
            v: b,
            vertices: base..base + per_vertices,
            edges: first..edges.len(),
        });
    }
    Ok(PowerGraph {
        graph: UGraph::new(n + per_vertices * m, edges)?,
        ell,
        copies,
    })
}

/// `sum over covers of prod (type count of each edge)`: cycle edges contribute
/// Type P, matching edges Type M, unused edges Type U. With the closed-form
/// census this is `sum 4^(ell k) 2^(ell (m-k))`, `k` the number of cycle edges.
pub fn zptm_by_census(g: &UGraph, ell: usize, budget: &Budget) -> Result<BigUint> {
    if ell < 1 {
        return Err(Error::invalid("the gadget needs ell >= 1"));
    }
    let census = GadgetCensus::closed_form(ell);
    let m = g.edge_count();
    let mut total = BigUint::zero();
    for cover in oracles::enumerate_p2m_covers(g, budget)? {
        let k = cover.cycle_edges.len();
        let j = cover.matching_edges.len();
        total += Pow::pow(&census.type_p, k)
            * Pow::pow(&census.type_m, j)
            * Pow::pow(&census.type_u, m - k - j);
    }
    Ok(total)
}

/// The occ threshold `2^(ell (m+n) - 1)`.
pub fn occ_threshold(g: &UGraph, ell: usize) -> BigUint {
    BigUint::one() << (ell * (g.edge_count() + g.vertex_count())).saturating_sub(1)
}

/// Decides whether `G` has an odd cycle cover from an estimate of
/// `Z_P2M(power_graph(G, ell))` that is within a factor 3/2.
pub fn occ_decision(g: &UGraph, approx_count: &BigUint, ell: usize) -> Result<bool> {
    let m = g.edge_count();
    if ell < m + 2 {
        return Err(Error::invalid(format!(
            "ell = {ell} is below the threshold m + 2 = {}",
            m + 2
        )));
    }
    Ok(*approx_count >= occ_threshold(g, ell))
}

/// Variable of the ladder literal `zeta_v^i` (true iff `i <= z_v`) for
/// `-n < i <= n`.
pub fn ladder_var(n: usize, v: usize, i: i64) -> u32 {
    (v as i64 * 2 * n as i64 + (i + n as i64 - 1) + 1) as u32
}

/// 1p1n formula whose models are the 0/1 points of
/// `{x : transpose(generate(spec)) x <= b, 0 <= x <= 1}`.
///
/// `z_v` is the potential of `v` with `z_root = 0` and `x_t = z_v - z_u` for
/// tree arc `t = (u, v)`; graph arc `e = (u, v)` reads `z_v - z_u <= b_e`.
pub fn tnet_to_1p1nsat(spec: &NetworkMatrixSpec, b: &[i64], root: usize) -> Result<CnfFormula> {
    let nv = spec.vertex_count();
    if root >= nv {
        return Err(Error::IndexOutOfRange {
            index: root,
            limit: nv,
        });
    }
    if b.len() != spec.graph_arcs().len() {
        return Err(Error::DimensionMismatch {
            expected: spec.graph_arcs().len(),
            got: b.len(),
        });
    }
    let n = spec.tree_arcs().len();
    let ni = n as i64;
    let mut enc = LadderEncoder {
        n: ni,
        root,
        phi: CnfFormula::new((nv * 2 * n) as u32),
    };
    for v in 0..nv {
        for i in (1 - ni)..=ni {
            enc.phi.name(ladder_var(n, v, i), (v, i));
        }
    }
    for v in 0..nv {
        for i in (1 - ni)..ni {
            enc.phi
                .implies(ladder_var(n, v, i + 1), ladder_var(n, v, i))?;
        }
    }
    for &(u, v) in spec.tree_arcs() {
        enc.difference_at_most(v, u, 1)?;
        enc.difference_at_most(u, v, 0)?;
    }
    for (&(u, v), &c) in spec.graph_arcs().iter().zip(b) {
        enc.difference_at_most(v, u, c)?;
    }
    for i in (1 - ni)..=ni {
        let var = ladder_var(n, root, i);
        enc.phi.add_clause(vec![if i <= 0 {
            Literal::pos(var)
        } else {
            Literal::neg(var)
        }])?;
    }
    Ok(enc.phi)
}

struct LadderEncoder {
    n: i64,
    root: usize,
    phi: CnfFormula,
}

impl LadderEncoder {
    fn var(&self, v: usize, i: i64) -> u32 {
        ladder_var(self.n as usize, v, i)
    }

    /// Clauses for `z_v - z_u <= c`, i.e. `z_v >= i + c  =>  z_u >= i`, over
    /// `-n < i` and `i + c <= n`. Levels at or below `-n` are constant true
    /// and levels above `n` constant false, which turns boundary clauses into
    /// units.
    fn difference_at_most(&mut self, v: usize, u: usize, c: i64) -> Result<()> {
        let n = self.n;
        if c >= 2 * n {
            return Ok(());
        }
        if c <= -(2 * n + 1) {
            let r = self.var(self.root, n);
            self.phi.add_clause(vec![Literal::pos(r)])?;
            return self.phi.add_clause(vec![Literal::neg(r)]);
        }
        for i in (1 - n)..=(n - c) {
            let j = i + c;
            let clause = match (j > -n, i <= n) {
                (true, true) => vec![Literal::neg(self.var(v, j)), Literal::pos(self.var(u, i))],
                (false, true) => vec![Literal::pos(self.var(u, i))],
                (true, false) => vec![Literal::neg(self.var(v, j))],
                (false, false) => unreachable!("c > -(2n+1)"),
            };
            self.phi.add_clause(clause)?;
        }
        Ok(())
    }
}

/// The satisfying assignment that encodes the potentials of `x` (tree-arc
/// values), as a DIMACS-style truth vector indexed by variable.
pub fn ladder_assignment(spec: &NetworkMatrixSpec, x: &[i64], root: usize) -> Result<Vec<bool>> {
    let n = spec.tree_arcs().len();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let nv = spec.vertex_count();
    let mut z: Vec<Option<i64>> = vec![None; nv];
    z[root] = Some(0);
    let mut changed = true;
    while changed {
        changed = false;
        for (t, &(a, b)) in spec.tree_arcs().iter().enumerate() {
            match (z[a], z[b]) {
                (Some(za), None) => z[b] = Some(za + x[t]),
                (None, Some(zb)) => z[a] = Some(zb - x[t]),
                _ => continue,
            }
            changed = true;
        }
    }
    let mut truth = vec![false; nv * 2 * n + 1];
    for v in 0..nv {
        let zv = z[v].expect("tree spans every vertex");
        for i in (1 - n as i64)..=n as i64 {
            truth[ladder_var(n, v, i) as usize] = i <= zv;
        }
    }
    Ok(truth)
}

#[cfg(test)]
mod tests;
