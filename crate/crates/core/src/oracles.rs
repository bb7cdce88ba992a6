//! Brute-force counters used as ground truth.
//!
//! Nothing in here touches the polytope machinery: every count is computed
//! straight from the combinatorial definition.

use crate::budget::{Budget, Meter};
use crate::encodings::UGraph;
use crate::error::{Error, Result};
use crate::flows::FlowNetwork;
use crate::reductions::cnf::{CnfFormula, Literal};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::{BTreeSet, HashMap};

fn blocks(g: &UGraph) -> Result<(Vec<usize>, Vec<usize>)> {
    match (g.first_block(), g.second_block()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::NotBipartite("graph has no bipartition".into())),
    }
}

/// Position of each vertex inside its own block.
fn block_positions(g: &UGraph, a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; g.vertex_count()];
    for (i, &v) in a.iter().enumerate() {
        pos[v] = i;
    }
    for (i, &v) in b.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

/// Number of independent sets of a bipartite graph: for every subset `S` of
/// the smaller block, `2^(vertices of the other block outside N(S))`.
pub fn count_bis(g: &UGraph, budget: &Budget) -> Result<BigUint> {
    let (mut a, mut b) = blocks(g)?;
    if a.len() > b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    if b.len() > 127 {
        return Err(Error::invalid("block too large for subset enumeration"));
    }
    budget.check_pow2("independent-set subsets", a.len())?;
    let pos = block_positions(g, &a, &b);
    let side = g.sides().expect("bipartition checked");
    let small_side = a.first().map(|&v| side[v]);
    let mut nbr = vec![0u128; a.len()];
    for &(u, v) in g.edges() {
        let (x, y) = if Some(side[u]) == small_side {
            (u, v)
        } else {
            (v, u)
        };
        nbr[pos[x]] |= 1u128 << pos[y];
    }
    let mut total = BigUint::zero();
    for mask in 0u64..(1u64 << a.len()) {
        let blocked = (0..a.len())
            .filter(|&i| mask >> i & 1 == 1)
            .fold(0u128, |acc, i| acc | nbr[i]);
        total += BigUint::one() << (b.len() - blocked.count_ones() as usize);
    }
    Ok(total)
}

/// Permanent of the biadjacency matrix (edge multiplicities included), by a
/// sparse dynamic program over the set of used second-block vertices.
pub fn count_perfect_matchings(g: &UGraph, budget: &Budget) -> Result<BigUint> {
    let (a, b) = blocks(g)?;
    if a.len() != b.len() {
        return Ok(BigUint::zero());
    }
    if b.len() > 128 {
        return Err(Error::invalid("block too large for the matching oracle"));
    }
    let pos = block_positions(g, &a, &b);
    let side = g.sides().expect("bipartition checked");
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); a.len()];
    for &(u, v) in g.edges() {
        let (x, y) = if side[u] { (v, u) } else { (u, v) };
        nbrs[pos[x]].push(pos[y]);
    }
    let mut meter = budget.meter("matching states");
    let mut states: HashMap<u128, BigUint> = HashMap::from([(0u128, BigUint::one())]);
    for list in &nbrs {
        let mut next: HashMap<u128, BigUint> = HashMap::new();
        for (mask, ways) in &states {
            for &j in list {
                meter.tick()?;
                let bit = 1u128 << j;
                if mask & bit == 0 {
                    *next.entry(mask | bit).or_default() += ways;
                }
            }
        }
        if next.is_empty() {
            return Ok(BigUint::zero());
        }
        states = next;
    }
    Ok(states.into_values().sum())
}

/// `#SAT` by trying all `2^n` assignments.
pub fn count_sat_by_enumeration(phi: &CnfFormula, budget: &Budget) -> Result<BigUint> {
    let n = phi.variable_count() as usize;
    if n > 63 {
        return Err(Error::invalid("too many variables to enumerate"));
    }
    budget.check_pow2("assignments", n)?;
    let holds = |assign: u64, l: &Literal| (assign >> (l.var - 1) & 1 == 1) == l.positive;
    let count = (0u64..(1u64 << n))
        .filter(|&x| phi.clauses().iter().all(|c| c.iter().any(|l| holds(x, l))))
        .count();
    Ok(BigUint::from(count))
}

/// `#SAT` of a 1p1n formula. Small formulas are enumerated; larger ones go
/// through [`count_models`].
pub fn count_1p1nsat(phi: &CnfFormula, budget: &Budget) -> Result<BigUint> {
    if !phi.is_1p1n() {
        return Err(Error::invalid("formula is not in 1p1n form"));
    }
    if phi.variable_count() <= 16 {
        count_sat_by_enumeration(phi, budget)
    } else {
        count_models(phi.variable_count(), phi.clauses(), budget)
    }
}

/// Exact model counting for any CNF: unit propagation, splitting into
/// variable-disjoint components, and a component cache.
pub fn count_models(
    variable_count: u32,
    clauses: &[Vec<Literal>],
    budget: &Budget,
) -> Result<BigUint> {
    let mut counter =
        ModelCounter::new(variable_count, clauses, budget.meter("model-counter nodes"))?;
    let units: Vec<Literal> = clauses
        .iter()
        .filter(|c| c.len() == 1)
        .map(|c| c[0])
        .collect();
    if clauses.iter().any(|c| c.is_empty()) {
        return Ok(BigUint::zero());
    }
    for l in units {
        if !counter.assume(l) {
            return Ok(BigUint::zero());
        }
    }
    let all: Vec<usize> = (0..clauses.len()).collect();
    counter.count_residual(&all, variable_count as usize - counter.trail.len())
}

struct ModelCounter {
    clauses: Vec<Vec<Literal>>,
    /// Clauses containing each literal, indexed by `2*var + positive`.
    occurs: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
    trail: Vec<u32>,
    cache: HashMap<Vec<Vec<Literal>>, BigUint>,
    meter: Meter,
}

fn slot(l: Literal) -> usize {
    2 * l.var as usize + l.positive as usize
}

impl ModelCounter {
    fn new(variable_count: u32, clauses: &[Vec<Literal>], meter: Meter) -> Result<Self> {
        let n = variable_count as usize;
        let mut occurs = vec![Vec::new(); 2 * n + 2];
        for (i, c) in clauses.iter().enumerate() {
            for &l in c {
                if l.var == 0 || l.var > variable_count {
                    return Err(Error::IndexOutOfRange {
                        index: l.var as usize,
                        limit: n,
                    });
                }
                occurs[slot(l)].push(i);
            }
        }
        Ok(ModelCounter {
            clauses: clauses.to_vec(),
            occurs,
            value: vec![None; n + 1],
            trail: Vec::new(),
            cache: HashMap::new(),
            meter,
        })
    }

    fn lit_value(&self, l: Literal) -> Option<bool> {
        self.value[l.var as usize].map(|v| v == l.positive)
    }

    /// Sets `l` and propagates; false on conflict. Assignments stay on the
    /// trail either way.
    fn assume(&mut self, l: Literal) -> bool {
        match self.lit_value(l) {
            Some(v) => return v,
            None => {
                self.value[l.var as usize] = Some(l.positive);
                self.trail.push(l.var);
            }
        }
        let mut queue = vec![l];
        while let Some(l) = queue.pop() {
            for &ci in &self.occurs[slot(l.negated())] {
                let mut open = None;
                let mut open_count = 0;
                let mut satisfied = false;
                for &m in &self.clauses[ci] {
                    match self.lit_value(m) {
                        Some(true) => {
                            satisfied = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            open_count += 1;
                            open = Some(m);
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match (open_count, open) {
                    (0, _) => return false,
                    (1, Some(m)) => {
                        self.value[m.var as usize] = Some(m.positive);
                        self.trail.push(m.var);
                        queue.push(m);
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.value[v as usize] = None;
        }
    }

    /// Open clauses among `ids`, reduced to their unassigned literals.
    fn residual(&self, ids: &[usize]) -> Vec<(usize, Vec<Literal>)> {
        ids.iter()
            .filter_map(|&ci| {
                let c = &self.clauses[ci];
                if c.iter().any(|&l| self.lit_value(l) == Some(true)) {
                    return None;
                }
                Some((
                    ci,
                    c.iter()
                        .copied()
                        .filter(|&l| self.lit_value(l).is_none())
                        .collect(),
                ))
            })
            .collect()
    }

    /// Models over `free_vars` unassigned variables given the clauses `ids`
    /// (the variables of the open clauses among them are included).
    fn count_residual(&mut self, ids: &[usize], free_vars: usize) -> Result<BigUint> {
        let open = self.residual(ids);
        let mut var_ids: HashMap<u32, usize> = HashMap::new();
        for (_, c) in &open {
            for l in c {
                let next = var_ids.len();
                var_ids.entry(l.var).or_insert(next);
            }
        }
        let mut parent: Vec<usize> = (0..var_ids.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (_, c) in &open {
            let first = find(&mut parent, var_ids[&c[0].var]);
            for l in &c[1..] {
                let r = find(&mut parent, var_ids[&l.var]);
                parent[r] = first;
            }
        }
        let mut groups: HashMap<usize, (Vec<usize>, Vec<Vec<Literal>>)> = HashMap::new();
        for (ci, c) in open {
            let r = find(&mut parent, var_ids[&c[0].var]);
            let g = groups.entry(r).or_default();
            g.0.push(ci);
            g.1.push(c);
        }
        let mut total = BigUint::one() << (free_vars - var_ids.len());
        let mut groups: Vec<_> = groups.into_values().collect();
        groups.sort();
        for (ids, reduced) in groups {
            let c = self.count_component(&ids, reduced)?;
            if c.is_zero() {
                return Ok(c);
            }
            total *= c;
        }
        Ok(total)
    }

    fn count_component(
        &mut self,
        ids: &[usize],
        mut reduced: Vec<Vec<Literal>>,
    ) -> Result<BigUint> {
        self.meter.tick()?;
        for c in &mut reduced {
            c.sort();
        }
        reduced.sort();
        if let Some(hit) = self.cache.get(&reduced) {
            return Ok(hit.clone());
        }
        let mut freq: HashMap<u32, usize> = HashMap::new();
        for c in &reduced {
            for l in c {
                *freq.entry(l.var).or_default() += 1;
            }
        }
        let vars = freq.len();
        let pick = freq
            .iter()
            .max_by_key(|&(&v, &k)| (k, std::cmp::Reverse(v)))
            .map(|(&v, _)| v)
            .expect("component has a variable");
        let mut total = BigUint::zero();
        for positive in [true, false] {
            let mark = self.trail.len();
            if self.assume(Literal {
                var: pick,
                positive,
            }) {
                let assigned = self.trail.len() - mark;
                total += self.count_residual(ids, vars - assigned)?;
            }
            self.undo_to(mark);
        }
        self.cache.insert(reduced, total.clone());
        Ok(total)
    }
}

/// A vertex of the perfect 2-matching polytope in combinatorial form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct P2MCover {
    /// Edge values in `{0, 1, 2}`; the sort key.
    pub coords: Vec<u8>,
    /// Edges with value 2.
    pub matching_edges: Vec<usize>,
    /// Edges with value 1.
    pub cycle_edges: Vec<usize>,
}

impl P2MCover {
    pub fn from_coords(coords: Vec<u8>) -> Self {
        let pick = |v: u8| (0..coords.len()).filter(|&e| coords[e] == v).collect();
        P2MCover {
            matching_edges: pick(2),
            cycle_edges: pick(1),
            coords,
        }
    }

    pub fn coords_i64(&self) -> Vec<i64> {
        self.coords.iter().map(|&x| x as i64).collect()
    }
}

/// Covers by enumerating `x in {0,..,max}^m` edge by edge with vertex sums
/// forced to 2, then keeping those whose value-1 edges form odd cycles.
fn coordinate_covers(g: &UGraph, max: u8, budget: &Budget) -> Result<Vec<Vec<u8>>> {
    let n = g.vertex_count();
    let mut remaining = vec![0usize; n];
    for &(u, v) in g.edges() {
        remaining[u] += 1;
        remaining[v] += 1;
    }
    if remaining.contains(&0) {
        return Ok(Vec::new());
    }
    let mut search = CoverSearch {
        g,
        max,
        sum: vec![0; n],
        remaining,
        x: Vec::with_capacity(g.edge_count()),
        out: Vec::new(),
        meter: budget.meter("cover search nodes"),
    };
    search.descend()?;
    Ok(search.out)
}

struct CoverSearch<'a> {
    g: &'a UGraph,
    max: u8,
    sum: Vec<u8>,
    remaining: Vec<usize>,
    x: Vec<u8>,
    out: Vec<Vec<u8>>,
    meter: Meter,
}

impl CoverSearch<'_> {
    fn feasible_at(&self, v: usize) -> bool {
        let s = self.sum[v] as usize;
        s <= 2 && s + self.max as usize * self.remaining[v] >= 2
    }

    fn descend(&mut self) -> Result<()> {
        self.meter.tick()?;
        let e = self.x.len();
        if e == self.g.edge_count() {
            if odd_cycle_support(self.g, &self.x) {
                self.out.push(self.x.clone());
            }
            return Ok(());
        }
        let (u, v) = self.g.edges()[e];
        self.remaining[u] -= 1;
        self.remaining[v] -= 1;
        for val in 0..=self.max {
            self.sum[u] += val;
            self.sum[v] += val;
            if self.feasible_at(u) && self.feasible_at(v) {
                self.x.push(val);
                self.descend()?;
                self.x.pop();
            }
            self.sum[u] -= val;
            self.sum[v] -= val;
        }
        self.remaining[u] += 1;
        self.remaining[v] += 1;
        Ok(())
    }
}

/// Every component of the value-1 edges is a cycle of odd length. Vertex sums
/// of 2 already force degree 2 inside the support.
fn odd_cycle_support(g: &UGraph, x: &[u8]) -> bool {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if x[e] == 1 {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
    }
    let mut edges_in = vec![0usize; n];
    for (e, &(u, _)) in g.edges().iter().enumerate() {
        if x[e] == 1 {
            let r = find(&mut parent, u);
            edges_in[r] += 1;
        }
    }
    edges_in.iter().all(|&k| k == 0 || k % 2 == 1)
}

/// All P2M covers, sorted by coordinate vector.
pub fn enumerate_p2m_covers(g: &UGraph, budget: &Budget) -> Result<Vec<P2MCover>> {
    Ok(coordinate_covers(g, 2, budget)?
        .into_iter()
        .map(P2MCover::from_coords)
        .collect())
}

/// The same set built combinatorially: the lowest uncovered vertex is either
/// matched along an edge or put on an odd cycle through higher vertices.
pub fn enumerate_p2m_covers_by_assembly(g: &UGraph, budget: &Budget) -> Result<Vec<P2MCover>> {
    let n = g.vertex_count();
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push((e, v));
        incident[v].push((e, u));
    }
    let mut asm = Assembly {
        incident,
        covered: vec![false; n],
        x: vec![0; g.edge_count()],
        out: BTreeSet::new(),
        meter: budget.meter("cover assembly nodes"),
    };
    asm.cover_next()?;
    Ok(asm.out.into_iter().map(P2MCover::from_coords).collect())
}

struct Assembly {
    incident: Vec<Vec<(usize, usize)>>,
    covered: Vec<bool>,
    x: Vec<u8>,
    out: BTreeSet<Vec<u8>>,
    meter: Meter,
}

impl Assembly {
    fn cover_next(&mut self) -> Result<()> {
        self.meter.tick()?;
        let Some(v) = self.covered.iter().position(|&c| !c) else {
            self.out.insert(self.x.clone());
            return Ok(());
        };
        self.covered[v] = true;
        for (e, w) in self.incident[v].clone() {
            if !self.covered[w] {
                self.covered[w] = true;
                self.x[e] = 2;
                self.cover_next()?;
                self.x[e] = 0;
                self.covered[w] = false;
            }
        }
        let mut path = Vec::new();
        self.extend_cycle(v, v, &mut path)?;
        self.covered[v] = false;
        Ok(())
    }

    /// Grows a simple path from `start` (already covered) ending at `at`.
    /// `path` holds the edges used so far.
    fn extend_cycle(&mut self, start: usize, at: usize, path: &mut Vec<usize>) -> Result<()> {
        self.meter.tick()?;
        for (e, w) in self.incident[at].clone() {
            if w == start && path.len() >= 2 && path.len().is_multiple_of(2) && path[0] < e {
                for &p in path.iter() {
                    self.x[p] = 1;
                }
                self.x[e] = 1;
                self.cover_next()?;
                for &p in path.iter() {
                    self.x[p] = 0;
                }
                self.x[e] = 0;
            } else if !self.covered[w] {
                self.covered[w] = true;
                path.push(e);
                self.extend_cycle(start, w, path)?;
                path.pop();
                self.covered[w] = false;
            }
        }
        Ok(())
    }
}

/// Covers by vertex-disjoint odd cycles only.
pub fn count_odd_cycle_covers(g: &UGraph, budget: &Budget) -> Result<BigUint> {
    Ok(BigUint::from(coordinate_covers(g, 1, budget)?.len()))
}

/// Hamiltonian `s`–`t` path by dynamic programming over vertex subsets.
pub fn exists_hamiltonian_path(g: &UGraph, s: usize, t: usize, budget: &Budget) -> Result<bool> {
    let n = g.vertex_count();
    for x in [s, t] {
        if x >= n {
            return Err(Error::IndexOutOfRange { index: x, limit: n });
        }
    }
    if n > 32 {
        return Err(Error::invalid(
            "too many vertices for the subset dynamic program",
        ));
    }
    budget.check("Hamiltonian path states", &(BigUint::from(n) << n))?;
    if s == t {
        return Ok(n == 1);
    }
    let mut adj = vec![0u64; n];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    // ends[mask]: vertices where a path from s covering exactly mask can end.
    let full = (1u64 << n) - 1;
    let mut ends = vec![0u64; 1 << n];
    ends[1 << s] = 1 << s;
    for mask in 0..=full {
        let here = ends[mask as usize];
        if here == 0 {
            continue;
        }
        for v in 0..n {
            if here >> v & 1 == 1 {
                let mut next = adj[v] & !mask;
                while next != 0 {
                    let w = next.trailing_zeros() as usize;
                    next &= next - 1;
                    ends[(mask | 1 << w) as usize] |= 1 << w;
                }
            }
        }
    }
    Ok(ends[full as usize] >> t & 1 == 1)
}

/// Integer flows within bounds. Arcs with a finite lower bound are
/// enumerated; the remaining arcs must form a forest and their values are
/// forced by conservation.
pub fn count_integer_flows(net: &FlowNetwork, budget: &Budget) -> Result<BigUint> {
    let n = net.node_count();
    let arcs = net.arcs();
    let (bounded, open): (Vec<usize>, Vec<usize>) =
        (0..arcs.len()).partition(|&i| arcs[i].lower.is_some());
    // A bounded loop never affects conservation.
    let (loops, bounded): (Vec<usize>, Vec<usize>) = bounded
        .into_iter()
        .partition(|&i| arcs[i].tail == arcs[i].head);
    let loop_factor = loops.iter().fold(BigUint::one(), |acc, &i| {
        acc * BigUint::from((arcs[i].upper as i128 - arcs[i].lower.unwrap() as i128 + 1) as u128)
    });

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    let mut degree = vec![0usize; n];
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &i in &open {
        let (a, b) = (
            find(&mut parent, arcs[i].tail),
            find(&mut parent, arcs[i].head),
        );
        if a == b {
            return Err(Error::invalid(
                "arcs without a lower bound contain a cycle; the flow count is not finite",
            ));
        }
        parent[a] = b;
        for x in [arcs[i].tail, arcs[i].head] {
            degree[x] += 1;
            touching[x].push(i);
        }
    }
    // Leaf-peeling order: (leaf node, open arc fixed by it).
    let mut peel = Vec::with_capacity(open.len());
    let mut used = vec![false; arcs.len()];
    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    while let Some(x) = stack.pop() {
        if degree[x] != 1 {
            continue;
        }
        let i = *touching[x]
            .iter()
            .find(|&&i| !used[i])
            .expect("leaf has an arc");
        used[i] = true;
        peel.push((x, i));
        degree[x] = 0;
        let y = if arcs[i].tail == x {
            arcs[i].head
        } else {
            arcs[i].tail
        };
        degree[y] -= 1;
        if degree[y] == 1 {
            stack.push(y);
        }
    }
    let free_node: Vec<bool> = (0..n).map(|v| touching[v].is_empty()).collect();

    // Contribution range of the bounded arcs not yet assigned, per node.
    let mut lo_rest = vec![0i128; n];
    let mut hi_rest = vec![0i128; n];
    for &i in &bounded {
        let a = &arcs[i];
        let (lo, hi) = (a.lower.unwrap() as i128, a.upper as i128);
        lo_rest[a.head] += lo;
        hi_rest[a.head] += hi;
        lo_rest[a.tail] -= hi;
        hi_rest[a.tail] -= lo;
    }
    let mut search = FlowSearch {
        net,
        bounded,
        peel,
        free_node,
        excess: vec![0; n],
        lo_rest,
        hi_rest,
        count: BigUint::zero(),
        meter: budget.meter("flow search nodes"),
    };
    search.descend(0)?;
    Ok(search.count * loop_factor)
}

struct FlowSearch<'a> {
    net: &'a FlowNetwork,
    bounded: Vec<usize>,
    peel: Vec<(usize, usize)>,
    /// Nodes with no open arc, where the range pruning is exact.
    free_node: Vec<bool>,
    excess: Vec<i128>,
    lo_rest: Vec<i128>,
    hi_rest: Vec<i128>,
    count: BigUint,
    meter: Meter,
}

impl FlowSearch<'_> {
    fn reachable(&self, v: usize) -> bool {
        !self.free_node[v]
            || (self.excess[v] + self.lo_rest[v] <= 0 && self.excess[v] + self.hi_rest[v] >= 0)
    }

    fn descend(&mut self, k: usize) -> Result<()> {
        self.meter.tick()?;
        if k == self.bounded.len() {
            if self.close() {
                self.count += 1u32;
            }
            return Ok(());
        }
        let a = self.net.arcs()[self.bounded[k]];
        let (lo, hi) = (a.lower.unwrap() as i128, a.upper as i128);
        self.lo_rest[a.head] -= lo;
        self.hi_rest[a.head] -= hi;
        self.lo_rest[a.tail] += hi;
        self.hi_rest[a.tail] += lo;
        for f in lo..=hi {
            self.excess[a.head] += f;
            self.excess[a.tail] -= f;
            if self.reachable(a.head) && self.reachable(a.tail) {
                self.descend(k + 1)?;
            }
            self.excess[a.head] -= f;
            self.excess[a.tail] += f;
        }
        self.lo_rest[a.head] += lo;
        self.hi_rest[a.head] += hi;
        self.lo_rest[a.tail] -= hi;
        self.hi_rest[a.tail] -= lo;
        Ok(())
    }

    /// Solves the open arcs leaf by leaf and checks what is left over.
    fn close(&self) -> bool {
        let mut excess = self.excess.clone();
        for &(x, i) in &self.peel {
            let a = &self.net.arcs()[i];
            let f = if a.head == x { -excess[x] } else { excess[x] };
            if f > a.upper as i128 {
                return false;
            }
            excess[a.head] += f;
            excess[a.tail] -= f;
        }
        excess.iter().all(|&e| e == 0)
    }
}
