//! Polytope encodings of combinatorial problems on graphs.
//!
//! Variable order always follows the instance's edge (or vertex) order.
//! Equalities are emitted as a `<=` row followed by the opposite `>=` row
//! (written `-sum <= -c`).

use crate::error::{Error, Result};
use crate::exactgeom::HPolytope;
use crate::netmatrix::{self, NetworkMatrixSpec};
use crate::text::Lines;

/// Undirected multigraph with an optional bipartition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    /// `side[v]` is true for vertices of the second block.
    side: Option<Vec<bool>>,
}

impl UGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(u, v) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::IndexOutOfRange {
                    index: u.max(v),
                    limit: vertex_count,
                });
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
        }
        Ok(UGraph {
            vertex_count,
            edges,
            side: None,
        })
    }

    /// Bipartite graph whose first block is `0..first_block`.
    pub fn bipartite(
        first_block: usize,
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if first_block > vertex_count {
            return Err(Error::invalid("first block larger than the vertex set"));
        }
        let side = (0..vertex_count).map(|v| v >= first_block).collect();
        UGraph::new(vertex_count, edges)?.with_sides(side)
    }

    /// Complete bipartite graph `K_{a,b}`, edges in row-major order.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a)
            .flat_map(|i| (0..b).map(move |j| (i, a + j)))
            .collect();
        UGraph::bipartite(a, a + b, edges).expect("complete bipartite graph is valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        UGraph::new(n, edges).expect("complete graph is valid")
    }

    pub fn cycle(n: usize) -> Self {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        UGraph::new(n, edges).expect("cycle is valid")
    }

    /// Attaches an explicit bipartition; every edge must cross it.
    pub fn with_sides(mut self, side: Vec<bool>) -> Result<Self> {
        if side.len() != self.vertex_count {
            return Err(Error::DimensionMismatch {
                expected: self.vertex_count,
                got: side.len(),
            });
        }
        if let Some(&(u, v)) = self.edges.iter().find(|&&(u, v)| side[u] == side[v]) {
            return Err(Error::NotBipartite(format!(
                "edge ({u},{v}) lies inside one block"
            )));
        }
        self.side = Some(side);
        Ok(self)
    }

    pub fn without_sides(mut self) -> Self {
        self.side = None;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn sides(&self) -> Option<&[bool]> {
        self.side.as_deref()
    }

    pub fn first_block(&self) -> Option<Vec<usize>> {
        self.side
            .as_ref()
            .map(|s| (0..self.vertex_count).filter(|&v| !s[v]).collect())
    }

    pub fn second_block(&self) -> Option<Vec<usize>> {
        self.side
            .as_ref()
            .map(|s| (0..self.vertex_count).filter(|&v| s[v]).collect())
    }

    /// Edge indices incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push(i);
            inc[v].push(i);
        }
        inc
    }

    fn require_sides(&self) -> Result<&[bool]> {
        self.side
            .as_deref()
            .ok_or_else(|| Error::NotBipartite("no bipartition given".into()))
    }

    /// Edge oriented from the first block to the second.
    fn oriented(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.edges[e];
        match &self.side {
            Some(s) if s[u] => (v, u),
            _ => (u, v),
        }
    }

    /// Parses `n m [a]` followed by `m` lines `u v`. With `a`, vertices
    /// `0..a` form the first block.
    pub fn parse(src: &str) -> Result<Self> {
        let mut lines = Lines::new(src, '#');
        let header = lines.next_line("header `n m [a]`")?;
        header.expect_len_between(2, 3, "header")?;
        let n: usize = header.parse(0, "vertex count")?;
        let m: usize = header.parse(1, "edge count")?;
        let a: Option<usize> = if header.len() == 3 {
            let a: usize = header.parse(2, "first block size")?;
            if a > n {
                return Err(header.error(2, "first block larger than the vertex set"));
            }
            Some(a)
        } else {
            None
        };
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines.next_line("edge `u v`")?;
            line.expect_len(2, "edge")?;
            let u: usize = line.parse(0, "endpoint")?;
            let v: usize = line.parse(1, "endpoint")?;
            if u >= n {
                return Err(line.error(0, "vertex out of range"));
            }
            if v >= n {
                return Err(line.error(1, "vertex out of range"));
            }
            if u == v {
                return Err(line.error(1, "self-loop"));
            }
            if let Some(a) = a {
                if (u < a) == (v < a) {
                    return Err(line.error(0, "edge does not cross the bipartition"));
                }
            }
            edges.push((u, v));
        }
        lines.expect_end()?;
        match a {
            Some(a) => UGraph::bipartite(a, n, edges),
            None => UGraph::new(n, edges),
        }
    }

    /// Serializes in the format read by [`UGraph::parse`]. A bipartition is
    /// written only when its first block is a prefix `0..a`.
    pub fn to_text(&self) -> String {
        let prefix = self.side.as_ref().and_then(|s| {
            let a = s.iter().take_while(|&&x| !x).count();
            s[a..].iter().all(|&x| x).then_some(a)
        });
        let mut out = match prefix {
            Some(a) => format!("{} {} {}\n", self.vertex_count, self.edges.len(), a),
            None => format!("{} {}\n", self.vertex_count, self.edges.len()),
        };
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn require_edges(g: &UGraph) -> Result<()> {
    if g.edges.is_empty() {
        Err(Error::invalid(
            "graph has no edges, the polytope would have no variables",
        ))
    } else {
        Ok(())
    }
}

/// Vertex rows `sum = target` as a pair, then `0 <= x_e <= cap` per edge.
fn degree_system(g: &UGraph, target: i64, cap: i64) -> Result<HPolytope> {
    let m = g.edges.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for inc in g.incidence() {
        let mut row = vec![0i64; m];
        for e in inc {
            row[e] += 1;
        }
        a.push(row.clone());
        b.push(target);
        a.push(row.into_iter().map(|x| -x).collect());
        b.push(-target);
    }
    for e in 0..m {
        let mut up = vec![0i64; m];
        up[e] = 1;
        a.push(up);
        b.push(cap);
        let mut down = vec![0i64; m];
        down[e] = -1;
        a.push(down);
        b.push(0);
    }
    HPolytope::from_i64(&a, &b)
}

/// Perfect matching polytope of a bipartite graph: `0 <= x <= 1` per edge
/// and degree exactly 1 at every vertex.
pub fn pm_polytope(g: &UGraph) -> Result<HPolytope> {
    g.require_sides()?;
    require_edges(g)?;
    degree_system(g, 1, 1)
}

/// Perfect 2-matching polytope: `0 <= x <= 2` per edge and degree exactly 2
/// at every vertex. Any graph.
pub fn p2m_polytope(g: &UGraph) -> Result<HPolytope> {
    require_edges(g)?;
    degree_system(g, 2, 2)
}

/// Independent-set polytope of a bipartite graph as a transposed network
/// system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisEncoding {
    /// Star spec: root `r = n`, tree arc `v` is `(v, r)` for first-block `v`
    /// and `(r, v)` otherwise, so variable `x_v` sits on tree arc `v`. Graph
    /// arcs are the edges oriented first block to second, followed by a
    /// unit column and a negated unit column per variable.
    pub spec: NetworkMatrixSpec,
    pub rhs: Vec<i64>,
    /// `transpose(generate(spec)) x <= rhs`.
    pub polytope: HPolytope,
}

fn star_spec(g: &UGraph) -> Result<NetworkMatrixSpec> {
    let side = g.require_sides()?;
    let r = g.vertex_count;
    let tree = (0..g.vertex_count)
        .map(|v| if side[v] { (r, v) } else { (v, r) })
        .collect();
    let arcs = (0..g.edges.len()).map(|e| g.oriented(e)).collect();
    NetworkMatrixSpec::new(g.vertex_count + 1, tree, arcs)
}

/// Rows `x_i + y_j <= 1` per edge, then `x_v <= 1` and `-x_v <= 0` per
/// vertex, all inside the transposed-network class.
pub fn bis_polytope(g: &UGraph) -> Result<BisEncoding> {
    if g.vertex_count == 0 {
        return Err(Error::invalid("graph has no vertices"));
    }
    let mut spec = star_spec(g)?;
    let mut rhs = vec![1i64; g.edges.len()];
    for t in 0..g.vertex_count {
        spec = netmatrix::add_unit_column(&spec, t)?.spec;
        rhs.push(1);
        let edited = netmatrix::add_unit_column(&spec, t)?;
        spec = netmatrix::negate_column(&edited.spec, edited.new_index)?;
        rhs.push(0);
    }
    let polytope = netmatrix::transpose_network_polytope(&spec, &rhs)?;
    Ok(BisEncoding {
        spec,
        rhs,
        polytope,
    })
}

/// (Perfect) matching polytope of a bipartite graph as a network system
/// `generate(spec) x <= rhs`, variables on the edges.
///
/// Row order: one `sum <= 1` row per vertex (the star tree arcs), then with
/// `perfect` one complementary `-sum <= -1` row per vertex, then `-x_e <= 0`
/// per edge.
pub fn matching_polytope_netspec(
    g: &UGraph,
    perfect: bool,
) -> Result<(NetworkMatrixSpec, Vec<i64>)> {
    require_edges(g)?;
    let mut spec = star_spec(g)?;
    let mut rhs = vec![1i64; g.vertex_count];
    if perfect {
        for t in 0..g.vertex_count {
            let dup = netmatrix::duplicate_row(&spec, t)?;
            spec = netmatrix::negate_row(&dup.spec, dup.new_index)?;
            rhs.push(-1);
        }
    }
    for e in 0..g.edges.len() {
        let unit = netmatrix::add_unit_row(&spec, e)?;
        spec = netmatrix::negate_row(&unit.spec, unit.new_index)?;
        rhs.push(0);
    }
    Ok((spec, rhs))
}
