//! Network matrices generated by a directed spanning tree and a directed
//! graph on a shared vertex set.
//!
//! Rows are indexed by tree arcs and columns by graph arcs. Entry `(t, e)` is
//! `+1` (`-1`) when tree arc `t` is traversed forwards (backwards) on the tree
//! path from the tail of `e` to its head, and `0` when `t` is off that path.
//!
//! Specs are the ground truth; matrices are always derived from them. The
//! class-preserving edits below act on specs, append any new row or column at
//! the end, and leave every existing index in place.

mod matrix;

pub use matrix::SignedMatrix;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exactgeom::HPolytope;
use crate::text::Lines;
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::VecDeque;

/// Directed arc `(tail, head)`.
pub type Arc = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NetworkMatrixSpec {
    vertex_count: usize,
    tree_arcs: Vec<Arc>,
    graph_arcs: Vec<Arc>,
}

/// A spec produced by an edit that appended a row or column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edited {
    pub spec: NetworkMatrixSpec,
    /// Index of the appended row (tree arc) or column (graph arc). Every
    /// other index keeps its old meaning.
    pub new_index: usize,
}

impl NetworkMatrixSpec {
    pub fn new(vertex_count: usize, tree_arcs: Vec<Arc>, graph_arcs: Vec<Arc>) -> Result<Self> {
        let spec = NetworkMatrixSpec {
            vertex_count,
            tree_arcs,
            graph_arcs,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let n = self.vertex_count;
        if n == 0 {
            return Err(Error::invalid("spec needs at least one vertex"));
        }
        if self.tree_arcs.len() != n - 1 {
            return Err(Error::invalid(format!(
                "spanning tree on {n} vertices needs {} arcs, found {}",
                n - 1,
                self.tree_arcs.len()
            )));
        }
        for &(u, v) in self.tree_arcs.iter().chain(&self.graph_arcs) {
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange {
                    index: u.max(v),
                    limit: n,
                });
            }
        }
        if let Some(&(u, _)) = self.graph_arcs.iter().find(|&&(u, v)| u == v) {
            return Err(Error::invalid(format!(
                "graph arc ({u},{u}) is a self-loop"
            )));
        }
        // n - 1 arcs that connect everything form a tree.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in &self.tree_arcs {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return Err(Error::invalid(format!("tree arc ({u},{v}) closes a cycle")));
            }
            parent[a] = b;
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn tree_arcs(&self) -> &[Arc] {
        &self.tree_arcs
    }

    pub fn graph_arcs(&self) -> &[Arc] {
        &self.graph_arcs
    }

    /// Random spec: a random labelled spanning tree with random arc
    /// orientations, plus `graph_arcs` random non-loop arcs.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, vertex_count: usize, graph_arcs: usize) -> Self {
        assert!(vertex_count >= 2, "random specs need two vertices");
        let mut labels: Vec<usize> = (0..vertex_count).collect();
        labels.shuffle(rng);
        let tree = (1..vertex_count)
            .map(|i| {
                let p = rng.gen_range(0..i);
                let (a, b) = (labels[i], labels[p]);
                if rng.gen_bool(0.5) {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        let arcs = (0..graph_arcs)
            .map(|_| {
                let u = rng.gen_range(0..vertex_count);
                let mut v = rng.gen_range(0..vertex_count - 1);
                if v >= u {
                    v += 1;
                }
                (u, v)
            })
            .collect();
        NetworkMatrixSpec::new(vertex_count, tree, arcs).expect("random spec is valid")
    }

    /// Tree arcs on the path from `u` to `v` with their traversal sign.
    ///
    /// Walks both endpoints up to their lowest common ancestor (tree rooted
    /// at vertex 0).
    pub fn tree_path(&self, u: usize, v: usize) -> Vec<(usize, i8)> {
        TreeIndex::new(self).path(u, v)
    }

    /// Parses `nV nT nE`, then `nT` tree arcs, then `nE` graph arcs.
    pub fn parse(src: &str) -> Result<Self> {
        let mut lines = Lines::new(src, '#');
        let header = lines.next_line("header `nV nT nE`")?;
        header.expect_len(3, "header")?;
        let nv: usize = header.parse(0, "vertex count")?;
        let nt: usize = header.parse(1, "tree arc count")?;
        let ne: usize = header.parse(2, "graph arc count")?;
        let mut read_arcs = |count: usize, what: &str| -> Result<Vec<Arc>> {
            (0..count)
                .map(|_| {
                    let line = lines.next_line(what)?;
                    line.expect_len(2, what)?;
                    let u: usize = line.parse(0, "tail")?;
                    let v: usize = line.parse(1, "head")?;
                    if u >= nv || v >= nv {
                        return Err(line.error(if u >= nv { 0 } else { 1 }, "vertex out of range"));
                    }
                    Ok((u, v))
                })
                .collect()
        };
        let tree = read_arcs(nt, "tree arc")?;
        let graph = read_arcs(ne, "graph arc")?;
        lines.expect_end()?;
        NetworkMatrixSpec::new(nv, tree, graph)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {}\n",
            self.vertex_count,
            self.tree_arcs.len(),
            self.graph_arcs.len()
        );
        for (u, v) in self.tree_arcs.iter().chain(&self.graph_arcs) {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    fn check_row(&self, t: usize) -> Result<()> {
        if t < self.tree_arcs.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: t,
                limit: self.tree_arcs.len(),
            })
        }
    }

    fn check_column(&self, e: usize) -> Result<()> {
        if e < self.graph_arcs.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: e,
                limit: self.graph_arcs.len(),
            })
        }
    }
}

struct TreeIndex {
    /// (parent vertex, tree arc index, sign of the child-to-parent step)
    up: Vec<Option<(usize, usize, i8)>>,
    depth: Vec<usize>,
}

impl TreeIndex {
    fn new(spec: &NetworkMatrixSpec) -> Self {
        let n = spec.vertex_count;
        let mut adj: Vec<Vec<(usize, usize, i8)>> = vec![Vec::new(); n];
        for (idx, &(a, b)) in spec.tree_arcs.iter().enumerate() {
            // Stepping a -> b follows the arc.
            adj[a].push((b, idx, 1));
            adj[b].push((a, idx, -1));
        }
        let mut up = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &(y, idx, sign) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    depth[y] = depth[x] + 1;
                    // Step y -> x is the reverse of step x -> y.
                    up[y] = Some((x, idx, -sign));
                    queue.push_back(y);
                }
            }
        }
        TreeIndex { up, depth }
    }

    fn path(&self, mut u: usize, mut v: usize) -> Vec<(usize, i8)> {
        let mut from_u = Vec::new();
        let mut into_v = Vec::new();
        while u != v {
            if self.depth[u] >= self.depth[v] {
                let (p, idx, sign) = self.up[u].expect("non-root has a parent");
                from_u.push((idx, sign));
                u = p;
            } else {
                let (p, idx, sign) = self.up[v].expect("non-root has a parent");
                // Walking down p -> v reverses the recorded upward step.
                into_v.push((idx, -sign));
                v = p;
            }
        }
        into_v.reverse();
        from_u.extend(into_v);
        from_u
    }
}

/// The network matrix of `spec` (|T| rows × |E| columns).
pub fn generate(spec: &NetworkMatrixSpec) -> SignedMatrix {
    let index = TreeIndex::new(spec);
    let mut m = SignedMatrix::zeros(spec.tree_arcs.len(), spec.graph_arcs.len());
    for (e, &(u, v)) in spec.graph_arcs.iter().enumerate() {
        for (t, sign) in index.path(u, v) {
            m.set(t, e, sign);
        }
    }
    m
}

/// Duplicates row `t` by subdividing tree arc `t = (u,v)` with a fresh
/// vertex `w`: arc `t` becomes `(u,w)` and the copy `(w,v)` is appended.
pub fn duplicate_row(spec: &NetworkMatrixSpec, t: usize) -> Result<Edited> {
    spec.check_row(t)?;
    let mut out = spec.clone();
    let (u, v) = out.tree_arcs[t];
    let w = out.vertex_count;
    out.vertex_count += 1;
    out.tree_arcs[t] = (u, w);
    out.tree_arcs.push((w, v));
    let new_index = out.tree_arcs.len() - 1;
    Ok(Edited {
        spec: out,
        new_index,
    })
}

/// Duplicates column `e` by appending a parallel graph arc.
pub fn duplicate_column(spec: &NetworkMatrixSpec, e: usize) -> Result<Edited> {
    spec.check_column(e)?;
    let mut out = spec.clone();
    out.graph_arcs.push(spec.graph_arcs[e]);
    let new_index = out.graph_arcs.len() - 1;
    Ok(Edited {
        spec: out,
        new_index,
    })
}

/// Negates row `t` by reversing tree arc `t`.
pub fn negate_row(spec: &NetworkMatrixSpec, t: usize) -> Result<NetworkMatrixSpec> {
    spec.check_row(t)?;
    let mut out = spec.clone();
    let (u, v) = out.tree_arcs[t];
    out.tree_arcs[t] = (v, u);
    Ok(out)
}

/// Negates column `e` by reversing graph arc `e`.
pub fn negate_column(spec: &NetworkMatrixSpec, e: usize) -> Result<NetworkMatrixSpec> {
    spec.check_column(e)?;
    let mut out = spec.clone();
    let (u, v) = out.graph_arcs[e];
    out.graph_arcs[e] = (v, u);
    Ok(out)
}

/// Appends a row with a single `+1` in column `e = (u,v)`: a fresh vertex
/// `w` takes the head of `e`, which becomes `(u,w)`, and tree arc `(v,w)` is
/// appended.
pub fn add_unit_row(spec: &NetworkMatrixSpec, e: usize) -> Result<Edited> {
    spec.check_column(e)?;
    let mut out = spec.clone();
    let (u, v) = out.graph_arcs[e];
    let w = out.vertex_count;
    out.vertex_count += 1;
    out.graph_arcs[e] = (u, w);
    out.tree_arcs.push((v, w));
    let new_index = out.tree_arcs.len() - 1;
    Ok(Edited {
        spec: out,
        new_index,
    })
}

/// Appends a column with a single `+1` in row `t`: a graph arc parallel to
/// tree arc `t`.
pub fn add_unit_column(spec: &NetworkMatrixSpec, t: usize) -> Result<Edited> {
    spec.check_row(t)?;
    let mut out = spec.clone();
    out.graph_arcs.push(spec.tree_arcs[t]);
    let new_index = out.graph_arcs.len() - 1;
    Ok(Edited {
        spec: out,
        new_index,
    })
}

/// Whether every square submatrix of order at most `max_order` has
/// determinant in `{-1, 0, 1}`.
///
/// `max_order` is clamped to `min(rows, cols)`. The total number of minors
/// examined must fit the budget.
pub fn is_totally_unimodular_bruteforce(
    m: &SignedMatrix,
    max_order: usize,
    budget: &Budget,
) -> Result<bool> {
    let max_order = max_order.min(m.rows()).min(m.cols());
    let mut work = num_bigint::BigUint::from(0u8);
    for k in 1..=max_order {
        work += binomial(m.rows(), k) * binomial(m.cols(), k);
    }
    budget.check("minor enumeration", &work)?;
    let dense: Vec<Vec<i64>> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|&x| x as i64).collect())
        .collect();
    for k in 1..=max_order {
        let row_sets = combinations(m.rows(), k);
        let col_sets = combinations(m.cols(), k);
        for rows in &row_sets {
            for cols in &col_sets {
                let sub: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| dense[i][j]).collect())
                    .collect();
                if crate::exactgeom::linalg::determinant_i64(&sub).abs() > 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn binomial(n: usize, k: usize) -> num_bigint::BigUint {
    let mut acc = num_bigint::BigUint::from(1u8);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut cur, &mut out);
    }
    out
}

/// `{x : A x <= b}` with `A = generate(spec)`: variables on graph arcs,
/// one row per tree arc.
pub fn network_polytope(spec: &NetworkMatrixSpec, b: &[i64]) -> Result<HPolytope> {
    system(&generate(spec), b)
}

/// `{x : A^T x <= b}` with `A = generate(spec)`: variables on tree arcs,
/// one row per graph arc.
pub fn transpose_network_polytope(spec: &NetworkMatrixSpec, b: &[i64]) -> Result<HPolytope> {
    system(&generate(spec).transpose(), b)
}

fn system(a: &SignedMatrix, b: &[i64]) -> Result<HPolytope> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: b.len(),
        });
    }
    let rows: Vec<Vec<i64>> = a
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(i64::from).collect())
        .collect();
    HPolytope::from_i64(&rows, b)
}

/// Parses a right-hand-side vector: a count `k` followed by `k` integers,
/// laid out on any number of lines.
pub fn parse_vector(src: &str) -> Result<Vec<i64>> {
    let mut lines = Lines::new(src, '#');
    let header = lines.next_line("vector length")?;
    let k: usize = header.parse(0, "vector length")?;
    let mut out = Vec::with_capacity(k);
    for i in 1..header.len() {
        out.push(header.parse::<i64>(i, "vector entry")?);
    }
    let rest = lines.rest();
    for line in &rest {
        for i in 0..line.len() {
            out.push(line.parse::<i64>(i, "vector entry")?);
        }
    }
    if out.len() != k {
        let (line, column) = rest.last().map_or((header.number, 1), |l| (l.number, 1));
        return Err(Error::Parse {
            line,
            column,
            message: format!("expected {k} vector entries, found {}", out.len()),
        });
    }
    Ok(out)
}

pub fn vector_to_text(b: &[i64]) -> String {
    let entries: Vec<String> = b.iter().map(i64::to_string).collect();
    format!("{}\n{}\n", b.len(), entries.join(" "))
}
