//! H-representation polytopes with exact arithmetic.
//!
//! Everything here works over arbitrary-precision integers and normalized
//! rationals. A point is a vertex exactly when its tight rows have rank `n`.

pub mod linalg;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::text::Lines;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul};

/// `{x : A x <= b}` with integer `A` (m×n) and `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HPolytope {
    a: Vec<Vec<BigInt>>,
    b: Vec<BigInt>,
    n: usize,
}

impl HPolytope {
    pub fn new(a: Vec<Vec<BigInt>>, b: Vec<BigInt>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::invalid("polytope needs at least one row"));
        }
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        let n = a[0].len();
        if n == 0 {
            return Err(Error::invalid("polytope needs at least one variable"));
        }
        if let Some(row) = a.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
        Ok(HPolytope { a, b, n })
    }

    pub fn from_i64(a: &[Vec<i64>], b: &[i64]) -> Result<Self> {
        HPolytope::new(
            a.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            b.iter().map(|&x| BigInt::from(x)).collect(),
        )
    }

    /// `lo <= x_i <= hi` for every coordinate, upper rows first.
    pub fn cube(n: usize, lo: i64, hi: i64) -> Result<Self> {
        let mut a = Vec::with_capacity(2 * n);
        let mut b = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut up = vec![0i64; n];
            up[i] = 1;
            a.push(up);
            b.push(hi);
            let mut down = vec![0i64; n];
            down[i] = -1;
            a.push(down);
            b.push(-lo);
        }
        HPolytope::from_i64(&a, &b)
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.a
    }

    pub fn rhs(&self) -> &[BigInt] {
        &self.b
    }

    /// Appends the row `coeffs . x <= rhs`.
    pub fn push_row(&mut self, coeffs: Vec<BigInt>, rhs: BigInt) -> Result<()> {
        if coeffs.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: coeffs.len(),
            });
        }
        self.a.push(coeffs);
        self.b.push(rhs);
        Ok(())
    }

    /// Parses the `m n` / row-plus-rhs text format.
    pub fn parse(src: &str) -> Result<Self> {
        let mut lines = Lines::new(src, '#');
        let header = lines.next_line("header `m n`")?;
        header.expect_len(2, "header")?;
        let m: usize = header.parse(0, "row count m")?;
        let n: usize = header.parse(1, "column count n")?;
        if m == 0 || n == 0 {
            return Err(header.error(0, "m and n must be positive"));
        }
        let mut a = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        for i in 0..m {
            let line = lines.next_line(&format!("row {}", i + 1))?;
            line.expect_len(n + 1, "row")?;
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                row.push(line.parse::<BigInt>(j, "coefficient")?);
            }
            a.push(row);
            b.push(line.parse::<BigInt>(n, "right-hand side")?);
        }
        lines.expect_end()?;
        HPolytope::new(a, b)
    }

    /// Serializes in the format read by [`HPolytope::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows(), self.n);
        for (row, rhs) in self.a.iter().zip(&self.b) {
            let mut fields: Vec<String> = row.iter().map(BigInt::to_string).collect();
            fields.push(rhs.to_string());
            out.push_str(&fields.join(" "));
            out.push('\n');
        }
        out
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                got,
            })
        }
    }

    fn row_value(&self, i: usize, x: &RationalPoint) -> BigRational {
        self.a[i]
            .iter()
            .zip(&x.coords)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| v * BigRational::from_integer(c.clone()))
            .fold(BigRational::zero(), |acc, t| acc + t)
    }
}

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    pub coords: Vec<BigRational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalPoint { coords }
    }

    pub fn from_integers<T: Into<BigInt> + Copy>(xs: &[T]) -> Self {
        RationalPoint {
            coords: xs
                .iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect(),
        }
    }

    /// Builds a point from `(numerator, denominator)` pairs.
    pub fn from_fractions(xs: &[(i64, i64)]) -> Result<Self> {
        xs.iter()
            .map(|&(p, q)| {
                if q == 0 {
                    Err(Error::invalid("zero denominator"))
                } else {
                    Ok(BigRational::new(BigInt::from(p), BigInt::from(q)))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(RationalPoint::new)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Integer coordinates, if every coordinate is an integer that fits `i64`.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Integer search window `lo <= x <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl IntegerBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::invalid("box needs lo <= hi in every coordinate"));
        }
        Ok(IntegerBox { lo, hi })
    }

    pub fn uniform(n: usize, lo: i64, hi: i64) -> Result<Self> {
        IntegerBox::new(vec![lo; n], vec![hi; n])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    /// Number of integer points in the box.
    pub fn size(&self) -> BigUint {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| BigUint::from((h as i128 - l as i128 + 1) as u128))
            .fold(BigUint::one(), |acc, s| acc * s)
    }
}

/// `A x <= b`, exactly.
pub fn is_feasible(p: &HPolytope, x: &RationalPoint) -> Result<bool> {
    p.check_dim(x.dim())?;
    Ok((0..p.rows()).all(|i| p.row_value(i, x) <= BigRational::from_integer(p.b[i].clone())))
}

/// Indices of rows satisfied with equality at a feasible `x`.
pub fn tight_rows(p: &HPolytope, x: &RationalPoint) -> Result<Vec<usize>> {
    p.check_dim(x.dim())?;
    let mut tight = Vec::new();
    for i in 0..p.rows() {
        let lhs = p.row_value(i, x);
        let rhs = BigRational::from_integer(p.b[i].clone());
        if lhs > rhs {
            return Err(Error::Infeasible);
        }
        if lhs == rhs {
            tight.push(i);
        }
    }
    Ok(tight)
}

/// Feasible and the tight rows have full column rank.
pub fn is_vertex(p: &HPolytope, x: &RationalPoint) -> Result<bool> {
    match tight_rows(p, x) {
        Ok(tight) => Ok(full_rank(p, &tight)),
        Err(Error::Infeasible) => Ok(false),
        Err(e) => Err(e),
    }
}

fn full_rank(p: &HPolytope, tight: &[usize]) -> bool {
    tight.len() >= p.n && linalg::rank(&pick_rows(p, tight)) == p.n
}

fn pick_rows(p: &HPolytope, idx: &[usize]) -> Vec<Vec<BigInt>> {
    idx.iter().map(|&i| p.a[i].clone()).collect()
}

/// All integer vertices of `p` inside `window`, lexicographically sorted.
///
/// The box size must fit the budget. The search walks the box depth-first in
/// lexicographic order and cuts a branch as soon as some row cannot be
/// satisfied by any completion inside the box, so the visited set is a
/// subset of the box.
pub fn enumerate_integral_vertices(
    p: &HPolytope,
    window: &IntegerBox,
    budget: &Budget,
) -> Result<Vec<RationalPoint>> {
    p.check_dim(window.dim())?;
    budget.check("integer box", &window.size())?;
    let mut out = Vec::new();
    for_each_feasible_point(p, window, |x| {
        let tight: Vec<usize> = (0..p.rows())
            .filter(|&i| {
                let lhs: BigInt = p.a[i]
                    .iter()
                    .zip(x)
                    .map(|(c, &v)| c * BigInt::from(v))
                    .sum();
                lhs == p.b[i]
            })
            .collect();
        if full_rank(p, &tight) {
            out.push(RationalPoint::from_integers(x));
        }
    });
    Ok(out)
}

/// Number of points of `{0,1}^n` satisfying `A x <= b`.
///
/// Under the caller's promise that `p` is a 0/1 polytope this is its vertex
/// count. The promise is not checked.
pub fn count_vertices_01(p: &HPolytope, budget: &Budget) -> Result<BigUint> {
    budget.check_pow2("0/1 cube", p.n)?;
    let window = IntegerBox::uniform(p.n, 0, 1)?;
    let mut count = 0u64;
    for_each_feasible_point(p, &window, |_| count += 1);
    Ok(BigUint::from(count))
}

/// The feasible 0/1 points themselves, lexicographically sorted.
pub fn feasible_points_01(p: &HPolytope, budget: &Budget) -> Result<Vec<Vec<i64>>> {
    budget.check_pow2("0/1 cube", p.n)?;
    let window = IntegerBox::uniform(p.n, 0, 1)?;
    let mut out = Vec::new();
    for_each_feasible_point(p, &window, |x| out.push(x.to_vec()));
    Ok(out)
}

/// Calls `visit` on every integer point of `window` with `A x <= b`, in
/// lexicographic order.
pub fn for_each_feasible_point<F: FnMut(&[i64])>(p: &HPolytope, window: &IntegerBox, visit: F) {
    match SmallSystem::try_from_polytope(p, window) {
        Some(small) => dfs_points(&small, window, visit),
        None => {
            let wide = SmallSystem::<BigInt> {
                a: p.a.clone(),
                b: p.b.clone(),
            };
            dfs_points(&wide, window, visit)
        }
    }
}

struct SmallSystem<T> {
    a: Vec<Vec<T>>,
    b: Vec<T>,
}

impl SmallSystem<i64> {
    /// Machine-word copy of the system when every partial sum provably fits.
    fn try_from_polytope(p: &HPolytope, window: &IntegerBox) -> Option<Self> {
        const LIMIT: i128 = 1 << 60;
        let span = window
            .lo
            .iter()
            .chain(&window.hi)
            .map(|v| (*v as i128).abs())
            .max()
            .unwrap_or(0);
        let mut a = Vec::with_capacity(p.rows());
        for row in &p.a {
            let mut small = Vec::with_capacity(row.len());
            let mut reach: i128 = 0;
            for c in row {
                let c = c.to_i64()?;
                reach += (c as i128).abs() * span;
                if reach > LIMIT {
                    return None;
                }
                small.push(c);
            }
            a.push(small);
        }
        let b =
            p.b.iter()
                .map(|v| v.to_i64().filter(|x| (*x as i128).abs() < LIMIT))
                .collect::<Option<Vec<_>>>()?;
        Some(SmallSystem { a, b })
    }
}

fn dfs_points<T, F>(sys: &SmallSystem<T>, window: &IntegerBox, mut visit: F)
where
    T: Clone + Ord + Signed + From<i64>,
    for<'x> &'x T: Add<&'x T, Output = T> + Mul<&'x T, Output = T>,
    F: FnMut(&[i64]),
{
    let n = window.dim();
    let m = sys.a.len();
    // suffix_min[j][i]: least value row i can still gain from coordinates j..n.
    let mut suffix_min = vec![vec![T::zero(); m]; n + 1];
    for j in (0..n).rev() {
        let lo = T::from(window.lo[j]);
        let hi = T::from(window.hi[j]);
        for i in 0..m {
            let c = &sys.a[i][j];
            let best = std::cmp::min(c * &lo, c * &hi);
            suffix_min[j][i] = &suffix_min[j + 1][i] + &best;
        }
    }
    let mut x = vec![0i64; n];
    let mut partial = vec![T::zero(); m];
    let viable =
        |partial: &[T], j: usize| (0..m).all(|i| &partial[i] + &suffix_min[j][i] <= sys.b[i]);
    if !viable(&partial, 0) {
        return;
    }
    descend(sys, window, 0, &mut x, &mut partial, &mut visit, &viable);
}

fn descend<T, F, V>(
    sys: &SmallSystem<T>,
    window: &IntegerBox,
    j: usize,
    x: &mut Vec<i64>,
    partial: &mut Vec<T>,
    visit: &mut F,
    viable: &V,
) where
    T: Clone + Ord + Signed + From<i64>,
    for<'x> &'x T: Add<&'x T, Output = T> + Mul<&'x T, Output = T>,
    F: FnMut(&[i64]),
    V: Fn(&[T], usize) -> bool,
{
    if j == x.len() {
        visit(x);
        return;
    }
    let saved = partial.clone();
    for v in window.lo[j]..=window.hi[j] {
        x[j] = v;
        let tv = T::from(v);
        for (i, row) in sys.a.iter().enumerate() {
            partial[i] = &saved[i] + &(&row[j] * &tv);
        }
        if viable(partial, j + 1) {
            descend(sys, window, j + 1, x, partial, visit, viable);
        }
    }
    partial.clone_from(&saved);
}

#[cfg(test)]
mod tests;
