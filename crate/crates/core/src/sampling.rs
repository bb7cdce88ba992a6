//! Self-reducibility: pinning coordinates, exact uniform sampling from an
//! exact counter, and counting from a uniform sampler.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exactgeom::{count_vertices_01, feasible_points_01, HPolytope};
use crate::netmatrix::{self, NetworkMatrixSpec};
use num_bigint::{BigInt, BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// The generator behind every seeded command.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_coordinate(p: &HPolytope, j: usize) -> Result<()> {
    if j < p.dim() {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            index: j,
            limit: p.dim(),
        })
    }
}

/// `P` with `x_j` pinned to `value` by the pair `x_j <= value`,
/// `-x_j <= -value`.
pub fn pin(p: &HPolytope, j: usize, value: i64) -> Result<HPolytope> {
    check_coordinate(p, j)?;
    let mut q = p.clone();
    let mut up = vec![BigInt::zero(); p.dim()];
    up[j] = BigInt::one();
    let down: Vec<BigInt> = up.iter().map(|x| -x).collect();
    q.push_row(up, BigInt::from(value))?;
    q.push_row(down, BigInt::from(-value))?;
    Ok(q)
}

/// `(P ∩ {x_j = 0}, P ∩ {x_j = 1})`.
pub fn self_reduce(p: &HPolytope, j: usize) -> Result<(HPolytope, HPolytope)> {
    Ok((pin(p, j, 0)?, pin(p, j, 1)?))
}

/// A polytope `{x : transpose(generate(spec)) x <= rhs}` kept in spec form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecPolytope {
    pub spec: NetworkMatrixSpec,
    pub rhs: Vec<i64>,
}

impl SpecPolytope {
    pub fn polytope(&self) -> Result<HPolytope> {
        netmatrix::transpose_network_polytope(&self.spec, &self.rhs)
    }

    /// Pins `x_t` inside the class: a unit column on tree arc `t` gives the
    /// row `x_t <= value`, and a negated one `-x_t <= -value`. The rows come
    /// out in the same order as [`pin`] appends them.
    pub fn pin(&self, t: usize, value: i64) -> Result<SpecPolytope> {
        let up = netmatrix::add_unit_column(&self.spec, t)?;
        let copy = netmatrix::add_unit_column(&up.spec, t)?;
        let spec = netmatrix::negate_column(&copy.spec, copy.new_index)?;
        let mut rhs = self.rhs.clone();
        rhs.extend([value, -value]);
        Ok(SpecPolytope { spec, rhs })
    }

    pub fn self_reduce(&self, t: usize) -> Result<(SpecPolytope, SpecPolytope)> {
        Ok((self.pin(t, 0)?, self.pin(t, 1)?))
    }
}

/// Vertex counts of 0/1 polytopes.
pub trait VertexCounter {
    fn count(&mut self, p: &HPolytope) -> Result<BigUint>;
}

/// Exact counter over `{0,1}^n`, memoized per polytope.
#[derive(Debug, Default)]
pub struct ExactCounter {
    budget: Budget,
    cache: HashMap<HPolytope, BigUint>,
}

impl ExactCounter {
    pub fn new(budget: Budget) -> Self {
        ExactCounter {
            budget,
            cache: HashMap::new(),
        }
    }
}

impl VertexCounter for ExactCounter {
    fn count(&mut self, p: &HPolytope) -> Result<BigUint> {
        if let Some(c) = self.cache.get(p) {
            return Ok(c.clone());
        }
        let c = count_vertices_01(p, &self.budget)?;
        self.cache.insert(p.clone(), c.clone());
        Ok(c)
    }
}

/// Order in which coordinates are split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitOrder {
    /// `x_0, x_1, ...`.
    #[default]
    Sequential,
    /// A permutation drawn from the sampler's rng before each draw.
    Shuffled,
}

fn split_order<R: Rng + ?Sized>(n: usize, order: SplitOrder, rng: &mut R) -> Vec<usize> {
    let mut coords: Vec<usize> = (0..n).collect();
    if order == SplitOrder::Shuffled {
        coords.shuffle(rng);
    }
    coords
}

/// Draws a vertex of a 0/1 polytope: at each split the branch is taken with
/// probability exactly proportional to its vertex count.
pub fn sample_vertex<R: Rng + ?Sized>(
    p: &HPolytope,
    counter: &mut dyn VertexCounter,
    rng: &mut R,
) -> Result<Vec<i64>> {
    sample_vertex_ordered(p, counter, SplitOrder::Sequential, rng)
}

pub fn sample_vertex_ordered<R: Rng + ?Sized>(
    p: &HPolytope,
    counter: &mut dyn VertexCounter,
    order: SplitOrder,
    rng: &mut R,
) -> Result<Vec<i64>> {
    if counter.count(p)?.is_zero() {
        return Err(Error::Infeasible);
    }
    let mut x = vec![0i64; p.dim()];
    let mut current = p.clone();
    for j in split_order(p.dim(), order, rng) {
        let (p0, p1) = self_reduce(&current, j)?;
        let c0 = counter.count(&p0)?;
        let c1 = counter.count(&p1)?;
        let total = &c0 + &c1;
        if total.is_zero() {
            return Err(Error::Structural(
                "split counts vanish below a nonempty polytope; the counter is not exact".into(),
            ));
        }
        if rng.gen_biguint_below(&total) < c0 {
            current = p0;
        } else {
            x[j] = 1;
            current = p1;
        }
    }
    Ok(x)
}

/// Probability that [`sample_vertex`] returns `v`: the product of the split
/// ratios along `v`'s branch.
pub fn vertex_probability(
    p: &HPolytope,
    counter: &mut dyn VertexCounter,
    v: &[i64],
) -> Result<BigRational> {
    if v.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: v.len(),
        });
    }
    let mut prob = BigRational::one();
    let mut current = p.clone();
    for (j, &bit) in v.iter().enumerate() {
        let (p0, p1) = self_reduce(&current, j)?;
        let c0 = counter.count(&p0)?;
        let c1 = counter.count(&p1)?;
        let total = &c0 + &c1;
        let (chosen, next) = match bit {
            0 => (c0, p0),
            1 => (c1, p1),
            _ => return Ok(BigRational::zero()),
        };
        if chosen.is_zero() {
            return Ok(BigRational::zero());
        }
        prob *= BigRational::new(chosen.into(), total.into());
        current = next;
    }
    Ok(prob)
}

/// Source of uniform vertices.
pub trait VertexSampler {
    /// `k` independent uniform vertices of `p`; `Error::Infeasible` when `p`
    /// has none.
    fn sample_many(
        &mut self,
        p: &HPolytope,
        k: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<Vec<i64>>>;
}

/// [`sample_vertex`] driven by an [`ExactCounter`].
#[derive(Debug, Default)]
pub struct SplitSampler {
    pub counter: ExactCounter,
    pub order: SplitOrder,
}

impl VertexSampler for SplitSampler {
    fn sample_many(
        &mut self,
        p: &HPolytope,
        k: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<Vec<i64>>> {
        (0..k)
            .map(|_| sample_vertex_ordered(p, &mut self.counter, self.order, rng))
            .collect()
    }
}

/// Lists the 0/1 points once per call and picks among them uniformly. Same
/// distribution as [`SplitSampler`], far fewer counter calls.
#[derive(Debug, Default)]
pub struct ListSampler {
    pub budget: Budget,
}

impl VertexSampler for ListSampler {
    fn sample_many(
        &mut self,
        p: &HPolytope,
        k: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<Vec<i64>>> {
        let points = feasible_points_01(p, &self.budget)?;
        if points.is_empty() {
            return Err(Error::Infeasible);
        }
        Ok((0..k)
            .map(|_| points[rng.gen_range(0..points.len())].clone())
            .collect())
    }
}

/// Result of [`count_from_sampler`].
#[derive(Debug, Clone, PartialEq)]
pub struct CountEstimate {
    pub count: BigUint,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub runs: usize,
    pub samples_per_level: usize,
}

/// Per-level sample size `N = ceil(n / ln(1 + eps^2/16))`.
///
/// Each level estimates the majority fraction `p_j >= 1/2`, whose relative
/// variance is at most `(1-p_j)/(p_j N) <= 1/N`. The product over `n` levels
/// then has relative variance at most `(1 + 1/N)^n - 1 <= e^(n/N) - 1 <=
/// eps^2/16`, so by Chebyshev a single run is within `1 ± eps/2` of the true
/// product with probability at least 3/4. Inverting keeps it within `1 ± eps`.
pub fn samples_per_level(n: usize, epsilon: f64) -> usize {
    (n as f64 / (epsilon * epsilon / 16.0).ln_1p())
        .ceil()
        .max(1.0) as usize
}

/// Number of runs `R = ceil(8 ln(1/delta))`, made odd. Each run fails with
/// probability at most 1/4, so by Hoeffding the median is off with
/// probability at most `exp(-2 R (1/4)^2) = exp(-R/8) <= delta`.
pub fn run_count(delta: f64) -> usize {
    let r = (8.0 * (1.0 / delta).ln()).ceil().max(1.0) as usize;
    r | 1
}

/// Estimates the vertex count of a 0/1 polytope from a uniform sampler by
/// the telescoping product of majority-branch ratios along fixed coordinate
/// order; the median over [`run_count`] runs is reported.
pub fn count_from_sampler(
    p: &HPolytope,
    sampler: &mut dyn VertexSampler,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<CountEstimate> {
    if !(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("epsilon and delta must lie in (0, 1)"));
    }
    let n = p.dim();
    let per_level = samples_per_level(n, epsilon);
    let runs = run_count(delta);
    let mut rng = seeded_rng(seed);
    let report = |count| CountEstimate {
        count,
        epsilon,
        delta,
        seed,
        runs,
        samples_per_level: per_level,
    };
    let mut estimates = Vec::with_capacity(runs);
    for _ in 0..runs {
        // Inverse count: product of the estimated majority fractions.
        let mut fraction = BigRational::one();
        let mut current = p.clone();
        for j in 0..n {
            let draws = match sampler.sample_many(&current, per_level, &mut rng) {
                Ok(d) => d,
                Err(Error::Infeasible) if j == 0 => return Ok(report(BigUint::zero())),
                Err(e) => return Err(e),
            };
            let ones = draws.iter().filter(|x| x[j] == 1).count();
            let (bit, hits) = if 2 * ones > per_level {
                (1, ones)
            } else {
                (0, per_level - ones)
            };
            fraction *= BigRational::new(BigInt::from(hits), BigInt::from(per_level));
            current = pin(&current, j, bit)?;
        }
        estimates.push(fraction.recip());
    }
    estimates.sort();
    let median = &estimates[runs / 2];
    let rounded = median.round().to_integer();
    Ok(report(
        rounded.to_biguint().expect("counts are nonnegative"),
    ))
}

/// `estimate / truth` as a float, for reporting.
pub fn ratio(estimate: &BigUint, truth: &BigUint) -> f64 {
    let r = BigRational::new(estimate.clone().into(), truth.clone().into());
    r.to_f64().unwrap_or(f64::NAN)
}
