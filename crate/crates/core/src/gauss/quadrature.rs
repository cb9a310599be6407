use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use super::{GaussHermiteRule, GaussianSpec, TraceClassOperator};
use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::par;

/// Largest dimension accepted by tensor Gauss–Hermite (cost is `nodesⁿ`).
pub const MAX_GH_DIM: usize = 4;
pub const DEFAULT_GH_NODES: usize = 32;
/// Samples per independent RNG stream. Fixed so results do not depend on thread count.
pub const MC_BLOCK: usize = 4096;

const GH_CHUNK: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureSpec {
    GaussHermite { nodes_per_dim: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec::GaussHermite {
            nodes_per_dim: DEFAULT_GH_NODES,
        }
    }
}

impl QuadratureSpec {
    pub fn gauss_hermite(nodes_per_dim: usize) -> Self {
        QuadratureSpec::GaussHermite { nodes_per_dim }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        QuadratureSpec::MonteCarlo { samples, seed }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            QuadratureSpec::MonteCarlo { seed, .. } => Some(*seed),
            QuadratureSpec::GaussHermite { .. } => None,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        match *self {
            QuadratureSpec::GaussHermite { nodes_per_dim } => {
                if nodes_per_dim == 0 {
                    return Err(Error::invalid("nodes_per_dim", "must be positive"));
                }
                if dim > MAX_GH_DIM {
                    return Err(Error::QuadratureDimension {
                        dim,
                        max: MAX_GH_DIM,
                    });
                }
            }
            QuadratureSpec::MonteCarlo { samples, .. } => {
                if samples < 2 {
                    return Err(Error::invalid("samples", "need at least two samples"));
                }
            }
        }
        if dim == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        Ok(())
    }
}

/// Weighted nodes for the standard normal measure on `Rⁿ`.
///
/// Gauss–Hermite gives the tensor rule; Monte Carlo gives equally weighted draws, so the
/// same sample set (common random numbers) is reused wherever the node set is shared.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    dim: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl NodeSet {
    pub fn new(quad: &QuadratureSpec, dim: usize) -> Result<Self> {
        quad.validate(dim)?;
        match *quad {
            QuadratureSpec::GaussHermite { nodes_per_dim } => {
                Ok(Self::tensor(&GaussHermiteRule::new(nodes_per_dim)?, dim))
            }
            QuadratureSpec::MonteCarlo { samples, seed } => {
                let mut points = vec![0.0; samples * dim];
                for (block, chunk) in points.chunks_mut(MC_BLOCK * dim).enumerate() {
                    fill_normals(seed, block, chunk);
                }
                let weights = vec![1.0 / samples as f64; samples];
                Ok(Self {
                    dim,
                    points,
                    weights,
                })
            }
        }
    }

    fn tensor(rule: &GaussHermiteRule, dim: usize) -> Self {
        let m = rule.len();
        let total = m.pow(dim as u32);
        let mut points = Vec::with_capacity(total * dim);
        let mut weights = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            let mut w = 1.0;
            for &i in &idx {
                points.push(rule.nodes()[i]);
                w *= rule.weights()[i];
            }
            weights.push(w);
            // odometer, last axis fastest
            for axis in (0..dim).rev() {
                idx[axis] += 1;
                if idx[axis] < m {
                    break;
                }
                idx[axis] = 0;
            }
        }
        Self {
            dim,
            points,
            weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.points[k * self.dim..(k + 1) * self.dim]
    }

    pub fn weight(&self, k: usize) -> f64 {
        self.weights[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.points
            .chunks_exact(self.dim)
            .zip(self.weights.iter().copied())
    }
}

fn fill_normals(seed: u64, block: usize, out: &mut [f64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    for v in out.iter_mut() {
        *v = StandardNormal.sample(&mut rng);
    }
}

/// Integral value with the Monte Carlo standard error when the backend is stochastic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: Option<f64>,
}

/// `∫ f dN(mean, s·diag(q))` by the configured backend.
pub fn integrate<F>(f: F, spec: &GaussianSpec, quad: &QuadratureSpec) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    integrate_estimate(f, spec, quad).map(|e| e.value)
}

pub fn integrate_estimate<F>(f: F, spec: &GaussianSpec, quad: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = spec.dim();
    quad.validate(dim)?;
    let sd = spec.std_devs();
    let mean = spec.mean();
    let eval = |z: &[f64], y: &mut [f64]| -> Result<f64> {
        for i in 0..dim {
            y[i] = mean[i] + sd[i] * z[i];
        }
        let v = f(y);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite {
                context: "integrand",
            })
        }
    };
    match *quad {
        QuadratureSpec::GaussHermite { .. } => {
            let nodes = NodeSet::new(quad, dim)?;
            let chunks = nodes.len().div_ceil(GH_CHUNK);
            let partials = par::try_map(chunks, |c| {
                let mut y = vec![0.0; dim];
                let end = ((c + 1) * GH_CHUNK).min(nodes.len());
                let mut acc = 0.0;
                for k in c * GH_CHUNK..end {
                    acc += nodes.weight(k) * eval(nodes.point(k), &mut y)?;
                }
                Ok(acc)
            })?;
            Ok(Estimate {
                value: partials.iter().sum(),
                std_error: None,
            })
        }
        QuadratureSpec::MonteCarlo { samples, seed } => {
            let blocks = samples.div_ceil(MC_BLOCK);
            let stats = par::try_map(blocks, |b| {
                let count = MC_BLOCK.min(samples - b * MC_BLOCK);
                let mut z = vec![0.0; count * dim];
                fill_normals(seed, b, &mut z);
                let mut y = vec![0.0; dim];
                let mut acc = Welford::default();
                for zk in z.chunks_exact(dim) {
                    acc.push(eval(zk, &mut y)?);
                }
                Ok(acc)
            })?;
            let total = stats.into_iter().fold(Welford::default(), Welford::merge);
            Ok(Estimate {
                value: total.mean,
                std_error: Some(total.std_error()),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.n == 0.0 {
            return other;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Self {
            n,
            mean: self.mean + d * other.n / n,
            m2: self.m2 + other.m2 + d * d * self.n * other.n / n,
        }
    }

    fn std_error(&self) -> f64 {
        sqrt(self.m2 / (self.n - 1.0) / self.n)
    }
}

/// `|∫ f dμ_{tA} − ∫ f(√t·y) dμ_A|` with the same backend and seed on both sides.
pub fn scale_identity_residual<F>(
    f: F,
    t: f64,
    a: &TraceClassOperator,
    quad: &QuadratureSpec,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::invalid("t", "must be finite and positive"));
    }
    let scaled = GaussianSpec::centered(a.clone(), t)?;
    let unit = GaussianSpec::centered(a.clone(), 1.0)?;
    let root_t = sqrt(t);
    let lhs = integrate(&f, &scaled, quad)?;
    let rhs = integrate(
        |y: &[f64]| {
            let mut z = [0.0; 16];
            if y.len() <= z.len() {
                for (zi, yi) in z.iter_mut().zip(y) {
                    *zi = root_t * yi;
                }
                f(&z[..y.len()])
            } else {
                let z: Vec<f64> = y.iter().map(|v| root_t * v).collect();
                f(&z)
            }
        },
        &unit,
        quad,
    )?;
    Ok(crate::math::abs(lhs - rhs))
}
