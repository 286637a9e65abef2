//! Seeded generators for random systems.
//!
//! Every generated distribution draws from its own ChaCha stream keyed by
//! `(seed, index)`, so batches are reproducible regardless of evaluation order.

use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::prob::{Alphabet, JointDist3};
use crate::sum::ksum;

/// Mass assigned to a slice that should be near, but not exactly at, zero.
pub const NEAR_ZERO_MASS: f64 = 1e-12;

pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform draw from the probability simplex of dimension `n` (symmetric Dirichlet(1)).
pub fn dirichlet_uniform<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let e: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
        let total = ksum(e.iter().copied());
        if total > 0.0 {
            return e.into_iter().map(|v| v / total).collect();
        }
    }
}

fn range_alphabets(shape: [usize; 3]) -> (Alphabet, Alphabet, Alphabet) {
    let a = |n| Alphabet::range(n).expect("nonzero alphabet size");
    (a(shape[0]), a(shape[1]), a(shape[2]))
}

fn build(shape: [usize; 3], p: Vec<f64>) -> JointDist3 {
    let (ax, ay, az) = range_alphabets(shape);
    JointDist3::new(ax, ay, az, p).expect("generated tensor is a distribution")
}

/// Dirichlet(1) system over alphabets `"0".."n-1"`.
pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, shape: [usize; 3]) -> JointDist3 {
    build(shape, dirichlet_uniform(rng, shape.iter().product()))
}

/// Families of boundary samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    /// Dirichlet over a random subset of cells.
    SparseCells,
    /// Some z outcomes have probability exactly zero.
    RestrictedZ,
    /// Z is constant.
    SingleZ,
    /// One z outcome carries only [`NEAR_ZERO_MASS`].
    NearZeroZ,
    /// One y outcome carries only [`NEAR_ZERO_MASS`].
    NearZeroY,
}

impl BoundaryKind {
    pub const ALL: [BoundaryKind; 5] = [
        BoundaryKind::SparseCells,
        BoundaryKind::RestrictedZ,
        BoundaryKind::SingleZ,
        BoundaryKind::NearZeroZ,
        BoundaryKind::NearZeroY,
    ];
}

fn dirichlet_on_cells<R: Rng + ?Sized>(rng: &mut R, n: usize, cells: &[usize]) -> Vec<f64> {
    let w = dirichlet_uniform(rng, cells.len());
    let mut p = vec![0.0; n];
    for (&c, v) in cells.iter().zip(w) {
        p[c] = v;
    }
    p
}

/// Sparse-support or near-degenerate system of the requested kind.
pub fn boundary_joint<R: Rng + ?Sized>(
    rng: &mut R,
    shape: [usize; 3],
    kind: BoundaryKind,
) -> JointDist3 {
    let [nx, ny, nz] = shape;
    let n = nx * ny * nz;
    let z_of = |cell: usize| cell % nz;
    let y_of = |cell: usize| (cell / nz) % ny;
    let p = match kind {
        BoundaryKind::SparseCells => {
            let k = rng.random_range(1..=n);
            let mut cells = sample_indices(rng, n, k).into_vec();
            cells.sort_unstable();
            dirichlet_on_cells(rng, n, &cells)
        }
        BoundaryKind::RestrictedZ => {
            let keep = if nz > 1 { rng.random_range(1..nz) } else { 1 };
            let zs = sample_indices(rng, nz, keep).into_vec();
            let cells: Vec<usize> = (0..n).filter(|&c| zs.contains(&z_of(c))).collect();
            dirichlet_on_cells(rng, n, &cells)
        }
        BoundaryKind::SingleZ => {
            let z = rng.random_range(0..nz);
            let cells: Vec<usize> = (0..n).filter(|&c| z_of(c) == z).collect();
            dirichlet_on_cells(rng, n, &cells)
        }
        BoundaryKind::NearZeroZ | BoundaryKind::NearZeroY => {
            let mut p = dirichlet_uniform(rng, n);
            let (axis_len, axis_of): (usize, &dyn Fn(usize) -> usize) = match kind {
                BoundaryKind::NearZeroZ => (nz, &z_of),
                _ => (ny, &y_of),
            };
            if axis_len > 1 {
                let target = rng.random_range(0..axis_len);
                let slice_mass = ksum((0..n).filter(|&c| axis_of(c) == target).map(|c| p[c]));
                if slice_mass > 0.0 {
                    let factor = NEAR_ZERO_MASS / slice_mass;
                    for (c, v) in p.iter_mut().enumerate() {
                        if axis_of(c) == target {
                            *v *= factor;
                        }
                    }
                }
                let total = ksum(p.iter().copied());
                p.iter_mut().for_each(|v| *v /= total);
            }
            p
        }
    };
    build(shape, p)
}

/// `Z = f(X, Y)` for a uniformly random map `f` and a Dirichlet(1) input joint.
pub fn closed_system<R: Rng + ?Sized>(rng: &mut R, shape: [usize; 3]) -> JointDist3 {
    let [nx, ny, nz] = shape;
    let inputs = dirichlet_uniform(rng, nx * ny);
    let mut p = vec![0.0; nx * ny * nz];
    for (xy, &w) in inputs.iter().enumerate() {
        let z = rng.random_range(0..nz);
        p[xy * nz + z] = w;
    }
    build(shape, p)
}

/// Random point at L1 distance at most `delta` from `d`, still on the simplex.
///
/// Adds a zero-sum Gaussian direction scaled to L1 norm `delta`, clips at zero
/// and renormalizes; draws that land farther than `delta` are rejected. After
/// repeated rejections the point is moved toward the uniform distribution
/// instead, which always stays within `delta`.
pub fn perturb<R: Rng + ?Sized>(rng: &mut R, d: &JointDist3, delta: f64) -> JointDist3 {
    const ATTEMPTS: usize = 64;
    let p = d.probs();
    let n = p.len();
    let ax = d.alphabet(crate::prob::Var::X).clone();
    let ay = d.alphabet(crate::prob::Var::Y).clone();
    let az = d.alphabet(crate::prob::Var::Z).clone();
    if delta <= 0.0 || n == 1 {
        return d.clone();
    }
    for _ in 0..ATTEMPTS {
        let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let mean = ksum(g.iter().copied()) / n as f64;
        let centered: Vec<f64> = g.iter().map(|v| v - mean).collect();
        let norm = ksum(centered.iter().map(|v| v.abs()));
        if norm <= 0.0 {
            continue;
        }
        let mut q: Vec<f64> = p
            .iter()
            .zip(&centered)
            .map(|(a, b)| (a + b * delta / norm).max(0.0))
            .collect();
        let total = ksum(q.iter().copied());
        if total <= 0.0 {
            continue;
        }
        q.iter_mut().for_each(|v| *v /= total);
        if l1_distance(&q, p) <= delta {
            return JointDist3::new(ax, ay, az, q).expect("perturbed tensor is a distribution");
        }
    }
    let u = 1.0 / n as f64;
    let span = ksum(p.iter().map(|v| (u - v).abs()));
    let t = if span > 0.0 {
        (delta / span).min(1.0)
    } else {
        0.0
    };
    let q = p.iter().map(|v| (1.0 - t) * v + t * u).collect();
    JointDist3::new(ax, ay, az, q).expect("mixture is a distribution")
}

pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    ksum(a.iter().zip(b).map(|(x, y)| (x - y).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Var;

    #[test]
    fn dirichlet_is_on_simplex() {
        let mut rng = substream(3, 0);
        for n in [1, 2, 8, 64] {
            let p = dirichlet_uniform(&mut rng, n);
            assert_eq!(p.len(), n);
            assert!(p.iter().all(|&v| v >= 0.0));
            assert!((ksum(p) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let a = random_joint(&mut substream(9, 4), [2, 3, 2]);
        let b = random_joint(&mut substream(9, 4), [2, 3, 2]);
        let c = random_joint(&mut substream(9, 5), [2, 3, 2]);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn single_z_has_constant_target() {
        let mut rng = substream(1, 1);
        for _ in 0..20 {
            let d = boundary_joint(&mut rng, [3, 3, 3], BoundaryKind::SingleZ);
            let pz = d.marginal1(Var::Z);
            assert_eq!(pz.probs().iter().filter(|&&v| v > 0.0).count(), 1);
        }
    }

    #[test]
    fn restricted_z_leaves_a_zero_outcome() {
        let mut rng = substream(1, 2);
        for _ in 0..20 {
            let d = boundary_joint(&mut rng, [2, 2, 4], BoundaryKind::RestrictedZ);
            assert!(d.marginal1(Var::Z).probs().iter().any(|&v| v == 0.0));
        }
    }

    #[test]
    fn near_zero_slice() {
        let mut rng = substream(1, 3);
        let d = boundary_joint(&mut rng, [2, 2, 3], BoundaryKind::NearZeroZ);
        let min = d
            .marginal1(Var::Z)
            .probs()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert!(min > 0.0 && min < 1e-11);
    }

    #[test]
    fn closed_system_is_deterministic_in_z() {
        let mut rng = substream(5, 0);
        let d = closed_system(&mut rng, [3, 4, 16]);
        let [nx, ny, nz] = d.shape();
        for x in 0..nx {
            for y in 0..ny {
                assert!((0..nz).filter(|&z| d.prob(x, y, z) > 0.0).count() <= 1);
            }
        }
    }

    #[test]
    fn perturbation_stays_within_radius() {
        let mut rng = substream(11, 0);
        let base = random_joint(&mut rng, [3, 3, 3]);
        for delta in [1e-1, 1e-3, 1e-6] {
            for _ in 0..20 {
                let q = perturb(&mut rng, &base, delta);
                assert!(l1_distance(q.probs(), base.probs()) <= delta * (1.0 + 1e-9));
            }
        }
        assert_eq!(perturb(&mut rng, &base, 0.0), base);
    }
}
