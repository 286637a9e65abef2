//! Empirical continuity probe.
//!
//! No modulus of continuity is available, so the probe asserts only the
//! limit behaviour: the largest observed change of each atom must not grow
//! as the perturbation radius shrinks, and at the smallest radius it must
//! fall under a configurable smoke ceiling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{PidError, Result};
use crate::io::fingerprint;
use crate::pid::decompose;
use crate::prob::JointDist3;
use crate::sampling::{l1_distance, perturb, substream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Strictly decreasing, positive L1 radii.
    pub deltas: Vec<f64>,
    pub trials_per_delta: usize,
    pub seed: u64,
    /// Bound on every maximum at the smallest radius, in bits.
    pub ceiling: f64,
    /// Absolute slack on the non-increasing comparison, for rounding-level values.
    pub noise_floor: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            deltas: vec![1e-2, 1e-4, 1e-6],
            trials_per_delta: 50,
            seed: 0,
            ceiling: 1e-3,
            noise_floor: 1e-12,
        }
    }
}

impl ProbeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.deltas.is_empty() {
            return Err(PidError::InvalidParameter(
                "at least one radius is required".into(),
            ));
        }
        if let Some(bad) = self.deltas.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(PidError::InvalidParameter(format!(
                "radius {bad} is not positive"
            )));
        }
        if self.deltas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(PidError::InvalidParameter(
                "radii must be strictly decreasing".into(),
            ));
        }
        if self.trials_per_delta == 0 {
            return Err(PidError::InvalidParameter(
                "trials per radius must be at least 1".into(),
            ));
        }
        if self.ceiling.is_nan() || self.ceiling < 0.0 {
            return Err(PidError::InvalidParameter(format!(
                "ceiling {} is negative",
                self.ceiling
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeLevel {
    pub delta: f64,
    pub trials: usize,
    pub max_l1_distance: f64,
    pub max_delta_red: f64,
    pub max_delta_un_x: f64,
    pub max_delta_syn: f64,
}

impl ProbeLevel {
    fn maxima(&self) -> [f64; 3] {
        [self.max_delta_red, self.max_delta_un_x, self.max_delta_syn]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityProbe {
    pub base_fingerprint: String,
    pub levels: Vec<ProbeLevel>,
    pub ceiling: f64,
    /// Every maximum is non-increasing from one radius to the next.
    pub non_increasing: bool,
    /// Every maximum at the smallest radius is at most `ceiling`.
    pub within_ceiling: bool,
    pub pass: bool,
}

impl ContinuityProbe {
    pub fn render_table(&self) -> String {
        let mut out = format!(
            "{:>10}  {:>7}  {:>12}  {:>24}  {:>24}  {:>24}\n",
            "delta", "trials", "max L1", "max |dRed|", "max |dUn_x|", "max |dSyn|"
        );
        for l in &self.levels {
            out.push_str(&format!(
                "{:>10.1e}  {:>7}  {:>12.4e}  {:>24.16e}  {:>24.16e}  {:>24.16e}\n",
                l.delta,
                l.trials,
                l.max_l1_distance,
                l.max_delta_red,
                l.max_delta_un_x,
                l.max_delta_syn
            ));
        }
        out.push_str(&format!(
            "non-increasing: {}  within ceiling {:e}: {}  verdict: {}\nbase fingerprint: {}\n",
            self.non_increasing,
            self.ceiling,
            self.within_ceiling,
            if self.pass { "PASS" } else { "FAIL" },
            self.base_fingerprint
        ));
        out
    }
}

pub fn probe_continuity(d: &JointDist3, config: &ProbeConfig) -> Result<ContinuityProbe> {
    config.validate()?;
    let base = decompose(d);
    let trials = config.trials_per_delta;
    let levels: Vec<ProbeLevel> = config
        .deltas
        .iter()
        .enumerate()
        .map(|(level, &delta)| {
            let samples: Vec<[f64; 4]> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = substream(config.seed, (level * trials + t) as u64);
                    let q = perturb(&mut rng, d, delta);
                    let r = decompose(&q);
                    [
                        l1_distance(q.probs(), d.probs()),
                        (r.red - base.red).abs(),
                        (r.un_x_z_given_y - base.un_x_z_given_y).abs(),
                        (r.syn - base.syn).abs(),
                    ]
                })
                .collect();
            let max_of = |k: usize| samples.iter().map(|s| s[k]).fold(0.0, f64::max);
            ProbeLevel {
                delta,
                trials,
                max_l1_distance: max_of(0),
                max_delta_red: max_of(1),
                max_delta_un_x: max_of(2),
                max_delta_syn: max_of(3),
            }
        })
        .collect();

    let non_increasing = levels.windows(2).all(|w| {
        let (prev, next) = (w[0].maxima(), w[1].maxima());
        prev.iter()
            .zip(next)
            .all(|(p, n)| n <= p + config.noise_floor)
    });
    let within_ceiling = levels
        .last()
        .is_some_and(|l| l.maxima().iter().all(|&m| m <= config.ceiling));
    Ok(ContinuityProbe {
        base_fingerprint: fingerprint(d),
        levels,
        ceiling: config.ceiling,
        non_increasing,
        within_ceiling,
        pass: non_increasing && within_ceiling,
    })
}
