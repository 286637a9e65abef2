use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_axioms, AxiomReport, Tolerances};
use crate::error::{PidError, Result};
use crate::prob::JointDist3;
use crate::sampling::{boundary_joint, random_joint, substream, BoundaryKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryConfig {
    pub count: usize,
    pub shape: [usize; 3],
    pub seed: u64,
    /// Fraction of the corpus drawn as boundary samples; they occupy the tail.
    pub boundary_fraction: f64,
    /// Restricts boundary samples to one kind; `None` draws a kind per sample.
    #[serde(default)]
    pub boundary_kind: Option<BoundaryKind>,
}

impl BatteryConfig {
    pub fn new(count: usize, shape: [usize; 3], seed: u64) -> Self {
        Self {
            count,
            shape,
            seed,
            boundary_fraction: 0.0,
            boundary_kind: None,
        }
    }

    pub fn with_boundary(mut self, fraction: f64, kind: Option<BoundaryKind>) -> Self {
        self.boundary_fraction = fraction;
        self.boundary_kind = kind;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(PidError::InvalidParameter(
                "battery count must be at least 1".into(),
            ));
        }
        if self.shape.contains(&0) {
            return Err(PidError::InvalidParameter(format!(
                "shape {:?} has an empty axis",
                self.shape
            )));
        }
        if !(0.0..=1.0).contains(&self.boundary_fraction) {
            return Err(PidError::InvalidParameter(format!(
                "boundary fraction {} outside [0, 1]",
                self.boundary_fraction
            )));
        }
        Ok(())
    }

    pub fn boundary_count(&self) -> usize {
        ((self.count as f64 * self.boundary_fraction).round() as usize).min(self.count)
    }
}

/// The `index`-th system of the corpus; depends only on `(seed, index)`.
pub fn battery_sample(config: &BatteryConfig, index: usize) -> JointDist3 {
    let mut rng = substream(config.seed, index as u64);
    if index >= config.count - config.boundary_count() {
        let kind = config.boundary_kind.unwrap_or_else(|| {
            use rand::Rng;
            BoundaryKind::ALL[rng.random_range(0..BoundaryKind::ALL.len())]
        });
        boundary_joint(&mut rng, config.shape, kind)
    } else {
        random_joint(&mut rng, config.shape)
    }
}

pub fn battery_corpus(config: &BatteryConfig) -> Result<Vec<JointDist3>> {
    config.validate()?;
    Ok((0..config.count)
        .into_par_iter()
        .map(|i| battery_sample(config, i))
        .collect())
}

/// Runs [`run_axioms`] over the corpus and folds the reports in index order.
pub fn run_battery(config: &BatteryConfig, tol: &Tolerances) -> Result<AxiomReport> {
    config.validate()?;
    let reports: Vec<AxiomReport> = (0..config.count)
        .into_par_iter()
        .map(|i| run_axioms(&battery_sample(config, i), tol))
        .collect();
    Ok(AxiomReport::aggregate(&reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Var;

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = BatteryConfig::new(20, [2, 3, 2], 99).with_boundary(0.25, None);
        let a = run_battery(&cfg, &Tolerances::default()).unwrap();
        let b = run_battery(&cfg, &Tolerances::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.all_passed(), "{}", a.render_table());
        assert_eq!(a.summary.distributions, 20);
    }

    #[test]
    fn seeds_differ() {
        let a = run_battery(&BatteryConfig::new(3, [2, 2, 2], 1), &Tolerances::default()).unwrap();
        let b = run_battery(&BatteryConfig::new(3, [2, 2, 2], 2), &Tolerances::default()).unwrap();
        assert_ne!(a.fingerprint, b.fingerprint);
    }

    #[test]
    fn single_trial() {
        let r = run_battery(&BatteryConfig::new(1, [2, 2, 2], 7), &Tolerances::default()).unwrap();
        assert_eq!(r.summary.distributions, 1);
        assert!(r.all_passed());
    }

    #[test]
    fn single_z_boundary_battery() {
        let cfg =
            BatteryConfig::new(30, [3, 3, 3], 5).with_boundary(1.0, Some(BoundaryKind::SingleZ));
        for d in battery_corpus(&cfg).unwrap() {
            assert_eq!(
                d.marginal1(Var::Z)
                    .probs()
                    .iter()
                    .filter(|&&v| v > 0.0)
                    .count(),
                1
            );
        }
        let r = run_battery(&cfg, &Tolerances::default()).unwrap();
        assert!(r.all_passed(), "{}", r.render_table());
    }

    #[test]
    fn rejects_bad_config() {
        assert!(run_battery(&BatteryConfig::new(0, [2, 2, 2], 1), &Tolerances::default()).is_err());
        assert!(run_battery(&BatteryConfig::new(1, [2, 0, 2], 1), &Tolerances::default()).is_err());
        let cfg = BatteryConfig::new(1, [2, 2, 2], 1).with_boundary(1.5, None);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn boundary_count_rounds() {
        let cfg = BatteryConfig::new(600, [2, 2, 2], 0).with_boundary(1.0 / 6.0, None);
        assert_eq!(cfg.boundary_count(), 100);
    }
}
