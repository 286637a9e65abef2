//! Canonical two-input gate systems.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{PidError, Result};
use crate::prob::{Alphabet, Dist1, JointDist3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Xor,
    And,
    Or,
    /// `Z = (X, Y)` over the product alphabet.
    Copy,
    /// `X = Y = Z`; the Y bias is ignored.
    Rdn,
    /// `Z = X`, Y an independent bit.
    Unq,
    /// `Z = X + Y` over `{0, 1, 2}`.
    Sum,
}

impl GateKind {
    pub const ALL: [GateKind; 7] = [
        GateKind::Xor,
        GateKind::And,
        GateKind::Or,
        GateKind::Copy,
        GateKind::Rdn,
        GateKind::Unq,
        GateKind::Sum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Xor => "xor",
            GateKind::And => "and",
            GateKind::Or => "or",
            GateKind::Copy => "copy",
            GateKind::Rdn => "rdn",
            GateKind::Unq => "unq",
            GateKind::Sum => "sum",
        }
    }

    fn z_alphabet(self) -> Alphabet {
        match self {
            GateKind::Copy => Alphabet::product(&Alphabet::binary(), &Alphabet::binary()),
            GateKind::Sum => Alphabet::range(3).expect("three labels"),
            _ => Alphabet::binary(),
        }
    }

    fn output(self, x: usize, y: usize) -> usize {
        match self {
            GateKind::Xor => x ^ y,
            GateKind::And => x & y,
            GateKind::Or => x | y,
            GateKind::Copy => 2 * x + y,
            GateKind::Rdn | GateKind::Unq => x,
            GateKind::Sum => x + y,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = PidError;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| PidError::InvalidParameter(format!("unknown gate {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    pub kind: GateKind,
    /// Pr(X = 1).
    pub bias_x: f64,
    /// Pr(Y = 1).
    pub bias_y: f64,
    /// Probability of flipping a binary output.
    pub noise: f64,
}

impl GateSpec {
    pub fn new(kind: GateKind) -> Self {
        Self {
            kind,
            bias_x: 0.5,
            bias_y: 0.5,
            noise: 0.0,
        }
    }

    pub fn with_bias(mut self, bias_x: f64, bias_y: f64) -> Self {
        self.bias_x = bias_x;
        self.bias_y = bias_y;
        self
    }

    pub fn with_noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }
}

pub fn make_gate(spec: GateSpec) -> Result<JointDist3> {
    let dx = Dist1::bernoulli(spec.bias_x)?;
    let dy = Dist1::bernoulli(spec.bias_y)?;
    if !(0.0..=0.5).contains(&spec.noise) {
        return Err(PidError::InvalidParameter(format!(
            "noise {} outside [0, 0.5]",
            spec.noise
        )));
    }
    let az = spec.kind.z_alphabet();
    let nz = az.len();
    if spec.noise > 0.0 && nz != 2 {
        return Err(PidError::NoiseUnsupported { z_size: nz });
    }
    let mut p = vec![0.0; 2 * 2 * nz];
    for x in 0..2 {
        for y in 0..2 {
            let input = match spec.kind {
                GateKind::Rdn => {
                    if x == y {
                        dx.prob(x)
                    } else {
                        0.0
                    }
                }
                _ => dx.prob(x) * dy.prob(y),
            };
            let z = spec.kind.output(x, y);
            let cell = (x * 2 + y) * nz;
            if spec.noise > 0.0 {
                p[cell + z] += input * (1.0 - spec.noise);
                p[cell + (1 - z)] += input * spec.noise;
            } else {
                p[cell + z] += input;
            }
        }
    }
    JointDist3::new(Alphabet::binary(), Alphabet::binary(), az, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Var;

    #[test]
    fn xor_truth_table() {
        let d = make_gate(GateSpec::new(GateKind::Xor)).unwrap();
        assert_eq!(d.probs(), &[0.25, 0.0, 0.0, 0.25, 0.0, 0.25, 0.25, 0.0]);
    }

    #[test]
    fn copy_truth_table() {
        let d = make_gate(GateSpec::new(GateKind::Copy)).unwrap();
        let support = d.support();
        assert_eq!(support.len(), 4);
        for ([x, y, z], p) in support {
            assert_eq!(z, format!("({x},{y})"));
            assert_eq!(p, 0.25);
        }
    }

    #[test]
    fn sum_marginal() {
        let d = make_gate(GateSpec::new(GateKind::Sum)).unwrap();
        assert_eq!(d.marginal1(Var::Z).probs(), &[0.25, 0.5, 0.25]);
    }

    #[test]
    fn rdn_ignores_y_bias() {
        let d = make_gate(GateSpec::new(GateKind::Rdn).with_bias(0.3, 0.9)).unwrap();
        assert!((d.prob(1, 1, 1) - 0.3).abs() < 1e-15);
        assert_eq!(d.prob(0, 1, 0), 0.0);
    }

    #[test]
    fn biased_copy() {
        let d = make_gate(GateSpec::new(GateKind::Copy).with_bias(0.3, 0.5)).unwrap();
        assert!((d.marginal1(Var::X).prob(1) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn noisy_and_flips_output() {
        let d = make_gate(GateSpec::new(GateKind::And).with_noise(0.1)).unwrap();
        assert!((d.prob(1, 1, 0) - 0.025).abs() < 1e-15);
        assert!((d.prob(1, 1, 1) - 0.225).abs() < 1e-15);
    }

    #[test]
    fn noise_rejected_for_wide_outputs() {
        for kind in [GateKind::Copy, GateKind::Sum] {
            let err = make_gate(GateSpec::new(kind).with_noise(0.1)).unwrap_err();
            assert_eq!(err.name(), "NoiseUnsupported");
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(make_gate(GateSpec::new(GateKind::Xor).with_bias(1.2, 0.5)).is_err());
        assert!(make_gate(GateSpec::new(GateKind::Xor).with_noise(0.6)).is_err());
        assert_eq!("XOR".parse::<GateKind>().unwrap(), GateKind::Xor);
        assert!("nand".parse::<GateKind>().is_err());
    }
}
