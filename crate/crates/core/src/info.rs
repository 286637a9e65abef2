//! Shannon measures on finite distributions.
//!
//! Terms with zero probability are skipped, never evaluated as `log(0)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::PidError;
use crate::prob::{Dist1, JointDist2, JointDist3, Var};
use crate::sum::CompensatedSum;

/// Logarithm base for every measure. Bits by default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "e")]
    E,
    #[serde(rename = "10")]
    Ten,
}

impl LogBase {
    #[inline]
    pub fn log(self, v: f64) -> f64 {
        match self {
            LogBase::Two => v.log2(),
            LogBase::E => v.ln(),
            LogBase::Ten => v.log10(),
        }
    }

    /// Natural log of the base, i.e. nats per unit.
    pub fn ln_base(self) -> f64 {
        match self {
            LogBase::Two => std::f64::consts::LN_2,
            LogBase::E => 1.0,
            LogBase::Ten => std::f64::consts::LN_10,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::Two => "bits",
            LogBase::E => "nats",
            LogBase::Ten => "dits",
        }
    }
}

impl FromStr for LogBase {
    type Err = PidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "2" | "bits" => Ok(LogBase::Two),
            "e" | "nats" => Ok(LogBase::E),
            "10" | "dits" => Ok(LogBase::Ten),
            other => Err(PidError::InvalidParameter(format!(
                "unknown log base {other:?}, expected 2, e or 10"
            ))),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
            LogBase::Ten => "10",
        })
    }
}

/// Anything exposing a flat probability vector.
pub trait Distribution {
    fn probs(&self) -> &[f64];
}

impl Distribution for Dist1 {
    fn probs(&self) -> &[f64] {
        Dist1::probs(self)
    }
}

impl Distribution for JointDist2 {
    fn probs(&self) -> &[f64] {
        JointDist2::probs(self)
    }
}

impl Distribution for JointDist3 {
    fn probs(&self) -> &[f64] {
        JointDist3::probs(self)
    }
}

/// `-Σ p log p` over a probability vector.
pub fn entropy_of(p: &[f64], base: LogBase) -> f64 {
    let mut acc = CompensatedSum::new();
    for &v in p {
        if v > 0.0 {
            acc.add(-v * base.log(v));
        }
    }
    acc.value()
}

/// Joint entropy of all variables of `d`.
pub fn entropy<D: Distribution + ?Sized>(d: &D, base: LogBase) -> f64 {
    entropy_of(d.probs(), base)
}

/// `H(row | col)` for a row-major `rows x cols` table.
fn table_conditional_entropy(t: &[f64], rows: usize, cols: usize, base: LogBase) -> f64 {
    let col_mass = column_sums(t, rows, cols);
    let mut acc = CompensatedSum::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = t[r * cols + c];
            if v > 0.0 {
                acc.add(v * base.log(col_mass[c] / v));
            }
        }
    }
    acc.value()
}

/// `I(row; col)` for a row-major `rows x cols` table.
fn table_mutual_information(t: &[f64], rows: usize, cols: usize, base: LogBase) -> f64 {
    let col_mass = column_sums(t, rows, cols);
    let row_mass: Vec<f64> = (0..rows)
        .map(|r| {
            let mut s = CompensatedSum::new();
            s.extend(t[r * cols..(r + 1) * cols].iter().copied());
            s.value()
        })
        .collect();
    let mut acc = CompensatedSum::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = t[r * cols + c];
            if v > 0.0 {
                acc.add(v * base.log(v / (row_mass[r] * col_mass[c])));
            }
        }
    }
    acc.value()
}

fn column_sums(t: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut acc = vec![CompensatedSum::new(); cols];
    for r in 0..rows {
        for c in 0..cols {
            acc[c].add(t[r * cols + c]);
        }
    }
    acc.iter().map(CompensatedSum::value).collect()
}

fn dims(d: &JointDist3, vars: &[Var]) -> usize {
    vars.iter().map(|&v| d.alphabet(v).len()).product()
}

/// `H(target | given)`; an empty `given` yields `H(target)`.
pub fn conditional_entropy(d: &JointDist3, target: Var, given: &[Var], base: LogBase) -> f64 {
    let mut given: Vec<Var> = given.to_vec();
    given.sort();
    given.dedup();
    if given.contains(&target) {
        return 0.0;
    }
    let mut keep = vec![target];
    keep.extend(&given);
    let table = d.project(&keep);
    table_conditional_entropy(&table, d.alphabet(target).len(), dims(d, &given), base)
}

/// `H(first | second)` of a two-variable joint.
pub fn conditional_entropy_pair(d: &JointDist2, base: LogBase) -> f64 {
    let [r, c] = d.shape();
    table_conditional_entropy(d.probs(), r, c, base)
}

/// `I(first; second)` of a two-variable joint.
pub fn mutual_information(d: &JointDist2, base: LogBase) -> f64 {
    let [r, c] = d.shape();
    table_mutual_information(d.probs(), r, c, base)
}

/// `I(a; b)` from the pair marginal of a three-variable system.
pub fn mutual_information_vars(d: &JointDist3, a: Var, b: Var, base: LogBase) -> f64 {
    if a == b {
        return conditional_entropy(d, a, &[], base);
    }
    let table = d.project(&[a, b]);
    table_mutual_information(&table, d.alphabet(a).len(), d.alphabet(b).len(), base)
}

/// `I(a; b | given) = Σ_g Pr(g) I(a; b | G = g)`.
pub fn conditional_mutual_information(
    d: &JointDist3,
    a: Var,
    b: Var,
    given: Var,
    base: LogBase,
) -> f64 {
    if a == given || b == given {
        return 0.0;
    }
    if a == b {
        return conditional_entropy(d, a, &[given], base);
    }
    let (na, nb, ng) = (
        d.alphabet(a).len(),
        d.alphabet(b).len(),
        d.alphabet(given).len(),
    );
    let t = d.project(&[given, a, b]);
    let block = na * nb;
    let mut acc = CompensatedSum::new();
    for g in 0..ng {
        let slice = &t[g * block..(g + 1) * block];
        // Pr(g) * I(a;b|g) = Σ p(a,b,g) log(p(a,b,g) p(g) / (p(a,g) p(b,g)))
        let pg = {
            let mut s = CompensatedSum::new();
            s.extend(slice.iter().copied());
            s.value()
        };
        if pg <= 0.0 {
            continue;
        }
        let pa: Vec<f64> = (0..na)
            .map(|i| {
                let mut s = CompensatedSum::new();
                s.extend(slice[i * nb..(i + 1) * nb].iter().copied());
                s.value()
            })
            .collect();
        let pb = column_sums(slice, na, nb);
        for i in 0..na {
            for j in 0..nb {
                let v = slice[i * nb + j];
                if v > 0.0 {
                    acc.add(v * base.log(v * pg / (pa[i] * pb[j])));
                }
            }
        }
    }
    acc.value()
}

/// `I(X, Y; Z)`.
pub fn joint_mutual_information(d: &JointDist3, base: LogBase) -> f64 {
    let [nx, ny, nz] = d.shape();
    table_mutual_information(d.probs(), nx * ny, nz, base)
}
