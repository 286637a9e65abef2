//! The marginal-resetting do-operation and the constructions built on it.
//!
//! `do(D_XYZ | D_C)` rescales every Z-slice of the joint so the Z marginal
//! becomes `D_C` while each `Pr(x, y | z)` is kept:
//!
//! ```text
//! Pr(A,B,C = x,y,z) = 0                               if Pr(Z=z) = 0
//!                   = Pr(X,Y,Z = x,y,z) Pr(C=z) / Pr(Z=z)   otherwise
//! ```
//!
//! The target only needs `supp(D_C) ⊆ supp(D_Z)`; equality of supports is
//! not required. Conditioning on a source value gives one member of a
//! [`ConditionedFamily`], and weighting the members' source marginals gives
//! the [`AggregatedSource`] joint.

use serde::Serialize;

use crate::error::{PidError, Result};
use crate::prob::{Alphabet, Dist1, JointDist2, JointDist3, Var};

/// One of the two source variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Source {
    X,
    Y,
}

impl Source {
    pub fn var(self) -> Var {
        match self {
            Source::X => Var::X,
            Source::Y => Var::Y,
        }
    }

    pub fn other(self) -> Source {
        match self {
            Source::X => Source::Y,
            Source::Y => Source::X,
        }
    }
}

/// Output of [`do_operation`]; same alphabets as the input system.
#[derive(Debug, Clone, PartialEq)]
pub struct DoResult {
    pub dist: JointDist3,
}

impl DoResult {
    /// Distribution of the rescaled source (`A` for X, `B` for Y).
    pub fn source_marginal(&self, source: Source) -> Dist1 {
        self.dist.marginal1(source.var())
    }

    /// Distribution of `C`, the rescaled target.
    pub fn target_marginal(&self) -> Dist1 {
        self.dist.marginal1(Var::Z)
    }

    /// Joint of (source, C).
    pub fn source_target_pair(&self, source: Source) -> JointDist2 {
        self.dist
            .marginal2(source.var(), Var::Z)
            .expect("distinct variables")
    }
}

pub fn do_operation(d: &JointDist3, target_marginal: &Dist1) -> Result<DoResult> {
    let az = d.alphabet(Var::Z);
    if target_marginal.alphabet() != az {
        return Err(PidError::ShapeMismatch {
            expected: format!("target over Z alphabet {:?}", az.labels()),
            found: format!("{:?}", target_marginal.alphabet().labels()),
        });
    }
    let pz = d.marginal1(Var::Z);
    let mut scale = Vec::with_capacity(az.len());
    for (zi, (&p_target, &p_z)) in target_marginal.probs().iter().zip(pz.probs()).enumerate() {
        if p_z > 0.0 {
            scale.push(p_target / p_z);
        } else if p_target > 0.0 {
            return Err(PidError::SupportMismatch {
                label: az.label(zi).to_string(),
                mass: p_target,
            });
        } else {
            scale.push(0.0);
        }
    }
    let nz = az.len();
    let p = d
        .probs()
        .iter()
        .enumerate()
        .map(|(i, &v)| v * scale[i % nz])
        .collect();
    Ok(DoResult {
        dist: JointDist3::from_parts(
            d.alphabet(Var::X).clone(),
            d.alphabet(Var::Y).clone(),
            az.clone(),
            p,
        ),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    /// Index of the condition value in its alphabet.
    pub index: usize,
    pub label: String,
    /// Pr(condition = label), always positive.
    pub weight: f64,
    pub result: DoResult,
}

/// `{do(D_XYZ | D_{Z | S=s})}` over every value `s` of the conditioned source
/// with positive probability.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedFamily {
    /// The source whose values index the members.
    pub conditioned: Source,
    pub members: Vec<FamilyMember>,
    x_alphabet: Alphabet,
    y_alphabet: Alphabet,
}

impl ConditionedFamily {
    /// The source whose unique information this family measures.
    pub fn measured(&self) -> Source {
        self.conditioned.other()
    }

    pub fn alphabet(&self, source: Source) -> &Alphabet {
        match source {
            Source::X => &self.x_alphabet,
            Source::Y => &self.y_alphabet,
        }
    }

    pub fn total_weight(&self) -> f64 {
        crate::sum::ksum(self.members.iter().map(|m| m.weight))
    }
}

pub fn conditioned_family(d: &JointDist3, conditioned: Source) -> ConditionedFamily {
    let cond = conditioned.var();
    let weights = d.marginal1(cond);
    let alphabet = d.alphabet(cond);
    let members = weights
        .probs()
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(index, &weight)| {
            let target = d
                .conditional_by_index(Var::Z, cond, index)
                .expect("condition has positive mass");
            let result =
                do_operation(d, &target).expect("conditional support lies within supp(D_Z)");
            FamilyMember {
                index,
                label: alphabet.label(index).to_string(),
                weight,
                result,
            }
        })
        .collect();
    ConditionedFamily {
        conditioned,
        members,
        x_alphabet: d.alphabet(Var::X).clone(),
        y_alphabet: d.alphabet(Var::Y).clone(),
    }
}

/// Joint over (X alphabet, Y alphabet) of the aggregated variable and the
/// conditioning source: `D_{A_{Z|Y}, Y}` when conditioned on Y, or
/// `D_{X, B_{Z|X}}` when conditioned on X.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedSource {
    pub conditioned: Source,
    pub joint: JointDist2,
}

impl AggregatedSource {
    /// Marginal of the aggregated variable.
    pub fn aggregated_marginal(&self) -> Dist1 {
        match self.conditioned {
            Source::Y => self.joint.first_marginal(),
            Source::X => self.joint.second_marginal(),
        }
    }

    /// Marginal of the conditioning source.
    pub fn condition_marginal(&self) -> Dist1 {
        match self.conditioned {
            Source::Y => self.joint.second_marginal(),
            Source::X => self.joint.first_marginal(),
        }
    }

    /// Distribution of the aggregated variable given the condition index.
    pub fn aggregated_given(&self, index: usize) -> Option<Dist1> {
        match self.conditioned {
            Source::Y => self.joint.first_given_second(index),
            Source::X => self.joint.second_given_first(index),
        }
    }
}

pub fn aggregate_source(f: &ConditionedFamily) -> AggregatedSource {
    let measured = f.measured();
    let ax = f.alphabet(Source::X);
    let ay = f.alphabet(Source::Y);
    let (nx, ny) = (ax.len(), ay.len());
    let mut p = vec![0.0; nx * ny];
    for m in &f.members {
        let marginal = m.result.source_marginal(measured);
        for (k, &q) in marginal.probs().iter().enumerate() {
            let (x, y) = match f.conditioned {
                Source::Y => (k, m.index),
                Source::X => (m.index, k),
            };
            p[x * ny + y] = m.weight * q;
        }
    }
    AggregatedSource {
        conditioned: f.conditioned,
        joint: JointDist2::from_parts(ax.clone(), ay.clone(), p),
    }
}
