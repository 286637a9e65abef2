//! Unique, redundant and synergistic information of a two-source system.
//!
//! Unique information of X about Z given Y averages, over the values of Y,
//! the mutual information between the source and target marginals of
//! `do(D_XYZ | D_{Z|Y=y})`. Redundancy and synergy then follow from
//! `Red = I(X;Z) - Un(X→Z|Y)` and `Syn = I(X;Z|Y) - Un(X→Z|Y)`.
//!
//! Each atom has a second, algebraically independent route (entropy form
//! for Un, aggregated-source form for Red, swapped source order for Red and
//! Syn). [`decompose`] computes both and exposes the residuals.

use serde::Serialize;

use crate::do_op::{aggregate_source, conditioned_family, ConditionedFamily, Source};
use crate::info::{
    conditional_entropy, conditional_mutual_information, entropy, joint_mutual_information,
    mutual_information, mutual_information_vars, LogBase,
};
use crate::prob::{JointDist3, Var};
use crate::sum::ksum;

/// Tolerance in bits on `H(Z|X,Y)` under which a system counts as closed.
pub const CLOSED_SYSTEM_TOL: f64 = 1e-9;

fn unique_from_family(f: &ConditionedFamily, base: LogBase) -> f64 {
    let source = f.measured();
    ksum(
        f.members
            .iter()
            .map(|m| m.weight * mutual_information(&m.result.source_target_pair(source), base)),
    )
}

/// `Σ_s Pr(s) H(source marginal of member s) - H(source | Z)`.
fn unique_alt_from_family(d: &JointDist3, f: &ConditionedFamily, base: LogBase) -> f64 {
    let source = f.measured();
    let averaged = ksum(
        f.members
            .iter()
            .map(|m| m.weight * entropy(&m.result.source_marginal(source), base)),
    );
    averaged - conditional_entropy(d, source.var(), &[Var::Z], base)
}

/// `Un(source → Z | other)`.
pub fn unique_information(d: &JointDist3, source: Source, base: LogBase) -> f64 {
    unique_from_family(&conditioned_family(d, source.other()), base)
}

/// Unique information through the entropy form; agrees with [`unique_information`].
pub fn unique_information_alt(d: &JointDist3, source: Source, base: LogBase) -> f64 {
    unique_alt_from_family(d, &conditioned_family(d, source.other()), base)
}

/// `Red(X,Y → Z) = I(X;Z) - Un(X → Z | Y)`.
pub fn redundant_information(d: &JointDist3, base: LogBase) -> f64 {
    mutual_information_vars(d, Var::X, Var::Z, base) - unique_information(d, Source::X, base)
}

/// `I(A_{Z|Y}; Y)` from the aggregated-source joint.
pub fn redundant_information_alt(d: &JointDist3, base: LogBase) -> f64 {
    mutual_information(
        &aggregate_source(&conditioned_family(d, Source::Y)).joint,
        base,
    )
}

/// `Syn(X,Y → Z) = I(X;Z|Y) - Un(X → Z | Y)`. Negative values are reported as is.
pub fn synergistic_information(d: &JointDist3, base: LogBase) -> f64 {
    conditional_mutual_information(d, Var::X, Var::Z, Var::Y, base)
        - unique_information(d, Source::X, base)
}

/// Differences between the primary and the independent computation routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PidResiduals {
    /// `|I(X,Y;Z) - (red + syn + un_x + un_y)|`
    pub atoms_sum: f64,
    pub red_alt: f64,
    pub red_swapped: f64,
    pub syn_swapped: f64,
    pub un_x_alt: f64,
    pub un_y_alt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PidResult {
    pub base: LogBase,
    pub un_x_z_given_y: f64,
    pub un_y_z_given_x: f64,
    pub red: f64,
    pub syn: f64,
    pub i_xz: f64,
    pub i_yz: f64,
    pub i_xyz: f64,
    pub i_xz_given_y: f64,
    pub i_yz_given_x: f64,
    pub h_z_given_xy: f64,
    pub h_z_given_y: f64,
    pub h_z_given_x: f64,
    pub red_alt: f64,
    pub red_swapped: f64,
    pub syn_swapped: f64,
    pub un_x_alt: f64,
    pub un_y_alt: f64,
    pub closed_system: bool,
    pub residuals: PidResiduals,
}

impl PidResult {
    /// `(Un_X, Un_Y, Red, Syn)`.
    pub fn atoms(&self) -> [f64; 4] {
        [self.un_x_z_given_y, self.un_y_z_given_x, self.red, self.syn]
    }
}

/// Full decomposition in bits.
pub fn decompose(d: &JointDist3) -> PidResult {
    decompose_with_base(d, LogBase::Two)
}

pub fn decompose_with_base(d: &JointDist3, base: LogBase) -> PidResult {
    let fam_y = conditioned_family(d, Source::Y);
    let fam_x = conditioned_family(d, Source::X);

    let un_x = unique_from_family(&fam_y, base);
    let un_y = unique_from_family(&fam_x, base);
    let un_x_alt = unique_alt_from_family(d, &fam_y, base);
    let un_y_alt = unique_alt_from_family(d, &fam_x, base);

    let i_xz = mutual_information_vars(d, Var::X, Var::Z, base);
    let i_yz = mutual_information_vars(d, Var::Y, Var::Z, base);
    let i_xyz = joint_mutual_information(d, base);
    let i_xz_given_y = conditional_mutual_information(d, Var::X, Var::Z, Var::Y, base);
    let i_yz_given_x = conditional_mutual_information(d, Var::Y, Var::Z, Var::X, base);
    let h_z_given_xy = conditional_entropy(d, Var::Z, &[Var::X, Var::Y], base);
    let h_z_given_y = conditional_entropy(d, Var::Z, &[Var::Y], base);
    let h_z_given_x = conditional_entropy(d, Var::Z, &[Var::X], base);

    let red = i_xz - un_x;
    let syn = i_xz_given_y - un_x;
    let red_swapped = i_yz - un_y;
    let syn_swapped = i_yz_given_x - un_y;
    let red_alt = mutual_information(&aggregate_source(&fam_y).joint, base);

    let residuals = PidResiduals {
        atoms_sum: (i_xyz - ksum([red, syn, un_x, un_y])).abs(),
        red_alt: (red - red_alt).abs(),
        red_swapped: (red - red_swapped).abs(),
        syn_swapped: (syn - syn_swapped).abs(),
        un_x_alt: (un_x - un_x_alt).abs(),
        un_y_alt: (un_y - un_y_alt).abs(),
    };

    PidResult {
        base,
        un_x_z_given_y: un_x,
        un_y_z_given_x: un_y,
        red,
        syn,
        i_xz,
        i_yz,
        i_xyz,
        i_xz_given_y,
        i_yz_given_x,
        h_z_given_xy,
        h_z_given_y,
        h_z_given_x,
        red_alt,
        red_swapped,
        syn_swapped,
        un_x_alt,
        un_y_alt,
        closed_system: h_z_given_xy * base.ln_base() / std::f64::consts::LN_2 <= CLOSED_SYSTEM_TOL,
        residuals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Alphabet;

    const BITS: LogBase = LogBase::Two;
    const TOL: f64 = 1e-9;

    fn bits() -> Alphabet {
        Alphabet::binary()
    }

    fn table(entries: &[(&str, &str, &str, f64)]) -> JointDist3 {
        JointDist3::from_entries(bits(), bits(), bits(), entries.iter().copied()).unwrap()
    }

    fn xor() -> JointDist3 {
        table(&[
            ("0", "0", "0", 0.25),
            ("0", "1", "1", 0.25),
            ("1", "0", "1", 0.25),
            ("1", "1", "0", 0.25),
        ])
    }

    fn rdn() -> JointDist3 {
        table(&[("0", "0", "0", 0.5), ("1", "1", "1", 0.5)])
    }

    fn unq() -> JointDist3 {
        table(&[
            ("0", "0", "0", 0.25),
            ("0", "1", "0", 0.25),
            ("1", "0", "1", 0.25),
            ("1", "1", "1", 0.25),
        ])
    }

    fn copy() -> JointDist3 {
        JointDist3::from_entries(
            bits(),
            bits(),
            Alphabet::product(&bits(), &bits()),
            [
                ("0", "0", "(0,0)", 0.25),
                ("0", "1", "(0,1)", 0.25),
                ("1", "0", "(1,0)", 0.25),
                ("1", "1", "(1,1)", 0.25),
            ],
        )
        .unwrap()
    }

    fn assert_atoms(r: &PidResult, expected: [f64; 4]) {
        for (got, want) in r.atoms().iter().zip(expected) {
            assert!(
                (got - want).abs() <= TOL,
                "atoms {:?} != {expected:?}",
                r.atoms()
            );
        }
    }

    #[test]
    fn unique_information_examples() {
        assert!((unique_information(&unq(), Source::X, BITS) - 1.0).abs() <= TOL);
        assert!(unique_information(&unq(), Source::Y, BITS).abs() <= TOL);
        assert!(unique_information(&xor(), Source::X, BITS).abs() <= TOL);
        assert!(unique_information(&rdn(), Source::X, BITS).abs() <= TOL);
    }

    #[test]
    fn unique_information_alt_examples() {
        assert!((unique_information_alt(&unq(), Source::X, BITS) - 1.0).abs() <= TOL);
        assert!(unique_information_alt(&rdn(), Source::X, BITS).abs() <= TOL);
        let d = JointDist3::new(
            Alphabet::range(3).unwrap(),
            Alphabet::range(3).unwrap(),
            Alphabet::range(3).unwrap(),
            (1..=27).map(|i| i as f64 / 378.0).collect(),
        )
        .unwrap();
        for s in [Source::X, Source::Y] {
            assert!(
                (unique_information(&d, s, BITS) - unique_information_alt(&d, s, BITS)).abs()
                    <= TOL
            );
        }
    }

    #[test]
    fn redundant_information_examples() {
        assert!((redundant_information(&rdn(), BITS) - 1.0).abs() <= TOL);
        assert!(redundant_information(&copy(), BITS).abs() <= TOL);
        assert!(redundant_information(&xor(), BITS).abs() <= TOL);
        assert!((redundant_information_alt(&rdn(), BITS) - 1.0).abs() <= TOL);
    }

    #[test]
    fn redundancy_vanishes_when_y_is_independent() {
        let ind = {
            let dxz = [0.35, 0.15, 0.1, 0.4];
            let dy = [0.7, 0.3];
            let mut p = Vec::new();
            for x in 0..2 {
                for y in 0..2 {
                    for z in 0..2 {
                        p.push(dxz[x * 2 + z] * dy[y]);
                    }
                }
            }
            JointDist3::new(bits(), bits(), bits(), p).unwrap()
        };
        assert!(redundant_information_alt(&ind, BITS).abs() <= 1e-12);
    }

    #[test]
    fn synergistic_information_examples() {
        assert!((synergistic_information(&xor(), BITS) - 1.0).abs() <= TOL);
        assert!(synergistic_information(&unq(), BITS).abs() <= TOL);
        assert!(synergistic_information(&rdn(), BITS).abs() <= TOL);
    }

    #[test]
    fn decompose_gates() {
        assert_atoms(&decompose(&xor()), [0.0, 0.0, 0.0, 1.0]);
        assert_atoms(&decompose(&copy()), [1.0, 1.0, 0.0, 0.0]);
        assert_atoms(&decompose(&unq()), [1.0, 0.0, 0.0, 0.0]);
        assert_atoms(&decompose(&rdn()), [0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn closed_system_flag() {
        assert!(decompose(&xor()).closed_system);
        assert!(!decompose(&JointDist3::uniform(bits(), bits(), bits())).closed_system);
        assert!(decompose_with_base(&xor(), LogBase::E).closed_system);
    }

    #[test]
    fn base_conversion() {
        let d = JointDist3::new(
            bits(),
            bits(),
            bits(),
            vec![0.05, 0.1, 0.15, 0.2, 0.1, 0.05, 0.3, 0.05],
        )
        .unwrap();
        let b = decompose(&d);
        let n = decompose_with_base(&d, LogBase::E);
        for (vb, vn) in b.atoms().iter().zip(n.atoms()) {
            assert!((vb * std::f64::consts::LN_2 - vn).abs() <= 1e-12);
        }
    }

    #[test]
    fn negative_synergy_is_not_clamped() {
        // Z is independent noise correlated with X only through Y: an open system.
        let d = JointDist3::new(
            bits(),
            bits(),
            bits(),
            vec![0.3, 0.05, 0.05, 0.1, 0.02, 0.08, 0.1, 0.3],
        )
        .unwrap();
        let r = decompose(&d);
        assert_eq!(r.syn, r.i_xz_given_y - r.un_x_z_given_y);
        assert!(!r.closed_system);
    }
}
