//! Numerical verification of the decomposition's axioms and supporting identities.
//!
//! [`run_axioms`] evaluates every identity and bound on one system and
//! returns an [`AxiomReport`]; [`run_battery`] repeats it over a seeded
//! random corpus. Equality checks compare absolute residuals in bits;
//! inequality checks report the margin `rhs - lhs`.

mod battery;
mod continuity;
mod gates;
mod report;

pub use battery::{battery_corpus, battery_sample, run_battery, BatteryConfig};
pub use continuity::{probe_continuity, ContinuityProbe, ProbeConfig, ProbeLevel};
pub use gates::{make_gate, GateKind, GateSpec};
pub use report::{AxiomReport, CheckEntry, Relation, ReportSummary};

use serde::{Deserialize, Serialize};

use crate::do_op::{
    aggregate_source, conditioned_family, do_operation, AggregatedSource, ConditionedFamily, Source,
};
use crate::info::{
    conditional_entropy, conditional_entropy_pair, entropy, mutual_information, LogBase,
};
use crate::io::fingerprint;
use crate::pid::{decompose, PidResult};
use crate::prob::{Alphabet, Dist1, JointDist3, Var};
use crate::sum::ksum;

const BITS: LogBase = LogBase::Two;

/// Tolerances for each class of check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Identities between information quantities, in bits.
    pub equality: f64,
    /// Slack on inequalities between information quantities, in bits.
    pub inequality: f64,
    /// Distribution-level identities (marginals, normalization, row conditionals).
    pub distribution: f64,
    /// `do(d | D_Z) = d`, entrywise.
    pub do_identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            equality: 1e-9,
            inequality: 1e-9,
            distribution: 1e-12,
            do_identity: 1e-15,
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Worst violation of "is a distribution": negativity or normalization slack.
fn distribution_defect(p: &[f64]) -> f64 {
    let negative = p.iter().map(|&v| (-v).max(0.0)).fold(0.0, f64::max);
    negative.max((ksum(p.iter().copied()) - 1.0).abs())
}

struct Directional {
    family: ConditionedFamily,
    aggregated: AggregatedSource,
}

impl Directional {
    fn new(d: &JointDist3, conditioned: Source) -> Self {
        let family = conditioned_family(d, conditioned);
        let aggregated = aggregate_source(&family);
        Self { family, aggregated }
    }

    /// `Σ_s Pr(s) H(measured | C)` over the family members.
    fn averaged_channel_entropy(&self) -> f64 {
        let m = self.family.measured();
        ksum(self.family.members.iter().map(|mem| {
            let pair = mem
                .result
                .dist
                .marginal2(m.var(), Var::Z)
                .expect("distinct variables");
            mem.weight * conditional_entropy_pair(&pair, BITS)
        }))
    }

    fn averaged_entropy(&self) -> f64 {
        let m = self.family.measured();
        ksum(
            self.family
                .members
                .iter()
                .map(|mem| mem.weight * entropy(&mem.result.source_marginal(m), BITS)),
        )
    }
}

/// Runs every check on `d`.
pub fn run_axioms(d: &JointDist3, tol: &Tolerances) -> AxiomReport {
    let r = decompose(d);
    let on_y = Directional::new(d, Source::Y);
    let on_x = Directional::new(d, Source::X);
    let mut checks = Vec::new();
    pid_checks(&r, tol, &mut checks);
    lemma_checks(d, &on_y, &on_x, tol, &mut checks);
    do_checks(d, &on_y, &on_x, tol, &mut checks);
    AxiomReport::new(checks, 1, fingerprint(d))
}

fn pid_checks(r: &PidResult, tol: &Tolerances, out: &mut Vec<CheckEntry>) {
    let (eq, ineq) = (tol.equality, tol.inequality);
    let (un_x, un_y) = (r.un_x_z_given_y, r.un_y_z_given_x);
    out.extend([
        CheckEntry::equality(
            "consistency.red_plus_un_x",
            "Red + Un(X→Z|Y) = I(X;Z)",
            (r.red + un_x - r.i_xz).abs(),
            eq,
        ),
        CheckEntry::equality(
            "consistency.red_plus_un_y",
            "Red + Un(Y→Z|X) = I(Y;Z)",
            (r.red + un_y - r.i_yz).abs(),
            eq,
        ),
        CheckEntry::equality(
            "consistency.syn_plus_un_x",
            "Syn + Un(X→Z|Y) = I(X;Z|Y)",
            (r.syn + un_x - r.i_xz_given_y).abs(),
            eq,
        ),
        CheckEntry::equality(
            "consistency.syn_plus_un_y",
            "Syn + Un(Y→Z|X) = I(Y;Z|X)",
            (r.syn + un_y - r.i_yz_given_x).abs(),
            eq,
        ),
        CheckEntry::equality(
            "consistency.atoms_sum",
            "Red + Syn + Un(X→Z|Y) + Un(Y→Z|X) = I(X,Y;Z)",
            r.residuals.atoms_sum,
            eq,
        ),
        CheckEntry::equality(
            "commutativity.red",
            "Red(X,Y→Z) = Red(Y,X→Z)",
            r.residuals.red_swapped,
            eq,
        ),
        CheckEntry::inequality(
            "monotonicity.red_le_min_mi",
            "Red ≤ min{I(X;Z), I(Y;Z)}",
            r.i_xz.min(r.i_yz) - r.red,
            ineq,
        ),
        CheckEntry::inequality("nonnegativity.red", "Red ≥ 0", r.red, ineq),
        CheckEntry::inequality("nonnegativity.un_x", "Un(X→Z|Y) ≥ 0", un_x, ineq),
        CheckEntry::inequality("nonnegativity.un_y", "Un(Y→Z|X) ≥ 0", un_y, ineq),
        CheckEntry::inequality(
            "bound.un_x_le_i_xz",
            "Un(X→Z|Y) ≤ I(X;Z)",
            r.i_xz - un_x,
            ineq,
        ),
        CheckEntry::inequality(
            "bound.un_y_le_i_yz",
            "Un(Y→Z|X) ≤ I(Y;Z)",
            r.i_yz - un_y,
            ineq,
        ),
        CheckEntry::inequality(
            "bound.un_x_le_h_z_given_y",
            "Un(X→Z|Y) ≤ H(Z|Y)",
            r.h_z_given_y - un_x,
            ineq,
        ),
        CheckEntry::inequality(
            "bound.un_y_le_h_z_given_x",
            "Un(Y→Z|X) ≤ H(Z|X)",
            r.h_z_given_x - un_y,
            ineq,
        ),
        CheckEntry::equality(
            "dual_path.un_x_entropy_form",
            "Un(X→Z|Y) = Σ Pr(y) H(A_y) − H(X|Z)",
            r.residuals.un_x_alt,
            eq,
        ),
        CheckEntry::equality(
            "dual_path.un_y_entropy_form",
            "Un(Y→Z|X) = Σ Pr(x) H(B_x) − H(Y|Z)",
            r.residuals.un_y_alt,
            eq,
        ),
        CheckEntry::equality(
            "dual_path.red_aggregated",
            "Red = I(A_{Z|Y}; Y)",
            r.residuals.red_alt,
            eq,
        ),
    ]);
    if r.closed_system {
        out.push(CheckEntry::inequality(
            "closed_system.syn_nonnegative",
            "H(Z|X,Y) = 0 implies Syn ≥ 0",
            r.syn,
            ineq,
        ));
    }
}

fn lemma_checks(
    d: &JointDist3,
    on_y: &Directional,
    on_x: &Directional,
    tol: &Tolerances,
    out: &mut Vec<CheckEntry>,
) {
    let (eq, ineq) = (tol.equality, tol.inequality);
    let h_x = entropy(&d.marginal1(Var::X), BITS);
    let h_y = entropy(&d.marginal1(Var::Y), BITS);

    let i_ay = mutual_information(&on_y.aggregated.joint, BITS);
    let i_xb = mutual_information(&on_x.aggregated.joint, BITS);

    out.extend([
        CheckEntry::equality(
            "commutativity.aggregated_sources",
            "I(A_{Z|Y}; Y) = I(X; B_{Z|X})",
            (i_ay - i_xb).abs(),
            eq,
        ),
        CheckEntry::equality(
            "channel_invariance.x",
            "H(X|Z) = Σ Pr(y) H(A_y|C_y)",
            (conditional_entropy(d, Var::X, &[Var::Z], BITS) - on_y.averaged_channel_entropy())
                .abs(),
            eq,
        ),
        CheckEntry::equality(
            "channel_invariance.y",
            "H(Y|Z) = Σ Pr(x) H(B_x|C_x)",
            (conditional_entropy(d, Var::Y, &[Var::Z], BITS) - on_x.averaged_channel_entropy())
                .abs(),
            eq,
        ),
        CheckEntry::equality(
            "aggregated_entropy.x",
            "H(A_{Z|Y}) = H(X)",
            (entropy(&on_y.aggregated.aggregated_marginal(), BITS) - h_x).abs(),
            eq,
        ),
        CheckEntry::equality(
            "aggregated_entropy.y",
            "H(B_{Z|X}) = H(Y)",
            (entropy(&on_x.aggregated.aggregated_marginal(), BITS) - h_y).abs(),
            eq,
        ),
        CheckEntry::inequality(
            "averaged_entropy.x",
            "Σ Pr(y) H(A_y) ≤ H(X)",
            h_x - on_y.averaged_entropy(),
            ineq,
        ),
        CheckEntry::inequality(
            "averaged_entropy.y",
            "Σ Pr(x) H(B_x) ≤ H(Y)",
            h_y - on_x.averaged_entropy(),
            ineq,
        ),
    ]);

    for (dir, tag, source_var) in [(on_y, "x", Var::X), (on_x, "y", Var::Y)] {
        let measured = dir.family.measured();
        let mut row_entropy: f64 = 0.0;
        let mut row_prob: f64 = 0.0;
        for m in &dir.family.members {
            let member = m.result.source_marginal(measured);
            match dir.aggregated.aggregated_given(m.index) {
                Some(row) => {
                    row_entropy =
                        row_entropy.max((entropy(&row, BITS) - entropy(&member, BITS)).abs());
                    row_prob = row_prob.max(max_abs_diff(row.probs(), member.probs()));
                }
                None => {
                    row_entropy = f64::INFINITY;
                    row_prob = f64::INFINITY;
                }
            }
        }
        let agg_marginal = dir.aggregated.aggregated_marginal();
        let cond_marginal = dir.aggregated.condition_marginal();
        let other = measured.other().var();
        out.extend([
            CheckEntry::equality(
                &format!("aggregated_source.rows_{tag}"),
                "aggregated row conditional equals member source marginal",
                row_prob,
                tol.distribution,
            ),
            CheckEntry::equality(
                &format!("aggregated_source.row_entropy_{tag}"),
                "H(aggregated | condition = s) = H(member source marginal)",
                row_entropy,
                tol.distribution,
            ),
            CheckEntry::equality(
                &format!("aggregated_source.marginal_{tag}"),
                "aggregated marginal equals source marginal",
                max_abs_diff(agg_marginal.probs(), d.marginal1(source_var).probs()),
                tol.distribution,
            ),
            CheckEntry::equality(
                &format!("aggregated_source.condition_marginal_{tag}"),
                "aggregated joint keeps the condition marginal",
                max_abs_diff(cond_marginal.probs(), d.marginal1(other).probs()),
                tol.distribution,
            ),
        ]);
    }
}

fn do_checks(
    d: &JointDist3,
    on_y: &Directional,
    on_x: &Directional,
    tol: &Tolerances,
    out: &mut Vec<CheckEntry>,
) {
    let identity = do_operation(d, &d.marginal1(Var::Z)).expect("own marginal is supported");
    let mut defect = distribution_defect(identity.dist.probs());
    let mut marginal_gap: f64 = max_abs_diff(
        identity.target_marginal().probs(),
        d.marginal1(Var::Z).probs(),
    );
    let mut weight_gap: f64 = 0.0;
    for dir in [on_y, on_x] {
        let cond = dir.family.conditioned.var();
        weight_gap = weight_gap.max((dir.family.total_weight() - 1.0).abs());
        for m in &dir.family.members {
            defect = defect.max(distribution_defect(m.result.dist.probs()));
            let target = d
                .conditional_by_index(Var::Z, cond, m.index)
                .expect("member has positive weight");
            marginal_gap = marginal_gap.max(max_abs_diff(
                m.result.target_marginal().probs(),
                target.probs(),
            ));
        }
    }
    out.extend([
        CheckEntry::equality(
            "do_op.identity",
            "do(D | D_Z) = D",
            max_abs_diff(identity.dist.probs(), d.probs()),
            tol.do_identity,
        ),
        CheckEntry::equality(
            "do_op.output_is_distribution",
            "do-operation output is a probability distribution",
            defect,
            tol.distribution,
        ),
        CheckEntry::equality(
            "do_op.marginal_preserved",
            "C-marginal of the do-operation output equals its target",
            marginal_gap,
            tol.distribution,
        ),
        CheckEntry::equality(
            "do_op.family_weights",
            "family weights sum to one",
            weight_gap,
            tol.distribution,
        ),
    ]);
}

/// Checks that each atom of `d1 ⊗ d2` equals the sum of the factors' atoms.
pub fn check_additivity(d1: &JointDist3, d2: &JointDist3, tol: &Tolerances) -> CheckEntry {
    let a = decompose(d1).atoms();
    let b = decompose(d2).atoms();
    let joint = decompose(&d1.product(d2)).atoms();
    let residual = (0..4)
        .map(|i| (joint[i] - (a[i] + b[i])).abs())
        .fold(0.0, f64::max);
    CheckEntry::equality(
        "additivity.atoms",
        "atoms of independent systems add",
        residual,
        tol.equality,
    )
}

/// `Z = (X, Y)` with independent sources `dx ⊗ dy`.
pub fn copy_system(dx: &Dist1, dy: &Dist1) -> JointDist3 {
    let ax = dx.alphabet().clone();
    let ay = dy.alphabet().clone();
    let az = Alphabet::product(&ax, &ay);
    let (nx, ny) = (ax.len(), ay.len());
    let nz = nx * ny;
    let mut p = vec![0.0; nx * ny * nz];
    for x in 0..nx {
        for y in 0..ny {
            p[(x * ny + y) * nz + x * ny + y] = dx.prob(x) * dy.prob(y);
        }
    }
    JointDist3::from_parts(ax, ay, az, p)
}

/// Red of the independent-input copy system must vanish.
pub fn check_independent_identity(dx: &Dist1, dy: &Dist1, tol: &Tolerances) -> CheckEntry {
    let r = decompose(&copy_system(dx, dy));
    CheckEntry::equality(
        "independent_identity.red",
        "I(X;Y) = 0 and Z = (X,Y) implies Red = 0",
        r.red.abs(),
        tol.equality,
    )
}
