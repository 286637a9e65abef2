use std::fmt::Write as _;

use serde::Serialize;

use crate::io::fingerprint_bytes;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `measured` is an absolute residual; passes when `measured <= tolerance`.
    Equality,
    /// `measured` is a margin `rhs - lhs`; passes when `measured >= -tolerance`.
    Inequality,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub property: String,
    pub relation: Relation,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub evaluations: usize,
    pub failures: usize,
}

impl CheckEntry {
    pub fn equality(name: &str, property: &str, residual: f64, tolerance: f64) -> Self {
        let pass = residual <= tolerance;
        Self::build(
            name,
            property,
            Relation::Equality,
            residual,
            tolerance,
            pass,
        )
    }

    pub fn inequality(name: &str, property: &str, margin: f64, tolerance: f64) -> Self {
        let pass = margin >= -tolerance;
        Self::build(
            name,
            property,
            Relation::Inequality,
            margin,
            tolerance,
            pass,
        )
    }

    fn build(
        name: &str,
        property: &str,
        relation: Relation,
        measured: f64,
        tolerance: f64,
        pass: bool,
    ) -> Self {
        Self {
            name: name.to_string(),
            property: property.to_string(),
            relation,
            measured,
            tolerance,
            pass,
            evaluations: 1,
            failures: usize::from(!pass),
        }
    }

    /// Folds another evaluation of the same check into this one, keeping the worst value.
    pub fn absorb(&mut self, other: &CheckEntry) {
        debug_assert_eq!(self.name, other.name);
        let worse = match self.relation {
            Relation::Equality => other.measured > self.measured || other.measured.is_nan(),
            Relation::Inequality => other.measured < self.measured || other.measured.is_nan(),
        };
        if worse {
            self.measured = other.measured;
        }
        self.evaluations += other.evaluations;
        self.failures += other.failures;
        self.pass = self.failures == 0;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReportSummary {
    pub distributions: usize,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<CheckEntry>,
    pub summary: ReportSummary,
    /// SHA-256 of the canonical distribution (or of the ordered member fingerprints for a batch).
    pub fingerprint: String,
}

impl AxiomReport {
    pub fn new(checks: Vec<CheckEntry>, distributions: usize, fingerprint: String) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        let summary = ReportSummary {
            distributions,
            checks: checks.len(),
            passed,
            failed: checks.len() - passed,
        };
        Self {
            checks,
            summary,
            fingerprint,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn check(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Merges per-distribution reports in order: worst value and failure counts per check.
    pub fn aggregate<'a, I>(reports: I) -> AxiomReport
    where
        I: IntoIterator<Item = &'a AxiomReport>,
    {
        let mut checks: Vec<CheckEntry> = Vec::new();
        let mut fingerprints = String::new();
        let mut distributions = 0;
        for r in reports {
            distributions += r.summary.distributions;
            fingerprints.push_str(&r.fingerprint);
            fingerprints.push('\n');
            for c in &r.checks {
                match checks.iter_mut().find(|e| e.name == c.name) {
                    Some(e) => e.absorb(c),
                    None => checks.push(c.clone()),
                }
            }
        }
        AxiomReport::new(
            checks,
            distributions,
            fingerprint_bytes(fingerprints.as_bytes()),
        )
    }

    pub fn render_table(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>5}  {:>24}  {:>9}  {:>9}  verdict",
            "check", "rel", "worst", "tolerance", "failures"
        );
        for c in &self.checks {
            let rel = match c.relation {
                Relation::Equality => "eq",
                Relation::Inequality => "ineq",
            };
            let _ = writeln!(
                out,
                "{:<width$}  {:>5}  {:>24.16e}  {:>9.1e}  {:>4}/{:<4}  {}",
                c.name,
                rel,
                c.measured,
                c.tolerance,
                c.failures,
                c.evaluations,
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        let _ = writeln!(
            out,
            "distributions: {}  checks: {}  passed: {}  failed: {}",
            self.summary.distributions,
            self.summary.checks,
            self.summary.passed,
            self.summary.failed
        );
        let _ = writeln!(out, "fingerprint: {}", self.fingerprint);
        out
    }
}
