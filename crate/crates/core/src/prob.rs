//! Finite discrete distributions over one, two, and three variables.
//!
//! Storage is dense and row-major with the canonical axis order X, Y, Z.
//! Every distribution is immutable once built. Constructors validate
//! nonnegativity and normalization (within [`TOL_NORM`]) and then divide by
//! the observed sum, so downstream identities see an exactly normalized
//! tensor rather than the input slack.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{PidError, Result};
use crate::sum::{ksum, CompensatedSum};

/// Normalization tolerance applied on ingestion.
pub const TOL_NORM: f64 = 1e-9;

/// One of the three variables of a system. X and Y are the sources, Z the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn axis(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::Z => 2,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Var::X => 'X',
            Var::Y => 'Y',
            Var::Z => 'Z',
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Ordered set of distinct outcome labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(PidError::EmptyAlphabet);
        }
        let mut seen = std::collections::HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(PidError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// Labels `"0"`, `"1"`, ..., `"n-1"`.
    pub fn range(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn binary() -> Self {
        Self::range(2).expect("two distinct labels")
    }

    /// Alphabet of ordered pairs `(a, b)`, first component major.
    ///
    /// Labels are written `(a,b)`. If that rendering is ambiguous for the
    /// given inputs, the JSON array form `["a","b"]` is used instead, which
    /// is injective.
    pub fn product(a: &Alphabet, b: &Alphabet) -> Alphabet {
        let plain: Vec<String> = a
            .labels
            .iter()
            .flat_map(|la| b.labels.iter().map(move |lb| format!("({la},{lb})")))
            .collect();
        if let Ok(alpha) = Alphabet::new(plain) {
            return alpha;
        }
        let encoded = a.labels.iter().flat_map(|la| {
            b.labels
                .iter()
                .map(move |lb| serde_json::to_string(&[la, lb]).expect("strings serialize"))
        });
        Alphabet::new(encoded).expect("JSON pair encoding is injective")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = PidError;

    fn try_from(labels: Vec<String>) -> Result<Self> {
        Alphabet::new(labels)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.labels
    }
}

/// Checks entries, then rescales them to sum to exactly one (up to rounding).
/// Returns the pre-normalization residual `sum - 1`.
fn normalize_in_place(p: &mut [f64]) -> Result<f64> {
    for (index, &value) in p.iter().enumerate() {
        if !value.is_finite() {
            return Err(PidError::NonFiniteProbability { index, value });
        }
        if value < 0.0 {
            return Err(PidError::NegativeProbability { index, value });
        }
    }
    let sum = ksum(p.iter().copied());
    if (sum - 1.0).abs() > TOL_NORM {
        return Err(PidError::NotNormalized {
            sum,
            tolerance: TOL_NORM,
        });
    }
    if sum != 1.0 {
        for v in p.iter_mut() {
            *v /= sum;
        }
    }
    Ok(sum - 1.0)
}

fn shape_error(expected: impl fmt::Display, found: impl fmt::Display) -> PidError {
    PidError::ShapeMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

/// Distribution of a single variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dist1 {
    alphabet: Alphabet,
    p: Vec<f64>,
}

impl Dist1 {
    pub fn new(alphabet: Alphabet, mut p: Vec<f64>) -> Result<Self> {
        if p.len() != alphabet.len() {
            return Err(shape_error(alphabet.len(), p.len()));
        }
        normalize_in_place(&mut p)?;
        Ok(Self { alphabet, p })
    }

    pub(crate) fn from_parts(alphabet: Alphabet, p: Vec<f64>) -> Self {
        debug_assert_eq!(alphabet.len(), p.len());
        Self { alphabet, p }
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        Self::from_parts(alphabet, vec![1.0 / n as f64; n])
    }

    pub fn point_mass(alphabet: Alphabet, index: usize) -> Result<Self> {
        if index >= alphabet.len() {
            return Err(shape_error(format!("index < {}", alphabet.len()), index));
        }
        let mut p = vec![0.0; alphabet.len()];
        p[index] = 1.0;
        Ok(Self::from_parts(alphabet, p))
    }

    /// Binary distribution on `{"0","1"}` with `Pr(1) = p1`.
    pub fn bernoulli(p1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p1) {
            return Err(PidError::InvalidParameter(format!(
                "bias {p1} outside [0, 1]"
            )));
        }
        Ok(Self::from_parts(Alphabet::binary(), vec![1.0 - p1, p1]))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.p[index]
    }

    pub fn prob_of(&self, label: &str) -> Option<f64> {
        self.alphabet.index_of(label).map(|i| self.p[i])
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// Joint distribution of two variables, stored row-major (first variable major).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDist2 {
    a1: Alphabet,
    a2: Alphabet,
    p: Vec<f64>,
}

impl JointDist2 {
    pub fn new(a1: Alphabet, a2: Alphabet, mut p: Vec<f64>) -> Result<Self> {
        let expected = a1.len() * a2.len();
        if p.len() != expected {
            return Err(shape_error(format!("{}x{}", a1.len(), a2.len()), p.len()));
        }
        normalize_in_place(&mut p)?;
        Ok(Self { a1, a2, p })
    }

    pub(crate) fn from_parts(a1: Alphabet, a2: Alphabet, p: Vec<f64>) -> Self {
        debug_assert_eq!(a1.len() * a2.len(), p.len());
        Self { a1, a2, p }
    }

    pub fn first_alphabet(&self) -> &Alphabet {
        &self.a1
    }

    pub fn second_alphabet(&self) -> &Alphabet {
        &self.a2
    }

    pub fn shape(&self) -> [usize; 2] {
        [self.a1.len(), self.a2.len()]
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.a2.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.a2.len();
        &self.p[i * n..(i + 1) * n]
    }

    pub fn first_marginal(&self) -> Dist1 {
        let [n1, n2] = self.shape();
        let p = (0..n1)
            .map(|i| ksum((0..n2).map(|j| self.prob(i, j))))
            .collect();
        Dist1::from_parts(self.a1.clone(), p)
    }

    pub fn second_marginal(&self) -> Dist1 {
        let [n1, n2] = self.shape();
        let p = (0..n2)
            .map(|j| ksum((0..n1).map(|i| self.prob(i, j))))
            .collect();
        Dist1::from_parts(self.a2.clone(), p)
    }

    /// Distribution of the first variable given the second takes value index `j`.
    pub fn first_given_second(&self, j: usize) -> Option<Dist1> {
        let n1 = self.a1.len();
        let col: Vec<f64> = (0..n1).map(|i| self.prob(i, j)).collect();
        let mass = ksum(col.iter().copied());
        (mass > 0.0)
            .then(|| Dist1::from_parts(self.a1.clone(), col.iter().map(|v| v / mass).collect()))
    }

    /// Distribution of the second variable given the first takes value index `i`.
    pub fn second_given_first(&self, i: usize) -> Option<Dist1> {
        let row = self.row(i);
        let mass = ksum(row.iter().copied());
        (mass > 0.0)
            .then(|| Dist1::from_parts(self.a2.clone(), row.iter().map(|v| v / mass).collect()))
    }

    pub fn transpose(&self) -> JointDist2 {
        let [n1, n2] = self.shape();
        let mut p = Vec::with_capacity(n1 * n2);
        for j in 0..n2 {
            for i in 0..n1 {
                p.push(self.prob(i, j));
            }
        }
        JointDist2::from_parts(self.a2.clone(), self.a1.clone(), p)
    }
}

/// Result of marginalizing a three-variable system.
#[derive(Debug, Clone, PartialEq)]
pub enum Marginal {
    One(Dist1),
    Two(JointDist2),
}

/// A single observation `(x, y, z)` by label.
pub type Observation = [String; 3];

/// Raw observations, one row per sample.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SampleTable {
    pub rows: Vec<Observation>,
}

impl SampleTable {
    pub fn new(rows: Vec<Observation>) -> Self {
        Self { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Joint distribution of (X, Y, Z), stored x-major then y then z.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist3 {
    ax: Alphabet,
    ay: Alphabet,
    az: Alphabet,
    p: Vec<f64>,
    normalization_residual: f64,
}

impl JointDist3 {
    /// Validates a flat x-major tensor and renormalizes it exactly.
    pub fn new(ax: Alphabet, ay: Alphabet, az: Alphabet, mut p: Vec<f64>) -> Result<Self> {
        let expected = ax.len() * ay.len() * az.len();
        if p.len() != expected {
            return Err(shape_error(
                format!(
                    "{}x{}x{} = {expected} entries",
                    ax.len(),
                    ay.len(),
                    az.len()
                ),
                format!("{} entries", p.len()),
            ));
        }
        let normalization_residual = normalize_in_place(&mut p)?;
        Ok(Self {
            ax,
            ay,
            az,
            p,
            normalization_residual,
        })
    }

    /// Validates a nested `[x][y][z]` tensor.
    pub fn from_nested(
        ax: Alphabet,
        ay: Alphabet,
        az: Alphabet,
        nested: &[Vec<Vec<f64>>],
    ) -> Result<Self> {
        let shape = format!("{}x{}x{}", ax.len(), ay.len(), az.len());
        if nested.len() != ax.len() {
            return Err(shape_error(&shape, format!("{} x-slices", nested.len())));
        }
        let mut flat = Vec::with_capacity(ax.len() * ay.len() * az.len());
        for (xi, plane) in nested.iter().enumerate() {
            if plane.len() != ay.len() {
                return Err(shape_error(
                    &shape,
                    format!("{} y-rows at x index {xi}", plane.len()),
                ));
            }
            for (yi, row) in plane.iter().enumerate() {
                if row.len() != az.len() {
                    return Err(shape_error(
                        &shape,
                        format!("{} z-entries at ({xi},{yi})", row.len()),
                    ));
                }
                flat.extend_from_slice(row);
            }
        }
        Self::new(ax, ay, az, flat)
    }

    /// Builds from an already-normalized tensor without rescaling.
    pub(crate) fn from_parts(ax: Alphabet, ay: Alphabet, az: Alphabet, p: Vec<f64>) -> Self {
        debug_assert_eq!(ax.len() * ay.len() * az.len(), p.len());
        let normalization_residual = ksum(p.iter().copied()) - 1.0;
        Self {
            ax,
            ay,
            az,
            p,
            normalization_residual,
        }
    }

    pub fn uniform(ax: Alphabet, ay: Alphabet, az: Alphabet) -> Self {
        let n = ax.len() * ay.len() * az.len();
        Self::from_parts(ax, ay, az, vec![1.0 / n as f64; n])
    }

    pub fn point_mass(ax: Alphabet, ay: Alphabet, az: Alphabet, at: [usize; 3]) -> Result<Self> {
        let shape = [ax.len(), ay.len(), az.len()];
        if at.iter().zip(shape).any(|(&i, n)| i >= n) {
            return Err(shape_error(
                format!("index within {shape:?}"),
                format!("{at:?}"),
            ));
        }
        let mut p = vec![0.0; shape.iter().product()];
        p[(at[0] * shape[1] + at[1]) * shape[2] + at[2]] = 1.0;
        Ok(Self::from_parts(ax, ay, az, p))
    }

    /// Builds from a sparse list of `(x, y, z, p)` label entries; unlisted cells are zero.
    pub fn from_entries<'a, I>(ax: Alphabet, ay: Alphabet, az: Alphabet, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, &'a str, f64)>,
    {
        let [_, ny, nz] = [ax.len(), ay.len(), az.len()];
        let mut p = vec![0.0; ax.len() * ny * nz];
        let mut seen = vec![false; p.len()];
        for (x, y, z, prob) in entries {
            let xi = ax.index_of(x).ok_or_else(|| unknown(Var::X, x))?;
            let yi = ay.index_of(y).ok_or_else(|| unknown(Var::Y, y))?;
            let zi = az.index_of(z).ok_or_else(|| unknown(Var::Z, z))?;
            let idx = (xi * ny + yi) * nz + zi;
            if seen[idx] {
                return Err(PidError::DuplicateEntry {
                    x: x.into(),
                    y: y.into(),
                    z: z.into(),
                });
            }
            seen[idx] = true;
            p[idx] = prob;
        }
        Self::new(ax, ay, az, p)
    }

    /// Empirical distribution with additive smoothing:
    /// `Pr(x,y,z) = (count + alpha) / (N + alpha * |X||Y||Z|)`.
    pub fn estimate_from_samples(
        table: &SampleTable,
        ax: Alphabet,
        ay: Alphabet,
        az: Alphabet,
        smoothing_alpha: f64,
    ) -> Result<Self> {
        if !(smoothing_alpha >= 0.0 && smoothing_alpha.is_finite()) {
            return Err(PidError::InvalidParameter(format!(
                "smoothing alpha must be finite and nonnegative, got {smoothing_alpha}"
            )));
        }
        if table.is_empty() && smoothing_alpha == 0.0 {
            return Err(PidError::EmptyInput);
        }
        let [ny, nz] = [ay.len(), az.len()];
        let cells = ax.len() * ny * nz;
        let mut counts = vec![0u64; cells];
        for [x, y, z] in &table.rows {
            let xi = ax.index_of(x).ok_or_else(|| unknown(Var::X, x))?;
            let yi = ay.index_of(y).ok_or_else(|| unknown(Var::Y, y))?;
            let zi = az.index_of(z).ok_or_else(|| unknown(Var::Z, z))?;
            counts[(xi * ny + yi) * nz + zi] += 1;
        }
        let denom = table.len() as f64 + smoothing_alpha * cells as f64;
        let p = counts
            .iter()
            .map(|&c| (c as f64 + smoothing_alpha) / denom)
            .collect();
        Self::new(ax, ay, az, p)
    }

    pub fn alphabet(&self, var: Var) -> &Alphabet {
        match var {
            Var::X => &self.ax,
            Var::Y => &self.ay,
            Var::Z => &self.az,
        }
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.ax.len(), self.ay.len(), self.az.len()]
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    #[inline]
    pub fn prob(&self, x: usize, y: usize, z: usize) -> f64 {
        let [_, ny, nz] = self.shape();
        self.p[(x * ny + y) * nz + z]
    }

    /// `sum - 1` of the input before renormalization.
    pub fn normalization_residual(&self) -> f64 {
        self.normalization_residual
    }

    /// Sums out every axis not in `keep`; output is row-major in `keep` order.
    ///
    /// Accumulation visits cells x-major, then y, then z, with compensated sums.
    pub(crate) fn project(&self, keep: &[Var]) -> Vec<f64> {
        let shape = self.shape();
        let out_dims: Vec<usize> = keep.iter().map(|v| shape[v.axis()]).collect();
        let mut acc = vec![CompensatedSum::new(); out_dims.iter().product()];
        for x in 0..shape[0] {
            for y in 0..shape[1] {
                for z in 0..shape[2] {
                    let idx = [x, y, z];
                    let mut o = 0;
                    for (v, &d) in keep.iter().zip(&out_dims) {
                        o = o * d + idx[v.axis()];
                    }
                    acc[o].add(self.prob(x, y, z));
                }
            }
        }
        acc.iter().map(CompensatedSum::value).collect()
    }

    pub fn marginal1(&self, var: Var) -> Dist1 {
        Dist1::from_parts(self.alphabet(var).clone(), self.project(&[var]))
    }

    /// Joint marginal of `(first, second)` in that order.
    pub fn marginal2(&self, first: Var, second: Var) -> Result<JointDist2> {
        if first == second {
            return Err(PidError::InvalidParameter(format!(
                "repeated variable {first}"
            )));
        }
        Ok(JointDist2::from_parts(
            self.alphabet(first).clone(),
            self.alphabet(second).clone(),
            self.project(&[first, second]),
        ))
    }

    /// Marginal over a nonempty proper subset of the variables, in canonical order.
    pub fn marginal(&self, vars: &[Var]) -> Result<Marginal> {
        let mut vs = vars.to_vec();
        vs.sort();
        vs.dedup();
        match vs.as_slice() {
            [v] => Ok(Marginal::One(self.marginal1(*v))),
            [a, b] => Ok(Marginal::Two(self.marginal2(*a, *b)?)),
            _ => Err(PidError::InvalidParameter(
                "marginal requires one or two distinct variables".into(),
            )),
        }
    }

    /// Distribution of `target` given `given` takes value index `index`.
    pub fn conditional_by_index(&self, target: Var, given: Var, index: usize) -> Result<Dist1> {
        if target == given {
            return Err(PidError::InvalidParameter(format!(
                "cannot condition {target} on itself"
            )));
        }
        let pair = self.marginal2(target, given)?;
        if index >= pair.second_alphabet().len() {
            return Err(shape_error(
                format!("{given} index < {}", pair.second_alphabet().len()),
                index,
            ));
        }
        pair.first_given_second(index)
            .ok_or_else(|| PidError::DegenerateCondition {
                var: given.symbol(),
                label: self.alphabet(given).label(index).to_string(),
            })
    }

    /// `D_{target | given = value}`.
    pub fn conditional_of(&self, target: Var, given: Var, value: &str) -> Result<Dist1> {
        let index = self
            .alphabet(given)
            .index_of(value)
            .ok_or_else(|| unknown(given, value))?;
        self.conditional_by_index(target, given, index)
    }

    /// Joint of the two remaining variables (canonical order) given `given = value`.
    pub fn conditional(&self, given: Var, value: &str) -> Result<JointDist2> {
        let index = self
            .alphabet(given)
            .index_of(value)
            .ok_or_else(|| unknown(given, value))?;
        let rest: Vec<Var> = Var::ALL.into_iter().filter(|&v| v != given).collect();
        let (a, b) = (rest[0], rest[1]);
        let table = self.project(&[given, a, b]);
        let block = self.alphabet(a).len() * self.alphabet(b).len();
        let slice = &table[index * block..(index + 1) * block];
        let mass = ksum(slice.iter().copied());
        if mass <= 0.0 {
            return Err(PidError::DegenerateCondition {
                var: given.symbol(),
                label: value.to_string(),
            });
        }
        Ok(JointDist2::from_parts(
            self.alphabet(a).clone(),
            self.alphabet(b).clone(),
            slice.iter().map(|v| v / mass).collect(),
        ))
    }

    /// Joint system of two independent systems over paired alphabets.
    pub fn product(&self, other: &JointDist3) -> JointDist3 {
        let ax = Alphabet::product(&self.ax, &other.ax);
        let ay = Alphabet::product(&self.ay, &other.ay);
        let az = Alphabet::product(&self.az, &other.az);
        let [n1x, n1y, n1z] = self.shape();
        let [n2x, n2y, n2z] = other.shape();
        let mut p = Vec::with_capacity(self.p.len() * other.p.len());
        for x1 in 0..n1x {
            for x2 in 0..n2x {
                for y1 in 0..n1y {
                    for y2 in 0..n2y {
                        for z1 in 0..n1z {
                            for z2 in 0..n2z {
                                p.push(self.prob(x1, y1, z1) * other.prob(x2, y2, z2));
                            }
                        }
                    }
                }
            }
        }
        JointDist3::from_parts(ax, ay, az, p)
    }

    /// Same system with the roles of X and Y exchanged.
    pub fn swap_sources(&self) -> JointDist3 {
        let [nx, ny, nz] = self.shape();
        let mut p = Vec::with_capacity(self.p.len());
        for y in 0..ny {
            for x in 0..nx {
                for z in 0..nz {
                    p.push(self.prob(x, y, z));
                }
            }
        }
        JointDist3 {
            ax: self.ay.clone(),
            ay: self.ax.clone(),
            az: self.az.clone(),
            p,
            normalization_residual: self.normalization_residual,
        }
    }

    /// Label-indexed view of the nonzero cells, x-major order.
    pub fn support(&self) -> Vec<([&str; 3], f64)> {
        let [nx, ny, nz] = self.shape();
        let mut out = Vec::new();
        for x in 0..nx {
            for y in 0..ny {
                for z in 0..nz {
                    let v = self.prob(x, y, z);
                    if v > 0.0 {
                        out.push(([self.ax.label(x), self.ay.label(y), self.az.label(z)], v));
                    }
                }
            }
        }
        out
    }

    /// Probability keyed by label triple.
    pub fn to_label_map(&self) -> HashMap<(String, String, String), f64> {
        self.support()
            .into_iter()
            .map(|([x, y, z], v)| ((x.to_string(), y.to_string(), z.to_string()), v))
            .collect()
    }
}

fn unknown(var: Var, label: &str) -> PidError {
    PidError::UnknownLabel {
        var: var.symbol(),
        label: label.to_string(),
    }
}
