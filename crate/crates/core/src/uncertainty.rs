//! Uncertainty relations built from principal variances, and the
//! phase-resolution bound.
//!
//! Every relation is reported as a [`RelationResult`]. Relations that need
//! a nonvanishing mean spin (the longitudinal/transversal ones) are marked
//! inapplicable when `|<j>| <= tol.mean`, and the zero-mean bounds are
//! marked inapplicable otherwise; nothing is silently skipped.

use nalgebra::{Matrix2, Vector3};
use serde::{Deserialize, Serialize};

use crate::covariance::{covariance_pair, longitudinal_frame, CovarianceKind, CovariancePair, PrincipalDecomposition};
use crate::error::{Error, Result};
use crate::spin::{OperatorTriple, QuantumState};
use crate::C64;

/// Which family of relations applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    MeanZero,
    MeanNonzero,
}

impl Regime {
    pub fn of(pair: &CovariancePair) -> Regime {
        if pair.mean_norm() <= pair.tol.mean {
            Regime::MeanZero
        } else {
            Regime::MeanNonzero
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Regime::MeanZero => "mean-zero",
            Regime::MeanNonzero => "mean-nonzero",
        }
    }
}

/// One inequality `lhs >= rhs`.
///
/// Inapplicable relations carry no numbers and count as satisfied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationResult {
    pub name: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    /// `lhs - rhs`.
    pub slack: Option<f64>,
    pub satisfied: bool,
    pub applicable: bool,
    /// `|slack| <= tol.slack`.
    pub equality: bool,
}

impl RelationResult {
    pub fn evaluate(name: impl Into<String>, lhs: f64, rhs: f64, slack_tol: f64) -> Self {
        let slack = lhs - rhs;
        RelationResult {
            name: name.into(),
            lhs: Some(lhs),
            rhs: Some(rhs),
            slack: Some(slack),
            satisfied: slack >= -slack_tol,
            applicable: true,
            equality: slack.abs() <= slack_tol,
        }
    }

    pub fn inapplicable(name: impl Into<String>) -> Self {
        RelationResult {
            name: name.into(),
            lhs: None,
            rhs: None,
            slack: None,
            satisfied: true,
            applicable: false,
            equality: false,
        }
    }

    pub fn violated(&self) -> bool {
        self.applicable && !self.satisfied
    }
}

/// `tr M = j(j+1) - |<j>|^2 >= j`.
pub fn trace_bound(pair: &CovariancePair) -> RelationResult {
    RelationResult::evaluate("trace_bound", pair.trace(), pair.j.value(), pair.tol.slack)
}

/// `M` restricted to the transversal plane of the longitudinal frame, plus
/// whether `e_par` is a principal axis.
struct Transversal {
    block: Matrix2<f64>,
    par_is_principal: bool,
    mean_par: f64,
}

fn transversal(pair: &CovariancePair) -> Option<Transversal> {
    let [p1, p2, par] = longitudinal_frame(&pair.mean, pair.tol.mean).ok()?;
    let m = &pair.m_real;
    let q = |a: &Vector3<f64>, b: &Vector3<f64>| a.dot(&(m * b));
    let block = Matrix2::new(q(&p1, &p1), q(&p1, &p2), q(&p2, &p1), q(&p2, &p2));
    let m_par = m * par;
    let residual = (m_par - par * par.dot(&m_par)).norm();
    let par_is_principal = residual <= pair.tol.parity * (1.0 + m.abs().max());
    Some(Transversal { block, par_is_principal, mean_par: pair.mean.dot(&par) })
}

/// Eigenvalues of a symmetric 2x2 matrix, descending and clamped at 0.
fn eigen2(b: &Matrix2<f64>) -> [f64; 2] {
    let half_tr = 0.5 * (b[(0, 0)] + b[(1, 1)]);
    let half_diff = 0.5 * (b[(0, 0)] - b[(1, 1)]);
    let r = half_diff.hypot(0.5 * (b[(0, 1)] + b[(1, 0)]));
    [(half_tr + r).max(0.0), (half_tr - r).max(0.0)]
}

/// `dj_perp1 dj_perp2 >= |<j_par>|/2` in the longitudinal frame and, when
/// `j_par` is principal, the principal chain
/// `dj_perp1 dj_perp2 >= dJ_perp1 dJ_perp2 >= |<j_par>|/2`.
pub fn transversal_product(pair: &CovariancePair) -> Vec<RelationResult> {
    let names = ["transversal_product", "transversal_product_principal", "transversal_product_chain"];
    let Some(t) = transversal(pair) else {
        return names.iter().map(|n| RelationResult::inapplicable(*n)).collect();
    };
    let slack = pair.tol.slack;
    let rhs = 0.5 * t.mean_par.abs();
    let standard = (t.block[(0, 0)].max(0.0) * t.block[(1, 1)].max(0.0)).sqrt();
    let mut out = vec![RelationResult::evaluate(names[0], standard, rhs, slack)];
    if t.par_is_principal {
        let [a, b] = eigen2(&t.block);
        let principal = (a * b).sqrt();
        out.push(RelationResult::evaluate(names[1], principal, rhs, slack));
        out.push(RelationResult::evaluate(names[2], standard, principal, slack));
    } else {
        out.push(RelationResult::inapplicable(names[1]));
        out.push(RelationResult::inapplicable(names[2]));
    }
    out
}

/// `dj_perp1^2 + dj_perp2^2 >= j`, and its principal form when `j_par` is
/// principal.
pub fn transversal_sum(pair: &CovariancePair) -> Vec<RelationResult> {
    let names = ["transversal_sum", "transversal_sum_principal"];
    let Some(t) = transversal(pair) else {
        return names.iter().map(|n| RelationResult::inapplicable(*n)).collect();
    };
    let j = pair.j.value();
    let mut out = vec![RelationResult::evaluate(names[0], t.block.trace(), j, pair.tol.slack)];
    if t.par_is_principal {
        let [a, b] = eigen2(&t.block);
        out.push(RelationResult::evaluate(names[1], a + b, j, pair.tol.slack));
    } else {
        out.push(RelationResult::inapplicable(names[1]));
    }
    out
}

fn prefix(kind: CovarianceKind) -> &'static str {
    match kind {
        CovarianceKind::RealSymmetric => "zero_mean",
        CovarianceKind::ComplexHermitian => "zero_mean_tilde",
    }
}

/// For `<j> = 0`:
/// `j^2 >= dJ1^2 >= j(j+1)/3`, `j(j+1)/2 >= dJ2^2 >= j/2`,
/// `j(j+1)/3 >= dJ3^2 >= 0`.
pub fn zero_mean_bounds(pair: &CovariancePair, principal: &PrincipalDecomposition) -> Vec<RelationResult> {
    let p = prefix(principal.kind);
    let names = ["j1_upper", "j1_lower", "j2_upper", "j2_lower", "j3_upper", "j3_lower"].map(|n| format!("{p}.{n}"));
    if Regime::of(pair) != Regime::MeanZero {
        return names.into_iter().map(RelationResult::inapplicable).collect();
    }
    let j = pair.j.value();
    let c = pair.j.casimir();
    let [v1, v2, v3] = principal.variances;
    let s = pair.tol.slack;
    let [n0, n1, n2, n3, n4, n5] = names;
    vec![
        RelationResult::evaluate(n0, j * j, v1, s),
        RelationResult::evaluate(n1, v1, c / 3.0, s),
        RelationResult::evaluate(n2, c / 2.0, v2, s),
        RelationResult::evaluate(n3, v2, j / 2.0, s),
        RelationResult::evaluate(n4, c / 3.0, v3, s),
        RelationResult::evaluate(n5, v3, 0.0, s),
    ]
}

/// `dJ1^2 dJ2^2 >= min(j^3/2, j^2 (j+1)^2/9)` for `<j> = 0`.
pub fn zero_mean_product(pair: &CovariancePair, principal: &PrincipalDecomposition) -> RelationResult {
    let name = format!("{}.product", prefix(principal.kind));
    if Regime::of(pair) != Regime::MeanZero {
        return RelationResult::inapplicable(name);
    }
    let j = pair.j.value();
    let rhs = (0.5 * j * j * j).min(pair.j.casimir().powi(2) / 9.0);
    RelationResult::evaluate(name, principal.variances[0] * principal.variances[1], rhs, pair.tol.slack)
}

/// `(dj_u)^2 + (dj_v)^2 >= j` for orthonormal complex `u`, `v` and
/// `<j> = 0`, with variances `u^dag M~ u`. Also returns the sum over the
/// completed orthonormal triple, which must equal `j(j+1)`.
pub fn pair_sum_bound(
    pair: &CovariancePair,
    u: &Vector3<C64>,
    v: &Vector3<C64>,
) -> Result<(RelationResult, Option<f64>)> {
    let tol = &pair.tol;
    for w in [u, v] {
        let dev = w.norm() - 1.0;
        if !(dev.abs() <= tol.unit_vector) {
            return Err(Error::NotUnitVector(dev));
        }
    }
    let overlap = u.dotc(v).norm();
    if overlap > tol.orthogonality {
        return Err(Error::NonOrthogonal(overlap));
    }
    if Regime::of(pair) != Regime::MeanZero {
        return Ok((RelationResult::inapplicable("pair_sum"), None));
    }
    let q = |a: &Vector3<C64>| a.dotc(&(pair.m_herm * a)).re;
    let w = u.cross(v).conjugate();
    let lhs = q(u) + q(v);
    let total = lhs + q(&w);
    let casimir = pair.j.casimir();
    if (total - casimir).abs() > tol.covariance * (1.0 + casimir) {
        return Err(Error::InternalConsistency(format!(
            "variances over an orthonormal triple sum to {total}, expected {casimir}"
        )));
    }
    Ok((RelationResult::evaluate("pair_sum", lhs, pair.j.value(), tol.slack), Some(total)))
}

/// Textbook `dj_k dj_l >= |<j_n>|/2` on raw components (1-based `k != l`).
pub fn standard_product(pair: &CovariancePair, k: usize, l: usize) -> Result<RelationResult> {
    if !(1..=3).contains(&k) || !(1..=3).contains(&l) || k == l {
        return Err(Error::InvalidParameter(format!("component pair ({k},{l}) must be distinct indices in 1..=3")));
    }
    let n = 6 - k - l;
    let lhs = (pair.m_real[(k - 1, k - 1)].max(0.0) * pair.m_real[(l - 1, l - 1)].max(0.0)).sqrt();
    let rhs = 0.5 * pair.mean[n - 1].abs();
    Ok(RelationResult::evaluate(format!("standard_product_{k}{l}"), lhs, rhs, pair.tol.slack))
}

/// `det M >= det M~`.
pub fn determinant_order(pair: &CovariancePair) -> RelationResult {
    let det_herm = pair.m_herm.determinant().re;
    RelationResult::evaluate("det_order", pair.m_real.determinant(), det_herm, pair.tol.slack)
}

/// Best phase resolution `1/(2 dJ1)` with `dJ1^2` the largest principal
/// variance of `M`, and whether `dJ1^2 >= heisenberg_fraction * j^2`.
pub fn phase_resolution(pair: &CovariancePair) -> Result<(f64, bool)> {
    let largest = pair.principal(CovarianceKind::RealSymmetric)?.largest();
    phase_resolution_from(largest, pair)
}

fn phase_resolution_from(largest: f64, pair: &CovariancePair) -> Result<(f64, bool)> {
    if !(largest > pair.tol.covariance_psd) {
        return Err(Error::NoPhaseSensitivity);
    }
    let j = pair.j.value();
    Ok((0.5 / largest.sqrt(), largest >= pair.tol.heisenberg_fraction * j * j))
}

/// Full analysis of one state.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertaintyReport {
    pub regime: Regime,
    pub pair: CovariancePair,
    pub principal_real: PrincipalDecomposition,
    pub principal_herm: PrincipalDecomposition,
    pub relations: Vec<RelationResult>,
    /// `None` only for `j = 0`.
    pub phase_resolution: Option<f64>,
    pub heisenberg: bool,
}

impl UncertaintyReport {
    pub fn violations(&self) -> impl Iterator<Item = &RelationResult> {
        self.relations.iter().filter(|r| r.violated())
    }

    /// Fails on the first violated relation.
    pub fn check(&self) -> Result<()> {
        match self.violations().next() {
            Some(r) => Err(Error::TheoremViolation { name: r.name.clone(), slack: r.slack.unwrap_or(f64::NAN) }),
            None => Ok(()),
        }
    }

    pub fn relation(&self, name: &str) -> Option<&RelationResult> {
        self.relations.iter().find(|r| r.name == name)
    }
}

/// Evaluates every relation for an already built pair. Violations are
/// recorded, not raised.
pub fn analyze_pair(pair: &CovariancePair) -> Result<UncertaintyReport> {
    let principal_real = pair.principal(CovarianceKind::RealSymmetric)?;
    let principal_herm = pair.principal(CovarianceKind::ComplexHermitian)?;
    let regime = Regime::of(pair);

    let mut relations = vec![trace_bound(pair), determinant_order(pair)];
    for (k, l) in [(1, 2), (2, 3), (3, 1)] {
        relations.push(standard_product(pair, k, l)?);
    }
    relations.extend(transversal_product(pair));
    relations.extend(transversal_sum(pair));
    for principal in [&principal_real, &principal_herm] {
        relations.extend(zero_mean_bounds(pair, principal));
        relations.push(zero_mean_product(pair, principal));
    }
    relations.push(pair_sum_bound(pair, &principal_herm.axes[1], &principal_herm.axes[2])?.0);

    let (phase_resolution, heisenberg) = match phase_resolution_from(principal_real.largest(), pair) {
        Ok((r, h)) => (Some(r), h),
        Err(Error::NoPhaseSensitivity) => (None, false),
        Err(e) => return Err(e),
    };
    Ok(UncertaintyReport { regime, pair: pair.clone(), principal_real, principal_herm, relations, phase_resolution, heisenberg })
}

/// Builds the covariance pair, evaluates every relation and fails with
/// [`Error::TheoremViolation`] if an applicable relation does not hold.
pub fn analyze(state: &QuantumState, ops: &OperatorTriple) -> Result<UncertaintyReport> {
    let report = analyze_pair(&covariance_pair(state, ops)?)?;
    report.check()?;
    Ok(report)
}
