//! Built-in verification suite: closed-form oracles, equality cases and
//! randomized theorem checks.
//!
//! Every check reports its largest residual against a fixed tolerance. The
//! covariance builder is a parameter so that a deliberately broken one can
//! be shown to fail.

use std::fmt;

use nalgebra::{Matrix3, Vector3};
use spinvar_core::spin::commutator_residual;
use spinvar_core::states::{random_rotation, random_zero_mean_state, reference_covariance_jm, reference_principal_jm};
use spinvar_core::uncertainty::{analyze_pair, phase_resolution};
use spinvar_core::{
    apply_unitary, basis_state, cat_state, coherent_state, ramp_state, random_state, spin_operators_with,
    squeezed_exact, su2_unitary, CovarianceKind, CovariancePair, HalfInteger, OperatorTriple, QuantumState,
    RandomKind, Tolerances, C64,
};

/// Builds `M` and `M~`; [`spinvar_core::covariance_pair`] in production.
pub type CovarianceFn = fn(&QuantumState, &OperatorTriple) -> spinvar_core::Result<CovariancePair>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random states per spin and kind in the theorem suite.
    pub trials: usize,
    pub tol: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 2024, trials: 1000, tol: Tolerances::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: Option<String>,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{:<24} {verdict}  max_residual={:.3e}  tol={:.0e}", self.name, self.residual, self.tolerance)?;
        if let Some(note) = &self.note {
            write!(f, "  ({note})")?;
        }
        Ok(())
    }
}

type Measured = Result<f64, String>;

/// Name, tolerance and body of one check.
type Check = (&'static str, f64, fn(&Ctx) -> Measured);

struct Ctx {
    cfg: SuiteConfig,
    cov: CovarianceFn,
}

fn h(twice: i32) -> HalfInteger {
    HalfInteger::from_twice(twice)
}

fn e<E: fmt::Display>(err: E) -> String {
    err.to_string()
}

impl Ctx {
    fn ops(&self, twice: i32) -> Result<OperatorTriple, String> {
        spin_operators_with(h(twice), self.cfg.tol).map_err(e)
    }

    fn pair(&self, state: &QuantumState, ops: &OperatorTriple) -> Result<CovariancePair, String> {
        (self.cov)(state, ops).map_err(e)
    }
}

fn herm_dist(a: &Matrix3<C64>, b: &Matrix3<C64>) -> f64 {
    (a - b).map(|z| z.norm()).max()
}

fn spin_algebra(ctx: &Ctx) -> Measured {
    let mut worst = 0.0_f64;
    for tj in 1..=25 {
        let ops = ctx.ops(tj)?;
        worst = worst.max(ops.commutator_residual()).max(ops.casimir_residual());
    }
    Ok(worst)
}

fn jm_oracle(ctx: &Ctx) -> Measured {
    let mut worst = 0.0_f64;
    for tj in 0..=25 {
        let ops = ctx.ops(tj)?;
        for m in ops.basis().projections() {
            let got = ctx.pair(&basis_state(h(tj), m).map_err(e)?, &ops)?;
            let want = reference_covariance_jm(h(tj), m).map_err(e)?;
            worst = worst
                .max((got.m_real - want.m_real).abs().max())
                .max(herm_dist(&got.m_herm, &want.m_herm))
                .max((got.mean - want.mean).abs().max());
        }
    }
    Ok(worst)
}

fn jm_principal(ctx: &Ctx) -> Measured {
    let mut worst = 0.0_f64;
    for tj in 0..=25 {
        let ops = ctx.ops(tj)?;
        for m in ops.basis().projections() {
            let pair = ctx.pair(&basis_state(h(tj), m).map_err(e)?, &ops)?;
            let (mut real, mut herm) = reference_principal_jm(h(tj), m).map_err(e)?;
            real.sort_by(|a, b| b.total_cmp(a));
            herm.sort_by(|a, b| b.total_cmp(a));
            let got_r = pair.principal(CovarianceKind::RealSymmetric).map_err(e)?.variances;
            let got_h = pair.principal(CovarianceKind::ComplexHermitian).map_err(e)?.variances;
            for k in 0..3 {
                worst = worst.max((got_r[k] - real[k]).abs()).max((got_h[k] - herm[k]).abs());
            }
        }
    }
    Ok(worst)
}

fn cat_oracle(ctx: &Ctx) -> Measured {
    let mut worst = 0.0_f64;
    for tj in [1, 2, 3, 4, 10, 25] {
        let ops = ctx.ops(tj)?;
        let j = 0.5 * tj as f64;
        let delta = if tj == 2 { 0.5 } else { 0.0 };
        // j = 1/2 is the coherent state along x.
        let expected = if tj == 1 {
            Matrix3::from_diagonal(&Vector3::new(0.0, 0.25, 0.25))
        } else {
            Matrix3::from_diagonal(&Vector3::new(j / 2.0 + delta, j / 2.0 - delta, j * j))
        };
        let pair = ctx.pair(&cat_state(h(tj)).map_err(e)?, &ops)?;
        worst = worst.max((pair.m_real - expected).abs().max());
        if tj > 1 {
            worst = worst.max(herm_dist(&pair.m_herm, &expected.map(C64::from)));
        }
    }
    Ok(worst)
}

fn cat_equalities(ctx: &Ctx) -> Measured {
    let mut worst = 0.0_f64;
    for tj in [4, 6, 10, 25] {
        let ops = ctx.ops(tj)?;
        let report = analyze_pair(&ctx.pair(&cat_state(h(tj)).map_err(e)?, &ops)?).map_err(e)?;
        for name in ["zero_mean.product", "pair_sum", "zero_mean.j1_upper", "zero_mean.j2_lower"] {
            let slack = report.relation(name).and_then(|r| r.slack).ok_or(format!("{name} inapplicable at 2j={tj}"))?;
            worst = worst.max(slack.abs());
        }
    }
    Ok(worst)
}

fn ramp_oracle(ctx: &Ctx) -> Measured {
    let mut worst = 0.0_f64;
    for tj in [2, 4, 6, 10] {
        let ops = ctx.ops(tj)?;
        let c = h(tj).casimir();
        let pair = ctx.pair(&ramp_state(h(tj)).map_err(e)?, &ops)?;
        let m = Matrix3::from_diagonal(&Vector3::new(c - 1.0, 2.0 * c - 1.0, 1.0)) * 0.25;
        let mut mt = m.map(C64::from);
        mt[(0, 1)] = C64::new(0.0, 0.25);
        mt[(1, 0)] = C64::new(0.0, -0.25);
        mt[(1, 2)] = C64::new(0.0, 0.25 * c.sqrt());
        mt[(2, 1)] = C64::new(0.0, -0.25 * c.sqrt());
        worst = worst
            .max((pair.m_real - m).abs().max())
            .max(herm_dist(&pair.m_herm, &mt))
            .max((pair.mean - Vector3::new(0.5 * c.sqrt(), 0.0, 0.5)).abs().max());
    }
    Ok(worst)
}

fn coherent_minimum(ctx: &Ctx) -> Measured {
    let mut worst = 0.0_f64;
    for tj in [1, 2, 3, 4, 10, 25] {
        let ops = ctx.ops(tj)?;
        for k in 0..10u64 {
            let spec = random_rotation(ctx.cfg.seed.wrapping_add(k));
            let pair = ctx.pair(&coherent_state(&ops, &spec).map_err(e)?, &ops)?;
            let report = analyze_pair(&pair).map_err(e)?;
            let herm = report.principal_herm.variances;
            worst = worst.max(herm[1].abs()).max(herm[2].abs());
            for name in ["trace_bound", "transversal_sum", "transversal_product"] {
                let slack = report.relation(name).and_then(|r| r.slack).ok_or(format!("{name} inapplicable"))?;
                worst = worst.max(slack.abs());
            }
        }
    }
    Ok(worst)
}

fn squeezed(ctx: &Ctx) -> Measured {
    let mut worst = 0.0_f64;
    for j in 1..=10 {
        let ops = ctx.ops(2 * j)?;
        for xi in [1e-3, 1e-2, 0.1, 0.5, 1.0] {
            let state = squeezed_exact(&ops, xi).map_err(e)?;
            let psi = state.amplitudes().ok_or("squeezed state is not pure")?;
            let a = ops.j1().matrix() + ops.j2().matrix() * C64::new(0.0, xi);
            let pair = ctx.pair(&state, &ops)?;
            let report = analyze_pair(&pair).map_err(e)?;
            let product = report
                .relation("transversal_product_principal")
                .and_then(|r| r.slack)
                .ok_or(format!("j={j} xi={xi}: j3 not principal"))?;
            worst = worst
                .max((a * psi).norm())
                .max(pair.mean[0].abs())
                .max(pair.mean[1].abs())
                .max(pair.m_real[(0, 1)].abs())
                .max(pair.m_real[(0, 2)].abs())
                .max(pair.m_real[(1, 2)].abs())
                .max(pair.m_herm[(0, 2)].norm())
                .max(pair.m_herm[(1, 2)].norm())
                .max(product.abs());
        }
    }
    Ok(worst)
}

fn su2_invariance(ctx: &Ctx) -> Measured {
    let mut worst = 0.0_f64;
    let rotations = ctx.cfg.trials.clamp(1, 100) as u64;
    for tj in [1, 2, 4, 10] {
        let ops = ctx.ops(tj)?;
        for s in 0..20u64 {
            let kind = if s % 2 == 0 { RandomKind::Pure } else { RandomKind::Mixed };
            let state = random_state(h(tj), ctx.cfg.seed ^ (s << 8), kind).map_err(e)?;
            let base = ctx.pair(&state, &ops)?;
            let base = [
                base.principal(CovarianceKind::RealSymmetric).map_err(e)?.variances,
                base.principal(CovarianceKind::ComplexHermitian).map_err(e)?.variances,
            ];
            for r in 0..rotations {
                let u = su2_unitary(&ops, &random_rotation(ctx.cfg.seed.wrapping_add(s * 1000 + r))).map_err(e)?;
                let pair = ctx.pair(&apply_unitary(&state, &u).map_err(e)?, &ops)?;
                let got = [
                    pair.principal(CovarianceKind::RealSymmetric).map_err(e)?.variances,
                    pair.principal(CovarianceKind::ComplexHermitian).map_err(e)?.variances,
                ];
                for (a, b) in base.iter().flatten().zip(got.iter().flatten()) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Largest violation (`max(0, -slack)`) over every applicable relation,
/// plus the trace identity `tr M + |<j>|^2 = j(j+1)`.
fn theorem_suite(ctx: &Ctx) -> Measured {
    let mut worst = 0.0_f64;
    for tj in 1..=25 {
        let ops = ctx.ops(tj)?;
        let c = h(tj).casimir();
        let mut check = |state: QuantumState| -> Result<(), String> {
            let pair = ctx.pair(&state, &ops)?;
            worst = worst.max((pair.trace() + pair.mean.norm_squared() - c).abs() / (1.0 + c));
            let report = analyze_pair(&pair).map_err(e)?;
            for r in report.relations.iter().filter(|r| r.applicable) {
                worst = worst.max(-r.slack.unwrap_or(0.0));
            }
            Ok(())
        };
        for t in 0..ctx.cfg.trials as u64 {
            let seed = ctx.cfg.seed.wrapping_mul(1_000_003).wrapping_add(t);
            for kind in [RandomKind::Pure, RandomKind::Mixed] {
                check(random_state(h(tj), seed, kind).map_err(e)?)?;
                if !(tj == 1 && kind == RandomKind::Pure) {
                    check(random_zero_mean_state(&ops, seed, kind).map_err(e)?)?;
                }
            }
        }
    }
    Ok(worst)
}

fn scaling(ctx: &Ctx) -> Measured {
    let mut worst = 0.0_f64;
    for j in 1..=10 {
        let jf = j as f64;
        let ops = ctx.ops(2 * j)?;
        let cat = ctx.pair(&cat_state(h(2 * j)).map_err(e)?, &ops)?;
        let coherent = ctx.pair(&coherent_state(&ops, &random_rotation(ctx.cfg.seed + j as u64)).map_err(e)?, &ops)?;
        let largest = |p: &CovariancePair| p.principal(CovarianceKind::RealSymmetric).map(|d| d.largest()).map_err(e);
        worst = worst.max((largest(&cat)? - jf * jf).abs()).max((largest(&coherent)? - jf / 2.0).abs());
    }
    Ok(worst)
}

fn heisenberg(ctx: &Ctx) -> Measured {
    let mut worst = 0.0_f64;
    for j in 1..=10 {
        let jf = j as f64;
        let ops = ctx.ops(2 * j)?;
        let res = |s: QuantumState| -> Result<f64, String> {
            let pair = ctx.pair(&s, &ops)?;
            phase_resolution(&pair).map(|(r, _)| r).map_err(e)
        };
        let cat = res(cat_state(h(2 * j)).map_err(e)?)?;
        let zero = res(basis_state(h(2 * j), HalfInteger::ZERO).map_err(e)?)?;
        let top = res(basis_state(h(2 * j), h(2 * j)).map_err(e)?)?;
        // At j = 1 the cat state and |1,0> share the largest variance 1.
        let cat_ok = if j == 1 { cat <= zero + 1e-12 } else { cat < zero };
        if !(cat_ok && zero < top) {
            return Err(format!("ordering cat < |j,0> < coherent fails at j={j}: {cat}, {zero}, {top}"));
        }
        worst = worst.max((cat - 0.5 / jf).abs());
    }
    Ok(worst)
}

fn commutator_transport(ctx: &Ctx) -> Measured {
    let ops = ctx.ops(4)?;
    let mut worst = 0.0_f64;
    for s in 0..50u64 {
        let kind = if s % 2 == 0 { RandomKind::Pure } else { RandomKind::Mixed };
        let pair = ctx.pair(&random_state(h(4), ctx.cfg.seed.wrapping_add(s), kind).map_err(e)?, &ops)?;
        let real = pair.principal(CovarianceKind::RealSymmetric).and_then(|p| p.components(&ops)).map_err(e)?;
        let herm = pair.principal(CovarianceKind::ComplexHermitian).and_then(|p| p.components(&ops)).map_err(e)?;
        worst = worst.max(commutator_residual(&real, false)).max(commutator_residual(&herm, true));
    }
    Ok(worst)
}

/// Runs every check in a fixed order.
pub fn run_suite(cfg: SuiteConfig, cov: CovarianceFn) -> Vec<CheckOutcome> {
    let ctx = Ctx { cfg, cov };
    let checks: [Check; 13] = [
        ("spin_algebra", 1e-10, spin_algebra),
        ("jm_oracle", 1e-10, jm_oracle),
        ("jm_principal", 1e-10, jm_principal),
        ("cat_oracle", 1e-10, cat_oracle),
        ("cat_equalities", 1e-9, cat_equalities),
        ("ramp_oracle", 1e-10, ramp_oracle),
        ("coherent_minimum", 1e-9, coherent_minimum),
        ("squeezed_exact", 1e-9, squeezed),
        ("su2_invariance", 1e-8, su2_invariance),
        ("theorem_suite", 1e-9, theorem_suite),
        ("scaling", 1e-9, scaling),
        ("heisenberg_resolution", 1e-12, heisenberg),
        ("commutator_transport", 1e-9, commutator_transport),
    ];
    checks
        .into_iter()
        .map(|(name, tolerance, run)| match run(&ctx) {
            Ok(residual) => CheckOutcome { name, residual, tolerance, passed: residual <= tolerance, note: None },
            Err(note) => CheckOutcome { name, residual: f64::INFINITY, tolerance, passed: false, note: Some(note) },
        })
        .collect()
}
