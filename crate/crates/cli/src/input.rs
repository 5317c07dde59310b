//! State files and inline family arguments.
//!
//! ```json
//! {"two_j": 2, "kind": "pure",
//!  "amplitudes": [{"two_m": 2, "re": 0.6, "im": 0.0}, {"two_m": -2, "re": 0.0, "im": 0.8}]}
//! {"two_j": 1, "kind": "density", "matrix": [{"re": 0.5, "im": 0}, ...]}
//! {"two_j": 4, "kind": "family", "family": {"name": "squeezed_exact", "params": {"xi": 0.1}}}
//! ```
//!
//! Pure amplitudes are keyed by `two_m`; missing projections are zero.
//! Density matrices are row-major in the `m`-descending basis.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use spinvar_core::{
    basis_state, cat_state, coherent_state, ramp_state, spin_operators_with, squeezed_exact, states::squeezed_approx,
    HalfInteger, OperatorTriple, QuantumState, RotationSpec, Tolerances, C64,
};

use crate::failure::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Density,
    Family,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Jm,
    Coherent,
    #[value(name = "squeezed_approx", alias = "squeezed-approx")]
    SqueezedApprox,
    #[value(name = "squeezed_exact", alias = "squeezed-exact")]
    SqueezedExact,
    Cat,
    Ramp,
}

impl FamilyName {
    /// Parameters beyond `two_j` that the family requires.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            FamilyName::Jm => &["two_m"],
            FamilyName::Coherent => &["theta", "axis"],
            FamilyName::SqueezedApprox | FamilyName::SqueezedExact => &["xi"],
            FamilyName::Cat | FamilyName::Ramp => &[],
        }
    }

    /// Name as written in state files and on the command line.
    pub fn label(self) -> &'static str {
        match self {
            FamilyName::Jm => "jm",
            FamilyName::Coherent => "coherent",
            FamilyName::SqueezedApprox => "squeezed_approx",
            FamilyName::SqueezedExact => "squeezed_exact",
            FamilyName::Cat => "cat",
            FamilyName::Ramp => "ramp",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Amplitude {
    pub two_m: i32,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub name: FamilyName,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub two_j: i32,
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<Amplitude>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
}

/// Inline family arguments as given on the command line.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FamilyArgs {
    pub family: Option<FamilyName>,
    pub j: Option<String>,
    pub m: Option<String>,
    pub theta: Option<f64>,
    pub axis: Option<String>,
    pub xi: Option<f64>,
}

/// Parses `"x"`, `"y"`, `"z"` or three comma-separated numbers.
pub fn parse_axis(s: &str) -> Result<[f64; 3], Failure> {
    match s.trim() {
        "x" => return Ok([1.0, 0.0, 0.0]),
        "y" => return Ok([0.0, 1.0, 0.0]),
        "z" => return Ok([0.0, 0.0, 1.0]),
        _ => {}
    }
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::input(format!("--axis: expected x, y, z or three comma-separated numbers, got `{s}`")))?;
    <[f64; 3]>::try_from(parts)
        .map_err(|_| Failure::input(format!("--axis: expected three components, got `{s}`")))
}

fn half(flag: &str, s: &str) -> Result<HalfInteger, Failure> {
    s.parse().map_err(|e| Failure::input(format!("{flag}: {e}")))
}

impl FamilyArgs {
    /// The equivalent family state file.
    pub fn to_state_file(&self) -> Result<StateFile, Failure> {
        let name = self.family.ok_or_else(|| Failure::input("either --file or --family is required"))?;
        let j = half("--j", self.j.as_deref().ok_or_else(|| Failure::input("--j is required with --family"))?)?;
        let mut params = BTreeMap::new();
        let unused = |flag: &str, given: bool| -> Result<(), Failure> {
            if given {
                return Err(Failure::input(format!("{flag} does not apply to family {}", name.label())));
            }
            Ok(())
        };
        let wants = |p: &str| name.params().contains(&p);
        if wants("two_m") {
            let m = half("--m", self.m.as_deref().ok_or_else(|| Failure::input("--m is required for family jm"))?)?;
            params.insert("two_m".into(), Value::from(m.twice()));
        } else {
            unused("--m", self.m.is_some())?;
        }
        if wants("theta") {
            let theta = self.theta.ok_or_else(|| Failure::input("--theta is required for family coherent"))?;
            let axis = parse_axis(self.axis.as_deref().unwrap_or("z"))?;
            params.insert("theta".into(), Value::from(theta));
            params.insert("axis".into(), Value::from(axis.to_vec()));
        } else {
            unused("--theta", self.theta.is_some())?;
            unused("--axis", self.axis.is_some())?;
        }
        if wants("xi") {
            let xi = self.xi.ok_or_else(|| Failure::input("--xi is required for squeezed families"))?;
            params.insert("xi".into(), Value::from(xi));
        } else {
            unused("--xi", self.xi.is_some())?;
        }
        Ok(StateFile {
            two_j: j.twice(),
            kind: StateKind::Family,
            amplitudes: None,
            matrix: None,
            family: Some(FamilySpec { name, params }),
        })
    }
}

/// Reads and parses a state file; errors name the offending field.
pub fn read_state_file(path: &Path) -> Result<StateFile, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    parse_state_file(&text)
}

pub fn parse_state_file(text: &str) -> Result<StateFile, Failure> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Failure::input(format!("invalid state file at `{path}`: {}", e.inner()))
    })
}

fn param_f64(params: &BTreeMap<String, Value>, key: &str) -> Result<f64, Failure> {
    params
        .get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| Failure::input(format!("family.params.{key}: expected a number")))
}

impl StateFile {
    /// Spin operators for `two_j` and the validated state.
    pub fn build(&self, tol: &Tolerances, normalize: bool) -> Result<(OperatorTriple, QuantumState), Failure> {
        if self.two_j < 0 {
            return Err(Failure::input(format!("two_j: must be non-negative, got {}", self.two_j)));
        }
        let j = HalfInteger::from_twice(self.two_j);
        let ops = spin_operators_with(j, *tol)?;
        let basis = ops.basis();
        let d = basis.dim();
        let present = |name: &str, yes: bool| -> Result<(), Failure> {
            if yes {
                return Err(Failure::input(format!("{name}: not allowed for kind {:?}", self.kind)));
            }
            Ok(())
        };
        let state = match self.kind {
            StateKind::Pure => {
                present("matrix", self.matrix.is_some())?;
                present("family", self.family.is_some())?;
                let amps = self.amplitudes.as_ref().ok_or_else(|| Failure::input("amplitudes: required for kind pure"))?;
                let mut v = DVector::<C64>::zeros(d);
                let mut seen = vec![false; d];
                for (n, a) in amps.iter().enumerate() {
                    let m = HalfInteger::from_twice(a.two_m);
                    let k = basis
                        .index_of(m)
                        .map_err(|e| Failure::input(format!("amplitudes[{n}].two_m: {e}")))?;
                    if std::mem::replace(&mut seen[k], true) {
                        return Err(Failure::input(format!("amplitudes[{n}].two_m: duplicate projection {m}")));
                    }
                    v[k] = C64::new(a.re, a.im);
                }
                if normalize {
                    QuantumState::pure_normalized(basis, v)?
                } else {
                    QuantumState::pure(basis, v, tol)?
                }
            }
            StateKind::Density => {
                present("amplitudes", self.amplitudes.is_some())?;
                present("family", self.family.is_some())?;
                let entries = self.matrix.as_ref().ok_or_else(|| Failure::input("matrix: required for kind density"))?;
                if entries.len() != d * d {
                    return Err(Failure::input(format!("matrix: expected {} entries, got {}", d * d, entries.len())));
                }
                let rho = DMatrix::from_row_iterator(d, d, entries.iter().map(|e| C64::new(e.re, e.im)));
                QuantumState::density(basis, rho, tol)?
            }
            StateKind::Family => {
                present("amplitudes", self.amplitudes.is_some())?;
                present("matrix", self.matrix.is_some())?;
                let spec = self.family.as_ref().ok_or_else(|| Failure::input("family: required for kind family"))?;
                if let Some(extra) = spec.params.keys().find(|k| !spec.name.params().contains(&k.as_str())) {
                    return Err(Failure::input(format!("family.params.{extra}: unknown parameter for {}", spec.name.label())));
                }
                build_family(&ops, spec)?
            }
        };
        Ok((ops, state))
    }
}

fn build_family(ops: &OperatorTriple, spec: &FamilySpec) -> Result<QuantumState, Failure> {
    let j = ops.j();
    let p = &spec.params;
    let state = match spec.name {
        FamilyName::Jm => {
            let two_m = p
                .get("two_m")
                .and_then(Value::as_i64)
                .and_then(|t| i32::try_from(t).ok())
                .ok_or_else(|| Failure::input("family.params.two_m: expected an integer"))?;
            basis_state(j, HalfInteger::from_twice(two_m))?
        }
        FamilyName::Coherent => {
            let theta = param_f64(p, "theta")?;
            let axis: [f64; 3] = p
                .get("axis")
                .and_then(|v| serde_json::from_value(v.clone()).ok())
                .ok_or_else(|| Failure::input("family.params.axis: expected three numbers"))?;
            // The axis is normalized; only its direction matters.
            let spec = RotationSpec::about(theta, Vector3::from(axis))?;
            coherent_state(ops, &spec)?
        }
        FamilyName::SqueezedApprox => squeezed_approx(ops, param_f64(p, "xi")?)?.state,
        FamilyName::SqueezedExact => squeezed_exact(ops, param_f64(p, "xi")?)?,
        FamilyName::Cat => cat_state(j)?,
        FamilyName::Ramp => ramp_state(j)?,
    };
    Ok(state)
}
