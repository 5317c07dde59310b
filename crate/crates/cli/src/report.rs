//! The serialized analysis report and its plain-text rendering.

use std::fmt::Write as _;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};
use spinvar_core::uncertainty::{Regime, UncertaintyReport};
use spinvar_core::{CovarianceKind, PrincipalDecomposition, RelationResult, C64};

use crate::input::StateFile;

/// Complex number as `[re, im]`.
pub type Pair = [f64; 2];

fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

fn row_major(m: &Matrix3<C64>) -> Vec<Pair> {
    (0..3).flat_map(|r| (0..3).map(move |c| pair(m[(r, c)]))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Principal {
    pub kind: CovarianceKind,
    /// Descending.
    pub variances: [f64; 3],
    /// `axes[k]` is the unit vector of the k-th principal component.
    pub axes: [[Pair; 3]; 3],
    /// Row-major; rows are `u_k^dag`.
    pub frame: Vec<Pair>,
}

impl From<&PrincipalDecomposition> for Principal {
    fn from(p: &PrincipalDecomposition) -> Self {
        Principal {
            kind: p.kind,
            variances: p.variances,
            axes: p.axes.map(|a| [pair(a[0]), pair(a[1]), pair(a[2])]),
            frame: row_major(&p.frame),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub input: StateFile,
    pub regime: Regime,
    pub mean: [f64; 3],
    /// `M`, row-major `[re, im]` pairs.
    pub m_real: Vec<Pair>,
    /// `M~`, row-major `[re, im]` pairs.
    pub m_herm: Vec<Pair>,
    pub principal_real: Principal,
    pub principal_herm: Principal,
    pub relations: Vec<RelationResult>,
    /// Radians; `null` when there is no phase sensitivity (`j = 0`).
    pub phase_resolution: Option<f64>,
    pub heisenberg: bool,
}

impl Report {
    pub fn new(input: StateFile, analysis: &UncertaintyReport) -> Self {
        let pair_ = &analysis.pair;
        Report {
            input,
            regime: analysis.regime,
            mean: [pair_.mean[0], pair_.mean[1], pair_.mean[2]],
            m_real: row_major(&pair_.m_real.map(C64::from)),
            m_herm: row_major(&pair_.m_herm),
            principal_real: (&analysis.principal_real).into(),
            principal_herm: (&analysis.principal_herm).into(),
            relations: analysis.relations.clone(),
            phase_resolution: analysis.phase_resolution,
            heisenberg: analysis.heisenberg,
        }
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self).expect("report serializes")
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let j = spinvar_core::HalfInteger::from_twice(self.input.two_j);
        let _ = writeln!(w, "spin j = {j}, regime {}", self.regime.tag());
        let _ = writeln!(w, "<j> = ({:.6}, {:.6}, {:.6})", self.mean[0], self.mean[1], self.mean[2]);
        let _ = writeln!(w, "M:");
        for r in 0..3 {
            let row: Vec<String> = (0..3).map(|c| format!("{:>12.6}", self.m_real[3 * r + c][0])).collect();
            let _ = writeln!(w, "  {}", row.join(" "));
        }
        let _ = writeln!(w, "M~:");
        for r in 0..3 {
            let row: Vec<String> = (0..3)
                .map(|c| {
                    let [re, im] = self.m_herm[3 * r + c];
                    format!("{re:>10.6}{im:+.6}i")
                })
                .collect();
            let _ = writeln!(w, "  {}", row.join("  "));
        }
        for (label, p) in [("M", &self.principal_real), ("M~", &self.principal_herm)] {
            let v = p.variances;
            let _ = writeln!(w, "principal variances of {label}: {:.6}, {:.6}, {:.6}", v[0], v[1], v[2]);
        }
        match self.phase_resolution {
            Some(r) => {
                let tag = if self.heisenberg { " (Heisenberg scaling)" } else { "" };
                let _ = writeln!(w, "phase resolution: {r:.6} rad{tag}");
            }
            None => {
                let _ = writeln!(w, "phase resolution: none (no phase sensitivity)");
            }
        }
        let _ = writeln!(w, "relations:");
        for r in &self.relations {
            let verdict = match (r.applicable, r.satisfied, r.equality) {
                (false, _, _) => "n/a".to_string(),
                (true, true, true) => "equality".to_string(),
                (true, true, false) => "ok".to_string(),
                (true, false, _) => "VIOLATED".to_string(),
            };
            match (r.lhs, r.rhs) {
                (Some(l), Some(rh)) => {
                    let _ = writeln!(w, "  {:<32} {l:>14.8} >= {rh:<14.8} {verdict}", r.name);
                }
                _ => {
                    let _ = writeln!(w, "  {:<32} {:>33}", r.name, verdict);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::{FamilyArgs, FamilyName};
    use spinvar_core::{analyze, Tolerances};

    fn report(args: FamilyArgs) -> Report {
        let file = args.to_state_file().unwrap();
        let (ops, state) = file.build(&Tolerances::default(), false).unwrap();
        Report::new(file, &analyze(&state, &ops).unwrap())
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = report(FamilyArgs {
            family: Some(FamilyName::Coherent),
            j: Some("5/2".into()),
            theta: Some(0.3),
            axis: Some("1,2,3".into()),
            ..Default::default()
        });
        let text = r.to_json();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn regime_tags() {
        let r = report(FamilyArgs { family: Some(FamilyName::Cat), j: Some("2".into()), ..Default::default() });
        assert!(r.to_json().contains(r#""regime":"mean-zero""#));
        assert!(r.relations.iter().filter(|x| x.name.starts_with("transversal")).all(|x| !x.applicable));
        assert!(r.to_text().contains("regime mean-zero"));
        let r = report(FamilyArgs { family: Some(FamilyName::Jm), j: Some("1".into()), m: Some("1".into()), ..Default::default() });
        assert_eq!(r.regime, Regime::MeanNonzero);
        assert!(r.relations.iter().filter(|x| x.name == "transversal_sum").all(|x| x.applicable));
    }
}
