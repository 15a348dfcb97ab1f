//! Minimal elliptic surfaces with `p_g > 0`, described by `c_π` and the
//! multiplicities of their multiple fibers, and the dimension-zero
//! generating function
//!
//! ```text
//! GW⁰_X = c_π Σ_d GW₁^loc(F, d) t^d + Σ_k Σ_d GW₁^loc(F_{m_k}, d) t_k^d
//! ```
//!
//! Spec files are JSON:
//!
//! ```json
//! {"c_pi": 1, "multiplicities": [2, 3], "labels": ["A", "B"]}
//! {"chi_X": 3, "base_genus": 0, "multiplicities": []}
//! ```
//!
//! When both forms are present they must agree, with `χ(O_C) = 1 − g`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{floor_u64, rat_int, Rat};
use crate::local::{local_gw_multiple_closed, local_gw_regular};
use crate::series::{FiberMonomial, SurfaceSeries};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fiber {
    pub label: String,
    pub m: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChiForm {
    pub chi_x: i64,
    pub base_genus: i64,
}

impl ChiForm {
    /// `χ(O_X) − 2χ(O_C)` with `χ(O_C) = 1 − g`.
    pub fn c_pi(&self) -> i64 {
        self.chi_x - 2 * (1 - self.base_genus)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceSpec {
    c_pi: i64,
    fibers: Vec<Fiber>,
    // remembered so that writing a loaded spec reproduces its input form
    c_pi_given: bool,
    chi: Option<ChiForm>,
    labels_given: bool,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c_pi: Option<i64>,
    #[serde(rename = "chi_X", default, skip_serializing_if = "Option::is_none")]
    chi_x: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base_genus: Option<i64>,
    multiplicities: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

fn default_label(k: usize) -> String {
    format!("F{}", k + 1)
}

impl SurfaceSpec {
    /// Spec with default labels `F1, F2, …`.
    pub fn new(c_pi: i64, multiplicities: &[u64]) -> Result<Self> {
        let file = SpecFile {
            c_pi: Some(c_pi),
            multiplicities: multiplicities.iter().map(|&m| m as i64).collect(),
            ..SpecFile::default()
        };
        Self::from_file(file).map_err(|message| Error::SpecInvalid {
            path: PathBuf::from("<inline>"),
            message,
        })
    }

    pub fn with_labels(c_pi: i64, fibers: &[(&str, u64)]) -> Result<Self> {
        let file = SpecFile {
            c_pi: Some(c_pi),
            multiplicities: fibers.iter().map(|&(_, m)| m as i64).collect(),
            labels: Some(fibers.iter().map(|&(l, _)| l.to_string()).collect()),
            ..SpecFile::default()
        };
        Self::from_file(file).map_err(|message| Error::SpecInvalid {
            path: PathBuf::from("<inline>"),
            message,
        })
    }

    pub fn from_chi(chi_x: i64, base_genus: i64, multiplicities: &[u64]) -> Result<Self> {
        let file = SpecFile {
            chi_x: Some(chi_x),
            base_genus: Some(base_genus),
            multiplicities: multiplicities.iter().map(|&m| m as i64).collect(),
            ..SpecFile::default()
        };
        Self::from_file(file).map_err(|message| Error::SpecInvalid {
            path: PathBuf::from("<inline>"),
            message,
        })
    }

    fn from_file(file: SpecFile) -> std::result::Result<Self, String> {
        let chi = match (file.chi_x, file.base_genus) {
            (Some(chi_x), Some(base_genus)) => {
                if base_genus < 0 {
                    return Err(format!("base_genus must be >= 0, got {base_genus}"));
                }
                Some(ChiForm { chi_x, base_genus })
            }
            (None, None) => None,
            (Some(_), None) => return Err("chi_X given without base_genus".into()),
            (None, Some(_)) => return Err("base_genus given without chi_X".into()),
        };
        let c_pi = match (file.c_pi, chi) {
            (Some(c), Some(chi)) if c != chi.c_pi() => {
                return Err(format!(
                    "c_pi = {c} contradicts chi_X - 2(1 - base_genus) = {}",
                    chi.c_pi()
                ))
            }
            (Some(c), _) => c,
            (None, Some(chi)) => chi.c_pi(),
            (None, None) => return Err("need c_pi or chi_X with base_genus".into()),
        };
        let mut mults = Vec::with_capacity(file.multiplicities.len());
        for (k, &m) in file.multiplicities.iter().enumerate() {
            if m < 2 {
                return Err(format!(
                    "multiplicities[{k}] = {m}, multiple fibers need m >= 2"
                ));
            }
            mults.push(m as u64);
        }
        let labels_given = file.labels.is_some();
        let labels = match file.labels {
            Some(labels) if labels.len() != mults.len() => {
                return Err(format!(
                    "{} labels for {} multiplicities",
                    labels.len(),
                    mults.len()
                ))
            }
            Some(labels) => labels,
            None => (0..mults.len()).map(default_label).collect(),
        };
        Ok(SurfaceSpec {
            c_pi,
            fibers: labels
                .into_iter()
                .zip(mults)
                .map(|(label, m)| Fiber { label, m })
                .collect(),
            c_pi_given: file.c_pi.is_some(),
            chi,
            labels_given,
        })
    }

    /// Parses spec JSON; `path` is only used in error messages.
    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(text).map_err(|e| Error::SpecParse {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_file(file).map_err(|message| Error::SpecInvalid {
            path: path.to_path_buf(),
            message,
        })
    }

    /// Spec JSON in the same form it was given (pretty-printed, trailing newline).
    pub fn to_json(&self) -> String {
        let file = SpecFile {
            c_pi: self.c_pi_given.then_some(self.c_pi),
            chi_x: self.chi.map(|c| c.chi_x),
            base_genus: self.chi.map(|c| c.base_genus),
            multiplicities: self.fibers.iter().map(|f| f.m as i64).collect(),
            labels: self
                .labels_given
                .then(|| self.fibers.iter().map(|f| f.label.clone()).collect()),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("spec serializes");
        s.push('\n');
        s
    }

    pub fn c_pi(&self) -> i64 {
        self.c_pi
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    pub fn chi(&self) -> Option<ChiForm> {
        self.chi
    }

    pub fn multiplicities(&self) -> Vec<u64> {
        self.fibers.iter().map(|f| f.m).collect()
    }
}

/// Reads and validates a spec file.
pub fn load_spec(path: impl AsRef<Path>) -> Result<SurfaceSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    SurfaceSpec::from_json(&text, path)
}

/// `GW⁰_X` up to total `t`-degree `bound`, in the class-graded ring.
pub fn gw0_series(spec: &SurfaceSpec, bound: &Rat) -> Result<SurfaceSeries> {
    let mults = spec.multiplicities();
    let mut out = SurfaceSeries::zero(spec.clone(), bound.clone());
    let Some(max_t) = floor_u64(bound) else {
        return Ok(out);
    };
    let c_pi = rat_int(spec.c_pi());
    if spec.c_pi() != 0 {
        for d in 1..=max_t {
            out.add_term(
                FiberMonomial::t(d, mults.len()),
                &c_pi * local_gw_regular(d)?,
            );
        }
    }
    for (k, &m) in mults.iter().enumerate() {
        // t_k^d has degree d/m
        let max_d = floor_u64(&(bound * rat_int(m as i64))).unwrap_or(0);
        for d in 1..=max_d {
            out.add_term(
                FiberMonomial::fiber(k, d, &mults),
                local_gw_multiple_closed(m, d)?,
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, sigma_u64};
    use num_traits::Zero;
    use std::collections::BTreeMap;

    fn parse(text: &str) -> Result<SurfaceSpec> {
        SurfaceSpec::from_json(text, Path::new("test.json"))
    }

    #[test]
    fn load_examples() {
        let s = parse(r#"{"c_pi":0,"multiplicities":[2,3]}"#).unwrap();
        assert_eq!(s.c_pi(), 0);
        assert_eq!(s.multiplicities(), vec![2, 3]);
        assert_eq!(s.fibers()[1].label, "F2");

        let s = parse(r#"{"chi_X":3,"base_genus":0,"multiplicities":[]}"#).unwrap();
        assert_eq!(s.c_pi(), 1);

        let s = parse(r#"{"chi_X":1,"base_genus":1,"c_pi":1,"multiplicities":[]}"#).unwrap();
        assert_eq!(s.c_pi(), 1);

        assert!(matches!(
            parse(r#"{"c_pi":1,"multiplicities":[1]}"#),
            Err(Error::SpecInvalid { .. })
        ));
    }

    #[test]
    fn load_rejections() {
        let invalid = [
            r#"{"c_pi":2,"chi_X":3,"base_genus":0,"multiplicities":[]}"#,
            r#"{"chi_X":3,"multiplicities":[]}"#,
            r#"{"base_genus":3,"multiplicities":[]}"#,
            r#"{"multiplicities":[2]}"#,
            r#"{"c_pi":0,"multiplicities":[2,3],"labels":["x"]}"#,
            r#"{"chi_X":3,"base_genus":-1,"multiplicities":[]}"#,
            r#"{"c_pi":0,"multiplicities":[-2]}"#,
        ];
        for text in invalid {
            assert!(
                matches!(parse(text), Err(Error::SpecInvalid { .. })),
                "{text}"
            );
        }
        let malformed = [
            "{\"c_pi\": 0,\n \"multiplicities\": [2,",
            r#"{"c_pi":"one","multiplicities":[]}"#,
            r#"{"c_pi":0}"#,
            r#"{"c_pi":0,"multiplicities":[],"extra":1}"#,
        ];
        for text in malformed {
            assert!(
                matches!(parse(text), Err(Error::SpecParse { .. })),
                "{text}"
            );
        }
        match parse("{\"c_pi\": 0,\n \"multiplicities\": [2,") {
            Err(Error::SpecParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            load_spec("/nonexistent/x.json"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn emit_round_trip() {
        let inputs = [
            r#"{"c_pi":0,"multiplicities":[2,3]}"#,
            r#"{"chi_X":3,"base_genus":0,"multiplicities":[]}"#,
            r#"{"c_pi":1,"chi_X":1,"base_genus":1,"multiplicities":[5],"labels":["north"]}"#,
        ];
        for text in inputs {
            let a = parse(text).unwrap();
            let emitted = a.to_json();
            let b = parse(&emitted).unwrap();
            assert_eq!(a, b);
            assert_eq!(emitted, b.to_json());
        }
    }

    #[test]
    fn gw0_examples() {
        let k3 = SurfaceSpec::new(0, &[]).unwrap();
        assert!(gw0_series(&k3, &rat_int(7)).unwrap().is_empty());

        let s = SurfaceSpec::new(1, &[]).unwrap();
        let g = gw0_series(&s, &rat_int(2)).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.coeff(&FiberMonomial::t(1, 0)), rat_int(-1));
        assert_eq!(g.coeff(&FiberMonomial::t(2, 0)), rat(-3, 2));

        let s = SurfaceSpec::new(1, &[2]).unwrap();
        let g = gw0_series(&s, &rat_int(1)).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.coeff(&FiberMonomial::fiber(0, 1, &[2])), rat_int(1));
        assert_eq!(g.coeff(&FiberMonomial::t(1, 1)), rat(-1, 2));
    }

    /// Re-derives the coefficient of `t^D` by enumerating `(fiber, d)` pairs
    /// whose monomial `t_k^d` carries into `t^{d/m_k}`.
    #[test]
    fn pure_t_coefficients_match_rederivation() {
        let spec = SurfaceSpec::new(3, &[2, 3, 3, 4]).unwrap();
        let bound = rat_int(12);
        let g = gw0_series(&spec, &bound).unwrap();
        for big_d in 1..=12u64 {
            let mut expect = rat(-(3 * sigma_u64(big_d) as i64), big_d as i64);
            for &m in &[2u64, 3, 3, 4] {
                let d = big_d * m;
                let val = rat(sigma_u64(d) as i64, d as i64)
                    - rat((m * sigma_u64(d / m)) as i64, d as i64);
                expect += val;
            }
            assert_eq!(g.coeff(&FiberMonomial::t(big_d, 4)), expect, "D = {big_d}");
        }
        // fractional degrees only come from fiber terms
        let collapsed: BTreeMap<Rat, Rat> = g.collapsed();
        assert!(collapsed.keys().all(|k| !k.is_zero()));
        assert_eq!(collapsed.get(&rat(1, 4)), Some(&rat_int(1)));
    }

    #[test]
    fn negative_bound_is_empty() {
        let s = SurfaceSpec::new(1, &[2]).unwrap();
        assert!(gw0_series(&s, &rat(-1, 2)).unwrap().is_empty());
    }
}
