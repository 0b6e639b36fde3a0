use crate::conegeom::{HTPredicate, SearchBox};
use crate::hilbscheme::{build_hilb, HilbLattice};
use crate::quadlat::LatVec;
use serde::{Deserialize, Serialize};
use std::path::Path;

use super::claims::find_claim;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read scenario {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("scenario parse error: {0}")]
    Parse(String),
    #[error("scenario field `{field}`: {msg}")]
    Schema { field: &'static str, msg: String },
    #[error("scenario field `{field}` is degenerate: {msg}")]
    Degenerate { field: &'static str, msg: String },
    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),
    #[error("unknown built-in scenario `{0}`")]
    UnknownBuiltin(String),
}

/// Reference values a scenario may pin; claims compare against them when present.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beauville_matrices: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_star: Option<Vec<Vec<i64>>>,
    /// Ascending coefficients.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char_poly: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_line: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_line_square: Option<i64>,
    /// Row `r`: coordinates of `ι₁(b_r)` in `(L2, K2, E)` for `b = (L1, K1, E)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pushforward_coords: Option<Vec<Vec<i64>>>,
    /// Pairings `(L, K, E)` with the boundary facet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_pairings: Option<Vec<i64>>,
}

impl Expectations {
    pub fn is_empty(&self) -> bool {
        *self == Expectations::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub surface_gram: Vec<Vec<i64>>,
    pub hilb_n: u32,
    #[serde(default)]
    pub polarizations: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_denominators: Option<Vec<i64>>,
    #[serde(default)]
    pub mori_generators: Vec<LatVec>,
    #[serde(default)]
    pub ample_generators: Vec<LatVec>,
    #[serde(default = "HTPredicate::defaults")]
    pub ht_predicates: Vec<HTPredicate>,
    #[serde(default)]
    pub search_box: SearchBox,
    /// Ample class used for orbit growth; defaults to the sum of the ample generators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth_class: Option<LatVec>,
    #[serde(default, skip_serializing_if = "Expectations::is_empty")]
    pub expected: Expectations,
    pub claim_ids: Vec<String>,
}

pub const BUILTINS: [&str; 2] = ["hilb3-deg6", "hilb2-deg4"];

fn v(s: &str) -> LatVec {
    LatVec::parse(s).expect("built-in vector")
}

pub fn builtin(name: &str) -> Result<Scenario, ScenarioError> {
    match name {
        "hilb3-deg6" => Ok(Scenario {
            name: name.into(),
            surface_gram: vec![vec![6, 8], vec![8, 6]],
            hilb_n: 3,
            polarizations: vec![vec![1, 0], vec![0, 1]],
            curve_denominators: None,
            mori_generators: ["0,1,0", "1,-3/2,0", "0,-3/2,1", "2,-1/2,-1", "-1,-1/2,2"].map(v).to_vec(),
            ample_generators: ["5,0,-2", "-2,0,5", "11,-7,-3", "-3,-7,11", "3,-7,3"].map(v).to_vec(),
            ht_predicates: HTPredicate::defaults(),
            search_box: SearchBox::default(),
            growth_class: Some(v("3,-7,3")),
            expected: Expectations {
                beauville_matrices: Some(vec![
                    vec![vec![5, 4, 8], vec![-6, -5, -8], vec![0, 0, -1]],
                    vec![vec![-1, 0, 0], vec![-8, -5, -6], vec![8, 4, 5]],
                ]),
                f_star: Some(vec![vec![27, 12, 16], vec![-18, -7, -10], vec![-8, -4, -5]]),
                char_poly: Some(vec![-1, 15, -15, 1]),
                fixed_line: Some(vec![2, -7, 2]),
                fixed_line_square: Some(-84),
                pushforward_coords: Some(vec![vec![0, 1, 0], vec![5, 2, 1], vec![4, 0, 1]]),
                boundary_pairings: Some(vec![14, 0, 0]),
            },
            claim_ids: super::claims::REGISTRY.iter().map(|c| c.id.to_string()).collect(),
        }),
        "hilb2-deg4" => Ok(Scenario {
            name: name.into(),
            surface_gram: vec![vec![4, 7], vec![7, 4]],
            hilb_n: 2,
            polarizations: vec![vec![1, 0], vec![0, 1]],
            curve_denominators: None,
            mori_generators: vec![],
            ample_generators: vec![],
            ht_predicates: HTPredicate::defaults(),
            search_box: SearchBox::default(),
            growth_class: None,
            expected: Expectations::default(),
            claim_ids: ["C01", "C03", "C04", "C20"].iter().map(|p| find_claim(p).unwrap().id.to_string()).collect(),
        }),
        other => Err(ScenarioError::UnknownBuiltin(other.into())),
    }
}

/// A built-in name or a path to a JSON scenario file.
pub fn load_scenario(spec: &str) -> Result<Scenario, ScenarioError> {
    if BUILTINS.contains(&spec) && !Path::new(spec).exists() {
        return builtin(spec);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| ScenarioError::Io { path: spec.into(), msg: e.to_string() })?;
    parse_scenario(&text)
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let scn: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    scn.validate()?;
    Ok(scn)
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let r = self.surface_gram.len();
        if r == 0 || self.surface_gram.iter().any(|row| row.len() != r) {
            return Err(ScenarioError::Schema { field: "surface_gram", msg: "must be a non-empty square matrix".into() });
        }
        for i in 0..r {
            for j in 0..i {
                if self.surface_gram[i][j] != self.surface_gram[j][i] {
                    return Err(ScenarioError::Schema { field: "surface_gram", msg: format!("not symmetric at ({i},{j})") });
                }
            }
        }
        if self.hilb_n < 2 {
            return Err(ScenarioError::Schema { field: "hilb_n", msg: "must be at least 2".into() });
        }
        if self.polarizations.iter().any(|p| p.len() != r) {
            return Err(ScenarioError::Schema { field: "polarizations", msg: format!("each polarization needs {r} coordinates") });
        }
        for (field, list) in [("mori_generators", &self.mori_generators), ("ample_generators", &self.ample_generators)] {
            if list.iter().any(|g| g.len() != r + 1) {
                return Err(ScenarioError::Schema { field, msg: format!("each generator needs {} coordinates", r + 1) });
            }
        }
        if self.growth_class.as_ref().is_some_and(|g| g.len() != r + 1) {
            return Err(ScenarioError::Schema { field: "growth_class", msg: format!("needs {} coordinates", r + 1) });
        }
        if self.search_box.h_bound < 0 || self.search_box.e_numerator_bound < 0 || self.search_box.e_denominator < 1 {
            return Err(ScenarioError::Schema { field: "search_box", msg: "bounds must be non-negative, denominator positive".into() });
        }
        if let Some(d) = &self.curve_denominators {
            if d.len() != r + 1 || d.iter().any(|x| *x < 1) {
                return Err(ScenarioError::Schema { field: "curve_denominators", msg: format!("needs {} positive entries", r + 1) });
            }
        }
        for id in &self.claim_ids {
            find_claim(id).ok_or_else(|| ScenarioError::UnknownClaim(id.clone()))?;
        }
        self.hilb().map(|_| ())
    }

    pub fn hilb(&self) -> Result<HilbLattice, ScenarioError> {
        build_hilb(&self.surface_gram, self.hilb_n, &self.polarizations)
            .map_err(|e| ScenarioError::Degenerate { field: "surface_gram", msg: e.to_string() })
    }

    pub fn to_json(&self) -> String {
        super::report::canonical_json(&serde_json::to_value(self).expect("scenario serializes"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_load_and_round_trip() {
        for name in BUILTINS {
            let s = load_scenario(name).unwrap();
            s.validate().unwrap();
            assert_eq!(parse_scenario(&s.to_json()).unwrap(), s);
        }
        let s = builtin("hilb2-deg4").unwrap();
        assert_eq!(s.surface_gram, vec![vec![4, 7], vec![7, 4]]);
        assert_eq!(s.hilb_n, 2);
    }

    #[test]
    fn error_classes() {
        assert!(matches!(parse_scenario("{"), Err(ScenarioError::Parse(_))));
        let mut s = builtin("hilb3-deg6").unwrap();
        let base = serde_json::to_value(&s).unwrap();
        let mut extra = base.clone();
        extra["bogus"] = serde_json::json!(1);
        match parse_scenario(&extra.to_string()) {
            Err(ScenarioError::Parse(m)) => assert!(m.contains("bogus")),
            other => panic!("{other:?}"),
        }
        s.surface_gram = vec![vec![6, 6], vec![6, 6]];
        assert!(matches!(parse_scenario(&s.to_json()), Err(ScenarioError::Degenerate { field: "surface_gram", .. })));
        s.surface_gram = vec![vec![6, 8], vec![7, 6]];
        assert!(matches!(parse_scenario(&s.to_json()), Err(ScenarioError::Schema { field: "surface_gram", .. })));
        let mut s = builtin("hilb3-deg6").unwrap();
        s.claim_ids.push("C99".into());
        assert!(matches!(parse_scenario(&s.to_json()), Err(ScenarioError::UnknownClaim(_))));
        assert!(matches!(load_scenario("/nonexistent/x.json"), Err(ScenarioError::Io { .. })));
    }
}
