//! Experiment configuration. Configs are read from TOML or, for echoed
//! report configs, from JSON; every section is optional and each command
//! checks for the sections it needs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FieldKind {
    #[default]
    #[serde(rename = "Q")]
    Q,
    #[serde(rename = "Q(i)")]
    Qi,
}

/// A map given either as an expression in `z` or as coefficient lists of
/// numerator and denominator, lowest degree first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    Expr(String),
    Coeffs {
        num: Vec<String>,
        #[serde(default = "one_list")]
        den: Vec<String>,
    },
}

fn one_list() -> Vec<String> {
    vec!["1".into()]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub f: MapSpec,
    /// Defaults to `f`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<MapSpec>,
}

/// One monomial `c · x0^i x1^(a−i) y0^j y1^(b−j)` of a curve equation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveTerm {
    pub i: u32,
    pub j: u32,
    pub c: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubschemeKind {
    Diagonal,
    Point,
    Curve,
    /// `x1·y1 = 0`, the two lines through `(∞, ∞)`.
    LinesThroughInfinity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubschemeSpec {
    pub kind: SubschemeKind,
    /// Coordinates of a product point; `"inf"` is the point at infinity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bidegree: Option<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<CurveTerm>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    /// Height bound H.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<u64>,
    /// Horizon S_max.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_max: Option<u32>,
    /// p-adic precision N.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    /// Truncation degree D.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<u32>,
    /// Preimage levels for witness searches.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_depth: Option<u32>,
    /// How many tail points per level to list in the report.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub list_limit: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    pub p: u64,
    #[serde(default = "one_var")]
    pub nvars: usize,
    /// Either a univariate expression in `z` or explicit terms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<SeriesTerm>>,
    /// Exponents `m_j` of the radii `p^(-m_j)`, as fractions like `"1/2"`.
    pub radius: Vec<String>,
}

fn one_var() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesTerm {
    pub index: Vec<u32>,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermSpec {
    pub p: u64,
    /// `F(z) = Σ c_k z^k`, lowest degree first.
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<String>>>,
    /// Basis vectors of a subspace, for period computations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<Vec<Vec<String>>>,
    /// Dimension for a bare period bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<u64>>,
}

/// A point `u + v·√disc` of degree at most two.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadSpec {
    pub u: String,
    pub v: String,
    pub disc: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sym2Spec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<QuadSpec>>,
    /// Number of extra random points drawn from the seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default)]
    pub field: FieldKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subscheme: Option<SubschemeSpec>,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<u64>>,
    /// Seed points for witness searches; `"inf"` allowed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub germ: Option<GermSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<SeriesSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sym2: Option<Sym2Spec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// JSON when the extension says so, TOML otherwise.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let r = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        };
        r.map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn validate(&self) -> Result<(), CliError> {
        let b = &self.bounds;
        let positive = [
            ("bounds.height", b.height.map(|x| x as i128)),
            ("bounds.precision", b.precision.map(i128::from)),
            ("bounds.trunc", b.trunc.map(i128::from)),
            ("bounds.grid_depth", b.grid_depth.map(i128::from)),
            ("bounds.s_max", b.s_max.map(i128::from)),
        ];
        for (name, v) in positive {
            if v == Some(0) {
                return Err(CliError::Config(format!("{name} must be positive")));
            }
        }
        if let Some(ps) = &self.primes {
            if ps.iter().any(|&p| !piq_lab::dynamics_p1::is_prime(p)) {
                return Err(CliError::Config("primes: every entry must be prime".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
        field = "Q"
        seed = 7
        [system]
        f = "z^2"
        g = { num = ["0", "0", "1"] }
        [subscheme]
        kind = "point"
        p = "0"
        q = "inf"
        [bounds]
        height = 30
        s_max = 10
        [[series]]
        p = 5
        expr = "5z + z^2"
        radius = ["1/2"]
    "#;

    #[test]
    fn round_trips_through_toml_and_json() {
        let cfg = ExperimentConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(cfg.bounds.height, Some(30));
        assert!(matches!(cfg.system.as_ref().unwrap().g, Some(MapSpec::Coeffs { .. })));
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&json).unwrap(), cfg);
    }

    #[test]
    fn errors_carry_location() {
        let err = ExperimentConfig::from_toml("[bounds]\nheight = \"x\"\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2") && msg.contains("height"), "{msg}");
        let err = ExperimentConfig::from_toml("[bounds]\nheigth = 3\n").unwrap_err();
        assert!(err.to_string().contains("heigth"));
        assert!(ExperimentConfig::from_toml("[bounds]\nheight = 0\n").is_err());
        assert!(ExperimentConfig::from_toml("primes = [4]\n").is_err());
    }
}
