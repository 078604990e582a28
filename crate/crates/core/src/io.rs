//! File formats: configuration and family ingestion from TOML-style
//! key-value documents, the line-oriented series format, and canonical JSON
//! for the geometric data.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::criterion::RatioFamily;
use crate::lattice::LatticeConfig;
use crate::series::SparseSeries;

#[derive(Deserialize)]
struct ConfigDoc {
    name: Option<String>,
    points: Vec<Vec<i64>>,
    /// 1-based indices of the distinguished subset.
    aprime: Vec<usize>,
    height: Option<Vec<i64>>,
}

#[derive(Deserialize)]
struct FamilyDoc {
    name: Option<String>,
    numerator: Vec<Vec<u64>>,
    denominator: Vec<Vec<u64>>,
}

pub fn parse_config(text: &str, fallback_name: &str) -> Result<LatticeConfig> {
    let doc: ConfigDoc = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.aprime.iter().any(|&i| i == 0) {
        return Err(Error::Parse(
            "aprime indices are 1-based; found 0".into(),
        ));
    }
    let aprime: Vec<usize> = doc.aprime.iter().map(|&i| i - 1).collect();
    LatticeConfig::new(
        doc.name.unwrap_or_else(|| fallback_name.to_string()),
        doc.points,
        &aprime,
        doc.height,
    )
}

pub fn read_config_file(path: &Path) -> Result<LatticeConfig> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "config".into());
    parse_config(&text, &name)
}

pub fn parse_family(text: &str, fallback_name: &str) -> Result<RatioFamily> {
    let doc: FamilyDoc = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let rank = doc
        .numerator
        .first()
        .or(doc.denominator.first())
        .map(|r| r.len())
        .ok_or_else(|| Error::Parse("empty family".into()))?;
    RatioFamily::new(
        doc.name.unwrap_or_else(|| fallback_name.to_string()),
        rank,
        doc.numerator,
        doc.denominator,
    )
}

pub fn read_family_file(path: &Path) -> Result<RatioFamily> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "family".into());
    parse_family(&text, &name)
}

/// One line per term: the solution vector, the monomial exponents, and the
/// coefficient as a numerator/denominator pair. Stable under version
/// control.
pub fn series_to_string(cfg: &LatticeConfig, s: &SparseSeries) -> String {
    let mut out = String::new();
    out.push_str(&format!("# series u={:?} trunc={}\n", s.u, s.trunc));
    out.push_str(&format!(
        "# config {} points={} distinguished={}\n",
        cfg.name,
        cfg.num_points(),
        cfg.aprime_len()
    ));
    for (l, c) in &s.terms {
        let exps = SparseSeries::exponents(cfg, l);
        let lrepr: Vec<String> = l.iter().map(|x| x.to_string()).collect();
        let erepr: Vec<String> = exps.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!(
            "l={} exp={} coeff={}/{}\n",
            lrepr.join(","),
            erepr.join(","),
            c.numer(),
            c.denom()
        ));
    }
    out
}

/// Canonical JSON for the cone and group data (facets and basis as decimal
/// strings, deterministic order).
pub fn geometry_json(cfg: &LatticeConfig) -> String {
    serde_json::json!({
        "name": cfg.name,
        "group": {
            "rank": cfg.group().rank,
            "basis": cfg.group().basis,
        },
        "cone": {
            "span_dim": cfg.cone().span_dim,
            "facets": cfg.cone().facets,
        },
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: &str = r#"
name = "cubic-surface"
points = [
  [1, 1, 1, 0, 1],
  [0, 1, 1, 1, 1],
  [3, 0, 0, 0, 1],
  [0, 3, 0, 0, 1],
  [0, 0, 3, 0, 1],
  [0, 0, 0, 3, 1],
]
aprime = [1, 2]
"#;

    const FAMILY: &str = r#"
name = "f30-15-10-6"
numerator = [[30], [1]]
denominator = [[15], [10], [6]]
"#;

    #[test]
    fn parse_round_trip() {
        let cfg = parse_config(CONFIG, "x").unwrap();
        assert_eq!(cfg.num_points(), 6);
        assert_eq!(cfg.beta(), &[1, 2, 2, 1, 2]);
        let fam = parse_family(FAMILY, "x").unwrap();
        assert_eq!(fam.numerator, vec![vec![30], vec![1]]);
    }

    #[test]
    fn one_based_indices_enforced() {
        let bad = CONFIG.replace("aprime = [1, 2]", "aprime = [0, 1]");
        assert!(parse_config(&bad, "x").is_err());
    }

    #[test]
    fn series_format_is_line_oriented() {
        let cfg = parse_config(CONFIG, "x").unwrap();
        let u: Vec<i64> = cfg.beta().iter().map(|&x| -x).collect();
        let s = crate::series::expand(&cfg, &u, 3).unwrap();
        let text = series_to_string(&cfg, &s);
        assert!(text.contains("l=0,0,0,0,0,0 exp=-1,-1,0,0,0,0 coeff=1/1"));
    }

    #[test]
    fn geometry_json_is_deterministic() {
        let cfg = parse_config(CONFIG, "x").unwrap();
        assert_eq!(geometry_json(&cfg), geometry_json(&cfg));
        assert!(geometry_json(&cfg).contains("\"rank\":4"));
    }
}
