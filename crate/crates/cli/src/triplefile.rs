use anyhow::{anyhow, bail, Context, Result};
use manin::coeff::Scalar;
use manin::doubles::{CatalogEntry, DoubleCase, ManinTriple};
use manin::liealg::{Constraint, LieAlgebra, LinearMap, SymmetricForm};
use manin::tensor::Bivector;
use serde::{Deserialize, Serialize};

pub const TRIPLE_SCHEMA: &str = "manin-triple/v1";

/// Portable description of a Manin triple: the primal constants `c`, the
/// dual constants `f`, and optionally a basis change onto one of the
/// kinematical algebras plus the values the pipeline should reproduce.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleFile {
    #[serde(default)]
    pub schema: Option<String>,
    pub dim: usize,
    pub basis: Vec<String>,
    pub c: Vec<(usize, usize, usize, String)>,
    pub f: Vec<(usize, usize, usize, String)>,
    #[serde(default)]
    pub params: Vec<ParamSpec>,
    #[serde(default)]
    pub radicals: Vec<RadicalSpec>,
    #[serde(default)]
    pub kinematical_map: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub expected: Option<ExpectedBlock>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    pub name: String,
    #[serde(default)]
    pub constraints: Vec<String>,
}

/// Names a symbol that stands for the square root of `square`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadicalSpec {
    pub name: String,
    pub square: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedBlock {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub verdict: Option<String>,
    #[serde(default)]
    pub class: Option<String>,
    #[serde(default)]
    pub mcybe: Option<String>,
    #[serde(default)]
    pub lorentz: Option<Vec<usize>>,
    #[serde(default)]
    pub pairing: Option<Vec<(usize, usize, String)>>,
    #[serde(default)]
    pub r_skew: Option<Vec<(usize, usize, String)>>,
    #[serde(default)]
    pub delta: Option<Vec<(usize, usize, usize, String)>>,
}

/// The file resolved into exact objects, ready for the pipeline.
pub struct LoadedTriple {
    pub triple: ManinTriple,
    pub constraints: Vec<Constraint>,
    pub map: Option<LinearMap>,
    pub expected_id: Option<String>,
    pub verdict: Option<String>,
    pub class: Option<String>,
    pub mcybe: Option<String>,
    pub lorentz: Option<Vec<usize>>,
    pub pairing: Option<SymmetricForm>,
    pub r_skew: Option<Bivector>,
    pub delta: Vec<(usize, Bivector)>,
}

impl TripleFile {
    pub fn parse(text: &str) -> Result<TripleFile> {
        let tf: TripleFile = serde_json::from_str(text).context("triple file does not parse")?;
        if let Some(s) = &tf.schema {
            if s != TRIPLE_SCHEMA {
                bail!("unsupported schema tag {s:?}, expected {TRIPLE_SCHEMA:?}");
            }
        }
        Ok(tf)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("triple file serializes");
        s.push('\n');
        s
    }

    fn scalar(&self, src: &str) -> Result<Scalar> {
        let mut s = Scalar::parse(src).map_err(|e| anyhow!("coefficient {src:?}: {e}"))?;
        for rad in &self.radicals {
            let square = Scalar::parse(&rad.square)
                .map_err(|e| anyhow!("radical {:?} square: {e}", rad.name))?;
            let root = Scalar::sqrt_of(&square)
                .map_err(|e| anyhow!("radical {:?} square: {e}", rad.name))?;
            s = s
                .substitute_param(&rad.name, &root)
                .map_err(|e| anyhow!("radical {:?} in {src:?}: {e}", rad.name))?;
        }
        Ok(s)
    }

    fn entries(
        &self,
        rows: &[(usize, usize, usize, String)],
        what: &str,
    ) -> Result<Vec<(usize, usize, usize, Scalar)>> {
        let n = self.dim;
        let mut out = Vec::new();
        for (i, j, k, src) in rows {
            if *i >= n || *j >= n || *k >= n {
                bail!("{what} entry ({i}, {j}, {k}) exceeds dim {n}");
            }
            out.push((*i, *j, *k, self.scalar(src)?));
        }
        Ok(out)
    }

    pub fn build(&self) -> Result<LoadedTriple> {
        let n = self.dim;
        if n == 0 {
            bail!("dim must be positive");
        }
        let (primal, dual): (Vec<String>, Vec<String>) = if self.basis.len() == 2 * n {
            (self.basis[..n].to_vec(), self.basis[n..].to_vec())
        } else if self.basis.len() == n {
            let d = self.basis.iter().map(|s| format!("{s}*")).collect();
            (self.basis.clone(), d)
        } else {
            bail!(
                "basis lists {} names, expected {} (primal) or {} (primal then dual)",
                self.basis.len(),
                n,
                2 * n
            );
        };
        let c = self.entries(&self.c, "c")?;
        let f = self.entries(&self.f, "f")?;
        let constraints = self
            .params
            .iter()
            .flat_map(|p| p.constraints.iter().map(move |c| (p, c)))
            .map(|(p, c)| parse_constraint(&p.name, c))
            .collect::<Result<Vec<_>>>()?;
        let primal_refs: Vec<&str> = primal.iter().map(String::as_str).collect();
        let dual_refs: Vec<&str> = dual.iter().map(String::as_str).collect();
        let triple = ManinTriple::new(&primal_refs, &dual_refs, &c, &f, &constraints)
            .map_err(|e| anyhow!("triple data rejected: {e}"))?;

        let map = match &self.kinematical_map {
            None => None,
            Some(rows) => {
                let m = 2 * n;
                if rows.len() != m || rows.iter().any(|r| r.len() != m) {
                    bail!("kinematical_map must be a {m} x {m} matrix");
                }
                let mut cols = Vec::with_capacity(m);
                for j in 0..m {
                    let mut col = Vec::with_capacity(m);
                    for row in rows {
                        col.push(self.scalar(&row[j])?);
                    }
                    cols.push(col);
                }
                Some(LinearMap::from_columns(m, cols))
            }
        };

        let exp = self.expected.clone().unwrap_or_default();
        let m = 2 * n;
        let check_idx = |i: usize, what: &str| -> Result<()> {
            if i >= m {
                bail!("expected.{what} index {i} exceeds the double dimension {m}");
            }
            Ok(())
        };
        if let Some(lz) = &exp.lorentz {
            for &i in lz {
                check_idx(i, "lorentz")?;
            }
        }
        let pairing = match &exp.pairing {
            None => None,
            Some(rows) => {
                let mut p = SymmetricForm::zero(m);
                for (i, j, src) in rows {
                    check_idx(*i, "pairing")?;
                    check_idx(*j, "pairing")?;
                    p.set(*i, *j, self.scalar(src)?);
                }
                Some(p)
            }
        };
        let r_skew = match &exp.r_skew {
            None => None,
            Some(rows) => {
                let mut b = Bivector::zero(m);
                for (i, j, src) in rows {
                    check_idx(*i, "r_skew")?;
                    check_idx(*j, "r_skew")?;
                    b.add_term(*i, *j, self.scalar(src)?);
                }
                Some(b)
            }
        };
        let mut delta: Vec<(usize, Bivector)> = Vec::new();
        if let Some(rows) = &exp.delta {
            for (row, i, j, src) in rows {
                check_idx(*row, "delta")?;
                check_idx(*i, "delta")?;
                check_idx(*j, "delta")?;
                let s = self.scalar(src)?;
                match delta.iter_mut().find(|(r, _)| r == row) {
                    Some((_, b)) => b.add_term(*i, *j, s),
                    None => {
                        let mut b = Bivector::zero(m);
                        b.add_term(*i, *j, s);
                        delta.push((*row, b));
                    }
                }
            }
        }
        Ok(LoadedTriple {
            triple,
            constraints,
            map,
            expected_id: exp.id,
            verdict: exp.verdict,
            class: exp.class,
            mcybe: exp.mcybe,
            lorentz: exp.lorentz,
            pairing,
            r_skew,
            delta,
        })
    }
}

fn parse_constraint(name: &str, tag: &str) -> Result<Constraint> {
    let parts: Vec<&str> = tag.split(':').collect();
    match parts.as_slice() {
        ["positive"] => Ok(Constraint::Positive(name.to_string())),
        ["negative"] => Ok(Constraint::Negative(name.to_string())),
        ["nonzero"] => Ok(Constraint::NonZero(name.to_string())),
        ["product_positive", other] => Ok(Constraint::ProductPositive(
            name.to_string(),
            other.to_string(),
        )),
        ["open_interval", lo, hi] => {
            let lo: f64 = lo.parse().context("open_interval lower bound")?;
            let hi: f64 = hi.parse().context("open_interval upper bound")?;
            Ok(Constraint::OpenInterval(name.to_string(), lo, hi))
        }
        _ => bail!("unknown constraint tag {tag:?} on parameter {name:?}"),
    }
}

fn constraint_tag(c: &Constraint) -> (String, String) {
    match c {
        Constraint::Positive(p) => (p.clone(), "positive".to_string()),
        Constraint::Negative(p) => (p.clone(), "negative".to_string()),
        Constraint::NonZero(p) => (p.clone(), "nonzero".to_string()),
        Constraint::ProductPositive(p, q) => (p.clone(), format!("product_positive:{q}")),
        Constraint::OpenInterval(p, lo, hi) => (p.clone(), format!("open_interval:{lo}:{hi}")),
    }
}

fn algebra_entries(alg: &LieAlgebra) -> Vec<(usize, usize, usize, String)> {
    let n = alg.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for (k, s) in alg.bracket_basis(i, j).into_iter().enumerate() {
                if !s.is_zero() {
                    out.push((i, j, k, s.to_string()));
                }
            }
        }
    }
    out
}

/// Serializes a realized double structure so that `verify --file` reproduces
/// the catalog run.
pub fn export(entry: &CatalogEntry) -> Option<TripleFile> {
    let case: &DoubleCase = entry.as_double()?;
    let real = case.primary();
    let triple = &real.triple;
    let primal = triple.primal_algebra();
    let dual = triple.dual_algebra();
    let n = triple.dim();

    let mut basis: Vec<String> = primal.names().to_vec();
    basis.extend(dual.names().iter().cloned());

    let mut constraint_rows: Vec<(String, String)> = Vec::new();
    for c in triple.constraints().iter().chain(&real.constraints) {
        let row = constraint_tag(c);
        if !constraint_rows.contains(&row) {
            constraint_rows.push(row);
        }
    }
    let mut params: Vec<ParamSpec> = Vec::new();
    let mut all_names = triple.free_params();
    for (name, _) in &constraint_rows {
        if !all_names.contains(name) {
            all_names.push(name.clone());
        }
    }
    for name in all_names {
        let constraints = constraint_rows
            .iter()
            .filter(|(n, _)| *n == name)
            .map(|(_, t)| t.clone())
            .collect();
        params.push(ParamSpec { name, constraints });
    }

    let matrix = real.map.to_matrix();
    let rows: Vec<Vec<String>> = matrix
        .iter()
        .map(|row| row.iter().map(|s| s.to_string()).collect())
        .collect();

    let mut pairing_rows = Vec::new();
    for i in 0..2 * n {
        for j in i..2 * n {
            let s = case.expected_pairing.get(i, j);
            if !s.is_zero() {
                pairing_rows.push((i, j, s.to_string()));
            }
        }
    }
    let skew_rows: Vec<(usize, usize, String)> = case
        .expected_r_skew
        .terms()
        .map(|(&(i, j), s)| (i, j, s.to_string()))
        .collect();
    let mut delta_rows = Vec::new();
    for (row, b) in &case.expected_delta {
        for (&(i, j), s) in b.terms() {
            delta_rows.push((*row, i, j, s.to_string()));
        }
    }

    Some(TripleFile {
        schema: Some(TRIPLE_SCHEMA.to_string()),
        dim: n,
        basis,
        c: algebra_entries(&primal),
        f: algebra_entries(&dual),
        params,
        radicals: Vec::new(),
        kinematical_map: Some(rows),
        expected: Some(ExpectedBlock {
            id: Some(entry.id.to_string()),
            verdict: Some(case.expected_verdict.to_string()),
            class: case.expected_class.map(|s| s.to_string()),
            mcybe: Some("quasitriangular".to_string()),
            lorentz: Some(case.lorentz.clone()),
            pairing: Some(pairing_rows),
            r_skew: Some(skew_rows),
            delta: Some(delta_rows),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use manin::doubles::catalog;

    #[test]
    fn exported_case_rebuilds_the_same_structures() {
        let entry = catalog("P21-Case0").unwrap();
        let tf = export(entry).unwrap();
        let text = tf.to_json();
        let back = TripleFile::parse(&text).unwrap();
        let loaded = back.build().unwrap();
        assert_eq!(loaded.triple.dim(), 3);
        assert!(loaded.map.is_some());
        let case = entry.as_double().unwrap();
        assert!(loaded
            .r_skew
            .unwrap()
            .sub(&case.expected_r_skew)
            .is_zero());
        assert_eq!(loaded.verdict.as_deref(), Some("poisson_subgroup"));
        assert_eq!(loaded.delta.len(), case.expected_delta.len());
    }

    #[test]
    fn radical_symbols_substitute_into_coefficients() {
        let text = r#"{
            "dim": 1,
            "basis": ["X", "Y"],
            "c": [],
            "f": [[0, 0, 0, "0"]],
            "radicals": [{"name": "s2", "square": "2"}]
        }"#;
        let tf = TripleFile::parse(text).unwrap();
        let s = tf.scalar("s2*s2").unwrap();
        assert_eq!(s, Scalar::from_int(2));
    }

    #[test]
    fn out_of_range_indices_are_rejected() {
        let text = r#"{
            "dim": 2,
            "basis": ["X", "Y"],
            "c": [[0, 1, 2, "1"]],
            "f": []
        }"#;
        let tf = TripleFile::parse(text).unwrap();
        let err = tf.build().unwrap_err().to_string();
        assert!(err.contains("exceeds dim"), "{err}");
    }

    #[test]
    fn wrong_schema_tag_is_rejected() {
        let text = r#"{"schema": "manin-triple/v0", "dim": 1, "basis": ["X"], "c": [], "f": []}"#;
        assert!(TripleFile::parse(text).is_err());
    }

    #[test]
    fn constraint_tags_round_trip() {
        for c in [
            Constraint::Positive("a".into()),
            Constraint::Negative("a".into()),
            Constraint::NonZero("a".into()),
            Constraint::ProductPositive("a".into(), "b".into()),
            Constraint::OpenInterval("a".into(), -1.0, 2.5),
        ] {
            let (name, tag) = constraint_tag(&c);
            let back = parse_constraint(&name, &tag).unwrap();
            assert_eq!(format!("{back:?}"), format!("{c:?}"));
        }
    }
}
