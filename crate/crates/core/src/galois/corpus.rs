use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::torsor::GaloisAlgebra;
use crate::error::{Error, Result};
use crate::groupalg::{FiniteGroup, GroupSpec};
use crate::poly::Poly;

const BUNDLED: &str = include_str!("../../data/corpus.json");

/// One field torsor: polynomial and automorphism coefficients are listed
/// lowest degree first; automorphisms are reduced modulo the polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsorRecord {
    pub label: String,
    pub poly: Poly,
    pub auts: Vec<Poly>,
    pub group: GroupSpec,
    pub generator_auts: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CorpusFile {
    torsors: Vec<TorsorRecord>,
}

/// Verified torsors keyed by label.
#[derive(Clone, Debug)]
pub struct Corpus {
    torsors: Vec<GaloisAlgebra>,
}

impl TorsorRecord {
    pub fn build(&self) -> Result<GaloisAlgebra> {
        let group = Arc::new(FiniteGroup::from_spec(&self.group)?);
        let gens: Vec<(String, usize)> = self.generator_auts.iter().map(|(k, v)| (k.clone(), *v)).collect();
        GaloisAlgebra::field(&self.label, &self.poly, &self.auts, group, &gens)
    }
}

impl Corpus {
    pub fn bundled() -> Self {
        Corpus::from_json(BUNDLED).expect("bundled corpus is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CorpusFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("corpus: {e}")))?;
        let torsors = file
            .torsors
            .iter()
            .map(|r| r.build().map_err(|e| Error::BrokenInput(format!("torsor {}: {e}", r.label))))
            .collect::<Result<Vec<_>>>()?;
        let mut seen = std::collections::BTreeSet::new();
        if let Some(t) = torsors.iter().find(|t| !seen.insert(t.label().to_string())) {
            return Err(Error::Parse(format!("duplicate torsor label {}", t.label())));
        }
        Ok(Corpus { torsors })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Corpus::from_json(&text)
    }

    /// Adds split torsors and torsors induced from quadratic fields, which
    /// are not fields.
    pub fn with_derived(mut self) -> Self {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let v4 = Arc::new(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)));
        let mut extra = vec![
            GaloisAlgebra::split(c2).with_label("split-c2"),
            GaloisAlgebra::split(v4.clone()).with_label("split-v4"),
            GaloisAlgebra::split(s3.clone()).with_label("split-s3"),
        ];
        let t = s3.generator("t").expect("transposition");
        for base in ["sqrt5", "sqrt-3"] {
            if let Some(b) = self.get(base) {
                let label = format!("s3-induced-{base}");
                extra.push(GaloisAlgebra::induced(&label, s3.clone(), b, &[("c".into(), t)]).expect("induced torsor"));
            }
        }
        if let Some(b) = self.get("sqrt-7") {
            let c1 = v4.generator("c1").expect("generator");
            extra.push(
                GaloisAlgebra::induced("v4-induced-sqrt-7", v4.clone(), b, &[("c".into(), c1)]).expect("induced torsor"),
            );
        }
        self.torsors.extend(extra);
        self
    }

    pub fn torsors(&self) -> &[GaloisAlgebra] {
        &self.torsors
    }

    pub fn get(&self, label: &str) -> Option<&GaloisAlgebra> {
        self.torsors.iter().find(|t| t.label() == label)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.torsors.iter().map(|t| t.label()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_corpus_verifies() {
        let c = Corpus::bundled();
        assert_eq!(c.torsors().len(), 17);
        for t in c.torsors() {
            t.verify().unwrap();
            assert!(t.is_field());
        }
        assert_eq!(c.get("zeta7").unwrap().group().order(), 6);
        assert_eq!(c.get("sqrt2-sqrt3").unwrap().kummer_radicands().unwrap(), vec![2, 3]);
    }

    #[test]
    fn derived_torsors() {
        let c = Corpus::bundled().with_derived();
        for t in c.torsors().iter().filter(|t| !t.is_field()) {
            t.verify().unwrap();
        }
        assert!(c.get("s3-induced-sqrt5").is_some());
    }

    #[test]
    fn biquadratic_fixed_field() {
        let c = Corpus::bundled();
        let a = c.get("sqrt2-sqrt3").unwrap();
        let g = a.group();
        // c2 flips sqrt 3 and fixes sqrt 2.
        let h = g.closure(&[g.generator("c2").unwrap()]);
        let fixed = a.fixed_subalgebra(&h).unwrap();
        assert_eq!(fixed.algebra.dim(), 2);
        let tf = fixed.algebra.trace_form().unwrap();
        assert!(crate::quadform::is_isometric(&tf, &crate::quadform::QuadForm::diag_i64(&[2, 1])));
    }

    #[test]
    fn rejects_bad_records() {
        assert!(Corpus::from_json("{\"torsors\": [1]}").is_err());
        let bad = BUNDLED.replace("\"c\": 1}", "\"c\": 0}");
        assert!(Corpus::from_json(&bad).is_err());
    }
}
