//! Single-instance commands behind the `symtwist` binary.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::galois::Corpus;
use crate::groupalg::{OrthRep, RepSpec};
use crate::quadform::{FormInvariants, FormRecord, QuadForm};
use crate::ramify::{bruteforce_datum, example4_closed_form, ConfigFile};
use crate::twist::{checks, twist, TwistChecks, TwistInput};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Parse JSON, reporting the line and column of the first error.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        let line = text.lines().nth(e.line().saturating_sub(1)).unwrap_or("").trim();
        Error::Parse(format!("{what}: line {} column {}: {e}\n  | {line}", e.line(), e.column()))
    })
}

pub fn load_form(path: &Path) -> Result<QuadForm> {
    let rec: FormRecord = parse_json(&read(path)?, &path.display().to_string())?;
    QuadForm::try_from(rec)
}

pub fn load_corpus(path: Option<&Path>) -> Result<Corpus> {
    Ok(match path {
        Some(p) => Corpus::from_path(p)?,
        None => Corpus::bundled(),
    }
    .with_derived())
}

pub fn cmd_invariants(path: &Path) -> Result<FormInvariants> {
    Ok(load_form(path)?.invariants())
}

pub fn invariants_table(inv: &FormInvariants) -> String {
    let places = |b: &crate::arith::BrClass| {
        let v: Vec<String> = b.places().iter().map(|p| p.to_string()).collect();
        format!("{{{}}}", v.join(", "))
    };
    format!(
        "rank       {}\nsignature  ({}, {})\nw1         {}\nw2         {}\nhasse      {}\n",
        inv.rank,
        inv.signature.0,
        inv.signature.1,
        inv.w1,
        places(&inv.w2),
        places(&inv.hasse)
    )
}

/// `{form, representation, torsor}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwistRequest {
    pub form: FormRecord,
    pub representation: RepSpec,
    pub torsor: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistRecord {
    pub torsor: String,
    pub gram: Vec<Vec<Rat>>,
    pub invariants: FormInvariants,
    pub checks: TwistChecks,
}

impl TwistRecord {
    pub fn passed(&self) -> bool {
        self.checks.w1_formula && self.checks.product_form && self.checks.averaging_identity
    }

    pub fn to_table(&self) -> String {
        let rows: Vec<String> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| format!("{x:>6}")).collect::<Vec<_>>().join(" "))
            .collect();
        format!(
            "torsor {}\ngram\n{}\n{}w1 formula          {}\nproduct form        {}\naveraging identity  {}\n",
            self.torsor,
            rows.join("\n"),
            invariants_table(&self.invariants),
            self.checks.w1_formula,
            self.checks.product_form,
            self.checks.averaging_identity
        )
    }
}

pub fn load_request(form: &Path, rep: &Path, torsor: &str) -> Result<TwistRequest> {
    let form: FormRecord = parse_json(&read(form)?, &form.display().to_string())?;
    let representation: RepSpec = parse_json(&read(rep)?, &rep.display().to_string())?;
    Ok(TwistRequest { form, representation, torsor: torsor.into() })
}

pub fn load_request_file(path: &Path) -> Result<TwistRequest> {
    parse_json(&read(path)?, &path.display().to_string())
}

pub fn cmd_twist(req: &TwistRequest, corpus: &Corpus) -> Result<TwistRecord> {
    let torsor = corpus
        .get(&req.torsor)
        .ok_or_else(|| Error::Parse(format!("unknown torsor {:?}; known: {}", req.torsor, corpus.labels().join(", "))))?;
    let form = QuadForm::try_from(req.form.clone())?;
    let rep = OrthRep::from_spec(torsor.group().clone(), form.clone(), &req.representation)?;
    let input = TwistInput::new(&form, rep, torsor.clone())?;
    let out = twist(&input)?;
    let checks = checks(&input, &out)?;
    let g = out.form.gram();
    Ok(TwistRecord {
        torsor: req.torsor.clone(),
        gram: (0..g.rows()).map(|i| g.row(i).to_vec()).collect(),
        invariants: out.form.invariants(),
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RamifyRow {
    pub label: String,
    pub e: usize,
    pub f: usize,
    pub d: Vec<usize>,
    pub closed_form: u64,
    pub bruteforce: u64,
    pub parity: u8,
}

#[derive(Clone, Debug, Serialize)]
pub struct RamifyReport {
    pub rows: Vec<RamifyRow>,
    pub congruence: bool,
}

impl RamifyReport {
    pub fn passed(&self) -> bool {
        self.congruence && self.rows.iter().all(|r| r.closed_form == r.bruteforce)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{:<24} {:>3} {:>3} {:>12} {:>11} {:>6}  d_k\n", "component", "e", "f", "closed form", "brute force", "parity");
        for r in &self.rows {
            out += &format!(
                "{:<24} {:>3} {:>3} {:>12} {:>11} {:>6}  {:?}\n",
                r.label, r.e, r.f, r.closed_form, r.bruteforce, r.parity, r.d
            );
        }
        out += &format!("congruence mod 2: {}\n", if self.congruence { "holds" } else { "FAILS" });
        out
    }
}

pub fn cmd_ramify(path: &Path) -> Result<RamifyReport> {
    let file: ConfigFile = parse_json(&read(path)?, &path.display().to_string())?;
    let cfgs = file.build()?;
    let mut rows = Vec::new();
    for c in &cfgs {
        let datum = bruteforce_datum(c)?;
        let bruteforce = crate::ramify::d_from_ranks(&datum);
        rows.push(RamifyRow {
            label: c.label().into(),
            e: c.e(),
            f: c.f(),
            d: datum.d,
            closed_form: example4_closed_form(c)?,
            bruteforce,
            parity: (bruteforce % 2) as u8,
        });
    }
    Ok(RamifyReport { rows, congruence: crate::ramify::final_congruence_check(&cfgs)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_name_the_line() {
        let text = "{\n  \"rank\": 2,\n  \"gram\": [\"1\", \"0\", \"0\" \"1\"]\n}";
        let err = parse_json::<FormRecord>(text, "form.json").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        assert!(err.contains("\"gram\""), "{err}");
    }

    #[test]
    fn sign_twist_request() {
        let req: TwistRequest = serde_json::from_str(
            r#"{"form": {"rank": 1, "gram": ["1"]}, "representation": {"images": {"c": [["-1"]]}}, "torsor": "sqrt5"}"#,
        )
        .unwrap();
        let rec = cmd_twist(&req, &Corpus::bundled().with_derived()).unwrap();
        assert_eq!(rec.gram, vec![vec![Rat::from(5)]]);
        assert!(rec.passed());
    }
}
