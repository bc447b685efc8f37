use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::Value;

use super::clifford::twist_request_json;
use super::{Outcome, VerifyConfig};
use crate::arith::Rat;
use crate::clifford::reflection;
use crate::exec::par_map;
use crate::galois::{Construction, GaloisAlgebra};
use crate::groupalg::{sign_characters, FiniteGroup, OrthRep, Subgroup};
use crate::linalg::Matrix;
use crate::quadform::{is_isometric, Lagrangian, QuadForm};
use crate::twist::{metabolic_twist_check, product_form_check, twist, w1_rep, TwistInput};

pub fn run(cfg: &VerifyConfig) -> Vec<Outcome> {
    let mut out = etale_checks(cfg);
    out.extend(thm03_checks(cfg));
    out.extend(prop27_checks(cfg));
    out.extend(metabolic_twist_checks(cfg));
    out
}

/// A representation of a torsor's group to twist by.
#[derive(Clone, Debug)]
pub struct TwistCase {
    pub label: String,
    pub torsor: String,
    pub rep: OrthRep,
    pub subgroup: Option<Subgroup>,
    pub lagrangian: Option<Lagrangian>,
}

impl TwistCase {
    fn new(torsor: &GaloisAlgebra, name: &str, rep: OrthRep) -> Self {
        TwistCase { label: format!("{}/{name}", torsor.label()), torsor: torsor.label().into(), rep, subgroup: None, lagrangian: None }
    }

    pub fn input(&self, torsors: &[GaloisAlgebra]) -> crate::Result<TwistInput> {
        let t = torsors.iter().find(|t| t.label() == self.torsor).expect("case built from corpus");
        TwistInput::new(self.rep.form(), self.rep.clone(), t.clone())
    }
}

fn conj_reps(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut reps: Vec<Subgroup> = g
        .subgroups()
        .iter()
        .map(|s| (0..g.order()).map(|x| g.conjugate(x, s)).min().expect("nonempty"))
        .collect();
    reps.sort();
    reps.dedup();
    reps
}

fn natural_perm(g: &FiniteGroup, x: usize) -> Matrix<Rat> {
    let p = g.element(x);
    let n = g.degree();
    Matrix::from_fn(n, n, |r, c| Rat::from((p.apply(c) == r) as i64))
}

/// `rho(g) = chi(g) M` for an involution `M` of the form.
fn through_character(g: &Arc<FiniteGroup>, form: &QuadForm, chi: &[i8], m: &Matrix<Rat>) -> OrthRep {
    let gens: Vec<(String, Matrix<Rat>)> = g
        .generators()
        .iter()
        .map(|(name, s)| (name.clone(), if chi[*s] < 0 { m.clone() } else { Matrix::identity(form.rank()) }))
        .collect();
    OrthRep::from_generator_images(g.clone(), form.clone(), &gens).expect("involution through a character")
}

/// Representation families for the w1 comparison: sign characters,
/// permutation modules, `-I`, reflections, rotations and a direct sum.
pub fn thm03_instances(cfg: &VerifyConfig) -> Vec<TwistCase> {
    let mut rng = cfg.rng(6);
    let mut out = Vec::new();
    for t in cfg.corpus.torsors() {
        let g = t.group();
        let chars = sign_characters(g);
        for (k, chi) in chars.iter().enumerate() {
            out.push(TwistCase::new(t, &format!("sign{k}"), OrthRep::from_character(g.clone(), chi).expect("character")));
        }
        let subs = conj_reps(g);
        for (k, h) in subs.iter().enumerate() {
            out.push(TwistCase::new(t, &format!("perm{k}"), OrthRep::permutation(g.clone(), h)));
        }
        let diag: Vec<i64> = (0..3).map(|_| *[1i64, -1, 2, 3, -5, 7].choose(&mut rng).expect("nonempty")).collect();
        let form = QuadForm::diag_i64(&diag);
        if let Some(chi) = chars.get(1) {
            let minus = Matrix::identity(3).scale(&Rat::from(-1));
            out.push(TwistCase::new(t, "minus-identity", through_character(g, &form, chi, &minus)));
            let v: Vec<Rat> = loop {
                let v: Vec<Rat> = (0..3).map(|_| Rat::from(rng.gen_range(-2i64..=2))).collect();
                if !form.eval(&v).is_zero() {
                    break v;
                }
            };
            let tau = reflection(&form, &v).expect("anisotropic");
            out.push(TwistCase::new(t, "reflection", through_character(g, &form, chi, &tau)));
            let last = chars.last().expect("nonempty");
            let sign = OrthRep::from_character(g.clone(), last).expect("character");
            let perm = OrthRep::permutation(g.clone(), &subs[subs.len() / 2]);
            out.push(TwistCase::new(t, "sum", sign.direct_sum(&perm).expect("same group")));
        }
        if g.generators().len() == 1 {
            let (name, c) = g.generators()[0].clone();
            let rot = match g.elem_order(c) {
                4 => Some((QuadForm::diag_i64(&[1, 1]), Matrix::from_i64(&[&[0, -1], &[1, 0]]))),
                6 => Some((QuadForm::diag_i64(&[1, 1, 1]), Matrix::from_i64(&[&[0, 0, -1], &[-1, 0, 0], &[0, -1, 0]]))),
                3 => Some((QuadForm::diag_i64(&[2, 2, 2]), Matrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]))),
                _ => None,
            };
            if let Some((form, m)) = rot {
                let rep = OrthRep::from_generator_images(g.clone(), form, &[(name, m)]).expect("rotation");
                out.push(TwistCase::new(t, "rotation", rep));
            }
        }
    }
    out
}

fn twist_outcomes(cfg: &VerifyConfig, case: &TwistCase, main: &str, check: impl Fn(&TwistInput, &QuadForm) -> crate::Result<bool>) -> Vec<Outcome> {
    let label = case.label.as_str();
    let json = || twist_request_json(case.rep.form(), &case.rep, &case.torsor);
    let input = match case.input(cfg.corpus.torsors()) {
        Ok(i) => i,
        Err(e) => return vec![Outcome::new(main, label, Err(e), json)],
    };
    let out = match twist(&input) {
        Ok(o) => o,
        Err(e) => return vec![Outcome::new("twist.rank", label, Err(e), json)],
    };
    vec![
        Outcome::new(main, label, check(&input, &out.form), json),
        Outcome::new("twist.rank", label, Ok(out.form.rank() == input.form().rank()), json),
        Outcome::new("twist.product_form", label, Ok(product_form_check(&input, &out)), json),
        Outcome::new("twist.averaging_identity", label, Ok(out.averaging_identity), json),
    ]
}

/// `w1(E_rho) = w1(E) w1(rho)` over the corpus, with the odd-order case.
pub fn thm03_checks(cfg: &VerifyConfig) -> Vec<Outcome> {
    let cases = thm03_instances(cfg);
    par_map(&cases, |case| {
        let mut v = twist_outcomes(cfg, case, "twist.thm03_w1", |input, t| {
            Ok(t.invariants().w1 == input.form().invariants().w1.mul(&w1_rep(input.rep(), input.torsor())?))
        });
        if case.rep.group().order() % 2 == 1 {
            let json = || twist_request_json(case.rep.form(), &case.rep, &case.torsor);
            let res = case
                .input(cfg.corpus.torsors())
                .and_then(|i| Ok(twist(&i)?.form.invariants().w1 == i.form().invariants().w1));
            v.push(Outcome::new("twist.odd_order_w1", &case.label, res, json));
        }
        v
    })
    .concat()
}

/// Every subgroup of every torsor group of order at most 12.
pub fn prop27_instances(cfg: &VerifyConfig) -> Vec<TwistCase> {
    let cap = cfg.bounds.max_group_order.min(12);
    let mut out = Vec::new();
    for t in cfg.corpus.torsors().iter().filter(|t| t.group().order() <= cap) {
        for (k, h) in t.group().subgroups().into_iter().enumerate() {
            let mut case = TwistCase::new(t, &format!("H{k}"), OrthRep::permutation(t.group().clone(), &h));
            case.subgroup = Some(h);
            out.push(case);
        }
    }
    out
}

pub fn prop27_checks(cfg: &VerifyConfig) -> Vec<Outcome> {
    let cases = prop27_instances(cfg);
    par_map(&cases, |case| {
        let h = case.subgroup.clone().expect("subgroup case");
        twist_outcomes(cfg, case, "twist.prop27", move |input, t| {
            let fixed = input.torsor().fixed_subalgebra(&h)?.algebra.trace_form()?;
            Ok(is_isometric(t, &fixed))
        })
    })
    .concat()
}

/// Hyperbolic spaces with representations preserving the coordinate
/// lagrangian: trivial, a sign character, and permutations of planes.
pub fn metabolic_twist_instances(cfg: &VerifyConfig) -> Vec<TwistCase> {
    let mut out = Vec::new();
    let lagrangian = |m: usize| {
        Lagrangian::new((0..m).map(|k| (0..2 * m).map(|j| Rat::from((j / 2 == k) as i64)).collect()).collect())
    };
    for t in cfg.corpus.torsors() {
        let g = t.group();
        let mut push = |name: &str, rep: OrthRep, m: usize| {
            let mut c = TwistCase::new(t, name, rep);
            c.lagrangian = Some(lagrangian(m));
            out.push(c);
        };
        let h1 = QuadForm::hyperbolic(1);
        push("hyperbolic-trivial", OrthRep::trivial(g.clone(), h1), 1);
        let chars = sign_characters(g);
        if let Some(chi) = chars.get(1) {
            let h2 = QuadForm::hyperbolic(2);
            let minus = Matrix::identity(4).scale(&Rat::from(-1));
            push("hyperbolic-sign", through_character(g, &h2, chi, &minus), 2);
        }
        let deg = g.degree();
        if deg <= 4 {
            let hm = QuadForm::hyperbolic(deg);
            let gens: Vec<(String, Matrix<Rat>)> = g
                .generators()
                .iter()
                .map(|(name, s)| (name.clone(), natural_perm(g, *s).kron(&Matrix::identity(2))))
                .collect();
            let rep = OrthRep::from_generator_images(g.clone(), hm, &gens).expect("plane permutation");
            push("hyperbolic-planes", rep, deg);
        }
    }
    out
}

pub fn metabolic_twist_checks(cfg: &VerifyConfig) -> Vec<Outcome> {
    let cases = metabolic_twist_instances(cfg);
    par_map(&cases, |case| {
        let l = case.lagrangian.clone().expect("lagrangian case");
        twist_outcomes(cfg, case, "twist.metabolic", move |input, _| metabolic_twist_check(input, &l, 1))
    })
    .concat()
}

/// Torsor axioms, fixed subalgebras and trace transitivity.
pub fn etale_checks(cfg: &VerifyConfig) -> Vec<Outcome> {
    let torsors: Vec<&GaloisAlgebra> = cfg.corpus.torsors().iter().collect();
    par_map(&torsors, |t| {
        let label = t.label();
        let input = || Value::String(label.to_string());
        let g = t.group();
        let mut out = vec![Outcome::new("etale.torsor_verify", label, t.verify().map(|_| true), input)];
        let full = t.fixed_subalgebra(&g.whole()).map(|f| f.algebra.dim() == 1);
        out.push(Outcome::new("etale.full_fixed_is_q", label, full, input));
        let subs = g.subgroups();
        let dims = subs.iter().try_fold(true, |acc, h| {
            Ok::<bool, crate::Error>(acc && t.fixed_subalgebra(h)?.algebra.dim() == g.order() / h.order())
        });
        out.push(Outcome::new("etale.fixed_dimension", label, dims, input));
        let transitive = subs.iter().try_fold(true, |acc, h| {
            let f = t.fixed_subalgebra(h)?;
            let ok = (0..f.algebra.dim()).all(|i| {
                let x = &f.embedding[i];
                t.algebra().trace(x) == f.algebra.trace(&f.algebra.basis(i)) * Rat::from(h.order() as i64)
            });
            Ok::<bool, crate::Error>(acc && ok)
        });
        out.push(Outcome::new("etale.trace_transitivity", label, transitive, input));
        if matches!(t.construction(), Construction::Split) {
            let id = t.algebra().trace_form().map(|q| q.gram().is_identity());
            out.push(Outcome::new("etale.split_trace_identity", label, id, input));
        }
        out
    })
    .concat()
}
