use rand::Rng;
use serde_json::json;

use super::{Outcome, VerifyConfig};
use crate::arith::{cup, Rat};
use crate::exec::par_map;
use crate::linalg::Matrix;
use crate::quadform::{is_isometric, is_metabolic, verify_main_lemma, FormRecord, Lagrangian, QuadForm};

pub(crate) fn random_form(rng: &mut impl Rng, rank: usize) -> QuadForm {
    loop {
        let mut g = Matrix::from_fn(rank, rank, |_, _| Rat::zero());
        for i in 0..rank {
            for j in i..rank {
                let x = Rat::from(rng.gen_range(-6i64..=6));
                g.set(i, j, x.clone());
                g.set(j, i, x);
            }
        }
        if let Ok(q) = QuadForm::new(g) {
            return q;
        }
    }
}

pub(crate) fn random_invertible(rng: &mut impl Rng, n: usize, bound: i64) -> Matrix<Rat> {
    loop {
        let p = Matrix::from_fn(n, n, |_, _| Rat::from(rng.gen_range(-bound..=bound)));
        if !p.det().is_zero() {
            return p;
        }
    }
}

fn form_json(q: &QuadForm) -> serde_json::Value {
    serde_json::to_value(FormRecord::from(q)).expect("form serializes")
}

fn rows(m: &Matrix<Rat>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect()
}

pub fn run(cfg: &VerifyConfig) -> Vec<Outcome> {
    let mut out = congruence_checks(cfg, cfg.samples.forms);
    out.extend(whitney_checks(cfg, cfg.samples.form_pairs));
    out.extend(metabolic_checks(cfg, 8, cfg.samples.metabolic_per_rank));
    out
}

/// Invariants under random congruences, and isometry as an equivalence.
pub fn congruence_checks(cfg: &VerifyConfig, n: usize) -> Vec<Outcome> {
    let mut rng = cfg.rng(2);
    let max = cfg.bounds.max_rank.max(1);
    let cases: Vec<(usize, QuadForm, Matrix<Rat>, Matrix<Rat>)> = (0..n)
        .map(|i| {
            let r = rng.gen_range(1..=max);
            let q = random_form(&mut rng, r);
            let p = random_invertible(&mut rng, r, 9);
            let p2 = random_invertible(&mut rng, r, 9);
            (i, q, p, p2)
        })
        .collect();
    par_map(&cases, |(i, q, p, p2)| {
        let label = format!("form-{i:04}");
        let input = || json!({ "form": form_json(q), "congruence": rows(p), "second_congruence": rows(p2) });
        let q1 = q.transform(p).expect("invertible congruence");
        let q2 = q1.transform(p2).expect("invertible congruence");
        let iso = is_isometric(q, &q1);
        let equiv = iso && is_isometric(&q1, q) && is_isometric(q, &q2) && is_isometric(q, q);
        vec![
            Outcome::new("quadform.congruence_stability", &label, Ok(q.invariants() == q1.invariants()), input),
            Outcome::new("quadform.isometry_equivalence", &label, Ok(equiv), input),
            Outcome::new("quadform.isometric_same_w1", &label, Ok(!iso || q.invariants().w1 == q1.invariants().w1), input),
        ]
    })
    .concat()
}

/// `w(q1 ⊥ q2) = w(q1) w(q2)` in degrees one and two.
pub fn whitney_checks(cfg: &VerifyConfig, n: usize) -> Vec<Outcome> {
    let mut rng = cfg.rng(3);
    let max = cfg.bounds.max_rank.max(2);
    let cases: Vec<(usize, QuadForm, QuadForm)> = (0..n)
        .map(|i| {
            let r1 = rng.gen_range(1..max);
            let r2 = rng.gen_range(1..=max - r1);
            (i, random_form(&mut rng, r1), random_form(&mut rng, r2))
        })
        .collect();
    par_map(&cases, |(i, a, b)| {
        let label = format!("pair-{i:04}");
        let input = || json!({ "first": form_json(a), "second": form_json(b) });
        let (ia, ib, is) = (a.invariants(), b.invariants(), a.orth_sum(b).invariants());
        vec![
            Outcome::new("quadform.whitney_w1", &label, Ok(is.w1 == ia.w1.mul(&ib.w1)), input),
            Outcome::new("quadform.whitney_w2", &label, Ok(is.w2 == ia.w2.add(&ib.w2).add(&cup(&ia.w1, &ib.w1))), input),
        ]
    })
    .concat()
}

/// Congruent images of `m` hyperbolic planes with the transported
/// lagrangian, for every even rank up to `max_rank`.
pub fn metabolic_instances(cfg: &VerifyConfig, max_rank: usize, per_rank: usize) -> Vec<(String, QuadForm, Lagrangian)> {
    let mut rng = cfg.rng(4);
    let mut out = Vec::new();
    for m in 1..=max_rank / 2 {
        let h = QuadForm::hyperbolic(m);
        let base: Vec<Vec<Rat>> = (0..m)
            .map(|k| (0..2 * m).map(|j| Rat::from((j / 2 == k) as i64)).collect())
            .collect();
        for t in 0..per_rank {
            let p = random_invertible(&mut rng, 2 * m, 3);
            let pinv = p.inverse().expect("invertible");
            let q = h.transform(&p).expect("invertible congruence");
            let l = Lagrangian::new(base.iter().map(|v| crate::linalg::primitive_integer(&pinv.mul_vec(v))).collect());
            out.push((format!("metabolic-r{}-{t:02}", 2 * m), q, l));
        }
    }
    out
}

pub fn metabolic_checks(cfg: &VerifyConfig, max_rank: usize, per_rank: usize) -> Vec<Outcome> {
    let cases = metabolic_instances(cfg, max_rank, per_rank);
    let mut out = par_map(&cases, |(label, q, l)| {
        let input = || json!({ "form": form_json(q), "lagrangian": l });
        vec![
            Outcome::new("quadform.main_lemma", label, verify_main_lemma(q, l), input),
            Outcome::new("quadform.metabolic_decision", label, Ok(is_metabolic(q, 1).is_metabolic()), input),
        ]
    })
    .concat();
    for (label, q) in [("anisotropic-r2", QuadForm::diag_i64(&[1, 1])), ("anisotropic-r4", QuadForm::diag_i64(&[1, 1, 1, 1]))] {
        out.push(Outcome::new("quadform.metabolic_decision", label, Ok(!is_metabolic(&q, 1).is_metabolic()), || form_json(&q)));
    }
    out
}
