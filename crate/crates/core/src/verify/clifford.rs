use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use super::{Outcome, VerifyConfig};
use crate::arith::{square_class, Rat, SquareClass};
use crate::clifford::{extend_isometry, lift, reflection, twisted_conjugation, CliffordAlgebra, CliffordElement};
use crate::error::{Error, Result};
use crate::exec::par_map;
use crate::galois::Corpus;
use crate::groupalg::OrthRep;
use crate::linalg::Matrix;
use crate::quadform::{FormRecord, QuadForm};
use crate::twist::{delta2_clifford_for, delta2_from_invariants, product_form_check, twist, TwistInput};

pub fn run(cfg: &VerifyConfig) -> Vec<Outcome> {
    let mut out = clifford_algebra_checks(cfg, cfg.samples.clifford_per_algebra);
    out.extend(delta2_checks(cfg));
    out
}

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from(x)).collect()
}

fn random_anisotropic(rng: &mut impl Rng, a: &[Rat], bound: i64) -> Vec<Rat> {
    loop {
        let v: Vec<Rat> = (0..a.len()).map(|_| Rat::from(rng.gen_range(-bound..=bound))).collect();
        let q: Rat = v.iter().zip(a).map(|(x, c)| x * x * c).sum();
        if !q.is_zero() {
            return v;
        }
    }
}

fn random_element(rng: &mut impl Rng, alg: &Arc<CliffordAlgebra>) -> CliffordElement {
    let coeffs = (0..alg.dim())
        .map(|_| if rng.gen_bool(0.5) { vec![Rat::from(rng.gen_range(-3i64..=3))] } else { vec![Rat::zero()] })
        .collect();
    alg.from_coeffs(coeffs).expect("rational coefficients")
}

fn versor(rng: &mut impl Rng, alg: &Arc<CliffordAlgebra>, k: usize) -> Result<CliffordElement> {
    let mut x = alg.one();
    for _ in 0..k {
        x = x.mul(&alg.vector(&random_anisotropic(rng, alg.coefficients(), 3)))?;
    }
    Ok(x)
}

fn random_orthogonal(rng: &mut impl Rng, q: &QuadForm, a: &[Rat], k: usize) -> Matrix<Rat> {
    let mut u = Matrix::identity(a.len());
    for _ in 0..k {
        u = u.mul(&reflection(q, &random_anisotropic(rng, a, 3)).expect("anisotropic"));
    }
    u
}

fn rational(m: &Matrix<Vec<Rat>>) -> Option<Matrix<Rat>> {
    let rows: Option<Vec<Vec<Rat>>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x[1..].iter().all(Rat::is_zero).then(|| x[0].clone())).collect())
        .collect();
    Some(Matrix::from_rows(rows?))
}

/// Signed permutation matrices preserving the diagonal form `a`.
fn signed_permutations(a: &[Rat]) -> Vec<Matrix<Rat>> {
    let n = a.len();
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| (0..n).filter(|i| !p.contains(i)).map(|i| [p.clone(), vec![i]].concat()).collect::<Vec<_>>())
            .collect();
    }
    let mut out = Vec::new();
    for p in perms.iter().filter(|p| (0..n).all(|i| a[p[i]] == a[i])) {
        for signs in 0..(1usize << n) {
            out.push(Matrix::from_fn(n, n, |r, c| {
                if r == p[c] {
                    Rat::from(if signs >> c & 1 == 1 { -1 } else { 1 })
                } else {
                    Rat::zero()
                }
            }));
        }
    }
    out
}

const ALGEBRAS: [&[i64]; 9] = [&[1], &[-3], &[1, 1], &[2, -5], &[1, 1, 1], &[1, -1, 3], &[2, 3, -7], &[1, 1, 1, 1], &[-1, 2, 3, 5]];

/// Algebra identities, spinor norms, lifts and the parity sign law.
pub fn clifford_algebra_checks(cfg: &VerifyConfig, per_algebra: usize) -> Vec<Outcome> {
    let max = cfg.bounds.max_rank.clamp(1, 4);
    let cases: Vec<(usize, Vec<i64>, u64)> = ALGEBRAS
        .iter()
        .enumerate()
        .filter(|(_, a)| a.len() <= max)
        .map(|(i, a)| (i, a.to_vec(), cfg.seed ^ (0x5151 + i as u64)))
        .collect();
    par_map(&cases, |(i, a, seed)| algebra_case(*i, a, *seed, per_algebra)).concat()
}

fn algebra_case(idx: usize, diag: &[i64], seed: u64, k: usize) -> Vec<Outcome> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let a = ints(diag);
    let alg = CliffordAlgebra::over_q(a.clone()).expect("nonzero diagonal");
    let q = QuadForm::diagonal(&a).expect("nonzero diagonal");
    let n = a.len();
    let base = format!("alg{idx}");
    let mut out = Vec::new();
    let input = |extra: Value| move || json!({ "diag": diag, "case": extra });

    out.push(Outcome::new("clifford.dimension", &base, Ok(alg.dim() == 1 << n), input(Value::Null)));
    let sigma = (0..alg.dim()).all(|s| {
        let g = s.count_ones() as usize;
        let sign = if (g * g.saturating_sub(1) / 2) % 2 == 0 { 1 } else { -1 };
        alg.blade(s).sigma() == alg.blade(s).scale_rat(&Rat::from(sign))
    });
    out.push(Outcome::new("clifford.sigma_sign", &base, Ok(sigma), input(Value::Null)));
    let norms = (0..n).all(|i| alg.generator(i).spinor_norm().ok() == Some(vec![a[i].clone()]));
    out.push(Outcome::new("clifford.spinor_norm_vectors", &base, Ok(norms), input(Value::Null)));

    for t in 0..k {
        let label = format!("{base}-{t:02}");
        let v = random_anisotropic(&mut rng, &a, 4);
        let vv = alg.vector(&v);
        let sq = vv.mul(&vv).map(|x| x == alg.scalar(vec![q.eval(&v)]));
        out.push(Outcome::new("clifford.vector_square", &label, sq, input(json!(v))));

        let (x, y, z) = (random_element(&mut rng, &alg), random_element(&mut rng, &alg), random_element(&mut rng, &alg));
        let assoc = (|| Ok(x.mul(&y)?.mul(&z)? == x.mul(&y.mul(&z)?)?))();
        out.push(Outcome::new("clifford.associativity", &label, assoc, input(json!([x.to_string(), y.to_string(), z.to_string()]))));

        let (k1, k2) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let mult = (|| {
            let (x, y) = (versor(&mut rng, &alg, k1)?, versor(&mut rng, &alg, k2)?);
            let (nx, ny, nxy) = (x.spinor_norm()?, y.spinor_norm()?, x.mul(&y)?.spinor_norm()?);
            Ok(nxy[0] == &nx[0] * &ny[0])
        })();
        out.push(Outcome::new("clifford.spinor_norm_multiplicative", &label, mult, input(json!([k1, k2]))));

        let w = random_anisotropic(&mut rng, &a, 3);
        let refl = (|| Ok(lift(&alg, &reflection(&q, &w)?)?.class == square_class(&q.eval(&w))?))();
        out.push(Outcome::new("clifford.reflection_class", &label, refl, input(json!(w))));

        let kk = rng.gen_range(1..=4);
        let u = random_orthogonal(&mut rng, &q, &a, kk);
        let rmap = (|| {
            let l = lift(&alg, &u)?;
            let eps = if u.det().is_negative() { -1 } else { 1 };
            Ok(rational(&l.t.r_map(eps)?) == Some(u.clone()))
        })();
        let rows: Vec<Vec<String>> = (0..n).map(|i| u.row(i).iter().map(|x| x.to_string()).collect()).collect();
        out.push(Outcome::new("clifford.lift_r_map", &label, rmap, input(json!(rows))));
    }

    if n <= 3 {
        let mut thetas = signed_permutations(&a);
        for _ in 0..k.min(10) {
            let kk = rng.gen_range(1..=3);
            thetas.push(random_orthogonal(&mut rng, &q, &a, kk));
        }
        for (t, theta) in thetas.iter().enumerate() {
            let label = format!("{base}-theta{t:02}");
            let res = (|| {
                let ext = extend_isometry(&alg, &alg, theta)?;
                let l = lift(&alg, theta)?;
                let eps = if theta.det().is_negative() { -1 } else { 1 };
                for s in 0..alg.dim() {
                    let b = alg.blade(s);
                    if ext.apply(&b)? != twisted_conjugation(&l.t, eps, &b)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            })();
            let rows: Vec<Vec<String>> = (0..n).map(|i| theta.row(i).iter().map(|x| x.to_string()).collect()).collect();
            out.push(Outcome::new("clifford.parity_sign_law", &label, res, input(json!(rows))));
        }
    }
    out
}

/// An instance of the cross-validation: a form, generator images and a
/// torsor of an elementary abelian 2-group.
#[derive(Clone, Debug)]
pub struct Delta2Instance {
    pub label: String,
    pub torsor: String,
    pub form: QuadForm,
    pub images: Vec<(String, Matrix<Rat>)>,
}

impl Delta2Instance {
    pub fn input(&self, corpus: &Corpus) -> Result<TwistInput> {
        let t = corpus.get(&self.torsor).ok_or_else(|| Error::Parse(format!("unknown torsor {}", self.torsor)))?;
        let rep = OrthRep::from_generator_images(t.group().clone(), self.form.clone(), &self.images)?;
        TwistInput::new(&self.form, rep, t.clone())
    }
}

/// Reproducing input in the twist request format.
pub fn twist_request_json(form: &QuadForm, rep: &OrthRep, torsor: &str) -> Value {
    json!({ "form": FormRecord::from(form), "representation": rep.to_spec(), "torsor": torsor })
}

fn quadratic_label(d: i64) -> String {
    if d == -1 {
        "gaussian".into()
    } else {
        format!("sqrt{d}")
    }
}

/// The class of the lift norm of `u` lies in `{1, d}`.
fn supported(q: &QuadForm, u: &Matrix<Rat>, d: i64) -> bool {
    let alg = CliffordAlgebra::over_q(q.diagonal_entries().expect("diagonal")).expect("nonzero diagonal");
    match lift(&alg, u) {
        Ok(l) => l.class.is_trivial() || l.class == SquareClass::of_int(d),
        Err(_) => false,
    }
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    MinusIdentity,
    Reflection,
    RotationPi,
    BlockSum,
}

fn image(kind: Kind, q: &QuadForm, v: &[Rat]) -> Matrix<Rat> {
    let n = q.rank();
    let minus = |k: usize| Matrix::from_fn(n, n, |r, c| Rat::from(if r != c { 0 } else if r < k { -1 } else { 1 }));
    match kind {
        Kind::MinusIdentity => minus(n),
        Kind::Reflection => reflection(q, v).expect("anisotropic"),
        Kind::RotationPi => minus(2),
        Kind::BlockSum => {
            // -1 on the first plane, a reflection on the rest
            if n == 2 {
                return minus(2);
            }
            let rest: Vec<Rat> = q.diagonal_entries().expect("diagonal")[2..].to_vec();
            let qr = QuadForm::diagonal(&rest).expect("nonzero");
            let w: Vec<Rat> = v[2..].to_vec();
            let tail = if w.iter().all(Rat::is_zero) || qr.eval(&w).is_zero() {
                Matrix::identity(n - 2)
            } else {
                reflection(&qr, &w).expect("anisotropic")
            };
            Matrix::from_i64(&[&[-1, 0], &[0, -1]]).block_sum(&tail)
        }
    }
}

/// Deterministic cross-validation corpus over quadratic and biquadratic
/// torsors, ranks 1 to 4.
pub fn delta2_instances(cfg: &VerifyConfig) -> Vec<Delta2Instance> {
    let mut rng = cfg.rng(5);
    let max = cfg.bounds.max_rank.clamp(1, 4);
    let mut out = Vec::new();
    for d in [-1i64, 2, -2, 3, -3, 5, 6, -6, 7, -7, 10] {
        let torsor = quadratic_label(d);
        let palette = [1, d, -1, -d, 2, 3];
        for n in 1..=max {
            let kinds: &[Kind] = if n == 1 {
                &[Kind::MinusIdentity, Kind::Reflection]
            } else {
                &[Kind::MinusIdentity, Kind::Reflection, Kind::RotationPi, Kind::BlockSum]
            };
            for &kind in kinds {
                let mut found = 0;
                for attempt in 0..40 {
                    let diag: Vec<i64> = (0..n).map(|_| *palette.choose(&mut rng).expect("nonempty")).collect();
                    let q = QuadForm::diag_i64(&diag);
                    let v = random_anisotropic(&mut rng, &ints(&diag), 2);
                    let u = image(kind, &q, &v);
                    // the first try is kept whatever its regime
                    if attempt > 0 && !supported(&q, &u, d) {
                        continue;
                    }
                    out.push(Delta2Instance {
                        label: format!("{torsor}-r{n}-{kind:?}-{found}"),
                        torsor: torsor.clone(),
                        form: q,
                        images: vec![("c".into(), u)],
                    });
                    found += 1;
                    if found == 2 {
                        break;
                    }
                }
            }
        }
    }
    for (torsor, r1, r2) in [("sqrt2-sqrt3", 2i64, 3i64), ("sqrt-1-sqrt2", -1, 2), ("sqrt-3-sqrt5", -3, 5)] {
        let palette = [1, r1, r2, r1 * r2];
        for n in 2..=max {
            for t in 0..3 {
                let diag: Vec<i64> = (0..n).map(|_| *palette.choose(&mut rng).expect("nonempty")).collect();
                let signs = |rng: &mut rand_chacha::ChaCha8Rng| {
                    let s: Vec<Rat> = (0..n).map(|_| Rat::from(if rng.gen_bool(0.5) { -1 } else { 1 })).collect();
                    Matrix::diagonal(&s)
                };
                let (s1, s2) = (signs(&mut rng), signs(&mut rng));
                out.push(Delta2Instance {
                    label: format!("{torsor}-r{n}-{t}"),
                    torsor: torsor.into(),
                    form: QuadForm::diag_i64(&diag),
                    images: vec![("c1".into(), s1), ("c2".into(), s2)],
                });
            }
        }
    }
    out
}

/// `delta^2` through Clifford cocycles against the twist formula, plus
/// the product-form and averaging identities on each twist.
pub fn delta2_checks(cfg: &VerifyConfig) -> Vec<Outcome> {
    let cases = delta2_instances(cfg);
    par_map(&cases, |inst| {
        let label = inst.label.as_str();
        let input = match inst.input(&cfg.corpus) {
            Ok(i) => i,
            Err(e) => return vec![Outcome::new("clifford.delta2_cross_validation", label, Err(e), || Value::Null)],
        };
        let json = || twist_request_json(input.form(), input.rep(), &inst.torsor);
        let out = match twist(&input) {
            Ok(o) => o,
            Err(e) => return vec![Outcome::new("twist.rank", label, Err(e), json)],
        };
        let via_twist = delta2_from_invariants(&input.form().invariants(), &out.form.invariants());
        let cross = match delta2_clifford_for(&input) {
            Err(Error::UnsupportedSpinorNormRegime(why)) => Outcome::skip("clifford.delta2_cross_validation", label, why),
            r => Outcome::new("clifford.delta2_cross_validation", label, r.map(|c| c == via_twist), json),
        };
        vec![
            cross,
            Outcome::new("twist.rank", label, Ok(out.form.rank() == input.form().rank()), json),
            Outcome::new("twist.product_form", label, Ok(product_form_check(&input, &out)), json),
            Outcome::new("twist.averaging_identity", label, Ok(out.averaging_identity), json),
        ]
    })
    .concat()
}
