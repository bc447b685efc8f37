//! Twists `(E ⊗ A)^G` of a quadratic space by an orthogonal representation
//! through a torsor, the classes attached to representations, and the
//! checks relating them.

use serde::Serialize;

use crate::arith::{cup, square_class, BrClass, Rat, SquareClass};
use crate::clifford::{delta2_via_clifford, KummerRep};
use crate::error::{Error, Result};
use crate::galois::GaloisAlgebra;
use crate::groupalg::{same_group, OrthRep, Subgroup};
use crate::linalg::{kernel, rank, vstack, Matrix, Rationals};
use crate::quadform::{is_isometric, is_metabolic, FormInvariants, Lagrangian, QuadForm};

/// `(E, rho, A)` with `rho` a representation on `E` of the group of `A`.
#[derive(Clone, Debug)]
pub struct TwistInput {
    rep: OrthRep,
    torsor: GaloisAlgebra,
}

#[derive(Clone, Debug)]
pub struct TwistOutput {
    pub form: QuadForm,
    /// Basis of `(E ⊗ A)^G`; coordinate `(i, a)` sits at `i * dim A + a`.
    pub basis: Vec<Vec<Rat>>,
    /// The fixed space equals the image of `sum_g rho(g) ⊗ g`.
    pub averaging_identity: bool,
}

/// Flags reported with a twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistChecks {
    pub w1_formula: bool,
    pub product_form: bool,
    pub averaging_identity: bool,
}

impl TwistInput {
    pub fn new(form: &QuadForm, rep: OrthRep, torsor: GaloisAlgebra) -> Result<Self> {
        if rep.form() != form {
            return Err(Error::Precondition("representation acts on a different form".into()));
        }
        if !same_group(rep.group(), torsor.group()) {
            return Err(Error::GroupMismatch(format!(
                "representation group of order {} differs from the group of torsor {}",
                rep.group().order(),
                torsor.label()
            )));
        }
        Ok(TwistInput { rep, torsor })
    }

    pub fn form(&self) -> &QuadForm {
        self.rep.form()
    }

    pub fn rep(&self) -> &OrthRep {
        &self.rep
    }

    pub fn torsor(&self) -> &GaloisAlgebra {
        &self.torsor
    }

    fn operator(&self, g: usize) -> Matrix<Rat> {
        self.rep.image(g).kron(self.torsor.action(g))
    }
}

pub fn twist(input: &TwistInput) -> Result<TwistOutput> {
    let n = input.form().rank();
    let m = input.torsor.dim();
    let group = input.rep.group();
    let id = Matrix::<Rat>::identity(n * m);
    let blocks: Vec<Matrix<Rat>> =
        group.generators().iter().map(|(_, s)| input.operator(*s).sub(&id)).collect();
    let basis = if blocks.is_empty() {
        (0..n * m).map(|i| id.col(i)).collect()
    } else {
        kernel(&Rationals, &vstack(&blocks))
    };
    if basis.len() != n {
        return Err(Error::BrokenInput(format!("fixed space has dimension {} instead of {n}", basis.len())));
    }
    let ops: Vec<Matrix<Rat>> = (0..group.order()).map(|g| input.operator(g)).collect();
    for op in &ops {
        if basis.iter().any(|v| op.mul_vec(v) != *v) {
            return Err(Error::BrokenInput("fixed vector moved by a non-generator".into()));
        }
    }
    let sigma = ops.iter().skip(1).fold(ops[0].clone(), |acc, op| acc.add(op));
    let x = Matrix::from_cols(&basis);
    let both = Matrix::from_cols(&(0..n * m).map(|i| sigma.col(i)).chain(basis.iter().cloned()).collect::<Vec<_>>());
    let averaging_identity = rank(&Rationals, &sigma) == n && rank(&Rationals, &both) == n;

    let trace = input.torsor.algebra().trace_form()?;
    let big = input.form().gram().kron(trace.gram());
    let scale = Rat::frac(1, group.order() as i64);
    let gram = x.transpose().mul(&big).mul(&x).scale(&scale);
    let form = QuadForm::new(gram).map_err(|_| Error::BrokenInput("twisted form is degenerate".into()))?;
    Ok(TwistOutput { form, basis, averaging_identity })
}

/// The product form `q ⊗ mu` on fixed vectors lands in `Q 1` and agrees
/// with the twisted Gram.
pub fn product_form_check(input: &TwistInput, out: &TwistOutput) -> bool {
    let alg = input.torsor.algebra();
    let m = alg.dim();
    let g = input.form().gram();
    let n = g.rows();
    for (i, x) in out.basis.iter().enumerate() {
        for (j, y) in out.basis.iter().enumerate() {
            let mut acc = vec![Rat::zero(); m];
            for p in 0..n {
                for r in 0..n {
                    let gpr = g.get(p, r);
                    if gpr.is_zero() {
                        continue;
                    }
                    let xa = &x[p * m..(p + 1) * m];
                    let yb = &y[r * m..(r + 1) * m];
                    for (k, c) in alg.mul(xa, yb).into_iter().enumerate() {
                        acc[k] += &(gpr * &c);
                    }
                }
            }
            match alg.as_scalar(&acc) {
                Some(c) if c == *out.form.gram().get(i, j) => {}
                _ => return false,
            }
        }
    }
    true
}

/// `w_1(rho)`: the square class cut out by `det rho` through the torsor.
pub fn w1_rep(rep: &OrthRep, torsor: &GaloisAlgebra) -> Result<SquareClass> {
    let chi = rep.det_character();
    if chi.iter().all(|&c| c == 1) {
        return Ok(SquareClass::one());
    }
    let z = torsor.eigenvector(&chi)?;
    let alg = torsor.algebra();
    let z2 = alg.mul(&z, &z);
    let r = alg.as_scalar(&z2).ok_or_else(|| Error::BrokenInput("z^2 is not rational".into()))?;
    square_class(&r)
}

/// `w2(T) + w2(E) + w1(E) ∪ delta1` with `delta1 = w1(T) w1(E)`.
pub fn delta2_via_twist(input: &TwistInput) -> Result<BrClass> {
    let t = twist(input)?.form.invariants();
    Ok(delta2_from_invariants(&input.form().invariants(), &t))
}

pub fn delta2_from_invariants(e: &FormInvariants, t: &FormInvariants) -> BrClass {
    let delta1 = t.w1.mul(&e.w1);
    t.w2.add(&e.w2).add(&cup(&e.w1, &delta1))
}

/// `delta^2` through Clifford lifts, for torsors of elementary abelian
/// 2-groups that are fields.
pub fn delta2_clifford_for(input: &TwistInput) -> Result<BrClass> {
    let radicands = input.torsor.kummer_radicands()?;
    let images = input.rep.group().generators().iter().map(|(_, s)| input.rep.image(*s).clone()).collect();
    delta2_via_clifford(input.form(), &KummerRep { radicands, images })
}

/// `w1(E_rho) = w1(E) + w1(rho)`.
pub fn verify_thm03_w1(input: &TwistInput) -> Result<bool> {
    let t = twist(input)?;
    Ok(t.form.invariants().w1 == input.form().invariants().w1.mul(&w1_rep(&input.rep, &input.torsor)?))
}

/// The twist of the coset form by the permutation representation is the
/// trace form of the fixed subalgebra.
pub fn verify_prop27(h: &Subgroup, torsor: &GaloisAlgebra) -> Result<bool> {
    let rep = OrthRep::permutation(torsor.group().clone(), h);
    let form = rep.form().clone();
    let input = TwistInput::new(&form, rep, torsor.clone())?;
    let t = twist(&input)?;
    let fixed = torsor.fixed_subalgebra(h)?.algebra.trace_form()?;
    Ok(is_isometric(&t.form, &fixed))
}

/// Twisting a metabolic space with an invariant lagrangian stays metabolic.
pub fn metabolic_twist_check(input: &TwistInput, lagrangian: &Lagrangian, bound: i64) -> Result<bool> {
    lagrangian.validate(input.form())?;
    if !input.rep.images().iter().all(|m| lagrangian.is_invariant_under(m)) {
        return Err(Error::InvalidLagrangian("lagrangian is not invariant under the representation".into()));
    }
    Ok(is_metabolic(&twist(input)?.form, bound).is_metabolic())
}

/// `twist(E1 ⊥ E2) ≅ twist(E1) ⊥ twist(E2)` over a shared torsor.
pub fn twist_sum_functoriality(a: &TwistInput, b: &TwistInput) -> Result<bool> {
    if a.torsor.label() != b.torsor.label() || !same_group(a.torsor.group(), b.torsor.group()) {
        return Err(Error::GroupMismatch("inputs use different torsors".into()));
    }
    let rep = a.rep.direct_sum(&b.rep)?;
    let form = rep.form().clone();
    let sum = twist(&TwistInput::new(&form, rep, a.torsor.clone())?)?;
    let parts = twist(a)?.form.orth_sum(&twist(b)?.form);
    Ok(is_isometric(&sum.form, &parts))
}

/// All flags for one instance.
pub fn checks(input: &TwistInput, out: &TwistOutput) -> Result<TwistChecks> {
    let w1 = out.form.invariants().w1 == input.form().invariants().w1.mul(&w1_rep(&input.rep, &input.torsor)?);
    Ok(TwistChecks {
        w1_formula: w1,
        product_form: product_form_check(input, out),
        averaging_identity: out.averaging_identity,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::galois::Corpus;
    use crate::groupalg::FiniteGroup;

    fn corpus() -> Corpus {
        Corpus::bundled().with_derived()
    }

    fn sign_rep(t: &GaloisAlgebra) -> OrthRep {
        let g = t.group();
        let s = g.generator("c").unwrap();
        let chi: Vec<i8> = (0..g.order()).map(|x| if x == s { -1 } else { 1 }).collect();
        OrthRep::from_character(g.clone(), &chi).unwrap()
    }

    fn input(form: &QuadForm, rep: OrthRep, t: &GaloisAlgebra) -> TwistInput {
        TwistInput::new(form, rep, t.clone()).unwrap()
    }

    fn gen_rep(t: &GaloisAlgebra, form: &QuadForm, m: &[&[i64]]) -> OrthRep {
        OrthRep::from_generator_images(t.group().clone(), form.clone(), &[("c".into(), Matrix::from_i64(m))]).unwrap()
    }

    #[test]
    fn trivial_and_split_twists() {
        let c = corpus();
        let e = QuadForm::diag_i64(&[1, 3, -2]);
        for t in [c.get("sqrt5").unwrap(), c.get("cubic9").unwrap()] {
            let i = input(&e, OrthRep::trivial(t.group().clone(), e.clone()), t);
            assert!(is_isometric(&twist(&i).unwrap().form, &e));
        }
        let split = c.get("split-c2").unwrap();
        let e2 = QuadForm::diag_i64(&[1, 1]);
        let i = input(&e2, gen_rep(split, &e2, &[&[0, 1], &[1, 0]]), split);
        assert!(is_isometric(&twist(&i).unwrap().form, &e2));
    }

    #[test]
    fn sign_twist() {
        let c = corpus();
        for d in [5i64, -3, 10] {
            let t = c.get(&format!("sqrt{d}")).unwrap();
            let e = QuadForm::diag_i64(&[1]);
            let i = input(&e, sign_rep(t), t);
            let out = twist(&i).unwrap();
            assert_eq!(*out.form.gram(), Matrix::from_i64(&[&[d]]));
            assert!(product_form_check(&i, &out));
            assert!(out.averaging_identity);
            assert_eq!(w1_rep(i.rep(), t).unwrap(), SquareClass::of_int(d));
            assert!(verify_thm03_w1(&i).unwrap());
        }
    }

    #[test]
    fn regular_rep_w1() {
        let c = corpus();
        let t = c.get("sqrt7").unwrap();
        let g = t.group().clone();
        let reg = OrthRep::permutation(g.clone(), &g.trivial_subgroup());
        assert_eq!(w1_rep(&reg, t).unwrap(), SquareClass::of_int(7));
        let e = reg.form().clone();
        let out = twist(&input(&e, reg, t)).unwrap();
        assert!(is_isometric(&out.form, &QuadForm::diag_i64(&[2, 14])));
    }

    #[test]
    fn delta2_examples() {
        let c = corpus();
        let e = QuadForm::diag_i64(&[1, 1]);
        for d in [2i64, -1, 5, -7] {
            let label = if d == -1 { "gaussian".to_string() } else { format!("sqrt{d}") };
            let t = c.get(&label).unwrap();
            let minus = input(&e, gen_rep(t, &e, &[&[-1, 0], &[0, -1]]), t);
            let expected = cup(&SquareClass::of_int(d), &SquareClass::minus_one());
            assert_eq!(delta2_via_twist(&minus).unwrap(), expected);
            assert_eq!(delta2_clifford_for(&minus).unwrap(), expected);
            let refl = input(&e, gen_rep(t, &e, &[&[-1, 0], &[0, 1]]), t);
            assert!(delta2_via_twist(&refl).unwrap().is_zero());
            assert!(delta2_clifford_for(&refl).unwrap().is_zero());
        }
        let t = c.get("sqrt3").unwrap();
        let triv = input(&e, OrthRep::trivial(t.group().clone(), e.clone()), t);
        assert!(delta2_via_twist(&triv).unwrap().is_zero());
    }

    #[test]
    fn prop27_examples() {
        let c = corpus();
        for label in ["sqrt-6", "cubic9", "zeta5", "s3-induced-sqrt5"] {
            let t = c.get(label).unwrap();
            for h in t.group().subgroups() {
                assert!(verify_prop27(&h, t).unwrap(), "{label}");
            }
        }
    }

    #[test]
    fn metabolic_examples() {
        let c = corpus();
        let t = c.get("sqrt3").unwrap();
        let e = QuadForm::diag_i64(&[1, -1]);
        let l = Lagrangian::new(vec![vec![Rat::one(), Rat::one()]]);
        let triv = input(&e, OrthRep::trivial(t.group().clone(), e.clone()), t);
        assert!(metabolic_twist_check(&triv, &l, 50).unwrap());
        let minus = input(&e, gen_rep(t, &e, &[&[-1, 0], &[0, -1]]), t);
        assert!(metabolic_twist_check(&minus, &l, 50).unwrap());
        let swap = input(&e, gen_rep(t, &e, &[&[-1, 0], &[0, 1]]), t);
        assert!(matches!(metabolic_twist_check(&swap, &l, 50), Err(Error::InvalidLagrangian(_))));
    }

    #[test]
    fn sums() {
        let c = corpus();
        let t = c.get("sqrt5").unwrap();
        let one = QuadForm::diag_i64(&[1]);
        let a = input(&one, sign_rep(t), t);
        let b = input(&one, OrthRep::trivial(t.group().clone(), one.clone()), t);
        assert!(twist_sum_functoriality(&a, &b).unwrap());
    }

    #[test]
    fn group_mismatch() {
        let c = corpus();
        let e = QuadForm::diag_i64(&[1]);
        let c3 = Arc::new(FiniteGroup::cyclic(3));
        let r = TwistInput::new(&e, OrthRep::trivial(c3, e.clone()), c.get("sqrt5").unwrap().clone());
        assert!(matches!(r, Err(Error::GroupMismatch(_))));
    }
}
