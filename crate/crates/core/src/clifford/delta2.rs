use super::algebra::{CliffordAlgebra, CliffordElement};
use super::coeff::{CoeffField, KElem};
use super::lift::lift;
use crate::arith::{cup, BrClass, Rat, SquareClass};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::quadform::QuadForm;

/// A representation of `Gal(Q(sqrt r_1, ..., sqrt r_k)/Q)`, `k <= 2`, given
/// by the images of the generators `sigma_i`, where `sigma_i` flips
/// `sqrt r_i` and fixes the other root.
#[derive(Clone, Debug)]
pub struct KummerRep {
    pub radicands: Vec<i64>,
    pub images: Vec<Matrix<Rat>>,
}

fn unsupported(msg: impl Into<String>) -> Error {
    Error::UnsupportedSpinorNormRegime(msg.into())
}

/// `delta^2` of the cocycle `rho` via lifts to the Clifford group with
/// spinor norm one over `Q(sqrt r_i)`.
pub fn delta2_via_clifford(q: &QuadForm, rho: &KummerRep) -> Result<BrClass> {
    let k = rho.radicands.len();
    if rho.images.len() != k {
        return Err(Error::Dimension("one image per radicand is required".into()));
    }
    let field = CoeffField::new(rho.radicands.clone()).map_err(|e| unsupported(e.to_string()))?;
    let n = q.rank();
    if rho.images.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::Dimension("image size differs from rank".into()));
    }
    if rho.images.iter().any(|m| !q.preserved_by(m)) {
        return Err(Error::NotOrthogonal);
    }
    for (i, a) in rho.images.iter().enumerate() {
        if !a.mul(a).is_identity() || rho.images[i..].iter().any(|b| a.mul(b) != b.mul(a)) {
            return Err(Error::BrokenInput("images do not define a homomorphism of an elementary 2-group".into()));
        }
    }
    if rho.images.iter().all(Matrix::is_identity) {
        return Ok(BrClass::zero());
    }

    let (diag, p) = q.diagonalize();
    let pinv = p.inverse().expect("change of basis is invertible");
    let over_q = CliffordAlgebra::over_q(diag)?;
    let over_k = over_q.extend_scalars(field.clone());
    let order = 1usize << k;

    // Normalized lifts t'_g for every g, indexed by its flip mask.
    let mut lifts = Vec::with_capacity(order);
    for g in 0..order {
        let u = (0..k).filter(|i| g >> i & 1 == 1).fold(Matrix::identity(n), |acc, i| acc.mul(&rho.images[i]));
        let l = lift(&over_q, &pinv.mul(&u).mul(&p))?;
        let root = sqrt_in(&field, &l.norm)
            .ok_or_else(|| unsupported(format!("spinor norm {} outside the Kummer group", l.norm)))?;
        let t = over_k.from_coeffs(l.t.coeffs().iter().map(|c| field.from_rat(&c[0])).collect())?;
        lifts.push(t.scale(&field.inv(&root).expect("nonzero root")));
    }

    let b = |g: usize, h: usize| -> Result<i8> { cocycle(&field, &lifts, g, h) };
    for g in 0..order {
        for h in 0..order {
            b(g, h)?;
        }
    }
    let flip = |g: usize| -> Result<bool> { Ok(b(g, g)? == -1) };
    let minus = SquareClass::minus_one();
    let r: Vec<SquareClass> = rho.radicands.iter().map(|&x| SquareClass::of_int(x)).collect();
    let mut class = BrClass::zero();
    if k >= 1 && flip(1)? {
        class = class.add(&cup(&r[0], &minus));
    }
    if k == 2 {
        let (alpha, beta, diag) = (flip(1)?, flip(2)?, flip(3)?);
        if beta {
            class = class.add(&cup(&r[1], &minus));
        }
        // Restriction to <sigma_1 sigma_2> sees alpha + beta + gamma.
        if alpha ^ beta ^ diag {
            class = class.add(&cup(&r[0], &r[1]));
        }
    }
    Ok(class)
}

/// `b(g,h) = t'_g g(t'_h) t'_{gh}^-1`, which must be a sign.
fn cocycle(field: &CoeffField, lifts: &[CliffordElement], g: usize, h: usize) -> Result<i8> {
    let v = lifts[g].mul(&lifts[h].conj(g))?.mul(&lifts[g ^ h].inverse()?)?;
    let s = v.as_scalar().and_then(|c| field.as_rational(&c));
    match s {
        Some(x) if x.is_one() => Ok(1),
        Some(x) if (-&x).is_one() => Ok(-1),
        _ => Err(Error::BrokenInput(format!("cocycle value {v} is not a sign"))),
    }
}

/// `sqrt s` in the Kummer field, when `s` lies in the group generated by
/// the radicands modulo squares.
fn sqrt_in(field: &CoeffField, s: &Rat) -> Option<KElem> {
    let radicands = field.radicands();
    (0..field.degree()).find_map(|mask| {
        let m: Rat = (0..radicands.len()).filter(|i| mask >> i & 1 == 1).map(|i| Rat::from(radicands[i])).product();
        let c = (s / &m).sqrt_exact()?;
        let mut v = field.zero();
        v[mask] = c;
        Some(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_i64(rows)
    }

    fn rep(radicands: &[i64], images: Vec<Matrix<Rat>>) -> KummerRep {
        KummerRep { radicands: radicands.to_vec(), images }
    }

    #[test]
    fn trivial_rep() {
        let q = QuadForm::diag_i64(&[1, 1]);
        assert!(delta2_via_clifford(&q, &rep(&[5], vec![Matrix::identity(2)])).unwrap().is_zero());
    }

    #[test]
    fn minus_identity() {
        let q = QuadForm::diag_i64(&[1, 1]);
        for d in [-1, 2, 3, -7, 10] {
            let got = delta2_via_clifford(&q, &rep(&[d], vec![m(&[&[-1, 0], &[0, -1]])])).unwrap();
            assert_eq!(got, cup(&SquareClass::of_int(d), &SquareClass::minus_one()), "d = {d}");
        }
    }

    #[test]
    fn coordinate_reflection() {
        let q = QuadForm::diag_i64(&[1, 1]);
        let got = delta2_via_clifford(&q, &rep(&[3], vec![m(&[&[-1, 0], &[0, 1]])])).unwrap();
        assert!(got.is_zero());
    }

    #[test]
    fn biquadratic_diagonal_signs() {
        let q = QuadForm::diag_i64(&[1, 1]);
        let images = vec![m(&[&[-1, 0], &[0, 1]]), m(&[&[1, 0], &[0, -1]])];
        let got = delta2_via_clifford(&q, &rep(&[2, 3], images)).unwrap();
        assert_eq!(got, cup(&SquareClass::of_int(2), &SquareClass::of_int(3)));
    }

    #[test]
    fn unsupported_norm() {
        // Reflection in a vector of norm 2 over Q(sqrt 3).
        let q = QuadForm::diag_i64(&[2, 1]);
        let r = delta2_via_clifford(&q, &rep(&[3], vec![m(&[&[-1, 0], &[0, 1]])]));
        assert!(matches!(r, Err(Error::UnsupportedSpinorNormRegime(_))));
    }

    #[test]
    fn rejects_non_homomorphism() {
        let q = QuadForm::diag_i64(&[1, 1]);
        let r = delta2_via_clifford(&q, &rep(&[3], vec![m(&[&[0, -1], &[1, 0]])]));
        assert!(matches!(r, Err(Error::BrokenInput(_))));
    }
}
