use std::sync::Arc;

use super::algebra::{CliffordAlgebra, CliffordElement};
use super::coeff::KElem;
use crate::arith::{square_class, Rat, SquareClass};
use crate::error::{Error, Result};
use crate::linalg::{primitive_integer, Matrix};
use crate::quadform::QuadForm;

/// Matrix of `tau_w(v) = v - 2 B(v,w)/q(w) w`.
pub fn reflection(q: &QuadForm, w: &[Rat]) -> Result<Matrix<Rat>> {
    let qw = q.eval(w);
    if qw.is_zero() {
        return Err(Error::Zero("reflection in an isotropic vector"));
    }
    let gw = q.gram().mul_vec(w);
    let c = Rat::from(2) / &qw;
    let n = q.rank();
    Ok(Matrix::from_fn(n, n, |i, j| {
        let d = if i == j { Rat::one() } else { Rat::zero() };
        d - &c * &w[i] * &gw[j]
    }))
}

/// Anisotropic `w_1, ..., w_k` with `u = tau_{w_1} ... tau_{w_k}` and
/// `k <= 2 rank`, each normalized to a primitive integer vector.
pub fn reflection_factorize(q: &QuadForm, u: &Matrix<Rat>) -> Result<Vec<Vec<Rat>>> {
    if !u.is_square() || u.rows() != q.rank() {
        return Err(Error::Dimension("matrix size differs from rank".into()));
    }
    if !q.preserved_by(u) {
        return Err(Error::NotOrthogonal);
    }
    let (_, p) = q.diagonalize();
    let mut cur = u.clone();
    let mut out = Vec::new();
    for i in 0..q.rank() {
        let e = p.col(i);
        let x = cur.mul_vec(&e);
        if x == e {
            continue;
        }
        let w: Vec<Rat> = x.iter().zip(&e).map(|(a, b)| a - b).collect();
        let steps = if !q.eval(&w).is_zero() {
            vec![w]
        } else {
            // u e and e differ by an isotropic vector: go through -e.
            vec![x.iter().zip(&e).map(|(a, b)| a + b).collect(), e.clone()]
        };
        for w in steps {
            let w = primitive_integer(&w);
            cur = reflection(q, &w)?.mul(&cur);
            out.push(w);
        }
    }
    debug_assert!(cur.is_identity());
    Ok(out)
}

/// A lift `t` of an orthogonal matrix to the Clifford group.
#[derive(Clone, Debug)]
pub struct Lift {
    pub t: CliffordElement,
    pub vectors: Vec<Vec<Rat>>,
    /// Spinor norm `N(t)`, the product of the `q(w_i)`.
    pub norm: Rat,
    pub class: SquareClass,
}

/// Lift `u` in `O(q)` for the diagonal form of `alg`. The algebra must
/// have rational coefficients.
pub fn lift(alg: &Arc<CliffordAlgebra>, u: &Matrix<Rat>) -> Result<Lift> {
    let q = QuadForm::diagonal(alg.coefficients())?;
    let vectors = reflection_factorize(&q, u)?;
    let mut t = alg.one();
    let mut norm = Rat::one();
    for w in &vectors {
        t = t.mul(&alg.vector(w))?;
        norm = norm * q.eval(w);
    }
    let class = square_class(&norm)?;
    Ok(Lift { t, vectors, norm, class })
}

/// The algebra map induced by an isometry `theta: (E,q) -> (F,f)`, stored
/// as the images of the basis blades.
#[derive(Clone, Debug)]
pub struct IsometryExtension {
    source: Arc<CliffordAlgebra>,
    target: Arc<CliffordAlgebra>,
    images: Vec<CliffordElement>,
}

impl IsometryExtension {
    pub fn image_of_blade(&self, s: usize) -> &CliffordElement {
        &self.images[s]
    }

    pub fn source(&self) -> &Arc<CliffordAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CliffordAlgebra> {
        &self.target
    }

    pub fn apply(&self, x: &CliffordElement) -> Result<CliffordElement> {
        if x.algebra().as_ref() != self.source.as_ref() {
            return Err(Error::Precondition("element is not in the source algebra".into()));
        }
        let mut out = self.target.zero();
        for (s, c) in x.coeffs().iter().enumerate() {
            out = out.add(&self.images[s].scale(c))?;
        }
        Ok(out)
    }
}

/// Extend `theta` (columns are images of the source basis) to Clifford
/// algebras; multiplicativity is verified on blades of grade at most two.
pub fn extend_isometry(
    source: &Arc<CliffordAlgebra>,
    target: &Arc<CliffordAlgebra>,
    theta: &Matrix<Rat>,
) -> Result<IsometryExtension> {
    let (n, m) = (source.rank(), target.rank());
    if theta.rows() != m || theta.cols() != n || n != m {
        return Err(Error::Dimension("isometry has the wrong shape".into()));
    }
    if source.field() != target.field() {
        return Err(Error::Precondition("source and target coefficient fields differ".into()));
    }
    let gram = |a: &[Rat]| Matrix::diagonal(a);
    if theta.transpose().mul(&gram(target.coefficients())).mul(theta) != gram(source.coefficients()) {
        return Err(Error::NotOrthogonal);
    }
    let gens: Vec<CliffordElement> = (0..n).map(|i| target.vector(&theta.col(i))).collect();
    let mut images = Vec::with_capacity(source.dim());
    for s in 0..source.dim() {
        let mut x = target.one();
        for (i, g) in gens.iter().enumerate() {
            if s >> i & 1 == 1 {
                x = x.mul(g)?;
            }
        }
        images.push(x);
    }
    let ext = IsometryExtension { source: source.clone(), target: target.clone(), images };
    let low: Vec<usize> = (0..source.dim()).filter(|s: &usize| s.count_ones() <= 2).collect();
    for &s in &low {
        for &t in &low {
            let lhs = ext.apply(&source.blade(s).mul(&source.blade(t))?)?;
            let rhs = ext.images[s].mul(&ext.images[t])?;
            if lhs != rhs {
                return Err(Error::BrokenInput("extension is not multiplicative".into()));
            }
        }
    }
    Ok(ext)
}

/// Conjugation `x -> t x t^-1`, with the extra sign `eps` on odd elements.
/// `t` must be homogeneous, so conjugation preserves parity.
pub fn twisted_conjugation(t: &CliffordElement, eps: i8, x: &CliffordElement) -> Result<CliffordElement> {
    let y = t.mul(x)?.mul(&t.inverse()?)?;
    if eps > 0 {
        return Ok(y);
    }
    let k = x.algebra().field();
    let coeffs: Vec<KElem> = y
        .coeffs()
        .iter()
        .enumerate()
        .map(|(s, c)| if s.count_ones() % 2 == 1 { crate::linalg::Field::neg(k, c) } else { c.clone() })
        .collect();
    x.algebra().from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(a: &[i64]) -> Arc<CliffordAlgebra> {
        CliffordAlgebra::over_q(a.iter().map(|&x| Rat::from(x)).collect()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from(x)).collect()
    }

    fn rational(m: Matrix<KElem>) -> Matrix<Rat> {
        m.map(|x| {
            assert!(x[1..].iter().all(Rat::is_zero));
            x[0].clone()
        })
    }

    #[test]
    fn factorization_examples() {
        let q = QuadForm::diag_i64(&[1, 1]);
        assert!(reflection_factorize(&q, &Matrix::identity(2)).unwrap().is_empty());
        assert_eq!(reflection_factorize(&q, &Matrix::from_i64(&[&[-1, 0], &[0, 1]])).unwrap(), vec![ints(&[1, 0])]);
        assert_eq!(
            reflection_factorize(&q, &Matrix::from_i64(&[&[-1, 0], &[0, -1]])).unwrap(),
            vec![ints(&[1, 0]), ints(&[0, 1])]
        );
        assert!(matches!(
            reflection_factorize(&q, &Matrix::from_i64(&[&[1, 1], &[0, 1]])),
            Err(Error::NotOrthogonal)
        ));
    }

    #[test]
    fn isotropic_detour() {
        // u e_1 = (1,1,1) and (1,1,1) - e_1 is isotropic for <1,1,-1>.
        let q = QuadForm::diag_i64(&[1, 1, -1]);
        let u = reflection(&q, &ints(&[2, 1, 1])).unwrap().mul(&reflection(&q, &ints(&[1, 0, 0])).unwrap());
        assert_eq!(u.col(0), ints(&[1, 1, 1]));
        let ws = reflection_factorize(&q, &u).unwrap();
        assert_eq!(ws[..2], [ints(&[2, 1, 1]), ints(&[1, 0, 0])]);
        assert!(ws.len() <= 6);
        let prod = ws.iter().fold(Matrix::identity(3), |acc, w| acc.mul(&reflection(&q, w).unwrap()));
        assert_eq!(prod, u);

        let h = QuadForm::new(Matrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        let swap = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        let ws = reflection_factorize(&h, &swap).unwrap();
        let prod = ws.iter().fold(Matrix::identity(2), |acc, w| acc.mul(&reflection(&h, w).unwrap()));
        assert_eq!(prod, swap);
    }

    #[test]
    fn lift_examples() {
        let c = alg(&[1, 1]);
        let l = lift(&c, &Matrix::identity(2)).unwrap();
        assert_eq!(l.t, c.one());
        assert!(l.class.is_trivial());
        let l = lift(&c, &Matrix::from_i64(&[&[-1, 0], &[0, -1]])).unwrap();
        assert_eq!(l.t, c.blade(0b11));
        assert!(l.class.is_trivial());
        let c2 = alg(&[2, 1]);
        let l = lift(&c2, &Matrix::from_i64(&[&[-1, 0], &[0, 1]])).unwrap();
        assert_eq!(l.t, c2.generator(0));
        assert_eq!(l.class, SquareClass::of_int(2));
        assert_eq!(rational(l.t.r_map(-1).unwrap()), Matrix::from_i64(&[&[-1, 0], &[0, 1]]));
    }

    #[test]
    fn extension_examples() {
        let c = alg(&[1, 1]);
        let id = extend_isometry(&c, &c, &Matrix::identity(2)).unwrap();
        for s in 0..4 {
            assert_eq!(id.image_of_blade(s), &c.blade(s));
        }
        let swap = extend_isometry(&c, &c, &Matrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(swap.image_of_blade(1), &c.generator(1));
        assert_eq!(swap.image_of_blade(2), &c.generator(0));
        assert_eq!(swap.image_of_blade(3), &c.blade(3).neg());
        assert!(extend_isometry(&c, &alg(&[1, 2]), &Matrix::identity(2)).is_err());
    }

    #[test]
    fn conjugation_sign_law() {
        let c = alg(&[1, 2, 3]);
        let q = QuadForm::diag_i64(&[1, 2, 3]);
        let theta = reflection(&q, &ints(&[1, 1, 0])).unwrap();
        let l = lift(&c, &theta).unwrap();
        let ext = extend_isometry(&c, &c, &theta).unwrap();
        for s in 0..8 {
            let b = c.blade(s);
            assert_eq!(ext.apply(&b).unwrap(), twisted_conjugation(&l.t, -1, &b).unwrap());
        }
    }
}
