use std::fmt;
use std::sync::Arc;

use super::coeff::{CoeffField, KElem};
use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::linalg::{solve, Field, Matrix};

/// Clifford algebra of the diagonal form `<a_1, ..., a_n>` over a
/// coefficient field. Blades `e_S` are indexed by bitmask `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordAlgebra {
    a: Vec<Rat>,
    field: CoeffField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    /// `+1` for even, `-1` for odd.
    pub fn sign(self) -> Option<i8> {
        match self {
            Parity::Even => Some(1),
            Parity::Odd => Some(-1),
            Parity::Mixed => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordElement {
    alg: Arc<CliffordAlgebra>,
    coeffs: Vec<KElem>,
}

/// `e_s e_t = c e_{s xor t}`; returns `(c, s xor t)`.
fn blade_mul(a: &[Rat], s: usize, t: usize) -> (Rat, usize) {
    let swaps: u32 = (0..a.len()).filter(|j| t >> j & 1 == 1).map(|j| (s >> (j + 1)).count_ones()).sum();
    let mut c: Rat = (0..a.len()).filter(|i| (s & t) >> i & 1 == 1).map(|i| a[i].clone()).product();
    if swaps % 2 == 1 {
        c = -c;
    }
    (c, s ^ t)
}

fn grade_sign(s: usize) -> bool {
    let k = s.count_ones();
    (k * k.saturating_sub(1) / 2) % 2 == 1
}

impl CliffordAlgebra {
    pub fn new(a: Vec<Rat>, field: CoeffField) -> Result<Arc<Self>> {
        if a.iter().any(Rat::is_zero) {
            return Err(Error::Degenerate);
        }
        if a.len() > 10 {
            return Err(Error::SizeLimit("Clifford algebras are limited to rank 10".into()));
        }
        Ok(Arc::new(CliffordAlgebra { a, field }))
    }

    pub fn over_q(a: Vec<Rat>) -> Result<Arc<Self>> {
        CliffordAlgebra::new(a, CoeffField::rationals())
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.a.len()
    }

    pub fn coefficients(&self) -> &[Rat] {
        &self.a
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    /// The same form over a larger coefficient field.
    pub fn extend_scalars(&self, field: CoeffField) -> Arc<Self> {
        Arc::new(CliffordAlgebra { a: self.a.clone(), field })
    }

    pub fn zero(self: &Arc<Self>) -> CliffordElement {
        CliffordElement { alg: self.clone(), coeffs: vec![self.field.zero(); self.dim()] }
    }

    pub fn scalar(self: &Arc<Self>, c: KElem) -> CliffordElement {
        let mut x = self.zero();
        x.coeffs[0] = c;
        x
    }

    pub fn one(self: &Arc<Self>) -> CliffordElement {
        self.scalar(self.field.one())
    }

    pub fn blade(self: &Arc<Self>, s: usize) -> CliffordElement {
        let mut x = self.zero();
        x.coeffs[s] = self.field.one();
        x
    }

    pub fn generator(self: &Arc<Self>, i: usize) -> CliffordElement {
        self.blade(1 << i)
    }

    pub fn vector(self: &Arc<Self>, v: &[Rat]) -> CliffordElement {
        let mut x = self.zero();
        for (i, c) in v.iter().enumerate() {
            x.coeffs[1 << i] = self.field.from_rat(c);
        }
        x
    }

    pub fn from_coeffs(self: &Arc<Self>, coeffs: Vec<KElem>) -> Result<CliffordElement> {
        if coeffs.len() != self.dim() || coeffs.iter().any(|c| c.len() != self.field.degree()) {
            return Err(Error::Dimension("coefficient vector has the wrong shape".into()));
        }
        Ok(CliffordElement { alg: self.clone(), coeffs })
    }

    /// `q(v) = sum a_i v_i^2`.
    pub fn q(&self, v: &[Rat]) -> Rat {
        v.iter().zip(&self.a).map(|(x, a)| a * x * x).sum()
    }
}

impl CliffordElement {
    pub fn algebra(&self) -> &Arc<CliffordAlgebra> {
        &self.alg
    }

    pub fn coeffs(&self) -> &[KElem] {
        &self.coeffs
    }

    pub fn coeff(&self, s: usize) -> &KElem {
        &self.coeffs[s]
    }

    fn field(&self) -> &CoeffField {
        &self.alg.field
    }

    fn check_same(&self, other: &CliffordElement) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg {
            Ok(())
        } else {
            Err(Error::Precondition("elements of different Clifford algebras".into()))
        }
    }

    fn with_coeffs(&self, coeffs: Vec<KElem>) -> CliffordElement {
        CliffordElement { alg: self.alg.clone(), coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field().is_zero(c))
    }

    pub fn add(&self, other: &CliffordElement) -> Result<CliffordElement> {
        self.check_same(other)?;
        let k = self.field();
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| k.add(x, y)).collect()))
    }

    pub fn sub(&self, other: &CliffordElement) -> Result<CliffordElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CliffordElement {
        let k = self.field();
        self.with_coeffs(self.coeffs.iter().map(|x| k.neg(x)).collect())
    }

    pub fn scale(&self, c: &KElem) -> CliffordElement {
        let k = self.field();
        self.with_coeffs(self.coeffs.iter().map(|x| k.mul(x, c)).collect())
    }

    pub fn scale_rat(&self, c: &Rat) -> CliffordElement {
        let k = self.field();
        self.with_coeffs(self.coeffs.iter().map(|x| k.scale(x, c)).collect())
    }

    pub fn mul(&self, other: &CliffordElement) -> Result<CliffordElement> {
        self.check_same(other)?;
        let k = self.field();
        let mut out = vec![k.zero(); self.alg.dim()];
        for (s, x) in self.coeffs.iter().enumerate() {
            if k.is_zero(x) {
                continue;
            }
            for (t, y) in other.coeffs.iter().enumerate() {
                if k.is_zero(y) {
                    continue;
                }
                let (c, u) = blade_mul(&self.alg.a, s, t);
                out[u] = k.add(&out[u], &k.scale(&k.mul(x, y), &c));
            }
        }
        Ok(self.with_coeffs(out))
    }

    /// Reversal anti-automorphism.
    pub fn sigma(&self) -> CliffordElement {
        let k = self.field();
        self.with_coeffs(
            self.coeffs.iter().enumerate().map(|(s, x)| if grade_sign(s) { k.neg(x) } else { x.clone() }).collect(),
        )
    }

    /// Galois action on the coefficients.
    pub fn conj(&self, flips: usize) -> CliffordElement {
        let k = self.field();
        self.with_coeffs(self.coeffs.iter().map(|x| k.conj(x, flips)).collect())
    }

    pub fn parity(&self) -> Parity {
        let k = self.field();
        let support = || self.coeffs.iter().enumerate().filter(|(_, x)| !k.is_zero(x)).map(|(s, _)| s);
        if support().all(|s| s.count_ones() % 2 == 0) {
            Parity::Even
        } else if support().all(|s| s.count_ones() % 2 == 1) {
            Parity::Odd
        } else {
            Parity::Mixed
        }
    }

    pub fn as_scalar(&self) -> Option<KElem> {
        let k = self.field();
        self.coeffs[1..].iter().all(|x| k.is_zero(x)).then(|| self.coeffs[0].clone())
    }

    /// Coordinates in `V` if the element has pure grade one (or is zero).
    pub fn as_vector(&self) -> Option<Vec<KElem>> {
        let k = self.field();
        let pure = self.coeffs.iter().enumerate().all(|(s, x)| s.count_ones() == 1 || k.is_zero(x));
        pure.then(|| (0..self.alg.rank()).map(|i| self.coeffs[1 << i].clone()).collect())
    }

    /// Two-sided inverse by solving `x y = 1` exactly.
    pub fn inverse(&self) -> Result<CliffordElement> {
        let k = self.field();
        let dim = self.alg.dim();
        let mut m = Matrix::from_fn(dim, dim, |_, _| k.zero());
        for t in 0..dim {
            let col = self.mul(&self.alg.blade(t))?;
            for (s, c) in col.coeffs.into_iter().enumerate() {
                m.set(s, t, c);
            }
        }
        let rhs = self.alg.one().coeffs;
        let y = solve(k, &m, &rhs).ok_or(Error::Zero("non-invertible Clifford element"))?;
        let y = self.with_coeffs(y);
        if y.mul(self)? != self.alg.one() {
            return Err(Error::Zero("element has a one-sided inverse only"));
        }
        Ok(y)
    }

    /// Check homogeneity, invertibility and `x e_i x^-1 in V` for all `i`.
    /// Returns the inverse.
    pub fn clifford_group_check(&self) -> Result<CliffordElement> {
        if self.parity() == Parity::Mixed {
            return Err(Error::Precondition("element is not homogeneous".into()));
        }
        let inv = self.inverse()?;
        for i in 0..self.alg.rank() {
            if self.mul(&self.alg.generator(i))?.mul(&inv)?.as_vector().is_none() {
                return Err(Error::NotCliffordGroup { witness: i });
            }
        }
        Ok(inv)
    }

    /// `N(x) = sigma(x) x`.
    pub fn spinor_norm(&self) -> Result<KElem> {
        self.clifford_group_check()?;
        self.sigma()
            .mul(self)?
            .as_scalar()
            .ok_or_else(|| Error::Precondition("spinor norm is not a scalar".into()))
    }

    /// `v -> eps x v x^-1` as a matrix on the basis `e_i`.
    pub fn r_map(&self, eps: i8) -> Result<Matrix<KElem>> {
        if self.parity().sign() != Some(eps) {
            return Err(Error::Precondition(format!("parity {:?} does not match sign {eps}", self.parity())));
        }
        let inv = self.clifford_group_check()?;
        let k = self.field();
        let n = self.alg.rank();
        let mut m = Matrix::from_fn(n, n, |_, _| k.zero());
        for i in 0..n {
            let mut image = self.mul(&self.alg.generator(i))?.mul(&inv)?;
            if eps < 0 {
                image = image.neg();
            }
            let v = image.as_vector().expect("checked membership");
            for (j, c) in v.into_iter().enumerate() {
                m.set(j, i, c);
            }
        }
        Ok(m)
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.field();
        let mut first = true;
        for (s, x) in self.coeffs.iter().enumerate() {
            if k.is_zero(x) {
                continue;
            }
            let idx: Vec<String> = (0..self.alg.rank()).filter(|i| s >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
            let blade = format!("e{{{}}}", idx.join(","));
            let term = match k.as_rational(x) {
                Some(r) if s == 0 => r.to_string(),
                Some(r) if r.is_one() => blade,
                Some(r) if (-&r).is_one() => format!("-{blade}"),
                Some(r) => format!("{r}*{blade}"),
                None if s == 0 => format!("({})", k.format(x)),
                None => format!("({})*{blade}", k.format(x)),
            };
            if first {
                write!(f, "{term}")?;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(a: &[i64]) -> Arc<CliffordAlgebra> {
        CliffordAlgebra::over_q(a.iter().map(|&x| Rat::from(x)).collect()).unwrap()
    }

    fn rat(c: &CliffordElement) -> Rat {
        c.algebra().field().as_rational(&c.as_scalar().unwrap()).unwrap()
    }

    #[test]
    fn products() {
        let c = alg(&[3]);
        let e1 = c.generator(0);
        assert_eq!(rat(&e1.mul(&e1).unwrap()), Rat::from(3));
        let c = alg(&[1, 1]);
        let (e1, e2) = (c.generator(0), c.generator(1));
        assert!(e1.mul(&e2).unwrap().add(&e2.mul(&e1).unwrap()).unwrap().is_zero());
        let e12 = e1.mul(&e2).unwrap();
        assert_eq!(rat(&e12.mul(&e12).unwrap()), Rat::from(-1));
        assert!(e1.mul(&alg(&[1, 2]).generator(0)).is_err());
    }

    #[test]
    fn reversal() {
        let c = alg(&[1, 2, 5]);
        assert_eq!(c.generator(0).sigma(), c.generator(0));
        assert_eq!(c.blade(0b11).sigma(), c.blade(0b11).neg());
        assert_eq!(c.blade(0b111).sigma(), c.blade(0b111).neg());
        let x = c.blade(0b11).add(&c.generator(2)).unwrap();
        let y = c.blade(0b101).add(&c.one()).unwrap();
        assert_eq!(x.mul(&y).unwrap().sigma(), y.sigma().mul(&x.sigma()).unwrap());
    }

    #[test]
    fn spinor_norms() {
        let c = alg(&[2, 7]);
        let e12 = c.blade(0b11);
        assert_eq!(c.field().as_rational(&e12.spinor_norm().unwrap()), Some(Rat::from(14)));
        assert_eq!(c.field().as_rational(&c.one().spinor_norm().unwrap()), Some(Rat::one()));
        let v = c.vector(&[Rat::from(1), Rat::from(3)]);
        assert_eq!(c.field().as_rational(&v.spinor_norm().unwrap()), Some(c.q(&[Rat::from(1), Rat::from(3)])));
        let even = c.one().scale_rat(&Rat::from(2)).add(&c.blade(0b11)).unwrap();
        assert_eq!(c.field().as_rational(&even.spinor_norm().unwrap()), Some(Rat::from(18)));
        let c3 = alg(&[1, 1, 1]);
        let mixed = c3.one().add(&c3.generator(0)).unwrap();
        assert!(mixed.spinor_norm().is_err());
        // 1 + 2 e{1,2,3,4} is invertible but anticommutes past every generator.
        let c4 = alg(&[1, 1, 1, 1]);
        let not_in_group = c4.one().add(&c4.blade(0b1111).scale_rat(&Rat::from(2))).unwrap();
        assert!(matches!(not_in_group.spinor_norm(), Err(Error::NotCliffordGroup { witness: 0 })));
    }

    #[test]
    fn r_examples() {
        let c = alg(&[1, 1]);
        let q = |m: Matrix<KElem>| m.map(|x| c.field().as_rational(x).unwrap());
        assert!(q(c.one().r_map(1).unwrap()).is_identity());
        assert_eq!(q(c.generator(0).r_map(-1).unwrap()), Matrix::from_i64(&[&[-1, 0], &[0, 1]]));
        assert_eq!(q(c.blade(0b11).r_map(1).unwrap()), Matrix::from_i64(&[&[-1, 0], &[0, -1]]));
        assert!(c.generator(0).r_map(1).is_err());
    }

    #[test]
    fn display() {
        let c = alg(&[1, 1, 1]);
        let x = c.blade(0b101).scale_rat(&Rat::from(-2)).add(&c.one()).unwrap();
        assert_eq!(x.to_string(), "1 - 2*e{1,3}");
        assert_eq!(c.zero().to_string(), "0");
    }
}
