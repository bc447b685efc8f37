use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::poly::Poly;

/// `Q(zeta_e) = Q[x]/(Phi_e)`, with `zeta = x`.
#[derive(Clone, Debug)]
pub struct CyclotomicField {
    e: usize,
    modulus: Poly,
}

impl CyclotomicField {
    pub fn new(e: usize) -> Result<Self> {
        if e == 0 {
            return Err(Error::Precondition("cyclotomic order must be positive".into()));
        }
        Ok(CyclotomicField { e, modulus: Poly::cyclotomic(e) })
    }

    pub fn order(&self) -> usize {
        self.e
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("nonconstant")
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// `zeta^k`, exponent taken mod `e`.
    pub fn zeta_pow(&self, k: usize) -> Poly {
        Poly::monomial(k % self.e).rem(&self.modulus).expect("nonzero modulus")
    }

    /// Reduce `sum_j c_j zeta^j` for a coefficient vector indexed mod `e`.
    pub fn from_powers(&self, c: Vec<Rat>) -> Poly {
        Poly::new(c).rem(&self.modulus).expect("nonzero modulus")
    }
}

impl Field for CyclotomicField {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }

    fn one(&self) -> Poly {
        Poly::one()
    }

    fn is_zero(&self, x: &Poly) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &Poly, y: &Poly) -> Poly {
        x.add(y)
    }

    fn neg(&self, x: &Poly) -> Poly {
        x.neg()
    }

    fn sub(&self, x: &Poly, y: &Poly) -> Poly {
        x.sub(y)
    }

    fn mul(&self, x: &Poly, y: &Poly) -> Poly {
        x.mul(y).rem(&self.modulus).expect("nonzero modulus")
    }

    fn inv(&self, x: &Poly) -> Option<Poly> {
        if x.is_zero() {
            return None;
        }
        x.inverse_mod(&self.modulus)
    }

    fn from_rat(&self, r: &Rat) -> Poly {
        Poly::constant(r.clone())
    }

    fn height(&self, x: &Poly) -> u64 {
        x.coeffs().iter().filter(|c| !c.is_zero()).count() as u64
    }
}

/// Checks `1/(1 - zeta^j) = -(1/e) sum_{k=1}^{e-1} k zeta^{jk}` in `Q(zeta_e)`.
pub fn woods_hole_identity(e: usize, exponent: usize) -> Result<bool> {
    if e < 2 {
        return Err(Error::Precondition("order must be at least 2".into()));
    }
    if num_integer::gcd(exponent % e, e) != 1 {
        return Err(Error::Precondition(format!("zeta^{exponent} is not a primitive {e}-th root of unity")));
    }
    let k = CyclotomicField::new(e)?;
    let z = k.zeta_pow(exponent);
    let lhs = k.inv(&Poly::one().sub(&z)).ok_or(Error::Zero("1 - zeta"))?;
    let mut c = vec![Rat::zero(); e];
    for i in 1..e {
        c[i * exponent % e] += &Rat::from(i as i64);
    }
    let rhs = k.from_powers(c).scale(&Rat::frac(-1, e as i64));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_has_order_e() {
        for e in [1usize, 2, 3, 5, 9, 12] {
            let k = CyclotomicField::new(e).unwrap();
            assert_eq!(k.zeta_pow(e), Poly::one());
            assert_eq!(k.degree(), (1..=e).filter(|&i| num_integer::gcd(i, e) == 1).count());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let k = CyclotomicField::new(7).unwrap();
        let a = Poly::from_i64(&[2, 0, 1, -1]);
        let b = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &b), Poly::one());
    }

    #[test]
    fn woods_hole_small() {
        assert!(woods_hole_identity(2, 1).unwrap());
        assert!(woods_hole_identity(3, 1).unwrap());
        for j in 1..7 {
            assert!(woods_hole_identity(7, j).unwrap());
        }
        assert!(woods_hole_identity(9, 3).is_err());
    }
}
