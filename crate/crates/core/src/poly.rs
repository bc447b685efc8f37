//! Dense univariate polynomials over Q, lowest degree first.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Rat;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    c: Vec<Rat>,
}

impl Poly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().map_or(false, Rat::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| Rat::from(x)).collect())
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(a: Rat) -> Self {
        Poly::new(vec![a])
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn x() -> Self {
        Poly::from_i64(&[0, 1])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Rat::zero(); k + 1];
        c[k] = Rat::one();
        Poly { c }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    /// Coefficients padded with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Vec<Rat> {
        let mut v = self.c.clone();
        v.resize(n.max(v.len()), Rat::zero());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.c.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_monic_integral(&self) -> bool {
        self.leading().is_one() && self.c.iter().all(Rat::is_integer)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.get(i) + o.get(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.get(i) - o.get(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        Poly::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }

    fn get(&self, i: usize) -> Rat {
        self.c.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::Zero("polynomial division by zero"))?;
        let lead = d.leading().recip()?;
        let mut r = self.c.clone();
        let mut q = vec![Rat::zero(); self.c.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let coef = r.last().expect("nonempty") * &lead;
            if !coef.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &(&coef * b);
                }
                q[k] = coef;
            }
            r.pop();
        }
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.leading().recip().expect("nonzero"))
    }

    /// `(g, s, t)` with `g = s a + t b` monic.
    pub fn ext_gcd(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().recip().expect("nonzero");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse of `self` modulo `m`, if coprime.
    pub fn inverse_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = Poly::ext_gcd(&self.rem(m).ok()?, m);
        (g == Poly::one()).then(|| s.rem(m).expect("nonzero modulus"))
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.c.iter().rev().fold(Rat::zero(), |acc, a| acc * x + a)
    }

    /// `self(g(x)) mod m`.
    pub fn compose_mod(&self, g: &Poly, m: &Poly) -> Result<Poly> {
        let g = g.rem(m)?;
        let mut acc = Poly::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(&g).add(&Poly::constant(a.clone())).rem(m)?;
        }
        Ok(acc)
    }

    /// The `n`-th cyclotomic polynomial.
    pub fn cyclotomic(n: usize) -> Poly {
        assert!(n >= 1);
        let mut p = Poly::monomial(n).sub(&Poly::one());
        for d in 1..n {
            if n % d == 0 {
                p = p.divrem(&Poly::cyclotomic(d)).expect("nonzero").0;
            }
        }
        p
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, a)| match k {
                0 => a.to_string(),
                1 => format!("{a}*x"),
                _ => format!("{a}*x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.c.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Poly::new(Vec::<Rat>::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division() {
        let a = Poly::from_i64(&[-1, 0, 0, 1]);
        let b = Poly::from_i64(&[-1, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, Poly::from_i64(&[1, 1, 1]));
        assert!(r.is_zero());
        assert!(a.divrem(&Poly::zero()).is_err());
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(Poly::cyclotomic(1), Poly::from_i64(&[-1, 1]));
        assert_eq!(Poly::cyclotomic(3), Poly::from_i64(&[1, 1, 1]));
        assert_eq!(Poly::cyclotomic(4), Poly::from_i64(&[1, 0, 1]));
        assert_eq!(Poly::cyclotomic(9), Poly::from_i64(&[1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(Poly::cyclotomic(15).degree(), Some(8));
    }

    #[test]
    fn inverses() {
        let m = Poly::cyclotomic(7);
        let a = Poly::from_i64(&[1, -1]);
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!(a.mul(&inv).rem(&m).unwrap(), Poly::one());
        assert!(Poly::from_i64(&[1, 1]).inverse_mod(&Poly::from_i64(&[-1, 0, 1])).is_none());
    }

    #[test]
    fn cubic_automorphisms_compose() {
        let f = Poly::from_i64(&[-1, -3, 0, 1]);
        let s = Poly::from_i64(&[2, 0, -1]);
        assert!(f.compose_mod(&s, &f).unwrap().is_zero());
        let s2 = s.compose_mod(&s, &f).unwrap();
        assert_eq!(s2, Poly::from_i64(&[-2, -1, 1]));
        assert_eq!(s.compose_mod(&s2, &f).unwrap(), Poly::x());
        // x^2 - 2 permutes the roots of x^3 - 3x + 1, not of x^3 - 3x - 1.
        let t = Poly::from_i64(&[-2, 0, 1]);
        assert!(!f.compose_mod(&t, &f).unwrap().is_zero());
        let g = Poly::from_i64(&[1, -3, 0, 1]);
        assert!(g.compose_mod(&t, &g).unwrap().is_zero());
    }
}
