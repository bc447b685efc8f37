use std::fmt;

use crate::arith::{square_class, Rat, SquareClass};
use crate::error::{Error, Result};
use crate::linalg::Field;

/// `Q(sqrt r_1, ..., sqrt r_m)` for `m <= 2`, with basis the monomials
/// `prod_{i in S} sqrt r_i` indexed by bitmask `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffField {
    radicands: Vec<i64>,
}

/// Coordinates on the monomial basis.
pub type KElem = Vec<Rat>;

impl CoeffField {
    pub fn rationals() -> Self {
        CoeffField { radicands: Vec::new() }
    }

    /// Radicands must be squarefree integers other than 1 whose square
    /// classes are independent, so the result is a field of degree `2^m`.
    pub fn new(radicands: Vec<i64>) -> Result<Self> {
        if radicands.len() > 2 {
            return Err(Error::Precondition("at most two square roots are adjoined".into()));
        }
        let classes: Vec<SquareClass> =
            radicands.iter().map(|&r| square_class(&Rat::from(r))).collect::<Result<_>>()?;
        for (r, c) in radicands.iter().zip(&classes) {
            if c.is_trivial() || c.rep() != (*r).into() {
                return Err(Error::Precondition(format!("radicand {r} is not squarefree and nontrivial")));
            }
        }
        if classes.len() == 2 && classes[0] == classes[1] {
            return Err(Error::Precondition("radicands share a square class".into()));
        }
        Ok(CoeffField { radicands })
    }

    pub fn radicands(&self) -> &[i64] {
        &self.radicands
    }

    pub fn degree(&self) -> usize {
        1 << self.radicands.len()
    }

    /// `sqrt r_i`.
    pub fn sqrt_gen(&self, i: usize) -> KElem {
        let mut v = vec![Rat::zero(); self.degree()];
        v[1 << i] = Rat::one();
        v
    }

    pub fn scale(&self, x: &KElem, c: &Rat) -> KElem {
        x.iter().map(|a| a * c).collect()
    }

    /// The rational value of `x`, if it lies in Q.
    pub fn as_rational(&self, x: &KElem) -> Option<Rat> {
        x[1..].iter().all(Rat::is_zero).then(|| x[0].clone())
    }

    /// Galois action flipping `sqrt r_i` for every bit `i` of `flips`.
    pub fn conj(&self, x: &KElem, flips: usize) -> KElem {
        x.iter()
            .enumerate()
            .map(|(s, a)| if (s & flips).count_ones() % 2 == 1 { -a } else { a.clone() })
            .collect()
    }

    fn monomial_square(&self, s: usize) -> Rat {
        (0..self.radicands.len())
            .filter(|i| s >> i & 1 == 1)
            .map(|i| Rat::from(self.radicands[i]))
            .product()
    }

    pub fn format(&self, x: &KElem) -> String {
        let mut parts = Vec::new();
        for (s, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let roots: Vec<String> = (0..self.radicands.len())
                .filter(|i| s >> i & 1 == 1)
                .map(|i| format!("sqrt({})", self.radicands[i]))
                .collect();
            parts.push(if roots.is_empty() { a.to_string() } else { format!("{a}*{}", roots.join("*")) });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q")?;
        for r in &self.radicands {
            write!(f, "(sqrt {r})")?;
        }
        Ok(())
    }
}

impl Field for CoeffField {
    type Elem = KElem;

    fn zero(&self) -> KElem {
        vec![Rat::zero(); self.degree()]
    }

    fn one(&self) -> KElem {
        let mut v = self.zero();
        v[0] = Rat::one();
        v
    }

    fn is_zero(&self, x: &KElem) -> bool {
        x.iter().all(Rat::is_zero)
    }

    fn add(&self, x: &KElem, y: &KElem) -> KElem {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    fn neg(&self, x: &KElem) -> KElem {
        x.iter().map(|a| -a).collect()
    }

    fn sub(&self, x: &KElem, y: &KElem) -> KElem {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    fn mul(&self, x: &KElem, y: &KElem) -> KElem {
        let mut out = self.zero();
        for (s, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[s ^ t] += &(a * b * self.monomial_square(s & t));
            }
        }
        out
    }

    /// Product of the nontrivial conjugates over the norm.
    fn inv(&self, x: &KElem) -> Option<KElem> {
        if self.is_zero(x) {
            return None;
        }
        let others = (1..self.degree()).fold(self.one(), |acc, s| self.mul(&acc, &self.conj(x, s)));
        let norm = self.as_rational(&self.mul(x, &others)).expect("norm lies in Q");
        Some(self.scale(&others, &norm.recip().ok()?))
    }

    fn from_rat(&self, r: &Rat) -> KElem {
        let mut v = self.zero();
        v[0] = r.clone();
        v
    }

    fn height(&self, x: &KElem) -> u64 {
        x.iter().map(Rat::height).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let k = CoeffField::new(vec![2, 3]).unwrap();
        let (a, b) = (k.sqrt_gen(0), k.sqrt_gen(1));
        assert_eq!(k.mul(&a, &a), k.from_rat(&Rat::from(2)));
        let ab = k.mul(&a, &b);
        assert_eq!(k.mul(&ab, &ab), k.from_rat(&Rat::from(6)));
        let x = k.add(&k.one(), &ab);
        let y = k.inv(&x).unwrap();
        assert_eq!(k.mul(&x, &y), k.one());
        assert_eq!(k.conj(&ab, 1), k.neg(&ab));
        assert_eq!(k.conj(&ab, 3), ab);
    }

    #[test]
    fn associativity_spot_check() {
        let k = CoeffField::new(vec![-1, 5]).unwrap();
        let basis: Vec<KElem> = (0..4)
            .map(|s| (0..4).map(|t| Rat::from(if s == t { 1 } else { (s + 2 * t) as i64 - 3 })).collect())
            .collect();
        for x in &basis {
            for y in &basis {
                for z in &basis {
                    assert_eq!(k.mul(&k.mul(x, y), z), k.mul(x, &k.mul(y, z)));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_radicands() {
        assert!(CoeffField::new(vec![4]).is_err());
        assert!(CoeffField::new(vec![1]).is_err());
        assert!(CoeffField::new(vec![2, 2]).is_err());
        assert!(CoeffField::new(vec![12]).is_err());
        assert!(CoeffField::new(vec![-3, 7]).is_ok());
    }
}
