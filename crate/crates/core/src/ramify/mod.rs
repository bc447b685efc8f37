//! Character-component ranks at odd cyclic inertia groups, the mod 2
//! ramification divisor, and the permutation-module example.

mod cyclotomic;
mod example;

use serde::{Deserialize, Serialize};

use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::linalg::{rank, Matrix};

pub use cyclotomic::{woods_hole_identity, CyclotomicField};
pub use example::{
    bruteforce_datum, example4_bruteforce, example4_closed_form, final_congruence_check, sweep_configs,
    ConfigFile, ConfigRecord, CosetTerm, SubquotientConfig, SweepBounds,
};

/// Ranks `d_0, ..., d_{floor(e/2)}` of one ramified component `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamComponent {
    pub label: String,
    pub e: usize,
    pub d: Vec<usize>,
}

impl RamComponent {
    pub fn new(label: impl Into<String>, e: usize, d: Vec<usize>) -> Result<Self> {
        if e % 2 == 0 {
            return Err(Error::Precondition(format!("inertia order {e} is not odd")));
        }
        if d.len() != e / 2 + 1 {
            return Err(Error::Dimension(format!("expected {} ranks for e = {e}, got {}", e / 2 + 1, d.len())));
        }
        Ok(RamComponent { label: label.into(), e, d })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamDatum {
    pub components: Vec<RamComponent>,
}

/// `sum_k k d_k`.
pub fn d_from_ranks(c: &RamComponent) -> u64 {
    c.d.iter().enumerate().map(|(k, &d)| (k * d) as u64).sum()
}

/// Coefficient of each component in the divisor, mod 2.
pub fn ramification_class(data: &RamDatum) -> Vec<(String, u8)> {
    data.components.iter().map(|c| (c.label.clone(), (d_from_ranks(c) % 2) as u8)).collect()
}

/// Ranks of the idempotents `e^-1 sum_u chi^k(u) rho(u)^-1` for every
/// `0 <= k < e`, where `chi` sends the designated generator to `zeta`.
pub fn inertia_ranks_full(e: usize, gen: &Matrix<Rat>) -> Result<Vec<usize>> {
    if e == 0 || e % 2 == 0 {
        return Err(Error::Precondition(format!("inertia order {e} is not odd")));
    }
    if !gen.is_square() {
        return Err(Error::Dimension("generator image is not square".into()));
    }
    let n = gen.rows();
    let mut powers = vec![Matrix::<Rat>::identity(n)];
    for _ in 0..e {
        let next = powers.last().expect("nonempty").mul(gen);
        powers.push(next);
    }
    if !powers[e].is_identity() {
        return Err(Error::Precondition(format!("generator order does not divide {e}")));
    }
    let field = CyclotomicField::new(e)?;
    let inv_e = Rat::frac(1, e as i64);
    let ranks: Vec<usize> = (0..e)
        .map(|k| {
            // rho(g^j)^-1 = rho(g)^(e-j)
            let idem = Matrix::from_fn(n, n, |r, c| {
                let mut coef = vec![Rat::zero(); e];
                for j in 0..e {
                    let m = powers[e - j].get(r, c);
                    if !m.is_zero() {
                        coef[k * j % e] += &(m * &inv_e);
                    }
                }
                field.from_powers(coef)
            });
            rank(&field, &idem)
        })
        .collect();
    if ranks.iter().sum::<usize>() != n {
        return Err(Error::BrokenInput("character components do not span the module".into()));
    }
    if (1..e).any(|k| ranks[k] != ranks[e - k]) {
        return Err(Error::BrokenInput("component ranks are not symmetric under k -> e - k".into()));
    }
    Ok(ranks)
}

/// `d_0, ..., d_{floor(e/2)}` for the inertia representation with the
/// given generator image.
pub fn d_from_inertia_rep(e: usize, gen: &Matrix<Rat>) -> Result<Vec<usize>> {
    let mut d = inertia_ranks_full(e, gen)?;
    d.truncate(e / 2 + 1);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kernel, Field, Rationals};
    use crate::poly::Poly;

    fn cycle(n: usize) -> Matrix<Rat> {
        Matrix::from_fn(n, n, |r, c| Rat::from(((c + 1) % n == r) as i64))
    }

    /// Eigenspace dimensions of `zeta^k` through kernels of `g - zeta^k`,
    /// computed over Q on `Q(zeta)^n` viewed as a Q-space.
    fn eigen_ranks(e: usize, g: &Matrix<Rat>) -> Vec<usize> {
        let k = CyclotomicField::new(e).unwrap();
        let n = g.rows();
        let deg = k.degree();
        (0..e)
            .map(|j| {
                let z = k.zeta_pow(j);
                // multiplication by zeta^j on the power basis
                let zm = Matrix::from_cols(
                    &(0..deg).map(|b| k.mul(&z, &Poly::monomial(b)).padded(deg)).collect::<Vec<_>>(),
                );
                let big = g.kron(&Matrix::identity(deg)).sub(&Matrix::identity(n).kron(&zm));
                kernel(&Rationals, &big).len() / deg
            })
            .collect()
    }

    #[test]
    fn rank_sums() {
        assert_eq!(d_from_ranks(&RamComponent::new("b", 3, vec![1, 1]).unwrap()), 1);
        assert_eq!(d_from_ranks(&RamComponent::new("b", 1, vec![4]).unwrap()), 0);
        assert_eq!(d_from_ranks(&RamComponent::new("b", 5, vec![2, 0, 3]).unwrap()), 6);
        assert!(RamComponent::new("b", 4, vec![1, 1, 1]).is_err());
        assert!(RamComponent::new("b", 5, vec![1, 1]).is_err());
    }

    #[test]
    fn classes() {
        let data = RamDatum {
            components: vec![
                RamComponent::new("b1", 3, vec![1, 1]).unwrap(),
                RamComponent::new("b2", 5, vec![0, 2, 2]).unwrap(),
            ],
        };
        assert_eq!(ramification_class(&data), vec![("b1".to_string(), 1), ("b2".to_string(), 0)]);
    }

    #[test]
    fn inertia_examples() {
        assert_eq!(d_from_inertia_rep(3, &Matrix::identity(4)).unwrap(), vec![4, 0]);
        assert_eq!(d_from_inertia_rep(3, &cycle(3)).unwrap(), vec![1, 1]);
        // C5 acting on the augmentation module of its regular representation
        let aug = Matrix::from_fn(4, 4, |r, c| match (r, c) {
            (_, 3) => Rat::from(-1),
            (r, c) if r == c + 1 => Rat::one(),
            _ => Rat::zero(),
        });
        assert_eq!(d_from_inertia_rep(5, &aug).unwrap(), vec![0, 1, 1]);
        assert_eq!(d_from_inertia_rep(5, &cycle(5)).unwrap(), vec![1, 1, 1]);
        assert!(d_from_inertia_rep(3, &cycle(5)).is_err());
        assert!(d_from_inertia_rep(4, &cycle(4)).is_err());
    }

    #[test]
    fn idempotents_match_eigenspaces() {
        let m9 = cycle(9);
        let m3 = cycle(3).block_sum(&Matrix::identity(2));
        for (e, g) in [(9, m9.clone()), (9, m3), (3, cycle(3).block_sum(&cycle(3))), (15, cycle(5).block_sum(&cycle(3)))] {
            assert_eq!(inertia_ranks_full(e, &g).unwrap(), eigen_ranks(e, &g));
        }
    }
}
