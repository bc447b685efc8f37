//! Metabolic forms, lagrangians and the field case of the main lemma.

use serde::{Deserialize, Serialize};

use super::{is_isometric, QuadForm};
use crate::arith::{cup, BrClass, Rat, SquareClass};
use crate::error::{Error, Result};
use crate::linalg::{kernel, primitive_integer, Matrix, Rationals};

/// Default max-norm bound for the isotropic-vector enumeration.
pub const DEFAULT_WITNESS_BOUND: i64 = 50;

/// Cap on candidate vectors visited per splitting step, independent of the bound.
const ENUMERATION_BUDGET: usize = 2_000_000;

/// A totally isotropic subspace of half rank, given by a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lagrangian {
    pub basis: Vec<Vec<Rat>>,
}

impl Lagrangian {
    pub fn new(basis: Vec<Vec<Rat>>) -> Self {
        Lagrangian { basis }
    }

    pub fn validate(&self, q: &QuadForm) -> Result<()> {
        let n = q.rank();
        if n % 2 != 0 || self.basis.len() != n / 2 {
            return Err(Error::InvalidLagrangian(format!(
                "{} vectors for a form of rank {n}",
                self.basis.len()
            )));
        }
        if self.basis.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidLagrangian("vector length differs from rank".into()));
        }
        if Matrix::from_cols(&self.basis).rank() != self.basis.len() {
            return Err(Error::InvalidLagrangian("basis vectors are dependent".into()));
        }
        for (i, x) in self.basis.iter().enumerate() {
            for y in &self.basis[i..] {
                if !q.bilinear(x, y).is_zero() {
                    return Err(Error::InvalidLagrangian("form does not vanish on the span".into()));
                }
            }
        }
        Ok(())
    }

    /// Whether `u` maps the span into itself.
    pub fn is_invariant_under(&self, u: &Matrix<Rat>) -> bool {
        let span = Matrix::from_cols(&self.basis);
        let r = span.rank();
        self.basis.iter().all(|v| {
            let mut cols = self.basis.clone();
            cols.push(u.mul_vec(v));
            Matrix::from_cols(&cols).rank() == r
        })
    }
}

/// Outcome of the metabolic test. The decision never depends on the
/// witness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Metabolic {
    No,
    Yes(Lagrangian),
    /// Metabolic by invariants, but the bounded search found no lagrangian.
    YesWitnessNotFound,
}

impl Metabolic {
    pub fn is_metabolic(&self) -> bool {
        !matches!(self, Metabolic::No)
    }
}

/// Over a field a form is metabolic iff it is hyperbolic.
pub fn is_metabolic(q: &QuadForm, bound: i64) -> Metabolic {
    let n = q.rank();
    if n % 2 != 0 || !is_isometric(q, &QuadForm::hyperbolic(n / 2)) {
        return Metabolic::No;
    }
    match find_lagrangian(q, bound) {
        Some(l) => Metabolic::Yes(l),
        None => Metabolic::YesWitnessNotFound,
    }
}

/// Split off hyperbolic planes one isotropic vector at a time.
fn find_lagrangian(q: &QuadForm, bound: i64) -> Option<Lagrangian> {
    let n = q.rank();
    let mut basis: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    let mut lagrangian = Vec::new();
    while !basis.is_empty() {
        let b = Matrix::from_cols(&basis);
        let sub = b.transpose().mul(q.gram()).mul(&b);
        let v = find_isotropic(&sub, bound)?;
        let gv = sub.mul_vec(&v);
        let j = gv.iter().position(|x| !x.is_zero())?;
        let w: Vec<Rat> = (0..basis.len()).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect();
        let gw = sub.mul_vec(&w);
        let constraints = Matrix::from_rows(vec![gv, gw]);
        let complement: Vec<Vec<Rat>> =
            kernel(&Rationals, &constraints).into_iter().map(|c| b.mul_vec(&primitive_integer(&c))).collect();
        lagrangian.push(primitive_integer(&b.mul_vec(&v)));
        basis = complement;
    }
    let l = Lagrangian::new(lagrangian);
    l.validate(q).ok()?;
    Some(l)
}

/// Coordinate values in the order 0, 1, -1, 2, -2, ...
fn ordered_values(bound: i64) -> Vec<i64> {
    let mut v = vec![0];
    for k in 1..=bound {
        v.push(k);
        v.push(-k);
    }
    v
}

/// First primitive integer vector (by max-norm, then value order) with
/// `v^T G v = 0`, whose first nonzero coordinate is positive.
fn find_isotropic(g: &Matrix<Rat>, bound: i64) -> Option<Vec<Rat>> {
    use num_integer::Integer;
    let n = g.rows();
    let mut examined = 0usize;
    for norm in 1..=bound {
        let vals = ordered_values(norm);
        let mut idx = vec![0usize; n];
        loop {
            examined += 1;
            if examined > ENUMERATION_BUDGET {
                return None;
            }
            let v: Vec<i64> = idx.iter().map(|&i| vals[i]).collect();
            let max = v.iter().map(|x| x.abs()).max().unwrap_or(0);
            let first_pos = v.iter().find(|&&x| x != 0).map_or(false, |&x| x > 0);
            if max == norm && first_pos && v.iter().fold(0i64, |a, &x| a.gcd(&x)) == 1 {
                let r: Vec<Rat> = v.iter().map(|&x| Rat::from(x)).collect();
                if g.bilinear(&r, &r).is_zero() {
                    return Some(r);
                }
            }
            if !advance(&mut idx, vals.len()) {
                break;
            }
        }
    }
    None
}

/// Odometer step over `[0, len)^n`; false once every index wrapped.
fn advance(idx: &mut [usize], len: usize) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < len {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// The class `d_t` of a rank-`n` bundle over a field, in degrees one and
/// two: `(-1)^n` and `binom(n,2) (-1) ∪ (-1)`.
pub fn dt_class(n: usize) -> (SquareClass, BrClass) {
    let w1 = if n % 2 == 1 { SquareClass::minus_one() } else { SquareClass::one() };
    let binom = n * n.saturating_sub(1) / 2;
    let w2 = if binom % 2 == 1 {
        cup(&SquareClass::minus_one(), &SquareClass::minus_one())
    } else {
        BrClass::zero()
    };
    (w1, w2)
}

/// `w_t(E) = d_t(L)` for a metabolic `E` with lagrangian `L`, in degrees
/// one and two.
pub fn verify_main_lemma(q: &QuadForm, l: &Lagrangian) -> Result<bool> {
    l.validate(q)?;
    let inv = q.invariants();
    let (w1, w2) = dt_class(q.rank() / 2);
    Ok(inv.w1 == w1 && inv.w2 == w2)
}
