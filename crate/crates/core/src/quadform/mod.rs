//! Nondegenerate symmetric bilinear forms over `Q`.
//!
//! Invariant conventions. For a diagonalization `<a_1, ..., a_n>`:
//!
//! * `w1` is the square class of the Gram determinant, `prod a_i`.
//! * `w2` is the degree-two part of the total class `prod (1 + (a_i) t)`,
//!   i.e. `sum_{i<j} (a_i) ∪ (a_j)`.
//! * `hasse` is the classical Hasse symbol `sum_{i<=j} (a_i) ∪ (a_j)`.
//!
//! Since `(a) ∪ (a) = (a) ∪ (-1)`, the two degree-two classes are related by
//! `hasse = w2 + w1 ∪ (-1)`. Both are kept; all cross-checks between the
//! twist and Clifford layers use `w2`.

mod metabolic;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::{candidate_places, cup, hilbert_classes, square_class, BrClass, Rat, SquareClass};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub use metabolic::{dt_class, is_metabolic, verify_main_lemma, Lagrangian, Metabolic, DEFAULT_WITNESS_BOUND};

/// Nondegenerate symmetric Gram matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadForm {
    gram: Matrix<Rat>,
}

impl QuadForm {
    pub fn new(gram: Matrix<Rat>) -> Result<Self> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(Error::Dimension("Gram matrix must be square of positive size".into()));
        }
        if !gram.is_symmetric() {
            return Err(Error::Precondition("Gram matrix is not symmetric".into()));
        }
        if gram.det().is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(QuadForm { gram })
    }

    /// The diagonal form `<a_1, ..., a_n>`.
    pub fn diagonal(entries: &[Rat]) -> Result<Self> {
        QuadForm::new(Matrix::diagonal(entries))
    }

    pub fn diag_i64(entries: &[i64]) -> Self {
        let v: Vec<Rat> = entries.iter().map(|&x| Rat::from(x)).collect();
        QuadForm::diagonal(&v).expect("nonzero diagonal entries")
    }

    /// `m` copies of the hyperbolic plane `<1, -1>`.
    pub fn hyperbolic(m: usize) -> Self {
        let v: Vec<i64> = (0..2 * m).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        QuadForm::diag_i64(&v)
    }

    pub fn gram(&self) -> &Matrix<Rat> {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> Rat {
        self.gram.det()
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| (0..n).all(|j| i == j || self.gram.get(i, j).is_zero()))
    }

    pub fn diagonal_entries(&self) -> Option<Vec<Rat>> {
        self.is_diagonal().then(|| (0..self.rank()).map(|i| self.gram.get(i, i).clone()).collect())
    }

    pub fn eval(&self, v: &[Rat]) -> Rat {
        self.gram.bilinear(v, v)
    }

    pub fn bilinear(&self, x: &[Rat], y: &[Rat]) -> Rat {
        self.gram.bilinear(x, y)
    }

    /// `P^T G P` for an invertible `P`.
    pub fn transform(&self, p: &Matrix<Rat>) -> Result<Self> {
        if p.rows() != self.rank() {
            return Err(Error::Dimension("basis change has wrong size".into()));
        }
        QuadForm::new(p.transpose().mul(&self.gram).mul(p))
    }

    /// Whether `u` satisfies `u^T G u = G`.
    pub fn preserved_by(&self, u: &Matrix<Rat>) -> bool {
        u.rows() == self.rank() && u.cols() == self.rank() && u.transpose().mul(&self.gram).mul(u) == self.gram
    }

    pub fn orth_sum(&self, other: &QuadForm) -> QuadForm {
        QuadForm { gram: self.gram.block_sum(&other.gram) }
    }

    pub fn scale(&self, c: &Rat) -> Result<QuadForm> {
        if c.is_zero() {
            return Err(Error::Zero("form scale factor"));
        }
        Ok(QuadForm { gram: self.gram.scale(c) })
    }

    pub fn negate(&self) -> QuadForm {
        QuadForm { gram: self.gram.scale(&Rat::from(-1)) }
    }

    pub fn diagonalize(&self) -> (Vec<Rat>, Matrix<Rat>) {
        diagonalize(self)
    }

    pub fn invariants(&self) -> FormInvariants {
        invariants(self)
    }
}

/// On-disk form record: rank and row-major Gram entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormRecord {
    pub rank: usize,
    pub gram: Vec<Rat>,
}

impl TryFrom<FormRecord> for QuadForm {
    type Error = Error;
    fn try_from(r: FormRecord) -> Result<Self> {
        if r.gram.len() != r.rank * r.rank {
            return Err(Error::Dimension(format!(
                "rank {} needs {} Gram entries, found {}",
                r.rank,
                r.rank * r.rank,
                r.gram.len()
            )));
        }
        QuadForm::new(Matrix::from_vec(r.rank, r.rank, r.gram))
    }
}

impl From<&QuadForm> for FormRecord {
    fn from(q: &QuadForm) -> Self {
        FormRecord { rank: q.rank(), gram: q.gram.data().to_vec() }
    }
}

impl Serialize for QuadForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        QuadForm::try_from(FormRecord::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Rank, discriminant class, degree-two classes and signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormInvariants {
    pub rank: usize,
    pub w1: SquareClass,
    pub w2: BrClass,
    pub signature: (usize, usize),
    pub hasse: BrClass,
}

/// Symmetric Gauss reduction. Returns the diagonal entries and `P` with
/// `P^T G P = diag(entries)`.
pub fn diagonalize(q: &QuadForm) -> (Vec<Rat>, Matrix<Rat>) {
    let n = q.rank();
    let mut g = q.gram.clone();
    let mut p = Matrix::<Rat>::identity(n);
    for k in 0..n {
        let pivot = (k..n).filter(|&i| !g.get(i, i).is_zero()).min_by_key(|&i| g.get(i, i).height());
        let pivot = match pivot {
            Some(i) => i,
            None => {
                // Every remaining diagonal entry vanishes: e_i -> e_i + e_j
                // makes the (i,i) entry 2 g_ij != 0.
                let (i, j) = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !g.get(i, j).is_zero())
                    .expect("nondegenerate form has a nonzero off-diagonal entry");
                add_multiple(&mut g, &mut p, i, j, &Rat::one());
                i
            }
        };
        swap_basis(&mut g, &mut p, k, pivot);
        let d = g.get(k, k).clone();
        for j in k + 1..n {
            if g.get(k, j).is_zero() {
                continue;
            }
            let c = -(g.get(k, j) / &d);
            add_multiple(&mut g, &mut p, j, k, &c);
        }
    }
    let entries = (0..n).map(|i| g.get(i, i).clone()).collect();
    (entries, p)
}

/// Basis change `e_target <- e_target + c e_src` applied to both `g` and `p`.
fn add_multiple(g: &mut Matrix<Rat>, p: &mut Matrix<Rat>, target: usize, src: usize, c: &Rat) {
    let n = g.rows();
    for r in 0..n {
        let v = p.get(r, target) + c * p.get(r, src);
        p.set(r, target, v);
    }
    for r in 0..n {
        let v = g.get(r, target) + c * g.get(r, src);
        g.set(r, target, v);
    }
    for col in 0..n {
        let v = g.get(target, col) + c * g.get(src, col);
        g.set(target, col, v);
    }
}

fn swap_basis(g: &mut Matrix<Rat>, p: &mut Matrix<Rat>, a: usize, b: usize) {
    if a == b {
        return;
    }
    let n = g.rows();
    for r in 0..n {
        let (x, y) = (p.get(r, a).clone(), p.get(r, b).clone());
        p.set(r, a, y);
        p.set(r, b, x);
    }
    g.swap_rows(a, b);
    for r in 0..n {
        let (x, y) = (g.get(r, a).clone(), g.get(r, b).clone());
        g.set(r, a, y);
        g.set(r, b, x);
    }
}

/// Invariants of `q` computed from one diagonalization.
pub fn invariants(q: &QuadForm) -> FormInvariants {
    let (diag, _) = diagonalize(q);
    invariants_of_diagonal(&diag)
}

pub fn invariants_of_diagonal(diag: &[Rat]) -> FormInvariants {
    let classes: Vec<SquareClass> =
        diag.iter().map(|a| square_class(a).expect("diagonal entries are nonzero")).collect();
    let w1 = classes.iter().fold(SquareClass::one(), |acc, c| acc.mul(c));
    let mut ramified = BTreeSet::new();
    for v in candidate_places(&classes) {
        let mut s = 1i8;
        for i in 0..classes.len() {
            for j in i + 1..classes.len() {
                s *= hilbert_classes(&classes[i], &classes[j], v);
            }
        }
        if s == -1 {
            ramified.insert(v);
        }
    }
    let w2 = BrClass::from_places(ramified).expect("w2 satisfies reciprocity");
    let hasse = w2.add(&cup(&w1, &SquareClass::minus_one()));
    let pos = diag.iter().filter(|a| !a.is_negative()).count();
    FormInvariants { rank: diag.len(), w1, w2, signature: (pos, diag.len() - pos), hasse }
}

/// Hasse-Minkowski: rank, signature, discriminant and Hasse symbol form a
/// complete set of isometry invariants over `Q`.
pub fn is_isometric(a: &QuadForm, b: &QuadForm) -> bool {
    if a.rank() != b.rank() {
        return false;
    }
    let (x, y) = (a.invariants(), b.invariants());
    x.signature == y.signature && x.w1 == y.w1 && x.hasse == y.hasse
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Place;

    fn is_diag_of(q: &QuadForm, d: &[Rat], p: &Matrix<Rat>) -> bool {
        p.transpose().mul(q.gram()).mul(p) == Matrix::diagonal(d)
    }

    #[test]
    fn diagonalize_examples() {
        let id = QuadForm::diag_i64(&[1, 1, 1]);
        let (d, p) = id.diagonalize();
        assert_eq!(d, vec![Rat::one(); 3]);
        assert!(p.is_identity());

        let h = QuadForm::new(Matrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        let (d, p) = h.diagonalize();
        assert!(is_diag_of(&h, &d, &p));
        assert!(is_isometric(&QuadForm::diagonal(&d).unwrap(), &QuadForm::diag_i64(&[1, -1])));

        let q = QuadForm::new(Matrix::from_i64(&[&[2, 1], &[1, 2]])).unwrap();
        let (d, p) = q.diagonalize();
        assert_eq!(d, vec![Rat::from(2), Rat::frac(3, 2)]);
        assert!(is_diag_of(&q, &d, &p));
    }

    #[test]
    fn degenerate_rejected() {
        let r = QuadForm::new(Matrix::from_i64(&[&[1, 1], &[1, 1]]));
        assert_eq!(r, Err(Error::Degenerate));
        assert!(QuadForm::new(Matrix::from_i64(&[&[1, 2], &[3, 1]])).is_err());
    }

    #[test]
    fn invariant_examples() {
        let i = QuadForm::diag_i64(&[1, 1]).invariants();
        assert_eq!((i.rank, i.signature), (2, (2, 0)));
        assert!(i.w1.is_trivial() && i.w2.is_zero());

        let h = QuadForm::diag_i64(&[1, -1]).invariants();
        assert_eq!(h.w1, SquareClass::minus_one());
        assert!(h.w2.is_zero());

        let n = QuadForm::diag_i64(&[-1, -1]).invariants();
        assert!(n.w1.is_trivial());
        assert_eq!(n.w2, BrClass::from_places([Place::Real, Place::Prime(2)]).unwrap());
        assert_eq!(n.signature, (0, 2));
    }

    #[test]
    fn hasse_dictionary() {
        for d in [[1i64, 1, 1], [-1, -1, -1], [2, 3, -5], [-7, 6, 10]] {
            let q = QuadForm::diag_i64(&d);
            let inv = q.invariants();
            let classes: Vec<SquareClass> = d.iter().map(|&a| SquareClass::of_int(a)).collect();
            let mut classical = BrClass::zero();
            for i in 0..3 {
                for j in i..3 {
                    classical = classical.add(&cup(&classes[i], &classes[j]));
                }
            }
            assert_eq!(inv.hasse, classical);
        }
    }

    #[test]
    fn isometry_examples() {
        assert!(is_isometric(&QuadForm::diag_i64(&[1, 1]), &QuadForm::diag_i64(&[2, 2])));
        assert!(!is_isometric(&QuadForm::diag_i64(&[1, 1]), &QuadForm::diag_i64(&[1, -1])));
        assert!(!is_isometric(&QuadForm::diag_i64(&[1, 1]), &QuadForm::diag_i64(&[3, 3])));
        let q = QuadForm::new(Matrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, -4]])).unwrap();
        let p = Matrix::from_i64(&[&[1, 2, 0], &[0, 1, -3], &[5, 0, 1]]);
        assert!(is_isometric(&q, &q.transform(&p).unwrap()));
    }

    #[test]
    fn sums_and_scaling() {
        let s = QuadForm::diag_i64(&[1]).orth_sum(&QuadForm::diag_i64(&[-1]));
        assert_eq!(s, QuadForm::diag_i64(&[1, -1]));
        assert_eq!(QuadForm::diag_i64(&[1, 1]).negate(), QuadForm::diag_i64(&[-1, -1]));
        assert!(QuadForm::diag_i64(&[1]).scale(&Rat::zero()).is_err());
        let a = QuadForm::diag_i64(&[3, -2]);
        let b = QuadForm::diag_i64(&[5]);
        assert_eq!(a.orth_sum(&b).invariants().w1, a.invariants().w1.mul(&b.invariants().w1));
    }

    #[test]
    fn form_record_roundtrip() {
        let json = r#"{"rank":2,"gram":["1","0","0","-1/2"]}"#;
        let q: QuadForm = serde_json::from_str(json).unwrap();
        assert_eq!(q, QuadForm::diagonal(&[Rat::one(), Rat::frac(-1, 2)]).unwrap());
        assert!(serde_json::from_str::<QuadForm>(r#"{"rank":2,"gram":["1","0","0"]}"#).is_err());
        assert!(serde_json::from_str::<QuadForm>(r#"{"rank":1,"gram":["0"]}"#).is_err());
    }
}
