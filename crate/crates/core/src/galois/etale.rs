use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::linalg::{kernel, solve, Matrix, Rationals};
use crate::poly::Poly;
use crate::quadform::QuadForm;

/// Commutative unital algebra over Q given by structure constants:
/// `b_i b_j = sum_k table[i][j][k] b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleAlgebra {
    table: Vec<Vec<Vec<Rat>>>,
    one: Vec<Rat>,
}

impl EtaleAlgebra {
    /// Checks commutativity, associativity on basis triples, the unit and
    /// nondegeneracy of the trace form.
    pub fn new(table: Vec<Vec<Vec<Rat>>>, one: Vec<Rat>) -> Result<Self> {
        let n = one.len();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::Dimension("structure constants have the wrong shape".into()));
        }
        let a = EtaleAlgebra { table, one };
        a.verify()?;
        Ok(a)
    }

    fn verify(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            let bi = self.basis(i);
            if self.mul(&self.one, &bi) != bi {
                return Err(Error::BrokenInput("unit does not act as identity".into()));
            }
            for j in 0..n {
                if self.table[i][j] != self.table[j][i] {
                    return Err(Error::BrokenInput("algebra is not commutative".into()));
                }
                for k in 0..n {
                    let lhs = self.mul(&self.table[i][j], &self.basis(k));
                    let rhs = self.mul(&bi, &self.table[j][k]);
                    if lhs != rhs {
                        return Err(Error::BrokenInput("algebra is not associative".into()));
                    }
                }
            }
        }
        if self.trace_gram().det().is_zero() {
            return Err(Error::BrokenInput("trace form is degenerate, algebra is not etale".into()));
        }
        Ok(())
    }

    /// `Q[x]/(f)` on the power basis.
    pub fn from_poly(f: &Poly) -> Result<Self> {
        let n = f.degree().filter(|&d| d >= 1).ok_or_else(|| Error::Precondition("constant polynomial".into()))?;
        let table = (0..n)
            .map(|i| (0..n).map(|j| Poly::monomial(i + j).rem(f).map(|p| p.padded(n))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut one = vec![Rat::zero(); n];
        one[0] = Rat::one();
        EtaleAlgebra::new(table, one)
    }

    /// `Q^n` with orthogonal idempotents.
    pub fn split(n: usize) -> Self {
        let table = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| Rat::from((i == j && j == k) as i64)).collect()).collect())
            .collect();
        EtaleAlgebra { table, one: vec![Rat::one(); n] }
    }

    /// Product of algebras, basis concatenated.
    pub fn product(parts: &[EtaleAlgebra]) -> Self {
        let n: usize = parts.iter().map(|p| p.dim()).sum();
        let mut table = vec![vec![vec![Rat::zero(); n]; n]; n];
        let mut one = Vec::with_capacity(n);
        let mut off = 0;
        for p in parts {
            let m = p.dim();
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        table[off + i][off + j][off + k] = p.table[i][j][k].clone();
                    }
                }
            }
            one.extend(p.one.iter().cloned());
            off += m;
        }
        EtaleAlgebra { table, one }
    }

    pub fn dim(&self) -> usize {
        self.one.len()
    }

    pub fn one(&self) -> &[Rat] {
        &self.one
    }

    pub fn basis(&self, i: usize) -> Vec<Rat> {
        (0..self.dim()).map(|k| Rat::from((k == i) as i64)).collect()
    }

    pub fn table(&self) -> &[Vec<Vec<Rat>>] {
        &self.table
    }

    pub fn mul(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let n = self.dim();
        let mut out = vec![Rat::zero(); n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &(&ab * c);
                    }
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `x`.
    pub fn mult_matrix(&self, x: &[Rat]) -> Matrix<Rat> {
        let cols: Vec<Vec<Rat>> = (0..self.dim()).map(|j| self.mul(x, &self.basis(j))).collect();
        Matrix::from_cols(&cols)
    }

    pub fn trace(&self, x: &[Rat]) -> Rat {
        let m = self.mult_matrix(x);
        (0..self.dim()).map(|i| m.get(i, i).clone()).sum()
    }

    fn trace_gram(&self) -> Matrix<Rat> {
        let n = self.dim();
        let traces: Vec<Rat> = (0..n).map(|k| self.trace(&self.basis(k))).collect();
        Matrix::from_fn(n, n, |i, j| self.table[i][j].iter().zip(&traces).map(|(c, t)| c * t).sum())
    }

    /// `(x, y) -> Tr(xy)` on the basis.
    pub fn trace_form(&self) -> Result<QuadForm> {
        QuadForm::new(self.trace_gram())
    }

    /// Rational value of `x`, if it is a multiple of the unit.
    pub fn as_scalar(&self, x: &[Rat]) -> Option<Rat> {
        let k = self.one.iter().position(|c| !c.is_zero())?;
        let c = &x[k] / &self.one[k];
        x.iter().zip(&self.one).all(|(a, u)| *a == &c * u).then_some(c)
    }

    /// The subalgebra spanned by `basis` (columns in ambient coordinates),
    /// which must contain the unit and be closed under multiplication.
    pub fn subalgebra(&self, basis: &[Vec<Rat>]) -> Result<EtaleAlgebra> {
        let m = basis.len();
        let b = Matrix::from_cols(basis);
        let coords = |v: &[Rat]| {
            solve(&Rationals, &b, v).ok_or_else(|| Error::BrokenInput("span is not closed under multiplication".into()))
        };
        let table = (0..m)
            .map(|i| (0..m).map(|j| coords(&self.mul(&basis[i], &basis[j]))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        EtaleAlgebra::new(table, coords(&self.one)?)
    }

    /// Solutions of `M_i x = x` for all `i`, as a basis.
    pub fn common_fixed(mats: &[&Matrix<Rat>], n: usize) -> Vec<Vec<Rat>> {
        if mats.is_empty() {
            return (0..n).map(|i| (0..n).map(|k| Rat::from((k == i) as i64)).collect()).collect();
        }
        let id = Matrix::<Rat>::identity(n);
        let blocks: Vec<Matrix<Rat>> = mats.iter().map(|m| m.sub(&id)).collect();
        kernel(&Rationals, &crate::linalg::vstack(&blocks))
    }
}
