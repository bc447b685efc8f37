//! Dense exact linear algebra over a field given as a context object.

use std::fmt::Debug;

use crate::arith::Rat;

/// A field whose elements need an ambient context (extension degree,
/// radicands, modulus polynomial) to be combined.
pub trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, x: &Self::Elem) -> Option<Self::Elem>;
    fn from_rat(&self, r: &Rat) -> Self::Elem;

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }

    /// Cost proxy used for pivot choice; smaller is preferred.
    fn height(&self, _x: &Self::Elem) -> u64 {
        0
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, x: &Rat) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &Rat, y: &Rat) -> Rat {
        x + y
    }
    fn neg(&self, x: &Rat) -> Rat {
        -x
    }
    fn sub(&self, x: &Rat, y: &Rat) -> Rat {
        x - y
    }
    fn mul(&self, x: &Rat, y: &Rat) -> Rat {
        x * y
    }
    fn inv(&self, x: &Rat) -> Option<Rat> {
        x.recip().ok()
    }
    fn from_rat(&self, r: &Rat) -> Rat {
        r.clone()
    }
    fn height(&self, x: &Rat) -> u64 {
        x.height()
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Debug> Debug for Matrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut l = f.debug_list();
        for r in 0..self.rows {
            l.entry(&&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        l.finish()
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn from_cols(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        Matrix::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }
}

impl Matrix<Rat> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn diagonal(d: &[Rat]) -> Self {
        Matrix::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { Rat::zero() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rat::from(x)).collect()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        mat_mul(&Rationals, self, other)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        mat_vec(&Rationals, self, v)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.map(|x| x * c)
    }

    pub fn det(&self) -> Rat {
        det(&Rationals, self)
    }

    pub fn rank(&self) -> usize {
        rank(&Rationals, self)
    }

    pub fn inverse(&self) -> Option<Self> {
        inverse(&Rationals, self)
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.rows)
    }

    /// Block-diagonal sum.
    pub fn block_sum(&self, other: &Self) -> Self {
        let n = self.rows + other.rows;
        let m = self.cols + other.cols;
        Matrix::from_fn(n, m, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                Rat::zero()
            }
        })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Matrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.get(i / other.rows, j / other.cols) * other.get(i % other.rows, j % other.cols)
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    /// `x^T M y`.
    pub fn bilinear(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let my = self.mul_vec(y);
        dot(x, &my)
    }
}

pub fn dot(x: &[Rat], y: &[Rat]) -> Rat {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "matrix product shape");
    let mut out = Matrix::from_fn(a.rows, b.cols, |_, _| f.zero());
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let t = f.mul(aik, b.get(k, j));
                let cur = out.get(i, j);
                let s = f.add(cur, &t);
                out.set(i, j, s);
            }
        }
    }
    out
}

pub fn mat_vec<F: Field>(f: &F, a: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(a.cols, v.len(), "matrix-vector shape");
    (0..a.rows)
        .map(|i| {
            let mut acc = f.zero();
            for (x, y) in a.row(i).iter().zip(v) {
                if !f.is_zero(x) && !f.is_zero(y) {
                    acc = f.add(&acc, &f.mul(x, y));
                }
            }
            acc
        })
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let best = (r..m.rows)
            .filter(|&i| !f.is_zero(m.get(i, c)))
            .min_by_key(|&i| f.height(m.get(i, c)));
        let Some(p) = best else { continue };
        m.swap_rows(r, p);
        let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
        for j in c..m.cols {
            let v = f.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || f.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in c..m.cols {
                if f.is_zero(m.get(r, j)) {
                    continue;
                }
                let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut w = m.clone();
    rref(f, &mut w).len()
}

/// Basis of the right kernel `{x : M x = 0}`.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut w = m.clone();
    let pivots = rref(f, &mut w);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); m.cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(w.get(r, fc));
            }
            v
        })
        .collect()
}

pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows;
    let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else if j - n == i {
            f.one()
        } else {
            f.zero()
        }
    });
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
}

/// Solve `M x = b`, returning one solution if consistent.
pub fn solve<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let mut aug = Matrix::from_fn(m.rows, m.cols + 1, |i, j| {
        if j < m.cols {
            m.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![f.zero(); m.cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.get(r, m.cols).clone();
    }
    Some(x)
}

pub fn det<F: Field>(f: &F, m: &Matrix<F::Elem>) -> F::Elem {
    assert!(m.is_square());
    let n = m.rows;
    let mut w = m.clone();
    let mut acc = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(w.get(i, c))) else {
            return f.zero();
        };
        if p != c {
            w.swap_rows(p, c);
            acc = f.neg(&acc);
        }
        let piv = w.get(c, c).clone();
        acc = f.mul(&acc, &piv);
        let inv = f.inv(&piv).expect("nonzero pivot");
        for i in c + 1..n {
            if f.is_zero(w.get(i, c)) {
                continue;
            }
            let factor = f.mul(w.get(i, c), &inv);
            for j in c..n {
                let v = f.sub(w.get(i, j), &f.mul(&factor, w.get(c, j)));
                w.set(i, j, v);
            }
        }
    }
    acc
}

/// Stack matrices with the same column count vertically.
pub fn vstack<T: Clone>(blocks: &[Matrix<T>]) -> Matrix<T> {
    let cols = blocks.first().map_or(0, |b| b.cols);
    let mut data = Vec::new();
    let mut rows = 0;
    for b in blocks {
        assert_eq!(b.cols, cols);
        data.extend(b.data.iter().cloned());
        rows += b.rows;
    }
    Matrix { rows, cols, data }
}

/// Scale a rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
pub fn primitive_integer(v: &[Rat]) -> Vec<Rat> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from(l.clone())).numer().clone()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let first_neg = ints.iter().find(|x| !x.is_zero()).map_or(false, |x| x.is_negative());
    if first_neg {
        g = -g;
    }
    ints.into_iter().map(|x| Rat::from(x / &g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = Matrix::from_i64(&[&[2, 1], &[1, 2]]);
        assert_eq!(m.det(), Rat::from(3));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kernel_dimension() {
        let m = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&Rationals, &m);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = Matrix::from_i64(&[&[1, 1], &[1, -1]]);
        let x = solve(&Rationals, &m, &[Rat::from(3), Rat::from(1)]).unwrap();
        assert_eq!(x, vec![Rat::from(2), Rat::from(1)]);
        let s = Matrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(solve(&Rationals, &s, &[Rat::from(1), Rat::from(3)]).is_none());
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![Rat::frac(-1, 2), Rat::frac(1, 3), Rat::zero()];
        assert_eq!(primitive_integer(&v), vec![Rat::from(3), Rat::from(-2), Rat::zero()]);
    }
}
