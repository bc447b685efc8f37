use std::collections::VecDeque;
use std::sync::Arc;

use super::etale::EtaleAlgebra;
use crate::arith::{square_class, Rat, SquareClass};
use crate::error::{Error, Result};
use crate::groupalg::{FiniteGroup, Subgroup};
use crate::linalg::{kernel, vstack, Matrix, Rationals};
use crate::poly::Poly;

/// How a torsor was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    Split,
    Field { poly: Poly, auts: Vec<Poly> },
    Induced { base: String, subgroup: Vec<usize> },
}

/// A `G`-torsor over Q: an etale algebra of dimension `|G|` with a
/// verified action by automorphisms whose fixed ring is Q.
#[derive(Clone, Debug)]
pub struct GaloisAlgebra {
    label: String,
    algebra: EtaleAlgebra,
    group: Arc<FiniteGroup>,
    action: Vec<Matrix<Rat>>,
    construction: Construction,
}

/// Fixed subalgebra together with its embedding (columns are the basis in
/// ambient coordinates).
#[derive(Clone, Debug)]
pub struct FixedSubalgebra {
    pub algebra: EtaleAlgebra,
    pub embedding: Vec<Vec<Rat>>,
}

/// Extend generator matrices along the Cayley graph, rejecting conflicts.
fn extend_action(group: &FiniteGroup, gens: &[(usize, Matrix<Rat>)], n: usize) -> Result<Vec<Matrix<Rat>>> {
    let mut out: Vec<Option<Matrix<Rat>>> = vec![None; group.order()];
    out[group.identity()] = Some(Matrix::identity(n));
    let mut queue = VecDeque::from([group.identity()]);
    while let Some(g) = queue.pop_front() {
        let mg = out[g].clone().expect("visited");
        for (s, ms) in gens {
            let h = group.mul(*s, g);
            let mh = ms.mul(&mg);
            match &out[h] {
                Some(m) if *m != mh => return Err(Error::NotGalois("action is not a homomorphism".into())),
                Some(_) => {}
                None => {
                    out[h] = Some(mh);
                    queue.push_back(h);
                }
            }
        }
    }
    out.into_iter().map(|m| m.ok_or_else(|| Error::NotGalois("generators do not reach the group".into()))).collect()
}

impl GaloisAlgebra {
    fn build(
        label: String,
        algebra: EtaleAlgebra,
        group: Arc<FiniteGroup>,
        action: Vec<Matrix<Rat>>,
        construction: Construction,
    ) -> Result<Self> {
        let a = GaloisAlgebra { label, algebra, group, action, construction };
        a.verify()?;
        Ok(a)
    }

    /// `Q^G` with `(g f)(x) = f(xg)`, so `g e_y = e_{y g^-1}`.
    pub fn split(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let action = (0..n)
            .map(|g| {
                let mut m = Matrix::from_fn(n, n, |_, _| Rat::zero());
                for y in 0..n {
                    m.set(group.mul(y, group.inv(g)), y, Rat::one());
                }
                m
            })
            .collect();
        GaloisAlgebra {
            label: format!("split{n}"),
            algebra: EtaleAlgebra::split(n),
            group,
            action,
            construction: Construction::Split,
        }
    }

    /// `Q[x]/(f)` with automorphisms `x -> a(x)`; `gen_auts` assigns each
    /// group generator the index of its automorphism.
    pub fn field(
        label: &str,
        f: &Poly,
        auts: &[Poly],
        group: Arc<FiniteGroup>,
        gen_auts: &[(String, usize)],
    ) -> Result<Self> {
        if !f.is_monic_integral() {
            return Err(Error::Precondition(format!("{f} is not a monic integer polynomial")));
        }
        let n = f.degree().unwrap_or(0);
        if auts.len() != n || group.order() != n {
            return Err(Error::NotGalois(format!(
                "{} automorphisms and group order {} for degree {n}",
                auts.len(),
                group.order()
            )));
        }
        let reduced: Vec<Poly> = auts.iter().map(|a| a.rem(f)).collect::<Result<_>>()?;
        for (i, a) in reduced.iter().enumerate() {
            if !f.compose_mod(a, f)?.is_zero() {
                return Err(Error::NotGalois(format!("automorphism {i} ({a}) does not map a root to a root")));
            }
        }
        for (i, a) in reduced.iter().enumerate() {
            for (j, b) in reduced.iter().enumerate() {
                let c = a.compose_mod(b, f)?;
                if !reduced.contains(&c) {
                    return Err(Error::NotGalois(format!("automorphisms {i} and {j} compose outside the set")));
                }
            }
        }
        let algebra = EtaleAlgebra::from_poly(f)?;
        let matrix = |a: &Poly| -> Result<Matrix<Rat>> {
            let cols = (0..n)
                .map(|k| Poly::monomial(k).compose_mod(a, f).map(|p| p.padded(n)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_cols(&cols))
        };
        let aut_mats: Vec<Matrix<Rat>> = reduced.iter().map(matrix).collect::<Result<_>>()?;
        let gens = gen_auts
            .iter()
            .map(|(name, i)| {
                let g = group
                    .generator(name)
                    .ok_or_else(|| Error::GroupMismatch(format!("no generator named {name:?}")))?;
                let m = aut_mats.get(*i).ok_or_else(|| Error::Parse(format!("automorphism index {i} out of range")))?;
                Ok((g, m.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let action = extend_action(&group, &gens, n)?;
        if aut_mats.iter().any(|m| !action.contains(m)) {
            return Err(Error::NotGalois("group does not act through every automorphism".into()));
        }
        let construction = Construction::Field { poly: f.clone(), auts: reduced };
        GaloisAlgebra::build(label.to_string(), algebra, group, action, construction)
    }

    /// `Map_H(G, L) = { f : G -> L | f(hx) = h f(x) }` with `(g f)(x) = f(xg)`,
    /// where `embed` sends each generator of `L`'s group into `G`.
    pub fn induced(label: &str, group: Arc<FiniteGroup>, base: &GaloisAlgebra, embed: &[(String, usize)]) -> Result<Self> {
        let hgrp = &base.group;
        // phi: base group -> G by extending along generators.
        let mut phi: Vec<Option<usize>> = vec![None; hgrp.order()];
        phi[hgrp.identity()] = Some(group.identity());
        let gens: Vec<(usize, usize)> = embed
            .iter()
            .map(|(name, g)| {
                hgrp.generator(name)
                    .map(|s| (s, *g))
                    .ok_or_else(|| Error::GroupMismatch(format!("no generator named {name:?}")))
            })
            .collect::<Result<_>>()?;
        let mut queue = VecDeque::from([hgrp.identity()]);
        while let Some(x) = queue.pop_front() {
            for &(s, g) in &gens {
                let y = hgrp.mul(s, x);
                let img = group.mul(g, phi[x].expect("visited"));
                match phi[y] {
                    Some(v) if v != img => return Err(Error::GroupMismatch("embedding is not a homomorphism".into())),
                    Some(_) => {}
                    None => {
                        phi[y] = Some(img);
                        queue.push_back(y);
                    }
                }
            }
        }
        let phi: Vec<usize> = phi.into_iter().collect::<Option<_>>().ok_or_else(|| {
            Error::GroupMismatch("embedding generators do not reach the group".into())
        })?;
        let mut phi_inv = vec![usize::MAX; group.order()];
        for (x, &g) in phi.iter().enumerate() {
            if phi_inv[g] != usize::MAX {
                return Err(Error::GroupMismatch("embedding is not injective".into()));
            }
            phi_inv[g] = x;
        }
        let h = group.subgroup(&phi)?;
        // Right cosets H x_i.
        let mut label_of = vec![usize::MAX; group.order()];
        let mut reps = Vec::new();
        for g in 0..group.order() {
            if label_of[g] == usize::MAX {
                for &x in h.elements() {
                    label_of[group.mul(x, g)] = reps.len();
                }
                reps.push(g);
            }
        }
        let m = reps.len();
        let d = base.algebra.dim();
        let algebra = EtaleAlgebra::product(&vec![base.algebra.clone(); m]);
        let action = (0..group.order())
            .map(|g| {
                let mut mat = Matrix::from_fn(m * d, m * d, |_, _| Rat::zero());
                for (i, &xi) in reps.iter().enumerate() {
                    // x_i g = h x_j, and component i of g f is h acting on component j.
                    let xg = group.mul(xi, g);
                    let j = label_of[xg];
                    let hh = group.mul(xg, group.inv(reps[j]));
                    let block = &base.action[phi_inv[hh]];
                    for r in 0..d {
                        for c in 0..d {
                            mat.set(i * d + r, j * d + c, block.get(r, c).clone());
                        }
                    }
                }
                mat
            })
            .collect();
        let construction = Construction::Induced { base: base.label.clone(), subgroup: h.elements().to_vec() };
        GaloisAlgebra::build(label.to_string(), algebra, group, action, construction)
    }

    /// Automorphisms on all basis products, homomorphism on the full table,
    /// fixed ring `Q 1` and dimension `|G|`.
    pub fn verify(&self) -> Result<()> {
        let n = self.algebra.dim();
        let g = &self.group;
        if n != g.order() {
            return Err(Error::NotGalois(format!("dimension {n} differs from group order {}", g.order())));
        }
        for (x, m) in self.action.iter().enumerate() {
            if m.mul_vec(self.algebra.one()) != self.algebra.one() {
                return Err(Error::NotGalois(format!("{:?} moves the unit", g.element(x))));
            }
            let imgs: Vec<Vec<Rat>> = (0..n).map(|i| m.col(i)).collect();
            for i in 0..n {
                for j in i..n {
                    let lhs = m.mul_vec(&self.algebra.table()[i][j]);
                    if lhs != self.algebra.mul(&imgs[i], &imgs[j]) {
                        return Err(Error::NotGalois(format!("{:?} is not multiplicative", g.element(x))));
                    }
                }
            }
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if self.action[g.mul(a, b)] != self.action[a].mul(&self.action[b]) {
                    return Err(Error::NotGalois("action is not a homomorphism".into()));
                }
            }
        }
        let fixed = self.fixed_space(&g.whole());
        if fixed.len() != 1 || self.algebra.as_scalar(&fixed[0]).is_none() {
            return Err(Error::NotGalois(format!("fixed ring has dimension {}", fixed.len())));
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn algebra(&self) -> &EtaleAlgebra {
        &self.algebra
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn action(&self, g: usize) -> &Matrix<Rat> {
        &self.action[g]
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn is_field(&self) -> bool {
        matches!(self.construction, Construction::Field { .. })
    }

    fn fixed_space(&self, h: &Subgroup) -> Vec<Vec<Rat>> {
        let mats: Vec<&Matrix<Rat>> = h.elements().iter().map(|&x| &self.action[x]).collect();
        EtaleAlgebra::common_fixed(&mats, self.dim())
    }

    pub fn fixed_subalgebra(&self, h: &Subgroup) -> Result<FixedSubalgebra> {
        let embedding = self.fixed_space(h);
        let algebra = self.algebra.subalgebra(&embedding)?;
        Ok(FixedSubalgebra { algebra, embedding })
    }

    /// The `z` with `g z = chi(g) z` for a character `chi : G -> {±1}`.
    pub fn eigenvector(&self, chi: &[i8]) -> Result<Vec<Rat>> {
        let n = self.dim();
        let id = Matrix::<Rat>::identity(n);
        let blocks: Vec<Matrix<Rat>> = self
            .group
            .generators()
            .iter()
            .map(|(_, s)| self.action[*s].sub(&id.scale(&Rat::from(chi[*s] as i64))))
            .collect();
        let sols = if blocks.is_empty() { vec![self.algebra.one().to_vec()] } else { kernel(&Rationals, &vstack(&blocks)) };
        match sols.len() {
            1 => Ok(sols.into_iter().next().expect("one solution")),
            k => Err(Error::BrokenInput(format!("character eigenspace has dimension {k}"))),
        }
    }

    /// Kummer description of an elementary abelian 2-group torsor whose
    /// generators are independent: generator `s_i` flips `sqrt r_i` only.
    pub fn kummer_radicands(&self) -> Result<Vec<i64>> {
        let gens = self.group.generators();
        let k = gens.len();
        if self.group.order() != 1 << k || (0..self.group.order()).any(|g| self.group.elem_order(g) > 2) {
            return Err(Error::UnsupportedSpinorNormRegime(
                "group is not elementary abelian on independent generators".into(),
            ));
        }
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let mut chi = vec![1i8; self.group.order()];
            for g in 0..self.group.order() {
                // chi_i(g) is the parity of s_i in g, read off from the generator word.
                chi[g] = self.dual_sign(g, i);
            }
            let z = self.eigenvector(&chi)?;
            let z2 = self.algebra.mul(&z, &z);
            let r = self.algebra.as_scalar(&z2).ok_or_else(|| Error::BrokenInput("z^2 is not rational".into()))?;
            let class: SquareClass = square_class(&r)?;
            let rep = i64::try_from(class.rep())
                .map_err(|_| Error::SizeLimit("radicand does not fit in i64".into()))?;
            if rep == 1 {
                return Err(Error::UnsupportedSpinorNormRegime("torsor is not a field".into()));
            }
            out.push(rep);
        }
        Ok(out)
    }

    /// Sign of the dual character to generator `i` at element `g`.
    fn dual_sign(&self, g: usize, i: usize) -> i8 {
        let gens = self.group.generators();
        for mask in 0usize..1 << gens.len() {
            let x = (0..gens.len())
                .filter(|j| mask >> j & 1 == 1)
                .fold(self.group.identity(), |acc, j| self.group.mul(acc, gens[j].1));
            if x == g {
                return if mask >> i & 1 == 1 { -1 } else { 1 };
            }
        }
        unreachable!("elementary abelian group is spanned by its generators")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn quadratic(d: i64) -> GaloisAlgebra {
        GaloisAlgebra::field(
            &format!("sqrt{d}"),
            &Poly::from_i64(&[-d, 0, 1]),
            &[Poly::x(), Poly::from_i64(&[0, -1])],
            c2(),
            &[("c".into(), 1)],
        )
        .unwrap()
    }

    #[test]
    fn split_examples() {
        let g = c2();
        let a = GaloisAlgebra::split(g.clone());
        a.verify().unwrap();
        assert_eq!(*a.action(g.generator("c").unwrap()), Matrix::from_i64(&[&[0, 1], &[1, 0]]));
        assert!(a.algebra().trace_form().unwrap().gram().is_identity());
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        GaloisAlgebra::split(s3).verify().unwrap();
    }

    #[test]
    fn field_examples() {
        let q5 = quadratic(5);
        assert_eq!(*q5.algebra().trace_form().unwrap().gram(), Matrix::from_i64(&[&[2, 0], &[0, 10]]));
        let qi = quadratic(-1);
        assert_eq!(*qi.algebra().trace_form().unwrap().gram(), Matrix::from_i64(&[&[2, 0], &[0, -2]]));
        let c3 = Arc::new(FiniteGroup::cyclic(3));
        let f = Poly::from_i64(&[-1, -3, 0, 1]);
        let auts = [Poly::x(), Poly::from_i64(&[2, 0, -1]), Poly::from_i64(&[-2, -1, 1])];
        GaloisAlgebra::field("cubic", &f, &auts, c3.clone(), &[("c".into(), 1)]).unwrap();
        let bad = [Poly::x(), Poly::from_i64(&[-2, 0, 1]), Poly::from_i64(&[2, -1, -1])];
        let err = GaloisAlgebra::field("cubic", &f, &bad, c3, &[("c".into(), 1)]).unwrap_err();
        assert!(matches!(err, Error::NotGalois(_)));
    }

    #[test]
    fn non_closed_automorphisms_name_the_pair() {
        let f = Poly::from_i64(&[-2, 0, 0, 0, 1]);
        let auts = [Poly::x(), Poly::from_i64(&[0, -1]), Poly::x(), Poly::from_i64(&[0, -1])];
        let c4 = Arc::new(FiniteGroup::cyclic(4));
        assert!(GaloisAlgebra::field("x4-2", &f, &auts, c4, &[("c".into(), 1)]).is_err());
    }

    #[test]
    fn fixed_subalgebras() {
        let q5 = quadratic(5);
        let g = q5.group().clone();
        let top = q5.fixed_subalgebra(&g.whole()).unwrap();
        assert_eq!(top.algebra.dim(), 1);
        assert!(top.algebra.trace_form().unwrap().gram().is_identity());
        let bottom = q5.fixed_subalgebra(&g.trivial_subgroup()).unwrap();
        assert_eq!(bottom.algebra.dim(), 2);
    }

    #[test]
    fn induced_s3_torsor() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let t = s3.generator("t").unwrap();
        let a = GaloisAlgebra::induced("s3-sqrt5", s3.clone(), &quadratic(5), &[("c".into(), t)]).unwrap();
        assert_eq!(a.dim(), 6);
        for h in s3.subgroups() {
            assert_eq!(a.fixed_subalgebra(&h).unwrap().algebra.dim(), 6 / h.order());
        }
    }

    #[test]
    fn kummer_data() {
        assert_eq!(quadratic(-7).kummer_radicands().unwrap(), vec![-7]);
        assert!(GaloisAlgebra::split(c2()).kummer_radicands().is_err());
    }
}
