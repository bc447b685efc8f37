use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::group::{FiniteGroup, Subgroup, EXHAUSTIVE_ORDER_LIMIT};
use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quadform::QuadForm;

/// Orthogonal representation `G -> O(q)` over Q, stored on every element.
#[derive(Clone, Debug)]
pub struct OrthRep {
    group: Arc<FiniteGroup>,
    form: QuadForm,
    images: Vec<Matrix<Rat>>,
}

/// Representation input: generator name to matrix with rational entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepSpec {
    pub images: BTreeMap<String, Vec<Vec<Rat>>>,
}

/// Same group value, shared or not.
pub fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl OrthRep {
    /// Extend generator images along the Cayley graph, then verify the
    /// homomorphism property and orthogonality.
    pub fn from_generator_images(
        group: Arc<FiniteGroup>,
        form: QuadForm,
        gens: &[(String, Matrix<Rat>)],
    ) -> Result<Self> {
        let n = form.rank();
        let mut named: Vec<(usize, &Matrix<Rat>)> = Vec::new();
        for (name, m) in gens {
            let g = group
                .generator(name)
                .ok_or_else(|| Error::GroupMismatch(format!("no generator named {name:?}")))?;
            if m.rows() != n || m.cols() != n {
                return Err(Error::Dimension(format!("image of {name} is not {n}x{n}")));
            }
            named.push((g, m));
        }
        for (name, _) in group.generators() {
            if !gens.iter().any(|(n, _)| n == name) {
                return Err(Error::Precondition(format!("missing image for generator {name}")));
            }
        }
        let mut images: Vec<Option<Matrix<Rat>>> = vec![None; group.order()];
        images[group.identity()] = Some(Matrix::identity(n));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(g) = queue.pop_front() {
            let mg = images[g].clone().expect("visited");
            for &(s, ms) in &named {
                let h = group.mul(s, g);
                let mh = ms.mul(&mg);
                match &images[h] {
                    Some(existing) if *existing != mh => {
                        return Err(Error::BrokenInput("generator images do not define a homomorphism".into()))
                    }
                    Some(_) => {}
                    None => {
                        images[h] = Some(mh);
                        queue.push_back(h);
                    }
                }
            }
        }
        let images = images.into_iter().map(|m| m.expect("group generated")).collect();
        let rep = OrthRep { group, form, images };
        rep.verify()?;
        Ok(rep)
    }

    pub fn from_spec(group: Arc<FiniteGroup>, form: QuadForm, spec: &RepSpec) -> Result<Self> {
        let gens = spec
            .images
            .iter()
            .map(|(k, rows)| {
                if rows.iter().any(|r| r.len() != rows.len()) {
                    return Err(Error::Dimension(format!("image of {k} is not square")));
                }
                Ok((k.clone(), Matrix::from_rows(rows.clone())))
            })
            .collect::<Result<Vec<_>>>()?;
        OrthRep::from_generator_images(group, form, &gens)
    }

    pub fn to_spec(&self) -> RepSpec {
        let images = self
            .group
            .generators()
            .iter()
            .map(|(name, g)| {
                let m = &self.images[*g];
                (name.clone(), (0..m.rows()).map(|i| m.row(i).to_vec()).collect())
            })
            .collect();
        RepSpec { images }
    }

    pub fn trivial(group: Arc<FiniteGroup>, form: QuadForm) -> Self {
        let images = vec![Matrix::identity(form.rank()); group.order()];
        OrthRep { group, form, images }
    }

    /// Rank-one representation on `<1>` through a character `G -> {±1}`.
    pub fn from_character(group: Arc<FiniteGroup>, chi: &[i8]) -> Result<Self> {
        if chi.len() != group.order() {
            return Err(Error::Dimension("character length differs from group order".into()));
        }
        let images = chi.iter().map(|&c| Matrix::diagonal(&[Rat::from(c as i64)])).collect();
        let rep = OrthRep { group, form: QuadForm::diag_i64(&[1]), images };
        rep.verify()?;
        Ok(rep)
    }

    /// `G` permuting the left cosets of `H`, on the form with the cosets as
    /// an orthonormal basis.
    pub fn permutation(group: Arc<FiniteGroup>, h: &Subgroup) -> Self {
        let reps = group.cosets(h);
        let label = group.coset_labels(h);
        let m = reps.len();
        let images = (0..group.order())
            .map(|g| {
                let mut p = Matrix::from_fn(m, m, |_, _| Rat::zero());
                for (k, &r) in reps.iter().enumerate() {
                    p.set(label[group.mul(g, r)], k, Rat::one());
                }
                p
            })
            .collect();
        let form = QuadForm::new(Matrix::identity(m)).expect("identity form");
        OrthRep { group, form, images }
    }

    pub fn direct_sum(&self, other: &OrthRep) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch("direct sum of representations of different groups".into()));
        }
        let images = self.images.iter().zip(&other.images).map(|(a, b)| a.block_sum(b)).collect();
        Ok(OrthRep { group: self.group.clone(), form: self.form.orth_sum(&other.form), images })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn form(&self) -> &QuadForm {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn image(&self, g: usize) -> &Matrix<Rat> {
        &self.images[g]
    }

    pub fn images(&self) -> &[Matrix<Rat>] {
        &self.images
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|m| m.is_identity())
    }

    pub fn det_character(&self) -> Vec<i8> {
        self.images.iter().map(|m| if m.det().is_negative() { -1 } else { 1 }).collect()
    }

    /// Homomorphism on the full table (sampled past the exhaustive limit)
    /// and orthogonality of every image.
    pub fn verify(&self) -> Result<()> {
        let g = &self.group;
        if let Some(i) = self.images.iter().position(|m| !self.form.preserved_by(m)) {
            return Err(Error::BrokenInput(format!("image of {:?} does not preserve the form", g.element(i))));
        }
        if !self.images[g.identity()].is_identity() {
            return Err(Error::BrokenInput("identity does not act trivially".into()));
        }
        let step = if g.order() <= EXHAUSTIVE_ORDER_LIMIT { 1 } else { g.order() / 29 + 1 };
        for a in (0..g.order()).step_by(step) {
            for b in 0..g.order() {
                if self.images[g.mul(a, b)] != self.images[a].mul(&self.images[b]) {
                    return Err(Error::BrokenInput("representation is not a homomorphism".into()));
                }
            }
        }
        Ok(())
    }
}

/// Every homomorphism `G -> {±1}`, trivial character first.
pub fn sign_characters(group: &FiniteGroup) -> Vec<Vec<i8>> {
    let gens = group.generators();
    let mut out = Vec::new();
    for mask in 0u32..(1 << gens.len()) {
        let mut chi = vec![0i8; group.order()];
        chi[group.identity()] = 1;
        let mut queue = VecDeque::from([group.identity()]);
        let mut ok = true;
        while let Some(g) = queue.pop_front() {
            for (k, (_, s)) in gens.iter().enumerate() {
                let v = if mask >> k & 1 == 1 { -chi[g] } else { chi[g] };
                let h = group.mul(*s, g);
                if chi[h] == 0 {
                    chi[h] = v;
                    queue.push_back(h);
                } else if chi[h] != v {
                    ok = false;
                }
            }
        }
        if ok && !out.contains(&chi) {
            out.push(chi);
        }
    }
    out
}

/// Character of a cyclic group of order `e` sending the designated
/// generator to `zeta_e^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicCharacter {
    pub e: usize,
    pub k: usize,
}

impl CyclicCharacter {
    pub fn new(e: usize, k: usize) -> Result<Self> {
        if e == 0 || k >= e {
            return Err(Error::Precondition(format!("character exponent {k} out of range for order {e}")));
        }
        Ok(CyclicCharacter { e, k })
    }

    /// Exponent of `zeta_e` taken on the `j`-th power of the generator.
    pub fn exponent_at(&self, j: usize) -> usize {
        (self.k * j) % self.e
    }

    pub fn power(&self, m: usize) -> Self {
        CyclicCharacter { e: self.e, k: (self.k * m) % self.e }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn permutation_examples() {
        let g = c2();
        let triv = OrthRep::permutation(g.clone(), &g.whole());
        assert_eq!(triv.rank(), 1);
        assert!(triv.is_trivial());
        let reg = OrthRep::permutation(g.clone(), &g.trivial_subgroup());
        let s = g.generator("c").unwrap();
        assert_eq!(*reg.image(s), Matrix::from_i64(&[&[0, 1], &[1, 0]]));
        assert_eq!(reg.det_character()[s], -1);
        reg.verify().unwrap();

        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let h = s3.closure(&[s3.generator("t").unwrap()]);
        let p = OrthRep::permutation(s3.clone(), &h);
        assert_eq!(p.rank(), 3);
        p.verify().unwrap();
        let chi = p.det_character();
        for a in 0..6 {
            assert_eq!(chi[a], s3.element(a).sign());
        }
    }

    #[test]
    fn generator_images() {
        let g = c2();
        let rep = OrthRep::from_generator_images(
            g.clone(),
            QuadForm::diag_i64(&[1, 1]),
            &[("c".into(), Matrix::from_i64(&[&[-1, 0], &[0, -1]]))],
        )
        .unwrap();
        assert_eq!(rep.det_character(), vec![1, 1]);
        let bad = OrthRep::from_generator_images(
            g.clone(),
            QuadForm::diag_i64(&[1, 1]),
            &[("c".into(), Matrix::from_i64(&[&[0, -1], &[1, 0]]))],
        );
        assert!(matches!(bad, Err(Error::BrokenInput(_))));
        let not_orth = OrthRep::from_generator_images(
            g.clone(),
            QuadForm::diag_i64(&[1, 2]),
            &[("c".into(), Matrix::from_i64(&[&[0, 1], &[1, 0]]))],
        );
        assert!(not_orth.is_err());
        let unknown = OrthRep::from_generator_images(
            g,
            QuadForm::diag_i64(&[1]),
            &[("x".into(), Matrix::from_i64(&[&[1]]))],
        );
        assert!(matches!(unknown, Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn det_of_sums() {
        let g = Arc::new(FiniteGroup::symmetric(3));
        let p = OrthRep::permutation(g.clone(), &g.trivial_subgroup());
        let t = OrthRep::trivial(g.clone(), QuadForm::diag_i64(&[1, 3]));
        assert!(t.det_character().iter().all(|&x| x == 1));
        let s = p.direct_sum(&t).unwrap();
        s.verify().unwrap();
        let (a, b, c) = (p.det_character(), t.det_character(), s.det_character());
        for i in 0..6 {
            assert_eq!(c[i], a[i] * b[i]);
        }
    }

    #[test]
    fn characters() {
        assert_eq!(sign_characters(&FiniteGroup::symmetric(3)).len(), 2);
        assert_eq!(sign_characters(&FiniteGroup::cyclic(3)).len(), 1);
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert_eq!(sign_characters(&v4).len(), 4);
        let chi = CyclicCharacter::new(5, 2).unwrap();
        assert_eq!(chi.exponent_at(3), 1);
        assert!(CyclicCharacter::new(3, 3).is_err());
    }

    #[test]
    fn spec_roundtrip() {
        let g = c2();
        let rep = OrthRep::permutation(g.clone(), &g.trivial_subgroup());
        let json = serde_json::to_string(&rep.to_spec()).unwrap();
        let spec: RepSpec = serde_json::from_str(&json).unwrap();
        let again = OrthRep::from_spec(g, rep.form().clone(), &spec).unwrap();
        assert_eq!(again.images(), rep.images());
    }
}
