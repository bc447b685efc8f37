use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order verified exhaustively; larger groups get sampled checks.
pub const EXHAUSTIVE_ORDER_LIMIT: usize = 48;

const MAX_ORDER: usize = 5040;

/// Permutation of `{0, ..., n-1}` in one-line notation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || std::mem::replace(&mut seen[i as usize], true) {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u32;
        }
        Perm(out)
    }

    pub fn sign(&self) -> i8 {
        let mut seen = vec![false; self.0.len()];
        let mut s = 1;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            if len % 2 == 0 {
                s = -s;
            }
        }
        s
    }

    /// Parse 1-based cycle notation such as `(1 2 3)(4 5)` or `()`.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Perm> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::Parse(format!("bad cycle notation {s:?}")))?;
            let points: Vec<usize> = inner
                .0
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .ok()
                        .filter(|&p| p >= 1 && p <= degree)
                        .ok_or_else(|| Error::Parse(format!("bad point {t:?} in {s:?} (degree {degree})")))
                })
                .collect::<Result<_>>()?;
            for (k, &p) in points.iter().enumerate() {
                images[p - 1] = (points[(k + 1) % points.len()] - 1) as u32;
            }
            rest = inner.1.trim_start();
        }
        Perm::from_images(images)
    }

    pub fn to_cycles(&self) -> String {
        let mut seen = vec![false; self.0.len()];
        let mut out = String::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push((x + 1).to_string());
                x = self.0[x] as usize;
            }
            out.push('(');
            out.push_str(&cyc.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycles())
    }
}

/// Generator record of a group input file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub perm: String,
}

/// Group input: generator permutations in cycle notation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<GeneratorSpec>,
}

/// Finite permutation group with its Cayley table. Elements are sorted
/// lexicographically in one-line notation, so element index order is the
/// canonical order used for minimal coset representatives.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    identity: usize,
    generators: Vec<(String, usize)>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

/// Subgroup of a fixed ambient group, as a sorted set of element indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    elems: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elems.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elems.iter().all(|&g| other.contains(g))
    }
}

impl FiniteGroup {
    pub fn from_generators(degree: usize, gens: Vec<(String, Perm)>) -> Result<Self> {
        if gens.iter().any(|(_, p)| p.degree() != degree) {
            return Err(Error::Dimension("generator degree differs from group degree".into()));
        }
        let id = Perm::identity(degree);
        let mut seen: BTreeSet<Perm> = BTreeSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for (_, s) in &gens {
                let h = s.compose(&g);
                if seen.insert(h.clone()) {
                    if seen.len() > MAX_ORDER {
                        return Err(Error::SizeLimit(format!("group order exceeds {MAX_ORDER}")));
                    }
                    queue.push_back(h);
                }
            }
        }
        let elements: Vec<Perm> = seen.into_iter().collect();
        let index: HashMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table: Vec<Vec<usize>> = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&a.compose(b)]).collect())
            .collect();
        let inverses = elements.iter().map(|a| index[&a.inverse()]).collect();
        let identity = index[&Perm::identity(degree)];
        let generators = gens.into_iter().map(|(n, p)| (n, index[&p])).collect();
        Ok(FiniteGroup { degree, elements, index, table, inverses, identity, generators })
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        let gens = spec
            .generators
            .iter()
            .map(|g| Ok((g.name.clone(), Perm::parse_cycles(&g.perm, spec.degree)?)))
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_generators(spec.degree, gens)
    }

    pub fn to_spec(&self) -> GroupSpec {
        GroupSpec {
            degree: self.degree,
            generators: self
                .generators
                .iter()
                .map(|(n, g)| GeneratorSpec { name: n.clone(), perm: self.elements[*g].to_cycles() })
                .collect(),
        }
    }

    /// Cyclic group of order `n` acting on `n` points.
    pub fn cyclic(n: usize) -> Self {
        let gen = Perm((0..n as u32).map(|i| (i + 1) % n as u32).collect());
        FiniteGroup::from_generators(n, vec![("c".into(), gen)]).expect("cyclic group")
    }

    /// Dihedral group of order `2n` acting on `n` points (`n >= 3`).
    pub fn dihedral(n: usize) -> Self {
        let r = Perm((0..n as u32).map(|i| (i + 1) % n as u32).collect());
        let s = Perm((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect());
        FiniteGroup::from_generators(n, vec![("r".into(), r), ("s".into(), s)]).expect("dihedral group")
    }

    /// Affine group `x -> a^i x + j` on `Z/m`, of order `m * ord(a)`.
    pub fn metacyclic(m: usize, a: usize) -> Result<Self> {
        if m < 2 || num_integer::gcd(a % m, m) != 1 {
            return Err(Error::Precondition(format!("{a} is not a unit mod {m}")));
        }
        let r = Perm((0..m).map(|i| ((i + 1) % m) as u32).collect());
        let s = Perm((0..m).map(|i| (i * a % m) as u32).collect());
        FiniteGroup::from_generators(m, vec![("r".into(), r), ("s".into(), s)])
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<u32> = (0..n as u32).collect();
            t.swap(0, 1);
            gens.push(("t".to_string(), Perm(t)));
        }
        if n >= 3 {
            gens.push(("c".to_string(), Perm((0..n as u32).map(|i| (i + 1) % n as u32).collect())));
        }
        FiniteGroup::from_generators(n, gens).expect("symmetric group")
    }

    /// Direct product acting on the disjoint union of the two point sets.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let n = a.degree + b.degree;
        let lift = |p: &Perm, offset: usize, own: usize| {
            let mut v: Vec<u32> = (0..n as u32).collect();
            for i in 0..own {
                v[offset + i] = (offset + p.apply(i)) as u32;
            }
            Perm(v)
        };
        let mut gens = Vec::new();
        for (name, g) in &a.generators {
            gens.push((format!("{name}1"), lift(&a.elements[*g], 0, a.degree)));
        }
        for (name, g) in &b.generators {
            gens.push((format!("{name}2"), lift(&b.elements[*g], a.degree, b.degree)));
        }
        FiniteGroup::from_generators(n, gens).expect("direct product")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn elem_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn generators(&self) -> &[(String, usize)] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, g)| *g)
    }

    /// `a b a^-1`.
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elems: (0..self.order()).collect() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elems: vec![self.identity] }
    }

    /// Smallest subgroup containing `s`.
    pub fn closure(&self, s: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.identity]);
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(g) = queue.pop_front() {
            for &x in s {
                let h = self.mul(x, g);
                if set.insert(h) {
                    queue.push_back(h);
                }
            }
        }
        Subgroup { elems: set.into_iter().collect() }
    }

    /// Accept `elems` as a subgroup after checking closure and inverses.
    pub fn subgroup(&self, elems: &[usize]) -> Result<Subgroup> {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        if !set.contains(&self.identity)
            || set.iter().any(|&a| set.iter().any(|&b| !set.contains(&self.mul(a, b))))
        {
            return Err(Error::Precondition("element set is not a subgroup".into()));
        }
        Ok(Subgroup { elems: set.into_iter().collect() })
    }

    pub fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup { elems: a.elems.iter().copied().filter(|&g| b.contains(g)).collect() }
    }

    /// `g H g^-1`.
    pub fn conjugate(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut elems: Vec<usize> = h.elems.iter().map(|&x| self.conj(g, x)).collect();
        elems.sort_unstable();
        Subgroup { elems }
    }

    pub fn is_normal_in(&self, n: &Subgroup, ambient: &Subgroup) -> bool {
        n.is_subset_of(ambient) && ambient.elems.iter().all(|&g| self.conjugate(g, n) == *n)
    }

    pub fn is_cyclic(&self, h: &Subgroup) -> bool {
        h.elems.iter().any(|&g| self.elem_order(g) == h.order())
    }

    /// Minimal (by index) generator of a cyclic subgroup.
    pub fn cyclic_generator(&self, h: &Subgroup) -> Option<usize> {
        h.elems.iter().copied().find(|&g| self.elem_order(g) == h.order())
    }

    /// Minimal representatives of the left cosets `gH`, in increasing order.
    pub fn cosets(&self, h: &Subgroup) -> Vec<usize> {
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &x in &h.elems {
                covered[self.mul(g, x)] = true;
            }
        }
        reps
    }

    /// Map each element to the position of its left coset in `cosets(h)`.
    pub fn coset_labels(&self, h: &Subgroup) -> Vec<usize> {
        let reps = self.cosets(h);
        let mut label = vec![0; self.order()];
        for (k, &r) in reps.iter().enumerate() {
            for &x in &h.elems {
                label[self.mul(r, x)] = k;
            }
        }
        label
    }

    /// Minimal representatives of the double cosets `A g B` with their sizes.
    pub fn double_cosets(&self, a: &Subgroup, b: &Subgroup) -> Vec<(usize, usize)> {
        let mut covered = vec![false; self.order()];
        let mut out = Vec::new();
        for g in 0..self.order() {
            if covered[g] {
                continue;
            }
            let mut size = 0;
            for &x in &a.elems {
                for &y in &b.elems {
                    let z = self.mul(self.mul(x, g), y);
                    if !covered[z] {
                        covered[z] = true;
                        size += 1;
                    }
                }
            }
            out.push((g, size));
        }
        out
    }

    /// Every subgroup, sorted by order and then by element set.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Subgroup> = (0..self.order()).map(|g| self.closure(&[g])).collect();
        let mut frontier: Vec<Subgroup> = found.iter().cloned().collect();
        let cyclic: Vec<Subgroup> = frontier.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.is_subset_of(h) {
                        continue;
                    }
                    let mut gens = h.elems.clone();
                    gens.extend(&c.elems);
                    let j = self.closure(&gens);
                    if found.insert(j.clone()) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut all: Vec<Subgroup> = found.into_iter().collect();
        all.sort_by(|x, y| x.order().cmp(&y.order()).then_with(|| x.elems.cmp(&y.elems)));
        all
    }

    /// Check identity, inverses and associativity of the Cayley table:
    /// exhaustively up to [`EXHAUSTIVE_ORDER_LIMIT`], on a deterministic
    /// sample beyond. Returns whether the check was exhaustive.
    pub fn verify(&self) -> Result<bool> {
        let n = self.order();
        for a in 0..n {
            if self.mul(a, self.identity) != a || self.mul(a, self.inv(a)) != self.identity {
                return Err(Error::BrokenInput("identity or inverse law fails".into()));
            }
        }
        let exhaustive = n <= EXHAUSTIVE_ORDER_LIMIT;
        let step = if exhaustive { 1 } else { n / 17 + 1 };
        for a in (0..n).step_by(step) {
            for b in (0..n).step_by(step) {
                for c in (0..n).step_by(step) {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::BrokenInput("associativity fails".into()));
                    }
                }
            }
        }
        Ok(exhaustive)
    }
}
