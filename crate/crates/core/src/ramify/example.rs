use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{d_from_inertia_rep, RamComponent, RamDatum, ramification_class};
use crate::error::{Error, Result};
use crate::groupalg::{FiniteGroup, GroupSpec, OrthRep, Perm, Subgroup};

/// `H <= G` with a decomposition group `Delta` and its inertia group
/// `I`, cyclic of odd order `e` and normal in `Delta`, with `f = [Delta : I]`.
#[derive(Clone, Debug)]
pub struct SubquotientConfig {
    label: String,
    group: Arc<FiniteGroup>,
    h: Subgroup,
    delta: Subgroup,
    inertia: Subgroup,
    generator: usize,
    f: usize,
}

/// One double coset `Delta g H` and its local invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetTerm {
    pub rep: usize,
    pub e_prime: usize,
    pub e: usize,
    pub f_prime: usize,
    pub f: usize,
}

impl SubquotientConfig {
    pub fn new(
        label: impl Into<String>,
        group: Arc<FiniteGroup>,
        h: Subgroup,
        delta: Subgroup,
        inertia: Subgroup,
        generator: usize,
        f: usize,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InconsistentConfig(m));
        if !group.is_normal_in(&inertia, &delta) {
            return bad("inertia group is not normal in the decomposition group".into());
        }
        let e = inertia.order();
        if e % 2 == 0 {
            return bad(format!("inertia group has even order {e}"));
        }
        if !inertia.contains(generator) || group.elem_order(generator) != e {
            return bad(format!("designated generator does not have order {e} in the inertia group"));
        }
        if delta.order() != e * f {
            return bad(format!("residue degree {f} differs from [Delta : I] = {}", delta.order() / e));
        }
        if !quotient_is_cyclic(&group, &delta, &inertia) {
            return bad("Delta / I is not cyclic".into());
        }
        Ok(SubquotientConfig { label: label.into(), group, h, delta, inertia, generator, f })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn e(&self) -> usize {
        self.inertia.order()
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn h(&self) -> &Subgroup {
        &self.h
    }

    /// Points above the component, one per double coset `Delta g H`.
    pub fn terms(&self) -> Result<Vec<CosetTerm>> {
        let g = &self.group;
        let (e, f) = (self.e(), self.f);
        g.double_cosets(&self.delta, &self.h)
            .into_iter()
            .map(|(rep, _)| {
                let conj = g.conjugate(rep, &self.h);
                let e_prime = g.intersect(&self.inertia, &conj).order();
                let d_i = g.intersect(&self.delta, &conj).order();
                let f_prime = d_i / e_prime;
                if d_i % e_prime != 0 || e % e_prime != 0 || f % f_prime != 0 {
                    return Err(Error::InconsistentConfig(format!("non-integral local degrees at {rep}")));
                }
                let t = CosetTerm { rep, e_prime, e: e / e_prime, f_prime, f: f / f_prime };
                if t.e * t.f * t.e_prime * t.f_prime != e * f {
                    return Err(Error::InconsistentConfig(format!("local degrees do not multiply to ef at {rep}")));
                }
                Ok(t)
            })
            .collect()
    }

    pub fn to_record(&self) -> ConfigRecord {
        let g = &self.group;
        let names = |s: &Subgroup| generating_set(g, s).into_iter().map(|x| g.element(x).to_cycles()).collect();
        ConfigRecord {
            label: self.label.clone(),
            group: g.to_spec(),
            h: names(&self.h),
            delta: names(&self.delta),
            inertia: names(&self.inertia),
            generator: g.element(self.generator).to_cycles(),
            e: self.e(),
            f: self.f,
        }
    }
}

fn quotient_is_cyclic(g: &FiniteGroup, delta: &Subgroup, inertia: &Subgroup) -> bool {
    let f = delta.order() / inertia.order();
    delta.elements().iter().any(|&d| {
        let mut x = d;
        let mut j = 1;
        while !inertia.contains(x) {
            x = g.mul(x, d);
            j += 1;
        }
        j == f
    })
}

fn generating_set(g: &FiniteGroup, s: &Subgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = g.trivial_subgroup();
    for &x in s.elements() {
        if !span.contains(x) {
            gens.push(x);
            span = g.closure(&gens);
        }
    }
    gens
}

/// `sum_i e'_i f_i (e_i^2 - 1) / 8` over the double cosets.
pub fn example4_closed_form(cfg: &SubquotientConfig) -> Result<u64> {
    Ok(cfg.terms()?.iter().map(|t| (t.e_prime * t.f * (t.e * t.e - 1) / 8) as u64).sum())
}

/// Component ranks of the permutation module `Q(zeta_e)[G/H]` restricted
/// to the inertia group.
pub fn bruteforce_datum(cfg: &SubquotientConfig) -> Result<RamComponent> {
    let rep = OrthRep::permutation(cfg.group.clone(), &cfg.h);
    let d = d_from_inertia_rep(cfg.e(), rep.image(cfg.generator))?;
    RamComponent::new(cfg.label.clone(), cfg.e(), d)
}

pub fn example4_bruteforce(cfg: &SubquotientConfig) -> Result<u64> {
    Ok(super::d_from_ranks(&bruteforce_datum(cfg)?))
}

/// The divisor class of the permutation-module datum agrees mod 2 with
/// `sum_i f_i (e_i^2 - 1) / 8` on every component, with or without the
/// odd factors `e'_i`.
pub fn final_congruence_check(cfgs: &[SubquotientConfig]) -> Result<bool> {
    let datum = RamDatum { components: cfgs.iter().map(bruteforce_datum).collect::<Result<_>>()? };
    let class = ramification_class(&datum);
    for (cfg, (_, parity)) in cfgs.iter().zip(&class) {
        let terms = cfg.terms()?;
        let plain: usize = terms.iter().map(|t| t.f * (t.e * t.e - 1) / 8).sum();
        let weighted: usize = terms.iter().map(|t| t.e_prime * t.f * (t.e * t.e - 1) / 8).sum();
        if plain % 2 != *parity as usize || weighted % 2 != *parity as usize {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Config file record; subgroups by generators in cycle notation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub label: String,
    pub group: GroupSpec,
    pub h: Vec<String>,
    pub delta: Vec<String>,
    pub inertia: Vec<String>,
    pub generator: String,
    pub e: usize,
    pub f: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub components: Vec<ConfigRecord>,
}

impl ConfigRecord {
    pub fn build(&self) -> Result<SubquotientConfig> {
        let g = Arc::new(FiniteGroup::from_spec(&self.group)?);
        let elem = |s: &str| -> Result<usize> {
            let p = Perm::parse_cycles(s, g.degree())?;
            g.index_of(&p).ok_or_else(|| Error::InconsistentConfig(format!("{s} is not in the group")))
        };
        let sub = |gens: &[String]| -> Result<Subgroup> {
            Ok(g.closure(&gens.iter().map(|s| elem(s)).collect::<Result<Vec<_>>>()?))
        };
        let (h, delta, inertia) = (sub(&self.h)?, sub(&self.delta)?, sub(&self.inertia)?);
        if inertia.order() != self.e {
            return Err(Error::InconsistentConfig(format!("inertia group has order {}, not e = {}", inertia.order(), self.e)));
        }
        let gen = elem(&self.generator)?;
        SubquotientConfig::new(self.label.clone(), g.clone(), h, delta, inertia, gen, self.f)
    }
}

impl ConfigFile {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("ramification config: {e}")))
    }

    pub fn build(&self) -> Result<Vec<SubquotientConfig>> {
        self.components.iter().map(ConfigRecord::build).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SweepBounds {
    pub max_group_order: usize,
    pub max_f: usize,
}

impl Default for SweepBounds {
    fn default() -> Self {
        SweepBounds { max_group_order: 24, max_f: 3 }
    }
}

/// Cyclic groups and affine groups `Z/m ⋊ <a>` up to the order bound.
pub fn sweep_groups(max_order: usize) -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> =
        (1..=max_order).map(|n| (format!("C{n}"), FiniteGroup::cyclic(n))).collect();
    for m in 3..=max_order {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for a in 2..m {
            if num_integer::gcd(a, m) != 1 {
                continue;
            }
            let mut powers = vec![1];
            let mut x = a;
            while x != 1 {
                powers.push(x);
                x = x * a % m;
            }
            if m * powers.len() > max_order {
                continue;
            }
            powers.sort_unstable();
            if seen.insert(powers) {
                out.push((format!("Aff({m},{a})"), FiniteGroup::metacyclic(m, a).expect("unit")));
            }
        }
    }
    out
}

fn conj_class_rep(g: &FiniteGroup, s: &Subgroup) -> Subgroup {
    (0..g.order()).map(|x| g.conjugate(x, s)).min().expect("nonempty group")
}

/// Every config with odd cyclic inertia of order `e >= 3` and
/// `[Delta : I] <= max_f`, up to conjugacy of `H` and of the pair
/// `(Delta, I)`.
pub fn sweep_configs(bounds: SweepBounds) -> Vec<SubquotientConfig> {
    let mut out = Vec::new();
    for (name, g) in sweep_groups(bounds.max_group_order) {
        let g = Arc::new(g);
        let subs = g.subgroups();
        let h_reps: BTreeSet<Subgroup> = subs.iter().map(|s| conj_class_rep(&g, s)).collect();
        let mut pairs: BTreeSet<(Subgroup, Subgroup)> = BTreeSet::new();
        for delta in &subs {
            for inertia in &subs {
                let e = inertia.order();
                if e < 3 || e % 2 == 0 || delta.order() % e != 0 || delta.order() / e > bounds.max_f {
                    continue;
                }
                if !g.is_cyclic(inertia) || !g.is_normal_in(inertia, delta) || !quotient_is_cyclic(&g, delta, inertia) {
                    continue;
                }
                let key = (0..g.order())
                    .map(|x| (g.conjugate(x, delta), g.conjugate(x, inertia)))
                    .min()
                    .expect("nonempty group");
                pairs.insert(key);
            }
        }
        let index = |s: &Subgroup| subs.iter().position(|t| t == s).expect("listed subgroup");
        for (delta, inertia) in &pairs {
            let gen = g.cyclic_generator(inertia).expect("cyclic");
            let f = delta.order() / inertia.order();
            for h in &h_reps {
                let label = format!("{name} D{} I{} H{}", index(delta), index(inertia), index(h));
                let cfg = SubquotientConfig::new(label, g.clone(), h.clone(), delta.clone(), inertia.clone(), gen, f)
                    .expect("sweep configs are consistent");
                out.push(cfg);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_cyclic(n: usize, h_order: usize) -> SubquotientConfig {
        let g = Arc::new(FiniteGroup::cyclic(n));
        let c = g.generator("c").unwrap();
        let h = g.closure(&[g.pow(c, n / h_order)]);
        SubquotientConfig::new(format!("C{n}"), g.clone(), h, g.whole(), g.whole(), c, 1).unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(example4_closed_form(&full_cyclic(3, 1)).unwrap(), 1);
        assert_eq!(example4_closed_form(&full_cyclic(3, 3)).unwrap(), 0);
        assert_eq!(example4_closed_form(&full_cyclic(9, 1)).unwrap(), 10);
    }

    #[test]
    fn bruteforce_matches() {
        for (n, h) in [(3, 1), (3, 3), (9, 1), (9, 3), (15, 3), (15, 5)] {
            let cfg = full_cyclic(n, h);
            assert_eq!(example4_bruteforce(&cfg).unwrap(), example4_closed_form(&cfg).unwrap(), "C{n} H{h}");
        }
        assert!(final_congruence_check(&[full_cyclic(3, 1), full_cyclic(3, 3)]).unwrap());
    }

    #[test]
    fn residue_degree_in_s3() {
        // G = S3, Delta = G, I = A3, f = 2, H = <(1 2)>
        let g = Arc::new(FiniteGroup::symmetric(3));
        let c = g.generator("c").unwrap();
        let t = g.generator("t").unwrap();
        let cfg = SubquotientConfig::new("s3", g.clone(), g.closure(&[t]), g.whole(), g.closure(&[c]), c, 2).unwrap();
        let terms = cfg.terms().unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!((terms[0].e, terms[0].f, terms[0].e_prime, terms[0].f_prime), (3, 1, 1, 2));
        assert_eq!(example4_bruteforce(&cfg).unwrap(), 1);
        let h1 = g.trivial_subgroup();
        let cfg1 = SubquotientConfig::new("s3", g.clone(), h1, g.whole(), g.closure(&[c]), c, 2).unwrap();
        assert_eq!(example4_closed_form(&cfg1).unwrap(), 2);
        assert_eq!(example4_bruteforce(&cfg1).unwrap(), 2);
    }

    #[test]
    fn rejects_bad_configs() {
        let g = Arc::new(FiniteGroup::symmetric(3));
        let c = g.generator("c").unwrap();
        let t = g.generator("t").unwrap();
        let h = g.trivial_subgroup();
        // I = <(1 2)> has even order; I = A3 with f = 1 is inconsistent
        assert!(SubquotientConfig::new("x", g.clone(), h.clone(), g.whole(), g.closure(&[t]), t, 3).is_err());
        assert!(SubquotientConfig::new("x", g.clone(), h.clone(), g.whole(), g.closure(&[c]), c, 1).is_err());
        // (1 2 3) inertia inside Delta = <(1 2)> is not normal there
        assert!(SubquotientConfig::new("x", g.clone(), h, g.closure(&[t]), g.closure(&[c]), c, 1).is_err());
    }

    #[test]
    fn record_round_trip() {
        let cfg = full_cyclic(9, 3);
        let rec = cfg.to_record();
        let json = serde_json::to_string(&ConfigFile { components: vec![rec.clone()] }).unwrap();
        let back = ConfigFile::from_json(&json).unwrap().build().unwrap();
        assert_eq!(example4_closed_form(&back[0]).unwrap(), example4_closed_form(&cfg).unwrap());
        assert_eq!(back[0].to_record(), rec);
    }

    #[test]
    fn sweep_is_large_enough() {
        let cfgs = sweep_configs(SweepBounds { max_group_order: 12, max_f: 3 });
        assert!(cfgs.len() > 20);
        for cfg in &cfgs {
            assert_eq!(example4_closed_form(cfg).unwrap(), example4_bruteforce(cfg).unwrap(), "{}", cfg.label());
        }
    }
}
