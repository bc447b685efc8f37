//! Square classes `Q*/Q*^2`, places of `Q`, Hilbert symbols and
//! two-torsion Brauer classes.
//!
//! A Brauer class of order dividing two is stored by its ramification
//! set: the finite, even set of places where the local invariant is
//! one half. Addition is symmetric difference.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::factor::{factor, mul_mod, pow_mod};
use super::rat::Rat;
use crate::error::{Error, Result};

/// A place of `Q`: the real place or a finite prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(u128),
}

impl Place {
    pub fn prime(p: u128) -> Result<Self> {
        if super::factor::is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(Error::Precondition(format!("{p} is not prime")))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Real => s.serialize_str("inf"),
            Place::Prime(p) => match u64::try_from(*p) {
                Ok(small) => s.serialize_u64(small),
                Err(_) => s.serialize_str(&p.to_string()),
            },
        }
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Str(String),
        }
        let p = match Repr::deserialize(d)? {
            Repr::Num(n) => n as u128,
            Repr::Str(s) if s == "inf" => return Ok(Place::Real),
            Repr::Str(s) => s.parse::<u128>().map_err(serde::de::Error::custom)?,
        };
        Place::prime(p).map_err(serde::de::Error::custom)
    }
}

/// Element of `Q*/Q*^2`, stored as a sign and the set of primes that
/// divide the squarefree representative.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquareClass {
    negative: bool,
    primes: BTreeSet<u128>,
}

impl SquareClass {
    pub fn one() -> Self {
        SquareClass::default()
    }

    pub fn minus_one() -> Self {
        SquareClass { negative: true, primes: BTreeSet::new() }
    }

    /// Class of a nonzero integer.
    pub fn of_int(n: i64) -> Self {
        square_class(&Rat::from(n)).expect("nonzero integer")
    }

    pub fn is_trivial(&self) -> bool {
        !self.negative && self.primes.is_empty()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn primes(&self) -> &BTreeSet<u128> {
        &self.primes
    }

    pub fn contains_prime(&self, p: u128) -> bool {
        self.primes.contains(&p)
    }

    /// Group law: product of representatives followed by squarefree reduction.
    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        SquareClass {
            negative: self.negative ^ other.negative,
            primes: self.primes.symmetric_difference(&other.primes).copied().collect(),
        }
    }

    /// The squarefree integer representative.
    pub fn rep(&self) -> BigInt {
        let mut r = self.primes.iter().fold(BigInt::one(), |acc, &p| acc * BigInt::from(p));
        if self.negative {
            r = -r;
        }
        r
    }

    pub fn rep_rat(&self) -> Rat {
        Rat::from(self.rep())
    }

    /// Residue of the representative modulo `m`, in `[0, m)`.
    fn rep_mod(&self, m: u128) -> u128 {
        let mut acc = 1 % m;
        for &p in &self.primes {
            acc = mul_mod(acc, p % m, m);
        }
        if self.negative && acc != 0 {
            acc = m - acc;
        }
        acc
    }

    /// Same class with the prime `p` removed: the unit part at `p`.
    fn without(&self, p: u128) -> SquareClass {
        let mut c = self.clone();
        c.primes.remove(&p);
        c
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep())
    }
}

impl Serialize for SquareClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rep = self.rep();
        match rep.to_i64() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&rep.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for SquareClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(i64),
            Str(String),
        }
        let r = match Repr::deserialize(d)? {
            Repr::Num(n) => Rat::from(n),
            Repr::Str(s) => s.parse::<Rat>().map_err(serde::de::Error::custom)?,
        };
        square_class(&r).map_err(serde::de::Error::custom)
    }
}

/// Projection `Q* -> Q*/Q*^2`.
pub fn square_class(r: &Rat) -> Result<SquareClass> {
    if r.is_zero() {
        return Err(Error::Zero("square_class"));
    }
    let mut primes = BTreeSet::new();
    for n in [r.numer(), r.denom()] {
        let fs = factor(n)?;
        let mut i = 0;
        while i < fs.len() {
            let mut j = i;
            while j < fs.len() && fs[j] == fs[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 && !primes.insert(fs[i]) {
                primes.remove(&fs[i]);
            }
            i = j;
        }
    }
    Ok(SquareClass { negative: r.is_negative(), primes })
}

/// Element of `Br_2(Q)` given by its (even) ramification set.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Place>", into = "Vec<Place>")]
pub struct BrClass {
    ramified: BTreeSet<Place>,
}

impl BrClass {
    pub fn zero() -> Self {
        BrClass::default()
    }

    pub fn from_places(places: impl IntoIterator<Item = Place>) -> Result<Self> {
        let mut ramified = BTreeSet::new();
        for p in places {
            if !ramified.insert(p) {
                ramified.remove(&p);
            }
        }
        if ramified.len() % 2 == 1 {
            return Err(Error::Precondition(
                "odd ramification set violates Hilbert reciprocity".into(),
            ));
        }
        Ok(BrClass { ramified })
    }

    pub fn is_zero(&self) -> bool {
        self.ramified.is_empty()
    }

    pub fn places(&self) -> &BTreeSet<Place> {
        &self.ramified
    }

    pub fn contains(&self, v: &Place) -> bool {
        self.ramified.contains(v)
    }

    pub fn add(&self, other: &BrClass) -> BrClass {
        BrClass { ramified: self.ramified.symmetric_difference(&other.ramified).copied().collect() }
    }
}

impl std::iter::Sum for BrClass {
    fn sum<I: Iterator<Item = BrClass>>(iter: I) -> BrClass {
        iter.fold(BrClass::zero(), |acc, x| acc.add(&x))
    }
}

impl fmt::Display for BrClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ramified.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl TryFrom<Vec<Place>> for BrClass {
    type Error = Error;
    fn try_from(v: Vec<Place>) -> Result<Self> {
        BrClass::from_places(v)
    }
}

impl From<BrClass> for Vec<Place> {
    fn from(b: BrClass) -> Self {
        b.ramified.into_iter().collect()
    }
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: u128, n: u128) -> i8 {
    debug_assert!(n % 2 == 1);
    let (mut a, mut n) = (a % n, n);
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Legendre symbol of a `p`-adic unit square class modulo an odd prime.
fn legendre_class(u: &SquareClass, p: u128) -> i8 {
    let r = u.rep_mod(p);
    debug_assert!(r != 0);
    if p < (1 << 62) {
        jacobi(r, p)
    } else if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Local Hilbert symbol of two square classes.
pub fn hilbert_classes(a: &SquareClass, b: &SquareClass, v: Place) -> i8 {
    match v {
        Place::Real => {
            if a.negative && b.negative {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let alpha = a.contains_prime(2) as u32;
            let beta = b.contains_prime(2) as u32;
            let u = a.without(2).rep_mod(8);
            let w = b.without(2).rep_mod(8);
            let eps = |x: u128| ((x % 4) == 3) as u32;
            let omega = |x: u128| (x % 8 == 3 || x % 8 == 5) as u32;
            let e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let alpha = a.contains_prime(p);
            let beta = b.contains_prime(p);
            let mut s = 1i8;
            if alpha && beta && p % 4 == 3 {
                s = -s;
            }
            if beta {
                s *= legendre_class(&a.without(p), p);
            }
            if alpha {
                s *= legendre_class(&b.without(p), p);
            }
            s
        }
    }
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert(a: &Rat, b: &Rat, v: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Zero("hilbert symbol argument"));
    }
    Ok(hilbert_classes(&square_class(a)?, &square_class(b)?, v))
}

/// Places at which a symbol involving the given classes can be nontrivial.
pub fn candidate_places<'a>(classes: impl IntoIterator<Item = &'a SquareClass>) -> BTreeSet<Place> {
    let mut out: BTreeSet<Place> = [Place::Real, Place::Prime(2)].into_iter().collect();
    for c in classes {
        out.extend(c.primes.iter().map(|&p| Place::Prime(p)));
    }
    out
}

/// Cup product `H^1 x H^1 -> H^2`: the quaternion algebra `(x, y)`.
pub fn cup(x: &SquareClass, y: &SquareClass) -> BrClass {
    let ramified = candidate_places([x, y])
        .into_iter()
        .filter(|&v| hilbert_classes(x, y, v) == -1)
        .collect();
    BrClass { ramified }
}
