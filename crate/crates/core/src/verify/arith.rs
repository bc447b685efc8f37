use rand::Rng;
use serde_json::json;

use super::{Outcome, VerifyConfig};
use crate::arith::{candidate_places, cup, hilbert, hilbert_classes, square_class, Place, Rat, SquareClass};
use crate::error::Result;
use crate::exec::par_map;

fn nonzero(rng: &mut impl Rng, bound: i64) -> i64 {
    loop {
        let x = rng.gen_range(-bound..=bound);
        if x != 0 {
            return x;
        }
    }
}

pub fn run(cfg: &VerifyConfig) -> Vec<Outcome> {
    hilbert_pair_checks(cfg, cfg.samples.hilbert_pairs)
}

/// Symbol laws on `n` random pairs with entries bounded by `10^4`.
pub fn hilbert_pair_checks(cfg: &VerifyConfig, n: usize) -> Vec<Outcome> {
    let mut rng = cfg.rng(1);
    let cases: Vec<(usize, [i64; 4])> = (0..n)
        .map(|i| (i, [nonzero(&mut rng, 10_000), nonzero(&mut rng, 10_000), nonzero(&mut rng, 10_000), rng.gen_range(1..=50)]))
        .collect();
    par_map(&cases, |(i, c)| pair_case(*i, *c)).concat()
}

fn pair_case(i: usize, [a, b, c, s]: [i64; 4]) -> Vec<Outcome> {
    let label = format!("pair-{i:04}");
    let input = || json!({ "a": a, "b": b, "c": c, "s": s });
    let (ca, cb, cc) = (SquareClass::of_int(a), SquareClass::of_int(b), SquareClass::of_int(c));
    let mut places = candidate_places([&ca, &cb, &cc]);
    places.insert(Place::Real);
    places.insert(Place::Prime(2));
    let h = |x: &SquareClass, y: &SquareClass, v: Place| hilbert_classes(x, y, v);
    let ac = ca.mul(&cc);
    let r = Rat::from;

    let symmetry = places.iter().all(|&v| h(&ca, &cb, v) == h(&cb, &ca, v));
    let squares: Result<bool> = places
        .iter()
        .map(|&v| Ok(hilbert(&r(a * s * s), &r(b), v)? == hilbert(&r(a), &r(b), v)?))
        .try_fold(true, |acc, x: Result<bool>| Ok(acc && x?));
    let bimult = places.iter().all(|&v| h(&ac, &cb, v) == h(&ca, &cb, v) * h(&cc, &cb, v));
    let minus: Vec<Place> = places.iter().copied().filter(|&v| h(&ca, &cb, v) == -1).collect();
    let x = cup(&ca, &cb);
    let reciprocity = minus.len() % 2 == 0 && x.places().iter().copied().eq(minus.iter().copied());
    let hom = square_class(&(r(a) * r(b))).map(|p| p == ca.mul(&cb));
    let hom_q = square_class(&(r(a) / r(c))).map(|p| p == ca.mul(&cc));
    vec![
        Outcome::new("arith.hilbert_symmetry", &label, Ok(symmetry), input),
        Outcome::new("arith.hilbert_square_invariance", &label, squares, input),
        Outcome::new("arith.hilbert_bimultiplicative", &label, Ok(bimult), input),
        Outcome::new("arith.hilbert_reciprocity", &label, Ok(reciprocity), input),
        Outcome::new("arith.square_class_homomorphism", &label, hom.and_then(|x| Ok(x && hom_q?)), input),
        Outcome::new("arith.brclass_involution", &label, Ok(x.add(&x).is_zero()), input),
    ]
}
