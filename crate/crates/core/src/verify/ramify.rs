use serde_json::{json, Value};

use super::{Outcome, VerifyConfig};
use crate::exec::par_map;
use crate::ramify::{
    example4_bruteforce, example4_closed_form, final_congruence_check, sweep_configs, woods_hole_identity, SweepBounds,
};

pub fn run(cfg: &VerifyConfig) -> Vec<Outcome> {
    let mut out = ramify_sweep_checks(cfg, SweepBounds { max_group_order: cfg.bounds.max_group_order, max_f: 3 });
    out.extend(woods_hole_checks(30));
    out
}

/// Closed form against brute force on every sweep config, the mod 2
/// congruence per config and over all configs at once, and the value
/// for the regular `C3` config.
pub fn ramify_sweep_checks(_cfg: &VerifyConfig, bounds: SweepBounds) -> Vec<Outcome> {
    let cfgs = sweep_configs(bounds);
    let mut out = par_map(&cfgs, |c| {
        let input = || serde_json::to_value(c.to_record()).expect("record serializes");
        let both = (|| Ok(example4_closed_form(c)? == example4_bruteforce(c)?))();
        vec![
            Outcome::new("ramify.closed_form_equals_bruteforce", c.label(), both, input),
            Outcome::new("ramify.final_congruence", c.label(), final_congruence_check(std::slice::from_ref(c)), input),
        ]
    })
    .concat();
    out.push(Outcome::new("ramify.final_congruence_all", "sweep", final_congruence_check(&cfgs), || {
        json!({ "configs": cfgs.len() })
    }));
    if let Some(c3) = cfgs.iter().find(|c| c.label() == "C3 D1 I1 H0") {
        let v = (|| Ok(example4_closed_form(c3)? == 1 && example4_bruteforce(c3)? == 1))();
        out.push(Outcome::new("ramify.c3_value", c3.label(), v, || serde_json::to_value(c3.to_record()).expect("record")));
    }
    out
}

/// The identity for every `2 <= e <= max_e` and every primitive root.
pub fn woods_hole_checks(max_e: usize) -> Vec<Outcome> {
    let cases: Vec<(usize, usize)> =
        (2..=max_e).flat_map(|e| (1..e).filter(move |&j| num_integer::gcd(j, e) == 1).map(move |j| (e, j))).collect();
    par_map(&cases, |&(e, j)| {
        Outcome::new("ramify.woods_hole", &format!("e{e:02}-zeta{j:02}"), woods_hole_identity(e, j), || {
            json!({ "e": e, "exponent": j })
        })
    })
    .into_iter()
    .chain(std::iter::once(Outcome::new("ramify.woods_hole_rejects_nonprimitive", "e09-zeta03", Ok(woods_hole_identity(9, 3).is_err()), || Value::Null)))
    .collect()
}
