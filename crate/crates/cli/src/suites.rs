//! Self-checking randomized suites behind `uct verify`.

use serde_json::{json, Value};
use uctkit::abgroups::{ext_group, tensor_group, tor_group, FgAbGroup};
use uctkit::complexes::connecting_homomorphism_with;
use uctkit::extuct::{cocycle_space, naturality_check, uct_report};
use uctkit::proind::{asymptotic_witness, duality_check, holim, witness_holds, Tower};
use uctkit::random::{self, SeededRng};
use uctkit::Result;

pub const SUITES: &[&str] = &["uct-random", "simplicial-random", "naturality", "holim", "ext-cocycles"];

pub fn coefficients() -> Vec<FgAbGroup> {
    ["Z", "Z/2", "Z/4", "Z/6", "Z^2+Z/2"]
        .iter()
        .map(|s| FgAbGroup::parse(s).expect("built-in coefficient"))
        .collect()
}

fn uct_item(rng: &mut SeededRng, g: &FgAbGroup) -> Result<bool> {
    let a = random::cochain_complex(rng, 4, 4, 3);
    for n in a.lo() - 1..=a.hi() + 1 {
        let r = uct_report(&a, g, n)?;
        if !r.verdicts.all() || !r.middle_is_sum {
            return Ok(false);
        }
    }
    Ok(true)
}

fn simplicial_item(rng: &mut SeededRng, g: &FgAbGroup) -> Result<bool> {
    let k = random::simplicial_complex(rng, 8, 3, 6);
    let c = k.chain_complex();
    for n in 0..=k.dim() + 1 {
        let direct = c.with_coeff(g).homology_group(n);
        let r = uct_report(&c.transpose(), g, n)?;
        let split = r.ext_part.direct_sum(&r.hom_part);
        let tor = tensor_group(&c.homology(n).group, g).direct_sum(&tor_group(&c.homology(n - 1).group, g));
        if direct != split || direct != tor || direct != r.middle {
            return Ok(false);
        }
    }
    Ok(true)
}

fn naturality_item(rng: &mut SeededRng, g: &FgAbGroup) -> Result<bool> {
    let s = random::cochain_ses(rng, 4, 2, 2);
    let alt = s.with_alternative_sections(&random::section_change(rng, &s, 3))?;
    for n in s.degrees() {
        if !naturality_check(&s, g, n)?.holds() {
            return Ok(false);
        }
        if connecting_homomorphism_with(&s, g, n)? != connecting_homomorphism_with(&alt, g, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn holim_item(rng: &mut SeededRng, window: usize) -> Result<bool> {
    let z4 = FgAbGroup::cyclic(4);
    let t = random::tower(rng, window, 3);
    let h = holim(&t, 4)?;
    for n in h.lo()..=h.hi() + 1 {
        if !h.differential(n - 1).mul(&h.differential(n)).is_zero() {
            return Ok(false);
        }
    }
    if !duality_check(&random::ind_sequence(rng, window, 3), &z4, window)? {
        return Ok(false);
    }
    witness_item(rng, &t, &z4)
}

/// `z = d u` for a random `u` lies in the kernel of Local; the witness must
/// reproduce it.
pub fn witness_item(rng: &mut SeededRng, t: &Tower, g: &FgAbGroup) -> Result<bool> {
    let depth = t.clamp(4);
    let h = holim(t, depth)?.with_coeff(g);
    for n in h.base().lo()..=h.base().hi() {
        let u = random::matrix(rng, h.dim(n + 1), 1, 3).col(0);
        let z = h.differential(n + 1).mul_vec(&u);
        let w = asymptotic_witness(t, g, depth, n, &z, depth)?;
        if !witness_holds(t, g, depth, n, &z, &w, depth)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ext_cocycle_groups() -> Vec<FgAbGroup> {
    ["Z/2", "Z/3", "Z/4", "Z/2+Z/2"]
        .iter()
        .map(|s| FgAbGroup::parse(s).expect("built-in group"))
        .collect()
}

fn ext_cocycles() -> Result<(usize, Vec<usize>)> {
    let mut failures = Vec::new();
    let mut i = 0;
    for a in ext_cocycle_groups() {
        for g in ext_cocycle_groups() {
            if cocycle_space(&a, &g, 16)?.ext() != &ext_group(&a, &g) {
                failures.push(i);
            }
            i += 1;
        }
    }
    Ok((i, failures))
}

/// Runs `count` items of `suite`, returning the JSON summary.
pub fn run(suite: &str, seed: u64, count: usize) -> Result<Value> {
    let gs = coefficients();
    let mut rng = random::rng(seed);
    let (total, failures) = if suite == "ext-cocycles" {
        ext_cocycles()?
    } else {
        let mut failures = Vec::new();
        for i in 0..count {
            let g = &gs[i % gs.len()];
            let ok = match suite {
                "uct-random" => uct_item(&mut rng, g)?,
                "simplicial-random" => simplicial_item(&mut rng, g)?,
                "naturality" => naturality_item(&mut rng, g)?,
                "holim" => holim_item(&mut rng, 1 + i % 4)?,
                _ => unreachable!("suite names are checked by the caller"),
            };
            if !ok {
                failures.push(i);
            }
        }
        (count, failures)
    };
    Ok(json!({
        "suite": suite,
        "seed": seed,
        "count": total,
        "passed": total - failures.len(),
        "failures": failures,
    }))
}
