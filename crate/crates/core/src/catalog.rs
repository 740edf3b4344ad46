//! Canned triangulations, towers and cofiltrations.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::complexes::ChainMap;
use crate::error::{Error, Result};
use crate::intlat::IntMatrix;
use crate::proind::{tower_to_json, SimplicialBond, SimplicialTower, Tail, TowerInput};
use crate::simplicial::{Carrier, SimplicialComplex};

pub const NAMES: &[&str] = &["solenoid-p", "sphere-n", "torus", "klein", "rp2", "delta-pair", "wedge-chain"];

/// `∂Δ^{n+1}`.
pub fn sphere(n: usize) -> SimplicialComplex {
    let v: Vec<i64> = (0..=n as i64 + 1).collect();
    SimplicialComplex::simplex_boundary(&v)
}

/// The 7-vertex torus.
pub fn torus() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::from_facets(&facets)
}

/// A 3×3 grid with the horizontal sides glued straight and the vertical
/// sides glued with a flip.
pub fn klein() -> SimplicialComplex {
    let n = 3i64;
    let v = |i: i64, j: i64| -> i64 {
        let (i, j) = if j == n { ((n - i).rem_euclid(n), 0) } else { (i, j) };
        (i % n) * n + j
    };
    let mut facets = Vec::new();
    for i in 0..n {
        for j in 0..n {
            facets.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
            facets.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
        }
    }
    SimplicialComplex::from_facets(&facets)
}

/// The 6-vertex projective plane.
pub fn rp2() -> SimplicialComplex {
    SimplicialComplex::from_facets(&[
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 5],
        vec![0, 1, 5],
        vec![1, 2, 4],
        vec![2, 3, 5],
        vec![1, 3, 4],
        vec![2, 4, 5],
        vec![1, 3, 5],
    ])
}

/// A triangle boundary on vertices `0, 1, 2`.
pub fn circle() -> SimplicialComplex {
    sphere(1)
}

/// The degree-two star carrier on the triangle circle: `i ↦ 2i`, the edge
/// `[i, i+1]` going to the star of `2i + 1`.
pub fn doubling_carrier() -> Carrier {
    let c = circle();
    let mut values = BTreeMap::new();
    let mut choice = BTreeMap::new();
    for i in 0..3i64 {
        values.insert(vec![i], SimplicialComplex::simplex(&[(2 * i) % 3]));
        choice.insert(vec![i], (2 * i) % 3);
        let mut e = vec![i, (i + 1) % 3];
        e.sort_unstable();
        let w = (2 * i + 1) % 3;
        values.insert(e.clone(), c.closed_star(w));
        choice.insert(e, w);
    }
    Carrier::star(&c, &c, values, choice).expect("the doubling carrier is a star carrier")
}

/// Degree `p` on the triangle circle: every vertex to `0`, the edge
/// `[0, 1]` to `p` times the fundamental cycle.
pub fn degree_map(p: i64) -> ChainMap {
    let a = circle().chain_complex();
    // edges in order [0,1], [0,2], [1,2]; the cycle is [0,1] + [1,2] - [0,2]
    let mut f1 = IntMatrix::zeros(3, 3);
    f1.set(0, 0, p.into());
    f1.set(2, 0, p.into());
    f1.set(1, 0, (-p).into());
    let f0 = IntMatrix::from_rows(&[vec![1, 1, 1], vec![0, 0, 0], vec![0, 0, 0]], 3);
    ChainMap::new(a.clone(), a, BTreeMap::from([(0, f0), (1, f1)])).expect("degree map is a chain map")
}

/// The `p`-adic solenoid as a stationary tower of circles.
pub fn solenoid(p: i64) -> SimplicialTower {
    let bond = if p == 2 {
        SimplicialBond::Carrier(doubling_carrier())
    } else {
        SimplicialBond::ChainMap(degree_map(p))
    };
    SimplicialTower {
        stages: vec![circle()],
        bonding: vec![bond],
        tail: Tail::Stationary,
    }
}

/// `(Δ², ∂Δ²)` as a constant tower of pairs.
pub fn delta_pair() -> (SimplicialTower, Vec<SimplicialComplex>) {
    let k = SimplicialComplex::simplex(&[0, 1, 2]);
    let t = SimplicialTower {
        stages: vec![k.clone()],
        bonding: vec![SimplicialBond::Carrier(Carrier::identity(&k))],
        tail: Tail::Stationary,
    };
    (t, vec![SimplicialComplex::simplex_boundary(&[0, 1, 2])])
}

/// Stage `m` is a wedge of `m + 1` triangle circles at the vertex `0`.
pub fn wedge_chain(n: usize) -> Vec<SimplicialComplex> {
    let mut facets: Vec<Vec<i64>> = Vec::new();
    let mut out = Vec::with_capacity(n);
    for j in 0..n as i64 {
        let (a, b) = (2 * j + 1, 2 * j + 2);
        facets.extend([vec![0, a], vec![a, b], vec![0, b]]);
        out.push(SimplicialComplex::from_facets(&facets));
    }
    out
}

fn suffix(name: &str, prefix: &str) -> Option<Result<i64>> {
    name.strip_prefix(prefix).map(|s| {
        s.parse::<i64>()
            .map_err(|_| Error::Incompatible(format!("`{name}` needs an integer after `{prefix}`")))
    })
}

/// The canned document for `name`; `solenoid-P` and `sphere-N` take a
/// parameter, `wedge-chain` takes an optional one (default 4).
pub fn document(name: &str) -> Result<Value> {
    if let Some(p) = suffix(name, "solenoid-") {
        let p = p?;
        if p < 1 {
            return Err(Error::Incompatible("the solenoid degree must be positive".into()));
        }
        return Ok(tower_to_json(&TowerInput::Simplicial { tower: solenoid(p), subs: None }));
    }
    if let Some(n) = suffix(name, "sphere-") {
        let n = n?;
        if !(0..=8).contains(&n) {
            return Err(Error::Incompatible("sphere dimension must be in 0..=8".into()));
        }
        return Ok(sphere(n as usize).to_json());
    }
    if let Some(n) = suffix(name, "wedge-chain-") {
        let n = n?;
        if n < 1 {
            return Err(Error::Incompatible("wedge-chain needs at least one circle".into()));
        }
        return Ok(cofiltration_json(&wedge_chain(n as usize)));
    }
    match name {
        "torus" => Ok(torus().to_json()),
        "klein" => Ok(klein().to_json()),
        "rp2" => Ok(rp2().to_json()),
        "delta-pair" => {
            let (tower, subs) = delta_pair();
            Ok(tower_to_json(&TowerInput::Simplicial { tower, subs: Some(subs) }))
        }
        "wedge-chain" => Ok(cofiltration_json(&wedge_chain(4))),
        _ => Err(Error::Incompatible(format!(
            "unknown example `{name}`; known: {}",
            NAMES.join(", ")
        ))),
    }
}

pub fn cofiltration_json(ks: &[SimplicialComplex]) -> Value {
    json!({ "cofiltration": ks.iter().map(SimplicialComplex::to_json).collect::<Vec<_>>() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroups::FgAbGroup;
    use crate::complexes::apply_on_homology;
    use crate::simplicial::chain_map_with_support;

    fn h(k: &SimplicialComplex, n: i64) -> String {
        k.chain_complex().homology(n).group.to_string()
    }

    fn is_closed_surface(k: &SimplicialComplex) -> bool {
        k.simplices(1).iter().all(|e| {
            k.simplices(2)
                .iter()
                .filter(|t| e.iter().all(|v| t.contains(v)))
                .count()
                == 2
        })
    }

    #[test]
    fn surfaces() {
        let t = torus();
        assert_eq!((t.count(0), t.count(1), t.count(2)), (7, 21, 14));
        assert_eq!(t.euler_characteristic(), 0);
        assert!(is_closed_surface(&t));
        assert_eq!(h(&t, 1), "Z^2");
        let k = klein();
        assert_eq!(k.count(2), 18);
        assert!(is_closed_surface(&k));
        assert_eq!(h(&k, 1), FgAbGroup::parse("Z+Z/2").unwrap().to_string());
        assert_eq!(h(&k, 2), "0");
        let r = rp2();
        assert!(is_closed_surface(&r));
        assert_eq!(h(&r, 1), "Z/2");
        assert_eq!(r.euler_characteristic(), 1);
    }

    #[test]
    fn solenoid_bondings_have_degree_p() {
        let f = chain_map_with_support(&doubling_carrier()).unwrap();
        let h1 = apply_on_homology(&f, 1).unwrap();
        assert_eq!(h1.matrix().get(0, 0).magnitude(), &2u32.into());
        let h1 = apply_on_homology(&degree_map(3), 1).unwrap();
        assert_eq!(h1.matrix().get(0, 0).magnitude(), &3u32.into());
    }

    #[test]
    fn wedges() {
        let w = wedge_chain(3);
        assert_eq!(h(&w[2], 1), "Z^3");
        assert!(w[0].is_subcomplex_of(&w[1]));
    }

    #[test]
    fn documents_parse() {
        for name in ["solenoid-2", "solenoid-3", "delta-pair"] {
            crate::proind::parse_tower(&document(name).unwrap()).unwrap();
        }
        for name in ["torus", "klein", "rp2", "sphere-2"] {
            SimplicialComplex::from_json(&document(name).unwrap()).unwrap();
        }
        assert!(document("moebius").is_err());
    }
}
