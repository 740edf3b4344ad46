//! JSON documents for towers.
//!
//! ```text
//! { "stages":  [ {"facets": [...]} | <complex document>, ... ],
//!   "bonding": [ {"carrier": [{"simplex": [..], "facets": [[..]], "choice": v}, ...]}
//!              | {"vertex_map": {"0": 1, ...}}
//!              | {"chain_map": {"0": <matrix>, ...}}, ... ],
//!   "tail": "stationary" | "finite" | null,
//!   "subcomplexes": [ {"facets": [...]}, ... ] }
//! ```
//!
//! `bonding[m]` goes from stage `m + 1` to stage `m`. With a stationary
//! tail there is one bonding entry per stage and the last one is an
//! endomorphism of the last stage. `subcomplexes` turns a simplicial tower
//! into a tower of pairs.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{SimplicialBond, SimplicialTower, Tail, Tower};
use crate::complexes::{ChainMap, FreeComplex};
use crate::error::{parse_err, Result};
use crate::intlat::IntMatrix;
use crate::simplicial::{Carrier, CarrierKind, SimplicialComplex};

#[derive(Clone, Debug)]
pub enum TowerInput {
    Simplicial {
        tower: SimplicialTower,
        subs: Option<Vec<SimplicialComplex>>,
    },
    Chain(Tower),
}

impl TowerInput {
    pub fn chain_tower(&self) -> Result<Tower> {
        match self {
            TowerInput::Simplicial { tower, .. } => tower.chain_tower(),
            TowerInput::Chain(t) => Ok(t.clone()),
        }
    }
}

fn parse_tail(v: Option<&Value>) -> Result<Tail> {
    let kind = match v {
        None | Some(Value::Null) => return Ok(Tail::Finite),
        Some(Value::String(s)) => s.as_str(),
        Some(Value::Object(o)) => o
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| parse_err("tail.kind", "expected a string"))?,
        Some(_) => return Err(parse_err("tail", "expected \"stationary\", \"finite\" or null")),
    };
    match kind {
        "stationary" => Ok(Tail::Stationary),
        "finite" => Ok(Tail::Finite),
        other => Err(parse_err("tail", format!("unknown tail kind {other:?}"))),
    }
}

fn parse_simplex(v: &Value, key: &str) -> Result<Vec<i64>> {
    let arr = v.as_array().ok_or_else(|| parse_err(key, "expected an array of vertices"))?;
    let mut s = arr
        .iter()
        .enumerate()
        .map(|(j, x)| {
            x.as_i64()
                .ok_or_else(|| parse_err(format!("{key}[{j}]"), "vertex must be an integer"))
        })
        .collect::<Result<Vec<_>>>()?;
    s.sort_unstable();
    s.dedup();
    Ok(s)
}

fn parse_carrier(v: &Value, key: &str, source: &SimplicialComplex, target: &SimplicialComplex) -> Result<Carrier> {
    let entries = v.as_array().ok_or_else(|| parse_err(key, "expected an array of entries"))?;
    let mut values = BTreeMap::new();
    let mut choice = BTreeMap::new();
    for (i, e) in entries.iter().enumerate() {
        let ek = format!("{key}[{i}]");
        let s = parse_simplex(
            e.get("simplex").ok_or_else(|| parse_err(format!("{ek}.simplex"), "missing"))?,
            &format!("{ek}.simplex"),
        )?;
        let value = SimplicialComplex::from_json_keyed(e, &format!("{ek}.facets"))?;
        if let Some(w) = e.get("choice") {
            let w = w
                .as_i64()
                .ok_or_else(|| parse_err(format!("{ek}.choice"), "expected a vertex"))?;
            choice.insert(s.clone(), w);
        }
        values.insert(s, value);
    }
    let res = if choice.is_empty() {
        Carrier::general(source, target, values)
    } else {
        Carrier::star(source, target, values, choice)
    };
    res.map_err(|e| parse_err(key, e.to_string()))
}

fn parse_chain_map(v: &Value, key: &str, source: &FreeComplex, target: &FreeComplex) -> Result<ChainMap> {
    let obj = v.as_object().ok_or_else(|| parse_err(key, "expected an object of degree: matrix"))?;
    let mut blocks = BTreeMap::new();
    for (k, m) in obj {
        let bk = format!("{key}.{k}");
        let n: i64 = k.parse().map_err(|_| parse_err(&bk, "degree must be an integer"))?;
        blocks.insert(n, IntMatrix::from_json(m, &bk, Some((target.rank(n), source.rank(n))))?);
    }
    ChainMap::new(source.clone(), target.clone(), blocks).map_err(|e| parse_err(key, e.to_string()))
}

/// Parses a tower document.
pub fn parse_tower(v: &Value) -> Result<TowerInput> {
    let stages_v = v
        .get("stages")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("stages", "expected a nonempty array"))?;
    if stages_v.is_empty() {
        return Err(parse_err("stages", "expected a nonempty array"));
    }
    let tail = parse_tail(v.get("tail"))?;
    let bonding_v = match v.get("bonding") {
        None | Some(Value::Null) => Vec::new(),
        Some(b) => b
            .as_array()
            .ok_or_else(|| parse_err("bonding", "expected an array"))?
            .clone(),
    };
    let want = match tail {
        Tail::Finite => stages_v.len() - 1,
        Tail::Stationary => stages_v.len(),
    };
    if bonding_v.len() != want {
        return Err(parse_err(
            "bonding",
            format!("{} stages need {want} bonding entries, found {}", stages_v.len(), bonding_v.len()),
        ));
    }
    let last = stages_v.len() - 1;
    let simplicial = stages_v[0].get("facets").is_some();
    if simplicial {
        let stages = stages_v
            .iter()
            .enumerate()
            .map(|(m, s)| SimplicialComplex::from_json_keyed(s, &format!("stages[{m}].facets")))
            .collect::<Result<Vec<_>>>()?;
        let chains: Vec<FreeComplex> = stages.iter().map(SimplicialComplex::chain_complex).collect();
        let mut bonding = Vec::with_capacity(want);
        for (m, b) in bonding_v.iter().enumerate() {
            let up = (m + 1).min(last);
            let key = format!("bonding[{m}]");
            let bond = if let Some(c) = b.get("carrier") {
                SimplicialBond::Carrier(parse_carrier(c, &format!("{key}.carrier"), &stages[up], &stages[m])?)
            } else if let Some(vm) = b.get("vertex_map") {
                let mk = format!("{key}.vertex_map");
                let obj = vm.as_object().ok_or_else(|| parse_err(&mk, "expected an object"))?;
                let mut map = BTreeMap::new();
                for (k, x) in obj {
                    let a: i64 = k
                        .parse()
                        .map_err(|_| parse_err(format!("{mk}.{k}"), "vertex must be an integer"))?;
                    let b = x
                        .as_i64()
                        .ok_or_else(|| parse_err(format!("{mk}.{k}"), "vertex must be an integer"))?;
                    map.insert(a, b);
                }
                SimplicialBond::Carrier(
                    Carrier::from_vertex_map(&stages[up], &stages[m], &map).map_err(|e| parse_err(&mk, e.to_string()))?,
                )
            } else if let Some(cm) = b.get("chain_map") {
                SimplicialBond::ChainMap(parse_chain_map(cm, &format!("{key}.chain_map"), &chains[up], &chains[m])?)
            } else {
                return Err(parse_err(key, "expected \"carrier\", \"vertex_map\" or \"chain_map\""));
            };
            bonding.push(bond);
        }
        let subs = match v.get("subcomplexes") {
            None | Some(Value::Null) => None,
            Some(s) => {
                let arr = s
                    .as_array()
                    .ok_or_else(|| parse_err("subcomplexes", "expected an array"))?;
                if arr.len() != stages.len() {
                    return Err(parse_err("subcomplexes", "expected one subcomplex per stage"));
                }
                let subs = arr
                    .iter()
                    .enumerate()
                    .map(|(m, s)| SimplicialComplex::from_json_keyed(s, &format!("subcomplexes[{m}].facets")))
                    .collect::<Result<Vec<_>>>()?;
                for (m, s) in subs.iter().enumerate() {
                    if !s.is_subcomplex_of(&stages[m]) {
                        return Err(parse_err(format!("subcomplexes[{m}]"), "not a subcomplex of its stage"));
                    }
                }
                Some(subs)
            }
        };
        let tower = SimplicialTower { stages, bonding, tail };
        tower.chain_tower().map_err(|e| parse_err("bonding", e.to_string()))?;
        Ok(TowerInput::Simplicial { tower, subs })
    } else {
        let stages = stages_v
            .iter()
            .enumerate()
            .map(|(m, s)| FreeComplex::from_json_keyed(s, &format!("stages[{m}]")))
            .collect::<Result<Vec<_>>>()?;
        let mut bonding = Vec::with_capacity(want);
        for (m, b) in bonding_v.iter().enumerate() {
            let up = (m + 1).min(last);
            let key = format!("bonding[{m}].chain_map");
            let cm = b.get("chain_map").ok_or_else(|| parse_err(&key, "missing"))?;
            bonding.push(parse_chain_map(cm, &key, &stages[up], &stages[m])?);
        }
        let t = Tower::new(stages, bonding, tail).map_err(|e| parse_err("stages", e.to_string()))?;
        Ok(TowerInput::Chain(t))
    }
}

pub fn carrier_to_json(c: &Carrier) -> Value {
    let entries: Vec<Value> = c
        .source()
        .all_simplices()
        .map(|s| {
            let mut e = Map::new();
            e.insert("simplex".into(), json!(s));
            e.insert("facets".into(), json!(c.value(s).expect("total carrier").facets()));
            if c.kind() != CarrierKind::General {
                if let Some(w) = c.choice(s) {
                    e.insert("choice".into(), json!(w));
                }
            }
            Value::Object(e)
        })
        .collect();
    json!({ "carrier": entries })
}

fn chain_map_to_json(f: &ChainMap) -> Value {
    let mut blocks = Map::new();
    for n in f.source().degrees() {
        let b = f.block(n);
        if !b.is_zero() {
            blocks.insert(n.to_string(), b.to_json());
        }
    }
    json!({ "chain_map": blocks })
}

fn tail_json(t: Tail) -> Value {
    match t {
        Tail::Finite => Value::Null,
        Tail::Stationary => json!("stationary"),
    }
}

pub fn tower_to_json(t: &TowerInput) -> Value {
    match t {
        TowerInput::Simplicial { tower, subs } => {
            let mut v = json!({
                "stages": tower.stages.iter().map(SimplicialComplex::to_json).collect::<Vec<_>>(),
                "bonding": tower.bonding.iter().map(|b| match b {
                    SimplicialBond::Carrier(c) => carrier_to_json(c),
                    SimplicialBond::ChainMap(f) => chain_map_to_json(f),
                }).collect::<Vec<_>>(),
                "tail": tail_json(tower.tail),
            });
            if let Some(subs) = subs {
                v["subcomplexes"] = json!(subs.iter().map(SimplicialComplex::to_json).collect::<Vec<_>>());
            }
            v
        }
        TowerInput::Chain(t) => json!({
            "stages": t.stages.iter().map(FreeComplex::to_json).collect::<Vec<_>>(),
            "bonding": t.bonding.iter().map(chain_map_to_json).collect::<Vec<_>>(),
            "tail": tail_json(t.tail),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_bonding_names_the_key() {
        let v = json!({"stages": [{"facets": [[0, 1]]}, {"facets": [[0, 1]]}], "bonding": []});
        match parse_tower(&v) {
            Err(crate::error::Error::Parse { key, .. }) => assert_eq!(key, "bonding"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn vertex_map_round_trip() {
        let v = json!({
            "stages": [{"facets": [[0, 1], [1, 2], [0, 2]]}],
            "bonding": [{"vertex_map": {"0": 1, "1": 2, "2": 0}}],
            "tail": "stationary",
        });
        let t = parse_tower(&v).unwrap();
        let back = parse_tower(&tower_to_json(&t)).unwrap();
        assert_eq!(tower_to_json(&t), tower_to_json(&back));
    }
}
