//! UCT reports for towers of spaces and for polyhedral cofiltrations.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::ml::{injective_tail_limit, ml_analyze, GroupTower, Lim1Status, MlReport};
use super::{SimplicialTower, Tail, Tower};
use crate::abgroups::{ext_morphism, hom_group, hom_morphism, hom_subquotient, ext_subquotient, FgAbGroup, GroupMorphism};
use crate::complexes::{connecting_homomorphism_with, ChainMap, FreeComplex, Orientation};
use crate::error::{Error, Result};
use crate::extuct::{naturality_check, uct_report, UctVerdicts};
use crate::intlat::IntMatrix;
use crate::simplicial::{relative_pair, SimplicialComplex};

/// Stagewise data and limit diagnostics for the UCT sequence of the limit
/// of a tower of spaces in degree `n`.
#[derive(Clone, Debug)]
pub struct SpaceUctReport {
    pub degree: i64,
    pub coeff: FgAbGroup,
    /// `H^n` of each stored stage.
    pub cohomology: Vec<FgAbGroup>,
    /// `H^n(m) → H^n(m+1)`, induced by the bonding maps.
    pub cohomology_maps: Vec<GroupMorphism>,
    /// `H_n(stage; G)`.
    pub homology: Vec<FgAbGroup>,
    /// `lim Hom(H^n(stage), G)`.
    pub hom_part: MlReport,
    /// `lim Ext(H^{n+1}(stage), G)`.
    pub ext_lim: MlReport,
    /// `lim¹ Hom(H^{n+1}(stage), G)`.
    pub lim1_hom: Lim1Status,
    /// `lim H_n(stage; G)`.
    pub weak_part: MlReport,
    /// `lim¹ H_{n+1}(stage; G)`.
    pub asymptotic: Lim1Status,
    pub stage_verdicts: Vec<UctVerdicts>,
    pub stage_middle: Vec<FgAbGroup>,
}

impl SpaceUctReport {
    pub fn asymptotic_flag(&self) -> bool {
        self.asymptotic == Lim1Status::Uncountable
    }

    pub fn verdicts_hold(&self) -> bool {
        self.stage_verdicts.iter().all(UctVerdicts::all)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "coeff": self.coeff.to_string(),
            "stages": {
                "cohomology": groups_json(&self.cohomology),
                "homology": groups_json(&self.homology),
                "middle": groups_json(&self.stage_middle),
                "verdicts": self.stage_verdicts.iter().map(verdicts_json).collect::<Vec<_>>(),
            },
            "hom_part": self.hom_part.to_json(),
            "ext_part": {
                "lim_ext": self.ext_lim.lim.tag(),
                "lim_ext_report": self.ext_lim.to_json(),
                "lim1_hom": self.lim1_hom.tag(),
            },
            "weak_part": self.weak_part.to_json(),
            "asymptotic": self.asymptotic.tag(),
            "asymptotic_flag": self.asymptotic_flag(),
            "verdicts_hold": self.verdicts_hold(),
        })
    }
}

fn groups_json(gs: &[FgAbGroup]) -> Value {
    json!(gs.iter().map(|g| g.to_string()).collect::<Vec<_>>())
}

fn verdicts_json(v: &UctVerdicts) -> Value {
    json!({
        "exact_left": v.exact_left,
        "exact_middle": v.exact_middle,
        "exact_right": v.exact_right,
        "split_ok": v.split_ok,
    })
}

/// `ml_analyze` with the exact limit filled in where the injective-tail
/// argument applies.
fn analyze(t: &GroupTower, window: usize) -> MlReport {
    let mut r = ml_analyze(t, window);
    r.lim = injective_tail_limit(t, &r);
    r
}

fn group_tower(
    t: &Tower,
    group: impl Fn(&FreeComplex) -> Result<FgAbGroup>,
    map: impl Fn(&ChainMap) -> Result<GroupMorphism>,
) -> Result<GroupTower> {
    let groups = t.stages.iter().map(group).collect::<Result<Vec<_>>>()?;
    let maps = t.bonding.iter().map(map).collect::<Result<Vec<_>>>()?;
    GroupTower::new(groups, maps, t.tail)
}

fn window_of(t: &Tower, depth: usize) -> Tower {
    match t.tail {
        Tail::Finite => t.truncated(depth),
        Tail::Stationary => t.clone(),
    }
}

fn cohomology_map(p: &ChainMap, n: i64) -> Result<GroupMorphism> {
    p.transpose().on_homology(&FgAbGroup::integers(), n)
}

/// The UCT report for the limit of a tower of spaces, from the chain
/// complexes of the stages and the bonding chain maps.
pub fn space_uct_report(t: &Tower, g: &FgAbGroup, n: i64, depth: usize) -> Result<SpaceUctReport> {
    let t = window_of(t, depth);
    let h = |k: i64| move |a: &FreeComplex| Ok(a.transpose().homology(k).group);
    let cohom = group_tower(&t, h(n), |p| cohomology_map(p, n))?;
    let hom_tower = group_tower(
        &t,
        |a| Ok(hom_subquotient(&a.transpose().homology(n).group, g).group().clone()),
        |p| Ok(hom_morphism(&cohomology_map(p, n)?, g)),
    )?;
    let ext_tower = group_tower(
        &t,
        |a| Ok(ext_subquotient(&a.transpose().homology(n + 1).group, g).group().clone()),
        |p| Ok(ext_morphism(&cohomology_map(p, n + 1)?, g)),
    )?;
    let hom_next = group_tower(
        &t,
        |a| Ok(hom_subquotient(&a.transpose().homology(n + 1).group, g).group().clone()),
        |p| Ok(hom_morphism(&cohomology_map(p, n + 1)?, g)),
    )?;
    let weak = group_tower(&t, |a| Ok(a.with_coeff(g).homology(n).group), |p| p.on_homology(g, n))?;
    let next = group_tower(&t, |a| Ok(a.with_coeff(g).homology(n + 1).group), |p| {
        p.on_homology(g, n + 1)
    })?;

    let mut stage_verdicts = Vec::new();
    let mut stage_middle = Vec::new();
    for a in &t.stages {
        let r = uct_report(&a.transpose(), g, n)?;
        stage_verdicts.push(r.verdicts);
        stage_middle.push(r.middle);
    }
    Ok(SpaceUctReport {
        degree: n,
        coeff: g.clone(),
        cohomology: t.stages.iter().map(|a| a.transpose().homology(n).group).collect(),
        cohomology_maps: (0..t.bonding.len()).map(|m| cohom.map(m).clone()).collect(),
        homology: t.stages.iter().map(|a| a.with_coeff(g).homology(n).group).collect(),
        hom_part: analyze(&hom_tower, depth),
        ext_lim: analyze(&ext_tower, depth),
        lim1_hom: ml_analyze(&hom_next, depth).lim1,
        weak_part: analyze(&weak, depth),
        asymptotic: ml_analyze(&next, depth).lim1,
        stage_verdicts,
        stage_middle,
    })
}

/// One stage `(K_m, K'_m)` of a pair tower.
#[derive(Clone, Debug)]
pub struct PairStage {
    /// `H_n(K, K'; G)`.
    pub relative: FgAbGroup,
    /// `H_n(K, K'; G) → H_{n-1}(K'; G)`.
    pub connecting: GroupMorphism,
    pub connecting_iso: bool,
    /// Index and coIndex commute with the connecting maps in every degree.
    pub naturality: bool,
}

/// Stagewise connecting-map data for a tower of pairs, with the limit of
/// the relative homology groups. The identification of the limit groups
/// with those of the limit pair is not attempted.
#[derive(Clone, Debug)]
pub struct PairSpaceReport {
    pub degree: i64,
    pub coeff: FgAbGroup,
    pub stages: Vec<PairStage>,
    /// `lim H_n(K_m, K'_m; G)`.
    pub relative_lim: MlReport,
}

impl PairSpaceReport {
    pub fn verdicts_hold(&self) -> bool {
        self.stages.iter().all(|s| s.naturality)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "coeff": self.coeff.to_string(),
            "stages": self.stages.iter().map(|s| json!({
                "relative": s.relative.to_string(),
                "connecting_iso": s.connecting_iso,
                "naturality": s.naturality,
            })).collect::<Vec<_>>(),
            "relative_lim": self.relative_lim.to_json(),
            "verdicts_hold": self.verdicts_hold(),
        })
    }
}

/// Indices of the simplices of `k` outside `sub`, degree by degree.
fn relative_indices(k: &SimplicialComplex, sub: &SimplicialComplex) -> Vec<Vec<usize>> {
    (0..=k.dim().max(0))
        .map(|d| {
            k.simplices(d)
                .iter()
                .enumerate()
                .filter(|(_, s)| !sub.contains(s))
                .map(|(i, _)| i)
                .collect()
        })
        .collect()
}

/// The map of relative chains induced by `f: C(K) → C(L)` sending `C(K')`
/// into `C(L')`.
fn relative_map(
    f: &ChainMap,
    (k, k_sub): (&SimplicialComplex, &SimplicialComplex),
    (l, l_sub): (&SimplicialComplex, &SimplicialComplex),
    source: &FreeComplex,
    target: &FreeComplex,
) -> Result<ChainMap> {
    let (rk, rl) = (relative_indices(k, k_sub), relative_indices(l, l_sub));
    let mut blocks = BTreeMap::new();
    for d in 0..=k.dim().max(0) {
        let b = f.block(d);
        let du = d as usize;
        let sub_cols: Vec<usize> = (0..k.count(d)).filter(|i| !rk[du].contains(i)).collect();
        let rows = rl.get(du).cloned().unwrap_or_default();
        if !b.select_rows(&rows).select_columns(&sub_cols).is_zero() {
            return Err(Error::NotSubcomplex(format!(
                "the bonding map does not carry the subcomplex into the subcomplex in degree {d}"
            )));
        }
        blocks.insert(d, b.select_rows(&rows).select_columns(&rk[du]));
    }
    ChainMap::new(source.clone(), target.clone(), blocks)
}

/// Per-stage connecting maps and naturality for a tower of pairs
/// `(K_m, K'_m)`; `subs[m]` is the subcomplex of `t.stages[m]`.
pub fn pair_space_uct_report(
    t: &SimplicialTower,
    subs: &[SimplicialComplex],
    g: &FgAbGroup,
    n: i64,
    depth: usize,
) -> Result<PairSpaceReport> {
    if subs.len() != t.stages.len() {
        return Err(Error::Incompatible(format!(
            "{} stages but {} subcomplexes",
            t.stages.len(),
            subs.len()
        )));
    }
    let chains = t.chain_tower()?;
    let keep = match t.tail {
        Tail::Finite => depth.min(t.stages.len() - 1) + 1,
        Tail::Stationary => t.stages.len(),
    };
    let mut sess = Vec::with_capacity(keep);
    let mut stages = Vec::with_capacity(keep);
    for (stage, sub) in t.stages.iter().zip(subs).take(keep) {
        let s = relative_pair(stage, sub)?;
        let connecting = connecting_homomorphism_with(&s, g, n)?;
        let dual = s.transpose();
        let mut naturality = true;
        for d in 0..=stage.dim().max(0) + 1 {
            naturality &= naturality_check(&dual, g, d)?.holds();
        }
        stages.push(PairStage {
            relative: s.c().with_coeff(g).homology(n).group,
            connecting_iso: connecting.is_isomorphism(),
            connecting,
            naturality,
        });
        sess.push(s);
    }
    let bonds = match t.tail {
        Tail::Finite => keep - 1,
        Tail::Stationary => keep,
    };
    let mut maps = Vec::with_capacity(bonds);
    for m in 0..bonds {
        let up = (m + 1).min(keep - 1);
        let f = relative_map(
            chains.bonding(m),
            (&t.stages[up], &subs[up]),
            (&t.stages[m], &subs[m]),
            sess[up].c(),
            sess[m].c(),
        )?;
        maps.push(f.on_homology(g, n)?);
    }
    let rel = GroupTower::new(stages.iter().map(|s| s.relative.clone()).collect(), maps, t.tail)?;
    Ok(PairSpaceReport {
        degree: n,
        coeff: g.clone(),
        stages,
        relative_lim: analyze(&rel, depth),
    })
}

/// The cohomology UCT for the colimit of an increasing sequence of finite
/// complexes (or pairs) in degree `n`.
#[derive(Clone, Debug)]
pub struct PolyhedronReport {
    pub degree: i64,
    pub coeff: FgAbGroup,
    /// `H_n(K_m)`.
    pub homology: Vec<FgAbGroup>,
    /// `H_n` of the window colimit, the last stage.
    pub colim: FgAbGroup,
    /// The last inclusion induces an isomorphism on `H_n`.
    pub stabilized: bool,
    /// `Hom(colim H_n, G)`.
    pub hom_part: FgAbGroup,
    /// `lim Ext(H_{n-1}(K_m), G)`.
    pub ext_lim: MlReport,
    /// `lim¹ Hom(H_{n-1}(K_m), G)`.
    pub lim1_hom: Lim1Status,
    /// `H^n(K_m; G)`.
    pub stage_middle: Vec<FgAbGroup>,
    pub stage_verdicts: Vec<UctVerdicts>,
}

impl PolyhedronReport {
    pub fn verdicts_hold(&self) -> bool {
        self.stage_verdicts.iter().all(UctVerdicts::all)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "coeff": self.coeff.to_string(),
            "stages": {
                "homology": groups_json(&self.homology),
                "middle": groups_json(&self.stage_middle),
                "verdicts": self.stage_verdicts.iter().map(verdicts_json).collect::<Vec<_>>(),
            },
            "colim": self.colim.to_string(),
            "stabilized": self.stabilized,
            "hom_part": self.hom_part.to_string(),
            "ext_part": {
                "lim_ext": self.ext_lim.lim.tag(),
                "lim_ext_report": self.ext_lim.to_json(),
                "lim1_hom": self.lim1_hom.tag(),
            },
            "verdicts_hold": self.verdicts_hold(),
        })
    }
}

/// `C(K) → C(L)` for a subcomplex `K ⊆ L`.
fn inclusion(k: &SimplicialComplex, l: &SimplicialComplex, ck: &FreeComplex, cl: &FreeComplex) -> Result<ChainMap> {
    let mut blocks = BTreeMap::new();
    for d in 0..=k.dim().max(0) {
        let mut b = IntMatrix::zeros(l.count(d), k.count(d));
        for (j, s) in k.simplices(d).iter().enumerate() {
            let i = l
                .index_of(s)
                .ok_or_else(|| Error::NotSubcomplex(format!("simplex {s:?} is missing from the next stage")))?;
            b.set(i, j, 1.into());
        }
        blocks.insert(d, b);
    }
    ChainMap::new(ck.clone(), cl.clone(), blocks)
}

/// The report for `X = ∪ K_m`, optionally relative to `X' = ∪ K'_m`.
pub fn polyhedron_uct_report(
    cofiltration: &[SimplicialComplex],
    subs: Option<&[SimplicialComplex]>,
    g: &FgAbGroup,
    n: i64,
    depth: usize,
) -> Result<PolyhedronReport> {
    if cofiltration.is_empty() {
        return Err(Error::Incompatible("a cofiltration needs at least one complex".into()));
    }
    let keep = depth.min(cofiltration.len() - 1) + 1;
    let ks = &cofiltration[..keep];
    for m in 1..keep {
        if !ks[m - 1].is_subcomplex_of(&ks[m]) {
            return Err(Error::NotSubcomplex(format!("stage {} is not contained in stage {m}", m - 1)));
        }
    }
    let full: Vec<FreeComplex> = ks.iter().map(SimplicialComplex::chain_complex).collect();
    let mut incl = Vec::with_capacity(keep.saturating_sub(1));
    for m in 1..keep {
        incl.push(inclusion(&ks[m - 1], &ks[m], &full[m - 1], &full[m])?);
    }
    let (stages, maps) = match subs {
        None => (full, incl),
        Some(subs) => {
            if subs.len() < keep {
                return Err(Error::Incompatible("every stage needs a subcomplex".into()));
            }
            let rel: Vec<FreeComplex> = (0..keep)
                .map(|m| relative_pair(&ks[m], &subs[m]).map(|s| s.c().clone()))
                .collect::<Result<_>>()?;
            let mut maps = Vec::with_capacity(incl.len());
            for (m, f) in incl.iter().enumerate() {
                maps.push(relative_map(
                    f,
                    (&ks[m], &subs[m]),
                    (&ks[m + 1], &subs[m + 1]),
                    &rel[m],
                    &rel[m + 1],
                )?);
            }
            (rel, maps)
        }
    };
    debug_assert!(stages.iter().all(|a| a.orientation() == Orientation::Chain));

    let homology: Vec<FgAbGroup> = stages.iter().map(|a| a.homology(n).group).collect();
    let colim = homology[keep - 1].clone();
    let stabilized = match maps.last() {
        Some(f) => f.on_homology(&FgAbGroup::integers(), n)?.is_isomorphism(),
        None => true,
    };
    // Ext(H_{n-1}(K_m), G) and Hom(H_{n-1}(K_m), G) with maps against the inclusions.
    let h_prev = |a: &FreeComplex| a.homology(n - 1).group;
    let mut ext_maps = Vec::with_capacity(maps.len());
    let mut hom_maps = Vec::with_capacity(maps.len());
    for f in &maps {
        let phi = f.on_homology(&FgAbGroup::integers(), n - 1)?;
        ext_maps.push(ext_morphism(&phi, g));
        hom_maps.push(hom_morphism(&phi, g));
    }
    let ext_tower = GroupTower::new(
        stages.iter().map(|a| ext_subquotient(&h_prev(a), g).group().clone()).collect(),
        ext_maps,
        Tail::Finite,
    )?;
    let hom_tower = GroupTower::new(
        stages.iter().map(|a| hom_subquotient(&h_prev(a), g).group().clone()).collect(),
        hom_maps,
        Tail::Finite,
    )?;
    let mut stage_middle = Vec::with_capacity(keep);
    let mut stage_verdicts = Vec::with_capacity(keep);
    for a in &stages {
        let r = uct_report(&a.reindexed(), g, -n)?;
        stage_middle.push(r.middle);
        stage_verdicts.push(r.verdicts);
    }
    Ok(PolyhedronReport {
        degree: n,
        coeff: g.clone(),
        hom_part: hom_group(&colim, g),
        homology,
        colim,
        stabilized,
        ext_lim: analyze(&ext_tower, depth),
        lim1_hom: ml_analyze(&hom_tower, depth).lim1,
        stage_middle,
        stage_verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proind::tests::circle;
    use crate::proind::SimplicialBond;
    use crate::simplicial::Carrier;

    #[test]
    fn constant_sphere_tower() {
        let k = SimplicialComplex::simplex_boundary(&[0, 1, 2, 3]);
        let t = SimplicialTower {
            stages: vec![k.clone()],
            bonding: vec![SimplicialBond::Carrier(Carrier::identity(&k))],
            tail: Tail::Stationary,
        };
        let r = space_uct_report(&t.chain_tower().unwrap(), &FgAbGroup::cyclic(2), 2, 4).unwrap();
        assert_eq!(r.stage_middle, vec![FgAbGroup::cyclic(2)]);
        assert_eq!(r.weak_part.lim.tag(), "Z/2");
        assert!(r.verdicts_hold());
    }

    #[test]
    fn circle_tower_with_identity() {
        let a = circle();
        let t = Tower::constant(&a, Tail::Stationary, 1).unwrap();
        let r = space_uct_report(&t, &FgAbGroup::integers(), 1, 3).unwrap();
        assert_eq!(r.hom_part.lim.tag(), "Z");
        assert_eq!(r.lim1_hom, Lim1Status::Zero);
    }

    #[test]
    fn pair_and_filtration() {
        let k = SimplicialComplex::simplex(&[0, 1, 2]);
        let sub = SimplicialComplex::simplex_boundary(&[0, 1, 2]);
        let t = SimplicialTower {
            stages: vec![k.clone()],
            bonding: vec![SimplicialBond::Carrier(Carrier::identity(&k))],
            tail: Tail::Stationary,
        };
        let r = pair_space_uct_report(&t, std::slice::from_ref(&sub), &FgAbGroup::integers(), 2, 3).unwrap();
        assert!(r.stages[0].connecting_iso);
        assert!(r.verdicts_hold());

        let p = polyhedron_uct_report(std::slice::from_ref(&k), Some(std::slice::from_ref(&k)), &FgAbGroup::integers(), 1, 3).unwrap();
        assert!(p.homology.iter().all(FgAbGroup::is_trivial));
        assert!(p.stage_middle.iter().all(FgAbGroup::is_trivial));
    }
}
