//! Towers of chain complexes and inductive sequences of cochain complexes:
//! coherent 1- and 2-cells, homotopy limits and colimits, Mittag-Leffler
//! analysis and the UCT reports for spaces and polyhedra.
//!
//! An infinite tower is a finite window of stages plus an optional
//! stationary tail that repeats the last stage under the last bonding map.

mod doc;
mod holim;
mod ml;
mod reports;

pub use doc::{carrier_to_json, parse_tower, tower_to_json, TowerInput};
pub use holim::{
    asymptotic_witness, duality_check, duality_check_with, hocolim, hocolim_map, holim, holim_map, holim_with,
    local_map, witness_holds, HolimOptions, LocalReport,
};
pub use ml::{injective_tail_limit, ml_analyze, GroupTower, Lim1Status, LimValue, MlReport, MlStatus};
pub use reports::{
    pair_space_uct_report, polyhedron_uct_report, space_uct_report, PairSpaceReport, PairStage,
    PolyhedronReport, SpaceUctReport,
};

use std::collections::BTreeMap;

use crate::complexes::{ChainHomotopy, ChainMap, FreeComplex, Orientation, ThreeCell};
use crate::error::{Error, Result};
use crate::simplicial::{chain_map_with_support, Carrier, SimplicialComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// The window is the whole diagram.
    Finite,
    /// The last stage repeats forever under the last bonding map.
    Stationary,
}

/// An inverse sequence of chain complexes; `bonding[m]` maps stage `m + 1`
/// to stage `m`.
#[derive(Clone, Debug)]
pub struct Tower {
    stages: Vec<FreeComplex>,
    bonding: Vec<ChainMap>,
    tail: Tail,
}

fn check_sequence(
    stages: &[FreeComplex],
    maps: &[ChainMap],
    tail: Tail,
    orientation: Orientation,
    forward: bool,
) -> Result<()> {
    if stages.is_empty() {
        return Err(Error::Incompatible("a sequence needs at least one stage".into()));
    }
    if stages.iter().any(|s| s.orientation() != orientation) {
        return Err(Error::Incompatible(format!("stages must be {} complexes", orientation.as_str())));
    }
    let want = match tail {
        Tail::Finite => stages.len() - 1,
        Tail::Stationary => stages.len(),
    };
    if maps.len() != want {
        return Err(Error::Incompatible(format!("{} stages need {want} maps, got {}", stages.len(), maps.len())));
    }
    let last = stages.len() - 1;
    for (m, p) in maps.iter().enumerate() {
        let (lower, upper) = (&stages[m.min(last)], &stages[(m + 1).min(last)]);
        let (src, dst) = if forward { (lower, upper) } else { (upper, lower) };
        if p.source() != src || p.target() != dst {
            return Err(Error::Incompatible(format!("map {m} does not join consecutive stages")));
        }
        p.verify()?;
    }
    Ok(())
}

impl Tower {
    pub fn new(stages: Vec<FreeComplex>, bonding: Vec<ChainMap>, tail: Tail) -> Result<Self> {
        check_sequence(&stages, &bonding, tail, Orientation::Chain, false)?;
        Ok(Tower { stages, bonding, tail })
    }

    /// `a` at every stage with identity bonding.
    pub fn constant(a: &FreeComplex, tail: Tail, window: usize) -> Result<Self> {
        let n = if tail == Tail::Stationary { 1 } else { window.max(1) };
        let stages = vec![a.clone(); n];
        let maps = match tail {
            Tail::Finite => n - 1,
            Tail::Stationary => 1,
        };
        Self::new(stages, vec![ChainMap::identity(a); maps], tail)
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Number of explicitly stored stages.
    pub fn window_len(&self) -> usize {
        self.stages.len()
    }

    /// Largest usable stage index for a requested depth.
    pub fn clamp(&self, depth: usize) -> usize {
        match self.tail {
            Tail::Finite => depth.min(self.stages.len() - 1),
            Tail::Stationary => depth,
        }
    }

    pub fn has_stage(&self, m: usize) -> bool {
        self.tail == Tail::Stationary || m < self.stages.len()
    }

    pub fn stage(&self, m: usize) -> &FreeComplex {
        assert!(self.has_stage(m), "stage {m} is beyond a finite tower");
        &self.stages[m.min(self.stages.len() - 1)]
    }

    /// `p^{(m, m+1)}`.
    pub fn bonding(&self, m: usize) -> &ChainMap {
        assert!(self.has_stage(m + 1), "bonding {m} is beyond a finite tower");
        &self.bonding[m.min(self.bonding.len() - 1)]
    }

    /// `p^{(m0, m1)} = p^{(m0, m0+1)} ∘ … ∘ p^{(m1-1, m1)}`.
    pub fn composite(&self, m0: usize, m1: usize) -> ChainMap {
        assert!(m0 <= m1, "composite runs downward");
        let mut f = ChainMap::identity(self.stage(m1));
        for m in (m0..m1).rev() {
            f = self.bonding(m).compose(&f).expect("consecutive stages");
        }
        f
    }

    /// The finite tower on stages `0..=depth`.
    pub fn truncated(&self, depth: usize) -> Tower {
        let d = self.clamp(depth);
        Tower {
            stages: (0..=d).map(|m| self.stage(m).clone()).collect(),
            bonding: (0..d).map(|m| self.bonding(m).clone()).collect(),
            tail: Tail::Finite,
        }
    }
}

/// A direct sequence of cochain complexes; `maps[l]` goes from stage `l`
/// to stage `l + 1`.
#[derive(Clone, Debug)]
pub struct IndSequence {
    stages: Vec<FreeComplex>,
    maps: Vec<ChainMap>,
    tail: Tail,
}

impl IndSequence {
    pub fn new(stages: Vec<FreeComplex>, maps: Vec<ChainMap>, tail: Tail) -> Result<Self> {
        check_sequence(&stages, &maps, tail, Orientation::Cochain, true)?;
        Ok(IndSequence { stages, maps, tail })
    }

    pub fn clamp(&self, depth: usize) -> usize {
        match self.tail {
            Tail::Finite => depth.min(self.stages.len() - 1),
            Tail::Stationary => depth,
        }
    }

    pub fn has_stage(&self, l: usize) -> bool {
        self.tail == Tail::Stationary || l < self.stages.len()
    }

    pub fn stage(&self, l: usize) -> &FreeComplex {
        assert!(self.has_stage(l), "stage {l} is beyond a finite sequence");
        &self.stages[l.min(self.stages.len() - 1)]
    }

    /// `η_{(l+1, l)}`.
    pub fn map(&self, l: usize) -> &ChainMap {
        assert!(self.has_stage(l + 1), "map {l} is beyond a finite sequence");
        &self.maps[l.min(self.maps.len() - 1)]
    }

    /// `η_{(l1, l0)}: A_{(l0)} → A_{(l1)}`.
    pub fn composite(&self, l1: usize, l0: usize) -> ChainMap {
        assert!(l0 <= l1, "composite runs upward");
        let mut f = ChainMap::identity(self.stage(l0));
        for l in l0..l1 {
            f = self.map(l).compose(&f).expect("consecutive stages");
        }
        f
    }

    /// The dual tower of transposed complexes with `p = η^T`.
    pub fn dual(&self) -> Tower {
        Tower {
            stages: self.stages.iter().map(FreeComplex::transpose).collect(),
            bonding: self.maps.iter().map(ChainMap::transpose).collect(),
            tail: self.tail,
        }
    }
}

/// Bonding data between simplicial stages.
#[derive(Clone, Debug)]
pub enum SimplicialBond {
    Carrier(Carrier),
    ChainMap(ChainMap),
}

/// A tower of finite simplicial complexes; `bonding[m]` goes from stage
/// `m + 1` to stage `m`.
#[derive(Clone, Debug)]
pub struct SimplicialTower {
    pub stages: Vec<SimplicialComplex>,
    pub bonding: Vec<SimplicialBond>,
    pub tail: Tail,
}

impl SimplicialTower {
    /// Chain complexes of the stages with bonding maps from the carriers.
    pub fn chain_tower(&self) -> Result<Tower> {
        let stages: Vec<FreeComplex> = self.stages.iter().map(SimplicialComplex::chain_complex).collect();
        let bonding = self
            .bonding
            .iter()
            .map(|b| match b {
                SimplicialBond::Carrier(c) => chain_map_with_support(c),
                SimplicialBond::ChainMap(f) => Ok(f.clone()),
            })
            .collect::<Result<Vec<_>>>()?;
        Tower::new(stages, bonding, self.tail)
    }
}

/// `f = (m_k, f^{(k)}, f^{(k,k+1)})` on the window `k = 0..=K`, with
/// `f^{(k)}: A^{(m_k)} → B^{(k)}` and
/// `f^{(k,k+1)}: p f^{(k+1)} ⇒ f^{(k)} p^{(m_k, m_{k+1})}`.
#[derive(Clone, Debug)]
pub struct OneCell {
    source: Tower,
    target: Tower,
    reindex: Vec<usize>,
    maps: Vec<ChainMap>,
    homotopies: Vec<ChainHomotopy>,
}

impl OneCell {
    pub fn new(
        source: Tower,
        target: Tower,
        reindex: Vec<usize>,
        maps: Vec<ChainMap>,
        homotopies: Vec<ChainHomotopy>,
    ) -> Result<Self> {
        let f = Self::new_unchecked(source, target, reindex, maps, homotopies)?;
        verify_one_cell(&f)?;
        Ok(f)
    }

    /// Index and length checks only.
    pub fn new_unchecked(
        source: Tower,
        target: Tower,
        reindex: Vec<usize>,
        maps: Vec<ChainMap>,
        homotopies: Vec<ChainHomotopy>,
    ) -> Result<Self> {
        if maps.is_empty() || maps.len() != reindex.len() || homotopies.len() + 1 != maps.len() {
            return Err(Error::Incompatible("a 1-cell needs K+1 maps, K+1 indices and K homotopies".into()));
        }
        if reindex.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Incompatible("reindexing must be increasing".into()));
        }
        for (k, &m) in reindex.iter().enumerate() {
            if !source.has_stage(m) || !target.has_stage(k) {
                return Err(Error::Incompatible(format!("stage {k} of the 1-cell leaves the towers")));
            }
        }
        Ok(OneCell {
            source,
            target,
            reindex,
            maps,
            homotopies,
        })
    }

    pub fn identity(t: &Tower, window: usize) -> Self {
        let k = t.clamp(window);
        OneCell {
            source: t.clone(),
            target: t.clone(),
            reindex: (0..=k).collect(),
            maps: (0..=k).map(|m| ChainMap::identity(t.stage(m))).collect(),
            homotopies: (0..k)
                .map(|m| ChainHomotopy::zero(t.stage(m + 1), t.stage(m)))
                .collect(),
        }
    }

    pub fn source(&self) -> &Tower {
        &self.source
    }

    pub fn target(&self) -> &Tower {
        &self.target
    }

    /// Last index `K` of the window.
    pub fn window(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn reindex(&self) -> &[usize] {
        &self.reindex
    }

    pub fn map(&self, k: usize) -> &ChainMap {
        &self.maps[k]
    }

    pub fn homotopy(&self, k: usize) -> &ChainHomotopy {
        &self.homotopies[k]
    }

    /// `f^{(k0,k1)} = Σ_k p^{(k0,k)} f^{(k,k+1)} p^{(m_{k+1}, m_{k1})}`.
    pub fn coherence(&self, k0: usize, k1: usize) -> ChainHomotopy {
        let src = self.source.stage(self.reindex[k1]);
        let mut acc = ChainHomotopy::zero(src, self.target.stage(k0));
        for k in k0..k1 {
            let h = self
                .homotopies[k]
                .pre_compose(&self.source.composite(self.reindex[k + 1], self.reindex[k1]))
                .post_compose(&self.target.composite(k0, k));
            acc = acc.add(&h);
        }
        acc
    }
}

/// Checks every map and every coherence homotopy matrixwise.
pub fn verify_one_cell(f: &OneCell) -> Result<()> {
    for (k, fk) in f.maps.iter().enumerate() {
        if fk.source() != f.source.stage(f.reindex[k]) || fk.target() != f.target.stage(k) {
            return Err(Error::Incompatible(format!("map {k} has the wrong ends")));
        }
        fk.verify()?;
    }
    for (k, h) in f.homotopies.iter().enumerate() {
        let lhs = f.target.bonding(k).compose(&f.maps[k + 1])?;
        let rhs = f.maps[k].compose(&f.source.composite(f.reindex[k], f.reindex[k + 1]))?;
        h.verify(&lhs, &rhs)
            .map_err(|e| Error::NotHomotopy(format!("coherence {k}: {e}")))?;
    }
    Ok(())
}

/// `g ∘₀ f`: reindex by `m_{k_t}`, maps `g^{(t)} f^{(k_t)}` and homotopies
/// `g^{(t)} f^{(k_t, k_{t+1})} + g^{(t,t+1)} f^{(k_{t+1})}`.
pub fn compose_one_cells(g: &OneCell, f: &OneCell) -> Result<OneCell> {
    if let Some(&kt) = g.reindex.last() {
        if kt > f.window() {
            return Err(Error::Incompatible(format!(
                "g needs stage {kt} of f, whose window ends at {}",
                f.window()
            )));
        }
    }
    for &k in &g.reindex {
        if g.source.stage(k) != f.target.stage(k) {
            return Err(Error::Incompatible("the middle towers differ".into()));
        }
    }
    let reindex: Vec<usize> = g.reindex.iter().map(|&k| f.reindex[k]).collect();
    let maps = g
        .maps
        .iter()
        .zip(&g.reindex)
        .map(|(gt, &k)| gt.compose(&f.maps[k]))
        .collect::<Result<Vec<_>>>()?;
    let homotopies = (0..g.window())
        .map(|t| {
            let (k0, k1) = (g.reindex[t], g.reindex[t + 1]);
            let a = f.coherence(k0, k1).post_compose(&g.maps[t]);
            let b = g.homotopies[t].pre_compose(&f.maps[k1]);
            a.add(&b)
        })
        .collect();
    OneCell::new_unchecked(f.source.clone(), g.target.clone(), reindex, maps, homotopies)
}

/// `L = (m̃_k, L^{(k)}, L^{(k,k+1)})` from `f` to `f'`.
#[derive(Clone, Debug)]
pub struct TwoCell {
    pub reindex: Vec<usize>,
    pub homotopies: Vec<ChainHomotopy>,
    pub three_cells: Vec<ThreeCell>,
}

impl TwoCell {
    /// The 2-cell with `m̃_k = m_k` and vanishing data, valid when `f` and
    /// `f'` coincide on the window.
    pub fn trivial(f: &OneCell) -> Self {
        let k = f.window();
        TwoCell {
            reindex: f.reindex.clone(),
            homotopies: (0..=k)
                .map(|i| ChainHomotopy::zero(f.source.stage(f.reindex[i]), f.target.stage(i)))
                .collect(),
            three_cells: (0..k)
                .map(|i| {
                    ThreeCell::new_unchecked(
                        f.source.stage(f.reindex[i + 1]).clone(),
                        f.target.stage(i).clone(),
                        BTreeMap::new(),
                    )
                    .expect("empty blocks")
                })
                .collect(),
        }
    }
}

/// Checks `L^{(k)}: f^{(k)} p ⇒ f'^{(k)} p` and the 3-cell condition
/// `f'^{(k,k+1)} p ∘₁ p L^{(k+1)} ⇛ L^{(k)} p ∘₁ f^{(k,k+1)} p`.
pub fn verify_two_cell(l: &TwoCell, f: &OneCell, f2: &OneCell) -> Result<()> {
    let k = f.window().min(f2.window());
    if l.reindex.len() < k + 1 || l.homotopies.len() < k + 1 || l.three_cells.len() < k {
        return Err(Error::Incompatible("2-cell window is shorter than the 1-cells".into()));
    }
    let src = &f.source;
    for i in 0..=k {
        let mt = l.reindex[i];
        if mt < f.reindex[i] || mt < f2.reindex[i] || (i > 0 && mt < l.reindex[i - 1]) {
            return Err(Error::Incompatible(format!("reindexing of the 2-cell fails at {i}")));
        }
        let a = f.maps[i].compose(&src.composite(f.reindex[i], mt))?;
        let b = f2.maps[i].compose(&src.composite(f2.reindex[i], mt))?;
        l.homotopies[i]
            .verify(&a, &b)
            .map_err(|e| Error::NotHomotopy(format!("L^({i}): {e}")))?;
    }
    for i in 0..k {
        let (mt0, mt1) = (l.reindex[i], l.reindex[i + 1]);
        let h1 = f2.homotopies[i]
            .pre_compose(&src.composite(f2.reindex[i + 1], mt1))
            .add(&l.homotopies[i + 1].post_compose(f.target.bonding(i)));
        let h2 = l.homotopies[i]
            .pre_compose(&src.composite(mt0, mt1))
            .add(&f.homotopies[i].pre_compose(&src.composite(f.reindex[i + 1], mt1)));
        l.three_cells[i]
            .verify(&h1, &h2)
            .map_err(|e| Error::NotHomotopy(format!("L^({i},{}): {e}", i + 1)))?;
    }
    Ok(())
}

/// `f = (t_l, f_(l), f_(l+1,l))` between inductive sequences, with
/// `f_(l): A_(l) → B_(t_l)` and `f_(l+1,l): f_(l+1) η ⇒ η f_(l)`.
#[derive(Clone, Debug)]
pub struct IndOneCell {
    pub source: IndSequence,
    pub target: IndSequence,
    pub reindex: Vec<usize>,
    pub maps: Vec<ChainMap>,
    pub homotopies: Vec<ChainHomotopy>,
}

impl IndOneCell {
    pub fn window(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn verify(&self) -> Result<()> {
        if self.maps.is_empty() || self.maps.len() != self.reindex.len() || self.homotopies.len() + 1 != self.maps.len()
        {
            return Err(Error::Incompatible("an ind 1-cell needs L+1 maps and L homotopies".into()));
        }
        for (l, f) in self.maps.iter().enumerate() {
            if f.source() != self.source.stage(l) || f.target() != self.target.stage(self.reindex[l]) {
                return Err(Error::Incompatible(format!("map {l} has the wrong ends")));
            }
            f.verify()?;
        }
        for (l, h) in self.homotopies.iter().enumerate() {
            let a = self.maps[l + 1].compose(self.source.map(l))?;
            let b = self
                .target
                .composite(self.reindex[l + 1], self.reindex[l])
                .compose(&self.maps[l])?;
            h.verify(&a, &b)?;
        }
        Ok(())
    }

    /// The 1-cell of dual towers `B* → A*` given by transposes.
    pub fn dual(&self) -> Result<OneCell> {
        let (sd, td) = (self.source.dual(), self.target.dual());
        let maps = self.maps.iter().map(ChainMap::transpose).collect();
        let homotopies = self.homotopies.iter().map(transpose_homotopy).collect::<Result<Vec<_>>>()?;
        OneCell::new_unchecked(td, sd, self.reindex.clone(), maps, homotopies)
    }
}

/// `L^T` between transposed complexes: the block out of degree `n - 1` is
/// `(L_n)^T` for a cochain homotopy, and symmetrically for chains.
pub fn transpose_homotopy(h: &ChainHomotopy) -> Result<ChainHomotopy> {
    let s = h.source().orientation().step();
    let lo = h.source().lo().min(h.target().lo()) - 2;
    let hi = h.source().hi().max(h.target().hi()) + 2;
    let blocks = (lo..=hi).map(|n| (n - s, h.block(n).transpose())).collect();
    ChainHomotopy::new_unchecked(h.target().transpose(), h.source().transpose(), blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlat::IntMatrix;

    pub(crate) fn circle() -> FreeComplex {
        FreeComplex::new(
            Orientation::Chain,
            0,
            vec![1, 1],
            vec![IntMatrix::zeros(0, 1), IntMatrix::zeros(1, 1)],
        )
        .unwrap()
    }

    pub(crate) fn times(a: &FreeComplex, p: i64) -> ChainMap {
        let blocks = BTreeMap::from([(0, IntMatrix::identity(1)), (1, IntMatrix::scalar(1, p))]);
        ChainMap::new(a.clone(), a.clone(), blocks).unwrap()
    }

    #[test]
    fn identity_composition() {
        let c = circle();
        let t = Tower::new(vec![c.clone()], vec![times(&c, 2)], Tail::Stationary).unwrap();
        let id = OneCell::identity(&t, 4);
        verify_one_cell(&id).unwrap();
        let shift = OneCell::new(
            t.clone(),
            t.clone(),
            (1..=4).collect(),
            (0..4).map(|_| times(&c, 2)).collect(),
            (0..3).map(|_| ChainHomotopy::zero(&c, &c)).collect(),
        )
        .unwrap();
        let a = compose_one_cells(&shift, &id).unwrap();
        verify_one_cell(&a).unwrap();
        verify_two_cell(&TwoCell::trivial(&shift), &shift, &a).unwrap();
        let b = compose_one_cells(&OneCell::identity(&t, 3), &shift).unwrap();
        verify_one_cell(&b).unwrap();
        assert!(matches!(compose_one_cells(&OneCell::identity(&t, 6), &shift), Err(Error::Incompatible(_))));
    }

    #[test]
    fn finite_tower_checks() {
        let c = circle();
        assert!(Tower::new(vec![c.clone(), c.clone()], vec![], Tail::Finite).is_err());
        let t = Tower::constant(&c, Tail::Finite, 3).unwrap();
        assert_eq!(t.clamp(10), 2);
        assert_eq!(t.truncated(1).window_len(), 2);
    }
}
