//! Chain and cochain complexes of free finitely generated groups, their
//! coefficient versions, homology, chain maps and homotopies, and locally
//! split short exact sequences with their connecting homomorphisms.
//!
//! A coefficient complex over `G = ⊕_j Z/q_j` (with `q_j = 0` for free
//! summands) stores degree `n` as `Z^{rank(n) * c}` in basis-major layout,
//! `c` being the number of cyclic factors of `G`, modulo the lattice of
//! torsion relations. Integer differentials act as `D ⊗ I_c`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::abgroups::{power_relations, FgAbGroup, GroupMorphism, Subquotient};
use crate::error::{parse_err, Error, Result};
use crate::intlat::{kernel_basis, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Chain,
    Cochain,
}

impl Orientation {
    /// Degree change of the differential.
    pub fn step(self) -> i64 {
        match self {
            Orientation::Chain => -1,
            Orientation::Cochain => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Chain => Orientation::Cochain,
            Orientation::Cochain => Orientation::Chain,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Chain => "chain",
            Orientation::Cochain => "cochain",
        }
    }
}

/// A complex supported on degrees `lo ..= lo + ranks.len() - 1`.
/// `diffs[k]` is the differential out of degree `lo + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    orientation: Orientation,
    lo: i64,
    ranks: Vec<usize>,
    diffs: Vec<IntMatrix>,
}

impl FreeComplex {
    pub fn new(orientation: Orientation, lo: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self> {
        if ranks.len() != diffs.len() {
            return Err(Error::InvalidComplex(format!(
                "{} ranks but {} differentials",
                ranks.len(),
                diffs.len()
            )));
        }
        let c = FreeComplex {
            orientation,
            lo,
            ranks,
            diffs,
        };
        c.validate()?;
        Ok(c)
    }

    /// Builds from differentials only; ranks are read off the matrices.
    /// Every differential out of `lo..=hi` must be given.
    pub fn from_differentials(orientation: Orientation, lo: i64, diffs: Vec<IntMatrix>) -> Result<Self> {
        let ranks = diffs.iter().map(|d| d.cols()).collect();
        Self::new(orientation, lo, ranks, diffs)
    }

    pub fn zero(orientation: Orientation) -> Self {
        FreeComplex {
            orientation,
            lo: 0,
            ranks: Vec::new(),
            diffs: Vec::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        for n in self.degrees() {
            let d = self.differential(n);
            let want = (self.rank(n + self.orientation.step()), self.rank(n));
            if d.shape() != want {
                return Err(Error::InvalidComplex(format!(
                    "differential out of degree {n} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        for n in self.degrees() {
            let t = n + self.orientation.step();
            if !self.differential(t).mul(&self.differential(n)).is_zero() {
                return Err(Error::InvalidComplex(format!(
                    "consecutive differentials out of degrees {n} and {t} do not compose to zero"
                )));
            }
        }
        Ok(())
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest supported degree (`lo - 1` for the empty complex).
    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn rank(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.ranks[(n - self.lo) as usize]
        }
    }

    /// Differential out of degree `n`; zero-sized outside the support.
    pub fn differential(&self, n: i64) -> IntMatrix {
        if n < self.lo || n > self.hi() {
            IntMatrix::zeros(self.rank(n + self.orientation.step()), 0)
        } else {
            self.diffs[(n - self.lo) as usize].clone()
        }
    }

    /// Differential landing in degree `n`.
    pub fn incoming(&self, n: i64) -> IntMatrix {
        self.differential(n - self.orientation.step())
    }

    /// The complex with every differential transposed: a chain complex
    /// becomes the cochain complex `Hom(-, Z)` and vice versa.
    pub fn transpose(&self) -> FreeComplex {
        let o = self.orientation.flip();
        let s = self.orientation.step();
        let diffs = self
            .degrees()
            .map(|n| self.differential(n - s).transpose())
            .collect();
        FreeComplex {
            orientation: o,
            lo: self.lo,
            ranks: self.ranks.clone(),
            diffs,
        }
    }

    /// Same groups and differentials with every degree moved by `k`.
    pub fn shifted(&self, k: i64) -> FreeComplex {
        FreeComplex {
            lo: self.lo + k,
            ..self.clone()
        }
    }

    /// The same data read with opposite orientation and negated degrees
    /// (`A^n = A_{-n}`).
    pub fn reindexed(&self) -> FreeComplex {
        let mut ranks = self.ranks.clone();
        ranks.reverse();
        let mut diffs = self.diffs.clone();
        diffs.reverse();
        FreeComplex {
            orientation: self.orientation.flip(),
            lo: -self.hi(),
            ranks,
            diffs,
        }
    }

    pub fn with_coeff(&self, g: &FgAbGroup) -> GComplex {
        GComplex::new(self.clone(), g.clone())
    }

    /// Integral homology with cycle and boundary witnesses.
    pub fn homology(&self, n: i64) -> Homology {
        self.with_coeff(&FgAbGroup::integers()).homology(n)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|n| if n.rem_euclid(2) == 0 { 1 } else { -1 } * self.rank(n) as i64)
            .sum()
    }

    pub fn to_json(&self) -> Value {
        let mut degrees = Map::new();
        let mut diffs = Map::new();
        for n in self.degrees() {
            degrees.insert(n.to_string(), json!(self.rank(n)));
            let d = self.differential(n);
            if d.rows() > 0 && d.cols() > 0 {
                diffs.insert(n.to_string(), d.to_json());
            }
        }
        json!({
            "orientation": self.orientation.as_str(),
            "degrees": degrees,
            "differentials": diffs,
        })
    }

    pub fn from_json(v: &Value) -> Result<FreeComplex> {
        Self::from_json_keyed(v, "")
    }

    pub fn from_json_keyed(v: &Value, prefix: &str) -> Result<FreeComplex> {
        let key = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        let obj = v
            .as_object()
            .ok_or_else(|| parse_err(if prefix.is_empty() { "<root>" } else { prefix }, "expected an object"))?;
        let orientation = match obj.get("orientation").and_then(Value::as_str) {
            Some("chain") => Orientation::Chain,
            Some("cochain") => Orientation::Cochain,
            _ => return Err(parse_err(key("orientation"), "expected \"chain\" or \"cochain\"")),
        };
        let degs = obj
            .get("degrees")
            .and_then(Value::as_object)
            .ok_or_else(|| parse_err(key("degrees"), "expected an object of degree: rank"))?;
        let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
        for (k, r) in degs {
            let n: i64 = k
                .parse()
                .map_err(|_| parse_err(key(&format!("degrees.{k}")), "degree must be an integer"))?;
            let r = r
                .as_u64()
                .ok_or_else(|| parse_err(key(&format!("degrees.{k}")), "rank must be a nonnegative integer"))?;
            ranks.insert(n, r as usize);
        }
        let rank = |n: i64| ranks.get(&n).copied().unwrap_or(0);
        let mut given: BTreeMap<i64, IntMatrix> = BTreeMap::new();
        if let Some(d) = obj.get("differentials") {
            let d = d
                .as_object()
                .ok_or_else(|| parse_err(key("differentials"), "expected an object of degree: matrix"))?;
            for (k, m) in d {
                let dk = key(&format!("differentials.{k}"));
                let n: i64 = k.parse().map_err(|_| parse_err(&dk, "degree must be an integer"))?;
                let shape = (rank(n + orientation.step()), rank(n));
                given.insert(n, IntMatrix::from_json(m, &dk, Some(shape))?);
            }
        }
        let support: Vec<i64> = ranks.iter().filter(|(_, r)| **r > 0).map(|(n, _)| *n).collect();
        let (lo, hi) = match (support.first(), support.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Ok(FreeComplex::zero(orientation)),
        };
        for n in given.keys() {
            if *n < lo || *n > hi {
                return Err(parse_err(key(&format!("differentials.{n}")), "degree outside the support"));
            }
        }
        let rs: Vec<usize> = (lo..=hi).map(rank).collect();
        let ds: Vec<IntMatrix> = (lo..=hi)
            .map(|n| {
                given
                    .remove(&n)
                    .unwrap_or_else(|| IntMatrix::zeros(rank(n + orientation.step()), rank(n)))
            })
            .collect();
        FreeComplex::new(orientation, lo, rs, ds).map_err(|e| parse_err(key("differentials"), e.to_string()))
    }
}

/// `base ⊗ G`, or `Hom(base^T, G)` read through the transpose; both are the
/// same integer matrices acting on `G`-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GComplex {
    base: FreeComplex,
    coeff: FgAbGroup,
}

/// `Z_n / B_n` with explicit representatives.
#[derive(Clone, Debug)]
pub struct Homology {
    pub degree: i64,
    pub group: FgAbGroup,
    /// Generators of the cycle lattice (including coefficient relations).
    pub cycles: IntMatrix,
    /// Generators of boundaries plus coefficient relations.
    pub boundaries: IntMatrix,
    quotient: Subquotient,
}

impl Homology {
    /// Canonical coordinates of the class of a cycle; `None` if `x` is not a cycle.
    pub fn class_of(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        self.quotient.coords(x)
    }

    /// A cycle representing the given class.
    pub fn representative(&self, c: &[BigInt]) -> Vec<BigInt> {
        self.quotient.lift(c)
    }

    pub fn is_boundary(&self, x: &[BigInt]) -> bool {
        self.quotient.is_zero_class(x)
    }

    pub fn subquotient(&self) -> &Subquotient {
        &self.quotient
    }
}

impl GComplex {
    pub fn new(base: FreeComplex, coeff: FgAbGroup) -> Self {
        GComplex { base, coeff }
    }

    pub fn base(&self) -> &FreeComplex {
        &self.base
    }

    pub fn coeff(&self) -> &FgAbGroup {
        &self.coeff
    }

    pub fn orientation(&self) -> Orientation {
        self.base.orientation
    }

    /// Ambient coordinate count in degree `n`.
    pub fn dim(&self, n: i64) -> usize {
        self.base.rank(n) * self.coeff.ngens()
    }

    pub fn differential(&self, n: i64) -> IntMatrix {
        self.base.differential(n).kron_identity(self.coeff.ngens())
    }

    pub fn relations(&self, n: i64) -> IntMatrix {
        let r = power_relations(&self.coeff, self.base.rank(n));
        if r.rows() == 0 && r.cols() == 0 {
            IntMatrix::zeros(self.dim(n), 0)
        } else {
            r
        }
    }

    /// Full homology computation on the ambient lattice.
    pub fn homology(&self, n: i64) -> Homology {
        let s = self.orientation().step();
        let d = self.differential(n);
        let lt = self.relations(n + s);
        let ln = self.relations(n);
        let k = kernel_basis(&IntMatrix::hstack(&[&d, &lt]));
        let top: Vec<usize> = (0..self.dim(n)).collect();
        let cycles = IntMatrix::hstack(&[&k.select_rows(&top), &ln]);
        let boundaries = IntMatrix::hstack(&[&self.differential(n - s), &ln]);
        let quotient = Subquotient::new(&cycles, &boundaries).expect("boundaries are cycles");
        Homology {
            degree: n,
            group: quotient.group().clone(),
            cycles,
            boundaries,
            quotient,
        }
    }

    /// Homology as an abstract group, one cyclic factor of `G` at a time.
    pub fn homology_group(&self, n: i64) -> FgAbGroup {
        self.coeff
            .orders()
            .iter()
            .map(|q| self.base.with_coeff(&FgAbGroup::cyclic(q.clone())).homology(n).group)
            .fold(FgAbGroup::trivial(), |a, h| a.direct_sum(&h))
    }
}

/// `Hom(A, G)` for a cochain complex `A`, as the chain complex with
/// `∂_n = (δ^{n-1})^T` on `G`-coordinates.
pub fn g_dual(a: &FreeComplex, g: &FgAbGroup) -> Result<GComplex> {
    if a.orientation != Orientation::Cochain {
        return Err(Error::InvalidComplex("the G-dual is taken of a cochain complex".into()));
    }
    Ok(GComplex::new(a.transpose(), g.clone()))
}

fn block_or_zero(blocks: &BTreeMap<i64, IntMatrix>, n: i64, rows: usize, cols: usize) -> IntMatrix {
    blocks.get(&n).cloned().unwrap_or_else(|| IntMatrix::zeros(rows, cols))
}

fn check_blocks(
    blocks: &BTreeMap<i64, IntMatrix>,
    shape: impl Fn(i64) -> (usize, usize),
    what: &str,
) -> Result<()> {
    for (n, m) in blocks {
        let want = shape(*n);
        if m.shape() != want {
            return Err(Error::Dimension(format!(
                "{what} block in degree {n} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                want.0,
                want.1
            )));
        }
    }
    Ok(())
}

fn span(a: &FreeComplex, b: &FreeComplex) -> std::ops::RangeInclusive<i64> {
    let lo = a.lo.min(b.lo);
    let hi = a.hi().max(b.hi());
    (lo - 2)..=(hi + 2)
}

/// Degree-preserving map `f_n: A_n → B_n`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: FreeComplex,
    target: FreeComplex,
    blocks: BTreeMap<i64, IntMatrix>,
}

impl ChainMap {
    pub fn new(source: FreeComplex, target: FreeComplex, blocks: BTreeMap<i64, IntMatrix>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, blocks)?;
        f.verify()?;
        Ok(f)
    }

    /// Checks `d f = f d` in every degree.
    pub fn verify(&self) -> Result<()> {
        let s = self.source.orientation.step();
        for n in span(&self.source, &self.target) {
            let lhs = self.target.differential(n).mul(&self.block(n));
            let rhs = self.block(n + s).mul(&self.source.differential(n));
            if lhs != rhs {
                return Err(Error::NotChainMap(format!("commutation fails in degree {n}")));
            }
        }
        Ok(())
    }

    /// Shape checks only.
    pub fn new_unchecked(source: FreeComplex, target: FreeComplex, blocks: BTreeMap<i64, IntMatrix>) -> Result<Self> {
        if source.orientation != target.orientation {
            return Err(Error::NotChainMap("source and target orientations differ".into()));
        }
        check_blocks(&blocks, |n| (target.rank(n), source.rank(n)), "chain map")?;
        let blocks = blocks.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(ChainMap { source, target, blocks })
    }

    pub fn identity(a: &FreeComplex) -> Self {
        let blocks = a.degrees().map(|n| (n, IntMatrix::identity(a.rank(n)))).collect();
        ChainMap::new_unchecked(a.clone(), a.clone(), blocks).expect("identity shapes")
    }

    pub fn zero(source: &FreeComplex, target: &FreeComplex) -> Self {
        ChainMap::new_unchecked(source.clone(), target.clone(), BTreeMap::new()).expect("zero shapes")
    }

    pub fn source(&self) -> &FreeComplex {
        &self.source
    }

    pub fn target(&self) -> &FreeComplex {
        &self.target
    }

    pub fn block(&self, n: i64) -> IntMatrix {
        block_or_zero(&self.blocks, n, self.target.rank(n), self.source.rank(n))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap> {
        if other.target != self.source {
            return Err(Error::NotChainMap("composition of non-matching maps".into()));
        }
        let blocks = span(&other.source, &self.target)
            .map(|n| (n, self.block(n).mul(&other.block(n))))
            .collect();
        ChainMap::new_unchecked(other.source.clone(), self.target.clone(), blocks)
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::NotChainMap("sum of maps with different ends".into()));
        }
        let blocks = span(&self.source, &self.target)
            .map(|n| (n, self.block(n).add(&other.block(n))))
            .collect();
        ChainMap::new_unchecked(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn neg(&self) -> ChainMap {
        let blocks = self.blocks.iter().map(|(n, m)| (*n, m.neg())).collect();
        ChainMap::new_unchecked(self.source.clone(), self.target.clone(), blocks).expect("same shapes")
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.add(&other.neg())
    }

    /// `f^T: B^T → A^T` between transposed complexes.
    pub fn transpose(&self) -> ChainMap {
        let blocks = self.blocks.iter().map(|(n, m)| (*n, m.transpose())).collect();
        ChainMap::new_unchecked(self.target.transpose(), self.source.transpose(), blocks).expect("same shapes")
    }

    /// Induced map on homology with coefficients in `g`.
    pub fn on_homology(&self, g: &FgAbGroup, n: i64) -> Result<GroupMorphism> {
        let ha = self.source.with_coeff(g).homology(n);
        let hb = self.target.with_coeff(g).homology(n);
        let m = self.block(n).kron_identity(g.ngens());
        ha.subquotient().induced(hb.subquotient(), &m)
    }
}

/// The morphism `H_n(f)` on integral homology.
pub fn apply_on_homology(f: &ChainMap, n: i64) -> Result<GroupMorphism> {
    f.on_homology(&FgAbGroup::integers(), n)
}

/// `L_n: A_n → B_{n - step}` with `∂L + L∂ = g - f`.
#[derive(Clone, Debug)]
pub struct ChainHomotopy {
    source: FreeComplex,
    target: FreeComplex,
    blocks: BTreeMap<i64, IntMatrix>,
}

impl ChainHomotopy {
    pub fn new_unchecked(source: FreeComplex, target: FreeComplex, blocks: BTreeMap<i64, IntMatrix>) -> Result<Self> {
        if source.orientation != target.orientation {
            return Err(Error::NotHomotopy("source and target orientations differ".into()));
        }
        let s = source.orientation.step();
        check_blocks(&blocks, |n| (target.rank(n - s), source.rank(n)), "homotopy")?;
        let blocks = blocks.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(ChainHomotopy { source, target, blocks })
    }

    pub fn zero(source: &FreeComplex, target: &FreeComplex) -> Self {
        Self::new_unchecked(source.clone(), target.clone(), BTreeMap::new()).expect("zero shapes")
    }

    pub fn source(&self) -> &FreeComplex {
        &self.source
    }

    pub fn target(&self) -> &FreeComplex {
        &self.target
    }

    pub fn block(&self, n: i64) -> IntMatrix {
        let s = self.source.orientation.step();
        block_or_zero(&self.blocks, n, self.target.rank(n - s), self.source.rank(n))
    }

    /// `∂L_n + L_{n+step}∂` in degree `n`.
    pub fn boundary_block(&self, n: i64) -> IntMatrix {
        let s = self.source.orientation.step();
        self.target
            .differential(n - s)
            .mul(&self.block(n))
            .add(&self.block(n + s).mul(&self.source.differential(n)))
    }

    /// The chain map `f + ∂L + L∂`.
    pub fn perturb(&self, f: &ChainMap) -> Result<ChainMap> {
        let blocks = span(&self.source, &self.target)
            .map(|n| (n, f.block(n).add(&self.boundary_block(n))))
            .collect();
        ChainMap::new(self.source.clone(), self.target.clone(), blocks)
    }

    /// Checks that `self` is a homotopy from `f` to `g`.
    pub fn verify(&self, f: &ChainMap, g: &ChainMap) -> Result<()> {
        for n in span(&self.source, &self.target) {
            if self.boundary_block(n) != g.block(n).sub(&f.block(n)) {
                return Err(Error::NotHomotopy(format!("identity fails in degree {n}")));
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &ChainHomotopy) -> ChainHomotopy {
        let blocks = span(&self.source, &self.target)
            .map(|n| (n, self.block(n).add(&other.block(n))))
            .collect();
        Self::new_unchecked(self.source.clone(), self.target.clone(), blocks).expect("same shapes")
    }

    pub fn neg(&self) -> ChainHomotopy {
        let blocks = self.blocks.iter().map(|(n, m)| (*n, m.neg())).collect();
        Self::new_unchecked(self.source.clone(), self.target.clone(), blocks).expect("same shapes")
    }

    /// `g ∘ L`.
    pub fn post_compose(&self, g: &ChainMap) -> ChainHomotopy {
        let s = self.source.orientation.step();
        let blocks = span(&self.source, g.target())
            .map(|n| (n, g.block(n - s).mul(&self.block(n))))
            .collect();
        Self::new_unchecked(self.source.clone(), g.target().clone(), blocks).expect("composable shapes")
    }

    /// `L ∘ f`.
    pub fn pre_compose(&self, f: &ChainMap) -> ChainHomotopy {
        let blocks = span(f.source(), &self.target)
            .map(|n| (n, self.block(n).mul(&f.block(n))))
            .collect();
        Self::new_unchecked(f.source().clone(), self.target.clone(), blocks).expect("composable shapes")
    }
}

/// `H_n: A_n → B_{n - 2 step}` with `∂H - H∂ = L' - L`.
#[derive(Clone, Debug)]
pub struct ThreeCell {
    source: FreeComplex,
    target: FreeComplex,
    blocks: BTreeMap<i64, IntMatrix>,
}

impl ThreeCell {
    pub fn new_unchecked(source: FreeComplex, target: FreeComplex, blocks: BTreeMap<i64, IntMatrix>) -> Result<Self> {
        let s = source.orientation.step();
        check_blocks(&blocks, |n| (target.rank(n - 2 * s), source.rank(n)), "3-cell")?;
        let blocks = blocks.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(ThreeCell { source, target, blocks })
    }

    pub fn block(&self, n: i64) -> IntMatrix {
        let s = self.source.orientation.step();
        block_or_zero(&self.blocks, n, self.target.rank(n - 2 * s), self.source.rank(n))
    }

    pub fn verify(&self, l: &ChainHomotopy, l2: &ChainHomotopy) -> Result<()> {
        let s = self.source.orientation.step();
        for n in span(&self.source, &self.target) {
            let lhs = self
                .target
                .differential(n - 2 * s)
                .mul(&self.block(n))
                .sub(&self.block(n + s).mul(&self.source.differential(n)));
            if lhs != l2.block(n).sub(&l.block(n)) {
                return Err(Error::NotHomotopy(format!("3-cell identity fails in degree {n}")));
            }
        }
        Ok(())
    }
}

/// `0 → A → B → C → 0` with degreewise splittings.
#[derive(Clone, Debug)]
pub struct LocallySplitSes {
    pub i: ChainMap,
    pub pi: ChainMap,
    /// Retractions `B_n → A_n`.
    pub i_dag: BTreeMap<i64, IntMatrix>,
    /// Sections `C_n → B_n`.
    pub pi_dag: BTreeMap<i64, IntMatrix>,
}

impl LocallySplitSes {
    pub fn new(
        i: ChainMap,
        pi: ChainMap,
        i_dag: BTreeMap<i64, IntMatrix>,
        pi_dag: BTreeMap<i64, IntMatrix>,
    ) -> Result<Self> {
        let s = Self::new_unchecked(i, pi, i_dag, pi_dag)?;
        s.validate()?;
        Ok(s)
    }

    /// Shape checks only; used to build deliberately broken sequences.
    pub fn new_unchecked(
        i: ChainMap,
        pi: ChainMap,
        i_dag: BTreeMap<i64, IntMatrix>,
        pi_dag: BTreeMap<i64, IntMatrix>,
    ) -> Result<Self> {
        if i.target() != pi.source() {
            return Err(Error::InvalidSes("i and π do not share the middle complex".into()));
        }
        let (a, b, c) = (i.source(), i.target(), pi.target());
        check_blocks(&i_dag, |n| (a.rank(n), b.rank(n)), "retraction")?;
        check_blocks(&pi_dag, |n| (b.rank(n), c.rank(n)), "section")?;
        Ok(LocallySplitSes { i, pi, i_dag, pi_dag })
    }

    pub fn a(&self) -> &FreeComplex {
        self.i.source()
    }

    pub fn b(&self) -> &FreeComplex {
        self.i.target()
    }

    pub fn c(&self) -> &FreeComplex {
        self.pi.target()
    }

    pub fn orientation(&self) -> Orientation {
        self.b().orientation
    }

    pub fn i_dag(&self, n: i64) -> IntMatrix {
        block_or_zero(&self.i_dag, n, self.a().rank(n), self.b().rank(n))
    }

    pub fn pi_dag(&self, n: i64) -> IntMatrix {
        block_or_zero(&self.pi_dag, n, self.b().rank(n), self.c().rank(n))
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        let lo = self.a().lo.min(self.b().lo).min(self.c().lo);
        let hi = self.a().hi().max(self.b().hi()).max(self.c().hi());
        lo..=hi
    }

    pub fn validate(&self) -> Result<()> {
        for n in self.degrees() {
            let (ra, rb, rc) = (self.a().rank(n), self.b().rank(n), self.c().rank(n));
            let (i, p, id, pd) = (self.i.block(n), self.pi.block(n), self.i_dag(n), self.pi_dag(n));
            let fail = |what: &str| Err(Error::InvalidSes(format!("{what} fails in degree {n}")));
            if !p.mul(&i).is_zero() {
                return fail("π∘i = 0");
            }
            if p.mul(&pd) != IntMatrix::identity(rc) {
                return fail("π∘π† = id");
            }
            if id.mul(&i) != IntMatrix::identity(ra) {
                return fail("i†∘i = id");
            }
            if !id.mul(&pd).is_zero() {
                return fail("i†∘π† = 0");
            }
            if i.mul(&id).add(&pd.mul(&p)) != IntMatrix::identity(rb) {
                return fail("i∘i† + π†∘π = id");
            }
        }
        ChainMap::new(self.a().clone(), self.b().clone(), self.i.blocks.clone())?;
        ChainMap::new(self.b().clone(), self.c().clone(), self.pi.blocks.clone())?;
        Ok(())
    }

    /// Other splittings: `π†' = π† + i X`, `i†' = i† - X π` for any
    /// `X_n: C_n → A_n`.
    pub fn with_alternative_sections(&self, x: &BTreeMap<i64, IntMatrix>) -> Result<LocallySplitSes> {
        let mut i_dag = BTreeMap::new();
        let mut pi_dag = BTreeMap::new();
        for n in self.degrees() {
            let xn = block_or_zero(x, n, self.a().rank(n), self.c().rank(n));
            pi_dag.insert(n, self.pi_dag(n).add(&self.i.block(n).mul(&xn)));
            i_dag.insert(n, self.i_dag(n).sub(&xn.mul(&self.pi.block(n))));
        }
        LocallySplitSes::new(self.i.clone(), self.pi.clone(), i_dag, pi_dag)
    }

    /// The transposed sequence `0 → C^T → B^T → A^T → 0`.
    pub fn transpose(&self) -> LocallySplitSes {
        let t = |m: &BTreeMap<i64, IntMatrix>| m.iter().map(|(n, x)| (*n, x.transpose())).collect();
        LocallySplitSes {
            i: self.pi.transpose(),
            pi: self.i.transpose(),
            i_dag: t(&self.pi_dag),
            pi_dag: t(&self.i_dag),
        }
    }

    /// `d̂_n = i†_{n+step} ∘ d^B ∘ π†_n` on `G`-coordinates.
    pub fn connecting_matrix(&self, n: i64, g: &FgAbGroup) -> IntMatrix {
        let s = self.orientation().step();
        self.i_dag(n + s)
            .mul(&self.b().differential(n))
            .mul(&self.pi_dag(n))
            .kron_identity(g.ngens())
    }
}

/// `H_n(C; G) → H_{n+step}(A; G)`.
pub fn connecting_homomorphism_with(s: &LocallySplitSes, g: &FgAbGroup, n: i64) -> Result<GroupMorphism> {
    let st = s.orientation().step();
    let hc = s.c().with_coeff(g).homology(n);
    let ha = s.a().with_coeff(g).homology(n + st);
    hc.subquotient().induced(ha.subquotient(), &s.connecting_matrix(n, g))
}

/// Integral connecting homomorphism.
pub fn connecting_homomorphism(s: &LocallySplitSes, n: i64) -> Result<GroupMorphism> {
    connecting_homomorphism_with(s, &FgAbGroup::integers(), n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SesTerm {
    A,
    B,
    C,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessVerdict {
    pub exact: bool,
    /// First node where image and kernel differ.
    pub failure: Option<(i64, SesTerm)>,
    pub nodes_checked: usize,
}

/// Checks image = kernel at every node of the long exact homology sequence.
pub fn long_exact_check(s: &LocallySplitSes, g: &FgAbGroup) -> Result<ExactnessVerdict> {
    let st = s.orientation().step();
    let degs = s.degrees();
    let (lo, hi) = (*degs.start() - 1, *degs.end() + 1);
    let mut nodes = 0;
    // walk in the direction of the sequence
    let order: Vec<i64> = if st < 0 { (lo..=hi).rev().collect() } else { (lo..=hi).collect() };
    for n in order {
        let i_n = s.i.on_homology(g, n)?;
        let p_n = s.pi.on_homology(g, n)?;
        let d_n = connecting_homomorphism_with(s, g, n)?;
        let d_prev = connecting_homomorphism_with(s, g, n - st)?;
        let checks = [
            (SesTerm::A, crate::abgroups::image_equals_kernel(&d_prev, &i_n)),
            (SesTerm::B, crate::abgroups::image_equals_kernel(&i_n, &p_n)),
            (SesTerm::C, crate::abgroups::image_equals_kernel(&p_n, &d_n)),
        ];
        for (term, ok) in checks {
            nodes += 1;
            if !ok {
                return Ok(ExactnessVerdict {
                    exact: false,
                    failure: Some((n, term)),
                    nodes_checked: nodes,
                });
            }
        }
    }
    Ok(ExactnessVerdict {
        exact: true,
        failure: None,
        nodes_checked: nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows, 0)
    }

    fn g(s: &str) -> FgAbGroup {
        FgAbGroup::parse(s).unwrap()
    }

    /// Boundary of a triangle on vertices 0,1,2 with edges 01, 02, 12.
    pub(crate) fn circle() -> FreeComplex {
        let d1 = m(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]]);
        FreeComplex::new(Orientation::Chain, 0, vec![3, 3], vec![IntMatrix::zeros(0, 3), d1]).unwrap()
    }

    #[test]
    fn circle_homology() {
        let c = circle();
        assert_eq!(c.homology(0).group, g("Z"));
        assert_eq!(c.homology(1).group, g("Z"));
        assert_eq!(c.homology(2).group, g("0"));
        assert_eq!(FreeComplex::zero(Orientation::Chain).homology(0).group, g("0"));
    }

    #[test]
    fn rejects_non_complex() {
        let d1 = m(&[vec![1]]);
        let d2 = m(&[vec![1]]);
        let r = FreeComplex::new(Orientation::Chain, 0, vec![1, 1, 1], vec![IntMatrix::zeros(0, 1), d1, d2]);
        assert!(matches!(r, Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn g_dual_examples() {
        let a = FreeComplex::new(Orientation::Cochain, 0, vec![1], vec![IntMatrix::zeros(0, 1)]).unwrap();
        let d = g_dual(&a, &g("Z/3")).unwrap();
        assert_eq!(d.homology(0).group, g("Z/3"));
        let a = FreeComplex::new(Orientation::Cochain, 0, vec![1, 1], vec![m(&[vec![2]]), IntMatrix::zeros(0, 1)])
            .unwrap();
        let d = g_dual(&a, &g("Z")).unwrap();
        assert_eq!(d.homology(0).group, g("Z/2"));
        assert_eq!(d.homology(1).group, g("0"));
        let a = FreeComplex::new(Orientation::Cochain, 0, vec![1, 1], vec![m(&[vec![1]]), IntMatrix::zeros(0, 1)])
            .unwrap();
        let d = g_dual(&a, &g("Z^2+Z/4")).unwrap();
        assert!(d.homology(0).group.is_trivial() && d.homology(1).group.is_trivial());
        assert!(g_dual(&circle(), &g("Z")).is_err());
    }

    #[test]
    fn coefficient_homology_routes_agree() {
        let c = circle().with_coeff(&g("Z^2+Z/6"));
        for n in -1..=2 {
            assert_eq!(c.homology(n).group, c.homology_group(n));
        }
        assert_eq!(c.homology(1).group, g("Z^2+Z/6"));
    }

    #[test]
    fn degree_two_map_on_circle() {
        // hexagon 0..5 → triangle by i ↦ i mod 3
        let hex = {
            let mut d1 = IntMatrix::zeros(6, 6);
            for i in 0..6 {
                let j = (i + 1) % 6;
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                d1.set(a, i, BigInt::from(-1));
                d1.set(b, i, BigInt::from(1));
            }
            FreeComplex::new(Orientation::Chain, 0, vec![6, 6], vec![IntMatrix::zeros(0, 6), d1]).unwrap()
        };
        let tri = {
            let mut d1 = IntMatrix::zeros(3, 3);
            for i in 0..3 {
                let j = (i + 1) % 3;
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                d1.set(a, i, BigInt::from(-1));
                d1.set(b, i, BigInt::from(1));
            }
            FreeComplex::new(Orientation::Chain, 0, vec![3, 3], vec![IntMatrix::zeros(0, 3), d1]).unwrap()
        };
        // edge (i, i+1) of the hexagon goes to edge (i mod 3, i+1 mod 3); the
        // closing edges of both polygons run against the cyclic direction
        let mut f0 = IntMatrix::zeros(3, 6);
        let mut f1 = IntMatrix::zeros(3, 6);
        let sign = |i: usize, n: usize| if i == n - 1 { -1 } else { 1 };
        for i in 0..6 {
            f0.set(i % 3, i, BigInt::from(1));
            f1.set(i % 3, i, BigInt::from(sign(i, 6) * sign(i % 3, 3)));
        }
        let f = ChainMap::new(hex.clone(), tri.clone(), BTreeMap::from([(0, f0), (1, f1)])).unwrap();
        let h1 = apply_on_homology(&f, 1).unwrap();
        assert_eq!(h1.matrix().get(0, 0).magnitude(), &num_bigint::BigUint::from(2u32));
        let id = apply_on_homology(&ChainMap::identity(&tri), 1).unwrap();
        assert_eq!(id, GroupMorphism::identity(&g("Z")));
    }

    #[test]
    fn nullhomotopic_map_is_zero_on_homology() {
        let c = circle();
        let l = ChainHomotopy::new_unchecked(c.clone(), c.clone(), BTreeMap::from([(0, m(&[vec![1, 0, 0], vec![0, 0, 0], vec![0, 2, -1]]))]))
            .unwrap();
        let f = l.perturb(&ChainMap::zero(&c, &c)).unwrap();
        for n in 0..=1 {
            assert!(apply_on_homology(&f, n).unwrap().is_zero());
        }
        l.verify(&ChainMap::zero(&c, &c), &f).unwrap();
    }

    #[test]
    fn split_sequence_with_zero_differentials() {
        let z = |r| FreeComplex::new(Orientation::Chain, 0, vec![r], vec![IntMatrix::zeros(0, r)]).unwrap();
        let (a, b, c) = (z(1), z(2), z(1));
        let i = ChainMap::new(a.clone(), b.clone(), BTreeMap::from([(0, m(&[vec![1], vec![0]]))])).unwrap();
        let p = ChainMap::new(b.clone(), c.clone(), BTreeMap::from([(0, m(&[vec![0, 1]]))])).unwrap();
        let s = LocallySplitSes::new(
            i,
            p,
            BTreeMap::from([(0, m(&[vec![1, 0]]))]),
            BTreeMap::from([(0, m(&[vec![0], vec![1]]))]),
        )
        .unwrap();
        assert!(connecting_homomorphism(&s, 0).unwrap().is_zero());
        assert!(long_exact_check(&s, &g("Z")).unwrap().exact);
        let t = s.transpose();
        t.validate().unwrap();
    }

    #[test]
    fn json_round_trip() {
        let c = circle();
        let v = c.to_json();
        assert_eq!(FreeComplex::from_json(&v).unwrap(), c);
        let bad = json!({"orientation": "chain", "degrees": {"0": 1, "1": 1}, "differentials": {"1": [["x"]]}});
        let e = FreeComplex::from_json(&bad).unwrap_err();
        assert!(e.to_string().contains("differentials.1"));
    }
}
