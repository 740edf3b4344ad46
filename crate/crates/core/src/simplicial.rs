//! Finite abstract simplicial complexes, carriers and the chain maps they
//! support, barycentric subdivision, nerves of covers and relative pairs.
//!
//! Chains are oriented: the basis in degree `n` is the strictly increasing
//! vertex tuples of the `n`-simplices, in lexicographic order, and
//! `∂[v_0..v_n] = Σ (-1)^i [.. v̂_i ..]`. The cone `v⌢x` is zero on tuples
//! containing `v`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::complexes::{ChainHomotopy, ChainMap, FreeComplex, LocallySplitSes, Orientation, ThreeCell};
use crate::error::{parse_err, Error, Result};
use crate::intlat::IntMatrix;

pub type Simplex = Vec<i64>;

/// Sparse chain: simplex ↦ coefficient.
pub type Chain = BTreeMap<Simplex, BigInt>;

#[derive(Clone, Debug, Default)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.by_dim == other.by_dim
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Downward closure of the given simplices. Repeated vertices inside a
    /// facet are merged; empty facets are ignored.
    pub fn from_facets(facets: &[Simplex]) -> Self {
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() || all.contains(&f) {
                continue;
            }
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                let s: Simplex = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                all.insert(s);
            }
        }
        Self::from_closed_set(all)
    }

    fn from_closed_set(all: BTreeSet<Simplex>) -> Self {
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in all {
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        for v in &mut by_dim {
            v.sort();
        }
        let mut index = HashMap::new();
        for v in &by_dim {
            for (i, s) in v.iter().enumerate() {
                index.insert(s.clone(), i);
            }
        }
        SimplicialComplex { by_dim, index }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The full simplex on the given vertices.
    pub fn simplex(vertices: &[i64]) -> Self {
        Self::from_facets(&[vertices.to_vec()])
    }

    /// Boundary of the simplex on the given vertices.
    pub fn simplex_boundary(vertices: &[i64]) -> Self {
        let facets: Vec<Simplex> = (0..vertices.len())
            .map(|i| {
                let mut f = vertices.to_vec();
                f.remove(i);
                f
            })
            .collect();
        Self::from_facets(&facets)
    }

    /// Dimension; `-1` for the empty complex.
    pub fn dim(&self) -> i64 {
        self.by_dim.len() as i64 - 1
    }

    pub fn simplices(&self, n: i64) -> &[Simplex] {
        if n < 0 || n > self.dim() {
            &[]
        } else {
            &self.by_dim[n as usize]
        }
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn count(&self, n: i64) -> usize {
        self.simplices(n).len()
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    pub fn vertices(&self) -> Vec<i64> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn contains(&self, s: &[i64]) -> bool {
        self.index.contains_key(s)
    }

    /// Position of `s` in the basis of its degree.
    pub fn index_of(&self, s: &[i64]) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Maximal simplices, in order of dimension then lexicographic.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for (d, layer) in self.by_dim.iter().enumerate() {
            for s in layer {
                let maximal = self
                    .by_dim
                    .get(d + 1)
                    .is_none_or(|up| !up.iter().any(|t| is_face(s, t)));
                if maximal {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.all_simplices().all(|s| other.contains(s))
    }

    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let all: BTreeSet<Simplex> = self.all_simplices().chain(other.all_simplices()).cloned().collect();
        Self::from_closed_set(all)
    }

    /// Closed star `St_K(v) = {τ : τ ∪ {v} ∈ K}`.
    pub fn closed_star(&self, v: i64) -> SimplicialComplex {
        let all: BTreeSet<Simplex> = self
            .all_simplices()
            .filter(|t| self.contains(&insert_vertex(t, v)))
            .cloned()
            .collect();
        Self::from_closed_set(all)
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim()).map(|n| if n % 2 == 0 { 1 } else { -1 } * self.count(n) as i64).sum()
    }

    pub fn boundary_chain(&self, s: &[i64]) -> Chain {
        boundary(s)
    }

    /// Oriented chain complex, supported in degrees `0..=dim`.
    pub fn chain_complex(&self) -> FreeComplex {
        if self.is_empty() {
            return FreeComplex::zero(Orientation::Chain);
        }
        let mut diffs = vec![IntMatrix::zeros(0, self.count(0))];
        for n in 1..=self.dim() {
            let mut d = IntMatrix::zeros(self.count(n - 1), self.count(n));
            for (j, s) in self.simplices(n).iter().enumerate() {
                for (face, c) in boundary(s) {
                    d.set(self.index[&face], j, c);
                }
            }
            diffs.push(d);
        }
        FreeComplex::from_differentials(Orientation::Chain, 0, diffs).expect("simplicial boundary squares to zero")
    }

    /// Coordinates of a chain in the degree-`n` basis.
    pub fn chain_to_vec(&self, n: i64, x: &Chain) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.count(n)];
        for (s, c) in x {
            if c.is_zero() {
                continue;
            }
            if s.len() as i64 != n + 1 {
                return Err(Error::Dimension(format!("simplex {s:?} in a degree-{n} chain")));
            }
            let i = self.index_of(s).ok_or_else(|| Error::Support(format!("{s:?}")))?;
            v[i] += c;
        }
        Ok(v)
    }

    pub fn vec_to_chain(&self, n: i64, v: &[BigInt]) -> Chain {
        self.simplices(n)
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| (s.clone(), c.clone()))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({ "facets": self.facets() })
    }

    pub fn from_json(v: &Value) -> Result<SimplicialComplex> {
        Self::from_json_keyed(v, "facets")
    }

    pub fn from_json_keyed(v: &Value, key: &str) -> Result<SimplicialComplex> {
        let arr = v
            .get("facets")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(key, "expected a \"facets\" array"))?;
        let mut facets = Vec::with_capacity(arr.len());
        for (i, f) in arr.iter().enumerate() {
            let fk = format!("{key}[{i}]");
            let verts = f.as_array().ok_or_else(|| parse_err(&fk, "expected an array of vertices"))?;
            let mut s = Vec::with_capacity(verts.len());
            for (j, x) in verts.iter().enumerate() {
                s.push(
                    x.as_i64()
                        .ok_or_else(|| parse_err(format!("{fk}[{j}]"), "vertex must be an integer"))?,
                );
            }
            if s.is_empty() {
                return Err(parse_err(&fk, "empty facet"));
            }
            facets.push(s);
        }
        Ok(Self::from_facets(&facets))
    }
}

fn is_face(s: &[i64], t: &[i64]) -> bool {
    s.iter().all(|v| t.binary_search(v).is_ok())
}

fn insert_vertex(t: &[i64], v: i64) -> Simplex {
    let mut s = t.to_vec();
    if let Err(p) = s.binary_search(&v) {
        s.insert(p, v);
    }
    s
}

/// Alternating boundary of an oriented simplex.
pub fn boundary(s: &[i64]) -> Chain {
    let mut out = Chain::new();
    if s.len() < 2 {
        return out;
    }
    for i in 0..s.len() {
        let mut f = s.to_vec();
        f.remove(i);
        let c = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        add_term(&mut out, f, c);
    }
    out
}

pub fn boundary_of_chain(x: &Chain) -> Chain {
    let mut out = Chain::new();
    for (s, c) in x {
        for (f, e) in boundary(s) {
            add_term(&mut out, f, c * e);
        }
    }
    out
}

fn add_term(x: &mut Chain, s: Simplex, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match x.entry(s) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn chain_add(a: &Chain, b: &Chain, scale_b: &BigInt) -> Chain {
    let mut out = a.clone();
    for (s, c) in b {
        add_term(&mut out, s.clone(), c * scale_b);
    }
    out
}

/// Sum of the coefficients of a 0-chain.
pub fn augmentation(x: &Chain) -> BigInt {
    x.iter().filter(|(s, _)| s.len() == 1).map(|(_, c)| c.clone()).sum()
}

/// Cone `v⌢x`: `v` is inserted into each tuple in sorted position with sign
/// `(-1)^{#vertices below v}`; tuples containing `v` vanish.
pub fn cone(v: i64, x: &Chain) -> Chain {
    let mut out = Chain::new();
    for (s, c) in x {
        match s.binary_search(&v) {
            Ok(_) => {}
            Err(p) => {
                let mut t = s.clone();
                t.insert(p, v);
                let c = if p % 2 == 0 { c.clone() } else { -c };
                add_term(&mut out, t, c);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarrierKind {
    General,
    Star,
    Simplicial,
}

/// Monotone assignment of subcomplexes of `target` to simplices of
/// `source`, optionally with a choice of cone vertex per simplex.
#[derive(Clone, Debug)]
pub struct Carrier {
    source: SimplicialComplex,
    target: SimplicialComplex,
    values: BTreeMap<Simplex, SimplicialComplex>,
    choice: BTreeMap<Simplex, i64>,
    kind: CarrierKind,
}

impl Carrier {
    /// A monotone carrier with no choice function.
    pub fn general(
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        values: BTreeMap<Simplex, SimplicialComplex>,
    ) -> Result<Self> {
        let c = Carrier {
            source: source.clone(),
            target: target.clone(),
            values,
            choice: BTreeMap::new(),
            kind: CarrierKind::General,
        };
        c.check_monotone()?;
        Ok(c)
    }

    /// A star carrier: `κ(σ) = St_{κ(σ)}(w(σ))` for every simplex.
    pub fn star(
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        values: BTreeMap<Simplex, SimplicialComplex>,
        choice: BTreeMap<Simplex, i64>,
    ) -> Result<Self> {
        let mut c = Self::general(source, target, values)?;
        c.choice = choice;
        c.kind = CarrierKind::Star;
        c.check_star()?;
        Ok(c)
    }

    /// Simplex-valued carrier `κ(σ) = closure(s(σ))` with choice `w(σ)`,
    /// which must be a vertex of `s(σ)`.
    pub fn simplicial(
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        simplex_of: impl Fn(&Simplex) -> Simplex,
        choice_of: impl Fn(&Simplex, &Simplex) -> i64,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        let mut choice = BTreeMap::new();
        for s in source.all_simplices() {
            let mut t = simplex_of(s);
            t.sort_unstable();
            t.dedup();
            choice.insert(s.clone(), choice_of(s, &t));
            values.insert(s.clone(), SimplicialComplex::simplex(&t));
        }
        let mut c = Self::star(source, target, values, choice)?;
        c.kind = CarrierKind::Simplicial;
        Ok(c)
    }

    /// The carrier of a simplicial vertex map, choosing `w(σ) = f(min σ)`.
    pub fn from_vertex_map(
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        map: &BTreeMap<i64, i64>,
    ) -> Result<Self> {
        for v in source.vertices() {
            if !map.contains_key(&v) {
                return Err(Error::InvalidCarrier(format!("vertex {v} has no image")));
            }
        }
        Self::simplicial(source, target, |s| s.iter().map(|v| map[v]).collect(), |s, _| map[&s[0]])
    }

    /// `κ(σ) = closure(σ)` on `K`, with `w(σ) = min σ`.
    pub fn identity(k: &SimplicialComplex) -> Self {
        Self::simplicial(k, k, |s| s.clone(), |s, _| s[0]).expect("identity carrier")
    }

    fn check_monotone(&self) -> Result<()> {
        for s in self.source.all_simplices() {
            let v = self
                .values
                .get(s)
                .ok_or_else(|| Error::InvalidCarrier(format!("no value at {s:?}")))?;
            if !v.is_subcomplex_of(&self.target) {
                return Err(Error::InvalidCarrier(format!("value at {s:?} leaves the target")));
            }
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    if !self.values[&f].is_subcomplex_of(v) {
                        return Err(Error::InvalidCarrier(format!("not monotone at {f:?} ⊆ {s:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_star(&self) -> Result<()> {
        for s in self.source.all_simplices() {
            let w = *self
                .choice
                .get(s)
                .ok_or_else(|| Error::NotStar(format!("{s:?} (no choice)")))?;
            let v = &self.values[s];
            if !v.contains(&[w]) || v.closed_star(w) != *v {
                return Err(Error::NotStar(format!("{s:?}")));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> CarrierKind {
        self.kind
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn value(&self, s: &[i64]) -> Option<&SimplicialComplex> {
        self.values.get(s)
    }

    pub fn choice(&self, s: &[i64]) -> Option<i64> {
        self.choice.get(s).copied()
    }

    /// Same carrier with a different choice function.
    pub fn with_choice(&self, choice: BTreeMap<Simplex, i64>) -> Result<Self> {
        let mut c = self.clone();
        c.choice = choice;
        c.check_star()?;
        Ok(c)
    }

    fn require_star(&self) -> Result<()> {
        if self.kind == CarrierKind::General {
            return Err(Error::NotStar("carrier has no choice function".into()));
        }
        Ok(())
    }

    /// Whether every simplex of `x` lies in `κ(σ)`.
    pub fn supports(&self, s: &[i64], x: &Chain) -> bool {
        let v = &self.values[s];
        x.keys().all(|t| v.contains(t))
    }
}

fn chain_map_from_images(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    images: &BTreeMap<Simplex, Chain>,
    shift: i64,
) -> Result<BTreeMap<i64, IntMatrix>> {
    let mut blocks = BTreeMap::new();
    for n in 0..=k.dim() {
        let mut m = IntMatrix::zeros(l.count(n + shift), k.count(n));
        for (j, s) in k.simplices(n).iter().enumerate() {
            let v = l.chain_to_vec(n + shift, &images[s])?;
            for (i, x) in v.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        blocks.insert(n, m);
    }
    Ok(blocks)
}

fn image_of_boundary(s: &[i64], prev: &BTreeMap<Simplex, Chain>) -> Chain {
    let mut out = Chain::new();
    for (f, c) in boundary(s) {
        out = chain_add(&out, &prev[&f], &c);
    }
    out
}

/// The augmentation-preserving chain map supported by a star carrier:
/// `f_0(v) = w(v)` and `f_n(σ) = w(σ)⌢f_{n-1}(∂σ)`.
pub fn chain_map_with_support(kappa: &Carrier) -> Result<ChainMap> {
    kappa.require_star()?;
    let (k, l) = (&kappa.source, &kappa.target);
    let mut images: BTreeMap<Simplex, Chain> = BTreeMap::new();
    for n in 0..=k.dim() {
        for s in k.simplices(n) {
            let w = kappa.choice[s];
            let img = if n == 0 {
                Chain::from([(vec![w], BigInt::one())])
            } else {
                cone(w, &image_of_boundary(s, &images))
            };
            if !kappa.supports(s, &img) {
                return Err(Error::Support(format!("{s:?}")));
            }
            images.insert(s.clone(), img);
        }
    }
    let blocks = chain_map_from_images(k, l, &images, 0)?;
    ChainMap::new(k.chain_complex(), l.chain_complex(), blocks)
}

fn images_of(f: &ChainMap, k: &SimplicialComplex, l: &SimplicialComplex) -> BTreeMap<Simplex, Chain> {
    let mut out = BTreeMap::new();
    for n in 0..=k.dim() {
        let b = f.block(n);
        for (j, s) in k.simplices(n).iter().enumerate() {
            out.insert(s.clone(), l.vec_to_chain(n, &b.col(j)));
        }
    }
    out
}

fn check_supported(kappa: &Carrier, images: &BTreeMap<Simplex, Chain>) -> Result<()> {
    for (s, x) in images {
        if !kappa.supports(s, x) {
            return Err(Error::Support(format!("{s:?}")));
        }
    }
    Ok(())
}

/// A homotopy `F: f ⇒ f'` supported by `κ`:
/// `F_n(σ) = w(σ)⌢((f' - f)(σ) - F_{n-1}(∂σ))`.
pub fn homotopy_with_support(f: &ChainMap, f2: &ChainMap, kappa: &Carrier) -> Result<ChainHomotopy> {
    kappa.require_star()?;
    let (k, l) = (&kappa.source, &kappa.target);
    let (fi, f2i) = (images_of(f, k, l), images_of(f2, k, l));
    check_supported(kappa, &fi)?;
    check_supported(kappa, &f2i)?;
    let mut images: BTreeMap<Simplex, Chain> = BTreeMap::new();
    for n in 0..=k.dim() {
        for s in k.simplices(n) {
            let diff = chain_add(&f2i[s], &fi[s], &-BigInt::one());
            let y = if n == 0 {
                diff
            } else {
                chain_add(&diff, &image_of_boundary(s, &images), &-BigInt::one())
            };
            let img = cone(kappa.choice[s], &y);
            if !kappa.supports(s, &img) {
                return Err(Error::Support(format!("{s:?}")));
            }
            images.insert(s.clone(), img);
        }
    }
    let blocks = chain_map_from_images(k, l, &images, 1)?;
    let h = ChainHomotopy::new_unchecked(k.chain_complex(), l.chain_complex(), blocks)?;
    h.verify(f, f2)?;
    Ok(h)
}

/// A 3-cell `E: F ⇛ F'` supported by `κ`:
/// `E_n(σ) = w(σ)⌢((F' - F)(σ) + E_{n-1}(∂σ))`.
pub fn three_cell_with_support(
    h: &ChainHomotopy,
    h2: &ChainHomotopy,
    kappa: &Carrier,
) -> Result<ThreeCell> {
    kappa.require_star()?;
    let (k, l) = (&kappa.source, &kappa.target);
    let homotopy_images = |x: &ChainHomotopy| {
        let mut out = BTreeMap::new();
        for n in 0..=k.dim() {
            let b = x.block(n);
            for (j, s) in k.simplices(n).iter().enumerate() {
                out.insert(s.clone(), l.vec_to_chain(n + 1, &b.col(j)));
            }
        }
        out
    };
    let (hi, h2i) = (homotopy_images(h), homotopy_images(h2));
    check_supported(kappa, &hi)?;
    check_supported(kappa, &h2i)?;
    let mut images: BTreeMap<Simplex, Chain> = BTreeMap::new();
    for n in 0..=k.dim() {
        for s in k.simplices(n) {
            let diff = chain_add(&h2i[s], &hi[s], &-BigInt::one());
            let y = if n == 0 {
                diff
            } else {
                chain_add(&diff, &image_of_boundary(s, &images), &BigInt::one())
            };
            let img = cone(kappa.choice[s], &y);
            if !kappa.supports(s, &img) {
                return Err(Error::Support(format!("{s:?}")));
            }
            images.insert(s.clone(), img);
        }
    }
    let blocks = chain_map_from_images(k, l, &images, 2)?;
    let e = ThreeCell::new_unchecked(k.chain_complex(), l.chain_complex(), blocks)?;
    e.verify(h, h2)?;
    Ok(e)
}

/// `Sd(K)` together with its two natural carriers.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    /// Simplex of `K` carried by each vertex label of `Sd(K)`.
    pub labels: Vec<Simplex>,
    /// `π_K: Sd(K) → K`, `{σ_0 ⊊ … ⊊ σ_ℓ} ↦ closure(σ_ℓ)`.
    pub pi: Carrier,
    /// `Sd_K: K → Sd(K)`, `σ ↦ Sd(closure σ)` with cone vertex `σ`.
    pub sd: Carrier,
}

impl Subdivision {
    pub fn label_of(&self, s: &[i64]) -> Option<i64> {
        self.labels.iter().position(|t| t.as_slice() == s).map(|i| i as i64)
    }
}

/// Barycentric subdivision. Vertices of `Sd(K)` are the labels `0, 1, …` of
/// the simplices of `K` ordered by dimension, then lexicographically.
pub fn barycentric_subdivision(k: &SimplicialComplex) -> Subdivision {
    let labels: Vec<Simplex> = k.all_simplices().cloned().collect();
    let label: HashMap<&Simplex, i64> = labels.iter().enumerate().map(|(i, s)| (s, i as i64)).collect();
    // flags of faces of each simplex: maximal flags are the facets of Sd(σ̄)
    let flags_below = |top: &Simplex| -> Vec<Simplex> {
        let mut out = Vec::new();
        let mut stack: Vec<(Simplex, Vec<i64>)> = vec![(top.clone(), vec![label[top]])];
        while let Some((s, flag)) = stack.pop() {
            if s.len() == 1 {
                let mut f = flag.clone();
                f.sort_unstable();
                out.push(f);
                continue;
            }
            for i in 0..s.len() {
                let mut t = s.clone();
                t.remove(i);
                let mut f = flag.clone();
                f.push(label[&t]);
                stack.push((t, f));
            }
        }
        out
    };
    let mut facets = Vec::new();
    for s in k.facets() {
        facets.extend(flags_below(&s));
    }
    let sdk = SimplicialComplex::from_facets(&facets);
    let pi = Carrier::simplicial(
        &sdk,
        k,
        |flag| labels[*flag.last().expect("nonempty") as usize].clone(),
        |flag, _| labels[flag[0] as usize][0],
    )
    .expect("the last-vertex carrier is simplicial");
    let mut values = BTreeMap::new();
    let mut choice = BTreeMap::new();
    for s in k.all_simplices() {
        values.insert(s.clone(), SimplicialComplex::from_facets(&flags_below(s)));
        choice.insert(s.clone(), label[s]);
    }
    let sd = Carrier::star(k, &sdk, values, choice).expect("Sd of a closed simplex is a star of its barycenter");
    Subdivision {
        complex: sdk,
        labels,
        pi,
        sd,
    }
}

/// A finite cover of the ground set `{0, …, ground - 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSystem {
    ground: usize,
    sets: Vec<BTreeSet<usize>>,
}

impl CoverSystem {
    pub fn new(ground: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let sets: Vec<BTreeSet<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let mut covered = vec![false; ground];
        for (i, s) in sets.iter().enumerate() {
            for &x in s {
                if x >= ground {
                    return Err(Error::InvalidCarrier(format!("set {i} contains point {x} outside the ground set")));
                }
                covered[x] = true;
            }
        }
        if let Some(x) = covered.iter().position(|c| !c) {
            return Err(Error::InvalidCarrier(format!("point {x} is not covered")));
        }
        Ok(CoverSystem { ground, sets })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn sets(&self) -> &[BTreeSet<usize>] {
        &self.sets
    }

    /// Points lying in every set of `sigma`.
    pub fn intersection(&self, sigma: &[i64]) -> BTreeSet<usize> {
        let mut it = sigma.iter().map(|&i| &self.sets[i as usize]);
        let first = it.next().cloned().unwrap_or_default();
        it.fold(first, |acc, s| acc.intersection(s).copied().collect())
    }

    pub fn to_json(&self) -> Value {
        json!({ "ground": self.ground, "sets": self.sets })
    }

    pub fn from_json(v: &Value) -> Result<CoverSystem> {
        let ground = v
            .get("ground")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err("ground", "expected a nonnegative integer"))? as usize;
        let arr = v
            .get("sets")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("sets", "expected an array of point lists"))?;
        let mut sets = Vec::new();
        for (i, s) in arr.iter().enumerate() {
            let pts = s
                .as_array()
                .ok_or_else(|| parse_err(format!("sets[{i}]"), "expected an array of points"))?;
            let mut set = Vec::new();
            for (j, p) in pts.iter().enumerate() {
                set.push(
                    p.as_u64()
                        .ok_or_else(|| parse_err(format!("sets[{i}][{j}]"), "point must be a nonnegative integer"))?
                        as usize,
                );
            }
            sets.push(set);
        }
        CoverSystem::new(ground, sets).map_err(|e| parse_err("sets", e.to_string()))
    }
}

/// Nerve: a set of indices spans a simplex iff the sets meet.
pub fn nerve(c: &CoverSystem) -> SimplicialComplex {
    let facets: Vec<Simplex> = (0..c.ground)
        .map(|x| {
            c.sets
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(&x))
                .map(|(i, _)| i as i64)
                .collect()
        })
        .collect();
    SimplicialComplex::from_facets(&facets)
}

/// `κ(σ) = {j : U_σ ⊆ V_j}` from the nerve of `fine` to the nerve of
/// `coarse`, with `w(σ) = min κ(σ)`.
pub fn refinement_carrier(fine: &CoverSystem, coarse: &CoverSystem) -> Result<Carrier> {
    if fine.ground != coarse.ground {
        return Err(Error::NotRefinement("covers of different ground sets".into()));
    }
    for (i, u) in fine.sets.iter().enumerate() {
        if !u.is_empty() && !coarse.sets.iter().any(|v| u.is_subset(v)) {
            return Err(Error::NotRefinement(format!("set {i} lies in no coarse set")));
        }
    }
    let (nf, nc) = (nerve(fine), nerve(coarse));
    let kappa = |s: &Simplex| -> Simplex {
        let u = fine.intersection(s);
        coarse
            .sets
            .iter()
            .enumerate()
            .filter(|(_, v)| u.is_subset(v))
            .map(|(j, _)| j as i64)
            .collect()
    };
    Carrier::simplicial(&nf, &nc, kappa, |_, t| t[0])
}

/// `0 → C(K') → C(K) → C(K, K') → 0` with basis-aligned splittings.
pub fn relative_pair(k: &SimplicialComplex, sub: &SimplicialComplex) -> Result<LocallySplitSes> {
    if !sub.is_subcomplex_of(k) {
        return Err(Error::NotSubcomplex("the smaller complex is not contained in the larger".into()));
    }
    let (ca, cb) = (sub.chain_complex(), k.chain_complex());
    let rel: Vec<Vec<usize>> = (0..=k.dim())
        .map(|n| {
            k.simplices(n)
                .iter()
                .enumerate()
                .filter(|(_, s)| !sub.contains(s))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let cc = if k.is_empty() {
        FreeComplex::zero(Orientation::Chain)
    } else {
        let diffs = (0..=k.dim())
            .map(|n| {
                let rows = if n == 0 { Vec::new() } else { rel[n as usize - 1].clone() };
                let d = cb.differential(n).select_rows(&rows).select_columns(&rel[n as usize]);
                if n == 0 {
                    IntMatrix::zeros(0, rel[0].len())
                } else {
                    d
                }
            })
            .collect();
        FreeComplex::from_differentials(Orientation::Chain, 0, diffs)?
    };
    let mut i = BTreeMap::new();
    let mut p = BTreeMap::new();
    let mut i_dag = BTreeMap::new();
    let mut p_dag = BTreeMap::new();
    for n in 0..=k.dim() {
        let mut inc = IntMatrix::zeros(k.count(n), sub.count(n));
        for (j, s) in sub.simplices(n).iter().enumerate() {
            inc.set(k.index_of(s).expect("subcomplex"), j, BigInt::one());
        }
        let mut proj = IntMatrix::zeros(rel[n as usize].len(), k.count(n));
        for (r, &c) in rel[n as usize].iter().enumerate() {
            proj.set(r, c, BigInt::one());
        }
        i_dag.insert(n, inc.transpose());
        p_dag.insert(n, proj.transpose());
        i.insert(n, inc);
        p.insert(n, proj);
    }
    let i = ChainMap::new(ca, cb.clone(), i)?;
    let p = ChainMap::new(cb, cc, p)?;
    LocallySplitSes::new(i, p, i_dag, p_dag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroups::FgAbGroup;
    use crate::complexes::{apply_on_homology, connecting_homomorphism};

    fn g(s: &str) -> FgAbGroup {
        FgAbGroup::parse(s).unwrap()
    }

    fn homology(k: &SimplicialComplex) -> Vec<String> {
        let c = k.chain_complex();
        (0..=k.dim().max(0)).map(|n| c.homology(n).group.to_string()).collect()
    }

    #[test]
    fn basic_homology() {
        assert_eq!(homology(&SimplicialComplex::simplex(&[7])), ["Z"]);
        assert_eq!(homology(&SimplicialComplex::simplex_boundary(&[0, 1, 2])), ["Z", "Z"]);
        assert_eq!(homology(&SimplicialComplex::simplex_boundary(&[0, 1, 2, 3])), ["Z", "0", "Z"]);
    }

    #[test]
    fn facets_and_closure() {
        let k = SimplicialComplex::from_facets(&[vec![2, 0, 1], vec![1, 3]]);
        assert_eq!(k.facets(), vec![vec![1, 3], vec![0, 1, 2]]);
        assert_eq!(k.count(0), 4);
        assert_eq!(k.count(1), 4);
        assert_eq!(k.euler_characteristic(), 1);
        let st = k.closed_star(3);
        assert_eq!(st.facets(), vec![vec![1, 3]]);
    }

    #[test]
    fn cone_identity() {
        let x: Chain = Chain::from([(vec![1, 3], BigInt::from(2)), (vec![0, 4], BigInt::from(-1))]);
        let v = 2;
        let lhs = boundary_of_chain(&cone(v, &x));
        let rhs = chain_add(&x, &cone(v, &boundary_of_chain(&x)), &-BigInt::one());
        assert_eq!(lhs, rhs);
        let x0: Chain = Chain::from([(vec![1], BigInt::from(3)), (vec![5], BigInt::from(-1))]);
        let lhs = boundary_of_chain(&cone(v, &x0));
        let rhs = chain_add(&x0, &Chain::from([(vec![v], augmentation(&x0))]), &-BigInt::one());
        assert_eq!(lhs, rhs);
        assert!(cone(1, &Chain::from([(vec![1, 3], BigInt::one())])).is_empty());
    }

    #[test]
    fn subdivision_counts() {
        let sd = barycentric_subdivision(&SimplicialComplex::simplex(&[0, 1]));
        assert_eq!((sd.complex.count(0), sd.complex.count(1)), (3, 2));
        let sd = barycentric_subdivision(&SimplicialComplex::simplex(&[0, 1, 2]));
        assert_eq!(
            (sd.complex.count(0), sd.complex.count(1), sd.complex.count(2)),
            (7, 12, 6)
        );
    }

    #[test]
    fn subdivision_is_homotopy_equivalence() {
        for k in [
            SimplicialComplex::simplex_boundary(&[0, 1, 2]),
            SimplicialComplex::simplex_boundary(&[0, 1, 2, 3]),
        ] {
            let sd = barycentric_subdivision(&k);
            let f = chain_map_with_support(&sd.pi).unwrap();
            let gmap = chain_map_with_support(&sd.sd).unwrap();
            let fg = f.compose(&gmap).unwrap();
            homotopy_with_support(&ChainMap::identity(&k.chain_complex()), &fg, &Carrier::identity(&k)).unwrap();
            let labels = sd.labels.clone();
            let back = Carrier::star(
                &sd.complex,
                &sd.complex,
                sd.complex
                    .all_simplices()
                    .map(|t| {
                        let top = &labels[*t.last().unwrap() as usize];
                        (t.clone(), sd.sd.value(top).unwrap().clone())
                    })
                    .collect(),
                sd.complex.all_simplices().map(|t| (t.clone(), *t.last().unwrap())).collect(),
            )
            .unwrap();
            let gf = gmap.compose(&f).unwrap();
            homotopy_with_support(&ChainMap::identity(&sd.complex.chain_complex()), &gf, &back).unwrap();
            for n in 0..=k.dim() {
                assert!(apply_on_homology(&f, n).unwrap().is_isomorphism());
            }
        }
    }

    #[test]
    fn vertex_map_carrier_gives_induced_map() {
        let k = SimplicialComplex::simplex(&[0, 1, 2]);
        let l = SimplicialComplex::simplex(&[5, 6]);
        let map = BTreeMap::from([(0, 6), (1, 5), (2, 5)]);
        let kappa = Carrier::from_vertex_map(&k, &l, &map).unwrap();
        let f = chain_map_with_support(&kappa).unwrap();
        // edge 01 ↦ [6,5] = -[5,6]; edge 12 collapses
        let e01 = k.index_of(&[0, 1]).unwrap();
        let e12 = k.index_of(&[1, 2]).unwrap();
        assert_eq!(f.block(1).get(0, e01), &BigInt::from(-1));
        assert_eq!(f.block(1).get(0, e12), &BigInt::from(0));
        assert!(f.block(2).is_zero());
    }

    #[test]
    fn different_choices_are_homotopic() {
        let k = SimplicialComplex::simplex_boundary(&[0, 1, 2]);
        let sd = barycentric_subdivision(&k);
        let other: BTreeMap<Simplex, i64> = sd
            .complex
            .all_simplices()
            .map(|t| {
                let top = &sd.labels[*t.last().unwrap() as usize];
                (t.clone(), *top.last().unwrap())
            })
            .collect();
        let pi2 = sd.pi.with_choice(other).unwrap();
        let f = chain_map_with_support(&sd.pi).unwrap();
        let f2 = chain_map_with_support(&pi2).unwrap();
        let h = homotopy_with_support(&f, &f2, &sd.pi).unwrap();
        let h2 = homotopy_with_support(&f, &f2, &pi2).unwrap();
        three_cell_with_support(&h, &h2, &sd.pi).unwrap();
    }

    #[test]
    fn non_star_carrier_is_rejected() {
        let k = SimplicialComplex::simplex(&[0]);
        let l = SimplicialComplex::simplex_boundary(&[0, 1, 2]);
        let r = Carrier::star(&k, &l, BTreeMap::from([(vec![0], l.clone())]), BTreeMap::from([(vec![0], 0)]));
        assert!(matches!(r, Err(Error::NotStar(_))));
    }

    #[test]
    fn three_arc_nerve_is_a_circle() {
        let c = CoverSystem::new(6, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]]).unwrap();
        let n = nerve(&c);
        assert_eq!(n, SimplicialComplex::simplex_boundary(&[0, 1, 2]));
        assert_eq!(n.chain_complex().homology(1).group, g("Z"));
        let single = CoverSystem::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(nerve(&single), SimplicialComplex::simplex(&[0]));
        let kappa = refinement_carrier(&c, &c).unwrap();
        for v in 0..3 {
            assert!(kappa.value(&[v]).unwrap().contains(&[v]));
        }
        assert!(matches!(refinement_carrier(&c, &single.clone()), Err(Error::NotRefinement(_))));
        let fine = CoverSystem::new(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        assert!(matches!(refinement_carrier(&single, &fine), Err(Error::NotRefinement(_))));
        assert!(refinement_carrier(&fine, &single).is_ok());
    }

    #[test]
    fn relative_pairs() {
        let k = SimplicialComplex::simplex(&[0, 1, 2]);
        let kb = SimplicialComplex::simplex_boundary(&[0, 1, 2]);
        let s = relative_pair(&k, &kb).unwrap();
        assert_eq!(s.c().homology(2).group, g("Z"));
        assert_eq!(s.c().homology(1).group, g("0"));
        assert!(connecting_homomorphism(&s, 2).unwrap().is_isomorphism());
        let s = relative_pair(&k, &k).unwrap();
        for n in 0..=2 {
            assert!(s.c().homology(n).group.is_trivial());
        }
        let s = relative_pair(&k, &SimplicialComplex::empty()).unwrap();
        assert_eq!(s.c(), &k.chain_complex());
        assert!(relative_pair(&kb, &k).is_err());
    }
}
