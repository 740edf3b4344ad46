//! Cocycles and extensions of finite groups, the ρ-construction on free
//! groups, Ext through a free presentation, and the UCT exact sequence
//! `0 → Ext(H^{n+1}(A), G) → H_n(A*) → Hom(H^n(A), G) → 0` with its maps.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::abgroups::{
    ext_group, hom_morphism, hom_subquotient, image_equals_kernel, power_relations, FgAbGroup, GroupMorphism,
    Subquotient,
};
use crate::complexes::{connecting_homomorphism_with, g_dual, FreeComplex, Homology, LocallySplitSes, Orientation};
use crate::error::{Error, Result};
use crate::intlat::{kernel_basis, smith_normal_form, summand_retraction, IntMatrix, LinearSolver};

/// Default cap on `|A|` for tabulated cocycles.
pub const DEFAULT_BOUND: usize = 16;

/// A finite abelian group with its elements enumerated in mixed-radix
/// order of canonical coordinates; index 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteAb {
    group: FgAbGroup,
    orders: Vec<i64>,
    elements: Vec<Vec<i64>>,
}

impl FiniteAb {
    pub fn new(g: &FgAbGroup, bound: usize) -> Result<Self> {
        let order = g
            .order()
            .ok_or_else(|| Error::BoundExceeded(format!("{g} is infinite")))?;
        if order > BigInt::from(bound) {
            return Err(Error::BoundExceeded(format!("|{g}| = {order} exceeds {bound}")));
        }
        let orders: Vec<i64> = g.torsion().iter().map(|q| q.to_i64().expect("bounded")).collect();
        let n = order.to_usize().expect("bounded");
        let mut elements = Vec::with_capacity(n);
        for mut i in 0..n as i64 {
            let mut v = Vec::with_capacity(orders.len());
            for q in &orders {
                v.push(i % q);
                i /= q;
            }
            elements.push(v);
        }
        Ok(FiniteAb {
            group: g.clone(),
            orders,
            elements,
        })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &[i64] {
        &self.elements[i]
    }

    pub fn element_big(&self, i: usize) -> Vec<BigInt> {
        self.elements[i].iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Index of the element with the given (unreduced) coordinates.
    pub fn index(&self, v: &[i64]) -> usize {
        let mut idx = 0i64;
        for (x, q) in v.iter().zip(&self.orders).rev() {
            idx = idx * q + x.rem_euclid(*q);
        }
        idx as usize
    }

    pub fn index_big(&self, v: &[BigInt]) -> usize {
        let small: Vec<i64> = v
            .iter()
            .zip(&self.orders)
            .map(|(x, q)| x.mod_floor(&BigInt::from(*q)).to_i64().expect("reduced"))
            .collect();
        self.index(&small)
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let v: Vec<i64> = self.elements[i].iter().zip(&self.elements[j]).map(|(a, b)| a + b).collect();
        self.index(&v)
    }

    pub fn neg(&self, i: usize) -> usize {
        let v: Vec<i64> = self.elements[i].iter().map(|a| -a).collect();
        self.index(&v)
    }

    /// All subgroups, each as a sorted list of element indices.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut frontier = vec![vec![0usize]];
        found.insert(vec![0]);
        while let Some(s) = frontier.pop() {
            for a in 0..n {
                if s.binary_search(&a).is_ok() {
                    continue;
                }
                let mut members: BTreeSet<usize> = s.iter().copied().collect();
                let mut stack = vec![a];
                while let Some(x) = stack.pop() {
                    if members.insert(x) {
                        for y in members.clone() {
                            let z = self.add(x, y);
                            if !members.contains(&z) {
                                stack.push(z);
                            }
                        }
                    }
                }
                let t: Vec<usize> = members.into_iter().collect();
                if found.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
        found.into_iter().collect()
    }
}

/// A normalized symmetric 2-cocycle table on a finite group, with values
/// in canonical coordinates of `G`.
#[derive(Clone, Debug)]
pub struct Cocycle {
    a: FiniteAb,
    g: FgAbGroup,
    values: Vec<Vec<BigInt>>,
}

impl PartialEq for Cocycle {
    fn eq(&self, other: &Self) -> bool {
        self.a.group == other.a.group && self.g == other.g && self.values == other.values
    }
}

impl Cocycle {
    /// Validates `c(x,0) = 0`, symmetry and the cocycle identity.
    pub fn new(a: &FiniteAb, g: &FgAbGroup, values: Vec<Vec<BigInt>>) -> Result<Self> {
        let c = Self::new_unchecked(a, g, values);
        if let Some(msg) = c.axiom_failure() {
            return Err(Error::Incompatible(msg));
        }
        Ok(c)
    }

    fn new_unchecked(a: &FiniteAb, g: &FgAbGroup, values: Vec<Vec<BigInt>>) -> Self {
        assert_eq!(values.len(), a.len() * a.len(), "table size");
        let values = values.into_iter().map(|v| g.reduce(&v)).collect();
        Cocycle {
            a: a.clone(),
            g: g.clone(),
            values,
        }
    }

    pub fn from_fn(a: &FiniteAb, g: &FgAbGroup, f: impl Fn(usize, usize) -> Vec<BigInt>) -> Result<Self> {
        let n = a.len();
        let values = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::new(a, g, values)
    }

    pub fn zero(a: &FiniteAb, g: &FgAbGroup) -> Self {
        Self::new_unchecked(a, g, vec![vec![BigInt::zero(); g.ngens()]; a.len() * a.len()])
    }

    /// `c_h(x, y) = h(x) + h(y) - h(x + y)` for `h` with `h(0) = 0`.
    pub fn coboundary(a: &FiniteAb, g: &FgAbGroup, h: &[Vec<BigInt>]) -> Result<Self> {
        if g.reduce(&h[0]).iter().any(|x| !x.is_zero()) {
            return Err(Error::Incompatible("h(0) must vanish".into()));
        }
        Self::from_fn(a, g, |x, y| {
            let s = a.add(x, y);
            (0..g.ngens()).map(|k| &h[x][k] + &h[y][k] - &h[s][k]).collect()
        })
    }

    pub fn domain(&self) -> &FiniteAb {
        &self.a
    }

    pub fn coeff(&self) -> &FgAbGroup {
        &self.g
    }

    pub fn value(&self, x: usize, y: usize) -> &[BigInt] {
        &self.values[x * self.a.len() + y]
    }

    pub fn sub(&self, other: &Cocycle) -> Cocycle {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(p, q)| p.iter().zip(q).map(|(x, y)| x - y).collect())
            .collect();
        Self::new_unchecked(&self.a, &self.g, values)
    }

    fn axiom_failure(&self) -> Option<String> {
        let n = self.a.len();
        let zero = |v: &[BigInt]| self.g.is_zero_element(v);
        for x in 0..n {
            if !zero(self.value(x, 0)) {
                return Some(format!("c(x, 0) ≠ 0 at x = {x}"));
            }
            for y in 0..n {
                let d: Vec<BigInt> = self.value(x, y).iter().zip(self.value(y, x)).map(|(p, q)| p - q).collect();
                if !zero(&d) {
                    return Some(format!("c is not symmetric at ({x}, {y})"));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (xy, xz) = (self.a.add(x, y), self.a.add(x, z));
                    let lhs = self.value(x, y).iter().zip(self.value(xy, z));
                    let rhs = self.value(x, z).iter().zip(self.value(xz, y));
                    let d: Vec<BigInt> = lhs.zip(rhs).map(|((a, b), (c, e))| a + b - c - e).collect();
                    if !zero(&d) {
                        return Some(format!("cocycle identity fails at ({x}, {y}, {z})"));
                    }
                }
            }
        }
        None
    }
}

/// `Z(A, G)`, `B(A, G)` and `Ext = Z/B` as lattices over the unordered
/// pairs of nonzero elements, one block of cyclic coordinates per pair.
#[derive(Clone, Debug)]
pub struct CocycleSpace {
    a: FiniteAb,
    g: FgAbGroup,
    pairs: Vec<(usize, usize)>,
    pair_index: HashMap<(usize, usize), usize>,
    coboundaries: IntMatrix,
    quotient: Subquotient,
}

impl CocycleSpace {
    pub fn ext(&self) -> &FgAbGroup {
        self.quotient.group()
    }

    pub fn domain(&self) -> &FiniteAb {
        &self.a
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    fn ambient(&self, c: &Cocycle) -> Vec<BigInt> {
        let k = self.g.ngens();
        let mut u = vec![BigInt::zero(); self.pairs.len() * k];
        for (p, &(x, y)) in self.pairs.iter().enumerate() {
            for (j, v) in c.value(x, y).iter().enumerate() {
                u[p * k + j] = v.clone();
            }
        }
        u
    }

    /// Canonical coordinates of `[c]` in Ext.
    pub fn class_of(&self, c: &Cocycle) -> Result<Vec<BigInt>> {
        self.quotient
            .coords(&self.ambient(c))
            .ok_or_else(|| Error::Incompatible("table is not a cocycle".into()))
    }

    pub fn is_coboundary(&self, c: &Cocycle) -> bool {
        self.quotient.is_zero_class(&self.ambient(c))
    }

    /// A cocycle representing the class with the given coordinates.
    pub fn representative(&self, class: &[BigInt]) -> Cocycle {
        let u = self.quotient.lift(class);
        let k = self.g.ngens();
        let n = self.a.len();
        let mut values = vec![vec![BigInt::zero(); k]; n * n];
        for x in 1..n {
            for y in 1..n {
                let p = self.pair_index[&(x.min(y), x.max(y))];
                values[x * n + y] = u[p * k..(p + 1) * k].to_vec();
            }
        }
        Cocycle::new_unchecked(&self.a, &self.g, values)
    }

    /// Some `h` with `c2 - c1 = c_h`, or `None` when the classes differ.
    pub fn coboundary_witness(&self, c1: &Cocycle, c2: &Cocycle) -> Option<Vec<Vec<BigInt>>> {
        let k = self.g.ngens();
        let n = self.a.len();
        let l = power_relations(&self.g, self.pairs.len());
        let m = IntMatrix::hstack(&[&self.coboundaries, &pad_rows(&l, self.pairs.len() * k)]);
        let x = LinearSolver::new(&m).solve(&self.ambient(&c2.sub(c1)))?;
        let mut h = vec![vec![BigInt::zero(); k]; n];
        for a in 1..n {
            h[a] = self.g.reduce(&x[(a - 1) * k..a * k]);
        }
        Some(h)
    }
}

fn pad_rows(m: &IntMatrix, rows: usize) -> IntMatrix {
    if m.rows() == rows {
        m.clone()
    } else {
        IntMatrix::zeros(rows, m.cols())
    }
}

/// Builds `Z(A, G) / B(A, G)` for finite `A` with `|A| ≤ bound`.
pub fn cocycle_space(a: &FgAbGroup, g: &FgAbGroup, bound: usize) -> Result<CocycleSpace> {
    let fa = FiniteAb::new(a, bound)?;
    let n = fa.len();
    let mut pairs = Vec::new();
    let mut pair_index = HashMap::new();
    for x in 1..n {
        for y in x..n {
            pair_index.insert((x, y), pairs.len());
            pairs.push((x, y));
        }
    }
    let np = pairs.len();
    let slot = |x: usize, y: usize| -> Option<usize> {
        if x == 0 || y == 0 {
            None
        } else {
            Some(pair_index[&(x.min(y), x.max(y))])
        }
    };
    // c(x,y) + c(x+y,z) - c(x,z) - c(x+z,y) = 0
    let mut eqs: BTreeSet<Vec<(usize, i64)>> = BTreeSet::new();
    for x in 1..n {
        for y in 1..n {
            for z in 1..n {
                let mut row: HashMap<usize, i64> = HashMap::new();
                let terms = [
                    (slot(x, y), 1),
                    (slot(fa.add(x, y), z), 1),
                    (slot(x, z), -1),
                    (slot(fa.add(x, z), y), -1),
                ];
                for (s, c) in terms {
                    if let Some(s) = s {
                        *row.entry(s).or_insert(0) += c;
                    }
                }
                let mut row: Vec<(usize, i64)> = row.into_iter().filter(|(_, c)| *c != 0).collect();
                row.sort_unstable();
                if !row.is_empty() {
                    eqs.insert(row);
                }
            }
        }
    }
    let mut e = IntMatrix::zeros(eqs.len(), np);
    for (i, row) in eqs.iter().enumerate() {
        for &(j, c) in row {
            e.set(i, j, BigInt::from(c));
        }
    }
    let snf = smith_normal_form(&e);
    let inv = snf.invariants();
    let k = g.ngens();
    let mut gens = IntMatrix::zeros(np * k, np * k);
    for (j, q) in g.orders().iter().enumerate() {
        // {u : E u ≡ 0 mod q} = V · diag(q / gcd(d_i, q))
        let mut scale = vec![BigInt::one(); np];
        for (i, d) in inv.iter().enumerate() {
            scale[i] = if q.is_zero() { BigInt::zero() } else { q / d.gcd(q) };
        }
        for (col, sc) in scale.iter().enumerate() {
            for row in 0..np {
                let v = snf.v.get(row, col) * sc;
                gens.set(row * k + j, col * k + j, v);
            }
        }
    }
    let mut cb = IntMatrix::zeros(np, n.saturating_sub(1));
    for (p, &(x, y)) in pairs.iter().enumerate() {
        let s = fa.add(x, y);
        for (elem, c) in [(x, 1), (y, 1), (s, -1)] {
            if elem != 0 {
                let cur = cb.get(p, elem - 1).clone();
                cb.set(p, elem - 1, cur + c);
            }
        }
    }
    let coboundaries = cb.kron_identity(k);
    let l = pad_rows(&power_relations(g, np), np * k);
    let rels = IntMatrix::hstack(&[&coboundaries, &l]);
    let gens = IntMatrix::hstack(&[&gens, &l]);
    let quotient = Subquotient::new(&gens, &rels)?;
    Ok(CocycleSpace {
        a: fa,
        g: g.clone(),
        pairs,
        pair_index,
        coboundaries,
        quotient,
    })
}

/// `X_c = A × G` with `(x, y) + (x', y') = (x + x', c(x, x') + y + y')`.
/// Element `(x, y)` has index `x · |G| + y`.
#[derive(Clone, Debug)]
pub struct ExtensionXc {
    c: Cocycle,
    gf: FiniteAb,
}

impl ExtensionXc {
    pub fn len(&self) -> usize {
        self.c.a.len() * self.gf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.c
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        (i / self.gf.len(), i % self.gf.len())
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        x * self.gf.len() + y
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let ((x, y), (x2, y2)) = (self.pair(i), self.pair(j));
        let cv = self.gf.index_big(self.c.value(x, x2));
        let s = self.gf.add(self.gf.add(cv, y), y2);
        self.index(self.c.a.add(x, x2), s)
    }

    /// Checks associativity, commutativity, identity and inverses on the
    /// full table.
    pub fn is_abelian_group(&self) -> bool {
        let n = self.len();
        for i in 0..n {
            if self.add(i, 0) != i || !(0..n).any(|j| self.add(i, j) == 0) {
                return false;
            }
            for j in 0..n {
                if self.add(i, j) != self.add(j, i) {
                    return false;
                }
                for k in 0..n {
                    if self.add(self.add(i, j), k) != self.add(i, self.add(j, k)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn order_of(&self, i: usize) -> usize {
        let mut acc = i;
        let mut k = 1;
        while acc != 0 {
            acc = self.add(acc, i);
            k += 1;
        }
        k
    }

    /// The extension as an abstract group with inclusion and projection in
    /// canonical coordinates.
    pub fn to_abstract(&self) -> Result<AbstractExtension> {
        let a = &self.c.a;
        let (ra, rg) = (a.group.ngens(), self.gf.group.ngens());
        let m = ra + rg;
        // (x, y) = Σ x_i (a_i, 0) + (0, y - k(x))
        let gen_sum = |x: usize| -> usize {
            let mut acc = 0;
            for (i, &xi) in a.element(x).iter().enumerate() {
                let mut unit = vec![0i64; ra];
                unit[i] = 1;
                let gi = self.index(a.index(&unit), 0);
                for _ in 0..xi {
                    acc = self.add(acc, gi);
                }
            }
            acc
        };
        let mut rels: Vec<Vec<BigInt>> = Vec::new();
        for (i, q) in a.orders.iter().enumerate() {
            let mut unit = vec![0i64; ra];
            unit[i] = 1;
            let gi = self.index(a.index(&unit), 0);
            let mut acc = 0;
            for _ in 0..*q {
                acc = self.add(acc, gi);
            }
            let (_, s) = self.pair(acc);
            let mut col = vec![BigInt::zero(); m];
            col[i] = BigInt::from(*q);
            for (j, v) in self.gf.element(s).iter().enumerate() {
                col[ra + j] = BigInt::from(-v);
            }
            rels.push(col);
        }
        for (j, q) in self.gf.orders.iter().enumerate() {
            let mut col = vec![BigInt::zero(); m];
            col[ra + j] = BigInt::from(*q);
            rels.push(col);
        }
        let sq = Subquotient::new(&IntMatrix::identity(m), &IntMatrix::from_columns(m, &rels))?;
        let mut coords = Vec::with_capacity(self.len());
        for idx in 0..self.len() {
            let (x, y) = self.pair(idx);
            let (_, kx) = self.pair(gen_sum(x));
            let mut v: Vec<BigInt> = a.element_big(x);
            let diff: Vec<i64> = self.gf.element(y).iter().zip(self.gf.element(kx)).map(|(p, q)| p - q).collect();
            v.extend(diff.into_iter().map(BigInt::from));
            coords.push(sq.coords(&v).expect("presentation covers the group"));
        }
        let x = sq.group().clone();
        let incl_cols: Vec<Vec<BigInt>> = (0..rg).map(|j| {
            let mut unit = vec![0i64; rg];
            unit[j] = 1;
            coords[self.index(0, self.gf.index(&unit))].clone()
        }).collect();
        let incl = GroupMorphism::new(
            self.gf.group.clone(),
            x.clone(),
            IntMatrix::from_columns(x.ngens(), &incl_cols),
        )?;
        let proj_cols: Vec<Vec<BigInt>> = (0..x.ngens())
            .map(|j| {
                let v = sq.generators().col(j);
                a.group.reduce(&v[..ra])
            })
            .collect();
        let proj = GroupMorphism::new(x.clone(), a.group.clone(), IntMatrix::from_columns(ra, &proj_cols))?;
        Ok(AbstractExtension {
            x,
            incl,
            proj,
            a: a.clone(),
            coords,
        })
    }
}

pub fn extension_from_cocycle(c: &Cocycle) -> Result<ExtensionXc> {
    let gf = FiniteAb::new(&c.g, usize::MAX)?;
    Ok(ExtensionXc { c: c.clone(), gf })
}

/// `0 → G → X → A → 0` with `X` in canonical coordinates.
#[derive(Clone, Debug)]
pub struct AbstractExtension {
    pub x: FgAbGroup,
    pub incl: GroupMorphism,
    pub proj: GroupMorphism,
    a: FiniteAb,
    /// Coordinates in `X` of each element of the tabulated extension.
    coords: Vec<Vec<BigInt>>,
}

impl AbstractExtension {
    pub fn table_coords(&self) -> &[Vec<BigInt>] {
        &self.coords
    }

    /// The lexicographically least preimage of each element of `A`.
    pub fn canonical_transversal(&self) -> Vec<Vec<BigInt>> {
        let mut best: Vec<Option<Vec<BigInt>>> = vec![None; self.a.len()];
        for c in &self.coords {
            let x = self.a.index_big(&self.proj.apply(c));
            if best[x].as_ref().is_none_or(|b| c < b) {
                best[x] = Some(c.clone());
            }
        }
        best.into_iter().map(|b| b.expect("projection is onto")).collect()
    }
}

/// `c(x, y) = i^{-1}(t(x) + t(y) - t(x + y))` for a transversal `t`.
pub fn cocycle_from_extension(e: &AbstractExtension, t: &[Vec<BigInt>], g: &FgAbGroup) -> Result<Cocycle> {
    let a = &e.a;
    if t.len() != a.len() {
        return Err(Error::NotTransversal(format!("{} values for {} elements", t.len(), a.len())));
    }
    if !e.x.is_zero_element(&t[0]) {
        return Err(Error::NotTransversal("t(0) ≠ 0".into()));
    }
    for (x, tx) in t.iter().enumerate() {
        if a.index_big(&e.proj.apply(tx)) != x {
            return Err(Error::NotTransversal(format!("t does not lift element {x}")));
        }
    }
    let solver = LinearSolver::new(&IntMatrix::hstack(&[e.incl.matrix(), &e.x.relation_matrix()]));
    let rg = g.ngens();
    Cocycle::from_fn(a, g, |x, y| {
        let s = a.add(x, y);
        let w: Vec<BigInt> = (0..e.x.ngens()).map(|k| &t[x][k] + &t[y][k] - &t[s][k]).collect();
        let sol = solver.solve(&w).expect("difference lies in the image of G");
        sol[..rg].to_vec()
    })
}

/// A cocycle on `Z^r` given as a function of two coordinate vectors.
pub type CocycleFn<'a> = dyn Fn(&[BigInt], &[BigInt]) -> Vec<BigInt> + 'a;

/// `ρ(x) = c(x_1, …, x_k) - Σ m_i c(d_i, -d_i)` where `x_1, …, x_k` lists
/// the positive basis terms of `x` and then the negative ones, and the
/// multi-argument `c(x_1, …, x_k) = Σ_j c(x_1 + … + x_{j-1}, x_j)`.
/// It satisfies `ρ(x + y) = c(x, y) + ρ(x) + ρ(y)`.
pub fn rho_evaluator<'a>(
    c: &'a CocycleFn<'a>,
    g: &'a FgAbGroup,
) -> impl Fn(&[BigInt]) -> Vec<BigInt> + 'a {
    move |x: &[BigInt]| {
        let r = x.len();
        let unit = |i: usize, s: i64| {
            let mut v = vec![BigInt::zero(); r];
            v[i] = BigInt::from(s);
            v
        };
        let mut terms: Vec<Vec<BigInt>> = Vec::new();
        for (i, k) in x.iter().enumerate() {
            if k.is_positive() {
                for _ in 0..k.to_usize().expect("coordinate fits") {
                    terms.push(unit(i, 1));
                }
            }
        }
        let mut correction = vec![BigInt::zero(); g.ngens()];
        for (i, k) in x.iter().enumerate() {
            if k.is_negative() {
                let m = (-k).to_usize().expect("coordinate fits");
                for _ in 0..m {
                    terms.push(unit(i, -1));
                }
                let cv = c(&unit(i, 1), &unit(i, -1));
                for (acc, v) in correction.iter_mut().zip(cv) {
                    *acc += BigInt::from(m) * v;
                }
            }
        }
        let mut acc = vec![BigInt::zero(); g.ngens()];
        let mut partial = vec![BigInt::zero(); r];
        for (j, t) in terms.iter().enumerate() {
            if j > 0 {
                for (a, v) in acc.iter_mut().zip(c(&partial, t)) {
                    *a += v;
                }
            }
            for (p, v) in partial.iter_mut().zip(t) {
                *p += v;
            }
        }
        let out: Vec<BigInt> = acc.iter().zip(&correction).map(|(a, b)| a - b).collect();
        g.reduce(&out)
    }
}

/// Comparison of `Hom(R, G) / Hom(F|R, G)` with `Ext(F/R, G)`.
#[derive(Clone, Debug)]
pub struct ExtPresentationReport {
    pub hom_r: FgAbGroup,
    pub restricted: FgAbGroup,
    pub quotient: FgAbGroup,
    pub ext: FgAbGroup,
    pub matches: bool,
    /// Both composites of `θ ↦ θ∘ζ` and `σ ↦ ρ_σ|_R` are the identity.
    /// `None` when `F/R` is infinite or too large to tabulate.
    pub round_trip: Option<bool>,
}

fn check_independent(r: &IntMatrix) -> Result<()> {
    if smith_normal_form(r).rank() < r.cols() {
        return Err(Error::DependentColumns);
    }
    Ok(())
}

/// `Ext(F/R, G)` through the free presentation `F = Z^rank ⊇ R`.
pub fn ext_via_presentation(rank: usize, r: &IntMatrix, g: &FgAbGroup, bound: usize) -> Result<ExtPresentationReport> {
    if r.rows() != rank {
        return Err(Error::Dimension(format!("R has {} rows, F has rank {rank}", r.rows())));
    }
    check_independent(r)?;
    let k = r.cols();
    let c = g.ngens();
    let l = pad_rows(&power_relations(g, k), k * c);
    let restriction = r.transpose().kron_identity(c);
    let q = Subquotient::new(&IntMatrix::identity(k * c), &IntMatrix::hstack(&[&restriction, &l]))?;
    let restricted = Subquotient::new(&IntMatrix::hstack(&[&restriction, &l]), &l)?.group().clone();
    let a_sq = Subquotient::new(&IntMatrix::identity(rank), r)?;
    let a = a_sq.group().clone();
    let ext = ext_group(&a, g);
    let round_trip = match FiniteAb::new(&a, bound) {
        Ok(fa) => Some(presentation_round_trip(&fa, &a_sq, r, g, &q)?),
        Err(_) => None,
    };
    Ok(ExtPresentationReport {
        hom_r: g.power(k),
        restricted,
        quotient: q.group().clone(),
        matches: q.group() == &ext,
        ext,
        round_trip,
    })
}

fn presentation_round_trip(
    fa: &FiniteAb,
    a_sq: &Subquotient,
    r: &IntMatrix,
    g: &FgAbGroup,
    q: &Subquotient,
) -> Result<bool> {
    let space = cocycle_space(fa.group(), g, fa.len())?;
    let c = g.ngens();
    let rsolve = LinearSolver::new(r);
    // t(x): lift of the canonical coordinates of x
    let t: Vec<Vec<BigInt>> = (0..fa.len()).map(|x| a_sq.lift(&fa.element_big(x))).collect();
    let zeta: Vec<Vec<BigInt>> = (0..fa.len() * fa.len())
        .map(|idx| {
            let (x, y) = (idx / fa.len(), idx % fa.len());
            let s = fa.add(x, y);
            let v: Vec<BigInt> = (0..r.rows()).map(|i| &t[x][i] + &t[y][i] - &t[s][i]).collect();
            rsolve.solve(&v).expect("ζ takes values in R")
        })
        .collect();
    let forward = |theta: &[BigInt]| -> Result<Vec<BigInt>> {
        let sigma = Cocycle::from_fn(fa, g, |x, y| {
            let w = &zeta[x * fa.len() + y];
            (0..c)
                .map(|j| w.iter().enumerate().map(|(i, wi)| wi * &theta[i * c + j]).sum())
                .collect()
        })?;
        space.class_of(&sigma)
    };
    let backward = |class: &[BigInt]| -> Vec<BigInt> {
        let sigma = space.representative(class);
        let pi = |u: &[BigInt]| fa.index_big(&a_sq.coords(u).expect("F maps onto F/R"));
        let pulled = move |u: &[BigInt], v: &[BigInt]| sigma.value(pi(u), pi(v)).to_vec();
        let rho = rho_evaluator(&pulled, g);
        let mut theta = Vec::with_capacity(r.cols() * c);
        for j in 0..r.cols() {
            theta.extend(rho(&r.col(j)));
        }
        q.coords(&theta).expect("every tuple is a homomorphism on R")
    };
    let ext = space.ext().clone();
    let qg = q.group().clone();
    let mut fwd_cols = Vec::new();
    for j in 0..qg.ngens() {
        fwd_cols.push(forward(&q.lift(&unit_vec(qg.ngens(), j)))?);
    }
    let bwd_cols: Vec<Vec<BigInt>> = (0..ext.ngens()).map(|j| backward(&unit_vec(ext.ngens(), j))).collect();
    let fwd = GroupMorphism::new(qg.clone(), ext.clone(), IntMatrix::from_columns(ext.ngens(), &fwd_cols))?;
    let bwd = GroupMorphism::new(ext.clone(), qg.clone(), IntMatrix::from_columns(qg.ngens(), &bwd_cols))?;
    Ok(bwd.compose(&fwd)? == GroupMorphism::identity(&qg) && fwd.compose(&bwd)? == GroupMorphism::identity(&ext))
}

fn unit_vec(n: usize, j: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[j] = BigInt::one();
    v
}

#[derive(Clone, Debug)]
pub struct HomFReport {
    /// `Hom_f(F|R, G) / Hom(F|R, G)`.
    pub quotient: FgAbGroup,
    pub pext_zero: bool,
}

/// `Hom_f(F|R, G)`: homomorphisms on `R` with `φ(mt) ∈ mG` whenever
/// `mt ∈ R`. In a basis `f_i` of `F` adapted to `R = span(d_i f_i)` this is
/// `φ(d_i f_i) ∈ d_i G`.
pub fn hom_f_subgroup(rank: usize, r: &IntMatrix, g: &FgAbGroup) -> Result<HomFReport> {
    if r.rows() != rank {
        return Err(Error::Dimension(format!("R has {} rows, F has rank {rank}", r.rows())));
    }
    check_independent(r)?;
    let k = r.cols();
    let c = g.ngens();
    let l = pad_rows(&power_relations(g, k), k * c);
    let snf = smith_normal_form(r);
    let d = snf.invariants();
    // adapted coordinates θ' = (V^T ⊗ I) θ
    let back = snf.v_inv.transpose().kron_identity(c);
    let mut adapted = IntMatrix::zeros(k * c, k * c);
    for (i, di) in d.iter().enumerate() {
        for j in 0..c {
            adapted.set(i * c + j, i * c + j, di.clone());
        }
    }
    let hom_f = IntMatrix::hstack(&[&back.mul(&adapted), &l]);
    let restriction = IntMatrix::hstack(&[&r.transpose().kron_identity(c), &l]);
    let quotient = Subquotient::new(&hom_f, &restriction)?.group().clone();
    Ok(HomFReport {
        pext_zero: quotient.is_trivial(),
        quotient,
    })
}

/// `PExt(A, G)` through the canonical presentation of `A`.
pub fn pext_fg(a: &FgAbGroup, g: &FgAbGroup) -> Result<FgAbGroup> {
    Ok(hom_f_subgroup(a.ngens(), &a.relation_matrix(), g)?.quotient)
}

/// Whether the restriction of `c` to every subgroup is a coboundary.
pub fn is_weak_coboundary(c: &Cocycle) -> bool {
    let a = &c.a;
    let g = &c.g;
    let k = g.ngens();
    a.subgroups().iter().all(|s| {
        let nz: Vec<usize> = s.iter().copied().filter(|&x| x != 0).collect();
        let pos: HashMap<usize, usize> = nz.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut rows: Vec<(usize, usize)> = Vec::new();
        for (i, &x) in nz.iter().enumerate() {
            for &y in &nz[i..] {
                rows.push((x, y));
            }
        }
        let mut cb = IntMatrix::zeros(rows.len(), nz.len());
        let mut target = Vec::with_capacity(rows.len() * k);
        for (p, &(x, y)) in rows.iter().enumerate() {
            let s = a.add(x, y);
            for (e, sign) in [(x, 1), (y, 1), (s, -1)] {
                if let Some(&i) = pos.get(&e) {
                    let cur = cb.get(p, i).clone();
                    cb.set(p, i, cur + sign);
                }
            }
            target.extend(c.value(x, y).iter().cloned());
        }
        let l = pad_rows(&power_relations(g, rows.len()), rows.len() * k);
        let m = IntMatrix::hstack(&[&cb.kron_identity(k), &l]);
        LinearSolver::new(&m).contains(&target)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct UctVerdicts {
    pub exact_left: bool,
    pub exact_middle: bool,
    pub exact_right: bool,
    pub split_ok: bool,
}

impl UctVerdicts {
    pub fn all(&self) -> bool {
        self.exact_left && self.exact_middle && self.exact_right && self.split_ok
    }
}

#[derive(Clone, Debug)]
pub struct UctSequenceReport {
    pub degree: i64,
    pub coeff: FgAbGroup,
    pub ext_part: FgAbGroup,
    pub middle: FgAbGroup,
    pub hom_part: FgAbGroup,
    pub coindex: GroupMorphism,
    pub index: GroupMorphism,
    pub split_section: GroupMorphism,
    pub coindex_left_inverse: GroupMorphism,
    pub verdicts: UctVerdicts,
    /// `middle = ext_part ⊕ hom_part` in canonical form.
    pub middle_is_sum: bool,
}

/// Switches for mutation tests.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default)]
pub struct UctOptions {
    pub drop_coindex_sign: bool,
}

/// The pieces of the UCT sequence of a cochain complex in one degree, with
/// the lattices that define their coordinates.
#[derive(Clone, Debug)]
pub struct UctContext {
    pub degree: i64,
    pub coeff: FgAbGroup,
    pub cohomology: Homology,
    pub middle: Homology,
    pub hom: Subquotient,
    pub ext: Subquotient,
    /// Basis of `B^{n+1}(A)` used for the Ext coordinates.
    pub beta: IntMatrix,
    pub index: GroupMorphism,
    pub section: GroupMorphism,
    pub coindex: GroupMorphism,
    pub coindex_left_inverse: GroupMorphism,
}

impl UctContext {
    pub fn new(a: &FreeComplex, g: &FgAbGroup, n: i64, opts: UctOptions) -> Result<Self> {
        if a.orientation() != Orientation::Cochain {
            return Err(Error::InvalidComplex("the UCT sequence is built for a cochain complex".into()));
        }
        let c = g.ngens();
        let an = a.rank(n);
        let cohomology = a.homology(n);
        let middle = g_dual(a, g)?.homology(n);
        let hom = hom_subquotient(&cohomology.group, g);
        let reps = cohomology.subquotient().generators().clone();
        let index = middle
            .subquotient()
            .induced(&hom, &reps.transpose().kron_identity(c))?;

        let k = kernel_basis(&a.differential(n));
        let retraction = summand_retraction(&k)?;
        let proj = k.mul(&retraction);
        let mut p_cols = Vec::with_capacity(an);
        for j in 0..an {
            p_cols.push(
                cohomology
                    .class_of(&proj.col(j))
                    .expect("the retraction lands in the cycles"),
            );
        }
        let p = IntMatrix::from_columns(cohomology.group.ngens(), &p_cols);
        let section = hom.induced(middle.subquotient(), &p.transpose().kron_identity(c))?;

        let delta = a.differential(n);
        let k1 = kernel_basis(&a.differential(n + 1));
        let y = LinearSolver::new(&k1)
            .solve_matrix(&delta)
            .expect("boundaries are cycles");
        let ys = smith_normal_form(&y);
        let d = ys.invariants();
        let r = d.len();
        let idx: Vec<usize> = (0..r).collect();
        let beta = k1
            .mul(&ys.u_inv.select_columns(&idx))
            .mul(&IntMatrix::diagonal(r, r, &d));
        let mut ext_rels = IntMatrix::zeros(r * c, r * c);
        for (i, di) in d.iter().enumerate() {
            for j in 0..c {
                ext_rels.set(i * c + j, i * c + j, di.clone());
            }
        }
        let l = pad_rows(&power_relations(g, r), r * c);
        let ext = Subquotient::new(&IntMatrix::identity(r * c), &IntMatrix::hstack(&[&ext_rels, &l]))?;
        let negative = n.rem_euclid(2) == 1;
        let cm = LinearSolver::new(&beta)
            .solve_matrix(&delta)
            .expect("δ^n lands in B^{n+1}");
        let coindex = ext.induced(
            middle.subquotient(),
            &cm.transpose().kron_identity(c).signed(negative && !opts.drop_coindex_sign),
        )?;
        let s = LinearSolver::new(&delta)
            .solve_matrix(&beta)
            .expect("β lies in the image of δ^n");
        let coindex_left_inverse = middle
            .subquotient()
            .induced(&ext, &s.transpose().kron_identity(c).signed(negative))?;
        Ok(UctContext {
            degree: n,
            coeff: g.clone(),
            cohomology,
            middle,
            hom,
            ext,
            beta,
            index,
            section,
            coindex,
            coindex_left_inverse,
        })
    }

    pub fn report(&self) -> Result<UctSequenceReport> {
        let (ext_part, middle, hom_part) = (
            self.ext.group().clone(),
            self.middle.group.clone(),
            self.hom.group().clone(),
        );
        let exact_left = self.coindex.is_injective()
            && self.coindex_left_inverse.compose(&self.coindex)? == GroupMorphism::identity(&ext_part);
        let exact_middle = image_equals_kernel(&self.coindex, &self.index);
        let exact_right = self.index.is_surjective();
        let split_ok = self.index.compose(&self.section)? == GroupMorphism::identity(&hom_part);
        Ok(UctSequenceReport {
            degree: self.degree,
            coeff: self.coeff.clone(),
            middle_is_sum: middle == ext_part.direct_sum(&hom_part),
            ext_part,
            middle,
            hom_part,
            coindex: self.coindex.clone(),
            index: self.index.clone(),
            split_section: self.section.clone(),
            coindex_left_inverse: self.coindex_left_inverse.clone(),
            verdicts: UctVerdicts {
                exact_left,
                exact_middle,
                exact_right,
                split_ok,
            },
        })
    }
}

/// Assembles and verifies the UCT sequence of a free cochain complex.
pub fn uct_report(a: &FreeComplex, g: &FgAbGroup, n: i64) -> Result<UctSequenceReport> {
    UctContext::new(a, g, n, UctOptions::default())?.report()
}

#[doc(hidden)]
pub fn uct_report_with(a: &FreeComplex, g: &FgAbGroup, n: i64, opts: UctOptions) -> Result<UctSequenceReport> {
    UctContext::new(a, g, n, opts)?.report()
}

/// `Index: H_n(A*) → Hom(H^n(A), G)` and its constructed section.
pub fn index_hom(a: &FreeComplex, g: &FgAbGroup, n: i64) -> Result<(GroupMorphism, GroupMorphism)> {
    let ctx = UctContext::new(a, g, n, UctOptions::default())?;
    Ok((ctx.index, ctx.section))
}

/// `coIndex: Ext(H^{n+1}(A), G) → H_n(A*)` and its left inverse.
pub fn coindex_hom(a: &FreeComplex, g: &FgAbGroup, n: i64) -> Result<(GroupMorphism, GroupMorphism)> {
    let ctx = UctContext::new(a, g, n, UctOptions::default())?;
    Ok((ctx.coindex, ctx.coindex_left_inverse))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalityVerdict {
    /// `Index_C ∘ d_n = Hom(d^{n-1}, G) ∘ Index_A`
    pub index_square: bool,
    /// `d_n ∘ coIndex_A = coIndex_C ∘ Ext(d^n, G)`
    pub coindex_square: bool,
}

impl NaturalityVerdict {
    pub fn holds(&self) -> bool {
        self.index_square && self.coindex_square
    }
}

/// Checks that the connecting map of the dual sequence is compatible with
/// Index and coIndex, for a locally split sequence of cochain complexes.
pub fn naturality_check(s: &LocallySplitSes, g: &FgAbGroup, n: i64) -> Result<NaturalityVerdict> {
    if s.orientation() != Orientation::Cochain {
        return Err(Error::InvalidSes("naturality is checked on cochain complexes".into()));
    }
    let ctx_a = UctContext::new(s.a(), g, n, UctOptions::default())?;
    let ctx_c = UctContext::new(s.c(), g, n - 1, UctOptions::default())?;
    let dual = s.transpose();
    let d_n = connecting_homomorphism_with(&dual, g, n)?;
    let d_int = connecting_homomorphism_with(s, &FgAbGroup::integers(), n - 1)?;
    let hom_map = hom_morphism(&d_int, g);
    let index_square = ctx_c.index.compose(&d_n)? == hom_map.compose(&ctx_a.index)?;

    let dhat = s.connecting_matrix(n, &FgAbGroup::integers());
    let q = LinearSolver::new(&ctx_a.beta)
        .solve_matrix(&dhat.mul(&ctx_c.beta))
        .ok_or_else(|| Error::InvalidSes("connecting map does not preserve boundaries".into()))?;
    let ext_map = ctx_a.ext.induced(&ctx_c.ext, &q.transpose().kron_identity(g.ngens()))?;
    let coindex_square = d_n.compose(&ctx_a.coindex)? == ctx_c.coindex.compose(&ext_map)?;
    Ok(NaturalityVerdict {
        index_square,
        coindex_square,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        FgAbGroup::parse(s).unwrap()
    }

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows, 0)
    }

    #[test]
    fn cocycle_space_examples() {
        assert_eq!(cocycle_space(&g("Z/2"), &g("Z/2"), 16).unwrap().ext(), &g("Z/2"));
        assert_eq!(cocycle_space(&g("Z/2"), &g("Z/4"), 16).unwrap().ext(), &g("Z/2"));
        assert_eq!(cocycle_space(&g("Z/3"), &g("Z/2"), 16).unwrap().ext(), &g("0"));
        assert_eq!(cocycle_space(&g("Z/6"), &g("Z"), 16).unwrap().ext(), &g("Z/6"));
        assert!(matches!(cocycle_space(&g("Z/17"), &g("Z"), 16), Err(Error::BoundExceeded(_))));
    }

    #[test]
    fn extension_of_z2_by_z2() {
        let a = FiniteAb::new(&g("Z/2"), 16).unwrap();
        let z2 = g("Z/2");
        let c = Cocycle::from_fn(&a, &z2, |x, y| vec![b((x == 1 && y == 1) as i64)]).unwrap();
        let x = extension_from_cocycle(&c).unwrap();
        assert!(x.is_abelian_group());
        assert_eq!(x.order_of(x.index(1, 0)), 4);
        assert_eq!(x.to_abstract().unwrap().x, g("Z/4"));
        let zero = extension_from_cocycle(&Cocycle::zero(&a, &z2)).unwrap();
        assert_eq!(zero.to_abstract().unwrap().x, g("Z/2+Z/2"));
    }

    #[test]
    fn transversal_round_trip() {
        let a = FiniteAb::new(&g("Z/4"), 16).unwrap();
        let gg = g("Z/2");
        let space = cocycle_space(a.group(), &gg, 16).unwrap();
        for cls in 0..2 {
            let c = space.representative(&[b(cls)]);
            let e = extension_from_cocycle(&c).unwrap().to_abstract().unwrap();
            let t = e.canonical_transversal();
            let c2 = cocycle_from_extension(&e, &t, &gg).unwrap();
            assert!(space.is_coboundary(&c2.sub(&c)));
            let mut bad = t.clone();
            bad[1] = bad[2].clone();
            assert!(matches!(cocycle_from_extension(&e, &bad, &gg), Err(Error::NotTransversal(_))));
        }
    }

    #[test]
    fn rho_on_z() {
        // c on Z pulled back from c(1,1) = 1 on Z/2 via x ↦ x mod 2
        let z2 = g("Z/2");
        let c = |x: &[BigInt], y: &[BigInt]| {
            let odd = |v: &BigInt| v.mod_floor(&b(2)).is_one();
            vec![b((odd(&x[0]) && odd(&y[0])) as i64)]
        };
        let rho = rho_evaluator(&c, &z2);
        assert_eq!(rho(&[b(2)]), vec![b(1)]);
        assert_eq!(rho(&[b(0)]), vec![b(0)]);
        for x in -5..=5 {
            for y in -5..=5 {
                let lhs = rho(&[b(x + y)]);
                let rhs: Vec<BigInt> = z2.reduce(&[&c(&[b(x)], &[b(y)])[0] + &rho(&[b(x)])[0] + &rho(&[b(y)])[0]]);
                assert_eq!(lhs, rhs, "x={x} y={y}");
            }
        }
    }

    #[test]
    fn ext_presentation_examples() {
        let r = ext_via_presentation(1, &m(&[vec![2]]), &g("Z"), 16).unwrap();
        assert_eq!(r.quotient, g("Z/2"));
        assert!(r.matches);
        assert_eq!(r.round_trip, Some(true));
        let r = ext_via_presentation(1, &m(&[vec![1]]), &g("Z"), 16).unwrap();
        assert_eq!(r.quotient, g("0"));
        let r = ext_via_presentation(2, &m(&[vec![2, 0], vec![0, 3]]), &g("Z"), 16).unwrap();
        assert_eq!(r.quotient, g("Z/6"));
        assert_eq!(r.round_trip, Some(true));
        assert!(matches!(
            ext_via_presentation(2, &m(&[vec![1, 2], vec![1, 2]]), &g("Z"), 16),
            Err(Error::DependentColumns)
        ));
    }

    #[test]
    fn hom_f_examples() {
        assert!(hom_f_subgroup(1, &m(&[vec![2]]), &g("Z")).unwrap().pext_zero);
        assert!(hom_f_subgroup(1, &m(&[vec![1]]), &g("Z/4")).unwrap().pext_zero);
        assert!(hom_f_subgroup(2, &m(&[vec![2, 1], vec![0, 3]]), &g("Z+Z/6")).unwrap().pext_zero);
    }

    fn single(delta: i64) -> FreeComplex {
        FreeComplex::new(Orientation::Cochain, 0, vec![1, 1], vec![m(&[vec![delta]]), IntMatrix::zeros(0, 1)]).unwrap()
    }

    #[test]
    fn index_and_coindex_examples() {
        let a = single(2);
        let r = uct_report(&a, &g("Z"), 0).unwrap();
        assert_eq!(r.middle, g("Z/2"));
        assert_eq!(r.hom_part, g("0"));
        assert_eq!(r.ext_part, g("Z/2"));
        assert!(r.index.is_zero());
        assert!(r.coindex.is_isomorphism());
        assert!(r.verdicts.all() && r.middle_is_sum);
        let r = uct_report(&single(1), &g("Z/6"), 0).unwrap();
        assert!(r.middle.is_trivial() && r.verdicts.all());
        let zero = FreeComplex::new(
            Orientation::Cochain,
            0,
            vec![2, 1],
            vec![IntMatrix::zeros(1, 2), IntMatrix::zeros(0, 1)],
        )
        .unwrap();
        let r = uct_report(&zero, &g("Z/4"), 0).unwrap();
        assert!(r.index.is_isomorphism());
        assert_eq!(r.middle, g("Z/4+Z/4"));
    }
}
