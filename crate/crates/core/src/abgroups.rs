//! Finitely generated abelian groups, the functors Hom, Ext, tensor and Tor
//! on them, and explicit coordinates for subquotients of free lattices.
//!
//! Elements of an [`FgAbGroup`] are written in canonical coordinates: one
//! integer per free generator followed by one residue per torsion factor, in
//! the order of the invariant factor list.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{parse_err, Error, Result};
use crate::intlat::{kernel_basis, lattice_equal, smith_diagonal, smith_normal_form, IntMatrix, LinearSolver};

/// Generator count and relation columns the group was built from.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: usize,
    pub relations: IntMatrix,
}

#[derive(Clone, Debug)]
pub struct FgAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
    witness: Option<Presentation>,
}

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }
}

impl Eq for FgAbGroup {}

impl FgAbGroup {
    /// Canonicalizes `Z^free_rank ⊕ ⊕ Z/orders[i]`. Orders may come in any
    /// order; `1` is dropped and `0` counts as a free summand.
    pub fn new(free_rank: usize, orders: &[BigInt]) -> Self {
        let mut free = free_rank;
        let mut nonzero = Vec::new();
        for q in orders {
            if q.is_zero() {
                free += 1;
            } else {
                nonzero.push(q.abs());
            }
        }
        let torsion = if nonzero.iter().all(|q| q.is_one()) {
            Vec::new()
        } else {
            let d = IntMatrix::diagonal(nonzero.len(), nonzero.len(), &nonzero);
            smith_diagonal(&d).into_iter().filter(|x| !x.is_one()).collect()
        };
        FgAbGroup {
            free_rank: free,
            torsion,
            witness: None,
        }
    }

    pub fn trivial() -> Self {
        Self::new(0, &[])
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, &[])
    }

    pub fn integers() -> Self {
        Self::free(1)
    }

    /// `Z/n`; `n = 0` gives `Z`.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::new(0, &[n.into()])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn witness(&self) -> Option<&Presentation> {
        self.witness.as_ref()
    }

    pub fn with_witness(mut self, p: Presentation) -> Self {
        self.witness = Some(p);
        self
    }

    /// Number of canonical generators.
    pub fn ngens(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Order of each canonical generator, `0` for free ones.
    pub fn orders(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.free_rank];
        v.extend(self.torsion.iter().cloned());
        v
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.iter().fold(BigInt::one(), |a, q| a * q))
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut t = self.torsion.clone();
        t.extend(other.torsion.iter().cloned());
        Self::new(self.free_rank + other.free_rank, &t)
    }

    pub fn power(&self, k: usize) -> FgAbGroup {
        (0..k).fold(Self::trivial(), |acc, _| acc.direct_sum(self))
    }

    /// Relation columns of the canonical presentation: `q_j e_j` for each
    /// torsion generator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.ngens();
        let cols: Vec<Vec<BigInt>> = self
            .torsion
            .iter()
            .enumerate()
            .map(|(j, q)| {
                let mut c = vec![BigInt::zero(); n];
                c[self.free_rank + j] = q.clone();
                c
            })
            .collect();
        IntMatrix::from_columns(n, &cols)
    }

    /// Reduces torsion coordinates into `[0, q)`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ngens(), "coordinate length");
        v.iter()
            .enumerate()
            .map(|(i, x)| {
                if i < self.free_rank {
                    x.clone()
                } else {
                    x.mod_floor(&self.torsion[i - self.free_rank])
                }
            })
            .collect()
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Parses the coefficient grammar: `0`, `Z`, `Z^2`, `Z/4`, and sums of
    /// these joined by `+`.
    pub fn parse(s: &str) -> Result<FgAbGroup> {
        Self::parse_keyed(s, "coeff")
    }

    pub fn parse_keyed(s: &str, key: &str) -> Result<FgAbGroup> {
        let mut free = 0usize;
        let mut orders = Vec::new();
        let body = s.trim();
        if body.is_empty() {
            return Err(parse_err(key, "empty group expression"));
        }
        for term in body.split('+') {
            let t: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            if t == "0" {
                continue;
            }
            if let Some(rest) = t.strip_prefix("Z/") {
                let q: BigInt = rest
                    .parse()
                    .map_err(|_| parse_err(key, format!("bad cyclic order in {t:?}")))?;
                if !q.is_positive() {
                    return Err(parse_err(key, format!("cyclic order must be positive in {t:?}")));
                }
                orders.push(q);
            } else if let Some(rest) = t.strip_prefix("Z^") {
                let r: usize = rest
                    .parse()
                    .map_err(|_| parse_err(key, format!("bad rank in {t:?}")))?;
                free += r;
            } else if t == "Z" {
                free += 1;
            } else {
                return Err(parse_err(key, format!("unrecognized summand {t:?}")));
            }
        }
        Ok(Self::new(free, &orders))
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for q in &self.torsion {
            parts.push(format!("Z/{q}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl std::str::FromStr for FgAbGroup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Cokernel of the relation columns `r` (one row per generator).
pub fn group_from_presentation(r: &IntMatrix) -> FgAbGroup {
    let n = r.rows();
    let diag = smith_diagonal(r);
    let mut orders: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_zero()).collect();
    let rank = orders.len();
    orders.extend(std::iter::repeat_n(BigInt::zero(), n - rank));
    FgAbGroup::new(0, &orders).with_witness(Presentation {
        generators: n,
        relations: r.clone(),
    })
}

fn cyclic_parts(g: &FgAbGroup) -> Vec<BigInt> {
    g.orders()
}

/// `Z/gcd` with the convention that `0` stands for `Z`.
fn gcd0(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Hom(A, G).
pub fn hom_group(a: &FgAbGroup, g: &FgAbGroup) -> FgAbGroup {
    let mut free = 0;
    let mut orders = Vec::new();
    for p in cyclic_parts(a) {
        for q in cyclic_parts(g) {
            match (p.is_zero(), q.is_zero()) {
                (true, true) => free += 1,
                (true, false) => orders.push(q.clone()),
                (false, true) => {}
                (false, false) => orders.push(gcd0(&p, &q)),
            }
        }
    }
    FgAbGroup::new(free, &orders)
}

/// Ext(A, G) = ⊕ over torsion factors `Z/p` of `G/pG`.
pub fn ext_group(a: &FgAbGroup, g: &FgAbGroup) -> FgAbGroup {
    let mut orders = Vec::new();
    for p in a.torsion() {
        for q in cyclic_parts(g) {
            orders.push(if q.is_zero() { p.clone() } else { gcd0(p, &q) });
        }
    }
    FgAbGroup::new(0, &orders)
}

/// Classical tensor product A ⊗ G.
pub fn tensor_group(a: &FgAbGroup, g: &FgAbGroup) -> FgAbGroup {
    let mut free = 0;
    let mut orders = Vec::new();
    for p in cyclic_parts(a) {
        for q in cyclic_parts(g) {
            match (p.is_zero(), q.is_zero()) {
                (true, true) => free += 1,
                (true, false) => orders.push(q.clone()),
                (false, true) => orders.push(p.clone()),
                (false, false) => orders.push(gcd0(&p, &q)),
            }
        }
    }
    FgAbGroup::new(free, &orders)
}

/// Hom(Hom(A, Z), G), the tensor used for coefficient complexes. It agrees
/// with [`tensor_group`] when `A` is free and ignores the torsion of `A`.
pub fn dual_tensor_group(a: &FgAbGroup, g: &FgAbGroup) -> FgAbGroup {
    hom_group(&hom_group(a, &FgAbGroup::integers()), g)
}

/// Tor(A, G).
pub fn tor_group(a: &FgAbGroup, g: &FgAbGroup) -> FgAbGroup {
    let mut orders = Vec::new();
    for p in a.torsion() {
        for q in g.torsion() {
            orders.push(gcd0(p, q));
        }
    }
    FgAbGroup::new(0, &orders)
}

/// A homomorphism between canonical presentations. Column `j` is the image
/// of source generator `j` in target coordinates.
#[derive(Clone, Debug)]
pub struct GroupMorphism {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl PartialEq for GroupMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.matrix == other.matrix
    }
}

impl GroupMorphism {
    /// Checks that every source relation maps into the target relation
    /// lattice, then reduces torsion rows.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.shape() != (target.ngens(), source.ngens()) {
            return Err(Error::InvalidMorphism(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens()
            )));
        }
        for (j, q) in source.torsion().iter().enumerate() {
            let col = matrix.col(source.free_rank() + j);
            let img: Vec<BigInt> = col.iter().map(|x| x * q).collect();
            if !target.is_zero_element(&img) {
                return Err(Error::InvalidMorphism(format!(
                    "relation of source generator {} does not map to zero",
                    source.free_rank() + j
                )));
            }
        }
        let mut m = matrix;
        for j in 0..m.cols() {
            let c = target.reduce(&m.col(j));
            for (i, x) in c.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(GroupMorphism {
            source,
            target,
            matrix: m,
        })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Self::new(g.clone(), g.clone(), IntMatrix::identity(g.ngens())).expect("identity is valid")
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        Self::new(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.ngens(), source.ngens()),
        )
        .expect("zero is valid")
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&self.matrix.mul_vec(v))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupMorphism) -> Result<GroupMorphism> {
        if other.target != self.source {
            return Err(Error::InvalidMorphism(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        Self::new(other.source.clone(), self.target.clone(), self.matrix.mul(&other.matrix))
    }

    pub fn add(&self, other: &GroupMorphism) -> Result<GroupMorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::InvalidMorphism("sum of morphisms with different ends".into()));
        }
        Self::new(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix))
    }

    pub fn neg(&self) -> GroupMorphism {
        Self::new(self.source.clone(), self.target.clone(), self.matrix.neg()).expect("negation is valid")
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Columns generating the image plus the target relations, as a lattice
    /// in target coordinates.
    pub fn image_lattice(&self) -> IntMatrix {
        IntMatrix::hstack(&[&self.matrix, &self.target.relation_matrix()])
    }

    /// Lattice in source coordinates of elements mapping to zero, including
    /// the source relations.
    pub fn kernel_lattice(&self) -> IntMatrix {
        let lt = self.target.relation_matrix();
        let k = kernel_basis(&IntMatrix::hstack(&[&self.matrix, &lt]));
        let top: Vec<usize> = (0..self.source.ngens()).collect();
        IntMatrix::hstack(&[&k.select_rows(&top), &self.source.relation_matrix()])
    }

    pub fn kernel(&self) -> FgAbGroup {
        Subquotient::new(&self.kernel_lattice(), &self.source.relation_matrix())
            .expect("relations lie in the kernel")
            .group()
            .clone()
    }

    pub fn image(&self) -> FgAbGroup {
        Subquotient::new(&self.image_lattice(), &self.target.relation_matrix())
            .expect("relations lie in the image lattice")
            .group()
            .clone()
    }

    pub fn cokernel(&self) -> FgAbGroup {
        group_from_presentation(&self.image_lattice())
    }

    pub fn is_injective(&self) -> bool {
        lattice_equal(&self.kernel_lattice(), &self.source.relation_matrix())
    }

    pub fn is_surjective(&self) -> bool {
        lattice_equal(&self.image_lattice(), &IntMatrix::identity(self.target.ngens()))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// Subgroup lattices agree modulo relations: the image of `f` equals the
/// kernel of `g`, with `f: A → B` and `g: B → C`.
pub fn image_equals_kernel(f: &GroupMorphism, g: &GroupMorphism) -> bool {
    assert_eq!(f.target(), g.source(), "middle groups differ");
    lattice_equal(&f.image_lattice(), &g.kernel_lattice())
}

/// The group `S / R` for lattices `R ⊆ S ⊆ Z^N`, with explicit maps between
/// ambient vectors and canonical coordinates.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    basis: IntMatrix,
    solver: LinearSolver,
    to_canon: IntMatrix,
    from_canon: IntMatrix,
    group: FgAbGroup,
}

impl Subquotient {
    /// `gens` and `rels` are column lattices in `Z^N`. The relations are
    /// added to the generators, so only `R ⊆ Z^N` is required.
    pub fn new(gens: &IntMatrix, rels: &IntMatrix) -> Result<Self> {
        if gens.rows() != rels.rows() {
            return Err(Error::Dimension(format!(
                "generators live in Z^{} but relations in Z^{}",
                gens.rows(),
                rels.rows()
            )));
        }
        let n = gens.rows();
        let all = IntMatrix::hstack(&[gens, rels]);
        let snf = smith_normal_form(&all);
        let r = snf.rank();
        let idx: Vec<usize> = (0..r).collect();
        let basis = all.mul(&snf.v.select_columns(&idx));
        let solver = LinearSolver::new(&basis);
        let p = solver
            .solve_matrix(rels)
            .expect("relations lie in the span of generators and relations");
        let ps = smith_normal_form(&p);
        let inv = ps.invariants();
        let prank = inv.len();
        let mut order: Vec<usize> = (prank..r).collect();
        let mut torsion = Vec::new();
        for (i, d) in inv.iter().enumerate() {
            if !d.is_one() {
                order.push(i);
                torsion.push(d.clone());
            }
        }
        let to_canon = ps.u.select_rows(&order);
        let from_canon = basis.mul(&ps.u_inv.select_columns(&order));
        let group = FgAbGroup {
            free_rank: r - prank,
            torsion,
            witness: None,
        };
        Ok(Subquotient {
            ambient: n,
            basis,
            solver,
            to_canon,
            from_canon,
            group,
        })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Whether `x` lies in the generating lattice `S`.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.solver.contains(x)
    }

    /// Canonical coordinates of the class of `x`, or `None` when `x ∉ S`.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.solver.solve(x)?;
        Some(self.group.reduce(&self.to_canon.mul_vec(&y)))
    }

    /// An ambient representative of the class with canonical coordinates `c`.
    pub fn lift(&self, c: &[BigInt]) -> Vec<BigInt> {
        self.from_canon.mul_vec(c)
    }

    /// Ambient representatives of the canonical generators, as columns.
    pub fn generators(&self) -> &IntMatrix {
        &self.from_canon
    }

    /// A basis of `S`.
    pub fn span_basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn is_zero_class(&self, x: &[BigInt]) -> bool {
        self.coords(x).is_some_and(|c| c.iter().all(|v| v.is_zero()))
    }

    /// The homomorphism `self → target` induced by an ambient matrix `f`.
    /// Fails when `f` does not carry `S` into the target lattice or does not
    /// respect the relations.
    pub fn induced(&self, target: &Subquotient, f: &IntMatrix) -> Result<GroupMorphism> {
        if f.shape() != (target.ambient, self.ambient) {
            return Err(Error::Dimension(format!(
                "ambient map is {}x{}, expected {}x{}",
                f.rows(),
                f.cols(),
                target.ambient,
                self.ambient
            )));
        }
        let mut cols = Vec::with_capacity(self.group.ngens());
        for j in 0..self.group.ngens() {
            let x = f.mul_vec(&self.from_canon.col(j));
            let c = target.coords(&x).ok_or_else(|| {
                Error::InvalidMorphism(format!("generator {j} maps outside the target lattice"))
            })?;
            cols.push(c);
        }
        GroupMorphism::new(
            self.group.clone(),
            target.group.clone(),
            IntMatrix::from_columns(target.group.ngens(), &cols),
        )
    }
}

/// Relation lattice of `G^k` in basis-major layout: block `i` holds the
/// cyclic coordinates of the `i`-th copy of `G`.
pub fn power_relations(g: &FgAbGroup, k: usize) -> IntMatrix {
    let lr = g.relation_matrix();
    let blocks: Vec<&IntMatrix> = std::iter::repeat_n(&lr, k).collect();
    if blocks.is_empty() {
        return IntMatrix::zeros(0, 0);
    }
    IntMatrix::block_diag(&blocks)
}

/// Hom(A, G) inside `G^{ngens(A)}`: a homomorphism is its tuple of values on
/// the canonical generators of `A`.
pub fn hom_subquotient(a: &FgAbGroup, g: &FgAbGroup) -> Subquotient {
    let c = g.ngens();
    let n = a.ngens() * c;
    let gorders = g.orders();
    let mut gens = Vec::new();
    for (i, p) in a.orders().iter().enumerate() {
        for (j, q) in gorders.iter().enumerate() {
            let scale = match (p.is_zero(), q.is_zero()) {
                (true, _) => BigInt::one(),
                (false, true) => continue,
                (false, false) => q / p.gcd(q),
            };
            let mut v = vec![BigInt::zero(); n];
            v[i * c + j] = scale;
            gens.push(v);
        }
    }
    let gens = IntMatrix::from_columns(n, &gens);
    Subquotient::new(&gens, &power_relations(g, a.ngens())).expect("relations are in range")
}

/// Ext(A, G) as `Hom(R, G) / res Hom(F, G)` for the canonical presentation
/// `F = Z^{ngens}`, `R = span(q_j e_j)`. Ambient coordinates are the values
/// on the torsion relations, one copy of `G` each.
pub fn ext_subquotient(a: &FgAbGroup, g: &FgAbGroup) -> Subquotient {
    let c = g.ngens();
    let t = a.torsion().len();
    let n = t * c;
    let gens = IntMatrix::identity(n);
    let mut rels: Vec<Vec<BigInt>> = Vec::new();
    for (i, p) in a.torsion().iter().enumerate() {
        for j in 0..c {
            let mut v = vec![BigInt::zero(); n];
            v[i * c + j] = p.clone();
            rels.push(v);
        }
    }
    let rels = IntMatrix::hstack(&[&IntMatrix::from_columns(n, &rels), &power_relations(g, t)]);
    Subquotient::new(&gens, &rels).expect("relations are in range")
}

/// Hom(φ, G): Hom(B, G) → Hom(A, G) for φ: A → B, between the groups of
/// [`hom_subquotient`].
pub fn hom_morphism(phi: &GroupMorphism, g: &FgAbGroup) -> GroupMorphism {
    let hb = hom_subquotient(phi.target(), g);
    let ha = hom_subquotient(phi.source(), g);
    let m = phi.matrix().transpose().kron_identity(g.ngens());
    hb.induced(&ha, &m).expect("precomposition is well defined")
}

/// Ext(φ, G): Ext(B, G) → Ext(A, G) for φ: A → B, between the groups of
/// [`ext_subquotient`].
pub fn ext_morphism(phi: &GroupMorphism, g: &FgAbGroup) -> GroupMorphism {
    let (a, b) = (phi.source(), phi.target());
    // lift to relations: R_B N = M R_A
    let m_ra = phi.matrix().mul(&a.relation_matrix());
    let rb = b.relation_matrix();
    let mut n = IntMatrix::zeros(b.torsion().len(), a.torsion().len());
    for i in 0..m_ra.cols() {
        for k in 0..b.torsion().len() {
            let x = m_ra.get(b.free_rank() + k, i);
            let (q, r) = x.div_rem(rb.get(b.free_rank() + k, k));
            debug_assert!(r.is_zero());
            n.set(k, i, q);
        }
    }
    let eb = ext_subquotient(b, g);
    let ea = ext_subquotient(a, g);
    eb.induced(&ea, &n.transpose().kron_identity(g.ngens()))
        .expect("pullback of relations is well defined")
}

/// A subgroup of Q given as `colim(Z --m1--> Z --m2--> ...)`, optionally with
/// a multiplier repeated forever after the listed ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneIndGroup {
    pub multipliers: Vec<BigInt>,
    pub stationary: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtClass {
    Zero,
    Fg(FgAbGroup),
    Uncountable,
}

impl fmt::Display for ExtClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtClass::Zero => write!(f, "zero"),
            ExtClass::Fg(g) => write!(f, "{g}"),
            ExtClass::Uncountable => write!(f, "uncountable"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneReport {
    pub hom: FgAbGroup,
    pub ext_class: ExtClass,
}

/// Hom(A, G) and the class of Ext(A, G) for a rank-one colimit `A`.
///
/// With no stationary multiplier, or multiplier 1, the colimit is `Z`.
/// Otherwise Hom is the limit of `G <-p- G <-p- ...`, which keeps exactly the
/// torsion prime to `p`, and Ext is `lim¹` of that tower: nonzero (and then
/// uncountable) precisely when `G` has a free summand.
pub fn rank_one_classify(a: &RankOneIndGroup, g: &FgAbGroup) -> RankOneReport {
    match &a.stationary {
        Some(p) if !p.is_one() => {
            let orders: Vec<BigInt> = g.torsion().iter().map(|q| coprime_part(q, p)).collect();
            let hom = FgAbGroup::new(0, &orders);
            let ext_class = if g.free_rank() > 0 {
                ExtClass::Uncountable
            } else {
                ExtClass::Zero
            };
            RankOneReport { hom, ext_class }
        }
        _ => RankOneReport {
            hom: g.clone(),
            ext_class: ExtClass::Zero,
        },
    }
}

/// Largest divisor of `q` sharing no prime with `p`.
fn coprime_part(q: &BigInt, p: &BigInt) -> BigInt {
    let mut q = q.clone();
    loop {
        let d = q.gcd(p);
        if d.is_one() {
            return q;
        }
        q /= d;
    }
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

    #[test]
    fn parse_and_display() {
        assert_eq!(g("Z/2+Z/4"), g("Z/4 + Z/2"));
        assert_eq!(g("Z/6").to_string(), "Z/6");
        assert_eq!(g("Z/2+Z/3").to_string(), "Z/6");
        assert_eq!(g("Z^2+Z/2+Z/9").to_string(), "Z^2 + Z/18");
        assert_eq!(g("Z + Z").to_string(), "Z^2");
        assert_eq!(g("0").to_string(), "0");
        assert_eq!(g("Z/1"), FgAbGroup::trivial());
        assert!(FgAbGroup::parse("Q").is_err());
        assert!(FgAbGroup::parse("Z/0").is_err());
        assert!(FgAbGroup::parse("").is_err());
    }

    #[test]
    fn presentations() {
        assert_eq!(group_from_presentation(&IntMatrix::from_rows(&[vec![2]], 0)), g("Z/2"));
        let r = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]], 0);
        assert_eq!(group_from_presentation(&r), g("Z/2+Z/4"));
        assert_eq!(group_from_presentation(&IntMatrix::zeros(2, 0)), g("Z^2"));
    }

    #[test]
    fn functor_examples() {
        assert_eq!(hom_group(&g("Z/6"), &g("Z")), g("0"));
        assert_eq!(hom_group(&g("Z/6"), &g("Z/4")), g("Z/2"));
        assert_eq!(hom_group(&g("Z^2"), &g("Z/2")), g("Z/2+Z/2"));
        assert_eq!(ext_group(&g("Z"), &g("Z^3+Z/5")), g("0"));
        assert_eq!(ext_group(&g("Z/2"), &g("Z/4")), g("Z/2"));
        assert_eq!(ext_group(&g("Z/6"), &g("Z")), g("Z/6"));
        assert_eq!(tensor_group(&g("Z^2"), &g("Z/2")), g("Z/2+Z/2"));
        assert_eq!(tensor_group(&g("Z/2"), &g("Z/3")), g("0"));
        assert_eq!(tensor_group(&g("Z"), &g("Z+Z/6")), g("Z+Z/6"));
        assert_eq!(dual_tensor_group(&g("Z/2"), &g("Z/2")), g("0"));
        assert_eq!(tor_group(&g("Z/4"), &g("Z/6")), g("Z/2"));
    }

    #[test]
    fn explicit_hom_and_ext_match_formulas() {
        for a in ["0", "Z", "Z/6", "Z^2+Z/4", "Z/2+Z/2"] {
            for c in ["Z", "Z/4", "Z^2+Z/2", "Z/6"] {
                let (a, c) = (g(a), g(c));
                assert_eq!(hom_subquotient(&a, &c).group(), &hom_group(&a, &c));
                assert_eq!(ext_subquotient(&a, &c).group(), &ext_group(&a, &c));
            }
        }
    }

    #[test]
    fn morphism_validity() {
        let z2 = g("Z/2");
        let z4 = g("Z/4");
        assert!(GroupMorphism::new(z2.clone(), z4.clone(), IntMatrix::from_rows(&[vec![2]], 0)).is_ok());
        assert!(GroupMorphism::new(z2.clone(), z4.clone(), IntMatrix::from_rows(&[vec![1]], 0)).is_err());
        let f = GroupMorphism::new(z4.clone(), z2.clone(), IntMatrix::from_rows(&[vec![3]], 0)).unwrap();
        assert_eq!(f.matrix(), &IntMatrix::from_rows(&[vec![1]], 0));
        assert!(f.is_surjective());
        assert!(!f.is_injective());
        assert_eq!(f.kernel(), z2);
        assert_eq!(f.image(), z2);
        assert_eq!(f.cokernel(), g("0"));
    }

    #[test]
    fn induced_functor_maps() {
        // ×2: Z/4 → Z/4 induces ×2 on Hom(-, Z/4) = Z/4 and on Ext(-, Z) = Z/4
        let z4 = g("Z/4");
        let two = GroupMorphism::new(z4.clone(), z4.clone(), IntMatrix::from_rows(&[vec![2]], 0)).unwrap();
        let h = hom_morphism(&two, &z4);
        assert_eq!(h.source(), &z4);
        assert_eq!(h.image(), g("Z/2"));
        let e = ext_morphism(&two, &g("Z"));
        assert_eq!(e.source(), &z4);
        assert_eq!(e.image(), g("Z/2"));
        let id = GroupMorphism::identity(&g("Z+Z/6"));
        assert!(hom_morphism(&id, &g("Z/3")).is_isomorphism());
    }

    #[test]
    fn subquotient_coordinates() {
        // 2Z ⊕ Z modulo span(4,0),(0,3): Z/2 ⊕ Z/3 = Z/6
        let gens = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]], 0);
        let rels = IntMatrix::from_rows(&[vec![4, 0], vec![0, 3]], 0);
        let sq = Subquotient::new(&gens, &rels).unwrap();
        assert_eq!(sq.group(), &g("Z/6"));
        assert!(sq.coords(&[b(1), b(0)]).is_none());
        assert!(sq.is_zero_class(&[b(8), b(-3)]));
        let x = [b(2), b(1)];
        let c = sq.coords(&x).unwrap();
        let back = sq.lift(&c);
        let diff: Vec<BigInt> = back.iter().zip(&x).map(|(p, q)| p - q).collect();
        assert!(sq.is_zero_class(&diff));
    }

    #[test]
    fn rank_one_examples() {
        let z = g("Z");
        let r = rank_one_classify(&RankOneIndGroup { multipliers: vec![], stationary: Some(b(1)) }, &z);
        assert_eq!(r, RankOneReport { hom: z.clone(), ext_class: ExtClass::Zero });
        let r = rank_one_classify(&RankOneIndGroup { multipliers: vec![], stationary: Some(b(2)) }, &z);
        assert_eq!(r, RankOneReport { hom: g("0"), ext_class: ExtClass::Uncountable });
        let a = RankOneIndGroup { multipliers: vec![b(2), b(3)], stationary: Some(b(1)) };
        let r = rank_one_classify(&a, &g("Z/5"));
        assert_eq!(r, RankOneReport { hom: g("Z/5"), ext_class: ExtClass::Zero });
        let a = RankOneIndGroup { multipliers: vec![], stationary: Some(b(2)) };
        let r = rank_one_classify(&a, &g("Z/12"));
        assert_eq!(r, RankOneReport { hom: g("Z/3"), ext_class: ExtClass::Zero });
    }
}
