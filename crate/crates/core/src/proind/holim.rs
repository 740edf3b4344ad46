//! Windowed `holim` and `hocolim` complexes and their maps. Bases are
//! stage-major: for each stage `m` the block of `A_n^{(m)}` comes first,
//! then (for `m` below the window end) the block of `A_{n+1}^{(m)}` holding
//! `z_{m,m+1}`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{IndOneCell, IndSequence, OneCell, Tower};
use crate::abgroups::{FgAbGroup, GroupMorphism, Subquotient};
use crate::complexes::{g_dual, ChainMap, FreeComplex, Orientation};
use crate::error::{Error, Result};
use crate::intlat::{lattice_intersection, IntMatrix, LinearSolver};

/// Switches for mutation tests.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default)]
pub struct HolimOptions {
    pub drop_telescoping: bool,
}

struct Layout {
    s_off: Vec<usize>,
    p_off: Vec<usize>,
    total: usize,
}

fn layout(rank: &dyn Fn(usize, i64) -> usize, depth: usize, n: i64) -> Layout {
    let mut s_off = Vec::with_capacity(depth + 1);
    let mut p_off = Vec::with_capacity(depth);
    let mut cur = 0;
    for m in 0..=depth {
        s_off.push(cur);
        cur += rank(m, n);
        if m < depth {
            p_off.push(cur);
            cur += rank(m, n + 1);
        }
    }
    Layout { s_off, p_off, total: cur }
}

fn sign(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

fn degree_span<'a>(stages: impl Iterator<Item = &'a FreeComplex>) -> Option<(i64, i64)> {
    let mut out: Option<(i64, i64)> = None;
    for s in stages {
        if s.hi() < s.lo() {
            continue;
        }
        out = Some(match out {
            None => (s.lo(), s.hi()),
            Some((a, b)) => (a.min(s.lo()), b.max(s.hi())),
        });
    }
    out.map(|(a, b)| (a - 1, b))
}

pub fn holim(t: &Tower, depth: usize) -> Result<FreeComplex> {
    holim_with(t, depth, HolimOptions::default())
}

/// `holim` on stages `0..=depth` with
/// `(dz)_m = ∂z_m` and `(dz)_{m,m+1} = ∂z_{m,m+1} + (-1)^n (p z_{m+1} - z_m)`.
#[doc(hidden)]
pub fn holim_with(t: &Tower, depth: usize, opts: HolimOptions) -> Result<FreeComplex> {
    let big_n = t.clamp(depth);
    let Some((lo, hi)) = degree_span((0..=big_n).map(|m| t.stage(m))) else {
        return Ok(FreeComplex::zero(Orientation::Chain));
    };
    let rank = |m: usize, n: i64| t.stage(m).rank(n);
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        let (src, dst) = (layout(&rank, big_n, n), layout(&rank, big_n, n - 1));
        let mut d = IntMatrix::zeros(dst.total, src.total);
        for m in 0..=big_n {
            d.paste(dst.s_off[m], src.s_off[m], &t.stage(m).differential(n));
            if m < big_n {
                d.paste(dst.p_off[m], src.p_off[m], &t.stage(m).differential(n + 1));
                if !opts.drop_telescoping {
                    let neg = sign(n);
                    d.paste_add(dst.p_off[m], src.s_off[m], &IntMatrix::identity(rank(m, n)).signed(!neg));
                    d.paste_add(dst.p_off[m], src.s_off[m + 1], &t.bonding(m).block(n).signed(neg));
                }
            }
        }
        ranks.push(src.total);
        diffs.push(d);
    }
    FreeComplex::new(Orientation::Chain, lo, ranks, diffs)
}

/// `f^{(∞)}: holim A → holim B` on the window of `f`:
/// `f(z)_k = f^{(k)}(z_{m_k})` and
/// `f(z)_{k,k+1} = f^{(k)}(z_{m_k, m_{k+1}}) + (-1)^n f^{(k,k+1)}(z_{m_{k+1}})`.
pub fn holim_map(f: &OneCell) -> Result<ChainMap> {
    let big_k = f.window();
    let ms = f.reindex();
    let (sa, sb) = (f.source(), f.target());
    let ha = holim(&sa.truncated(ms[big_k]), ms[big_k])?;
    let hb = holim(&sb.truncated(big_k), big_k)?;
    let ra = |m: usize, n: i64| sa.stage(m).rank(n);
    let rb = |k: usize, n: i64| sb.stage(k).rank(n);
    let lo = ha.lo().min(hb.lo());
    let hi = ha.hi().max(hb.hi());
    let mut blocks = std::collections::BTreeMap::new();
    for n in lo..=hi {
        let (la, lb) = (layout(&ra, ms[big_k], n), layout(&rb, big_k, n));
        let mut m = IntMatrix::zeros(lb.total, la.total);
        for k in 0..=big_k {
            m.paste(lb.s_off[k], la.s_off[ms[k]], &f.map(k).block(n));
            if k < big_k {
                for j in ms[k]..ms[k + 1] {
                    let blk = f.map(k).block(n + 1).mul(&sa.composite(ms[k], j).block(n + 1));
                    m.paste_add(lb.p_off[k], la.p_off[j], &blk);
                }
                m.paste_add(lb.p_off[k], la.s_off[ms[k + 1]], &f.homotopy(k).block(n).signed(sign(n)));
            }
        }
        blocks.insert(n, m);
    }
    ChainMap::new(ha, hb, blocks)
}

/// `hocolim` on stages `0..=depth` with `d(z e_l) = (δz) e_l` and
/// `d(w e_{l,l+1}) = (δw) e_{l,l+1} + (-1)^n (w e_l - η(w) e_{l+1})`.
pub fn hocolim(s: &IndSequence, depth: usize) -> Result<FreeComplex> {
    let big_n = s.clamp(depth);
    let Some((lo, hi)) = degree_span((0..=big_n).map(|l| s.stage(l))) else {
        return Ok(FreeComplex::zero(Orientation::Cochain));
    };
    let rank = |l: usize, n: i64| s.stage(l).rank(n);
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        let (src, dst) = (layout(&rank, big_n, n), layout(&rank, big_n, n + 1));
        let mut d = IntMatrix::zeros(dst.total, src.total);
        for l in 0..=big_n {
            d.paste(dst.s_off[l], src.s_off[l], &s.stage(l).differential(n));
            if l < big_n {
                let neg = sign(n);
                d.paste(dst.p_off[l], src.p_off[l], &s.stage(l).differential(n + 1));
                d.paste_add(dst.s_off[l], src.p_off[l], &IntMatrix::identity(rank(l, n + 1)).signed(neg));
                d.paste_add(dst.s_off[l + 1], src.p_off[l], &s.map(l).block(n + 1).signed(!neg));
            }
        }
        ranks.push(src.total);
        diffs.push(d);
    }
    FreeComplex::new(Orientation::Cochain, lo, ranks, diffs)
}

/// `f_(∞)(z e_l) = f_(l)(z) e_{t_l}` and
/// `f_(∞)(w e_{l,l+1}) = f_(l)(w) e_{t_l, t_{l+1}} + (-1)^n f_(l+1,l)(w) e_{t_{l+1}}`.
pub fn hocolim_map(f: &IndOneCell) -> Result<ChainMap> {
    f.verify()?;
    let big_l = f.window();
    let ts = &f.reindex;
    let (sa, sb) = (&f.source, &f.target);
    let ha = hocolim(sa, big_l)?;
    let hb = hocolim(sb, ts[big_l])?;
    let ra = |l: usize, n: i64| sa.stage(l).rank(n);
    let rb = |l: usize, n: i64| sb.stage(l).rank(n);
    let lo = ha.lo().min(hb.lo());
    let hi = ha.hi().max(hb.hi());
    let mut blocks = std::collections::BTreeMap::new();
    for n in lo..=hi {
        let (la, lb) = (layout(&ra, big_l, n), layout(&rb, ts[big_l], n));
        let mut m = IntMatrix::zeros(lb.total, la.total);
        for l in 0..=big_l {
            m.paste(lb.s_off[ts[l]], la.s_off[l], &f.maps[l].block(n));
            if l < big_l {
                let fw = f.maps[l].block(n + 1);
                for j in ts[l]..ts[l + 1] {
                    m.paste_add(lb.p_off[j], la.p_off[l], &sb.composite(j, ts[l]).block(n + 1).mul(&fw));
                }
                m.paste_add(lb.s_off[ts[l + 1]], la.p_off[l], &f.homotopies[l].block(n + 1).signed(sign(n)));
            }
        }
        blocks.insert(n, m);
    }
    ChainMap::new(ha, hb, blocks)
}

/// Whether the `G`-dual of `hocolim S` and `holim` of the dual tower have
/// identical differentials in every degree.
pub fn duality_check(s: &IndSequence, g: &FgAbGroup, depth: usize) -> Result<bool> {
    duality_check_with(s, g, depth, HolimOptions::default())
}

#[doc(hidden)]
pub fn duality_check_with(s: &IndSequence, g: &FgAbGroup, depth: usize, opts: HolimOptions) -> Result<bool> {
    let lhs = g_dual(&hocolim(s, depth)?, g)?;
    let rhs = holim_with(&s.dual(), depth, opts)?.with_coeff(g);
    let lo = lhs.base().lo().min(rhs.base().lo()) - 1;
    let hi = lhs.base().hi().max(rhs.base().hi()) + 1;
    Ok((lo..=hi).all(|n| lhs.differential(n) == rhs.differential(n)))
}

/// `Local: H_n(holim A; G) → ∏_k H_n(A^{(k)}; G)` on a window.
#[derive(Clone, Debug)]
pub struct LocalReport {
    pub degree: i64,
    pub holim_homology: FgAbGroup,
    /// `z ↦ [z_k]` for each stage of the window.
    pub components: Vec<GroupMorphism>,
    /// `H(p) ∘ Local_{k+1} = Local_k` for every `k`.
    pub lands_in_lim: bool,
    /// Whether the top component is onto, so the image is the whole limit
    /// of the finite window.
    pub top_surjective: bool,
    pub kernel: FgAbGroup,
}

pub fn local_map(t: &Tower, g: &FgAbGroup, depth: usize, n: i64) -> Result<LocalReport> {
    let big_n = t.clamp(depth);
    let c = g.ngens();
    let h = holim(t, big_n)?.with_coeff(g).homology(n);
    let rank = |m: usize, d: i64| t.stage(m).rank(d);
    let lay = layout(&rank, big_n, n);
    let mut components = Vec::with_capacity(big_n + 1);
    for k in 0..=big_n {
        let hk = t.stage(k).with_coeff(g).homology(n);
        let rk = rank(k, n) * c;
        let mut proj = IntMatrix::zeros(rk, lay.total * c);
        proj.paste(0, lay.s_off[k] * c, &IntMatrix::identity(rk));
        components.push(h.subquotient().induced(hk.subquotient(), &proj)?);
    }
    let mut lands_in_lim = true;
    for k in 0..big_n {
        let p = t.bonding(k).on_homology(g, n)?;
        lands_in_lim &= p.compose(&components[k + 1])? == components[k];
    }
    let rels = h.group.relation_matrix();
    let mut ker = IntMatrix::identity(h.group.ngens());
    for comp in &components {
        ker = lattice_intersection(&ker, &comp.kernel_lattice());
    }
    let kernel = Subquotient::new(&ker, &rels)?.group().clone();
    Ok(LocalReport {
        degree: n,
        holim_homology: h.group.clone(),
        top_surjective: components[big_n].is_surjective(),
        components,
        lands_in_lim,
        kernel,
    })
}

/// For a cycle `z ∈ C_n(holim A; G)` whose stage classes vanish up to
/// `m0`, builds `w ∈ C_{n+1}` with `w_{m0}` a primitive of `z_{m0}`,
/// `w_k = (-1)^n z_{k,k+1} + p(w_{k+1})` below `m0`, and all other
/// components zero.
pub fn asymptotic_witness(
    t: &Tower,
    g: &FgAbGroup,
    depth: usize,
    n: i64,
    z: &[BigInt],
    m0: usize,
) -> Result<Vec<BigInt>> {
    let big_n = t.clamp(depth);
    if m0 > big_n {
        return Err(Error::Incompatible(format!("m0 = {m0} is beyond the window {big_n}")));
    }
    let c = g.ngens();
    let rank = |m: usize, d: i64| t.stage(m).rank(d);
    let (ln, ln1) = (layout(&rank, big_n, n), layout(&rank, big_n, n + 1));
    if z.len() != ln.total * c {
        return Err(Error::Dimension(format!("z has length {}, expected {}", z.len(), ln.total * c)));
    }
    let part = |off: usize, len: usize| z[off * c..(off + len) * c].to_vec();
    for m in 0..=m0 {
        let hm = t.stage(m).with_coeff(g).homology(n);
        if !hm.is_boundary(&part(ln.s_off[m], rank(m, n))) {
            return Err(Error::NonvanishingClass(m));
        }
    }
    let gc = t.stage(m0).with_coeff(g);
    let lhs = IntMatrix::hstack(&[&gc.differential(n + 1), &gc.relations(n)]);
    let x = LinearSolver::new(&lhs)
        .solve(&part(ln.s_off[m0], rank(m0, n)))
        .ok_or(Error::NonvanishingClass(m0))?;
    let mut w_k: Vec<BigInt> = x[..rank(m0, n + 1) * c].to_vec();
    let mut w = vec![BigInt::zero(); ln1.total * c];
    let reduce = |v: Vec<BigInt>| -> Vec<BigInt> { reduce_blocks(g, &v) };
    w_k = reduce(w_k);
    place(&mut w, ln1.s_off[m0] * c, &w_k);
    for k in (0..m0).rev() {
        let pk = t.bonding(k).block(n + 1).kron_identity(c).mul_vec(&w_k);
        let zk = part(ln.p_off[k], rank(k, n + 1));
        let neg = sign(n);
        w_k = reduce(
            zk.iter()
                .zip(&pk)
                .map(|(a, b)| if neg { b - a } else { a + b })
                .collect(),
        );
        place(&mut w, ln1.s_off[k] * c, &w_k);
    }
    Ok(w)
}

/// Checks `(dw)_m = z_m` for `m ≤ m0` and `(dw)_{k,k+1} = z_{k,k+1}` for
/// `k < m0`, modulo the relations of `G`.
pub fn witness_holds(t: &Tower, g: &FgAbGroup, depth: usize, n: i64, z: &[BigInt], w: &[BigInt], m0: usize) -> Result<bool> {
    let big_n = t.clamp(depth);
    let c = g.ngens();
    let hol = holim(t, big_n)?.with_coeff(g);
    let dw = hol.differential(n + 1).mul_vec(w);
    let rank = |m: usize, d: i64| t.stage(m).rank(d);
    let ln = layout(&rank, big_n, n);
    let same = |off: usize, len: usize| {
        let diff: Vec<BigInt> = (off * c..(off + len) * c).map(|i| &dw[i] - &z[i]).collect();
        reduce_blocks(g, &diff).iter().all(Zero::is_zero)
    };
    let stages = (0..=m0).all(|m| same(ln.s_off[m], rank(m, n)));
    let pairs = (0..m0).all(|k| same(ln.p_off[k], rank(k, n + 1)));
    Ok(stages && pairs)
}

fn reduce_blocks(g: &FgAbGroup, v: &[BigInt]) -> Vec<BigInt> {
    let c = g.ngens();
    if c == 0 {
        return Vec::new();
    }
    v.chunks(c).flat_map(|b| g.reduce(b)).collect()
}

fn place(w: &mut [BigInt], off: usize, v: &[BigInt]) {
    w[off..off + v.len()].clone_from_slice(v);
}
