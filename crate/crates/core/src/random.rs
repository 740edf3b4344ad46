//! Seeded generators for complexes, sequences, towers and cells.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complexes::{ChainHomotopy, ChainMap, FreeComplex, LocallySplitSes, Orientation};
use crate::intlat::IntMatrix;
use crate::proind::{IndSequence, OneCell, Tail, Tower};
use crate::simplicial::SimplicialComplex;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every `v ∈ [-range, range]^len` with `v·d = 0` whose first `zeros`
/// entries vanish. `d` has `len` rows.
fn annihilating_rows(d: &IntMatrix, range: i64, zeros: usize) -> Vec<Vec<i64>> {
    let len = d.rows();
    let mut out = Vec::new();
    let mut v = vec![-range; len];
    for z in v.iter_mut().take(zeros) {
        *z = 0;
    }
    loop {
        let ok = (0..d.cols()).all(|j| {
            let s: BigInt = (0..len).map(|i| d.get(i, j) * v[i]).sum();
            s == BigInt::from(0)
        });
        if ok {
            out.push(v.clone());
        }
        // odometer over the free coordinates
        let mut i = zeros;
        loop {
            if i == len {
                return out;
            }
            if v[i] < range {
                v[i] += 1;
                break;
            }
            v[i] = -range;
            i += 1;
        }
    }
}

/// A cochain complex on `A ⊕ C` in which `A` (the first `a[k]` basis
/// vectors of each degree) is a subcomplex. Degrees run from `lo`.
fn filtered_cochain<R: Rng>(rng: &mut R, lo: i64, a: &[usize], c: &[usize], range: i64) -> FreeComplex {
    let ranks: Vec<usize> = a.iter().zip(c).map(|(x, y)| x + y).collect();
    let k = ranks.len();
    let mut diffs: Vec<IntMatrix> = Vec::with_capacity(k);
    for n in 0..k {
        let rows = if n + 1 < k { ranks[n + 1] } else { 0 };
        let prev = if n == 0 {
            IntMatrix::zeros(ranks[0], 0)
        } else {
            diffs[n - 1].clone()
        };
        let mut d = IntMatrix::zeros(rows, ranks[n]);
        if rows > 0 {
            // rows of δ^n must annihilate δ^{n-1}; C-rows vanish on A-columns
            let pool_a = annihilating_rows(&prev, range, 0);
            let pool_c = annihilating_rows(&prev, range, a[n]);
            for r in 0..rows {
                let pool = if r < a[n + 1] { &pool_a } else { &pool_c };
                let row = if rng.gen_bool(0.25) {
                    vec![0; ranks[n]]
                } else {
                    pool.choose(rng).cloned().unwrap_or_else(|| vec![0; ranks[n]])
                };
                for (j, x) in row.into_iter().enumerate() {
                    d.set(r, j, x.into());
                }
            }
        }
        diffs.push(d);
    }
    FreeComplex::new(Orientation::Cochain, lo, ranks, diffs).expect("rows annihilate the previous differential")
}

/// A random cochain complex with up to `max_degrees` nonzero degrees, ranks
/// up to `max_rank` and entries in `[-range, range]`.
pub fn cochain_complex<R: Rng>(rng: &mut R, max_degrees: usize, max_rank: usize, range: i64) -> FreeComplex {
    let k = rng.gen_range(1..=max_degrees);
    let lo = rng.gen_range(-1..=1);
    let c: Vec<usize> = (0..k).map(|_| rng.gen_range(0..=max_rank)).collect();
    filtered_cochain(rng, lo, &vec![0; k], &c, range)
}

pub fn chain_complex<R: Rng>(rng: &mut R, max_degrees: usize, max_rank: usize, range: i64) -> FreeComplex {
    cochain_complex(rng, max_degrees, max_rank, range).transpose()
}

/// A random locally split sequence `0 → A → A ⊕ C → C → 0` of cochain
/// complexes with the standard splittings; the twisting block of the middle
/// differential is random, so connecting maps are usually nonzero.
pub fn cochain_ses<R: Rng>(rng: &mut R, max_degrees: usize, max_part: usize, range: i64) -> LocallySplitSes {
    let k = rng.gen_range(1..=max_degrees);
    let lo = rng.gen_range(-1..=1);
    let a: Vec<usize> = (0..k).map(|_| rng.gen_range(0..=max_part)).collect();
    let c: Vec<usize> = (0..k).map(|_| rng.gen_range(0..=max_part)).collect();
    let b = filtered_cochain(rng, lo, &a, &c, range);
    split_sequence(&b, lo, &a, &c)
}

fn split_sequence(b: &FreeComplex, lo: i64, a: &[usize], c: &[usize]) -> LocallySplitSes {
    let k = a.len();
    let idx = |n: usize| -> (Vec<usize>, Vec<usize>) { ((0..a[n]).collect(), (a[n]..a[n] + c[n]).collect()) };
    let block = |n: usize, rows: &[usize], cols: &[usize]| b.differential(lo + n as i64).select_rows(rows).select_columns(cols);
    let mut da = Vec::with_capacity(k);
    let mut dc = Vec::with_capacity(k);
    for n in 0..k {
        let (an, cn) = idx(n);
        let (an1, cn1) = if n + 1 < k { idx(n + 1) } else { (Vec::new(), Vec::new()) };
        da.push(block(n, &an1, &an));
        dc.push(block(n, &cn1, &cn));
    }
    let fa = FreeComplex::new(Orientation::Cochain, lo, a.to_vec(), da).expect("A is a subcomplex");
    let fc = FreeComplex::new(Orientation::Cochain, lo, c.to_vec(), dc).expect("C is a quotient complex");
    let mut i = BTreeMap::new();
    let mut pi = BTreeMap::new();
    let mut i_dag = BTreeMap::new();
    let mut pi_dag = BTreeMap::new();
    for n in 0..k {
        let deg = lo + n as i64;
        let (an, cn) = idx(n);
        let id = IntMatrix::identity(a[n] + c[n]);
        i.insert(deg, id.select_columns(&an));
        pi.insert(deg, id.select_rows(&cn));
        i_dag.insert(deg, id.select_rows(&an));
        pi_dag.insert(deg, id.select_columns(&cn));
    }
    let i = ChainMap::new(fa, b.clone(), i).expect("inclusion of a subcomplex");
    let pi = ChainMap::new(b.clone(), fc, pi).expect("projection to the quotient");
    LocallySplitSes::new(i, pi, i_dag, pi_dag).expect("standard splittings")
}

/// Random `X_n: C_n → A_n` for changing the splittings of `s`.
pub fn section_change<R: Rng>(rng: &mut R, s: &LocallySplitSes, range: i64) -> BTreeMap<i64, IntMatrix> {
    s.degrees()
        .map(|n| (n, matrix(rng, s.a().rank(n), s.c().rank(n), range)))
        .collect()
}

pub fn matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, range: i64) -> IntMatrix {
    let data = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-range..=range))).collect();
    IntMatrix::from_vec(rows, cols, data)
}

/// A random homotopy `A → B` with entries in `[-range, range]`.
pub fn homotopy<R: Rng>(rng: &mut R, a: &FreeComplex, b: &FreeComplex, range: i64) -> ChainHomotopy {
    let s = a.orientation().step();
    let blocks = a
        .degrees()
        .map(|n| (n, matrix(rng, b.rank(n - s), a.rank(n), range)))
        .collect();
    ChainHomotopy::new_unchecked(a.clone(), b.clone(), blocks).expect("shapes match")
}

/// `c·id + ∂L + L∂` for a random scalar `c` and homotopy `L`.
pub fn self_map<R: Rng>(rng: &mut R, a: &FreeComplex) -> ChainMap {
    let c = rng.gen_range(-2..=2i64);
    let scaled: BTreeMap<i64, IntMatrix> = a.degrees().map(|n| (n, IntMatrix::scalar(a.rank(n), c))).collect();
    let f = ChainMap::new(a.clone(), a.clone(), scaled).expect("scalar map");
    homotopy(rng, a, a, 1).perturb(&f).expect("perturbation of a chain map")
}

/// A tower of copies of one random chain complex with random self-maps
/// as bonding maps, `window + 1` stages.
pub fn tower<R: Rng>(rng: &mut R, window: usize, max_rank: usize) -> Tower {
    let a = chain_complex(rng, 3, max_rank, 2);
    let stages = vec![a.clone(); window + 1];
    let bonding = (0..window).map(|_| self_map(rng, &a)).collect();
    Tower::new(stages, bonding, Tail::Finite).expect("consecutive self-maps")
}

pub fn ind_sequence<R: Rng>(rng: &mut R, window: usize, max_rank: usize) -> IndSequence {
    let a = cochain_complex(rng, 3, max_rank, 2);
    let stages = vec![a.clone(); window + 1];
    let maps = (0..window).map(|_| self_map(rng, &a)).collect();
    IndSequence::new(stages, maps, Tail::Finite).expect("consecutive self-maps")
}

/// `f^{(k)} = id + ∂h_k + h_k∂` with `f^{(k,k+1)} = h_k p - p h_{k+1}`.
pub fn one_cell<R: Rng>(rng: &mut R, t: &Tower, window: usize) -> OneCell {
    let k = t.clamp(window);
    let hs: Vec<ChainHomotopy> = (0..=k).map(|m| homotopy(rng, t.stage(m), t.stage(m), 1)).collect();
    let maps = (0..=k)
        .map(|m| hs[m].perturb(&ChainMap::identity(t.stage(m))).expect("perturbed identity"))
        .collect();
    let homotopies = (0..k)
        .map(|m| {
            let p = t.bonding(m);
            hs[m].pre_compose(p).add(&hs[m + 1].post_compose(p).neg())
        })
        .collect();
    OneCell::new(t.clone(), t.clone(), (0..=k).collect(), maps, homotopies).expect("perturbed identity 1-cell")
}

/// `f^{(k)} = p^{(k, k+1)}` with `m_k = k + 1`.
pub fn shift_cell(t: &Tower, window: usize) -> OneCell {
    let k = t.clamp(window + 1).saturating_sub(1).min(window);
    OneCell::new(
        t.clone(),
        t.clone(),
        (1..=k + 1).collect(),
        (0..=k).map(|m| t.bonding(m).clone()).collect(),
        (0..k).map(|m| ChainHomotopy::zero(t.stage(m + 2), t.stage(m))).collect(),
    )
    .expect("bonding maps form a 1-cell")
}

/// Up to `max_facets` random facets of dimension at most `max_dim` on
/// `max_vertices` vertices.
pub fn simplicial_complex<R: Rng>(rng: &mut R, max_vertices: usize, max_dim: usize, max_facets: usize) -> SimplicialComplex {
    let nv = rng.gen_range(1..=max_vertices) as i64;
    let nf = rng.gen_range(1..=max_facets);
    let mut facets = Vec::with_capacity(nf);
    for _ in 0..nf {
        let size = rng.gen_range(1..=(max_dim + 1).min(nv as usize));
        let mut verts: Vec<i64> = (0..nv).collect();
        verts.shuffle(rng);
        let f: BTreeSet<i64> = verts.into_iter().take(size).collect();
        facets.push(f.into_iter().collect::<Vec<_>>());
    }
    SimplicialComplex::from_facets(&facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proind::verify_one_cell;

    #[test]
    fn generators_produce_valid_objects() {
        let mut r = rng(7);
        for _ in 0..20 {
            let a = cochain_complex(&mut r, 4, 4, 3);
            assert!(a.degrees().count() <= 4);
            let s = cochain_ses(&mut r, 3, 2, 2);
            s.validate().unwrap();
            s.with_alternative_sections(&section_change(&mut r, &s, 3)).unwrap();
            let t = tower(&mut r, 3, 2);
            verify_one_cell(&one_cell(&mut r, &t, 3)).unwrap();
            verify_one_cell(&shift_cell(&t, 3)).unwrap();
            let k = simplicial_complex(&mut r, 8, 3, 6);
            assert!(k.dim() <= 3);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = cochain_complex(&mut rng(42), 4, 4, 3);
        let b = cochain_complex(&mut rng(42), 4, 4, 3);
        assert_eq!(a, b);
    }
}
