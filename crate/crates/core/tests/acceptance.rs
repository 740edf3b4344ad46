//! Acceptance criteria 1–8, one line each. Runs without the libtest harness
//! so the summary is always printed.

use std::collections::{BTreeMap, HashSet};
use std::process::ExitCode;

use num_bigint::BigInt;
use uctkit::abgroups::{ext_group, FgAbGroup};
use uctkit::catalog;
use uctkit::complexes::{connecting_homomorphism, FreeComplex};
use uctkit::extuct::{
    cocycle_from_extension, cocycle_space, extension_from_cocycle, naturality_check, uct_report, uct_report_with,
    UctOptions,
};
use uctkit::proind::{
    asymptotic_witness, duality_check, duality_check_with, holim, space_uct_report, witness_holds, HolimOptions,
    Lim1Status, LimValue, Tower,
};
use uctkit::random::{self, SeededRng};
use uctkit::simplicial::{relative_pair, SimplicialComplex};

type Check = Result<String, String>;

fn group(s: &str) -> FgAbGroup {
    FgAbGroup::parse(s).unwrap()
}

fn coefficients() -> Vec<FgAbGroup> {
    ["Z", "Z/2", "Z/4", "Z/6", "Z^2+Z/2"].iter().map(|s| group(s)).collect()
}

fn small(x: &BigInt) -> u64 {
    u64::try_from(x).expect("small order")
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Free rank and the multiset of prime-power cyclic orders.
type Primary = (usize, BTreeMap<u64, usize>);

fn primary_of_cyclics(free: usize, orders: &[u64]) -> Primary {
    let mut pp = BTreeMap::new();
    for &o in orders {
        let mut n = o;
        let mut p = 2;
        while n > 1 {
            if n % p == 0 {
                let mut q = 1;
                while n % p == 0 {
                    n /= p;
                    q *= p;
                }
                *pp.entry(q).or_insert(0) += 1;
            }
            p += 1;
        }
    }
    (free, pp)
}

fn primary(g: &FgAbGroup) -> Primary {
    let orders: Vec<u64> = g.torsion().iter().map(small).collect();
    primary_of_cyclics(g.free_rank(), &orders)
}

/// `H ⊗ G ⊕ Tor(H', G)` from cyclic decompositions, `0` standing for `Z`.
fn tor_formula(h: &FgAbGroup, h_prev: &FgAbGroup, g: &FgAbGroup) -> Primary {
    let cyc = |x: &FgAbGroup| -> Vec<u64> {
        let mut v = vec![0; x.free_rank()];
        v.extend(x.torsion().iter().map(small));
        v
    };
    let mut free = 0;
    let mut orders = Vec::new();
    for a in cyc(h) {
        for b in cyc(g) {
            match (a, b) {
                (0, 0) => free += 1,
                (0, b) => orders.push(b),
                (a, 0) => orders.push(a),
                (a, b) => orders.push(gcd(a, b)),
            }
        }
    }
    for a in cyc(h_prev) {
        for b in cyc(g) {
            if a != 0 && b != 0 {
                orders.push(gcd(a, b));
            }
        }
    }
    primary_of_cyclics(free, &orders)
}

/// Rank over F_2 by elimination.
fn rank_mod2(rows: usize, cols: usize, entry: impl Fn(usize, usize) -> bool) -> usize {
    let mut m: Vec<Vec<bool>> = (0..rows).map(|i| (0..cols).map(|j| entry(i, j)).collect()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c]) else { continue };
        m.swap(rank, p);
        for r in 0..rows {
            if r != rank && m[r][c] {
                let pivot = m[rank].clone();
                m[r].iter_mut().zip(&pivot).for_each(|(x, p)| *x ^= p);
            }
        }
        rank += 1;
    }
    rank
}

fn betti_mod2(c: &FreeComplex, n: i64) -> usize {
    let rk = |k: i64| {
        let d = c.differential(k);
        rank_mod2(d.rows(), d.cols(), |i, j| small(&(d.get(i, j) % 2 + 2)) % 2 == 1)
    };
    c.rank(n) - rk(n) - rk(n + 1)
}

fn criterion1(rng: &mut SeededRng) -> Check {
    let gs = coefficients();
    let (mut reports, mut nontrivial_ext) = (0, 0);
    for i in 0..250 {
        let g = &gs[i % gs.len()];
        let a = random::cochain_complex(rng, 4, 4, 3);
        for n in a.lo() - 1..=a.hi() + 1 {
            let r = uct_report(&a, g, n).map_err(|e| format!("complex {i}, degree {n}: {e}"))?;
            if !r.verdicts.all() || !r.middle_is_sum {
                return Err(format!("complex {i}, G = {g}, degree {n}: {:?}", r.verdicts));
            }
            reports += 1;
            nontrivial_ext += usize::from(!r.ext_part.is_trivial());
        }
    }
    Ok(format!("250 complexes, {reports} degrees, {nontrivial_ext} with nonzero Ext part"))
}

fn criterion2(rng: &mut SeededRng) -> Check {
    let gs = coefficients();
    let z2 = group("Z/2");
    for i in 0..120 {
        let g = &gs[i % gs.len()];
        let k = random::simplicial_complex(rng, 8, 3, 6);
        let c = k.chain_complex();
        for n in 0..=k.dim() + 1 {
            let direct = c.with_coeff(g).homology(n).group;
            let r = uct_report(&c.transpose(), g, n).map_err(|e| e.to_string())?;
            let split = r.ext_part.direct_sum(&r.hom_part);
            let oracle = tor_formula(&c.homology(n).group, &c.homology(n - 1).group, g);
            if direct != split || primary(&direct) != oracle {
                return Err(format!("complex {i} ({:?}), G = {g}, n = {n}: {direct} vs {split}", k.facets()));
            }
            let d2 = c.with_coeff(&z2).homology(n).group;
            if d2.torsion().len() != betti_mod2(&c, n) {
                return Err(format!("complex {i}, n = {n}: mod 2 Betti number disagrees"));
            }
        }
    }
    Ok("120 complexes against Ext ⊕ Hom, the Tor formula and mod 2 ranks".into())
}

fn criterion3() -> Check {
    let h = |k: &SimplicialComplex, n: i64, g: &str| k.chain_complex().with_coeff(&group(g)).homology(n).group.to_string();
    let coh = |k: &SimplicialComplex, n: i64| k.chain_complex().transpose().homology(n).group.to_string();
    let via_uct = |k: &SimplicialComplex, n: i64, g: &str| {
        uct_report(&k.chain_complex().transpose(), &group(g), n).map(|r| r.middle.to_string())
    };
    let (torus, klein, rp2) = (catalog::torus(), catalog::klein(), catalog::rp2());
    let want = [
        ("∂Δ³ H_2", h(&catalog::sphere(2), 2, "Z"), "Z"),
        ("torus H_1", h(&torus, 1, "Z"), "Z^2"),
        ("torus H_1(Z/2)", h(&torus, 1, "Z/2"), "Z/2 + Z/2"),
        ("torus H_1(Z/2) via UCT", via_uct(&torus, 1, "Z/2").map_err(|e| e.to_string())?, "Z/2 + Z/2"),
        ("Klein H^1", coh(&klein, 1), "Z"),
        ("Klein H^2", coh(&klein, 2), "Z/2"),
        ("Klein H_1(Z/2)", h(&klein, 1, "Z/2"), "Z/2 + Z/2"),
        ("Klein H_1(Z/2) via UCT", via_uct(&klein, 1, "Z/2").map_err(|e| e.to_string())?, "Z/2 + Z/2"),
        ("RP² H_1", h(&rp2, 1, "Z"), "Z/2"),
    ];
    for (what, got, expected) in want {
        if got != expected {
            return Err(format!("{what} = {got}, expected {expected}"));
        }
    }
    Ok("sphere, torus, Klein bottle and RP²".into())
}

fn criterion4() -> Check {
    let t = catalog::solenoid(2).chain_tower().map_err(|e| e.to_string())?;
    let z = FgAbGroup::integers();
    let zero = FgAbGroup::new(0, &[]);
    let r0 = space_uct_report(&t, &z, 0, 6).map_err(|e| e.to_string())?;
    let r1 = space_uct_report(&t, &z, 1, 6).map_err(|e| e.to_string())?;
    let checks = [
        ("deg 0 hom", r0.hom_part.lim == LimValue::Exact(z.clone())),
        ("deg 0 lim¹ Hom", r0.lim1_hom == Lim1Status::Uncountable),
        ("deg 0 weak", r0.weak_part.lim == LimValue::Exact(z.clone())),
        ("deg 1 hom", r1.hom_part.lim == LimValue::Exact(zero.clone())),
        ("deg 1 lim Ext", r1.ext_lim.lim == LimValue::Exact(zero.clone())),
        ("deg 1 lim¹ Hom", r1.lim1_hom == Lim1Status::Zero),
        ("deg 1 weak", r1.weak_part.lim == LimValue::Exact(zero)),
        ("stage verdicts", r0.verdicts_hold() && r1.verdicts_hold()),
    ];
    for (what, ok) in checks {
        if !ok {
            return Err(format!("{what}: {} / {}", r0.to_json(), r1.to_json()));
        }
    }
    Ok("dyadic solenoid, window 6".into())
}

/// Elements of `∏ Z/o_i` as coordinate vectors.
struct Cyclics {
    orders: Vec<u64>,
    elems: Vec<Vec<u64>>,
}

impl Cyclics {
    fn new(orders: &[u64]) -> Self {
        let mut elems = vec![vec![]];
        for &o in orders {
            elems = elems
                .into_iter()
                .flat_map(|e| (0..o).map(move |x| [e.clone(), vec![x]].concat()))
                .collect();
        }
        Cyclics { orders: orders.to_vec(), elems }
    }

    fn index(&self, v: &[u64]) -> usize {
        self.elems.iter().position(|e| e == v).unwrap()
    }

    fn add(&self, x: usize, y: usize) -> usize {
        let v: Vec<u64> = (0..self.orders.len())
            .map(|i| (self.elems[x][i] + self.elems[y][i]) % self.orders[i])
            .collect();
        self.index(&v)
    }

    fn scale(&self, k: u64, x: usize) -> usize {
        let v: Vec<u64> = (0..self.orders.len()).map(|i| (k * self.elems[x][i]) % self.orders[i]).collect();
        self.index(&v)
    }

    fn order_of(&self, x: usize) -> u64 {
        (1..).find(|&k| self.scale(k, x) == 0).unwrap()
    }
}

/// Element-order histogram of `Z(A, G) / B(A, G)` by enumerating normalized
/// symmetric tables.
fn brute_ext_orders(a: &Cyclics, g: &Cyclics) -> BTreeMap<u64, usize> {
    let n = a.elems.len();
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|x| (x..n).map(move |y| (x, y))).collect();
    let table = |vals: &[usize], x: usize, y: usize| -> usize {
        if x == 0 || y == 0 {
            0
        } else {
            vals[pairs.iter().position(|&p| p == (x.min(y), x.max(y))).unwrap()]
        }
    };
    let gn = g.elems.len();
    let all = (0..pairs.len()).fold(vec![vec![]], |acc: Vec<Vec<usize>>, _| {
        acc.into_iter()
            .flat_map(|v| (0..gn).map(move |x| [v.clone(), vec![x]].concat()))
            .collect()
    });
    let cocycles: Vec<Vec<usize>> = all
        .into_iter()
        .filter(|c| {
            (0..n).all(|x| {
                (0..n).all(|y| {
                    (0..n).all(|z| {
                        g.add(table(c, x, y), table(c, a.add(x, y), z)) == g.add(table(c, y, z), table(c, x, a.add(y, z)))
                    })
                })
            })
        })
        .collect();
    let neg = |v: usize| (0..gn).find(|&w| g.add(v, w) == 0).unwrap();
    let hs = (1..n).fold(vec![vec![0]], |acc: Vec<Vec<usize>>, _| {
        acc.into_iter()
            .flat_map(|v| (0..gn).map(move |x| [v.clone(), vec![x]].concat()))
            .collect()
    });
    let coboundaries: HashSet<Vec<usize>> = hs
        .iter()
        .map(|h| pairs.iter().map(|&(x, y)| g.add(g.add(h[x], h[y]), neg(h[a.add(x, y)]))).collect())
        .collect();
    let mut hist = BTreeMap::new();
    for c in &cocycles {
        let k = (1..)
            .find(|&k| {
                let kc: Vec<usize> = c.iter().map(|&v| g.scale(k, v)).collect();
                coboundaries.contains(&kc)
            })
            .unwrap();
        *hist.entry(k).or_insert(0) += 1;
    }
    hist.values_mut().for_each(|v| *v /= coboundaries.len());
    hist
}

fn criterion5() -> Check {
    let specs: [&[u64]; 4] = [&[2], &[3], &[4], &[2, 2]];
    let fg = |o: &[u64]| FgAbGroup::new(0, &o.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
    let mut round_trips = 0;
    for sa in specs {
        for sg in specs {
            let (a, g) = (fg(sa), fg(sg));
            let e = ext_group(&a, &g);
            let space = cocycle_space(&a, &g, 16).map_err(|e| e.to_string())?;
            if space.ext() != &e {
                return Err(format!("Ext({a}, {g}): cocycles give {}, presentation gives {e}", space.ext()));
            }
            let invariants: Vec<u64> = e.torsion().iter().map(small).collect();
            let ext_elems = Cyclics::new(&invariants);
            let mut want = BTreeMap::new();
            for x in 0..ext_elems.elems.len() {
                *want.entry(ext_elems.order_of(x)).or_insert(0) += 1;
            }
            if brute_ext_orders(&Cyclics::new(sa), &Cyclics::new(sg)) != want {
                return Err(format!("Ext({a}, {g}): enumeration disagrees with {e}"));
            }
            for class in &ext_elems.elems {
                let class: Vec<BigInt> = class.iter().map(|&x| BigInt::from(x)).collect();
                let c = space.representative(&class);
                let ext = extension_from_cocycle(&c)
                    .and_then(|x| x.to_abstract())
                    .map_err(|e| e.to_string())?;
                let t = ext.canonical_transversal();
                let back = cocycle_from_extension(&ext, &t, &g).map_err(|e| e.to_string())?;
                if space.class_of(&back).map_err(|e| e.to_string())? != class {
                    return Err(format!("Ext({a}, {g}): class {class:?} does not survive the round trip"));
                }
                round_trips += 1;
            }
        }
    }
    Ok(format!("16 pairs, {round_trips} classes round-tripped"))
}

fn criterion6(rng: &mut SeededRng) -> Check {
    let s = relative_pair(
        &SimplicialComplex::simplex(&[0, 1, 2]),
        &SimplicialComplex::simplex_boundary(&[0, 1, 2]),
    )
    .map_err(|e| e.to_string())?;
    let d = connecting_homomorphism(&s, 2).map_err(|e| e.to_string())?;
    if !d.is_isomorphism() || d.source().to_string() != "Z" {
        return Err(format!("d_2 is not an isomorphism Z → Z: {d:?}"));
    }
    for k in 0..20 {
        let alt = s
            .with_alternative_sections(&random::section_change(rng, &s, 4))
            .map_err(|e| e.to_string())?;
        if connecting_homomorphism(&alt, 2).map_err(|e| e.to_string())? != d {
            return Err(format!("section choice {k} changes d_2"));
        }
    }
    let gs = coefficients();
    for i in 0..50 {
        let g = &gs[i % gs.len()];
        let ses = random::cochain_ses(rng, 4, 2, 2);
        for n in ses.degrees() {
            let v = naturality_check(&ses, g, n).map_err(|e| e.to_string())?;
            if !v.holds() {
                return Err(format!("sequence {i}, G = {g}, degree {n}: {v:?}"));
            }
        }
    }
    Ok("(Δ², ∂Δ²), 20 section choices, 50 sequences".into())
}

fn dd_zero(h: &FreeComplex) -> bool {
    let s = h.orientation().step();
    (h.lo() - 1..=h.hi() + 1).all(|n| h.differential(n + s).mul(&h.differential(n)).is_zero())
}

fn witness_exact(rng: &mut SeededRng, t: &Tower, g: &FgAbGroup) -> Result<bool, String> {
    let depth = t.clamp(4);
    let h = holim(t, depth).map_err(|e| e.to_string())?.with_coeff(g);
    for n in h.base().lo()..=h.base().hi() {
        let u = random::matrix(rng, h.dim(n + 1), 1, 3).col(0);
        let z = h.differential(n + 1).mul_vec(&u);
        let w = asymptotic_witness(t, g, depth, n, &z, depth).map_err(|e| e.to_string())?;
        if !witness_holds(t, g, depth, n, &z, &w, depth).map_err(|e| e.to_string())? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn criterion7(rng: &mut SeededRng) -> Check {
    let z4 = group("Z/4");
    for i in 0..50 {
        let window = 1 + i % 4;
        let t = random::tower(rng, window, 3);
        let h = holim(&t, 4).map_err(|e| e.to_string())?;
        if !dd_zero(&h) {
            return Err(format!("tower {i}: d∘d ≠ 0 on holim"));
        }
        let s = random::ind_sequence(rng, window, 3);
        if !duality_check(&s, &z4, window).map_err(|e| e.to_string())? {
            return Err(format!("sequence {i}: hocolim dual differs from holim of duals"));
        }
        if !witness_exact(rng, &t, &z4)? {
            return Err(format!("tower {i}: asymptotic witness fails"));
        }
    }
    Ok("50 towers and 50 sequences, G = Z/4".into())
}

fn criterion8(rng: &mut SeededRng) -> Check {
    let gs = coefficients();
    let drop_sign = UctOptions { drop_coindex_sign: true };
    let sign_caught = (0..300).find(|i| {
        let a = random::cochain_complex(rng, 4, 4, 3);
        let g = &gs[i % gs.len()];
        (a.lo() - 1..=a.hi() + 1).any(|n| {
            let honest = uct_report(&a, g, n).is_ok_and(|r| r.verdicts.all() && r.middle_is_sum);
            let mutated = uct_report_with(&a, g, n, drop_sign).is_ok_and(|r| r.verdicts.all() && r.middle_is_sum);
            honest && !mutated
        })
    });
    let z4 = group("Z/4");
    let drop_tel = HolimOptions { drop_telescoping: true };
    let tel_caught = (0..300).find(|i| {
        let window = 1 + i % 4;
        let s = random::ind_sequence(rng, window, 3);
        duality_check(&s, &z4, window).unwrap_or(false)
            && !duality_check_with(&s, &z4, window, drop_tel).unwrap_or(false)
    });
    match (sign_caught, tel_caught) {
        (Some(a), Some(b)) => Ok(format!("sign mutation caught at item {a}, telescoping mutation at item {b}")),
        (a, b) => Err(format!("mutations survived: sign caught {a:?}, telescoping caught {b:?}")),
    }
}

fn main() -> ExitCode {
    let mut rng = random::rng(20240531);
    let results: Vec<(&str, Check)> = vec![
        ("1 random UCT sequences", criterion1(&mut rng)),
        ("2 simplicial homology oracle", criterion2(&mut rng)),
        ("3 named spaces", criterion3()),
        ("4 solenoid", criterion4()),
        ("5 cocycles and extensions", criterion5()),
        ("6 pairs and naturality", criterion6(&mut rng)),
        ("7 towers and sequences", criterion7(&mut rng)),
        ("8 mutations detected", criterion8(&mut rng)),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(msg) => println!("criterion {name}: pass ({msg})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({msg})");
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
