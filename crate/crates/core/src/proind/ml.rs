//! Mittag-Leffler decisions for towers of finitely generated groups.

use serde_json::{json, Value};

use super::Tail;
use crate::abgroups::{FgAbGroup, GroupMorphism, Subquotient};
use crate::error::{Error, Result};
use crate::intlat::{lattice_equal, IntMatrix};

/// Groups with `maps[m]: groups[m+1] → groups[m]`.
#[derive(Clone, Debug)]
pub struct GroupTower {
    groups: Vec<FgAbGroup>,
    maps: Vec<GroupMorphism>,
    tail: Tail,
}

impl GroupTower {
    pub fn new(groups: Vec<FgAbGroup>, maps: Vec<GroupMorphism>, tail: Tail) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::Incompatible("a tower needs at least one group".into()));
        }
        let want = match tail {
            Tail::Finite => groups.len() - 1,
            Tail::Stationary => groups.len(),
        };
        if maps.len() != want {
            return Err(Error::Incompatible(format!("{} groups need {want} maps", groups.len())));
        }
        let last = groups.len() - 1;
        for (m, f) in maps.iter().enumerate() {
            if f.source() != &groups[(m + 1).min(last)] || f.target() != &groups[m] {
                return Err(Error::Incompatible(format!("map {m} does not join consecutive groups")));
            }
        }
        Ok(GroupTower { groups, maps, tail })
    }

    /// The single group `a` with endomorphism `f` repeated.
    pub fn stationary(f: &GroupMorphism) -> Result<Self> {
        Self::new(vec![f.source().clone()], vec![f.clone()], Tail::Stationary)
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group(&self, m: usize) -> &FgAbGroup {
        &self.groups[m.min(self.groups.len() - 1)]
    }

    pub fn map(&self, m: usize) -> &GroupMorphism {
        &self.maps[m.min(self.maps.len() - 1)]
    }

    /// The matrix of `A_{m1} → A_{m0}`.
    pub fn composite(&self, m0: usize, m1: usize) -> IntMatrix {
        let mut f = IntMatrix::identity(self.group(m1).ngens());
        for m in (m0..m1).rev() {
            f = self.map(m).matrix().mul(&f);
        }
        f
    }

    /// `im(A_{m1} → A_{m0})` as a group, computed directly.
    pub fn image(&self, m0: usize, m1: usize) -> FgAbGroup {
        let g = self.group(m0);
        let lat = IntMatrix::hstack(&[&self.composite(m0, m1), &g.relation_matrix()]);
        Subquotient::new(&lat, &g.relation_matrix())
            .expect("relations lie in the image lattice")
            .group()
            .clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MlStatus {
    /// Images of the tail stabilize after `at` iterations.
    Stabilized { at: usize },
    /// The bonding map is injective on a strictly shrinking image.
    NotMl,
    WindowInconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimValue {
    Exact(FgAbGroup),
    WindowLimited,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lim1Status {
    Zero,
    Uncountable,
    WindowInconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MlReport {
    /// For a stationary tail, `im(φ^j)` for `j = 0, 1, …`; for a finite
    /// tower, `im(A_N → A_k)` for each `k`.
    pub images: Vec<FgAbGroup>,
    pub status: MlStatus,
    pub lim: LimValue,
    pub lim1: Lim1Status,
}

impl MlStatus {
    pub fn tag(&self) -> &'static str {
        match self {
            MlStatus::Stabilized { .. } => "ml_stabilized",
            MlStatus::NotMl => "not_ml",
            MlStatus::WindowInconclusive => "window_inconclusive",
        }
    }
}

impl Lim1Status {
    pub fn tag(&self) -> &'static str {
        match self {
            Lim1Status::Zero => "zero",
            Lim1Status::Uncountable => "uncountable",
            Lim1Status::WindowInconclusive => "window_inconclusive",
        }
    }
}

impl LimValue {
    pub fn tag(&self) -> String {
        match self {
            LimValue::Exact(g) => g.to_string(),
            LimValue::WindowLimited => "window_limited".into(),
        }
    }
}

impl MlReport {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "status": self.status.tag(),
            "lim": self.lim.tag(),
            "lim1": self.lim1.tag(),
            "images": self.images.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        });
        if let MlStatus::Stabilized { at } = self.status {
            v["stabilized_at"] = json!(at);
        }
        v
    }
}

/// Decides the Mittag-Leffler condition. A finite tower is its own limit
/// diagram. A stationary tail `φ` on `A` is iterated: `im φ^{j+1} = im φ^j`
/// means the images have stabilized (and `φ` is then an automorphism of
/// the stable image, so it is the limit); `φ` injective on `im φ^j` with
/// strict descent means descent never stops. The kernels of `φ^j` form an
/// ascending chain, so one of the two happens once they stabilize.
pub fn ml_analyze(t: &GroupTower, window: usize) -> MlReport {
    let last = t.len() - 1;
    if t.tail == Tail::Finite {
        return MlReport {
            images: (0..=last).map(|k| t.image(k, last)).collect(),
            status: MlStatus::Stabilized { at: last },
            lim: LimValue::Exact(t.group(last).clone()),
            lim1: Lim1Status::Zero,
        };
    }
    let a = t.group(last).clone();
    let phi = t.map(last).clone();
    let rels = a.relation_matrix();
    let cap = iteration_cap(&a).max(window);
    let mut cur = IntMatrix::identity(a.ngens());
    let mut images = vec![a.clone()];
    for j in 0..cap {
        let next = phi.matrix().mul(&cur);
        let cur_l = IntMatrix::hstack(&[&cur, &rels]);
        let next_l = IntMatrix::hstack(&[&next, &rels]);
        if lattice_equal(&cur_l, &next_l) {
            let stable = Subquotient::new(&cur_l, &rels).expect("relations lie in the image");
            return MlReport {
                images,
                status: MlStatus::Stabilized { at: j },
                lim: LimValue::Exact(stable.group().clone()),
                lim1: Lim1Status::Zero,
            };
        }
        images.push(
            Subquotient::new(&next_l, &rels)
                .expect("relations lie in the image")
                .group()
                .clone(),
        );
        if injective_on(&phi, &cur_l) {
            while images.len() < window + 1 {
                let k = images.len();
                images.push(image_of_power(&phi, k));
            }
            return MlReport {
                images,
                status: MlStatus::NotMl,
                lim: LimValue::WindowLimited,
                lim1: Lim1Status::Uncountable,
            };
        }
        cur = next;
    }
    MlReport {
        images,
        status: MlStatus::WindowInconclusive,
        lim: LimValue::WindowLimited,
        lim1: Lim1Status::WindowInconclusive,
    }
}

fn image_of_power(phi: &GroupMorphism, k: usize) -> FgAbGroup {
    let a = phi.source();
    let mut m = IntMatrix::identity(a.ngens());
    for _ in 0..k {
        m = phi.matrix().mul(&m);
    }
    let rels = a.relation_matrix();
    Subquotient::new(&IntMatrix::hstack(&[&m, &rels]), &rels)
        .expect("relations lie in the image")
        .group()
        .clone()
}

/// Bound on the length of the kernel chain `ker φ ⊆ ker φ² ⊆ …`: each
/// strict step raises the rank or multiplies the torsion order by ≥ 2.
fn iteration_cap(a: &FgAbGroup) -> usize {
    let torsion_bits: u64 = a.torsion().iter().map(|q| q.bits()).sum();
    a.free_rank() + torsion_bits as usize + 2
}

fn injective_on(phi: &GroupMorphism, sub: &IntMatrix) -> bool {
    let a = phi.source();
    let rels = a.relation_matrix();
    let s = Subquotient::new(sub, &rels).expect("relations lie in the subgroup");
    let full = Subquotient::new(&IntMatrix::identity(a.ngens()), &rels).expect("whole group");
    s.induced(&full, phi.matrix())
        .map(|f| f.is_injective())
        .unwrap_or(false)
}

/// The exact limit for a stationary tail that is injective on its
/// descending images, when the free part of the tail group has rank at
/// most one. On the image `I` where injectivity was certified, `φ` is
/// bijective on the finite torsion of `I` and multiplies the free
/// coordinate by some `|k| ≥ 2`, so `∩ im φ^j` is the torsion of `I`.
pub fn injective_tail_limit(t: &GroupTower, report: &MlReport) -> LimValue {
    if report.status != MlStatus::NotMl || t.tail != Tail::Stationary {
        return report.lim.clone();
    }
    let a = t.group(t.len() - 1);
    if a.free_rank() > 1 {
        return LimValue::WindowLimited;
    }
    let stable = report.images.last().expect("the image chain starts with the group");
    LimValue::Exact(FgAbGroup::new(0, stable.torsion()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn endo(g: &str, k: i64) -> GroupMorphism {
        let a = FgAbGroup::parse(g).unwrap();
        GroupMorphism::new(a.clone(), a.clone(), IntMatrix::scalar(a.ngens(), k)).unwrap()
    }

    #[test]
    fn stationary_examples() {
        let t = GroupTower::stationary(&endo("Z", 2)).unwrap();
        let r = ml_analyze(&t, 4);
        assert_eq!(r.status, MlStatus::NotMl);
        assert_eq!(r.lim, LimValue::WindowLimited);
        assert_eq!(r.lim1, Lim1Status::Uncountable);
        assert_eq!(injective_tail_limit(&t, &r), LimValue::Exact(FgAbGroup::trivial()));

        let r = ml_analyze(&GroupTower::stationary(&endo("Z/6", 1)).unwrap(), 4);
        assert_eq!(r.status, MlStatus::Stabilized { at: 0 });
        assert_eq!(r.lim, LimValue::Exact(FgAbGroup::cyclic(6)));
        assert_eq!(r.lim1, Lim1Status::Zero);

        let r = ml_analyze(&GroupTower::stationary(&endo("Z/8", 2)).unwrap(), 4);
        assert_eq!(r.status, MlStatus::Stabilized { at: 3 });
        assert_eq!(r.lim, LimValue::Exact(FgAbGroup::trivial()));
    }

    #[test]
    fn mixed_tail() {
        // ×2 on Z + Z/4: the torsion dies, the free part keeps shrinking
        let t = GroupTower::stationary(&endo("Z+Z/4", 2)).unwrap();
        let r = ml_analyze(&t, 4);
        assert_eq!(r.status, MlStatus::NotMl);
        assert_eq!(injective_tail_limit(&t, &r), LimValue::Exact(FgAbGroup::trivial()));
        // ×3 on Z + Z/2 keeps the torsion
        let t = GroupTower::stationary(&endo("Z+Z/2", 3)).unwrap();
        let r = ml_analyze(&t, 4);
        assert_eq!(r.status, MlStatus::NotMl);
        assert_eq!(injective_tail_limit(&t, &r), LimValue::Exact(FgAbGroup::cyclic(2)));
        // ×3 on Z/4 is an automorphism
        let r = ml_analyze(&GroupTower::stationary(&endo("Z/4", 3)).unwrap(), 4);
        assert_eq!(r.lim, LimValue::Exact(FgAbGroup::cyclic(BigInt::from(4))));
    }
}
