use num_bigint::BigInt;
use uctkit::abgroups::{ext_group, hom_group, tensor_group, tor_group, FgAbGroup};

fn finite(orders: &[u64]) -> FgAbGroup {
    FgAbGroup::new(0, &orders.iter().map(|&o| BigInt::from(o)).collect::<Vec<_>>())
}

fn size(orders: &[u64]) -> u64 {
    orders.iter().product()
}

/// Homomorphisms `∏ Z/a_i → ∏ Z/b_j`, counted by choosing generator images
/// `x` with `a_i x = 0`.
fn brute_hom_count(a: &[u64], b: &[u64]) -> u64 {
    let elems: Vec<Vec<u64>> = b.iter().fold(vec![vec![]], |acc, &o| {
        acc.into_iter()
            .flat_map(|e| (0..o).map(move |x| [e.clone(), vec![x]].concat()))
            .collect()
    });
    a.iter()
        .map(|&ai| {
            elems
                .iter()
                .filter(|x| x.iter().zip(b).all(|(&xj, &bj)| (ai * xj) % bj == 0))
                .count() as u64
        })
        .product()
}

const SMALL: [&[u64]; 7] = [&[2], &[3], &[4], &[6], &[2, 2], &[2, 4], &[3, 9]];

#[test]
fn hom_orders_match_enumeration() {
    for a in SMALL {
        for b in SMALL {
            let h = hom_group(&finite(a), &finite(b));
            assert_eq!(h.order(), Some(BigInt::from(brute_hom_count(a, b))), "Hom({a:?}, {b:?})");
        }
    }
}

#[test]
fn finite_groups_have_matching_hom_ext_tensor_tor() {
    // for finite groups all four have the same order
    for a in SMALL {
        for b in SMALL {
            let (ga, gb) = (finite(a), finite(b));
            let h = hom_group(&ga, &gb);
            assert_eq!(ext_group(&ga, &gb), h, "Ext({a:?}, {b:?})");
            assert_eq!(tensor_group(&ga, &gb), h);
            assert_eq!(tor_group(&ga, &gb), h);
            assert!(h.order().unwrap() <= BigInt::from(size(a).min(size(b)).pow(2)));
        }
    }
}

#[test]
fn free_summands() {
    let z = FgAbGroup::integers();
    let g = FgAbGroup::parse("Z^2+Z/6").unwrap();
    assert_eq!(hom_group(&z, &g), g);
    assert_eq!(ext_group(&z, &g).to_string(), "0");
    assert_eq!(hom_group(&g, &z).to_string(), "Z^2");
    assert_eq!(ext_group(&g, &z).to_string(), "Z/6");
    assert_eq!(tensor_group(&g, &FgAbGroup::cyclic(4)).to_string(), "Z/2 + Z/4 + Z/4");
    assert_eq!(tor_group(&g, &FgAbGroup::cyclic(4)).to_string(), "Z/2");
}

#[test]
fn parse_and_display_round_trip() {
    for s in ["0", "Z", "Z^3", "Z/2", "Z + Z/2 + Z/4", "Z/2 + Z/2"] {
        let g = FgAbGroup::parse(s).unwrap();
        assert_eq!(FgAbGroup::parse(&g.to_string()).unwrap(), g);
    }
    assert_eq!(FgAbGroup::parse("Z/2+Z/3").unwrap().to_string(), "Z/6");
    assert!(FgAbGroup::parse("Z/0").is_err());
    assert!(FgAbGroup::parse("Q").is_err());
}
