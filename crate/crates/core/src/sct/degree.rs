use serde::Serialize;

use super::SctError;
use crate::lattice::{NodeId, NormalLattice};

/// `χ^{N•}(1)` through Möbius inversion.
pub fn moebius_degree(lat: &NormalLattice, n: NodeId) -> i64 {
    let g = lat.group().order() as i64;
    let mu = lat.moebius_row(n);
    lat.up_set(n).map(|o| mu[o.0] * (g / lat.order_of(o) as i64)).sum()
}

/// `χ^{M•}(1) = |G / overline C(M)| Π_{N ∈ C(M)} (|N/M| - 1)`, for covers in
/// general position. A node without covers has degree 1.
pub fn super_degree(lat: &NormalLattice, m: NodeId) -> Result<i64, SctError> {
    lat.check_ids(&[m])?;
    let covers = lat.covers(m);
    if !lat.is_general_position(covers, m)?.general_position {
        return Err(SctError::FormulaInapplicable {
            node: m,
            reason: "covers are not in general position".into(),
        });
    }
    Ok(product_degree(lat, m, covers))
}

fn product_degree(lat: &NormalLattice, base: NodeId, set: &[NodeId]) -> i64 {
    let top = lat.overline_over(base, set);
    let b = lat.order_of(base) as i64;
    set.iter()
        .map(|&o| lat.order_of(o) as i64 / b - 1)
        .product::<i64>()
        * (lat.group().order() / lat.order_of(top)) as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeSumCase {
    /// `KM ∧ L != K`: nothing qualifies.
    Empty,
    /// No cover of `KM` meets `L` outside `K`.
    NoCovers,
    /// The product over the remaining covers.
    Product,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSum {
    pub case: DegreeSumCase,
    /// Whether the relevant covers of `KM` are in general position.
    pub general_position: bool,
    /// `None` when the product case lacks general position.
    pub closed_form: Option<i64>,
    pub brute_force: i64,
    /// `{O ∈ C(KM) : O ∧ L != K}`
    pub perp_covers: Vec<NodeId>,
}

impl DegreeSum {
    pub fn agrees(&self) -> bool {
        self.closed_form == Some(self.brute_force)
    }
}

/// `Σ_{N ⊇ M, N ∧ L = K} χ^{N•}(1)` by closed form and by direct summation.
pub fn degree_sum(lat: &NormalLattice, k: NodeId, l: NodeId, m: NodeId) -> Result<DegreeSum, SctError> {
    lat.check_ids(&[k, l, m])?;
    let brute_force = lat
        .up_set(m)
        .filter(|&n| lat.meet(n, l) == k)
        .map(|n| moebius_degree(lat, n))
        .sum();
    let km = lat.join(k, m);
    let perp_covers: Vec<NodeId> = lat.covers(km).iter().copied().filter(|&o| lat.meet(o, l) != k).collect();
    let general_position = lat.is_general_position(&perp_covers, km)?.general_position;
    let (case, closed_form) = if lat.meet(km, l) != k {
        (DegreeSumCase::Empty, Some(0))
    } else if perp_covers.is_empty() {
        (
            DegreeSumCase::NoCovers,
            Some((lat.group().order() / lat.order_of(km)) as i64),
        )
    } else if general_position {
        (DegreeSumCase::Product, Some(product_degree(lat, km, &perp_covers)))
    } else {
        (DegreeSumCase::Product, None)
    };
    Ok(DegreeSum {
        case,
        general_position,
        closed_form,
        brute_force,
        perp_covers,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::{make_group, GroupSpec};
    use crate::lattice::normal_lattice;

    fn c(n: usize) -> NormalLattice {
        normal_lattice(Arc::new(make_group(&GroupSpec::cyclic(n)).unwrap()))
    }

    fn node(l: &NormalLattice, order: usize) -> NodeId {
        l.ids().find(|&i| l.order_of(i) == order).unwrap()
    }

    #[test]
    fn c12_degrees() {
        let l = c(12);
        assert_eq!(super_degree(&l, l.bottom()).unwrap(), 4);
        assert_eq!(moebius_degree(&l, l.bottom()), 4);
        assert_eq!(super_degree(&l, l.top()).unwrap(), 1);
        for id in l.ids() {
            assert_eq!(super_degree(&l, id).unwrap(), moebius_degree(&l, id));
        }
    }

    #[test]
    fn c12_spec_triple() {
        let l = c(12);
        let (c2, c6) = (node(&l, 2), node(&l, 6));
        let s = degree_sum(&l, c2, c6, c2).unwrap();
        assert!(s.agrees());
        // N ∈ {C_2, C_4}: degrees 2 and 2
        assert_eq!(s.brute_force, 4);
    }

    #[test]
    fn telescoping_and_empty_cases() {
        let l = c(36);
        for m in l.ids() {
            // K = L = 1 sums every N ⊇ M: the degree of χ^M
            let s = degree_sum(&l, l.bottom(), l.bottom(), m).unwrap();
            assert_eq!(s.brute_force, 36 / l.order_of(m) as i64);
            assert!(s.agrees());
            // L = G keeps only N = M
            let s = degree_sum(&l, m, l.top(), m).unwrap();
            assert_eq!(s.brute_force, moebius_degree(&l, m));
            assert!(s.agrees());
        }
        let (c2, c3) = (node(&l, 2), node(&l, 3));
        let s = degree_sum(&l, c2, c3, c2).unwrap();
        assert_eq!(s.case, DegreeSumCase::Empty);
        assert_eq!(s.brute_force, 0);
    }
}
