//! Point-wise products of supercharacters and their expansion in the
//! supercharacter basis.

use num_traits::Zero;
use serde::Serialize;

use crate::lattice::NodeId;
use crate::scalar::serde_rational;
use crate::sct::identities::prime_factors;
use crate::sct::{ClassFunction, SCTheory, SctError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub node: NodeId,
    #[serde(with = "serde_rational")]
    pub coefficient: Rational,
}

/// Coefficients `c_N = ⟨f, χ^{N•}⟩ / ⟨χ^{N•}, χ^{N•}⟩` of a superclass
/// function, nonzero terms only. The expansion is re-summed and compared
/// with `f` before returning.
pub fn decompose_class_function(theory: &SCTheory, f: &ClassFunction<Rational>) -> Result<Vec<Term>, SctError> {
    let blocks = theory.partition().len();
    if f.len() != blocks {
        return Err(SctError::PartitionMismatch {
            left: f.len(),
            right: blocks,
        });
    }
    let mut terms = Vec::new();
    let mut rebuilt = ClassFunction::zero(blocks);
    for chi in theory.characters() {
        let c = theory.inner(f, &chi.function) / theory.inner(&chi.function, &chi.function);
        if !c.is_zero() {
            rebuilt = rebuilt.add(&chi.function.scale(&c))?;
            terms.push(Term {
                node: chi.node,
                coefficient: c,
            });
        }
    }
    if rebuilt != *f {
        return Err(SctError::Inconsistent(
            "projection onto the supercharacters does not reproduce the function".into(),
        ));
    }
    Ok(terms)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductReport {
    pub m: NodeId,
    pub n: NodeId,
    pub meet: NodeId,
    /// Whether `C(M)` and `C(N)` are each in general position.
    pub hypothesis_general_position: [bool; 2],
    /// Every cover of `M ∧ N` lies in `M` or in `N`.
    pub hypothesis_cover_containment: bool,
    /// `χ^{M•}χ^{N•}/(χ^{M•}(1)χ^{N•}(1)) = χ^{(M∧N)•}/χ^{(M∧N)•}(1)` at every block.
    pub pointwise_identity: bool,
    /// Hypotheses hold and the identity was confirmed.
    pub identity_holds: bool,
    /// Expansion of `χ^{M•}χ^{N•}` in the supercharacter basis.
    pub coefficients: Vec<Term>,
}

impl ProductReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypothesis_general_position.iter().all(|&b| b) && self.hypothesis_cover_containment
    }
}

pub fn tensor_product(theory: &SCTheory, m: NodeId, n: NodeId) -> Result<ProductReport, SctError> {
    let lat = theory.lattice();
    lat.check_ids(&[m, n])?;
    let meet = lat.meet(m, n);
    let gp = |x: NodeId| lat.is_general_position(lat.covers(x), x).map(|g| g.general_position);
    let hypothesis_general_position = [gp(m)?, gp(n)?];
    let hypothesis_cover_containment = lat
        .covers(meet)
        .iter()
        .all(|&o| lat.leq(o, m) || lat.leq(o, n));
    let (cm, cn, cmeet) = (theory.bullet(m), theory.bullet(n), theory.bullet(meet));
    let product = cm.function.mul(&cn.function)?;
    let degrees = [cm.degree(), cn.degree(), cmeet.degree()];
    let pointwise_identity = !degrees.iter().any(|d| d.is_zero())
        && product.scale(&(cmeet.degree() / (cm.degree() * cn.degree()))) == cmeet.function;
    let coefficients = decompose_class_function(theory, &product)?;
    let hypotheses = hypothesis_general_position.iter().all(|&b| b) && hypothesis_cover_containment;
    Ok(ProductReport {
        m,
        n,
        meet,
        hypothesis_general_position,
        hypothesis_cover_containment,
        pointwise_identity,
        identity_holds: hypotheses && pointwise_identity,
        coefficients,
    })
}

/// Closed-form hypothesis test on `ker(C_n)` for `M = C_a`, `N = C_b`: the
/// primes dividing `n / gcd(a, b)` are those dividing `lcm(a, b) / gcd(a, b)`.
pub fn cyclic_tensor_criterion(n: u64, a: u64, b: u64) -> bool {
    let g = num_integer::gcd(a, b);
    let l = num_integer::lcm(a, b);
    prime_factors(n / g) == prime_factors(l / g)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::{make_group, GroupSpec};
    use crate::lattice::normal_lattice;
    use crate::sct::chi_subgroup;

    fn c12() -> SCTheory {
        SCTheory::new(Arc::new(normal_lattice(Arc::new(make_group(&GroupSpec::cyclic(12)).unwrap()))))
    }

    fn node(t: &SCTheory, order: usize) -> NodeId {
        t.lattice().ids().find(|&i| t.lattice().order_of(i) == order).unwrap()
    }

    fn r(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn c4_times_c6_is_c2() {
        let t = c12();
        let rep = tensor_product(&t, node(&t, 4), node(&t, 6)).unwrap();
        assert!(rep.hypotheses_hold());
        assert!(rep.identity_holds);
        assert_eq!(rep.meet, node(&t, 2));
        // degrees 2 and 1 against χ^{C_2•}(1) = 2
        assert_eq!(
            rep.coefficients,
            vec![Term {
                node: node(&t, 2),
                coefficient: r(1)
            }]
        );
        assert!(cyclic_tensor_criterion(12, 4, 6));
    }

    #[test]
    fn c4_squared_fails_the_hypothesis() {
        let t = c12();
        let c4 = node(&t, 4);
        let rep = tensor_product(&t, c4, c4).unwrap();
        assert!(!rep.hypothesis_cover_containment);
        assert!(!rep.identity_holds);
        assert!(!cyclic_tensor_criterion(12, 4, 4));
        let top = t.lattice().top();
        let rep = tensor_product(&t, top, top).unwrap();
        assert!(rep.identity_holds);
    }

    #[test]
    fn permutation_character_expands_over_the_up_set() {
        let t = c12();
        let c2 = node(&t, 2);
        let chi = chi_subgroup::<Rational>(t.partition(), c2).unwrap();
        let terms = decompose_class_function(&t, &chi.function).unwrap();
        let nodes: Vec<NodeId> = terms.iter().map(|x| x.node).collect();
        let want: Vec<NodeId> = t.lattice().up_set(c2).collect();
        assert_eq!(nodes, want);
        assert!(terms.iter().all(|x| x.coefficient == r(1)));
    }

    #[test]
    fn superclass_indicator_round_trips() {
        let t = SCTheory::new(Arc::new(normal_lattice(Arc::new(make_group(&GroupSpec::cyclic(6)).unwrap()))));
        let last = t.partition().len() - 1;
        let f = ClassFunction::indicator(t.partition().len(), last);
        let terms = decompose_class_function(&t, &f).unwrap();
        // c_N = |G∘| χ^{N•}(x) / (|G| χ^{N•}(1))
        assert_eq!(terms.len(), 4);
        assert_eq!(terms[0].coefficient, Rational::new(1.into(), 6.into()));
    }
}
