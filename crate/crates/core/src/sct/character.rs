use serde::Serialize;

use super::{SctError, SuperclassPartition};
use crate::lattice::NodeId;
use crate::scalar::Scalar;

/// A function on a superclass partition, stored as one value per block.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunction<T> {
    values: Vec<T>,
}

impl<T: Scalar> ClassFunction<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn zero(blocks: usize) -> Self {
        Self::new(vec![T::zero(); blocks])
    }

    pub fn from_fn(blocks: usize, f: impl FnMut(usize) -> T) -> Self {
        Self::new((0..blocks).map(f).collect())
    }

    /// Indicator of one block.
    pub fn indicator(blocks: usize, block: usize) -> Self {
        Self::from_fn(blocks, |b| if b == block { T::one() } else { T::zero() })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn value(&self, block: usize) -> &T {
        &self.values[block]
    }

    /// Value at a group element.
    pub fn at(&self, partition: &SuperclassPartition, g: usize) -> &T {
        &self.values[partition.block_of(g)]
    }

    /// Value at the identity, which always sits in block 0.
    pub fn degree(&self) -> &T {
        &self.values[0]
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self, SctError> {
        if self.len() != other.len() {
            return Err(SctError::PartitionMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Self::new(self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect()))
    }

    /// Point-wise product.
    pub fn mul(&self, other: &Self) -> Result<Self, SctError> {
        self.zip(other, |a, b| a.clone() * b.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SctError> {
        self.zip(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SctError> {
        self.zip(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.values.iter().map(|v| v.clone() * c.clone()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_approx_zero)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.values.iter().zip(&other.values).all(|(a, b)| a.approx_eq(b))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ClassFunction<U> {
        ClassFunction::new(self.values.iter().map(f).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterKind {
    /// `χ^{N•}`
    Bullet,
    /// `χ^N`, the permutation character of `G/N`.
    Subgroup,
    /// Anything built from the others.
    Derived,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Supercharacter<T> {
    pub node: NodeId,
    pub kind: CharacterKind,
    pub function: ClassFunction<T>,
}

impl<T: Scalar> Supercharacter<T> {
    pub fn degree(&self) -> &T {
        self.function.degree()
    }

    pub fn values(&self) -> &[T] {
        self.function.values()
    }

    /// `χ / χ(1)`.
    pub fn normalized(&self) -> ClassFunction<T> {
        let d = self.degree().clone();
        self.function.map(|v| v.clone() / d.clone())
    }
}

/// `χ^N`: `|G/N|` on superclasses inside `N`, zero elsewhere.
pub fn chi_subgroup<T: Scalar>(partition: &SuperclassPartition, n: NodeId) -> Result<Supercharacter<T>, SctError> {
    let lat = partition.lattice();
    lat.check_ids(&[n])?;
    let index = (lat.group().order() / lat.order_of(n)) as i64;
    let function = ClassFunction::from_fn(partition.len(), |b| {
        if lat.leq(partition.block(b).node, n) {
            T::from_int(index)
        } else {
            T::zero()
        }
    });
    Ok(Supercharacter {
        node: n,
        kind: CharacterKind::Subgroup,
        function,
    })
}

/// `χ^{N•}(g) = Σ_{O ⊇ N, g ∈ O} μ(N, O) |G|/|O|`.
pub fn chi_bullet_moebius<T: Scalar>(
    partition: &SuperclassPartition,
    n: NodeId,
) -> Result<Supercharacter<T>, SctError> {
    let lat = partition.lattice();
    lat.check_ids(&[n])?;
    let g_order = lat.group().order() as i64;
    let mu = lat.moebius_row(n);
    let function = ClassFunction::from_fn(partition.len(), |b| {
        let home = partition.block(b).node;
        let v: i64 = lat
            .up_set(n)
            .filter(|&o| lat.leq(home, o) && mu[o.0] != 0)
            .map(|o| mu[o.0] * (g_order / lat.order_of(o) as i64))
            .sum();
        T::from_int(v)
    });
    Ok(Supercharacter {
        node: n,
        kind: CharacterKind::Bullet,
        function,
    })
}

/// `χ^{M•}` from the product formula over the covers of `M`, which must be
/// nonempty and in general position.
pub fn chi_bullet_multiplicative<T: Scalar>(
    partition: &SuperclassPartition,
    m: NodeId,
) -> Result<Supercharacter<T>, SctError> {
    let lat = partition.lattice();
    lat.check_ids(&[m])?;
    let covers = lat.covers(m);
    if covers.is_empty() {
        return Err(SctError::FormulaInapplicable {
            node: m,
            reason: "node has no covers".into(),
        });
    }
    if !lat.is_general_position(covers, m)?.general_position {
        return Err(SctError::FormulaInapplicable {
            node: m,
            reason: "covers are not in general position".into(),
        });
    }
    let m_order = lat.order_of(m) as i64;
    let rel = |o: NodeId| lat.order_of(o) as i64 / m_order;
    let top = lat.cover_join(m);
    let mut degree = T::from_int((lat.group().order() / lat.order_of(top)) as i64);
    for &o in covers {
        degree = degree * T::from_int(rel(o) - 1);
    }
    // join of all covers but one, per cover
    let partial: Vec<NodeId> = (0..covers.len())
        .map(|i| {
            let rest: Vec<NodeId> = covers
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &o)| o)
                .collect();
            lat.overline_over(m, &rest)
        })
        .collect();
    let mut values = Vec::with_capacity(partition.len());
    for block in partition.blocks() {
        let home = block.node;
        if !lat.leq(home, top) {
            values.push(T::zero());
            continue;
        }
        let needed: Vec<NodeId> = covers
            .iter()
            .zip(&partial)
            .filter(|&(_, &p)| !lat.leq(home, p))
            .map(|(&o, _)| o)
            .collect();
        if !lat.leq(home, lat.overline_over(m, &needed)) {
            return Err(SctError::Ambiguous {
                node: m,
                element: block.representative(),
            });
        }
        let mut v = degree.clone();
        for &o in &needed {
            v = v / T::from_int(1 - rel(o));
        }
        values.push(v);
    }
    Ok(Supercharacter {
        node: m,
        kind: CharacterKind::Bullet,
        function: ClassFunction::new(values),
    })
}

/// `⟨f, h⟩ = |G|^{-1} Σ_blocks |block| f h`. Values here are real, so no
/// conjugation is applied.
pub fn inner_product<T: Scalar>(
    partition: &SuperclassPartition,
    f: &ClassFunction<T>,
    h: &ClassFunction<T>,
) -> Result<T, SctError> {
    for len in [f.len(), h.len()] {
        if len != partition.len() {
            return Err(SctError::PartitionMismatch {
                left: len,
                right: partition.len(),
            });
        }
    }
    let mut total = T::zero();
    for (b, block) in partition.blocks().iter().enumerate() {
        total = total + T::from_int(block.size() as i64) * f.value(b).clone() * h.value(b).clone();
    }
    Ok(total / T::from_int(partition.group().order() as i64))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::{make_group, GroupSpec, GroupTable};
    use crate::lattice::normal_lattice;
    use crate::sct::build_superclasses;
    use crate::Rational;

    fn partition(g: GroupTable) -> SuperclassPartition {
        build_superclasses(Arc::new(normal_lattice(Arc::new(g))))
    }

    fn ints(c: &Supercharacter<Rational>) -> Vec<i64> {
        c.values().iter().map(|v| v.to_integer().try_into().unwrap()).collect()
    }

    fn s3() -> GroupTable {
        // S_3 as permutations of {0,1,2}: 0 = id, 1,2 = 3-cycles, 3,4,5 = transpositions
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [2, 1, 0], [0, 2, 1]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mul = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        make_group(&GroupSpec::table(mul, Some("S_3"))).unwrap()
    }

    #[test]
    fn s3_bottom_character() {
        let p = partition(s3());
        let chi: Supercharacter<Rational> = chi_bullet_moebius(&p, NodeId(0)).unwrap();
        assert_eq!(ints(&chi), vec![4, -2, 0]);
        let norm = inner_product(&p, &chi.function, &chi.function).unwrap();
        assert_eq!(norm, Rational::from_int(4));
    }

    #[test]
    fn c6_bottom_character_is_ramanujan() {
        let p = partition(make_group(&GroupSpec::cyclic(6)).unwrap());
        let chi: Supercharacter<Rational> = chi_bullet_moebius(&p, NodeId(0)).unwrap();
        assert_eq!(ints(&chi), vec![2, -2, -1, 1]);
        let mult: Supercharacter<Rational> = chi_bullet_multiplicative(&p, NodeId(0)).unwrap();
        assert_eq!(mult, chi);
    }

    #[test]
    fn c6_subgroup_character() {
        let p = partition(make_group(&GroupSpec::cyclic(6)).unwrap());
        let c3 = p.lattice().ids().find(|&i| p.lattice().order_of(i) == 3).unwrap();
        let chi: Supercharacter<Rational> = chi_subgroup(&p, c3).unwrap();
        assert_eq!(ints(&chi), vec![2, 0, 2, 0]);
        let top: Supercharacter<Rational> = chi_subgroup(&p, p.lattice().top()).unwrap();
        assert_eq!(ints(&top), vec![1; 4]);
        let bot: Supercharacter<Rational> = chi_subgroup(&p, NodeId(0)).unwrap();
        assert_eq!(ints(&bot), vec![6, 0, 0, 0]);
    }

    #[test]
    fn c12_bottom_degree_is_phi() {
        let p = partition(make_group(&GroupSpec::cyclic(12)).unwrap());
        let chi: Supercharacter<Rational> = chi_bullet_multiplicative(&p, NodeId(0)).unwrap();
        assert_eq!(chi.degree(), &Rational::from_int(4));
        let top: Supercharacter<Rational> = chi_bullet_moebius(&p, p.lattice().top()).unwrap();
        assert!(top.values().iter().all(|v| *v == Rational::from_int(1)));
        assert!(matches!(
            chi_bullet_multiplicative::<Rational>(&p, p.lattice().top()),
            Err(SctError::FormulaInapplicable { .. })
        ));
    }

    #[test]
    fn float_path_matches_exact() {
        let p = partition(make_group(&GroupSpec::cyclic(30)).unwrap());
        for id in p.lattice().ids() {
            let exact: Supercharacter<Rational> = chi_bullet_multiplicative(&p, id)
                .or_else(|_| chi_bullet_moebius(&p, id))
                .unwrap();
            let float: Supercharacter<f64> = chi_bullet_moebius(&p, id).unwrap();
            let back = exact.function.map(|v| Scalar::to_f64(v));
            assert!(back.approx_eq(&float.function));
        }
    }

    #[test]
    fn diamond_refuses_the_product_formula() {
        let l = Arc::new(normal_lattice(Arc::new(make_group(&GroupSpec::vector_space(2, 2)).unwrap())));
        let p = build_superclasses(l);
        assert!(matches!(
            chi_bullet_multiplicative::<Rational>(&p, NodeId(0)),
            Err(SctError::FormulaInapplicable { .. })
        ));
    }

    #[test]
    fn mismatched_partitions_are_rejected() {
        let p = partition(make_group(&GroupSpec::cyclic(6)).unwrap());
        let f = ClassFunction::<Rational>::zero(3);
        assert!(matches!(
            inner_product(&p, &f, &f),
            Err(SctError::PartitionMismatch { .. })
        ));
    }
}
