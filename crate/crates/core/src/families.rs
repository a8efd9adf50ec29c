//! Named groups, the subspace lattices of a vector space, and the standard
//! embeddings used in the examples.

use std::sync::Arc;

use crate::group::{GroupError, GroupSpec, GroupTable, Subgroup, VectorSpace};
use crate::lattice::{LatticeError, NormalLattice};
use crate::restriction::GroupEmbedding;

fn table_of<T: PartialEq + Copy>(elements: &[T], mul: impl Fn(T, T) -> T, name: &str) -> GroupSpec {
    let idx = |x: T| elements.iter().position(|&y| y == x).expect("closed operation");
    let rows = elements
        .iter()
        .map(|&a| elements.iter().map(|&b| idx(mul(a, b))).collect())
        .collect();
    GroupSpec::table(rows, Some(name))
}

/// `S_3` as permutations of `{0, 1, 2}` in lexicographic order.
pub fn symmetric3() -> GroupSpec {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    table_of(&perms, |a, b| [a[b[0]], a[b[1]], a[b[2]]], "S_3")
}

/// `D_4` of order 8; element `r^i s^j` has index `i + 4j`.
pub fn dihedral8() -> GroupSpec {
    let els: Vec<(usize, usize)> = (0..2).flat_map(|j| (0..4).map(move |i| (i, j))).collect();
    table_of(
        &els,
        |(a, b), (c, d)| {
            let c = if b == 1 { (4 - c) % 4 } else { c };
            ((a + c) % 4, (b + d) % 2)
        },
        "D_4",
    )
}

/// `Q_8` ordered `1, -1, i, -i, j, -j, k, -k`.
pub fn quaternion8() -> GroupSpec {
    // unit products: (sign, unit) for units 0 = 1, 1 = i, 2 = j, 3 = k
    const UNIT: [[(i8, u8); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let els: Vec<(i8, u8)> = (0..4).flat_map(|u| [(1, u), (-1, u)]).collect();
    table_of(
        &els,
        |(s, u), (t, v)| {
            let (w, x) = UNIT[u as usize][v as usize];
            (s * t * w, x)
        },
        "Q_8",
    )
}

fn space_of(group: &GroupTable) -> Result<VectorSpace, LatticeError> {
    VectorSpace::of_group(group)
        .ok_or_else(|| LatticeError::Argument("expected a group built from a vector_space spec".into()))
}

/// `subsp(V)`: every `F_q`-subspace of `V`.
pub fn subspace_lattice(group: Arc<GroupTable>) -> Result<NormalLattice, LatticeError> {
    let vs = space_of(&group)?;
    let lines: Vec<Subgroup> = (1..vs.size()).map(|v| vs.span(&[v])).collect();
    NormalLattice::generated_by(group, lines)
}

/// The standard basis `e_1, ..., e_n`.
pub fn standard_basis(group: &GroupTable) -> Result<Vec<usize>, LatticeError> {
    let vs = space_of(group)?;
    Ok((0..vs.dim()).map(|i| vs.basis_vector(i)).collect())
}

/// `subsp_B(V)`: spans of subsets of the basis `basis`.
pub fn basis_lattice(group: Arc<GroupTable>, basis: &[usize]) -> Result<NormalLattice, LatticeError> {
    let vs = space_of(&group)?;
    if basis.iter().any(|&b| b >= vs.size()) {
        return Err(LatticeError::OutOfRange);
    }
    if basis.len() != vs.dim() || vs.span(basis).order() != vs.size() {
        return Err(LatticeError::Argument("vectors do not form a basis".into()));
    }
    let lines = basis.iter().map(|&b| vs.span(&[b])).collect();
    NormalLattice::generated_by(group, lines)
}

/// `F_q^k → F_q^n` sending the `i`-th standard basis vector to `images[i]`.
pub fn linear_embedding(
    source: Arc<GroupTable>,
    target: Arc<GroupTable>,
    images: &[usize],
) -> Result<GroupEmbedding, GroupError> {
    let bad = |reason: &'static str| GroupError::Embedding {
        reason: reason.into(),
        witness: vec![],
    };
    let sv = VectorSpace::of_group(&source).ok_or_else(|| bad("source is not a vector space"))?;
    let tv = VectorSpace::of_group(&target).ok_or_else(|| bad("target is not a vector space"))?;
    if sv.field().order() != tv.field().order() || images.len() != sv.dim() {
        return Err(bad("field or dimension mismatch"));
    }
    let map = (0..sv.size())
        .map(|v| {
            sv.coords(v)
                .iter()
                .zip(images)
                .fold(0, |acc, (&c, &img)| tv.add(acc, tv.scale(c, img)))
        })
        .collect();
    GroupEmbedding::new(source, target, map)
}

/// Sums `Σ_{b ∈ B} e_b` over each block `B` of coordinate indices.
pub fn block_sums(group: &GroupTable, blocks: &[Vec<usize>]) -> Result<Vec<usize>, LatticeError> {
    let vs = space_of(group)?;
    blocks
        .iter()
        .map(|block| {
            if block.iter().any(|&i| i >= vs.dim()) {
                return Err(LatticeError::OutOfRange);
            }
            Ok(block.iter().fold(0, |acc, &i| vs.add(acc, vs.basis_vector(i))))
        })
        .collect()
}

/// `C_m → C_n`, `x ↦ x^{n/m}`.
pub fn cyclic_embedding(m: usize, n: usize) -> Result<GroupEmbedding, GroupError> {
    if m == 0 || n % m != 0 {
        return Err(GroupError::InvalidParameter(format!("{m} does not divide {n}")));
    }
    let source = Arc::new(crate::group::make_group(&GroupSpec::cyclic(m))?);
    let target = Arc::new(crate::group::make_group(&GroupSpec::cyclic(n))?);
    GroupEmbedding::new(source, target, (0..m).map(|i| i * (n / m)).collect())
}

/// Inclusion of a subgroup, with the subgroup as its own table.
pub fn subgroup_embedding(group: Arc<GroupTable>, sub: &Subgroup) -> Result<GroupEmbedding, GroupError> {
    let (table, map) = group.subgroup_table(sub)?;
    GroupEmbedding::new(Arc::new(table), group, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;
    use crate::lattice::normal_lattice;

    fn lattice_size(spec: GroupSpec) -> usize {
        normal_lattice(Arc::new(make_group(&spec).unwrap())).len()
    }

    #[test]
    fn small_nonabelian_groups() {
        for spec in [symmetric3(), dihedral8(), quaternion8()] {
            let g = make_group(&spec).unwrap();
            assert!(!g.is_abelian());
        }
        assert_eq!(lattice_size(symmetric3()), 3);
        assert_eq!(lattice_size(dihedral8()), 6);
        assert_eq!(lattice_size(quaternion8()), 6);
        let d4 = normal_lattice(Arc::new(make_group(&dihedral8()).unwrap()));
        assert!(!d4.is_distributive());
    }

    #[test]
    fn subspace_counts() {
        // subspaces of F_q^2: 1 + (q + 1) + 1
        for q in [2, 3, 4, 5] {
            let g = Arc::new(make_group(&GroupSpec::vector_space(q, 2)).unwrap());
            assert_eq!(subspace_lattice(g).unwrap().len(), q + 3);
        }
    }

    #[test]
    fn basis_lattice_is_boolean() {
        let g = Arc::new(make_group(&GroupSpec::vector_space(3, 3)).unwrap());
        let b = standard_basis(&g).unwrap();
        let l = basis_lattice(g.clone(), &b).unwrap();
        assert_eq!(l.len(), 8);
        assert!(l.is_distributive());
        assert!(basis_lattice(g, &[b[0], b[0], b[1]]).is_err());
    }

    #[test]
    fn block_sum_embedding() {
        let v = Arc::new(make_group(&GroupSpec::vector_space(2, 3)).unwrap());
        let u = Arc::new(make_group(&GroupSpec::vector_space(2, 2)).unwrap());
        let images = block_sums(&v, &[vec![0, 1], vec![2]]).unwrap();
        let e = linear_embedding(u, v, &images).unwrap();
        assert_eq!(e.image().order(), 4);
        assert!(cyclic_embedding(6, 12).is_ok());
        assert!(cyclic_embedding(5, 12).is_err());
    }
}
