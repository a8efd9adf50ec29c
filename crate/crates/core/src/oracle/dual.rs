use crate::group::{GroupTable, Subgroup};

use super::OracleError;

/// A linear character `ψ(g) = ζ_e^{k(g)}` of an abelian group of exponent `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCharacter {
    pub exponent: usize,
    /// `k(g)` for every element index.
    pub exponents: Vec<u32>,
    pub kernel: Subgroup,
}

impl DualCharacter {
    pub fn k(&self, g: usize) -> usize {
        self.exponents[g] as usize
    }
}

/// All `|G|` characters of an abelian group.
///
/// Works up a chain `1 = H_0 < H_1 < ...` where `H_i = H_{i-1}⟨g_i⟩`. With `m`
/// the least exponent putting `g_i^m` into `H_{i-1}`, each character of
/// `H_{i-1}` has exactly `m` extensions, fixed by the `m` solutions of
/// `m x ≡ k(g_i^m) (mod e)`.
pub fn dual_characters(group: &GroupTable) -> Result<Vec<DualCharacter>, OracleError> {
    if !group.is_abelian() {
        return Err(OracleError::NotAbelian);
    }
    let n = group.order();
    let e = group.exponent();
    let id = group.identity();
    let mut inside = vec![false; n];
    inside[id] = true;
    let mut members = vec![id];
    // characters restricted to `members`, indexed by element
    let mut chars: Vec<Vec<u32>> = vec![vec![0; n]];
    while members.len() < n {
        let g = (0..n)
            .filter(|&x| !inside[x])
            .max_by_key(|&x| (group.element_order(x), std::cmp::Reverse(x)))
            .expect("a missing element");
        let mut m = 1;
        let mut gm = g;
        while !inside[gm] {
            gm = group.mul(gm, g);
            m += 1;
        }
        let powers: Vec<usize> = std::iter::successors(Some(id), |&x| Some(group.mul(x, g)))
            .take(m)
            .collect();
        let mut next = Vec::with_capacity(chars.len() * m);
        for chi in &chars {
            let a = chi[gm] as usize;
            debug_assert_eq!(a % m, 0);
            for t in 0..m {
                let x = (a / m + t * (e / m)) % e;
                let mut ext = chi.clone();
                for &h in &members {
                    for (j, &p) in powers.iter().enumerate().skip(1) {
                        ext[group.mul(h, p)] = ((chi[h] as usize + j * x) % e) as u32;
                    }
                }
                next.push(ext);
            }
        }
        let mut grown = Vec::with_capacity(members.len() * m);
        for &h in &members {
            for &p in &powers {
                grown.push(group.mul(h, p));
            }
        }
        for &x in &grown {
            inside[x] = true;
        }
        members = grown;
        chars = next;
    }
    Ok(chars
        .into_iter()
        .map(|exponents| {
            let kernel = Subgroup::from_elements(n, (0..n).filter(|&g| exponents[g] == 0));
            DualCharacter {
                exponent: e,
                exponents,
                kernel,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, GroupSpec};

    fn kernel_orders(spec: GroupSpec) -> Vec<usize> {
        let g = make_group(&spec).unwrap();
        let mut v: Vec<usize> = dual_characters(&g).unwrap().iter().map(|c| c.kernel.order()).collect();
        v.sort();
        v
    }

    #[test]
    fn c4_kernels() {
        assert_eq!(kernel_orders(GroupSpec::cyclic(4)), vec![1, 1, 2, 4]);
        assert_eq!(kernel_orders(GroupSpec::cyclic(1)), vec![1]);
    }

    #[test]
    fn klein_four_kernels_are_the_lines() {
        let g = make_group(&GroupSpec::vector_space(2, 2)).unwrap();
        let chars = dual_characters(&g).unwrap();
        let mut kernels: Vec<Vec<usize>> = chars.iter().map(|c| c.kernel.to_vec()).collect();
        kernels.sort();
        assert_eq!(kernels, vec![vec![0, 1], vec![0, 1, 2, 3], vec![0, 2], vec![0, 3]]);
    }

    #[test]
    fn characters_are_distinct_homomorphisms() {
        let g = make_group(&GroupSpec::product(vec![
            GroupSpec::cyclic(4),
            GroupSpec::cyclic(6),
            GroupSpec::cyclic(2),
        ]))
        .unwrap();
        let chars = dual_characters(&g).unwrap();
        assert_eq!(chars.len(), 48);
        let e = g.exponent();
        for c in &chars {
            for a in 0..48 {
                for b in 0..48 {
                    assert_eq!(c.k(g.mul(a, b)), (c.k(a) + c.k(b)) % e);
                }
            }
        }
        let mut uniq: Vec<&Vec<u32>> = chars.iter().map(|c| &c.exponents).collect();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 48);
    }

    #[test]
    fn nonabelian_is_refused() {
        let g = make_group(&crate::families::symmetric3()).unwrap();
        assert_eq!(dual_characters(&g).unwrap_err(), OracleError::NotAbelian);
    }
}
