//! Closed forms for the cyclic and basis-subspace examples, and the two
//! counting identities that fall out of comparing them with the Möbius sums.

use num_traits::{One, Zero};

use crate::Rational;

/// Distinct primes dividing `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Both sides of
/// `Σ_{A ⊆ P, a | bΠA} (-1)^{|A|}/ΠA = Π_{p∈O}(-1/p) Π_{p∈P-O}(1-1/p)`
/// where `O ⊆ P` is the minimal set with `a | bΠO` (the right side is 0 if
/// no such set exists).
pub fn prime_set_identity(primes: &[u64], a: u64, b: u64) -> (Rational, Rational) {
    let mut lhs = Rational::zero();
    for mask in 0u32..(1 << primes.len()) {
        let chosen = primes.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1);
        let prod: u64 = chosen.clone().map(|(_, &p)| p).product();
        if (b * prod) % a == 0 {
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            lhs += Rational::new(sign.into(), (prod as i64).into());
        }
    }
    (lhs, prime_set_rhs(primes, a, b))
}

fn prime_set_rhs(primes: &[u64], a: u64, b: u64) -> Rational {
    let minimal: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| valuation(a, p) > valuation(b, p))
        .collect();
    let prod: u64 = minimal.iter().product();
    if (b * prod) % a != 0 {
        return Rational::zero();
    }
    primes.iter().fold(Rational::one(), |acc, &p| {
        let inv = Rational::new(1.into(), (p as i64).into());
        if minimal.contains(&p) {
            acc * -inv
        } else {
            acc * (Rational::one() - inv)
        }
    })
}

/// `χ^{C_b•}(x^{n/a})` on `C_n`, for `a, b | n`.
pub fn cyclic_character_value(n: u64, b: u64, a: u64) -> Rational {
    let primes = prime_factors(n / b);
    Rational::from_integer(((n / b) as i64).into()) * prime_set_rhs(&primes, a, b)
}

/// Both sides of
/// `Σ_{A∪D ⊆ C ⊆ B} (-1)^{|C-A|} q^{|B-C|} = (q-1)^{|B-(A∪D)|} (-1)^{|(B-A)∩D|}`
/// with `A`, `D` given as bit masks over a basis of size `basis`.
pub fn subset_identity(basis: u32, q: i64, a: u32, d: u32) -> (i64, i64) {
    let full = (1u32 << basis) - 1;
    let (a, d) = (a & full, d & full);
    let lhs = (0..=full)
        .filter(|&c| c & (a | d) == (a | d))
        .map(|c| {
            let sign = if (c & !a).count_ones() % 2 == 0 { 1 } else { -1 };
            sign * q.pow((full & !c).count_ones())
        })
        .sum();
    (lhs, basis_character_value(basis, q, a, d))
}

/// `χ^{A•}(Σ_{d∈D} d)` in the basis-subspace theory on `F_q^basis`.
pub fn basis_character_value(basis: u32, q: i64, a: u32, d: u32) -> i64 {
    let full = (1u32 << basis) - 1;
    let sign = if (full & !a & d).count_ones() % 2 == 0 { 1 } else { -1 };
    sign * (q - 1).pow((full & !(a | d)).count_ones())
}
