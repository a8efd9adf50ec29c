//! Arithmetic in GF(p^k).
//!
//! An element is encoded as the integer `sum a_i p^i`, where `a_i` is the
//! coefficient of `x^i` in its polynomial representative. The modulus is the
//! monic irreducible of degree `k` with the smallest such code.

use super::GroupError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: usize,
    k: usize,
    q: usize,
    /// Low coefficients of the monic modulus (`x^k` implied).
    modulus: Vec<usize>,
}

/// Returns `(p, k)` with `q = p^k`, or `None` when `q` is not a prime power.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn digits(mut code: usize, p: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = code % p;
        code /= p;
    }
    out
}

fn encode(coeffs: &[usize], p: usize) -> usize {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Multiplies two monic polynomials given by their low coefficients.
fn monic_product(a: &[usize], b: &[usize], p: usize) -> Vec<usize> {
    let mut fa = a.to_vec();
    fa.push(1);
    let mut fb = b.to_vec();
    fb.push(1);
    let mut prod = vec![0; fa.len() + fb.len() - 1];
    for (i, x) in fa.iter().enumerate() {
        for (j, y) in fb.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    prod.pop();
    prod
}

/// Smallest monic irreducible of degree `k` over F_p, found by sieving out
/// all products of lower-degree monic polynomials.
fn smallest_irreducible(p: usize, k: usize) -> Vec<usize> {
    if k == 1 {
        return vec![0];
    }
    let total = p.pow(k as u32);
    let mut reducible = vec![false; total];
    for d in 1..=k / 2 {
        for fa in 0..p.pow(d as u32) {
            let a = digits(fa, p, d);
            for fb in 0..p.pow((k - d) as u32) {
                let b = digits(fb, p, k - d);
                reducible[encode(&monic_product(&a, &b, p), p)] = true;
            }
        }
    }
    let code = (0..total)
        .find(|&c| !reducible[c])
        .expect("an irreducible polynomial of every degree exists");
    digits(code, p, k)
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self, GroupError> {
        let (p, k) = prime_power(q).ok_or(GroupError::NotPrimePower(q))?;
        Ok(FiniteField {
            p,
            k,
            q,
            modulus: smallest_irreducible(p, k),
        })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// Low coefficients of the modulus polynomial.
    pub fn modulus(&self) -> &[usize] {
        &self.modulus
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        let coeffs: Vec<usize> = digits(a, self.p, self.k)
            .into_iter()
            .map(|c| (self.p - c) % self.p)
            .collect();
        encode(&coeffs, self.p)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let (p, k) = (self.p, self.k);
        let fa = digits(a, p, k);
        let fb = digits(b, p, k);
        let mut prod = vec![0; 2 * k];
        for (i, x) in fa.iter().enumerate() {
            for (j, y) in fb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // x^k = -modulus
        for deg in (k..2 * k).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, m) in self.modulus.iter().enumerate() {
                let sub = (c * m) % p;
                prod[deg - k + i] = (prod[deg - k + i] + p - sub) % p;
            }
        }
        encode(&prod[..k], p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn gf4_modulus_is_x2_x_1() {
        let f = FiniteField::new(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1]);
        // x * x = x + 1
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn gf9_modulus_is_x2_plus_1() {
        // x^2 + 1 is the smallest monic irreducible quadratic over F_3
        let f = FiniteField::new(9).unwrap();
        assert_eq!(f.modulus(), &[1, 0]);
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            let f = FiniteField::new(q).unwrap();
            for a in 1..q {
                assert!((1..q).any(|b| f.mul(a, b) == 1), "q={q} a={a}");
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }

    #[test]
    fn distributive_law_gf8() {
        let f = FiniteField::new(8).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                }
            }
        }
    }
}
