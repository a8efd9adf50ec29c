//! Exact arithmetic in `Z[x]/(x^e - 1)` with equality decided modulo `Φ_e`.

use std::collections::HashMap;

/// Coefficients of `Φ_e`, lowest degree first, obtained by dividing
/// `x^e - 1` by `Φ_d` for every proper divisor `d` of `e`.
pub fn cyclotomic_polynomial(e: usize) -> Vec<i64> {
    let mut memo = HashMap::new();
    phi(e, &mut memo)
}

fn phi(e: usize, memo: &mut HashMap<usize, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&e) {
        return p.clone();
    }
    let mut num = vec![0i64; e + 1];
    num[0] = -1;
    num[e] = 1;
    for d in (1..e).filter(|d| e % d == 0) {
        let den = phi(d, memo);
        num = exact_div(&num, &den);
    }
    memo.insert(e, num.clone());
    num
}

/// Quotient of `num` by the monic `den`; the division must be exact.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; rem.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[i + j] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Remainder of `poly` modulo the monic `modulus`.
pub fn poly_rem(poly: &[i128], modulus: &[i64]) -> Vec<i128> {
    let mut rem = poly.to_vec();
    let dd = modulus.len() - 1;
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c != 0 {
            for (j, &mc) in modulus.iter().enumerate() {
                rem[i - dd + j] -= c * mc as i128;
            }
        }
    }
    rem.truncate(dd);
    rem
}

/// `Σ a_k ζ_e^k`, stored as the coefficient vector `a` of length `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicElement {
    coefficients: Vec<i64>,
}

impl CyclotomicElement {
    pub fn zero(e: usize) -> Self {
        Self {
            coefficients: vec![0; e],
        }
    }

    pub fn exponent(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    /// Adds `ζ^k`.
    pub fn add_power(&mut self, k: usize) {
        let e = self.coefficients.len();
        self.coefficients[k % e] += 1;
    }

    /// Whether the element equals the integer `c`, i.e. `Φ_e` divides
    /// `Σ a_k x^k - c`.
    pub fn equals_integer(&self, c: i64, phi_e: &[i64]) -> bool {
        let mut p: Vec<i128> = self.coefficients.iter().map(|&a| a as i128).collect();
        p[0] -= c as i128;
        poly_rem(&p, phi_e).iter().all(|&r| r == 0)
    }

    pub fn equals(&self, other: &Self, phi_e: &[i64]) -> bool {
        let p: Vec<i128> = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(&a, &b)| a as i128 - b as i128)
            .collect();
        poly_rem(&p, phi_e).iter().all(|&r| r == 0)
    }

    /// Complex value `(re, im)` at `ζ_e = exp(2πi/e)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let e = self.coefficients.len() as f64;
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .fold((0.0, 0.0), |(re, im), (k, &a)| {
                let t = std::f64::consts::TAU * k as f64 / e;
                (re + a as f64 * t.cos(), im + a as f64 * t.sin())
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // first polynomial with a coefficient outside {-1, 0, 1}
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn ramanujan_sum_c6_1() {
        // primitive sixth roots ζ + ζ^5 = 1
        let phi = cyclotomic_polynomial(6);
        let mut s = CyclotomicElement::zero(6);
        s.add_power(1);
        s.add_power(5);
        assert!(s.equals_integer(1, &phi));
        assert!(!s.equals_integer(2, &phi));
        let (re, im) = s.to_complex();
        assert!((re - 1.0).abs() < 1e-12 && im.abs() < 1e-12);
    }

    #[test]
    fn full_sum_of_roots_is_zero() {
        for e in 2..40 {
            let phi = cyclotomic_polynomial(e);
            let mut s = CyclotomicElement::zero(e);
            (0..e).for_each(|k| s.add_power(k));
            assert!(s.equals_integer(0, &phi), "e = {e}");
        }
    }
}
