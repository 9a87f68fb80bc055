//! Dense univariate polynomials over a prime field F_q, and the
//! equal-degree splitting used to factor Φ_l mod q.

use std::cmp::Ordering;

use num_bigint::BigUint;
use rand::Rng;

use crate::modp::{inv_mod, mul_mod};

/// Polynomial over F_q, coefficients low to high, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqPoly {
    q: u64,
    coeffs: Vec<u64>,
}

impl FqPoly {
    pub fn new(q: u64, coeffs: Vec<u64>) -> Self {
        let mut p = FqPoly {
            q,
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
        };
        p.trim();
        p
    }

    pub fn zero(q: u64) -> Self {
        FqPoly { q, coeffs: vec![] }
    }

    pub fn constant(q: u64, c: u64) -> Self {
        Self::new(q, vec![c])
    }

    /// x
    pub fn x(q: u64) -> Self {
        Self::new(q, vec![0, 1])
    }

    /// Φ_l = 1 + x + ⋯ + x^(l-1) for prime l.
    pub fn cyclotomic(q: u64, l: u64) -> Self {
        Self::new(q, vec![1; l as usize])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn add(&self, other: &FqPoly) -> FqPoly {
        let q = self.q;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                ((a as u128 + b as u128) % q as u128) as u64
            })
            .collect();
        FqPoly::new(q, c)
    }

    pub fn sub(&self, other: &FqPoly) -> FqPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FqPoly {
        let q = self.q;
        FqPoly::new(q, self.coeffs.iter().map(|&c| (q - c) % q).collect())
    }

    pub fn mul(&self, other: &FqPoly) -> FqPoly {
        if self.is_zero() || other.is_zero() {
            return FqPoly::zero(self.q);
        }
        let q = self.q;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + a as u128 * b as u128) % q as u128) as u64;
            }
        }
        FqPoly::new(q, out)
    }

    /// Quotient and remainder. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &FqPoly) -> (FqPoly, FqPoly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let q = self.q;
        let mut rem = self.coeffs.clone();
        let dn = divisor.coeffs.len();
        if rem.len() < dn {
            return (FqPoly::zero(q), self.clone());
        }
        let inv_lead = inv_mod(divisor.lead() as i64, q).expect("field modulus");
        let mut quot = vec![0u64; rem.len() - dn + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dn - 1];
            if top == 0 {
                continue;
            }
            let f = mul_mod(top, inv_lead, q);
            quot[k] = f;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let t = mul_mod(f, d, q);
                rem[k + j] = (rem[k + j] + q - t) % q;
            }
        }
        (FqPoly::new(q, quot), FqPoly::new(q, rem))
    }

    pub fn rem(&self, divisor: &FqPoly) -> FqPoly {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> FqPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead() as i64, self.q).expect("field modulus");
        FqPoly::new(self.q, self.coeffs.iter().map(|&c| mul_mod(c, inv, self.q)).collect())
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &FqPoly) -> FqPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mul_mod(&self, other: &FqPoly, modulus: &FqPoly) -> FqPoly {
        self.mul(other).rem(modulus)
    }

    /// self^exp mod `modulus`, square-and-multiply over the bits of `exp`.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &FqPoly) -> FqPoly {
        let base = self.rem(modulus);
        let mut acc = FqPoly::constant(self.q, 1).rem(modulus);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul_mod(&acc, modulus);
            if exp.bit(i) {
                acc = acc.mul_mod(&base, modulus);
            }
        }
        acc
    }
}

impl PartialOrd for FqPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FqPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

/// Splits a squarefree `f` whose irreducible factors all have degree `d`
/// into those factors (monic, unsorted).
pub fn equal_degree_factors<R: Rng>(f: &FqPoly, d: usize, rng: &mut R) -> Vec<FqPoly> {
    let mut out = Vec::new();
    split_into(&f.monic(), d, rng, &mut out);
    out
}

fn split_into<R: Rng>(f: &FqPoly, d: usize, rng: &mut R, out: &mut Vec<FqPoly>) {
    let n = f.degree();
    if n == 0 {
        return;
    }
    if n == d {
        out.push(f.clone());
        return;
    }
    let q = f.modulus();
    let half_exp = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
    loop {
        let h = FqPoly::new(q, (0..n).map(|_| rng.gen_range(0..q)).collect());
        if h.degree() == 0 {
            continue;
        }
        let probe = if q == 2 {
            // absolute trace h + h^2 + ⋯ + h^(2^(d-1))
            let mut t = h.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul_mod(&t, f);
                acc = acc.add(&t);
            }
            acc
        } else {
            h.pow_mod(&half_exp, f).sub(&FqPoly::constant(q, 1))
        };
        let g = f.gcd(&probe);
        if g.degree() > 0 && g.degree() < n {
            let (cofactor, _) = f.div_rem(&g);
            split_into(&g, d, rng, out);
            split_into(&cofactor.monic(), d, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn division_round_trip() {
        let a = FqPoly::new(7, vec![3, 0, 5, 1, 6]);
        let b = FqPoly::new(7, vec![2, 1, 1]);
        let (qt, r) = a.div_rem(&b);
        assert!(r.degree() < b.degree() || r.is_zero());
        assert_eq!(qt.mul(&b).add(&r), a);
    }

    #[test]
    fn gcd_is_monic() {
        let f = FqPoly::new(5, vec![1, 1]).mul(&FqPoly::new(5, vec![2, 3]));
        let g = FqPoly::new(5, vec![1, 1]).mul(&FqPoly::new(5, vec![2, 0, 1]));
        assert_eq!(f.gcd(&g), FqPoly::new(5, vec![1, 1]));
    }

    #[test]
    fn pow_mod_matches_repeated_multiplication() {
        let m = FqPoly::cyclotomic(11, 7);
        let h = FqPoly::new(11, vec![4, 3, 0, 2]);
        let mut acc = FqPoly::constant(11, 1);
        for e in 0..40u32 {
            assert_eq!(h.pow_mod(&BigUint::from(e), &m), acc);
            acc = acc.mul_mod(&h, &m);
        }
    }

    #[test]
    fn splits_phi_into_equal_degree_factors() {
        // ord_7(2) = 3, ord_11(3) = 5, ord_13(3) = 3, ord_7(29) = 1
        for (q, l, d) in [(2u64, 7u64, 3usize), (3, 11, 5), (3, 13, 3), (29, 7, 1), (2, 17, 8)] {
            let phi = FqPoly::cyclotomic(q, l);
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            let fs = equal_degree_factors(&phi, d, &mut rng);
            assert_eq!(fs.len(), (l as usize - 1) / d);
            assert!(fs.iter().all(|f| f.degree() == d));
            let prod = fs.iter().fold(FqPoly::constant(q, 1), |acc, f| acc.mul(f));
            assert_eq!(prod, phi);
        }
    }
}
