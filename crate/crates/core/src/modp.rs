//! Arithmetic in the prime field F_p: primality, primitive roots, the index
//! (discrete logarithm) table, and the order-l character χ with χ(γ) = ζ.

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i64, m: u64) -> Option<u64> {
    let m_i = m as i128;
    let (mut old_r, mut r) = ((a as i128).rem_euclid(m_i), m_i);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m_i) as u64)
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn residue(v: i64, m: u64) -> u64 {
    (v as i128).rem_euclid(m as i128) as u64
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Multiplicative order of `a` modulo the prime `m`.
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    let mut order = m - 1;
    for (q, _) in factorize(m - 1) {
        while order.is_multiple_of(q) && pow_mod(a, order / q, m) == 1 {
            order /= q;
        }
    }
    order
}

fn is_primitive_root(g: u64, p: u64, factors: &[(u64, u32)]) -> bool {
    !g.is_multiple_of(p) && factors.iter().all(|&(q, _)| pow_mod(g, (p - 1) / q, p) != 1)
}

/// Primitive roots of `p` in increasing order.
pub fn primitive_roots(p: u64) -> impl Iterator<Item = u64> {
    let factors = factorize(p - 1);
    (2..p).filter(move |&g| is_primitive_root(g, p, &factors))
}

pub fn least_primitive_root(p: u64) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not an odd prime")));
    }
    primitive_roots(p)
        .next()
        .ok_or_else(|| Error::internal(format!("no primitive root found for {p}")))
}

/// The data fixed by a choice of (l, p): a primitive root γ, the element
/// α = γ^((p-1)/l) of order l, and the index table of F_p*.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeContext {
    l: u64,
    p: u64,
    gamma: u64,
    alpha: u64,
    alpha_powers: Vec<u64>,
    // ind[v - 1] = Ind_γ(v)
    ind: Vec<u32>,
}

impl PrimeContext {
    /// Context with γ the least primitive root of `p`.
    pub fn new(l: u64, p: u64) -> Result<Self> {
        Self::check_orders(l, p)?;
        let gamma = least_primitive_root(p)?;
        Ok(Self::build(l, p, gamma))
    }

    /// Context with an explicitly chosen primitive root.
    pub fn with_generator(l: u64, p: u64, gamma: u64) -> Result<Self> {
        Self::check_orders(l, p)?;
        if !is_primitive_root(gamma % p, p, &factorize(p - 1)) {
            return Err(Error::invalid(format!("{gamma} is not a primitive root mod {p}")));
        }
        Ok(Self::build(l, p, gamma % p))
    }

    fn check_orders(l: u64, p: u64) -> Result<()> {
        if l < 3 || !is_prime(l) {
            return Err(Error::invalid(format!("l = {l} must be an odd prime")));
        }
        if !is_prime(p) {
            return Err(Error::invalid(format!("p = {p} is not prime")));
        }
        if p % l != 1 {
            return Err(Error::invalid(format!("p = {p} is not congruent to 1 mod {l}")));
        }
        if p > u32::MAX as u64 {
            return Err(Error::invalid(format!("p = {p} exceeds the index table range")));
        }
        Ok(())
    }

    fn build(l: u64, p: u64, gamma: u64) -> Self {
        let mut ind = vec![0u32; (p - 1) as usize];
        let mut x = 1u64;
        for e in 0..p - 1 {
            ind[(x - 1) as usize] = e as u32;
            x = mul_mod(x, gamma, p);
        }
        let alpha = pow_mod(gamma, (p - 1) / l, p);
        let alpha_powers = (0..l).map(|j| pow_mod(alpha, j, p)).collect();
        PrimeContext {
            l,
            p,
            gamma,
            alpha,
            alpha_powers,
            ind,
        }
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn gamma(&self) -> u64 {
        self.gamma
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    /// α^0, α^1, …, α^(l-1) mod p.
    pub fn alpha_powers(&self) -> &[u64] {
        &self.alpha_powers
    }

    /// Ind_γ(v) in [0, p-2].
    pub fn index(&self, v: i64) -> Result<u64> {
        let r = residue(v, self.p);
        if r == 0 {
            return Err(Error::invalid(format!(
                "index undefined at 0 mod {}",
                self.p
            )));
        }
        Ok(self.ind[(r - 1) as usize] as u64)
    }

    /// Table lookup for a reduced nonzero residue. Panics on 0.
    #[inline]
    pub(crate) fn index_unchecked(&self, r: u64) -> u64 {
        self.ind[(r - 1) as usize] as u64
    }

    /// The exponent e with χ(v) = ζ^e, i.e. Ind_γ(v) mod l.
    pub fn chi_exponent(&self, v: i64) -> Result<u64> {
        self.index(v)
            .map(|i| i % self.l)
            .map_err(|_| Error::invalid(format!("character undefined at 0 mod {}", self.p)))
    }

    /// The j in [0, l) with r = α^j mod p, if r is an l-th root of unity.
    pub fn match_alpha_power(&self, r: u64) -> Option<u64> {
        self.alpha_powers
            .iter()
            .position(|&a| a == r % self.p)
            .map(|j| j as u64)
    }
}
