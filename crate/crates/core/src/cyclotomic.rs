//! Exact arithmetic in Z[ζ_l] for an odd prime l.
//!
//! Elements are stored in the integral basis {ζ, ζ², …, ζ^(l-1)}. A rational
//! integer n is the element with every coefficient equal to -n, from the
//! relation 1 = -(ζ + ⋯ + ζ^(l-1)). Constants are eliminated eagerly, so
//! structural equality is ring equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modp::{inv_mod, is_prime, mul_mod, pow_mod, primitive_roots, residue, PrimeContext};

/// Orders l for which Z[ζ_l] is norm-Euclidean.
pub const NORM_EUCLIDEAN_ORDERS: [u64; 4] = [3, 5, 7, 11];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    l: u64,
    // coeffs[h - 1] multiplies ζ^h
    coeffs: Vec<BigInt>,
}

/// The class of an element modulo (1-ζ)²: x ≡ b - c(1-ζ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Jet {
    pub b: u64,
    pub c: u64,
}

/// Record of the unit factors applied by [`CycInt::normalize_associate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UnitTrail {
    /// The input was multiplied by -1 first.
    pub negated: bool,
    /// Power of ζ applied.
    pub zeta_exp: u64,
    /// (a, d) pairs: multiplication by u_a^d.
    pub unit_powers: Vec<(u64, u64)>,
}

impl UnitTrail {
    /// Applies the recorded unit factors to `x`.
    pub fn replay(&self, x: &CycInt) -> Result<CycInt> {
        let l = x.l;
        let mut out = if self.negated { -x } else { x.clone() };
        out = &out * &CycInt::zeta_pow(l, self.zeta_exp as i64);
        for &(a, d) in &self.unit_powers {
            out = &out * &cyclotomic_unit(l, a)?.pow(d);
        }
        Ok(out)
    }

    pub fn is_empty(&self) -> bool {
        !self.negated && self.zeta_exp == 0 && self.unit_powers.is_empty()
    }
}

fn check_order(l: u64) -> Result<()> {
    if l < 3 || !is_prime(l) {
        return Err(Error::invalid(format!("l = {l} must be an odd prime")));
    }
    Ok(())
}

impl CycInt {
    pub fn zero(l: u64) -> Self {
        CycInt {
            l,
            coeffs: vec![BigInt::zero(); (l - 1) as usize],
        }
    }

    pub fn one(l: u64) -> Self {
        Self::from_int(l, 1)
    }

    /// The rational integer `n`.
    pub fn from_int(l: u64, n: impl Into<BigInt>) -> Self {
        let n: BigInt = n.into();
        CycInt {
            l,
            coeffs: vec![-n; (l - 1) as usize],
        }
    }

    /// ζ^k for any integer k.
    pub fn zeta_pow(l: u64, k: i64) -> Self {
        let e = residue(k, l) as usize;
        let mut full = vec![BigInt::zero(); l as usize];
        full[e] = BigInt::one();
        Self::from_full(l, full)
    }

    /// Element with the given coefficients on ζ, …, ζ^(l-1).
    pub fn from_coeffs(l: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        check_order(l)?;
        if coeffs.len() as u64 != l - 1 {
            return Err(Error::invalid(format!(
                "expected {} coefficients, got {}",
                l - 1,
                coeffs.len()
            )));
        }
        Ok(CycInt { l, coeffs })
    }

    pub fn from_i64s(l: u64, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(l, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Σ counts[e]·ζ^e for e = 0..l-1.
    pub fn from_exponent_counts(l: u64, counts: &[i64]) -> Self {
        debug_assert_eq!(counts.len() as u64, l);
        let c0 = counts[0];
        CycInt {
            l,
            coeffs: counts[1..].iter().map(|&c| BigInt::from(c - c0)).collect(),
        }
    }

    // Length-l representation with a zero constant slot.
    fn full(&self) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(self.l as usize);
        v.push(BigInt::zero());
        v.extend(self.coeffs.iter().cloned());
        v
    }

    // Canonicalizes Σ full[e]·ζ^e.
    fn from_full(l: u64, full: Vec<BigInt>) -> Self {
        let mut it = full.into_iter();
        let c0 = it.next().unwrap_or_default();
        CycInt {
            l,
            coeffs: it.map(|c| c - &c0).collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.l
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if any.
    pub fn as_rational(&self) -> Option<BigInt> {
        let first = self.coeffs.first()?;
        if self.coeffs.iter().all(|c| c == first) {
            Some(-first)
        } else {
            None
        }
    }

    pub fn check_same_ring(&self, other: &CycInt) -> Result<()> {
        if self.l != other.l {
            return Err(Error::invalid(format!(
                "mismatched orders {} and {}",
                self.l, other.l
            )));
        }
        Ok(())
    }

    pub fn pow(&self, mut exp: u64) -> CycInt {
        let mut base = self.clone();
        let mut acc = CycInt::one(self.l);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// σ_i: ζ ↦ ζ^i.
    pub fn galois(&self, i: i64) -> Result<CycInt> {
        let i = residue(i, self.l);
        if i == 0 {
            return Err(Error::invalid(format!(
                "galois index must be nonzero mod {}",
                self.l
            )));
        }
        Ok(self.galois_unchecked(i))
    }

    fn galois_unchecked(&self, i: u64) -> CycInt {
        let l = self.l;
        let mut full = vec![BigInt::zero(); l as usize];
        for (h, c) in self.coeffs.iter().enumerate() {
            full[((h as u64 + 1) * i % l) as usize] = c.clone();
        }
        Self::from_full(l, full)
    }

    /// Complex conjugation σ_(l-1).
    pub fn conj(&self) -> CycInt {
        self.galois_unchecked(self.l - 1)
    }

    // Π_{i=2}^{l-1} σ_i(self); self·cofactor = norm.
    fn norm_cofactor(&self) -> CycInt {
        (2..self.l).fold(CycInt::one(self.l), |acc, i| &acc * &self.galois_unchecked(i))
    }

    /// Π σ_i(x) over i = 1..l-1, as a rational integer.
    pub fn norm(&self) -> BigInt {
        let n = self * &self.norm_cofactor();
        n.as_rational()
            .expect("product of all conjugates must be a rational integer")
    }

    /// (f(1), f'(1)) mod l for the coefficient polynomial f.
    pub fn one_jet(&self) -> Jet {
        let l = BigInt::from(self.l);
        let mut b = BigInt::zero();
        let mut c = BigInt::zero();
        for (h, a) in self.coeffs.iter().enumerate() {
            b += a;
            c += a * (h + 1);
        }
        Jet {
            b: b.mod_floor(&l).to_u64().unwrap(),
            c: c.mod_floor(&l).to_u64().unwrap(),
        }
    }

    /// Largest k with (1-ζ)^k dividing x; `None` for zero.
    pub fn lambda_valuation(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let lambda = one_minus_zeta(self.l);
        let mut cur = self.clone();
        let mut k = 0;
        while cur.one_jet().b == 0 {
            cur = cur
                .divide_exact(&lambda)
                .expect("(1-ζ) divides x whenever f(1) ≡ 0 mod l");
            k += 1;
        }
        Some(k)
    }

    /// The q with self = q·y, or `NotDivisible`.
    pub fn divide_exact(&self, y: &CycInt) -> Result<CycInt> {
        self.check_same_ring(y)?;
        if y.is_zero() {
            return Err(Error::invalid("division by zero"));
        }
        let cof = y.norm_cofactor();
        let n = (y * &cof)
            .as_rational()
            .ok_or_else(|| Error::internal("norm is not rational"))?;
        let num = self * &cof;
        let mut coeffs = Vec::with_capacity(num.coeffs.len());
        for c in num.coeffs {
            let (q, r) = c.div_rem(&n);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            coeffs.push(q);
        }
        Ok(CycInt { l: self.l, coeffs })
    }

    /// Image under ζ ↦ `root` in F_p.
    pub fn eval_mod(&self, root: u64, p: u64) -> u64 {
        let pb = BigInt::from(p);
        let mut acc = 0u64;
        let mut power = root % p;
        for c in &self.coeffs {
            let c = c.mod_floor(&pb).to_u64().unwrap();
            acc = (acc + mul_mod(c, power, p)) % p;
            power = mul_mod(power, root, p);
        }
        acc
    }

    /// The unit associate β ≡ -1 mod (1-ζ)².
    ///
    /// With b, c the jet of x, a the least primitive root mod l and d the
    /// exponent with a^d·b ≡ -1, β = ζ^(c·a^d)·u_a^d·x. Exponents d in the
    /// upper half are folded into a sign through a^((l-1)/2) ≡ -1, which makes
    /// the output depend only on x up to ±ζ^k.
    pub fn normalize_associate(&self) -> Result<(CycInt, UnitTrail)> {
        let l = self.l;
        let jet = self.one_jet();
        if jet.b == 0 {
            return Err(Error::invalid(
                "element is divisible by 1-ζ and has no associate ≡ -1 mod (1-ζ)²",
            ));
        }
        let a = primitive_roots(l).next().unwrap();
        let half = (l - 1) / 2;
        let d_full = (0..l - 1)
            .find(|&d| mul_mod(pow_mod(a, d, l), jet.b, l) == l - 1)
            .unwrap();
        let (negated, d, c) = if d_full >= half {
            (true, d_full - half, (l - jet.c) % l)
        } else {
            (false, d_full, jet.c)
        };
        let trail = UnitTrail {
            negated,
            zeta_exp: mul_mod(c, pow_mod(a, d, l), l),
            unit_powers: if d > 0 { vec![(a, d)] } else { vec![] },
        };
        let beta = trail.replay(self)?;
        debug_assert_eq!(beta.one_jet(), Jet { b: l - 1, c: 0 });
        Ok((beta, trail))
    }

    /// Greatest common divisor by norm-Euclidean division, l ∈ {3, 5, 7, 11}.
    pub fn euclid_gcd(&self, y: &CycInt) -> Result<CycInt> {
        self.check_same_ring(y)?;
        if !NORM_EUCLIDEAN_ORDERS.contains(&self.l) {
            return Err(Error::Unsupported(format!(
                "l = {} is not norm-Euclidean",
                self.l
            )));
        }
        if self.is_zero() && y.is_zero() {
            return Err(Error::invalid("gcd(0, 0) is undefined"));
        }
        let mut a = self.clone();
        let mut b = y.clone();
        while !b.is_zero() {
            let r = euclid_remainder(&a, &b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }
}

fn one_minus_zeta(l: u64) -> CycInt {
    &CycInt::one(l) - &CycInt::zeta_pow(l, 1)
}

// Nearest integer to n/d, ties toward zero.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (n, d) = if d.is_negative() { (-n, -d) } else { (n.clone(), d.clone()) };
    let q = n.div_floor(&d);
    let twice_r: BigInt = (&n - &q * &d) * 2;
    match twice_r.cmp(&d) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q.is_negative() {
                q + 1
            } else {
                q
            }
        }
    }
}

// x - q·y with |N(x - q·y)| < |N(y)|.
fn euclid_remainder(x: &CycInt, y: &CycInt) -> Result<CycInt> {
    let l = x.l;
    let cof = y.norm_cofactor();
    let ny = (y * &cof).as_rational().unwrap();
    let bound = ny.abs();
    let num = x * &cof;

    let remainder = |q: &CycInt| -> (CycInt, BigInt) {
        let r = x - &(q * y);
        let n = r.norm().abs();
        (r, n)
    };

    let rounded = CycInt {
        l,
        coeffs: num.coeffs.iter().map(|c| round_div(c, &ny)).collect(),
    };
    let (mut best_q, (mut best_r, mut best_n)) = {
        let rn = remainder(&rounded);
        (rounded, rn)
    };
    if best_n < bound {
        return Ok(best_r);
    }

    // Shifted roundings: pick the full-coordinate representative that makes
    // coordinate j integral before rounding the rest.
    let full = num.full();
    for j in 1..l as usize {
        let shift = full[j].mod_floor(&ny);
        let q = CycInt::from_full(
            l,
            full.iter().map(|c| round_div(&(c - &shift), &ny)).collect(),
        );
        let (r, n) = remainder(&q);
        if n < best_n {
            best_q = q;
            best_r = r;
            best_n = n;
        }
    }

    // Greedy ±ζ^h descent.
    while best_n >= bound {
        let mut improved = false;
        for h in 0..l as i64 {
            for sign in [1, -1] {
                let step = &CycInt::zeta_pow(l, h) * &CycInt::from_int(l, sign);
                let q = &best_q + &step;
                let (r, n) = remainder(&q);
                if n < best_n {
                    best_q = q;
                    best_r = r;
                    best_n = n;
                    improved = true;
                }
            }
        }
        if !improved {
            return Err(Error::internal(format!(
                "no norm-decreasing quotient found for l = {l}"
            )));
        }
    }
    Ok(best_r)
}

/// The cyclotomic unit u_a = ζ^((1-a)/2)·(1-ζ^a)/(1-ζ), with the half
/// exponent taken mod l. Satisfies u_a ≡ a mod (1-ζ)².
pub fn cyclotomic_unit(l: u64, a: u64) -> Result<CycInt> {
    check_order(l)?;
    let a_red = a % l;
    if a_red <= 1 {
        return Err(Error::invalid(format!(
            "cyclotomic unit needs a ≢ 0, 1 mod {l}, got {a}"
        )));
    }
    let inv2 = inv_mod(2, l).unwrap();
    let e = mul_mod(residue(1 - a_red as i64, l), inv2, l);
    // (1-ζ^a)/(1-ζ) = 1 + ζ + ⋯ + ζ^(a-1)
    let mut full = vec![BigInt::zero(); l as usize];
    for k in 0..a_red {
        full[((e + k) % l) as usize] = BigInt::one();
    }
    Ok(CycInt::from_full(l, full))
}

/// A normalized generator K ≡ -1 mod (1-ζ)² of P_1 = (p, ζ - α).
pub fn prime_generator(ctx: &PrimeContext) -> Result<CycInt> {
    let l = ctx.l();
    if !NORM_EUCLIDEAN_ORDERS.contains(&l) {
        return Err(Error::Unsupported(format!(
            "generator search not implemented for non-Euclidean l = {l}"
        )));
    }
    let p = CycInt::from_int(l, ctx.p());
    let zeta_minus_alpha = &CycInt::zeta_pow(l, 1) - &CycInt::from_int(l, ctx.alpha());
    let g = p.euclid_gcd(&zeta_minus_alpha)?;
    let (k, _) = g.normalize_associate()?;
    if k.norm() != BigInt::from(ctx.p()) {
        return Err(Error::internal(format!(
            "generator norm {} differs from p = {}",
            k.norm(),
            ctx.p()
        )));
    }
    if k.eval_mod(ctx.alpha(), ctx.p()) != 0 {
        return Err(Error::internal("generator does not lie in (p, ζ - α)"));
    }
    Ok(k)
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt(l={}, {})", self.l, self)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_rational() {
            return write!(f, "{n}");
        }
        let mut first = true;
        for (h, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match h + 1 {
                1 => write!(f, "ζ")?,
                e => write!(f, "ζ^{e}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Add<&CycInt> for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.l, rhs.l, "mismatched cyclotomic orders");
        CycInt {
            l: self.l,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&CycInt> for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.l, rhs.l, "mismatched cyclotomic orders");
        CycInt {
            l: self.l,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            l: self.l,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&CycInt> for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.l, rhs.l, "mismatched cyclotomic orders");
        let l = self.l as usize;
        let mut full = vec![BigInt::zero(); l];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                full[(i + j + 2) % l] += a * b;
            }
        }
        CycInt::from_full(self.l, full)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}
