//! The l-th power residue symbol (a/π)_l.
//!
//! Two evaluation routes: modulo the degree-one primes P_k = (p, ζ - α^k)
//! above p (arithmetic in F_p), and modulo a rational integer D through the
//! residue fields F_q[x]/(g) of the primes above each q | D.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::jacobi::normalized_jacobi;
use crate::modp::{factorize, inv_mod, is_prime, multiplicative_order, pow_mod, residue, PrimeContext};
use crate::poly::{equal_degree_factors, FqPoly};

/// Value of a residue symbol: 0, or ζ^j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolValue {
    Zero,
    Root(u64),
}

impl SymbolValue {
    pub fn one() -> Self {
        SymbolValue::Root(0)
    }

    pub fn exponent(self) -> Option<u64> {
        match self {
            SymbolValue::Zero => None,
            SymbolValue::Root(j) => Some(j),
        }
    }

    /// Product of two symbol values in μ_l ∪ {0}.
    pub fn combine(self, other: SymbolValue, l: u64) -> SymbolValue {
        match (self, other) {
            (SymbolValue::Root(a), SymbolValue::Root(b)) => SymbolValue::Root((a + b) % l),
            _ => SymbolValue::Zero,
        }
    }

    /// self^k
    pub fn pow(self, k: u64, l: u64) -> SymbolValue {
        match self {
            SymbolValue::Root(a) => SymbolValue::Root(a * (k % l) % l),
            SymbolValue::Zero if k == 0 => SymbolValue::one(),
            SymbolValue::Zero => SymbolValue::Zero,
        }
    }
}

/// (a / P_k)_l with P_k = (p, ζ - α^k).
pub fn symbol_mod_degree1(ctx: &PrimeContext, a: &CycInt, k: u64) -> Result<SymbolValue> {
    let l = ctx.l();
    let p = ctx.p();
    if a.order() != l {
        return Err(Error::invalid(format!("element of order {} used with l = {l}", a.order())));
    }
    let k = k % l;
    if k == 0 {
        return Err(Error::invalid(format!("prime index must be nonzero mod {l}")));
    }
    let image = a.eval_mod(ctx.alpha_powers()[k as usize], p);
    if image == 0 {
        return Ok(SymbolValue::Zero);
    }
    let s = ctx
        .match_alpha_power(pow_mod(image, (p - 1) / l, p))
        .ok_or_else(|| Error::internal("(p-1)/l power is not an l-th root of unity"))?;
    Ok(SymbolValue::Root(s * inv_mod(k as i64, l).unwrap() % l))
}

/// A prime of Z[ζ_l] above q, as the residue field F_q[x]/(poly) with ζ ↦ x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueFieldFactor {
    pub q: u64,
    pub f: u64,
    /// Monic, coefficients low to high.
    pub poly: Vec<u64>,
    /// x mod poly, coefficients low to high.
    pub zeta_image: Vec<u64>,
}

impl ResidueFieldFactor {
    fn modulus(&self) -> FqPoly {
        FqPoly::new(self.q, self.poly.clone())
    }
}

/// The irreducible factors of Φ_l over F_q, in a seed-independent order.
pub fn factor_cyclotomic_mod_q(l: u64, q: u64, seed: u64) -> Result<Vec<ResidueFieldFactor>> {
    if l < 3 || !is_prime(l) {
        return Err(Error::invalid(format!("l = {l} must be an odd prime")));
    }
    if !is_prime(q) {
        return Err(Error::invalid(format!("q = {q} is not prime")));
    }
    if q == l {
        return Err(Error::invalid(format!("q = l = {l} is ramified")));
    }
    let f = multiplicative_order(q % l, l);
    let phi = FqPoly::cyclotomic(q, l);
    let mut factors = if f == l - 1 {
        vec![phi]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q.wrapping_mul(0x9e37_79b9_7f4a_7c15)) ^ l);
        equal_degree_factors(&phi, f as usize, &mut rng)
    };
    factors.sort();
    Ok(factors
        .into_iter()
        .map(|g| {
            let zeta_image = FqPoly::x(q).rem(&g).into_coeffs();
            ResidueFieldFactor {
                q,
                f,
                poly: g.into_coeffs(),
                zeta_image,
            }
        })
        .collect())
}

fn image_in(a: &CycInt, factor: &ResidueFieldFactor) -> FqPoly {
    let q = factor.q;
    let qb = BigInt::from(q);
    let mut coeffs = vec![0u64];
    coeffs.extend(
        a.coeffs()
            .iter()
            .map(|c| c.mod_floor(&qb).to_u64().unwrap()),
    );
    FqPoly::new(q, coeffs).rem(&factor.modulus())
}

/// (a / Q)_l for one prime Q above q.
pub fn symbol_mod_factor(a: &CycInt, factor: &ResidueFieldFactor) -> Result<SymbolValue> {
    let l = a.order();
    let g = factor.modulus();
    let image = image_in(a, factor);
    if image.is_zero() {
        return Ok(SymbolValue::Zero);
    }
    let exp = (BigUint::from(factor.q).pow(factor.f as u32) - 1u32) / l;
    let power = image.pow_mod(&exp, &g);
    let x = FqPoly::x(factor.q);
    let mut root = FqPoly::constant(factor.q, 1).rem(&g);
    for j in 0..l {
        if root == power {
            return Ok(SymbolValue::Root(j));
        }
        root = root.mul_mod(&x, &g);
    }
    Err(Error::internal(format!(
        "(q^f-1)/l power is not a power of x mod q = {}",
        factor.q
    )))
}

/// (a / q)_l = Π (a / Q)_l over the primes Q above q.
pub fn symbol_mod_rational_prime(a: &CycInt, q: u64, seed: u64) -> Result<SymbolValue> {
    let l = a.order();
    if q == l {
        return Err(Error::invalid(format!("symbol undefined modulo the ramified prime {l}")));
    }
    let mut acc = SymbolValue::one();
    for factor in factor_cyclotomic_mod_q(l, q, seed)? {
        acc = acc.combine(symbol_mod_factor(a, &factor)?, l);
    }
    Ok(acc)
}

/// (a / D)_l for a rational integer D coprime to l and to norm(a).
pub fn symbol_rational_base(a: &CycInt, d: i64, seed: u64) -> Result<SymbolValue> {
    let l = a.order();
    if d == 0 {
        return Err(Error::invalid("D must be nonzero"));
    }
    let d_abs = d.unsigned_abs();
    if d_abs.is_multiple_of(l) {
        return Err(Error::invalid(format!("D = {d} is not coprime to l = {l}")));
    }
    let primes = factorize(d_abs);
    let norm = a.norm();
    for &(q, _) in &primes {
        if (&norm % BigInt::from(q)).is_zero() {
            return Err(Error::SharedFactor { factor: q });
        }
    }
    debug_assert!(!norm.is_negative());
    let mut acc = SymbolValue::one();
    for (q, e) in primes {
        acc = acc.combine(symbol_mod_rational_prime(a, q, seed)?.pow(e as u64, l), l);
    }
    Ok(acc)
}

/// Both sides of Eisenstein reciprocity for θ = J(1,1) and a rational D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisensteinReport {
    pub d: i64,
    /// (θ / D)_l, computed modulo D.
    pub left: SymbolValue,
    /// (D / θ)_l, computed modulo p through ⟨θ⟩ = Π_{i ≤ (l-1)/2} P_i.
    pub right: SymbolValue,
    pub holds: bool,
}

pub fn check_eisenstein(ctx: &PrimeContext, d: i64, seed: u64) -> Result<EisensteinReport> {
    let theta = normalized_jacobi(ctx)?;
    check_eisenstein_with(ctx, &theta, d, seed)
}

/// As [`check_eisenstein`] with a precomputed θ = J(1,1).
pub fn check_eisenstein_with(
    ctx: &PrimeContext,
    theta: &CycInt,
    d: i64,
    seed: u64,
) -> Result<EisensteinReport> {
    let l = ctx.l();
    if residue(d, ctx.p()) == 0 || residue(d, l) == 0 {
        return Err(Error::invalid(format!(
            "D = {d} must be coprime to l·p = {}",
            l * ctx.p()
        )));
    }
    let left = symbol_rational_base(theta, d, seed)?;
    let d_elem = CycInt::from_int(l, d);
    let mut right = SymbolValue::one();
    for i in 1..=(l - 1) / 2 {
        right = right.combine(symbol_mod_degree1(ctx, &d_elem, i)?, l);
    }
    Ok(EisensteinReport {
        d,
        left,
        right,
        holds: left == right,
    })
}
