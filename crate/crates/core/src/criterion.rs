//! Decision procedures for the index class of D mod l.
//!
//! With φ = J(1,1) and S = Σ_{i=1}^{(l-1)/2} i⁻¹ mod l, the symbol (φ/D)_l
//! equals ζ^(j·S) when Ind_γ(D) ≡ j mod l. So D is an l-th power residue
//! iff (φ/D)_l = 1, and when S ≢ 0 the class is recovered as t·S⁻¹.

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::jacobi::{a_coeffs, normalized_jacobi};
use crate::modp::{inv_mod, is_prime, mul_mod, residue, PrimeContext};
use crate::oracle::ind_class_oracle;
use crate::symbol::{symbol_rational_base, SymbolValue};

/// Σ_{i=1}^{(l-1)/2} i⁻¹ mod l.
pub fn sum_inverse_halves(l: u64) -> u64 {
    (1..=(l - 1) / 2).fold(0, |acc, i| (acc + inv_mod(i as i64, l).unwrap()) % l)
}

/// (l, S) for every odd prime l ≤ `l_max`.
pub fn inverse_half_sums(l_max: u64) -> Vec<(u64, u64)> {
    (3..=l_max)
        .filter(|&l| is_prime(l))
        .map(|l| (l, sum_inverse_halves(l)))
        .collect()
}

/// Odd primes l ≤ `l_max` with S ≡ 0 mod l.
pub fn conjecture_scan(l_max: u64) -> Vec<u64> {
    inverse_half_sums(l_max)
        .into_iter()
        .filter(|&(_, s)| s == 0)
        .map(|(l, _)| l)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub d: i64,
    pub s: u64,
    /// Exponent of (φ/D)_l.
    pub t: u64,
    /// `None` when S ≡ 0 mod l.
    pub ind_class: Option<u64>,
    pub is_residue: bool,
}

/// Classifies integers D against a fixed context. Holds φ = J(1,1).
#[derive(Debug, Clone)]
pub struct Classifier<'a> {
    ctx: &'a PrimeContext,
    phi: CycInt,
    s: u64,
    seed: u64,
}

impl<'a> Classifier<'a> {
    pub fn new(ctx: &'a PrimeContext, seed: u64) -> Result<Self> {
        Ok(Classifier {
            ctx,
            phi: normalized_jacobi(ctx)?,
            s: sum_inverse_halves(ctx.l()),
            seed,
        })
    }

    pub fn context(&self) -> &PrimeContext {
        self.ctx
    }

    pub fn phi(&self) -> &CycInt {
        &self.phi
    }

    /// Only the factors of D enter the symbol computation; p enters through φ.
    pub fn classify(&self, d: i64) -> Result<Classification> {
        let l = self.ctx.l();
        let p = self.ctx.p();
        if residue(d, p) == 0 {
            return Err(Error::invalid(format!("D = {d} is not coprime to p = {p}")));
        }
        if residue(d, l) == 0 {
            return Err(Error::invalid(format!("D = {d} is not coprime to l = {l}")));
        }
        let t = match symbol_rational_base(&self.phi, d, self.seed)? {
            SymbolValue::Root(t) => t,
            SymbolValue::Zero => {
                return Err(Error::internal(format!("(φ/{d}) vanished although gcd(D, p) = 1")))
            }
        };
        let ind_class = inv_mod(self.s as i64, l).map(|s_inv| mul_mod(t, s_inv, l));
        Ok(Classification {
            d,
            s: self.s,
            t,
            ind_class,
            is_residue: t == 0,
        })
    }
}

pub fn classify(ctx: &PrimeContext, d: i64, seed: u64) -> Result<Classification> {
    Classifier::new(ctx, seed)?.classify(d)
}

/// Result of a closed-form criterion for a specific D, with the oracle
/// answer alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionReport {
    pub d: i64,
    pub is_residue: bool,
    /// Ind_γ(D) ≡ 1 mod l, as decided by the criterion.
    pub index_one: bool,
    pub oracle_class: u64,
    pub agrees: bool,
}

impl CriterionReport {
    fn new(d: i64, is_residue: bool, index_one: bool, oracle_class: u64) -> Self {
        CriterionReport {
            d,
            is_residue,
            index_one,
            oracle_class,
            agrees: is_residue == (oracle_class == 0) && index_one == (oracle_class == 1),
        }
    }
}

/// Congruences mod l² in the coefficients a_h(n) of J(1, n) deciding
/// whether l is an l-th power mod p, and whether Ind_γ(l) ≡ 1.
pub fn criterion_for_l(ctx: &PrimeContext) -> Result<CriterionReport> {
    let l = ctx.l() as i64;
    let p = ctx.p() as i64;
    let l2 = l * l;
    let mut weighted = 0i64;
    for n in 1..=(l - 2) as u64 {
        for (h, a) in a_coeffs(ctx, n)?.into_iter().enumerate() {
            let h = h as i64 + 1;
            weighted = (weighted + a * (2 * h - l + 1)).rem_euclid(l2);
        }
    }
    let is_residue = ((l - 1) * (p - l + 1) + weighted).rem_euclid(l2) == 0;
    let index_one = !is_residue && ((l - 1) * (p - 3 * l + 1) + weighted).rem_euclid(l2) == 0;
    let oracle = ind_class_oracle(ctx, l)?;
    Ok(CriterionReport::new(l, is_residue, index_one, oracle))
}

/// Parities of a_h(1) deciding whether 2 is an l-th power mod p, and
/// (when it is not) whether Ind_γ(2) ≡ 1.
pub fn criterion_for_2(ctx: &PrimeContext) -> Result<CriterionReport> {
    let l = ctx.l() as usize;
    let a = a_coeffs(ctx, 1)?;
    let is_residue = a.iter().sum::<i64>().rem_euclid(2) == 0;
    let index_one = !is_residue && a[l - 3].rem_euclid(2) == 1;
    let oracle = ind_class_oracle(ctx, 2)?;
    Ok(CriterionReport::new(2, is_residue, index_one, oracle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_SEED;

    fn ctx(l: u64, p: u64) -> PrimeContext {
        PrimeContext::new(l, p).unwrap()
    }

    #[test]
    fn inverse_half_sum_examples() {
        assert_eq!(sum_inverse_halves(3), 1);
        assert_eq!(sum_inverse_halves(5), 4);
        assert_eq!(sum_inverse_halves(7), 3);
        assert_eq!(sum_inverse_halves(11), 1);
    }

    #[test]
    fn scan_examples() {
        assert!(conjecture_scan(100).is_empty());
        assert!(conjecture_scan(1000).is_empty());
        // 1093 is a Wieferich prime; exact rational summation of the
        // harmonic number H_546 gives S ≡ 0 mod 1093.
        assert_eq!(conjecture_scan(1100), vec![1093]);
        assert_eq!(inverse_half_sums(7), vec![(3, 1), (5, 4), (7, 3)]);
    }

    #[test]
    fn classify_examples() {
        let c = ctx(3, 7);
        let r = classify(&c, 2, DEFAULT_SEED).unwrap();
        assert_eq!((r.t, r.s, r.ind_class, r.is_residue), (2, 1, Some(2), false));
        // 13 ≡ 6 = 3³ mod 7; 6 itself shares the factor 3 with l
        let r = classify(&c, 13, DEFAULT_SEED).unwrap();
        assert_eq!((r.t, r.is_residue), (0, true));
        assert!(classify(&c, 6, DEFAULT_SEED).is_err());
        let r = classify(&c, 1, DEFAULT_SEED).unwrap();
        assert_eq!((r.t, r.ind_class), (0, Some(0)));
        assert!(classify(&c, 7, DEFAULT_SEED).is_err());
        assert!(classify(&c, 3, DEFAULT_SEED).is_err());
        assert!(classify(&c, 0, DEFAULT_SEED).is_err());
    }

    #[test]
    fn classification_invariants() {
        for (l, p) in [(5, 31), (7, 197), (11, 331), (13, 131), (17, 307), (19, 229)] {
            let c = ctx(l, p);
            let cl = Classifier::new(&c, DEFAULT_SEED).unwrap();
            for d in 2..60i64 {
                if (d as u64).is_multiple_of(l) || (d as u64).is_multiple_of(p) {
                    continue;
                }
                let r = cl.classify(d).unwrap();
                let class = r.ind_class.unwrap();
                assert_eq!(r.t, class * r.s % l);
                assert_eq!(r.is_residue, class == 0);
                assert_eq!(class, ind_class_oracle(&c, d).unwrap(), "l={l} p={p} D={d}");
            }
        }
    }

    #[test]
    fn multiplicative_in_d() {
        let c = ctx(7, 113);
        let cl = Classifier::new(&c, DEFAULT_SEED).unwrap();
        for d1 in [2i64, 3, 5, 9, 11] {
            for d2 in [2i64, 13, 17, 25] {
                let t12 = cl.classify(d1 * d2).unwrap().t;
                let t = (cl.classify(d1).unwrap().t + cl.classify(d2).unwrap().t) % 7;
                assert_eq!(t12, t);
            }
        }
    }

    #[test]
    fn criterion_for_l_examples() {
        let r = criterion_for_l(&ctx(3, 7)).unwrap();
        assert!(!r.is_residue);
        assert!(r.index_one);
        assert_eq!(r.oracle_class, 1);
        assert!(r.agrees);
        assert!(criterion_for_l(&ctx(5, 31)).unwrap().agrees);
    }

    #[test]
    fn criterion_for_2_examples() {
        let r = criterion_for_2(&ctx(3, 7)).unwrap();
        assert!(!r.is_residue && !r.index_one && r.agrees);
        assert_eq!(r.oracle_class, 2);
        let r = criterion_for_2(&ctx(3, 31)).unwrap();
        assert!(r.is_residue && r.agrees);
        let r = criterion_for_2(&ctx(5, 31)).unwrap();
        assert!(!r.is_residue && r.agrees);
    }
}
