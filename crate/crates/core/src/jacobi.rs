//! Jacobi sums of order l over F_p.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cyclotomic::{prime_generator, CycInt, Jet};
use crate::error::{Error, Result};
use crate::modp::{inv_mod, is_prime, mul_mod, pow_mod, residue, PrimeContext};

/// J(i, j) = Σ χ^i(v)·χ^j(v+1) over v ∈ F_p*, v ≠ -1.
///
/// Counts how often each exponent i·ind(v) + j·ind(v+1) mod l occurs and
/// assembles the element once at the end.
pub fn jacobi_sum(ctx: &PrimeContext, i: i64, j: i64) -> CycInt {
    let l = ctx.l();
    let p = ctx.p();
    let i = residue(i, l);
    let j = residue(j, l);
    let mut counts = vec![0i64; l as usize];
    let mut prev = ctx.index_unchecked(1);
    for v in 1..p - 1 {
        let next = ctx.index_unchecked(v + 1);
        counts[((i * prev + j * next) % l) as usize] += 1;
        prev = next;
    }
    CycInt::from_exponent_counts(l, &counts)
}

/// (a_1(n), …, a_(l-1)(n)): the coefficients of J(1, n) on ζ, …, ζ^(l-1).
pub fn a_coeffs(ctx: &PrimeContext, n: u64) -> Result<Vec<i64>> {
    let l = ctx.l();
    if n < 1 || n > l - 2 {
        return Err(Error::invalid(format!("n = {n} outside 1..={}", l - 2)));
    }
    Ok(jacobi_sum(ctx, 1, n as i64)
        .coeffs()
        .iter()
        .map(|c| c.to_i64().expect("Jacobi sum coefficients are bounded by p"))
        .collect())
}

/// J(1, 1), after checking J ≡ -1 mod (1-ζ)² and J·J̄ = p.
pub fn normalized_jacobi(ctx: &PrimeContext) -> Result<CycInt> {
    let l = ctx.l();
    let j = jacobi_sum(ctx, 1, 1);
    let jet = j.one_jet();
    if jet != (Jet { b: l - 1, c: 0 }) {
        return Err(Error::internal(format!(
            "J(1,1) = {j} has jet ({}, {}), expected ({}, 0)",
            jet.b,
            jet.c,
            l - 1
        )));
    }
    if (&j * &j.conj()).as_rational() != Some(BigInt::from(ctx.p())) {
        return Err(Error::internal(format!(
            "J(1,1)·conj(J(1,1)) != {} for J = {j}",
            ctx.p()
        )));
    }
    Ok(j)
}

/// Outcome of comparing J(1,1) against the product of conjugates of the
/// normalized prime generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorProductReport {
    pub generator: CycInt,
    pub sign: i64,
    pub product: CycInt,
    pub jacobi: CycInt,
    pub holds: bool,
}

/// Checks J(1,1) = (-1)^((l+1)/2)·Π_{i=1}^{(l-1)/2} σ_(i⁻¹)(K).
pub fn verify_generator_product(ctx: &PrimeContext) -> Result<GeneratorProductReport> {
    let l = ctx.l();
    let k = prime_generator(ctx)?;
    let sign: i64 = if l.div_ceil(2).is_multiple_of(2) { 1 } else { -1 };
    let mut product = CycInt::from_int(l, sign);
    for i in 1..=(l - 1) / 2 {
        let inv = inv_mod(i as i64, l).unwrap();
        product = &product * &k.galois(inv as i64)?;
    }
    let jacobi = normalized_jacobi(ctx)?;
    let holds = product == jacobi;
    Ok(GeneratorProductReport {
        generator: k,
        sign,
        product,
        jacobi,
        holds,
    })
}

/// A solution of 4p = L² + 27M² with L ≡ 1 mod 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubicPartition {
    pub l: i64,
    pub m: i64,
}

/// The cubic partition of p read off J(1,1) for the least primitive root.
pub fn cubic_partition(p: u64) -> Result<CubicPartition> {
    if !is_prime(p) || p % 3 != 1 {
        return Err(Error::invalid(format!("p = {p} must be a prime ≡ 1 mod 3")));
    }
    cubic_partition_for(&PrimeContext::new(3, p)?)
}

/// The cubic partition from J(1,1) = ½(L+3M) + 3Mω, ω = ζ_3.
pub fn cubic_partition_for(ctx: &PrimeContext) -> Result<CubicPartition> {
    if ctx.l() != 3 {
        return Err(Error::invalid("cubic partition needs l = 3"));
    }
    let j = jacobi_sum(ctx, 1, 1);
    let a = j.coeffs()[0].to_i64().unwrap();
    let b = j.coeffs()[1].to_i64().unwrap();
    // aζ + bζ² = -b + (a - b)ζ
    let x = -b;
    let y = a - b;
    if y % 3 != 0 {
        return Err(Error::internal(format!("ζ-coefficient {y} of J(1,1) not divisible by 3")));
    }
    let m = y / 3;
    let l = 2 * x - 3 * m;
    let p = ctx.p() as i64;
    if 4 * p != l * l + 27 * m * m || l.rem_euclid(3) != 1 {
        return Err(Error::internal(format!(
            "(L, M) = ({l}, {m}) does not solve 4·{p} = L² + 27M², L ≡ 1 mod 3"
        )));
    }
    Ok(CubicPartition { l, m })
}

/// Which value D^((p-1)/3) takes among 1 and (L ± 9M)/(L ∓ 9M).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicBranch {
    Residue,
    Plus,
    Minus,
    NoMatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerCubicReport {
    pub d: i64,
    pub power: u64,
    /// (L + 9M)/(L - 9M) mod p
    pub plus: u64,
    /// (L - 9M)/(L + 9M) mod p
    pub minus: u64,
    pub branch: CubicBranch,
}

pub fn euler_cubic_table(ctx: &PrimeContext, d: i64) -> Result<EulerCubicReport> {
    let p = ctx.p();
    if residue(d, p) == 0 {
        return Err(Error::invalid(format!("D = {d} is divisible by p = {p}")));
    }
    let part = cubic_partition_for(ctx)?;
    let num = residue(part.l + 9 * part.m, p);
    let den = residue(part.l - 9 * part.m, p);
    let (inv_num, inv_den) = match (inv_mod(num as i64, p), inv_mod(den as i64, p)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::internal("L ± 9M vanished mod p")),
    };
    let plus = mul_mod(num, inv_den, p);
    let minus = mul_mod(den, inv_num, p);
    let power = pow_mod(residue(d, p), (p - 1) / 3, p);
    let branch = if power == 1 {
        CubicBranch::Residue
    } else if power == plus {
        CubicBranch::Plus
    } else if power == minus {
        CubicBranch::Minus
    } else {
        CubicBranch::NoMatch
    };
    Ok(EulerCubicReport {
        d,
        power,
        plus,
        minus,
        branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modp::primitive_roots;

    fn ctx(l: u64, p: u64) -> PrimeContext {
        PrimeContext::new(l, p).unwrap()
    }

    // Term-by-term summation, no counting shortcut.
    fn jacobi_direct(ctx: &PrimeContext, i: i64, j: i64) -> CycInt {
        let l = ctx.l();
        let mut acc = CycInt::zero(l);
        for v in 1..ctx.p() as i64 - 1 {
            let e = i * ctx.chi_exponent(v).unwrap() as i64 + j * ctx.chi_exponent(v + 1).unwrap() as i64;
            acc = &acc + &CycInt::zeta_pow(l, e);
        }
        acc
    }

    #[test]
    fn jacobi_examples() {
        let c = ctx(3, 7);
        assert_eq!(jacobi_sum(&c, 1, 1), CycInt::from_i64s(3, &[-2, 1]).unwrap());
        for (l, p) in [(3, 7), (5, 11), (7, 29), (13, 53)] {
            let c = ctx(l, p);
            assert_eq!(jacobi_sum(&c, 0, 0), CycInt::from_int(l, p as i64 - 2));
            assert_eq!(jacobi_sum(&c, 1, 0), CycInt::from_int(l, -1));
        }
    }

    #[test]
    fn counting_matches_direct_summation() {
        for (l, p) in [(3, 13), (5, 41), (7, 71), (11, 89)] {
            let c = ctx(l, p);
            for i in 0..l as i64 {
                for j in 0..l as i64 {
                    assert_eq!(jacobi_sum(&c, i, j), jacobi_direct(&c, i, j));
                }
            }
        }
    }

    #[test]
    fn a_coeffs_examples() {
        assert_eq!(a_coeffs(&ctx(3, 7), 1).unwrap(), vec![-2, 1]);
        assert!(a_coeffs(&ctx(3, 7), 0).is_err());
        assert!(a_coeffs(&ctx(5, 11), 4).is_err());
        for (l, p) in [(5, 31), (7, 43), (11, 199)] {
            let c = ctx(l, p);
            for n in 1..=l - 2 {
                let s: i64 = a_coeffs(&c, n).unwrap().iter().sum();
                assert_eq!(s.rem_euclid(l as i64), l as i64 - 1);
            }
        }
    }

    #[test]
    fn norm_of_jacobi_sums() {
        for (l, p) in [(5, 61), (7, 113), (11, 331), (13, 79)] {
            let c = ctx(l, p);
            for n in 1..=l as i64 - 2 {
                let j = jacobi_sum(&c, 1, n);
                assert_eq!((&j * &j.conj()).as_rational(), Some(BigInt::from(p)));
            }
        }
    }

    #[test]
    fn normalized_jacobi_small() {
        assert_eq!(
            normalized_jacobi(&ctx(3, 7)).unwrap(),
            CycInt::from_i64s(3, &[-2, 1]).unwrap()
        );
        for l in [3u64, 5, 7, 11, 13, 17, 19] {
            for p in (l + 1..1000).step_by(l as usize).filter(|&p| is_prime(p)) {
                normalized_jacobi(&ctx(l, p)).unwrap();
            }
        }
    }

    #[test]
    fn generator_product_examples() {
        let r = verify_generator_product(&ctx(3, 7)).unwrap();
        assert!(r.holds);
        assert_eq!(r.sign, 1);
        assert_eq!(r.generator, CycInt::from_i64s(3, &[-2, 1]).unwrap());
        assert!(verify_generator_product(&ctx(5, 11)).unwrap().holds);
        assert!(matches!(verify_generator_product(&ctx(13, 53)), Err(Error::Unsupported(_))));
    }

    fn partition_search(p: i64) -> Vec<(i64, i64)> {
        let mut out = vec![];
        for m in 0..=((4 * p / 27) as f64).sqrt() as i64 + 1 {
            let rest = 4 * p - 27 * m * m;
            if rest < 0 {
                break;
            }
            let r = (rest as f64).sqrt() as i64;
            for l in [-r - 1, -r, r, r + 1] {
                if l * l == rest && l.rem_euclid(3) == 1 {
                    out.push((l, m));
                }
            }
        }
        out
    }

    #[test]
    fn cubic_partition_examples() {
        assert_eq!(cubic_partition(7).unwrap(), CubicPartition { l: 1, m: -1 });
        let p13 = cubic_partition(13).unwrap();
        assert_eq!((p13.l, p13.m.abs()), (-5, 1));
        let p31 = cubic_partition(31).unwrap();
        assert_eq!((p31.l, p31.m.abs()), (4, 2));
        assert!(cubic_partition(11).is_err());
        assert_eq!(partition_search(13), vec![(-5, 1)]);
    }

    #[test]
    fn cubic_partition_is_generator_independent_up_to_sign() {
        for p in (7..600u64).step_by(6).filter(|&p| is_prime(p)) {
            let base = cubic_partition(p).unwrap();
            let second = primitive_roots(p).nth(1).unwrap();
            let alt = cubic_partition_for(&PrimeContext::with_generator(3, p, second).unwrap()).unwrap();
            assert_eq!((base.l, base.m.abs()), (alt.l, alt.m.abs()), "p = {p}");
        }
    }

    #[test]
    fn euler_cubic_examples() {
        let c = ctx(3, 7);
        assert_eq!(euler_cubic_table(&c, 6).unwrap().branch, CubicBranch::Residue);
        assert_eq!(euler_cubic_table(&c, 1).unwrap().branch, CubicBranch::Residue);
        let r = euler_cubic_table(&c, 2).unwrap();
        assert_eq!(r.power, 4);
        assert!(matches!(r.branch, CubicBranch::Plus | CubicBranch::Minus));
        assert!(euler_cubic_table(&c, 14).is_err());
    }
}
