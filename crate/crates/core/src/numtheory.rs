//! Exact integer arithmetic for the factoring pipeline.
//!
//! Everything here works on `u64` residues. Products go through `u128`, so
//! moduli up to `2^32` are safe; the simulator itself never goes beyond a few
//! thousand.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

/// `base^exp mod modulus` by square-and-multiply. `mod_pow(_, _, 1) == 0`.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "modulus must be positive");
    if modulus == 1 {
        return 0;
    }
    let mut result = 1;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, modulus);
        }
        b = mul_mod(b, b, modulus);
        exp >>= 1;
    }
    result
}

fn require_coprime(a: u64, modulus: u64) -> Result<()> {
    let g = gcd(a, modulus);
    if g != 1 {
        return Err(Error::NotCoprime { a, modulus, gcd: g });
    }
    Ok(())
}

/// Smallest `r > 0` with `a^r ≡ 1 (mod N)`.
pub fn multiplicative_order(a: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::InvalidArgument(format!("modulus {modulus} < 2")));
    }
    require_coprime(a, modulus)?;
    let a = a % modulus;
    let mut r = 1;
    let mut x = a;
    while x != 1 {
        x = mul_mod(x, a, modulus);
        r += 1;
    }
    Ok(r)
}

/// Length of the cycle through `x` under `x ↦ a·x mod N`.
pub fn orbit_length(x: u64, a: u64, modulus: u64) -> Result<u64> {
    if modulus < 1 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    require_coprime(a, modulus)?;
    let x = x % modulus;
    let mut len = 1;
    let mut y = mul_mod(x, a, modulus);
    while y != x {
        y = mul_mod(y, a, modulus);
        len += 1;
    }
    Ok(len)
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

pub fn euler_totient(n: u64) -> u64 {
    assert!(n >= 1, "totient of zero");
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Returns `(base, exp)` with `exp >= 2` when `n = base^exp` for a prime base.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, e)] if *e >= 2 => Some((*p, *e)),
        _ => None,
    }
}

/// A reduced fraction `num/den` with `den >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fraction {
    pub num: i64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den >= 1, "zero denominator");
        let g = gcd(num.unsigned_abs(), den).max(1);
        Fraction {
            num: num / g as i64,
            den: den / g,
        }
    }

    /// `num/den` reduced into `[0, 1)`.
    pub fn phase(num: i64, den: u64) -> Self {
        Fraction::new(num.rem_euclid(den as i64), den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Difference reduced mod 1 into `[0, 1)`.
    pub fn sub_mod1(self, other: Fraction) -> Fraction {
        let den = self.den / gcd(self.den, other.den) * other.den;
        let a = self.num * (den / self.den) as i64;
        let b = other.num * (den / other.den) as i64;
        Fraction::phase(a - b, den)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// The number to factor, optionally with its known prime factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Semiprime {
    pub n: u64,
    pub factors: Option<(u64, u64)>,
}

impl Semiprime {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("N = {n} < 2")));
        }
        Ok(Semiprime { n, factors: None })
    }

    pub fn with_factors(n: u64, p: u64, q: u64) -> Result<Self> {
        if p.checked_mul(q) != Some(n) || !is_prime(p) || !is_prime(q) {
            return Err(Error::BadFactorization { modulus: n, p, q });
        }
        Ok(Semiprime {
            n,
            factors: Some((p.min(q), p.max(q))),
        })
    }

    /// Factors `n` by trial division; fails unless `n` is a product of two primes.
    pub fn factored(n: u64) -> Result<Self> {
        match factorize(n).as_slice() {
            [(p, 1), (q, 1)] => Semiprime::with_factors(n, *p, *q),
            [(p, 2)] => Semiprime::with_factors(n, *p, *p),
            _ => Err(Error::BadFactorization {
                modulus: n,
                p: 0,
                q: 0,
            }),
        }
    }
}

/// Continued-fraction convergents of `c/t` with denominator `<= max_den`.
///
/// Denominators are strictly increasing: when two consecutive convergents
/// share a denominator (only `0/1, 1/1` for `c/t >= 1/2`) the later, closer
/// one is kept.
pub fn convergents(c: u64, t: u64, max_den: u64) -> Vec<Fraction> {
    assert!(t >= 1 && c < t, "need 0 <= c < t");
    let mut out: Vec<Fraction> = Vec::new();
    // h_{-1}/k_{-1} = 1/0, h_{-2}/k_{-2} = 0/1
    let (mut h_prev, mut h_prev2) = (1i128, 0i128);
    let (mut k_prev, mut k_prev2) = (0i128, 1i128);
    let (mut num, mut den) = (c as i128, t as i128);
    while den != 0 {
        let q = num / den;
        let h = q * h_prev + h_prev2;
        let k = q * k_prev + k_prev2;
        if k > max_den as i128 {
            break;
        }
        let frac = Fraction::new(h as i64, k as u64);
        match out.last_mut() {
            Some(last) if last.den == frac.den => *last = frac,
            _ => out.push(frac),
        }
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
        let rem = num - q * den;
        num = den;
        den = rem;
    }
    out
}

/// Candidate orders read off a measured `c/t`, in the order they are tried:
/// every convergent denominator `q <= N` together with its multiples `m·q <= N`.
pub fn order_candidates(c: u64, t: u64, modulus: u64) -> Vec<u64> {
    let mut cands: Vec<u64> = convergents(c, t, modulus)
        .into_iter()
        .flat_map(|f| {
            let q = f.den;
            (1..=modulus.div_ceil(q))
                .map(move |m| m * q)
                .filter(move |&v| v <= modulus)
        })
        .collect();
    cands.sort_unstable();
    cands.dedup();
    cands
}

/// Smallest candidate `v` from [`order_candidates`] with `a^v ≡ 1 (mod N)`.
pub fn recover_order(c: u64, t: u64, a: u64, modulus: u64) -> Option<u64> {
    order_candidates(c, t, modulus)
        .into_iter()
        .find(|&v| mod_pow(a, v, modulus) == 1)
}

/// Factors from an even order: `gcd(a^{r/2} ± 1, N)` when both are nontrivial.
pub fn factor_from_order(a: u64, r: u64, modulus: u64) -> Option<(u64, u64)> {
    if r == 0 || r % 2 == 1 {
        return None;
    }
    let half = mod_pow(a, r / 2, modulus);
    if half == modulus - 1 {
        return None;
    }
    let f1 = gcd((half + modulus - 1) % modulus, modulus);
    let f2 = gcd(half + 1, modulus);
    let nontrivial = |f: u64| f > 1 && f < modulus;
    if nontrivial(f1) && nontrivial(f2) {
        Some((f1.min(f2), f1.max(f2)))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(2, 4, 15), 1);
        assert_eq!(mod_pow(7, 2, 15), 4);
        assert_eq!(mod_pow(11, 0, 21), 1);
        assert_eq!(mod_pow(5, 3, 1), 0);
    }

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(2, 15), Ok(4));
        assert_eq!(multiplicative_order(4, 15), Ok(2));
        assert_eq!(multiplicative_order(2, 21), Ok(6));
        assert_eq!(
            multiplicative_order(3, 15),
            Err(Error::NotCoprime {
                a: 3,
                modulus: 15,
                gcd: 3
            })
        );
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit_length(5, 2, 15), Ok(2));
        assert_eq!(orbit_length(0, 2, 15), Ok(1));
        assert_eq!(orbit_length(7, 2, 15), Ok(4));
        assert!(orbit_length(1, 5, 15).is_err());
    }

    #[test]
    fn totient_examples() {
        assert_eq!(euler_totient(4), 2);
        assert_eq!(euler_totient(1), 1);
        assert_eq!(euler_totient(6), 2);
        assert_eq!(euler_totient(15), 8);
    }

    #[test]
    fn convergent_examples() {
        assert_eq!(
            convergents(64, 256, 15),
            vec![Fraction::new(0, 1), Fraction::new(1, 4)]
        );
        assert_eq!(convergents(0, 256, 15), vec![Fraction::new(0, 1)]);
        assert!(convergents(85, 256, 15).contains(&Fraction::new(1, 3)));
        // 3/4 = [0; 1, 3]: 0/1 and 1/1 share a denominator
        assert_eq!(
            convergents(192, 256, 15),
            vec![Fraction::new(1, 1), Fraction::new(3, 4)]
        );
    }

    #[test]
    fn recover_order_examples() {
        assert_eq!(recover_order(64, 256, 2, 15), Some(4));
        assert_eq!(recover_order(0, 256, 2, 15), Some(4));
        assert_eq!(recover_order(128, 256, 2, 15), Some(4));
    }

    #[test]
    fn factor_from_order_examples() {
        assert_eq!(factor_from_order(2, 4, 15), Some((3, 5)));
        assert_eq!(factor_from_order(14, 2, 15), None);
        assert_eq!(factor_from_order(4, 2, 15), Some((3, 5)));
        assert_eq!(factor_from_order(2, 3, 15), None);
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(15), None);
        assert_eq!(prime_power(7), None);
    }

    #[test]
    fn semiprime_validation() {
        assert!(Semiprime::with_factors(15, 3, 5).is_ok());
        assert!(Semiprime::with_factors(15, 1, 15).is_err());
        assert_eq!(Semiprime::factored(21).unwrap().factors, Some((3, 7)));
        assert!(Semiprime::factored(30).is_err());
    }

    #[test]
    fn coprime_orbits_have_full_length() {
        for n in [15u64, 21, 33, 35] {
            for a in 2..n {
                let Ok(r) = multiplicative_order(a, n) else {
                    continue;
                };
                for x in 0..n {
                    let rd = orbit_length(x, a, n).unwrap();
                    assert_eq!(r % rd, 0);
                    if gcd(x, n) == 1 {
                        assert_eq!(rd, r);
                    }
                }
            }
        }
    }

    /// The classical guarantee: any `c` within `1/(2t)` of `k/r` with
    /// `gcd(k, r) = 1` recovers exactly `r` when `t >= N²`.
    #[test]
    fn recover_order_window_exhaustive() {
        let (n, a, t) = (15u64, 2u64, 256u64);
        let r = multiplicative_order(a, n).unwrap();
        let mut hits = 0;
        for c in 0..t {
            for k in 0..r {
                if gcd(k, r) != 1 {
                    continue;
                }
                // |c/t - k/r| <= 1/(2t)  <=>  |2cr - 2kt| <= r
                let lhs = (2 * c * r) as i64 - (2 * k * t) as i64;
                if lhs.unsigned_abs() <= r {
                    assert_eq!(recover_order(c, t, a, n), Some(r), "c = {c}");
                    hits += 1;
                }
            }
        }
        assert!(hits > 0);
    }

    proptest! {
        #[test]
        fn convergents_increase_and_approximate(t_exp in 1u32..14, c_raw in any::<u64>(), max_den in 1u64..5000) {
            let t = 1u64 << t_exp;
            let c = c_raw % t;
            let convs = convergents(c, t, max_den);
            prop_assert!(!convs.is_empty());
            for w in convs.windows(2) {
                prop_assert!(w[0].den < w[1].den);
            }
            for f in &convs {
                prop_assert!(f.den <= max_den);
                // |c/t - p/q| < 1/q²  <=>  |c q - p t| q < t
                let err = (c as i128 * f.den as i128 - f.num as i128 * t as i128).abs();
                prop_assert!(err * (f.den as i128) < t as i128);
            }
        }

        #[test]
        fn totient_matches_count(n in 1u64..3000) {
            let count = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            prop_assert_eq!(euler_totient(n), count);
        }

        #[test]
        fn mod_pow_matches_repeated_multiplication(a in 0u64..1000, e in 0u64..200, n in 2u64..1000) {
            let mut acc = 1 % n;
            for _ in 0..e {
                acc = acc * a % n;
            }
            prop_assert_eq!(mod_pow(a, e, n), acc);
        }
    }
}
