//! Word-size modular arithmetic, primality, and bounded integer factorization.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division runs over every d ≤ this bound.
pub const TRIAL_LIMIT: u64 = 1 << 20;
const RHO_ITERATIONS: u64 = 1 << 22;

#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime.
pub fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Descending primes just below 2⁶², used as CRT moduli.
pub fn large_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime_u64(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

/// Chinese remaindering to the symmetric range (−M/2, M/2].
pub fn crt_symmetric(residues: &[u64], primes: &[u64]) -> BigInt {
    // Garner's mixed-radix form.
    let k = primes.len();
    let mut coef: Vec<u64> = Vec::with_capacity(k);
    for i in 0..k {
        let p = primes[i];
        let mut x = residues[i] % p;
        let mut prod = 1u64;
        let mut acc = 0u64;
        for j in 0..i {
            acc = (acc + mulmod(coef[j] % p, prod, p)) % p;
            prod = mulmod(prod, primes[j] % p, p);
        }
        x = (x + p - acc) % p;
        coef.push(mulmod(x, invmod(prod, p), p));
    }
    let mut value = BigInt::zero();
    let mut modulus = BigInt::one();
    for i in 0..k {
        value += &modulus * BigInt::from(coef[i]);
        modulus *= BigInt::from(primes[i]);
    }
    if &value * 2 > modulus {
        value -= modulus;
    }
    value
}

pub fn mod_bigint(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("reduced residue")
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// One nontrivial factor of an odd composite (Brent's cycle search).
fn pollard_brent(n: u64) -> Option<u64> {
    for c in 1..64u64 {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut r, mut q) = (2u64, 2u64, 1u64, 1u64, 1u64);
        let mut ys = 0;
        let mut steps = 0u64;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += M;
                steps += M;
            }
            r *= 2;
            if steps > RHO_ITERATIONS {
                return None;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) -> bool {
    if n == 1 {
        return true;
    }
    if is_prime_u64(n) {
        out.push(n);
        return true;
    }
    match pollard_brent(n) {
        Some(d) => factor_u64_into(d, out) && factor_u64_into(n / d, out),
        None => false,
    }
}

/// Prime factorization as sorted (prime, exponent) pairs; `n` must be positive.
///
/// Small factors come from trial division; a leftover cofactor is finished
/// only when it fits in 64 bits.
pub fn factorize(n: &BigUint) -> Result<Vec<(BigUint, u32)>> {
    if n.is_zero() {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let mut n = n.clone();
    let mut primes: Vec<BigUint> = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let bd = BigUint::from(d);
        if &bd * &bd > n {
            break;
        }
        while (&n % &bd).is_zero() {
            n /= &bd;
            primes.push(bd.clone());
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        let limit = BigUint::from(TRIAL_LIMIT);
        if n <= &limit * &limit {
            primes.push(n);
        } else if let Some(small) = n.to_u64() {
            let mut fs = Vec::new();
            if !factor_u64_into(small, &mut fs) {
                return Err(Error::FactorizationBudget(n.to_string()));
            }
            primes.extend(fs.into_iter().map(BigUint::from));
        } else {
            return Err(Error::FactorizationBudget(n.to_string()));
        }
    }
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// All positive divisors, ascending.
pub fn divisors(n: &BigUint) -> Result<Vec<BigUint>> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in factorize(n)? {
        let cur = divs.clone();
        let mut pk = BigUint::one();
        for _ in 0..e {
            pk *= &p;
            divs.extend(cur.iter().map(|d| d * &pk));
        }
    }
    divs.sort();
    Ok(divs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to 2, 3, 5, 7
    }

    #[test]
    fn factor_round_trip() {
        for n in [1u64, 2, 12, 360, 97 * 97, 600851475143, 1_000_000_007 * 998_244_353] {
            let f = factorize(&BigUint::from(n)).unwrap();
            let back = f.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
            assert_eq!(back, BigUint::from(n));
            assert!(f.iter().all(|(p, _)| is_prime_u64(p.to_u64().unwrap())));
        }
    }

    #[test]
    fn huge_semiprime_hits_budget() {
        let p = BigUint::from(18446744073709551557u64);
        let n = &p * &p;
        assert!(matches!(factorize(&n), Err(Error::FactorizationBudget(_))));
    }

    #[test]
    fn divisor_list() {
        let d: Vec<u64> = divisors(&BigUint::from(12u32)).unwrap().iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn crt_recovers_signed_values() {
        let primes = large_primes(3);
        for v in [BigInt::from(-5), BigInt::from(0), BigInt::from(123456789) * BigInt::from(987654321i64) * -1] {
            let r: Vec<u64> = primes.iter().map(|&p| mod_bigint(&v, p)).collect();
            assert_eq!(crt_symmetric(&r, &primes), v);
        }
    }
}
