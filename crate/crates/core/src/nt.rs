//! Machine-word number theory: modular arithmetic, primality, factoring of
//! the group order, Chinese remaindering and a few combinatorial helpers.

use crate::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
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

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Checked `base^exp`, `None` on overflow.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

// Deterministic for every n < 2^64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin with a witness set that is deterministic below 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES {
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

/// Factorization of the multiplicative group order `q^h - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupOrderFactorization {
    pub order: u64,
    /// `(prime, exponent)` pairs, ascending by prime.
    pub factors: Vec<(u64, u32)>,
}

impl GroupOrderFactorization {
    pub fn from_factors(order: u64, mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.sort_unstable();
        let mut prod = 1u64;
        for &(p, k) in &factors {
            if !is_prime(p) {
                return Err(Error::Factorization(format!("{p} is not prime")));
            }
            prod = checked_pow(p, k)
                .and_then(|pk| prod.checked_mul(pk))
                .ok_or_else(|| Error::Factorization("factor product overflows".into()))?;
        }
        if prod != order {
            return Err(Error::Factorization(format!(
                "factors multiply to {prod}, expected {order}"
            )));
        }
        Ok(Self { order, factors })
    }

    /// Prime powers `ℓ^k` dividing the order exactly.
    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u32, u64)> + '_ {
        self.factors
            .iter()
            .map(|&(p, k)| (p, k, checked_pow(p, k).expect("divides the order")))
    }
}

impl std::fmt::Display for GroupOrderFactorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} = ", self.order)?;
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, k)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if k == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{k}")?;
            }
        }
        Ok(())
    }
}

/// Trial division bound used before switching to Pollard rho.
pub const TRIAL_DIVISION_BOUND: u64 = 1 << 12;

/// Default iteration cap for a single Pollard rho attempt.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 24;

/// Factors `q^h - 1` with the default rho budget.
pub fn factor_group_order(q: u64, h: u32) -> Result<GroupOrderFactorization> {
    factor_group_order_with_budget(q, h, DEFAULT_RHO_BUDGET)
}

pub fn factor_group_order_with_budget(
    q: u64,
    h: u32,
    rho_budget: u64,
) -> Result<GroupOrderFactorization> {
    let order = checked_pow(q, h)
        .and_then(|v| v.checked_sub(1))
        .filter(|&v| v < (1 << 62))
        .ok_or_else(|| Error::Factorization(format!("{q}^{h} - 1 exceeds 62 bits")))?;
    let factors = factor(order, rho_budget)?;
    GroupOrderFactorization::from_factors(order, factors)
}

/// Full factorization of `n` as sorted `(prime, exponent)` pairs.
pub fn factor(mut n: u64, rho_budget: u64) -> Result<Vec<(u64, u32)>> {
    let mut primes = Vec::new();
    if n == 0 {
        return Err(Error::Factorization("cannot factor 0".into()));
    }
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_BOUND && d * d <= n {
        while n.is_multiple_of(d) {
            primes.push(d);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let f = pollard_brent(m, rho_budget).ok_or_else(|| {
            Error::Factorization(format!("cofactor {m} resisted {rho_budget} rho iterations"))
        })?;
        stack.push(f);
        stack.push(m / f);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor of the
/// composite `n` or `None` once the iteration budget is spent.
fn pollard_brent(n: u64, budget: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let mut spent = 0u64;
    for c in 1..u64::MAX {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let (mut x, mut ys) = (y, y);
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
            spent += r;
            if spent > budget {
                return None;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
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

/// Chinese remaindering of `(value, modulus)` pairs with pairwise coprime
/// moduli. Returns the representative in `[0, Π moduli)`.
pub fn crt_combine(residues: &[(u64, u64)]) -> Result<u64> {
    let mut acc = 0u64;
    let mut modulus = 1u64;
    for &(v, m) in residues {
        if m == 0 {
            return Err(Error::Crt("zero modulus".into()));
        }
        if gcd(modulus, m) != 1 {
            return Err(Error::Crt(format!(
                "modulus {m} shares a factor with {modulus}"
            )));
        }
        let new_mod = modulus
            .checked_mul(m)
            .ok_or_else(|| Error::Crt("combined modulus overflows".into()))?;
        // acc + modulus * t ≡ v (mod m)
        let inv = inv_mod(modulus % m, m).expect("coprime");
        let t = mul_mod(sub_mod(v % m, acc % m, m), inv, m);
        acc = add_mod(acc, mul_mod(modulus, t, new_mod), new_mod);
        modulus = new_mod;
    }
    Ok(acc)
}

/// Möbius function.
pub fn mobius(mut n: u64) -> i64 {
    let mut sign = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n)
        .take_while(|d| d * d <= n)
        .filter(|d| n.is_multiple_of(*d))
        .collect();
    let mut big: Vec<u64> = out
        .iter()
        .rev()
        .map(|d| n / d)
        .filter(|&d| d * d != n)
        .collect();
    out.append(&mut big);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_order_of_13_cubed() {
        let f = factor_group_order(13, 3).unwrap();
        assert_eq!(f.order, 2196);
        assert_eq!(f.factors, vec![(2, 2), (3, 2), (61, 1)]);
        assert_eq!(f.to_string(), "2196 = 2^2 * 3^2 * 61");
    }

    #[test]
    fn group_order_trivial_and_small() {
        let f = factor_group_order(2, 1).unwrap();
        assert_eq!(f.order, 1);
        assert!(f.factors.is_empty());
        let f = factor_group_order(7, 5).unwrap();
        assert_eq!(f.factors, vec![(2, 1), (3, 1), (2801, 1)]);
    }

    #[test]
    fn rho_splits_semiprimes() {
        let p = 1_000_003u64;
        let q = 999_999_937u64;
        assert_eq!(
            factor(p * q, DEFAULT_RHO_BUDGET).unwrap(),
            vec![(p, 1), (q, 1)]
        );
        // 65537^3 - 1
        let f = factor_group_order(65537, 3).unwrap();
        let prod: u64 = f.prime_powers().map(|(_, _, pk)| pk).product();
        assert_eq!(prod, f.order);
    }

    #[test]
    fn rho_budget_exhaustion_is_reported() {
        let n = 1_000_003u64 * 999_999_937;
        assert!(matches!(factor(n, 1), Err(Error::Factorization(_))));
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(18_446_744_073_709_551_557));
        // strong pseudoprime to bases 2..=37 would need > 2^64; spot-check Carmichaels
        assert!(!is_prime(561));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_combine(&[(1, 4), (3, 9), (51, 61)]).unwrap(), 417);
        assert_eq!(crt_combine(&[(5, 7)]).unwrap(), 5);
        assert!(crt_combine(&[(1, 4), (3, 6)]).is_err());
        for x in [0u64, 1, 999, 2195] {
            let parts = [(x % 4, 4), (x % 9, 9), (x % 61, 61)];
            assert_eq!(crt_combine(&parts).unwrap(), x);
        }
    }

    #[test]
    fn mobius_and_divisors() {
        assert_eq!(
            (1..=10).map(mobius).collect::<Vec<_>>(),
            vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
        );
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(9), vec![1, 3, 9]);
    }
}
