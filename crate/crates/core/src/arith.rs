//! Shared integer arithmetic: sieves, primality, and factorization.

use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// Primes up to `limit` (inclusive) by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = alloc::vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        out.push(p as u64);
        let mut m = p * p;
        while m <= n {
            composite[m] = true;
            m += p;
        }
    }
    out
}

#[inline]
pub fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `a*b mod m` for u128 via binary (peasant) multiplication.
fn mulmod_u128(mut a: u128, mut b: u128, m: u128) -> u128 {
    if let (Ok(a64), Ok(b64), Ok(m64)) =
        (u64::try_from(a), u64::try_from(b), u64::try_from(m))
    {
        return mulmod_u64(a64, b64, m64) as u128;
    }
    a %= m;
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = acc.wrapping_add(a) % m;
        }
        a = a.wrapping_add(a) % m;
        b >>= 1;
    }
    acc
}

fn powmod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u128(acc, base, m);
        }
        base = mulmod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin: the first 13 prime bases certify primality for
/// all n below 3.3e24, which covers u64 and the u128 range used here.
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for &p in &BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'bases: for &a in &BASES {
        let mut x = powmod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u128(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime_u128(n as u128)
}

/// Pollard's rho with Brent's cycle detection. Returns a nontrivial factor of
/// a composite `n`.
fn pollard_brent(n: u128, seed: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let c = 1 + seed % (n - 3);
    let f = |x: u128| (mulmod_u128(x, x, n) + c) % n;
    let mut y = 2 + seed % (n - 2);
    let (mut g, mut r, mut q) = (1u128, 1u64, 1u128);
    let (mut x, mut ys) = (y, y);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            let block = 128.min(r - k);
            for _ in 0..block {
                y = f(y);
                let diff = if x > y { x - y } else { y - x };
                q = mulmod_u128(q, diff, n);
            }
            g = gcd_u128(q, n);
            k += block;
        }
        r *= 2;
    }
    if g == n {
        // Backtrack one step at a time from the last checkpoint.
        loop {
            ys = f(ys);
            let diff = if x > ys { x - ys } else { ys - x };
            g = gcd_u128(diff, n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        0 // failure: caller retries with a different seed
    } else {
        g
    }
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Full factorization of `n` as sorted `(prime, exponent)` pairs. Uses trial
/// division for small factors and Pollard rho beyond that.
pub fn factorize_u128(n: u128) -> Result<Vec<(u128, u32)>> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let input = n;
    let mut n = n;
    let mut out: Vec<(u128, u32)> = Vec::new();
    let push = |out: &mut Vec<(u128, u32)>, p: u128| {
        if let Some(last) = out.last_mut() {
            if last.0 == p {
                last.1 += 1;
                return;
            }
        }
        out.push((p, 1));
    };
    for p in [2u128, 3, 5, 7] {
        while n % p == 0 {
            push(&mut out, p);
            n /= p;
        }
    }
    let mut d = 11u128;
    let wheel = [2u128, 4, 2, 4, 6, 2, 6, 4];
    let mut wi = 0usize;
    while d <= 10_000 && d * d <= n {
        while n % d == 0 {
            push(&mut out, d);
            n /= d;
        }
        d += wheel[wi];
        wi = (wi + 1) % wheel.len();
    }
    let mut stack = alloc::vec![n];
    let mut found: Vec<u128> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u128(m) {
            found.push(m);
            continue;
        }
        let mut factor = 0;
        let mut seed = 2u128;
        while factor == 0 || factor == m {
            factor = pollard_brent(m, seed);
            seed += 1;
            if seed > 200 {
                return Err(Error::InternalInconsistency("factorization stalled".into()));
            }
        }
        stack.push(factor);
        stack.push(m / factor);
    }
    found.sort_unstable();
    for p in found {
        push(&mut out, p);
    }
    out.sort_by_key(|&(p, _)| p);
    // Merge any duplicate primes produced by separate passes.
    let mut merged: Vec<(u128, u32)> = Vec::new();
    for (p, e) in out {
        if let Some(last) = merged.last_mut() {
            if last.0 == p {
                last.1 += e;
                continue;
            }
        }
        merged.push((p, e));
    }
    let product = merged.iter().fold(1u128, |acc, &(p, e)| acc * p.pow(e));
    if product != input {
        return Err(Error::InternalInconsistency("factor product mismatch".into()));
    }
    Ok(merged)
}

/// p-adic valuation of `n`.
pub fn valuation(mut n: u128, p: u128) -> u32 {
    debug_assert!(p >= 2 && n != 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Modular inverse of `a` mod `m` for coprime inputs.
pub fn invmod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        let tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        let tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}
