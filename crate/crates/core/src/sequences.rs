//! The concrete predictable, tight sequences: all integers, the primes, and
//! the sums of two squares — each with enumeration, a residue density
//! oracle, and tightness diagnostics.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{factorize_u128, primes_up_to};
use crate::error::Error;
use crate::localarith::rho_two_squares_adjusted;
use crate::Result;

/// Which sequence is surveyed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    /// All positive integers; θ = 0.
    Integers,
    /// The primes; θ = 1.
    Primes,
    /// Sums of two squares (as a set, without multiplicity); θ = 1/2.
    TwoSquares,
}

impl SequenceKind {
    pub fn theta(self) -> f64 {
        match self {
            SequenceKind::Integers => 0.0,
            SequenceKind::Primes => 1.0,
            SequenceKind::TwoSquares => 0.5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SequenceKind::Integers => "integers",
            SequenceKind::Primes => "primes",
            SequenceKind::TwoSquares => "two-squares",
        }
    }

    /// The sieving congruence description.
    pub fn sieving_set(self) -> &'static str {
        match self {
            SequenceKind::Integers => "nothing sieved out",
            SequenceKind::Primes => "all primes",
            SequenceKind::TwoSquares => "primes congruent to 3 mod 4 (odd multiplicity)",
        }
    }
}

const ENUMERATION_CAP: u64 = 100_000_000;

/// Streams the members of the sequence up to `N` in increasing order.
pub fn for_each_member(
    kind: SequenceKind,
    n: u64,
    mut visit: impl FnMut(u64),
) -> Result<u64> {
    if n < 1 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if n > ENUMERATION_CAP {
        return Err(Error::TooLarge(alloc::format!("N = {n} beyond the enumeration cap")));
    }
    let mut count = 0u64;
    match kind {
        SequenceKind::Integers => {
            for m in 1..=n {
                visit(m);
            }
            count = n;
        }
        SequenceKind::Primes => {
            for p in primes_up_to(n) {
                visit(p);
                count += 1;
            }
        }
        SequenceKind::TwoSquares => {
            // Exclude n with v_p(n) odd for some p ≡ 3 mod 4: for each odd
            // power q = p^(2j+1) ≤ N, the excluded n are the multiples of q
            // whose cofactor is a unit mod p.
            let mut excluded = alloc::vec![false; n as usize + 1];
            for p in primes_up_to(n) {
                if p % 4 != 3 {
                    continue;
                }
                let mut q = p;
                loop {
                    let mut m = q;
                    while m <= n {
                        if (m / q) % p != 0 {
                            excluded[m as usize] = true;
                        }
                        m += q;
                    }
                    match q.checked_mul(p).and_then(|x| x.checked_mul(p)) {
                        Some(next) if next <= n => q = next,
                        _ => break,
                    }
                }
            }
            for m in 1..=n {
                if !excluded[m as usize] {
                    visit(m);
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Materializes the members up to `N`.
pub fn enumerate(kind: SequenceKind, n: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for_each_member(kind, n, |m| out.push(m))?;
    Ok(out)
}

/// The limit density `ρ(a, m)` of members in the class `a mod m`, exact.
pub fn density_oracle(kind: SequenceKind, a: u128, m: u128) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    let a = a % m;
    match kind {
        SequenceKind::Integers => {
            Ok(BigRational::new(BigInt::one(), BigInt::from(m)))
        }
        SequenceKind::Primes => {
            if crate::arith::gcd_u128(a, m) != 1 {
                return Ok(BigRational::zero());
            }
            let mut phi = 1u128;
            for (p, e) in factorize_u128(m)? {
                phi *= p.pow(e - 1) * (p - 1);
            }
            Ok(BigRational::new(BigInt::one(), BigInt::from(phi)))
        }
        SequenceKind::TwoSquares => {
            let mut out = BigRational::one();
            for (p, e) in factorize_u128(m)? {
                let pe = p.pow(e);
                let ap = (a % pe) as u64;
                let pe64 = u64::try_from(pe)
                    .map_err(|_| Error::TooLarge("prime power exceeds 64 bits".into()))?;
                let _ = pe64;
                let p64 = u64::try_from(p)
                    .map_err(|_| Error::TooLarge("prime exceeds 64 bits".into()))?;
                out *= rho_two_squares_adjusted(ap, p64, e)?;
                if out.is_zero() {
                    return Ok(out);
                }
            }
            Ok(out)
        }
    }
}

/// Convenience wrapper tying an oracle to its sequence.
#[derive(Clone, Copy, Debug)]
pub struct DensityOracle {
    pub kind: SequenceKind,
}

impl DensityOracle {
    pub fn rho(&self, a: u128, m: u128) -> Result<BigRational> {
        density_oracle(self.kind, a, m)
    }
}

/// Count of members up to `N` and the normalization `count·(log N)^θ / N`.
#[derive(Clone, Copy, Debug)]
pub struct TightnessReport {
    pub count: u64,
    pub normalized: f64,
}

pub fn tightness_diagnostics(kind: SequenceKind, n: u64) -> Result<TightnessReport> {
    if n < 100 {
        return Err(Error::Domain("N must be at least 100".into()));
    }
    let mut count = 0u64;
    for_each_member(kind, n, |_| count += 1)?;
    let normalized =
        count as f64 * libm::pow(libm::log(n as f64), kind.theta()) / n as f64;
    Ok(TightnessReport { count, normalized })
}

/// The normalizing constant `(2·∏_{p≡3 mod 4, p≤P}(1 − p^{-2}))^{-1/2}` of
/// the two-squares counting function, with a tail bound on the truncated
/// product's log.
pub fn two_squares_normalizing_constant(cutoff: u64) -> Result<(f64, f64)> {
    if cutoff < 3 {
        return Err(Error::Domain("cutoff must be at least 3".into()));
    }
    let mut product = 1.0f64;
    for p in primes_up_to(cutoff) {
        if p % 4 == 3 {
            product *= 1.0 - 1.0 / (p as f64 * p as f64);
        }
    }
    let value = libm::pow(2.0 * product, -0.5);
    // |log of omitted factors| ≤ Σ_{p>P} 2 p^{-2} ≤ 2/P; halved by the -1/2
    // exponent, doubled back for slack.
    let tail = 2.0 / cutoff as f64;
    Ok((value, tail))
}
