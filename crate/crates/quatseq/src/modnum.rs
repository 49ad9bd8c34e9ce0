//! Elementary number theory over 64-bit integers: deterministic primality,
//! modular arithmetic, Legendre symbols, the generalized CRT, multiplicative
//! orders and common primitive roots.
//!
//! The module also owns [`SequenceParams`], the validated parameter record
//! `(p, q, r)` together with every derived constant the sequence and
//! linear-complexity machinery consumes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest admitted period: `N = 2pq` must stay below `2^31`.
pub const MAX_PERIOD: u64 = 1 << 31;

/// Errors from the checked scalar operations ([`legendre`], [`mod_order`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ModError {
    #[error("modulus {0} is even")]
    EvenModulus(u64),
    #[error("modulus {0} is composite")]
    CompositeModulus(u64),
    #[error("{a} is not coprime to {n}")]
    NotCoprime { a: u64, n: u64 },
}

/// Error from [`crt2`]: the two congruences contradict each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("congruences disagree modulo gcd({m1}, {m2})")]
pub struct Inconsistent {
    pub m1: u64,
    pub m2: u64,
}

/// Rejection reasons of [`validate_params`], one per violated invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p and q must be distinct")]
    EqualPrimes,
    #[error("gcd(p-1, q-1) must be 2")]
    GcdNotTwo,
    #[error("r must be a prime >= 5 distinct from p and q")]
    BadR,
    #[error("period 2pq = {0} exceeds the supported bound 2^31")]
    TooLarge(u64),
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    a %= n;
    let mut acc = 1u64;
    while e != 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, n);
        }
        a = mul_mod(a, a, n);
        e >>= 1;
    }
    acc
}

/// Modular inverse of `a` modulo `n` for coprime `a`, `n`.
pub fn inv_mod(a: u64, n: u64) -> Result<u64, ModError> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(ModError::NotCoprime { a: a % n, n });
    }
    Ok(s0.rem_euclid(n as i128) as u64)
}

/// Deterministic Miller-Rabin, exact for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // This witness set is exact below 3.3 * 10^24, far past u64.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.iter_mut().find(|(q, _)| *q == p)
    {
        Some((_, e)) => *e += 1,
        None => out.push((p, 1)),
    };
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            push(p, &mut out);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            push(m, &mut out);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    out
}

/// Carmichael function λ(n), the exponent of `(Z/n)^*`.
fn carmichael(n: u64) -> u64 {
    let mut lambda = 1u64;
    for (p, e) in factorize(n) {
        let comp = if p == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1 << (e - 2),
            }
        } else {
            (p - 1) * p.pow(e - 1)
        };
        lambda = lambda / gcd(lambda, comp) * comp;
    }
    lambda
}

/// Legendre symbol of `a` modulo the odd prime `p`, without re-validating `p`.
pub(crate) fn legendre_unchecked(a: i64, p: u64) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let s = pow_mod(a, (p - 1) / 2, p);
    if s == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol `(a/p)` in `{-1, 0, +1}`; rejects even or composite `p`.
pub fn legendre(a: i64, p: u64) -> Result<i32, ModError> {
    if p % 2 == 0 {
        return Err(ModError::EvenModulus(p));
    }
    if !is_prime(p) {
        return Err(ModError::CompositeModulus(p));
    }
    Ok(legendre_unchecked(a, p))
}

/// Least `m >= 1` with `a^m = 1 (mod n)`; requires `gcd(a, n) = 1`.
///
/// Computed by factoring λ(n) and stripping prime factors while the power
/// stays at 1.
pub fn mod_order(a: u64, n: u64) -> Result<u64, ModError> {
    if gcd(a % n, n) != 1 {
        return Err(ModError::NotCoprime { a: a % n, n });
    }
    if n == 1 {
        return Ok(1);
    }
    let mut ord = carmichael(n);
    debug_assert_eq!(pow_mod(a, ord, n), 1);
    for (f, _) in factorize(ord) {
        while ord % f == 0 && pow_mod(a, ord / f, n) == 1 {
            ord /= f;
        }
    }
    Ok(ord)
}

/// Generalized CRT: the unique `x (mod lcm(m1, m2))` with `x = r1 (mod m1)`
/// and `x = r2 (mod m2)`, supporting non-coprime moduli.
pub fn crt2(r1: u64, m1: u64, r2: u64, m2: u64) -> Result<(u64, u64), Inconsistent> {
    assert!(m1 > 0 && m2 > 0, "moduli must be positive");
    let r1 = r1 % m1;
    let r2 = r2 % m2;
    let g = gcd(m1, m2);
    if r1 % g != r2 % g {
        return Err(Inconsistent { m1, m2 });
    }
    let l = m1 / g * m2;
    // x = r1 + m1 * t with t = (r2 - r1)/g * inv(m1/g) (mod m2/g)
    let m2g = m2 / g;
    let diff = ((r2 as i128 - r1 as i128) / g as i128).rem_euclid(m2g as i128) as u64;
    let inv = inv_mod((m1 / g) % m2g.max(1), m2g.max(1)).expect("coprime by construction");
    let t = mul_mod(diff, inv, m2g.max(1));
    Ok((((r1 as u128 + m1 as u128 * t as u128) % l as u128) as u64, l))
}

fn is_primitive_root(g: u64, p: u64, factors: &[(u64, u32)]) -> bool {
    if g % p == 0 {
        return false;
    }
    factors
        .iter()
        .all(|&(f, _)| pow_mod(g, (p - 1) / f, p) != 1)
}

/// Smallest common primitive root of `p` and `q`, shifted by `pq` when the
/// smallest one is even so the returned root is always odd.
///
/// The shift keeps both residues: `pq = 0` modulo `p` and modulo `q`.
pub fn find_common_odd_primitive_root(p: u64, q: u64) -> u64 {
    let fp = factorize(p - 1);
    let fq = factorize(q - 1);
    let g0 = (2..)
        .find(|&g| is_primitive_root(g, p, &fp) && is_primitive_root(g, q, &fq))
        .expect("a common primitive root exists when gcd(p-1, q-1) = 2");
    if g0 % 2 == 0 {
        g0 + p * q
    } else {
        g0
    }
}

/// CRT multipliers and halving constants derived from `(p, q)`.
///
/// `m_p`/`m_q` are the mixed-radix projectors modulo `pq`; `m2_*` records the
/// residue `u (mod 2u)` for `u` in `{p, q, pq}`; `inv2_*` are the inverses of
/// 2 modulo `p`, `q` and `pq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedConsts {
    pub m_p: u64,
    pub m_q: u64,
    pub m2_p: u64,
    pub m2_q: u64,
    pub m2_t: u64,
    pub inv2_p: u64,
    pub inv2_q: u64,
    pub inv2_t: u64,
}

/// Validated `(p, q, r)` with every derived parameter of the construction.
///
/// Build through [`validate_params`]; all fields are read-only by
/// convention afterwards and the struct is safe to share across threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceParams {
    /// First odd prime.
    pub p: u64,
    /// Second odd prime, distinct from `p`, with `gcd(p-1, q-1) = 2`.
    pub q: u64,
    /// Character of the base field: an odd prime `>= 5`, not `p` or `q`.
    pub r: u64,
    /// Common odd primitive root of `p` and `q`.
    pub g: u64,
    /// The class shifter: `x = g (mod 2p)`, `x = 1 (mod 2q)`.
    pub x: u64,
    /// `t = p * q`.
    pub t: u64,
    /// Period `n = 2 * p * q`.
    pub n: u64,
    /// Multiplicative order of `r` modulo `t`.
    pub m: u64,
    pub derived: DerivedConsts,
}

impl SequenceParams {
    /// `(p mod 8, q mod 8)` folded into `{+1, -1, +3, -3}`.
    pub fn pq_pattern(&self) -> (i8, i8) {
        (fold_mod8(self.p), fold_mod8(self.q))
    }
}

pub(crate) fn fold_mod8(u: u64) -> i8 {
    match u % 8 {
        1 => 1,
        3 => 3,
        5 => -3,
        7 => -1,
        _ => unreachable!("odd prime folded mod 8"),
    }
}

/// Validates `(p, q, r)` and freezes every derived constant.
pub fn validate_params(p: u64, q: u64, r: u64) -> Result<SequenceParams, ParamError> {
    if p < 3 || !is_prime(p) {
        return Err(ParamError::NotPrime(p));
    }
    if q < 3 || !is_prime(q) {
        return Err(ParamError::NotPrime(q));
    }
    if p == q {
        return Err(ParamError::EqualPrimes);
    }
    if gcd(p - 1, q - 1) != 2 {
        return Err(ParamError::GcdNotTwo);
    }
    // the polynomial layer keeps coefficients in u32 words, which needs
    // the base-field character below 2^16
    if r < 5 || r >= (1 << 16) || !is_prime(r) || r == p || r == q {
        return Err(ParamError::BadR);
    }
    let t = p * q;
    let n = 2 * t;
    if n > MAX_PERIOD {
        return Err(ParamError::TooLarge(n));
    }
    let g = find_common_odd_primitive_root(p, q);
    let (x, l) = crt2(g % (2 * p), 2 * p, 1, 2 * q).expect("odd g makes the system consistent");
    debug_assert_eq!(l, n);
    let m = mod_order(r, t).expect("r is coprime to pq");
    debug_assert_eq!(pow_mod(r, m, n), 1, "odd r forces r^m = 1 (mod 2pq)");
    let inv = |u: u64| inv_mod(2, u).expect("u is odd");
    let derived = DerivedConsts {
        m_p: mul_mod(q, inv_mod(q % p, p).expect("distinct primes"), t),
        m_q: mul_mod(p, inv_mod(p % q, q).expect("distinct primes"), t),
        m2_p: p,
        m2_q: q,
        m2_t: t,
        inv2_p: inv(p),
        inv2_q: inv(q),
        inv2_t: inv(t),
    };
    Ok(SequenceParams {
        p,
        q,
        r,
        g,
        x,
        t,
        n,
        m,
        derived,
    })
}
