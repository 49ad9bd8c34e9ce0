//! Dense univariate polynomial arithmetic over a small prime field `GF(r)`.
//!
//! Coefficients are kept reduced in `u32` with Barrett reduction per modulus
//! instance; multiplication switches from schoolbook to an NTT-based
//! convolution above a size threshold, division switches to Newton inversion
//! of the reversed divisor when the quotient is long, and the gcd runs a
//! classical Euclidean remainder chain on top of both.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomy::{enumerate_class, QuaternarySequence, ResidueClass};
use crate::modnum::SequenceParams;

/// Largest admitted coefficient modulus; keeps every product inside `u32`.
pub const MAX_MODULUS: u32 = 1 << 16;

/// Degree bound (inclusive) for the schoolbook multiplication path.
const MUL_SCHOOLBOOK_MAX: usize = 64;

/// Quotient length from which division precomputes a Newton inverse.
const NEWTON_MIN_QUOTIENT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operands live over different moduli ({0} vs {1})")]
    ModulusMismatch(u32, u32),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials")]
    BothZero,
}

/// Barrett reducer for a fixed modulus below 2^16.
///
/// `reduce` is exact for any input below 2^32, which covers a sum of a
/// reduced coefficient and a product of two reduced coefficients.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Modulus {
    pub r: u32,
    shifted_inv: u64,
    shifted_inv64: u64,
}

impl Modulus {
    pub fn new(r: u32) -> Self {
        assert!((2..MAX_MODULUS).contains(&r), "modulus {r} out of range");
        Modulus {
            r,
            shifted_inv: (1u64 << 32) / r as u64,
            shifted_inv64: ((1u128 << 64) / r as u128) as u64,
        }
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u32 {
        debug_assert!(x < 1 << 32);
        let q = (x * self.shifted_inv) >> 32;
        let mut rem = x - q * self.r as u64;
        while rem >= self.r as u64 {
            rem -= self.r as u64;
        }
        rem as u32
    }

    /// Barrett reduction valid for the full `u64` range.
    #[inline]
    pub fn reduce64(&self, x: u64) -> u32 {
        let q = ((x as u128 * self.shifted_inv64 as u128) >> 64) as u64;
        let mut rem = x - q * self.r as u64;
        while rem >= self.r as u64 {
            rem -= self.r as u64;
        }
        rem as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.r {
            s - self.r
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.r - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.r - a
        }
    }

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.r;
        a %= self.r;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element of the prime field.
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a % self.r != 0);
        self.pow(a, self.r as u64 - 2)
    }
}

/// NTT-friendly primes with matched convolution helpers. Two primes and a
/// CRT lift keep the integer convolution exact for any coefficient modulus
/// below 2^16 and combined length up to 2^23.
mod ntt {
    const P1: u64 = 998_244_353; // 119 * 2^23 + 1, generator 3
    const G1: u64 = 3;
    const P2: u64 = 754_974_721; // 45 * 2^24 + 1, generator 11
    const G2: u64 = 11;

    fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        a %= p;
        while e != 0 {
            if e & 1 == 1 {
                acc = acc * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        acc
    }

    fn transform(a: &mut [u64], invert: bool, p: u64, g: u64) {
        let n = a.len();
        debug_assert!(n.is_power_of_two());
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let base = if invert {
                pow_mod(pow_mod(g, p - 2, p), (p - 1) / len as u64, p)
            } else {
                pow_mod(g, (p - 1) / len as u64, p)
            };
            for chunk in a.chunks_mut(len) {
                let mut w = 1u64;
                let half = len / 2;
                for i in 0..half {
                    let u = chunk[i];
                    let v = chunk[i + half] * w % p;
                    chunk[i] = (u + v) % p;
                    chunk[i + half] = (u + p - v) % p;
                    w = w * base % p;
                }
            }
            len <<= 1;
        }
        if invert {
            let n_inv = pow_mod(n as u64, p - 2, p);
            for x in a.iter_mut() {
                *x = *x * n_inv % p;
            }
        }
    }

    fn convolve_mod(a: &[u32], b: &[u32], p: u64, g: u64) -> Vec<u64> {
        let out_len = a.len() + b.len() - 1;
        let size = out_len.next_power_of_two();
        assert!(size <= 1 << 23, "convolution length beyond transform size");
        let mut fa: Vec<u64> = a.iter().map(|&x| x as u64 % p).collect();
        let mut fb: Vec<u64> = b.iter().map(|&x| x as u64 % p).collect();
        fa.resize(size, 0);
        fb.resize(size, 0);
        transform(&mut fa, false, p, g);
        transform(&mut fb, false, p, g);
        for (x, y) in fa.iter_mut().zip(fb.iter()) {
            *x = *x * *y % p;
        }
        transform(&mut fa, true, p, g);
        fa.truncate(out_len);
        fa
    }

    /// Exact integer convolution of nonnegative sequences whose result
    /// coefficients stay below `P1 * P2` (about 7.5 * 10^17).
    pub fn convolve_exact(a: &[u32], b: &[u32]) -> Vec<u128> {
        let c1 = convolve_mod(a, b, P1, G1);
        let c2 = convolve_mod(a, b, P2, G2);
        // CRT lift: x = x1 + P1 * ((x2 - x1) * P1^{-1} mod P2)
        let inv_p1 = pow_mod(P1 % P2, P2 - 2, P2);
        c1.iter()
            .zip(c2.iter())
            .map(|(&x1, &x2)| {
                let t = (x2 + P2 - x1 % P2) % P2 * inv_p1 % P2;
                x1 as u128 + P1 as u128 * t as u128
            })
            .collect()
    }
}

/// Dense polynomial over `GF(r)`, canonical form: reduced coefficients in
/// ascending degree order with a nonzero leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldPoly {
    modulus: u32,
    coeffs: Vec<u32>,
}

fn trim(coeffs: &mut Vec<u32>) {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
}

impl FieldPoly {
    /// Builds a polynomial, reducing and trimming into canonical form.
    pub fn new(modulus: u32, coeffs: impl IntoIterator<Item = u64>) -> Self {
        let md = Modulus::new(modulus);
        let mut coeffs: Vec<u32> = coeffs.into_iter().map(|c| md.reduce64(c)).collect();
        trim(&mut coeffs);
        FieldPoly { modulus, coeffs }
    }

    pub fn zero(modulus: u32) -> Self {
        Modulus::new(modulus);
        FieldPoly {
            modulus,
            coeffs: Vec::new(),
        }
    }

    pub fn one(modulus: u32) -> Self {
        FieldPoly::new(modulus, [1])
    }

    /// `x^n - 1`, the reference polynomial of the gcd route.
    pub fn x_pow_n_minus_1(modulus: u32, n: u64) -> Self {
        let md = Modulus::new(modulus);
        let mut coeffs = vec![0u32; n as usize + 1];
        coeffs[0] = md.neg(1);
        coeffs[n as usize] = 1;
        FieldPoly { modulus, coeffs }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Scales so the leading coefficient becomes 1.
    pub fn monic(&self) -> FieldPoly {
        let Some(&lead) = self.coeffs.last() else {
            return self.clone();
        };
        let md = Modulus::new(self.modulus);
        if lead == 1 {
            return self.clone();
        }
        let inv = md.inv(lead);
        FieldPoly {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|&c| md.mul(c, inv)).collect(),
        }
    }

    /// Horner evaluation at a base-field point.
    pub fn eval(&self, x: u32) -> u32 {
        let md = Modulus::new(self.modulus);
        let mut acc = 0u32;
        for &c in self.coeffs.iter().rev() {
            acc = md.reduce(acc as u64 * x as u64 + c as u64);
        }
        acc
    }

    /// JSON dump: ascending coefficient array.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.coeffs).expect("plain array")
    }

    fn check_moduli(&self, other: &FieldPoly) -> Result<Modulus, PolyError> {
        if self.modulus != other.modulus {
            return Err(PolyError::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(Modulus::new(self.modulus))
    }
}

pub fn poly_add(a: &FieldPoly, b: &FieldPoly) -> Result<FieldPoly, PolyError> {
    let md = a.check_moduli(b)?;
    let mut coeffs = vec![0u32; a.coeffs.len().max(b.coeffs.len())];
    for (i, c) in coeffs.iter_mut().enumerate() {
        *c = md.add(a.coeff(i), b.coeff(i));
    }
    trim(&mut coeffs);
    Ok(FieldPoly {
        modulus: a.modulus,
        coeffs,
    })
}

pub fn poly_sub(a: &FieldPoly, b: &FieldPoly) -> Result<FieldPoly, PolyError> {
    let md = a.check_moduli(b)?;
    let mut coeffs = vec![0u32; a.coeffs.len().max(b.coeffs.len())];
    for (i, c) in coeffs.iter_mut().enumerate() {
        *c = md.sub(a.coeff(i), b.coeff(i));
    }
    trim(&mut coeffs);
    Ok(FieldPoly {
        modulus: a.modulus,
        coeffs,
    })
}

fn mul_schoolbook(a: &[u32], b: &[u32], md: Modulus) -> Vec<u32> {
    // Accumulates unreduced: at most 65 products of reduced coefficients
    // land on one position, far below u64 overflow.
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai as u64 * bj as u64;
        }
    }
    out.into_iter().map(|v| md.reduce64(v)).collect()
}

fn mul_ntt(a: &[u32], b: &[u32], md: Modulus) -> Vec<u32> {
    ntt::convolve_exact(a, b)
        .into_iter()
        .map(|v| (v % md.r as u128) as u32)
        .collect()
}

fn mul_dispatch(a: &[u32], b: &[u32], md: Modulus) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = if a.len().min(b.len()) <= MUL_SCHOOLBOOK_MAX {
        mul_schoolbook(a, b, md)
    } else {
        mul_ntt(a, b, md)
    };
    trim(&mut out);
    out
}

/// Ring product; schoolbook below a size threshold, NTT convolution above,
/// with bit-identical results.
pub fn poly_mul(a: &FieldPoly, b: &FieldPoly) -> Result<FieldPoly, PolyError> {
    let md = a.check_moduli(b)?;
    Ok(FieldPoly {
        modulus: a.modulus,
        coeffs: mul_dispatch(&a.coeffs, &b.coeffs, md),
    })
}

/// Truncated product `a * b mod x^k` used by the Newton iteration.
fn mul_trunc(a: &[u32], b: &[u32], k: usize, md: Modulus) -> Vec<u32> {
    let a = &a[..a.len().min(k)];
    let b = &b[..b.len().min(k)];
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = mul_dispatch(a, b, md);
    out.truncate(k);
    trim(&mut out);
    out
}

/// Power-series inverse of `f` modulo `x^k`; `f[0]` must be a unit.
fn series_inverse(f: &[u32], k: usize, md: Modulus) -> Vec<u32> {
    debug_assert!(!f.is_empty() && f[0] != 0);
    let mut inv = vec![md.inv(f[0])];
    let mut prec = 1usize;
    while prec < k {
        prec = (2 * prec).min(k);
        // inv <- inv * (2 - f * inv) mod x^prec
        let fi = mul_trunc(f, &inv, prec, md);
        let mut two_minus = vec![0u32; fi.len().max(1)];
        two_minus[0] = md.sub(2 % md.r, fi.first().copied().unwrap_or(0));
        for i in 1..two_minus.len() {
            two_minus[i] = md.neg(fi[i]);
        }
        trim(&mut two_minus);
        inv = mul_trunc(&inv, &two_minus, prec, md);
    }
    inv
}

fn divmod_newton(a: &[u32], b: &[u32], md: Modulus) -> (Vec<u32>, Vec<u32>) {
    let qlen = a.len() - b.len() + 1;
    let ra: Vec<u32> = a.iter().rev().copied().collect();
    let rb: Vec<u32> = b.iter().rev().copied().collect();
    let inv_rb = series_inverse(&rb, qlen, md);
    let mut rq = mul_trunc(&ra, &inv_rb, qlen, md);
    rq.resize(qlen, 0);
    let mut q: Vec<u32> = rq.iter().rev().copied().collect();
    // rem = a - q * b, degree < deg b
    let qb = mul_dispatch(&q, b, md);
    let mut rem = vec![0u32; b.len() - 1];
    for (i, rc) in rem.iter_mut().enumerate() {
        *rc = md.sub(a[i], qb.get(i).copied().unwrap_or(0));
    }
    trim(&mut rem);
    trim(&mut q);
    (q, rem)
}

fn divmod_schoolbook(a: &[u32], b: &[u32], md: Modulus) -> (Vec<u32>, Vec<u32>) {
    let db = b.len() - 1;
    let mut rem: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let mut q = vec![0u32; a.len() - db];
    let lead_inv = md.inv(b[db]);
    for i in (db..a.len()).rev() {
        let c = md.mul(md.reduce64(rem[i]) , lead_inv);
        if c != 0 {
            q[i - db] = c;
            let nc = md.neg(c) as u64;
            let lo = i - db;
            // Unreduced u64 accumulation; bounded well below overflow.
            for j in 0..db {
                rem[lo + j] += nc * b[j] as u64;
            }
        }
        rem[i] = 0;
    }
    let mut rem: Vec<u32> = rem[..db].iter().map(|&v| md.reduce64(v)).collect();
    trim(&mut rem);
    trim(&mut q);
    (q, rem)
}

/// Quotient and remainder with `deg rem < deg b`.
pub fn poly_divmod(a: &FieldPoly, b: &FieldPoly) -> Result<(FieldPoly, FieldPoly), PolyError> {
    let md = a.check_moduli(b)?;
    if b.is_zero() {
        return Err(PolyError::DivisionByZero);
    }
    if a.coeffs.len() < b.coeffs.len() {
        return Ok((FieldPoly::zero(a.modulus), a.clone()));
    }
    let qlen = a.coeffs.len() - b.coeffs.len() + 1;
    let (q, rem) = if qlen >= NEWTON_MIN_QUOTIENT && b.coeffs.len() > MUL_SCHOOLBOOK_MAX {
        divmod_newton(&a.coeffs, &b.coeffs, md)
    } else {
        divmod_schoolbook(&a.coeffs, &b.coeffs, md)
    };
    Ok((
        FieldPoly {
            modulus: a.modulus,
            coeffs: q,
        },
        FieldPoly {
            modulus: a.modulus,
            coeffs: rem,
        },
    ))
}

/// Remainder of `a` modulo `b`.
pub fn poly_rem(a: &FieldPoly, b: &FieldPoly) -> Result<FieldPoly, PolyError> {
    poly_divmod(a, b).map(|(_, rem)| rem)
}

/// In-place remainder step of the gcd chain.
///
/// `a` holds unreduced u64 accumulators, `b` is fully reduced. On return
/// `a` holds the still-unreduced remainder of length `deg b`.
fn rem_in_place(a: &mut Vec<u64>, b: &[u32], md: Modulus) {
    let db = b.len() - 1;
    let lead_inv = md.inv(b[db]);
    for i in (db..a.len()).rev() {
        let c = md.mul(md.reduce64(a[i]), lead_inv);
        if c != 0 {
            let nc = md.neg(c) as u64;
            let lo = i - db;
            for (j, &bj) in b[..db].iter().enumerate() {
                a[lo + j] += nc * bj as u64;
            }
        }
        a[i] = 0;
    }
    a.truncate(db);
}

/// Monic greatest common divisor by the Euclidean remainder chain.
///
/// Walks the classical chain with an in-place division kernel; a long
/// opening quotient goes through the Newton path in [`poly_divmod`] first.
pub fn poly_gcd(a: &FieldPoly, b: &FieldPoly) -> Result<FieldPoly, PolyError> {
    let md = a.check_moduli(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::BothZero);
    }
    if a.is_zero() {
        return Ok(b.monic());
    }
    if b.is_zero() {
        return Ok(a.monic());
    }
    let (mut big, mut small) = if a.coeffs.len() >= b.coeffs.len() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    if big.coeffs.len() - small.coeffs.len() + 1 >= NEWTON_MIN_QUOTIENT {
        let rem = poly_rem(&big, &small)?;
        big = small;
        small = rem;
        if small.is_zero() {
            return Ok(big.monic());
        }
    }
    let mut cur: Vec<u64> = big.coeffs.iter().map(|&c| c as u64).collect();
    let mut next: Vec<u32> = small.coeffs.clone();
    loop {
        rem_in_place(&mut cur, &next, md);
        let mut reduced: Vec<u32> = cur.iter().map(|&v| md.reduce64(v)).collect();
        trim(&mut reduced);
        if reduced.is_empty() {
            return Ok(FieldPoly {
                modulus: a.modulus,
                coeffs: next,
            }
            .monic());
        }
        cur = next.iter().map(|&c| c as u64).collect();
        next = reduced;
    }
}

/// Generating polynomial: coefficient of `x^t` is the symbol `s(t) mod r`.
pub fn generating_polynomial(seq: &QuaternarySequence, r: u32) -> FieldPoly {
    FieldPoly::new(r, seq.values.iter().map(|&v| v as u64))
}

/// Generating polynomial assembled from the enumerated classes instead of
/// the symbol stream; must agree with [`generating_polynomial`]
/// coefficient for coefficient.
pub fn generating_polynomial_structured(sp: &SequenceParams, r: u32) -> FieldPoly {
    let mut coeffs = vec![0u64; sp.n as usize];
    coeffs[sp.t as usize] = 2;
    for (cells, value) in [
        (
            [
                ResidueClass::D2T(1),
                ResidueClass::QD2P(1),
                ResidueClass::PD2Q(1),
            ],
            1u64,
        ),
        (
            [
                ResidueClass::TwoDT(0),
                ResidueClass::TwoQDP(0),
                ResidueClass::TwoPDQ(0),
            ],
            2,
        ),
        (
            [
                ResidueClass::TwoDT(1),
                ResidueClass::TwoQDP(1),
                ResidueClass::TwoPDQ(1),
            ],
            3,
        ),
    ] {
        for cell in cells {
            for m in enumerate_class(sp, cell) {
                coeffs[m as usize] = value;
            }
        }
    }
    FieldPoly::new(r, coeffs)
}
