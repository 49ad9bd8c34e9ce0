//! Arithmetic in `GF(r^m)`, the `2pq`-th root of unity hierarchy, the
//! character sums `A_i`, `B_i` and their argument-scaled variants, direct and
//! structured evaluation of the generating polynomial at `β^k`, and the
//! per-class census of its zeros.
//!
//! The census is desk-scale machinery: the extension degree is capped
//! (default 48) because the closed forms and the gcd route need no extension
//! field at all. Arbitrary-precision integers appear only inside
//! [`build_field`], for `r^m - 1`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::cyclotomy::{classify, enumerate_class, QuaternarySequence, ResidueClass};
use crate::modnum::{factorize, legendre_unchecked, SequenceParams};
use crate::polyring::{poly_divmod, poly_gcd, poly_mul, poly_sub, FieldPoly, Modulus};

/// Default cap on the extension degree `m = ord_T(r)`.
pub const DEFAULT_DEGREE_CAP: u64 = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("extension degree {m} exceeds the cap {cap}")]
    DegreeTooLarge { m: u64, cap: u64 },
}

/// Returned by the lemma machinery when `(2/p, 2/q) = (+1, -1)`, the one
/// character case without a value table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no value table covers 2 in D0^(p) x D1^(q)")]
pub struct UnsupportedCase;

/// Little-endian multi-limb unsigned integer; just enough for `r^m - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BigUint {
    limbs: Vec<u64>,
}

impl BigUint {
    fn from_u64(v: u64) -> Self {
        BigUint { limbs: vec![v] }
    }

    fn mul_small(&mut self, f: u64) {
        let mut carry = 0u128;
        for limb in &mut self.limbs {
            let t = *limb as u128 * f as u128 + carry;
            *limb = t as u64;
            carry = t >> 64;
        }
        while carry != 0 {
            self.limbs.push(carry as u64);
            carry >>= 64;
        }
    }

    fn sub_small(&mut self, v: u64) {
        let mut borrow = v;
        for limb in &mut self.limbs {
            let (nl, under) = limb.overflowing_sub(borrow);
            *limb = nl;
            borrow = u64::from(under);
            if borrow == 0 {
                break;
            }
        }
        assert_eq!(borrow, 0, "underflow");
        while self.limbs.len() > 1 && *self.limbs.last().unwrap() == 0 {
            self.limbs.pop();
        }
    }

    /// Divides in place by a small divisor, returning the remainder.
    fn div_small(&mut self, d: u64) -> u64 {
        let mut rem = 0u128;
        for limb in self.limbs.iter_mut().rev() {
            let cur = (rem << 64) | *limb as u128;
            *limb = (cur / d as u128) as u64;
            rem = cur % d as u128;
        }
        while self.limbs.len() > 1 && *self.limbs.last().unwrap() == 0 {
            self.limbs.pop();
        }
        rem as u64
    }

    fn bit_len(&self) -> usize {
        let top = *self.limbs.last().unwrap();
        if top == 0 {
            0
        } else {
            64 * (self.limbs.len() - 1) + (64 - top.leading_zeros() as usize)
        }
    }

    fn bit(&self, i: usize) -> bool {
        self.limbs[i / 64] >> (i % 64) & 1 == 1
    }
}

/// Element of `GF(r^m)`: coefficients of degree below `m` over `GF(r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElem {
    coeffs: Vec<u32>,
}

impl ExtElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Lies in the prime subfield: every coefficient above index 0 vanishes.
    pub fn is_scalar(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// `GF(r^m)` context: irreducible modulus, the root `β` of exact order
/// `2pq`, and the derived root hierarchy.
#[derive(Debug, Clone)]
pub struct ExtFieldCtx {
    pub r: u32,
    pub m: u64,
    pub seed: u64,
    pub modulus_poly: FieldPoly,
    /// Root of unity of exact multiplicative order `2pq`.
    pub beta: ExtElem,
    /// `β²`, of order `pq`.
    pub beta_t: ExtElem,
    /// `β^{2q}`, of order `p`.
    pub beta_p: ExtElem,
    /// `β^{2p}`, of order `q`.
    pub beta_q: ExtElem,
    /// `β^{pq} = -1`.
    pub beta_2: ExtElem,
    md: Modulus,
}

impl ExtFieldCtx {
    pub fn zero(&self) -> ExtElem {
        ExtElem {
            coeffs: vec![0; self.m as usize],
        }
    }

    pub fn scalar(&self, v: i64) -> ExtElem {
        let mut coeffs = vec![0u32; self.m as usize];
        coeffs[0] = v.rem_euclid(self.r as i64) as u32;
        ExtElem { coeffs }
    }

    pub fn one(&self) -> ExtElem {
        self.scalar(1)
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.md.add(x, y))
                .collect(),
        }
    }

    pub fn add_assign(&self, a: &mut ExtElem, b: &ExtElem) {
        for (x, &y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x = self.md.add(*x, y);
        }
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.md.sub(x, y))
                .collect(),
        }
    }

    pub fn scale(&self, a: &ExtElem, c: i64) -> ExtElem {
        let c = c.rem_euclid(self.r as i64) as u32;
        ExtElem {
            coeffs: a.coeffs.iter().map(|&x| self.md.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                prod[i + j] += ai as u64 * bj as u64;
            }
        }
        // reduce by the monic modulus: x^m = -(low part of modulus_poly)
        let mp = self.modulus_poly.coeffs();
        for i in (m..prod.len()).rev() {
            let c = self.md.reduce64(prod[i]);
            if c != 0 {
                let nc = self.md.neg(c) as u64;
                // prod[i - m + j] -= c * mp[j]  for j < m
                for j in 0..m {
                    prod[i - m + j] += nc * mp[j] as u64;
                }
            }
            prod[i] = 0;
        }
        ExtElem {
            coeffs: prod[..m].iter().map(|&v| self.md.reduce64(v)).collect(),
        }
    }

    pub fn pow(&self, a: &ExtElem, mut e: u64) -> ExtElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn pow_big(&self, a: &ExtElem, e: &BigUint) -> ExtElem {
        let mut acc = self.one();
        for i in (0..e.bit_len()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Consecutive powers `base^0 .. base^{count-1}`.
    fn power_table(&self, base: &ExtElem, count: u64) -> Vec<ExtElem> {
        let mut table = Vec::with_capacity(count as usize);
        let mut cur = self.one();
        for _ in 0..count {
            table.push(cur.clone());
            cur = self.mul(&cur, base);
        }
        table
    }
}

fn random_poly_elem(r: u32, m: u64, rng: &mut ChaCha8Rng) -> Vec<u32> {
    (0..m).map(|_| rng.random_range(0..r)).collect()
}

/// Monic irreducibility test over `GF(r)`: `x^{r^m} = x (mod f)` and
/// `gcd(x^{r^{m/l}} - x, f) = 1` for every prime `l | m`.
fn is_irreducible(f: &FieldPoly, r: u32, m: u64) -> bool {
    if m == 1 {
        return true;
    }
    let x = FieldPoly::new(r, [0, 1]);
    let frob_steps: Vec<u64> = factorize(m).iter().map(|&(l, _)| m / l).collect();
    let mut pow = x.clone();
    for step in 1..=m {
        // pow <- pow^r mod f
        let mut acc = FieldPoly::one(r);
        let mut base = pow.clone();
        let mut e = r;
        while e != 0 {
            if e & 1 == 1 {
                acc = poly_divmod(&poly_mul(&acc, &base).unwrap(), f).unwrap().1;
            }
            base = poly_divmod(&poly_mul(&base, &base).unwrap(), f).unwrap().1;
            e >>= 1;
        }
        pow = acc;
        if frob_steps.contains(&step) {
            let diff = poly_sub(&pow, &x).unwrap();
            if diff.is_zero() {
                return false;
            }
            let g = poly_gcd(&diff, f).unwrap();
            if g.degree() != Some(0) {
                return false;
            }
        }
    }
    poly_sub(&pow, &x).unwrap().is_zero()
}

/// Builds `GF(r^m)` with a seeded irreducible modulus and a root `β` of
/// exact order `2pq`, plus the derived roots `β_T`, `β_p`, `β_q`, `β_2`.
pub fn build_field(sp: &SequenceParams, cap: u64, seed: u64) -> Result<ExtFieldCtx, FieldError> {
    let (r, m) = (sp.r as u32, sp.m);
    if m > cap {
        return Err(FieldError::DegreeTooLarge { m, cap });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let md = Modulus::new(r);
    let modulus_poly = loop {
        let mut coeffs: Vec<u64> = random_poly_elem(r, m, &mut rng)
            .into_iter()
            .map(u64::from)
            .collect();
        coeffs.push(1); // monic
        let f = FieldPoly::new(r, coeffs);
        if is_irreducible(&f, r, m) {
            break f;
        }
    };
    let mut ctx = ExtFieldCtx {
        r,
        m,
        seed,
        modulus_poly,
        beta: ExtElem { coeffs: vec![] },
        beta_t: ExtElem { coeffs: vec![] },
        beta_p: ExtElem { coeffs: vec![] },
        beta_q: ExtElem { coeffs: vec![] },
        beta_2: ExtElem { coeffs: vec![] },
        md,
    };
    // exponent (r^m - 1) / 2pq, exact because ord_{2pq}(r) = m
    let mut e = BigUint::from_u64(1);
    for _ in 0..m {
        e.mul_small(r as u64);
    }
    e.sub_small(1);
    let rem = e.div_small(sp.n);
    assert_eq!(rem, 0, "2pq divides r^m - 1");
    let beta = loop {
        let cand = ExtElem {
            coeffs: random_poly_elem(r, m, &mut rng),
        };
        if cand.is_zero() {
            continue;
        }
        let c = ctx.pow_big(&cand, &e);
        // exact order 2pq: no prime divisor of 2pq may halve it
        if ctx.pow(&c, sp.t) != ctx.one()
            && ctx.pow(&c, sp.n / sp.p) != ctx.one()
            && ctx.pow(&c, sp.n / sp.q) != ctx.one()
        {
            debug_assert_eq!(ctx.pow(&c, sp.n), ctx.one());
            break c;
        }
    };
    ctx.beta_t = ctx.mul(&beta, &beta);
    ctx.beta_p = ctx.pow(&beta, 2 * sp.q);
    ctx.beta_q = ctx.pow(&beta, 2 * sp.p);
    ctx.beta_2 = ctx.pow(&beta, sp.t);
    assert_eq!(ctx.beta_2, ctx.scalar(-1), "beta^pq is the order-2 element");
    ctx.beta = beta;
    Ok(ctx)
}

/// The four Gaussian-period sums `A_0`, `A_1`, `B_0`, `B_1`.
#[derive(Debug, Clone)]
pub struct CharParams {
    pub a0: ExtElem,
    pub a1: ExtElem,
    pub b0: ExtElem,
    pub b1: ExtElem,
}

/// The six argument-scaled character functions at `k`.
#[derive(Debug, Clone)]
pub struct CharFuncs {
    pub a0k: ExtElem,
    pub a1k: ExtElem,
    pub b0k: ExtElem,
    pub b1k: ExtElem,
    pub zp: ExtElem,
    pub zq: ExtElem,
}

/// Precomputed evaluation tables for one `(ctx, params)` pair.
pub struct Evaluator<'a> {
    pub ctx: &'a ExtFieldCtx,
    pub sp: &'a SequenceParams,
    pow_beta: Vec<ExtElem>,
    pow_t: Vec<ExtElem>,
    pow_p: Vec<ExtElem>,
    pow_q: Vec<ExtElem>,
    d1t: Vec<u64>,
    class_p: Vec<u8>,
    class_q: Vec<u8>,
}

impl<'a> Evaluator<'a> {
    pub fn new(ctx: &'a ExtFieldCtx, sp: &'a SequenceParams) -> Self {
        let class_table = |u: u64| -> Vec<u8> {
            (0..u)
                .map(|v| {
                    if v == 0 {
                        2 // unused marker for non-units
                    } else {
                        u8::from(legendre_unchecked(v as i64, u) != 1)
                    }
                })
                .collect()
        };
        Evaluator {
            ctx,
            sp,
            pow_beta: ctx.power_table(&ctx.beta, sp.n),
            pow_t: ctx.power_table(&ctx.beta_t, sp.t),
            pow_p: ctx.power_table(&ctx.beta_p, sp.p),
            pow_q: ctx.power_table(&ctx.beta_q, sp.q),
            d1t: enumerate_class(sp, ResidueClass::TwoDT(1))
                .into_iter()
                .map(|v| v / 2)
                .collect(),
            class_p: class_table(sp.p),
            class_q: class_table(sp.q),
        }
    }

    /// `β^k` from the table.
    pub fn beta_pow(&self, k: u64) -> &ExtElem {
        &self.pow_beta[(k % self.sp.n) as usize]
    }

    /// `A_i(k) = Σ_{j in D_i^(p)} β_p^{kj}` and the q-side analogue.
    fn char_sum(&self, table: &[ExtElem], classes: &[u8], u: u64, i: u8, k: u64) -> ExtElem {
        let mut acc = self.ctx.zero();
        for j in 1..u {
            if classes[j as usize] == i {
                self.ctx.add_assign(&mut acc, &table[(k * j % u) as usize]);
            }
        }
        acc
    }

    pub fn a_func(&self, i: u8, k: u64) -> ExtElem {
        self.char_sum(&self.pow_p, &self.class_p, self.sp.p, i, k % self.sp.p)
    }

    pub fn b_func(&self, i: u8, k: u64) -> ExtElem {
        self.char_sum(&self.pow_q, &self.class_q, self.sp.q, i, k % self.sp.q)
    }

    /// `Σ_{i in D_1^(T)} β_T^{ki}`.
    pub fn s1t(&self, k: u64) -> ExtElem {
        let mut acc = self.ctx.zero();
        for &i in &self.d1t {
            self.ctx
                .add_assign(&mut acc, &self.pow_t[(k % self.sp.t * i % self.sp.t) as usize]);
        }
        acc
    }

    /// The four Gaussian periods (the `k = 1` character functions).
    pub fn char_params(&self) -> CharParams {
        CharParams {
            a0: self.a_func(0, 1),
            a1: self.a_func(1, 1),
            b0: self.b_func(0, 1),
            b1: self.b_func(1, 1),
        }
    }

    /// All six character functions at `k`.
    pub fn char_funcs(&self, k: u64) -> CharFuncs {
        let a0k = self.a_func(0, k);
        let a1k = self.a_func(1, k);
        let b0k = self.b_func(0, k);
        let b1k = self.b_func(1, k);
        let zp = self.ctx.add(&a0k, &a1k);
        let zq = self.ctx.add(&b0k, &b1k);
        CharFuncs {
            a0k,
            a1k,
            b0k,
            b1k,
            zp,
            zq,
        }
    }

    /// Horner evaluation of the full generating polynomial at `β^k`.
    pub fn evaluate_gs_at(&self, seq: &QuaternarySequence, k: u64) -> ExtElem {
        assert!(k < self.sp.n, "k out of range");
        let y = self.beta_pow(k);
        let md = &self.ctx.md;
        let mut acc = self.ctx.zero();
        for &s in seq.values.iter().rev() {
            acc = self.ctx.mul(&acc, y);
            acc.coeffs[0] = md.add(acc.coeffs[0], s as u32);
        }
        acc
    }

    /// Structured evaluation of `G_s(β^k)` through the character-sum
    /// expansion; must match [`Self::evaluate_gs_at`] for every `k`.
    pub fn evaluate_gs_structured(&self, k: u64) -> ExtElem {
        assert!(k < self.sp.n, "k out of range");
        let ctx = self.ctx;
        let d = &self.sp.derived;
        let beta2k = if k % 2 == 0 { 1 } else { -1 };
        // 2 β_2^k
        let mut acc = ctx.scalar(2 * beta2k);
        // β_2^k Σ_{D_1^T} β_T^{k 2_T^{-1} i} + Σ_{D_1^T} β_T^{k i}
        let half = self.s1t(d.inv2_t * (k % self.sp.t) % self.sp.t);
        self.ctx.add_assign(&mut acc, &ctx.scale(&half, beta2k));
        self.ctx.add_assign(&mut acc, &self.s1t(k % self.sp.t));
        // p side: β_2^k A_1(2_p^{-1} k) + A_1(k)
        let half_p = self.a_func(1, d.inv2_p * (k % self.sp.p) % self.sp.p);
        self.ctx.add_assign(&mut acc, &ctx.scale(&half_p, beta2k));
        self.ctx.add_assign(&mut acc, &self.a_func(1, k));
        // q side
        let half_q = self.b_func(1, d.inv2_q * (k % self.sp.q) % self.sp.q);
        self.ctx.add_assign(&mut acc, &ctx.scale(&half_q, beta2k));
        self.ctx.add_assign(&mut acc, &self.b_func(1, k));
        // 2 (Z^(p) Z^(q) + Z^(p) + Z^(q))
        let cf = self.char_funcs(k);
        let mut tail = ctx.mul(&cf.zp, &cf.zq);
        self.ctx.add_assign(&mut tail, &cf.zp);
        self.ctx.add_assign(&mut tail, &cf.zq);
        self.ctx.add_assign(&mut acc, &ctx.scale(&tail, 2));
        acc
    }

    /// Simplified character-sum form of `G_s(β^k)`, available when 2 has
    /// the same quadratic character modulo both primes: the halving
    /// exponents collapse, leaving one `(β_2^k + 1)`-scaled block when 2 is
    /// a residue both places and an index swap on the short sums otherwise.
    /// `None` in the mixed cases.
    pub fn evaluate_gs_simplified(&self, k: u64) -> Option<ExtElem> {
        assert!(k < self.sp.n, "k out of range");
        let ctx = self.ctx;
        let two_p = legendre_unchecked(2, self.sp.p);
        let two_q = legendre_unchecked(2, self.sp.q);
        if two_p != two_q {
            return None;
        }
        let beta2k: i64 = if k % 2 == 0 { 1 } else { -1 };
        let cf = self.char_funcs(k);
        let mut tail = ctx.mul(&cf.zp, &cf.zq);
        ctx.add_assign(&mut tail, &cf.zp);
        ctx.add_assign(&mut tail, &cf.zq);
        let mut acc = ctx.scalar(2 * beta2k);
        ctx.add_assign(&mut acc, &ctx.scale(&tail, 2));
        let s1t = self.s1t(k % self.sp.t);
        if two_p == 1 {
            // (β_2^k + 1)(Σ_{D_1^(T)} + A_1(k) + B_1(k))
            let mut inner = s1t;
            ctx.add_assign(&mut inner, &cf.a1k);
            ctx.add_assign(&mut inner, &cf.b1k);
            ctx.add_assign(&mut acc, &ctx.scale(&inner, beta2k + 1));
        } else {
            // (β_2^k + 1) Σ_{D_1^(T)} + (β_2^k A_0(k) + A_1(k)) + q side
            ctx.add_assign(&mut acc, &ctx.scale(&s1t, beta2k + 1));
            ctx.add_assign(&mut acc, &ctx.scale(&cf.a0k, beta2k));
            ctx.add_assign(&mut acc, &cf.a1k);
            ctx.add_assign(&mut acc, &ctx.scale(&cf.b0k, beta2k));
            ctx.add_assign(&mut acc, &cf.b1k);
        }
        Some(acc)
    }
}

/// Symbolic value of `G_s(β^k)` predicted by the value lemmas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsValue {
    /// Integer constant (reduced modulo `r` at evaluation).
    Const(i64),
    /// `2 A_i`.
    TwoA(u8),
    /// `2 B_i`.
    TwoB(u8),
    /// `2 (A0 B0 + A1 B1 + A_ai + B_bj)`, crossed products when `cross`.
    TwoSumMix { cross: bool, ai: u8, bj: u8 },
    /// `2 (A0 B0 + A1 B1 - 1)`, crossed products when `cross`.
    TwoProdMinus1 { cross: bool },
    /// `sa (A0 - A1) + sb (B0 - B1) - 4`.
    DeltaSum { sa: i8, sb: i8 },
    /// `sa (A0 - A1) - 4`.
    DeltaA { sa: i8 },
    /// `sb (B0 - B1) - 4`.
    DeltaB { sb: i8 },
    /// `sa (A0 - A1) ((B0 - B1) + sb) - 4`.
    DeltaProd { sa: i8, sb: i8 },
}

impl GsValue {
    pub fn eval(&self, ctx: &ExtFieldCtx, ch: &CharParams) -> ExtElem {
        let da = ctx.sub(&ch.a0, &ch.a1);
        let db = ctx.sub(&ch.b0, &ch.b1);
        let signed = |e: &ExtElem, s: i8| if s >= 0 { e.clone() } else { ctx.scale(e, -1) };
        match *self {
            GsValue::Const(c) => ctx.scalar(c),
            GsValue::TwoA(i) => ctx.scale(if i == 0 { &ch.a0 } else { &ch.a1 }, 2),
            GsValue::TwoB(i) => ctx.scale(if i == 0 { &ch.b0 } else { &ch.b1 }, 2),
            GsValue::TwoSumMix { cross, ai, bj } => {
                let prod = if cross {
                    ctx.add(&ctx.mul(&ch.a0, &ch.b1), &ctx.mul(&ch.a1, &ch.b0))
                } else {
                    ctx.add(&ctx.mul(&ch.a0, &ch.b0), &ctx.mul(&ch.a1, &ch.b1))
                };
                let a = if ai == 0 { &ch.a0 } else { &ch.a1 };
                let b = if bj == 0 { &ch.b0 } else { &ch.b1 };
                ctx.scale(&ctx.add(&ctx.add(&prod, a), b), 2)
            }
            GsValue::TwoProdMinus1 { cross } => {
                let prod = if cross {
                    ctx.add(&ctx.mul(&ch.a0, &ch.b1), &ctx.mul(&ch.a1, &ch.b0))
                } else {
                    ctx.add(&ctx.mul(&ch.a0, &ch.b0), &ctx.mul(&ch.a1, &ch.b1))
                };
                ctx.scale(&ctx.add(&prod, &ctx.scalar(-1)), 2)
            }
            GsValue::DeltaSum { sa, sb } => ctx.add(
                &ctx.add(&signed(&da, sa), &signed(&db, sb)),
                &ctx.scalar(-4),
            ),
            GsValue::DeltaA { sa } => ctx.add(&signed(&da, sa), &ctx.scalar(-4)),
            GsValue::DeltaB { sb } => ctx.add(&signed(&db, sb), &ctx.scalar(-4)),
            GsValue::DeltaProd { sa, sb } => {
                let factor = ctx.add(&db, &ctx.scalar(sb as i64));
                ctx.add(&ctx.mul(&signed(&da, sa), &factor), &ctx.scalar(-4))
            }
        }
    }
}

impl fmt::Display for GsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pm = |s: i8| if s >= 0 { "" } else { "-" };
        match *self {
            GsValue::Const(c) => write!(f, "{c}"),
            GsValue::TwoA(i) => write!(f, "2A{i}"),
            GsValue::TwoB(i) => write!(f, "2B{i}"),
            GsValue::TwoSumMix { cross, ai, bj } => {
                if cross {
                    write!(f, "2(A0B1+A1B0+A{ai}+B{bj})")
                } else {
                    write!(f, "2(A0B0+A1B1+A{ai}+B{bj})")
                }
            }
            GsValue::TwoProdMinus1 { cross } => {
                if cross {
                    write!(f, "2(A0B1+A1B0-1)")
                } else {
                    write!(f, "2(A0B0+A1B1-1)")
                }
            }
            GsValue::DeltaSum { sa, sb } => {
                write!(f, "{}(A0-A1){}{}(B0-B1)-4", pm(sa), if sb >= 0 { "+" } else { "" }, pm(sb))
            }
            GsValue::DeltaA { sa } => write!(f, "{}(A0-A1)-4", pm(sa)),
            GsValue::DeltaB { sb } => write!(f, "{}(B0-B1)-4", pm(sb)),
            GsValue::DeltaProd { sa, sb } => {
                write!(f, "{}(A0-A1)((B0-B1){}{})-4", pm(sa), if sb >= 0 { "+" } else { "-" }, sb.abs())
            }
        }
    }
}

/// Which value lemma covers the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaId {
    /// 2 is a residue mod both p and q.
    ResidueBoth,
    /// 2 is a non-residue mod both.
    NonResidueBoth,
    /// 2 is a non-residue mod p, a residue mod q.
    MixedPq,
}

impl LemmaId {
    pub fn label(self) -> &'static str {
        match self {
            LemmaId::ResidueBoth => "2 in D0xD0",
            LemmaId::NonResidueBoth => "2 in D1xD1",
            LemmaId::MixedPq => "2 in D1xD0",
        }
    }
}

/// Per-parameter lemma dispatcher: yields the predicted `G_s(β^k)`.
#[derive(Debug, Clone)]
pub struct LemmaCase {
    pub id: LemmaId,
    sp: SequenceParams,
    /// `(q/p) = (p/q)`?
    recip_eq: bool,
    qp: i32,
    pq: i32,
}

/// Selects the value lemma for the parameters' quadratic-character case.
pub fn lemma_case(sp: &SequenceParams) -> Result<LemmaCase, UnsupportedCase> {
    let two_p = legendre_unchecked(2, sp.p);
    let two_q = legendre_unchecked(2, sp.q);
    let id = match (two_p, two_q) {
        (1, 1) => LemmaId::ResidueBoth,
        (-1, -1) => LemmaId::NonResidueBoth,
        (-1, 1) => LemmaId::MixedPq,
        _ => return Err(UnsupportedCase),
    };
    let qp = legendre_unchecked(sp.q as i64, sp.p);
    let pq = legendre_unchecked(sp.p as i64, sp.q);
    Ok(LemmaCase {
        id,
        sp: *sp,
        recip_eq: qp == pq,
        qp,
        pq,
    })
}

impl LemmaCase {
    /// Predicted value of `G_s(β^k)` for the cell and sub-case containing
    /// `k`, symbolic over the character parameters.
    pub fn predict(&self, k: u64) -> GsValue {
        let sp = &self.sp;
        let cell = classify(k, sp);
        let t3 = 3 * sp.t as i64 - 1;
        let t2 = 2 * sp.t as i64 - 4;
        let k1 = u8::from(legendre_unchecked((k % sp.p) as i64, sp.p) != 1);
        let k2 = u8::from(legendre_unchecked((k % sp.q) as i64, sp.q) != 1);
        match self.id {
            LemmaId::ResidueBoth => match cell {
                ResidueClass::Zero => GsValue::Const(t3),
                ResidueClass::Pq => GsValue::Const(t2),
                ResidueClass::D2T(_) | ResidueClass::QD2P(_) | ResidueClass::PD2Q(_) => {
                    GsValue::Const(-4)
                }
                ResidueClass::TwoDT(i) => {
                    // eight sub-cases over (k1, k2) classes and reciprocity;
                    // the product pairing flips between the two cells
                    let (ai, bj) = match (k1, k2) {
                        (0, 0) => (1, 1),
                        (1, 1) => (0, 0),
                        (0, 1) => (1, 0),
                        (1, 0) => (0, 1),
                        _ => unreachable!(),
                    };
                    GsValue::TwoSumMix {
                        cross: (i == 0) == self.recip_eq,
                        ai,
                        bj,
                    }
                }
                ResidueClass::TwoQDP(i) => {
                    if (i == 0 && self.qp == -1) || (i == 1 && self.qp == 1) {
                        GsValue::TwoA(0)
                    } else {
                        GsValue::TwoA(1)
                    }
                }
                ResidueClass::TwoPDQ(j) => {
                    if (j == 0 && self.pq == -1) || (j == 1 && self.pq == 1) {
                        GsValue::TwoB(0)
                    } else {
                        GsValue::TwoB(1)
                    }
                }
            },
            LemmaId::NonResidueBoth => match cell {
                ResidueClass::Zero => GsValue::Const(t3),
                ResidueClass::Pq => GsValue::Const(t2),
                ResidueClass::TwoQDP(_) | ResidueClass::TwoPDQ(_) => GsValue::Const(-1),
                // sa = -1 iff k1 is a residue; the argument-shift of A_i(k)
                // by the class of k flips the difference A0 - A1
                ResidueClass::D2T(_) => GsValue::DeltaSum {
                    sa: if k1 == 0 { -1 } else { 1 },
                    sb: if k2 == 0 { -1 } else { 1 },
                },
                ResidueClass::TwoDT(i) => GsValue::TwoProdMinus1 {
                    cross: (i == 0) == self.recip_eq,
                },
                ResidueClass::QD2P(i) => {
                    if (i == 0 && self.qp == 1) || (i == 1 && self.qp == -1) {
                        GsValue::DeltaA { sa: -1 }
                    } else {
                        GsValue::DeltaA { sa: 1 }
                    }
                }
                ResidueClass::PD2Q(j) => {
                    if (j == 0 && self.pq == 1) || (j == 1 && self.pq == -1) {
                        GsValue::DeltaB { sb: -1 }
                    } else {
                        GsValue::DeltaB { sb: 1 }
                    }
                }
            },
            LemmaId::MixedPq => match cell {
                ResidueClass::Zero => GsValue::Const(t3),
                ResidueClass::Pq => GsValue::Const(t2),
                ResidueClass::TwoQDP(_) => GsValue::Const(-1),
                ResidueClass::PD2Q(_) => GsValue::Const(-4),
                ResidueClass::D2T(_) => {
                    // value = eps (-1)^(k1+k2) δp δq - (-1)^k1 δp - 4 with
                    // eps = -1 when (q/p) = (p/q); factored into the
                    // δp (δq + s) - 4 shape
                    let eps: i8 = if self.recip_eq { -1 } else { 1 };
                    let sa = eps * if (k1 + k2) % 2 == 0 { 1 } else { -1 };
                    let sb = -eps * if k2 == 0 { 1 } else { -1 };
                    GsValue::DeltaProd { sa, sb }
                }
                ResidueClass::TwoDT(_) => {
                    if k2 == 1 {
                        GsValue::TwoB(0)
                    } else {
                        GsValue::TwoB(1)
                    }
                }
                ResidueClass::QD2P(_) => GsValue::DeltaA {
                    sa: if k1 == 1 { 1 } else { -1 },
                },
                ResidueClass::TwoPDQ(_) => {
                    if k2 == 1 {
                        GsValue::TwoB(0)
                    } else {
                        GsValue::TwoB(1)
                    }
                }
            },
        }
    }
}

/// Per-cell census entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCensus {
    pub cell: ResidueClass,
    pub size: u64,
    pub zeros: u64,
    pub predicted: Option<u64>,
}

/// Zero census of `G_s(β^k)` over `Z_{2pq}`, bucketed by residue class.
#[derive(Debug, Clone)]
pub struct CensusReport {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub m: u64,
    pub seed: u64,
    pub lemma: Option<LemmaId>,
    pub cells: Vec<CellCensus>,
    pub total_zeros: u64,
}

impl CensusReport {
    pub fn to_json(&self) -> String {
        let mut cells = serde_json::Map::new();
        for c in &self.cells {
            cells.insert(
                c.cell.tag().to_string(),
                json!({ "size": c.size, "zeros": c.zeros, "predicted": c.predicted }),
            );
        }
        json!({
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "m": self.m,
            "seed": self.seed,
            "lemma": self.lemma.map(LemmaId::label),
            "total_zeros": self.total_zeros,
            "cells": serde_json::Value::Object(cells),
        })
        .to_string()
    }
}

/// Evaluates `G_s(β^k)` for every `k`, buckets the zeros per cell, and
/// attaches lemma-predicted zero counts where a value lemma applies.
pub fn zero_census(ctx: &ExtFieldCtx, sp: &SequenceParams) -> CensusReport {
    let ev = Evaluator::new(ctx, sp);
    let case = lemma_case(sp).ok();
    let chars = ev.char_params();
    let mut zeros = std::collections::BTreeMap::new();
    let mut predicted = std::collections::BTreeMap::new();
    for k in 0..sp.n {
        let cell = classify(k, sp);
        if ev.evaluate_gs_structured(k).is_zero() {
            *zeros.entry(cell).or_insert(0u64) += 1;
        }
        if let Some(case) = &case {
            if case.predict(k).eval(ctx, &chars).is_zero() {
                *predicted.entry(cell).or_insert(0u64) += 1;
            }
        }
    }
    let cells: Vec<CellCensus> = ResidueClass::ALL
        .iter()
        .map(|&cell| CellCensus {
            cell,
            size: cell.size(sp),
            zeros: zeros.get(&cell).copied().unwrap_or(0),
            predicted: case
                .as_ref()
                .map(|_| predicted.get(&cell).copied().unwrap_or(0)),
        })
        .collect();
    let total_zeros = cells.iter().map(|c| c.zeros).sum();
    CensusReport {
        p: sp.p,
        q: sp.q,
        r: sp.r,
        m: sp.m,
        seed: ctx.seed,
        lemma: case.map(|c| c.id),
        cells,
        total_zeros,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomy::generate_sequence;
    use crate::lincomp::lc_gcd;
    use crate::modnum::{inv_mod, validate_params};

    fn field(p: u64, q: u64, r: u64, seed: u64) -> (SequenceParams, ExtFieldCtx) {
        let sp = validate_params(p, q, r).unwrap();
        let ctx = build_field(&sp, DEFAULT_DEGREE_CAP, seed).unwrap();
        (sp, ctx)
    }

    #[test]
    fn root_hierarchy_orders() {
        let (sp, ctx) = field(3, 5, 7, 1);
        assert_eq!(sp.m, 4);
        assert_eq!(ctx.pow(&ctx.beta, 30), ctx.one());
        assert_eq!(ctx.pow(&ctx.beta, 15), ctx.scalar(-1));
        for (root, ord) in [
            (&ctx.beta_t, 15u64),
            (&ctx.beta_p, 3),
            (&ctx.beta_q, 5),
            (&ctx.beta_2, 2),
        ] {
            assert_eq!(ctx.pow(root, ord), ctx.one());
            for l in [2u64, 3, 5] {
                if ord % l == 0 {
                    assert_ne!(ctx.pow(root, ord / l), ctx.one(), "order divides {}", ord / l);
                }
            }
        }
    }

    #[test]
    fn base_field_degeneration() {
        // ord_15(31) = 1: the context is GF(31) itself
        let (sp, ctx) = field(3, 5, 31, 9);
        assert_eq!(sp.m, 1);
        assert_eq!(ctx.modulus_poly.degree(), Some(1));
        assert!(ctx.beta.is_scalar());
        assert_eq!(ctx.pow(&ctx.beta, 30), ctx.one());
    }

    #[test]
    fn deterministic_construction() {
        let (_, ctx1) = field(3, 5, 7, 42);
        let (_, ctx2) = field(3, 5, 7, 42);
        assert_eq!(ctx1.modulus_poly, ctx2.modulus_poly);
        assert_eq!(ctx1.beta, ctx2.beta);
        let (_, ctx3) = field(3, 5, 7, 43);
        // different seed is allowed to pick another field representation
        assert!(ctx3.pow(&ctx3.beta, 30) == ctx3.one());
    }

    #[test]
    fn degree_cap_enforced() {
        let sp = validate_params(41, 79, 5).unwrap();
        // ord of 5 mod 41*79 is large
        let err = build_field(&sp, 48, 0).unwrap_err();
        assert!(matches!(err, FieldError::DegreeTooLarge { .. }));
    }

    #[test]
    fn character_sum_identities() {
        for (p, q, r, seed) in [(3u64, 5, 7, 7), (5, 3, 7, 1), (3, 7, 5, 5), (5, 7, 11, 3)] {
            let (sp, ctx) = field(p, q, r, seed);
            let ev = Evaluator::new(&ctx, &sp);
            let ch = ev.char_params();
            // A0 + A1 = B0 + B1 = -1
            assert_eq!(ctx.add(&ch.a0, &ch.a1), ctx.scalar(-1));
            assert_eq!(ctx.add(&ch.b0, &ch.b1), ctx.scalar(-1));
            // quadratic relations per the mod-4 class of each prime
            let quad = |x0: &ExtElem, x1: &ExtElem, u: u64| {
                if u % 4 == 1 {
                    let lhs = ctx.mul(x0, &ctx.add(&ctx.one(), x0));
                    assert_eq!(lhs, ctx.scalar((u as i64 - 1) / 4), "u={u}");
                } else {
                    let lhs = ctx.mul(x1, &ctx.add(&ctx.one(), x1));
                    assert_eq!(lhs, ctx.scalar(-((u as i64 + 1) / 4)), "u={u}");
                }
            };
            quad(&ch.a0, &ch.a1, p);
            quad(&ch.b0, &ch.b1, q);
            // subfield membership tracks (r/p)
            assert_eq!(ch.a0.is_scalar(), legendre_unchecked(r as i64, p) == 1);
            assert_eq!(ch.b0.is_scalar(), legendre_unchecked(r as i64, q) == 1);
            // k = 1 char funcs coincide with the parameters
            let cf = ev.char_funcs(1);
            assert_eq!(cf.a0k, ch.a0);
            assert_eq!(cf.b1k, ch.b1);
            // Z value tables
            for k in 0..sp.n {
                let cf = ev.char_funcs(k);
                let zp_expect = if k % p == 0 { p as i64 - 1 } else { -1 };
                let zq_expect = if k % q == 0 { q as i64 - 1 } else { -1 };
                assert_eq!(cf.zp, ctx.scalar(zp_expect));
                assert_eq!(cf.zq, ctx.scalar(zq_expect));
            }
        }
    }

    #[test]
    fn dual_path_evaluation() {
        // every valid pair with pq <= 200, exhaustive in k: Horner equals
        // the structured expansion equals the simplified form where one
        // exists. The base-field character is picked to keep m small.
        let primes: Vec<u64> = (3..=70).filter(|&n| crate::modnum::is_prime(n)).collect();
        let mut instances = 0;
        for &p in &primes {
            for &q in &primes {
                if p * q > 200 {
                    continue;
                }
                let Some((sp, _)) = (5u64..50)
                    .filter(|&r| crate::modnum::is_prime(r))
                    .filter_map(|r| validate_params(p, q, r).ok().map(|sp| (sp, sp.m)))
                    .filter(|&(_, m)| m <= 24)
                    .min_by_key(|&(_, m)| m)
                else {
                    continue;
                };
                let ctx = build_field(&sp, 24, 2).unwrap();
                let ev = Evaluator::new(&ctx, &sp);
                let seq = generate_sequence(&sp);
                for k in 0..sp.n {
                    let direct = ev.evaluate_gs_at(&seq, k);
                    let structured = ev.evaluate_gs_structured(k);
                    assert_eq!(direct, structured, "({p},{q},{}) k={k}", sp.r);
                    if let Some(simplified) = ev.evaluate_gs_simplified(k) {
                        assert_eq!(direct, simplified, "simplified ({p},{q},{}) k={k}", sp.r);
                    }
                }
                instances += 1;
            }
        }
        assert!(instances >= 15, "covered only {instances} pairs");
    }

    #[test]
    fn known_point_values() {
        let (sp, ctx) = field(3, 5, 7, 11);
        let ev = Evaluator::new(&ctx, &sp);
        // G_s(1) = 3pq - 1, G_s(β^pq) = 2pq - 4
        assert_eq!(ev.evaluate_gs_structured(0), ctx.scalar(3 * 15 - 1));
        assert_eq!(ev.evaluate_gs_structured(15), ctx.scalar(2 * 15 - 4));
    }

    #[test]
    fn product_sum_decompositions() {
        // Direct sums over the big classes match the character products.
        for (p, q, r, seed) in [(3u64, 5, 7, 4), (5, 7, 11, 4), (3, 7, 5, 4)] {
            let (sp, ctx) = field(p, q, r, seed);
            let ev = Evaluator::new(&ctx, &sp);
            let d = sp.derived;
            let qp_inv = inv_mod(q % p, p).unwrap();
            let pq_inv = inv_mod(p % q, q).unwrap();
            let recip_eq = legendre_unchecked(q as i64, p) == legendre_unchecked(p as i64, q);
            for k in 0..sp.n {
                // odd unit classes through the doubled-argument products
                for i in 0..2u8 {
                    let direct = enumerate_class(&sp, ResidueClass::D2T(i))
                        .iter()
                        .fold(ctx.zero(), |acc, &n| ctx.add(&acc, ev.beta_pow(k * n % sp.n)));
                    let ka = d.inv2_p * qp_inv % p * (k % p) % p;
                    let kb = d.inv2_q * pq_inv % q * (k % q) % q;
                    let (a0, a1) = (ev.a_func(0, ka), ev.a_func(1, ka));
                    let (b0, b1) = (ev.b_func(0, kb), ev.b_func(1, kb));
                    let prod = if i == 0 {
                        ctx.add(&ctx.mul(&a0, &b0), &ctx.mul(&a1, &b1))
                    } else {
                        ctx.add(&ctx.mul(&a0, &b1), &ctx.mul(&a1, &b0))
                    };
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    assert_eq!(direct, ctx.scale(&prod, sign), "D2T({i}) k={k} ({p},{q})");
                }
                // scaled odd classes reduce to single character functions
                for i in 0..2u8 {
                    let direct = enumerate_class(&sp, ResidueClass::QD2P(i))
                        .iter()
                        .fold(ctx.zero(), |acc, &n| ctx.add(&acc, ev.beta_pow(k * n % sp.n)));
                    let expect = ev.a_func(i, d.inv2_p * (k % p) % p);
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    assert_eq!(direct, ctx.scale(&expect, sign), "QD2P({i}) k={k}");
                    let direct_q = enumerate_class(&sp, ResidueClass::PD2Q(i))
                        .iter()
                        .fold(ctx.zero(), |acc, &n| ctx.add(&acc, ev.beta_pow(k * n % sp.n)));
                    let expect_q = ev.b_func(i, d.inv2_q * (k % q) % q);
                    assert_eq!(direct_q, ctx.scale(&expect_q, sign), "PD2Q({i}) k={k}");
                }
                // unit classes modulo T split by reciprocity agreement
                let s0: ExtElem = enumerate_class(&sp, ResidueClass::TwoDT(0))
                    .iter()
                    .map(|&n| n / 2)
                    .fold(ctx.zero(), |acc, i| {
                        ctx.add(&acc, &ev.pow_t[(k % sp.t * i % sp.t) as usize])
                    });
                let cf = ev.char_funcs(k);
                let matched = ctx.add(&ctx.mul(&cf.a0k, &cf.b0k), &ctx.mul(&cf.a1k, &cf.b1k));
                let crossed = ctx.add(&ctx.mul(&cf.a0k, &cf.b1k), &ctx.mul(&cf.a1k, &cf.b0k));
                let expect = if recip_eq { &matched } else { &crossed };
                assert_eq!(&s0, expect, "sum over D0_T k={k}");
                let s1 = ev.s1t(k % sp.t);
                let expect1 = if recip_eq { &crossed } else { &matched };
                assert_eq!(&s1, expect1, "sum over D1_T k={k}");
            }
        }
    }

    #[test]
    fn lemma_predictions_match_values() {
        // both reciprocity branches of every covered character case
        for (p, q, r, seed) in [
            (7u64, 17, 5, 3), // 2 residue both, (q/p) = (p/q)
            (7, 23, 5, 3),    // 2 residue both, (q/p) != (p/q)
            (3, 5, 7, 3),     // 2 non-residue both, signs agree
            (3, 11, 7, 3),    // 2 non-residue both, signs differ
            (5, 3, 7, 3),     // 2 non-residue both, reversed roles
            (3, 17, 5, 3),    // 2 in D1(p) x D0(q), signs agree
            (3, 7, 11, 3),    // 2 in D1(p) x D0(q), signs differ
        ] {
            let sp = validate_params(p, q, r).unwrap();
            let ctx = build_field(&sp, 80, seed).unwrap();
            let ev = Evaluator::new(&ctx, &sp);
            let case = lemma_case(&sp).unwrap();
            let chars = ev.char_params();
            for k in 0..sp.n {
                let predicted = case.predict(k).eval(&ctx, &chars);
                let actual = ev.evaluate_gs_structured(k);
                assert_eq!(
                    predicted,
                    actual,
                    "({p},{q},{r}) k={k} cell={:?} sym={}",
                    classify(k, &sp),
                    case.predict(k)
                );
            }
        }
        // the mirror case has no table
        let sp = validate_params(7, 3, 5).unwrap(); // 2 residue mod 7, non-residue mod 3
        assert_eq!(lemma_case(&sp).unwrap_err(), UnsupportedCase);
    }

    #[test]
    fn value_table_rows_for_subfield_parameters() {
        // When all four character parameters collapse into {0, -1}, the
        // eight mixed-sum quantities take fixed small values; three of the
        // four live sub-cases vanish on every row.
        let (_, ctx) = field(3, 5, 7, 1);
        let rows = [
            ((0i64, -1i64, 0i64, -1i64), [-2i64, -4, 2, 0, -2, 0, -2, 0]),
            ((0, -1, -1, 0), [-2, 0, -2, 0, -2, -4, 2, 0]),
            ((-1, 0, 0, -1), [-2, 0, -2, 0, 2, 0, -2, -4]),
            ((-1, 0, -1, 0), [2, 0, -2, -4, -2, 0, -2, 0]),
        ];
        // quantities a..h in their conventional order
        let symbols = [
            GsValue::TwoSumMix { cross: false, ai: 1, bj: 1 },
            GsValue::TwoSumMix { cross: true, ai: 1, bj: 1 },
            GsValue::TwoSumMix { cross: false, ai: 0, bj: 0 },
            GsValue::TwoSumMix { cross: true, ai: 0, bj: 0 },
            GsValue::TwoSumMix { cross: true, ai: 1, bj: 0 },
            GsValue::TwoSumMix { cross: false, ai: 1, bj: 0 },
            GsValue::TwoSumMix { cross: true, ai: 0, bj: 1 },
            GsValue::TwoSumMix { cross: false, ai: 0, bj: 1 },
        ];
        for ((a0, a1, b0, b1), expected) in rows {
            let ch = CharParams {
                a0: ctx.scalar(a0),
                a1: ctx.scalar(a1),
                b0: ctx.scalar(b0),
                b1: ctx.scalar(b1),
            };
            for (sym, want) in symbols.iter().zip(expected) {
                assert_eq!(
                    sym.eval(&ctx, &ch),
                    ctx.scalar(want),
                    "row ({a0},{a1},{b0},{b1}) symbol {sym}"
                );
            }
            let zeros = symbols
                .iter()
                .zip(expected)
                .filter(|&(_, want)| want == 0)
                .count();
            assert_eq!(zeros, 3);
        }
    }

    #[test]
    fn census_total_matches_gcd_degree() {
        for (p, q, r, seed) in [(3u64, 5, 7, 5), (3, 7, 5, 5), (5, 7, 11, 5), (3, 7, 11, 5)] {
            let (sp, ctx) = field(p, q, r, seed);
            let report = zero_census(&ctx, &sp);
            assert_eq!(report.total_zeros, sp.n - lc_gcd(&sp), "({p},{q},{r})");
            for cell in &report.cells {
                assert!(cell.zeros <= cell.size);
                if let Some(pred) = cell.predicted {
                    assert_eq!(pred, cell.zeros, "({p},{q},{r}) {:?}", cell.cell);
                }
            }
            // determinism of the serialized report
            let ctx2 = build_field(&sp, DEFAULT_DEGREE_CAP, seed).unwrap();
            let report2 = zero_census(&ctx2, &sp);
            assert_eq!(report.to_json(), report2.to_json());
        }
    }
}
