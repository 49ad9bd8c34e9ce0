//! Generalized cyclotomic classes of order two modulo `p`, `q`, `2p`, `2q`,
//! `pq`, `2pq`, the fourteen-cell partition of `Z_{2pq}` they induce, and the
//! quaternary sequence defined on top of it.
//!
//! Classification is Legendre-symbol based: a unit `k` lies in `D_0^{(u)}`
//! exactly when `k` is a quadratic residue modulo `u`, and units of the
//! modulus-`pq` classes split by sign agreement of `(k/p)` and `(k/q)`.
//! [`enumerate_class`] regenerates every cell constructively from powers of
//! the primitive root and serves as the oracle for [`classify`].

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::modnum::{fold_mod8, legendre_unchecked, mul_mod, SequenceParams};

/// Subclass index inside a two-class family: 0 for the residue coset.
pub type ClassIndex = u8;

/// One of the fourteen cells partitioning `Z_{2pq}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ResidueClass {
    /// The singleton `{0}`.
    Zero,
    /// The singleton `{pq}`.
    Pq,
    /// `D_i^{(2T)}`, the odd units.
    D2T(ClassIndex),
    /// `2 D_i^{(T)}`, the even units doubled from modulus `T`.
    TwoDT(ClassIndex),
    /// `q D_i^{(2p)}`.
    QD2P(ClassIndex),
    /// `p D_i^{(2q)}`.
    PD2Q(ClassIndex),
    /// `2q D_i^{(p)}`.
    TwoQDP(ClassIndex),
    /// `2p D_i^{(q)}`.
    TwoPDQ(ClassIndex),
}

impl ResidueClass {
    /// All fourteen cells in canonical report order.
    pub const ALL: [ResidueClass; 14] = [
        ResidueClass::Zero,
        ResidueClass::Pq,
        ResidueClass::D2T(0),
        ResidueClass::D2T(1),
        ResidueClass::TwoDT(0),
        ResidueClass::TwoDT(1),
        ResidueClass::QD2P(0),
        ResidueClass::QD2P(1),
        ResidueClass::PD2Q(0),
        ResidueClass::PD2Q(1),
        ResidueClass::TwoQDP(0),
        ResidueClass::TwoQDP(1),
        ResidueClass::TwoPDQ(0),
        ResidueClass::TwoPDQ(1),
    ];

    /// Stable textual tag used in reports and JSON keys.
    pub fn tag(self) -> &'static str {
        match self {
            ResidueClass::Zero => "zero",
            ResidueClass::Pq => "pq",
            ResidueClass::D2T(0) => "D0_2T",
            ResidueClass::D2T(_) => "D1_2T",
            ResidueClass::TwoDT(0) => "twoD0_T",
            ResidueClass::TwoDT(_) => "twoD1_T",
            ResidueClass::QD2P(0) => "qD0_2p",
            ResidueClass::QD2P(_) => "qD1_2p",
            ResidueClass::PD2Q(0) => "pD0_2q",
            ResidueClass::PD2Q(_) => "pD1_2q",
            ResidueClass::TwoQDP(0) => "twoqD0_p",
            ResidueClass::TwoQDP(_) => "twoqD1_p",
            ResidueClass::TwoPDQ(0) => "twopD0_q",
            ResidueClass::TwoPDQ(_) => "twopD1_q",
        }
    }

    /// Cell cardinality for the given parameters.
    pub fn size(self, sp: &SequenceParams) -> u64 {
        let (p, q) = (sp.p, sp.q);
        match self {
            ResidueClass::Zero | ResidueClass::Pq => 1,
            ResidueClass::D2T(_) | ResidueClass::TwoDT(_) => (p - 1) * (q - 1) / 2,
            ResidueClass::QD2P(_) | ResidueClass::TwoQDP(_) => (p - 1) / 2,
            ResidueClass::PD2Q(_) | ResidueClass::TwoPDQ(_) => (q - 1) / 2,
        }
    }
}

/// `(p mod 8, q mod 8)` folded into the sign classes `{+1, -1, +3, -3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqPattern {
    pub s: i8,
    pub t: i8,
}

/// Mod-8 pattern of a prime pair; structural, so equal inputs are accepted.
pub fn pq_pattern(p: u64, q: u64) -> PqPattern {
    PqPattern {
        s: fold_mod8(p),
        t: fold_mod8(q),
    }
}

/// The unique cell of the partition containing `t`.
///
/// Panics when `t >= 2pq`.
pub fn classify(t: u64, sp: &SequenceParams) -> ResidueClass {
    assert!(t < sp.n, "residue {t} out of range for modulus {}", sp.n);
    if t == 0 {
        return ResidueClass::Zero;
    }
    if t == sp.t {
        return ResidueClass::Pq;
    }
    let (p, q) = (sp.p, sp.q);
    let even = t % 2 == 0;
    let div_p = t % p == 0;
    let div_q = t % q == 0;
    let sign_split = |v: u64| -> ClassIndex {
        let sp_ = legendre_unchecked(v as i64, p);
        let sq_ = legendre_unchecked(v as i64, q);
        u8::from(sp_ != sq_)
    };
    let class_mod =
        |v: u64, u: u64| -> ClassIndex { u8::from(legendre_unchecked(v as i64, u) != 1) };
    match (even, div_p, div_q) {
        (false, false, false) => ResidueClass::D2T(sign_split(t)),
        (true, false, false) => ResidueClass::TwoDT(sign_split(t / 2)),
        (false, false, true) => ResidueClass::QD2P(class_mod(t / q, p)),
        (true, false, true) => ResidueClass::TwoQDP(class_mod(t / (2 * q), p)),
        (false, true, false) => ResidueClass::PD2Q(class_mod(t / p, q)),
        (true, true, false) => ResidueClass::TwoPDQ(class_mod(t / (2 * p), q)),
        // Multiples of pq in [0, 2pq) are 0 and pq, both handled above.
        (_, true, true) => unreachable!("{t} divisible by both p and q"),
    }
}

/// Multiplicative coset `start * <generator> (mod modulus)` of the given size.
fn coset(start: u64, generator: u64, modulus: u64, size: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(size as usize);
    let mut cur = start % modulus;
    for _ in 0..size {
        out.push(cur);
        cur = mul_mod(cur, generator, modulus);
    }
    debug_assert_eq!(cur, start % modulus, "coset size mismatch");
    out
}

/// Constructive enumeration of a cell, ascending.
///
/// Generates the underlying class from powers of `g` (shifted by `x` or `g`
/// for the index-1 coset) and scales by the cell cofactor.
pub fn enumerate_class(sp: &SequenceParams, cell: ResidueClass) -> Vec<u64> {
    let (p, q, g, x, t, n) = (sp.p, sp.q, sp.g, sp.x, sp.t, sp.n);
    let unit_count = (p - 1) * (q - 1) / 2;
    let mut members = match cell {
        ResidueClass::Zero => vec![0],
        ResidueClass::Pq => vec![t],
        ResidueClass::D2T(i) => coset(if i == 0 { 1 } else { x % n }, g % n, n, unit_count),
        ResidueClass::TwoDT(i) => coset(if i == 0 { 1 } else { x % t }, g % t, t, unit_count)
            .into_iter()
            .map(|d| 2 * d)
            .collect(),
        ResidueClass::QD2P(i) => {
            let g2 = mul_mod(g % (2 * p), g % (2 * p), 2 * p);
            coset(if i == 0 { 1 } else { g % (2 * p) }, g2, 2 * p, (p - 1) / 2)
                .into_iter()
                .map(|d| q * d)
                .collect()
        }
        ResidueClass::PD2Q(i) => {
            let g2 = mul_mod(g % (2 * q), g % (2 * q), 2 * q);
            coset(if i == 0 { 1 } else { g % (2 * q) }, g2, 2 * q, (q - 1) / 2)
                .into_iter()
                .map(|d| p * d)
                .collect()
        }
        ResidueClass::TwoQDP(i) => {
            let g2 = mul_mod(g % p, g % p, p);
            coset(if i == 0 { 1 } else { g % p }, g2, p, (p - 1) / 2)
                .into_iter()
                .map(|d| 2 * q * d)
                .collect()
        }
        ResidueClass::TwoPDQ(i) => {
            let g2 = mul_mod(g % q, g % q, q);
            coset(if i == 0 { 1 } else { g % q }, g2, q, (q - 1) / 2)
                .into_iter()
                .map(|d| 2 * p * d)
                .collect()
        }
    };
    members.sort_unstable();
    members
}

/// The quaternary sequence over `{0, 1, 2, 3}` of length `2pq`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternarySequence {
    pub params: SequenceParams,
    pub values: Vec<u8>,
}

/// Symbol assigned to a cell by the frozen alphabet map.
pub fn symbol_of(cell: ResidueClass) -> u8 {
    match cell {
        ResidueClass::Zero => 0,
        ResidueClass::Pq => 2,
        ResidueClass::D2T(i) | ResidueClass::QD2P(i) | ResidueClass::PD2Q(i) => i,
        ResidueClass::TwoDT(i) | ResidueClass::TwoQDP(i) | ResidueClass::TwoPDQ(i) => 2 + i,
    }
}

/// Generates the full sequence; `values[t]` depends only on `classify(t)`.
pub fn generate_sequence(sp: &SequenceParams) -> QuaternarySequence {
    let values = (0..sp.n).map(|t| symbol_of(classify(t, sp))).collect();
    QuaternarySequence {
        params: *sp,
        values,
    }
}

impl QuaternarySequence {
    /// CSV export: one symbol per line, LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 2);
        for v in &self.values {
            out.push((b'0' + v) as char);
            out.push('\n');
        }
        out
    }

    /// JSON export with the defining primes alongside the symbols.
    pub fn to_json(&self) -> String {
        json!({
            "p": self.params.p,
            "q": self.params.q,
            "r": self.params.r,
            "values": self.values,
        })
        .to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modnum::{legendre, validate_params};

    fn params(p: u64, q: u64, r: u64) -> SequenceParams {
        validate_params(p, q, r).unwrap()
    }

    #[test]
    fn singletons_and_shifter() {
        let sp = params(3, 5, 7);
        assert_eq!(classify(0, &sp), ResidueClass::Zero);
        assert_eq!(classify(15, &sp), ResidueClass::Pq);
        // x * g^0 is the least member of the shifted odd-unit class
        assert_eq!(classify(sp.x, &sp), ResidueClass::D2T(1));
        assert_eq!(
            enumerate_class(&sp, ResidueClass::D2T(0)),
            vec![1, 17, 19, 23]
        );
        assert_eq!(enumerate_class(&sp, ResidueClass::Zero), vec![0]);
    }

    #[test]
    fn partition_and_oracle_agreement() {
        for (p, q) in [
            (3u64, 5u64),
            (5, 3),
            (3, 7),
            (7, 3),
            (3, 11),
            (5, 7),
            (7, 5),
            (13, 3),
        ] {
            let sp = params(p, q, if p == 13 || q == 13 { 5 } else { 13 });
            let mut seen = vec![false; sp.n as usize];
            for cell in ResidueClass::ALL {
                let members = enumerate_class(&sp, cell);
                assert_eq!(members.len() as u64, cell.size(&sp), "{:?} size", cell);
                for &m in &members {
                    assert!(!seen[m as usize], "duplicate member {m} in {:?}", cell);
                    seen[m as usize] = true;
                    assert_eq!(classify(m, &sp), cell, "classify({m}) for ({p},{q})");
                }
            }
            assert!(seen.iter().all(|&b| b), "cells must cover Z_2pq");
        }
    }

    #[test]
    fn unit_class_bijections() {
        // Odd units reduce bijectively onto matched/crossed residue class
        // pairs modulo p and q, and every member is odd.
        let sp = params(5, 7, 11);
        let (p, q) = (sp.p, sp.q);
        for i in 0..2u8 {
            let odd_units = enumerate_class(&sp, ResidueClass::D2T(i));
            for &k in &odd_units {
                assert_eq!(k % 2, 1);
                let (a, b) = (
                    legendre(k as i64, p).unwrap(),
                    legendre(k as i64, q).unwrap(),
                );
                assert_eq!(u8::from(a != b), i);
            }
            let mut images: Vec<(u64, u64)> = odd_units.iter().map(|&k| (k % p, k % q)).collect();
            images.sort_unstable();
            images.dedup();
            assert_eq!(images.len() as u64, (p - 1) * (q - 1) / 2);
        }
    }

    #[test]
    fn class_product_closure() {
        // a in D_i^(u) maps D_j^(u) onto D_{i+j mod 2}^(u)
        let sp = params(5, 7, 11);
        for u in [sp.p, sp.q, sp.t] {
            let class_of = |v: u64| -> u8 {
                if u == sp.t {
                    u8::from(
                        legendre_unchecked(v as i64, sp.p) != legendre_unchecked(v as i64, sp.q),
                    )
                } else {
                    u8::from(legendre_unchecked(v as i64, u) != 1)
                }
            };
            for a in 1..u {
                if u == sp.t && (a % sp.p == 0 || a % sp.q == 0) {
                    continue;
                }
                let i = class_of(a);
                for b in 1..u {
                    if u == sp.t && (b % sp.p == 0 || b % sp.q == 0) {
                        continue;
                    }
                    let j = class_of(b);
                    assert_eq!(class_of(mul_mod(a, b, u)), (i + j) % 2);
                }
            }
        }
    }

    #[test]
    fn halving_constant_class() {
        // 2^{-1} mod T sits in D_0^(T) exactly when (2/p) = (2/q)
        for (p, q) in [
            (3u64, 5),
            (3, 7),
            (5, 7),
            (7, 5),
            (7, 3),
            (3, 11),
            (11, 3),
            (5, 13),
        ] {
            let Ok(sp) = validate_params(p, q, 17) else {
                continue;
            };
            let inv2 = sp.derived.inv2_t;
            let same = legendre(2, p).unwrap() == legendre(2, q).unwrap();
            let in_d0 = legendre_unchecked(inv2 as i64, p) == legendre_unchecked(inv2 as i64, q);
            assert_eq!(in_d0, same, "({p},{q})");
        }
    }

    #[test]
    fn sequence_shape() {
        let sp = params(3, 5, 7);
        let seq = generate_sequence(&sp);
        assert_eq!(seq.values.len(), 30);
        assert_eq!(seq.values[0], 0);
        assert_eq!(seq.values[15], 2);
        let counts = seq.values.iter().fold([0u64; 4], |mut acc, &v| {
            acc[v as usize] += 1;
            acc
        });
        assert_eq!(counts, [8, 7, 8, 7]);
        assert!(seq.to_csv().lines().count() == 30);
        let parsed: serde_json::Value = serde_json::from_str(&seq.to_json()).unwrap();
        assert_eq!(parsed["p"], 3);
        assert_eq!(parsed["values"].as_array().unwrap().len(), 30);
    }

    #[test]
    fn patterns_fold_mod8() {
        let pat = pq_pattern(41, 79);
        assert_eq!((pat.s, pat.t), (1, -1));
        assert_eq!(pq_pattern(17, 17), PqPattern { s: 1, t: 1 });
        assert_eq!(pq_pattern(59, 43), PqPattern { s: 3, t: 3 });
    }
}
