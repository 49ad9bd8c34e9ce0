//! Linear complexity of the quaternary sequences by three mutually checking
//! methods: the gcd of the generating polynomial with `x^N - 1`,
//! Berlekamp-Massey synthesis, and a closed-form dispatcher over the
//! quadratic-character case analysis.
//!
//! Two dispatcher guards are tighter than their published statements; both
//! tightenings were forced by cross-checking against the gcd and
//! Berlekamp-Massey routes (see the inline notes at [`t_b2`] and [`t_c5`]).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomy::generate_sequence;
use crate::modnum::{gcd, is_prime, legendre_unchecked, validate_params, SequenceParams};
use crate::polyring::{generating_polynomial_structured, poly_gcd, FieldPoly, Modulus};

/// Linear complexity through `N - deg gcd(x^N - 1, G_s(x))` in `GF(r)[x]`.
///
/// Both polynomials have base-field coefficients and gcd degrees do not
/// change under field extension, so the base field suffices.
pub fn lc_gcd(sp: &SequenceParams) -> u64 {
    let r = sp.r as u32;
    let gs = generating_polynomial_structured(sp, r);
    let pn = FieldPoly::x_pow_n_minus_1(r, sp.n);
    let g = poly_gcd(&pn, &gs).expect("x^N - 1 is nonzero");
    sp.n - g.degree().expect("gcd of nonzero inputs is nonzero") as u64
}

/// Length of the shortest linear recurrence generating `symbols` over
/// `GF(r)` (Berlekamp-Massey). Zero for the all-zero input.
pub fn lc_bm(symbols: &[u32], r: u32) -> u64 {
    let md = Modulus::new(r);
    let mut conn = vec![1u32]; // connection polynomial, constant term 1
    let mut back = vec![1u32]; // copy from the last length change
    let mut l = 0usize;
    let mut gap = 1usize; // distance to the saved copy
    let mut back_d = 1u32; // discrepancy at the saved copy
    for i in 0..symbols.len() {
        // discrepancy d = s[i] + sum_{j=1..l} conn[j] * s[i-j]
        let mut acc = symbols[i] as u64;
        for (cj, sj) in conn[1..=l].iter().zip(symbols[i - l..i].iter().rev()) {
            acc += *cj as u64 * *sj as u64;
        }
        let d = md.reduce64(acc);
        if d == 0 {
            gap += 1;
            continue;
        }
        let coef = md.mul(d, md.inv(back_d));
        if 2 * l <= i {
            let snapshot = conn.clone();
            if conn.len() < back.len() + gap {
                conn.resize(back.len() + gap, 0);
            }
            for (j, &bj) in back.iter().enumerate() {
                conn[j + gap] = md.sub(conn[j + gap], md.mul(coef, bj));
            }
            l = i + 1 - l;
            back = snapshot;
            back_d = d;
            gap = 1;
        } else {
            if conn.len() < back.len() + gap {
                conn.resize(back.len() + gap, 0);
            }
            for (j, &bj) in back.iter().enumerate() {
                conn[j + gap] = md.sub(conn[j + gap], md.mul(coef, bj));
            }
            gap += 1;
        }
    }
    l as u64
}

/// Berlekamp-Massey on two full periods of the sequence, which pins the
/// periodic linear complexity since it never exceeds one period.
pub fn lc_bm_periodic(sp: &SequenceParams) -> u64 {
    let seq = generate_sequence(sp);
    let mut symbols = Vec::with_capacity(2 * seq.values.len());
    symbols.extend(seq.values.iter().map(|&v| v as u32));
    symbols.extend(seq.values.iter().map(|&v| v as u32));
    lc_bm(&symbols, sp.r as u32)
}

/// One matched closed-form case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremMatch {
    pub id: String,
    pub case: u8,
    pub predicted: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictStatus {
    Unique,
    MultipleConsistent,
    Conflict,
    NoClosedForm,
}

/// Outcome of the closed-form dispatcher.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub matched: Vec<TheoremMatch>,
    pub status: VerdictStatus,
}

impl TheoremVerdict {
    /// Predicted value when the matches are usable.
    pub fn predicted(&self) -> Option<u64> {
        match self.status {
            VerdictStatus::Unique | VerdictStatus::MultipleConsistent => {
                Some(self.matched[0].predicted)
            }
            _ => None,
        }
    }
}

/// Character and pattern data the guards consume.
struct Guards {
    p: u64,
    q: u64,
    r: u64,
    t: u64,
    pat: (i8, i8),
    two_p: i32,
    two_q: i32,
    rp: i32,
    rq: i32,
}

impl Guards {
    fn new(sp: &SequenceParams) -> Self {
        Guards {
            p: sp.p,
            q: sp.q,
            r: sp.r,
            t: sp.t,
            pat: sp.pq_pattern(),
            two_p: legendre_unchecked(2, sp.p),
            two_q: legendre_unchecked(2, sp.q),
            rp: legendre_unchecked(sp.r as i64, sp.p),
            rq: legendre_unchecked(sp.r as i64, sp.q),
        }
    }

    /// `r` divides the (possibly negative) integer expression.
    fn div(&self, x: i64) -> bool {
        x.rem_euclid(self.r as i64) == 0
    }
}

fn t_a1(g: &Guards) -> Option<(u8, u64)> {
    if (g.two_p, g.two_q) != (1, 1) || (g.rp, g.rq) != (1, 1) {
        return None;
    }
    let (p, q) = (g.p as i64, g.q as i64);
    let case1 = (g.pat == (1, -1) && g.div(p - 1) && g.div(q + 1))
        || (g.pat == (-1, 1) && g.div(p + 1) && g.div(q - 1));
    if case1 {
        return Some((1, (5 * g.t + g.p + g.q + 1) / 4));
    }
    if g.pat == (-1, -1) && g.div(p + 1) && g.div(q + 1) {
        return Some((2, (4 * g.t - g.p - g.q + 2) / 2));
    }
    None
}

fn t_a2(g: &Guards) -> Option<(u8, u64)> {
    if (g.two_p, g.two_q) != (1, 1) || (g.rp, g.rq) != (1, -1) {
        return None;
    }
    let (p, q) = (g.p as i64, g.q as i64);
    let (da, db) = match g.pat {
        (1, -1) if g.div(p - 1) => (g.div(3 * q - 1), g.div(2 * q - 4)),
        (-1, 1) if g.div(p + 1) => (g.div(3 * q + 1), g.div(2 * q + 4)),
        _ => return None,
    };
    Some(match (da || db, g.r == 5) {
        (false, _) => (1, (3 * g.t + g.q) / 2),
        (true, false) => (2, (3 * g.t + g.q - 2) / 2),
        (true, true) => (3, (3 * g.t + g.q - 4) / 2),
    })
}

fn t_a3(g: &Guards) -> Option<(u8, u64)> {
    if (g.two_p, g.two_q) != (1, 1) || (g.rp, g.rq) != (1, -1) || g.pat != (-1, -1) {
        return None;
    }
    let (p, q) = (g.p as i64, g.q as i64);
    if !g.div(p + 1) {
        return None;
    }
    let (da, db) = (g.div(3 * q + 1), g.div(2 * q + 4));
    Some(match (da || db, g.r == 5) {
        (false, _) => (1, (4 * g.t + g.p - 1) / 2),
        (true, false) => (2, (4 * g.t + g.p - 3) / 2),
        (true, true) => (3, (4 * g.t + g.p - 5) / 2),
    })
}

/// Pattern-directed divisibility `r | p ± c`, `r | q ± c` for the families
/// over 2-non-residue pairs: plus signs at 3 (mod 8), minus at 5 (mod 8).
fn signed_pair_div(g: &Guards, c: i64) -> bool {
    let (p, q) = (g.p as i64, g.q as i64);
    match g.pat {
        (3, 3) => g.div(p + c) && g.div(q + c),
        (-3, 3) => g.div(p - c) && g.div(q + c),
        (3, -3) => g.div(p + c) && g.div(q - c),
        _ => false,
    }
}

fn t_b1(g: &Guards) -> Option<(u8, u64)> {
    if (g.two_p, g.two_q) != (-1, -1) || (g.rp, g.rq) != (1, 1) || !signed_pair_div(g, 16) {
        return None;
    }
    let except: &[u64] = if g.pat == (3, 3) {
        &[13, 59, 127]
    } else {
        &[43, 769]
    };
    Some(if g.r == 5 {
        (3, (3 * g.t + 1) / 2)
    } else if except.contains(&g.r) {
        (2, 2 * g.t - (g.p + g.q) / 2)
    } else {
        (1, 2 * g.t - (g.p + g.q) / 2 + 1)
    })
}

fn t_b2(g: &Guards) -> Option<(u8, u64)> {
    // r = 5 satisfies the stated guard on the mixed patterns but the
    // formula fails there (the 2D_i^(T) values ±(A0-A1)(B0-B1) - 1 vanish
    // at r = 5, contributing (p-1)(q-1)/2 uncounted zeros); gcd and
    // Berlekamp-Massey give 2pq - 3(p-1)(q-1)/4 instead, e.g. 428 for
    // (29, 11, 5). Excluded, so the gcd route stays authoritative.
    if (g.two_p, g.two_q) != (-1, -1)
        || (g.rp, g.rq) != (1, 1)
        || g.r == 5
        || !signed_pair_div(g, 4)
    {
        return None;
    }
    let except: &[u64] = if g.pat == (3, 3) { &[7, 47] } else { &[7] };
    Some(if except.contains(&g.r) {
        (2, (7 * g.t + g.p + g.q - 5) / 4)
    } else {
        (1, (7 * g.t + g.p + g.q - 1) / 4)
    })
}

fn t_b3(g: &Guards) -> Option<(u8, u64)> {
    if (g.two_p, g.two_q) != (-1, -1) || (g.rp, g.rq) != (1, 1) || !signed_pair_div(g, 1) {
        return None;
    }
    Some(if g.r == 5 {
        (2, (3 * g.t + 1) / 2)
    } else {
        (1, (3 * g.t + g.p + g.q - 1) / 2)
    })
}

fn t_b4(g: &Guards) -> Option<(u8, u64)> {
    if (g.two_p, g.two_q) != (-1, -1) || (g.rp, g.rq) != (1, -1) {
        return None;
    }
    let (p, q) = (g.p as i64, g.q as i64);
    let p_div = match g.pat.0 {
        3 => g.div(p + 16),
        -3 => g.div(p - 16),
        _ => false,
    };
    if !p_div || !matches!(g.pat, (3, 3) | (3, -3) | (-3, 3)) {
        return None;
    }
    let (da, db) = if g.pat.0 == 3 {
        (g.div(48 * q + 1), g.div(8 * q + 1))
    } else {
        (g.div(48 * q - 1), g.div(8 * q - 1))
    };
    let base = 2 * g.t - (g.p - 1) / 2;
    Some(match (da || db, g.r == 5) {
        (false, _) => (1, base),
        (true, false) => (2, base - 1),
        (true, true) => (3, base - 2),
    })
}

/// Divisibility `r | p ± c` steered by the p-side pattern alone.
fn signed_p_div(g: &Guards, c: i64) -> bool {
    match g.pat.0 {
        3 => g.div(g.p as i64 + c),
        -3 => g.div(g.p as i64 - c),
        _ => false,
    }
}

/// Divisibility `r | q ± 1` steered by the q-side pattern: `q + 1` at
/// `q = -1 (mod 8)`, `q - 1` at `q = 1 (mod 8)`.
fn signed_q_unit_div(g: &Guards) -> bool {
    match g.pat.1 {
        -1 => g.div(g.q as i64 + 1),
        1 => g.div(g.q as i64 - 1),
        _ => false,
    }
}

fn t_c1(g: &Guards) -> Option<(u8, u64)> {
    if (g.two_p, g.two_q) != (-1, 1)
        || (g.rp, g.rq) != (1, 1)
        || !signed_p_div(g, 4)
        || !signed_q_unit_div(g)
    {
        return None;
    }
    let exceptional = match g.pat {
        (3, 1) | (-3, -1) => g.r == 13,
        (3, -1) => g.r == 11,
        _ => return None,
    };
    Some(if exceptional {
        (2, (5 * g.t + 3 * g.p + g.q - 5) / 4)
    } else {
        (1, (5 * g.t + 3 * g.p + g.q - 1) / 4)
    })
}

fn t_c2(g: &Guards) -> Option<(u8, u64)> {
    if (g.two_p, g.two_q) != (-1, 1)
        || (g.rp, g.rq) != (1, 1)
        || !signed_p_div(g, 16)
        || !signed_q_unit_div(g)
    {
        return None;
    }
    let exceptional = match g.pat {
        (3, 1) | (-3, -1) => g.r == 7,
        (3, -1) => g.r == 7 || g.r == 47,
        _ => return None,
    };
    Some(if exceptional {
        (2, (3 * g.t - 1) / 2)
    } else {
        (1, (3 * g.t + 1) / 2)
    })
}

fn t_c3(g: &Guards) -> Option<(u8, u64)> {
    if (g.two_p, g.two_q) != (-1, 1) || (g.rp, g.rq) != (1, -1) || !signed_p_div(g, 16) {
        return None;
    }
    let q = g.q as i64;
    let (da, db) = match g.pat {
        (3, 1) | (3, -1) => (g.div(48 * q + 1), g.div(8 * q + 1)),
        (-3, -1) => (g.div(48 * q - 1), g.div(8 * q - 1)),
        _ => return None,
    };
    Some(match (da || db, g.r == 5) {
        (false, _) => (1, (4 * g.t - g.p + 1) / 2),
        (true, false) => (2, (4 * g.t - g.p - 1) / 2),
        (true, true) => (3, (4 * g.t - g.p - 3) / 2),
    })
}

fn t_c4(g: &Guards) -> Option<(u8, u64)> {
    if (g.two_p, g.two_q) != (-1, 1) || (g.rp, g.rq) != (-1, 1) || !signed_q_unit_div(g) {
        return None;
    }
    let p = g.p as i64;
    let (da, db) = match g.pat {
        (3, 1) => (g.div(3 * p - 1), g.div(2 * p - 4)),
        (3, -1) | (-3, -1) => (g.div(3 * p + 1), g.div(2 * p + 4)),
        _ => return None,
    };
    Some(match (da || db, g.r == 5) {
        (false, _) => (1, (3 * g.t + g.p) / 2),
        (true, false) => (2, (3 * g.t + g.p - 2) / 2),
        (true, true) => (3, (3 * g.t + g.p - 4) / 2),
    })
}

fn t_c5(g: &Guards) -> Option<(u8, u64)> {
    if (g.rp, g.rq) != (-1, -1) {
        return None;
    }
    let t = g.t as i64;
    // When 2 is a non-residue mod both primes and r divides pq -+ 1, the
    // Gauss-sum product (A0-A1)(B0-B1) is a square root of 1 in GF(r), so
    // one full cell 2 D_i^(T) of the generating polynomial's values
    // vanishes and the closed form is off by (p-1)(q-1)/2: (5,11,7) has
    // LC 90, not 110, and (11,19,13) has 328, not 418. No closed form
    // is published for that situation, so the guard backs off.
    if (g.two_p, g.two_q) == (-1, -1) {
        let star = if g.pat == (3, 3) { t - 1 } else { t + 1 };
        if g.div(star) {
            return None;
        }
    }
    let (da, db) = (g.div(3 * t - 1), g.div(2 * t - 4));
    Some(if da || db {
        (2, 2 * g.t - 1)
    } else {
        (1, 2 * g.t)
    })
}

const THEOREMS: &[(&str, fn(&Guards) -> Option<(u8, u64)>)] = &[
    ("T-A1", t_a1),
    ("T-A2", t_a2),
    ("T-A3", t_a3),
    ("T-B1", t_b1),
    ("T-B2", t_b2),
    ("T-B3", t_b3),
    ("T-B4", t_b4),
    ("T-C1", t_c1),
    ("T-C2", t_c2),
    ("T-C3", t_c3),
    ("T-C4", t_c4),
    ("T-C5", t_c5),
];

/// Evaluates every closed-form guard and reports all matches.
pub fn lc_theorem(sp: &SequenceParams) -> TheoremVerdict {
    let g = Guards::new(sp);
    let matched: Vec<TheoremMatch> = THEOREMS
        .iter()
        .filter_map(|&(id, eval)| {
            eval(&g).map(|(case, predicted)| TheoremMatch {
                id: id.to_string(),
                case,
                predicted,
            })
        })
        .collect();
    let status = match matched.len() {
        0 => VerdictStatus::NoClosedForm,
        1 => VerdictStatus::Unique,
        _ if matched.windows(2).all(|w| w[0].predicted == w[1].predicted) => {
            VerdictStatus::MultipleConsistent
        }
        _ => VerdictStatus::Conflict,
    };
    TheoremVerdict { matched, status }
}

/// Method selection flags for [`lc_all`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Methods {
    pub gcd: bool,
    pub bm: bool,
    pub theorem: bool,
}

impl Methods {
    pub const ALL: Methods = Methods {
        gcd: true,
        bm: true,
        theorem: true,
    };
}

/// Combined report of the requested methods with an agreement flag over
/// whatever values are present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcReport {
    pub params: SequenceParams,
    pub lc_gcd: Option<u64>,
    pub lc_bm: Option<u64>,
    pub theorem: TheoremVerdict,
    pub agreement: bool,
}

impl LcReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub const CSV_HEADER: &'static str = "p,q,r,lc_gcd,lc_bm,lc_theorem,theorem_id,condition";

    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<u64>| v.map_or(String::new(), |x| x.to_string());
        let (tid, case) = self
            .theorem
            .matched
            .first()
            .map_or((String::new(), String::new()), |m| {
                (m.id.clone(), m.case.to_string())
            });
        format!(
            "{},{},{},{},{},{},{},{}",
            self.params.p,
            self.params.q,
            self.params.r,
            opt(self.lc_gcd),
            opt(self.lc_bm),
            opt(self.theorem.predicted()),
            tid,
            case
        )
    }
}

/// Runs the requested methods; gcd and Berlekamp-Massey execute in parallel
/// when both are selected.
pub fn lc_all(sp: &SequenceParams, methods: Methods) -> LcReport {
    let (by_gcd, by_bm) = match (methods.gcd, methods.bm) {
        (true, true) => {
            let (a, b) = rayon::join(|| lc_gcd(sp), || lc_bm_periodic(sp));
            (Some(a), Some(b))
        }
        (true, false) => (Some(lc_gcd(sp)), None),
        (false, true) => (None, Some(lc_bm_periodic(sp))),
        (false, false) => (None, None),
    };
    let theorem = if methods.theorem {
        lc_theorem(sp)
    } else {
        TheoremVerdict {
            matched: Vec::new(),
            status: VerdictStatus::NoClosedForm,
        }
    };
    let mut present: Vec<u64> = [by_gcd, by_bm].into_iter().flatten().collect();
    if methods.theorem {
        if let Some(v) = theorem.predicted() {
            present.push(v);
        }
    }
    let agreement = present.windows(2).all(|w| w[0] == w[1]);
    LcReport {
        params: *sp,
        lc_gcd: by_gcd,
        lc_bm: by_bm,
        theorem,
        agreement,
    }
}

/// Lightweight validity check equivalent to [`validate_params`] succeeding,
/// without the primitive-root search.
pub fn triple_is_valid(p: u64, q: u64, r: u64) -> bool {
    p >= 3
        && q >= 3
        && p != q
        && is_prime(p)
        && is_prime(q)
        && gcd(p - 1, q - 1) == 2
        && r >= 5
        && is_prime(r)
        && r != p
        && r != q
        && 2 * p * q <= crate::modnum::MAX_PERIOD
}

/// All valid triples in the box whose guard `(theorem, case)` fires,
/// ascending lexicographic.
pub fn scan(
    p_range: std::ops::RangeInclusive<u64>,
    q_range: std::ops::RangeInclusive<u64>,
    r_set: &[u64],
    theorem: &str,
    case: u8,
) -> Vec<(u64, u64, u64)> {
    let eval = THEOREMS
        .iter()
        .find(|(id, _)| *id == theorem)
        .map(|&(_, f)| f)
        .unwrap_or_else(|| panic!("unknown theorem id {theorem}"));
    let primes_p: Vec<u64> = p_range.filter(|&p| is_prime(p)).collect();
    let primes_q: Vec<u64> = q_range.filter(|&q| is_prime(q)).collect();
    let mut hits: Vec<(u64, u64, u64)> = primes_p
        .par_iter()
        .flat_map_iter(|&p| {
            let primes_q = &primes_q;
            r_set.iter().flat_map(move |&r| {
                primes_q.iter().filter_map(move |&q| {
                    if !triple_is_valid(p, q, r) {
                        return None;
                    }
                    let sp = validate_params(p, q, r).expect("pre-checked");
                    let g = Guards::new(&sp);
                    match eval(&g) {
                        Some((c, _)) if c == case => Some((p, q, r)),
                        _ => None,
                    }
                })
            })
        })
        .collect();
    hits.sort_unstable();
    hits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bm_degenerate_inputs() {
        assert_eq!(lc_bm(&[1, 1, 1, 1, 1, 1], 5), 1);
        assert_eq!(lc_bm(&[0, 0, 0, 0], 7), 0);
        assert_eq!(lc_bm(&[], 5), 0);
        // 1, 2, 4, 3, 1, 2, ... doubling over GF(5): one-term recurrence
        assert_eq!(lc_bm(&[1, 2, 4, 3, 1, 2, 4, 3], 5), 1);
    }

    /// Brute-force minimal recurrence length by solving the linear systems.
    fn lc_brute(s: &[u32], r: u32) -> u64 {
        let md = Modulus::new(r);
        if s.iter().all(|&v| v == 0) {
            return 0;
        }
        'next_l: for l in 1..=s.len() {
            if l == s.len() {
                return l as u64;
            }
            // solve for c_0..c_{l-1}: s[t+l] = sum c_j s[t+j]
            let rows = s.len() - l;
            let mut aug: Vec<Vec<u32>> = (0..rows)
                .map(|t| {
                    let mut row: Vec<u32> = s[t..t + l].to_vec();
                    row.push(s[t + l]);
                    row
                })
                .collect();
            let mut rank_col = 0usize;
            for col in 0..l {
                let Some(piv) = (rank_col..rows).find(|&i| aug[i][col] != 0) else {
                    continue;
                };
                aug.swap(rank_col, piv);
                let inv = md.inv(aug[rank_col][col]);
                for j in col..=l {
                    aug[rank_col][j] = md.mul(aug[rank_col][j], inv);
                }
                for i in 0..rows {
                    if i != rank_col && aug[i][col] != 0 {
                        let f = aug[i][col];
                        for j in col..=l {
                            let sub = md.mul(f, aug[rank_col][j]);
                            aug[i][j] = md.sub(aug[i][j], sub);
                        }
                    }
                }
                rank_col += 1;
            }
            for row in &aug {
                if row[..l].iter().all(|&v| v == 0) && row[l] != 0 {
                    continue 'next_l;
                }
            }
            return l as u64;
        }
        unreachable!("nonzero sequence always has a recurrence of its length")
    }

    #[test]
    fn bm_equals_brute_force_search() {
        let mut seed = 0xdeadbeefu64;
        let mut rng = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (seed >> 33) as u32
        };
        for r in [5u32, 7] {
            for _ in 0..250 {
                let len = 1 + (rng() as usize % 40);
                let s: Vec<u32> = (0..len).map(|_| rng() % r).collect();
                assert_eq!(lc_bm(&s, r), lc_brute(&s, r), "r={r}, s={s:?}");
            }
        }
    }

    #[test]
    fn small_instance_three_way_agreement() {
        for (p, q, r) in [(3u64, 5, 7), (5, 3, 7), (3, 7, 5), (5, 7, 11), (3, 5, 17)] {
            let sp = validate_params(p, q, r).unwrap();
            let by_gcd = lc_gcd(&sp);
            let by_bm = lc_bm_periodic(&sp);
            assert_eq!(by_gcd, by_bm, "({p},{q},{r})");
            assert!(by_gcd >= 1 && by_gcd <= sp.n);
        }
    }

    #[test]
    fn bm_period_invariance() {
        let sp = validate_params(3, 7, 5).unwrap();
        let seq = generate_sequence(&sp);
        let one: Vec<u32> = seq.values.iter().map(|&v| v as u32).collect();
        let lc2 = lc_bm(&one.repeat(2), 5);
        let lc3 = lc_bm(&one.repeat(3), 5);
        let lc4 = lc_bm(&one.repeat(4), 5);
        assert_eq!(lc2, lc3);
        assert_eq!(lc3, lc4);
    }

    #[test]
    fn dispatcher_known_rows() {
        let cases = [
            (41u64, 79, 5, "T-A1", 1, 4079),
            (79, 239, 5, "T-A1", 2, 37604),
            (59, 43, 5, "T-B4", 3, 5043),
            (3, 5, 17, "T-C5", 1, 30),
        ];
        for (p, q, r, id, case, lc) in cases {
            let sp = validate_params(p, q, r).unwrap();
            let verdict = lc_theorem(&sp);
            assert_eq!(verdict.status, VerdictStatus::Unique, "({p},{q},{r})");
            assert_eq!(verdict.matched[0].id, id);
            assert_eq!(verdict.matched[0].case, case);
            assert_eq!(verdict.matched[0].predicted, lc);
        }
    }

    #[test]
    fn dispatcher_declines_corrected_cases() {
        // the two published guards that fail their own formulas
        for (p, q, r) in [(29u64, 11, 5), (5, 11, 7), (11, 19, 13)] {
            let sp = validate_params(p, q, r).unwrap();
            let verdict = lc_theorem(&sp);
            assert_eq!(
                verdict.status,
                VerdictStatus::NoClosedForm,
                "({p},{q},{r}) must stay uncovered"
            );
        }
    }

    #[test]
    fn report_round_trip() {
        let sp = validate_params(3, 7, 5).unwrap();
        let report = lc_all(&sp, Methods::ALL);
        assert!(report.agreement);
        assert_eq!(report.lc_gcd, report.lc_bm);
        let back: LcReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
        let row = report.to_csv_row();
        assert!(row.starts_with("3,7,5,"));
    }

    #[test]
    fn no_conflicts_across_the_guard_space() {
        let primes: Vec<u64> = (3..=670).filter(|&n| is_prime(n)).collect();
        let rset: Vec<u64> = (5..50).filter(|&n| is_prime(n)).collect();
        for &p in &primes {
            for &q in &primes {
                if p * q > 2000 {
                    continue;
                }
                for &r in &rset {
                    let Ok(sp) = validate_params(p, q, r) else {
                        continue;
                    };
                    let verdict = lc_theorem(&sp);
                    assert_ne!(
                        verdict.status,
                        VerdictStatus::Conflict,
                        "conflicting closed forms at ({p},{q},{r}): {:?}",
                        verdict.matched
                    );
                }
            }
        }
    }

    #[test]
    fn exceptional_constants_rederive_from_divisibility() {
        // Each literal exception set must equal the primes >= 5 dividing the
        // residual of 3pq - 1 or 2pq - 4 under the guard's congruences.
        let detect = |v: i64| -> Vec<u64> {
            crate::modnum::factorize(v.unsigned_abs())
                .into_iter()
                .map(|(f, _)| f)
                .filter(|&f| f >= 5)
                .collect()
        };
        // p = q = -16: residuals 3*256 - 1 and 2*256 - 4
        let mut set33: Vec<u64> = [detect(767), detect(508)].concat();
        set33.sort_unstable();
        assert_eq!(set33, vec![13, 59, 127]);
        // mixed +-16: p q = -256
        let mut set_mixed: Vec<u64> = [detect(3 * -256 - 1), detect(2 * -256 - 4)].concat();
        set_mixed.sort_unstable();
        assert_eq!(set_mixed, vec![43, 769]);
        // p = q = -4: residuals of 3*16 - 1 and 2*16 - 4
        let mut set44: Vec<u64> = [detect(47), detect(28)].concat();
        set44.sort_unstable();
        assert_eq!(set44, vec![7, 47]);
        // mixed +-4: p q = -16
        assert_eq!(detect(3 * -16 - 1), vec![7]);
        assert_eq!(detect(2 * -16 - 4), Vec::<u64>::new());
        // 2 in D1 x D0 families: (p,q) = (-4, 1) and (-4, -1)
        assert_eq!(detect(3 * -4 - 1), vec![13]);
        assert_eq!(detect(3 * 4 - 1), vec![11]);
        // (p,q) = (-16, 1) and (-16, -1)
        assert_eq!(detect(3 * -16 - 1), vec![7]);
        assert_eq!(detect(2 * -16 - 4), Vec::<u64>::new());
        assert_eq!(detect(3 * 16 - 1), vec![47]);
        assert_eq!(detect(2 * 16 - 4), vec![7]);
    }

    #[test]
    fn variant_formulas_step_down_by_the_documented_offsets() {
        // within each family the exceptional variants are the base formula
        // minus the number of extra vanishing points
        let (t, p, q) = (35u64, 5u64, 7u64);
        assert_eq!((3 * t + q) / 2 - 1, (3 * t + q - 2) / 2);
        assert_eq!((3 * t + q) / 2 - 2, (3 * t + q - 4) / 2);
        assert_eq!((4 * t + p - 1) / 2 - 1, (4 * t + p - 3) / 2);
        assert_eq!((4 * t + p - 1) / 2 - 2, (4 * t + p - 5) / 2);
        assert_eq!((7 * t + p + q - 1) / 4 - 1, (7 * t + p + q - 5) / 4);
        assert_eq!((5 * t + 3 * p + q - 1) / 4 - 1, (5 * t + 3 * p + q - 5) / 4);
        assert_eq!((3 * t + 1) / 2 - 1, (3 * t - 1) / 2);
        assert_eq!((4 * t - p + 1) / 2 - 1, (4 * t - p - 1) / 2);
        assert_eq!((4 * t - p + 1) / 2 - 2, (4 * t - p - 3) / 2);
        assert_eq!((3 * t + p) / 2 - 1, (3 * t + p - 2) / 2);
        assert_eq!((3 * t + p) / 2 - 2, (3 * t + p - 4) / 2);
    }

    #[test]
    fn scan_self_verifies() {
        let hits = scan(3..=60, 3..=60, &[5, 7, 11, 13], "T-C5", 1);
        assert!(!hits.is_empty());
        assert!(hits.windows(2).all(|w| w[0] < w[1]));
        for &(p, q, r) in &hits {
            let sp = validate_params(p, q, r).unwrap();
            let verdict = lc_theorem(&sp);
            assert_eq!(verdict.predicted(), Some(2 * p * q), "({p},{q},{r})");
        }
        assert!(scan(3..=3, 5..=4, &[7], "T-A1", 1).is_empty());
    }
}
