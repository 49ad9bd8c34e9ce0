//! Generalized cyclotomic quaternary sequences of period `2pq` and their
//! linear complexity over `GF(r)`.
//!
//! The crate builds the order-two generalized cyclotomic classes modulo
//! `p`, `q`, `2p`, `2q`, `pq` and `2pq` for distinct odd primes with
//! `gcd(p-1, q-1) = 2`, generates the quaternary sequence they induce, and
//! determines its linear complexity over a prime field `GF(r)` by three
//! mutually checking routes:
//!
//! * [`lincomp::lc_gcd`] — degree counting through
//!   `gcd(x^N - 1, G_s(x))` in `GF(r)[x]`,
//! * [`lincomp::lc_bm`] — Berlekamp–Massey synthesis of the shortest LFSR,
//! * [`lincomp::lc_theorem`] — a closed-form dispatcher over the
//!   quadratic-character case analysis.
//!
//! [`extfield`] adds `GF(r^m)` arithmetic and a per-class census of the
//! zeros of the generating polynomial at the `2pq`-th roots of unity,
//! which cross-checks the gcd route cell by cell.

pub mod cyclotomy;
pub mod extfield;
pub mod lincomp;
pub mod modnum;
pub mod polyring;

pub use cyclotomy::{QuaternarySequence, ResidueClass};
pub use extfield::{CensusReport, ExtElem, ExtFieldCtx};
pub use lincomp::{LcReport, TheoremVerdict};
pub use modnum::SequenceParams;
pub use polyring::FieldPoly;
