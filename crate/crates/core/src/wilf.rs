//! `W(S) = e|L| − c`, its lower bound `W₀(S) = |P∩L||L| − q|D_q| + ρ`, and the
//! sufficient conditions for `W₀ >= 0`.
//!
//! Every value here comes from direct scans of the semigroup. The profile
//! formulas are evaluated as well and must agree; a mismatch is a bug.

use std::fmt;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apery::{CompressedElement, Profile, Structure};
use crate::semigroup::NumericalSemigroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    /// `q <= 3`.
    DepthLE3,
    /// `q >= 4` and `α_i = 0` for `1 <= i <= ⌈q/2⌉ − 1`.
    HalfProfileEmpty,
    /// `q >= 4` and `|P∩L| >= max(α″_q, q)`.
    PLeftDominates,
    /// `|L| <= 12`.
    LeftLE12,
    /// `q >= 8` and `|L| <= 12`.
    DepthGE8Left12,
}

impl Flag {
    pub const ALL: [Flag; 5] = [
        Flag::DepthLE3,
        Flag::HalfProfileEmpty,
        Flag::PLeftDominates,
        Flag::LeftLE12,
        Flag::DepthGE8Left12,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flag::DepthLE3 => "DepthLE3",
            Flag::HalfProfileEmpty => "HalfProfileEmpty",
            Flag::PLeftDominates => "PLeftDominates",
            Flag::LeftLE12 => "LeftLE12",
            Flag::DepthGE8Left12 => "DepthGE8Left12",
        }
    }

    pub fn from_name(name: &str) -> Option<Flag> {
        Flag::ALL.into_iter().find(|f| f.name() == name)
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct FlagSet(u8);

impl FlagSet {
    pub fn contains(self, flag: Flag) -> bool {
        self.0 & flag.bit() != 0
    }

    pub fn insert(&mut self, flag: Flag) {
        self.0 |= flag.bit();
    }

    pub fn iter(self) -> impl Iterator<Item = Flag> {
        Flag::ALL.into_iter().filter(move |f| self.contains(*f))
    }
}

impl FromIterator<Flag> for FlagSet {
    fn from_iter<I: IntoIterator<Item = Flag>>(iter: I) -> Self {
        let mut set = FlagSet::default();
        for f in iter {
            set.insert(f);
        }
        set
    }
}

impl fmt::Display for FlagSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.iter().map(Flag::name).collect();
        f.write_str(&names.join(","))
    }
}

impl Serialize for FlagSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(None)?;
        for flag in self.iter() {
            seq.serialize_element(flag.name())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for FlagSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct FlagsVisitor;
        impl<'de> Visitor<'de> for FlagsVisitor {
            type Value = FlagSet;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of flag names")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<FlagSet, A::Error> {
                let mut set = FlagSet::default();
                while let Some(name) = seq.next_element::<String>()? {
                    let flag = Flag::from_name(&name)
                        .ok_or_else(|| de::Error::custom(format!("unknown flag {name:?}")))?;
                    set.insert(flag);
                }
                Ok(set)
            }
        }
        deserializer.deserialize_seq(FlagsVisitor)
    }
}

/// All scalar invariants of one semigroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WilfReport {
    pub m: u32,
    pub c: u32,
    pub q: u32,
    pub rho: u32,
    pub g: u32,
    pub e: u32,
    #[serde(rename = "L")]
    pub left_count: u32,
    #[serde(rename = "PL")]
    pub p_left_count: u32,
    #[serde(rename = "Dq")]
    pub dq_count: u32,
    #[serde(rename = "W")]
    pub w: i64,
    #[serde(rename = "W0")]
    pub w0: i64,
    #[serde(rename = "Csize")]
    pub c_size: u32,
    pub profile: Profile,
    pub flags: FlagSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WilfError {
    #[error("internal inconsistency in {field}: direct scan gives {direct}, profile formula gives {formula}")]
    InternalInconsistency {
        field: &'static str,
        direct: u32,
        formula: u32,
    },
}

/// Everything computed for one semigroup: the window bitmaps, the per-level
/// Apéry counts and the report built from them.
pub(crate) struct Evaluation {
    pub structure: Structure,
    pub alpha: Vec<u32>,
    pub alpha_prime: Vec<u32>,
    pub alpha_second: Vec<u32>,
    pub compressed: Vec<CompressedElement>,
    /// `|P_q| = |P ∩ [c, c + m)|`.
    pub p_q_count: u32,
    pub report: WilfReport,
}

fn w0_value(p_left: u32, left: u32, q: u32, dq: u32, rho: u32) -> i64 {
    i64::from(p_left) * i64::from(left) - i64::from(q) * i64::from(dq) + i64::from(rho)
}

fn flags_for(q: u32, left: u32, p_left: u32, alpha: &[u32], alpha_second_q: u32) -> FlagSet {
    let mut flags = FlagSet::default();
    if q <= 3 {
        flags.insert(Flag::DepthLE3);
    }
    if q >= 4 {
        let h = q.div_ceil(2) as usize;
        if alpha[1..h].iter().all(|&a| a == 0) {
            flags.insert(Flag::HalfProfileEmpty);
        }
        if p_left >= alpha_second_q.max(q) {
            flags.insert(Flag::PLeftDominates);
        }
    }
    if left <= 12 {
        flags.insert(Flag::LeftLE12);
        if q >= 8 {
            flags.insert(Flag::DepthGE8Left12);
        }
    }
    flags
}

fn check(field: &'static str, direct: u32, formula: u32) -> Result<(), WilfError> {
    if direct == formula {
        Ok(())
    } else {
        Err(WilfError::InternalInconsistency {
            field,
            direct,
            formula,
        })
    }
}

impl Evaluation {
    pub fn new(s: &NumericalSemigroup) -> Result<Self, WilfError> {
        let st = Structure::new(s);
        let (c, m, q, rho) = (st.c, st.m, st.q, st.rho);
        let (alpha, alpha_prime, alpha_second) = st.level_counts();
        let compressed = st.compressed();

        let left = s.left_count();
        let e = st.primitive.count_ones() as u32;
        let p_left = st.primitive.count_range(0, c as usize) as u32;
        let window = (c + m) as usize;
        let dq = st.decomposable.count_range(c as usize, window) as u32;
        let p_q_count = st.primitive.count_range(c as usize, window) as u32;

        if q >= 2 {
            let qu = q as usize;
            let left_f: u32 = (0..qu).map(|i| (q - i as u32) * alpha[i]).sum();
            let dq_f = alpha[..qu].iter().sum::<u32>() + alpha_second[qu];
            let p_left_f = 1 + alpha_prime[1..qu].iter().sum::<u32>();
            check("L", left, left_f)?;
            check("Dq", dq, dq_f)?;
            check("PL", p_left, p_left_f)?;
        }

        let profile = Profile(if q <= 1 {
            Vec::new()
        } else {
            alpha[1..q as usize].to_vec()
        });
        let alpha_second_q = alpha_second.get(q as usize).copied().unwrap_or(0);
        let report = WilfReport {
            m,
            c,
            q,
            rho,
            g: s.genus(),
            e,
            left_count: left,
            p_left_count: p_left,
            dq_count: dq,
            w: i64::from(e) * i64::from(left) - i64::from(c),
            w0: w0_value(p_left, left, q, dq, rho),
            c_size: compressed.len() as u32,
            profile,
            flags: flags_for(q, left, p_left, &alpha, alpha_second_q),
        };
        Ok(Evaluation {
            structure: st,
            alpha,
            alpha_prime,
            alpha_second,
            compressed,
            p_q_count,
            report,
        })
    }
}

/// `W(S) = e|L| − c`.
pub fn w_number(s: &NumericalSemigroup) -> i64 {
    i64::from(s.embedding_dimension()) * i64::from(s.left_count()) - i64::from(s.conductor())
}

/// `W₀(S) = |P∩L||L| − q|D_q| + ρ`, from direct scans (also for `q <= 1`).
pub fn w0_number(s: &NumericalSemigroup) -> i64 {
    let st = Structure::new(s);
    let window = (st.c + st.m) as usize;
    let p_left = st.primitive.count_range(0, st.c as usize) as u32;
    let dq = st.decomposable.count_range(st.c as usize, window) as u32;
    w0_value(p_left, s.left_count(), st.q, dq, st.rho)
}

pub fn sufficient_flags(s: &NumericalSemigroup) -> FlagSet {
    let st = Structure::new(s);
    let (alpha, _, alpha_second) = st.level_counts();
    let p_left = st.primitive.count_range(0, st.c as usize) as u32;
    let a2q = alpha_second.get(st.q as usize).copied().unwrap_or(0);
    flags_for(st.q, s.left_count(), p_left, &alpha, a2q)
}

pub fn report(s: &NumericalSemigroup) -> Result<WilfReport, WilfError> {
    Evaluation::new(s).map(|e| e.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tail(g: &[u32], t: u32) -> NumericalSemigroup {
        NumericalSemigroup::from_generators_with_tail(g, t).unwrap()
    }

    fn gens(g: &[u32]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(g).unwrap()
    }

    #[test]
    fn w_numbers() {
        assert_eq!(w_number(&gens(&[1])), 0);
        assert_eq!(w_number(&gens(&[2, 3])), 0);
        assert_eq!(w_number(&tail(&[14, 22, 23], 56)), 35);
        assert_eq!(w0_number(&tail(&[14, 22, 23], 56)), -1);
        assert_eq!(w0_number(&gens(&[3, 5, 7])), 1);
        assert_eq!(w0_number(&gens(&[1])), 0);
    }

    #[test]
    fn flags() {
        let f = sufficient_flags(&tail(&[7, 11], 25));
        assert!(f.contains(Flag::HalfProfileEmpty));
        assert!(f.contains(Flag::LeftLE12));
        assert!(!f.contains(Flag::DepthLE3));

        let f = sufficient_flags(&tail(&[14, 22, 23], 56));
        assert!(!f.contains(Flag::LeftLE12));
        assert!(!f.contains(Flag::DepthLE3));

        assert!(sufficient_flags(&gens(&[2, 3])).contains(Flag::DepthLE3));
    }

    #[test]
    fn report_of_exception() {
        let r = report(&tail(&[14, 22, 23], 56)).unwrap();
        let got = (
            r.m,
            r.c,
            r.q,
            r.rho,
            r.g,
            r.e,
            r.left_count,
            r.p_left_count,
            r.dq_count,
            r.w,
            r.w0,
            r.c_size,
        );
        assert_eq!(got, (14, 56, 4, 0, 43, 7, 13, 3, 10, 35, -1, 0));
        assert_eq!(r.profile, Profile(vec![2, 0, 3]));
    }

    #[test]
    fn report_with_compression() {
        let r = report(&tail(&[7, 11], 25)).unwrap();
        let got = (
            r.m,
            r.c,
            r.q,
            r.rho,
            r.g,
            r.e,
            r.left_count,
            r.p_left_count,
            r.dq_count,
            r.w,
            r.w0,
            r.c_size,
        );
        assert_eq!(got, (7, 25, 4, 3, 18, 6, 7, 2, 3, 17, 5, 1));
    }

    #[test]
    fn report_of_naturals() {
        let r = report(&gens(&[1])).unwrap();
        let got = (
            r.m,
            r.c,
            r.q,
            r.rho,
            r.g,
            r.e,
            r.left_count,
            r.p_left_count,
            r.dq_count,
            r.w,
            r.w0,
            r.c_size,
        );
        assert_eq!(got, (1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0));
        assert!(r.profile.entries().is_empty());
    }

    #[test]
    fn flags_serialize_as_names() {
        let flags: FlagSet = [Flag::LeftLE12, Flag::DepthLE3].into_iter().collect();
        let json = serde_json::to_string(&flags).unwrap();
        assert_eq!(json, r#"["DepthLE3","LeftLE12"]"#);
        assert_eq!(serde_json::from_str::<FlagSet>(&json).unwrap(), flags);
        assert!(serde_json::from_str::<FlagSet>(r#"["Nope"]"#).is_err());
    }
}
