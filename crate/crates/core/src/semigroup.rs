//! Canonical finite encoding of a numerical semigroup.
//!
//! A semigroup `S` is stored as its membership bitmap over the window
//! `[0, c + m)`. Every integer at or above `c` is a member, and all primitive
//! and Apéry structure lives inside the window, so nothing past it is kept.
//!
//! For `S = ℕ` the conventions are `m = 1`, `c = 0`, `q = ρ = 0`.

use std::fmt;
use std::str::FromStr;

use crate::bitmap::Bitmap;
use crate::error::SemigroupError;

/// Exclusive upper bound on `c + m` for any constructed semigroup.
pub const ELEMENT_BOUND: u64 = 1 << 31;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumericalSemigroup {
    small_elements: Bitmap,
    conductor: u32,
    multiplicity: u32,
    genus: u32,
}

/// Depth `q = ⌈c/m⌉` and offset `ρ = qm − c`, so that `c = qm − ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DepthOffset {
    pub depth: u32,
    pub offset: u32,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_generators(gens: &[u32]) -> Result<Vec<u32>, SemigroupError> {
    if gens.is_empty() {
        return Err(SemigroupError::EmptyGenerators);
    }
    if gens.contains(&0) {
        return Err(SemigroupError::ZeroGenerator);
    }
    if gens.iter().any(|&a| u64::from(a) >= ELEMENT_BOUND) {
        return Err(SemigroupError::ElementBound);
    }
    let mut gens = gens.to_vec();
    gens.sort_unstable();
    gens.dedup();
    Ok(gens)
}

impl NumericalSemigroup {
    /// The semigroup ℕ itself.
    pub fn naturals() -> Self {
        NumericalSemigroup {
            small_elements: Bitmap::ones(1),
            conductor: 0,
            multiplicity: 1,
            genus: 0,
        }
    }

    /// Additive closure of `{0} ∪ gens`. Non-minimal and repeated generators
    /// are accepted.
    pub fn from_generators(gens: &[u32]) -> Result<Self, SemigroupError> {
        let gens = check_generators(gens)?;
        let g = gens.iter().fold(0, |acc, &a| gcd(acc, a));
        if g != 1 {
            return Err(SemigroupError::NotCofinite { gcd: g });
        }
        let smallest = gens[0] as usize;
        // Grow the closure until `smallest` consecutive members appear; from
        // there on every integer is a member.
        let mut member = vec![true];
        let mut run = 0usize;
        let mut x = 0usize;
        while run < smallest {
            x += 1;
            if x as u64 >= ELEMENT_BOUND {
                return Err(SemigroupError::ElementBound);
            }
            let is_member = gens
                .iter()
                .take_while(|&&a| a as usize <= x)
                .any(|&a| member[x - a as usize]);
            member.push(is_member);
            run = if is_member { run + 1 } else { 0 };
        }
        Self::from_prefix(&member)
    }

    /// `⟨gens⟩ ∪ [tail_start, ∞)`. The conductor is recomputed and may be
    /// smaller than `tail_start`.
    pub fn from_generators_with_tail(
        gens: &[u32],
        tail_start: u32,
    ) -> Result<Self, SemigroupError> {
        let gens = check_generators(gens)?;
        if tail_start == 0 {
            return Err(SemigroupError::InvalidTail);
        }
        if u64::from(tail_start) >= ELEMENT_BOUND {
            return Err(SemigroupError::ElementBound);
        }
        let n = tail_start as usize;
        let mut member = vec![false; n];
        member[0] = true;
        for x in 1..n {
            member[x] = gens
                .iter()
                .take_while(|&&a| a as usize <= x)
                .any(|&a| member[x - a as usize]);
        }
        Self::from_prefix(&member)
    }

    /// `ℕ \ gaps`, provided that complement is additively closed.
    pub fn from_gaps(gaps: &[u32]) -> Result<Self, SemigroupError> {
        if gaps.contains(&0) {
            return Err(SemigroupError::ZeroGap);
        }
        let Some(&max) = gaps.iter().max() else {
            return Ok(Self::naturals());
        };
        if u64::from(max) + 1 >= ELEMENT_BOUND {
            return Err(SemigroupError::ElementBound);
        }
        let n = max as usize + 1;
        let mut member = vec![true; n];
        for &z in gaps {
            member[z as usize] = false;
        }
        for z in 1..n {
            if member[z] {
                continue;
            }
            if let Some(x) = (1..=z / 2).find(|&x| member[x] && member[z - x]) {
                return Err(SemigroupError::NotClosed {
                    x: x as u32,
                    y: (z - x) as u32,
                });
            }
        }
        Self::from_prefix(&member)
    }

    /// Builds the canonical window from a membership prefix `[0, n)`; every
    /// integer at or above `n` is taken to be a member. The prefix must be
    /// additively closed.
    fn from_prefix(member: &[bool]) -> Result<Self, SemigroupError> {
        let n = member.len();
        let conductor = member.iter().rposition(|&b| !b).map_or(0, |i| i + 1);
        let multiplicity = if conductor == 0 {
            1
        } else {
            member
                .iter()
                .skip(1)
                .position(|&b| b)
                .map_or(n.max(1), |i| i + 1)
        };
        let window = conductor + multiplicity;
        if window as u64 >= ELEMENT_BOUND {
            return Err(SemigroupError::ElementBound);
        }
        let mut bits = Bitmap::ones(window);
        for (i, &b) in member.iter().enumerate().take(window) {
            if !b {
                bits.clear(i);
            }
        }
        let genus = conductor - bits.count_range(0, conductor);
        Ok(NumericalSemigroup {
            small_elements: bits,
            conductor: conductor as u32,
            multiplicity: multiplicity as u32,
            genus: genus as u32,
        })
    }

    /// Trusted constructor for tree expansion; the caller guarantees the
    /// canonical-window invariants.
    pub(crate) fn from_window_unchecked(
        bits: Bitmap,
        conductor: u32,
        multiplicity: u32,
        genus: u32,
    ) -> Self {
        debug_assert_eq!(bits.len(), (conductor + multiplicity) as usize);
        debug_assert!(conductor == 0 || !bits.get(conductor as usize - 1));
        NumericalSemigroup {
            small_elements: bits,
            conductor,
            multiplicity,
            genus,
        }
    }

    #[inline]
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    #[inline]
    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    #[inline]
    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Frobenius number `c − 1`; −1 for ℕ.
    #[inline]
    pub fn frobenius(&self) -> i64 {
        i64::from(self.conductor) - 1
    }

    pub fn is_naturals(&self) -> bool {
        self.conductor == 0
    }

    /// Membership bitmap over `[0, c + m)`.
    #[inline]
    pub fn window(&self) -> &Bitmap {
        &self.small_elements
    }

    #[inline]
    pub fn window_len(&self) -> usize {
        self.small_elements.len()
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        x >= u64::from(self.conductor) || self.small_elements.get(x as usize)
    }

    pub fn depth_offset(&self) -> DepthOffset {
        if self.conductor == 0 {
            return DepthOffset {
                depth: 0,
                offset: 0,
            };
        }
        let depth = self.conductor.div_ceil(self.multiplicity);
        DepthOffset {
            depth,
            offset: depth * self.multiplicity - self.conductor,
        }
    }

    /// `L = S ∩ [0, c)`.
    pub fn left_part(&self) -> Vec<u32> {
        self.small_elements
            .iter_ones()
            .take_while(|&x| x < self.conductor as usize)
            .map(|x| x as u32)
            .collect()
    }

    pub fn left_count(&self) -> u32 {
        self.conductor - self.genus
    }

    /// `[0, c) \ L`, ascending.
    pub fn gaps(&self) -> Vec<u32> {
        (1..self.conductor)
            .filter(|&x| !self.small_elements.get(x as usize))
            .collect()
    }

    /// Membership of `S*` over `[0, max(c + m, 2))`. The window is widened
    /// for ℕ so that its primitive 1 is visible.
    pub(crate) fn nonzero_members(&self) -> Bitmap {
        let mut bits = self.small_elements.clone();
        if bits.len() < 2 {
            bits.resize(2, true);
        }
        bits.clear(0);
        bits
    }

    /// `D = S* + S*` restricted to `[0, max(c + m, 2))`.
    pub(crate) fn decomposable_window(&self) -> Bitmap {
        let nz = self.nonzero_members();
        let len = nz.len();
        let mut d = Bitmap::zeros(len);
        for a in nz.iter_ones() {
            if 2 * a >= len {
                break;
            }
            d.or_shifted(&nz, a);
        }
        d
    }

    /// Minimal generating set `P`, ascending; all of it lies in `[m, c + m)`.
    pub fn primitives(&self) -> Vec<u32> {
        let mut p = self.nonzero_members();
        p.and_not_assign(&self.decomposable_window());
        p.iter_ones().map(|x| x as u32).collect()
    }

    pub fn embedding_dimension(&self) -> u32 {
        let mut p = self.nonzero_members();
        p.and_not_assign(&self.decomposable_window());
        p.count_ones() as u32
    }

    /// `D ∩ [lo, hi)`, ascending. Past the window every element of `S*` is
    /// decomposable, except 1 in ℕ.
    pub fn decomposables_in(&self, lo: u32, hi: u32) -> Vec<u32> {
        let d = self.decomposable_window();
        (lo..hi)
            .filter(|&x| {
                if (x as usize) < d.len() {
                    d.get(x as usize)
                } else {
                    x >= 2
                }
            })
            .collect()
    }

    /// `gaps=g1,g2,...`
    pub fn to_gaps_notation(&self) -> String {
        format!("gaps={}", join(&self.gaps()))
    }

    /// `gens=p1,...,pe` over the minimal generating set.
    pub fn to_gens_notation(&self) -> String {
        format!("gens={}", join(&self.primitives()))
    }
}

pub(crate) fn join(xs: &[u32]) -> String {
    let mut out = String::new();
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&x.to_string());
    }
    out
}

fn parse_list(field: &str, text: &str) -> Result<Vec<u32>, SemigroupError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| SemigroupError::Notation(format!("bad integer {t:?} in {field}")))
        })
        .collect()
}

impl FromStr for NumericalSemigroup {
    type Err = SemigroupError;

    /// Accepts `gens=a,b,c`, `gens=a,b,c;tail=t` or `gaps=g1,g2,...`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix("gaps=") {
            let gaps = parse_list("gaps", rest)?;
            if gaps.windows(2).any(|w| w[0] >= w[1]) {
                return Err(SemigroupError::Notation(
                    "gaps must be strictly ascending".into(),
                ));
            }
            return Self::from_gaps(&gaps);
        }
        if let Some(rest) = s.strip_prefix("gens=") {
            return match rest.split_once(";tail=") {
                Some((gens, tail)) => {
                    let gens = parse_list("gens", gens)?;
                    let tail = tail
                        .parse::<u32>()
                        .map_err(|_| SemigroupError::Notation(format!("bad tail {tail:?}")))?;
                    Self::from_generators_with_tail(&gens, tail)
                }
                None => Self::from_generators(&parse_list("gens", rest)?),
            };
        }
        Err(SemigroupError::Notation(format!(
            "expected `gens=...`, `gens=...;tail=t` or `gaps=...`, got {s:?}"
        )))
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_gens_notation())
    }
}

impl fmt::Debug for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "NumericalSemigroup({}, m={}, c={}, g={})",
            self.to_gens_notation(),
            self.multiplicity,
            self.conductor,
            self.genus
        )
    }
}
