//! Apéry set with respect to the multiplicity, its level partition, and the
//! profile-based counting formulas.
//!
//! Levels: with depth `q` and offset `ρ`, the interval `I_j = [jm − ρ, (j+1)m − ρ)`
//! holds the elements of level `j`, so `λ(x) = ⌊(x + ρ) / m⌋`. The window
//! `[0, c + m)` is exactly `I_0 ∪ … ∪ I_q` (clipped at 0), and the level
//! function is only evaluated there.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitmap::Bitmap;
use crate::error::SemigroupError;
use crate::semigroup::NumericalSemigroup;

/// Bitmaps of `S*`, `D`, `P` and `A` over the window, plus `q` and `ρ`.
/// Computed once per semigroup and shared by the report and the law suite.
pub(crate) struct Structure {
    pub m: u32,
    pub c: u32,
    pub q: u32,
    pub rho: u32,
    pub nonzero: Bitmap,
    pub decomposable: Bitmap,
    pub primitive: Bitmap,
    pub apery: Bitmap,
}

impl Structure {
    pub fn new(s: &NumericalSemigroup) -> Self {
        let nonzero = s.nonzero_members();
        let decomposable = s.decomposable_window();
        let mut primitive = nonzero.clone();
        primitive.and_not_assign(&decomposable);

        let m = s.multiplicity() as usize;
        let mut members = nonzero.clone();
        members.set(0);
        let mut apery = members.clone();
        apery.and_not_assign(&Bitmap::shifted(&members, m, members.len()));

        let d = s.depth_offset();
        Structure {
            m: s.multiplicity(),
            c: s.conductor(),
            q: d.depth,
            rho: d.offset,
            nonzero,
            decomposable,
            primitive,
            apery,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nonzero.len()
    }

    #[inline]
    pub fn level(&self, x: usize) -> u32 {
        ((x + self.rho as usize) / self.m as usize) as u32
    }

    /// `I_j ∩ [0, window)` as a half-open index range.
    pub fn level_range(&self, j: u32) -> (usize, usize) {
        let lo = (j as i64 * self.m as i64 - self.rho as i64).max(0) as usize;
        let hi = ((j as i64 + 1) * self.m as i64 - self.rho as i64).max(0) as usize;
        (lo.min(self.len()), hi.min(self.len()))
    }

    /// Start of level `j`, i.e. the smallest integer of level `>= j`.
    #[inline]
    pub fn level_start(&self, j: u32) -> usize {
        (j as i64 * self.m as i64 - self.rho as i64).max(0) as usize
    }

    pub fn is_member(&self, x: usize) -> bool {
        x == 0 || self.nonzero.get(x)
    }

    /// `(α_j, α′_j, α″_j)` for `j = 0..=q`.
    pub fn level_counts(&self) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
        let mut ap = self.apery.clone();
        ap.and_assign(&self.primitive);
        let mut ad = self.apery.clone();
        ad.and_assign(&self.decomposable);
        let n = self.q as usize + 1;
        let (mut alpha, mut alpha_p, mut alpha_d) = (vec![0; n], vec![0; n], vec![0; n]);
        for j in 0..=self.q {
            let (lo, hi) = self.level_range(j);
            alpha[j as usize] = self.apery.count_range(lo, hi) as u32;
            alpha_p[j as usize] = ap.count_range(lo, hi) as u32;
            alpha_d[j as usize] = ad.count_range(lo, hi) as u32;
        }
        (alpha, alpha_p, alpha_d)
    }

    /// `A_j` for `j = 0..=q`.
    pub fn apery_levels(&self) -> Vec<Bitmap> {
        (0..=self.q)
            .map(|j| {
                let (lo, hi) = self.level_range(j);
                let mut b = Bitmap::range(self.len(), lo, hi);
                b.and_assign(&self.apery);
                b
            })
            .collect()
    }

    /// Compressed Apéry elements with their first witness pair, by the pair
    /// scan over `A* × A*` (one shifted bitmap per summand and level).
    pub fn compressed(&self) -> Vec<CompressedElement> {
        if self.c == 0 {
            return Vec::new();
        }
        let len = self.len();
        let mut target = self.apery.clone();
        target.and_assign(&self.decomposable);
        if !target.any() {
            return Vec::new();
        }
        let levels = self.apery_levels();
        let mut found = Bitmap::zeros(len);
        let mut out = Vec::new();
        for x in self.apery.iter_ones().skip(1) {
            let i = self.level(x);
            for (j, level) in levels.iter().enumerate().skip(1) {
                let Some(first) = level.next_one(0) else {
                    continue;
                };
                if x + first >= len {
                    continue;
                }
                // z has level < i + j exactly when z < (i + j)m − ρ.
                let limit = self.level_start(i + j as u32);
                let mut t = Bitmap::shifted(level, x, len);
                t.and_assign(&target);
                t.and_not_assign(&found);
                for z in t.iter_ones().take_while(|&z| z < limit) {
                    found.set(z);
                    out.push(CompressedElement {
                        value: z as u32,
                        witness: (x as u32, (z - x) as u32),
                    });
                }
            }
        }
        out.sort_unstable_by_key(|e| e.value);
        out
    }
}

/// A compressed Apéry element `z = x + y` with `λ(z) < λ(x) + λ(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressedElement {
    pub value: u32,
    pub witness: (u32, u32),
}

/// The Apéry profile `(α_1, …, α_{q−1})`; empty when `q <= 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile(pub Vec<u32>);

impl Profile {
    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `α_i` for `1 <= i <= q − 1`, otherwise `None`.
    pub fn get(&self, i: usize) -> Option<u32> {
        i.checked_sub(1).and_then(|k| self.0.get(k).copied())
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// `S_j`, `P_j`, `D_j` for one level `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSlice {
    pub level: u32,
    pub members: Vec<u32>,
    pub primitives: Vec<u32>,
    pub decomposables: Vec<u32>,
}

/// Apéry set `A = S \ (m + S)` and everything derived from its levels.
///
/// `alpha_prime` and `alpha_second` are indexed by level like `alpha`; their
/// entry 0 is always 0 since `A_0 = {0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperyAnalysis {
    pub multiplicity: u32,
    pub depth: u32,
    pub offset: u32,
    pub apery_set: Vec<u32>,
    pub levels: Vec<Vec<u32>>,
    pub alpha: Vec<u32>,
    pub alpha_prime: Vec<u32>,
    pub alpha_second: Vec<u32>,
    pub compressed: Vec<CompressedElement>,
}

fn ones_u32(b: &Bitmap) -> Vec<u32> {
    b.iter_ones().map(|x| x as u32).collect()
}

impl AperyAnalysis {
    pub fn new(s: &NumericalSemigroup) -> Result<Self, SemigroupError> {
        if s.is_naturals() {
            return Err(SemigroupError::UndefinedForN);
        }
        Ok(Self::from_structure(&Structure::new(s)))
    }

    pub(crate) fn from_structure(st: &Structure) -> Self {
        let (alpha, alpha_prime, alpha_second) = st.level_counts();
        AperyAnalysis {
            multiplicity: st.m,
            depth: st.q,
            offset: st.rho,
            apery_set: ones_u32(&st.apery),
            levels: st.apery_levels().iter().map(ones_u32).collect(),
            alpha,
            alpha_prime,
            alpha_second,
            compressed: st.compressed(),
        }
    }

    pub fn profile(&self) -> Profile {
        let q = self.depth as usize;
        Profile(if q <= 1 {
            Vec::new()
        } else {
            self.alpha[1..q].to_vec()
        })
    }

    pub fn compressed_values(&self) -> Vec<u32> {
        self.compressed.iter().map(|e| e.value).collect()
    }

    fn require_formula_domain(&self) -> Result<usize, SemigroupError> {
        if self.depth < 2 {
            return Err(SemigroupError::FormulaDomain { q: self.depth });
        }
        Ok(self.depth as usize)
    }

    /// `|L| = Σ_{i<q} (q − i) α_i`.
    pub fn left_count_from_profile(&self) -> Result<u32, SemigroupError> {
        let q = self.require_formula_domain()?;
        Ok((0..q).map(|i| (q - i) as u32 * self.alpha[i]).sum())
    }

    /// `|D_q| = Σ_{i<q} α_i + α″_q`.
    pub fn dq_count_from_profile(&self) -> Result<u32, SemigroupError> {
        let q = self.require_formula_domain()?;
        Ok(self.alpha[..q].iter().sum::<u32>() + self.alpha_second[q])
    }

    /// `|P ∩ L| = 1 + Σ_{1<=i<q} α′_i`.
    pub fn p_left_count_from_profile(&self) -> Result<u32, SemigroupError> {
        let q = self.require_formula_domain()?;
        Ok(1 + self.alpha_prime[1..q].iter().sum::<u32>())
    }
}

pub fn apery_set(s: &NumericalSemigroup) -> Vec<u32> {
    ones_u32(&Structure::new(s).apery)
}

/// Level of `x`; defined for `x` in the window `[0, c + m)` of a semigroup
/// other than ℕ.
pub fn level(s: &NumericalSemigroup, x: u32) -> Result<u32, SemigroupError> {
    if s.is_naturals() {
        return Err(SemigroupError::UndefinedForN);
    }
    if x as usize >= s.window_len() {
        return Err(SemigroupError::OutsideWindow { x });
    }
    let d = s.depth_offset();
    Ok((x + d.offset) / s.multiplicity())
}

pub fn apery_analysis(s: &NumericalSemigroup) -> Result<AperyAnalysis, SemigroupError> {
    AperyAnalysis::new(s)
}

pub fn profile(s: &NumericalSemigroup) -> Result<Profile, SemigroupError> {
    Ok(AperyAnalysis::new(s)?.profile())
}

pub fn compressed_set(s: &NumericalSemigroup) -> Result<Vec<CompressedElement>, SemigroupError> {
    if s.is_naturals() {
        return Err(SemigroupError::UndefinedForN);
    }
    Ok(Structure::new(s).compressed())
}

pub fn left_count_from_profile(s: &NumericalSemigroup) -> Result<u32, SemigroupError> {
    formula_input(s)?.left_count_from_profile()
}

pub fn dq_count_from_profile(s: &NumericalSemigroup) -> Result<u32, SemigroupError> {
    formula_input(s)?.dq_count_from_profile()
}

pub fn p_left_count_from_profile(s: &NumericalSemigroup) -> Result<u32, SemigroupError> {
    formula_input(s)?.p_left_count_from_profile()
}

fn formula_input(s: &NumericalSemigroup) -> Result<AperyAnalysis, SemigroupError> {
    let q = s.depth_offset().depth;
    if q < 2 {
        return Err(SemigroupError::FormulaDomain { q });
    }
    AperyAnalysis::new(s)
}

/// `S_j`, `P_j`, `D_j` for every level `0..=q`.
pub fn level_slices(s: &NumericalSemigroup) -> Result<Vec<LevelSlice>, SemigroupError> {
    if s.is_naturals() {
        return Err(SemigroupError::UndefinedForN);
    }
    let st = Structure::new(s);
    Ok((0..=st.q)
        .map(|j| {
            let (lo, hi) = st.level_range(j);
            let pick = |b: &Bitmap| (lo..hi).filter(|&x| b.get(x)).map(|x| x as u32).collect();
            LevelSlice {
                level: j,
                members: (lo..hi)
                    .filter(|&x| st.is_member(x))
                    .map(|x| x as u32)
                    .collect(),
                primitives: pick(&st.primitive),
                decomposables: pick(&st.decomposable),
            }
        })
        .collect())
}
