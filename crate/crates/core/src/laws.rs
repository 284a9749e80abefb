//! Runtime laws checked over enumerated semigroups.
//!
//! Each law states one property of numerical semigroups in terms of levels,
//! Apéry elements, primitives and the numbers `W`, `W₀`. Most are theorems
//! and must never fail; `w0_nonneg` is empirical and first fails at genus 43.
//! Checks are written as plain scans over the window so that they do not
//! reuse the bitmap shortcuts of [`crate::apery`].

use std::fmt;

use crate::semigroup::NumericalSemigroup;
use crate::wilf::{Evaluation, WilfError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Law {
    AdditionRules,
    LevelBounds,
    AperyDownset,
    AperyDecomposableLevels,
    CompressedBound,
    CompressedPairBound,
    AperyLevelSum,
    PrimitiveCount,
    ProfilePrimitiveBounds,
    AperyPrimitives,
    ProfileFormulas,
    WGeW0,
    WW0Identity,
    Wilf,
    DepthLe3,
    HalfProfile,
    PLeftDominates,
    W0NonnegSmallLeft,
    Alpha1Le2,
    DeepProfileEmpty,
    Alpha1TwoDepth4,
    W0Nonneg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawOutcome {
    Holds,
    /// The law's hypothesis does not apply to this semigroup.
    Vacuous,
    Violated {
        expected: String,
        observed: String,
    },
}

impl LawOutcome {
    fn violated(expected: impl Into<String>, observed: impl Into<String>) -> Self {
        LawOutcome::Violated {
            expected: expected.into(),
            observed: observed.into(),
        }
    }

    fn require(ok: bool, expected: &str, observed: impl FnOnce() -> String) -> Self {
        if ok {
            LawOutcome::Holds
        } else {
            LawOutcome::violated(expected, observed())
        }
    }
}

impl Law {
    pub const ALL: [Law; 22] = [
        Law::AdditionRules,
        Law::LevelBounds,
        Law::AperyDownset,
        Law::AperyDecomposableLevels,
        Law::CompressedBound,
        Law::CompressedPairBound,
        Law::AperyLevelSum,
        Law::PrimitiveCount,
        Law::ProfilePrimitiveBounds,
        Law::AperyPrimitives,
        Law::ProfileFormulas,
        Law::WGeW0,
        Law::WW0Identity,
        Law::Wilf,
        Law::DepthLe3,
        Law::HalfProfile,
        Law::PLeftDominates,
        Law::W0NonnegSmallLeft,
        Law::Alpha1Le2,
        Law::DeepProfileEmpty,
        Law::Alpha1TwoDepth4,
        Law::W0Nonneg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::AdditionRules => "addition_rules",
            Law::LevelBounds => "level_bounds",
            Law::AperyDownset => "apery_downset",
            Law::AperyDecomposableLevels => "apery_decomposable_levels",
            Law::CompressedBound => "compressed_bound",
            Law::CompressedPairBound => "compressed_pair_bound",
            Law::AperyLevelSum => "apery_level_sum",
            Law::PrimitiveCount => "primitive_count",
            Law::ProfilePrimitiveBounds => "profile_primitive_bounds",
            Law::AperyPrimitives => "apery_primitives",
            Law::ProfileFormulas => "profile_formulas",
            Law::WGeW0 => "w_ge_w0",
            Law::WW0Identity => "w_w0_identity",
            Law::Wilf => "wilf",
            Law::DepthLe3 => "depth_le_3",
            Law::HalfProfile => "half_profile",
            Law::PLeftDominates => "p_left_dominates",
            Law::W0NonnegSmallLeft => "w0_nonneg_when_L_le_12",
            Law::Alpha1Le2 => "alpha1_le_2",
            Law::DeepProfileEmpty => "deep_profile_empty",
            Law::Alpha1TwoDepth4 => "alpha1_two_forces_depth_4",
            Law::W0Nonneg => "w0_nonneg",
        }
    }

    /// The property being checked, in one line.
    pub fn statement(self) -> &'static str {
        match self {
            Law::AdditionRules => {
                "for 1 <= i <= j < q, S_1 + S_j ⊆ S_{j+1} ∪ S_{j+2} and S_i + S_j ⊆ S_{i+j-1} ∪ S_{i+j} ∪ S_{i+j+1} (i >= 2)"
            }
            Law::LevelBounds => {
                "λ(x+y) > max(λ(x), λ(y)), and λ(a+x) = λ(a+y) implies |λ(x) − λ(y)| <= 1"
            }
            Law::AperyDownset => "every z ∈ A ∩ D splits in S*, and every split z = x + y has x, y ∈ A*",
            Law::AperyDecomposableLevels => {
                "for k >= 2, A_k ∩ D ⊆ ∪ (A_i + A_j) over 1 <= i <= j, k−1 <= i+j <= k+1"
            }
            Law::CompressedBound => "ρ >= |C|, with C ⊆ A ∩ D and valid witnesses",
            Law::CompressedPairBound => "ρ >= |(A_i + A_j) ∩ A_{i+j−1}| for all i, j >= 2",
            Law::AperyLevelSum => "|A| = m = Σ α_i, α_0 = 1, A ⊆ [0, c+m)",
            Law::PrimitiveCount => "|P| = 1 + Σ_{i=1}^{q} α′_i",
            Law::ProfilePrimitiveBounds => "α_1 = |P_1| − 1 and α_i >= |P_i| for 2 <= i < q",
            Law::AperyPrimitives => "m ∉ A and every primitive other than m lies in A",
            Law::ProfileFormulas => "for q >= 2, |L|, |D_q| and |P ∩ L| agree with their profile formulas",
            Law::WGeW0 => "W >= W0",
            Law::WW0Identity => "W = W0 + |P_q|(|L| − q)",
            Law::Wilf => "W >= 0",
            Law::DepthLe3 => "q <= 3 implies W0 >= 0",
            Law::HalfProfile => "q >= 4 and α_i = 0 for 1 <= i < ⌈q/2⌉ implies W0 >= 0",
            Law::PLeftDominates => "q >= 4 and |P ∩ L| >= max(α″_q, q) implies W0 >= ρ",
            Law::W0NonnegSmallLeft => "|L| <= 12 implies W0 >= 0",
            Law::Alpha1Le2 => "q >= 4 and |L| <= 12 implies α_1 <= 2",
            Law::DeepProfileEmpty => "q >= 8 and |L| <= 12 implies α_i = 0 for 1 <= i < ⌈q/2⌉",
            Law::Alpha1TwoDepth4 => "q >= 4, |L| <= 12 and α_1 = 2 imply q = 4 and W0 >= 0",
            Law::W0Nonneg => "W0 >= 0 (empirical; first fails at genus 43)",
        }
    }

    /// Case-insensitive lookup by name.
    pub fn from_name(name: &str) -> Option<Law> {
        Law::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(name))
    }

    /// Parses `all` or a comma-separated list of law names.
    pub fn parse_list(text: &str) -> Result<Vec<Law>, String> {
        if text.trim().eq_ignore_ascii_case("all") {
            return Ok(Law::ALL.to_vec());
        }
        let mut laws = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let law = Law::from_name(part).ok_or_else(|| {
                let names: Vec<&str> = Law::ALL.iter().map(|l| l.name()).collect();
                format!("unknown law {part:?}; known laws: {}", names.join(", "))
            })?;
            if !laws.contains(&law) {
                laws.push(law);
            }
        }
        if laws.is_empty() {
            return Err("no laws selected".into());
        }
        Ok(laws)
    }

    pub fn check(self, s: &NumericalSemigroup) -> Result<LawOutcome, WilfError> {
        Ok(self.check_with(s, &Evaluation::new(s)?))
    }

    pub(crate) fn check_with(self, s: &NumericalSemigroup, ev: &Evaluation) -> LawOutcome {
        let r = &ev.report;
        match self {
            Law::AdditionRules => addition_rules(ev),
            Law::LevelBounds => level_bounds(ev),
            Law::AperyDownset => apery_downset(ev),
            Law::AperyDecomposableLevels => apery_decomposable_levels(ev),
            Law::CompressedBound => compressed_bound(ev),
            Law::CompressedPairBound => compressed_pair_bound(ev),
            Law::AperyLevelSum => apery_level_sum(s, ev),
            Law::PrimitiveCount => {
                if s.is_naturals() {
                    return LawOutcome::Vacuous;
                }
                let formula = 1 + ev.alpha_prime[1..].iter().sum::<u32>();
                LawOutcome::require(r.e == formula, "|P| = 1 + Σ α′_i", || {
                    format!("|P|={}, 1+Σα′={}", r.e, formula)
                })
            }
            Law::ProfilePrimitiveBounds => profile_primitive_bounds(ev),
            Law::AperyPrimitives => apery_primitives(s, ev),
            Law::ProfileFormulas => profile_formulas(s, ev),
            Law::WGeW0 => {
                LawOutcome::require(r.w >= r.w0, "W >= W0", || format!("W={}, W0={}", r.w, r.w0))
            }
            Law::WW0Identity => {
                let rhs =
                    r.w0 + i64::from(ev.p_q_count) * (i64::from(r.left_count) - i64::from(r.q));
                LawOutcome::require(r.w == rhs, "W = W0 + |P_q|(|L| − q)", || {
                    format!(
                        "W={}, W0={}, |P_q|={}, L={}, q={}",
                        r.w, r.w0, ev.p_q_count, r.left_count, r.q
                    )
                })
            }
            Law::Wilf => LawOutcome::require(r.w >= 0, "W >= 0", || format!("W={}", r.w)),
            Law::DepthLe3 => {
                if r.q > 3 {
                    return LawOutcome::Vacuous;
                }
                LawOutcome::require(r.w0 >= 0, "W0 >= 0", || format!("q={}, W0={}", r.q, r.w0))
            }
            Law::HalfProfile => {
                if r.q < 4 || !lower_half_empty(&ev.alpha, r.q) {
                    return LawOutcome::Vacuous;
                }
                LawOutcome::require(r.w0 >= 0, "W0 >= 0", || {
                    format!("q={}, profile={}, W0={}", r.q, r.profile, r.w0)
                })
            }
            Law::PLeftDominates => {
                let a2q = ev.alpha_second[r.q as usize];
                if r.q < 4 || r.p_left_count < a2q.max(r.q) {
                    return LawOutcome::Vacuous;
                }
                LawOutcome::require(r.w0 >= i64::from(r.rho), "W0 >= ρ", || {
                    format!(
                        "PL={}, α″_q={}, q={}, W0={}, ρ={}",
                        r.p_left_count, a2q, r.q, r.w0, r.rho
                    )
                })
            }
            Law::W0NonnegSmallLeft => {
                if r.left_count > 12 {
                    return LawOutcome::Vacuous;
                }
                LawOutcome::require(r.w0 >= 0, "W0 >= 0", || {
                    format!("L={}, W0={}", r.left_count, r.w0)
                })
            }
            Law::Alpha1Le2 => {
                if r.q < 4 || r.left_count > 12 {
                    return LawOutcome::Vacuous;
                }
                LawOutcome::require(ev.alpha[1] <= 2, "α_1 <= 2", || {
                    format!("q={}, L={}, α_1={}", r.q, r.left_count, ev.alpha[1])
                })
            }
            Law::DeepProfileEmpty => {
                if r.q < 8 || r.left_count > 12 {
                    return LawOutcome::Vacuous;
                }
                LawOutcome::require(
                    lower_half_empty(&ev.alpha, r.q),
                    "α_i = 0 for 1 <= i < ⌈q/2⌉",
                    || format!("q={}, L={}, profile={}", r.q, r.left_count, r.profile),
                )
            }
            Law::Alpha1TwoDepth4 => {
                if r.q < 4 || r.left_count > 12 || ev.alpha[1] != 2 {
                    return LawOutcome::Vacuous;
                }
                LawOutcome::require(r.q == 4 && r.w0 >= 0, "q = 4 and W0 >= 0", || {
                    format!("q={}, W0={}", r.q, r.w0)
                })
            }
            Law::W0Nonneg => LawOutcome::require(r.w0 >= 0, "W0 >= 0", || {
                format!("W0={}, L={}, q={}", r.w0, r.left_count, r.q)
            }),
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn lower_half_empty(alpha: &[u32], q: u32) -> bool {
    let h = q.div_ceil(2) as usize;
    alpha[1..h].iter().all(|&a| a == 0)
}

fn addition_rules(ev: &Evaluation) -> LawOutcome {
    let st = &ev.structure;
    if st.q < 2 {
        return LawOutcome::Vacuous;
    }
    let window = st.len();
    let upper = st.level_start(st.q).min(window);
    for x in 1..upper {
        if !st.is_member(x) {
            continue;
        }
        let i = st.level(x);
        for y in x..upper {
            if !st.is_member(y) || x + y >= window {
                continue;
            }
            let j = st.level(y);
            let k = st.level(x + y);
            let ok = if i == 1 {
                k == j + 1 || k == j + 2
            } else {
                k + 1 >= i + j && k <= i + j + 1
            };
            if !ok {
                return LawOutcome::violated(
                    "λ(x+y) within the allowed levels",
                    format!("x={x} (level {i}), y={y} (level {j}), x+y level {k}"),
                );
            }
        }
    }
    LawOutcome::Holds
}

fn level_bounds(ev: &Evaluation) -> LawOutcome {
    let st = &ev.structure;
    if st.c == 0 {
        return LawOutcome::Vacuous;
    }
    let window = st.len();
    let nz: Vec<usize> = (1..window).filter(|&x| st.is_member(x)).collect();
    for &x in &nz {
        for &y in &nz {
            if x + y >= window {
                break;
            }
            if st.level(x + y) <= st.level(x).max(st.level(y)) {
                return LawOutcome::violated(
                    "λ(x+y) > max(λ(x), λ(y))",
                    format!(
                        "x={x}, y={y}, levels {}, {} -> {}",
                        st.level(x),
                        st.level(y),
                        st.level(x + y)
                    ),
                );
            }
        }
    }
    // For fixed a, the summands x landing in one level k span at most two
    // consecutive levels.
    let mut span: Vec<Option<(u32, u32)>> = vec![None; st.q as usize + 2];
    for &a in &nz {
        span.iter_mut().for_each(|s| *s = None);
        for &x in &nz {
            if a + x >= window {
                break;
            }
            let k = st.level(a + x) as usize;
            let lx = st.level(x);
            let entry = span[k].get_or_insert((lx, lx));
            entry.0 = entry.0.min(lx);
            entry.1 = entry.1.max(lx);
            if entry.1 - entry.0 > 1 {
                return LawOutcome::violated(
                    "λ(a+x) = λ(a+y) implies |λ(x) − λ(y)| <= 1",
                    format!(
                        "a={a}, level {k} reached from summand levels {}..{}",
                        entry.0, entry.1
                    ),
                );
            }
        }
    }
    LawOutcome::Holds
}

fn apery_elements(ev: &Evaluation) -> Vec<usize> {
    ev.structure.apery.iter_ones().collect()
}

fn apery_downset(ev: &Evaluation) -> LawOutcome {
    let st = &ev.structure;
    if st.c == 0 {
        return LawOutcome::Vacuous;
    }
    for z in apery_elements(ev) {
        if !st.decomposable.get(z) {
            continue;
        }
        let mut any = false;
        for x in 1..z {
            if st.is_member(x) && st.is_member(z - x) {
                any = true;
                if !st.apery.get(x) || !st.apery.get(z - x) {
                    return LawOutcome::violated(
                        "z ∈ A ∩ D, z = x + y in S* implies x, y ∈ A*",
                        format!("z={z}, x={x}, y={}", z - x),
                    );
                }
            }
        }
        if !any {
            return LawOutcome::violated("z ∈ A ∩ D has a split in S*", format!("z={z}"));
        }
    }
    LawOutcome::Holds
}

fn apery_decomposable_levels(ev: &Evaluation) -> LawOutcome {
    let st = &ev.structure;
    if st.c == 0 {
        return LawOutcome::Vacuous;
    }
    let a = apery_elements(ev);
    for &z in &a {
        let k = st.level(z);
        if k < 2 || !st.decomposable.get(z) {
            continue;
        }
        let covered = a.iter().skip(1).any(|&x| {
            x < z && st.apery.get(z - x) && z - x != 0 && {
                let s = st.level(x) + st.level(z - x);
                s + 1 >= k && s <= k + 1
            }
        });
        if !covered {
            return LawOutcome::violated(
                "A_k ∩ D ⊆ ∪ (A_i + A_j), k−1 <= i+j <= k+1",
                format!("z={z} at level {k}"),
            );
        }
    }
    LawOutcome::Holds
}

fn compressed_bound(ev: &Evaluation) -> LawOutcome {
    let st = &ev.structure;
    if st.c == 0 {
        return LawOutcome::Vacuous;
    }
    for e in &ev.compressed {
        let (z, (x, y)) = (
            e.value as usize,
            (e.witness.0 as usize, e.witness.1 as usize),
        );
        let valid = st.apery.get(z)
            && st.decomposable.get(z)
            && x + y == z
            && x > 0
            && y > 0
            && st.apery.get(x)
            && st.apery.get(y)
            && st.level(z) < st.level(x) + st.level(y);
        if !valid {
            return LawOutcome::violated(
                "valid compressed witness",
                format!("z={z}, x={x}, y={y}"),
            );
        }
    }
    let size = ev.compressed.len() as u32;
    LawOutcome::require(st.rho >= size, "ρ >= |C|", || {
        format!("ρ={}, |C|={size}", st.rho)
    })
}

fn compressed_pair_bound(ev: &Evaluation) -> LawOutcome {
    let st = &ev.structure;
    if st.q < 3 {
        return LawOutcome::Vacuous;
    }
    let a = apery_elements(ev);
    let q = st.q as usize;
    // hits[i][j]: members of A_{i+j-1} of the form x + y, x ∈ A_i, y ∈ A_j, i <= j.
    let mut hits = vec![vec![Vec::<usize>::new(); q + 1]; q + 1];
    for (n, &x) in a.iter().enumerate().skip(1) {
        for &y in &a[n..] {
            let z = x + y;
            if z >= st.len() || !st.apery.get(z) {
                continue;
            }
            let (i, j) = (st.level(x) as usize, st.level(y) as usize);
            let (i, j) = (i.min(j), i.max(j));
            if i >= 2 && st.level(z) as usize + 1 == i + j {
                hits[i][j].push(z);
            }
        }
    }
    for (i, row) in hits.iter_mut().enumerate() {
        for (j, zs) in row.iter_mut().enumerate() {
            zs.sort_unstable();
            zs.dedup();
            if zs.len() as u32 > st.rho {
                return LawOutcome::violated(
                    "ρ >= |(A_i + A_j) ∩ A_{i+j−1}|",
                    format!("i={i}, j={j}, count={}, ρ={}", zs.len(), st.rho),
                );
            }
        }
    }
    LawOutcome::Holds
}

fn apery_level_sum(s: &NumericalSemigroup, ev: &Evaluation) -> LawOutcome {
    if s.is_naturals() {
        return LawOutcome::Vacuous;
    }
    let total: u32 = ev.alpha.iter().sum();
    let size = ev.structure.apery.count_ones() as u32;
    let m = s.multiplicity();
    let inside = ev.structure.apery.iter_ones().all(|x| x < s.window_len());
    LawOutcome::require(
        total == m && size == m && ev.alpha[0] == 1 && inside,
        "Σ α_i = |A| = m, α_0 = 1",
        || format!("Σα={total}, |A|={size}, m={m}, α_0={}", ev.alpha[0]),
    )
}

fn profile_primitive_bounds(ev: &Evaluation) -> LawOutcome {
    let st = &ev.structure;
    if st.c == 0 {
        return LawOutcome::Vacuous;
    }
    let p_level = |i: u32| {
        let (lo, hi) = st.level_range(i);
        st.primitive.count_range(lo, hi) as u32
    };
    if ev.alpha[1] + 1 != p_level(1) {
        return LawOutcome::violated(
            "α_1 = |P_1| − 1",
            format!("α_1={}, |P_1|={}", ev.alpha[1], p_level(1)),
        );
    }
    for i in 2..st.q {
        if ev.alpha[i as usize] < p_level(i) {
            return LawOutcome::violated(
                "α_i >= |P_i|",
                format!("i={i}, α_i={}, |P_i|={}", ev.alpha[i as usize], p_level(i)),
            );
        }
    }
    LawOutcome::Holds
}

fn apery_primitives(s: &NumericalSemigroup, ev: &Evaluation) -> LawOutcome {
    if s.is_naturals() {
        return LawOutcome::Vacuous;
    }
    let st = &ev.structure;
    let m = s.multiplicity() as usize;
    if st.apery.get(m) {
        return LawOutcome::violated("m ∉ A", format!("m={m}"));
    }
    match st
        .primitive
        .iter_ones()
        .find(|&p| p != m && !st.apery.get(p))
    {
        Some(p) => LawOutcome::violated("P \\ {m} ⊆ A", format!("primitive {p} not in A")),
        None => LawOutcome::Holds,
    }
}

fn profile_formulas(s: &NumericalSemigroup, ev: &Evaluation) -> LawOutcome {
    let q = ev.structure.q;
    if q < 2 {
        return LawOutcome::Vacuous;
    }
    let qu = q as usize;
    let (alpha, alpha_p, alpha_d) = (&ev.alpha, &ev.alpha_prime, &ev.alpha_second);
    let c = s.conductor();
    let m = s.multiplicity();

    let left_direct = s.left_part().len() as u32;
    let dq_direct = s.decomposables_in(c, c + m).len() as u32;
    let pl_direct = s.primitives().iter().filter(|&&p| p < c).count() as u32;

    let left_f: u32 = (0..qu).map(|i| (qu - i) as u32 * alpha[i]).sum();
    let dq_f = alpha[..qu].iter().sum::<u32>() + alpha_d[qu];
    let pl_f = 1 + alpha_p[1..qu].iter().sum::<u32>();
    LawOutcome::require(
        left_direct == left_f && dq_direct == dq_f && pl_direct == pl_f,
        "direct |L|, |D_q|, |P∩L| equal their profile formulas",
        || {
            format!(
                "L {left_direct} vs {left_f}, Dq {dq_direct} vs {dq_f}, PL {pl_direct} vs {pl_f}"
            )
        },
    )
}
