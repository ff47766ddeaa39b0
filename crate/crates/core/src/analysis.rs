//! Distance bounds, relative defect, minimum distance (exhaustive, via the
//! rank characterisation, and sampled), the locality auditor and the GK
//! comparison table.

use std::fmt;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::forge::LrcCode;
use crate::gf::{Fe, Field};
use crate::matrix::{column_in_span, Matrix};
use crate::presets::{gk_default_omega, gk_parameters};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("bound parameters: {0}")]
    Bound(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("the generator matrix has no rows")]
    Empty,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("distance must be at least 1 (got {0})")]
    Distance(i64),
}

fn bound_err(msg: impl Into<String>) -> AnalysisError {
    AnalysisError::Bound(msg.into())
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// `d <= n - k - ceil(k/r) + 2`.
pub fn bound_eq1(n: u64, k: u64, r: u64) -> Result<i64, AnalysisError> {
    if !(1 <= r && r <= k && k <= n) {
        return Err(bound_err(format!("1 <= r <= k <= n violated (n={n}, k={k}, r={r})")));
    }
    let (n, k, r) = (n as i64, k as i64, r as i64);
    Ok(n - k - ceil_div(k, r) + 2)
}

/// `d <= n - sum_{i=0}^{t} floor((k-1)/r^i)`; `t` is explicit.
pub fn bound_eq2(n: u64, k: u64, r: u64, t: u32) -> Result<i64, AnalysisError> {
    if r < 2 {
        return Err(bound_err(format!("r >= 2 violated (r={r})")));
    }
    if k == 0 {
        return Err(bound_err("k >= 1 violated"));
    }
    let mut sum = 0i64;
    let mut pow = 1u64;
    for _ in 0..=t {
        let term = (k - 1) / pow;
        if term == 0 {
            break;
        }
        sum += term as i64;
        pow = pow.saturating_mul(r);
    }
    Ok(n as i64 - sum)
}

/// `d <= n - k + 2 - ceil(((k-1)delta + 1)/((r-1)delta + 1))`.
pub fn bound_eq5(n: u64, k: u64, r: u64, delta: u64) -> Result<i64, AnalysisError> {
    if r < 2 || delta < 1 || k < 1 {
        return Err(bound_err(format!("r >= 2, delta >= 1, k >= 1 violated (r={r}, delta={delta}, k={k})")));
    }
    let (n, k, r, delta) = (n as i64, k as i64, r as i64, delta as i64);
    Ok(n - k + 2 - ceil_div((k - 1) * delta + 1, (r - 1) * delta + 1))
}

/// Parameters of the multi-locality bound. Localities are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundParams {
    pub n: u64,
    pub k: u64,
    pub localities: Vec<u64>,
}

impl BoundParams {
    pub fn new(n: u64, k: u64, mut localities: Vec<u64>) -> Result<BoundParams, AnalysisError> {
        localities.sort_unstable();
        if localities.is_empty() {
            return Err(bound_err("at least one locality required"));
        }
        if localities[0] < 2 {
            return Err(bound_err(format!("2 <= r_1 violated (r_1={})", localities[0])));
        }
        if k < 1 || k > n {
            return Err(bound_err(format!("1 <= k <= n violated (n={n}, k={k})")));
        }
        Ok(BoundParams { n, k, localities })
    }

    pub fn delta(&self) -> u64 {
        self.localities.len() as u64
    }

    /// Whether `r_delta < k`, the hypothesis under which the bound is proven.
    pub fn hypothesis_holds(&self) -> bool {
        self.localities.last().is_some_and(|&r| r < self.k)
    }

    /// `ceil(((k-1)delta + 1)/(1 + sum r_i))`.
    fn correction(&self) -> i64 {
        let sum: u64 = self.localities.iter().sum();
        ceil_div(((self.k - 1) * self.delta() + 1) as i64, (1 + sum) as i64)
    }
}

/// `d <= n - k + 2 - ceil(((k-1)delta + 1)/(1 + sum r_i))`.
pub fn main_bound(p: &BoundParams) -> i64 {
    p.n as i64 - p.k as i64 + 2 - p.correction()
}

/// Normalised gap `(main_bound - d)/n`.
pub fn relative_defect(p: &BoundParams, d: i64) -> Result<Ratio<i64>, AnalysisError> {
    if d < 1 {
        return Err(AnalysisError::Distance(d));
    }
    Ok(Ratio::new(main_bound(p) - d, p.n as i64))
}

pub fn code_bound_params(code: &LrcCode) -> Result<BoundParams, AnalysisError> {
    BoundParams::new(
        code.n() as u64,
        code.k() as u64,
        code.localities.iter().map(|&r| r as u64).collect(),
    )
}

/// Defect at the designed distance; an upper estimate of the true defect.
pub fn code_defect(code: &LrcCode) -> Result<Ratio<i64>, AnalysisError> {
    relative_defect(&code_bound_params(code)?, code.d_design)
}

/// Defect range when only `d_design <= d <= d_sample` is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectInterval {
    /// From the sampled minimum weight; never above the true defect.
    pub at_sample: Ratio<i64>,
    /// From the designed distance; never below the true defect.
    pub at_design: Ratio<i64>,
}

pub fn defect_interval(code: &LrcCode, d_sample: i64) -> Result<DefectInterval, AnalysisError> {
    let p = code_bound_params(code)?;
    Ok(DefectInterval {
        at_sample: relative_defect(&p, d_sample)?,
        at_design: relative_defect(&p, code.d_design)?,
    })
}

/// `r` written over the denominator `n`, which `r`'s reduced denominator divides.
pub fn ratio_over(r: &Ratio<i64>, n: i64) -> String {
    if n % r.denom() == 0 {
        format!("{}/{n}", r.numer() * (n / r.denom()))
    } else {
        r.to_string()
    }
}

pub fn ratio_decimal(r: &Ratio<i64>) -> String {
    format!("{:.6}", *r.numer() as f64 / *r.denom() as f64)
}

/// Largest `q^k` the exhaustive search accepts.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 24;
/// Largest length the rank oracle accepts.
pub const RANK_ORACLE_LIMIT: usize = 20;

fn weight(v: &[Fe]) -> usize {
    v.iter().filter(|x| **x != Fe::ZERO).count()
}

/// Minimum weight over every nonzero codeword. Only messages whose first
/// nonzero entry is 1 are enumerated; scaling does not change weight.
pub fn min_distance_exhaustive(field: &Field, g: &Matrix) -> Result<usize, AnalysisError> {
    let k = g.rows();
    if k == 0 {
        return Err(AnalysisError::Empty);
    }
    let q = field.order();
    if q.checked_pow(k as u32).is_none_or(|t| t > EXHAUSTIVE_LIMIT) {
        return Err(AnalysisError::TooLarge(format!("q^k = {q}^{k} exceeds 2^24")));
    }
    let n = g.cols();
    let elements: Vec<Fe> = field.elements().collect();
    let best = (0..k)
        .map(|lead| {
            let free = k - lead - 1;
            let count = q.pow(free as u32);
            (0..count)
                .into_par_iter()
                .map(|mut idx| {
                    let mut word = g.row(lead).to_vec();
                    for r in lead + 1..k {
                        let c = elements[(idx % q) as usize];
                        idx /= q;
                        if c != Fe::ZERO {
                            for (j, w) in word.iter_mut().enumerate() {
                                *w = field.add(*w, field.mul(c, g.get(r, j)));
                            }
                        }
                    }
                    weight(&word)
                })
                .min()
                .unwrap_or(n)
        })
        .min()
        .unwrap_or(n);
    Ok(best)
}

/// `d = n - max{#N : rank(columns in N) < k}`, searched from the largest `N`
/// down: the first removal set `T` that drops the rank gives `d = #T`.
pub fn min_distance_rank_oracle(field: &Field, g: &Matrix) -> Result<usize, AnalysisError> {
    let n = g.cols();
    if n > RANK_ORACLE_LIMIT {
        return Err(AnalysisError::TooLarge(format!("n = {n} exceeds {RANK_ORACLE_LIMIT}")));
    }
    let k = g.rank(field);
    if k == 0 {
        return Err(AnalysisError::Empty);
    }
    for removed in 1..=n {
        let hit = subsets_of_size(n, removed).into_par_iter().any(|mask| {
            let keep: Vec<usize> = (0..n).filter(|j| mask & (1 << j) == 0).collect();
            g.select_columns(&keep).rank(field) < k
        });
        if hit {
            return Ok(removed);
        }
    }
    // unreachable: removing every column leaves rank 0 < k
    Ok(n)
}

fn subsets_of_size(n: usize, size: usize) -> Vec<u32> {
    let mut out = Vec::new();
    if size > n {
        return out;
    }
    let mut mask: u32 = (1u32 << size) - 1;
    let limit = 1u64 << n;
    while (mask as u64) < limit {
        out.push(mask);
        if mask == 0 {
            break;
        }
        // Gosper's hack: next integer with the same popcount
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    out
}

/// Samples per independent RNG stream.
const SAMPLE_CHUNK: usize = 4096;

/// Smallest weight seen among `trials` uniformly random nonzero codewords.
/// An upper bound on the minimum distance. Chunk `c` uses stream `c` of
/// ChaCha8 seeded with `seed`, so the result does not depend on threads.
pub fn min_weight_sample(
    field: &Field,
    g: &Matrix,
    trials: usize,
    seed: u64,
) -> Result<usize, AnalysisError> {
    if trials == 0 {
        return Err(AnalysisError::NoTrials);
    }
    let k = g.rows();
    if k == 0 || g.is_zero() {
        return Err(AnalysisError::Empty);
    }
    let q = field.order();
    let chunks = trials.div_ceil(SAMPLE_CHUNK);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = SAMPLE_CHUNK.min(trials - c * SAMPLE_CHUNK);
            let mut best = usize::MAX;
            let mut done = 0;
            while done < count {
                let msg: Vec<Fe> = (0..k).map(|_| Fe(rng.gen_range(0..q) as u32)).collect();
                let word = g.left_mul(field, &msg);
                let w = weight(&word);
                if w == 0 {
                    if msg.iter().all(|m| *m == Fe::ZERO) {
                        continue;
                    }
                } else {
                    best = best.min(w);
                }
                done += 1;
            }
            best
        })
        .min()
        .unwrap_or(usize::MAX);
    Ok(best)
}

/// One failed check, with the coordinate and set that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AuditFailure {
    Size { coordinate: usize, set: usize, size: usize, declared: usize },
    SelfIncluded { coordinate: usize, set: usize },
    NotDisjoint { coordinate: usize, first: usize, second: usize },
    NotInSpan { coordinate: usize, set: usize },
    Evaluation { coordinate: usize, set: usize },
    MissingSet { coordinate: usize, set: usize },
}

impl fmt::Display for AuditFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditFailure::Size { coordinate, set, size, declared } => {
                write!(f, "coordinate {coordinate}, set {set}: size {size}, declared {declared}")
            }
            AuditFailure::SelfIncluded { coordinate, set } => {
                write!(f, "coordinate {coordinate}, set {set}: contains the coordinate itself")
            }
            AuditFailure::NotDisjoint { coordinate, first, second } => {
                write!(f, "coordinate {coordinate}: sets {first} and {second} intersect")
            }
            AuditFailure::NotInSpan { coordinate, set } => {
                write!(f, "coordinate {coordinate}, set {set}: column not in the span of the set")
            }
            AuditFailure::Evaluation { coordinate, set } => {
                write!(f, "coordinate {coordinate}, set {set}: stored abscissae disagree with w")
            }
            AuditFailure::MissingSet { coordinate, set } => {
                write!(f, "coordinate {coordinate}: no recovery set {set}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetVerdict {
    pub size: usize,
    pub in_span: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub declared: Vec<usize>,
    /// Per slot, the largest set size if every coordinate's set in that slot
    /// passes, otherwise `None`.
    pub achieved: Vec<Option<usize>>,
    pub verdicts: Vec<Vec<SetVerdict>>,
    pub disjoint: Vec<bool>,
    pub failures: Vec<AuditFailure>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.achieved.iter().zip(&self.declared).all(|(a, d)| *a == Some(*d))
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_vec = |v: &[Option<usize>]| {
            v.iter()
                .map(|x| x.map_or("-".to_string(), |x| x.to_string()))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let declared: Vec<Option<usize>> = self.declared.iter().map(|&d| Some(d)).collect();
        writeln!(f, "audit {}", if self.passed() { "PASS" } else { "FAIL" })?;
        writeln!(f, "declared localities ({})", fmt_vec(&declared))?;
        writeln!(f, "achieved localities ({})", fmt_vec(&self.achieved))?;
        writeln!(f, "coordinates {}", self.verdicts.len())?;
        writeln!(f, "failures {}", self.failures.len())?;
        for fail in self.failures.iter().take(20) {
            writeln!(f, "  {fail}")?;
        }
        if self.failures.len() > 20 {
            writeln!(f, "  ... {} more", self.failures.len() - 20)?;
        }
        Ok(())
    }
}

/// Audits the declared recovery structure of `code`, optionally only on the
/// listed coordinates.
pub fn locality_audit(code: &LrcCode, coordinates: Option<&[usize]>) -> AuditReport {
    let field = &code.field;
    let all: Vec<usize>;
    let coords = match coordinates {
        Some(c) => c,
        None => {
            all = (0..code.n()).collect();
            &all
        }
    };
    let per: Vec<CoordinateAudit> = coords
        .par_iter()
        .map(|&c| audit_coordinate(code, field, c))
        .collect();
    let slots = code.localities.len();
    let mut achieved: Vec<Option<usize>> = vec![Some(0); slots];
    let mut verdicts = Vec::new();
    let mut disjoint = Vec::new();
    let mut failures = Vec::new();
    for (v, dj, fails, slot_ok) in per {
        for (s, ok) in slot_ok.iter().enumerate() {
            achieved[s] = match (achieved[s], ok) {
                (Some(best), true) => Some(best.max(v[s].size)),
                _ => None,
            };
        }
        verdicts.push(v);
        disjoint.push(dj);
        failures.extend(fails);
    }
    AuditReport {
        declared: code.localities.clone(),
        achieved,
        verdicts,
        disjoint,
        failures,
    }
}

/// Verdicts, disjointness, failures and per-slot success of one coordinate.
type CoordinateAudit = (Vec<SetVerdict>, bool, Vec<AuditFailure>, Vec<bool>);

fn audit_coordinate(
    code: &LrcCode,
    field: &Field,
    c: usize,
) -> CoordinateAudit {
    let sets = code.recovery.get(c).map(Vec::as_slice).unwrap_or(&[]);
    let slots = code.localities.len();
    let mut failures = Vec::new();
    let mut verdicts = Vec::new();
    let mut slot_ok = vec![false; slots];
    for s in sets.len()..slots {
        failures.push(AuditFailure::MissingSet { coordinate: c, set: s });
    }
    for (s, e) in sets.iter().enumerate() {
        let mut ok = true;
        let declared = code.localities.get(e.factor).copied().unwrap_or(0);
        if e.members.len() != declared {
            failures.push(AuditFailure::Size { coordinate: c, set: s, size: e.members.len(), declared });
            ok = false;
        }
        if e.members.contains(&c) {
            failures.push(AuditFailure::SelfIncluded { coordinate: c, set: s });
            ok = false;
        }
        let in_span = e.members.iter().all(|&m| m < code.n())
            && column_in_span(field, &code.matrix, c, &e.members);
        if !in_span {
            failures.push(AuditFailure::NotInSpan { coordinate: c, set: s });
            ok = false;
        }
        if !evaluations_consistent(code, field, c, e) {
            failures.push(AuditFailure::Evaluation { coordinate: c, set: s });
            ok = false;
        }
        verdicts.push(SetVerdict { size: e.members.len(), in_span });
        if s < slots {
            slot_ok[s] = ok;
        }
    }
    let mut disjoint = true;
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            if sets[a].members.iter().any(|m| sets[b].members.contains(m)) {
                failures.push(AuditFailure::NotDisjoint { coordinate: c, first: a, second: b });
                slot_ok[a.min(slots.saturating_sub(1))] = false;
                slot_ok[b.min(slots.saturating_sub(1))] = false;
                disjoint = false;
            }
        }
    }
    (verdicts, disjoint, failures, slot_ok)
}

/// Stored abscissae are `w` at the members, pairwise distinct, and the
/// target is `w` at the coordinate.
fn evaluations_consistent(code: &LrcCode, field: &Field, c: usize, e: &crate::forge::RecoveryEntry) -> bool {
    let Some(spec) = code.specs.get(e.factor) else {
        return false;
    };
    if e.abscissae.len() != e.members.len() || e.members.iter().any(|&m| m >= code.n()) {
        return false;
    }
    let matches = e
        .members
        .iter()
        .zip(&e.abscissae)
        .all(|(&m, &a)| spec.w.eval(field, &code.places[m]) == a);
    let mut sorted = e.abscissae.clone();
    sorted.sort();
    sorted.dedup();
    matches && sorted.len() == e.abscissae.len() && spec.w.eval(field, &code.places[c]) == e.target
}

/// One row of the comparison table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub construction: String,
    pub n: u64,
    pub k: u64,
    pub d: i64,
    pub localities: Vec<u64>,
    /// Defect recomputed from the row's parameters.
    pub defect: Ratio<i64>,
    /// The closed form the construction is quoted with.
    pub stated_defect: Ratio<i64>,
    pub stated_relation: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonTable {
    pub q: u64,
    /// Maximum pole order `S` of the GK row.
    pub s: u64,
    pub rows: Vec<TableRow>,
    pub notes: Vec<String>,
}

/// GK codes with `a = q`, `ord(eta) = q + 1`, `ord(omega) = q^2 - q + 1` and
/// `t_i = q - 1` against the fiber-product family
/// `[n, (q^2-q)(q^2-1), n - q^5 + 2q^3 - q^2 - q + 2; q - 1, q^2 - q]`.
pub fn comparison_table(q: u64) -> Result<ComparisonTable, AnalysisError> {
    if q < 2 || crate::gf::prime_power(q).is_none() {
        return Err(bound_err(format!("q = {q} must be a prime power")));
    }
    let mut notes = Vec::new();
    let omega = if (q + 1).is_multiple_of(3) {
        notes.push(format!(
            "3 divides q + 1; ord(omega) = {} keeps the orders coprime",
            gk_default_omega(q)
        ));
        gk_default_omega(q)
    } else {
        q * q - q + 1
    };
    let t = [q - 1; 3];
    let gk = gk_parameters(q, q, q + 1, omega, t);
    let n = gk.n as i64;
    let qi = q as i64;
    let gk_loc = vec![q - 1, q, omega - 1];
    let gk_d = n - gk.s as i64;
    let gk_defect = relative_defect(&BoundParams::new(gk.n, gk.k, gk_loc.clone())?, gk_d)?;
    let stated_gk = Ratio::new(qi.pow(4) - 2 * qi * qi + qi, n);

    let ck = ((q * q - q) * (q * q - 1)) as i64;
    let cd = n - qi.pow(5) + 2 * qi.pow(3) - qi * qi - qi + 2;
    let c_loc = vec![q - 1, q * q - q];
    let c_defect = relative_defect(&BoundParams::new(gk.n, ck as u64, c_loc.clone())?, cd)?;
    let stated_c = Ratio::new(qi.pow(5) - qi.pow(4) - qi.pow(3) + 2 * qi + 1, n);
    Ok(ComparisonTable {
        q,
        s: gk.s,
        rows: vec![
            TableRow {
                construction: "gk".into(),
                n: gk.n,
                k: gk.k,
                d: gk_d,
                localities: gk_loc,
                defect: gk_defect,
                stated_defect: stated_gk,
                stated_relation: "<=",
            },
            TableRow {
                construction: "fiber-product".into(),
                n: gk.n,
                k: ck as u64,
                d: cd,
                localities: c_loc,
                defect: c_defect,
                stated_defect: stated_c,
                stated_relation: "=",
            },
        ],
        notes,
    })
}

impl fmt::Display for ComparisonTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q = {}, S = {}", self.q, self.s)?;
        writeln!(
            f,
            "{:<14} {:>10} {:>10} {:>10} {:>14} {:>16} {:>18}",
            "construction", "n", "k", "d", "localities", "defect", "stated"
        )?;
        for r in &self.rows {
            let loc = r.localities.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
            writeln!(
                f,
                "{:<14} {:>10} {:>10} {:>10} {:>14} {:>16} {:>18}",
                r.construction,
                r.n,
                r.k,
                r.d,
                format!("({loc})"),
                ratio_over(&r.defect, r.n as i64),
                format!("{} {}", r.stated_relation, ratio_over(&r.stated_defect, r.n as i64)),
            )?;
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        writeln!(f, "# construction,n,k,d,localities,defect,defect_decimal,stated_relation,stated_defect")?;
        for r in &self.rows {
            let loc = r.localities.iter().map(u64::to_string).collect::<Vec<_>>().join(";");
            writeln!(
                f,
                "{},{},{},{},{},{},{},{},{}",
                r.construction,
                r.n,
                r.k,
                r.d,
                loc,
                ratio_over(&r.defect, r.n as i64),
                ratio_decimal(&r.defect),
                r.stated_relation,
                ratio_over(&r.stated_defect, r.n as i64)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_examples() {
        assert_eq!(bound_eq1(10, 4, 2).unwrap(), 6);
        assert_eq!(bound_eq1(12, 5, 2).unwrap(), 6);
        assert_eq!(bound_eq1(9, 4, 4).unwrap(), 9 - 4 + 1);
        assert!(bound_eq1(9, 4, 5).is_err());
        assert_eq!(bound_eq2(24, 5, 2, 2).unwrap(), 17);
        assert_eq!(bound_eq2(24, 5, 2, 0).unwrap(), 20);
        assert_eq!(bound_eq2(24, 5, 2, 30).unwrap(), 17);
        assert!(bound_eq2(24, 5, 1, 2).is_err());
        assert_eq!(bound_eq5(24, 3, 2, 2).unwrap(), 21);
        let p = BoundParams::new(24, 3, vec![3, 2]).unwrap();
        assert_eq!(p.localities, vec![2, 3]);
        assert_eq!(main_bound(&p), 22);
        assert_eq!(main_bound(&BoundParams::new(12, 5, vec![2]).unwrap()), 7);
        assert_eq!(main_bound(&BoundParams::new(24, 3, vec![2, 2]).unwrap()), 22);
        assert!(BoundParams::new(24, 3, vec![1, 2]).is_err());
        assert!(!BoundParams::new(24, 3, vec![3]).unwrap().hypothesis_holds());
    }

    #[test]
    fn defect_of_herm1_parameters() {
        let p = BoundParams::new(24, 3, vec![2, 3]).unwrap();
        assert_eq!(relative_defect(&p, 9).unwrap(), Ratio::new(13, 24));
        assert_eq!(relative_defect(&p, main_bound(&p)).unwrap(), Ratio::from_integer(0));
        assert!(relative_defect(&p, 0).is_err());
    }

    #[test]
    fn distance_trivial_codes() {
        let f = Field::new(2, 2).unwrap();
        let id = Matrix::from_rows(vec![
            vec![Fe(1), Fe(0), Fe(0)],
            vec![Fe(0), Fe(1), Fe(0)],
            vec![Fe(0), Fe(0), Fe(1)],
        ]);
        assert_eq!(min_distance_exhaustive(&f, &id).unwrap(), 1);
        assert_eq!(min_distance_rank_oracle(&f, &id).unwrap(), 1);
        let rep = Matrix::from_rows(vec![vec![Fe(1); 7]]);
        assert_eq!(min_distance_exhaustive(&f, &rep).unwrap(), 7);
        assert_eq!(min_distance_rank_oracle(&f, &rep).unwrap(), 7);
        let row = Matrix::from_rows(vec![vec![Fe(2), Fe(0), Fe(3), Fe(0), Fe(1)]]);
        assert_eq!(min_distance_rank_oracle(&f, &row).unwrap(), 3);
        assert_eq!(min_weight_sample(&f, &row, 10, 1).unwrap(), 3);
        assert!(min_weight_sample(&f, &row, 0, 1).is_err());
    }

    #[test]
    fn exhaustive_guard() {
        let f = Field::new(2, 8).unwrap();
        let g = Matrix::from_rows(vec![vec![Fe(1); 4]; 4]);
        assert!(matches!(min_distance_exhaustive(&f, &g), Err(AnalysisError::TooLarge(_))));
        let wide = Matrix::from_rows(vec![vec![Fe(1); 21]]);
        assert!(matches!(min_distance_rank_oracle(&f, &wide), Err(AnalysisError::TooLarge(_))));
    }

    #[test]
    fn gosper_enumeration() {
        assert_eq!(subsets_of_size(5, 2).len(), 10);
        assert_eq!(subsets_of_size(4, 4), vec![0b1111]);
        assert!(subsets_of_size(3, 4).is_empty());
    }

    #[test]
    fn table_at_three() {
        let t = comparison_table(3).unwrap();
        assert_eq!(t.s, 71);
        let gk = &t.rows[0];
        assert_eq!((gk.n, gk.k, gk.d), (6048, 6, 5977));
        assert_eq!(gk.defect, Ratio::new(65, 6048));
        assert!(gk.defect <= gk.stated_defect);
        assert_eq!(gk.stated_defect, Ratio::new(66, 6048));
        let c = &t.rows[1];
        assert_eq!((c.k, c.d), (48, 5849));
        assert_eq!(c.stated_defect, Ratio::new(142, 6048));
        assert_eq!(c.defect, c.stated_defect);
        assert!(t.notes.is_empty());
        assert!(!comparison_table(5).unwrap().notes.is_empty());
    }
}
