//! Encoding, single-symbol repair by Lagrange interpolation over a recovery
//! set, peeling of erasure patterns, and seeded erasure simulations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forge::LrcCode;
use crate::gf::{Fe, Field};
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepairError {
    #[error("expected length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("position {pos} out of range for length {n}")]
    PositionOutOfRange { pos: usize, n: usize },
    #[error("coordinate {pos} has {count} recovery sets, set {set} requested")]
    SetOutOfRange { pos: usize, set: usize, count: usize },
    #[error("helper {helper} of the chosen set is erased")]
    HelperErased { helper: usize },
    #[error("duplicate interpolation abscissae at coordinate {pos}, set {set}")]
    DuplicateAbscissae { pos: usize, set: usize },
    #[error("invalid erasure probability {0}")]
    InvalidProbability(f64),
    #[error("cannot erase {f} of {n} symbols")]
    TooManyErasures { f: usize, n: usize },
    #[error("at least one trial is required")]
    NoTrials,
    #[error("unrecognized erasure model {0:?}; use iid:p or random:f")]
    BadModel(String),
    #[error("symbol {0} is not an element of the field")]
    ForeignSymbol(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Value(Fe),
    Erased,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub symbols: Vec<Symbol>,
}

impl Codeword {
    pub fn from_values(values: &[Fe]) -> Codeword {
        Codeword {
            symbols: values.iter().map(|&v| Symbol::Value(v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn erase(&mut self, pos: usize) {
        self.symbols[pos] = Symbol::Erased;
    }

    pub fn get(&self, pos: usize) -> Option<Fe> {
        match self.symbols[pos] {
            Symbol::Value(v) => Some(v),
            Symbol::Erased => None,
        }
    }

    pub fn erased_positions(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.get(i).is_none()).collect()
    }

    /// All values, if nothing is erased.
    pub fn values(&self) -> Option<Vec<Fe>> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }
}

/// Value at `x` of the unique polynomial of degree `< xs.len()` through
/// `(xs[j], ys[j])`; `None` when two abscissae coincide.
pub fn lagrange_at(field: &Field, xs: &[Fe], ys: &[Fe], x: Fe) -> Option<Fe> {
    debug_assert_eq!(xs.len(), ys.len());
    let mut acc = Fe::ZERO;
    for (j, (&xj, &yj)) in xs.iter().zip(ys).enumerate() {
        let mut num = Fe::ONE;
        let mut den = Fe::ONE;
        for (m, &xm) in xs.iter().enumerate() {
            if m != j {
                num = field.mul(num, field.sub(x, xm));
                den = field.mul(den, field.sub(xj, xm));
            }
        }
        let basis = field.div(num, den).ok()?;
        acc = field.add(acc, field.mul(yj, basis));
    }
    Some(acc)
}

pub fn encode(code: &LrcCode, message: &[Fe]) -> Result<Vec<Fe>, RepairError> {
    if message.len() != code.k() {
        return Err(RepairError::LengthMismatch {
            expected: code.k(),
            got: message.len(),
        });
    }
    if let Some(bad) = message.iter().find(|m| !code.field.contains(**m)) {
        return Err(RepairError::ForeignSymbol(bad.0));
    }
    Ok(code.matrix.left_mul(&code.field, message))
}

pub fn encode_word(code: &LrcCode, message: &[Fe]) -> Result<Codeword, RepairError> {
    encode(code, message).map(|v| Codeword::from_values(&v))
}

/// Repairs position `pos` from recovery set `set`. A present symbol at `pos`
/// is ignored, so this doubles as a consistency check.
pub fn repair_symbol(
    code: &LrcCode,
    word: &Codeword,
    pos: usize,
    set: usize,
) -> Result<Fe, RepairError> {
    if word.len() != code.n() {
        return Err(RepairError::LengthMismatch {
            expected: code.n(),
            got: word.len(),
        });
    }
    if pos >= code.n() {
        return Err(RepairError::PositionOutOfRange { pos, n: code.n() });
    }
    let sets = &code.recovery[pos];
    let entry = sets.get(set).ok_or(RepairError::SetOutOfRange {
        pos,
        set,
        count: sets.len(),
    })?;
    let ys = entry
        .members
        .iter()
        .map(|&m| word.get(m).ok_or(RepairError::HelperErased { helper: m }))
        .collect::<Result<Vec<_>, _>>()?;
    lagrange_at(&code.field, &entry.abscissae, &ys, entry.target)
        .ok_or(RepairError::DuplicateAbscissae { pos, set })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Repaired { value: Fe, set: usize, round: usize },
    Unrepairable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErasureOutcome {
    pub position: usize,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairReport {
    pub outcomes: Vec<ErasureOutcome>,
    pub rounds: usize,
    pub helper_reads: usize,
}

impl RepairReport {
    pub fn repaired(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| matches!(o.outcome, Outcome::Repaired { .. }))
            .count()
    }

    pub fn all_repaired(&self) -> bool {
        self.repaired() == self.outcomes.len()
    }
}

impl fmt::Display for RepairReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "repaired {}/{}", self.repaired(), self.outcomes.len())?;
        writeln!(f, "rounds {}", self.rounds)?;
        writeln!(f, "helper reads {}", self.helper_reads)?;
        for o in &self.outcomes {
            match &o.outcome {
                Outcome::Repaired { value, set, round } => writeln!(
                    f,
                    "  {:>6}  repaired  value={value} set={set} round={round}",
                    o.position
                )?,
                Outcome::Unrepairable { reason } => {
                    writeln!(f, "  {:>6}  unrepairable  {reason}", o.position)?
                }
            }
        }
        Ok(())
    }
}

/// Peels erasures lowest index first, trying sets in declared order.
pub fn repair_erasures(code: &LrcCode, word: &Codeword) -> (Codeword, RepairReport) {
    let order: Vec<usize> = (0..word.len()).collect();
    repair_erasures_in_order(code, word, &order)
}

/// Peeling with an explicit scan order; the set of repaired positions does
/// not depend on it.
pub fn repair_erasures_in_order(
    code: &LrcCode,
    word: &Codeword,
    order: &[usize],
) -> (Codeword, RepairReport) {
    let mut w = word.clone();
    let erased = word.erased_positions();
    let mut results: BTreeMap<usize, Outcome> = BTreeMap::new();
    let mut pending: Vec<usize> = order.iter().copied().filter(|&p| w.get(p).is_none()).collect();
    let mut rounds = 0;
    let mut reads = 0;
    loop {
        let mut progress = false;
        let mut next = Vec::new();
        for &pos in &pending {
            let usable = code.recovery[pos]
                .iter()
                .position(|e| e.members.iter().all(|&m| w.get(m).is_some()));
            match usable.map(|s| (s, repair_symbol(code, &w, pos, s))) {
                Some((s, Ok(v))) => {
                    reads += code.recovery[pos][s].members.len();
                    w.symbols[pos] = Symbol::Value(v);
                    results.insert(
                        pos,
                        Outcome::Repaired {
                            value: v,
                            set: s,
                            round: rounds + 1,
                        },
                    );
                    progress = true;
                }
                Some((_, Err(e))) => {
                    results.insert(pos, Outcome::Unrepairable { reason: e.to_string() });
                }
                None => next.push(pos),
            }
        }
        if progress {
            rounds += 1;
        }
        if !progress || next.is_empty() {
            pending = next;
            break;
        }
        pending = next;
    }
    for pos in pending {
        let blocked: Vec<String> = code.recovery[pos]
            .iter()
            .enumerate()
            .map(|(s, e)| {
                let missing: Vec<String> = e
                    .members
                    .iter()
                    .filter(|&&m| w.get(m).is_none())
                    .map(|m| m.to_string())
                    .collect();
                format!("set {s} missing [{}]", missing.join(","))
            })
            .collect();
        results.insert(
            pos,
            Outcome::Unrepairable {
                reason: blocked.join("; "),
            },
        );
    }
    let outcomes = erased
        .into_iter()
        .map(|p| ErasureOutcome {
            position: p,
            outcome: results.remove(&p).expect("every erasure gets an outcome"),
        })
        .collect();
    (
        w,
        RepairReport {
            outcomes,
            rounds,
            helper_reads: reads,
        },
    )
}

/// Whether `values` lies in the row space of the generator matrix.
pub fn in_code(code: &LrcCode, values: &[Fe]) -> bool {
    if values.len() != code.n() {
        return false;
    }
    let mut rows = code.matrix.row_vecs();
    rows.push(values.to_vec());
    Matrix::from_rows(rows).rank(&code.field) == code.matrix.rank(&code.field)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ErasureModel {
    /// Each symbol erased independently with probability p.
    Iid(f64),
    /// Exactly f distinct symbols erased, uniformly at random.
    Fixed(usize),
}

impl FromStr for ErasureModel {
    type Err = RepairError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RepairError::BadModel(s.to_string());
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "iid" => {
                let p: f64 = arg.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(RepairError::InvalidProbability(p));
                }
                Ok(ErasureModel::Iid(p))
            }
            "random" | "fixed" => Ok(ErasureModel::Fixed(arg.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for ErasureModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErasureModel::Iid(p) => write!(f, "iid:{p}"),
            ErasureModel::Fixed(k) => write!(f, "random:{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationStats {
    pub trials: usize,
    pub model: String,
    pub seed: u64,
    pub erasures: usize,
    pub repaired: usize,
    /// Trials in which every erasure was repaired to its true value.
    pub successes: usize,
    pub success_rate: f64,
    /// Trials in which the smallest erased coordinate was repaired correctly.
    pub target_successes: usize,
    pub target_success_rate: f64,
    /// Repaired values that disagreed with the encoded symbol.
    pub wrong_values: usize,
    pub mean_helper_reads: f64,
    pub rounds_histogram: BTreeMap<usize, usize>,
}

impl fmt::Display for SimulationStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model            {}", self.model)?;
        writeln!(f, "seed             {}", self.seed)?;
        writeln!(f, "trials           {}", self.trials)?;
        writeln!(f, "erasures         {}", self.erasures)?;
        writeln!(f, "repaired         {}", self.repaired)?;
        writeln!(f, "wrong values     {}", self.wrong_values)?;
        writeln!(f, "success rate     {:.6}", self.success_rate)?;
        writeln!(f, "target success   {:.6}", self.target_success_rate)?;
        writeln!(f, "mean helper reads {:.6}", self.mean_helper_reads)?;
        writeln!(f, "rounds histogram")?;
        for (r, c) in &self.rounds_histogram {
            writeln!(f, "  {r:>3}  {c}")?;
        }
        writeln!(f, "# rounds,count")?;
        for (r, c) in &self.rounds_histogram {
            writeln!(f, "{r},{c}")?;
        }
        Ok(())
    }
}

struct TrialResult {
    erasures: usize,
    repaired: usize,
    wrong: usize,
    success: bool,
    target_ok: bool,
    rounds: usize,
    reads: usize,
}

/// Random message and erasure pattern drawn from ChaCha8 seeded with `seed`
/// on stream `stream`. Patterns are sorted ascending.
pub fn seeded_trial(code: &LrcCode, model: ErasureModel, seed: u64, stream: u64) -> (Vec<Fe>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let order = code.field.order();
    let n = code.n();
    let msg: Vec<Fe> = (0..code.k()).map(|_| Fe(rng.gen_range(0..order) as u32)).collect();
    let mut pattern = match model {
        ErasureModel::Iid(p) => (0..n).filter(|_| rng.gen_bool(p)).collect(),
        ErasureModel::Fixed(f) => index::sample(&mut rng, n, f.min(n)).into_vec(),
    };
    pattern.sort_unstable();
    (msg, pattern)
}

/// Trial `t` draws from ChaCha8 seeded with `seed` on stream `t`, so results
/// do not depend on scheduling.
pub fn simulate(
    code: &LrcCode,
    trials: usize,
    model: ErasureModel,
    seed: u64,
) -> Result<SimulationStats, RepairError> {
    if trials == 0 {
        return Err(RepairError::NoTrials);
    }
    let n = code.n();
    match model {
        ErasureModel::Iid(p) if !(0.0..=1.0).contains(&p) => {
            return Err(RepairError::InvalidProbability(p))
        }
        ErasureModel::Fixed(f) if f > n => return Err(RepairError::TooManyErasures { f, n }),
        _ => {}
    }
    let results: Vec<TrialResult> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (msg, pattern) = seeded_trial(code, model, seed, t as u64);
            let truth = encode(code, &msg).expect("message has length k");
            let target = pattern.first().copied();
            let mut word = Codeword::from_values(&truth);
            for &p in &pattern {
                word.erase(p);
            }
            let (fixed, report) = repair_erasures(code, &word);
            let wrong = report
                .outcomes
                .iter()
                .filter(|o| matches!(o.outcome, Outcome::Repaired { value, .. } if value != truth[o.position]))
                .count();
            let target_ok = target.is_none_or(|t| fixed.get(t) == Some(truth[t]));
            TrialResult {
                erasures: pattern.len(),
                repaired: report.repaired(),
                wrong,
                success: report.all_repaired() && wrong == 0,
                target_ok,
                rounds: report.rounds,
                reads: report.helper_reads,
            }
        })
        .collect();

    let mut stats = SimulationStats {
        trials,
        model: model.to_string(),
        seed,
        erasures: 0,
        repaired: 0,
        successes: 0,
        success_rate: 0.0,
        target_successes: 0,
        target_success_rate: 0.0,
        wrong_values: 0,
        mean_helper_reads: 0.0,
        rounds_histogram: BTreeMap::new(),
    };
    let mut reads = 0usize;
    for r in &results {
        stats.erasures += r.erasures;
        stats.repaired += r.repaired;
        stats.wrong_values += r.wrong;
        stats.successes += r.success as usize;
        stats.target_successes += r.target_ok as usize;
        *stats.rounds_histogram.entry(r.rounds).or_insert(0) += 1;
        reads += r.reads;
    }
    stats.success_rate = stats.successes as f64 / trials as f64;
    stats.target_success_rate = stats.target_successes as f64 / trials as f64;
    stats.mean_helper_reads = reads as f64 / trials as f64;
    Ok(stats)
}
