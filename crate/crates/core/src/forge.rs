//! Function spaces `V_i`, their intersection `V`, and assembly of the full
//! evaluation code with its recovery structure.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automorphism::{
    assemble_group, factor_orbit, recovery_structure, split_place_set, AssemblyMode, AutoError,
    AutoMap, GroupAssembly, PlaceIndex, Subgroup, DEFAULT_CAP,
};
use crate::curve::{CurveError, CurveFamily, Monomial, Point};
use crate::gf::{Fe, Field};
use crate::matrix::Matrix;
use crate::repair::lagrange_at;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForgeError {
    #[error("{preset}: constraint violated: {violated}")]
    Constraint { preset: String, violated: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Group(#[from] AutoError),
    #[error("factor {factor}: generator {map:?} is not an automorphism of the curve")]
    NotAutomorphism { factor: usize, map: AutoMap },
    #[error("coordinate {coordinate}, set {set}: a basis function is not a polynomial of degree < r in w")]
    NotLocal { coordinate: usize, set: usize },
    #[error("factor {factor}: w = {w} is invariant under the factor")]
    WInvariant { factor: usize, w: Monomial },
    #[error("factor {factor}: locality r = {r} is degenerate, r >= 2 required")]
    DegenerateLocality { factor: usize, r: usize },
    #[error("factor {factor}: w-degree cap {w_max} exceeds r - 1 = {limit}")]
    WDegreeTooLarge { factor: usize, w_max: u32, limit: usize },
    #[error("expected {expected} factor specs, got {got}")]
    SpecCount { expected: usize, got: usize },
    #[error("assembly mode {0:?} does not match the requested construction")]
    ModeMismatch(AssemblyMode),
    #[error("the intersection of the spaces V_i is empty")]
    EmptyIntersection,
    #[error("maximum pole order {max_pole} is not below the length {n}")]
    PoleTooLarge { max_pole: u64, n: usize },
    #[error("factor {factor}: w is not injective on the orbit of place {place} ({distinct} values on {size} points)")]
    Injectivity {
        factor: usize,
        place: usize,
        size: usize,
        distinct: usize,
    },
    #[error("generator matrix is zero")]
    ZeroMatrix,
}

/// `z_i`, `w_i` and the degree caps `j <= t`, `l <= w_max` of one factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub z: Monomial,
    pub w: Monomial,
    pub t: u32,
    pub w_max: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSpace {
    /// Sorted, pairwise distinct exponent vectors.
    pub monomials: Vec<Monomial>,
    pub max_pole: u64,
    /// Pairs of distinct monomials sharing a pole order.
    pub pole_collisions: Vec<(Monomial, Monomial)>,
    /// Number of formal products `z^j w^l` that coincided with another one.
    pub merged: usize,
}

impl FunctionSpace {
    fn from_set(curve: &CurveFamily, set: BTreeSet<Monomial>, merged: usize) -> FunctionSpace {
        let monomials: Vec<Monomial> = set.into_iter().collect();
        let max_pole = monomials
            .iter()
            .map(|m| curve.pole_order_of_monomial(m))
            .max()
            .unwrap_or(0);
        let mut by_pole: Vec<(u64, Monomial)> = monomials
            .iter()
            .map(|m| (curve.pole_order_of_monomial(m), *m))
            .collect();
        by_pole.sort_unstable();
        let pole_collisions = by_pole
            .windows(2)
            .filter(|w| w[0].0 == w[1].0)
            .map(|w| (w[0].1, w[1].1))
            .collect();
        FunctionSpace {
            monomials,
            max_pole,
            pole_collisions,
            merged,
        }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }
}

/// `{z^j w^l : j <= t, l <= w_max}`.
pub fn build_space(curve: &CurveFamily, spec: &FactorSpec) -> FunctionSpace {
    let mut set = BTreeSet::new();
    let mut merged = 0;
    for j in 0..=spec.t {
        for l in 0..=spec.w_max {
            if !set.insert(spec.z.power(j).times(spec.w.power(l))) {
                merged += 1;
            }
        }
    }
    FunctionSpace::from_set(curve, set, merged)
}

pub fn intersect_spaces(
    curve: &CurveFamily,
    spaces: &[FunctionSpace],
) -> Result<FunctionSpace, ForgeError> {
    let mut iter = spaces.iter();
    let first = iter.next().ok_or(ForgeError::EmptyIntersection)?;
    let mut set: BTreeSet<Monomial> = first.monomials.iter().copied().collect();
    for s in iter {
        let other: HashSet<&Monomial> = s.monomials.iter().collect();
        set.retain(|m| other.contains(m));
    }
    if set.is_empty() {
        return Err(ForgeError::EmptyIntersection);
    }
    Ok(FunctionSpace::from_set(curve, set, 0))
}

/// Whether the monomial is fixed by the automorphism as a function.
pub fn monomial_invariant(field: &Field, m: &Monomial, g: &AutoMap) -> bool {
    if m.0[0] > 0 && !g.a.is_zero() {
        return false;
    }
    let mut s = field.pow(g.beta, m.0[1] as u64);
    if let Some(gamma) = g.gamma {
        s = field.mul(s, field.pow(gamma, m.0[2] as u64));
    }
    s == Fe::ONE
}

pub fn evaluate_basis(field: &Field, monomials: &[Monomial], places: &[Point]) -> Matrix {
    let mut m = Matrix::zeros(monomials.len(), places.len());
    for (c, p) in places.iter().enumerate() {
        for (r, mono) in monomials.iter().enumerate() {
            m.set(r, c, mono.eval(field, p));
        }
    }
    m
}

/// Dimension of `V` by monomials against the span intersection of the
/// evaluated `V_i`. Only meaningful when evaluation is injective on each `V_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionCheck {
    pub monomial_dim: usize,
    pub span_dim: usize,
    pub agrees: bool,
}

pub fn verify_intersection(
    field: &Field,
    spaces: &[FunctionSpace],
    v: &FunctionSpace,
    places: &[Point],
) -> Option<IntersectionCheck> {
    if spaces.iter().any(|s| s.max_pole >= places.len() as u64) {
        return None;
    }
    let mut acc = evaluate_basis(field, &spaces[0].monomials, places);
    for s in &spaces[1..] {
        let e = evaluate_basis(field, &s.monomials, places);
        acc = Matrix::row_space_intersection(field, &acc, &e);
    }
    let ev = evaluate_basis(field, &v.monomials, places);
    let span_dim = acc.rank(field);
    let ev_rank = ev.rank(field);
    let mut stacked = acc.row_vecs();
    stacked.extend(ev.row_vecs());
    let contained = stacked.is_empty() || Matrix::from_rows(stacked).rank(field) == span_dim;
    Some(IntersectionCheck {
        monomial_dim: v.dim(),
        span_dim,
        agrees: contained && span_dim == ev_rank,
    })
}

/// Recovery set of one coordinate with the interpolation data it needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryEntry {
    pub factor: usize,
    pub members: Vec<usize>,
    /// `w_factor` at each member.
    pub abscissae: Vec<Fe>,
    /// `w_factor` at the coordinate itself.
    pub target: Fe,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectivityFailure {
    pub factor: usize,
    /// Smallest coordinate of the offending orbit.
    pub place: usize,
    pub size: usize,
    pub distinct: usize,
}

/// Parameters a construction asserts, compared against the built object.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claims {
    pub n: Option<u64>,
    pub k: Option<u64>,
    pub d: Option<i64>,
    pub max_pole: Option<u64>,
    pub localities: Option<Vec<u64>>,
}

impl Claims {
    pub fn compare(&self, code: &LrcCode) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(n) = self.n {
            if n != code.n() as u64 {
                out.push(format!("length: claimed {n}, built {}", code.n()));
            }
        }
        if let Some(k) = self.k {
            if k != code.k() as u64 {
                out.push(format!("dimension: claimed {k}, built {}", code.k()));
            }
        }
        if let Some(d) = self.d {
            if d != code.d_design {
                out.push(format!("designed distance: claimed {d}, built {}", code.d_design));
            }
        }
        if let Some(m) = self.max_pole {
            if m != code.max_pole {
                out.push(format!("maximum pole order: claimed {m}, built {}", code.max_pole));
            }
        }
        if let Some(l) = &self.localities {
            let mut a = l.clone();
            let mut b: Vec<u64> = code.localities.iter().map(|&r| r as u64).collect();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                out.push(format!("localities: claimed {l:?}, built {:?}", code.localities));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorRecipe {
    pub generators: Vec<AutoMap>,
    pub spec: FactorSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeRecipe {
    pub preset: String,
    pub params: Vec<(String, i64)>,
    pub curve: CurveFamily,
    pub mode: AssemblyMode,
    pub factors: Vec<FactorRecipe>,
    pub claims: Claims,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Record injectivity failures and oversized w-degrees instead of failing.
    pub diagnostic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LrcCode {
    pub preset: String,
    pub params: Vec<(String, i64)>,
    pub curve: CurveFamily,
    pub field: Field,
    pub mode: AssemblyMode,
    pub generators: Vec<Vec<AutoMap>>,
    pub specs: Vec<FactorSpec>,
    pub places: Vec<Point>,
    pub basis: Vec<Monomial>,
    pub matrix: Matrix,
    pub recovery: Vec<Vec<RecoveryEntry>>,
    pub localities: Vec<usize>,
    /// Largest pole order over all `V_i`; `d_design = n - max_pole`.
    pub max_pole: u64,
    /// Largest pole order inside `V` alone.
    pub max_pole_v: u64,
    pub d_design: i64,
    pub claims: Claims,
    pub discrepancies: Vec<String>,
    pub notes: Vec<String>,
    pub injectivity_failures: Vec<InjectivityFailure>,
}

impl LrcCode {
    pub fn n(&self) -> usize {
        self.places.len()
    }

    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    pub fn delta(&self) -> usize {
        self.localities.len()
    }

    /// `n - maxpole(V)`, never smaller than `d_design`.
    pub fn d_sharp(&self) -> i64 {
        self.n() as i64 - self.max_pole_v as i64
    }

    pub fn summary(&self) -> String {
        let r: Vec<String> = self.localities.iter().map(|r| r.to_string()).collect();
        format!(
            "[{}, {}, \u{2265}{}; {}] over GF({})",
            self.n(),
            self.k(),
            self.d_design,
            r.join(", "),
            self.field.order()
        )
    }
}

pub fn build_code_trivial(recipe: &CodeRecipe, options: BuildOptions) -> Result<LrcCode, ForgeError> {
    if recipe.mode != AssemblyMode::Trivial {
        return Err(ForgeError::ModeMismatch(recipe.mode));
    }
    build_code(recipe, options)
}

pub fn build_code_nontrivial(
    recipe: &CodeRecipe,
    options: BuildOptions,
) -> Result<LrcCode, ForgeError> {
    if recipe.mode == AssemblyMode::Trivial {
        return Err(ForgeError::ModeMismatch(recipe.mode));
    }
    build_code(recipe, options)
}

pub fn build_code(recipe: &CodeRecipe, options: BuildOptions) -> Result<LrcCode, ForgeError> {
    let curve = recipe.curve;
    let field = curve.field()?;
    let arity = curve.arity();
    let points = curve.enumerate_affine_places(&field)?;
    let point_set: HashSet<&Point> = points.iter().collect();

    let mut factors = Vec::with_capacity(recipe.factors.len());
    for (i, f) in recipe.factors.iter().enumerate() {
        for g in &f.generators {
            let ok = g.beta != Fe::ZERO
                && g.gamma.is_none_or(|c| !c.is_zero())
                && points.iter().all(|p| point_set.contains(&g.apply(&field, p)));
            if !ok {
                return Err(ForgeError::NotAutomorphism { factor: i, map: *g });
            }
        }
        factors.push(Subgroup::generate(&field, &f.generators, arity, DEFAULT_CAP)?);
    }
    let assembly = assemble_group(&field, factors, recipe.mode, arity, DEFAULT_CAP)?;
    let mut notes = recipe.notes.clone();
    let mut discrepancies = Vec::new();

    for (i, (f, &r)) in recipe.factors.iter().zip(&assembly.localities).enumerate() {
        if r < 2 {
            return Err(ForgeError::DegenerateLocality { factor: i, r });
        }
        let h = &assembly.factors[i];
        if !h.elements().iter().all(|g| monomial_invariant(&field, &f.spec.z, g)) {
            // Sufficient, not necessary: locality of V is checked directly below.
            discrepancies.push(format!("factor {i}: z = {} is not invariant under the factor", f.spec.z));
        }
        if h.elements().iter().all(|g| monomial_invariant(&field, &f.spec.w, g)) {
            return Err(ForgeError::WInvariant { factor: i, w: f.spec.w });
        }
        if f.spec.w_max as usize > r - 1 {
            if !options.diagnostic {
                return Err(ForgeError::WDegreeTooLarge {
                    factor: i,
                    w_max: f.spec.w_max,
                    limit: r - 1,
                });
            }
            discrepancies.push(format!(
                "factor {i}: w-degree cap {} exceeds r - 1 = {}, local repair cannot succeed",
                f.spec.w_max,
                r - 1
            ));
        }
    }

    let split = split_place_set(&field, &points, &assembly)?;
    let places = split.places;
    let n = places.len();

    let spaces: Vec<FunctionSpace> = recipe.factors.iter().map(|f| build_space(&curve, &f.spec)).collect();
    for (i, s) in spaces.iter().enumerate() {
        if s.merged > 0 {
            notes.push(format!("factor {i}: {} formal products merged", s.merged));
        }
        for (a, b) in &s.pole_collisions {
            notes.push(format!("factor {i}: monomials {a} and {b} share a pole order"));
        }
    }
    let v = intersect_spaces(&curve, &spaces)?;
    let max_pole = spaces.iter().map(|s| s.max_pole).max().unwrap_or(0);
    if max_pole >= n as u64 {
        return Err(ForgeError::PoleTooLarge { max_pole, n });
    }
    match verify_intersection(&field, &spaces, &v, &places) {
        Some(c) if !c.agrees => discrepancies.push(format!(
            "monomial intersection has dimension {} but the span intersection has dimension {}",
            c.monomial_dim, c.span_dim
        )),
        Some(_) => {}
        None => notes.push("span intersection check skipped".into()),
    }

    let injectivity_failures = check_injectivity(&field, &places, &assembly, &recipe.factors)?;
    if let Some(f) = injectivity_failures.first() {
        if !options.diagnostic {
            return Err(ForgeError::Injectivity {
                factor: f.factor,
                place: f.place,
                size: f.size,
                distinct: f.distinct,
            });
        }
        discrepancies.push(format!(
            "{} orbits where w is not injective",
            injectivity_failures.len()
        ));
    }

    let full = evaluate_basis(&field, &v.monomials, &places);
    let keep = full.independent_rows(&field);
    if keep.is_empty() {
        return Err(ForgeError::ZeroMatrix);
    }
    if keep.len() < v.dim() {
        discrepancies.push(format!(
            "basis monomials are dependent on the places: rank {} of {}",
            keep.len(),
            v.dim()
        ));
    }
    let basis: Vec<Monomial> = keep.iter().map(|&r| v.monomials[r]).collect();
    let matrix = full.select_rows(&keep);

    let sets = recovery_structure(&field, &places, &assembly)?;
    let recovery: Vec<Vec<RecoveryEntry>> = sets
        .into_iter()
        .enumerate()
        .map(|(idx, per)| {
            per.into_iter()
                .map(|s| {
                    let w = recipe.factors[s.factor].spec.w;
                    RecoveryEntry {
                        factor: s.factor,
                        abscissae: s.members.iter().map(|&m| w.eval(&field, &places[m])).collect(),
                        target: w.eval(&field, &places[idx]),
                        members: s.members,
                    }
                })
                .collect()
        })
        .collect();

    let local_failures = local_interpolation_failures(&field, &matrix, &recovery);
    if let Some(&(coordinate, set)) = local_failures.first() {
        if !options.diagnostic {
            return Err(ForgeError::NotLocal { coordinate, set });
        }
        discrepancies.push(format!(
            "{} recovery sets fail local interpolation, first at coordinate {coordinate} set {set}",
            local_failures.len()
        ));
    }

    let mut code = LrcCode {
        preset: recipe.preset.clone(),
        params: recipe.params.clone(),
        curve,
        field,
        mode: recipe.mode,
        generators: recipe.factors.iter().map(|f| f.generators.clone()).collect(),
        specs: recipe.factors.iter().map(|f| f.spec.clone()).collect(),
        places,
        basis,
        matrix,
        recovery,
        localities: assembly.localities.clone(),
        max_pole,
        max_pole_v: v.max_pole,
        d_design: n as i64 - max_pole as i64,
        claims: recipe.claims.clone(),
        discrepancies: Vec::new(),
        notes,
        injectivity_failures,
    };
    let mut all = code.claims.compare(&code);
    all.extend(discrepancies);
    code.discrepancies = all;
    Ok(code)
}

/// `(coordinate, set)` pairs where some generator row is not reproduced by
/// interpolating its values on the set at the coordinate's abscissa.
pub fn local_interpolation_failures(
    field: &Field,
    matrix: &Matrix,
    recovery: &[Vec<RecoveryEntry>],
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (c, sets) in recovery.iter().enumerate() {
        for (s, e) in sets.iter().enumerate() {
            let ok = (0..matrix.rows()).all(|r| {
                let ys: Vec<Fe> = e.members.iter().map(|&m| matrix.get(r, m)).collect();
                lagrange_at(field, &e.abscissae, &ys, e.target) == Some(matrix.get(r, c))
            });
            if !ok {
                out.push((c, s));
            }
        }
    }
    out
}

fn check_injectivity(
    field: &Field,
    places: &[Point],
    assembly: &GroupAssembly,
    factors: &[FactorRecipe],
) -> Result<Vec<InjectivityFailure>, ForgeError> {
    let lookup = PlaceIndex::new(places);
    let mut failures = Vec::new();
    for (i, h) in assembly.factors.iter().enumerate() {
        let w = factors[i].spec.w;
        let mut done = vec![false; places.len()];
        for idx in 0..places.len() {
            if done[idx] {
                continue;
            }
            let o = factor_orbit(field, places, &lookup, idx, h)?;
            let values: HashSet<Fe> = o.iter().map(|&j| w.eval(field, &places[j])).collect();
            if values.len() != o.len() {
                failures.push(InjectivityFailure {
                    factor: i,
                    place: o[0],
                    size: o.len(),
                    distinct: values.len(),
                });
            }
            for j in o {
                done[j] = true;
            }
        }
    }
    Ok(failures)
}
