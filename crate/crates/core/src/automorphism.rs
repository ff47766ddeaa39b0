//! Affine automorphism subgroups `(x, y, z) -> (x + a, beta y, gamma z)`,
//! their orbits on the rational points, and the recovery sets they induce.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveFamily, Point};
use crate::gf::{Fe, Field};

/// Default bound on explicit subgroup sizes.
pub const DEFAULT_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutoError {
    #[error("subgroup closure exceeds the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("scaling factor must be nonzero in {0:?}")]
    ZeroScale(AutoMap),
    #[error("map {0:?} does not permute the affine points of the curve")]
    NotAutomorphism(AutoMap),
    #[error("an assembly needs at least two factors, got {0}")]
    TooFewFactors(usize),
    #[error("factors {i} and {j} do not commute")]
    NonCommuting { i: usize, j: usize },
    #[error("factors {i} and {j} intersect in {size} elements, trivial intersection required")]
    NonTrivialIntersection { i: usize, j: usize, size: usize },
    #[error("product has {got} elements, expected {expected} for a direct product")]
    NotDirect { expected: usize, got: usize },
    #[error("factor {factor} has empty residual in the requested mode")]
    EmptyResidual { factor: usize },
    #[error("no affine point has a trivial stabilizer")]
    EmptySplitSet,
    #[error("orbit member {0:?} is missing from the place list")]
    PlaceMissing(Point),
    #[error("coordinate {index} out of range for {n} places")]
    IndexOutOfRange { index: usize, n: usize },
}

/// `(x, y, z) -> (x + a, beta y, gamma z)`; `gamma` is absent on plane curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AutoMap {
    pub a: Fe,
    pub beta: Fe,
    pub gamma: Option<Fe>,
}

impl AutoMap {
    pub fn identity(arity: usize) -> AutoMap {
        AutoMap {
            a: Fe::ZERO,
            beta: Fe::ONE,
            gamma: (arity == 3).then_some(Fe::ONE),
        }
    }

    pub fn translation(a: Fe, arity: usize) -> AutoMap {
        AutoMap { a, ..AutoMap::identity(arity) }
    }

    pub fn scaling(beta: Fe, gamma: Option<Fe>) -> AutoMap {
        AutoMap { a: Fe::ZERO, beta, gamma }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.beta == Fe::ONE && self.gamma.is_none_or(|g| g == Fe::ONE)
    }

    pub fn apply(&self, field: &Field, p: &Point) -> Point {
        let z = match self.gamma {
            Some(g) => field.mul(g, p.z()),
            None => p.z(),
        };
        Point::xyz(field.add(p.x(), self.a), field.mul(self.beta, p.y()), z)
    }

    /// `self` after `other`.
    pub fn compose(&self, field: &Field, other: &AutoMap) -> AutoMap {
        AutoMap {
            a: field.add(self.a, other.a),
            beta: field.mul(self.beta, other.beta),
            gamma: match (self.gamma, other.gamma) {
                (Some(g), Some(h)) => Some(field.mul(g, h)),
                (g, h) => g.or(h),
            },
        }
    }

    pub fn inverse(&self, field: &Field) -> AutoMap {
        AutoMap {
            a: field.neg(self.a),
            beta: field.inv(self.beta).expect("scalings are nonzero"),
            gamma: self.gamma.map(|g| field.inv(g).expect("scalings are nonzero")),
        }
    }

    /// Integer triple used in descriptors and reports.
    pub fn encode(&self) -> Vec<u32> {
        let mut v = vec![self.a.0, self.beta.0];
        if let Some(g) = self.gamma {
            v.push(g.0);
        }
        v
    }

    fn check_nonzero(&self) -> Result<(), AutoError> {
        if self.beta.is_zero() || self.gamma.is_some_and(|g| g.is_zero()) {
            return Err(AutoError::ZeroScale(*self));
        }
        Ok(())
    }
}

/// Explicit finite group of affine automorphisms, elements sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<AutoMap>,
    generators: Vec<AutoMap>,
}

impl Subgroup {
    /// Closure of `generators` under composition.
    pub fn generate(
        field: &Field,
        generators: &[AutoMap],
        arity: usize,
        cap: usize,
    ) -> Result<Subgroup, AutoError> {
        for g in generators {
            g.check_nonzero()?;
        }
        let id = AutoMap::identity(arity);
        let mut seen: HashSet<AutoMap> = HashSet::from([id]);
        let mut frontier = vec![id];
        // Finite group: closure under multiplication by generators suffices.
        while let Some(h) = frontier.pop() {
            for g in generators {
                let c = g.compose(field, &h);
                if seen.insert(c) {
                    if seen.len() > cap {
                        return Err(AutoError::CapExceeded { cap });
                    }
                    frontier.push(c);
                }
            }
        }
        let mut elements: Vec<AutoMap> = seen.into_iter().collect();
        elements.sort_unstable();
        Ok(Subgroup {
            elements,
            generators: generators.to_vec(),
        })
    }

    pub fn elements(&self) -> &[AutoMap] {
        &self.elements
    }

    pub fn generators(&self) -> &[AutoMap] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &AutoMap) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    fn intersection_size(&self, other: &Subgroup) -> usize {
        self.elements.iter().filter(|g| other.contains(g)).count()
    }
}

/// Whether `map` permutes `points` (the affine point set of the curve).
pub fn verify_automorphism(field: &Field, map: &AutoMap, points: &[Point]) -> bool {
    if map.check_nonzero().is_err() {
        return false;
    }
    let set: HashSet<&Point> = points.iter().collect();
    // An injective map of a finite set into itself is a bijection.
    points.iter().all(|p| set.contains(&map.apply(field, p)))
}

/// Convenience form that enumerates the curve first.
pub fn verify_automorphism_on(
    field: &Field,
    map: &AutoMap,
    family: &CurveFamily,
) -> Result<bool, crate::curve::CurveError> {
    let pts = family.enumerate_affine_places(field)?;
    Ok(verify_automorphism(field, map, &pts))
}

/// Orbit of `p` under `h`, in canonical order.
pub fn orbit(field: &Field, p: &Point, h: &Subgroup) -> Vec<Point> {
    let set: BTreeSet<Point> = h.elements.iter().map(|g| g.apply(field, p)).collect();
    set.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualRule {
    /// `Q_i = P_i \ ({P} u P_1 u ... u P_(i-1))`.
    Sequential,
    /// `Q_i = P_i \ (union of P_j, j != i)`.
    Exclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "rule")]
pub enum AssemblyMode {
    Trivial,
    NonTrivial(ResidualRule),
}

#[derive(Clone, Debug)]
pub struct GroupAssembly {
    pub factors: Vec<Subgroup>,
    pub product: Subgroup,
    pub mode: AssemblyMode,
    /// Recovery-set size per factor.
    pub localities: Vec<usize>,
    /// Size of the union of all factors.
    pub union_size: usize,
}

pub fn assemble_group(
    field: &Field,
    factors: Vec<Subgroup>,
    mode: AssemblyMode,
    arity: usize,
    cap: usize,
) -> Result<GroupAssembly, AutoError> {
    if factors.len() < 2 {
        return Err(AutoError::TooFewFactors(factors.len()));
    }
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            let commute = factors[i].generators.iter().all(|g| {
                factors[j]
                    .generators
                    .iter()
                    .all(|h| g.compose(field, h) == h.compose(field, g))
            });
            if !commute {
                return Err(AutoError::NonCommuting { i, j });
            }
        }
    }
    let all_gens: Vec<AutoMap> = factors.iter().flat_map(|f| f.generators.clone()).collect();
    let product = Subgroup::generate(field, &all_gens, arity, cap)?;
    let mut union: HashSet<AutoMap> = HashSet::new();
    for f in &factors {
        union.extend(f.elements.iter().copied());
    }

    let localities = match mode {
        AssemblyMode::Trivial => {
            for i in 0..factors.len() {
                for j in i + 1..factors.len() {
                    let size = factors[i].intersection_size(&factors[j]);
                    if size != 1 {
                        return Err(AutoError::NonTrivialIntersection { i, j, size });
                    }
                }
            }
            let expected: usize = factors.iter().map(Subgroup::len).product();
            if product.len() != expected {
                return Err(AutoError::NotDirect {
                    expected,
                    got: product.len(),
                });
            }
            factors.iter().map(|f| f.len() - 1).collect()
        }
        AssemblyMode::NonTrivial(rule) => {
            let mut r = Vec::with_capacity(factors.len());
            for (i, f) in factors.iter().enumerate() {
                let others: Vec<&Subgroup> = match rule {
                    ResidualRule::Sequential => factors[..i].iter().collect(),
                    ResidualRule::Exclusive => factors
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, g)| g)
                        .collect(),
                };
                let mut size = f
                    .elements
                    .iter()
                    .filter(|g| !others.iter().any(|o| o.contains(g)))
                    .count();
                // The first sequential residual still contains the identity,
                // which corresponds to P itself.
                if rule == ResidualRule::Sequential && i == 0 {
                    size -= 1;
                }
                if size == 0 {
                    return Err(AutoError::EmptyResidual { factor: i });
                }
                r.push(size);
            }
            r
        }
    };
    Ok(GroupAssembly {
        factors,
        product,
        mode,
        localities,
        union_size: union.len(),
    })
}

/// Places whose stabilizer in the product group is trivial, grouped by orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSet {
    pub places: Vec<Point>,
    /// Start index of each free orbit inside `places`.
    pub orbit_starts: Vec<usize>,
}

pub fn split_place_set(
    field: &Field,
    points: &[Point],
    assembly: &GroupAssembly,
) -> Result<SplitSet, AutoError> {
    let g = &assembly.product;
    let mut seen: HashSet<Point> = HashSet::with_capacity(points.len());
    let mut places = Vec::new();
    let mut orbit_starts = Vec::new();
    // Points arrive sorted, so the first unseen point is its orbit's minimum.
    for p in points {
        if seen.contains(p) {
            continue;
        }
        let o = orbit(field, p, g);
        seen.extend(o.iter().copied());
        if o.len() == g.len() {
            orbit_starts.push(places.len());
            places.extend(o);
        }
    }
    if places.is_empty() {
        return Err(AutoError::EmptySplitSet);
    }
    Ok(SplitSet {
        places,
        orbit_starts,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoverySet {
    pub factor: usize,
    pub members: Vec<usize>,
}

pub struct PlaceIndex(HashMap<Point, usize>);

impl PlaceIndex {
    pub fn new(places: &[Point]) -> PlaceIndex {
        PlaceIndex(places.iter().enumerate().map(|(i, p)| (*p, i)).collect())
    }

    pub fn get(&self, p: &Point) -> Option<usize> {
        self.0.get(p).copied()
    }
}

/// The `H_i`-orbit of coordinate `index`, as sorted indices.
pub fn factor_orbit(
    field: &Field,
    places: &[Point],
    lookup: &PlaceIndex,
    index: usize,
    factor: &Subgroup,
) -> Result<Vec<usize>, AutoError> {
    let mut out = orbit(field, &places[index], factor)
        .iter()
        .map(|q| lookup.get(q).ok_or(AutoError::PlaceMissing(*q)))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_unstable();
    Ok(out)
}

/// One disjoint recovery set per factor for coordinate `index`.
pub fn recovery_sets(
    field: &Field,
    index: usize,
    places: &[Point],
    lookup: &PlaceIndex,
    assembly: &GroupAssembly,
) -> Result<Vec<RecoverySet>, AutoError> {
    if index >= places.len() {
        return Err(AutoError::IndexOutOfRange {
            index,
            n: places.len(),
        });
    }
    let orbits = assembly
        .factors
        .iter()
        .map(|h| factor_orbit(field, places, lookup, index, h))
        .collect::<Result<Vec<_>, _>>()?;
    let mut sets = Vec::with_capacity(orbits.len());
    for (i, o) in orbits.iter().enumerate() {
        let excluded: HashSet<usize> = match assembly.mode {
            AssemblyMode::Trivial => HashSet::from([index]),
            AssemblyMode::NonTrivial(ResidualRule::Sequential) => {
                let mut e: HashSet<usize> = orbits[..i].iter().flatten().copied().collect();
                e.insert(index);
                e
            }
            AssemblyMode::NonTrivial(ResidualRule::Exclusive) => {
                let mut e: HashSet<usize> = orbits
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .flat_map(|(_, o)| o.iter().copied())
                    .collect();
                e.insert(index);
                e
            }
        };
        sets.push(RecoverySet {
            factor: i,
            members: o.iter().copied().filter(|m| !excluded.contains(m)).collect(),
        });
    }
    Ok(sets)
}

/// Recovery sets for every coordinate.
pub fn recovery_structure(
    field: &Field,
    places: &[Point],
    assembly: &GroupAssembly,
) -> Result<Vec<Vec<RecoverySet>>, AutoError> {
    let lookup = PlaceIndex::new(places);
    (0..places.len())
        .map(|i| recovery_sets(field, i, places, &lookup, assembly))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hermitian3() -> (Field, Vec<Point>) {
        let c = CurveFamily::Hermitian { q: 3 };
        let f = c.field().unwrap();
        let pts = c.enumerate_affine_places(&f).unwrap();
        (f, pts)
    }

    fn herm_factors(f: &Field) -> (Subgroup, Subgroup) {
        let trans: Vec<AutoMap> = f
            .antitrace_roots(3)
            .into_iter()
            .map(|c| AutoMap::translation(c, 2))
            .collect();
        let h1 = Subgroup::generate(f, &trans, 2, DEFAULT_CAP).unwrap();
        let zeta = f.element_of_order(4).unwrap();
        let h2 = Subgroup::generate(f, &[AutoMap::scaling(zeta, None)], 2, DEFAULT_CAP).unwrap();
        (h1, h2)
    }

    #[test]
    fn closure_sizes() {
        let (f, _) = hermitian3();
        let (h1, h2) = herm_factors(&f);
        assert_eq!(h1.len(), 3);
        assert_eq!(h2.len(), 4);
        let trivial = Subgroup::generate(&f, &[], 2, DEFAULT_CAP).unwrap();
        assert_eq!(trivial.elements(), &[AutoMap::identity(2)]);
        assert!(matches!(
            Subgroup::generate(&f, &[AutoMap::scaling(f.primitive(), None)], 2, 4),
            Err(AutoError::CapExceeded { cap: 4 })
        ));
        // closed under inverses
        for g in h2.elements() {
            assert!(h2.contains(&g.inverse(&f)));
        }
    }

    #[test]
    fn automorphism_check_matches_brute_force() {
        let (f, pts) = hermitian3();
        assert!(verify_automorphism(&f, &AutoMap::identity(2), &pts));
        for c in f.elements() {
            let ok = f.add(f.pow(c, 3), c).is_zero();
            assert_eq!(verify_automorphism(&f, &AutoMap::translation(c, 2), &pts), ok);
        }
        // scalings by a (q+1)-th root of unity preserve y^(q+1)
        for b in f.elements().filter(|b| !b.is_zero()) {
            let ok = f.pow(b, 4) == Fe::ONE;
            assert_eq!(verify_automorphism(&f, &AutoMap::scaling(b, None), &pts), ok);
        }
    }

    #[test]
    fn orbits() {
        let (f, pts) = hermitian3();
        let (h1, h2) = herm_factors(&f);
        let fixed = pts.iter().find(|p| p.y().is_zero()).unwrap();
        assert_eq!(orbit(&f, fixed, &h2), vec![*fixed]);
        let moving = pts.iter().find(|p| !p.y().is_zero()).unwrap();
        assert_eq!(orbit(&f, moving, &h2).len(), 4);
        for p in &pts {
            assert_eq!(h1.len() % orbit(&f, p, &h1).len(), 0);
            assert_eq!(h2.len() % orbit(&f, p, &h2).len(), 0);
        }
    }

    #[test]
    fn hermitian_assembly_and_split_set() {
        let (f, pts) = hermitian3();
        let (h1, h2) = herm_factors(&f);
        let asm = assemble_group(&f, vec![h1, h2], AssemblyMode::Trivial, 2, DEFAULT_CAP).unwrap();
        assert_eq!(asm.product.len(), 12);
        assert_eq!(asm.localities, vec![2, 3]);
        let split = split_place_set(&f, &pts, &asm).unwrap();
        assert_eq!(split.places.len(), 24);
        assert_eq!(split.orbit_starts, vec![0, 12]);
        let rec = recovery_structure(&f, &split.places, &asm).unwrap();
        for (i, sets) in rec.iter().enumerate() {
            assert_eq!(sets[0].members.len(), 2);
            assert_eq!(sets[1].members.len(), 3);
            assert!(!sets[0].members.contains(&i) && !sets[1].members.contains(&i));
            assert!(sets[0].members.iter().all(|m| !sets[1].members.contains(m)));
        }
    }

    #[test]
    fn factor_orbits_partition_free_orbits() {
        let (f, pts) = hermitian3();
        let (h1, h2) = herm_factors(&f);
        let asm = assemble_group(&f, vec![h1, h2], AssemblyMode::Trivial, 2, DEFAULT_CAP).unwrap();
        let split = split_place_set(&f, &pts, &asm).unwrap();
        let lookup = PlaceIndex::new(&split.places);
        for h in &asm.factors {
            for &start in &split.orbit_starts {
                let block: Vec<usize> = (start..start + asm.product.len()).collect();
                let classes: BTreeSet<Vec<usize>> = block
                    .iter()
                    .map(|&i| factor_orbit(&f, &split.places, &lookup, i, h).unwrap())
                    .collect();
                assert_eq!(classes.len(), asm.product.len() / h.len());
                assert!(classes.iter().all(|c| c.len() == h.len()));
            }
        }
    }

    #[test]
    fn overlapping_factors() {
        // y -> -y lies in both factors.
        let (f, pts) = hermitian3();
        let mut gens: Vec<AutoMap> = f
            .antitrace_roots(3)
            .into_iter()
            .map(|c| AutoMap::translation(c, 2))
            .collect();
        let minus = f.neg(Fe::ONE);
        gens.push(AutoMap::scaling(minus, None));
        let h1 = Subgroup::generate(&f, &gens, 2, DEFAULT_CAP).unwrap();
        let lambda = f.element_of_order(4).unwrap();
        let h2 = Subgroup::generate(&f, &[AutoMap::scaling(lambda, None)], 2, DEFAULT_CAP).unwrap();
        assert_eq!((h1.len(), h2.len()), (6, 4));
        let err = assemble_group(&f, vec![h1.clone(), h2.clone()], AssemblyMode::Trivial, 2, DEFAULT_CAP);
        assert!(matches!(err, Err(AutoError::NonTrivialIntersection { size: 2, .. })));

        let seq = assemble_group(
            &f,
            vec![h1.clone(), h2.clone()],
            AssemblyMode::NonTrivial(ResidualRule::Sequential),
            2,
            DEFAULT_CAP,
        )
        .unwrap();
        assert_eq!(seq.product.len(), 12);
        assert_eq!(seq.localities, vec![5, 2]);
        // residuals plus the identity account for the whole union
        assert_eq!(seq.localities.iter().sum::<usize>() + 1, seq.union_size);

        let exc = assemble_group(
            &f,
            vec![h1, h2],
            AssemblyMode::NonTrivial(ResidualRule::Exclusive),
            2,
            DEFAULT_CAP,
        )
        .unwrap();
        assert_eq!(exc.localities, vec![4, 2]);

        for asm in [&seq, &exc] {
            let split = split_place_set(&f, &pts, asm).unwrap();
            assert_eq!(split.places.len(), 24);
            let rec = recovery_structure(&f, &split.places, asm).unwrap();
            for (i, sets) in rec.iter().enumerate() {
                for (s, &r) in sets.iter().zip(&asm.localities) {
                    assert_eq!(s.members.len(), r);
                    assert!(!s.members.contains(&i));
                }
                assert!(sets[0].members.iter().all(|m| !sets[1].members.contains(m)));
            }
        }
    }

    #[test]
    fn gk_three_factor_assembly() {
        let c = CurveFamily::Gk { q: 2 };
        let f = c.field().unwrap();
        let pts = c.enumerate_affine_places(&f).unwrap();
        let trans: Vec<AutoMap> = f
            .antitrace_roots(2)
            .into_iter()
            .map(|a| AutoMap::translation(a, 3))
            .collect();
        let h1 = Subgroup::generate(&f, &trans, 3, DEFAULT_CAP).unwrap();
        for g in h1.elements() {
            assert!(verify_automorphism(&f, g, &pts));
        }
        let eta = f.element_of_order(9).unwrap();
        let h2 = AutoMap::scaling(f.pow(eta, 3), Some(eta));
        assert!(verify_automorphism(&f, &h2, &pts));
        let omega = f.element_of_order(3).unwrap();
        let h3 = AutoMap::scaling(Fe::ONE, Some(omega));
        assert!(verify_automorphism(&f, &h3, &pts));
        // gcd(9, 3) = 3: the z-scalings overlap, so trivial mode refuses
        let s2 = Subgroup::generate(&f, &[h2], 3, DEFAULT_CAP).unwrap();
        let s3 = Subgroup::generate(&f, &[h3], 3, DEFAULT_CAP).unwrap();
        assert!(assemble_group(&f, vec![h1, s2, s3], AssemblyMode::Trivial, 3, DEFAULT_CAP).is_err());
    }
}
