//! The four curve families, their affine rational points and the pole orders
//! of the coordinate functions at the unique place at infinity.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{prime_power, Fe, Field, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("invalid curve parameters: {0}")]
    InvalidParameters(String),
    #[error("expected {expected} coordinates, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("coordinate {0} is not an element of the ambient field")]
    ForeignElement(u32),
    #[error("field GF({got}) is not the ambient field GF({expected}) of the curve")]
    FieldMismatch { expected: u64, got: u64 },
    #[error("enumerated {got} affine points, closed formula says {expected}")]
    CountMismatch { expected: u64, got: u64 },
    #[error("the place at infinity cannot be evaluated")]
    Infinity,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum CurveFamily {
    /// `y^(q+1) = x^q + x` over GF(q^2).
    Hermitian { q: u64 },
    /// `z^(q^2-q+1) = y^(q^2) - y`, `y^(q+1) = x^q + x` over GF(q^6).
    Gk { q: u64 },
    /// `y^(q^l+1) = x^q + x` over GF(q^(2l)), q and l odd.
    GeneralizedHermitian { q: u64, l: u32 },
    /// `y^((q^l-1)/(q-1)) = Tr(x)` over GF(q^l).
    NormTrace { q: u64, l: u32 },
}

/// An affine point; families with two coordinates keep `z = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(pub [Fe; 3]);

impl Point {
    pub fn xy(x: Fe, y: Fe) -> Point {
        Point([x, y, Fe::ZERO])
    }

    pub fn xyz(x: Fe, y: Fe, z: Fe) -> Point {
        Point([x, y, z])
    }

    pub fn x(&self) -> Fe {
        self.0[0]
    }

    pub fn y(&self) -> Fe {
        self.0[1]
    }

    pub fn z(&self) -> Fe {
        self.0[2]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Affine(Point),
    Infinity,
}

impl Place {
    pub fn affine(&self) -> Result<&Point, CurveError> {
        match self {
            Place::Affine(p) => Ok(p),
            Place::Infinity => Err(CurveError::Infinity),
        }
    }
}

/// Exponent vector of `x^a y^b z^c`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn x(e: u32) -> Monomial {
        Monomial([e, 0, 0])
    }

    pub fn y(e: u32) -> Monomial {
        Monomial([0, e, 0])
    }

    pub fn z(e: u32) -> Monomial {
        Monomial([0, 0, e])
    }

    pub fn times(self, other: Monomial) -> Monomial {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    pub fn power(self, k: u32) -> Monomial {
        Monomial([self.0[0] * k, self.0[1] * k, self.0[2] * k])
    }

    pub fn eval(&self, field: &Field, p: &Point) -> Fe {
        let mut v = Fe::ONE;
        for (&c, &e) in p.0.iter().zip(&self.0) {
            if e > 0 {
                v = field.mul(v, field.pow(c, e as u64));
            }
        }
        v
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, &e) in ["x", "y", "z"].iter().zip(&self.0) {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl CurveFamily {
    pub fn q(&self) -> u64 {
        match *self {
            CurveFamily::Hermitian { q }
            | CurveFamily::Gk { q }
            | CurveFamily::GeneralizedHermitian { q, .. }
            | CurveFamily::NormTrace { q, .. } => q,
        }
    }

    pub fn l(&self) -> Option<u32> {
        match *self {
            CurveFamily::GeneralizedHermitian { l, .. } | CurveFamily::NormTrace { l, .. } => {
                Some(l)
            }
            _ => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            CurveFamily::Hermitian { .. } => "hermitian",
            CurveFamily::Gk { .. } => "gk",
            CurveFamily::GeneralizedHermitian { .. } => "generalized_hermitian",
            CurveFamily::NormTrace { .. } => "norm_trace",
        }
    }

    /// Checks the parameters and returns `(p, e)` with `q = p^e`.
    pub fn validate(&self) -> Result<(u64, u32), CurveError> {
        let q = self.q();
        let (p, e) = prime_power(q)
            .ok_or_else(|| CurveError::InvalidParameters(format!("q = {q} is not a prime power")))?;
        match *self {
            CurveFamily::GeneralizedHermitian { l, .. } => {
                if q.is_multiple_of(2) {
                    return Err(CurveError::InvalidParameters(format!("q = {q} must be odd")));
                }
                if l == 0 || l % 2 == 0 {
                    return Err(CurveError::InvalidParameters(format!(
                        "l = {l} must be odd and positive"
                    )));
                }
            }
            CurveFamily::NormTrace { l, .. } if l < 2 => {
                return Err(CurveError::InvalidParameters(format!("l = {l} must be at least 2")));
            }
            _ => {}
        }
        let deg = self.ambient_degree() as u128;
        if (q as u128).checked_pow(deg as u32).is_none_or(|o| o > crate::gf::MAX_ORDER as u128) {
            return Err(CurveError::InvalidParameters(format!(
                "ambient field GF({q}^{deg}) is too large"
            )));
        }
        Ok((p, e))
    }

    /// Degree of the ambient field over GF(q).
    pub fn ambient_degree(&self) -> u32 {
        match *self {
            CurveFamily::Hermitian { .. } => 2,
            CurveFamily::Gk { .. } => 6,
            CurveFamily::GeneralizedHermitian { l, .. } => 2 * l,
            CurveFamily::NormTrace { l, .. } => l,
        }
    }

    pub fn ambient_order(&self) -> u64 {
        self.q().pow(self.ambient_degree())
    }

    pub fn field(&self) -> Result<Field, CurveError> {
        let (p, e) = self.validate()?;
        Ok(Field::new(p, e * self.ambient_degree())?)
    }

    pub fn arity(&self) -> usize {
        match self {
            CurveFamily::Gk { .. } => 3,
            _ => 2,
        }
    }

    /// `(q^l - 1)/(q - 1)`, the exponent of y in the norm-trace equation.
    fn norm_exponent(q: u64, l: u32) -> u64 {
        (q.pow(l) - 1) / (q - 1)
    }

    /// Pole orders of x, y (and z) at the place at infinity.
    pub fn pole_orders(&self) -> [u64; 3] {
        match *self {
            CurveFamily::Hermitian { q } => [q + 1, q, 0],
            CurveFamily::Gk { q } => [q.pow(3) + 1, q.pow(3) - q * q + q, q],
            CurveFamily::GeneralizedHermitian { q, l } => [q.pow(l) + 1, q, 0],
            CurveFamily::NormTrace { q, l } => [Self::norm_exponent(q, l), q.pow(l - 1), 0],
        }
    }

    pub fn genus(&self) -> u64 {
        match *self {
            CurveFamily::Hermitian { q } => q * (q - 1) / 2,
            CurveFamily::Gk { q } => (q.pow(3) + 1) * (q * q - 2) / 2 + 1,
            CurveFamily::GeneralizedHermitian { q, l } => q.pow(l) * (q - 1) / 2,
            CurveFamily::NormTrace { q, l } => {
                (q.pow(l - 1) - 1) * (Self::norm_exponent(q, l) - 1) / 2
            }
        }
    }

    /// Number of affine rational points from the closed formulas.
    pub fn affine_count(&self) -> u64 {
        match *self {
            CurveFamily::Hermitian { q } => q.pow(3),
            CurveFamily::Gk { q } => q.pow(8) - q.pow(6) + q.pow(5),
            CurveFamily::GeneralizedHermitian { q, l } => q.pow(2 * l + 1),
            CurveFamily::NormTrace { q, l } => q.pow(2 * l - 1),
        }
    }

    pub fn pole_order_of_monomial(&self, m: &Monomial) -> u64 {
        self.pole_orders()
            .iter()
            .zip(&m.0)
            .map(|(&w, &e)| w * e as u64)
            .sum()
    }

    fn check_field(&self, field: &Field) -> Result<(), CurveError> {
        let (p, e) = self.validate()?;
        let expected = self.ambient_order();
        if field.characteristic() as u64 != p
            || field.degree() != e * self.ambient_degree()
        {
            return Err(CurveError::FieldMismatch {
                expected,
                got: field.order(),
            });
        }
        Ok(())
    }

    /// Right-hand side `x^q + x` (or the trace for norm-trace).
    fn x_side(&self, field: &Field, x: Fe) -> Fe {
        match *self {
            CurveFamily::NormTrace { q, l } => {
                let mut sum = Fe::ZERO;
                let mut c = x;
                for _ in 0..l {
                    sum = field.add(sum, c);
                    c = field.pow(c, q);
                }
                sum
            }
            _ => field.add(field.pow(x, self.q()), x),
        }
    }

    fn y_exponent(&self) -> u64 {
        match *self {
            CurveFamily::Hermitian { q } | CurveFamily::Gk { q } => q + 1,
            CurveFamily::GeneralizedHermitian { q, l } => q.pow(l) + 1,
            CurveFamily::NormTrace { q, l } => Self::norm_exponent(q, l),
        }
    }

    pub fn satisfies_curve(&self, field: &Field, coords: &[Fe]) -> Result<bool, CurveError> {
        self.check_field(field)?;
        if coords.len() != self.arity() {
            return Err(CurveError::WrongArity {
                expected: self.arity(),
                got: coords.len(),
            });
        }
        if let Some(bad) = coords.iter().find(|c| !field.contains(**c)) {
            return Err(CurveError::ForeignElement(bad.0));
        }
        Ok(self.on_curve(field, coords))
    }

    fn on_curve(&self, field: &Field, c: &[Fe]) -> bool {
        let (x, y) = (c[0], c[1]);
        if field.pow(y, self.y_exponent()) != self.x_side(field, x) {
            return false;
        }
        if let CurveFamily::Gk { q } = *self {
            let z = c[2];
            let rhs = field.sub(field.pow(y, q * q), y);
            return field.pow(z, q * q - q + 1) == rhs;
        }
        true
    }

    pub fn contains_point(&self, field: &Field, p: &Point) -> bool {
        self.on_curve(field, &p.0[..self.arity()])
    }

    /// All affine rational points, sorted by coordinate encodings.
    pub fn enumerate_affine_places(&self, field: &Field) -> Result<Vec<Point>, CurveError> {
        self.check_field(field)?;
        let y_roots = root_table(field, self.y_exponent());
        let z_roots = match *self {
            CurveFamily::Gk { q } => Some(root_table(field, q * q - q + 1)),
            _ => None,
        };
        let mut out = Vec::new();
        for x in field.elements() {
            let rhs = self.x_side(field, x);
            for &y in &y_roots[rhs.0 as usize] {
                match (&z_roots, *self) {
                    (Some(zr), CurveFamily::Gk { q }) => {
                        let rhs2 = field.sub(field.pow(y, q * q), y);
                        for &z in &zr[rhs2.0 as usize] {
                            out.push(Point::xyz(x, y, z));
                        }
                    }
                    _ => out.push(Point::xy(x, y)),
                }
            }
        }
        let expected = self.affine_count();
        if out.len() as u64 != expected {
            return Err(CurveError::CountMismatch {
                expected,
                got: out.len() as u64,
            });
        }
        Ok(out)
    }
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CurveFamily::Hermitian { q } => write!(f, "Hermitian(q={q})"),
            CurveFamily::Gk { q } => write!(f, "GK(q={q})"),
            CurveFamily::GeneralizedHermitian { q, l } => {
                write!(f, "GeneralizedHermitian(q={q}, l={l})")
            }
            CurveFamily::NormTrace { q, l } => write!(f, "NormTrace(q={q}, l={l})"),
        }
    }
}

/// `table[v]` lists every `r` with `r^u = v`, in increasing order.
fn root_table(field: &Field, u: u64) -> Vec<Vec<Fe>> {
    let mut table = vec![Vec::new(); field.order() as usize];
    for r in field.elements() {
        table[field.pow(r, u).0 as usize].push(r);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_on_hermitian() {
        let c = CurveFamily::Hermitian { q: 2 };
        let f = c.field().unwrap();
        assert!(c.satisfies_curve(&f, &[Fe(0), Fe(0)]).unwrap());
        assert!(matches!(
            c.satisfies_curve(&f, &[Fe(0)]),
            Err(CurveError::WrongArity { expected: 2, got: 1 })
        ));
        assert!(matches!(
            c.satisfies_curve(&f, &[Fe(0), Fe(4)]),
            Err(CurveError::ForeignElement(4))
        ));
    }

    #[test]
    fn brute_force_counts_match_enumeration() {
        for c in [
            CurveFamily::Hermitian { q: 2 },
            CurveFamily::Hermitian { q: 3 },
            CurveFamily::NormTrace { q: 2, l: 3 },
            CurveFamily::NormTrace { q: 3, l: 2 },
        ] {
            let f = c.field().unwrap();
            let mut brute = Vec::new();
            for x in f.elements() {
                for y in f.elements() {
                    if c.satisfies_curve(&f, &[x, y]).unwrap() {
                        brute.push(Point::xy(x, y));
                    }
                }
            }
            assert_eq!(c.enumerate_affine_places(&f).unwrap(), brute, "{c}");
        }
    }

    #[test]
    fn hermitian_q3_density() {
        let c = CurveFamily::Hermitian { q: 3 };
        let f = c.field().unwrap();
        let hits = f
            .elements()
            .flat_map(|x| f.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| c.satisfies_curve(&f, &[x, y]).unwrap())
            .count();
        assert_eq!(hits, 27);
    }

    #[test]
    fn gk_points_with_zero_z() {
        let c = CurveFamily::Gk { q: 2 };
        let f = c.field().unwrap();
        let pts = c.enumerate_affine_places(&f).unwrap();
        assert_eq!(pts.len(), 224);
        for p in pts.iter().filter(|p| p.z().is_zero()) {
            let y = p.y();
            assert_eq!(f.pow(y, 4), y);
            assert_eq!(f.pow(y, 3), f.add(f.pow(p.x(), 2), p.x()));
        }
        assert!(pts.iter().all(|p| c.contains_point(&f, p)));
    }

    #[test]
    fn generalized_hermitian_with_l1_is_hermitian() {
        let g = CurveFamily::GeneralizedHermitian { q: 3, l: 1 };
        let h = CurveFamily::Hermitian { q: 3 };
        let f = h.field().unwrap();
        assert_eq!(g.field().unwrap(), f);
        assert_eq!(
            g.enumerate_affine_places(&f).unwrap(),
            h.enumerate_affine_places(&f).unwrap()
        );
    }

    #[test]
    fn parameter_validation() {
        assert!(CurveFamily::GeneralizedHermitian { q: 2, l: 1 }.validate().is_err());
        assert!(CurveFamily::GeneralizedHermitian { q: 3, l: 2 }.validate().is_err());
        assert!(CurveFamily::Hermitian { q: 6 }.validate().is_err());
        assert!(CurveFamily::NormTrace { q: 2, l: 1 }.validate().is_err());
        let h = CurveFamily::Hermitian { q: 3 };
        let wrong = Field::new(2, 2).unwrap();
        assert!(matches!(
            h.enumerate_affine_places(&wrong),
            Err(CurveError::FieldMismatch { .. })
        ));
    }

    #[test]
    fn pole_orders() {
        let h = CurveFamily::Hermitian { q: 3 };
        assert_eq!(h.pole_order_of_monomial(&Monomial::x(1)), 4);
        assert_eq!(h.pole_order_of_monomial(&Monomial::ONE), 0);
        let gk = CurveFamily::Gk { q: 2 };
        assert_eq!(gk.pole_order_of_monomial(&Monomial([2, 0, 3])), 24);
        // y^u and Tr(x) must have the same pole order on the norm-trace curve
        let nt = CurveFamily::NormTrace { q: 2, l: 3 };
        let [px, py, _] = nt.pole_orders();
        assert_eq!(py * 7, px * 4);
    }

    #[test]
    fn enumeration_is_deterministic_and_sorted() {
        let c = CurveFamily::Gk { q: 2 };
        let f = c.field().unwrap();
        let a = c.enumerate_affine_places(&f).unwrap();
        let b = c.enumerate_affine_places(&f).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }
}
