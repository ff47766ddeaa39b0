//! Named constructions with their parameter constraints and asserted
//! parameters. Every preset produces a [`CodeRecipe`]; the asserted values go
//! into [`Claims`] and are compared with the built code, never trusted.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::automorphism::{AssemblyMode, AutoMap, ResidualRule};
use crate::curve::{CurveFamily, Monomial};
use crate::forge::{build_code, BuildOptions, Claims, CodeRecipe, FactorRecipe, FactorSpec, ForgeError, LrcCode};
use crate::gf::{gcd, prime_power, Fe, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    HermitianI,
    HermitianIi,
    HermitianII,
    Gk,
    GenHermitian,
    NormTrace,
    GenHermitianNt,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::HermitianI,
        Preset::HermitianIi,
        Preset::HermitianII,
        Preset::Gk,
        Preset::GenHermitian,
        Preset::NormTrace,
        Preset::GenHermitianNt,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::HermitianI => "hermitian1",
            Preset::HermitianIi => "hermitian1-ii",
            Preset::HermitianII => "hermitian2",
            Preset::Gk => "gk",
            Preset::GenHermitian => "genhermitian",
            Preset::NormTrace => "normtrace",
            Preset::GenHermitianNt => "genhermitian-nt",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "hermitian1" | "hermitian_I_i" => Preset::HermitianI,
            "hermitian1-ii" | "hermitian_I_ii" => Preset::HermitianIi,
            "hermitian2" | "hermitian_II" => Preset::HermitianII,
            "gk" => Preset::Gk,
            "genhermitian" | "gen_hermitian" => Preset::GenHermitian,
            "normtrace" | "norm_trace" => Preset::NormTrace,
            "genhermitian-nt" | "gen_hermitian_nontrivial" => Preset::GenHermitianNt,
            _ => return Err(format!("unknown family {s:?}")),
        })
    }
}

/// Raw parameters; unset values fall back to per-preset defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PresetParams {
    pub q: Option<u64>,
    pub l: Option<u32>,
    pub u: Option<u64>,
    pub a: Option<u64>,
    pub ord_eta: Option<u64>,
    pub ord_omega: Option<u64>,
    pub ord_lambda: Option<u64>,
    pub t1: Option<u32>,
    pub t2: Option<u32>,
    pub t3: Option<u32>,
    /// Residual rule for the overlapping-factor construction.
    pub exclusive: bool,
}

fn violated(preset: Preset, msg: impl Into<String>) -> ForgeError {
    ForgeError::Constraint {
        preset: preset.name().to_string(),
        violated: msg.into(),
    }
}

fn require<T>(preset: Preset, v: Option<T>, name: &str) -> Result<T, ForgeError> {
    v.ok_or_else(|| violated(preset, format!("missing parameter --{name}")))
}

fn check(preset: Preset, ok: bool, msg: impl Into<String>) -> Result<(), ForgeError> {
    if ok {
        Ok(())
    } else {
        Err(violated(preset, msg))
    }
}

fn prime_power_q(preset: Preset, q: u64) -> Result<(u64, u32), ForgeError> {
    prime_power(q).ok_or_else(|| violated(preset, format!("q = {q} must be a prime power")))
}

/// GF(p)-span, of the requested size, of the smallest elements of an
/// additive group `roots`; returns spanning translations.
fn translation_generators(field: &Field, roots: &[Fe], size: u64, arity: usize) -> Vec<AutoMap> {
    let p = field.characteristic() as u64;
    let mut span: BTreeSet<Fe> = BTreeSet::from([Fe::ZERO]);
    let mut gens = Vec::new();
    for &r in roots {
        if span.len() as u64 >= size {
            break;
        }
        if span.contains(&r) {
            continue;
        }
        let mut next = span.clone();
        for &s in &span {
            let mut m = r;
            for _ in 1..p {
                next.insert(field.add(s, m));
                m = field.add(m, r);
            }
        }
        span = next;
        gens.push(AutoMap::translation(r, arity));
    }
    gens
}

fn scaling_generator(field: &Field, order: u64) -> Option<Fe> {
    field.element_of_order(order)
}

fn n_claim_loc(v: &[u64]) -> Option<Vec<u64>> {
    Some(v.to_vec())
}

/// Builds the recipe for `preset`, validating every parameter constraint.
pub fn recipe(preset: Preset, p: &PresetParams) -> Result<CodeRecipe, ForgeError> {
    match preset {
        Preset::HermitianI => hermitian_i(p),
        Preset::HermitianIi => hermitian_i_ii(p),
        Preset::HermitianII => hermitian_ii(p),
        Preset::Gk => gk(p),
        Preset::GenHermitian => gen_hermitian(p),
        Preset::NormTrace => norm_trace(p),
        Preset::GenHermitianNt => gen_hermitian_nt(p),
    }
}

pub fn build_preset(
    preset: Preset,
    p: &PresetParams,
    options: BuildOptions,
) -> Result<LrcCode, ForgeError> {
    build_code(&recipe(preset, p)?, options)
}

/// Translations by `{c : c^q + c = 0}` and scalings of y by an element of order `u`.
fn hermitian_groups(
    preset: Preset,
    curve: &CurveFamily,
    q: u64,
    u: u64,
) -> Result<(Vec<AutoMap>, Vec<AutoMap>), ForgeError> {
    let field = curve.field()?;
    let trans = translation_generators(&field, &field.antitrace_roots(q), q, 2);
    let zeta = scaling_generator(&field, u)
        .ok_or_else(|| violated(preset, format!("no element of order u = {u}")))?;
    Ok((trans, vec![AutoMap::scaling(zeta, None)]))
}

fn hermitian_common(preset: Preset, p: &PresetParams) -> Result<(u64, u64), ForgeError> {
    let q = require(preset, p.q, "q")?;
    prime_power_q(preset, q)?;
    let u = p.u.unwrap_or(q + 1);
    check(preset, u > 1, format!("1 < u (u = {u})"))?;
    check(preset, (q + 1) % u == 0, format!("u | q + 1 (u = {u}, q + 1 = {})", q + 1))?;
    Ok((q, u))
}

fn hermitian_i(p: &PresetParams) -> Result<CodeRecipe, ForgeError> {
    let preset = Preset::HermitianI;
    let (q, u) = hermitian_common(preset, p)?;
    let t1 = p.t1.map_or(q - 1, u64::from);
    check(preset, t1 == q - 1, format!("t1 = q - 1 = {} (got {t1})", q - 1))?;
    // (2q^2 - qu - 2)/(q(u-1)) <= t2 < q^2/(u-1) - 1, in integers
    let lo_num = 2 * q * q as i128 as u64;
    let lo_num = lo_num as i128 - (q * u) as i128 - 2;
    let lo_den = (q * (u - 1)) as i128;
    let smallest = if lo_num <= 0 { 0 } else { (lo_num + lo_den - 1) / lo_den } as u64;
    let t2 = p.t2.map_or(smallest, u64::from);
    let interval = format!(
        "({}/{lo_den}) <= t2 < {q}^2/{} - 1, got t2 = {t2}",
        lo_num,
        u - 1
    );
    check(preset, (t2 as i128) * lo_den >= lo_num, interval.clone())?;
    check(preset, (t2 + 1) * (u - 1) < q * q, interval)?;
    let curve = CurveFamily::Hermitian { q };
    let (trans, scale) = hermitian_groups(preset, &curve, q, u)?;
    let n = q * (q * q - 1);
    let m = q * (u * t2 + u - t2 - 2);
    Ok(CodeRecipe {
        preset: preset.name().into(),
        params: vec![
            ("q".into(), q as i64),
            ("u".into(), u as i64),
            ("t1".into(), t1 as i64),
            ("t2".into(), t2 as i64),
        ],
        curve,
        mode: AssemblyMode::Trivial,
        factors: vec![
            FactorRecipe {
                generators: trans,
                spec: FactorSpec { z: Monomial::y(1), w: Monomial::x(1), t: t1 as u32, w_max: (q - 2) as u32 },
            },
            FactorRecipe {
                generators: scale,
                spec: FactorSpec {
                    z: Monomial::y((u - 1) as u32),
                    w: Monomial::y(1),
                    t: t2 as u32,
                    w_max: (u - 2) as u32,
                },
            },
        ],
        claims: Claims {
            n: Some(n),
            k: Some(q),
            d: Some(n as i64 - m as i64),
            max_pole: Some(m),
            localities: n_claim_loc(&[q - 1, u - 1]),
        },
        notes: vec![],
    })
}

fn hermitian_i_ii(p: &PresetParams) -> Result<CodeRecipe, ForgeError> {
    let preset = Preset::HermitianIi;
    let (q, u) = hermitian_common(preset, p)?;
    let t2 = (q + 1) / u - 1;
    if let Some(given) = p.t2 {
        check(preset, given as u64 == t2, format!("u(t2 + 1) = q + 1 forces t2 = {t2} (got {given})"))?;
    }
    let t1 = p.t1.map_or(2, u64::from);
    check(preset, t1 >= 1, "t1 >= 1")?;
    check(preset, (t1, t2) != (1, 1), "(t1, t2) != (1, 1)")?;
    let mut notes = Vec::new();
    if t1 < 2 {
        notes.push(format!("t1 = {t1} is below the stated range t1 >= 2"));
    }
    let curve = CurveFamily::Hermitian { q };
    let (trans, scale) = hermitian_groups(preset, &curve, q, u)?;
    let n = q * (q * q - 1);
    let m = q * q - q - 2 + t1 * q;
    Ok(CodeRecipe {
        preset: preset.name().into(),
        params: vec![
            ("q".into(), q as i64),
            ("u".into(), u as i64),
            ("t1".into(), t1 as i64),
            ("t2".into(), t2 as i64),
        ],
        curve,
        mode: AssemblyMode::Trivial,
        factors: vec![
            FactorRecipe {
                generators: trans,
                spec: FactorSpec { z: Monomial::y(1), w: Monomial::x(1), t: t1 as u32, w_max: (q - 2) as u32 },
            },
            FactorRecipe {
                generators: scale,
                spec: FactorSpec {
                    z: Monomial::y((u - 1) as u32),
                    w: Monomial::y(1),
                    t: t2 as u32,
                    w_max: (u - 2) as u32,
                },
            },
        ],
        claims: Claims {
            n: Some(n),
            k: Some(q),
            d: Some(n as i64 - m as i64),
            max_pole: Some(m),
            localities: n_claim_loc(&[q - 1, u - 1]),
        },
        notes,
    })
}

fn hermitian_ii(p: &PresetParams) -> Result<CodeRecipe, ForgeError> {
    let preset = Preset::HermitianII;
    let (q, u) = hermitian_common(preset, p)?;
    let t1 = p.t1.map_or(1, u64::from);
    let t2 = p.t2.map_or(1, u64::from);
    check(preset, (1..=u).contains(&t1), format!("1 <= t1 <= u = {u} (got t1 = {t1})"))?;
    check(preset, (1..=q).contains(&t2), format!("1 <= t2 <= q = {q} (got t2 = {t2})"))?;
    let curve = CurveFamily::Hermitian { q };
    let (trans, scale) = hermitian_groups(preset, &curve, q, u)?;
    let n = q * (q * q - 1);
    let m = (t1 * q + q * q - 1).max((u - 1) * q + t2 * (q + 1));
    Ok(CodeRecipe {
        preset: preset.name().into(),
        params: vec![
            ("q".into(), q as i64),
            ("u".into(), u as i64),
            ("t1".into(), t1 as i64),
            ("t2".into(), t2 as i64),
        ],
        curve,
        mode: AssemblyMode::Trivial,
        factors: vec![
            FactorRecipe {
                generators: trans,
                spec: FactorSpec { z: Monomial::y(1), w: Monomial::x(1), t: t1 as u32, w_max: (q - 2) as u32 },
            },
            FactorRecipe {
                generators: scale,
                spec: FactorSpec { z: Monomial::x(1), w: Monomial::y(1), t: t2 as u32, w_max: (u - 2) as u32 },
            },
        ],
        claims: Claims {
            n: Some(n),
            k: Some((t1 + 1) * (t2 + 1)),
            d: Some(n as i64 - m as i64),
            max_pole: Some(m),
            localities: n_claim_loc(&[q - 1, u - 1]),
        },
        notes: vec![],
    })
}

/// Asserted parameters of the GK construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GkParameters {
    pub n: u64,
    pub k: u64,
    pub s: u64,
    pub n1: u64,
    pub m1: u64,
}

pub fn gk_parameters(q: u64, a: u64, ord_eta: u64, ord_omega: u64, t: [u64; 3]) -> GkParameters {
    let q3 = q.pow(3);
    let n = q.pow(8) - q.pow(6) + q.pow(5) - q3;
    let n1 = (a - 2).min(t[1]).min(t[2]);
    let m1 = t[0].min(ord_eta - 2).min(ord_omega - 2);
    let s = ((a - 2) * (q3 + 1) + t[0] * q)
        .max(t[1] * (q3 + 1) + (ord_eta - 2) * q)
        .max(t[2] * (q3 + 1) + (ord_omega - 2) * q);
    GkParameters {
        n,
        k: (m1 + 1) * (n1 + 1),
        s,
        n1,
        m1,
    }
}

/// Default `ord(omega)`: `q^2 - q + 1`, divided by 3 when `3 | q + 1`.
pub fn gk_default_omega(q: u64) -> u64 {
    let base = q * q - q + 1;
    if (q + 1).is_multiple_of(3) {
        base / 3
    } else {
        base
    }
}

fn gk(p: &PresetParams) -> Result<CodeRecipe, ForgeError> {
    let preset = Preset::Gk;
    let q = require(preset, p.q, "q")?;
    let (pc, e) = prime_power_q(preset, q)?;
    let a = p.a.unwrap_or(q);
    let h = prime_power(a).filter(|&(pa, _)| pa == pc).map(|(_, h)| h);
    check(
        preset,
        h.is_some_and(|h| (1..=e).contains(&h)),
        format!("a = p^h with 1 <= h <= {e} (a = {a}, p = {pc})"),
    )?;
    let ord_eta = p.ord_eta.unwrap_or(q + 1);
    let ord_omega = p.ord_omega.unwrap_or_else(|| gk_default_omega(q));
    check(preset, (q.pow(3) + 1) % ord_eta == 0, format!("ord(eta) | q^3 + 1 (ord(eta) = {ord_eta})"))?;
    check(
        preset,
        (q * q - q + 1) % ord_omega == 0,
        format!("ord(omega) | q^2 - q + 1 (ord(omega) = {ord_omega})"),
    )?;
    check(
        preset,
        gcd(ord_eta, ord_omega) == 1,
        format!("gcd(ord(eta), ord(omega)) = 1 (got {})", gcd(ord_eta, ord_omega)),
    )?;
    for (name, size) in [("a", a), ("ord(eta)", ord_eta), ("ord(omega)", ord_omega)] {
        check(preset, size >= 3, format!("{name} >= 3 so that every locality is at least 2 (got {size})"))?;
    }
    let t = [
        p.t1.map_or(q - 1, u64::from),
        p.t2.map_or(q - 1, u64::from),
        p.t3.map_or(q - 1, u64::from),
    ];
    for (i, &ti) in t.iter().enumerate() {
        check(preset, ti > 0, format!("0 < t{} (got {ti})", i + 1))?;
    }
    let params = gk_parameters(q, a, ord_eta, ord_omega, t);
    check(
        preset,
        params.s < params.n,
        format!("S <= n - 1 (S = {}, n = {})", params.s, params.n),
    )?;
    let mut notes = Vec::new();
    let limits = [
        q * q * (q * q - 1) * (q.pow(3) + 1) - q.pow(3) + 2 * q * q - 1,
        q.pow(3) * (q * q - 1) - q,
        q.pow(3) * (q * q - 1) - 1,
    ];
    for (i, (&ti, &lim)) in t.iter().zip(&limits).enumerate() {
        if ti >= lim {
            notes.push(format!("t{} = {ti} is beyond the informational limit {lim}", i + 1));
        }
    }

    let curve = CurveFamily::Gk { q };
    let field = curve.field()?;
    let trans = translation_generators(&field, &field.antitrace_roots(q), a, 3);
    let eta = scaling_generator(&field, ord_eta)
        .ok_or_else(|| violated(preset, format!("no element of order {ord_eta}")))?;
    let omega = scaling_generator(&field, ord_omega)
        .ok_or_else(|| violated(preset, format!("no element of order {ord_omega}")))?;
    let h2 = AutoMap::scaling(field.pow(eta, q * q - q + 1), Some(eta));
    let h3 = AutoMap::scaling(Fe::ONE, Some(omega));
    Ok(CodeRecipe {
        preset: preset.name().into(),
        params: vec![
            ("q".into(), q as i64),
            ("a".into(), a as i64),
            ("ord_eta".into(), ord_eta as i64),
            ("ord_omega".into(), ord_omega as i64),
            ("t1".into(), t[0] as i64),
            ("t2".into(), t[1] as i64),
            ("t3".into(), t[2] as i64),
        ],
        curve,
        mode: AssemblyMode::Trivial,
        factors: vec![
            FactorRecipe {
                generators: trans,
                spec: FactorSpec { z: Monomial::z(1), w: Monomial::x(1), t: t[0] as u32, w_max: (a - 2) as u32 },
            },
            FactorRecipe {
                generators: vec![h2],
                spec: FactorSpec { z: Monomial::x(1), w: Monomial::z(1), t: t[1] as u32, w_max: (ord_eta - 2) as u32 },
            },
            FactorRecipe {
                generators: vec![h3],
                spec: FactorSpec {
                    z: Monomial::x(1),
                    w: Monomial::z(1),
                    t: t[2] as u32,
                    w_max: (ord_omega - 2) as u32,
                },
            },
        ],
        claims: Claims {
            n: Some(params.n),
            k: Some(params.k),
            d: Some(params.n as i64 - params.s as i64),
            max_pole: Some(params.s),
            localities: n_claim_loc(&[a - 1, ord_eta - 1, ord_omega - 1]),
        },
        notes,
    })
}

fn odd_q_l(preset: Preset, p: &PresetParams) -> Result<(u64, u32), ForgeError> {
    let q = require(preset, p.q, "q")?;
    prime_power_q(preset, q)?;
    let l = p.l.unwrap_or(1);
    check(preset, q % 2 == 1, format!("q odd (q = {q})"))?;
    check(preset, l % 2 == 1, format!("l odd (l = {l})"))?;
    Ok((q, l))
}

fn gen_hermitian(p: &PresetParams) -> Result<CodeRecipe, ForgeError> {
    let preset = Preset::GenHermitian;
    let (q, l) = odd_q_l(preset, p)?;
    let ql = q.pow(l);
    let t1 = p.t1.map_or(1, u64::from);
    let t2 = p.t2.map_or(1, u64::from);
    let n = q.pow(2 * l + 1) - q;
    let big_m1 = t1.max(ql - 1);
    let big_m2 = t2.max(q - 2);
    let s = big_m1 * q + big_m2 * (ql - 1);
    check(preset, s <= n, format!("S = M1 q + M2 (q^l - 1) <= q^(2l+1) - q (S = {s}, n = {n})"))?;
    let m1 = t1.min(ql - 1);
    let m2 = t2.min(q - 2);
    let curve = CurveFamily::GeneralizedHermitian { q, l };
    let (trans, scale) = hermitian_groups(preset, &curve, q, ql + 1)?;
    Ok(CodeRecipe {
        preset: preset.name().into(),
        params: vec![
            ("q".into(), q as i64),
            ("l".into(), l as i64),
            ("t1".into(), t1 as i64),
            ("t2".into(), t2 as i64),
        ],
        curve,
        mode: AssemblyMode::Trivial,
        factors: vec![
            FactorRecipe {
                generators: trans,
                spec: FactorSpec { z: Monomial::y(1), w: Monomial::x(1), t: t1 as u32, w_max: (q - 2) as u32 },
            },
            FactorRecipe {
                generators: scale,
                spec: FactorSpec { z: Monomial::x(1), w: Monomial::y(1), t: t2 as u32, w_max: (ql - 1) as u32 },
            },
        ],
        claims: Claims {
            n: Some(n),
            k: Some((m1 + 1) * (m2 + 1)),
            d: Some(n as i64 - s as i64),
            max_pole: Some(s),
            localities: n_claim_loc(&[q - 1, ql]),
        },
        notes: vec![],
    })
}

fn norm_trace(p: &PresetParams) -> Result<CodeRecipe, ForgeError> {
    let preset = Preset::NormTrace;
    let q = require(preset, p.q, "q")?;
    let (_, e) = prime_power_q(preset, q)?;
    let l = require(preset, p.l, "l")?;
    check(preset, l >= 2, format!("l >= 2 (l = {l})"))?;
    let ql = q.pow(l);
    let u = (ql - 1) / (q - 1);
    let h1 = q.pow(l - 1);
    check(preset, h1 >= 3, format!("q^(l-1) - 1 >= 2 (got {})", h1 - 1))?;
    check(preset, u >= 3, format!("(q^l - 1)/(q - 1) - 1 >= 2 (got {})", u - 1))?;
    let t1 = p.t1.map_or(1, u64::from);
    let t2 = p.t2.map_or(1, u64::from);
    let n = h1 * (ql - 1);
    let big_m1 = t1.max(u - 2);
    let big_m2 = t2.max(h1 - 2);
    let s = big_m1 * q + big_m2 * (ql - 1);
    check(preset, s <= n, format!("S = M1 q + M2 (q^l - 1) <= q^(l-1)(q^l - 1) (S = {s}, n = {n})"))?;
    let m1 = t1.min(u - 2);
    let m2 = t2.min(h1 - 2);
    let curve = CurveFamily::NormTrace { q, l };
    let field = curve.field()?;
    let kernel = field.trace_zero_set(e).map_err(|err| violated(preset, err.to_string()))?;
    let trans = translation_generators(&field, &kernel, h1, 2);
    let lambda = scaling_generator(&field, u)
        .ok_or_else(|| violated(preset, format!("no element of order {u}")))?;
    Ok(CodeRecipe {
        preset: preset.name().into(),
        params: vec![
            ("q".into(), q as i64),
            ("l".into(), l as i64),
            ("t1".into(), t1 as i64),
            ("t2".into(), t2 as i64),
        ],
        curve,
        mode: AssemblyMode::Trivial,
        factors: vec![
            FactorRecipe {
                generators: trans,
                spec: FactorSpec { z: Monomial::y(1), w: Monomial::x(1), t: t1 as u32, w_max: (h1 - 2) as u32 },
            },
            FactorRecipe {
                generators: vec![AutoMap::scaling(lambda, None)],
                spec: FactorSpec { z: Monomial::x(1), w: Monomial::y(1), t: t2 as u32, w_max: (u - 2) as u32 },
            },
        ],
        claims: Claims {
            n: Some(n),
            k: Some((m1 + 1) * (m2 + 1)),
            d: Some(n as i64 - s as i64),
            max_pole: Some(s),
            localities: n_claim_loc(&[u - 1, h1 - 1]),
        },
        notes: vec![],
    })
}

fn gen_hermitian_nt(p: &PresetParams) -> Result<CodeRecipe, ForgeError> {
    let preset = Preset::GenHermitianNt;
    let (q, l) = odd_q_l(preset, &PresetParams { q: p.q.or(Some(3)), ..*p })?;
    let ql = q.pow(l);
    let ord_eta = p.ord_eta.unwrap_or(2);
    let ord_lambda = p.ord_lambda.unwrap_or(4);
    check(preset, (ql + 1) % ord_eta == 0, format!("ord(eta) | q^l + 1 (ord(eta) = {ord_eta})"))?;
    check(
        preset,
        (ql + 1) % ord_lambda == 0,
        format!("ord(lambda) | q^l + 1 (ord(lambda) = {ord_lambda})"),
    )?;
    let m = gcd(ord_eta, ord_lambda);
    check(preset, m > 1, format!("gcd(ord(eta), ord(lambda)) = m > 1 (got {m})"))?;
    let mut notes = Vec::new();
    if (ql - 1) % ord_eta != 0 || (ql - 1) % ord_lambda != 0 {
        notes.push("eta and lambda are taken in GF(q^(2l)); they do not both lie in GF(q^l)".into());
    }
    let t1 = p.t1.map_or(1, u64::from);
    let t2 = p.t2.map_or(1, u64::from);
    let n_claim = (ql - 1) * ord_eta * ord_lambda;
    let big_m1 = t1.max(ord_lambda.saturating_sub(2));
    let big_m2 = t2.max(ord_eta.saturating_sub(2));
    let s = (big_m1 * q * (ql + 1) / ord_eta + (ql + 1) * ord_eta.saturating_sub(2))
        .max(big_m2 * (ql + 1) + q * ord_lambda.saturating_sub(2));
    check(preset, s <= n_claim, format!("S <= n (S = {s}, n = {n_claim})"))?;
    let m1 = t1.min(ord_lambda.saturating_sub(2));
    let m2 = t2.min(ord_eta.saturating_sub(2));

    let rule = if p.exclusive {
        ResidualRule::Exclusive
    } else {
        ResidualRule::Sequential
    };
    let h1_size = q * ord_eta;
    let (r1, r2) = match rule {
        ResidualRule::Sequential => (h1_size - 1, ord_lambda - m),
        ResidualRule::Exclusive => (h1_size - m, ord_lambda - m),
    };
    check(preset, r1 >= 2 && r2 >= 2, format!("localities ({r1}, {r2}) must be at least 2"))?;

    let curve = CurveFamily::GeneralizedHermitian { q, l };
    let field = curve.field()?;
    let mut h1 = translation_generators(&field, &field.antitrace_roots(q), q, 2);
    let eta = scaling_generator(&field, ord_eta)
        .ok_or_else(|| violated(preset, format!("no element of order {ord_eta}")))?;
    h1.push(AutoMap::scaling(eta, None));
    let lambda = scaling_generator(&field, ord_lambda)
        .ok_or_else(|| violated(preset, format!("no element of order {ord_lambda}")))?;
    // y^ord(eta) is the smallest power of y fixed by eta.
    Ok(CodeRecipe {
        preset: preset.name().into(),
        params: vec![
            ("q".into(), q as i64),
            ("l".into(), l as i64),
            ("ord_eta".into(), ord_eta as i64),
            ("ord_lambda".into(), ord_lambda as i64),
            ("t1".into(), t1 as i64),
            ("t2".into(), t2 as i64),
            ("exclusive".into(), p.exclusive as i64),
        ],
        curve,
        mode: AssemblyMode::NonTrivial(rule),
        factors: vec![
            FactorRecipe {
                generators: h1,
                spec: FactorSpec {
                    z: Monomial::y(ord_eta as u32),
                    w: Monomial::x(1),
                    t: t1 as u32,
                    w_max: (r1 - 1) as u32,
                },
            },
            FactorRecipe {
                generators: vec![AutoMap::scaling(lambda, None)],
                spec: FactorSpec { z: Monomial::x(1), w: Monomial::y(1), t: t2 as u32, w_max: (r2 - 1) as u32 },
            },
        ],
        claims: Claims {
            n: Some(n_claim),
            k: Some((m1 + 1) * (m2 + 1)),
            d: Some(n_claim as i64 - s as i64),
            max_pole: Some(s),
            localities: n_claim_loc(&[h1_size, ord_lambda - m]),
        },
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(q: u64) -> PresetParams {
        PresetParams { q: Some(q), ..Default::default() }
    }

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert_eq!("hermitian_I_i".parse::<Preset>().unwrap(), Preset::HermitianI);
        assert!("nope".parse::<Preset>().is_err());
    }

    #[test]
    fn hermitian_i_interval() {
        let p = PresetParams { u: Some(4), ..params(3) };
        let r = recipe(Preset::HermitianI, &p).unwrap();
        assert!(r.params.contains(&("t2".into(), 1)));
        let bad = PresetParams { t2: Some(5), ..p };
        match recipe(Preset::HermitianI, &bad) {
            Err(ForgeError::Constraint { violated, .. }) => assert!(violated.contains("t2")),
            other => panic!("{other:?}"),
        }
        let zero = PresetParams { t2: Some(0), ..p };
        assert!(recipe(Preset::HermitianI, &zero).is_err());
        let bad_u = PresetParams { u: Some(3), ..params(3) };
        assert!(recipe(Preset::HermitianI, &bad_u).is_err());
    }

    #[test]
    fn gk_default_orders() {
        let r = recipe(Preset::Gk, &params(3)).unwrap();
        let get = |k: &str| r.params.iter().find(|(n, _)| n == k).unwrap().1;
        assert_eq!((get("a"), get("ord_eta"), get("ord_omega")), (3, 4, 7));
        assert_eq!(r.claims.max_pole, Some(71));
        assert_eq!(r.claims.k, Some(6));
        assert_eq!(r.claims.n, Some(6048));
        // q = 2 has no coprime pair of admissible orders above 2
        assert!(recipe(Preset::Gk, &params(2)).is_err());
    }

    #[test]
    fn gk_formula_cases() {
        let g = gk_parameters(3, 3, 4, 7, [2, 2, 2]);
        assert_eq!((g.n1, g.m1, g.k, g.s), (1, 2, 6, 71));
        for q in [4u64, 5, 7, 8] {
            if (q + 1) % 3 != 0 {
                let g = gk_parameters(q, q, q + 1, q * q - q + 1, [q - 1; 3]);
                assert_eq!(g.s, q.pow(4) - q * q - 1);
            }
        }
    }

    #[test]
    fn translation_span_sizes() {
        let c = CurveFamily::Gk { q: 3 };
        let f = c.field().unwrap();
        let roots = f.antitrace_roots(3);
        assert_eq!(roots.len(), 3);
        assert_eq!(translation_generators(&f, &roots, 3, 3).len(), 1);
        let f = Field::new(2, 4).unwrap();
        let roots = f.antitrace_roots(4);
        assert_eq!(translation_generators(&f, &roots, 4, 2).len(), 2);
        assert_eq!(translation_generators(&f, &roots, 2, 2).len(), 1);
    }

    #[test]
    fn constraint_messages() {
        let bad = PresetParams { q: Some(6), ..Default::default() };
        assert!(recipe(Preset::HermitianII, &bad).is_err());
        let even = PresetParams { q: Some(4), ..Default::default() };
        assert!(recipe(Preset::GenHermitian, &even).is_err());
        let nt = PresetParams { ord_eta: Some(2), ord_lambda: Some(1), ..Default::default() };
        assert!(recipe(Preset::GenHermitianNt, &nt).is_err());
        let missing_l = PresetParams { q: Some(2), ..Default::default() };
        assert!(recipe(Preset::NormTrace, &missing_l).is_err());
    }
}
