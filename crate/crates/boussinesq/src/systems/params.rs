use crate::error::{Error, Result};

const TOL: f64 = 1e-12;

/// Which system a parameter record describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseId {
    /// Not validated yet.
    Unassigned,
    /// Item of the thirteen-case registry of well-posed `(a,b,c,d)` sign patterns.
    Registry(u8),
    FifthOrder,
    FullDispersion,
    Kaup,
    Bathymetry,
}

/// Coefficients that only the extended systems use.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Extended {
    pub a1: Option<f64>,
    pub b1: Option<f64>,
    pub c1: Option<f64>,
    pub d1: Option<f64>,
    /// Surface-tension coefficient of the full-dispersion multiplier.
    pub beta_fd: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub eps: f64,
    pub tau: f64,
    pub case_id: CaseId,
    pub ext: Extended,
}

impl CaseParams {
    pub fn abcd(a: f64, b: f64, c: f64, d: f64, eps: f64, tau: f64) -> CaseParams {
        CaseParams { a, b, c, d, eps, tau, case_id: CaseId::Unassigned, ext: Extended::default() }
    }

    /// Same coefficients, tagged for another system.
    pub fn with_kind(mut self, id: CaseId) -> CaseParams {
        self.case_id = id;
        self
    }

    pub fn with_ext(mut self, ext: Extended) -> CaseParams {
        self.ext = ext;
        self
    }

    pub fn registry_tag(&self) -> Option<u8> {
        match self.case_id {
            CaseId::Registry(t) => Some(t),
            _ => None,
        }
    }
}

fn zero(x: f64) -> bool {
    x.abs() <= TOL
}
fn pos(x: f64) -> bool {
    x > TOL
}
fn neg(x: f64) -> bool {
    x < -TOL
}
fn same(x: f64, y: f64) -> bool {
    (x - y).abs() <= TOL
}

/// Registry item of a sign pattern; ties resolve to the lowest item.
pub fn registry_case(a: f64, b: f64, c: f64, d: f64) -> Option<u8> {
    let rules: [(u8, bool); 13] = [
        (1, pos(b) && zero(d) && neg(a) && neg(c)),
        (2, pos(b) && zero(d) && zero(a) && neg(c)),
        (3, zero(b) && pos(d) && neg(a) && neg(c)),
        (
            4,
            (!same(b, d) && pos(b) && pos(d) && neg(a) && neg(c))
                || (zero(b) && pos(d) && zero(a) && neg(c)),
        ),
        (5, !same(b, d) && pos(b) && pos(d) && zero(a) && neg(c)),
        (
            6,
            (same(b, d) && pos(b) && neg(a) && neg(c)) || (pos(b) && zero(d) && neg(a) && zero(c)),
        ),
        (
            7,
            (pos(b) && zero(d) && zero(a) && zero(c)) || (same(b, d) && pos(b) && zero(a) && neg(c)),
        ),
        (
            8,
            (pos(b) && pos(d) && neg(a) && zero(c)) || (zero(b) && pos(d) && zero(a) && zero(c)),
        ),
        (9, zero(b) && pos(d) && neg(a) && zero(c)),
        (10, pos(b) && pos(d) && zero(a) && zero(c)),
        (11, zero(b) && zero(d) && neg(a) && neg(c)),
        (12, zero(b) && zero(d) && zero(a) && neg(c)),
        (13, zero(b) && zero(d) && neg(a) && zero(c)),
    ];
    rules.iter().find(|(_, hit)| *hit).map(|(t, _)| *t)
}

/// A representative `(a, b, c, d, tau)` for each registry item.
pub fn canonical_params(tag: u8) -> Option<(f64, f64, f64, f64, f64)> {
    let s = 1.0 / 6.0;
    Some(match tag {
        1 => (-s, 2.0 / 3.0, -s, 0.0, 0.0),
        2 => (0.0, 0.5, -s, 0.0, 0.0),
        3 => (-s, 0.0, -s, 2.0 / 3.0, 0.0),
        4 => (-s, 0.5, -s, s, 0.0),
        5 => (0.0, 1.0 / 3.0, -s, s, 0.0),
        6 => (-s, 1.0 / 3.0, -s, 1.0 / 3.0, 0.0),
        7 => (0.0, 1.0 / 3.0, 0.0, 0.0, 0.0),
        8 => (-s, 1.0 / 3.0, 0.0, s, 0.0),
        9 => (-s, 0.0, 0.0, 0.5, 0.0),
        10 => (0.0, s, 0.0, s, 0.0),
        11 => (-s, 0.0, -s, 0.0, 2.0 / 3.0),
        12 => (0.0, 0.0, -1.0, 0.0, 4.0 / 3.0),
        13 => (-1.0, 0.0, 0.0, 0.0, 4.0 / 3.0),
        _ => return None,
    })
}

fn linearly_well_posed(a: f64, b: f64, c: f64, d: f64) -> bool {
    let signs = a <= TOL && c <= TOL && b >= -TOL && d >= -TOL;
    let equal = same(a, c) && b >= -TOL && d >= -TOL;
    signs || equal
}

/// Check the constraint, well-posedness and registry membership; return the tagged record.
pub fn validate_params(p: CaseParams) -> Result<CaseParams> {
    if !(p.eps.is_finite() && p.eps > 0.0) {
        return Err(Error::Parameter(format!("eps must be positive, got {}", p.eps)));
    }
    let CaseParams { a, b, c, d, .. } = p;
    if ![a, b, c, d, p.tau].iter().all(|v| v.is_finite()) {
        return Err(Error::Parameter("non-finite coefficient".into()));
    }
    match p.case_id {
        CaseId::FifthOrder => validate_fifth(p),
        CaseId::FullDispersion | CaseId::Kaup => {
            if !(p.ext.beta_fd.is_finite() && p.ext.beta_fd >= 0.0) {
                return Err(Error::Parameter(format!("beta must be >= 0, got {}", p.ext.beta_fd)));
            }
            Ok(p)
        }
        CaseId::Unassigned | CaseId::Registry(_) | CaseId::Bathymetry => {
            if p.tau < 0.0 {
                return Err(Error::Parameter(format!("tau must be >= 0, got {}", p.tau)));
            }
            let sum = a + b + c + d;
            let expected = 1.0 / 3.0 - p.tau;
            if (sum - expected).abs() > TOL {
                return Err(Error::Constraint { sum, expected });
            }
            if !linearly_well_posed(a, b, c, d) {
                return Err(Error::IllPosed { a, b, c, d });
            }
            let tag = registry_case(a, b, c, d).ok_or(Error::NoRegistryMatch { a, b, c, d })?;
            if let CaseId::Registry(claimed) = p.case_id {
                if claimed != tag {
                    return Err(Error::Parameter(format!(
                        "coefficients match registry case {tag}, config claims {claimed}"
                    )));
                }
            }
            let id = if p.case_id == CaseId::Bathymetry { CaseId::Bathymetry } else { CaseId::Registry(tag) };
            Ok(p.with_kind(id))
        }
    }
}

fn validate_fifth(p: CaseParams) -> Result<CaseParams> {
    let e = p.ext;
    let (a1, b1, c1, d1) = match (e.a1, e.b1, e.c1, e.d1) {
        (Some(a1), Some(b1), Some(c1), Some(d1)) => (a1, b1, c1, d1),
        _ => return Err(Error::MissingCoefficients("a1, b1, c1, d1".into())),
    };
    let CaseParams { a, b, c, d, .. } = p;
    let ok = b >= 0.0 && pos(b1) && neg(a) && zero(a1) && d >= 0.0 && pos(d1) && neg(c) && zero(c1);
    if !ok {
        return Err(Error::IllPosed { a, b, c, d });
    }
    Ok(p)
}
