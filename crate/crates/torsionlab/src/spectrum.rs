//! Exact Dirichlet eigenvalue enumeration and eigenfunction Fourier
//! coefficients for rectangles and right isosceles triangles.
//!
//! Eigenvalues are kept as exact rationals in units of π² so isospectrality
//! is a multiset identity, never a float comparison. Coefficients are floats.
//!
//! Two triangle coefficient sources coexist deliberately. `Paper` reproduces
//! the published closed form `a² = 16L²/(π⁴j²k²)`; `Exact` carries the value
//! of the defining integral `∫φ`, whose closed form was derived from analytic
//! antiderivatives and is validated against adaptive quadrature in the tests.
//! The two disagree (for L = 1, mode (1,2): 0.2026 vs 0.5404); downstream
//! code exposes both paths and lets the Poisson oracle adjudicate.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::json;

use crate::geometry::{Length, Region, Shape};
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Pair of positive mode integers `(j, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex {
    pub j: u32,
    pub k: u32,
}

impl ModeIndex {
    pub fn new(j: u32, k: u32) -> Result<Self> {
        if j == 0 || k == 0 {
            return Err(Error::ZeroModeIndex { j, k });
        }
        Ok(ModeIndex { j, k })
    }

    fn require_triangle_order(self) -> Result<Self> {
        if self.j >= self.k {
            return Err(Error::ModeOrder {
                j: self.j,
                k: self.k,
            });
        }
        Ok(self)
    }
}

/// A Dirichlet eigenvalue `λ = (num/den)·π²` with exact rational `num/den`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RationalEigenvalue(Rational);

impl RationalEigenvalue {
    fn new(ratio: Rational) -> Self {
        debug_assert!(ratio.is_positive());
        RationalEigenvalue(ratio)
    }

    /// The exact multiple of π².
    pub fn ratio(&self) -> &Rational {
        &self.0
    }

    /// Numerator of the reduced ratio.
    pub fn num(&self) -> &BigInt {
        self.0.numer()
    }

    /// Denominator of the reduced ratio.
    pub fn den(&self) -> &BigInt {
        self.0.denom()
    }

    /// The eigenvalue itself, `(num/den)·π²`, as a float.
    pub fn value(&self) -> f64 {
        rational::to_f64(&self.0) * PI * PI
    }
}

impl std::fmt::Display for RationalEigenvalue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}·π²", rational::format_rational(&self.0))
    }
}

/// Which triangle coefficient formula feeds a spectral sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffSource {
    /// The published closed form.
    Paper,
    /// The defining integral `∫φ`, quadrature-validated.
    Exact,
}

impl CoeffSource {
    pub fn as_str(self) -> &'static str {
        match self {
            CoeffSource::Paper => "paper",
            CoeffSource::Exact => "exact",
        }
    }
}

impl std::str::FromStr for CoeffSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(CoeffSource::Paper),
            "exact" => Ok(CoeffSource::Exact),
            other => Err(Error::ArgumentOutOfRange(format!(
                "coefficient source must be `paper` or `exact`, got `{other}`"
            ))),
        }
    }
}

/// `λ_{j,k}/π² = j²/L² + k²/H²` for a rectangle, exactly.
pub fn rect_eigenvalue(length: &Length, height: &Length, m: ModeIndex) -> Result<RationalEigenvalue> {
    let l2 = length.require_square("L")?;
    let h2 = height.require_square("H")?;
    let j2 = Rational::from_integer(BigInt::from(u64::from(m.j) * u64::from(m.j)));
    let k2 = Rational::from_integer(BigInt::from(u64::from(m.k) * u64::from(m.k)));
    Ok(RationalEigenvalue::new(j2 / l2 + k2 / h2))
}

/// `λ_{j,k}/π² = (j² + k²)/L²` for a right isosceles triangle, `j < k`, exactly.
pub fn tri_eigenvalue(leg: &Length, m: ModeIndex) -> Result<RationalEigenvalue> {
    let m = m.require_triangle_order()?;
    let l2 = leg.require_square("L")?;
    let s = Rational::from_integer(BigInt::from(
        u64::from(m.j) * u64::from(m.j) + u64::from(m.k) * u64::from(m.k),
    ));
    Ok(RationalEigenvalue::new(s / l2))
}

/// Rectangle Fourier coefficient `a_{j,k} = ∫φ`: `8√(LH)/(π²jk)` when both
/// indices are odd, zero otherwise.
pub fn rect_coefficient(length: f64, height: f64, m: ModeIndex) -> f64 {
    if m.j % 2 == 1 && m.k % 2 == 1 {
        8.0 * (length * height).sqrt() / (PI * PI * f64::from(m.j) * f64::from(m.k))
    } else {
        0.0
    }
}

/// The published triangle coefficient magnitude `√(a²) = 4L/(π²jk)` for
/// opposite-parity `(j,k)`, zero otherwise.
///
/// Reproduces the printed value for the audit; it disagrees with the
/// defining integral (see [`tri_coefficient_exact`]).
pub fn tri_coefficient_paper(leg: f64, m: ModeIndex) -> Result<f64> {
    let m = m.require_triangle_order()?;
    if m.j % 2 == m.k % 2 {
        return Ok(0.0);
    }
    Ok(4.0 * leg / (PI * PI * f64::from(m.j) * f64::from(m.k)))
}

/// Triangle Fourier coefficient from the defining integral `a_{j,k} = ∫φ`.
///
/// Integrating the two-term eigenfunction with its `(−1)^{j+k+1}` cross sign
/// over `{0 ≤ x, 0 ≤ y, x + y ≤ L}` gives, for opposite-parity `(j,k)`:
///
/// * `j` odd, `k` even:  `8Lk/(π²·j·(k²−j²))`
/// * `j` even, `k` odd:  `−8Lj/(π²·k·(k²−j²))`
///
/// and zero for equal parity. Validated against adaptive 2D quadrature of
/// the eigenfunction to 1e-12.
pub fn tri_coefficient_exact(leg: f64, m: ModeIndex) -> Result<f64> {
    let m = m.require_triangle_order()?;
    if m.j % 2 == m.k % 2 {
        return Ok(0.0);
    }
    let j = f64::from(m.j);
    let k = f64::from(m.k);
    let denom = PI * PI * (k * k - j * j);
    if m.j % 2 == 1 {
        Ok(8.0 * leg * k / (j * denom))
    } else {
        Ok(-8.0 * leg * j / (k * denom))
    }
}

/// Coefficient of the given shape's mode under the chosen source.
///
/// Rectangles have a single published formula (it agrees with the defining
/// integral), so the source only matters for triangles.
pub fn mode_coefficient(shape: &Shape, m: ModeIndex, source: CoeffSource) -> Result<f64> {
    match shape {
        Shape::Rectangle { length, height } => {
            Ok(rect_coefficient(length.value(), height.value(), m))
        }
        Shape::RightIsoscelesTriangle { leg } => match source {
            CoeffSource::Paper => tri_coefficient_paper(leg.value(), m),
            CoeffSource::Exact => tri_coefficient_exact(leg.value(), m),
        },
    }
}

/// Exact eigenvalue of the given shape's mode.
pub fn shape_eigenvalue(shape: &Shape, m: ModeIndex) -> Result<RationalEigenvalue> {
    match shape {
        Shape::Rectangle { length, height } => rect_eigenvalue(length, height, m),
        Shape::RightIsoscelesTriangle { leg } => tri_eigenvalue(leg, m),
    }
}

const DOMAIN_SLACK: f64 = 1e-12;

/// Evaluates the L²-normalized eigenfunction `φ_{j,k}` at `(x, y)`.
///
/// Rectangle: `(2/√(LH))·sin(jπx/L)·sin(kπy/H)`. Triangle:
/// `(2/L)·(sin(jπx/L)sin(kπy/L) + (−1)^{j+k+1} sin(kπx/L)sin(jπy/L))` with `j < k`.
pub fn eigenfunction_value(shape: &Shape, m: ModeIndex, x: f64, y: f64) -> Result<f64> {
    match shape {
        Shape::Rectangle { length, height } => {
            let l = length.value();
            let h = height.value();
            if !((-DOMAIN_SLACK..=l + DOMAIN_SLACK).contains(&x)
                && (-DOMAIN_SLACK..=h + DOMAIN_SLACK).contains(&y))
            {
                return Err(Error::OutsideDomain { x, y });
            }
            Ok(2.0 / (l * h).sqrt()
                * (f64::from(m.j) * PI * x / l).sin()
                * (f64::from(m.k) * PI * y / h).sin())
        }
        Shape::RightIsoscelesTriangle { leg } => {
            let m = m.require_triangle_order()?;
            let l = leg.value();
            let slack = DOMAIN_SLACK * l.max(1.0);
            if !((-slack..=l + slack).contains(&x) && y >= -slack && x + y <= l + slack) {
                return Err(Error::OutsideDomain { x, y });
            }
            let (j, k) = (f64::from(m.j), f64::from(m.k));
            let sign = if (m.j + m.k) % 2 == 1 { 1.0 } else { -1.0 };
            Ok(2.0 / l
                * ((j * PI * x / l).sin() * (k * PI * y / l).sin()
                    + sign * (k * PI * x / l).sin() * (j * PI * y / l).sin()))
        }
    }
}

/// Analytic Laplacian of the eigenfunction, from term-wise second derivatives.
///
/// Used by the Helmholtz residual checks: `Δφ + λφ` must vanish.
pub fn eigenfunction_laplacian(shape: &Shape, m: ModeIndex, x: f64, y: f64) -> Result<f64> {
    match shape {
        Shape::Rectangle { length, height } => {
            let phi = eigenfunction_value(shape, m, x, y)?;
            let l = length.value();
            let h = height.value();
            let wx = f64::from(m.j) * PI / l;
            let wy = f64::from(m.k) * PI / h;
            Ok(-(wx * wx) * phi - (wy * wy) * phi)
        }
        Shape::RightIsoscelesTriangle { leg } => {
            let m = m.require_triangle_order()?;
            let l = leg.value();
            // evaluate the two products separately so each term carries its own frequency
            let (j, k) = (f64::from(m.j), f64::from(m.k));
            let sign = if (m.j + m.k) % 2 == 1 { 1.0 } else { -1.0 };
            let t1 = (j * PI * x / l).sin() * (k * PI * y / l).sin();
            let t2 = (k * PI * x / l).sin() * (j * PI * y / l).sin();
            let w = PI / l;
            let xx = -(w * w) * (j * j * t1 + sign * k * k * t2);
            let yy = -(w * w) * (k * k * t1 + sign * j * j * t2);
            Ok(2.0 / l * (xx + yy))
        }
    }
}

/// Where an eigenvalue line comes from: component index and mode pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeOrigin {
    pub shape: usize,
    pub j: u32,
    pub k: u32,
}

/// One line of a spectrum: an eigenvalue, its multiplicity, and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLine {
    pub lambda: RationalEigenvalue,
    pub multiplicity: usize,
    pub modes: Vec<ModeOrigin>,
}

/// All eigenvalues of a region up to `bound·π²`, as an exact sorted multiset.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSlice {
    pub bound: Rational,
    pub lines: Vec<SpectralLine>,
}

impl SpectrumSlice {
    /// Total eigenvalue count with multiplicity.
    pub fn counting_function(&self) -> usize {
        self.lines.iter().map(|l| l.multiplicity).sum()
    }

    /// Smallest eigenvalue, if the slice is nonempty.
    pub fn lambda_min(&self) -> Option<&RationalEigenvalue> {
        self.lines.first().map(|l| &l.lambda)
    }

    /// JSON per the wire schema:
    /// `{"bound": "p/q", "lines": [{"lambda": "p/q", "mult": n, "modes": [[shape, j, k], ...]}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "bound": rational::format_rational(&self.bound),
            "lines": self.lines.iter().map(|line| {
                json!({
                    "lambda": rational::format_rational(line.lambda.ratio()),
                    "mult": line.multiplicity,
                    "modes": line.modes.iter()
                        .map(|o| json!([o.shape, o.j, o.k]))
                        .collect::<Vec<_>>(),
                })
            }).collect::<Vec<_>>(),
        })
    }
}

/// Enumerates every eigenvalue `≤ bound·π²` of the region, exactly and
/// completely, sorted ascending with ties merged into multiplicity lines.
pub fn enumerate_spectrum(region: &Region, bound: &Rational) -> Result<SpectrumSlice> {
    if !bound.is_positive() {
        return Err(Error::NonPositiveBound);
    }
    let mut table: BTreeMap<Rational, Vec<ModeOrigin>> = BTreeMap::new();
    for (shape_idx, shape) in region.components().iter().enumerate() {
        match shape {
            Shape::Rectangle { length, height } => {
                let l2 = length.require_square("L")?.clone();
                let h2 = height.require_square("H")?.clone();
                enumerate_rectangle(&l2, &h2, bound, |j, k, ratio| {
                    table
                        .entry(ratio)
                        .or_default()
                        .push(ModeOrigin { shape: shape_idx, j, k });
                });
            }
            Shape::RightIsoscelesTriangle { leg } => {
                let l2 = leg.require_square("L")?.clone();
                enumerate_triangle(&l2, bound, |j, k, ratio| {
                    table
                        .entry(ratio)
                        .or_default()
                        .push(ModeOrigin { shape: shape_idx, j, k });
                });
            }
        }
    }
    let lines = table
        .into_iter()
        .map(|(ratio, mut modes)| {
            // ties break by (shape index, j, k)
            modes.sort_by_key(|o| (o.shape, o.j, o.k));
            SpectralLine {
                lambda: RationalEigenvalue::new(ratio),
                multiplicity: modes.len(),
                modes,
            }
        })
        .collect();
    Ok(SpectrumSlice {
        bound: bound.clone(),
        lines,
    })
}

fn square_of(n: u32) -> Rational {
    Rational::from_integer(BigInt::from(u64::from(n) * u64::from(n)))
}

/// Sweeps rectangle modes with `j²/L² + k²/H² ≤ bound`, in (j, k) order.
fn enumerate_rectangle(
    l2: &Rational,
    h2: &Rational,
    bound: &Rational,
    mut emit: impl FnMut(u32, u32, Rational),
) {
    let mut j = 1u32;
    loop {
        let jx = square_of(j) / l2;
        if &jx >= bound {
            break;
        }
        let mut k = 1u32;
        loop {
            let ratio = &jx + square_of(k) / h2;
            if &ratio > bound {
                break;
            }
            emit(j, k, ratio);
            k += 1;
        }
        j += 1;
    }
}

/// Sweeps triangle modes `j < k` with `(j² + k²)/L² ≤ bound`, in (j, k) order.
fn enumerate_triangle(l2: &Rational, bound: &Rational, mut emit: impl FnMut(u32, u32, Rational)) {
    let mut j = 1u32;
    loop {
        let smallest = (square_of(j) + square_of(j + 1)) / l2;
        if &smallest > bound {
            break;
        }
        let mut k = j + 1;
        loop {
            let ratio = (square_of(j) + square_of(k)) / l2;
            if &ratio > bound {
                break;
            }
            emit(j, k, ratio);
            k += 1;
        }
        j += 1;
    }
}

/// The smallest eigenvalue of a region (swept with a growing bound).
pub fn lambda_min(region: &Region) -> Result<RationalEigenvalue> {
    let mut bound = rational::from_int(4);
    loop {
        let slice = enumerate_spectrum(region, &bound)?;
        if let Some(lambda) = slice.lambda_min() {
            return Ok(lambda.clone());
        }
        bound = bound * rational::from_int(4);
    }
}

/// Smallest eigenvalue line on which two spectra disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMismatch {
    pub lambda: RationalEigenvalue,
    pub multiplicity_a: usize,
    pub multiplicity_b: usize,
}

/// Result of an exact multiset comparison of two spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct IsospectralReport {
    pub bound: Rational,
    pub equal: bool,
    pub first_mismatch: Option<SpectrumMismatch>,
}

/// Compares the spectra of two regions up to `bound·π²` as exact multisets.
pub fn isospectral_check(a: &Region, b: &Region, bound: &Rational) -> Result<IsospectralReport> {
    let sa = enumerate_spectrum(a, bound)?;
    let sb = enumerate_spectrum(b, bound)?;
    let mut ia = sa.lines.iter().peekable();
    let mut ib = sb.lines.iter().peekable();
    let mut first_mismatch = None;
    while first_mismatch.is_none() {
        match (ia.peek(), ib.peek()) {
            (None, None) => break,
            (Some(la), None) => {
                first_mismatch = Some(SpectrumMismatch {
                    lambda: la.lambda.clone(),
                    multiplicity_a: la.multiplicity,
                    multiplicity_b: 0,
                });
            }
            (None, Some(lb)) => {
                first_mismatch = Some(SpectrumMismatch {
                    lambda: lb.lambda.clone(),
                    multiplicity_a: 0,
                    multiplicity_b: lb.multiplicity,
                });
            }
            (Some(la), Some(lb)) => {
                if la.lambda == lb.lambda {
                    if la.multiplicity != lb.multiplicity {
                        first_mismatch = Some(SpectrumMismatch {
                            lambda: la.lambda.clone(),
                            multiplicity_a: la.multiplicity,
                            multiplicity_b: lb.multiplicity,
                        });
                    } else {
                        ia.next();
                        ib.next();
                    }
                } else if la.lambda < lb.lambda {
                    first_mismatch = Some(SpectrumMismatch {
                        lambda: la.lambda.clone(),
                        multiplicity_a: la.multiplicity,
                        multiplicity_b: 0,
                    });
                } else {
                    first_mismatch = Some(SpectrumMismatch {
                        lambda: lb.lambda.clone(),
                        multiplicity_a: 0,
                        multiplicity_b: lb.multiplicity,
                    });
                }
            }
        }
    }
    Ok(IsospectralReport {
        bound: bound.clone(),
        equal: first_mismatch.is_none(),
        first_mismatch,
    })
}

/// One term of a spectral sum: float eigenvalue plus its squared coefficient.
#[derive(Debug, Clone, Copy)]
pub struct ModeTerm {
    pub lambda: f64,
    pub coeff_sq: f64,
}

/// Collects `(λ, a²)` for every mode of the region with `λ ≤ cutoff·π²`,
/// in deterministic (component, j, k) order. Zero-coefficient modes are kept
/// out to keep downstream sums short.
pub fn mode_terms(region: &Region, cutoff: &Rational, source: CoeffSource) -> Result<Vec<ModeTerm>> {
    if !cutoff.is_positive() {
        return Err(Error::NonPositiveBound);
    }
    let pi2 = PI * PI;
    let mut terms = Vec::new();
    for shape in region.components() {
        match shape {
            Shape::Rectangle { length, height } => {
                let l2 = length.require_square("L")?.clone();
                let h2 = height.require_square("H")?.clone();
                let (l, h) = (length.value(), height.value());
                enumerate_rectangle(&l2, &h2, cutoff, |j, k, ratio| {
                    let a = rect_coefficient(l, h, ModeIndex { j, k });
                    if a != 0.0 {
                        terms.push(ModeTerm {
                            lambda: rational::to_f64(&ratio) * pi2,
                            coeff_sq: a * a,
                        });
                    }
                });
            }
            Shape::RightIsoscelesTriangle { leg } => {
                let l2 = leg.require_square("L")?.clone();
                let lv = leg.value();
                let mut first_err = None;
                enumerate_triangle(&l2, cutoff, |j, k, ratio| {
                    let m = ModeIndex { j, k };
                    let a = match source {
                        CoeffSource::Paper => tri_coefficient_paper(lv, m),
                        CoeffSource::Exact => tri_coefficient_exact(lv, m),
                    };
                    match a {
                        Ok(a) if a != 0.0 => terms.push(ModeTerm {
                            lambda: rational::to_f64(&ratio) * pi2,
                            coeff_sq: a * a,
                        }),
                        Ok(_) => {}
                        Err(e) => first_err = Some(e),
                    }
                });
                if let Some(e) = first_err {
                    return Err(e);
                }
            }
        }
    }
    Ok(terms)
}
