//! Torsional rigidity through the closed-form series and through the
//! spectral double sum, with additivity over disjoint components.
//!
//! Units: torsional rigidity carries length⁴ and scales as `s⁴` under
//! similarity. The closed rectangle form and the published triangle form
//! evaluate their respective series; the spectral route sums `a²/λ` over
//! enumerated modes and can use either triangle coefficient source.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::json;

use crate::geometry::{Region, Shape};
use crate::rational::{self, Rational};
use crate::series::{self, Kernel, Parity};
use crate::spectrum::{mode_terms, CoeffSource};
use crate::{Error, Result};

/// How a torsion value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionMethod {
    RectClosed,
    TriClosedPaper,
    Spectral,
    Oracle,
}

impl TorsionMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            TorsionMethod::RectClosed => "rect_closed",
            TorsionMethod::TriClosedPaper => "tri_closed_paper",
            TorsionMethod::Spectral => "spectral",
            TorsionMethod::Oracle => "oracle",
        }
    }
}

/// A torsion value with provenance and a truncation indicator.
///
/// For closed forms `tail_bound` is the certified series tail propagated
/// through the prefactor. For the spectral method it is the last-decade
/// contribution (modes with `λ > cutoff·π²/10`) — a heuristic diagnostic,
/// not a certified bound, since the triangle mode sum has no closed tail.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionResult {
    pub value: f64,
    pub method: TorsionMethod,
    pub tail_bound: f64,
    pub cutoff: Option<Rational>,
}

impl TorsionResult {
    /// JSON per the wire schema: `{"value":…, "method":…, "tail":…, "cutoff":…}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "value": self.value,
            "method": self.method.as_str(),
            "tail": self.tail_bound,
            "cutoff": self.cutoff.as_ref().map(rational::format_rational),
        })
    }
}

fn check_dimension(v: f64) -> Result<f64> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::NonPositiveDimension(v));
    }
    Ok(v)
}

/// Closed-form torsional rigidity of an `L×H` rectangle:
/// `T = (4³H³L/π⁶)·(Z_r − (β/4)·Σ_{k odd} k⁻⁵ tanh(kγ/2))`
/// with `β = πH/L`, `γ = πL/H`, `Z_r = π⁶/768`.
pub fn torsion_rect_closed(length: f64, height: f64) -> Result<TorsionResult> {
    let l = check_dimension(length)?;
    let h = check_dimension(height)?;
    let beta = PI * h / l;
    let gamma = PI * l / h;
    let sum = series::hyper_sum(Kernel::Tanh, Parity::Odd, gamma / 2.0)?;
    let z_r = PI.powi(6) / 768.0;
    let prefactor = 64.0 * h.powi(3) * l / PI.powi(6);
    Ok(TorsionResult {
        value: prefactor * (z_r - beta / 4.0 * sum.value),
        method: TorsionMethod::RectClosed,
        tail_bound: prefactor * beta / 4.0 * sum.tail_bound,
        cutoff: None,
    })
}

/// The published closed form for a right isosceles triangle of leg `L`:
/// `T = (1/2)(4²L⁴/π⁶)·(Z_t − (π/2)(1/2⁶)Σ_{k≥1} k⁻⁵ tanh(kπ) − (π/4)Σ_{k odd} k⁻⁵ coth(kπ/2))`
/// with `Z_t = π⁶/960`.
///
/// This reproduces the printed value; it participates in the audit, not in
/// the oracle-backed verdict. The Poisson oracle and the exact-coefficient
/// spectral sum both give a different (much larger) value.
pub fn torsion_tri_closed_paper(leg: f64) -> Result<TorsionResult> {
    let l = check_dimension(leg)?;
    let tanh_all = series::hyper_sum(Kernel::Tanh, Parity::All, PI)?;
    let coth_odd = series::hyper_sum(Kernel::Coth, Parity::Odd, PI / 2.0)?;
    let z_t = PI.powi(6) / 960.0;
    let inner = z_t - PI / 2.0 / 64.0 * tanh_all.value - PI / 4.0 * coth_odd.value;
    let prefactor = 0.5 * 16.0 * l.powi(4) / PI.powi(6);
    Ok(TorsionResult {
        value: prefactor * inner,
        method: TorsionMethod::TriClosedPaper,
        tail_bound: prefactor
            * (PI / 2.0 / 64.0 * tanh_all.tail_bound + PI / 4.0 * coth_odd.tail_bound),
        cutoff: None,
    })
}

/// Spectral torsional rigidity `Σ a²/λ` over all modes with `λ ≤ cutoff·π²`,
/// summed across components in deterministic order.
///
/// Monotone nondecreasing in the cutoff: every term is nonnegative.
pub fn torsion_spectral(
    region: &Region,
    cutoff: &Rational,
    source: CoeffSource,
) -> Result<TorsionResult> {
    let terms = mode_terms(region, cutoff, source)?;
    let value: f64 = terms.iter().map(|t| t.coeff_sq / t.lambda).sum();
    let decade_floor = rational::to_f64(cutoff) * PI * PI / 10.0;
    let tail_bound: f64 = terms
        .iter()
        .filter(|t| t.lambda > decade_floor)
        .map(|t| t.coeff_sq / t.lambda)
        .sum();
    Ok(TorsionResult {
        value,
        method: TorsionMethod::Spectral,
        tail_bound,
        cutoff: Some(cutoff.clone()),
    })
}

/// Closed-form torsion of a region: the sum over components, rectangles by
/// [`torsion_rect_closed`], triangles by [`torsion_tri_closed_paper`].
#[derive(Debug, Clone, PartialEq)]
pub struct RegionTorsion {
    pub value: f64,
    pub tail_bound: f64,
    pub per_component: Vec<TorsionResult>,
}

pub fn torsion_region_closed(region: &Region) -> Result<RegionTorsion> {
    let mut per_component = Vec::with_capacity(region.components().len());
    for shape in region.components() {
        let r = match shape {
            Shape::Rectangle { length, height } => {
                torsion_rect_closed(length.value(), height.value())?
            }
            Shape::RightIsoscelesTriangle { leg } => torsion_tri_closed_paper(leg.value())?,
        };
        per_component.push(r);
    }
    Ok(RegionTorsion {
        value: per_component.iter().map(|r| r.value).sum(),
        tail_bound: per_component.iter().map(|r| r.tail_bound).sum(),
        per_component,
    })
}

/// Exact Rayleigh-quotient lower bound for the unit-leg triangle torsion:
/// the trial function `u = xy(1−x−y)` gives `(∫u)²/∫|∇u|²` in exact
/// rational arithmetic (it reduces to 1/160).
pub fn triangle_trial_lower_bound() -> Rational {
    // ∫u over the triangle: u = xy − x²y − xy²
    let int_u = monomial_integral(1, 1) - monomial_integral(2, 1) - monomial_integral(1, 2);
    // u_x = y(1 − 2x − y); expand y²(1 − 2x − y)² into monomials
    // (1 − 2x − y)² = 1 + 4x² + y² − 4x − 2y + 4xy
    let int_ux2 = monomial_integral(0, 2) + monomial_integral(2, 2) * rational::from_int(4)
        + monomial_integral(0, 4)
        - monomial_integral(1, 2) * rational::from_int(4)
        - monomial_integral(0, 3) * rational::from_int(2)
        + monomial_integral(1, 3) * rational::from_int(4);
    // by the x↔y symmetry of the triangle and of u, ∫u_y² = ∫u_x²
    let dirichlet = &int_ux2 + &int_ux2;
    &int_u * &int_u / dirichlet
}

/// `∫_T x^a y^b` over the unit-leg triangle `{x,y ≥ 0, x+y ≤ 1}`,
/// which is `a!·b!/(a+b+2)!` exactly.
fn monomial_integral(a: u32, b: u32) -> Rational {
    Rational::new(
        factorial(a) * factorial(b),
        factorial(a + b + 2),
    )
}

fn factorial(n: u32) -> BigInt {
    let mut f = BigInt::one();
    for i in 2..=n {
        f *= i;
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{chapman_pair, Length};
    use crate::spectrum::lambda_min;
    use proptest::prelude::*;

    // Frozen against the 40-digit series evaluations.
    const T_RECT_1_1: f64 = 0.035144253738788429;
    const T_RECT_2_1: f64 = 0.11434083855978538;
    const T_TRI_PAPER_1: f64 = 0.00096685737232268222;
    // Frozen against 40-digit partial sums of the defining double series.
    const T_SPEC_SQUARE_CUT2: f64 = 0.033285167145467273;
    const T_SPEC_SQUARE_CUT1E4: f64 = 0.035144226388066604;
    const T_SPEC_TRI1_CUT200_EXACT: f64 = 0.0065148783058875227;

    fn square_region() -> Region {
        Region::single(Shape::unit_square())
    }

    fn tri_region(leg: i64) -> Region {
        Region::single(Shape::triangle(Length::from_int(leg).unwrap()))
    }

    #[test]
    fn rect_closed_matches_frozen_values() {
        let t = torsion_rect_closed(1.0, 1.0).unwrap();
        assert!((t.value - T_RECT_1_1).abs() < 1e-14, "got {}", t.value);
        let t = torsion_rect_closed(2.0, 1.0).unwrap();
        assert!((t.value - T_RECT_2_1).abs() < 1e-14, "got {}", t.value);
    }

    #[test]
    fn rect_closed_rejects_nonpositive_dimensions() {
        assert!(torsion_rect_closed(0.0, 1.0).is_err());
        assert!(torsion_rect_closed(1.0, -2.0).is_err());
        assert!(torsion_rect_closed(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn rect_closed_scales_as_fourth_power() {
        let t1 = torsion_rect_closed(1.0, 1.0).unwrap().value;
        let t2 = torsion_rect_closed(2.0, 2.0).unwrap().value;
        assert!((t2 - 16.0 * t1).abs() < 1e-12 * t2.abs());
    }

    #[test]
    fn tri_paper_matches_frozen_value_and_scales() {
        let t1 = torsion_tri_closed_paper(1.0).unwrap();
        assert!((t1.value - T_TRI_PAPER_1).abs() < 1e-15, "got {}", t1.value);
        let t2 = torsion_tri_closed_paper(2.0).unwrap();
        assert!((t2.value - 16.0 * t1.value).abs() < 1e-12 * t2.value);
        let ts = torsion_tri_closed_paper(2.0_f64.sqrt()).unwrap();
        assert!((ts.value - 4.0 * t1.value).abs() < 1e-12 * ts.value.abs() + 1e-15);
    }

    #[test]
    fn spectral_square_single_mode() {
        // cutoff 2 keeps only mode (1,1): a²/λ = 64/(2π⁶)
        for source in [CoeffSource::Paper, CoeffSource::Exact] {
            let t = torsion_spectral(&square_region(), &rational::from_int(2), source).unwrap();
            assert!((t.value - T_SPEC_SQUARE_CUT2).abs() < 1e-15, "got {}", t.value);
        }
    }

    #[test]
    fn spectral_square_converges_to_closed_form_from_below() {
        let closed = torsion_rect_closed(1.0, 1.0).unwrap().value;
        let t = torsion_spectral(&square_region(), &rational::from_int(10_000), CoeffSource::Exact)
            .unwrap();
        assert!((t.value - T_SPEC_SQUARE_CUT1E4).abs() < 1e-14, "got {}", t.value);
        assert!(t.value < closed);
        assert!(closed - t.value < 1e-5);
    }

    #[test]
    fn spectral_tri_exact_matches_frozen_partial_sum() {
        let t = torsion_spectral(&tri_region(1), &rational::from_int(200), CoeffSource::Exact)
            .unwrap();
        assert!((t.value - T_SPEC_TRI1_CUT200_EXACT).abs() < 1e-14, "got {}", t.value);
    }

    #[test]
    fn spectral_is_monotone_in_cutoff() {
        let (c1, _) = chapman_pair();
        let mut prev = 0.0;
        for cutoff in [10, 50, 100, 500, 1000, 2000] {
            let t = torsion_spectral(&c1, &rational::from_int(cutoff), CoeffSource::Exact)
                .unwrap()
                .value;
            assert!(t >= prev, "cutoff {cutoff}: {t} < {prev}");
            prev = t;
        }
    }

    #[test]
    fn region_closed_is_additive() {
        let (c1, _) = chapman_pair();
        let total = torsion_region_closed(&c1).unwrap();
        let sq = torsion_rect_closed(1.0, 1.0).unwrap().value;
        let tr = torsion_tri_closed_paper(2.0).unwrap().value;
        assert!((total.value - (sq + tr)).abs() < 1e-15);
        assert_eq!(total.per_component.len(), 2);
        assert_eq!(total.per_component[0].method, TorsionMethod::RectClosed);
        assert_eq!(total.per_component[1].method, TorsionMethod::TriClosedPaper);

        let alone = torsion_region_closed(&square_region()).unwrap();
        assert_eq!(alone.value, sq);
    }

    #[test]
    fn region_closed_scales_as_fourth_power() {
        let (c1, _) = chapman_pair();
        let base = torsion_region_closed(&c1).unwrap().value;
        let scaled = torsion_region_closed(&c1.scale(2.0).unwrap()).unwrap().value;
        assert!((scaled - 16.0 * base).abs() < 1e-12 * scaled.abs());
    }

    #[test]
    fn polya_szego_product_bound() {
        // T·λ₁ ≤ Area for every in-scope shape
        let shapes: Vec<(Region, f64)> = vec![
            (square_region(), torsion_rect_closed(1.0, 1.0).unwrap().value),
            (
                Region::single(Shape::rectangle(
                    Length::from_int(2).unwrap(),
                    Length::from_int(1).unwrap(),
                )),
                torsion_rect_closed(2.0, 1.0).unwrap().value,
            ),
            (
                tri_region(1),
                torsion_spectral(&tri_region(1), &rational::from_int(2000), CoeffSource::Exact)
                    .unwrap()
                    .value,
            ),
            (
                tri_region(2),
                torsion_spectral(&tri_region(2), &rational::from_int(2000), CoeffSource::Exact)
                    .unwrap()
                    .value,
            ),
        ];
        for (region, torsion) in shapes {
            let l1 = lambda_min(&region).unwrap().value();
            assert!(
                torsion * l1 <= region.area(),
                "{}: T·λ₁ = {} > area {}",
                region,
                torsion * l1,
                region.area()
            );
        }
    }

    #[test]
    fn domain_monotonicity_triangle_inside_square() {
        let t_tri = torsion_spectral(&tri_region(1), &rational::from_int(2000), CoeffSource::Exact)
            .unwrap()
            .value;
        let t_square = torsion_rect_closed(1.0, 1.0).unwrap().value;
        assert!(t_tri < t_square);
    }

    #[test]
    fn trial_function_bound_is_exactly_one_160th() {
        assert_eq!(triangle_trial_lower_bound(), rational::from_pair(1, 160));
    }

    #[test]
    fn spectral_exact_triangle_beats_the_trial_bound() {
        let t = torsion_spectral(&tri_region(1), &rational::from_int(2000), CoeffSource::Exact)
            .unwrap()
            .value;
        assert!(t > 1.0 / 160.0);
    }

    #[test]
    fn paper_triangle_value_disagrees_with_exact_spectral() {
        let paper = torsion_tri_closed_paper(1.0).unwrap().value;
        let exact = torsion_spectral(&tri_region(1), &rational::from_int(2000), CoeffSource::Exact)
            .unwrap()
            .value;
        assert!((exact - paper).abs() > 0.005, "paper {paper} vs exact {exact}");
        // while the paper-coefficient spectral sum does converge to the paper closed form
        let paper_spec =
            torsion_spectral(&tri_region(1), &rational::from_int(2000), CoeffSource::Paper)
                .unwrap()
                .value;
        assert!((paper_spec - paper).abs() < 1e-6);
        assert!(paper_spec < paper);
    }

    #[test]
    fn torsion_json_shape() {
        let t = torsion_spectral(&square_region(), &rational::from_int(10), CoeffSource::Exact)
            .unwrap();
        let v = t.to_json();
        assert_eq!(v["method"], "spectral");
        assert_eq!(v["cutoff"], "10");
        assert!(v["value"].as_f64().unwrap() > 0.0);
        let c = torsion_rect_closed(1.0, 1.0).unwrap().to_json();
        assert_eq!(c["cutoff"], serde_json::Value::Null);
        assert_eq!(c["method"], "rect_closed");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn rect_closed_is_symmetric_in_l_and_h(aspect in 0.05f64..20.0) {
            // exercises the β/γ bookkeeping across two very different series
            let t_lh = torsion_rect_closed(aspect, 1.0).unwrap().value;
            let t_hl = torsion_rect_closed(1.0, aspect).unwrap().value;
            prop_assert!(
                (t_lh - t_hl).abs() <= 1e-12 * t_lh.abs(),
                "T({aspect},1) = {t_lh} vs T(1,{aspect}) = {t_hl}"
            );
        }

        #[test]
        fn rect_closed_scales_quartically(s in 0.1f64..10.0) {
            let t1 = torsion_rect_closed(1.3, 0.7).unwrap().value;
            let ts = torsion_rect_closed(1.3 * s, 0.7 * s).unwrap().value;
            prop_assert!((ts - s.powi(4) * t1).abs() <= 1e-12 * ts.abs());
        }
    }
}
