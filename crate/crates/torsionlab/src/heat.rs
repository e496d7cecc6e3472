//! Spectral heat content `Q(t) = Σ a²·e^{−λt}` and the first-moment identity
//! `∫₀^∞ Q(t) dt = T` tying it to torsional rigidity.
//!
//! Q is computed spectrally, never by time-stepping: given the coefficients
//! the spectral form is exact, which keeps the identity check free of mesh
//! error. The moment integral is evaluated by adaptive quadrature on
//! `[0, t_max]` plus the exact exponential tail, with `t_max` chosen so
//! `λ₁·t_max ≥ 40`.

use std::f64::consts::PI;
use std::io::Write;

use crate::geometry::Region;
use crate::quad::adaptive_simpson;
use crate::rational::{self, Rational};
use crate::spectrum::{mode_terms, CoeffSource, ModeTerm};
use crate::torsion::torsion_spectral;
use crate::{Error, Result};

/// Heat content sampled on an ascending time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub cutoff: Rational,
    pub source: CoeffSource,
}

fn check_time(t: f64) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::ArgumentOutOfRange(format!(
            "time must be positive, got {t}"
        )));
    }
    Ok(t)
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::ArgumentOutOfRange("empty time grid".into()));
    }
    for pair in times.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::ArgumentOutOfRange(format!(
                "times must be strictly ascending, got {} after {}",
                pair[1], pair[0]
            )));
        }
    }
    check_time(times[0]).map(|_| ())
}

fn q_of(terms: &[ModeTerm], t: f64) -> f64 {
    terms.iter().map(|m| m.coeff_sq * (-m.lambda * t).exp()).sum()
}

/// Heat content of the region at time `t`, truncated at `cutoff·π²`.
pub fn heat_content(region: &Region, t: f64, cutoff: &Rational, source: CoeffSource) -> Result<f64> {
    let t = check_time(t)?;
    let terms = mode_terms(region, cutoff, source)?;
    Ok(q_of(&terms, t))
}

/// Samples the heat content on an ascending positive time grid.
pub fn heat_curve(
    region: &Region,
    times: &[f64],
    cutoff: &Rational,
    source: CoeffSource,
) -> Result<HeatCurve> {
    check_times(times)?;
    let terms = mode_terms(region, cutoff, source)?;
    Ok(HeatCurve {
        times: times.to_vec(),
        values: times.iter().map(|&t| q_of(&terms, t)).collect(),
        cutoff: cutoff.clone(),
        source,
    })
}

/// Rigorous ceiling on what the dropped modes can contribute to `Q(t)`:
/// their squared coefficients sum below the area, and each carries at least
/// `e^{−cutoff·π²·t}`.
pub fn heat_truncation_diagnostic(region: &Region, t: f64, cutoff: &Rational) -> f64 {
    region.area() * (-rational::to_f64(cutoff) * PI * PI * t).exp()
}

/// Outcome of the first-moment identity check `∫₀^∞ Q = T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentIdentity {
    /// Quadrature of `Q` over `[0, t_max]` plus the exact exponential tail.
    pub integral: f64,
    /// The spectral torsion with the same cutoff and coefficient source.
    pub torsion: f64,
    pub gap: f64,
}

/// Integrates the heat content over all time and compares with the spectral
/// torsional rigidity at the same cutoff and source.
pub fn heat_moment_identity(
    region: &Region,
    cutoff: &Rational,
    source: CoeffSource,
) -> Result<MomentIdentity> {
    let terms = mode_terms(region, cutoff, source)?;
    let torsion = torsion_spectral(region, cutoff, source)?.value;
    if terms.is_empty() {
        return Ok(MomentIdentity {
            integral: 0.0,
            torsion,
            gap: torsion.abs(),
        });
    }
    let lambda_min = terms.iter().map(|m| m.lambda).fold(f64::INFINITY, f64::min);
    let t_max = 40.0 / lambda_min;
    let body = adaptive_simpson(&|t| q_of(&terms, t), 0.0, t_max, 1e-11);
    let tail: f64 = terms
        .iter()
        .map(|m| m.coeff_sq * (-m.lambda * t_max).exp() / m.lambda)
        .sum();
    let integral = body + tail;
    Ok(MomentIdentity {
        integral,
        torsion,
        gap: (integral - torsion).abs(),
    })
}

/// Heat curves of two regions on a shared grid, with their difference.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatDifference {
    pub curve_a: HeatCurve,
    pub curve_b: HeatCurve,
    pub difference: Vec<f64>,
}

pub fn heat_difference_curve(
    a: &Region,
    b: &Region,
    times: &[f64],
    cutoff: &Rational,
    source: CoeffSource,
) -> Result<HeatDifference> {
    let curve_a = heat_curve(a, times, cutoff, source)?;
    let curve_b = heat_curve(b, times, cutoff, source)?;
    let difference = curve_a
        .values
        .iter()
        .zip(&curve_b.values)
        .map(|(qa, qb)| qa - qb)
        .collect();
    Ok(HeatDifference {
        curve_a,
        curve_b,
        difference,
    })
}

/// CSV emission: `t, Q_a, Q_b, diff` at 17 significant digits.
pub fn write_difference_csv<W: Write + ?Sized>(diff: &HeatDifference, w: &mut W) -> Result<()> {
    writeln!(w, "t,Q_a,Q_b,diff")?;
    for i in 0..diff.curve_a.times.len() {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            diff.curve_a.times[i], diff.curve_a.values[i], diff.curve_b.values[i], diff.difference[i]
        )?;
    }
    Ok(())
}

/// CSV emission for a single region: `t, Q` at 17 significant digits.
pub fn write_curve_csv<W: Write + ?Sized>(curve: &HeatCurve, w: &mut W) -> Result<()> {
    writeln!(w, "t,Q")?;
    for (t, q) in curve.times.iter().zip(&curve.values) {
        writeln!(w, "{t:.16e},{q:.16e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{chapman_pair, Length, Shape};
    use crate::spectrum::lambda_min;

    // Frozen against 40-digit evaluations of the spectral sums.
    const Q_SQUARE_T10_CUT100: f64 = 1.2339168190853021e-86;
    const Q_SQUARE_SMALL_T: f64 = 0.95537412913407356;
    const Q_TRI1_T005_CUT500: f64 = 0.024793753397263827;
    const Q_C1_T01_CUT2000: f64 = 0.43634148684410633;
    const Q_C2_T01_CUT2000: f64 = 0.43821808322428856;

    fn square() -> Region {
        Region::single(Shape::unit_square())
    }

    fn tri1() -> Region {
        Region::single(Shape::triangle(Length::from_int(1).unwrap()))
    }

    #[test]
    fn single_mode_dominates_at_large_time() {
        let q = heat_content(&square(), 10.0, &rational::from_int(100), CoeffSource::Exact).unwrap();
        let first = 64.0 / PI.powi(4) * (-2.0 * PI * PI * 10.0).exp();
        assert!((q / first - 1.0).abs() < 1e-10);
        assert!((q - Q_SQUARE_T10_CUT100).abs() < 1e-12 * Q_SQUARE_T10_CUT100);
    }

    #[test]
    fn short_time_limit_approaches_the_area() {
        let q = heat_content(&square(), 1e-4, &rational::from_int(100_000), CoeffSource::Exact)
            .unwrap();
        assert!(q > 0.95 && q < 1.0, "got {q}");
        assert!((q - Q_SQUARE_SMALL_T).abs() < 1e-10);
    }

    #[test]
    fn triangle_curve_value_and_leading_term() {
        let q = heat_content(&tri1(), 0.05, &rational::from_int(500), CoeffSource::Exact).unwrap();
        assert!((q - Q_TRI1_T005_CUT500).abs() < 1e-14);
        let a12 = crate::spectrum::tri_coefficient_exact(1.0, crate::spectrum::ModeIndex::new(1, 2).unwrap())
            .unwrap();
        let leading = a12 * a12 * (-5.0 * PI * PI * 0.05).exp();
        assert!(q > leading && (q - leading) / q < 0.005);
    }

    #[test]
    fn rejects_bad_times() {
        assert!(heat_content(&square(), 0.0, &rational::from_int(10), CoeffSource::Exact).is_err());
        assert!(heat_content(&square(), -1.0, &rational::from_int(10), CoeffSource::Exact).is_err());
        assert!(heat_curve(&square(), &[0.2, 0.1], &rational::from_int(10), CoeffSource::Exact).is_err());
        assert!(heat_curve(&square(), &[], &rational::from_int(10), CoeffSource::Exact).is_err());
    }

    #[test]
    fn q_is_strictly_decreasing_and_positive() {
        let (c1, _) = chapman_pair();
        let times: Vec<f64> = (1..=60).map(|i| 0.01 * i as f64).collect();
        let curve = heat_curve(&c1, &times, &rational::from_int(500), CoeffSource::Exact).unwrap();
        for w in curve.values.windows(2) {
            assert!(w[0] > w[1], "Q must strictly decrease: {} then {}", w[0], w[1]);
        }
        assert!(curve.values.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn q_is_bounded_by_slowest_mode_envelope() {
        let (c1, _) = chapman_pair();
        let area = c1.area();
        let l1 = lambda_min(&c1).unwrap().value();
        let times: Vec<f64> = (1..=40).map(|i| 0.025 * i as f64).collect();
        let curve = heat_curve(&c1, &times, &rational::from_int(500), CoeffSource::Exact).unwrap();
        for (t, q) in curve.times.iter().zip(&curve.values) {
            assert!(*q <= area * (-l1 * t).exp() + 1e-15, "t={t}: {q}");
        }
    }

    #[test]
    fn moment_identity_square() {
        let m = heat_moment_identity(&square(), &rational::from_int(500), CoeffSource::Exact).unwrap();
        assert!(m.gap < 1e-8, "gap {}", m.gap);
    }

    #[test]
    fn moment_identity_triangle_exact() {
        let m = heat_moment_identity(&tri1(), &rational::from_int(500), CoeffSource::Exact).unwrap();
        assert!(m.gap < 1e-8, "gap {}", m.gap);
    }

    #[test]
    fn moment_identity_chapman_region_and_additivity() {
        let (c1, _) = chapman_pair();
        let m = heat_moment_identity(&c1, &rational::from_int(500), CoeffSource::Exact).unwrap();
        assert!(m.gap < 1e-8, "gap {}", m.gap);
        // torsion side is additive over components
        let parts: f64 = c1
            .components()
            .iter()
            .map(|s| {
                torsion_spectral(
                    &Region::single(s.clone()),
                    &rational::from_int(500),
                    CoeffSource::Exact,
                )
                .unwrap()
                .value
            })
            .sum();
        assert!((m.torsion - parts).abs() < 1e-15);
    }

    #[test]
    fn chapman_difference_at_a_tenth() {
        let (c1, c2) = chapman_pair();
        let cutoff = rational::from_int(2000);
        let d = heat_difference_curve(&c1, &c2, &[0.1], &cutoff, CoeffSource::Exact).unwrap();
        assert!((d.curve_a.values[0] - Q_C1_T01_CUT2000).abs() < 1e-13);
        assert!((d.curve_b.values[0] - Q_C2_T01_CUT2000).abs() < 1e-13);
        let diag = heat_truncation_diagnostic(&c1, 0.1, &cutoff);
        assert!(
            d.difference[0].abs() > diag,
            "difference {} must exceed the truncation diagnostic {diag}",
            d.difference[0]
        );
        assert!((d.difference[0] - (Q_C1_T01_CUT2000 - Q_C2_T01_CUT2000)).abs() < 1e-13);
    }

    #[test]
    fn identical_regions_have_zero_difference() {
        let (c1, _) = chapman_pair();
        let d = heat_difference_curve(&c1, &c1, &[0.05, 0.1, 0.2], &rational::from_int(200), CoeffSource::Exact)
            .unwrap();
        assert!(d.difference.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn smaller_domain_loses_relative_content() {
        let sq = square();
        let rect = Region::single(Shape::rectangle(
            Length::from_int(2).unwrap(),
            Length::from_int(1).unwrap(),
        ));
        let d = heat_difference_curve(&sq, &rect, &[0.5], &rational::from_int(500), CoeffSource::Exact)
            .unwrap();
        assert!(d.difference[0] < 0.0);
    }

    #[test]
    fn csv_round_trips_to_17_digits() {
        let (c1, c2) = chapman_pair();
        let d = heat_difference_curve(&c1, &c2, &[0.1, 0.2], &rational::from_int(100), CoeffSource::Exact)
            .unwrap();
        let mut buf = Vec::new();
        write_difference_csv(&d, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,Q_a,Q_b,diff");
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 4);
        assert_eq!(fields[0].parse::<f64>().unwrap(), 0.1);
        assert_eq!(fields[1].parse::<f64>().unwrap(), d.curve_a.values[0]);
        assert_eq!(fields[3].parse::<f64>().unwrap(), d.difference[0]);
    }
}
