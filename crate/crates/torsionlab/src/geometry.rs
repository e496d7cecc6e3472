//! Shape primitives, disjoint-union regions, and the Chapman pair.
//!
//! Regions store only intrinsic dimensions. Every quantity computed here
//! (spectrum, torsional rigidity, heat content) is placement-invariant, so
//! no embedding or position data is kept.

use std::fmt;

use num_traits::Signed;

use crate::rational::{self, Rational};
use crate::{Error, Result};

/// A positive length together with its exactly-known square, when one exists.
///
/// Triangle legs like √2 are irrational while their squares are rational;
/// eigenvalues depend on the square only, so carrying `square` exactly keeps
/// the spectrum in exact rational arithmetic. Lengths built from raw floats
/// have no usable exact square and are limited to float-path computations.
#[derive(Debug, Clone, PartialEq)]
pub struct Length {
    value: f64,
    square: Option<Rational>,
}

impl Length {
    /// Length equal to the rational `r`.
    pub fn from_rational(r: Rational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::NonPositiveDimension(rational::to_f64(&r)));
        }
        let value = rational::to_f64(&r);
        let square = Some(&r * &r);
        Ok(Length { value, square })
    }

    /// Length equal to √r for a positive rational `r`.
    pub fn sqrt_of_rational(r: Rational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::NonPositiveDimension(rational::to_f64(&r)));
        }
        Ok(Length {
            value: rational::to_f64(&r).sqrt(),
            square: Some(r),
        })
    }

    /// Length from a raw float; the exact square is unknown.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::NonPositiveDimension(x));
        }
        Ok(Length {
            value: x,
            square: None,
        })
    }

    pub fn from_int(n: i64) -> Result<Self> {
        Self::from_rational(rational::from_int(n))
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Exact rational square of the length, when known.
    pub fn exact_square(&self) -> Option<&Rational> {
        self.square.as_ref()
    }

    /// Exact square or a descriptive error for spectrum-path callers.
    pub fn require_square(&self, role: &str) -> Result<&Rational> {
        self.square.as_ref().ok_or_else(|| {
            Error::NoExactRepresentation(format!(
                "{role} = {} has no exact rational square",
                self.value
            ))
        })
    }

    /// Scales by a positive float factor.
    ///
    /// Finite floats are dyadic rationals, so the exact square survives
    /// scaling: the scaled shape is the one specified by the (exact) factor.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::NonPositiveScale(s));
        }
        let s_exact = rational::from_f64_exact(s)?;
        Ok(Length {
            value: self.value * s,
            square: self.square.as_ref().map(|sq| sq * (&s_exact * &s_exact)),
        })
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// One of the two primitives: a rectangle or a right isosceles triangle.
///
/// The triangle with leg `L` is parametrized as `{(x,y): 0 ≤ x ≤ L, 0 ≤ y ≤ L − x}`,
/// with the right angle at the origin and legs on the axes.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Rectangle { length: Length, height: Length },
    RightIsoscelesTriangle { leg: Length },
}

impl Shape {
    pub fn rectangle(length: Length, height: Length) -> Self {
        Shape::Rectangle { length, height }
    }

    pub fn square(side: Length) -> Self {
        Shape::Rectangle {
            length: side.clone(),
            height: side,
        }
    }

    pub fn triangle(leg: Length) -> Self {
        Shape::RightIsoscelesTriangle { leg }
    }

    /// Unit square.
    pub fn unit_square() -> Self {
        Shape::square(Length::from_int(1).expect("1 > 0"))
    }

    pub fn area(&self) -> f64 {
        match self {
            Shape::Rectangle { length, height } => length.value() * height.value(),
            Shape::RightIsoscelesTriangle { leg } => 0.5 * leg.value() * leg.value(),
        }
    }

    pub fn scaled(&self, s: f64) -> Result<Shape> {
        Ok(match self {
            Shape::Rectangle { length, height } => Shape::Rectangle {
                length: length.scaled(s)?,
                height: height.scaled(s)?,
            },
            Shape::RightIsoscelesTriangle { leg } => Shape::RightIsoscelesTriangle {
                leg: leg.scaled(s)?,
            },
        })
    }

    /// Short literal, e.g. `rect:2x1` or `tri:1.4142135623730951`.
    pub fn literal(&self) -> String {
        match self {
            Shape::Rectangle { length, height } => {
                if length == height {
                    format!("square:{}", length.value())
                } else {
                    format!("rect:{}x{}", length.value(), height.value())
                }
            }
            Shape::RightIsoscelesTriangle { leg } => format!("tri:{}", leg.value()),
        }
    }
}

/// An ordered disjoint union of shapes.
///
/// Components are treated as pairwise disjoint; only intrinsic dimensions
/// are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    components: Vec<Shape>,
}

impl Region {
    pub fn new(components: Vec<Shape>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyRegion);
        }
        Ok(Region { components })
    }

    pub fn single(shape: Shape) -> Self {
        Region {
            components: vec![shape],
        }
    }

    pub fn components(&self) -> &[Shape] {
        &self.components
    }

    /// Total area: sum of `L·H` over rectangles and `L²/2` over triangles.
    pub fn area(&self) -> f64 {
        self.components.iter().map(Shape::area).sum()
    }

    /// Scales every linear dimension by `s > 0`; area scales by `s²`.
    pub fn scale(&self, s: f64) -> Result<Region> {
        let components = self
            .components
            .iter()
            .map(|c| c.scaled(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Region { components })
    }

    /// Parses a region literal: shapes joined by `+`, each of the form
    /// `square:<len>`, `rect:<len>x<height>`, or `tri:<len>`, where `<len>`
    /// is a rational number (`2`, `5/2`, `1.5`) or `sqrt` followed by one
    /// (`sqrt2`).
    pub fn parse(literal: &str) -> Result<Region> {
        let mut components = Vec::new();
        for token in literal.split('+') {
            components.push(parse_shape_token(token.trim())?);
        }
        Region::new(components)
    }

    pub fn literal(&self) -> String {
        self.components
            .iter()
            .map(Shape::literal)
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal())
    }
}

fn parse_length_token(lit: &str, full_token: &str) -> Result<Length> {
    let bad = || Error::BadRegionToken(full_token.to_string());
    if let Some(rest) = lit.strip_prefix("sqrt") {
        let r = rational::parse_rational(rest).map_err(|_| bad())?;
        Length::sqrt_of_rational(r).map_err(|_| bad())
    } else {
        let r = rational::parse_rational(lit).map_err(|_| bad())?;
        Length::from_rational(r).map_err(|_| bad())
    }
}

fn parse_shape_token(token: &str) -> Result<Shape> {
    let bad = || Error::BadRegionToken(token.to_string());
    let (kind, dims) = token.split_once(':').ok_or_else(bad)?;
    match kind {
        "square" => Ok(Shape::square(parse_length_token(dims, token)?)),
        "tri" => Ok(Shape::triangle(parse_length_token(dims, token)?)),
        "rect" => {
            let (l, h) = dims.split_once('x').ok_or_else(bad)?;
            Ok(Shape::rectangle(
                parse_length_token(l, token)?,
                parse_length_token(h, token)?,
            ))
        }
        _ => Err(bad()),
    }
}

/// The Chapman pair: `C₁ = square(1) ∪ tri(2)` and `C₂ = rect(2,1) ∪ tri(√2)`.
///
/// The two regions are Dirichlet isospectral but not isometric.
pub fn chapman_pair() -> (Region, Region) {
    let one = Length::from_int(1).expect("1 > 0");
    let two = Length::from_int(2).expect("2 > 0");
    let sqrt2 = Length::sqrt_of_rational(rational::from_int(2)).expect("2 > 0");
    let c1 = Region::new(vec![Shape::square(one.clone()), Shape::triangle(two.clone())])
        .expect("nonempty");
    let c2 = Region::new(vec![Shape::rectangle(two, one), Shape::triangle(sqrt2)])
        .expect("nonempty");
    (c1, c2)
}
