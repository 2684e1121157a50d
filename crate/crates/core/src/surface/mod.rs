//! The staircase model of the ladder surface.
//!
//! The surface is the region between two staircases glued along parallel
//! edges of equal length. With partial sums `c₋₁ = 0`, `cₙ = Σ_{i≤n} λⁱ`,
//! the region is `{x, y ≥ 0 : x ≤ f(y), y ≤ f(x)}` where `f(t) = cₙ₊₁` for
//! `t ∈ [cₙ₋₁, cₙ)`. Everything is finite data plus a truncation depth.

mod hexagon;
mod segments;

pub use hexagon::{check_rotation_symmetry, hexagon_chart, EdgeRef, Hexagon, HexagonChart};
pub use segments::{singular_segments, SegmentVerdict};

use serde::Serialize;
use thiserror::Error;

use crate::numeric::{LadderParams, QuadExt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("depth must be at least 2, got {0}")]
    DepthTooSmall(usize),
    #[error("point lies beyond the truncation depth {0}")]
    TruncationExceeded(usize),
    #[error("point coordinates are not in the surface's field")]
    FieldMismatch,
    #[error("slope {0} is not strictly between lambda and 1/lambda")]
    SlopeOutOfBand(String),
    #[error("requested {count} corners but the surface is truncated at depth {depth}")]
    CountExceedsDepth { count: usize, depth: usize },
    #[error("containment undecided at {0} bits of precision")]
    Undecidable(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SurfacePoint {
    pub x: QuadExt,
    pub y: QuadExt,
}

impl SurfacePoint {
    pub fn new(x: QuadExt, y: QuadExt) -> Self {
        SurfacePoint { x, y }
    }

    pub fn mirrored(&self) -> SurfacePoint {
        SurfacePoint {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    pub fn dist_sq(&self, other: &SurfacePoint) -> QuadExt {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Containment {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone)]
pub struct LadderSurface {
    params: LadderParams,
    depth: usize,
    // c₋₁, c₀, …, c_{depth+2}
    sums: Vec<QuadExt>,
}

pub fn build_surface(params: &LadderParams, depth: usize) -> Result<LadderSurface, SurfaceError> {
    if depth < 2 {
        return Err(SurfaceError::DepthTooSmall(depth));
    }
    let f = params.field();
    let mut sums = Vec::with_capacity(depth + 4);
    sums.push(f.zero());
    let mut power = f.one();
    for _ in 0..=depth + 2 {
        let next = sums.last().expect("nonempty") + &power;
        sums.push(next);
        power = &power * &params.lambda;
    }
    Ok(LadderSurface {
        params: params.clone(),
        depth,
        sums,
    })
}

impl LadderSurface {
    pub fn params(&self) -> &LadderParams {
        &self.params
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The partial sum `cₙ` for `−1 ≤ n ≤ depth + 2`.
    pub fn c(&self, n: i64) -> &QuadExt {
        &self.sums[usize::try_from(n + 1).expect("partial sums start at index -1")]
    }

    pub fn partial_sums(&self) -> &[QuadExt] {
        &self.sums
    }

    /// Corners `(cₙ₊₁, cₙ)` for `n = −1..=depth`; these are the reflex
    /// corners of the lower staircase, all of which represent the singularity.
    pub fn corners(&self) -> Vec<SurfacePoint> {
        (-1..=self.depth as i64)
            .map(|n| SurfacePoint::new(self.c(n + 1).clone(), self.c(n).clone()))
            .collect()
    }

    /// Vertices of the lower staircase from the origin up to `c_depth`:
    /// `(0,0), (c₁, 0), (c₁, c₀), (c₂, c₀), (c₂, c₁), …`.
    pub fn staircase(&self) -> Vec<SurfacePoint> {
        let mut out = vec![SurfacePoint::new(self.c(-1).clone(), self.c(-1).clone())];
        for n in 0..self.depth as i64 {
            out.push(SurfacePoint::new(self.c(n + 1).clone(), self.c(n - 1).clone()));
            out.push(SurfacePoint::new(self.c(n + 1).clone(), self.c(n).clone()));
        }
        out
    }

    /// Index `n ≥ 0` with `c_{n−1} ≤ t < cₙ`; `None` past the stored sums.
    fn level_half_open(&self, t: &QuadExt) -> Option<i64> {
        let idx = self.sums.partition_point(|c| c <= t);
        (idx + 1 < self.sums.len()).then(|| idx as i64 - 1)
    }

    /// Index `n ≥ 0` with `c_{n−1} < t ≤ cₙ` for `t > 0`.
    fn level_closed_above(&self, t: &QuadExt) -> Option<i64> {
        let idx = self.sums.partition_point(|c| c < t);
        (idx + 1 < self.sums.len()).then(|| (idx as i64 - 1).max(0))
    }

    /// The right-continuous step bound `f`.
    fn bound_upper(&self, t: &QuadExt) -> &QuadExt {
        let n = self.level_half_open(t).expect("inside truncation");
        self.c(n + 1)
    }

    /// The left-continuous step bound, used for interior tests.
    fn bound_lower(&self, t: &QuadExt) -> &QuadExt {
        let n = self.level_closed_above(t).expect("inside truncation");
        self.c(n + 1)
    }

    pub fn contains(&self, p: &SurfacePoint) -> Result<Containment, SurfaceError> {
        let field = self.params.field();
        if p.x.field() != field || p.y.field() != field {
            return Err(SurfaceError::FieldMismatch);
        }
        let limit = self.c(self.depth as i64);
        if &p.x >= limit || &p.y >= limit {
            return Err(SurfaceError::TruncationExceeded(self.depth));
        }
        if p.x.is_negative()
            || p.y.is_negative()
            || &p.x > self.bound_upper(&p.y)
            || &p.y > self.bound_upper(&p.x)
        {
            return Ok(Containment::Exterior);
        }
        if p.x.is_positive()
            && p.y.is_positive()
            && &p.x < self.bound_lower(&p.y)
            && &p.y < self.bound_lower(&p.x)
        {
            Ok(Containment::Interior)
        } else {
            Ok(Containment::Boundary)
        }
    }

    /// Horizontal extent `[x_min, x_max]` of the region at heights in
    /// `(c_{n−1}, cₙ)`: from `c_{n−2}` (or 0) to `cₙ₊₁`.
    pub fn horizontal_section(&self, n: i64) -> (QuadExt, QuadExt) {
        let lo = if n >= 1 { self.c(n - 2).clone() } else { self.c(-1).clone() };
        (lo, self.c(n + 1).clone())
    }
}

/// Closed form `(1 + 2λ)/(1 − λ²)` of `Σ λ^{2j} + 2 Σ λ^{2j+1}`.
pub fn area(params: &LadderParams) -> QuadExt {
    let f = params.field();
    let lam = &params.lambda;
    (f.one() + lam.mul_int(2)) / (f.one() - lam * lam)
}

/// Exact partial sum of the first `terms` terms `λ^{2j} + 2λ^{2j+1}`.
pub fn area_partial_sum(params: &LadderParams, terms: usize) -> QuadExt {
    let f = params.field();
    let lam = &params.lambda;
    let step = f.one() + lam.mul_int(2);
    let lam2 = lam * lam;
    let mut power = f.one();
    let mut acc = f.zero();
    for _ in 0..terms {
        acc = acc + &power * &step;
        power = &power * &lam2;
    }
    acc
}

/// Geometric tail `λ^{2N}(1 + 2λ)/(1 − λ²)` left after `terms = N` terms.
pub fn area_tail(params: &LadderParams, terms: usize) -> QuadExt {
    params.lambda.pow(2 * terms as u32) * area(params)
}

/// Float summation of the first `terms` terms.
pub fn area_series_f64(params: &LadderParams, terms: usize) -> f64 {
    let lam = params.lambda.to_f64();
    (0..terms)
        .map(|j| lam.powi(2 * j as i32) * (1.0 + 2.0 * lam))
        .sum()
}

/// The top-right corner `S = (1/(1−λ), 1/(1−λ))` of the completion, the
/// limit of the staircase corners.
pub fn accumulation_point(params: &LadderParams) -> SurfacePoint {
    let f = params.field();
    let s = (f.one() - &params.lambda).inverse().expect("lambda < 1");
    SurfacePoint::new(s.clone(), s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{solve_lambda, QuadField};

    fn golden_surface(depth: usize) -> LadderSurface {
        build_surface(&solve_lambda(2, 1).unwrap(), depth).unwrap()
    }

    #[test]
    fn golden_partial_sums() {
        let s = golden_surface(4);
        let f = s.params().field();
        assert_eq!(s.c(-1), &f.zero());
        assert_eq!(s.c(0), &f.one());
        assert_eq!(s.c(1), &"1/2 + 1/2*sqrt(5)".parse().unwrap());
        assert_eq!(s.c(2), &f.int(2));
        assert_eq!(s.c(1), &s.params().one_plus_lambda());
        let bound = accumulation_point(s.params()).x;
        for n in -1..=6 {
            assert!(s.c(n) < &bound);
            if n < 6 {
                assert!(s.c(n) < s.c(n + 1));
                assert_eq!(s.c(n + 1) - s.c(n), s.params().lambda_pow(n + 1));
            }
        }
        assert_eq!(build_surface(s.params(), 1).unwrap_err(), SurfaceError::DepthTooSmall(1));
    }

    #[test]
    fn containment_examples() {
        let s = golden_surface(8);
        let f = s.params().field();
        let half = f.ratio(1, 2);
        let pt = |x: QuadExt, y: QuadExt| SurfacePoint::new(x, y);
        assert_eq!(s.contains(&pt(half.clone(), half.clone())).unwrap(), Containment::Interior);
        assert_eq!(
            s.contains(&pt(s.c(1).clone(), s.c(0).clone())).unwrap(),
            Containment::Boundary
        );
        let eps = f.ratio(1, 100);
        assert_eq!(
            s.contains(&pt(s.c(2) - &eps, half.clone())).unwrap(),
            Containment::Exterior
        );
        assert_eq!(s.contains(&pt(f.zero(), half.clone())).unwrap(), Containment::Boundary);
        assert_eq!(s.contains(&pt(f.int(-1), half.clone())).unwrap(), Containment::Exterior);
        assert_eq!(
            s.contains(&pt(f.int(3), half.clone())).unwrap_err(),
            SurfaceError::TruncationExceeded(8)
        );
        let other = QuadField::new(3).unwrap();
        assert_eq!(
            s.contains(&pt(other.one(), other.one())).unwrap_err(),
            SurfaceError::FieldMismatch
        );
    }

    #[test]
    fn every_corner_is_boundary_and_symmetric() {
        let s = golden_surface(10);
        for c in s.corners().iter().take(9) {
            assert_eq!(s.contains(c).unwrap(), Containment::Boundary);
            assert_eq!(s.contains(&c.mirrored()).unwrap(), Containment::Boundary);
        }
        for v in s.staircase().iter().take(12) {
            assert_eq!(s.contains(v).unwrap(), Containment::Boundary);
        }
    }

    #[test]
    fn sections_match_region() {
        let s = golden_surface(10);
        let f = s.params().field();
        let tiny = f.ratio(1, 10_000);
        for n in 0..6 {
            let y = (s.c(n - 1) + s.c(n)) * f.ratio(1, 2);
            let (lo, hi) = s.horizontal_section(n);
            let at = |x: QuadExt| s.contains(&SurfacePoint::new(x, y.clone())).unwrap();
            assert_eq!(at(hi.clone()), Containment::Boundary);
            assert_eq!(at(&hi - &tiny), Containment::Interior);
            assert_eq!(at(&hi + &tiny), Containment::Exterior);
            assert_eq!(at(lo.clone()), Containment::Boundary);
            assert_eq!(at(&lo + &tiny), Containment::Interior);
            if n >= 1 {
                assert_eq!(at(&lo - &tiny), Containment::Exterior);
            }
        }
    }

    #[test]
    fn area_values() {
        let p = solve_lambda(2, 1).unwrap();
        let a = area(&p);
        assert_eq!(a, p.lambda_inv() + p.field().int(2));
        assert_eq!(a.to_string(), "5/2 + 1/2*sqrt(5)");
        assert!((area_series_f64(&p, 200) - a.to_f64()).abs() < 1e-12);
        assert_eq!(area_partial_sum(&p, 30) + area_tail(&p, 30), a);

        let third = LadderParams {
            k: 13,
            l: 4,
            lambda: QuadField::RATIONAL.ratio(1, 3),
        };
        assert_eq!(area(&third), QuadField::RATIONAL.ratio(15, 8));
    }

    #[test]
    fn accumulation_point_values() {
        let p = solve_lambda(2, 1).unwrap();
        let s = accumulation_point(&p);
        assert_eq!(s.x, "3/2 + 1/2*sqrt(5)".parse().unwrap());
        assert_eq!(s.x, p.lambda_pow(-2));
        let half = LadderParams {
            k: 0,
            l: 0,
            lambda: QuadField::RATIONAL.ratio(1, 2),
        };
        assert_eq!(accumulation_point(&half).x, QuadField::RATIONAL.int(2));

        let surf = build_surface(&p, 8).unwrap();
        let f = p.field();
        let lam = &p.lambda;
        let factor = (f.one() + lam * lam) / (f.one() - lam).pow(2);
        for (n, corner) in surf.corners().iter().skip(1).take(6).enumerate() {
            let expected = p.lambda_pow(2 * n as i64 + 2) * &factor;
            assert_eq!(corner.dist_sq(&s), expected);
        }
    }
}
