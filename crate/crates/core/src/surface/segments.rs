use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{LadderSurface, SurfaceError, SurfacePoint};
use crate::numeric::{sqrt_bracket, QuadExt, RationalInterval};

const START_BITS: u32 = 32;
const MAX_BITS: u32 = 4096;

/// Outcome for one length-one segment leaving a corner down and to the left.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentVerdict {
    pub corner: usize,
    pub mirrored: bool,
    pub start: SurfacePoint,
    pub contained: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            _ => Tri::Unknown,
        }
    }
}

/// For each corner `(cₙ₊₁, cₙ)`, `n < count`, and its mirror image, decides
/// whether the unit-length segment of slope `slope` pointing down-left
/// stays in the interior of the region (apart from its starting corner).
///
/// The segment's extent `1/√(1+s²)` is enclosed in a rational interval that
/// is refined until every comparison against the exact walls is decided.
pub fn singular_segments(
    surface: &LadderSurface,
    slope: &BigRational,
    count: usize,
) -> Result<Vec<SegmentVerdict>, SurfaceError> {
    let params = surface.params();
    let s = params.field().rational(slope.clone());
    if !(params.lambda < s && s < params.lambda_inv()) {
        return Err(SurfaceError::SlopeOutOfBand(slope.to_string()));
    }
    if count > surface.depth() {
        return Err(SurfaceError::CountExceedsDepth {
            count,
            depth: surface.depth(),
        });
    }
    let mut out = Vec::with_capacity(2 * count);
    for n in 0..count {
        let corner = SurfacePoint::new(surface.c(n as i64 + 1).clone(), surface.c(n as i64).clone());
        for mirrored in [false, true] {
            let start = if mirrored { corner.mirrored() } else { corner.clone() };
            let contained = segment_contained(surface, &start, slope)?;
            out.push(SegmentVerdict {
                corner: n,
                mirrored,
                start,
                contained,
            });
        }
    }
    Ok(out)
}

fn segment_contained(
    surface: &LadderSurface,
    start: &SurfacePoint,
    slope: &BigRational,
) -> Result<bool, SurfaceError> {
    let norm_sq = BigRational::one() + slope * slope;
    let mut bits = START_BITS;
    loop {
        // horizontal extent of a unit segment
        let dx = sqrt_bracket(&norm_sq, bits).recip();
        let dy = dx.scale(slope);
        let inv_slope = slope.recip();
        let verdict = wall_check(surface, &start.x, &start.y, &inv_slope, &dy)
            .and(wall_check(surface, &start.y, &start.x, slope, &dx))
            .and(stays_positive(&start.x, &dx))
            .and(stays_positive(&start.y, &dy));
        match verdict {
            Tri::Yes => return Ok(true),
            Tri::No => return Ok(false),
            Tri::Unknown if bits >= MAX_BITS => return Err(SurfaceError::Undecidable(bits)),
            Tri::Unknown => bits *= 2,
        }
    }
}

fn lift(x: &BigRational, like: &QuadExt) -> QuadExt {
    like.field().rational(x.clone())
}

fn stays_positive(v0: &QuadExt, extent: &RationalInterval) -> Tri {
    if lift(&extent.hi, v0) < *v0 {
        Tri::Yes
    } else if lift(&extent.lo, v0) >= *v0 {
        Tri::No
    } else {
        Tri::Unknown
    }
}

/// Checks `u < f(v)` along `(u, v) = (u₀ − r·τ, v₀ − τ)` for
/// `τ ∈ (0, extent]`. Inside each step of `f` the binding point is where
/// the path enters the step, i.e. where `v` crosses a partial sum.
fn wall_check(
    surface: &LadderSurface,
    u0: &QuadExt,
    v0: &QuadExt,
    ratio: &BigRational,
    extent: &RationalInterval,
) -> Tri {
    let top = surface.level_closed_above(v0).expect("start inside truncation");
    if u0 > surface.c(top + 1) {
        return Tri::No;
    }
    let mut verdict = Tri::Yes;
    for m in (0..top).rev() {
        let drop = v0 - surface.c(m);
        if lift(&extent.hi, v0) < drop {
            break;
        }
        let u_cross = u0 - drop.scale(ratio);
        if &u_cross < surface.c(m + 1) {
            continue;
        }
        if lift(&extent.lo, v0) >= drop {
            return Tri::No;
        }
        verdict = Tri::Unknown;
    }
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    use crate::numeric::solve_lambda;
    use crate::surface::{accumulation_point, build_surface};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Float ray tracer: samples the open segment densely and tests the
    /// region predicate in floating point.
    fn float_contained(sums: &[f64], x0: f64, y0: f64, slope: f64) -> bool {
        // sums[0] = c₋₁, so t ∈ [sums[i−1], sums[i]) maps to sums[i+1]
        let f = |t: f64| sums[sums.partition_point(|&c| c <= t) + 1];
        let len = (1.0 + slope * slope).sqrt();
        let (dx, dy) = (1.0 / len, slope / len);
        (1..=20_000).all(|i| {
            let t = i as f64 / 20_000.0;
            let (x, y) = (x0 - t * dx, y0 - t * dy);
            x > 0.0 && y > 0.0 && x < f(y) && y < f(x)
        })
    }

    #[test]
    fn golden_slope_one_all_contained() {
        let p = solve_lambda(2, 1).unwrap();
        let surf = build_surface(&p, 12).unwrap();
        let verdicts = singular_segments(&surf, &rat(1, 1), 11).unwrap();
        assert_eq!(verdicts.len(), 22);
        let sums: Vec<f64> = surf.partial_sums().iter().map(|c| c.to_f64()).collect();
        for v in &verdicts {
            assert!(v.contained, "{v:?}");
            assert!(float_contained(&sums, v.start.x.to_f64(), v.start.y.to_f64(), 1.0));
        }
    }

    #[test]
    fn agrees_with_float_oracle_across_slopes() {
        let p = solve_lambda(2, 1).unwrap();
        let surf = build_surface(&p, 10).unwrap();
        let sums: Vec<f64> = surf.partial_sums().iter().map(|c| c.to_f64()).collect();
        for slope in [rat(5, 8), rat(7, 10), rat(3, 4), rat(9, 10), rat(4, 3), rat(3, 2), rat(8, 5)] {
            let s = slope.to_f64().unwrap();
            for v in singular_segments(&surf, &slope, 8).unwrap() {
                let float = float_contained(&sums, v.start.x.to_f64(), v.start.y.to_f64(), s);
                assert_eq!(v.contained, float, "slope {slope} {v:?}");
            }
        }
    }

    #[test]
    fn slope_band_is_open() {
        let p = solve_lambda(3, 1).unwrap();
        let surf = build_surface(&p, 6).unwrap();
        // λ_{3,1} ≈ 0.366 and 1/λ ≈ 2.73
        assert!(singular_segments(&surf, &rat(1, 3), 3).is_err());
        assert!(singular_segments(&surf, &rat(3, 1), 3).is_err());
        assert!(singular_segments(&surf, &rat(1, 2), 3).is_ok());
        assert_eq!(
            singular_segments(&surf, &rat(1, 1), 7).unwrap_err(),
            SurfaceError::CountExceedsDepth { count: 7, depth: 6 }
        );
    }

    #[test]
    fn rational_extent_is_exact() {
        // slope 3/4 gives a 4/5 × 3/5 segment, no refinement needed
        let p = solve_lambda(2, 1).unwrap();
        let surf = build_surface(&p, 8).unwrap();
        let v = singular_segments(&surf, &rat(3, 4), 4).unwrap();
        assert!(v.iter().all(|v| v.contained));
    }

    #[test]
    fn starts_converge_to_s_with_ratio_lambda() {
        let p = solve_lambda(2, 1).unwrap();
        let surf = build_surface(&p, 10).unwrap();
        let s = accumulation_point(&p);
        let lam_sq = p.lambda.pow(2);
        let v = singular_segments(&surf, &rat(1, 1), 8).unwrap();
        let starts: Vec<_> = v.iter().filter(|v| !v.mirrored).map(|v| &v.start).collect();
        for w in starts.windows(2) {
            assert_eq!(w[1].dist_sq(&s), w[0].dist_sq(&s) * &lam_sq);
        }
    }
}
