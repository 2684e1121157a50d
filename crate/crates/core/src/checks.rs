//! The verification suite: each check recomputes one structural identity
//! exactly and reports pass, fail, or skipped with a reason.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cylinders::{commensurability, decompose, synthesize_parabolic, twist_counts, Commensurability, Direction};
use crate::fuchsian::{
    build_domain, cusp_orbit_gap, membership, random_point, random_word, reduce, band_parabolics, base_point,
    FundamentalDomain, GroupWord, Membership,
};
use crate::moebius::{conjugation_identity_holds, hexagon_chart_inverse, hexagon_chart_matrix, hexagon_conjugation_identity, hexagon_rotation, Mat2, MoebiusElement};
use crate::numeric::{BigRational, LadderParams, QuadExt, QuadField};
use crate::surface::{
    accumulation_point, area, area_partial_sum, area_series_f64, area_tail, build_surface, check_rotation_symmetry,
    hexagon_chart, singular_segments, EdgeRef,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

/// Deliberate defects for exercising the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Swap two gluings in the hexagon chart.
    HexagonGluing,
    /// Use `(1 −1/2; 0 √3/2)` as the right-hand chart factor.
    ChartFactor,
    /// Drop the geometric tail from the cylinder area total.
    AreaTail,
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fault::HexagonGluing => "hexagon-gluing",
            Fault::ChartFactor => "chart-factor",
            Fault::AreaTail => "area-tail",
        })
    }
}

impl FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hexagon-gluing" => Ok(Fault::HexagonGluing),
            "chart-factor" => Ok(Fault::ChartFactor),
            "area-tail" => Ok(Fault::AreaTail),
            _ => Err(format!("unknown fault {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub depth: usize,
    pub max_word_len: u64,
    pub seed: u64,
    pub round_trips: usize,
    pub random_points: usize,
    pub fault: Option<Fault>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            depth: 24,
            max_word_len: 8,
            seed: 0,
            round_trips: 500,
            random_points: 1000,
            fault: None,
        }
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_element<R: Rng>(f: QuadField, rng: &mut R) -> QuadExt {
    let q = |rng: &mut R| {
        let den = rng.gen_range(1..=12i64);
        BigRational::new(rng.gen_range(-30..=30i64).into(), den.into())
    };
    let a = q(rng);
    let b = if f.is_rational() { BigRational::from_integer(0.into()) } else { q(rng) };
    f.element(a, b)
}

fn field_axioms(p: &LadderParams, seed: u64) -> Outcome {
    let f = p.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = 300;
    for _ in 0..trials {
        let (x, y, z) = (random_element(f, &mut rng), random_element(f, &mut rng), random_element(f, &mut rng));
        ensure(&(&x + &y) + &z == &x + &(&y + &z), || format!("addition not associative at {x}, {y}, {z}"))?;
        ensure(&(&x * &y) * &z == &x * &(&y * &z), || format!("multiplication not associative at {x}, {y}, {z}"))?;
        ensure(&x * &y == &y * &x, || format!("multiplication not commutative at {x}, {y}"))?;
        ensure(&x * &(&y + &z) == &x * &y + &x * &z, || format!("not distributive at {x}, {y}, {z}"))?;
        if !x.is_zero() {
            ensure((&x * &x.inverse().unwrap()).is_one(), || format!("bad inverse of {x}"))?;
        }
        let diff = x.to_f64() - y.to_f64();
        if diff.abs() > 1e-9 {
            ensure((diff > 0.0) == (x > y), || format!("order disagrees with floats at {x}, {y}"))?;
        }
    }
    Ok(format!("{trials} random triples in Q(sqrt({}))", f.radicand()))
}

fn lambda_equation(p: &LadderParams) -> Outcome {
    ensure(p.residual().is_zero(), || format!("residual {}", p.residual()))?;
    ensure(p.quadratic_residual().is_zero(), || format!("quadratic residual {}", p.quadratic_residual()))?;
    ensure(p.lambda.is_positive() && p.lambda < p.field().one(), || "lambda not in (0, 1)".into())?;
    Ok(format!("lambda = {}", p.lambda))
}

fn area_identity(p: &LadderParams, depth: usize, fault: Option<Fault>) -> Outcome {
    let closed = area(p);
    let terms = 200;
    let series = area_series_f64(p, terms);
    ensure((series - closed.to_f64()).abs() < 1e-12, || format!("float series {series} vs {}", closed.to_f64()))?;
    ensure(area_partial_sum(p, 40) + area_tail(p, 40) == closed, || "partial sum plus tail differs".into())?;
    let surface = build_surface(p, depth).map_err(|e| e.to_string())?;
    for dir in Direction::ALL {
        let mut dec = decompose(&surface, dir).map_err(|e| e.to_string())?;
        if fault == Some(Fault::AreaTail) {
            dec.tail_ratio = None;
        }
        let total = dec.total_area();
        ensure(total == closed, || format!("{dir} cylinders sum to {total}, expected {closed}"))?;
    }
    Ok(format!("area = {closed}"))
}

fn cylinder_moduli(p: &LadderParams, depth: usize) -> Outcome {
    let surface = build_surface(p, depth).map_err(|e| e.to_string())?;
    let f = p.field();
    let k_over_l = BigRational::new(p.k.into(), p.l.into());
    let upper = p.one_plus_lambda().scale(&k_over_l);
    let t = MoebiusElement::translation(&p.shear());
    for dir in Direction::ALL {
        let dec = decompose(&surface, dir).map_err(|e| e.to_string())?;
        ensure(dec.cylinders[0].modulus() == p.one_plus_lambda(), || format!("{dir}: bottom modulus"))?;
        if let Some(c) = dec.cylinders[1..].iter().find(|c| c.modulus() != upper) {
            return Err(format!("{dir}: modulus of cylinder {} is {}", c.index, c.modulus()));
        }
        match commensurability(&dec).map_err(|e| e.to_string())? {
            Commensurability::Commensurable { m, multipliers } => {
                ensure(m * p.shear() == f.one(), || format!("{dir}: m is not 1/(k(1+lambda))"))?;
                ensure(
                    multipliers[0] == p.k as u64 && multipliers[1..].iter().all(|&x| x == p.l as u64),
                    || format!("{dir}: multipliers {multipliers:?}"),
                )?;
            }
            Commensurability::NotCommensurable { index } => {
                return Err(format!("{dir}: not commensurable at cylinder {index}"))
            }
        }
        let syn = synthesize_parabolic(&dec).map_err(|e| e.to_string())?;
        let expected = t.conjugate_by(&dir.change_matrix(f)).map_err(|e| e.to_string())?;
        ensure(syn.element == expected, || format!("{dir}: synthesized {}", syn.element))?;
        let twists = twist_counts(&dec, &p.shear()).map_err(|e| e.to_string())?;
        ensure(
            twists[0] == p.k as u64 && twists[1..].iter().all(|&x| x == p.l as u64),
            || format!("{dir}: twists {twists:?}"),
        )?;
    }
    Ok(format!("{} cylinders per direction, twists ({}, {}, ...)", depth + 1, p.k, p.l))
}

fn conjugation(fault: Option<Fault>) -> Outcome {
    let holds = if fault == Some(Fault::ChartFactor) {
        let q3 = QuadField::new(3).expect("valid radicand");
        let literal = Mat2::new(
            q3.one(),
            q3.ratio(-1, 2),
            q3.zero(),
            q3.element(BigRational::from_integer(0.into()), BigRational::new(1.into(), 2.into())),
        )
        .map_err(|e| e.to_string())?;
        let target = Mat2::from_ints(q3, [-1, -1, 1, 0]);
        conjugation_identity_holds(&hexagon_chart_inverse(), &hexagon_rotation(), &literal, &target)
    } else {
        hexagon_conjugation_identity()
    };
    ensure(holds, || "chart conjugate of the rotation is not R".into())?;
    Ok(format!("{} * rot * {} = R", hexagon_chart_inverse(), hexagon_chart_matrix()))
}

fn band_parabolics_check(dom: &FundamentalDomain) -> Outcome {
    let s = band_parabolics(&dom.params).map_err(|e| e.to_string())?;
    for (name, m) in [("P_lambda", &s.p_lambda), ("P_inv_lambda", &s.p_inv_lambda)] {
        let (ans, _) = membership(dom, m).map_err(|e| e.to_string())?;
        ensure(ans == Membership::No, || format!("{name} reported {ans}"))?;
    }
    Ok("det 1, trace 2, fixed points 1/lambda and lambda; neither in G".into())
}

fn group_structure(dom: &FundamentalDomain) -> Outcome {
    let r = dom.r();
    ensure(r.pow(3).is_identity(), || "R^3 is not the identity".into())?;
    let t = dom.t();
    let mut power = t.clone();
    for n in 1..=50 {
        ensure(!power.is_identity(), || format!("T^{n} is the identity"))?;
        power = power.compose(&t);
    }
    Ok("R^3 = id, T^n != id for n <= 50".into())
}

fn reduction(dom: &FundamentalDomain, cfg: &SuiteConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut max_iter = 0;
    for _ in 0..cfg.random_points {
        let z = random_point(dom, &mut rng);
        let red = reduce(dom, &z).map_err(|e| format!("{z}: {e}"))?;
        ensure(dom.contains_closure(&red.reduced_point), || format!("{z} reduced outside F"))?;
        ensure(dom.evaluate(&red.word).apply(&z) == red.reduced_point, || format!("{z}: word does not map to result"))?;
        max_iter = max_iter.max(red.iterations);
    }
    let z0 = base_point(dom);
    for _ in 0..cfg.round_trips {
        let w = random_word(&mut rng, 20);
        let g = dom.evaluate(&w);
        let red = reduce(dom, &g.apply(&z0)).map_err(|e| format!("{w}: {e}"))?;
        ensure(dom.evaluate(&red.word).compose(&g).is_identity(), || format!("round trip failed for {w}"))?;
        ensure(red.word == w.inverse(), || format!("{w} reduced to {} instead of its inverse", red.word))?;
    }
    Ok(format!(
        "{} points (max {} iterations), {} word round trips",
        cfg.random_points, max_iter, cfg.round_trips
    ))
}

fn membership_check(dom: &FundamentalDomain, cfg: &SuiteConfig) -> Outcome {
    let f = dom.field();
    for (w, m) in [(GroupWord::t(1), dom.t()), (GroupWord::r(1), dom.r())] {
        let (ans, _) = membership(dom, &m).map_err(|e| e.to_string())?;
        ensure(ans == Membership::Yes(w.clone()), || format!("{w} reported {ans}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    for _ in 0..100 {
        let w = random_word(&mut rng, 12);
        let (ans, _) = membership(dom, &dom.evaluate(&w)).map_err(|e| e.to_string())?;
        ensure(ans == Membership::Yes(w.clone()), || format!("{w} reported {ans}"))?;
    }
    let shear_one = MoebiusElement::from_ints(f, [1, 1, 0, 1]).map_err(|e| e.to_string())?;
    let (ans, _) = membership(dom, &shear_one).map_err(|e| e.to_string())?;
    ensure(ans == Membership::No, || format!("(1 1; 0 1) reported {ans}"))?;
    Ok(format!("{}: T, R, 100 random words yes; (1 1; 0 1) no", Membership::LABEL))
}

fn orbit_gap(dom: &FundamentalDomain, max_len: u64) -> Outcome {
    let gap = cusp_orbit_gap(dom, max_len).map_err(|e| e.to_string())?;
    match gap.violation {
        None => Ok(format!("{} words, {} cusp images outside (lambda, 1/lambda)", gap.words, gap.images_checked)),
        Some(w) => Err(format!("{w} sends a cusp into (lambda, 1/lambda)")),
    }
}

fn hexagons(p: &LadderParams, fault: Option<Fault>) -> Outcome {
    let mut chart = hexagon_chart(p, 6).map_err(|e| e.to_string())?;
    if fault == Some(Fault::HexagonGluing) {
        chart.swap_partners(EdgeRef::new(2, 0), EdgeRef::new(2, 2));
    }
    ensure(check_rotation_symmetry(&chart), || "rotation does not commute with the gluing".into())?;
    let mut mutated = chart.clone();
    mutated.swap_partners(EdgeRef::new(1, 0), EdgeRef::new(1, 4));
    ensure(!check_rotation_symmetry(&mutated), || "mutated chart still passes".into())?;
    Ok(format!("depth {}, {} glued pairs", chart.depth(), chart.glued_pairs().count()))
}

fn segments(p: &LadderParams, depth: usize) -> Outcome {
    let surface = build_surface(p, depth).map_err(|e| e.to_string())?;
    let one = BigRational::from_integer(1.into());
    let count = depth.min(16) - 1;
    let v = singular_segments(&surface, &one, count).map_err(|e| e.to_string())?;
    let s = accumulation_point(p);
    let lam_sq = &p.lambda * &p.lambda;
    let starts: Vec<_> = v.iter().filter(|v| !v.mirrored).map(|v| &v.start).collect();
    for w in starts.windows(2) {
        ensure(w[1].dist_sq(&s) == w[0].dist_sq(&s) * &lam_sq, || "start distances do not shrink by lambda".into())?;
    }
    let contained = v.iter().filter(|v| v.contained).count();
    ensure(contained == v.len(), || format!("{} of {} slope-1 segments leave the region", v.len() - contained, v.len()))?;
    Ok(format!("{} slope-1 unit segments contained", v.len()))
}

/// Runs every check. Checks run on separate threads; verdicts come back in
/// a fixed order.
pub fn run_suite(params: &LadderParams, cfg: &SuiteConfig) -> Vec<Verdict> {
    let dom = build_domain(params);
    let dom = dom.as_ref().map_err(|e| e.to_string());
    type Check<'a> = (&'static str, Box<dyn FnOnce() -> Option<Outcome> + Send + 'a>);
    let p = params;
    let checks: Vec<Check> = vec![
        ("field-axioms", Box::new(move || Some(field_axioms(p, cfg.seed)))),
        ("lambda-equation", Box::new(move || Some(lambda_equation(p)))),
        ("area-identity", Box::new(move || Some(area_identity(p, cfg.depth, cfg.fault)))),
        ("cylinder-moduli", Box::new(move || Some(cylinder_moduli(p, cfg.depth)))),
        ("conjugation-identity", Box::new(move || Some(conjugation(cfg.fault)))),
        ("band-parabolics", Box::new({
            let dom = dom.clone();
            move || Some(dom.and_then(band_parabolics_check))
        })),
        ("group-structure", Box::new({
            let dom = dom.clone();
            move || Some(dom.and_then(group_structure))
        })),
        ("reduction-round-trip", Box::new({
            let dom = dom.clone();
            move || Some(dom.and_then(|d| reduction(d, cfg)))
        })),
        ("membership", Box::new({
            let dom = dom.clone();
            move || Some(dom.and_then(|d| membership_check(d, cfg)))
        })),
        ("cusp-orbit-gap", Box::new({
            let dom = dom.clone();
            move || {
                (cfg.max_word_len > 0).then(|| dom.and_then(|d| orbit_gap(d, cfg.max_word_len)))
            }
        })),
        ("hexagon-rotation-symmetry", Box::new(move || Some(hexagons(p, cfg.fault)))),
        ("singular-segments", Box::new(move || Some(segments(p, cfg.depth)))),
    ];
    std::thread::scope(|scope| {
        let handles: Vec<_> = checks
            .into_iter()
            .map(|(name, check)| (name, scope.spawn(check)))
            .collect();
        handles
            .into_iter()
            .map(|(name, h)| {
                let (status, detail) = match h.join() {
                    Ok(Some(Ok(detail))) => (Status::Pass, detail),
                    Ok(Some(Err(detail))) => (Status::Fail, detail),
                    Ok(None) => (Status::Skipped, "disabled by --max-word-len 0".to_string()),
                    Err(panic) => {
                        let msg = panic
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_else(|| "panicked".into());
                        (Status::Fail, format!("panicked: {msg}"))
                    }
                };
                Verdict {
                    name: name.to_string(),
                    status,
                    detail,
                }
            })
            .collect()
    })
}

pub fn first_failure(verdicts: &[Verdict]) -> Option<&Verdict> {
    verdicts.iter().find(|v| v.status == Status::Fail)
}

