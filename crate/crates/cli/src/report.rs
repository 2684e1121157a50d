use serde::{Deserialize, Serialize};

use ladder_core::checks::Verdict;
use ladder_core::cylinders::{
    commensurability, synthesize_parabolic, twist_counts, widest_cylinder, Commensurability, CylinderDecomposition,
};
use ladder_core::fuchsian::{FundamentalDomain, ReductionStep};
use ladder_core::moebius::{HalfPlanePoint, MoebiusElement};
use ladder_core::numeric::{LadderParams, QuadExt};

pub const SCHEMA: &str = "veech-ladder/1";

/// An exact value with a truncated decimal alongside. Only `exact` is
/// authoritative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exact {
    pub exact: String,
    pub approx: String,
}

impl Exact {
    pub fn new(x: &QuadExt, digits: usize) -> Self {
        Exact {
            exact: x.to_string(),
            approx: x.to_decimal(digits),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsEcho {
    pub k: i64,
    pub l: i64,
    pub radicand: u64,
    pub depth: usize,
    pub digits: usize,
}

impl ParamsEcho {
    pub fn new(p: &LadderParams, depth: usize, digits: usize) -> Self {
        ParamsEcho {
            k: p.k,
            l: p.l,
            radicand: p.radicand(),
            depth,
            digits,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub schema: String,
    pub k: i64,
    pub l: i64,
    pub lambda: Exact,
    #[serde(rename = "D")]
    pub radicand: u64,
    pub residual: String,
    pub veech_group_known: bool,
}

pub fn lambda_report(p: &LadderParams, digits: usize) -> LambdaReport {
    LambdaReport {
        schema: SCHEMA.into(),
        k: p.k,
        l: p.l,
        lambda: Exact::new(&p.lambda, digits),
        radicand: p.radicand(),
        residual: p.residual().to_string(),
        veech_group_known: p.veech_group_known(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
}

impl MatrixRow {
    pub fn new(m: &MoebiusElement) -> Self {
        MatrixRow {
            a: m.a().to_string(),
            b: m.b().to_string(),
            c: m.c().to_string(),
            d: m.d().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderRow {
    pub index: usize,
    pub height: Exact,
    pub circumference: Exact,
    pub modulus: Exact,
    pub euclidean_modulus: Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CommensurabilityRow {
    Commensurable { m: Exact, multipliers: Vec<u64> },
    NotCommensurable { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionReport {
    pub direction: String,
    pub cylinders: Vec<CylinderRow>,
    pub commensurability: CommensurabilityRow,
    pub shear: Option<Exact>,
    pub parabolic: Option<MatrixRow>,
    pub conjugator: Option<MatrixRow>,
    pub twist_counts: Option<Vec<u64>>,
    pub widest_cylinder: Option<usize>,
}

pub fn direction_report(dec: &CylinderDecomposition, digits: usize) -> anyhow::Result<DirectionReport> {
    let cylinders = dec
        .cylinders
        .iter()
        .map(|c| CylinderRow {
            index: c.index,
            height: Exact::new(&c.height, digits),
            circumference: Exact::new(&c.circumference, digits),
            modulus: Exact::new(&c.modulus(), digits),
            euclidean_modulus: Exact::new(&c.euclidean_modulus(), digits),
        })
        .collect();
    let (comm, shear, parabolic, conjugator, twists) = match commensurability(dec)? {
        Commensurability::Commensurable { m, multipliers } => {
            let syn = synthesize_parabolic(dec)?;
            let twists = twist_counts(dec, &syn.shear)?;
            let c = &syn.conjugator;
            let conj = MatrixRow {
                a: c.a.to_string(),
                b: c.b.to_string(),
                c: c.c.to_string(),
                d: c.d.to_string(),
            };
            (
                CommensurabilityRow::Commensurable {
                    m: Exact::new(&m, digits),
                    multipliers,
                },
                Some(Exact::new(&syn.shear, digits)),
                Some(MatrixRow::new(&syn.element)),
                Some(conj),
                Some(twists),
            )
        }
        Commensurability::NotCommensurable { index } => {
            (CommensurabilityRow::NotCommensurable { index }, None, None, None, None)
        }
    };
    Ok(DirectionReport {
        direction: dec.direction.to_string(),
        cylinders,
        commensurability: comm,
        shear,
        parabolic,
        conjugator,
        twist_counts: twists,
        widest_cylinder: widest_cylinder(dec).ok().map(|c| c.index),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylindersReport {
    pub schema: String,
    pub params: ParamsEcho,
    pub directions: Vec<DirectionReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: String,
    pub params: ParamsEcho,
    pub max_word_len: u64,
    pub seed: u64,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRow {
    pub re: String,
    pub im: String,
}

impl PointRow {
    pub fn new(z: &HalfPlanePoint) -> Self {
        PointRow {
            re: z.re().to_string(),
            im: z.im().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRow {
    pub apply: String,
    pub re: String,
    pub im: String,
}

pub fn step_rows(steps: &[ReductionStep]) -> Vec<StepRow> {
    steps
        .iter()
        .map(|s| StepRow {
            apply: s.apply.to_string(),
            re: s.re.to_string(),
            im: s.im.to_string(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub schema: String,
    pub question: String,
    pub params: ParamsEcho,
    pub matrix: MatrixRow,
    pub answer: String,
    pub word: Option<String>,
    pub warning: Option<String>,
    pub trace: Option<Vec<StepRow>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceReport {
    pub schema: String,
    pub params: ParamsEcho,
    pub input: PointRow,
    pub word: String,
    pub reduced: PointRow,
    pub iterations: u32,
    pub steps: Vec<StepRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainRow {
    pub strip_left: Exact,
    pub strip_right: Exact,
    pub disk_centers: Vec<String>,
    pub disk_radius: String,
    pub free_side: (Exact, Exact),
    pub veech_group_known: bool,
    pub warning: Option<String>,
}

pub fn domain_row(dom: &FundamentalDomain, digits: usize) -> DomainRow {
    let (a, b) = dom.free_side();
    DomainRow {
        strip_left: Exact::new(&dom.strip_left, digits),
        strip_right: Exact::new(&dom.strip_right, digits),
        disk_centers: vec!["0".into(), "-1".into()],
        disk_radius: "1".into(),
        free_side: (Exact::new(&a, digits), Exact::new(&b, digits)),
        veech_group_known: dom.veech_group_known,
        warning: dom.warning().map(str::to_string),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generators {
    #[serde(rename = "T")]
    pub t: MatrixRow,
    #[serde(rename = "R")]
    pub r: MatrixRow,
}

/// Everything at once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullReport {
    pub schema: String,
    pub params: ParamsEcho,
    pub lambda: Exact,
    pub area: Exact,
    pub cylinders: Vec<DirectionReport>,
    pub generators: Generators,
    pub domain: DomainRow,
    pub checks: Vec<Verdict>,
}
