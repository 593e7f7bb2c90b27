use plane_sheaves::kronecker::{is_semistable, verify_destabilizer};
use plane_sheaves::points::{minimal_resolution, verify_point_claim, ClaimOutcome};
use plane_sheaves::stability::{coprime_minors_criterion, linear_block_verdict, two_summand_criterion};
use plane_sheaves::strata::{classify, generate, normalize, normalize_chi, ChiStep};
use plane_sheaves::{BettiShape, HilbertData, KroneckerModule, KroneckerVerdict, PointClaim, Presentation, StabilityVerdict};
use serde::Serialize;

use crate::{input, tables, Command, Failure, PointsCommand};

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn json<T: Serialize>(v: &T) -> Self {
        Output {
            text: to_json(v),
            code: 0,
        }
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Classified {
    chi: i64,
    stratum: String,
    codim: u32,
    profile: [u64; 4],
    hilbert: HilbertData,
    recipe: Vec<ChiStep>,
}

fn cmd_classify(p: &Presentation) -> Result<Output, Failure> {
    let label = classify(p)?;
    let h = p.hilbert()?;
    let (_, recipe) = normalize_chi(h.r, h.chi)?;
    let prof = normalize(p)?.profile()?;
    Ok(Output::json(&Classified {
        chi: label.chi,
        stratum: label.id,
        codim: label.codim,
        profile: prof.as_array(),
        hilbert: h,
        recipe,
    }))
}

#[derive(Serialize)]
pub struct Shape {
    pub gens: Vec<u32>,
    pub syz: Vec<u32>,
}

impl From<&BettiShape> for Shape {
    fn from(b: &BettiShape) -> Self {
        Shape {
            gens: b.generators.clone(),
            syz: b.syzygies.clone(),
        }
    }
}

#[derive(Serialize)]
struct ClaimReport {
    claim: String,
    outcome: &'static str,
    predicted: Shape,
    observed: Shape,
}

fn cmd_points(c: PointsCommand) -> Result<Output, Failure> {
    match c {
        PointsCommand::Resolve { input, cap } => {
            let cfg = input::points(&input)?;
            Ok(Output::json(&Shape::from(&minimal_resolution(&cfg, cap)?)))
        }
        PointsCommand::Claim { claim, input } => {
            let id = PointClaim::from_id(&claim).ok_or_else(|| {
                let known: Vec<&str> = PointClaim::ALL.iter().map(|c| c.id()).collect();
                Failure::new(2, format!("unknown claim {}, expected one of {}", claim, known.join(", ")))
            })?;
            let cfg = input::points(&input)?;
            let predicted = id.predicted();
            let (outcome, observed, code) = match verify_point_claim(id, &cfg)? {
                ClaimOutcome::Match => ("match", predicted.clone(), 0),
                ClaimOutcome::Mismatch(b) => ("mismatch", b, 1),
            };
            let mut out = Output::json(&ClaimReport {
                claim: id.id().to_string(),
                outcome,
                predicted: Shape::from(&predicted),
                observed: Shape::from(&observed),
            });
            out.code = code;
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct TwistRow {
    t: i64,
    h0: u64,
    h1: u64,
}

#[derive(Serialize)]
struct HilbertReport {
    r: i64,
    chi: i64,
    twists: Vec<TwistRow>,
    profile: [u64; 4],
}

fn cmd_hilbert(p: &Presentation) -> Result<Output, Failure> {
    let h = p.hilbert()?;
    let mut twists = Vec::new();
    for t in -3..=3 {
        twists.push(TwistRow {
            t,
            h0: p.h0_twist(t),
            h1: p.h1_twist(t)?,
        });
    }
    Ok(Output::json(&HilbertReport {
        r: h.r,
        chi: h.chi,
        twists,
        profile: p.profile()?.as_array(),
    }))
}

#[derive(Serialize)]
struct DestabilizerJson {
    p_sub: usize,
    q_sub: usize,
    s: Vec<Vec<String>>,
    t: Vec<Vec<String>>,
    verified: bool,
}

#[derive(Serialize)]
struct KronReport {
    q: usize,
    p: usize,
    verdict: &'static str,
    destabilizer: Option<DestabilizerJson>,
}

fn cmd_kron(input: &str, budget: usize, seed: u64) -> Result<Output, Failure> {
    let k = KroneckerModule::new(&input::linear_matrix(input)?)?;
    let v = is_semistable(&k, budget, seed);
    let text = |vs: &[Vec<plane_sheaves::Rational>]| vs.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
    let destabilizer = match &v {
        KroneckerVerdict::Unstable(d) => Some(DestabilizerJson {
            p_sub: d.p_sub,
            q_sub: d.q_sub,
            s: text(&d.s),
            t: text(&d.t),
            verified: verify_destabilizer(&k, d),
        }),
        _ => None,
    };
    Ok(Output::json(&KronReport {
        q: k.q(),
        p: k.p(),
        verdict: v.name(),
        destabilizer,
    }))
}

#[derive(Serialize)]
struct CriterionResult {
    name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<StabilityVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    not_applicable: Option<String>,
}

fn cmd_stability(p: &Presentation) -> Result<Output, Failure> {
    let runs: [(&'static str, fn(&Presentation) -> plane_sheaves::Result<StabilityVerdict>); 3] = [
        ("coprime-minors", coprime_minors_criterion),
        ("two-summand", two_summand_criterion),
        ("linear-block", linear_block_verdict),
    ];
    let criteria: Vec<CriterionResult> = runs
        .iter()
        .map(|(name, f)| match f(p) {
            Ok(v) => CriterionResult {
                name,
                verdict: Some(v),
                not_applicable: None,
            },
            Err(e) => CriterionResult {
                name,
                verdict: None,
                not_applicable: Some(e.to_string()),
            },
        })
        .collect();
    Ok(Output::json(&serde_json::json!({ "criteria": criteria })))
}

pub fn run(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Classify { input } => cmd_classify(&input::presentation(&input)?),
        Command::VerifyTables {
            chi,
            samples,
            seed,
            format,
            out_dir,
        } => tables::verify_tables(chi, samples, seed, format, out_dir.as_deref()),
        Command::Points { command } => cmd_points(command),
        Command::Hilbert { input } => cmd_hilbert(&input::presentation(&input)?),
        Command::Dual { input } => {
            let mut text = input::presentation(&input)?.dual().to_json();
            text.push('\n');
            Ok(Output { text, code: 0 })
        }
        Command::KronCheck { input, budget, seed } => cmd_kron(&input, budget, seed),
        Command::Stability { input } => cmd_stability(&input::presentation(&input)?),
        Command::Gen { chi, stratum, seed } => {
            let mut text = generate(chi, &stratum, seed)?.to_json();
            text.push('\n');
            Ok(Output { text, code: 0 })
        }
        Command::Dims { chi, seed, format } => tables::dims(chi, seed, format),
    }
}
