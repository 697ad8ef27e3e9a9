//! `cantor-rays` — batch interface to the ray/loop toolkit.
//!
//! Simple verbs (`gen`, `canon`, `act`, `intersect`) print their result as
//! plain text on stdout, or a JSON object with `--json`. Suite verbs
//! (`distance`, `unicorn`, `qi-check`, `delta`, `qm`, `verify`) always print
//! a JSON report on stdout and a one-line human summary on stderr. Every
//! run is deterministic given its flags and seed.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

use std::process::ExitCode;

use cantor_rays::coding::{alpha, alpha_neg, gamma, long, parse_code, Code, RayCode};
use cantor_rays::graphs::{build_slice, distance, SliceKind};
use cantor_rays::mcg::{apply, MappingClass};
use cantor_rays::model::{
    build_model, canonical, code_geometric_intersection, code_positive_intersection,
    essential_loop, hat, is_simple, realize, tighten,
};
use cantor_rays::unicorn::{
    check_subpath_property, check_thin_triangle, unicorn_path, OrientedLoop, SubpathReport,
};
use cantor_rays_cli::checks;
use clap::{CommandFactory, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "cantor-rays",
    version,
    about = "Rays and loops on the sphere minus a Cantor set: codes, actions, crossing counts, \
             graph-slice certificates, and the verification battery"
)]
struct Cli {
    /// Print a JSON report on stdout even for the simple verbs.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Print the code of a standard family member.
    Gen {
        /// Axis index k: alpha_k for k >= 0, the backward axis for k < 0.
        #[arg(long, allow_negative_numbers = true, value_name = "K")]
        alpha: Option<i64>,
        /// Loop-axis family index k: gamma_k.
        #[arg(long, value_name = "K")]
        gamma: Option<u32>,
    },
    /// Canonicalize a code (tighten to minimal position and re-encode).
    Canon {
        /// Ray code like "s1 s-1 @p1" or loop code like "s0 s1"; a leading
        /// "^" marks a north-started word.
        code: String,
    },
    /// Apply a mapping-class word to a code.
    Act {
        /// Whitespace-separated moves: t1, t2, phi (suffix ' inverts), or
        /// the named words h, h2, g.
        moves: String,
        code: String,
    },
    /// Count crossings of two codes in minimal position.
    Intersect {
        /// Report the two one-sided counts instead of the geometric count.
        #[arg(long)]
        signed: bool,
        c1: String,
        c2: String,
    },
    /// Distance certificate between two codes of the same kind, computed in
    /// a finite slice spanned by them.
    Distance {
        c1: String,
        c2: String,
        /// Maximum enumerated word length of the slice.
        #[arg(long = "L", default_value_t = 2)]
        l: usize,
        /// Index window of the slice.
        #[arg(long = "N", default_value_t = 3)]
        n: i64,
    },
    /// Unicorn path between two oriented loops, the thin-triangle report
    /// against a third corner, and the sub-path dichotomy along the path.
    Unicorn {
        l1: String,
        l2: String,
        /// Third triangle corner; defaults to the hat of the axis start.
        l3: Option<String>,
    },
    /// Quasi-isometry suite: hat-map distance bounds over the standard pair
    /// family.
    QiCheck {
        /// Number of sampled extra pairs beyond the axis pairs.
        #[arg(long, default_value_t = 60)]
        pairs: usize,
        #[arg(long, default_value_t = 0x91)]
        seed: u64,
    },
    /// Hyperbolicity sampling: thinness of certified geodesic triangles in
    /// a loop-graph slice.
    Delta {
        #[arg(long = "L", default_value_t = 3)]
        l: usize,
        #[arg(long = "N", default_value_t = 3)]
        n: i64,
        #[arg(long, default_value_t = 40)]
        triangles: usize,
        #[arg(long, default_value_t = 2026)]
        seed: u64,
    },
    /// Counting-quasimorphism suite: translation counts, reversed counts,
    /// and homogenized sequences.
    Qm {
        /// Quasi-geodesic stability parameter for the copy search.
        #[arg(long = "B", default_value_t = 1)]
        b: u32,
    },
    /// Run the full verification battery; exits nonzero on any failure.
    Verify,
}

/// Errors that end the run: usage problems exit 2, failed verification 1.
enum Failure {
    Usage(String),
    Verification,
}

fn usage_err<E: std::fmt::Display>(context: String) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Usage(format!("{context}: {e}"))
}

fn parse(src: &str) -> Result<Code, Failure> {
    parse_code(src).map_err(usage_err(format!("cannot parse code {src:?}")))
}

fn parse_loop(src: &str) -> Result<OrientedLoop, Failure> {
    let l = match parse(src)? {
        Code::Loop(l) => l,
        Code::Ray(_) => {
            return Err(Failure::Usage(format!("{src:?} is a ray; this verb needs loops")))
        }
    };
    // Only embedded essential loops are loop-graph vertices; reject the rest
    // here so the verb fails with usage text instead of a panic.
    let code = canonical(&Code::Loop(l.clone()));
    let m = build_model(std::slice::from_ref(&code));
    let arc = tighten(&m, &realize(&m, &code).expect("auto-sized window covers the code"));
    if !is_simple(&m, &arc) {
        return Err(Failure::Usage(format!("loop {src:?} crosses itself")));
    }
    match &code {
        Code::Loop(canon) if essential_loop(canon) => Ok(OrientedLoop::standard(canon)),
        _ => Err(Failure::Usage(format!("loop {src:?} is inessential"))),
    }
}

fn emit<T: Serialize>(report: &T) {
    println!("{}", serde_json::to_string_pretty(report).expect("reports serialize"));
}

/// Simple-verb output: plain line by default, JSON object with `--json`
/// (then the plain line moves to stderr as the human summary).
fn simple<T: Serialize>(json: bool, report: &T, plain: &str) {
    if json {
        emit(report);
        eprintln!("{plain}");
    } else {
        println!("{plain}");
    }
}

#[derive(Serialize)]
struct GenReport {
    family: String,
    k: i64,
    code: String,
    long: usize,
}

#[derive(Serialize)]
struct CanonReport {
    input: String,
    canonical: String,
}

#[derive(Serialize)]
struct ActReport {
    moves: String,
    input: String,
    image: String,
}

#[derive(Serialize)]
#[serde(untagged)]
enum IntersectReport {
    Geometric { geometric: u64 },
    Signed { forward: u64, backward: u64 },
}

#[derive(Serialize)]
struct DistanceReport {
    certificate: cantor_rays::graphs::DistanceCertificate,
    slice_vertices: usize,
    slice_edges: usize,
    truncated: bool,
}

#[derive(Serialize)]
struct UnicornReport {
    path: Vec<String>,
    triangle_thin: bool,
    triangle_corner: String,
    subpaths: Vec<SubpathReport>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.verb {
        Verb::Gen { alpha: a, gamma: g } => {
            let (family, k, ray): (&str, i64, RayCode) = match (a, g) {
                (Some(k), None) if k >= 0 => ("alpha", k, alpha(k as u32)),
                (Some(k), None) => ("alpha", k, alpha_neg((-k) as u32)),
                (None, Some(k)) => ("gamma", k as i64, gamma(k)),
                _ => {
                    return Err(Failure::Usage(
                        "gen needs exactly one of --alpha <K> or --gamma <K>".into(),
                    ))
                }
            };
            let code = ray.to_string();
            let report =
                GenReport { family: family.to_string(), k, code: code.clone(), long: long(&ray) };
            simple(cli.json, &report, &code);
        }
        Verb::Canon { code } => {
            let input = parse(&code)?;
            let out = canonical(&input).to_string();
            simple(cli.json, &CanonReport { input: input.to_string(), canonical: out.clone() }, &out);
        }
        Verb::Act { moves, code } => {
            let mc: MappingClass =
                moves.parse().map_err(usage_err(format!("cannot parse moves {moves:?}")))?;
            let input = parse(&code)?;
            let image = apply(&mc, &input).to_string();
            simple(
                cli.json,
                &ActReport { moves, input: input.to_string(), image: image.clone() },
                &image,
            );
        }
        Verb::Intersect { signed, c1, c2 } => {
            let a = parse(&c1)?;
            let b = parse(&c2)?;
            if signed {
                let forward = code_positive_intersection(&a, &b);
                let backward = code_positive_intersection(&b, &a);
                simple(
                    cli.json,
                    &IntersectReport::Signed { forward, backward },
                    &format!("I = {forward} forward, {backward} backward"),
                );
            } else {
                let geometric = code_geometric_intersection(&a, &b);
                simple(
                    cli.json,
                    &IntersectReport::Geometric { geometric },
                    &format!("I = {geometric}"),
                );
            }
        }
        Verb::Distance { c1, c2, l, n } => {
            let a = canonical(&parse(&c1)?);
            let b = canonical(&parse(&c2)?);
            let kind = match (&a, &b) {
                (Code::Ray(_), Code::Ray(_)) => SliceKind::RayGraph,
                (Code::Loop(_), Code::Loop(_)) => SliceKind::LoopGraph,
                _ => {
                    return Err(Failure::Usage(
                        "distance needs two rays or two loops, not a mix".into(),
                    ))
                }
            };
            let slice = build_slice(kind, l, n, &[a.clone(), b.clone()]);
            if !slice.contains(&a) || !slice.contains(&b) {
                return Err(Failure::Usage(
                    "an input is not a graph vertex (not simple, or an inessential loop)".into(),
                ));
            }
            let certificate = distance(&slice, &a, &b);
            eprintln!(
                "d({a}, {b}) in [{}, {}], exact: {} (slice: {} vertices, {} edges)",
                certificate.lower,
                certificate.upper.map_or("?".to_string(), |u| u.to_string()),
                certificate.exact,
                slice.vertex_count(),
                slice.edge_count(),
            );
            emit(&DistanceReport {
                certificate,
                slice_vertices: slice.vertex_count(),
                slice_edges: slice.edge_count(),
                truncated: slice.truncated,
            });
        }
        Verb::Unicorn { l1, l2, l3 } => {
            let a = parse_loop(&l1)?;
            let b = parse_loop(&l2)?;
            let d = match &l3 {
                Some(s) => parse_loop(s)?,
                None => OrientedLoop::standard(&hat(&alpha(0))),
            };
            let path = unicorn_path(&a, &b);
            let triangle = check_thin_triangle(&a, &b, &d);
            let n = path.vertices.len() - 1;
            let mut subpaths = Vec::new();
            for i in 0..=n {
                for j in i..=n {
                    subpaths.push(check_subpath_property(&a, &b, i, j));
                }
            }
            eprintln!(
                "unicorn path has {} vertices; triangle against {} is 1-thin; {} sub-path \
                 queries all block-or-shortcut",
                path.vertices.len(),
                d.class(),
                subpaths.len(),
            );
            emit(&UnicornReport {
                path: path.vertices.iter().map(|v| v.to_string()).collect(),
                triangle_thin: triangle.witnesses.iter().all(|w| w.distance <= 1),
                triangle_corner: d.class().to_string(),
                subpaths,
            });
        }
        Verb::QiCheck { pairs, seed } => {
            let report = checks::qi_battery(pairs, seed);
            eprintln!(
                "{} of {} pairs certified, {} skipped; bounds hold: {}",
                report.certified,
                report.pairs.len(),
                report.skipped,
                report.all_bounds_hold,
            );
            emit(&report);
        }
        Verb::Delta { l, n, triangles, seed } => {
            let report = checks::delta_battery(l, n, triangles, seed);
            eprintln!(
                "{} certified triangles over {} attempts; max thinness {:?}",
                report.triangles.len(),
                report.attempts,
                report.max_thinness,
            );
            emit(&report);
        }
        Verb::Qm { b } => {
            if b < 1 {
                return Err(Failure::Usage("the stability parameter B must be at least 1".into()));
            }
            let battery = checks::qm_battery(b);
            for tc in &battery.translation_counts {
                eprintln!(
                    "translation power {}: count in [{}, {}], reversed in [{}, {}]",
                    tc.k, tc.q.forward.lower, tc.q.forward.upper, tc.q.backward.lower,
                    tc.q.backward.upper,
                );
            }
            eprintln!("restriction: {}", battery.restriction);
            emit(&battery);
        }
        Verb::Verify => {
            let reports = checks::run_all();
            for r in &reports {
                eprintln!(
                    "criterion {:02} {:<26} {}",
                    r.id,
                    r.name,
                    if r.passed { "pass" } else { "FAIL" },
                );
                if !r.passed {
                    eprintln!("  {}", r.detail);
                }
            }
            emit(&reports);
            if !reports.iter().all(|r| r.passed) {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // Clap itself exits 2 on malformed flags; mirror that for semantic
    // usage errors and reserve 1 for genuine verification failures.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            let usage = Cli::command().render_usage();
            eprintln!("{usage}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => ExitCode::from(1),
    }
}
