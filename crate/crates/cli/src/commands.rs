use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};
use smoothpoly::acceptance::{self, CRITERIA};
use smoothpoly::bounds::{bound_report, thm11_main_term};
use smoothpoly::dickman::{martin_prediction, rho};
use smoothpoly::modroots::{lift_roots, Omega};
use smoothpoly::primdiv::{self, SequenceStart};
use smoothpoly::quadfield::{self, ExclusionStart, QuadContext};
use smoothpoly::smoothsieve::{pplus_range, psi, SieveOptions};
use smoothpoly::vwmachinery::{lemma31_with, split_check, vw_prop21, vw_prop32_with, InstanceSpec, VWInstance};
use smoothpoly::{build_factored, parse_factors, parse_poly, FactoredPoly};

use crate::output::{envelope, to_value, Sink};
use crate::{Cli, CliError, Command, Format, PolyArgs, Start};

/// Per-n tables are capped so a dump stays a reasonable size.
const DUMP_LIMIT: u64 = 1_000_000;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn load_poly(p: &PolyArgs) -> Result<FactoredPoly, CliError> {
    let factors = match (&p.poly, &p.factors) {
        (Some(s), None) => vec![parse_poly(s)?],
        (None, Some(s)) => parse_factors(s)?,
        _ => return Err(usage("exactly one of --poly or --factors is required")),
    };
    Ok(build_factored(factors)?)
}

fn optional_poly(p: &PolyArgs) -> Result<Option<FactoredPoly>, CliError> {
    if p.poly.is_none() && p.factors.is_none() {
        Ok(None)
    } else {
        load_poly(p).map(Some)
    }
}

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let name = command_name(&cli.command);
    let mut config = to_value(&cli.command)?;
    if let Value::Object(m) = &mut config {
        m.remove("command");
        if let Value::Object(g) = to_value(&cli.global)? {
            m.extend(g);
        }
    }
    let mut sink = Sink::new(cli.global.format);
    let emit = |result: Value, sink: &mut Sink| sink.record(&envelope(name, &config, result));
    let mut code = 0;
    match &cli.command {
        Command::Psi { poly, x, y, u, dump } => {
            let f = load_poly(poly)?;
            if y.is_empty() == u.is_empty() {
                return Err(usage("psi needs --y or --u"));
            }
            if *dump && (x.len() != 1 || y.len() + u.len() != 1) {
                return Err(usage("--dump takes a single x and a single y or u"));
            }
            for &xv in x {
                let pairs: Vec<(f64, f64)> = if u.is_empty() {
                    y.iter().map(|&yv| (yv, (xv as f64).ln() / yv.ln())).collect()
                } else {
                    u.iter().map(|&uv| (root_of(xv, uv), uv)).collect()
                };
                for (yv, uv) in pairs {
                    let count = psi(&f, xv, yv)?.psi;
                    let martin = martin_prediction(&f.degrees(), uv).ok();
                    let main = thm11_main_term(&f, xv as f64, uv).ok();
                    emit(
                        json!({
                            "t0": f.t0().ok(),
                            "x": xv,
                            "y": yv,
                            "u": uv,
                            "psi": count,
                            "ratio": count as f64 / xv as f64,
                            "martin_prediction": martin,
                            "main_term": main,
                        }),
                        &mut sink,
                    )?;
                    if *dump {
                        if xv > DUMP_LIMIT {
                            return Err(usage(format!("--dump limited to x <= {DUMP_LIMIT}")));
                        }
                        let t = pplus_range(&f, 1, xv, yv, None, &SieveOptions::default())?;
                        for n in 1..=xv {
                            let row = json!({
                                "n": n,
                                "value": f.eval(n as i64).to_string(),
                                "pplus": t.pplus_at(n).unwrap(),
                                "smooth": t.is_smooth(n),
                            });
                            sink.record(&row)?;
                        }
                    }
                }
            }
        }
        Command::Bound { d, g, poly, u, eps, x } => {
            let f = optional_poly(poly)?;
            let (d, g) = match (&f, d) {
                (Some(f), None) => (f.d() as u32, g.unwrap_or(f.g() as u32)),
                (None, Some(d)) => (*d, g.unwrap_or(1)),
                _ => return Err(usage("give either --d or a polynomial")),
            };
            for &uv in u {
                emit(to_value(&bound_report(d, g, uv, *eps, *x)?)?, &mut sink)?;
            }
        }
        Command::Dickman { u, poly } => {
            let f = optional_poly(poly)?;
            for &uv in u {
                let martin = match &f {
                    Some(f) => Some(martin_prediction(&f.degrees(), uv)?),
                    None => None,
                };
                emit(json!({ "u": uv, "rho": rho(uv)?, "martin_prediction": martin }), &mut sink)?;
            }
        }
        Command::Omega { poly, k, p, v, random, kmax } => {
            let f = load_poly(poly)?;
            let om = Omega::new(&f);
            let mut ks = k.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(cli.global.seed);
            ks.extend((0..*random).map(|_| rng.gen_range(1..=(*kmax).max(1))));
            if ks.is_empty() && p.is_none() {
                return Err(usage("omega needs --k, --random or --p/--v"));
            }
            for kv in ks {
                let fac = smoothpoly::primes::factor(kv);
                emit(json!({ "k": kv, "omega": om.at(kv)?, "factorization": fac }), &mut sink)?;
            }
            if let (Some(p), Some(v)) = (p, v) {
                emit(to_value(&lift_roots(&f, *p, *v)?)?, &mut sink)?;
            }
        }
        Command::VwVerify { poly, x, z, y, depth, config: path } => {
            let (f, instances) = vw_instances(poly, *x, *z, *y, *depth, path.as_deref())?;
            let om = Omega::new(&f);
            for spec in instances {
                let base = VWInstance::new(&f, spec.x, spec.z, spec.y, 1);
                let prop21 = vw_prop21(&base)?;
                let split = vw_prop32_with(&VWInstance::new(&f, spec.x, spec.z, spec.y, spec.depth), &om, true)?;
                let heads = split_check(&base, &om)?;
                let ks: Vec<u64> = (1..=base.h()).collect();
                let l31 = lemma31_with(&base, &om, &ks)?;
                let failures = l31.iter().filter(|r| !r.verdict).count();
                let pass = prop21.verdict_2_1
                    && split.verdict_2_1
                    && split.monotone_v == Some(true)
                    && split.monotone_w == Some(true)
                    && heads.heads_match
                    && heads.tails_bounded
                    && failures == 0;
                if !pass {
                    code = 1;
                }
                emit(
                    json!({
                        "instance": spec,
                        "passed": pass,
                        "undivided": prop21,
                        "split": split,
                        "depth_one_comparison": heads,
                        "recursion": { "kappas": ks.len(), "failures": failures },
                    }),
                    &mut sink,
                )?;
            }
        }
        Command::Calpha { m, x, window, exclusion, dump } => {
            let ctx = QuadContext::new(*m)?;
            let report = match (x, window) {
                (Some(xv), None) => {
                    let r = quadfield::c_alpha(&ctx, *xv)?;
                    let prop = quadfield::verify_prop54(&ctx, *xv)?;
                    emit(json!({ "m": m, "x": xv, "count": r.count, "comparison": prop }), &mut sink)?;
                    r
                }
                (None, Some(w)) => {
                    if w.len() != 2 {
                        return Err(usage("--window takes N,M"));
                    }
                    let ex = match exclusion {
                        Start::Zero => ExclusionStart::Zero,
                        Start::One => ExclusionStart::One,
                    };
                    let r = quadfield::windowed_cassels(&ctx, w[0], w[1], ex)?;
                    emit(json!({ "m": m, "window_start": w[0], "window_length": w[1], "exclusion": ex, "count": r.count }), &mut sink)?;
                    r
                }
                _ => return Err(usage("give exactly one of --x or --window")),
            };
            if *dump {
                for w in &report.witnesses {
                    sink.record(&to_value(w)?)?;
                }
            }
        }
        Command::Rb { b, x, dump, start } => {
            if *dump && *x > DUMP_LIMIT {
                return Err(usage(format!("--dump limited to x <= {DUMP_LIMIT}")));
            }
            let start = match start {
                Start::Zero => SequenceStart::Zero,
                Start::One => SequenceStart::One,
            };
            let recs = primdiv::records(*b, *x, start)?;
            let count = recs.iter().filter(|r| r.has_primitive).count() as u64;
            emit(
                json!({ "b": b, "x": x, "count": count, "ratio": count as f64 / (*x).max(1) as f64 }),
                &mut sink,
            )?;
            if *dump {
                for r in &recs {
                    sink.record(&to_value(r)?)?;
                }
            }
        }
        Command::Arctan { x } => {
            let rep = primdiv::n_arctan(*x)?;
            let r1 = primdiv::r_b(1, *x)?;
            emit(json!({ "report": rep, "r_1": r1, "equal": rep.count == r1 }), &mut sink)?;
        }
        Command::Verify { criteria } => {
            let ids: Vec<u32> = if criteria.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { criteria.clone() };
            if let Some(bad) = ids.iter().find(|&&i| !(1..=10).contains(&i)) {
                return Err(usage(format!("no criterion {bad}")));
            }
            let results: Vec<_> = ids.iter().map(|&i| acceptance::run_criterion(i)).collect();
            if results.iter().any(|r| !r.passed) {
                code = 1;
            }
            match cli.global.format {
                Format::Json => {
                    for r in &results {
                        emit(to_value(r)?, &mut sink)?;
                    }
                }
                Format::Csv => {
                    for r in &results {
                        sink.record(&json!({ "id": r.id, "title": r.title, "passed": r.passed }))?;
                    }
                }
            }
            if cli.global.format == Format::Json && cli.global.out.is_none() {
                eprint!("{}", acceptance::render(&results));
            }
        }
    }
    sink.finish(cli.global.out.as_deref())?;
    Ok(code)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VwConfig {
    List(Vec<InstanceSpec>),
    Full {
        poly: Option<String>,
        factors: Option<Value>,
        instances: Vec<InstanceSpec>,
    },
}

fn vw_instances(
    poly: &PolyArgs,
    x: Option<u64>,
    z: Option<u64>,
    y: Option<f64>,
    depth: usize,
    path: Option<&std::path::Path>,
) -> Result<(FactoredPoly, Vec<InstanceSpec>), CliError> {
    let Some(path) = path else {
        let (Some(x), Some(z), Some(y)) = (x, z, y) else {
            return Err(usage("vw-verify needs --x, --z and --y, or --config"));
        };
        return Ok((load_poly(poly)?, vec![InstanceSpec { x, z, y, depth }]));
    };
    let text = std::fs::read_to_string(path)?;
    let cfg: VwConfig = serde_json::from_str(&text).map_err(|e| usage(format!("bad config {}: {e}", path.display())))?;
    Ok(match cfg {
        VwConfig::List(list) => (load_poly(poly)?, list),
        VwConfig::Full { poly: p, factors, instances } => {
            let args = match (p, factors) {
                (Some(p), None) => PolyArgs { poly: Some(p), factors: None },
                (None, Some(f)) => PolyArgs { poly: None, factors: Some(f.to_string()) },
                (None, None) => poly.clone(),
                _ => return Err(usage("config gives both poly and factors")),
            };
            (load_poly(&args)?, instances)
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Psi { .. } => "psi",
        Command::Bound { .. } => "bound",
        Command::Dickman { .. } => "dickman",
        Command::Omega { .. } => "omega",
        Command::VwVerify { .. } => "vw-verify",
        Command::Calpha { .. } => "calpha",
        Command::Rb { .. } => "rb",
        Command::Arctan { .. } => "arctan",
        Command::Verify { .. } => "verify",
    }
}

/// x^(1/u), snapped to the nearest integer when floating error is all that separates them.
fn root_of(x: u64, u: f64) -> f64 {
    let y = (x as f64).powf(1.0 / u);
    if (y.round() - y).abs() <= 1e-9 * y {
        y.round()
    } else {
        y
    }
}
