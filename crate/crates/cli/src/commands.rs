use std::fs;
use std::path::Path;

use breuil::abelian::{adapt, cokernel, kernel};
use breuil::cyclotomic::{verify_b_sum, verify_t_congruence};
use breuil::decomposition::{jordan_holder, mf_membership, socle};
use breuil::io::{self, descriptor_to_value, matrix_to_value, module_value, ModuleDocument, SCHEMA_VERSION};
use breuil::monodromy::solve_monodromy;
use breuil::random::random_object_seeded;
use breuil::simples::{canonical_numerator, classifying_rational, enumerate_simples, SimpleDescriptor};
use breuil::tame::{inertia_weights, SystemS, TameCharacter};
use breuil::{hom, BreuilModule, GlobalParams};
use serde_json::{json, Map, Value};

use crate::{Command, Failure, ParamArgs, Report};

type Outcome = Result<Report, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Usage(format!("stdin: {e}")));
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path, strict: bool) -> Result<BreuilModule, Failure> {
    let m = io::read_module(&read(path)?, strict)?;
    if let Some(v) = m.validate().violations.first() {
        return Err(Failure::Domain(breuil::Error::Invalid(v.to_string())));
    }
    Ok(m)
}

fn params(a: &ParamArgs) -> Result<GlobalParams, Failure> {
    Ok(GlobalParams::new(a.p, a.e, a.r, a.f)?)
}

/// Wraps the fields of a result object with the schema version.
fn document(fields: Value) -> Value {
    let mut obj = Map::new();
    obj.insert("schema".into(), Value::from(SCHEMA_VERSION));
    if let Value::Object(rest) = fields {
        obj.extend(rest);
    }
    Value::Object(obj)
}

/// Exponent arithmetic is `u128`; JSON numbers beyond `u64` become strings.
fn big(x: u128) -> Value {
    u64::try_from(x).map(Value::from).unwrap_or_else(|_| Value::String(x.to_string()))
}

fn character_value(c: &TameCharacter) -> Value {
    json!({ "level": c.level, "exponent": big(c.exponent) })
}

fn digits_list(factors: &[SimpleDescriptor]) -> Vec<Value> {
    factors.iter().map(descriptor_to_value).collect()
}

fn ok(body: Value, summary: impl Into<String>) -> Outcome {
    Ok(Report {
        body: document(body),
        summary: summary.into(),
        ok: true,
    })
}

pub fn run(cmd: &Command, strict: bool) -> Outcome {
    match cmd {
        Command::Validate { file } => {
            let m = io::read_module(&read(file)?, strict)?;
            let report = m.validate();
            let violations: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            let valid = violations.is_empty();
            let summary = if valid {
                format!("valid object of rank {}", m.rank())
            } else {
                format!("{} violation(s): {}", violations.len(), violations.join("; "))
            };
            Ok(Report {
                body: document(json!({ "valid": valid, "violations": violations })),
                summary,
                ok: valid,
            })
        }
        Command::Adapt { file } => {
            let pres = io::read_presentation(&read(file)?, strict)?;
            let adapted = adapt(&pres)?;
            let summary = format!("exponents {:?}", adapted.exponents);
            ok(
                json!({ "exponents": adapted.exponents, "basis": matrix_to_value(&pres.ring, &adapted.basis) }),
                summary,
            )
        }
        Command::Hom { source, target } => {
            let x = load(source, strict)?;
            let y = load(target, strict)?;
            let basis = hom(&x, &y)?;
            let mats: Vec<Value> = basis.iter().map(|f| matrix_to_value(y.ring(), f)).collect();
            let n = mats.len();
            ok(json!({ "dimension": n, "basis": mats }), format!("dim Hom = {n} over F_p"))
        }
        Command::Kernel { file } | Command::Cokernel { file } => {
            let f = io::read_morphism(&read(file)?, strict)?;
            let is_kernel = matches!(cmd, Command::Kernel { .. });
            let (obj, map) = if is_kernel { kernel(&f)? } else { cokernel(&f)? };
            let label = if is_kernel { "kernel" } else { "cokernel" };
            let key = if is_kernel { "inclusion" } else { "projection" };
            let mut body = Map::new();
            body.insert("object".into(), module_value(&obj));
            body.insert(key.into(), matrix_to_value(obj.ring(), map.matrix()));
            ok(Value::Object(body), format!("{label} of rank {}", obj.rank()))
        }
        Command::SolveMonodromy { file } => {
            let (ring, fil, frob) = io::read_datum(&read(file)?, strict)?;
            let sols = solve_monodromy(&ring, &fil, &frob)?;
            let particular = sols.particular.as_ref().map(|n| matrix_to_value(&ring, n));
            let directions: Vec<Value> = sols.directions.iter().map(|n| matrix_to_value(&ring, n)).collect();
            let summary = match sols.dimension() {
                None => "no monodromy operator exists".to_string(),
                Some(0) => "unique monodromy operator".to_string(),
                Some(d) => format!("affine space of dimension {d} over F_p"),
            };
            ok(
                json!({ "dimension": sols.dimension(), "particular": particular, "directions": directions }),
                summary,
            )
        }
        Command::EnumerateSimples { params: a, h } => {
            let params = params(a)?;
            let classes: Vec<Value> = enumerate_simples(params, *h)?
                .iter()
                .map(|d| {
                    let t = classifying_rational(d);
                    json!({ "digits": d.digits(), "classifying_rational": format!("{}/{}", t.numerator, t.denominator) })
                })
                .collect();
            let n = classes.len();
            ok(
                json!({ "params": params, "h": h, "count": n, "classes": classes }),
                format!("{n} class(es) of period {h}"),
            )
        }
        Command::Classify { file } => {
            let m = load(file, strict)?;
            let jh = jordan_holder(&m)?;
            let mf = mf_membership(&m)?;
            let factors: Vec<Value> = jh
                .factors
                .iter()
                .map(|d| {
                    let t = classifying_rational(d);
                    json!({
                        "digits": d.digits(),
                        "classifying_rational": format!("{}/{}", t.numerator, t.denominator),
                        "canonical_numerator": canonical_numerator(d).to_string(),
                    })
                })
                .collect();
            let simple = jh.length() == 1;
            let summary = if simple {
                format!("simple with digits {:?}", jh.factors[0].digits())
            } else {
                format!("{} composition factors", jh.length())
            };
            ok(
                json!({
                    "simple": simple,
                    "mf": {
                        "fil_splits": mf.fil_splits,
                        "adapted_basis_in_image": mf.adapted_basis_in_image,
                        "monodromy_vanishes_on_image": mf.monodromy_vanishes_on_image,
                    },
                    "factors": factors,
                }),
                summary,
            )
        }
        Command::Jh { file } => {
            let m = load(file, strict)?;
            let jh = jordan_holder(&m)?;
            let summary = format!("length {}: {:?}", jh.length(), jh.multiset());
            ok(
                json!({
                    "length": jh.length(),
                    "factors": digits_list(&jh.factors),
                    "extension_field_degree": jh.extension_field_degree,
                }),
                summary,
            )
        }
        Command::Socle { file } => {
            let m = load(file, strict)?;
            let s = socle(&m)?;
            let components: Vec<Value> = s
                .components
                .iter()
                .map(|(d, k)| json!({ "digits": d.digits(), "multiplicity": k }))
                .collect();
            let semisimple = s.module.rank() == m.rank();
            let summary = format!("socle of rank {} in rank {}", s.module.rank(), m.rank());
            ok(
                json!({
                    "rank": s.module.rank(),
                    "semisimple": semisimple,
                    "components": components,
                    "object": module_value(&s.module),
                    "inclusion": matrix_to_value(m.ring(), s.inclusion.matrix()),
                }),
                summary,
            )
        }
        Command::TameWeights { file } | Command::SerreCheck { file } => {
            let m = load(file, strict)?;
            let er = m.params().er();
            let w = inertia_weights(&m)?;
            if matches!(cmd, Command::SerreCheck { .. }) {
                let summary = if w.within_bound {
                    format!("all weights in [0, er] with er = {er}")
                } else {
                    format!("weight outside [0, er] with er = {er}")
                };
                return Ok(Report {
                    body: document(json!({ "er": er, "within_bound": w.within_bound, "weights": w.weights })),
                    summary,
                    ok: w.within_bound,
                });
            }
            let factors: Vec<Value> = w
                .factors
                .iter()
                .zip(&w.characters)
                .zip(&w.weights)
                .map(|((d, c), m)| json!({ "digits": d.digits(), "character": character_value(c), "weights": m }))
                .collect();
            ok(
                json!({ "factors": factors, "total_level": w.total_level() }),
                format!("{} character(s), total level {}", w.characters.len(), w.total_level()),
            )
        }
        Command::SolveSystem { params: a, digits, sign } => {
            let params = params(a)?;
            let desc = SimpleDescriptor::new(params, digits.clone())?;
            let sign = sign.unwrap_or(if params.r % 2 == 0 { 1 } else { -1 });
            let sys = SystemS::new(&desc, sign)?;
            let field = sys.field.clone();
            let sols = sys.solutions()?;
            let verified = sols.iter().all(|s| sys.satisfies(&sys.components(s)));
            let list: Vec<Value> = sols
                .iter()
                .map(|s| {
                    json!({
                        "eps": field.coeffs(s.eps),
                        "eps_log": s.eps_log.map(big),
                        "s": s.s.iter().map(|&x| big(x)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let n = list.len();
            Ok(Report {
                body: document(json!({
                    "digits": desc.digits(),
                    "sign": sign,
                    "field_degree": field.degree(),
                    "generator": field.coeffs(sys.generator),
                    "count": n,
                    "verified": verified,
                    "solutions": list,
                })),
                summary: format!("{n} solutions over F_{}^{}", params.p, field.degree()),
                ok: verified,
            })
        }
        Command::CycloCheck { p } => {
            let t = verify_t_congruence(*p)?;
            let b = verify_b_sum(*p)?;
            let summary = format!(
                "p = {p}: (X-1)^(p(p-1)) = -p^p mod p^(p+1) {}; sum b_i = -1 {}",
                if t { "passes" } else { "fails" },
                if b { "passes" } else { "fails" }
            );
            Ok(Report {
                body: document(json!({ "p": p, "t_congruence": t, "b_sum": b })),
                summary,
                ok: t && b,
            })
        }
        Command::RandomObject { params: a, seed, rank } => {
            let params = params(a)?;
            if *rank == 0 {
                return Err(Failure::Usage("--rank must be positive".into()));
            }
            let m = random_object_seeded(params, *rank, *seed)?;
            let doc = ModuleDocument::from_module(&m)
                .with_provenance(format!("random-object seed {seed}"))
                .mark_validated();
            let body = serde_json::to_value(&doc).expect("documents serialize");
            Ok(Report {
                body,
                summary: format!("random object of rank {rank} from seed {seed}"),
                ok: true,
            })
        }
    }
}
