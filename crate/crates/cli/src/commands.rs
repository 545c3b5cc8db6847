use mixshape::examples::{companion, gen_eisenstein_poly, FamilySpec};
use mixshape::groups::{dual_orbit_scan, group_mixing_scan, GroupScanReport, OrbitScan};
use mixshape::limits::{progression_limit, spec2_exponent, trigpoly_limit};
use mixshape::mixing::{
    commuting_pair_criterion, is_ergodic, is_mixing_set_with, jointly_mixing_with,
    pair_quotient_witness_with, spectral_precheck_with, MixingConfig,
};
use mixshape::oracle::{
    brute_force_relation_search, higher_order_refute, mc_correlation, verify_witness, BoxSet,
};
use mixshape::{ComplexRational, EpiSet, IntMat, IntVec, MixingVerdict};
use serde_json::{json, Map, Value};

use crate::input::{parse_box, parse_err, parse_functions, parse_vec, CliError, Payload};
use crate::Flags;

pub fn mat_json(m: &IntMat) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

fn vec_json(v: &IntVec) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn complex_json(z: &ComplexRational) -> Value {
    json!({ "re": z.re.to_string(), "im": z.im.to_string() })
}

fn family_fields(f: &EpiSet) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("dim".into(), json!(f.dim()));
    m.insert("matrices".into(), Value::Array(f.maps().iter().map(mat_json).collect()));
    m
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn config(flags: &Flags, p: &Payload) -> Result<MixingConfig, CliError> {
    Ok(MixingConfig { max_exponent: flags.max_exponent.or(p.opt_u64("max_exponent")?) })
}

fn pick(flag: Option<u64>, p: &Payload, key: &str, default: u64) -> Result<u64, CliError> {
    Ok(flag.or(p.opt_u64(key)?).unwrap_or(default))
}

/// Runs one command; returns the report body (without the `command` key)
/// and a one-line human summary.
pub fn run(command: &str, flags: &Flags, p: &Payload) -> Result<(Map<String, Value>, String), CliError> {
    match command {
        "ergodic" => {
            let f = p.family()?;
            let each = f.maps().iter().map(is_ergodic).collect::<Result<Vec<_>, _>>()?;
            let all = each.iter().all(|&b| b);
            let mut r = family_fields(&f);
            r.insert("ergodic".into(), json!(each));
            r.insert("all_ergodic".into(), json!(all));
            Ok((r, format!("ergodic: {each:?}")))
        }
        "mixing-set" => {
            let f = p.family()?;
            let cfg = config(flags, p)?;
            let verdict = is_mixing_set_with(&f, &cfg)?;
            let pre = spectral_precheck_with(&f, &cfg)?;
            let summary = match &verdict {
                MixingVerdict::Mixing { exponents_checked } => {
                    format!("Mixing ({} exponents checked)", exponents_checked.len())
                }
                MixingVerdict::NotMixing { exponent, support, .. } => {
                    format!("NotMixing at l = {exponent}, support {support:?}")
                }
            };
            let mut r = family_fields(&f);
            r.insert("verdict".into(), to_value(&verdict));
            r.insert("spectral_precheck".into(), to_value(&pre));
            Ok((r, summary))
        }
        "mixing-pair" => {
            let f = p.family()?;
            if f.len() != 2 {
                return Err(CliError::Contract(mixshape::Error::ShapeMismatch(format!(
                    "mixing-pair needs exactly 2 matrices, got {}",
                    f.len()
                ))));
            }
            let cfg = config(flags, p)?;
            let w = pair_quotient_witness_with(&f.maps()[0], &f.maps()[1], &cfg)?;
            let verdict = is_mixing_set_with(&f, &cfg)?;
            let mut r = family_fields(&f);
            r.insert("mixing".into(), json!(w.is_none()));
            r.insert("quotient_witness".into(), to_value(&w));
            r.insert("verdict".into(), to_value(&verdict));
            Ok((r, format!("pair mixing: {}", w.is_none())))
        }
        "commuting" => {
            let f = p.family()?;
            let mut pairs = Vec::new();
            let mut all = true;
            for i in 0..f.len() {
                for j in i + 1..f.len() {
                    let ok = commuting_pair_criterion(&f.maps()[i], &f.maps()[j])?;
                    all &= ok;
                    pairs.push(json!({ "i": i, "j": j, "mixing": ok }));
                }
            }
            let mut r = family_fields(&f);
            r.insert("pairs".into(), Value::Array(pairs));
            r.insert("mixing".into(), json!(all));
            Ok((r, format!("commuting family mixing: {all}")))
        }
        "joint" => {
            let f = p.family()?;
            let ok = jointly_mixing_with(&f, &config(flags, p)?)?;
            let mut r = family_fields(&f);
            r.insert("jointly_mixing".into(), json!(ok));
            Ok((r, format!("jointly mixing: {ok}")))
        }
        "limit" => {
            let f = p.family()?;
            let fs = parse_functions(
                p.opt("functions").ok_or_else(|| parse_err("limit needs options.functions"))?,
                f.dim(),
            )?;
            let modulus = spec2_exponent(&f)?;
            let mut r = family_fields(&f);
            r.insert("modulus".into(), to_value(&modulus));
            let residue = flags.residue.or(p.opt_u64("residue")?);
            let values: Vec<Value> = match residue {
                Some(k) => {
                    let v = trigpoly_limit(&f, &fs, k)?;
                    vec![json!({ "residue": k % modulus.modulus, "value": complex_json(&v) })]
                }
                None => progression_limit(&f, &fs)?
                    .values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| json!({ "residue": k, "value": complex_json(v) }))
                    .collect(),
            };
            let summary = format!("modulus {}, {} residue values", modulus.modulus, values.len());
            r.insert("limits".into(), Value::Array(values));
            Ok((r, summary))
        }
        "group-scan" => {
            let f = p.family()?;
            let len = pick(flags.word_len, p, "word_len", 4)? as usize;
            let inverses = p
                .opt_bool("use_inverses")?
                .unwrap_or_else(|| f.maps().iter().all(IntMat::is_unimodular));
            let report = group_mixing_scan(&f, len, inverses)?;
            let mut r = family_fields(&f);
            let summary = match &report {
                GroupScanReport::Refuted { word, matrix, reason } => {
                    r.insert(
                        "report".into(),
                        json!({
                            "result": "Refuted",
                            "word": word.to_string(),
                            "letters": to_value(word),
                            "matrix": mat_json(matrix),
                            "reason": to_value(reason),
                        }),
                    );
                    format!("refuted by word {word}")
                }
                GroupScanReport::CleanUpTo { max_word_length, words_examined } => {
                    r.insert(
                        "report".into(),
                        json!({
                            "result": "CleanUpTo",
                            "max_word_length": max_word_length,
                            "words_examined": words_examined,
                        }),
                    );
                    format!("clean up to length {max_word_length} ({words_examined} elements); not a proof")
                }
            };
            Ok((r, summary))
        }
        "orbit-scan" => {
            let f = p.family()?;
            let chi = parse_vec(p.opt("chi").ok_or_else(|| parse_err("orbit-scan needs options.chi"))?)?;
            let cap = p.opt_u64("cap")?.unwrap_or(10_000) as usize;
            let scan = dual_orbit_scan(&f, &chi, cap)?;
            let mut r = family_fields(&f);
            let summary = match &scan {
                OrbitScan::FiniteOrbit { orbit } => {
                    r.insert(
                        "report".into(),
                        json!({ "result": "FiniteOrbit", "orbit": orbit.iter().map(vec_json).collect::<Vec<_>>() }),
                    );
                    format!("finite orbit of size {}", orbit.len())
                }
                OrbitScan::ExceedsCap { explored } => {
                    r.insert("report".into(), json!({ "result": "ExceedsCap", "explored": explored }));
                    format!("orbit exceeds cap {cap}")
                }
            };
            Ok((r, summary))
        }
        "gen-example" => {
            let spec: FamilySpec = serde_json::from_value(
                p.opt("family").cloned().ok_or_else(|| parse_err("gen-example needs options.family"))?,
            )
            .map_err(|e| parse_err(format!("family: {e}")))?;
            let f = spec.build()?;
            let mut r = family_fields(&f);
            r.insert("family".into(), to_value(&spec));
            if let FamilySpec::EisensteinPoly { d, q } = spec {
                let e = gen_eisenstein_poly(d, q)?;
                r.insert("polynomial".into(), Value::Array(e.poly.coeffs().iter().map(|c| json!(c.to_string())).collect()));
                r.insert("q".into(), json!(e.q));
                r.insert("degenerate".into(), json!(e.degenerate));
                debug_assert_eq!(companion(&e.poly)?, f.maps()[0]);
            }
            Ok((r, format!("generated {} maps in dimension {}", f.len(), f.dim())))
        }
        "oracle-search" => {
            let f = p.family()?;
            let height = pick(flags.height, p, "height", 3)?;
            let horizon = pick(flags.horizon, p, "horizon", 48)?;
            let mut r = family_fields(&f);
            let summary = match p.opt_u64("order")? {
                Some(order) => {
                    let len = pick(flags.word_len, p, "word_len", 2)? as usize;
                    let w = higher_order_refute(&f, order as usize, len, height, horizon)?;
                    let s = format!("order-{order} witness: {}", w.is_some());
                    r.insert("witness".into(), to_value(&w));
                    s
                }
                None => {
                    let min_hits = p.opt_u64("min_hits")?.unwrap_or(3) as usize;
                    let w = brute_force_relation_search(&f, height, horizon, min_hits)?;
                    let s = format!("relation witness: {}", w.is_some());
                    r.insert("witness".into(), to_value(&w));
                    s
                }
            };
            Ok((r, summary))
        }
        "oracle-mc" => {
            let f = p.family()?;
            let n = pick(flags.horizon, p, "n", 0)?;
            let samples = p.opt_u64("samples")?.unwrap_or(100_000);
            let seed = pick(flags.seed, p, "seed", 0)?;
            let boxes: Vec<BoxSet> = match p.opt("boxes") {
                Some(Value::Array(bs)) => bs.iter().map(parse_box).collect::<Result<_, _>>()?,
                Some(_) => return Err(parse_err("boxes: expected an array")),
                None => vec![BoxSet::lower_half(f.dim()); f.len()],
            };
            let est = mc_correlation(&f, n, &boxes, samples, seed)?;
            let product: f64 = boxes
                .iter()
                .map(|b| {
                    let m = b.measure();
                    num_traits::ToPrimitive::to_f64(&m).unwrap_or(f64::NAN)
                })
                .product();
            let mut r = family_fields(&f);
            r.insert("n".into(), json!(n));
            r.insert("seed".into(), json!(seed));
            r.insert("estimate".into(), to_value(&est));
            r.insert("product_of_measures".into(), json!(product));
            Ok((r, format!("estimate {:.6} ± {:.6}", est.estimate, est.std_error)))
        }
        "verify-cert" => {
            let f = p.family()?;
            let cert = p
                .verdict
                .clone()
                .or_else(|| p.opt("certificate").cloned())
                .ok_or_else(|| parse_err("verify-cert needs a verdict or options.certificate"))?;
            let verdict: MixingVerdict =
                serde_json::from_value(cert).map_err(|e| parse_err(format!("certificate: {e}")))?;
            let cfg = config(flags, p)?;
            let depth = p.opt_u64("depth")?.unwrap_or(2 * (f.len() * f.dim()) as u64);
            let valid = match &verdict {
                MixingVerdict::NotMixing { exponent, witness, .. } => {
                    verify_witness(&f, *exponent, witness, depth)?
                }
                // A mixing verdict has no finite certificate; recompute it.
                MixingVerdict::Mixing { .. } => is_mixing_set_with(&f, &cfg)? == verdict,
            };
            let mut r = family_fields(&f);
            r.insert("valid".into(), json!(valid));
            r.insert("depth".into(), json!(depth));
            Ok((r, format!("certificate valid: {valid}")))
        }
        other => Err(parse_err(format!("unknown command {other}"))),
    }
}
