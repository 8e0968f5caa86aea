use std::fmt::Display;
use std::fs;
use std::io::Read;
use std::path::Path;

use clap::ValueEnum;
use doldkit::arith;
use doldkit::dynsys::{count_fixed, orbit_spec, realize, trace_sequence, IntMatrix, OrbitSpec};
use doldkit::lefschetz::{
    generating_hankel_test, generating_window, hankel_dets, lefschetz_sequence, HankelWindow,
};
use doldkit::repair::{apply_time_change, failure_of, failure_window, SequenceSource, TimeChange};
use doldkit::seqkit::{
    congruence_test, inverse_b, inverse_c, is_realizable, periodic_expansion, q_dold_check,
    transform_b, transform_c, CongruenceVerdict, Criterion, Expansion, IntPoly, RatSeqPrefix,
    SeqPrefix,
};
use doldkit::series::{rational_fit, zeta_from_fix, zeta_product_from_orbits, PowerSeries};
use doldkit::{Int, Rat};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{Output, Report, Verdict};
use crate::{
    parse_bfile, Cli, CliError, Command, CriterionArg, InputArgs, PropertyName, TransformOp,
    ZetaFrom,
};

/// Largest map `realize` will build.
const MAX_REALIZE_POINTS: u64 = 1_000_000;

type Notices = Vec<String>;

fn name_of(v: impl ValueEnum) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_owned()
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_raw(input: &InputArgs, stdin: &mut dyn Read) -> Result<String, CliError> {
    if let Some(s) = &input.seq {
        return Ok(s.clone());
    }
    if let Some(p) = input.file.as_ref().or(input.bfile.as_ref()) {
        return read_file(p);
    }
    let mut s = String::new();
    stdin
        .read_to_string(&mut s)
        .map_err(|source| CliError::Io {
            path: "stdin".into(),
            source,
        })?;
    Ok(s)
}

fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace() || "()[]".contains(c)))
        .filter(|t| !t.is_empty())
}

fn truncate<T>(mut v: Vec<T>, n: Option<usize>) -> Result<Vec<T>, CliError> {
    if let Some(n) = n {
        if n > v.len() {
            return Err(CliError::Usage(format!(
                "--N {n} exceeds the {} terms given",
                v.len()
            )));
        }
        v.truncate(n);
    }
    if v.is_empty() {
        return Err(CliError::Usage("empty input".into()));
    }
    Ok(v)
}

fn read_window(
    input: &InputArgs,
    n: Option<usize>,
    stdin: &mut dyn Read,
    notices: &mut Notices,
) -> Result<SeqPrefix, CliError> {
    let text = read_raw(input, stdin)?;
    let values = if input.bfile.is_some() {
        let (w, mut notes) = parse_bfile(&text)?.window()?;
        notices.append(&mut notes);
        w.into_values()
    } else {
        tokens(&text)
            .map(|t| {
                t.parse::<Int>()
                    .map_err(|_| CliError::BadNumber(t.to_owned()))
            })
            .collect::<Result<_, _>>()?
    };
    Ok(SeqPrefix::new(truncate(values, n)?)?)
}

fn read_rationals(
    input: &InputArgs,
    n: Option<usize>,
    stdin: &mut dyn Read,
    notices: &mut Notices,
) -> Result<Vec<Rat>, CliError> {
    if input.bfile.is_some() {
        return Ok(read_window(input, n, stdin, notices)?
            .to_rat()
            .values()
            .to_vec());
    }
    let text = read_raw(input, stdin)?;
    let values = tokens(&text)
        .map(|t| {
            t.parse::<Rat>()
                .map_err(|_| CliError::BadNumber(t.to_owned()))
        })
        .collect::<Result<_, _>>()?;
    truncate(values, n)
}

/// `;`-separated polynomials, each a `,`-separated ascending coefficient list.
fn read_polys(
    input: &InputArgs,
    n: Option<usize>,
    stdin: &mut dyn Read,
) -> Result<Vec<IntPoly>, CliError> {
    let text = read_raw(input, stdin)?;
    let polys = text
        .split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let coeffs = p
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<Int>()
                        .map_err(|_| CliError::BadNumber(t.to_owned()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(IntPoly::new(coeffs))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    truncate(polys, n)
}

fn window_digest(a: &SeqPrefix) -> Vec<u8> {
    a.to_string().into_bytes()
}

fn describe<W: Display>(v: &CongruenceVerdict<W>) -> String {
    match v {
        CongruenceVerdict::Holds(n) => format!("holds through {n}"),
        CongruenceVerdict::Fails { index, witness } => {
            format!("fails at {index} (witness {witness})")
        }
    }
}

fn from_verdict<W: Display>(command: String, input: &[u8], v: &CongruenceVerdict<W>) -> Report {
    match v {
        CongruenceVerdict::Holds(n) => {
            Report::new(command, input, Verdict::Holds).output("checked", n.to_string())
        }
        CongruenceVerdict::Fails { index, witness } => {
            Report::new(command, input, Verdict::Fails).with_witness(index, witness)
        }
    }
}

fn coefficients(s: &PowerSeries) -> Output {
    Output::list(s.coeffs())
}

pub fn run(cli: &Cli, stdin: &mut dyn Read) -> Result<(Report, Notices), CliError> {
    let mut notices = Vec::new();
    let n = cli.n;
    let report = match &cli.command {
        Command::Check {
            criterion,
            psi,
            input,
        } => {
            let command = format!("check --criterion {}", name_of(*criterion));
            if *criterion == CriterionArg::Qdold {
                let polys = read_polys(input, n, stdin)?;
                let digest: Vec<String> = polys.iter().map(|p| p.to_string()).collect();
                let v = q_dold_check(&polys)?;
                return Ok((
                    from_verdict(command, digest.join("; ").as_bytes(), &v),
                    notices,
                ));
            }
            let a = read_window(input, n, stdin, &mut notices)?;
            let v = match criterion {
                CriterionArg::Dold => congruence_test(&a, &Criterion::Mobius)?,
                CriterionArg::Phi => congruence_test(&a, &Criterion::Phi)?,
                CriterionArg::PrimePower => congruence_test(&a, &Criterion::PrimePower)?,
                CriterionArg::Psi => {
                    let psi = match psi {
                        Some(s) => read_window(
                            &InputArgs {
                                seq: Some(s.clone()),
                                ..Default::default()
                            },
                            None,
                            stdin,
                            &mut notices,
                        )?,
                        None => SeqPrefix::from_fn(a.len(), |k| arith::mobius(k).into())?,
                    };
                    congruence_test(&a, &Criterion::Psi(psi))?
                }
                CriterionArg::Realizable => is_realizable(&a),
                CriterionArg::Qdold => unreachable!("handled above"),
            };
            from_verdict(command, &window_digest(&a), &v)
        }
        Command::Transform { op, input } => {
            let command = format!("transform --op {}", name_of(*op));
            let (digest, values) = match op {
                TransformOp::B | TransformOp::C => {
                    let a = read_window(input, n, stdin, &mut notices)?;
                    let out = if *op == TransformOp::B {
                        transform_b(&a)
                    } else {
                        transform_c(&a)
                    };
                    (window_digest(&a), out)
                }
                TransformOp::InvB | TransformOp::InvC => {
                    let r = RatSeqPrefix::new(read_rationals(input, n, stdin, &mut notices)?)?;
                    let out = if *op == TransformOp::InvB {
                        inverse_b(&r)
                    } else {
                        inverse_c(&r)
                    };
                    (r.to_string().into_bytes(), out)
                }
            };
            Report::new(command, &digest, Verdict::Ok)
                .output("values", Output::list(values.values()))
        }
        Command::Realize { input } => {
            let a = read_window(input, n, stdin, &mut notices)?;
            realize_report(&a)?
        }
        Command::Zeta { from, fit, input } => {
            let a = read_window(input, n, stdin, &mut notices)?;
            let order = a.len();
            let series = match from {
                ZetaFrom::Fix => zeta_from_fix(&a),
                ZetaFrom::Orbits => {
                    let pairs = a
                        .values()
                        .iter()
                        .enumerate()
                        .map(|(i, v)| {
                            v.to_u64().map(|c| (i as u64 + 1, c)).ok_or_else(|| {
                                CliError::Usage(format!(
                                    "orbit count {v} at {} is not a natural number",
                                    i + 1
                                ))
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    zeta_product_from_orbits(&OrbitSpec::from_pairs(pairs), order)
                }
            };
            let mut command = format!("zeta --from {}", name_of(*from));
            let mut report = Report::new(String::new(), &window_digest(&a), Verdict::Ok)
                .output("coefficients", coefficients(&series));
            if let Some(dmax) = fit {
                command.push_str(&format!(" --fit {dmax}"));
                report = match rational_fit(&series, *dmax)? {
                    Some(f) => report
                        .output("fit", f.to_string())
                        .output("degree", f.degree().to_string()),
                    None => report.output("fit", "none"),
                };
            }
            report.command = command;
            report
        }
        Command::Hankel {
            bound,
            width,
            raw,
            input,
        } => {
            let (digest, w) = if *raw {
                let r = read_rationals(input, n, stdin, &mut notices)?;
                let digest = RatSeqPrefix::new(r.clone())?.to_string().into_bytes();
                (digest, HankelWindow::new(r))
            } else {
                let a = read_window(input, n, stdin, &mut notices)?;
                (window_digest(&a), generating_window(&a))
            };
            let top = bound + width;
            let dets = hankel_dets(&w, top)?;
            let first = (*bound..=top).find(|&m| !dets[m].is_zero());
            let command = format!(
                "hankel --bound {bound} --width {width}{}",
                if *raw { " --raw" } else { "" }
            );
            let verdict = match first {
                Some(m) => CongruenceVerdict::Fails {
                    index: m,
                    witness: dets[m].clone(),
                },
                None => CongruenceVerdict::Holds(top),
            };
            from_verdict(command, &digest, &verdict)
                .output("determinants", Output::list(&dets[*bound..=top]))
                .output("first_m", bound.to_string())
        }
        Command::Failure { gen } => {
            let src = SequenceSource::named(gen)?;
            let n = n.unwrap_or(60);
            let f = failure_window(&src, n)?;
            Report::new(
                format!("failure --gen {gen} --N {n}"),
                format!("{src} {n}").as_bytes(),
                Verdict::Ok,
            )
            .output("failure", f.lcm_value.to_string())
            .output("last_new_prime_at", f.last_new_prime_at.to_string())
            .output("primes", Output::list(&f.primes))
        }
        Command::Trace { matrix } => {
            let text = read_file(matrix)?;
            let m: IntMatrix = text.parse()?;
            let n = n.unwrap_or(20);
            let t = trace_sequence(&m, n);
            Report::new(
                format!("trace --N {n}"),
                m.to_string().as_bytes(),
                Verdict::Ok,
            )
            .output("traces", Output::list(t.values()))
            .output("dold", describe(&congruence_test(&t, &Criterion::Mobius)?))
            .output("realizable", describe(&is_realizable(&t)))
        }
        Command::Timechange { h, gen, input } => {
            let tc: TimeChange = h.parse()?;
            let (src, len) = match gen {
                Some(g) => (SequenceSource::named(g)?, n.unwrap_or(10)),
                None => {
                    let a = read_window(input, None, stdin, &mut notices)?;
                    let horizon = a.len() as u64;
                    let fits = (1..)
                        .take_while(|&k| tc.apply(k).is_some_and(|v| v <= horizon))
                        .count();
                    (SequenceSource::prefix(a), n.unwrap_or(fits))
                }
            };
            if len == 0 {
                return Err(CliError::Usage(format!("the window is too short for {h}")));
            }
            let out = apply_time_change(&src, &tc, len)?;
            let indices: Vec<u64> = (1..=len as u64).filter_map(|k| tc.apply(k)).collect();
            Report::new(
                format!("timechange --h {h}"),
                format!("{src} {h} {len}").as_bytes(),
                Verdict::Ok,
            )
            .output("indices", Output::list(indices))
            .output("values", Output::list(out.values()))
        }
        Command::Classify { bfile, bound } => {
            let text = read_file(bfile)?;
            let (w, mut notes) = parse_bfile(&text)?.window()?;
            notices.append(&mut notes);
            let a = SeqPrefix::new(truncate(w.into_values(), n)?)?;
            classify(&a, *bound, text.as_bytes())?
        }
        Command::Property { name, seed, trials } => property(*name, *seed, *trials)?,
    };
    Ok((report, notices))
}

fn realize_report(a: &SeqPrefix) -> Result<Report, CliError> {
    let digest = window_digest(a);
    let b = transform_b(a);
    if let CongruenceVerdict::Fails { index, witness } = is_realizable(a) {
        return Ok(Report::new("realize", &digest, Verdict::Fails)
            .with_witness(index, witness)
            .output("orbit_counts", Output::list(&b.values()[..index])));
    }
    let spec = OrbitSpec::from_pairs(
        b.values()
            .iter()
            .enumerate()
            .map(|(i, v)| (i as u64 + 1, v.to_integer().to_u64().unwrap_or(u64::MAX))),
    );
    let points = spec.iter().try_fold(0u64, |acc, (d, c)| {
        d.checked_mul(c).and_then(|x| acc.checked_add(x))
    });
    match points {
        Some(p) if p <= MAX_REALIZE_POINTS => {}
        _ => {
            return Err(CliError::Usage(format!(
                "realization would need more than {MAX_REALIZE_POINTS} points"
            )))
        }
    }
    let map = realize(&spec);
    debug_assert_eq!(orbit_spec(&map), spec);
    Ok(Report::new("realize", &digest, Verdict::Holds)
        .output("size", map.size().to_string())
        .output("orbits", spec.to_string())
        .output("table", Output::list(map.table())))
}

fn classify(a: &SeqPrefix, bound: usize, input: &[u8]) -> Result<Report, CliError> {
    let len = a.len();
    let dold = congruence_test(a, &Criterion::Mobius)?;
    let realizable = is_realizable(a);

    let bound = bound.min(len / 2).max(1);
    let periodic = if len < 2 {
        "window too short".to_owned()
    } else {
        match periodic_expansion(a, bound)? {
            Expansion::Periodic(c) => format!("periodic {c}"),
            Expansion::NotPeriodic(n) => {
                format!("not periodic within bound {bound} (obstruction at {n})")
            }
        }
    };

    let m_max = ((len - 1) / 2).min(12);
    let dets = hankel_dets(&generating_window(a), m_max)?;
    let vanishes_from = (0..=m_max).find(|&m| dets[m..].iter().all(Zero::is_zero));
    let mut hankel = std::collections::BTreeMap::new();
    hankel.insert("determinants".to_owned(), Output::list(&dets));
    hankel.insert(
        "vanishes_from".to_owned(),
        vanishes_from
            .map_or_else(|| "none".to_owned(), |m| m.to_string())
            .into(),
    );

    let failure = failure_of(a)?;
    let mut fail = std::collections::BTreeMap::new();
    fail.insert(
        "lcm".to_owned(),
        Output::Text(failure.lcm_value.to_string()),
    );
    fail.insert(
        "last_new_prime_at".to_owned(),
        Output::Text(failure.last_new_prime_at.to_string()),
    );

    let mut zeta = std::collections::BTreeMap::new();
    if len >= 2 {
        let dmax = ((len - 2) / 2).min(8);
        match rational_fit(&zeta_from_fix(a), dmax)? {
            Some(f) => {
                zeta.insert("fit".to_owned(), Output::Text(f.to_string()));
                zeta.insert("degree".to_owned(), Output::Text(f.degree().to_string()));
            }
            None => {
                zeta.insert(
                    "fit".to_owned(),
                    Output::Text(format!("none up to degree {dmax}")),
                );
            }
        }
    }

    let mut report = from_verdict("classify".to_owned(), input, &dold);
    report.outputs.clear();
    Ok(report
        .output("window", len.to_string())
        .output("dold", describe(&dold))
        .output("realizable", describe(&realizable))
        .output("periodic", periodic)
        .output("hankel", Output::Map(hankel))
        .output("failure", Output::Map(fail))
        .output("zeta", Output::Map(zeta)))
}

fn random_spec(rng: &mut ChaCha8Rng) -> OrbitSpec {
    let terms = rng.gen_range(0..8);
    OrbitSpec::from_pairs((0..terms).map(|_| (rng.gen_range(1..=8u64), rng.gen_range(0..=5u64))))
}

fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> IntMatrix {
    IntMatrix::new(
        dim,
        (0..dim * dim)
            .map(|_| Int::from(rng.gen_range(-5..=5i64)))
            .collect(),
    )
    .expect("square")
}

fn property_trial(name: PropertyName, rng: &mut ChaCha8Rng) -> Result<Option<String>, CliError> {
    Ok(match name {
        PropertyName::Duality => {
            let spec = random_spec(rng);
            let m = realize(&spec);
            let fix = SeqPrefix::from_fn(24, |n| count_fixed(&m, n).into())?;
            (fix != spec.fixed_window(24) || transform_b(&fix) != spec.count_window(24).to_rat())
                .then(|| format!("orbit spec {spec}"))
        }
        PropertyName::Criteria => {
            let n = 48;
            let b: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
            let mut a = inverse_b(&RatSeqPrefix::from_i64(&b)?)
                .to_integers()
                .expect("integral")
                .into_values();
            let at = rng.gen_range(0..n);
            a[at] += Int::from(rng.gen_range(0..=3i64));
            let a = SeqPrefix::new(a)?;
            let mu = SeqPrefix::from_fn(n, |k| arith::mobius(k).into())?;
            let phi = SeqPrefix::from_fn(n, |k| arith::euler_phi(k).into())?;
            let criteria = [
                Criterion::Mobius,
                Criterion::Phi,
                Criterion::PrimePower,
                Criterion::Psi(mu),
                Criterion::Psi(phi),
            ];
            let idx = criteria
                .iter()
                .map(|c| congruence_test(&a, c).map(|v| v.failing_index()))
                .collect::<Result<Vec<_>, _>>()?;
            idx.iter()
                .any(|i| *i != idx[0])
                .then(|| format!("criteria disagree on {a}: {idx:?}"))
        }
        PropertyName::Hankel => {
            let (a, b) = (random_matrix(rng, 3), random_matrix(rng, 2));
            let s = lefschetz_sequence(&a, &b, 24);
            let v = generating_hankel_test(&s, 3, 5)?;
            (!v.holds()).then(|| format!("{} for A = {a}, B = {b}", describe(&v)))
        }
    })
}

fn property(name: PropertyName, seed: u64, trials: usize) -> Result<Report, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let command = format!(
        "property --name {} --seed {seed} --trials {trials}",
        name_of(name)
    );
    let digest = command.clone().into_bytes();
    for t in 1..=trials {
        if let Some(why) = property_trial(name, &mut rng)? {
            return Ok(Report::new(command, &digest, Verdict::Fails).with_witness(t, why));
        }
    }
    Ok(Report::new(command, &digest, Verdict::Holds).output("trials", trials.to_string()))
}
