use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use unclonable::copyprotect::{
    learnability_pirate, pgm_pirate_a, pgm_pirate_b, scheme_a_vend, scheme_b_vend, split_program, trivial_mix_pirate,
    Program, SchemeAConfig,
};
use unclonable::experiments::{
    gaussian_sweep, run_nocloning_scaling, run_pirate_game, run_wealth_game, CopyScheme, PirateConfig, ScalingStrategy,
    WealthConfig,
};
use unclonable::mathcore::{BitString, Rng};
use unclonable::money_stabilizer::{
    acceptance_probability, attack_commuting, attack_gaussian, deserialize, mint, per_row_plus_rate,
    reauthenticate_loop, serialize, AuthMode, BankKeys, NoteFile, SchemeParams, StabBanknote, MAGIC,
};
use unclonable::tdesign::{
    design_moment, distinguisher_advantage, haar_moment, moment_distance, DesignSpec, MomentMode, Strategy,
};

use crate::args;
use crate::output::Report;
use crate::CliError;

fn run_err(e: impl std::fmt::Display) -> CliError {
    CliError::Run(e.to_string())
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn to_json(v: &impl Serialize) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(run_err)
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let bytes = read(path)?;
    let de = &mut serde_json::Deserializer::from_slice(&bytes);
    serde_path_to_error::deserialize(de)
        .map_err(|e| CliError::Config { path: path.to_path_buf(), message: e.to_string() })
}

fn bits(s: &str, what: &str) -> Result<BitString, CliError> {
    s.parse().map_err(|e| CliError::Usage(format!("bad {what} `{s}`: {e}")))
}

fn load_note(path: &Path) -> Result<StabBanknote, CliError> {
    let bytes = read(path)?;
    if bytes.starts_with(MAGIC) {
        deserialize(&bytes).map_err(run_err)
    } else {
        parse_json::<NoteFile>(path)?.to_note().map_err(run_err)
    }
}

fn save_note(path: &Path, note: &StabBanknote, binary: bool) -> Result<(), CliError> {
    let bytes = if binary {
        serialize(note)
    } else {
        serde_json::to_vec_pretty(&NoteFile::from_note(note)).map_err(run_err)?
    };
    write(path, &bytes)
}

/// On-disk program: the quantum registers are simulation data, so the file
/// says so.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProgramFile {
    simulation_only: bool,
    program: Program,
}

fn program_json(p: &Program) -> Result<Value, CliError> {
    to_json(&ProgramFile { simulation_only: true, program: p.clone() })
}

fn load_program(path: &Path) -> Result<Program, CliError> {
    let f: ProgramFile = parse_json(path)?;
    if !f.simulation_only {
        return Err(CliError::Config { path: path.to_path_buf(), message: "simulation_only must be true".into() });
    }
    Ok(f.program)
}

pub fn mint_stab(a: args::MintStab, out: Option<PathBuf>, rng: &mut Rng) -> Result<Report, CliError> {
    let params = SchemeParams::new(a.n.unwrap_or(8), a.l.unwrap_or(1001), a.m.unwrap_or(50), a.eps.unwrap_or(0.2))
        .map_err(run_err)?;
    let key_path = need(a.key, "key")?;
    let out = need(out, "out")?;
    let keys: BankKeys = if key_path.exists() {
        parse_json(&key_path)?
    } else {
        let keys = BankKeys::generate(&mut rng.split("bank"));
        write(&key_path, &serde_json::to_vec(&keys).map_err(run_err)?)?;
        keys
    };
    let note = mint(params, &keys, rng).map_err(run_err)?;
    save_note(&out, &note, a.binary.unwrap_or(false))?;
    eprintln!(
        "minted note: n={} l={} m={} eps={} table_bits={}",
        params.n,
        params.l,
        params.m,
        params.eps,
        params.table_bits()
    );
    Ok(Report::new(Value::Null))
}

pub fn auth_stab(a: args::AuthStab, rng: &mut Rng) -> Result<(Report, bool), CliError> {
    let note = load_note(&need(a.note, "note")?)?;
    let keys: BankKeys = parse_json(&need(a.key, "key")?)?;
    let mode = match a.mode.as_deref().unwrap_or("coherent") {
        "literal" => AuthMode::Literal,
        "coherent" => AuthMode::Coherent,
        other => return Err(CliError::Usage(format!("unknown mode `{other}`"))),
    };
    let repeat = a.repeat.unwrap_or(1);
    let (trace, post) = reauthenticate_loop(&note, &keys.verification_key(), repeat, mode, rng).map_err(run_err)?;
    if let Some(p) = a.post {
        save_note(&p, &post, false)?;
    }
    let accepted = trace.accepts.iter().filter(|&&x| x).count();
    let all = accepted == repeat;
    let json = json!({
        "mode": mode,
        "repeat": repeat,
        "accepted": accepted,
        "threshold": note.params.l / 2 + 1,
        "plus_counts": trace.plus_counts,
        "total_damage": trace.total_damage,
        "all_accepted": all,
    });
    Ok((Report::new(json), all))
}

pub fn attack_stab(a: args::AttackStab, rng: &mut Rng) -> Result<Report, CliError> {
    let note = load_note(&need(a.note, "note")?)?;
    let attack = a.attack.unwrap_or_else(|| "gaussian".into());
    let (states, extra) = match attack.as_str() {
        "gaussian" => {
            let f = attack_gaussian(&note.table, note.params.eps, rng);
            (f.tableaux(), json!({ "short_of_target": f.short_of_target }))
        }
        "commuting" => {
            let rep = attack_commuting(&note.table, a.c.unwrap_or(3.0), Some(&note.states));
            let mut fallback = rng.split("fallback");
            let states =
                rep.states
                    .iter()
                    .map(|s| match &s.recovered {
                        Some(t) => Ok(t.clone()),
                        None => unclonable::stabilizer::StabilizerTableau::random(note.params.n, &mut fallback)
                            .map_err(run_err),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
            let extra = json!({
                "threshold": rep.threshold,
                "classified_fraction": rep.classified_fraction,
                "null_false_positive_rate": rep.null_false_positive_rate,
                "recovery_rate": rep.recovery_rate,
            });
            (states, extra)
        }
        other => return Err(CliError::Usage(format!("unknown attack `{other}`"))),
    };
    let forged = note.with_states(states);
    if let Some(p) = a.forged {
        save_note(&p, &forged, false)?;
    }
    let mut json = json!({
        "attack": attack,
        "genuine_row_rate": per_row_plus_rate(&note.states, &note.table),
        "forged_row_rate": per_row_plus_rate(&forged.states, &note.table),
        "genuine_accept": acceptance_probability(&note.states, &note.table),
        "forged_accept": acceptance_probability(&forged.states, &note.table),
    });
    if let (Value::Object(o), Value::Object(e)) = (&mut json, extra) {
        o.extend(e);
    }
    Ok(Report::new(json))
}

pub fn sweep_stab(a: args::SweepStab, trials: Option<usize>, rng: &mut Rng) -> Result<Report, CliError> {
    let ms = a.ms.unwrap_or_else(|| (3..=9).map(|k| 1usize << k).collect());
    let rows =
        gaussian_sweep(a.n.unwrap_or(16), a.l.unwrap_or(101), a.eps.unwrap_or(0.5), &ms, trials.unwrap_or(5), rng)
            .map_err(run_err)?;
    let rows: Vec<Value> = rows.iter().map(to_json).collect::<Result<_, _>>()?;
    Ok(Report::with_rows(Value::Array(rows.clone()), rows))
}

pub fn wealth(a: args::Wealth, trials: Option<usize>, rng: &mut Rng) -> Result<Report, CliError> {
    let d = WealthConfig::default();
    let cfg = WealthConfig {
        scheme: a.scheme.unwrap_or(d.scheme),
        counterfeiter: a.counterfeiter.unwrap_or(d.counterfeiter),
        k: a.k.unwrap_or(d.k),
        r: a.r.unwrap_or(d.r),
        trials: trials.unwrap_or(d.trials),
        qubits: a.qubits.unwrap_or(d.qubits),
        stabilizer: SchemeParams {
            n: a.n.unwrap_or(d.stabilizer.n),
            l: a.l.unwrap_or(d.stabilizer.l),
            m: a.m.unwrap_or(d.stabilizer.m),
            eps: a.eps.unwrap_or(d.stabilizer.eps),
        },
    };
    Ok(Report::new(to_json(&run_wealth_game(&cfg, rng).map_err(run_err)?)?))
}

pub fn tdesign_moment(a: args::TdesignMoment, rng: &mut Rng) -> Result<Report, CliError> {
    let (n, d, t) = (a.n.unwrap_or(2), a.d.unwrap_or(2), a.t.unwrap_or(2));
    let spec = DesignSpec::new(n, d).map_err(run_err)?;
    let mode = a.samples.map_or(MomentMode::Exact, |samples| MomentMode::MonteCarlo { samples });
    let design = design_moment(&spec, t, mode, rng).map_err(run_err)?;
    let haar = haar_moment(n, t).map_err(run_err)?;
    let max_se = design.stderr.as_ref().map(|s| s.max());
    Ok(Report::new(json!({
        "n": n,
        "d": d,
        "t": t,
        "mode": if a.samples.is_some() { "monte-carlo" } else { "exact" },
        "samples": a.samples,
        "distance_to_haar": moment_distance(&design, &haar).map_err(run_err)?,
        "max_entry_stderr": max_se,
    })))
}

pub fn tdesign_distinguish(
    a: args::TdesignDistinguish,
    trials: Option<usize>,
    rng: &mut Rng,
) -> Result<Report, CliError> {
    let (n, d, t, queries) = (a.n.unwrap_or(8), a.d.unwrap_or(8), a.t.unwrap_or(1), a.queries.unwrap_or(0));
    let spec = DesignSpec::new(n, d).map_err(run_err)?;
    let name = a.strategy.unwrap_or_else(|| "all".into());
    let strategies: Vec<Strategy> = if name == "all" {
        Strategy::ALL.to_vec()
    } else {
        vec![Strategy::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| CliError::Usage(format!("unknown strategy `{name}`")))?]
    };
    let rows: Vec<Value> = strategies
        .into_iter()
        .map(|s| {
            let rep = distinguisher_advantage(&spec, t, queries, s, trials.unwrap_or(2000), &mut rng.split(s.name()))
                .map_err(run_err)?;
            to_json(&rep)
        })
        .collect::<Result<_, _>>()?;
    Ok(Report::with_rows(Value::Array(rows.clone()), rows))
}

pub fn vend(a: args::Vend, rng: &mut Rng) -> Result<Report, CliError> {
    let key = bits(&need(a.key, "key")?, "key")?;
    let k = a.k.unwrap_or(4);
    let program = match a.scheme.unwrap_or(CopyScheme::B) {
        CopyScheme::A => Program::A(scheme_a_vend(&key, &SchemeAConfig::new(a.m.unwrap_or(8)), k).map_err(run_err)?),
        CopyScheme::B => Program::B(scheme_b_vend(&key, k, rng).map_err(run_err)?),
    };
    Ok(Report::new(program_json(&program)?))
}

pub fn eval(a: args::Eval, rng: &mut Rng) -> Result<Report, CliError> {
    let program = load_program(&need(a.program, "program")?)?;
    let xs = need(a.x, "x")?;
    let x = bits(&xs, "input")?;
    let out = program.eval(&x, rng).map_err(run_err)?;
    if let Some(p) = a.post {
        write(&p, &serde_json::to_vec_pretty(&program_json(&out.post)?).map_err(run_err)?)?;
    }
    Ok(Report::new(json!({ "x": xs, "value": out.value, "damage_bound": out.damage_bound })))
}

pub fn pirate(a: args::Pirate, rng: &mut Rng) -> Result<Report, CliError> {
    let strategy = need(a.strategy, "strategy")?;
    let programs = || -> Result<Vec<Program>, CliError> {
        a.program.clone().unwrap_or_default().iter().map(|p| load_program(p)).collect()
    };
    let json = match strategy.as_str() {
        "split" => {
            let [p] = <[Program; 1]>::try_from(programs()?)
                .map_err(|_| CliError::Usage("split takes one --program".into()))?;
            let (x, y) = split_program(&p).map_err(run_err)?;
            json!({ "strategy": "split", "programs": [program_json(&x)?, program_json(&y)?] })
        }
        "mix" => {
            let [p, q] =
                <[Program; 2]>::try_from(programs()?).map_err(|_| CliError::Usage("mix takes two --program".into()))?;
            let out = trivial_mix_pirate(p, q, rng);
            json!({ "strategy": "mix", "programs": out.iter().map(program_json).collect::<Result<Vec<_>, _>>()? })
        }
        "learn" => {
            let [p] = <[Program; 1]>::try_from(programs()?)
                .map_err(|_| CliError::Usage("learn takes one --program".into()))?;
            let n = p.key_len();
            let family: Vec<BitString> = match a.family {
                Some(f) => f.iter().map(|s| bits(s, "family key")).collect::<Result<_, _>>()?,
                None if n <= 6 => (0..1u64 << n).map(|v| BitString::from_u64(v, n)).collect(),
                None => return Err(CliError::Usage("keys longer than 6 bits need an explicit --family".into())),
            };
            let r = learnability_pirate(&family, &p, rng).map_err(run_err)?;
            json!({
                "strategy": "learn",
                "key": family[r.key_index].to_string(),
                "queries": r.queries,
                "damage_bound": r.damage_bound,
                "source_fidelity": r.source_fidelity,
                "fresh": program_json(&r.fresh)?,
            })
        }
        "pgm" => {
            let n = a.n.unwrap_or(3);
            if n > 4 {
                return Err(CliError::Usage("pgm enumerates at most 16 keys (n ≤ 4)".into()));
            }
            let keys: Vec<BitString> = (0..1u64 << n).map(|v| BitString::from_u64(v, n)).collect();
            let k = a.k.unwrap_or(1);
            let rep = match a.scheme.unwrap_or(CopyScheme::B) {
                CopyScheme::A => pgm_pirate_a(&keys, &SchemeAConfig::new(a.m.unwrap_or(8)), k),
                CopyScheme::B => pgm_pirate_b(&keys, k),
            }
            .map_err(run_err)?;
            let mut j = to_json(&rep)?;
            if let Value::Object(o) = &mut j {
                o.insert("strategy".into(), "pgm".into());
            }
            j
        }
        other => return Err(CliError::Usage(format!("unknown pirate strategy `{other}`"))),
    };
    Ok(Report::new(json))
}

pub fn pirate_game(a: args::PirateGame, trials: Option<usize>, rng: &mut Rng) -> Result<Report, CliError> {
    let d = PirateConfig::default();
    let cfg = PirateConfig {
        scheme: a.scheme.unwrap_or(d.scheme),
        pirate: a.pirate.unwrap_or(d.pirate),
        freeloader: a.freeloader.unwrap_or(d.freeloader),
        n: a.n.unwrap_or(d.n),
        k: a.k.unwrap_or(d.k),
        r: a.r.unwrap_or(d.r),
        amplification: a.amplification.unwrap_or(d.amplification),
        m: a.m.unwrap_or(d.m),
        delta: a.delta.unwrap_or(d.delta),
        trials: trials.unwrap_or(d.trials),
    };
    Ok(Report::new(to_json(&run_pirate_game(&cfg, rng).map_err(run_err)?)?))
}

pub fn scaling(a: args::Scaling, trials: Option<usize>, rng: &mut Rng) -> Result<Report, CliError> {
    let ns = a.ns.unwrap_or_else(|| (3..=8).collect());
    let rep = run_nocloning_scaling(
        &ns,
        a.fidelity.unwrap_or(0.9),
        a.strategy.unwrap_or(ScalingStrategy::Amplify),
        a.copies.unwrap_or(4),
        trials.unwrap_or(200),
        rng,
    )
    .map_err(run_err)?;
    let rows = rep
        .points
        .iter()
        .zip(&rep.residuals)
        .map(|(p, res)| {
            let mut v = to_json(p)?;
            if let Value::Object(o) = &mut v {
                o.insert("residual".into(), json!(res));
                o.insert("slope".into(), json!(rep.slope));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Report::with_rows(to_json(&rep)?, rows))
}
