use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use mvtop_core::fibration::verify_filler;
use mvtop_core::homotopy::path_disconnection;
use mvtop_core::io::{
    cover_certificates, labels, ChainDoc, MapDoc, MapRef, SpaceDoc, SpaceRef, SuiteDoc, Table,
};
use mvtop_core::models::{self, CATALOG, MAP_CATALOG};
use mvtop_core::{
    catm_map, catm_space, fibration_certificate, find_filler, homotopic_distance, msecat, tmc_map,
    tmc_space, FibrationCertificate, FillerOutcome, FiniteSpace, HomotopySearch, HomotopyStatus,
    HomotopyVerdict, InvariantOptions, InvariantResult, MultiMap, Strategy, TmcMode,
};

use crate::report::{digest, BudgetUsage, CliError, Report, Status};
use crate::{
    CheckCmd, Command, FibrationCmd, HomotopyArgs, InvariantCmd, ModeArg, ModelsCmd, SearchArgs,
    StrategyArg,
};

type Outcome = Result<(Value, Status, Value, Option<BudgetUsage>), CliError>;

pub fn run(command: &Command) -> Report {
    let name = command_name(command);
    let (inputs, status, result, budget) = match dispatch(command) {
        Ok(parts) => parts,
        Err(e) => (Value::Null, Status::Error, e.to_json(), None),
    };
    Report {
        command: name,
        version: env!("CARGO_PKG_VERSION"),
        inputs_digest: digest(&inputs),
        status,
        result,
        budget,
    }
}

fn command_name(command: &Command) -> String {
    match command {
        Command::Check(c) => format!(
            "check {}",
            match c {
                CheckCmd::Space { .. } => "space",
                CheckCmd::Continuity { .. } => "continuity",
                CheckCmd::Section { .. } => "section",
                CheckCmd::Homeomorphism { .. } => "homeomorphism",
                CheckCmd::Connected { .. } => "connected",
            }
        ),
        Command::Homotopy(_) => "homotopy".into(),
        Command::Invariant(i) => format!(
            "invariant {}",
            match i {
                InvariantCmd::Dm { .. } => "dm",
                InvariantCmd::Catm { .. } => "catm",
                InvariantCmd::CatmMap { .. } => "catm-map",
                InvariantCmd::Tmc { .. } => "tmc",
                InvariantCmd::TmcMap { .. } => "tmc-map",
                InvariantCmd::Msecat { .. } => "msecat",
            }
        ),
        Command::Fibration(FibrationCmd::Check { .. }) => "fibration check".into(),
        Command::Fibration(FibrationCmd::Certificate { .. }) => "fibration certificate".into(),
        Command::Models(ModelsCmd::List) => "models list".into(),
        Command::Models(ModelsCmd::Emit { .. }) => "models emit".into(),
    }
}

fn dispatch(command: &Command) -> Outcome {
    match command {
        Command::Check(c) => check(c),
        Command::Homotopy(args) => homotopy(args),
        Command::Invariant(i) => invariant(i),
        Command::Fibration(FibrationCmd::Check {
            suite,
            budget,
            emit_certificate,
        }) => fibration_check(suite, *budget, emit_certificate.as_deref()),
        Command::Fibration(FibrationCmd::Certificate { map: m }) => {
            let rho = map(m)?;
            let cert = fibration_certificate(&rho);
            Ok((
                json!([MapDoc::of(&rho)]),
                Status::of(cert != FibrationCertificate::None),
                certificate_json(cert),
                None,
            ))
        }
        Command::Models(ModelsCmd::List) => Ok((Value::Null, Status::Holds, catalog(), None)),
        Command::Models(ModelsCmd::Emit { .. }) => unreachable!("handled before reporting"),
    }
}

/// Parses `arg` as a JSON file when such a file exists, otherwise as a
/// catalog name.
fn load<T: DeserializeOwned>(arg: &str, named: impl FnOnce(String) -> T) -> Result<T, CliError> {
    let path = Path::new(arg);
    if !path.is_file() {
        return Ok(named(arg.to_owned()));
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: arg.to_owned(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema {
        path: arg.to_owned(),
        message: e.to_string(),
    })
}

fn space(arg: &str) -> Result<Arc<FiniteSpace>, CliError> {
    Ok(Arc::new(load(arg, SpaceRef::Model)?.build()?))
}

fn map(arg: &str) -> Result<MultiMap, CliError> {
    Ok(load(arg, MapRef::Model)?.build()?)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("documents serialize");
    fs::write(path, text + "\n").map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn check(c: &CheckCmd) -> Outcome {
    match c {
        CheckCmd::Space { space: s } => {
            let x = space(s)?;
            let result = json!({
                "points": x.len(),
                "t0": x.is_t0(),
                "opens": x.open_sets()?.len(),
            });
            Ok((json!([SpaceDoc::of(&x)]), Status::Holds, result, None))
        }
        CheckCmd::Continuity { map: m } => {
            let f = map(m)?;
            let s = f.semicontinuity()?;
            let result = json!({"usc": s.usc, "lsc": s.lsc, "m_continuous": s.m_continuous});
            Ok((
                json!([MapDoc::of(&f)]),
                Status::of(s.m_continuous),
                result,
                None,
            ))
        }
        CheckCmd::Section { map: m, section } => {
            let (alpha, beta) = (map(m)?, map(section)?);
            let holds = MultiMap::is_m_section_pair(&alpha, &beta)?;
            let inputs = json!([MapDoc::of(&alpha), MapDoc::of(&beta)]);
            Ok((inputs, Status::of(holds), json!({"section": holds}), None))
        }
        CheckCmd::Homeomorphism { map: m } => {
            let f = map(m)?;
            let c = f.classify();
            let result = json!({
                "injective": c.injective,
                "surjective": c.surjective,
                "m_homeomorphism": c.m_homeomorphism,
                "inverse": c.inverse.as_ref().map(value_table),
            });
            Ok((
                json!([MapDoc::of(&f)]),
                Status::of(c.m_homeomorphism),
                result,
                None,
            ))
        }
        CheckCmd::Connected { space: s } => {
            let x = space(s)?;
            let witness = path_disconnection(&x)?;
            let result = json!({
                "connected": witness.is_none(),
                "witness": witness.map(|(a, b)| json!({"from": labels(&x, a), "to": labels(&x, b)})),
            });
            Ok((
                json!([SpaceDoc::of(&x)]),
                Status::of(witness.is_none()),
                result,
                None,
            ))
        }
    }
}

fn value_table(f: &MultiMap) -> Table {
    Table(f.value_table())
}

fn homotopy(args: &HomotopyArgs) -> Outcome {
    let s = &args.search;
    let search = HomotopySearch::new(s.budget)
        .strategy(match args.strategy {
            StrategyArg::Minimal => Strategy::Minimal,
            StrategyArg::Reduced => Strategy::Reduced,
            StrategyArg::Direct => Strategy::Direct,
        })
        .parallel(s.parallel)
        .singleton_constants(s.singleton_constants);
    let (kind, maps, verdict) = if let (Some(f), Some(g)) = (&args.f, &args.g) {
        let (f, g) = (map(f)?, map(g)?);
        let v = search.homotopic(&f, &g)?;
        ("pair", vec![f, g], v)
    } else if let Some(f) = &args.null {
        let f = map(f)?;
        let v = search.null_homotopic(&f)?;
        ("null", vec![f], v)
    } else {
        let x = space(
            args.contractible
                .as_deref()
                .expect("clap requires a target"),
        )?;
        let v = search.contractible(&x)?;
        ("contractible", vec![MultiMap::identity(&x)], v)
    };
    if let (Some(path), Some(doc)) = (&s.emit_certificate, ChainDoc::of(&verdict.certificate)) {
        write_json(path, &doc)?;
    }
    let inputs = json!({
        "maps": maps.iter().map(MapDoc::of).collect::<Vec<_>>(),
        "kind": kind,
        "strategy": format!("{:?}", args.strategy).to_lowercase(),
        "singleton_constants": s.singleton_constants,
    });
    let status = match verdict.status {
        HomotopyStatus::Homotopic => Status::Holds,
        HomotopyStatus::NotHomotopic => Status::Fails,
        HomotopyStatus::Unknown => Status::Unknown,
    };
    Ok((
        inputs,
        status,
        verdict_json(kind, &verdict),
        Some(homotopy_budget(s.budget, &verdict)),
    ))
}

fn verdict_json(kind: &str, v: &HomotopyVerdict) -> Value {
    let status = match v.status {
        HomotopyStatus::Homotopic => "homotopic",
        HomotopyStatus::NotHomotopic => "not-homotopic",
        HomotopyStatus::Unknown => "unknown",
    };
    json!({
        "kind": kind,
        "status": status,
        "certificate_length": v.certificate.len(),
        "minimal": v.minimal,
        "certificate": v.certificate.iter().map(value_table).collect::<Vec<_>>(),
    })
}

fn homotopy_budget(limit: usize, v: &HomotopyVerdict) -> BudgetUsage {
    BudgetUsage {
        limit,
        explored: Some(v.explored),
        exhausted: v.budget_hit,
    }
}

fn options(s: &SearchArgs) -> InvariantOptions {
    InvariantOptions::new(s.budget)
        .parallel(s.parallel)
        .singleton_constants(s.singleton_constants)
}

fn invariant_json(r: &InvariantResult) -> Value {
    json!({
        "invariant": r.invariant.name(),
        "lower": r.lower,
        "upper": r.upper,
        "decided": r.decided,
        "cover": r.cover.iter().map(|e| labels(&r.space, e.open)).collect::<Vec<_>>(),
        "uncovered": r.uncovered.map(|p| r.space.label(p)),
        "stats": r.stats,
    })
}

fn invariant(cmd: &InvariantCmd) -> Outcome {
    let (search, inputs, result, mut payload) = match cmd {
        InvariantCmd::Dm { f, g, search } => {
            let (f, g) = (map(f)?, map(g)?);
            let r = homotopic_distance(&f, &g, &options(search))?;
            (search, json!([MapDoc::of(&f), MapDoc::of(&g)]), r, None)
        }
        InvariantCmd::Catm { space: s, search } => {
            let x = space(s)?;
            (
                search,
                json!([SpaceDoc::of(&x)]),
                catm_space(&x, &options(search))?,
                None,
            )
        }
        InvariantCmd::Tmc { space: s, search } => {
            let x = space(s)?;
            (
                search,
                json!([SpaceDoc::of(&x)]),
                tmc_space(&x, &options(search))?,
                None,
            )
        }
        InvariantCmd::CatmMap { map: m, search } => {
            let f = map(m)?;
            (
                search,
                json!([MapDoc::of(&f)]),
                catm_map(&f, &options(search))?,
                None,
            )
        }
        InvariantCmd::Msecat { map: m, search } => {
            let f = map(m)?;
            (
                search,
                json!([MapDoc::of(&f)]),
                msecat(&f, &options(search))?,
                None,
            )
        }
        InvariantCmd::TmcMap {
            map: m,
            mode,
            search,
        } => {
            let f = map(m)?;
            let mode = match mode {
                ModeArg::Repaired => TmcMode::Repaired,
                ModeArg::Literal => TmcMode::Literal,
            };
            let r = tmc_map(&f, mode, &options(search))?;
            let extra = json!({
                "mode": r.mode,
                "surjective": true,
                "injective": r.injective,
                "fibration_certificate": certificate_json(r.fibration),
            });
            (
                search,
                json!({"map": MapDoc::of(&f), "mode": r.mode}),
                r.result,
                Some(extra),
            )
        }
    };
    if let Some(path) = &search.emit_certificate {
        write_json(path, &cover_certificates(&result))?;
    }
    let mut body = invariant_json(&result);
    if let Some(Value::Object(extra)) = payload.take() {
        body.as_object_mut().expect("object").extend(extra);
    }
    let inputs = json!({"inputs": inputs, "singleton_constants": search.singleton_constants});
    let status = if result.decided {
        Status::Holds
    } else {
        Status::Unknown
    };
    let budget = BudgetUsage {
        limit: search.budget,
        explored: Some(result.stats.explored),
        exhausted: result.stats.unknown > 0,
    };
    Ok((inputs, status, body, Some(budget)))
}

fn certificate_json(c: FibrationCertificate) -> Value {
    match c {
        FibrationCertificate::Constant => json!({"kind": "constant"}),
        FibrationCertificate::Projection { factor } => {
            json!({"kind": "projection", "factor": factor})
        }
        FibrationCertificate::Homeomorphism => json!({"kind": "homeomorphism"}),
        FibrationCertificate::None => json!({
            "kind": "none",
            "note": "no structural certificate; this does not mean the map fails to be an m-fibration",
        }),
    }
}

fn fibration_check(suite: &Path, budget: usize, emit: Option<&Path>) -> Outcome {
    let arg = suite.display().to_string();
    let text = fs::read_to_string(suite).map_err(|e| CliError::Io {
        path: arg.clone(),
        message: e.to_string(),
    })?;
    let doc: SuiteDoc = serde_json::from_str(&text).map_err(|e| CliError::Schema {
        path: arg,
        message: e.to_string(),
    })?;
    let rho = doc.rho.build()?;
    let mut squares = doc
        .squares
        .iter()
        .map(|s| s.build(&rho))
        .collect::<mvtop_core::Result<Vec<_>>>()?;
    if let Some(gen) = &doc.generate {
        squares.extend(gen.squares(&rho)?);
    }
    let (mut found, mut not_found, mut unknown) = (0, 0, 0);
    let mut rows = Vec::with_capacity(squares.len());
    let mut fillers = Vec::new();
    for (i, sq) in squares.iter().enumerate() {
        let outcome = match find_filler(sq, budget)? {
            FillerOutcome::Found(eta) => {
                assert!(
                    verify_filler(sq, &eta),
                    "filler for square {i} failed re-verification"
                );
                found += 1;
                fillers.push(json!({"square": i, "filler": value_table(&eta)}));
                "found"
            }
            FillerOutcome::NotFound => {
                not_found += 1;
                "not-found"
            }
            FillerOutcome::Unknown => {
                unknown += 1;
                "unknown"
            }
        };
        rows.push(json!({"square": i, "w_points": sq.w.len(), "k": sq.k, "outcome": outcome}));
    }
    if let Some(path) = emit {
        write_json(path, &fillers)?;
    }
    let status = if not_found > 0 {
        Status::Fails
    } else if unknown > 0 {
        Status::Unknown
    } else {
        Status::Holds
    };
    let result = json!({
        "certificate": certificate_json(fibration_certificate(&rho)),
        "squares": rows,
        "found": found,
        "not_found": not_found,
        "unknown": unknown,
    });
    let inputs = json!({"suite": doc, "budget": budget});
    let usage = BudgetUsage {
        limit: budget,
        explored: None,
        exhausted: unknown > 0,
    };
    Ok((inputs, status, result, Some(usage)))
}

fn catalog() -> Value {
    json!({
        "spaces": CATALOG
            .iter()
            .map(|(name, syntax, description)| json!({"name": name, "syntax": syntax, "description": description}))
            .collect::<Vec<_>>(),
        "maps": MAP_CATALOG
            .iter()
            .map(|(name, description)| json!({"name": name, "description": description}))
            .collect::<Vec<_>>(),
    })
}

/// The JSON document for a catalog space or map.
pub fn emit(name: &str, pretty: bool) -> Result<String, CliError> {
    let doc = if MAP_CATALOG.iter().any(|(n, _)| *n == name) {
        serde_json::to_value(MapDoc::of(&models::build_map(name)?))
    } else {
        serde_json::to_value(SpaceDoc::of(&models::build_space(name)?))
    }
    .expect("documents serialize");
    Ok(if pretty {
        serde_json::to_string_pretty(&doc)
    } else {
        serde_json::to_string(&doc)
    }
    .expect("documents serialize"))
}
