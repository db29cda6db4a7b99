//! File formats: JSON game files, inline information-structure specs,
//! JSON reports and profiles, and CSV tables.
//!
//! Rationals are accepted as `"p/q"` strings or decimal literals; JSON
//! numbers are parsed from their literal text, so decimals stay exact.

use crate::envelopes::CurveRow;
use crate::equilibrium::{
    ActionPlay, Profile, ProfileError, SenderStrategy, VerificationReport, Violation,
};
use crate::info::{InformationStructure, StructureError};
use crate::model::{Action, Belief, Game, GameError};
use crate::oracle::{OracleResult, SweepRow};
use crate::rational::{fmt_rat, parse_rat, rat_to_f64, ParseRatError, Rat};
use crate::robustness::RobustnessReport;
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Game(#[from] GameError),
    #[error("{0}")]
    Structure(#[from] StructureError),
    #[error("{0}")]
    Profile(#[from] ProfileError),
    #[error("{0}")]
    Rational(#[from] ParseRatError),
    #[error("game file: {0}")]
    Schema(String),
}

fn value_to_rat(v: &Value) -> Result<Rat, FileError> {
    match v {
        Value::String(s) => Ok(parse_rat(s)?),
        Value::Number(n) => Ok(parse_rat(&n.to_string())?),
        other => Err(FileError::Schema(format!(
            "expected a rational (string or number), got {other}"
        ))),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, FileError> {
    obj.get(key)
        .ok_or_else(|| FileError::Schema(format!("missing field `{key}`")))
}

fn rat_array(v: &Value) -> Result<Vec<Rat>, FileError> {
    v.as_array()
        .ok_or_else(|| FileError::Schema("expected an array of rationals".into()))?
        .iter()
        .map(value_to_rat)
        .collect()
}

/// Parses a game document. Either `cutoffs` or `receiver_utilities` must be
/// present (not both).
pub fn parse_game(text: &str) -> Result<Game, FileError> {
    let root: Value = serde_json::from_str(text)?;
    let obj = root
        .as_object()
        .ok_or_else(|| FileError::Schema("top level must be an object".into()))?;
    let prior = value_to_rat(field(obj, "prior")?)?;
    let actions: Vec<Action> = field(obj, "actions")?
        .as_array()
        .ok_or_else(|| FileError::Schema("`actions` must be an array".into()))?
        .iter()
        .map(|a| {
            let ao = a
                .as_object()
                .ok_or_else(|| FileError::Schema("each action must be an object".into()))?;
            let label = field(ao, "label")?
                .as_str()
                .ok_or_else(|| FileError::Schema("action `label` must be a string".into()))?
                .to_string();
            let utility = value_to_rat(field(ao, "sender_utility")?)?;
            Ok(Action::new(label, utility))
        })
        .collect::<Result<_, FileError>>()?;
    match (obj.get("cutoffs"), obj.get("receiver_utilities")) {
        (Some(c), None) => Ok(Game::new(rat_array(c)?, actions, prior)?),
        (None, Some(r)) => {
            let rows = r
                .as_array()
                .ok_or_else(|| FileError::Schema("`receiver_utilities` must be an array".into()))?
                .iter()
                .map(|row| {
                    let pair = rat_array(row)?;
                    if pair.len() != 2 {
                        return Err(FileError::Schema(
                            "each receiver_utilities row must be [u(a,0), u(a,1)]".into(),
                        ));
                    }
                    Ok((pair[0].clone(), pair[1].clone()))
                })
                .collect::<Result<Vec<_>, FileError>>()?;
            Ok(Game::from_receiver_utilities(actions, rows, prior)?)
        }
        (Some(_), Some(_)) => Err(FileError::Schema(
            "give either `cutoffs` or `receiver_utilities`, not both".into(),
        )),
        (None, None) => Err(FileError::Schema(
            "missing `cutoffs` or `receiver_utilities`".into(),
        )),
    }
}

pub fn game_to_json(game: &Game) -> Value {
    json!({
        "actions": game.actions().iter().map(|a| json!({
            "label": a.label,
            "sender_utility": fmt_rat(&a.sender_utility),
        })).collect::<Vec<_>>(),
        "cutoffs": game.cutoffs().iter().map(fmt_rat).collect::<Vec<_>>(),
        "prior": fmt_rat(game.prior().value()),
    })
}

/// Parses the inline structure syntax:
/// `symmetric_binary q=3/5`, `binary a=11/20 b=2/5`, or
/// `support=[s1,s2,...] weights=[w1,w2,...]`.
pub fn parse_structure_spec(spec: &str) -> Result<InformationStructure, FileError> {
    let spec = spec.trim();
    let keyvals: Vec<(&str, &str)> = spec
        .split_whitespace()
        .filter_map(|tok| tok.split_once('='))
        .collect();
    let get =
        |key: &str| -> Option<&str> { keyvals.iter().find(|(k, _)| *k == key).map(|(_, v)| *v) };
    let parse_list = |raw: &str| -> Result<Vec<Rat>, FileError> {
        let inner = raw
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| FileError::Schema(format!("expected a [..] list, got `{raw}`")))?;
        inner
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| Ok(parse_rat(s)?))
            .collect()
    };
    if spec.starts_with("symmetric_binary") {
        let q = get("q").ok_or_else(|| FileError::Schema("symmetric_binary needs q=".into()))?;
        return Ok(InformationStructure::symmetric_binary(parse_rat(q)?)?);
    }
    if spec.starts_with("binary") {
        let a = get("a").ok_or_else(|| FileError::Schema("binary needs a=".into()))?;
        let b = get("b").ok_or_else(|| FileError::Schema("binary needs b=".into()))?;
        return Ok(InformationStructure::binary(parse_rat(a)?, parse_rat(b)?)?);
    }
    if spec == "uninformative" {
        return Ok(InformationStructure::uninformative());
    }
    match (get("support"), get("weights")) {
        (Some(s), Some(w)) => Ok(InformationStructure::new(parse_list(s)?, parse_list(w)?)?),
        _ => Err(FileError::Schema(format!(
            "unrecognized structure spec `{spec}`"
        ))),
    }
}

fn opt_rat_json(v: &Option<Rat>) -> Value {
    match v {
        Some(r) => json!({ "exact": fmt_rat(r), "approx": rat_to_f64(r) }),
        None => Value::Null,
    }
}

fn rat_json(r: &Rat) -> Value {
    json!({ "exact": fmt_rat(r), "approx": rat_to_f64(r) })
}

pub fn report_to_json(game: &Game, report: &RobustnessReport) -> Value {
    json!({
        "game": game_to_json(game),
        "prior_interval": game.prior_interval(),
        "v_prior": rat_json(&report.v_prior),
        "v_star_0": rat_json(&report.v_star_0),
        "concave_value": rat_json(&report.concave),
        "trivially_supported": report.trivially_supported,
        "T": report.triples.iter().map(|t| {
            let (a, b, c) = t.action_indices(game);
            json!({ "kind": format!("{:?}", t.kind), "actions": [a, b, c] })
        }).collect::<Vec<_>>(),
        "Q": report.quads.iter().map(|q| {
            let (a, b, c, d) = q.action_indices();
            json!({ "kind": format!("{:?}", q.kind), "actions": [a, b, c, d] })
        }).collect::<Vec<_>>(),
        "B": report.b.rows.iter()
            .map(|(c1, c2)| json!([fmt_rat(c1), fmt_rat(c2)]))
            .collect::<Vec<_>>(),
        "val_B": report.val_b.as_ref().map(|(v, beta)| json!({
            "value": rat_json(v),
            "beta_star": fmt_rat(beta),
        })).unwrap_or(Value::Null),
        "pure_V_B": opt_rat_json(&report.pure_v_b),
        "v_star_1": opt_rat_json(&report.v_star_1),
        "v_star_l": opt_rat_json(&report.v_star_l),
        "v_hat_b": rat_json(&report.v_hat_b),
        "v_hat_bounds": [rat_json(&report.v_hat_lower), rat_json(&report.v_hat_upper)],
        "verdict": report.verdict.to_string(),
    })
}

fn play_to_json(play: &ActionPlay) -> Value {
    match play {
        ActionPlay::Pure(k) => json!({ "pure": k }),
        ActionPlay::Mix { cutoff, hi_prob } => json!({
            "cutoff": cutoff,
            "hi_prob": fmt_rat(hi_prob),
        }),
    }
}

fn play_from_json(v: &Value) -> Result<ActionPlay, FileError> {
    let obj = v
        .as_object()
        .ok_or_else(|| FileError::Schema("each play must be an object".into()))?;
    if let Some(p) = obj.get("pure") {
        let k = p
            .as_u64()
            .ok_or_else(|| FileError::Schema("`pure` must be an action index".into()))?;
        return Ok(ActionPlay::Pure(k as usize));
    }
    let cutoff = field(obj, "cutoff")?
        .as_u64()
        .ok_or_else(|| FileError::Schema("`cutoff` must be an index".into()))?;
    let hi_prob = value_to_rat(field(obj, "hi_prob")?)?;
    Ok(ActionPlay::Mix {
        cutoff: cutoff as usize,
        hi_prob,
    })
}

pub fn structure_to_json(f: &InformationStructure) -> Value {
    json!({
        "support": f.support().iter().map(fmt_rat).collect::<Vec<_>>(),
        "weights": f.weights().iter().map(fmt_rat).collect::<Vec<_>>(),
    })
}

pub fn profile_to_json(profile: &Profile) -> Value {
    json!({
        "structure": structure_to_json(profile.structure()),
        "messages": profile.sender().messages.iter()
            .map(|m| fmt_rat(m.value())).collect::<Vec<_>>(),
        "mixing": {
            "state0": profile.sender().mix[0].iter().map(fmt_rat).collect::<Vec<_>>(),
            "state1": profile.sender().mix[1].iter().map(fmt_rat).collect::<Vec<_>>(),
        },
        "receiver": profile.plays().iter().map(|row| {
            row.iter().map(play_to_json).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
        "per_signal_values": (0..profile.n_messages()).map(|m| {
            (0..profile.structure().len())
                .map(|s| fmt_rat(&profile.value_at(m, s)))
                .collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
        "state_message_values": (0..2u8).map(|w| {
            (0..profile.n_messages())
                .map(|m| fmt_rat(&profile.state_message_value(w, m)))
                .collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
        "ex_ante_value": rat_json(&profile.ex_ante_value()),
    })
}

/// Reads a profile document back, against an explicit game. The document's
/// own `structure` field supplies the information structure.
pub fn parse_profile(game: &Game, text: &str) -> Result<Profile, FileError> {
    let root: Value = serde_json::from_str(text)?;
    let obj = root
        .as_object()
        .ok_or_else(|| FileError::Schema("top level must be an object".into()))?;
    let sobj = field(obj, "structure")?
        .as_object()
        .ok_or_else(|| FileError::Schema("`structure` must be an object".into()))?;
    let structure = InformationStructure::new(
        rat_array(field(sobj, "support")?)?,
        rat_array(field(sobj, "weights")?)?,
    )?;
    let messages = rat_array(field(obj, "messages")?)?
        .into_iter()
        .map(|m| Ok(Belief::new(m)?))
        .collect::<Result<Vec<_>, FileError>>()?;
    let mobj = field(obj, "mixing")?
        .as_object()
        .ok_or_else(|| FileError::Schema("`mixing` must be an object".into()))?;
    let mix = [
        rat_array(field(mobj, "state0")?)?,
        rat_array(field(mobj, "state1")?)?,
    ];
    let plays = field(obj, "receiver")?
        .as_array()
        .ok_or_else(|| FileError::Schema("`receiver` must be an array".into()))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| FileError::Schema("receiver rows must be arrays".into()))?
                .iter()
                .map(play_from_json)
                .collect::<Result<Vec<_>, FileError>>()
        })
        .collect::<Result<Vec<_>, FileError>>()?;
    Ok(Profile::new(
        game.clone(),
        structure,
        SenderStrategy { messages, mix },
        plays,
    )?)
}

fn violation_to_json(v: &Violation) -> Value {
    match v {
        Violation::Bayes {
            message,
            posterior,
            stated,
        } => json!({
            "kind": "bayes",
            "message": message,
            "posterior": fmt_rat(posterior),
            "stated": fmt_rat(stated),
        }),
        Violation::Receiver {
            message,
            signal,
            action,
            composed,
        } => json!({
            "kind": "receiver",
            "message": message,
            "signal": signal,
            "action": action,
            "composed_posterior": fmt_rat(composed),
        }),
        Violation::SenderIc {
            state,
            sent,
            better,
            sent_value,
            better_value,
        } => json!({
            "kind": "sender_ic",
            "state": state,
            "sent": sent,
            "better": better,
            "sent_value": fmt_rat(sent_value),
            "better_value": fmt_rat(better_value),
        }),
    }
}

pub fn verification_to_json(report: &VerificationReport) -> Value {
    let witnesses: Vec<Value> = [
        &report.worst_bayes,
        &report.worst_receiver,
        &report.worst_sender_ic,
    ]
    .into_iter()
    .flatten()
    .map(violation_to_json)
    .collect();
    json!({
        "bayes_ok": report.bayes_ok,
        "receiver_ok": report.receiver_ok,
        "sender_ic_ok": report.sender_ic_ok,
        "is_equilibrium": report.is_equilibrium(),
        "witnesses": witnesses,
    })
}

pub fn oracle_to_json(result: &OracleResult) -> Value {
    json!({
        "v_star": rat_json(&result.v_star),
        "census": result.census.iter().map(|e| json!({
            "class": e.class.to_string(),
            "value": rat_json(&e.value),
            "boundary_tie_break": e.boundary_tie_break,
            "profile": profile_to_json(&e.profile),
        })).collect::<Vec<_>>(),
    })
}

/// CSV for the envelope curves: exact columns per the interface contract,
/// then decimal mirrors.
pub fn curves_to_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from(
        "lambda,v_min,v_max,qcav,cav,lambda_dec,v_min_dec,v_max_dec,qcav_dec,cav_dec\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            fmt_rat(&r.lambda),
            fmt_rat(&r.v_min),
            fmt_rat(&r.v_max),
            fmt_rat(&r.qcav),
            fmt_rat(&r.cav),
            rat_to_f64(&r.lambda),
            rat_to_f64(&r.v_min),
            rat_to_f64(&r.v_max),
            rat_to_f64(&r.qcav),
            rat_to_f64(&r.cav),
        ));
    }
    out
}

/// CSV for sweep tables; infeasible rows carry an empty value.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("delta,beta,value,class,value_dec\n");
    for r in rows {
        let (value, value_dec, class) = match (&r.value, &r.class) {
            (Some(v), Some(c)) => (fmt_rat(v), rat_to_f64(v).to_string(), c.to_string()),
            _ => (String::new(), String::new(), "infeasible".to_string()),
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_rat(&r.delta),
            fmt_rat(&r.beta),
            value,
            class,
            value_dec,
        ));
    }
    out
}
