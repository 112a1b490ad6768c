//! File formats: the policies table, the traits file, and the canonical
//! corpus document.
//!
//! Policies file: comma-delimited UTF-8, header row required, one row per
//! adoption event:
//!
//! ```text
//! policy_id,policy_name,category,state_code,adoption_year,national_year
//! ssm,Same sex marriage,civil_rights,MA,2004,2015
//! ```
//!
//! `national_year` is empty for policies without a national action and must
//! agree across all rows of a policy. Fields may not contain commas.
//!
//! Traits file: whitespace-separated lines (`#` comments allowed):
//!
//! ```text
//! era <label> <start_year>                 (exactly 11)
//! region <STATE> <region>                  (all 50 states)
//! top5 <trait> <S1> <S2> <S3> <S4> <S5>    (all 8 traits)
//! innovators <well_known|quantitative> <S1..S5>
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use super::{
    AdoptionEvent, Category, Corpus, Era, PolicyRecord, Region, StateCode, StateTraitTables,
    TOP5_TRAITS,
};
use crate::error::{Error, Result};

const POLICY_HEADER: &str = "policy_id,policy_name,category,state_code,adoption_year,national_year";

/// A policy dropped by the filtering load mode, with the reason.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Exclusion {
    pub policy_id: String,
    pub reason: String,
}

/// Strict load: any invalid record is an error naming the policy and rule.
pub fn load_corpus(policies_path: &Path, traits_path: &Path) -> Result<Corpus> {
    let (corpus, excluded) = load_with_mode(policies_path, traits_path, false)?;
    debug_assert!(excluded.is_empty());
    Ok(corpus)
}

/// Filtering load: top-down policies (national action not strictly after the
/// first state adoption) are excluded and reported instead of failing the
/// load. All other violations remain hard errors.
pub fn load_corpus_filtered(
    policies_path: &Path,
    traits_path: &Path,
) -> Result<(Corpus, Vec<Exclusion>)> {
    load_with_mode(policies_path, traits_path, true)
}

fn load_with_mode(
    policies_path: &Path,
    traits_path: &Path,
    filter_top_down: bool,
) -> Result<(Corpus, Vec<Exclusion>)> {
    let tables = parse_traits_file(traits_path)?;
    let text = read(policies_path)?;
    let raw = parse_policy_rows(&path_str(policies_path), &text)?;

    let mut policies = Vec::new();
    let mut excluded = Vec::new();
    for rp in raw {
        match PolicyRecord::new(
            rp.id.clone(),
            rp.name,
            rp.category,
            rp.adoptions,
            rp.national_year,
        ) {
            Ok(p) => policies.push(p),
            Err(e @ Error::Invariant { .. }) if filter_top_down && is_top_down(&e) => {
                excluded.push(Exclusion {
                    policy_id: rp.id,
                    reason: "top-down: national action did not follow the first state adoption"
                        .into(),
                });
            }
            Err(e) => return Err(e),
        }
    }
    let corpus = Corpus::new(policies, tables)?;
    Ok((corpus, excluded))
}

fn is_top_down(e: &Error) -> bool {
    matches!(e, Error::Invariant { rule, .. } if rule.contains("top-down"))
}

struct RawPolicy {
    id: String,
    name: String,
    category: Category,
    adoptions: Vec<AdoptionEvent>,
    national_year: Option<i32>,
}

fn parse_policy_rows(path: &str, text: &str) -> Result<Vec<RawPolicy>> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((n, l)) => break (n, l),
            None => return Err(Error::parse(path, 1, "empty policies file")),
        }
    };
    if header.1.trim() != POLICY_HEADER {
        return Err(Error::parse(
            path,
            header.0 + 1,
            format!("expected header {POLICY_HEADER:?}"),
        ));
    }

    let mut order: Vec<String> = Vec::new();
    let mut by_id: BTreeMap<String, RawPolicy> = BTreeMap::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(Error::parse(
                path,
                lineno,
                format!("expected 6 comma-separated fields, got {}", fields.len()),
            ));
        }
        let (id, name, category, state, year, national) = (
            fields[0], fields[1], fields[2], fields[3], fields[4], fields[5],
        );
        let category =
            Category::parse(category).map_err(|e| Error::parse(path, lineno, e.to_string()))?;
        let state =
            StateCode::parse(state).map_err(|e| Error::parse(path, lineno, e.to_string()))?;
        let year: i32 = year
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad adoption year {year:?}")))?;
        let adoption =
            AdoptionEvent::new(state, year).map_err(|e| Error::parse(path, lineno, e.to_string()))?;
        let national_year: Option<i32> = if national.is_empty() {
            None
        } else {
            Some(national.parse().map_err(|_| {
                Error::parse(path, lineno, format!("bad national year {national:?}"))
            })?)
        };

        match by_id.get_mut(id) {
            None => {
                order.push(id.to_string());
                by_id.insert(
                    id.to_string(),
                    RawPolicy {
                        id: id.to_string(),
                        name: name.to_string(),
                        category,
                        adoptions: vec![adoption],
                        national_year,
                    },
                );
            }
            Some(existing) => {
                if existing.name != name {
                    return Err(Error::parse(
                        path,
                        lineno,
                        format!("policy {id}: name differs from an earlier row"),
                    ));
                }
                if existing.category != category {
                    return Err(Error::parse(
                        path,
                        lineno,
                        format!("policy {id}: category differs from an earlier row"),
                    ));
                }
                if existing.national_year != national_year {
                    return Err(Error::parse(
                        path,
                        lineno,
                        format!("policy {id}: national_year differs from an earlier row"),
                    ));
                }
                existing.adoptions.push(adoption);
            }
        }
    }
    if order.is_empty() {
        return Err(Error::parse(path, 1, "no policy rows"));
    }
    Ok(order
        .into_iter()
        .map(|id| by_id.remove(&id).expect("tracked order"))
        .collect())
}

/// Parses a traits file into validated tables.
pub fn parse_traits_file(path: &Path) -> Result<StateTraitTables> {
    let text = read(path)?;
    parse_traits_text(&path_str(path), &text)
}

pub fn parse_traits_text(path: &str, text: &str) -> Result<StateTraitTables> {
    let mut top5: BTreeMap<String, [StateCode; 5]> = BTreeMap::new();
    let mut innovators: BTreeMap<String, [StateCode; 5]> = BTreeMap::new();
    let mut regions: BTreeMap<StateCode, Region> = BTreeMap::new();
    let mut eras: Vec<Era> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: String| Error::parse(path, lineno, msg);
        match tokens[0] {
            "era" => {
                if tokens.len() != 3 {
                    return Err(err("era line needs: era <label> <start_year>".into()));
                }
                let label = tokens[1].to_string();
                if !label
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
                {
                    return Err(err(format!("era label {label:?} must use [A-Za-z0-9_.-]")));
                }
                let start_year: i32 = tokens[2]
                    .parse()
                    .map_err(|_| err(format!("bad era start year {:?}", tokens[2])))?;
                eras.push(Era { label, start_year });
            }
            "region" => {
                if tokens.len() != 3 {
                    return Err(err("region line needs: region <STATE> <region>".into()));
                }
                let state = StateCode::parse(tokens[1]).map_err(|e| err(e.to_string()))?;
                let region = Region::parse(tokens[2]).map_err(|e| err(e.to_string()))?;
                if regions.insert(state, region).is_some() {
                    return Err(err(format!("duplicate region line for {state}")));
                }
            }
            "top5" => {
                let set = parse_five(&tokens, "top5 <trait> <5 states>").map_err(&err)?;
                if top5.insert(tokens[1].to_string(), set).is_some() {
                    return Err(err(format!("duplicate top5 line for {:?}", tokens[1])));
                }
            }
            "innovators" => {
                let set = parse_five(&tokens, "innovators <well_known|quantitative> <5 states>")
                    .map_err(&err)?;
                if !matches!(tokens[1], "well_known" | "quantitative") {
                    return Err(err(format!(
                        "innovator list {:?} must be well_known or quantitative",
                        tokens[1]
                    )));
                }
                if innovators.insert(tokens[1].to_string(), set).is_some() {
                    return Err(err(format!("duplicate innovators line for {:?}", tokens[1])));
                }
            }
            other => {
                return Err(err(format!(
                    "unknown directive {other:?}: expected era, region, top5, or innovators"
                )));
            }
        }
    }

    let well_known = innovators
        .remove("well_known")
        .ok_or_else(|| Error::parse(path, 1, "missing innovators well_known line"))?;
    let quantitative = innovators
        .remove("quantitative")
        .ok_or_else(|| Error::parse(path, 1, "missing innovators quantitative line"))?;
    StateTraitTables::new(top5, well_known, quantitative, regions, eras)
        .map_err(|e| Error::parse(path, 1, e.to_string()))
}

fn parse_five(tokens: &[&str], usage: &str) -> std::result::Result<[StateCode; 5], String> {
    if tokens.len() != 7 {
        return Err(format!("line needs: {usage}"));
    }
    let mut set = [StateCode::parse("AK").expect("valid"); 5];
    for (i, t) in tokens[2..].iter().enumerate() {
        set[i] = StateCode::parse(t).map_err(|e| e.to_string())?;
    }
    Ok(set)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

// ---------------------------------------------------------------------------
// Canonical corpus document
// ---------------------------------------------------------------------------

/// Canonical traits listing, parseable by `parse_traits_text`: eras in
/// chronological order, then innovators, regions, and top-5 sets with
/// members sorted.
pub fn traits_to_text(t: &StateTraitTables) -> String {
    let mut out = String::new();
    for era in t.eras() {
        out.push_str(&format!("era {} {}\n", era.label, era.start_year));
    }
    for kind in ["quantitative", "well_known"] {
        let set = if kind == "quantitative" {
            &t.quantitative_innovators
        } else {
            &t.well_known_innovators
        };
        let mut sorted = *set;
        sorted.sort_unstable();
        out.push_str(&format!("innovators {kind}"));
        for s in sorted {
            out.push_str(&format!(" {s}"));
        }
        out.push('\n');
    }
    for (state, region) in t.regions() {
        out.push_str(&format!("region {state} {}\n", region.label()));
    }
    for name in TOP5_TRAITS {
        let mut sorted = *t.top5_set(name);
        sorted.sort_unstable();
        out.push_str(&format!("top5 {name}"));
        for s in sorted {
            out.push_str(&format!(" {s}"));
        }
        out.push('\n');
    }
    out
}

/// The standard policies-file form of a record list: header plus one row per
/// adoption event.
pub fn policies_to_csv(policies: &[PolicyRecord]) -> String {
    let mut out = format!("{POLICY_HEADER}\n");
    for p in policies {
        let national = p
            .national_year()
            .map(|y| y.to_string())
            .unwrap_or_default();
        for a in p.adoptions() {
            out.push_str(&format!(
                "{},{},{},{},{},{national}\n",
                p.id(),
                p.name(),
                p.category().label(),
                a.state,
                a.year
            ));
        }
    }
    out
}

impl Corpus {
    /// Canonical structured-text form: traits first with sorted keys, then
    /// policies sorted by id. Byte-identical across runs for equal corpora.
    pub fn to_canonical_text(&self) -> String {
        let mut out = String::new();
        out.push_str("statecast-corpus v1\n");
        out.push_str("[traits]\n");
        out.push_str(&traits_to_text(self.trait_tables()));

        let mut policies: Vec<&PolicyRecord> = self.policies().iter().collect();
        policies.sort_by(|a, b| a.id().cmp(b.id()));
        for p in policies {
            out.push_str(&format!("[policy {}]\n", p.id()));
            out.push_str("adoptions");
            for a in p.adoptions() {
                out.push_str(&format!(" {}:{}", a.state, a.year));
            }
            out.push('\n');
            out.push_str(&format!("category {}\n", p.category().label()));
            out.push_str(&format!("name {}\n", p.name()));
            out.push_str(&format!(
                "national_year {}\n",
                crate::textfmt::opt_year(p.national_year())
            ));
        }
        out
    }

    /// Parses and re-validates a canonical document.
    pub fn from_canonical_text(text: &str) -> Result<Corpus> {
        let path = "<canonical corpus>";
        let mut lines = text.lines().enumerate().peekable();
        match lines.next() {
            Some((_, "statecast-corpus v1")) => {}
            _ => return Err(Error::parse(path, 1, "missing statecast-corpus v1 header")),
        }
        match lines.next() {
            Some((_, "[traits]")) => {}
            _ => return Err(Error::parse(path, 2, "expected [traits] section")),
        }

        let mut trait_lines = String::new();
        while let Some((_, l)) = lines.peek() {
            if l.starts_with("[policy ") {
                break;
            }
            trait_lines.push_str(lines.next().expect("peeked").1);
            trait_lines.push('\n');
        }
        let tables = parse_traits_text(path, &trait_lines)?;

        let mut policies = Vec::new();
        while let Some((idx, header)) = lines.next() {
            let lineno = idx + 1;
            let id = header
                .strip_prefix("[policy ")
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| Error::parse(path, lineno, "expected [policy <id>]"))?
                .to_string();
            let mut adoptions = Vec::new();
            let mut category = None;
            let mut name = None;
            let mut national_year: Option<i32> = None;
            for _ in 0..4 {
                let (idx, line) = lines
                    .next()
                    .ok_or_else(|| Error::parse(path, lineno, "truncated policy block"))?;
                let lineno = idx + 1;
                let (key, rest) = line
                    .split_once(' ')
                    .ok_or_else(|| Error::parse(path, lineno, "expected key value"))?;
                match key {
                    "adoptions" => {
                        for tok in rest.split_whitespace() {
                            let (st, yr) = tok.split_once(':').ok_or_else(|| {
                                Error::parse(path, lineno, format!("bad adoption token {tok:?}"))
                            })?;
                            let state = StateCode::parse(st)
                                .map_err(|e| Error::parse(path, lineno, e.to_string()))?;
                            let year: i32 = yr.parse().map_err(|_| {
                                Error::parse(path, lineno, format!("bad year in {tok:?}"))
                            })?;
                            adoptions.push(
                                AdoptionEvent::new(state, year)
                                    .map_err(|e| Error::parse(path, lineno, e.to_string()))?,
                            );
                        }
                    }
                    "category" => {
                        category = Some(
                            Category::parse(rest)
                                .map_err(|e| Error::parse(path, lineno, e.to_string()))?,
                        );
                    }
                    "name" => name = Some(rest.to_string()),
                    "national_year" => {
                        national_year = if rest == "none" {
                            None
                        } else {
                            Some(rest.parse().map_err(|_| {
                                Error::parse(path, lineno, format!("bad national_year {rest:?}"))
                            })?)
                        };
                    }
                    other => {
                        return Err(Error::parse(
                            path,
                            lineno,
                            format!("unexpected key {other:?} in policy block"),
                        ));
                    }
                }
            }
            let category = category
                .ok_or_else(|| Error::parse(path, lineno, "policy block missing category"))?;
            let name =
                name.ok_or_else(|| Error::parse(path, lineno, "policy block missing name"))?;
            policies.push(PolicyRecord::new(id, name, category, adoptions, national_year)?);
        }
        Corpus::new(policies, tables)
    }
}
