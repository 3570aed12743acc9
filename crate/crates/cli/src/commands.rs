use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use serde_json::{json, Value};

use ilproof::hilbert::{check_hilbert, hilbert_from_json, hilbert_to_json, summary, JsonHilbert};
use ilproof::interpolation::{
    check_template, fixpoint, interpolate, template_from_json, template_to_json, verify_interpolant,
    JsonTemplate,
};
use ilproof::io::{cyclic_from_json, cyclic_to_json, parse_document, proof_from_json, proof_to_json, to_dot, to_pretty, JsonProof};
use ilproof::metatheory::{alpha_prefix, cyclic_to_fgil, eliminate_cuts_reprove, hilbert_to_sequent, sequent_to_hilbert};
use ilproof::search::{prove, Logic, SearchOutcome};
use ilproof::{
    check_cyclic_in, check_proof_with, parse, parse_sequent, parse_vocabulary, CalculusId, CheckOptions, CyclicProof,
    Formula, Proof, Sequent,
};

use crate::config::{Config, Format};

/// Exit code contract: 0 success, 1 negative result, 2 error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Success = 0,
    Negative = 1,
    Error = 2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Hilbert,
    Cyclic,
    FgilCut,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Fgil,
    FgilCut,
    GilPrefix,
    Hilbert,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn opts(allow_assumptions: bool) -> CheckOptions {
    CheckOptions {
        allow_assumptions,
        ..CheckOptions::default()
    }
}

/// Every artifact is checked before it leaves the process.
fn recheck_proof(p: &Proof, c: CalculusId, allow_assumptions: bool) -> Result<()> {
    check_proof_with(p, c, opts(allow_assumptions)).map_err(|e| anyhow!("internal: produced proof fails {}: {e}", c.name()))
}

/// Writes a proof document and checks what comes back from disk.
fn emit_proof(path: &Path, doc: &JsonProof, allow_assumptions: bool) -> Result<()> {
    write(path, &to_pretty(doc))?;
    let back = parse_document(&read(path)?)?;
    let calc = ilproof::io::calculus_of(&back)?;
    if back.nodes.iter().any(|n| n.backlink.is_some()) {
        let cp = cyclic_from_json(&back)?;
        check_cyclic_in(&cp, calc).map_err(|e| anyhow!("{} does not check after writing: {e}", path.display()))
    } else {
        let (p, _) = proof_from_json(&back)?;
        check_proof_with(&p, calc, opts(allow_assumptions))
            .map_err(|e| anyhow!("{} does not check after writing: {e}", path.display()))
    }
}

fn proof_output(cfg: &Config, doc: &JsonProof, out: Option<&Path>, allow_assumptions: bool, summary: String) -> Result<String> {
    if let Some(path) = out {
        emit_proof(path, doc, allow_assumptions)?;
        return Ok(format!("{summary}\nwritten to {}\n", path.display()));
    }
    Ok(match cfg.format {
        Format::Text => format!("{summary}\n"),
        Format::Json => to_pretty(doc),
        Format::Dot => to_dot(doc),
    })
}

fn formula_dot(f: &Formula, sugar: bool) -> String {
    fn go(f: &Formula, sugar: bool, out: &mut String, next: &mut usize) -> usize {
        let id = *next;
        *next += 1;
        let (label, kids): (String, Vec<&Formula>) = match f {
            Formula::Atom(n) => (n.to_string(), vec![]),
            Formula::Bot => ("⊥".into(), vec![]),
            Formula::Imp(a, b) => ("→".into(), vec![a, b]),
            Formula::Interp(a, b) => ("⊳".into(), vec![a, b]),
        };
        out.push_str(&format!("  f{id} [label=\"{label}\", tooltip=\"{}\"];\n", f.print(sugar).replace('"', "\\\"")));
        for k in kids {
            let c = go(k, sugar, out, next);
            out.push_str(&format!("  f{id} -> f{c};\n"));
        }
        id
    }
    let mut out = String::from("digraph formula {\n");
    go(f, sugar, &mut out, &mut 0);
    out.push_str("}\n");
    out
}

pub fn cmd_parse(cfg: &Config, input: &str) -> Result<(Status, String)> {
    if input.contains("=>") {
        let s = parse_sequent(input)?;
        let text = match cfg.format {
            Format::Text => format!("{}\n", s.print(cfg.sugar)),
            Format::Json => pretty(&json!({
                "kind": "sequent",
                "printed": s.print(cfg.sugar),
                "core": s.print(false),
                "left": s.left.iter().map(|f| f.print(cfg.sugar)).collect::<Vec<_>>(),
                "right": s.right.iter().map(|f| f.print(cfg.sugar)).collect::<Vec<_>>(),
            })),
            Format::Dot => formula_dot(&s.to_formula(), cfg.sugar),
        };
        return Ok((Status::Success, text));
    }
    let f = parse(input)?;
    let text = match cfg.format {
        Format::Text => format!("{}\n", f.print(cfg.sugar)),
        Format::Json => pretty(&json!({
            "kind": "formula",
            "printed": f.print(cfg.sugar),
            "core": f.print(false),
            "size": f.size(),
            "vocabulary": f.vocabulary(),
        })),
        Format::Dot => formula_dot(&f, cfg.sugar),
    };
    Ok((Status::Success, text))
}

pub struct ProveArgs<'a> {
    pub emit: Option<&'a Path>,
    pub dot: Option<&'a Path>,
}

pub fn cmd_prove(cfg: &Config, input: &str, args: &ProveArgs) -> Result<(Status, String)> {
    let mut s = parse_sequent(input)?;
    if cfg.logic == Logic::Ilp {
        s = Sequent::goal(s.to_formula().sharp());
    }
    let outcome = prove(&s, cfg.limits.search());
    let status = match &outcome {
        SearchOutcome::Provable { .. } => Status::Success,
        SearchOutcome::Unprovable { .. } => Status::Negative,
        SearchOutcome::ResourceExhausted { .. } => Status::Error,
    };
    let mut text = String::new();
    if let Some(proof) = outcome.proof() {
        check_cyclic_in(proof, proof.calculus).map_err(|e| anyhow!("internal: search proof fails its checker: {e}"))?;
        let doc = cyclic_to_json(proof);
        if let Some(path) = args.emit {
            emit_proof(path, &doc, false)?;
        }
        if let Some(path) = args.dot {
            write(path, &to_dot(&doc))?;
        }
        text = match cfg.format {
            Format::Text => String::new(),
            Format::Json => to_pretty(&doc),
            Format::Dot => to_dot(&doc),
        };
    }
    if cfg.format == Format::Text || outcome.proof().is_none() {
        let line = match cfg.format {
            Format::Json => pretty(&json!({
                "sequent": s.print(cfg.sugar),
                "outcome": match &outcome {
                    SearchOutcome::Provable { .. } => "provable",
                    SearchOutcome::Unprovable { .. } => "unprovable",
                    SearchOutcome::ResourceExhausted { .. } => "exhausted",
                },
                "summary": outcome.to_string(),
            })),
            _ => format!("{}: {outcome}\n", s.print(cfg.sugar)),
        };
        text.push_str(&line);
    }
    Ok((status, text))
}

enum Document {
    Proof(JsonProof),
    Hilbert(JsonHilbert),
    Template(JsonTemplate),
}

fn load(path: &Path) -> Result<Document> {
    let v: Value = serde_json::from_str(&read(path)?).with_context(|| format!("{} is not valid JSON", path.display()))?;
    if v.get("lines").is_some() {
        Ok(Document::Hilbert(serde_json::from_value(v)?))
    } else if v.get("kind").and_then(Value::as_str) == Some("template") {
        Ok(Document::Template(serde_json::from_value(v)?))
    } else {
        Ok(Document::Proof(serde_json::from_value(v)?))
    }
}

fn load_proof(path: &Path) -> Result<JsonProof> {
    match load(path)? {
        Document::Proof(d) => Ok(d),
        _ => bail!("{} is not a sequent proof", path.display()),
    }
}

pub fn cmd_check(cfg: &Config, path: &Path, calculus: Option<&str>, allow_assumptions: bool) -> Result<(Status, String)> {
    let verdict = |r: Result<(), String>, what: String| match r {
        Ok(()) => (Status::Success, format!("ok: {what}\n")),
        Err(e) => (Status::Negative, format!("rejected: {what}: {e}\n")),
    };
    Ok(match load(path)? {
        Document::Proof(doc) => {
            let calc = match calculus {
                Some(c) => CalculusId::from_name(c).ok_or_else(|| anyhow!("unknown calculus `{c}`"))?,
                None => ilproof::io::calculus_of(&doc)?,
            };
            let what = format!("{} proof of {} nodes under {}", path.display(), doc.nodes.len(), calc.name());
            if doc.nodes.iter().any(|n| n.backlink.is_some()) {
                let cp: CyclicProof = cyclic_from_json(&doc)?;
                verdict(check_cyclic_in(&cp, calc).map_err(|e| e.to_string()), what)
            } else {
                let (p, _) = proof_from_json(&doc)?;
                verdict(check_proof_with(&p, calc, opts(allow_assumptions)).map_err(|e| e.to_string()), what)
            }
        }
        Document::Hilbert(doc) => {
            let (h, logic) = hilbert_from_json(&doc)?;
            let logic = if calculus.is_some() { cfg.logic } else { logic };
            let what = format!("{} Hilbert proof of {} lines in {}", path.display(), h.len(), logic.name().to_uppercase());
            verdict(check_hilbert(&h, logic).map_err(|e| e.to_string()), what)
        }
        Document::Template(doc) => {
            let t = template_from_json(&doc)?;
            let what = format!("{} template of {} nodes", path.display(), t.len());
            verdict(check_template(&t).map_err(|e| e.to_string()), what)
        }
    })
}

pub struct TranslateArgs<'a> {
    pub from: Source,
    pub to: Target,
    pub fuel: usize,
    pub lambda: Option<&'a str>,
    pub out: Option<&'a Path>,
}

fn parse_list(text: &str) -> Result<Vec<Formula>> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| parse(p).map_err(Into::into))
        .collect()
}

fn reprove(p: &Proof) -> Result<Proof> {
    let q = eliminate_cuts_reprove(&p.sequent, p)?;
    recheck_proof(&q, CalculusId::Fgil, false)?;
    Ok(q)
}

fn hilbert_output(cfg: &Config, doc: &JsonHilbert, out: Option<&Path>, summary: String) -> Result<String> {
    let text = pretty(&serde_json::to_value(doc)?);
    if let Some(path) = out {
        write(path, &text)?;
        let back: JsonHilbert = serde_json::from_str(&read(path)?)?;
        let (h, logic) = hilbert_from_json(&back)?;
        check_hilbert(&h, logic).map_err(|e| anyhow!("{} does not check after writing: {e}", path.display()))?;
        return Ok(format!("{summary}\nwritten to {}\n", path.display()));
    }
    Ok(match cfg.format {
        Format::Text => format!("{summary}\n"),
        Format::Json => text,
        Format::Dot => bail!("no DOT rendering for Hilbert proofs"),
    })
}

pub fn cmd_translate(cfg: &Config, path: &Path, a: &TranslateArgs) -> Result<(Status, String)> {
    let text = match (a.from, a.to) {
        (Source::Hilbert, Target::FgilCut | Target::Fgil) => {
            let Document::Hilbert(doc) = load(path)? else {
                bail!("{} is not a Hilbert proof", path.display())
            };
            let (h, logic) = hilbert_from_json(&doc)?;
            if logic != Logic::Il {
                bail!("only IL Hilbert proofs translate to sequent proofs");
            }
            check_hilbert(&h, logic).map_err(|e| anyhow!("input does not check: {e}"))?;
            let mut p = hilbert_to_sequent(&h)?;
            recheck_proof(&p, CalculusId::FgilCut, false)?;
            let mut calc = CalculusId::FgilCut;
            if a.to == Target::Fgil {
                p = reprove(&p)?;
                calc = CalculusId::Fgil;
            }
            let summary = format!("{}: {} proof of {} nodes", p.sequent.print(cfg.sugar), calc.name(), p.node_count());
            proof_output(cfg, &proof_to_json(&p, calc), a.out, false, summary)?
        }
        (Source::Cyclic, Target::Fgil) => {
            let doc = load_proof(path)?;
            let cp = cyclic_from_json(&doc)?;
            let lambda = a.lambda.map(parse_list).transpose()?.unwrap_or_default();
            let p = cyclic_to_fgil(&cp, &lambda)?;
            recheck_proof(&p, CalculusId::Fgil, false)?;
            let summary = format!("{}: fgil proof of {} nodes", p.sequent.print(cfg.sugar), p.node_count());
            proof_output(cfg, &proof_to_json(&p, CalculusId::Fgil), a.out, false, summary)?
        }
        (Source::FgilCut, to) => {
            let (p, calc) = proof_from_json(&load_proof(path)?)?;
            if !matches!(calc, CalculusId::Fgil | CalculusId::FgilCut) {
                bail!("expected an fgil or fgil-cut proof, found {}", calc.name());
            }
            recheck_proof(&p, CalculusId::FgilCut, false).map_err(|_| anyhow!("input does not check under fgil-cut"))?;
            match to {
                Target::GilPrefix => {
                    let q = alpha_prefix(&p, a.fuel)?;
                    recheck_proof(&q, CalculusId::GilCut, true)?;
                    let summary = format!(
                        "{}: gil-cut prefix of {} nodes, {} open assumptions at fuel {}",
                        q.sequent.print(cfg.sugar),
                        q.node_count(),
                        q.assumptions().len(),
                        a.fuel
                    );
                    proof_output(cfg, &proof_to_json(&q, CalculusId::GilCut), a.out, true, summary)?
                }
                Target::Hilbert => {
                    let h = sequent_to_hilbert(&p)?;
                    check_hilbert(&h, Logic::Il).map_err(|e| anyhow!("internal: Hilbert proof fails: {e}"))?;
                    let counts = summary(&h)
                        .into_iter()
                        .map(|(k, n)| format!("{k} {n}"))
                        .collect::<Vec<_>>()
                        .join(", ");
                    let theorem = h.theorem().map(|f| f.print(cfg.sugar)).unwrap_or_default();
                    let summary = format!("{theorem}: Hilbert proof of {} lines ({counts})", h.len());
                    hilbert_output(cfg, &hilbert_to_json(&h, Logic::Il), a.out, summary)?
                }
                Target::Fgil => {
                    let q = reprove(&p)?;
                    let summary = format!("{}: fgil proof of {} nodes", q.sequent.print(cfg.sugar), q.node_count());
                    proof_output(cfg, &proof_to_json(&q, CalculusId::Fgil), a.out, false, summary)?
                }
                Target::FgilCut => bail!("input is already an fgil-cut proof"),
            }
        }
        (from, to) => bail!("no translation from {from:?} to {to:?}"),
    };
    Ok((Status::Success, text))
}

pub fn cmd_cutelim(cfg: &Config, path: &Path, out: Option<&Path>) -> Result<(Status, String)> {
    let (p, calc) = proof_from_json(&load_proof(path)?)?;
    if !matches!(calc, CalculusId::Fgil | CalculusId::FgilCut) {
        bail!("expected an fgil-cut proof, found {}", calc.name());
    }
    let cuts = p.rules().into_iter().filter(|r| r.name() == "Cut").count();
    let q = reprove(&p)?;
    let summary = format!(
        "{}: {cuts} cuts removed, fgil proof of {} nodes",
        q.sequent.print(cfg.sugar),
        q.node_count()
    );
    Ok((Status::Success, proof_output(cfg, &proof_to_json(&q, CalculusId::Fgil), out, false, summary)?))
}

pub struct InterpolateArgs<'a> {
    pub vocab: &'a str,
    pub verify_cap: Option<usize>,
    pub raw: bool,
    pub emit_template: Option<&'a Path>,
}

pub fn cmd_interpolate(cfg: &Config, input: &str, a: &InterpolateArgs) -> Result<(Status, String)> {
    let phi = parse(input)?;
    let v = parse_vocabulary(a.vocab)?;
    let target = match cfg.logic {
        Logic::Il => phi.clone(),
        Logic::Ilp => phi.sharp(),
    };
    let lim = cfg.limits.interpolation();
    let result = interpolate(&target, &v, lim)?;
    if let Some(path) = a.emit_template {
        let doc = template_to_json(&result.template);
        write(path, &pretty(&serde_json::to_value(&doc)?))?;
        let back: JsonTemplate = serde_json::from_str(&read(path)?)?;
        check_template(&template_from_json(&back)?)
            .map_err(|e| anyhow!("{} does not check after writing: {e}", path.display()))?;
    }
    let report = a
        .verify_cap
        .map(|cap| verify_interpolant(&phi, &v, &result.interpolant, cap, cfg.logic, cfg.limits.search()));
    let status = match &report {
        Some(r) if !r.passed() => Status::Negative,
        _ => Status::Success,
    };
    let text = match cfg.format {
        Format::Json => {
            let mut o = json!({
                "formula": phi.print(cfg.sugar),
                "vocabulary": v,
                "logic": cfg.logic.name(),
                "interpolant": result.interpolant.print(cfg.sugar),
                "template_nodes": result.template.len(),
                "equations": result.system.len(),
            });
            if a.raw {
                o["raw"] = json!(result.raw.print(cfg.sugar));
            }
            if let Some(r) = &report {
                o["verification"] = json!({
                    "passed": r.passed(),
                    "vocabulary_ok": r.vocab_ok,
                    "entailed": r.entails,
                    "witnesses": r.checked,
                    "consequences": r.consequences,
                    "failures": r.failures.iter().map(|f| format!("{f:?}")).collect::<Vec<_>>(),
                });
            }
            pretty(&o)
        }
        Format::Dot => bail!("no DOT rendering for interpolants; use --emit-template for the template"),
        Format::Text => {
            let mut t = format!("{}\n", result.interpolant.print(cfg.sugar));
            if a.raw {
                t.push_str(&format!("raw: {}\n", result.raw.print(cfg.sugar)));
            }
            if let Some(r) = &report {
                t.push_str(&format!(
                    "verification {}: {} V-formulas up to the cap, {} consequences, {} failures\n",
                    if r.passed() { "passed" } else { "FAILED" },
                    r.checked,
                    r.consequences,
                    r.failures.len()
                ));
                for f in &r.failures {
                    t.push_str(&format!("  {f:?}\n"));
                }
            }
            t
        }
    };
    Ok((status, text))
}

pub fn cmd_fixpoint(cfg: &Config, input: &str, var: &str) -> Result<(Status, String)> {
    let phi = parse(input)?;
    let psi = fixpoint(&phi, var, cfg.limits.fixpoint())?;
    let eq = Formula::iff(&psi, &phi.substitute_one(var, &psi));
    let certified = cfg.logic.decide(&eq, cfg.limits.search())?;
    let status = if certified { Status::Success } else { Status::Negative };
    let text = match cfg.format {
        Format::Json => pretty(&json!({
            "formula": phi.print(cfg.sugar),
            "var": var,
            "fixpoint": psi.print(cfg.sugar),
            "certified": certified,
        })),
        Format::Dot => formula_dot(&psi, cfg.sugar),
        Format::Text => format!(
            "{}\n{}\n",
            psi.print(cfg.sugar),
            if certified { "certified" } else { "NOT certified" }
        ),
    };
    Ok((status, text))
}

/// Nonblank lines of a batch file that are not `#` comments.
pub fn batch_inputs(path: &PathBuf) -> Result<Vec<String>> {
    Ok(read(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}
