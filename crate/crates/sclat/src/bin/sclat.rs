//! Command-line surface: ingestion, verification, construction,
//! representation and decision over the stable JSON file formats.

use clap::{Parser, Subcommand};
use sclat::asc::AscBase;
use sclat::element::LatticeElement;
use sclat::error::{Error, Result};
use sclat::io;
use sclat::logic::{self, DecideOptions, EnumOptions, ModelBase, SatOptions, Verdict};
use sclat::scaled::{CheckMode, ScaledBase, Substructure};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sclat",
    about = "Finite scaled-lattice toolkit",
    version = concat!(env!("CARGO_PKG_VERSION"), " (formats: sclat/1)")
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for all sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Dump intermediate construction steps to stderr.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a lattice, poset, table or linear-set file.
    Validate {
        file: PathBuf,
        /// Print the canonical form of the document (tables are replaced by
        /// their recovered poset).
        #[arg(long)]
        emit: bool,
    },
    /// Check every axiom scheme over all element tuples.
    Axioms {
        file: PathBuf,
        /// Force sampling with this many tuples (default: exhaustive up to 8
        /// irreducibles).
        #[arg(long)]
        sample: Option<u32>,
    },
    /// Dimensions of an element (default: the top element).
    Dim {
        file: PathBuf,
        /// Element as a maximal antichain, e.g. "x0+y1", or "0"/"1".
        #[arg(long)]
        element: Option<String>,
    },
    /// Evaluate a quantifier-free formula under an assignment.
    Eval {
        file: PathBuf,
        #[arg(long)]
        formula: String,
        /// Bindings var=antichain, e.g. --let x=x0+y1 --let y=0.
        #[arg(long = "let")]
        bindings: Vec<String>,
    },
    /// Enumerate the (counted) signatures of a base.
    Signatures {
        file: PathBuf,
        #[arg(long)]
        asc: bool,
        /// Comma-separated positive counts allowed in asc mode.
        #[arg(long)]
        k_cap: Option<String>,
    },
    /// Apply a signature, printing the extended base and the generators.
    Extend {
        file: PathBuf,
        /// Signature as inline JSON, or @path to a JSON file.
        #[arg(long)]
        signature: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decompose the full lattice over a substructure into primitive steps.
    Tower {
        file: PathBuf,
        /// JSON file {"elements": [[antichain], ...]} describing the inner
        /// substructure; defaults to the prime substructure.
        #[arg(long)]
        inner: Option<PathBuf>,
    },
    /// Embed the base into an extension splitting a along b1, b2.
    Split {
        file: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b1: String,
        #[arg(long)]
        b2: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive catenarity check.
    Catenarity { file: PathBuf },
    /// Linear representation over exact rationals.
    Represent {
        file: PathBuf,
        /// Directory for X.sls.json and phi.map.json.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Linear representation honoring atom counts.
    RepresentAsc {
        file: PathBuf,
        /// Minimum point count for uncounted atoms.
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-verify a representation map produced by represent.
    ValidateEmbedding {
        /// The phi.map.json file, or a directory containing it.
        path: PathBuf,
    },
    /// The substructure generated by the empty set.
    Prime {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Canonical form (lowercase hex).
    Canon { file: PathBuf },
    /// Label-preserving isomorphism of two bases.
    Iso { a: PathBuf, b: PathBuf },
    /// All bases up to isomorphism, as JSON lines.
    Enumerate {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        max_irr: usize,
        #[arg(long)]
        asc: bool,
        #[arg(long)]
        k_cap: Option<String>,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Bounded quantifier-free satisfiability.
    Sat {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        max_irr: Option<usize>,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        asc: bool,
        #[arg(long)]
        k_cap: Option<String>,
    },
    /// Decide a single-block sentence over a prime-determined completion.
    Decide {
        /// Theory selector; the bounded universal theory "Td".
        #[arg(long, default_value = "Td")]
        theory: String,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        formula: String,
        /// Prime base file; defaults to the trivial base.
        #[arg(long)]
        prime: Option<PathBuf>,
        #[arg(long)]
        max_irr: Option<usize>,
        #[arg(long)]
        asc: bool,
        #[arg(long)]
        k_cap: Option<String>,
    },
    /// Elementary equivalence of the completions two bases determine.
    TheoryEq {
        a: PathBuf,
        b: PathBuf,
        /// Compare with atom counts (bases without counts get all-zero).
        #[arg(long)]
        asc: bool,
    },
    /// The irreducible-count bound mu(n, d).
    Mu {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            if cli.json {
                let doc = json!({"error": e.to_string()});
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn load_model(path: &Path) -> Result<ModelBase> {
    io::base_from_json(&read_json(path)?)
}

fn parse_element(base: &ScaledBase, text: &str) -> Result<LatticeElement> {
    match text.trim() {
        "0" => Ok(base.zero()),
        "1" => Ok(base.one()),
        other => {
            let names: Vec<&str> = other.split('+').map(str::trim).collect();
            base.element(&names)
        }
    }
}

fn parse_k_cap(text: &Option<String>) -> Result<Option<BTreeSet<u32>>> {
    match text {
        None => Ok(None),
        Some(s) => {
            let mut out = BTreeSet::new();
            for part in s.split(',') {
                let v: u32 = part
                    .trim()
                    .parse()
                    .map_err(|_| Error::Argument(format!("bad count {part:?} in k-cap")))?;
                out.insert(v);
            }
            Ok(Some(out))
        }
    }
}

fn emit(cli: &Cli, doc: Value, human: impl FnOnce() -> String) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!("{}", human());
    }
}

fn write_or_print(cli: &Cli, output: &Option<PathBuf>, doc: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(doc).unwrap();
    match output {
        Some(path) => {
            std::fs::write(path, text + "\n")?;
            if !cli.json {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.cmd {
        Cmd::Validate { file, emit: do_emit } => {
            let doc = read_json(file)?;
            let (kind, canonical) = match io::detect_from_json(&doc)? {
                io::InputDoc::Base(m) => ("lattice", io::base_to_json(&m)),
                io::InputDoc::Tables(t) => {
                    let poset = sclat::ingest::recover_poset(&t)?;
                    ("tables", io::poset_to_json(&poset))
                }
                io::InputDoc::Poset(p) => ("poset", io::poset_to_json(&p)),
                io::InputDoc::Sls(s) => ("linear-set", io::sls_to_json(&s)),
            };
            if *do_emit {
                println!("{}", serde_json::to_string_pretty(&canonical).unwrap());
            } else {
                emit(cli, json!({"ok": true, "kind": kind}), || {
                    format!("ok: valid {kind} file")
                });
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Axioms { file, sample } => {
            let model = load_model(file)?;
            let mode = match sample {
                Some(t) => CheckMode::Sample {
                    tuples: *t,
                    seed: cli.seed,
                },
                None => CheckMode::Auto { seed: cli.seed },
            };
            let report = model.scaled().check_axioms(mode)?;
            let asc_report = match model.asc() {
                Some(a) => Some(a.check_asc_axioms(mode)?),
                None => None,
            };
            let mut doc = serde_json::to_value(&report)?;
            if let Some(ar) = &asc_report {
                doc["asc"] = serde_json::to_value(ar)?;
            }
            emit(cli, doc, || {
                let mut lines = Vec::new();
                let fmt = |name: &str, pass: bool| {
                    format!("{name:30} {}", if pass { "pass" } else { "FAIL" })
                };
                for v in &report.verdicts {
                    lines.push(fmt(&v.name, v.pass));
                }
                if let Some(ar) = &asc_report {
                    for v in &ar.verdicts {
                        lines.push(fmt(&v.name, v.pass));
                    }
                    lines.push(format!("standard: {}", ar.standard));
                }
                lines.push(format!(
                    "classification: {}",
                    if report.scaled { "scaled" } else { "subscaled only" }
                ));
                lines.push(format!("exhaustive: {}", report.exhaustive));
                lines.join("\n")
            });
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Dim { file, element } => {
            let model = load_model(file)?;
            let base = model.scaled();
            let e = match element {
                Some(t) => parse_element(base, t)?,
                None => base.one(),
            };
            let dim = e.dim();
            let scdim = base.scdim(&e)?;
            // The strong-below chain search is exhaustive; on wide elements
            // report the two cheap dimensions and skip the cross-check.
            let via_ll = match e.dim_via_ll() {
                Ok(v) => Some(v),
                Err(Error::TooLarge(_)) => None,
                Err(e) => return Err(e),
            };
            emit(
                cli,
                json!({"dim": dim, "scdim": scdim, "dim_via_strong_below": via_ll}),
                || {
                    let ll = via_ll
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "skipped (too many points)".into());
                    format!("dim = {dim}, scdim = {scdim}, dim via strong-below chains = {ll}")
                },
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Eval {
            file,
            formula,
            bindings,
        } => {
            let model = load_model(file)?;
            let f = sclat::formula::parse_formula(formula)?;
            let mut assign = std::collections::BTreeMap::new();
            for b in bindings {
                let (var, val) = b
                    .split_once('=')
                    .ok_or_else(|| Error::Argument(format!("binding {b:?} is not var=antichain")))?;
                assign.insert(var.trim().to_string(), parse_element(model.scaled(), val)?);
            }
            let value = logic::eval_formula(&model, &assign, &f)?;
            emit(cli, json!({"value": value}), || value.to_string());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Signatures { file, asc, k_cap } => {
            let model = load_model(file)?;
            let base = model.scaled();
            let docs: Vec<Value> = if *asc {
                let ab = model
                    .asc()
                    .cloned()
                    .unwrap_or_else(|| AscBase::from_scaled(base.clone()));
                let cap = match parse_k_cap(k_cap)? {
                    Some(c) => c,
                    None => {
                        let hi = ab.weights().iter().copied().max().unwrap_or(0) + 1;
                        (0..=hi).collect()
                    }
                };
                sclat::enumerate_asc_signatures(&ab, &cap)?
                    .iter()
                    .map(|s| io::asc_signature_to_json(base, &s.sig, s.k1, s.k2))
                    .collect::<Result<_>>()?
            } else {
                sclat::enumerate_signatures(base)?
                    .iter()
                    .map(|s| io::signature_to_json(base, s))
                    .collect::<Result<_>>()?
            };
            emit(cli, json!({"signatures": docs}), || {
                docs.iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Extend {
            file,
            signature,
            output,
        } => {
            let model = load_model(file)?;
            let base = model.scaled();
            let sig_doc: Value = if let Some(path) = signature.strip_prefix('@') {
                read_json(Path::new(path))?
            } else {
                serde_json::from_str(signature)?
            };
            let sig = io::signature_from_json(base, &sig_doc)?;
            let doc = match (&model, io::k_values_from_json(&sig_doc)?) {
                (ModelBase::Asc(ab), Some((k1, k2))) => {
                    let asig = sclat::AscSignature::new(sig, k1, k2);
                    let ext = sclat::apply_asc_signature(ab, &asig)?;
                    json!({
                        "base": io::base_to_json(&ModelBase::Asc(ext.target.clone())),
                        "x1": ext.ext.x1.maximals(),
                        "x2": ext.ext.x2.maximals(),
                    })
                }
                (_, Some(_)) => {
                    return Err(Error::Argument(
                        "K values need a base with atom counts".into(),
                    ))
                }
                (_, None) => {
                    let ext = sclat::apply_signature(base, &sig)?;
                    json!({
                        "base": io::scaled_to_json(&ext.map.target),
                        "x1": ext.x1.maximals(),
                        "x2": ext.x2.maximals(),
                    })
                }
            };
            write_or_print(cli, output, &doc)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Tower { file, inner } => {
            let model = load_model(file)?;
            let base = model.scaled();
            let sub = match inner {
                None => base.prime_substructure()?,
                Some(path) => {
                    let doc = read_json(path)?;
                    let arrays = doc
                        .get("elements")
                        .and_then(Value::as_array)
                        .ok_or_else(|| Error::IllFormed("inner file needs elements".into()))?;
                    let elems: Vec<LatticeElement> = arrays
                        .iter()
                        .map(|a| {
                            let names: Vec<String> = serde_json::from_value(a.clone())?;
                            base.element(&names)
                        })
                        .collect::<Result<_>>()?;
                    Substructure::verified(base, &elems)?
                }
            };
            let steps = sclat::tower_decompose(base, &sub)?;
            let mut docs = Vec::new();
            let mut prev = sub;
            for step in &steps {
                // Express the signature in the abstract presentation of the
                // sublattice it extends.
                let g_names = prev.project(&step.signature.g)?.maximals();
                let h1 = prev.project(&step.signature.h1)?.maximals();
                let h2 = prev.project(&step.signature.h2)?.maximals();
                if cli.trace {
                    eprintln!(
                        "step: adjoin {:?} with signature (g={:?}, H=[{:?}, {:?}], q={})",
                        step.x1.maximals(),
                        g_names,
                        h1,
                        h2,
                        step.signature.q
                    );
                }
                docs.push(json!({
                    "signature": {
                        "g": g_names.first().cloned().unwrap_or_default(),
                        "H": [h1, h2],
                        "q": step.signature.q,
                    },
                    "x1": step.x1.maximals(),
                    "x2": step.x2.maximals(),
                    "base": io::scaled_to_json(&step.sub.induced.base),
                }));
                prev = Substructure::verified(base, &step.sub.elements())?;
            }
            emit(cli, json!({"format": io::FORMAT_TAG, "steps": docs}), || {
                format!("{} primitive step(s)", docs.len())
            });
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Split {
            file,
            a,
            b1,
            b2,
            output,
        } => {
            let model = load_model(file)?;
            let base = model.scaled();
            let split = sclat::splitting_extension(
                base,
                &parse_element(base, a)?,
                &parse_element(base, b1)?,
                &parse_element(base, b2)?,
            )?;
            if cli.trace {
                for line in &split.trace {
                    eprintln!("{line}");
                }
            }
            let doc = json!({
                "base": io::scaled_to_json(&split.map.target),
                "a1": split.a1.maximals(),
                "a2": split.a2.maximals(),
            });
            write_or_print(cli, output, &doc)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Catenarity { file } => {
            let model = load_model(file)?;
            let report = sclat::check_catenarity(model.scaled())?;
            emit(cli, serde_json::to_value(&report)?, || {
                if report.pass {
                    "catenary".to_string()
                } else {
                    format!("not catenary: {:?}", report.witness)
                }
            });
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Represent { file, output } => {
            let model = load_model(file)?;
            let rep = sclat::represent(model.scaled())?;
            finish_representation(cli, rep, output)
        }
        Cmd::RepresentAsc { file, n, output } => {
            let model = load_model(file)?;
            let ab = model
                .asc()
                .cloned()
                .unwrap_or_else(|| AscBase::from_scaled(model.scaled().clone()));
            let rep = sclat::represent_asc(&ab, *n)?;
            finish_representation(cli, rep, output)
        }
        Cmd::ValidateEmbedding { path } => {
            let map_path = if path.is_dir() {
                path.join("phi.map.json")
            } else {
                path.clone()
            };
            let doc = read_json(&map_path)?;
            let base = match io::base_from_json(
                doc.get("base")
                    .ok_or_else(|| Error::IllFormed("map file needs base".into()))?,
            )? {
                ModelBase::Sc(b) => b,
                ModelBase::Asc(a) => a.base().clone(),
            };
            let mut pairs = Vec::new();
            for entry in doc
                .get("map")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::IllFormed("map file needs map".into()))?
            {
                let names: Vec<String> = serde_json::from_value(
                    entry
                        .get("element")
                        .cloned()
                        .ok_or_else(|| Error::IllFormed("map entry needs element".into()))?,
                )?;
                let image = io::sls_from_json(
                    entry
                        .get("image")
                        .ok_or_else(|| Error::IllFormed("map entry needs image".into()))?,
                )?;
                pairs.push((base.element(&names)?, image));
            }
            let carrier = pairs
                .iter()
                .find(|(e, _)| *e == base.one())
                .map(|(_, s)| s.clone())
                .ok_or_else(|| Error::IllFormed("map misses the top element".into()))?;
            let report = sclat::embed_check(&base, &sclat::SlsLattice { carrier }, &pairs)?;
            emit(cli, serde_json::to_value(&report)?, || {
                if report.embedding {
                    "embedding verified".to_string()
                } else {
                    format!("NOT an embedding: {:?}", report.failures)
                }
            });
            Ok(if report.embedding {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Prime { file, output } => {
            let model = load_model(file)?;
            let doc = match &model {
                ModelBase::Sc(b) => {
                    let prime = b.prime_substructure()?;
                    json!({
                        "base": io::scaled_to_json(&prime.induced.base),
                        "elements": prime
                            .elements()
                            .iter()
                            .map(|e| e.maximals())
                            .collect::<Vec<_>>(),
                    })
                }
                ModelBase::Asc(a) => {
                    let (sub, induced) = a.prime_substructure()?;
                    json!({
                        "base": io::base_to_json(&ModelBase::Asc(induced)),
                        "elements": sub
                            .elements()
                            .iter()
                            .map(|e| e.maximals())
                            .collect::<Vec<_>>(),
                    })
                }
            };
            write_or_print(cli, output, &doc)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Canon { file } => {
            let model = load_model(file)?;
            let h = hex(&model.canonical_form());
            emit(cli, json!({"canonical": h}), || h.clone());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Iso { a, b } => {
            let ma = load_model(a)?;
            let mb = load_model(b)?;
            let iso = match (&ma, &mb) {
                (ModelBase::Sc(x), ModelBase::Sc(y)) => x.is_isomorphic(y),
                (ModelBase::Asc(x), ModelBase::Asc(y)) => x.is_isomorphic(y),
                _ => false,
            };
            emit(cli, json!({"isomorphic": iso}), || iso.to_string());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Enumerate {
            d,
            max_irr,
            asc,
            k_cap,
            count,
        } => {
            let mut opts = EnumOptions::new(*d, *max_irr);
            opts.asc = *asc;
            opts.k_cap = parse_k_cap(k_cap)?.unwrap_or_else(|| [1].into_iter().collect());
            let bases = logic::enumerate_bases(&opts)?;
            if *count {
                emit(cli, json!({"count": bases.len()}), || bases.len().to_string());
            } else {
                for b in &bases {
                    println!("{}", io::base_to_json(b));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sat {
            d,
            formula,
            max_irr,
            bound,
            asc,
            k_cap,
        } => {
            let f = sclat::formula::parse_formula(formula)?;
            let mut opts = SatOptions::new(*d);
            if let Some(m) = max_irr {
                opts.irr_ceiling = *m;
            }
            opts.bound_override = *bound;
            opts.asc = *asc;
            opts.k_cap = parse_k_cap(k_cap)?;
            let out = logic::sat_qf(&f, &opts)?;
            emit_outcome(cli, &out)
        }
        Cmd::Decide {
            theory,
            d,
            formula,
            prime,
            max_irr,
            asc,
            k_cap,
        } => {
            if theory != "Td" {
                return Err(Error::Argument(format!(
                    "unknown theory {theory:?}; supported: Td"
                )));
            }
            let sentence = sclat::formula::parse_sentence(formula)?;
            let prime_model = match prime {
                Some(path) => {
                    let m = load_model(path)?;
                    if *asc {
                        ModelBase::Asc(match m {
                            ModelBase::Asc(a) => a,
                            ModelBase::Sc(b) => AscBase::from_scaled(b),
                        })
                    } else {
                        m
                    }
                }
                None => {
                    let t = ScaledBase::trivial(*d);
                    if *asc {
                        ModelBase::Asc(AscBase::from_scaled(t))
                    } else {
                        ModelBase::Sc(t)
                    }
                }
            };
            let mut opts = DecideOptions::new(*d);
            if let Some(m) = max_irr {
                opts.sat.irr_ceiling = *m;
            }
            opts.sat.asc = *asc;
            opts.sat.k_cap = parse_k_cap(k_cap)?;
            let out = logic::decide_sentence(&prime_model, &sentence, &opts)?;
            emit_outcome(cli, &out)
        }
        Cmd::TheoryEq { a, b, asc } => {
            let coerce = |m: ModelBase| -> ModelBase {
                if *asc {
                    ModelBase::Asc(match m {
                        ModelBase::Asc(x) => x,
                        ModelBase::Sc(x) => AscBase::from_scaled(x),
                    })
                } else {
                    ModelBase::Sc(match m {
                        ModelBase::Sc(x) => x,
                        ModelBase::Asc(x) => x.base().clone(),
                    })
                }
            };
            let eq = logic::theory_equal(&coerce(load_model(a)?), &coerce(load_model(b)?))?;
            emit(cli, json!({"equivalent": eq}), || eq.to_string());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Mu { n, d } => {
            let value = logic::mu(*n, *d)?;
            emit(cli, json!({"mu": value.to_string()}), || value.to_string());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn finish_representation(
    cli: &Cli,
    rep: sclat::Representation,
    output: &Option<PathBuf>,
) -> Result<ExitCode> {
    if cli.trace {
        for line in &rep.trace {
            eprintln!("{line}");
        }
    }
    let x_doc = io::sls_to_json(&rep.x);
    let map_doc = io::representation_to_json(&rep);
    match output {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(
                dir.join("X.sls.json"),
                serde_json::to_string_pretty(&x_doc).unwrap() + "\n",
            )?;
            std::fs::write(
                dir.join("phi.map.json"),
                serde_json::to_string_pretty(&map_doc).unwrap() + "\n",
            )?;
            if !cli.json {
                println!("wrote {}", dir.display());
            }
        }
        None => {
            let doc = json!({"x": x_doc, "phi": map_doc});
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_outcome(cli: &Cli, out: &logic::DecisionOutcome) -> Result<ExitCode> {
    let doc = io::outcome_to_json(out);
    emit(cli, doc, || {
        let mut s = format!(
            "{:?} (bound {}, {})",
            out.verdict,
            out.bound_used,
            if out.exhaustive {
                "exhaustive"
            } else {
                "bound-capped"
            }
        );
        if let Some(w) = &out.witness {
            s.push_str(&format!(
                "\nwitness base on {} irreducible(s); assignment: {:?}",
                w.base.scaled().poset().len(),
                w.assignment
            ));
        }
        s
    });
    // 0 when decided, 2 when the verdict is only bound-capped.
    Ok(if out.exhaustive {
        ExitCode::SUCCESS
    } else {
        match out.verdict {
            Verdict::Sat => ExitCode::SUCCESS,
            _ => ExitCode::from(2),
        }
    })
}
