//! Command-line front end: argument parsing, job configuration, JSON/DOT/CSV output and caching.

use crate::error::{Error, Result};
use crate::liecore::{RootDatum, TcElement};
use crate::orbit::{birkhoff_normalize, centralizer, classify_marked, classify_unmarked, marking_filtration};
use crate::parab::{
    b_pairing_matrix, check_admissible, enumerate_parabolic, enumerate_parabolic_filtrations, is_nonsingular,
    parabolic_orbit_count, ParabolicFiltration, ParabolicSubset,
};
use crate::quant::StarProduct;
use crate::rational::{fmt_q, fmt_vec, parse_q, Q};
use crate::singmod::{conjecture_probe, factorize_block, truncated_quotient_proper, SingularityModule};
use crate::strat::{dual_stratum_of_covector, enumerate_filtrations, enumerate_levi, weyl_quotient, LeviPoset, RootSubset, WeylGroup};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

/// Exact stratifications, normal forms, singularity modules and star products.
#[derive(Parser, Debug)]
#[command(name = "wildstrat", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Root datum, e.g. `gl3`, `sl2`, `B2`.
    #[arg(long = "type", global = true)]
    pub ty: Option<String>,
    /// Truncation depth `r` (or filtration depth `s`).
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Height bound `K`.
    #[arg(long, global = true)]
    pub height: Option<usize>,
    /// ℏ truncation order `N`.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Parabolic filtration: `borel`, `full`, or a JSON list of root-index lists.
    #[arg(long, global = true)]
    pub filtration: Option<String>,
    /// Formal type: degrees separated by `;`, Cartan coordinates by `,`, e.g. `3,1;0,2`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Element of `g_r` as `deg:name:coeff` terms separated by `;`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub element: Option<String>,
    /// Second element for classification.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub other: Option<String>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write a DOT diagram (levi) or a CSV determinant table (shapovalov) here.
    #[arg(long, global = true)]
    pub aux: Option<PathBuf>,
    /// Random seed for sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// JSON configuration file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Subcommands.
#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Levi poset (and depth-s filtrations with their Weyl quotient).
    Levi,
    /// Parabolic subsets and parabolic filtrations.
    Parabolic,
    /// Birkhoff normal form, stratum and centraliser of an element.
    Classify,
    /// Admissibility, B-pairing and nonsingularity of a formal type.
    Character,
    /// Shapovalov blocks with ranks, determinants and factorisations.
    Shapovalov,
    /// Radical profile, truncated quotients and the simplicity probe.
    Simplicity,
    /// Inverse Shapovalov series, Poisson check and associativity.
    Quantize,
}

/// A job configuration file; every field is optional and rationals are `"p/q"` strings.
#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(rename = "type")]
    pub ty: Option<String>,
    pub depth: Option<usize>,
    pub height: Option<usize>,
    pub order: Option<usize>,
    pub filtration: Option<Value>,
    pub lambda: Option<Vec<Vec<String>>>,
    pub element: Option<Vec<(usize, String, String)>>,
    pub other: Option<Vec<(usize, String, String)>>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

/// Fully resolved job parameters.
#[derive(Debug, Clone)]
pub struct Job {
    pub command: Command,
    pub rd: RootDatum,
    pub ty: String,
    pub depth: Option<usize>,
    pub height: usize,
    pub order: usize,
    pub filtration: Option<Value>,
    pub lambda: Option<Vec<Vec<Q>>>,
    pub element: Option<Vec<(usize, String, Q)>>,
    pub other: Option<Vec<(usize, String, Q)>>,
    pub seed: u64,
}

fn parse_lambda(s: &str) -> Result<Vec<Vec<Q>>> {
    s.split(';').map(|deg| deg.split(',').map(parse_q).collect()).collect()
}

fn parse_element(s: &str) -> Result<Vec<(usize, String, Q)>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let parts: Vec<&str> = t.trim().splitn(3, ':').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("term `{t}` is not deg:name:coeff")));
            }
            let deg = parts[0].parse().map_err(|_| Error::Parse(format!("bad degree in `{t}`")))?;
            Ok((deg, parts[1].to_string(), parse_q(parts[2])?))
        })
        .collect()
}

fn config_terms(v: &[(usize, String, String)]) -> Result<Vec<(usize, String, Q)>> {
    v.iter().map(|(d, n, c)| Ok((*d, n.clone(), parse_q(c)?))).collect()
}

impl Job {
    /// Merges command-line flags over an optional configuration file and validates the result.
    pub fn resolve(command: Command, a: &CommonArgs) -> Result<Job> {
        let cfg: JobConfig = match &a.config {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| Error::Validation(format!("cannot read {}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| Error::Validation(format!("bad config: {e}")))?
            }
            None => JobConfig::default(),
        };
        let ty = a.ty.clone().or(cfg.ty).ok_or_else(|| Error::Validation("--type is required".into()))?;
        let rd = RootDatum::from_name(&ty)?;
        let lambda = match (&a.lambda, &cfg.lambda) {
            (Some(s), _) => Some(parse_lambda(s)?),
            (None, Some(v)) => Some(v.iter().map(|d| d.iter().map(|x| parse_q(x)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?),
            _ => None,
        };
        let element = match (&a.element, &cfg.element) {
            (Some(s), _) => Some(parse_element(s)?),
            (None, Some(v)) => Some(config_terms(v)?),
            _ => None,
        };
        let other = match (&a.other, &cfg.other) {
            (Some(s), _) => Some(parse_element(s)?),
            (None, Some(v)) => Some(config_terms(v)?),
            _ => None,
        };
        let filtration = match (&a.filtration, cfg.filtration) {
            (Some(s), _) if s.trim_start().starts_with('[') => {
                Some(serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad filtration: {e}")))?)
            }
            (Some(s), _) => Some(Value::String(s.clone())),
            (None, f) => f,
        };
        let job = Job {
            command,
            ty,
            depth: a.depth.or(cfg.depth),
            height: a.height.or(cfg.height).unwrap_or(4),
            order: a.order.or(cfg.order).unwrap_or(2),
            filtration,
            lambda,
            element,
            other,
            seed: a.seed.or(cfg.seed).unwrap_or(0),
            rd,
        };
        if let Some(w) = a.workers.or(cfg.workers) {
            if w == 0 {
                return Err(Error::Validation("--workers must be positive".into()));
            }
            // A second initialisation in the same process is harmless; the first pool stays.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
        }
        if job.depth == Some(0) && command != Command::Levi {
            return Err(Error::Validation("--depth must be positive".into()));
        }
        Ok(job)
    }

    /// Canonical description used as the cache key.
    pub fn cache_key(&self) -> String {
        let lam = self.lambda.as_ref().map(|l| l.iter().map(|v| fmt_vec(v)).collect::<Vec<_>>());
        let term = |v: &Option<Vec<(usize, String, Q)>>| {
            v.as_ref().map(|v| v.iter().map(|(d, n, c)| (*d, n.clone(), fmt_q(c))).collect::<Vec<_>>())
        };
        let key = json!({
            "command": format!("{:?}", self.command),
            "type": self.ty,
            "depth": self.depth,
            "height": self.height,
            "order": self.order,
            "filtration": self.filtration,
            "lambda": lam,
            "element": term(&self.element),
            "other": term(&self.other),
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
        });
        let digest = Sha256::digest(key.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn lambdas(&self) -> Result<Vec<Vec<Q>>> {
        let l = self.lambda.clone().ok_or_else(|| Error::Validation("--lambda is required".into()))?;
        let nt = self.rd.cartan_dim();
        if let Some(bad) = l.iter().find(|v| v.len() != nt) {
            return Err(Error::Validation(format!("each λ_i needs {nt} Cartan coordinates, got {}", bad.len())));
        }
        Ok(l)
    }

    fn parabolic_filtration(&self, r: usize) -> Result<ParabolicFiltration> {
        let rd = &self.rd;
        match &self.filtration {
            None => Ok(ParabolicFiltration::constant(ParabolicSubset::borel(rd), r)),
            Some(Value::String(s)) if s == "borel" => Ok(ParabolicFiltration::constant(ParabolicSubset::borel(rd), r)),
            Some(Value::String(s)) if s == "full" => Ok(ParabolicFiltration::constant(ParabolicSubset::full(rd), r)),
            Some(Value::Array(terms)) => {
                let lists: Vec<RootSubset> = terms
                    .iter()
                    .map(|t| {
                        let idx: Vec<usize> = serde_json::from_value(t.clone()).map_err(|e| Error::Parse(format!("bad filtration term: {e}")))?;
                        if let Some(&k) = idx.iter().find(|&&k| k >= rd.num_roots()) {
                            return Err(Error::Validation(format!("root index {k} out of range")));
                        }
                        Ok(RootSubset::from_indices(idx))
                    })
                    .collect::<Result<_>>()?;
                if lists.len() != r {
                    return Err(Error::Validation(format!("filtration has {} terms but λ has depth {r}", lists.len())));
                }
                ParabolicFiltration::new(rd, &lists)
            }
            Some(v) => Err(Error::Validation(format!("unknown filtration {v}"))),
        }
    }

    fn element_of(&self, terms: &[(usize, String, Q)]) -> Result<TcElement> {
        let r = self.depth.or_else(|| terms.iter().map(|t| t.0 + 1).max()).unwrap_or(1);
        let mut x = TcElement::zero(self.rd.dim(), r);
        for (d, n, c) in terms {
            if *d >= r {
                return Err(Error::Validation(format!("degree {d} exceeds depth {r}")));
            }
            let b = self.rd.basis_index(n).ok_or_else(|| Error::Validation(format!("unknown basis element {n}")))?;
            x.coeffs[*d].coords[b] += c;
        }
        Ok(x)
    }
}

fn qs(v: &[Q]) -> Vec<String> {
    fmt_vec(v)
}

fn element_json(rd: &RootDatum, x: &TcElement) -> Value {
    let mut terms = Vec::new();
    for (d, c) in x.coeffs.iter().enumerate() {
        for (b, v) in c.coords.iter().enumerate() {
            if !num_traits::Zero::is_zero(v) {
                terms.push(json!([d, rd.basis_name(b), fmt_q(v)]));
            }
        }
    }
    Value::Array(terms)
}

fn matrix_json(rows: &[Vec<Q>]) -> Value {
    json!(rows.iter().map(|r| qs(r)).collect::<Vec<_>>())
}

/// Output of a subcommand: the JSON document and an optional auxiliary text file.
pub struct Output {
    pub json: Value,
    pub aux: Option<String>,
}

fn cmd_levi(job: &Job) -> Result<Output> {
    let rd = &job.rd;
    let w = WeylGroup::new(rd);
    let levis = enumerate_levi(rd, &w);
    let poset = LeviPoset::new(rd, &levis);
    let mut out = json!({
        "type": job.ty,
        "nodes": poset.elements.len(),
        "ranks": poset.ranks,
        "covers": poset.covers,
        "graded": poset.is_graded(),
        "elements": poset.elements.iter().map(|p| p.indices()).collect::<Vec<_>>(),
    });
    if let Some(s) = job.depth {
        let family = enumerate_filtrations(&levis, s);
        let quotient = weyl_quotient(rd, &w, &family, 4, job.seed);
        out["depth"] = json!(s);
        out["filtrations"] = json!(family.len());
        out["bound"] = json!(w.order() * (s + 1).pow(rd.rank() as u32));
        out["quotient_classes"] = json!(quotient.classes.len());
        out["stabilizers"] = json!(quotient
            .classes
            .iter()
            .map(|c| json!({"filtration": c.representative.to_lists(), "stabilizer_order": c.setwise_stabilizer, "out_order": c.out_order}))
            .collect::<Vec<_>>());
    }
    Ok(Output { json: out, aux: Some(poset.to_dot(&job.ty)) })
}

fn cmd_parabolic(job: &Job) -> Result<Output> {
    let rd = &job.rd;
    let w = WeylGroup::new(rd);
    let family = enumerate_parabolic(rd, &w);
    let mut out = json!({
        "type": job.ty,
        "count": family.len(),
        "orbit_count": parabolic_orbit_count(&w, &family),
        "subsets": family.iter().map(|p| p.roots.indices()).collect::<Vec<_>>(),
    });
    if let Some(r) = job.depth {
        let filtrations = enumerate_parabolic_filtrations(&family, r);
        out["depth"] = json!(r);
        out["filtrations"] = json!(filtrations.len());
        out["balanced"] = json!(filtrations.iter().filter(|f| f.is_balanced(rd)).count());
    }
    Ok(Output { json: out, aux: None })
}

fn cmd_classify(job: &Job) -> Result<Output> {
    let rd = &job.rd;
    let terms = job.element.as_ref().ok_or_else(|| Error::Validation("--element is required".into()))?;
    let x = job.element_of(terms)?;
    let bnf = birkhoff_normalize(rd, &x)?;
    let mut out = json!({
        "input": element_json(rd, &x),
        "depth": x.depth(),
        "strictness": bnf.strictness,
        "normal_form": element_json(rd, &bnf.normal),
        "gauge_log": element_json(rd, &bnf.gauge_log),
    });
    let marked = x.coeffs.iter().take(x.depth().saturating_sub(1)).all(|c| rd.is_cartan(c));
    if marked {
        match centralizer(rd, &x) {
            Ok(c) => {
                out["centralizer"] = json!({"dim": c.dim, "predicted_dim": c.predicted_dim, "matches": c.matches,
                    "basis": c.basis.iter().map(|b| element_json(rd, b)).collect::<Vec<_>>()});
                out["filtration"] = json!(c.filtration.to_lists());
            }
            Err(Error::Precondition(m)) => out["centralizer"] = json!({"skipped": m}),
            Err(e) => return Err(e),
        }
        if x.coeffs.iter().all(|c| rd.is_cartan(c)) {
            out["marking_filtration"] = json!(marking_filtration(rd, &x)?.to_lists());
        }
    }
    if let Some(t) = &job.other {
        let y = job.element_of(t)?;
        let w = WeylGroup::new(rd);
        out["same_marked_stratum"] = json!(classify_marked(rd, &x, &y)?);
        out["same_weyl_class"] = json!(classify_unmarked(rd, &w, &x, &y)?);
    }
    Ok(Output { json: out, aux: None })
}

fn cmd_character(job: &Job) -> Result<Output> {
    let rd = &job.rd;
    let l = job.lambdas()?;
    let psi = job.parabolic_filtration(l.len())?;
    check_admissible(rd, &psi, &l)?;
    let b = b_pairing_matrix(rd, &psi, &l)?;
    let dual = dual_stratum_of_covector(rd, &l);
    Ok(Output {
        json: json!({
            "type": job.ty,
            "filtration": psi.to_lists(),
            "balanced": psi.is_balanced(rd),
            "b_matrix": matrix_json(&b.to_rows()),
            "nonsingular": is_nonsingular(rd, &psi, &l)?,
            "dual_stratum": dual.to_lists(),
        }),
        aux: None,
    })
}

fn cmd_shapovalov(job: &Job) -> Result<Output> {
    let rd = &job.rd;
    let l = job.lambdas()?;
    let psi = job.parabolic_filtration(l.len())?;
    let m = SingularityModule::new(rd, &psi, &l)?;
    let nonsingular = is_nonsingular(rd, &psi, &l)?;
    let dilated = if nonsingular { Some(SingularityModule::dilated(rd, &psi, &l)?) } else { None };
    let dual = dilated.as_ref().map(|d| d.dual_basis()).transpose()?;
    let mut blocks = Vec::new();
    let mut csv = String::from("weight,height,dim,rank,determinant\n");
    for ws in m.weight_spaces(job.height) {
        let a = m.shapovalov_block(&ws);
        let mat = crate::linalg::Matrix::from_rows(&a);
        let (rank, det) = (mat.rank(), mat.det());
        let mut entry = json!({
            "weight": ws.weight,
            "height": ws.height,
            "dim": ws.basis.len(),
            "basis": ws.basis,
            "matrix": matrix_json(&a),
            "rank": rank,
            "radical_dim": ws.basis.len() - rank,
            "determinant": fmt_q(&det),
        });
        if let (Some(d), Some(dual)) = (&dilated, &dual) {
            let block = d.dual_block(&ws, dual);
            let f = factorize_block(&block)?;
            entry["factorisation"] = json!({
                "d": qs(&f.d),
                "l": f.l,
                "c": matrix_json(&f.c.to_rows()),
                "dual_matrix": block.matrix.iter().map(|r| r.iter().map(|p| qs(p.coeffs())).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
        }
        let w: Vec<String> = ws.weight.iter().map(|x| x.to_string()).collect();
        csv.push_str(&format!("{},{},{},{},{}\n", w.join(" "), ws.height, ws.basis.len(), rank, fmt_q(&det)));
        blocks.push(entry);
    }
    Ok(Output { json: json!({"type": job.ty, "height": job.height, "nonsingular": nonsingular, "letters": m.letters, "blocks": blocks}), aux: Some(csv) })
}

fn cmd_simplicity(job: &Job) -> Result<Output> {
    let rd = &job.rd;
    let l = job.lambdas()?;
    let psi = job.parabolic_filtration(l.len())?;
    let m = SingularityModule::new(rd, &psi, &l)?;
    let profile = m.maximal_submodule_profile(job.height);
    let probe = conjecture_probe(rd, &psi, &l, job.height)?;
    let quotients: Vec<Value> = (1..l.len())
        .map(|k| {
            Ok(json!({"k": k, "proper": truncated_quotient_proper(&l, k)?, "saturation_proper": m.truncated_quotient_saturation(k, job.height)}))
        })
        .collect::<Result<_>>()?;
    Ok(Output {
        json: json!({
            "type": job.ty,
            "height": job.height,
            "simple_up_to_height": profile.is_simple(),
            "profile": profile.blocks.iter().map(|(w, h, d, r)| json!({"weight": w, "height": h, "dim": d, "radical_dim": r})).collect::<Vec<_>>(),
            "probe": probe,
            "truncated_quotients": quotients,
        }),
        aux: None,
    })
}

fn cmd_quantize(job: &Job) -> Result<Output> {
    let rd = &job.rd;
    let l = job.lambdas()?;
    let psi = job.parabolic_filtration(l.len())?;
    let k = job.height.max(job.order);
    let sp = StarProduct::new(rd, &psi, &l, k, job.order)?;
    let report = sp.associativity();
    Ok(Output {
        json: json!({
            "type": job.ty,
            "order": job.order,
            "height": k,
            "series": sp.series(),
            "poisson_bivector": sp.poisson_bivector(),
            "first_order_check": sp.first_order_check(),
            "associativity": report,
        }),
        aux: None,
    })
}

/// Runs one job and returns its output.
pub fn execute(job: &Job) -> Result<Output> {
    match job.command {
        Command::Levi => cmd_levi(job),
        Command::Parabolic => cmd_parabolic(job),
        Command::Classify => cmd_classify(job),
        Command::Character => cmd_character(job),
        Command::Shapovalov => cmd_shapovalov(job),
        Command::Simplicity => cmd_simplicity(job),
        Command::Quantize => cmd_quantize(job),
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))
}

/// Exit code for an error: 3 for claim violations, 2 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ClaimViolation(_) => 3,
        _ => 2,
    }
}

/// Parses arguments, runs the job (through the cache if `WILDSTRAT_CACHE_DIR` is set) and writes output.
pub fn run(cli: Cli) -> Result<()> {
    let job = Job::resolve(cli.command, &cli.common)?;
    let cache = std::env::var_os("WILDSTRAT_CACHE_DIR").map(PathBuf::from);
    let key = job.cache_key();
    let cached = cache.as_ref().and_then(|d| fs::read_to_string(d.join(format!("{key}.json"))).ok());
    let (text, aux) = match cached {
        Some(t) => (t, cache.as_ref().and_then(|d| fs::read_to_string(d.join(format!("{key}.aux"))).ok())),
        None => {
            let out = execute(&job)?;
            let text = serde_json::to_string_pretty(&out.json).map_err(|e| Error::Validation(e.to_string()))? + "\n";
            if let Some(d) = &cache {
                fs::create_dir_all(d).map_err(|e| Error::Validation(format!("cannot create cache: {e}")))?;
                write_text(&d.join(format!("{key}.json")), &text)?;
                if let Some(a) = &out.aux {
                    write_text(&d.join(format!("{key}.aux")), a)?;
                }
            }
            (text, out.aux)
        }
    };
    match &cli.common.out {
        Some(p) => write_text(p, &text)?,
        None => print!("{text}"),
    }
    if let (Some(p), Some(a)) = (&cli.common.aux, aux) {
        write_text(p, &a)?;
    }
    Ok(())
}
