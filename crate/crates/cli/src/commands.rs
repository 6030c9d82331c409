use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use galrep::algebra::gfpoly::set_factor_seed;
use galrep::constructions::{
    family_chain_check, parse_conditions, raise_sieve, realization_scan, sieve_density_report,
    td_certificate, ChainManifest, Check, ConstructionError, Outcome, RaiseQuery,
};
use galrep::galois_image::{
    classify_image, detect_cm, detect_inner_twists, noit_checklist, ImageClassification,
    InnerTwistReport, ReductionContext,
};
use galrep::groups::{satisfies_all, sieve_density};
use galrep::newform_data::fixtures::{sha256_hex, FixtureStore, Manifest, ManifestEntry};
use galrep::newform_data::{validate, Eigenform};
use galrep::primes::primes_up_to;

use crate::output::{table, Emitter};
use crate::{Cli, Command, RunConfig, EXIT_INSUFFICIENT, EXIT_OK, EXIT_REFUTED};

pub const CACHE_DIR_ENV: &str = "GALREP_CACHE_DIR";

pub fn run<W: Write>(cli: &Cli, out: W) -> Result<u8> {
    let cfg = &cli.config;
    set_factor_seed(cfg.seed);
    #[cfg(feature = "parallel")]
    {
        // a second build in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers as usize)
            .build_global();
    }
    let store = FixtureStore::open(cfg.fixtures.as_deref()).context("loading fixtures")?;
    let mut em = Emitter::new(cfg.format, out);
    header(&mut em, cli, &store)?;
    let code = match &cli.command {
        Command::Ingest { file, cache_dir } => ingest(&mut em, file, cache_dir.as_deref())?,
        Command::Analyze { form, ell, ell_max } => {
            analyze(&mut em, cfg, &store, form, *ell, *ell_max)?
        }
        Command::Twists { form } => twists(&mut em, cfg, &store, form)?,
        Command::SieveQ {
            p,
            aux,
            trace_form,
            ell,
            slot,
            bound,
            density,
        } => {
            let trace = trace_form
                .as_ref()
                .map(|t| (t.as_str(), ell.unwrap_or(*p), *slot));
            sieve_q(&mut em, &store, *p, aux, trace, *bound, *density)?
        }
        Command::ScanPsl { form, n, bound } => scan_psl(&mut em, cfg, &store, form, *n, *bound)?,
        Command::CertifyTd { form, q, order } => certify_td(&mut em, &store, form, *q, *order)?,
        Command::CheckChain { manifest } => check_chain(&mut em, &store, manifest)?,
        Command::Density { conditions, bound } => density(&mut em, conditions, *bound)?,
        Command::Report { form, ell_max } => match form {
            Some(f) => form_report(&mut em, cfg, &store, f, *ell_max)?,
            None => inventory(&mut em, &store)?,
        },
    };
    em.flush()?;
    Ok(code)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Ingest { .. } => "ingest",
        Command::Analyze { .. } => "analyze",
        Command::Twists { .. } => "twists",
        Command::SieveQ { .. } => "sieve-q",
        Command::ScanPsl { .. } => "scan-psl",
        Command::CertifyTd { .. } => "certify-td",
        Command::CheckChain { .. } => "check-chain",
        Command::Density { .. } => "density",
        Command::Report { .. } => "report",
    }
}

fn header<W: Write>(em: &mut Emitter<W>, cli: &Cli, store: &FixtureStore) -> Result<()> {
    let cfg = &cli.config;
    let name = command_name(&cli.command);
    let value = json!({
        "tool": "galrep",
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "config": cfg,
        "fixtures": store.source,
        "parallel": galrep::par::is_parallel(),
    });
    em.record("header", &value, || {
        format!(
            "# galrep {} {name} | seed {} | workers {} | fixtures {}",
            env!("CARGO_PKG_VERSION"),
            cfg.seed,
            cfg.workers,
            store.source
        )
    })?;
    Ok(())
}

fn load(store: &FixtureStore, name: &str) -> Result<Arc<Eigenform>> {
    Ok(Arc::new(store.load(name)?))
}

fn sample_bound(cfg: &RunConfig, f: &Eigenform) -> u64 {
    cfg.sample_bound.unwrap_or(f.bound)
}

fn outcome_tag(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "PASS",
        Outcome::Fail => "FAIL",
        Outcome::Unknown => "UNKNOWN",
    }
}

fn check_table(checks: &[Check]) -> String {
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            vec![
                outcome_tag(c.outcome).to_string(),
                c.clause.clone(),
                c.detail.clone(),
            ]
        })
        .collect();
    table(&["result", "clause", "detail"], &rows)
}

fn ingest<W: Write>(em: &mut Emitter<W>, file: &Path, cache_dir: Option<&Path>) -> Result<u8> {
    let dir: PathBuf = match cache_dir {
        Some(d) => d.to_path_buf(),
        None => std::env::var_os(CACHE_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(PathBuf::from)
            .ok_or_else(|| {
                anyhow!("no cache directory: pass --cache-dir or set {CACHE_DIR_ENV}")
            })?,
    };
    let text =
        std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let f = Eigenform::parse(&text).with_context(|| format!("parsing {}", file.display()))?;
    let report = validate(&f);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let stem: String = f
        .label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '-'
            }
        })
        .collect();
    let name = format!("{stem}.json");
    std::fs::write(dir.join(&name), &text)?;
    let manifest_path = dir.join("manifest.json");
    let mut manifest = if manifest_path.exists() {
        Manifest::parse(&std::fs::read_to_string(&manifest_path)?)?
    } else {
        Manifest { fixtures: vec![] }
    };
    manifest.fixtures.retain(|e| e.label != f.label);
    let sha = sha256_hex(&text);
    manifest.fixtures.push(ManifestEntry {
        label: f.label.clone(),
        file: name.clone(),
        sha256: sha.clone(),
        aliases: vec![],
        description: format!("ingested from {}", file.display()),
    });
    manifest.fixtures.sort_by(|a, b| a.label.cmp(&b.label));
    std::fs::write(&manifest_path, manifest.render())?;
    let value = json!({
        "label": f.label,
        "file": name,
        "sha256": sha,
        "cache_dir": dir.display().to_string(),
        "validation": report,
    });
    em.record("ingest", &value, || {
        let mut s = format!(
            "ingested {} (level {}, weight {}, degree {}, bound {}) as {}/{name}\nsha256 {sha}\n{} primes checked against the Ramanujan bound: {} violation(s)",
            f.label,
            f.level,
            f.weight,
            f.field.degree(),
            f.bound,
            dir.display(),
            report.primes_checked,
            report.violations.len()
        );
        for v in &report.violations {
            s.push_str(&format!("\n  p={} {}: {}", v.p, v.check, v.detail));
        }
        s
    })?;
    Ok(if report.is_clean() {
        EXIT_OK
    } else {
        EXIT_REFUTED
    })
}

fn classification_text(c: &ImageClassification) -> String {
    let mut s = format!(
        "ℓ={} Λ={} d={} d_λ={}: {}",
        c.ell,
        c.slot,
        c.residue_degree,
        c.lambda_degree.map_or("?".into(), |d| d.to_string()),
        c.status
    );
    for w in &c.witnesses {
        s.push_str(&format!("\n  p={} {} [{}]", w.p, w.quantity, w.role));
    }
    for cav in &c.caveats {
        s.push_str(&format!("\n  caveat: {cav}"));
    }
    s
}

fn classify_at<W: Write>(
    em: &mut Emitter<W>,
    f: &Arc<Eigenform>,
    ell: u64,
    bound: u64,
    twists: &InnerTwistReport,
) -> Result<()> {
    let contexts = match ReductionContext::all_above(f.clone(), ell) {
        Ok(c) => c,
        Err(e) => {
            let value = json!({"ell": ell, "reason": e.to_string()});
            return Ok(em.record("unclassified", &value, || format!("ℓ={ell}: {e}"))?);
        }
    };
    for ctx in contexts {
        let c = classify_image(&ctx, bound, Some(twists))?;
        em.record("classification", &c, || classification_text(&c))?;
    }
    Ok(())
}

fn analyze<W: Write>(
    em: &mut Emitter<W>,
    cfg: &RunConfig,
    store: &FixtureStore,
    form: &str,
    ell: Option<u64>,
    ell_max: u64,
) -> Result<u8> {
    let f = load(store, form)?;
    let b = sample_bound(cfg, &f);
    let tw = detect_inner_twists(&f, b)?;
    let ells = match ell {
        Some(l) => vec![l],
        None => primes_up_to(ell_max)
            .into_iter()
            .filter(|&l| l > 2)
            .collect(),
    };
    for l in ells {
        classify_at(em, &f, l, b, &tw)?;
    }
    Ok(EXIT_OK)
}

fn twist_summary(f: &Eigenform, tw: &InnerTwistReport) -> serde_json::Value {
    let pairs: Vec<_> = tw
        .pairs
        .iter()
        .map(|p| {
            json!({
                "epsilon": p.epsilon.to_string(),
                "sigma": sigma_name(f, &p.sigma),
                "sigma_index": p.sigma_index,
                "verified_bound": p.verified_bound,
            })
        })
        .collect();
    json!({
        "label": f.label,
        "pairs": pairs,
        "gamma_order": tw.gamma.len(),
        "twist_field": tw.twist_field.field.poly().to_string(),
        "twist_field_degree": tw.twist_field.degree(),
        "k_gamma": tw.k_gamma.as_ref().map(|k| k.poly().to_string()),
        "cm_discriminant": tw.cm_discriminant,
        "support": tw.support,
        "complete": tw.complete,
        "notes": tw.notes,
    })
}

fn sigma_name(f: &Eigenform, sigma: &galrep::algebra::Automorphism) -> String {
    if sigma.is_identity(&f.field) {
        "id".into()
    } else {
        format!("(x ↦ {})", f.field.format(&sigma.image))
    }
}

fn twists<W: Write>(
    em: &mut Emitter<W>,
    cfg: &RunConfig,
    store: &FixtureStore,
    form: &str,
) -> Result<u8> {
    let f = load(store, form)?;
    let b = sample_bound(cfg, &f);
    let cm = detect_cm(&f, b)?;
    em.record("cm", &cm, || match cm.discriminant {
        Some(d) => format!("CM by Q(√{d}) (verified to {b})"),
        None => format!(
            "no CM: {} quadratic character(s) refuted below {b}",
            cm.refuted.len()
        ),
    })?;
    let tw = detect_inner_twists(&f, b)?;
    let summary = twist_summary(&f, &tw);
    em.record("inner-twists", &summary, || {
        let mut s = format!(
            "inner twists: |Γ| = {}, F_f = Q[x]/({}) of degree {}",
            tw.gamma.len(),
            tw.twist_field.field.poly(),
            tw.twist_field.degree()
        );
        for p in tw.nontrivial_pairs() {
            s.push_str(&format!(
                "\n  ε = {}, σ = {}",
                p.epsilon,
                sigma_name(&f, &p.sigma)
            ));
        }
        if let Some(k) = &tw.k_gamma {
            s.push_str(&format!("\n  K_Γ = Q[x]/({})", k.poly()));
        }
        for n in &tw.notes {
            s.push_str(&format!("\n  note: {n}"));
        }
        s
    })?;
    match noit_checklist(&f) {
        Ok(r) => em.record("noit", &r, || {
            let mut s = format!(
                "unramifiedness checklist: {}",
                if r.passes {
                    "passes"
                } else {
                    "does not certify"
                }
            );
            for t in &r.trace {
                s.push_str(&format!(
                    "\n  q={} {} {}: {}",
                    t.q,
                    if t.passed { "PASS" } else { "FAIL" },
                    t.rule,
                    t.reason
                ));
            }
            s
        })?,
        Err(e) => em.record("noit", &json!({"skipped": e.to_string()}), || {
            format!("unramifiedness checklist skipped: {e}")
        })?,
    }
    Ok(EXIT_OK)
}

fn sieve_q<W: Write>(
    em: &mut Emitter<W>,
    store: &FixtureStore,
    p: u64,
    aux: &[u64],
    trace: Option<(&str, u64, usize)>,
    bound: u64,
    with_density: bool,
) -> Result<u8> {
    let mut query = RaiseQuery::new(p, aux, bound)?;
    if let Some((form, ell, slot)) = trace {
        let f = load(store, form)?;
        let mut contexts = ReductionContext::all_above(f, ell)?;
        if slot >= contexts.len() {
            bail!(
                "slot {slot} out of range: {} slot(s) above {ell}",
                contexts.len()
            );
        }
        query = query.with_trace(contexts.swap_remove(slot))?;
    }
    let with_trace = query.trace.is_some();
    let hits = raise_sieve(&query)?;
    em.text(format!(
        "q ≡ {} mod {}, q ≤ {bound}; split in Q(i{}){}",
        p - 1,
        p * p,
        query
            .auxiliaries
            .iter()
            .map(|a| format!(", √{a}"))
            .collect::<String>(),
        if with_trace {
            "; trace-zero surrogate ā_q ≡ 0 mod Λ"
        } else {
            ""
        }
    ))?;
    let mut rows = Vec::new();
    let mut qualifying = 0usize;
    for h in &hits {
        let ok = h.qualifies(with_trace);
        qualifying += ok as usize;
        let value = json!({
            "q": h.q,
            "split_i": h.split_i,
            "split_aux": h.split_aux,
            "trace_zero": h.trace_zero,
            "qualifies": ok,
        });
        em.record("raise-hit", &value, String::new)?;
        let mut row = vec![h.q.to_string(), yes_no(h.split_i)];
        row.extend(h.split_aux.iter().map(|&b| yes_no(b)));
        if with_trace {
            row.push(h.trace_zero.map_or("n/a".into(), yes_no));
        }
        row.push(yes_no(ok));
        rows.push(row);
    }
    let mut head = vec!["q".to_string(), "(-1|q)=1".to_string()];
    head.extend(query.auxiliaries.iter().map(|a| format!("({a}|q)=1")));
    if with_trace {
        head.push("ā_q=0".into());
    }
    head.push("qualifies".into());
    let head: Vec<&str> = head.iter().map(String::as_str).collect();
    em.text(table(&head, &rows))?;
    let summary = json!({"candidates": hits.len(), "qualifying": qualifying});
    em.record("sieve-summary", &summary, || {
        format!("{} candidate(s), {qualifying} qualifying", hits.len())
    })?;
    if with_density {
        let r = sieve_density_report(&query)?;
        em.record("density", &r, || {
            let mut s = format!(
                "predicted {} | observed {}/{} = {:.6} | ratio {:.4}",
                r.predicted,
                r.hits,
                r.prime_count,
                r.hits as f64 / r.prime_count as f64,
                r.ratio
            );
            if let Some((z, k)) = r.trace_frequency {
                s.push_str(&format!("\ntrace-zero surrogate: {z}/{k} of split hits"));
            }
            s
        })?;
    }
    Ok(if qualifying > 0 {
        EXIT_OK
    } else {
        EXIT_INSUFFICIENT
    })
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn scan_psl<W: Write>(
    em: &mut Emitter<W>,
    cfg: &RunConfig,
    store: &FixtureStore,
    form: &str,
    n: usize,
    bound: u64,
) -> Result<u8> {
    let f = load(store, form)?;
    let b = sample_bound(cfg, &f);
    let scan = realization_scan(f, n, bound, b)?;
    let mut rows = Vec::new();
    for r in &scan.records {
        em.record("realization", r, String::new)?;
        rows.push(vec![
            r.ell.to_string(),
            r.group.clone(),
            r.slot.clone(),
            r.ramification.join(","),
            r.certificate.len().to_string(),
        ]);
    }
    em.text(table(
        &["ℓ", "group", "slot", "ramified at", "witnesses"],
        &rows,
    ))?;
    for (ell, reason) in &scan.unresolved {
        em.record("unresolved", &json!({"ell": ell, "reason": reason}), || {
            format!("ℓ={ell} not realized: {reason}")
        })?;
    }
    let summary = json!({
        "label": scan.label,
        "n": n,
        "ell_bound": bound,
        "sample_bound": b,
        "records": scan.records.len(),
        "unresolved": scan.unresolved.len(),
    });
    em.record("scan-summary", &summary, || {
        format!(
            "{} record(s) for n = {n}, ℓ ≤ {bound}; {} unresolved",
            scan.records.len(),
            scan.unresolved.len()
        )
    })?;
    Ok(EXIT_OK)
}

fn certify_td<W: Write>(
    em: &mut Emitter<W>,
    store: &FixtureStore,
    form: &str,
    q: u64,
    order: u64,
) -> Result<u8> {
    let f = load(store, form)?;
    let c = td_certificate(&f, q, order)?;
    em.record("td-certificate", &c, || {
        format!(
            "{}: tamely dihedral of order {order} at {q}: {}\n{}",
            c.label,
            c.status,
            check_table(&c.checks)
        )
    })?;
    Ok(c.status.exit_code() as u8)
}

fn check_chain<W: Write>(em: &mut Emitter<W>, store: &FixtureStore, path: &Path) -> Result<u8> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let manifest = ChainManifest::parse(&text)?;
    let report = family_chain_check(&manifest, |name| {
        store
            .load(name)
            .map_err(|e| ConstructionError::Manifest(e.to_string()))
    })?;
    for s in &report.steps {
        em.record("chain-step", s, || {
            let raise = match (s.q, s.order) {
                (Some(q), Some(p)) => format!(" raising at q={q}, order {p}"),
                _ => " (base)".into(),
            };
            format!(
                "step {}: {} level {}{raise}: {}\n{}",
                s.index,
                s.form,
                s.level,
                s.verdict,
                check_table(&s.checks)
            )
        })?;
    }
    em.record("chain-final", &report.final_check, || {
        format!(
            "{} {}: {}",
            outcome_tag(report.final_check.outcome),
            report.final_check.clause,
            report.final_check.detail
        )
    })?;
    em.record("chain-verdict", &json!({"verdict": report.verdict}), || {
        format!("chain: {}", report.verdict)
    })?;
    Ok(report.verdict.exit_code() as u8)
}

#[derive(Serialize)]
struct DensityLine {
    conditions: Vec<String>,
    bound: u64,
    predicted: String,
    hits: u64,
    prime_count: u64,
    empirical: f64,
    ratio: f64,
}

fn density<W: Write>(em: &mut Emitter<W>, spec: &str, bound: u64) -> Result<u8> {
    let conditions = parse_conditions(spec)?;
    if conditions.is_empty() {
        bail!("no conditions given");
    }
    let predicted = sieve_density(&conditions)?;
    let primes = primes_up_to(bound);
    let hits = galrep::par::count(&primes, |&q| satisfies_all(&conditions, q)) as u64;
    let pi = primes.len() as u64;
    let empirical = if pi == 0 {
        0.0
    } else {
        hits as f64 / pi as f64
    };
    let p = num_traits_ratio(&predicted);
    let line = DensityLine {
        conditions: conditions.iter().map(|c| c.to_string()).collect(),
        bound,
        predicted: predicted.to_string(),
        hits,
        prime_count: pi,
        empirical,
        ratio: if p > 0.0 { empirical / p } else { f64::NAN },
    };
    em.record("density", &line, || {
        format!(
            "{}\npredicted {} ≈ {p:.6} | observed {hits}/{pi} = {empirical:.6} | ratio {:.4}",
            line.conditions.join("; "),
            line.predicted,
            line.ratio
        )
    })?;
    Ok(EXIT_OK)
}

fn num_traits_ratio(r: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn inventory<W: Write>(em: &mut Emitter<W>, store: &FixtureStore) -> Result<u8> {
    let mut rows = Vec::new();
    for e in &store.manifest.fixtures {
        let f = store.load(&e.label)?;
        let v = validate(&f);
        let value = json!({
            "label": e.label,
            "file": e.file,
            "sha256": e.sha256,
            "aliases": e.aliases,
            "level": f.level,
            "weight": f.weight,
            "degree": f.field.degree(),
            "bound": f.bound,
            "violations": v.violations.len(),
            "description": e.description,
        });
        em.record("fixture", &value, String::new)?;
        rows.push(vec![
            e.label.clone(),
            f.level.to_string(),
            f.weight.to_string(),
            f.field.degree().to_string(),
            f.bound.to_string(),
            v.violations.len().to_string(),
            e.sha256[..12].to_string(),
        ]);
    }
    em.text(table(
        &[
            "label",
            "level",
            "k",
            "[Q_f:Q]",
            "bound",
            "violations",
            "sha256",
        ],
        &rows,
    ))?;
    Ok(EXIT_OK)
}

fn form_report<W: Write>(
    em: &mut Emitter<W>,
    cfg: &RunConfig,
    store: &FixtureStore,
    form: &str,
    ell_max: u64,
) -> Result<u8> {
    let f = load(store, form)?;
    let b = sample_bound(cfg, &f);
    let v = validate(&f);
    em.record("validation", &v, || {
        format!(
            "{}: level {}, weight {}, Q_f of degree {}, χ = {}; {} violation(s) in {} primes",
            f.label,
            f.level,
            f.weight,
            f.field.degree(),
            f.nebentypus,
            v.violations.len(),
            v.primes_checked
        )
    })?;
    let tw = detect_inner_twists(&f, b)?;
    let summary = twist_summary(&f, &tw);
    em.record("inner-twists", &summary, || {
        format!(
            "|Γ| = {}, F_f of degree {}, CM: {}",
            tw.gamma.len(),
            tw.twist_field.degree(),
            tw.cm_discriminant
                .map_or("none".into(), |d| format!("Q(√{d})"))
        )
    })?;
    for ell in primes_up_to(ell_max).into_iter().filter(|&l| l > 2) {
        classify_at(em, &f, ell, b, &tw)?;
    }
    Ok(EXIT_OK)
}
