//! One handler per subcommand.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use osclab_core::audits::{run_batch, summarize, AuditKind, AuditReport, BatchConfig};
use osclab_core::covering::{build_covering, covering_theta, max_buildable_r, r_schedule, CoveringError};
use osclab_core::geometry::{transfinite_diameter_estimate, DomainSpec};
use osclab_core::search::{
    floor_consistency_check, minimize_oscillation, upper_witness_check, InitStrategy, SearchConfig,
    TRACE_EXPORT_LIMIT,
};
use osclab_core::{ConvexDomain, Exponent};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::manifest::{strip_out, RunManifest};
use crate::output::Sink;
use crate::{exit, Cli, Command, Failure, Format};

fn load_domain(path: &Path) -> Result<(ConvexDomain, DomainSpec), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("reading {}: {e}", path.display())))?;
    let k = ConvexDomain::from_json(&text).map_err(|e| Failure::input(format!("invalid domain {}: {e}", path.display())))?;
    let spec = k.to_spec();
    Ok((k, spec))
}

fn parse_q(s: &str) -> Result<Exponent, Failure> {
    s.parse::<Exponent>().map_err(Failure::input)
}

fn sink(command: &str, args: &[String], out: Option<PathBuf>, domain: Option<(&Path, DomainSpec)>, params: BTreeMap<String, serde_json::Value>) -> Result<Sink, Failure> {
    let (file, spec) = match domain {
        Some((p, s)) => (Some(p.display().to_string()), Some(s)),
        None => (None, None),
    };
    Ok(Sink::new(out, RunManifest::new(command, strip_out(args), file, spec, params))?)
}

fn params(pairs: &[(&str, serde_json::Value)]) -> BTreeMap<String, serde_json::Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

pub fn run(cli: Cli, args: &[String]) -> Result<(), Failure> {
    match cli.command {
        Command::Geometry { domain, fekete, common } => {
            let (k, spec) = load_domain(&domain)?;
            let mut out = sink("geometry", args, common.out, Some((&domain, spec)), params(&[("fekete", json!(fekete))]))?;
            geometry(&k, fekete.max(2), common.format, &mut out)?;
            out.finish()?;
            Ok(())
        }
        Command::Audit { domain, audit, trials, seed, n, q, common } => {
            let kind: AuditKind = audit.parse().map_err(Failure::input)?;
            let q = q.as_deref().map(parse_q).transpose()?;
            let loaded = domain.as_deref().map(load_domain).transpose()?;
            let mut cfg = BatchConfig::new(kind, trials, seed);
            cfg.n = n;
            cfg.q = q;
            cfg.domain = loaded.as_ref().map(|(k, _)| k.clone());
            let p = params(&[
                ("audit", json!(kind.id())),
                ("trials", json!(trials)),
                ("seed", json!(seed)),
                ("n", json!(n)),
                ("q", json!(q)),
            ]);
            let dom = domain.as_deref().zip(loaded.map(|(_, s)| s));
            let mut out = sink("audit", args, common.out, dom, p)?;
            let res = audit_cmd(&cfg, common.format, &mut out);
            out.finish()?;
            res
        }
        Command::Search { domain, n, q, budget, seed, restarts, init, common } => {
            let (k, spec) = load_domain(&domain)?;
            let q = parse_q(&q)?;
            let init = match init.as_str() {
                "boundary-uniform" => InitStrategy::BoundaryUniform,
                "interior-uniform" => InitStrategy::InteriorUniform,
                "corner-clustered" => InitStrategy::CornerClustered,
                other => return Err(Failure::input(format!("unknown init strategy {other:?}"))),
            };
            let cfg = SearchConfig { n, q, budget, seed, restarts, init };
            let p = params(&[
                ("n", json!(n)),
                ("q", json!(q)),
                ("budget", json!(budget)),
                ("seed", json!(seed)),
                ("restarts", json!(restarts)),
                ("init", json!(cfg.init)),
            ]);
            let mut out = sink("search", args, common.out, Some((&domain, spec.clone())), p)?;
            let res = search_cmd(&k, spec, &cfg, common.format, &mut out);
            out.finish()?;
            res
        }
        Command::Covering { domain, n, r, theta, common } => {
            let (k, spec) = load_domain(&domain)?;
            let r = match (n, r) {
                (Some(n), _) if n >= 2.0 => r_schedule(n, &k),
                (Some(n), _) => return Err(Failure::input(format!("--n must be at least 2, got {n}"))),
                (None, Some(r)) => r,
                (None, None) => return Err(Failure::input("one of --n, --r is required")),
            };
            let theta = theta.unwrap_or_else(|| covering_theta(&k));
            let p = params(&[("n", json!(n)), ("r", json!(r)), ("theta", json!(theta))]);
            let mut out = sink("covering", args, common.out, Some((&domain, spec)), p)?;
            let res = covering_cmd(&k, r, theta, common.format, &mut out);
            out.finish()?;
            res
        }
        Command::Table { manifests, common } => {
            let p = params(&[("manifests", json!(manifests.iter().map(|m| m.display().to_string()).collect::<Vec<_>>()))]);
            let mut out = sink("table", args, common.out, None, p)?;
            let res = table_cmd(&manifests, common.format, &mut out);
            out.finish()?;
            res
        }
        Command::Rerun { manifest, common } => {
            let m = RunManifest::read(&manifest)?;
            let mut argv = vec!["osclab".to_string()];
            argv.extend(m.args.iter().cloned());
            if let Some(dir) = &common.out {
                argv.push("--out".into());
                argv.push(dir.display().to_string());
            }
            let cli = <Cli as clap::Parser>::try_parse_from(&argv).map_err(|e| Failure::input(format!("manifest args: {e}")))?;
            if matches!(cli.command, Command::Rerun { .. }) {
                return Err(Failure::input("a manifest cannot record a rerun"));
            }
            run(cli, &argv[1..])
        }
    }
}

#[derive(Serialize)]
struct VertexRow {
    index: usize,
    x: f64,
    y: f64,
    s: f64,
    omega: f64,
}

fn geometry(k: &ConvexDomain, fekete: usize, format: Format, out: &mut Sink) -> anyhow::Result<()> {
    let t = transfinite_diameter_estimate(k, fekete);
    let vertices: Vec<VertexRow> = (0..k.vertex_count())
        .map(|i| {
            let b = k.vertex_point(i);
            VertexRow { index: i, x: b.z.re, y: b.z.im, s: b.s, omega: b.omega() }
        })
        .collect();
    let report = json!({
        "diameter": k.diameter(),
        "width": k.width(),
        "perimeter": k.perimeter(),
        "area": k.area(),
        "depth": k.depth(),
        "is_disk": k.is_disk(),
        "transfinite": t,
        "vertices": vertices,
    });
    eprintln!(
        "d = {:.12}  w = {:.12}  L = {:.12}  h = {:.12}  Δ ∈ [{:.6}, {:.6}], δ_{} = {:.6}",
        k.diameter(),
        k.width(),
        k.perimeter(),
        k.depth(),
        t.lower,
        t.upper,
        t.m,
        t.fekete
    );
    out.json("geometry.json", &report, format == Format::Json)?;
    let rows: Vec<Vec<String>> = vertices
        .iter()
        .map(|v| vec![v.index.to_string(), v.x.to_string(), v.y.to_string(), v.s.to_string(), v.omega.to_string()])
        .collect();
    out.csv("vertices.csv", &["index", "x", "y", "s", "omega"], &rows, format == Format::Csv)
}

fn audit_cmd(cfg: &BatchConfig, format: Format, out: &mut Sink) -> Result<(), Failure> {
    let reports = run_batch(cfg);
    let s = summarize(&reports);
    match format {
        Format::Json => out.json_lines("audit.jsonl", &reports, true)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports.iter().map(audit_row).collect();
            out.csv("audit.csv", &["audit_id", "trial", "lhs", "rhs", "margin", "applicable", "pass", "note"], &rows, true)?
        }
    }
    out.json("summary.json", &s, false)?;
    eprintln!(
        "{}: {} reports, {} pass, {} fail, {} not applicable, worst relative margin {}",
        cfg.kind,
        s.total,
        s.passed,
        s.failed,
        s.not_applicable,
        s.worst_relative_margin.map_or("n/a".to_string(), |m| format!("{m:.6e}"))
    );
    if s.failed > 0 {
        return Err(Failure::new(exit::AUDIT_FAILURE, format!("{} audit failures", s.failed)));
    }
    Ok(())
}

fn audit_row(r: &AuditReport) -> Vec<String> {
    vec![
        r.audit_id.clone(),
        r.trial.map_or(String::new(), |t| t.to_string()),
        r.lhs.to_string(),
        r.rhs.to_string(),
        r.margin.to_string(),
        r.applicable.to_string(),
        r.pass.to_string(),
        r.note.clone().unwrap_or_default(),
    ]
}

#[derive(Serialize, Deserialize)]
struct SearchExport {
    domain: DomainSpec,
    n: usize,
    q: Exponent,
    budget: usize,
    seed: u64,
    restarts: usize,
    best_roots: Vec<[f64; 2]>,
    #[serde(rename = "best_M")]
    best_m: f64,
    evaluations: usize,
    bound_checks: BTreeMap<String, f64>,
    checks: Vec<AuditReport>,
    trace: Vec<(usize, f64)>,
}

fn search_cmd(k: &ConvexDomain, spec: DomainSpec, cfg: &SearchConfig, format: Format, out: &mut Sink) -> Result<(), Failure> {
    let res = minimize_oscillation(k, cfg).map_err(Failure::input)?;
    let witness = upper_witness_check(k, cfg.n, cfg.q, &res);
    let floor = floor_consistency_check(k, cfg.n, cfg.q, &res);
    let trace = res.decimated_trace(TRACE_EXPORT_LIMIT);
    let export = SearchExport {
        domain: spec,
        n: cfg.n,
        q: cfg.q,
        budget: cfg.budget,
        seed: cfg.seed,
        restarts: cfg.restarts,
        best_roots: res.best_p.roots.iter().map(|z| [z.re, z.im]).collect(),
        best_m: res.best_m,
        evaluations: res.evaluations,
        bound_checks: res.bound_checks.clone(),
        checks: vec![witness.clone(), floor.clone()],
        trace: trace.clone(),
    };
    out.json("search.json", &export, format == Format::Json)?;
    let rows: Vec<Vec<String>> = trace.iter().map(|(e, m)| vec![e.to_string(), m.to_string()]).collect();
    out.csv("trace.csv", &["evaluation", "incumbent_M"], &rows, format == Format::Csv)?;
    eprintln!(
        "best M = {:.10} after {} evaluations; 15n/d margin {:.6}; n/log n floor margin {}",
        res.best_m,
        res.evaluations,
        res.bound_checks["upper_15_over_d"],
        res.bound_checks.get("nlogn_floor").map_or("n/a".to_string(), |m| format!("{m:.6}"))
    );
    witness_outcome(&witness)
}

fn witness_outcome(witness: &AuditReport) -> Result<(), Failure> {
    if witness.pass {
        Ok(())
    } else {
        Err(Failure::new(exit::SEARCH_INCOMPLETE, "SEARCH-INCOMPLETE: no polynomial below (15/d)n was found"))
    }
}

fn covering_cmd(k: &ConvexDomain, r: f64, theta: f64, format: Format, out: &mut Sink) -> Result<(), Failure> {
    let c = match build_covering(k, r, theta) {
        Ok(c) => c,
        Err(CoveringError::RadiusTooLarge { r, max }) => {
            let hint = max_buildable_r(k, theta, r);
            return Err(Failure::new(
                exit::COVERING_FAILURE,
                format!("r = {r} violates r < w/108 = {max}; largest buildable r ≈ {hint}"),
            ));
        }
        Err(e) => return Err(Failure::new(exit::COVERING_FAILURE, e.to_string())),
    };
    let e = c.export();
    out.json("covering.json", &e, format == Format::Json)?;
    let rows: Vec<Vec<String>> = e
        .components
        .iter()
        .enumerate()
        .map(|(m, x)| {
            vec![
                m.to_string(),
                x.span[0].to_string(),
                x.span[1].to_string(),
                x.central[0].to_string(),
                x.central[1].to_string(),
                x.length.to_string(),
                x.members.to_string(),
            ]
        })
        .collect();
    out.csv(
        "covering.csv",
        &["component", "start_s", "end_s", "central_start", "central_end", "length", "members"],
        &rows,
        format == Format::Csv,
    )?;
    eprintln!(
        "k0 = {}, |L| = {:.6e}, 48rd/w = {:.6e}, margin {:.6e}, {} elementary arcs",
        c.k0(),
        c.measure(),
        48.0 * c.unit,
        48.0 * c.unit - c.measure(),
        c.elementary_count
    );
    let failing: Vec<&str> = c.checks.iter().filter(|x| !x.pass).map(|x| x.name.as_str()).collect();
    if !failing.is_empty() {
        return Err(Failure::new(exit::COVERING_FAILURE, format!("covering checks failed: {}", failing.join(", "))));
    }
    Ok(())
}

#[derive(Serialize)]
struct TableRow {
    domain: String,
    n: usize,
    q: String,
    #[serde(rename = "best_M")]
    best_m: f64,
    half_n: Option<f64>,
    upper_15_over_d: f64,
    infnorm_rate: f64,
    nlogn_floor: f64,
}

fn table_cmd(manifests: &[PathBuf], format: Format, out: &mut Sink) -> Result<(), Failure> {
    if manifests.is_empty() {
        return Err(Failure::input("no manifests given"));
    }
    let mut rows = Vec::new();
    for path in manifests {
        let m = RunManifest::read(path)?;
        if m.command != "search" {
            eprintln!("warning: {} records a {:?} run; skipped", path.display(), m.command);
            continue;
        }
        let dir = path.parent().unwrap_or(Path::new("."));
        let file = dir.join("search.json");
        let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
        let s: SearchExport = serde_json::from_str(&text).with_context(|| format!("parsing {}", file.display()))?;
        let k = ConvexDomain::from_spec(&s.domain).map_err(Failure::input)?;
        let (d, w) = (k.diameter(), k.width());
        let nf = s.n as f64;
        rows.push(TableRow {
            domain: m.domain_file.unwrap_or_default(),
            n: s.n,
            q: s.q.to_string(),
            best_m: s.best_m,
            half_n: k.is_disk().then_some(nf / d),
            upper_15_over_d: 15.0 * nf / d,
            infnorm_rate: 0.001 * w / (d * d) * nf,
            nlogn_floor: if s.n >= 2 { w * w / (240_000.0 * d.powi(3)) * nf / nf.ln() } else { f64::NAN },
        });
    }
    rows.sort_by(|a, b| (a.domain.as_str(), a.q.as_str(), a.n).cmp(&(b.domain.as_str(), b.q.as_str(), b.n)));
    for pair in rows.windows(2) {
        if pair[0].domain == pair[1].domain && pair[0].q == pair[1].q && pair[1].best_m < pair[0].best_m {
            eprintln!(
                "warning: best_M decreases from n = {} to n = {} on {} (q = {})",
                pair[0].n, pair[1].n, pair[0].domain, pair[0].q
            );
        }
    }
    match format {
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.domain.clone(),
                        r.n.to_string(),
                        r.q.clone(),
                        r.best_m.to_string(),
                        r.half_n.map_or(String::new(), |v| v.to_string()),
                        r.upper_15_over_d.to_string(),
                        r.infnorm_rate.to_string(),
                        r.nlogn_floor.to_string(),
                    ]
                })
                .collect();
            out.csv(
                "table.csv",
                &["domain", "n", "q", "best_M", "half_n", "upper_15_over_d", "infnorm_rate", "nlogn_floor"],
                &body,
                true,
            )?;
        }
        Format::Json => out.json_lines("table.jsonl", &rows, true)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use osclab_core::search::SearchResult;
    use osclab_core::{Point, RootPolynomial};

    fn fake_result(best_m: f64) -> SearchResult {
        SearchResult {
            best_p: RootPolynomial::monic(vec![Point::new(0.5, 0.5); 2]),
            best_m,
            trace: vec![(1, best_m)],
            evaluations: 1,
            bound_checks: BTreeMap::new(),
        }
    }

    #[test]
    fn missing_witness_maps_to_exit_4() {
        let k = ConvexDomain::unit_square();
        let q = Exponent::Finite(2.0);
        let bad = upper_witness_check(&k, 2, q, &fake_result(1e6));
        assert_eq!(witness_outcome(&bad).unwrap_err().code, exit::SEARCH_INCOMPLETE);
        let good = upper_witness_check(&k, 2, q, &fake_result(1.0));
        assert!(witness_outcome(&good).is_ok());
    }
}
