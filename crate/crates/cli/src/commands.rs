use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use theta_epsa::generate::{self, SeededRng};
use theta_epsa::{
    decomposition_json, edge_cover_exact, edge_ep_pipeline_with, edge_packing_exact, exact_treewidth,
    gap_report, has_model, hitting_cover, pack_componentwise, pack_via_high_degree, to_nice,
    verify_model, verify_packing, vertex_cover_exact, vertex_packing_exact, Budget, CoverSource,
    Disjointness, EdgeId, GapReport, MultiGraph, PackingWitness, PipelineOutcome, ThetaModelCertificate,
};

use crate::{Command, Failed, Failure, Family, Global, Method};

pub struct Output {
    pub body: String,
    pub summary: Option<String>,
}

impl Output {
    fn json(value: &impl Serialize, summary: String) -> Self {
        Self { body: to_json(value), summary: Some(summary) }
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output values serialize");
    s.push('\n');
    s
}

pub fn emit(global: &Global, body: &str) -> Result<(), Failure> {
    match &global.out {
        Some(path) => fs::write(path, body)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| Failure::Internal(format!("cannot write output: {e}"))),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Failure::Input(format!("cannot read standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<MultiGraph, Failure> {
    MultiGraph::parse(&read_text(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn source(method: Method) -> CoverSource {
    match method {
        Method::Exact => CoverSource::Exact,
        Method::Recursive => CoverSource::Recursive,
    }
}

pub fn run(global: &Global, command: &Command) -> Result<Output, Failed> {
    match command {
        Command::Pack { k, r, high_degree, graph } => {
            let g = read_graph(graph)?;
            let found = if *high_degree {
                Some(pack_via_high_degree(&g, *k, *r)?)
            } else {
                pack_componentwise(&g, *k, *r, &global.budget()?)?
            };
            let summary = match &found {
                Some(w) => format!("pack: {} edge-disjoint theta_{r} models", w.len()),
                None => format!("pack: fewer than {k} models found"),
            };
            let certificates = found.map(|w| w.certificates).unwrap_or_default();
            let body = json!({
                "found": !certificates.is_empty(),
                "r": r,
                "certificates": certificates,
                "disjointness": Disjointness::Edge,
            });
            Ok(Output::json(&body, summary))
        }
        Command::Cover { r, method, graph } => {
            let g = read_graph(graph)?;
            let c = hitting_cover(&g, *r, &global.budget()?, source(*method))?;
            let summary = format!(
                "cover: {} edges from {} hitting vertices ({:?})",
                c.edges.len(),
                c.vertices.len(),
                c.source
            );
            Ok(Output::json(&c, summary))
        }
        Command::Pipeline { k, r, method, graph } => {
            let g = read_graph(graph)?;
            match edge_ep_pipeline_with(&g, *k, *r, &global.budget()?, source(*method))? {
                PipelineOutcome::Packing(w) => {
                    let body = json!({
                        "branch": "packing",
                        "r": r,
                        "certificates": w.certificates,
                        "disjointness": w.disjointness,
                    });
                    Ok(Output::json(&body, format!("pipeline: packing branch, {} certificates", w.len())))
                }
                PipelineOutcome::Cover(c) => {
                    let summary = format!(
                        "pipeline: cover branch, {} edges after packing {}",
                        c.edges.len(),
                        c.packed
                    );
                    let body = json!({
                        "branch": "cover",
                        "r": c.r,
                        "edges": c.edges,
                        "vertices": c.vertices,
                        "source": c.source,
                        "packed": c.packed,
                    });
                    Ok(Output::json(&body, summary))
                }
            }
        }
        Command::Verify { r, certificate, graph } => {
            let g = read_graph(graph)?;
            let text = read_text(certificate)?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| Failure::Input(format!("{}: {e}", certificate.display())))?;
            verify(&g, &value, *r)
        }
        Command::Oracle { r, graph } => {
            let g = read_graph(graph)?;
            let budget = global.budget()?;
            let report = oracle(&g, *r, &budget)?;
            let summary = format!(
                "oracle: nu'={} tau'={} nu={} tau={}",
                report.nu_e, report.tau_e, report.nu, report.tau
            );
            Ok(Output::json(&report, summary))
        }
        Command::Gap { r, bound, csv, graphs } => {
            let budget = global.budget()?;
            let params = bound.params();
            let mut rows = Vec::new();
            for path in graphs {
                let g = read_graph(path)?;
                rows.push((path.display().to_string(), gap_report(&g, *r, &params, &budget)?));
            }
            let violations = rows.iter().filter(|(_, rep)| rep.violation).count();
            let summary = format!("gap: {} graphs, {violations} violations", rows.len());
            let body = if *csv { gap_csv(&rows)? } else { gap_json(&rows) };
            Ok(Output { body, summary: Some(summary) })
        }
        Command::Decompose { nice, graph } => {
            let g = read_graph(graph)?;
            let (width, d) = exact_treewidth(&g)?;
            let decomposition = if *nice {
                let n = to_nice(&d)?;
                decomposition_json(&n.decomposition, Some(&n))
            } else {
                decomposition_json(&d, None)
            };
            let body = json!({ "width": width, "decomposition": decomposition });
            Ok(Output::json(&body, format!("decompose: treewidth {width}")))
        }
        Command::Generate { family, n, r, height, width, chords, seed } => {
            let need = |x: Option<usize>, name: &str| {
                x.ok_or_else(|| Failure::Input(format!("{family:?} needs --{name}").to_lowercase()))
            };
            let g = match family {
                Family::Theta => generate::theta(need(*r, "r")?)?,
                Family::Cycle => generate::cycle(need(*n, "n")?)?,
                Family::Clique => generate::clique(need(*n, "n")?)?,
                Family::Wheel => generate::wheel(need(*n, "n")?)?,
                Family::Wall => generate::wall(need(*height, "height")?, need(*width, "width")?)?,
                Family::RandomBiconnected => {
                    let n = need(*n, "n")?;
                    generate::random_biconnected(n, chords.unwrap_or(n / 2), &mut SeededRng::new(*seed))?
                }
            };
            let summary = format!(
                "generate: {} vertices, {} edges",
                g.vertex_count(),
                g.edge_count()
            );
            Ok(Output { body: g.to_edge_list(), summary: Some(summary) })
        }
    }
}

#[derive(Serialize)]
struct OracleReport {
    nu_e: usize,
    tau_e: usize,
    nu: usize,
    tau: usize,
    r: usize,
    edge_cover: BTreeSet<EdgeId>,
    vertex_cover: BTreeSet<u32>,
}

fn oracle(g: &MultiGraph, r: usize, budget: &Budget) -> Result<OracleReport, Failure> {
    let (nu_e, _) = edge_packing_exact(g, r, budget)?;
    let (tau_e, edge_cover) = edge_cover_exact(g, r, budget)?;
    let (nu, _) = vertex_packing_exact(g, r, budget)?;
    let (tau, vertex_cover) = vertex_cover_exact(g, r, budget)?;
    Ok(OracleReport { nu_e, tau_e, nu, tau, r, edge_cover, vertex_cover })
}

fn gap_json(rows: &[(String, GapReport)]) -> String {
    let items: Vec<Value> = rows
        .iter()
        .map(|(path, rep)| {
            let mut v = serde_json::to_value(rep).expect("report serializes");
            v["graph"] = json!(path);
            v
        })
        .collect();
    to_json(&items)
}

fn gap_csv(rows: &[(String, GapReport)]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = ["graph", "r", "k_packed", "tau_e", "cover_size", "bound_claimed", "violation"];
    let io = |e: csv::Error| Failure::Internal(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for (path, rep) in rows {
        w.write_record([
            path.clone(),
            rep.r.to_string(),
            rep.k_packed.to_string(),
            rep.tau_e.to_string(),
            rep.cover_size.to_string(),
            rep.bound_claimed.to_string(),
            rep.violation.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Failure::Internal(e.to_string()))
}

fn invalid(kind: &str, reason: String) -> Failed {
    let body = to_json(&json!({ "valid": false, "kind": kind, "reason": reason }));
    Failed { failure: Failure::Invalid(format!("{kind} rejected: {reason}")), body: Some(body) }
}

fn parse<T: serde::de::DeserializeOwned>(value: &Value, kind: &str) -> Result<T, Failed> {
    serde_json::from_value(value.clone())
        .map_err(|e| Failure::Input(format!("malformed {kind}: {e}")).into())
}

/// Accepts a certificate, an array of certificates, a packing (pack or
/// pipeline output) or an edge cover.
fn verify(g: &MultiGraph, value: &Value, r: Option<usize>) -> Result<Output, Failed> {
    let ok = |kind: &str, count: usize| {
        Output::json(
            &json!({ "valid": true, "kind": kind, "count": count }),
            format!("verify: {kind} valid ({count})"),
        )
    };
    if let Some(items) = value.as_array() {
        let certs: Vec<ThetaModelCertificate> = parse(value, "certificate list")?;
        for (i, c) in certs.iter().enumerate() {
            verify_model(g, c).map_err(|d| invalid("certificates", format!("certificate {i}: {d}")))?;
        }
        return Ok(ok("certificates", items.len()));
    }
    if value.get("certificates").is_some() {
        let certificates: Vec<ThetaModelCertificate> = parse(&value["certificates"], "packing")?;
        let disjointness = match value.get("disjointness") {
            Some(d) => parse(d, "disjointness")?,
            None => Disjointness::Edge,
        };
        let claimed_r = value.get("r").and_then(Value::as_u64).map(|x| x as usize).or(r);
        let w = PackingWitness { certificates, disjointness };
        verify_packing(g, &w, claimed_r).map_err(|d| invalid("packing", d.to_string()))?;
        return Ok(ok("packing", w.len()));
    }
    if let Some(edges) = value.get("edges") {
        let edges: BTreeSet<EdgeId> = parse(edges, "cover")?;
        let r = value
            .get("r")
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .or(r)
            .ok_or_else(|| Failure::Input("cover file has no r; pass --r".into()))?;
        if let Some(e) = edges.iter().find(|e| !g.has_edge(**e)) {
            return Err(invalid("cover", format!("edge {e} is not in the graph")));
        }
        if has_model(&g.remove_edges(&edges)?, r)? {
            return Err(invalid("cover", format!("a theta_{r} model avoids the cover")));
        }
        return Ok(ok("cover", edges.len()));
    }
    let c: ThetaModelCertificate = parse(value, "certificate")?;
    verify_model(g, &c).map_err(|d| invalid("certificate", d.to_string()))?;
    Ok(ok("certificate", 1))
}
