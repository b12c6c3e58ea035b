use std::str::FromStr;

use serde_json::{json, Value};

use cayley::bbw::bulk_cohomology;
use cayley::cg::{cg_cohomology_with_serre, CohomologyResult, CG};
use cayley::derived::{euler, presets};
use cayley::g2::{self, G2Forms, Subspace};
use cayley::linalg::{Matrix, Q};
use cayley::table::cohomology_table;
use cayley::{check_exceptional_collection, complex_ext, lefschetz_validate, residual_check, Exec, Verdict};

use crate::error::CommandError;
use crate::parse::{cg15_text, parse, parse_collection, to_bundle, to_complex};
use crate::report::{dims_line, graded_json, result_json, ReportDocument};
use crate::verify::{self, Criterion};
use crate::{EXIT_FAIL, EXIT_INDETERMINATE, EXIT_OK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Space {
    Gr,
    Cg,
}

fn result_lines(r: &CohomologyResult) -> Vec<String> {
    match r {
        CohomologyResult::Determined(g) if g.is_zero() => vec!["0".to_string()],
        CohomologyResult::Determined(g) => vec![format!("{g}"), dims_line(g)],
        CohomologyResult::Indeterminate(p) => {
            let mut v = vec!["indeterminate; first page:".to_string()];
            v.extend(p.to_string().lines().map(str::to_string));
            v
        }
    }
}

fn exit_for(r: &CohomologyResult) -> i32 {
    match r {
        CohomologyResult::Determined(_) => EXIT_OK,
        CohomologyResult::Indeterminate(_) => EXIT_INDETERMINATE,
    }
}

pub fn coh(space: Space, expr: &str) -> Result<ReportDocument, CommandError> {
    let e = parse(expr)?;
    let b = to_bundle(&e)?;
    let mut doc = ReportDocument::new("coh").input("space", format!("{space:?}").to_lowercase()).input("expr", &e);
    let (result, route) = match space {
        Space::Gr => (CohomologyResult::Determined(bulk_cohomology(CG.ambient, &b)), None),
        Space::Cg => {
            let (r, route) = cg_cohomology_with_serre(&b);
            let r = match r {
                CohomologyResult::Determined(g) => CohomologyResult::Determined(g.modulo_det()),
                other => other,
            };
            (r, Some(route))
        }
    };
    doc.data = json!({"bundle": b.to_string(), "result": result_json(&result), "route": route.map(|r| r.to_string())});
    doc.lines(&format!("H*({e})"), result_lines(&result));
    if let Some(r) = route {
        doc.lines("", vec![format!("route: {r}")]);
    }
    doc.exit_code = exit_for(&result);
    Ok(doc)
}

pub fn ext(a: &str, b: &str) -> Result<ReportDocument, CommandError> {
    let x = to_complex(&parse(a)?)?;
    let y = to_complex(&parse(b)?)?;
    let o = complex_ext(&x, &y)?;
    let mut doc = ReportDocument::new("ext").input("from", &x.name).input("to", &y.name);
    doc.data = json!({"result": result_json(&o.result), "route": o.route.to_string()});
    doc.lines(&format!("Ext*({}, {})", x.name, y.name), result_lines(&o.result));
    doc.lines("", vec![format!("route: {}", o.route)]);
    doc.exit_code = exit_for(&o.result);
    Ok(doc)
}

pub fn euler_cmd(a: &str, b: &str) -> Result<ReportDocument, CommandError> {
    let x = to_complex(&parse(a)?)?;
    let y = to_complex(&parse(b)?)?;
    let chi = euler(&x, &y);
    let mut doc = ReportDocument::new("euler").input("from", &x.name).input("to", &y.name);
    doc.data = json!({"chi": chi.to_string()});
    doc.lines(&format!("chi({}, {})", x.name, y.name), vec![chi.to_string()]);
    Ok(doc)
}

fn weight_label(w: [i64; 3]) -> String {
    format!("S{{{},{},{}}}", w[0], w[1], w[2])
}

pub fn table(exec: Exec) -> ReportDocument {
    let rows = cohomology_table(exec);
    let mut doc = ReportDocument::new("table");
    let mut data = Vec::new();
    let mut out = Vec::new();
    for r in &rows {
        let cg = match &r.cg {
            CohomologyResult::Determined(g) => g.to_string(),
            CohomologyResult::Indeterminate(_) => "indeterminate".to_string(),
        };
        let shade = if r.shaded { "shaded" } else { "" };
        out.push(vec![weight_label(r.weight), cg, r.ambient.to_string(), shade.to_string(), r.route.to_string()]);
        data.push(json!({
            "weight": r.weight,
            "cg": result_json(&r.cg),
            "ambient": graded_json(&r.ambient),
            "shaded": r.shaded,
            "route": r.route.to_string(),
        }));
    }
    doc.data = Value::Array(data);
    doc.table("H*(CG, S{c}U*) and H*(Gr(3,7), S{c}U*)", &["weight", "CG", "Gr(3,7)", "", "route"], out);
    doc.exit_code = if rows.iter().all(|r| r.cg.determined().is_some()) { EXIT_OK } else { EXIT_INDETERMINATE };
    doc
}

pub enum CollectionSource {
    Builtin,
    File(std::path::PathBuf),
}

pub fn check_collection(src: CollectionSource, print: bool, exec: Exec) -> Result<ReportDocument, CommandError> {
    let (text, label) = match &src {
        CollectionSource::Builtin => (cg15_text(), "builtin cg15".to_string()),
        CollectionSource::File(p) => (std::fs::read_to_string(p)?, p.display().to_string()),
    };
    let file = parse_collection(&text)?;
    let mut doc = ReportDocument::new("check-collection").input("collection", label);
    if print {
        doc.lines("collection", text.lines().map(str::to_string).collect());
        doc.data = json!({"collection": text.lines().collect::<Vec<_>>()});
        return Ok(doc);
    }
    if file.objects.is_empty() {
        return Err(CommandError::Usage("empty collection".into()));
    }
    if matches!(src, CollectionSource::Builtin) {
        debug_assert_eq!(file.objects.len(), presets::cg15().len());
    }
    let t = check_exceptional_collection(&file.objects, exec);
    let n = t.size();
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for i in 0..n {
        let mut row = vec![t.names[i].clone()];
        for j in 0..n {
            let c = t.cell(i, j);
            let s = match &c.result {
                Ok(CohomologyResult::Determined(g)) if g.is_zero() => "0".to_string(),
                Ok(CohomologyResult::Determined(g)) => g.to_string(),
                Ok(CohomologyResult::Indeterminate(_)) => "?".to_string(),
                Err(_) => "!".to_string(),
            };
            let mark = if c.route == cayley::Route::Direct { String::new() } else { format!(" ({})", c.route) };
            row.push(format!("{s}{mark}"));
            cells.push(json!({
                "row": i, "col": j, "kind": format!("{:?}", c.kind),
                "result": match &c.result { Ok(r) => result_json(r), Err(e) => json!({"status": "error", "message": e}) },
                "route": c.route.to_string(),
            }));
        }
        rows.push(row);
    }
    let mut header = vec![""];
    let idx: Vec<String> = (0..n).map(|j| j.to_string()).collect();
    header.extend(idx.iter().map(String::as_str));
    doc.table("Ext*(E_i, E_j)", &header, rows);
    doc.lines("objects", t.names.iter().enumerate().map(|(i, s)| format!("{i}: {s}")).collect());
    let verdict = t.verdict();
    let mut lefschetz = None;
    if let Some(b) = &file.blocks {
        let ok = lefschetz_validate(&file.objects, b);
        doc.lines("Lefschetz", vec![format!("blocks {b:?}: {}", if ok { "valid" } else { "invalid" })]);
        lefschetz = Some(ok);
    }
    let fallback: Vec<String> = t.fallback_cells().iter().map(|(i, j, r)| format!("({i},{j}) {r}")).collect();
    if !fallback.is_empty() {
        doc.lines("cells resolved by fallback", fallback.clone());
    }
    let open: Vec<String> = t
        .cells
        .iter()
        .filter(|c| c.satisfied().is_none() && c.kind != cayley::derived::CellKind::Free)
        .map(|c| match &c.result {
            Ok(CohomologyResult::Indeterminate(p)) => format!("({},{}): {}", c.row, c.col, p.to_string().replace('\n', " | ")),
            Ok(_) => format!("({},{})", c.row, c.col),
            Err(e) => format!("({},{}): {e}", c.row, c.col),
        })
        .collect();
    if !open.is_empty() {
        doc.lines("unresolved cells", open);
    }
    doc.data = json!({"names": t.names, "cells": cells, "verdict": verdict.to_string(), "lefschetz": lefschetz, "fallback": fallback});
    doc.exit_code = match (&verdict, lefschetz) {
        (Verdict::NotExceptional(_), _) | (_, Some(false)) => EXIT_FAIL,
        (Verdict::Unresolved(_), _) => EXIT_INDETERMINATE,
        (Verdict::Exceptional, _) => EXIT_OK,
    };
    doc.verdict = Some(verdict.to_string());
    Ok(doc)
}

pub fn residual(exec: Exec) -> Result<ReportDocument, CommandError> {
    let rep = residual_check(exec)?;
    let mut doc = ReportDocument::new("residual");
    let mut rows = Vec::new();
    for c in &rep.cells {
        let s = match &c.result {
            Ok(r) => r.to_string().replace('\n', " | "),
            Err(e) => e.clone(),
        };
        let status = match c.holds() {
            Some(true) => "ok",
            Some(false) => "FAILS",
            None => "open",
        };
        rows.push(vec![rep.names[c.row].clone(), rep.names[c.col].clone(), s, c.route.to_string(), status.to_string()]);
    }
    doc.table("Ext*(A_i, A_j)", &["A_i", "A_j", "Ext", "route", "status"], rows);
    doc.lines("Euler pairings", rep.euler.iter().map(|r| format!("{r:?}")).collect());
    doc.lines(
        "tau",
        rep.tau.iter().map(|t| format!("{} -> {}: {}", t.from, t.to, if t.holds { "holds" } else { "fails" })).collect(),
    );
    if let Some(b) = &rep.blocker {
        doc.lines("L_E(R) known by class only", vec![b.clone()]);
    }
    doc.data = json!({
        "names": rep.names,
        "objects": rep.objects,
        "euler": rep.euler.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "cells": rep.cells.iter().map(|c| json!({
            "row": c.row, "col": c.col, "required": c.required, "holds": c.holds(),
            "result": match &c.result { Ok(r) => result_json(r), Err(e) => json!({"status": "error", "message": e}) },
            "route": c.route.to_string(),
        })).collect::<Vec<_>>(),
        "tau": serde_json::to_value(&rep.tau).expect("plain fields"),
        "blocker": rep.blocker,
    });
    doc.exit_code = if rep.fully_verified() && rep.tau_holds() {
        EXIT_OK
    } else if rep.minimum_met() && rep.tau_holds() {
        EXIT_INDETERMINATE
    } else {
        EXIT_FAIL
    };
    doc.verdict = Some(
        match doc.exit_code {
            EXIT_OK => "three completely orthogonal exceptional objects",
            EXIT_INDETERMINATE => "orthogonal on classes; some Ext cells open",
            _ => "orthogonality fails",
        }
        .to_string(),
    );
    Ok(doc)
}

/// A vector: a basis name (`ea`) or seven comma-separated rationals.
pub fn parse_vector(s: &str) -> Result<Vec<Q>, CommandError> {
    if let Some(i) = g2::basis_index(s.trim()) {
        let mut v = vec![cayley::linalg::q(0); g2::DIM];
        v[i] = cayley::linalg::q(1);
        return Ok(v);
    }
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != g2::DIM {
        return Err(CommandError::Usage(format!("'{s}' is neither a basis name nor 7 coordinates")));
    }
    parts
        .iter()
        .map(|p| Q::from_str(p.trim()).map_err(|_| CommandError::Usage(format!("bad rational '{p}'"))))
        .collect()
}

fn subspace(vs: &[String]) -> Result<Subspace, CommandError> {
    let vecs = vs.iter().map(|s| parse_vector(s)).collect::<Result<Vec<_>, _>>()?;
    Ok(Subspace::new(vecs)?)
}

#[derive(Debug, Clone, clap::Subcommand)]
pub enum G2Command {
    /// The invariant forms and their calibration.
    Forms,
    /// The bracket q^-1(nu(x, y, -)).
    Bracket { x: String, y: String },
    /// Orbit and Lie type of the representatives, or of a given 3-space.
    Orbits { vectors: Vec<String> },
    /// i_lambda at the three representatives, printed frame.
    Ilambda,
    /// Rank of lambda(u1, u2, -, -) for a plane, or a random sweep.
    Phirank {
        vectors: Vec<String>,
        #[arg(long, default_value_t = verify::PHI_SAMPLES)]
        samples: usize,
    },
    /// Subalgebra conics at the representatives.
    Conic,
    /// Veronese quadric rank law.
    Veronese {
        #[arg(long, default_value_t = verify::VERONESE_SAMPLES)]
        samples: usize,
    },
    /// Segre quadric rank law.
    Segre {
        #[arg(long, default_value_t = verify::SEGRE_SAMPLES)]
        samples: usize,
    },
}

fn matrix_lines(m: &Matrix) -> Vec<String> {
    format!("{m:?}").lines().map(str::to_string).collect()
}

pub fn g2_cmd(cmd: &G2Command, seed: u64, exec: Exec) -> Result<ReportDocument, CommandError> {
    let f = G2Forms::standard();
    let mut doc = ReportDocument::new("g2");
    match cmd {
        G2Command::Forms => {
            doc = doc.input("sub", "forms");
            let jc = f.jacobiator_constant();
            doc.lines(
                "forms",
                vec![
                    format!("lambda = {}", f.lambda),
                    format!("lambda (reflected frame) = {}", f.printed_lambda()),
                    format!("nu = {}", f.nu),
                    format!("nu = {} q(omega . lambda)", f.calibration),
                    format!("J(x,y,z) = {} q^-1(lambda(x,y,z,-))", jc.as_ref().map_or("?".into(), |c| c.to_string())),
                ],
            );
            doc.lines("q", matrix_lines(&f.b));
            doc.data = json!({
                "lambda": f.lambda.to_string(), "nu": f.nu.to_string(),
                "calibration": f.calibration.to_string(), "jacobiator_factor": jc.map(|c| c.to_string()),
            });
        }
        G2Command::Bracket { x, y } => {
            doc = doc.input("x", x).input("y", y);
            let b = f.bracket(&parse_vector(x)?, &parse_vector(y)?);
            let s = g2::MultiVector::vector(&b).to_string();
            doc.lines(&format!("[{x}, {y}]"), vec![s.clone()]);
            doc.data = json!({"bracket": b.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "display": s});
        }
        G2Command::Orbits { vectors } => {
            let points: Vec<(String, Subspace)> = if vectors.is_empty() {
                vec![("P0".into(), g2::p0()), ("P1".into(), g2::p1()), ("P2".into(), g2::p2())]
            } else {
                doc = doc.input("vectors", vectors.join(" "));
                vec![("U".into(), subspace(vectors)?)]
            };
            let mut rows = Vec::new();
            let mut data = Vec::new();
            for (name, p) in points {
                let on = f.is_cg_point(&p)?;
                let s = g2::classify_point(&f, &p, None);
                let orbit = s.orbit.as_ref().map(|o| o.to_string()).unwrap_or_else(|e| e.clone());
                let lie = s.lie.as_ref().map(|o| o.to_string()).unwrap_or_else(|e| e.clone());
                let conic = s.conic_rank.map_or("-".into(), |r| r.to_string());
                rows.push(vec![name.clone(), on.to_string(), orbit.clone(), lie.clone(), conic.clone()]);
                data.push(json!({"name": name, "on_cg": on, "orbit": orbit, "lie": lie, "conic_rank": s.conic_rank}));
                if !on {
                    doc.exit_code = EXIT_FAIL;
                }
            }
            doc.table("orbits", &["point", "on CG", "orbit", "Lie type", "conic rank"], rows);
            doc.data = Value::Array(data);
        }
        G2Command::Ilambda => {
            let lp = f.printed_lambda();
            let mut lines = Vec::new();
            for (pair, _) in verify::I_LAMBDA_P2 {
                let (a, b) = (g2::basis_index(pair.0).expect("name"), g2::basis_index(pair.1).expect("name"));
                lines.push(format!("P2 i({}^{}) = {}", pair.0, pair.1, g2::i_lambda_form(&lp, a, b)));
            }
            for (label, u, rows) in [
                ("P0", ["e0", "eg", "e-g"], verify::I_LAMBDA_P0),
                ("P1", ["e0", "eb", "e-g"], verify::I_LAMBDA_P1),
            ] {
                let ui: Vec<usize> = u.iter().map(|n| g2::basis_index(n).expect("name")).collect();
                for (pair, _) in rows {
                    let (a, b) = (g2::basis_index(pair.0).expect("name"), g2::basis_index(pair.1).expect("name"));
                    lines.push(format!("{label} i({}^{}) = {}", pair.0, pair.1, g2::i_lambda_quotient(&lp, &ui, a, b)));
                }
            }
            doc.data = json!({"values": lines});
            doc.lines("i_lambda", lines);
        }
        G2Command::Phirank { vectors, samples } => {
            if vectors.is_empty() {
                doc = doc.input("samples", samples).input("seed", seed);
                let hist = g2::phi_rank_sweep(*samples, seed, exec);
                doc.lines("rank histogram", hist.iter().map(|(r, n)| format!("rank {r}: {n}")).collect());
                if hist.keys().any(|r| *r != 2 && *r != 4) {
                    doc.exit_code = EXIT_FAIL;
                }
                doc.data = json!({"histogram": hist});
            } else {
                doc = doc.input("vectors", vectors.join(" "));
                let r = f.phi_lambda_rank(&subspace(vectors)?)?;
                doc.lines("rank", vec![r.to_string()]);
                doc.data = json!({"rank": r});
            }
        }
        G2Command::Conic => {
            let mut data = Vec::new();
            for (name, p) in [("P0", g2::p0()), ("P1", g2::p1()), ("P2", g2::p2())] {
                let m = f.subalgebra_conic(&p)?;
                let mut lines = vec![format!("rank {}", m.rank())];
                lines.extend(matrix_lines(&m));
                doc.lines(name, lines);
                data.push(json!({"point": name, "rank": m.rank()}));
            }
            doc.data = Value::Array(data);
        }
        G2Command::Veronese { samples } => {
            doc = doc.input("samples", samples).input("seed", seed);
            let (full, two) = g2::veronese_sweep(*samples, seed, exec);
            let ok3 = full.iter().filter(|s| s.holds()).count();
            let ok2 = two.iter().filter(|s| s.holds()).count();
            doc.lines(
                "rank law",
                vec![
                    format!("rank-3 f -> rank 6: {ok3}/{}", full.len()),
                    format!("rank-2 f -> rank 4, kernel <uu, vv>: {ok2}/{}", two.len()),
                ],
            );
            if ok3 < full.len() || ok2 < two.len() {
                doc.exit_code = EXIT_FAIL;
            }
            doc.data = json!({"rank3_ok": ok3, "rank2_ok": ok2, "samples": samples});
        }
        G2Command::Segre { samples } => {
            doc = doc.input("samples", samples).input("seed", seed);
            let s = g2::segre_example();
            let r = s.quadric().rank();
            let ranks = g2::segre_sweep(*samples, seed, exec);
            let ok = ranks.iter().filter(|r| **r == 12).count();
            doc.lines(
                "rank law",
                vec![format!("example: quadric rank {r}, conic rank {}", s.conic().rank()), format!("smooth conic -> rank 12: {ok}/{samples}")],
            );
            if r != 10 || ok < *samples {
                doc.exit_code = EXIT_FAIL;
            }
            doc.data = json!({"example_rank": r, "smooth_ok": ok, "samples": samples});
        }
    }
    Ok(doc)
}

pub fn criteria_report(cs: &[Criterion], seed: u64) -> ReportDocument {
    let mut doc = ReportDocument::new("verify-all").input("seed", seed);
    let mut rows = Vec::new();
    for c in cs {
        rows.push(vec![c.id.to_string(), c.title.clone(), if c.pass() { "PASS" } else { "FAIL" }.to_string()]);
    }
    doc.table("criteria", &["#", "criterion", "result"], rows);
    for c in cs {
        let lines = c
            .checks
            .iter()
            .map(|k| {
                let d = if k.detail.is_empty() { String::new() } else { format!(" ({})", k.detail) };
                format!("[{}] {}{d}", if k.pass { "ok" } else { "FAIL" }, k.name)
            })
            .collect();
        doc.lines(&format!("{} {}", c.id, c.title), lines);
    }
    doc.data = json!(cs
        .iter()
        .map(|c| json!({"id": c.id, "title": c.title, "pass": c.pass(), "checks": c.checks}))
        .collect::<Vec<_>>());
    let failed: Vec<String> = cs.iter().filter(|c| !c.pass()).map(|c| c.id.to_string()).collect();
    doc.exit_code = if failed.is_empty() { EXIT_OK } else { EXIT_FAIL };
    doc.verdict = Some(if failed.is_empty() {
        "all criteria pass".to_string()
    } else {
        format!("failing: {}", failed.join(", "))
    });
    doc
}

pub fn verify_all(seed: u64, exec: Exec) -> ReportDocument {
    criteria_report(&verify::run_all(seed, exec), seed)
}
