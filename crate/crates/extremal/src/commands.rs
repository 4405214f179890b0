//! Command-level entry points behind the CLI binary.
//!
//! Each subcommand maps parsed inputs to a JSON report (CSV for the flat
//! multiplicity table). Reports are deterministic: identical [`RunConfig`]s,
//! seed included, render byte-identical output.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::dynkin::{builtin_diagram, character_rank_analysis, classify, DynkinTag};
use crate::field::{Field, FieldSpec, Fp};
use crate::generic::{
    certify_generic_iso, realize_affine, realize_affine_a_odd, realize_finite,
    subvariety_products, GenericError,
};
use crate::graph::SimpleGraph;
use crate::lf::{build_bracket, complete_parameters, membership_in_x, parse_param_file, ParamFile};
use crate::sandwich::{verify_sandwich_theorems, SandwichAlgebra, SandwichError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CommandError {
    #[error("{0}")]
    Input(String),
    #[error("basis still grows at degree {0}; raise --cap")]
    CapExceeded(usize),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Input(_) => 2,
            CommandError::CapExceeded(_) => 3,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CommandError {
    CommandError::Input(e.to_string())
}

fn sandwich_err(e: SandwichError) -> CommandError {
    match e {
        SandwichError::DegreeCapExceeded { cap } => CommandError::CapExceeded(cap),
        other => CommandError::Input(other.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    Sandwich,
    Check,
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    Path(PathBuf),
    Diagram(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// One resolved invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub graph: GraphSource,
    pub field: String,
    pub cap: usize,
    pub seed: u64,
    pub params: Option<PathBuf>,
    pub format: Format,
}

/// Rendered report text plus the verdict. `verdict_ok` is false only for a
/// failed membership check; the binary maps that to exit code 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub body: String,
    pub verdict_ok: bool,
}

pub fn run(config: &RunConfig) -> Result<Rendered, CommandError> {
    // Field characteristic is validated before anything else is touched.
    let spec = FieldSpec::parse_name(&config.field).map_err(input_err)?;
    let g = load_graph(&config.graph)?;
    if config.format == Format::Csv && config.command != Command::Sandwich {
        return Err(CommandError::Input(
            "csv output is only available for the sandwich multiplicity table".into(),
        ));
    }
    match config.command {
        Command::Classify => Ok(Rendered {
            body: pretty(&cmd_classify(&g)),
            verdict_ok: true,
        }),
        Command::Sandwich => {
            let (value, csv) = match spec {
                FieldSpec::Rationals => cmd_sandwich::<BigRational>(&g, spec, config.cap)?,
                FieldSpec::PrimeField(_) => cmd_sandwich::<Fp>(&g, spec, config.cap)?,
            };
            let body = match config.format {
                Format::Json => pretty(&value),
                Format::Csv => csv,
            };
            Ok(Rendered {
                body,
                verdict_ok: true,
            })
        }
        Command::Check => {
            let path = config
                .params
                .as_ref()
                .ok_or_else(|| CommandError::Input("check requires --params".into()))?;
            let text = fs::read_to_string(path)
                .map_err(|e| CommandError::Input(format!("cannot read {}: {e}", path.display())))?;
            let (value, member) = match spec {
                FieldSpec::Rationals => cmd_check::<BigRational>(&g, spec, config.cap, &text)?,
                FieldSpec::PrimeField(_) => cmd_check::<Fp>(&g, spec, config.cap, &text)?,
            };
            Ok(Rendered {
                body: pretty(&value),
                verdict_ok: member,
            })
        }
        Command::Generic => {
            let value = match spec {
                FieldSpec::Rationals => {
                    cmd_generic::<BigRational>(&g, spec, config.cap, config.seed)?
                }
                FieldSpec::PrimeField(_) => cmd_generic::<Fp>(&g, spec, config.cap, config.seed)?,
            };
            Ok(Rendered {
                body: pretty(&value),
                verdict_ok: true,
            })
        }
    }
}

fn load_graph(src: &GraphSource) -> Result<SimpleGraph, CommandError> {
    match src {
        GraphSource::Diagram(name) => builtin_diagram(name).map_err(input_err),
        GraphSource::Path(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CommandError::Input(format!("cannot read {}: {e}", p.display())))?;
            SimpleGraph::from_json(&text).map_err(input_err)
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// Diagram classification plus, for affine shapes, the rank analysis of the
/// edge characters against delta.
pub fn cmd_classify(g: &SimpleGraph) -> Value {
    let class = classify(g);
    let rank = if class.is_affine() {
        match character_rank_analysis(g) {
            Ok(r) => json!({
                "case": r.case_number,
                "edge_count": r.edge_count,
                "edge_rank": r.edge_rank,
                "delta_in_edge_span": r.delta_in_edge_span,
                "delta_coefficients": r.delta_coefficients.map(|v| {
                    v.into_iter()
                        .map(|(k, c)| (k, c.to_string()))
                        .collect::<BTreeMap<_, _>>()
                }),
            }),
            Err(_) => Value::Null,
        }
    } else {
        Value::Null
    };
    json!({
        "command": "classify",
        "graph": g.to_json(),
        "class": {
            "name": class.name(),
            "finite": class.is_finite(),
            "affine": class.is_affine(),
            "distinguished_vertex": class
                .distinguished_vertex
                .map(|v| g.label(v).to_string()),
        },
        "rank_analysis": rank,
    })
}

/// Multiplicity table and dimension of the parameter-zero algebra, with the
/// expected-structure verdict when the graph is a Dynkin diagram.
pub fn cmd_sandwich<K: Field>(
    g: &SimpleGraph,
    spec: FieldSpec,
    cap: usize,
) -> Result<(Value, String), CommandError> {
    let alg = SandwichAlgebra::<K>::build(g, spec, cap).map_err(sandwich_err)?;
    let mults = alg.multiplicities();
    let class = classify(g);
    let theorem = if class.tag != DynkinTag::Other {
        match verify_sandwich_theorems(&alg, &class) {
            Ok(t) => json!({
                "expected_dimension": t.expected_dimension,
                "actual_dimension": t.actual_dimension,
                "pass": t.pass,
                "weights": t.weights.iter().map(|(w, e, a)| json!({
                    "weight": w.to_string(),
                    "expected": e,
                    "actual": a,
                })).collect::<Vec<_>>(),
            }),
            Err(_) => Value::Null,
        }
    } else {
        Value::Null
    };
    let value = json!({
        "command": "sandwich",
        "field": spec.to_string(),
        "cap": cap,
        "graph": g.to_json(),
        "class": class.name(),
        "dimension": alg.dimension(),
        "max_degree": alg.max_degree(),
        "multiplicities": mults.iter().map(|(w, m)| json!({
            "weight": w.to_string(),
            "multiplicity": m,
        })).collect::<Vec<_>>(),
        "theorem": theorem,
    });
    let mut csv = String::from("weight,multiplicity\n");
    for (w, m) in &mults {
        csv.push_str(&format!("\"{w}\",{m}\n"));
    }
    csv.push_str(&format!("dimension,{}\n", alg.dimension()));
    Ok((value, csv))
}

/// Membership verdict for a parameter file, with violation witnesses.
pub fn cmd_check<K: Field>(
    g: &SimpleGraph,
    spec: FieldSpec,
    cap: usize,
    params_text: &str,
) -> Result<(Value, bool), CommandError> {
    let sand = SandwichAlgebra::<K>::build(g, spec, cap).map_err(sandwich_err)?;
    let file = parse_param_file::<K>(&sand, params_text).map_err(input_err)?;
    let (params, form) = match file {
        ParamFile::Edges { values, delta } => (
            complete_parameters(&sand, &values, delta).map_err(input_err)?,
            "edges",
        ),
        ParamFile::Full(p) => (p, "full"),
    };
    let alg = build_bracket(&sand, params.clone());
    let verdict = membership_in_x(&alg);
    let value = json!({
        "command": "check",
        "field": spec.to_string(),
        "cap": cap,
        "graph": g.to_json(),
        "parameter_form": form,
        "parameters": params.to_json(&sand),
        "member": verdict.member,
        "witnesses": verdict.witnesses,
    });
    Ok((value, verdict.member))
}

/// Isomorphism certificate from a seeded generic realization. Even cycles
/// get the extended rank-one construction and report both sides of the
/// alternating edge-form product.
pub fn cmd_generic<K: Field>(
    g: &SimpleGraph,
    spec: FieldSpec,
    cap: usize,
    seed: u64,
) -> Result<Value, CommandError> {
    let class = classify(g);
    let sand = SandwichAlgebra::<K>::build(g, spec, cap).map_err(sandwich_err)?;
    let (construction, cert, subvariety) = if class.is_finite() {
        let (alg, tuple) = realize_finite::<K>(g, spec, seed).map_err(generic_err)?;
        let cert = certify_generic_iso(&alg, &tuple, &sand).map_err(generic_err)?;
        ("finite", cert, Value::Null)
    } else if class.is_affine() {
        let even_cycle = matches!(class.tag, DynkinTag::AffineA(n) if n % 2 == 1);
        if even_cycle {
            let real = realize_affine_a_odd::<K>(g, spec, seed).map_err(generic_err)?;
            let (lhs, rhs) = subvariety_products(&real.matrices, &real.tuple, &real.order)
                .map_err(generic_err)?;
            let cert = certify_generic_iso(&real.matrices, &real.tuple, &sand)
                .map_err(generic_err)?;
            let sub = json!({
                "lhs": lhs.to_string(),
                "rhs": rhs.to_string(),
                "escaped": lhs != rhs,
            });
            ("extended-cycle", cert, sub)
        } else {
            let real = realize_affine::<K>(g, spec, seed).map_err(generic_err)?;
            let cert =
                certify_generic_iso(&real.chevalley, &real.tuple, &sand).map_err(generic_err)?;
            ("affine", cert, Value::Null)
        }
    } else {
        return Err(CommandError::Input(
            "generic realization needs a finite or affine Dynkin diagram".into(),
        ));
    };
    Ok(json!({
        "command": "generic",
        "field": spec.to_string(),
        "cap": cap,
        "seed": seed,
        "graph": g.to_json(),
        "class": class.name(),
        "construction": construction,
        "certificate": {
            "d1": cert.d1,
            "d2": cert.d2,
            "member": cert.member,
            "isomorphic": cert.member && cert.d1 == cert.d2,
            "parameters": cert.params.to_json(&sand),
        },
        "subvariety": subvariety,
    }))
}

fn generic_err(e: GenericError) -> CommandError {
    CommandError::Input(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagram(name: &str) -> GraphSource {
        GraphSource::Diagram(name.to_string())
    }

    fn config(command: Command, graph: GraphSource) -> RunConfig {
        RunConfig {
            command,
            graph,
            field: "Q".to_string(),
            cap: 24,
            seed: 11,
            params: None,
            format: Format::Json,
        }
    }

    fn parse(body: &str) -> Value {
        serde_json::from_str(body).unwrap()
    }

    #[test]
    fn classify_reports_the_three_situations() {
        let triangle = run(&config(Command::Classify, diagram("A2~"))).unwrap();
        let v = parse(&triangle.body);
        assert_eq!(v["class"]["name"], "A2~");
        assert_eq!(v["rank_analysis"]["case"], 2);
        assert_eq!(
            v["rank_analysis"]["delta_coefficients"]["0-1"],
            "1/2"
        );

        let four_cycle = parse(&run(&config(Command::Classify, diagram("A3~"))).unwrap().body);
        assert_eq!(four_cycle["class"]["name"], "A3~");
        assert_eq!(four_cycle["rank_analysis"]["case"], 3);
        assert_eq!(four_cycle["rank_analysis"]["delta_coefficients"], Value::Null);

        let path = parse(&run(&config(Command::Classify, diagram("A3"))).unwrap().body);
        assert_eq!(path["class"]["name"], "A3");
        assert_eq!(path["rank_analysis"], Value::Null);
        assert_eq!(path["class"]["distinguished_vertex"], Value::Null);
    }

    #[test]
    fn sandwich_reports_match_known_dimensions() {
        let edge = parse(&run(&config(Command::Sandwich, diagram("A2"))).unwrap().body);
        assert_eq!(edge["dimension"], 3);
        assert_eq!(edge["multiplicities"].as_array().unwrap().len(), 3);
        for row in edge["multiplicities"].as_array().unwrap() {
            assert_eq!(row["multiplicity"], 1);
        }
        assert_eq!(edge["theorem"]["pass"], true);

        let triangle = parse(&run(&config(Command::Sandwich, diagram("A2~"))).unwrap().body);
        assert_eq!(triangle["dimension"], 8);
        assert_eq!(triangle["theorem"]["pass"], true);
        let delta_row = triangle["multiplicities"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["weight"] == "(1,1,1)")
            .unwrap();
        assert_eq!(delta_row["multiplicity"], 2);
    }

    #[test]
    fn csv_is_restricted_to_the_multiplicity_table() {
        let mut cfg = config(Command::Sandwich, diagram("A2"));
        cfg.format = Format::Csv;
        let out = run(&cfg).unwrap();
        let lines: Vec<&str> = out.body.lines().collect();
        assert_eq!(lines[0], "weight,multiplicity");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[4], "dimension,3");

        let mut bad = config(Command::Classify, diagram("A2"));
        bad.format = Format::Csv;
        let err = run(&bad).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn check_verdicts_and_exit_semantics() {
        let dir = std::env::temp_dir();
        let zero = dir.join("cmd-check-zero.json");
        fs::write(&zero, r#"{"edges":{"1-2":"0"}}"#).unwrap();
        let mut cfg = config(Command::Check, diagram("A2"));
        cfg.params = Some(zero.clone());
        let out = run(&cfg).unwrap();
        assert!(out.verdict_ok);
        let v = parse(&out.body);
        assert_eq!(v["member"], true);
        assert_eq!(v["parameter_form"], "edges");

        let asym = dir.join("cmd-check-asym.json");
        fs::write(
            &asym,
            r#"{"1": {"2": "1"}, "2": {"1": "2"}}"#,
        )
        .unwrap();
        cfg.params = Some(asym.clone());
        let out = run(&cfg).unwrap();
        assert!(!out.verdict_ok);
        let v = parse(&out.body);
        assert_eq!(v["member"], false);
        assert_eq!(v["parameter_form"], "full");
        assert!(!v["witnesses"].as_array().unwrap().is_empty());

        let mut missing = config(Command::Check, diagram("A2"));
        missing.params = None;
        assert_eq!(run(&missing).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn generic_certificates_for_the_three_shapes() {
        let triangle = parse(&run(&config(Command::Generic, diagram("A2~"))).unwrap().body);
        assert_eq!(triangle["construction"], "affine");
        assert_eq!(triangle["certificate"]["d1"], 8);
        assert_eq!(triangle["certificate"]["d2"], 8);
        assert_eq!(triangle["certificate"]["isomorphic"], true);

        let four_cycle = parse(&run(&config(Command::Generic, diagram("A3~"))).unwrap().body);
        assert_eq!(four_cycle["construction"], "extended-cycle");
        assert_eq!(four_cycle["certificate"]["d1"], 15);
        assert_eq!(four_cycle["certificate"]["isomorphic"], true);
        assert_eq!(four_cycle["subvariety"]["escaped"], true);

        let finite = parse(&run(&config(Command::Generic, diagram("A3"))).unwrap().body);
        assert_eq!(finite["construction"], "finite");
        assert_eq!(finite["certificate"]["d1"], 6);
        assert_eq!(finite["certificate"]["d2"], 6);
    }

    #[test]
    fn identical_configs_render_identical_bytes() {
        let cfg = config(Command::Generic, diagram("A3~"));
        let first = run(&cfg).unwrap();
        let second = run(&cfg).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn input_errors_and_cap_errors_are_distinguished() {
        let unknown = run(&config(Command::Classify, diagram("Z9")));
        assert_eq!(unknown.unwrap_err().exit_code(), 2);

        let mut bad_field = config(Command::Sandwich, diagram("A2"));
        bad_field.field = "F2".to_string();
        assert_eq!(run(&bad_field).unwrap_err().exit_code(), 2);

        let mut tight = config(Command::Sandwich, diagram("A2~"));
        tight.cap = 2;
        let err = run(&tight).unwrap_err();
        assert_eq!(err, CommandError::CapExceeded(2));
        assert_eq!(err.exit_code(), 3);

        let star = GraphSource::Path(std::env::temp_dir().join("cmd-star.json"));
        fs::write(
            std::env::temp_dir().join("cmd-star.json"),
            r#"{"vertices":["c","1","2","3","4","5"],
                "edges":[["c","1"],["c","2"],["c","3"],["c","4"],["c","5"]]}"#,
        )
        .unwrap();
        let mut cfg = config(Command::Generic, star);
        let out = run(&cfg);
        assert_eq!(out.unwrap_err().exit_code(), 2);
        cfg.command = Command::Classify;
        let v = parse(&run(&cfg).unwrap().body);
        assert_eq!(v["class"]["name"], "other");
    }

    #[test]
    fn prime_field_reports_parse_and_run() {
        let mut cfg = config(Command::Sandwich, diagram("A2~"));
        cfg.field = "F5".to_string();
        let v = parse(&run(&cfg).unwrap().body);
        assert_eq!(v["dimension"], 8);
        assert_eq!(v["field"], "F5");
    }
}
