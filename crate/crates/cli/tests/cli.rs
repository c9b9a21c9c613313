use std::process::{Command, Output};

use serde_json::{json, Value};

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_metahecke"));
    cmd.args(args).env_remove("METAHECKE_MAX_Q");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = run_env(args, &[]);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc)
}

#[test]
fn params_savin_example() {
    let (code, doc) = run(&[
        "params", "--cover", "savin", "--n", "6", "--l0", "3", "--r0", "1", "--t", "2",
    ]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!((&doc["n0"], &doc["d0"], &doc["s0"]), (&json!(1), &json!(1), &json!(1)));
    assert_eq!(doc["s_star"], "1/2");
    assert_eq!(doc["command"], "params");
    assert_eq!(doc["input"]["cover"], "savin");
    assert_eq!(doc["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn congruence_kp_example() {
    let (code, doc) = run(&[
        "congruence",
        "--n",
        "4",
        "--c",
        "0",
        "--d",
        "1",
        "--l",
        "1,1",
        "--r",
        "1,1",
    ]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["hnf"], json!([[4, 0], [0, 4]]));
    assert_eq!(doc["family"], "kp");
    assert_eq!(doc["agree"], true);
}

#[test]
fn hecke_quadratic_example() {
    let (code, doc) = run(&["hecke-mul", "--t", "2", "--s", "1", "--lhs", "s1", "--rhs", "s1"]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["product"], json!({"id": "z", "s1": "z-1"}));
}

#[test]
fn hilbert_and_routes() {
    let (_, doc) = run(&["hilbert", "--p", "5", "--n", "4", "--x", "1,0", "--y", "1,0"]);
    assert_eq!(doc["exponent"], 2);
    let (_, doc) = run(&[
        "hilbert", "--p", "5", "--n", "4", "--x", "1,0", "--y", "0,1", "--f", "2",
    ]);
    assert_eq!(doc["agree"], true);
    assert_eq!(doc["q_ext"], 25);
}

#[test]
fn commutator_modes() {
    let (code, doc) = run(&[
        "commutator",
        "--cover",
        "kp",
        "--n",
        "4",
        "--p",
        "5",
        "--x",
        "1,0;0,1",
        "--y",
        "0,3;1,2",
    ]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["routes"]["agree"], true);
    let (code, doc) = run(&[
        "commutator",
        "--c",
        "1",
        "--d",
        "3",
        "--n",
        "6",
        "--p",
        "7",
        "--random",
        "40",
        "--seed",
        "3",
    ]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!((&doc["checked"], &doc["agree"]), (&json!(40), &json!(true)));

    let dir = std::env::temp_dir().join(format!("metahecke-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("torus.json");
    let torus = json!({
        "u": [{"degree": 2, "kind": "unramified", "v": 1, "u": 3}, {"degree": 1, "kind": "ramified", "v": 0, "u": 1}],
        "v": [{"degree": 2, "kind": "unramified", "v": 0, "u": 5}, {"degree": 1, "kind": "ramified", "v": 1, "u": 0}],
    });
    std::fs::write(&path, torus.to_string()).unwrap();
    let (code, doc) = run(&[
        "commutator",
        "--cover",
        "savin",
        "--n",
        "4",
        "--p",
        "5",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{doc}");
    assert!(doc["commutator"].as_u64().unwrap() < 4);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn type_commands() {
    let (_, doc) = run(&[
        "w0check", "--cover", "kp", "--n", "3", "--r0", "2", "--l0", "1", "--t", "2",
    ]);
    assert_eq!((&doc["equal"], &doc["index"]), (&json!(true), &json!(1)));
    let (_, doc) = run(&["green-l0", "--q", "3", "--m0", "2", "--n", "8", "--xi", "1"]);
    assert_eq!((&doc["o"], &doc["l"]), (&json!(1), &json!(2)));
    let (_, doc) = run(&[
        "reducibility",
        "--cover",
        "kp",
        "--n",
        "3",
        "--r0",
        "2",
        "--l0",
        "1",
        "--t",
        "2",
    ]);
    assert_eq!((&doc["s_star"], &doc["consistent"]), (&json!("1/6"), &json!(true)));
    let (_, doc) = run(&["scan-w0", "--n-max", "6", "--t-max", "2", "--r0-max", "2"]);
    assert_eq!(doc["summary"]["family_failures"], 0);
    assert_eq!(doc["summary"]["total"], doc["rows"].as_array().unwrap().len());
}

#[test]
fn induce_reducible_point() {
    let (code, doc) = run(&["induce", "--t", "2", "--x", "1,4", "--specialize", "v=2"]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["module"]["action"]["s1"], json!([["0", "z"], ["1", "z-1"]]));
    assert_eq!(doc["specialized"]["irreducible"], false);
    assert_eq!(doc["specialized"]["constituents"].as_array().unwrap().len(), 2);
    let (_, doc) = run(&["induce", "--t", "2", "--x", "1,16", "--specialize", "2"]);
    assert_eq!(doc["specialized"]["irreducible"], true);
}

#[test]
fn domain_errors_exit_one() {
    let (code, doc) = run(&["scan-w0", "--n-max", "25", "--t-max", "2", "--r0-max", "2"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], "typeparams");
    let (code, doc) = run(&["hilbert", "--p", "5", "--n", "3", "--x", "1,0", "--y", "1,0"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], "hilbert");
}

#[test]
fn malformed_input_exits_two() {
    let (code, doc) = run(&["params", "--n", "6", "--r0", "1", "--l0", "1", "--t", "2"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "input");
    let out = run_env(&["hilbert", "--p", "5", "--n", "4", "--x", "1", "--y", "1,0"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let (code, _) = run(&[
        "commutator",
        "--cover",
        "kp",
        "--n",
        "4",
        "--p",
        "5",
        "--input",
        "/nonexistent/file.json",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "commutator",
        "--cover",
        "savin",
        "--n",
        "6",
        "--p",
        "7",
        "--random",
        "25",
        "--seed",
        "11",
        "--compact",
    ];
    let a = run_env(&args, &[]).stdout;
    let b = run_env(&args, &[]).stdout;
    assert_eq!(a, b);
    assert_eq!(a.iter().filter(|&&c| c == b'\n').count(), 1);
    let c = run_env(&["induce", "--t", "3", "--x", "1,v^3,v^-5+1"], &[]).stdout;
    assert_eq!(c, run_env(&["induce", "--t", "3", "--x", "1,v^3,v^-5+1"], &[]).stdout);
}

#[test]
fn max_q_env_caps_fields() {
    let args = [
        "hilbert", "--p", "11", "--k", "2", "--n", "4", "--x", "1,0", "--y", "1,0",
    ];
    assert_eq!(run_env(&args, &[]).status.code(), Some(0));
    let out = run_env(&args, &[("METAHECKE_MAX_Q", "100")]);
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["error"]["kind"], "field");
    // the unramified extension is capped too
    let ext = [
        "hilbert", "--p", "5", "--n", "4", "--x", "1,0", "--y", "0,1", "--f", "3",
    ];
    assert_eq!(run_env(&ext, &[("METAHECKE_MAX_Q", "100")]).status.code(), Some(1));
    assert_eq!(run_env(&ext, &[("METAHECKE_MAX_Q", "200")]).status.code(), Some(0));
    assert_eq!(run_env(&args, &[("METAHECKE_MAX_Q", "zero")]).status.code(), Some(2));
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("metahecke-out-{}.json", std::process::id()));
    let out = run_env(
        &[
            "green-l0",
            "--q",
            "2",
            "--m0",
            "3",
            "--n",
            "7",
            "--xi",
            "1",
            "--output",
            path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["command"], "green-l0");
    std::fs::remove_file(&path).unwrap();
}

fn load_schema(name: &str) -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas/").to_string() + name;
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

/// Structural subset of JSON Schema: `$ref` to sibling files, `allOf`, `type`,
/// `required`, `properties`, `additionalProperties`, `items`, `enum`.
fn conforms(doc: &Value, schema: &Value, root: &Value) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let target = match r.strip_prefix("#/$defs/") {
            Some(def) => root["$defs"][def].clone(),
            None => load_schema(r),
        };
        conforms(doc, &target, if r.starts_with('#') { root } else { &target })?;
    }
    for sub in schema.get("allOf").and_then(Value::as_array).into_iter().flatten() {
        conforms(doc, sub, root)?;
    }
    if let Some(ty) = schema.get("type") {
        let types: Vec<&str> = match ty {
            Value::Array(ts) => ts.iter().filter_map(Value::as_str).collect(),
            t => vec![t.as_str().unwrap()],
        };
        let ok = types.iter().any(|t| match *t {
            "object" => doc.is_object(),
            "array" => doc.is_array(),
            "string" => doc.is_string(),
            "integer" => doc.is_i64() || doc.is_u64(),
            "boolean" => doc.is_boolean(),
            "null" => doc.is_null(),
            _ => false,
        });
        if !ok {
            return Err(format!("{doc} is not {ty}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(doc) {
            return Err(format!("{doc} not in {options:?}"));
        }
    }
    if let Some(obj) = doc.as_object() {
        for key in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            if !obj.contains_key(key.as_str().unwrap()) {
                return Err(format!("missing {key}"));
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (k, v) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(sub) => conforms(v, sub, root).map_err(|e| format!("{k}: {e}"))?,
                None => match schema.get("additionalProperties") {
                    Some(Value::Bool(false)) => return Err(format!("unexpected key {k}")),
                    Some(sub @ Value::Object(_)) => conforms(v, sub, root).map_err(|e| format!("{k}: {e}"))?,
                    _ => {}
                },
            }
        }
    }
    if let (Some(items), Some(sub)) = (doc.as_array(), schema.get("items")) {
        for x in items {
            conforms(x, sub, root)?;
        }
    }
    Ok(())
}

fn assert_conforms(doc: &Value, schema_file: &str) {
    let schema = load_schema(schema_file);
    if let Err(e) = conforms(doc, &schema, &schema) {
        panic!("{schema_file}: {e}\n{doc}");
    }
}

#[test]
fn outputs_match_schemas() {
    let cases: &[(&str, &[&str])] = &[
        (
            "hilbert",
            &[
                "hilbert", "--p", "5", "--n", "4", "--x", "1,0", "--y", "0,1", "--f", "2",
            ],
        ),
        (
            "commutator",
            &[
                "commutator",
                "--cover",
                "kp",
                "--n",
                "4",
                "--p",
                "5",
                "--x",
                "1,0;0,1",
                "--y",
                "0,3;1,2",
            ],
        ),
        (
            "commutator",
            &[
                "commutator",
                "--c",
                "1",
                "--d",
                "1",
                "--n",
                "4",
                "--p",
                "5",
                "--random",
                "5",
            ],
        ),
        (
            "congruence",
            &["congruence", "--cover", "savin", "--n", "6", "--l", "3,3", "--r", "2,5"],
        ),
        (
            "params",
            &[
                "params", "--cover", "kp", "--n", "3", "--r0", "2", "--l0", "1", "--t", "2", "--m0", "1",
            ],
        ),
        (
            "w0check",
            &[
                "w0check", "--cover", "savin", "--n", "6", "--r0", "3", "--l0", "3", "--t", "2",
            ],
        ),
        (
            "green-l0",
            &["green-l0", "--q", "3", "--m0", "4", "--n", "5", "--xi", "1"],
        ),
        (
            "hecke-mul",
            &[
                "hecke-mul",
                "--t",
                "3",
                "--s",
                "2",
                "--lhs",
                "pi*s1",
                "--rhs",
                "s2*pi^-1",
            ],
        ),
        (
            "induce",
            &[
                "induce",
                "--t",
                "2",
                "--s",
                "2",
                "--x",
                "2,1/2",
                "--zval",
                "1",
                "--specialize",
                "v=3",
            ],
        ),
        (
            "reducibility",
            &[
                "reducibility",
                "--cover",
                "savin",
                "--n",
                "6",
                "--r0",
                "3",
                "--l0",
                "3",
                "--t",
                "2",
            ],
        ),
        ("scan-w0", &["scan-w0", "--n-max", "4", "--t-max", "2", "--r0-max", "2"]),
    ];
    for (schema, args) in cases {
        let (code, doc) = run(args);
        assert_eq!(code, 0, "{doc}");
        assert_conforms(&doc, &format!("{schema}.schema.json"));
    }
    let (_, err) = run(&["scan-w0", "--n-max", "99"]);
    assert_conforms(&err, "error.schema.json");
    let torus = json!({
        "u": [{"degree": 3, "kind": "ramified", "v": 1, "u": 2}],
        "v": [{"degree": 3, "kind": "ramified", "v": 2, "u": 1}],
    });
    assert_conforms(&torus, "commutator-input.schema.json");
    let input_schema = load_schema("commutator-input.schema.json");
    assert!(conforms(&json!({"u": [{"degree": 1}], "v": []}), &input_schema, &input_schema).is_err());
}
