//! Built-in modulated-graph presets and the JSON preset file format.
//!
//! A preset is resolved either by built-in name or by filesystem path.  The
//! file format is a single JSON object:
//!
//! ```json
//! {
//!   "name": "my-graph",
//!   "base_field": "rationals",            // or {"prime": 7}
//!   "vertex_fields": {
//!     "1": "base",                        // vertex order = declaration order
//!     "2": {"minpoly": [1, 0, 1]}         // monic, constant term first
//!   },
//!   "edges": [
//!     {
//!       "u": "1", "v": "2",
//!       "bimodule_uv": {"base_dim": 2,
//!                        "left_gen_action": [[...]],
//!                        "right_gen_action": [[...]]},
//!       "bimodule_vu": {...},
//!       "form_into_u": [[...]],
//!       "form_into_v": [[...]]
//!     }
//!   ]
//! }
//! ```
//!
//! Matrices are row-major; entries are JSON integers or rational strings
//! such as `"1/2"`.  `bimodule_uv` is the left-`F_u`, right-`F_v` space;
//! `form_into_u` is the base-valued wire matrix of the `F_u`-valued pairing
//! (see the graph module for the reconstruction rule).  An optional
//! `"params"` object is accepted and recorded but not interpreted; the only
//! parameterized preset, `sl2hat-z`, is generated in code from the `z`
//! value supplied by the caller.

use crate::modgraph::{BimoduleInput, EdgeInput, GraphInput, ModGraph};
use crate::scalar::{parse_rational, scalar_from_json, BaseElem, BaseField};
use crate::{Error, Result};

/// Names resolvable without a file, in sorted order.
pub const BUILTIN_NAMES: &[&str] = &["a1xa1", "a2-lusztig", "a3", "c2", "c2-sqrt2", "sl2hat-z"];

const A1XA1_JSON: &str = include_str!("../assets/a1xa1.json");
const A2_LUSZTIG_JSON: &str = include_str!("../assets/a2-lusztig.json");
const A3_JSON: &str = include_str!("../assets/a3.json");
const C2_JSON: &str = include_str!("../assets/c2.json");
const C2_SQRT2_JSON: &str = include_str!("../assets/c2-sqrt2.json");

fn builtin_text(name: &str) -> Option<&'static str> {
    match name {
        "a1xa1" => Some(A1XA1_JSON),
        "a2-lusztig" => Some(A2_LUSZTIG_JSON),
        "a3" => Some(A3_JSON),
        "c2" => Some(C2_JSON),
        "c2-sqrt2" => Some(C2_SQRT2_JSON),
        _ => None,
    }
}

/// Resolves `spec` as a built-in preset name or a path to a preset file and
/// returns the validated graph.
///
/// `z` is the deformation parameter of the `sl2hat-z` preset, given as a
/// rational string (default `"1"`); passing it with any other preset is an
/// error so that it can never be silently ignored.
pub fn load(spec: &str, z: Option<&str>) -> Result<ModGraph> {
    if spec == "sl2hat-z" {
        let zq = parse_z(z.unwrap_or("1"))?;
        return ModGraph::validate(&sl2hat_input(&zq));
    }
    if let Some(text) = builtin_text(spec) {
        reject_z(spec, z)?;
        return from_json_text(text);
    }
    if std::path::Path::new(spec).is_file() {
        reject_z(spec, z)?;
        let text = std::fs::read_to_string(spec)?;
        return from_json_text(&text);
    }
    Err(Error::UnknownPreset(format!(
        "{spec} (built-in presets: {})",
        BUILTIN_NAMES.join(", ")
    )))
}

fn reject_z(spec: &str, z: Option<&str>) -> Result<()> {
    if z.is_some() {
        return Err(Error::Parse(format!(
            "the z parameter only applies to the sl2hat-z preset, not to {spec}"
        )));
    }
    Ok(())
}

fn parse_z(text: &str) -> Result<BaseElem> {
    let q = parse_rational(text)?;
    let field = BaseField::Rationals;
    let z = field.from_rational(&q)?;
    if field.is_zero(&z) {
        return Err(Error::Parse(
            "the sl2hat-z form parameter must be nonzero".into(),
        ));
    }
    Ok(z)
}

/// The two-vertex affine preset with its deformed pairing: both vertex
/// fields are the base, both bimodules are 2-dimensional with trivial
/// generator actions, and the second form has wire matrix diag(z, −1).
pub fn sl2hat_input(z: &BaseElem) -> GraphInput {
    let q = BaseField::Rationals;
    let id = vec![
        vec![q.from_i64(1), q.from_i64(0)],
        vec![q.from_i64(0), q.from_i64(1)],
    ];
    GraphInput {
        name: "sl2hat-z".into(),
        base: q,
        vertices: vec![("1".into(), None), ("2".into(), None)],
        edges: vec![EdgeInput {
            u: "1".into(),
            v: "2".into(),
            bimodule_uv: BimoduleInput {
                base_dim: 2,
                left_gen_action: id.clone(),
                right_gen_action: id.clone(),
            },
            bimodule_vu: BimoduleInput {
                base_dim: 2,
                left_gen_action: id.clone(),
                right_gen_action: id,
            },
            form_into_u: vec![
                vec![q.from_i64(1), q.from_i64(0)],
                vec![q.from_i64(0), q.from_i64(1)],
            ],
            form_into_v: vec![
                vec![z.clone(), q.from_i64(0)],
                vec![q.from_i64(0), q.from_i64(-1)],
            ],
        }],
    }
}

/// Parses preset JSON text into a validated graph.
pub fn from_json_text(text: &str) -> Result<ModGraph> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("preset JSON: {e}")))?;
    let input = graph_input_from_json(&value)?;
    ModGraph::validate(&input)
}

/// Parses the JSON preset schema into the plain graph description.
pub fn graph_input_from_json(v: &serde_json::Value) -> Result<GraphInput> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("preset must be a JSON object".into()))?;
    let name = obj
        .get("name")
        .and_then(|n| n.as_str())
        .ok_or_else(|| Error::Parse("preset needs a string \"name\"".into()))?
        .to_string();
    let base = base_field_from_json(
        obj.get("base_field")
            .ok_or_else(|| Error::Parse("preset needs \"base_field\"".into()))?,
    )?;
    let fields = obj
        .get("vertex_fields")
        .and_then(|f| f.as_object())
        .ok_or_else(|| Error::Parse("preset needs a \"vertex_fields\" object".into()))?;
    let mut vertices = Vec::new();
    for (vertex, field) in fields {
        let minpoly = match field {
            serde_json::Value::String(s) if s == "base" => None,
            serde_json::Value::Object(m) => {
                let coeffs = m
                    .get("minpoly")
                    .and_then(|c| c.as_array())
                    .ok_or_else(|| {
                        Error::Parse(format!("vertex {vertex}: field needs a \"minpoly\" array"))
                    })?;
                Some(
                    coeffs
                        .iter()
                        .map(|c| scalar_from_json(&base, c))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            _ => {
                return Err(Error::Parse(format!(
                    "vertex {vertex}: field must be \"base\" or {{\"minpoly\": [...]}}"
                )))
            }
        };
        vertices.push((vertex.clone(), minpoly));
    }
    let mut edges = Vec::new();
    if let Some(list) = obj.get("edges") {
        let list = list
            .as_array()
            .ok_or_else(|| Error::Parse("\"edges\" must be an array".into()))?;
        for e in list {
            edges.push(edge_from_json(&base, e)?);
        }
    }
    // tolerated metadata: "params" may record generation parameters
    if let Some(p) = obj.get("params") {
        if !p.is_object() {
            return Err(Error::Parse("\"params\" must be an object".into()));
        }
    }
    Ok(GraphInput {
        name,
        base,
        vertices,
        edges,
    })
}

fn base_field_from_json(v: &serde_json::Value) -> Result<BaseField> {
    let field = match v {
        serde_json::Value::String(s) if s == "rationals" => BaseField::Rationals,
        serde_json::Value::Object(m) => {
            if let Some(inner) = m.get("type") {
                return base_field_from_json(inner);
            }
            let p = m
                .get("prime")
                .and_then(|p| p.as_u64())
                .ok_or_else(|| Error::Parse("base_field object needs a \"prime\"".into()))?;
            BaseField::Prime(p)
        }
        _ => {
            return Err(Error::Parse(
                "base_field must be \"rationals\" or {\"prime\": p}".into(),
            ))
        }
    };
    field.validate()?;
    Ok(field)
}

fn edge_from_json(base: &BaseField, v: &serde_json::Value) -> Result<EdgeInput> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("each edge must be a JSON object".into()))?;
    let named = |key: &str| -> Result<&serde_json::Value> {
        obj.get(key)
            .ok_or_else(|| Error::Parse(format!("edge needs \"{key}\"")))
    };
    let u = named("u")?
        .as_str()
        .ok_or_else(|| Error::Parse("edge \"u\" must be a string".into()))?
        .to_string();
    let vtx = named("v")?
        .as_str()
        .ok_or_else(|| Error::Parse("edge \"v\" must be a string".into()))?
        .to_string();
    Ok(EdgeInput {
        u,
        v: vtx,
        bimodule_uv: bimodule_from_json(base, named("bimodule_uv")?)?,
        bimodule_vu: bimodule_from_json(base, named("bimodule_vu")?)?,
        form_into_u: matrix_from_json(base, named("form_into_u")?, "form_into_u")?,
        form_into_v: matrix_from_json(base, named("form_into_v")?, "form_into_v")?,
    })
}

fn bimodule_from_json(base: &BaseField, v: &serde_json::Value) -> Result<BimoduleInput> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("bimodule must be a JSON object".into()))?;
    let base_dim = obj
        .get("base_dim")
        .and_then(|d| d.as_u64())
        .ok_or_else(|| Error::Parse("bimodule needs an integer \"base_dim\"".into()))?
        as usize;
    let left = obj
        .get("left_gen_action")
        .ok_or_else(|| Error::Parse("bimodule needs \"left_gen_action\"".into()))?;
    let right = obj
        .get("right_gen_action")
        .ok_or_else(|| Error::Parse("bimodule needs \"right_gen_action\"".into()))?;
    Ok(BimoduleInput {
        base_dim,
        left_gen_action: matrix_from_json(base, left, "left_gen_action")?,
        right_gen_action: matrix_from_json(base, right, "right_gen_action")?,
    })
}

fn matrix_from_json(
    base: &BaseField,
    v: &serde_json::Value,
    what: &str,
) -> Result<Vec<Vec<BaseElem>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array of rows")))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse(format!("{what}: each row must be an array")))?;
        out.push(
            row.iter()
                .map(|x| scalar_from_json(base, x))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_validate() {
        for name in BUILTIN_NAMES {
            let g = load(name, None).unwrap();
            assert_eq!(g.name(), *name);
        }
    }

    #[test]
    fn builtin_cartan_types() {
        use crate::oracle::type_label;
        assert_eq!(type_label(load("c2", None).unwrap().cartan()).unwrap(), "B₂/C₂");
        assert_eq!(
            type_label(load("c2-sqrt2", None).unwrap().cartan()).unwrap(),
            "B₂/C₂"
        );
        assert_eq!(
            type_label(load("a2-lusztig", None).unwrap().cartan()).unwrap(),
            "A₂"
        );
        assert_eq!(type_label(load("a3", None).unwrap().cartan()).unwrap(), "A₃");
        assert_eq!(
            type_label(load("a1xa1", None).unwrap().cartan()).unwrap(),
            "A₁×A₁"
        );
        // the affine preset is not finite type
        assert!(!load("sl2hat-z", None).unwrap().cartan().is_finite_type());
    }

    #[test]
    fn c2_json_matches_code_built_graph() {
        let g = load("c2", None).unwrap();
        assert_eq!(g.cartan().c, vec![vec![2, -2], vec![-1, 2]]);
        assert_eq!(g.cartan().d, vec![1, 2]);
        assert_eq!(g.vertex_name(0), "1");
        assert_eq!(g.vertex_name(1), "2");
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn folded_presentation_shares_cartan_data() {
        let a = load("c2", None).unwrap();
        let b = load("c2-sqrt2", None).unwrap();
        assert_eq!(a.cartan(), b.cartan());
    }

    #[test]
    fn z_parameter_controls_deformed_form() {
        let g1 = load("sl2hat-z", None).unwrap();
        assert_eq!(g1.cartan().c, vec![vec![2, -2], vec![-2, 2]]);
        let gm = load("sl2hat-z", Some("-1")).unwrap();
        assert_eq!(gm.cartan(), g1.cartan());
        // the deformed wire matrices differ
        let f1 = g1.form(1, 0).unwrap().tau().clone();
        let fm = gm.form(1, 0).unwrap().tau().clone();
        assert_ne!(f1, fm);
        // fractional z works too
        load("sl2hat-z", Some("3/2")).unwrap();
        assert!(matches!(
            load("sl2hat-z", Some("0")),
            Err(Error::Parse(_))
        ));
        assert!(matches!(load("c2", Some("2")), Err(Error::Parse(_))));
    }

    #[test]
    fn unknown_preset_lists_builtins() {
        match load("nope", None) {
            Err(Error::UnknownPreset(msg)) => assert!(msg.contains("c2")),
            other => panic!("expected unknown preset, got {other:?}"),
        }
    }

    #[test]
    fn file_paths_load_and_malformed_files_error() {
        let dir = std::env::temp_dir().join("preset-tests");
        std::fs::create_dir_all(&dir).unwrap();
        let ok_path = dir.join("ok.json");
        std::fs::write(&ok_path, A2_LUSZTIG_JSON).unwrap();
        let g = load(ok_path.to_str().unwrap(), None).unwrap();
        assert_eq!(g.name(), "a2-lusztig");

        let bad_path = dir.join("bad.json");
        std::fs::write(&bad_path, "{\"name\": 3}").unwrap();
        assert!(matches!(
            load(bad_path.to_str().unwrap(), None),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let text = C2_JSON.replace("[[1, 0], [0, -1]]", "[[0, 0], [0, 0]]");
        match from_json_text(&text) {
            Err(Error::DegenerateForm(_, _)) => {}
            other => panic!("expected degenerate form, got {other:?}"),
        }
    }

    #[test]
    fn non_commuting_actions_are_rejected() {
        // break the right action of the first bimodule so it no longer
        // commutes with the left action
        let text = C2_SQRT2_JSON.replacen("[[0, 2], [1, 0]]", "[[0, 2], [1, 1]]", 1);
        match from_json_text(&text) {
            Err(Error::NotABimodule(_)) | Err(Error::NotAField(_)) => {}
            other => panic!("expected a bimodule error, got {other:?}"),
        }
    }

    #[test]
    fn prime_base_field_parses() {
        let text = r#"{
            "name": "tiny",
            "base_field": {"prime": 7},
            "vertex_fields": {"1": "base"},
            "edges": []
        }"#;
        let g = from_json_text(text).unwrap();
        assert_eq!(g.n(), 1);
        let wrapped = r#"{
            "name": "tiny",
            "base_field": {"type": "rationals"},
            "vertex_fields": {"1": "base"},
            "edges": []
        }"#;
        from_json_text(wrapped).unwrap();
    }
}
