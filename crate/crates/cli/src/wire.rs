//! JSON forms of ring values and automorphism descriptors.
//!
//! Scalars travel in the exact bracketed text form (e.g. `(q^2-1)/(q)`),
//! which the expression parser reads back. An automorphism descriptor is
//! `{"alpha0": "...", "alpha": [...], "beta": [...], "diagram": bool}`;
//! general torus entries are accepted and canonicalized on load.

use qgrass_core::autos::{h1_canonicalize, AutoSpec, H1Element};
use qgrass_core::dehom::{DehomContext, TElement};
use qgrass_core::grassmann::LocalizedElement;
use qgrass_core::qmatrix::{MatrixAlgebra, NcPoly};
use qgrass_core::scalar::QScalar;
use serde_json::{json, Value};

use crate::parser::{parse_expr, RingContext, RingValue};

pub fn ncpoly_to_json(p: &NcPoly, alg: &MatrixAlgebra) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            json!({
                "exps": m.exponents(),
                "coeff": c.render_exact(),
            })
        })
        .collect();
    json!({
        "ring": "qm",
        "shape": [alg.shape().m, alg.shape().n],
        "terms": terms,
        "text": p.render(alg.shape()),
    })
}

pub fn localized_to_json(l: &LocalizedElement, k: usize, n: usize) -> Value {
    let terms: Vec<Value> = l
        .terms()
        .map(|((word, upow), c)| {
            let letters: Vec<Vec<usize>> = word
                .letters()
                .iter()
                .map(|idx| idx.cols().to_vec())
                .collect();
            json!({
                "word": letters,
                "upow": upow,
                "coeff": c.render_exact(),
            })
        })
        .collect();
    json!({
        "ring": "grass",
        "shape": [k, n],
        "terms": terms,
        "text": l.render(),
    })
}

pub fn telement_to_json(t: &TElement, ctx: &DehomContext) -> Value {
    let terms: Vec<Value> = t
        .terms()
        .map(|((m, ypow), c)| {
            json!({
                "exps": m.exponents(),
                "ypow": ypow,
                "coeff": c.render_exact(),
            })
        })
        .collect();
    json!({
        "ring": "t",
        "shape": [ctx.k(), ctx.grass().shape().n],
        "terms": terms,
        "text": t.render(ctx),
    })
}

fn parse_scalar(text: &str) -> Result<QScalar, String> {
    match parse_expr(text, &RingContext::Scalar) {
        Ok(RingValue::Scalar(s)) => Ok(s),
        Ok(_) => Err(format!("'{text}' is not a scalar")),
        Err(e) => Err(e.to_string()),
    }
}

/// Read an automorphism descriptor, canonicalizing the torus part.
pub fn auto_spec_from_json(value: &Value, ctx: &DehomContext) -> Result<AutoSpec, String> {
    let obj = value.as_object().ok_or("descriptor must be an object")?;
    let alpha0 = parse_scalar(
        obj.get("alpha0")
            .and_then(Value::as_str)
            .ok_or("missing 'alpha0'")?,
    )?;
    let read_list = |key: &str| -> Result<Vec<QScalar>, String> {
        obj.get(key)
            .and_then(Value::as_array)
            .ok_or(format!("missing '{key}'"))?
            .iter()
            .map(|v| {
                parse_scalar(
                    v.as_str()
                        .ok_or(format!("'{key}' entries must be strings"))?,
                )
            })
            .collect()
    };
    let alpha = read_list("alpha")?;
    let beta = read_list("beta")?;
    let diagram = obj.get("diagram").and_then(Value::as_bool).unwrap_or(false);
    if alpha.len() != ctx.k() || beta.len() != ctx.p() {
        return Err(format!(
            "descriptor sized ({}, {}) but the shape needs k={} and p={}",
            alpha.len(),
            beta.len(),
            ctx.k(),
            ctx.p()
        ));
    }
    let element = H1Element::new(alpha0, alpha, beta).map_err(|e| e.to_string())?;
    let canonical = h1_canonicalize(&element).map_err(|e| e.to_string())?;
    AutoSpec::new_unchecked(canonical, diagram, ctx).map_err(|e| e.to_string())
}

pub fn auto_spec_to_json(spec: &AutoSpec) -> Value {
    let e = spec.torus.element();
    json!({
        "alpha0": e.alpha0.render_exact(),
        "alpha": e.alpha.iter().map(QScalar::render_exact).collect::<Vec<_>>(),
        "beta": e.beta.iter().map(QScalar::render_exact).collect::<Vec<_>>(),
        "diagram": spec.diagram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_spec_round_trips_through_json() {
        let ctx = DehomContext::new(2, 4).unwrap();
        let descriptor = json!({
            "alpha0": "q",
            "alpha": ["2", "1"],
            "beta": ["(1)/(3)", "1"],
            "diagram": true,
        });
        let spec = auto_spec_from_json(&descriptor, &ctx).unwrap();
        assert!(spec.diagram);
        let back = auto_spec_to_json(&spec);
        let reparsed = auto_spec_from_json(&back, &ctx).unwrap();
        assert_eq!(spec, reparsed);
    }

    #[test]
    fn non_canonical_entries_are_normalized() {
        let ctx = DehomContext::new(2, 4).unwrap();
        // beta_p != 1 is folded into the canonical form.
        let descriptor = json!({
            "alpha0": "1",
            "alpha": ["1", "1"],
            "beta": ["1", "q"],
        });
        let spec = auto_spec_from_json(&descriptor, &ctx).unwrap();
        assert!(spec.torus.element().beta.last().unwrap().is_one());
    }
}
