//! Browser bindings: build the finite model for a deck group, classify
//! covers from a presentation, and square Hodge numbers. Each export returns
//! a JSON string; errors come back as JS exceptions carrying the message.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use hilb2_core::fpgroup::{abelianization, parse_presentation};
use hilb2_core::groups::parse_group_spec;
use hilb2_core::hilbcover::{construction_for, Quotient};
use hilb2_core::hodge::{isv_pattern_check, symmetric_square_hodge, HodgeVector};
use hilb2_core::monodromy::{classify_hilb_covers, SurfaceDescriptor};
use hilb2_core::permgroup::DEFAULT_GROUP_CAP;

/// Largest deck group the page will build.
const MAX_ORDER: usize = 12;
const MAX_BASE: usize = 4;

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

pub fn construct_json(group: &str, base_size: usize) -> Result<Value, String> {
    let g = parse_group_spec(group).map_err(|e| e.to_string())?;
    if g.order() > MAX_ORDER {
        return Err(format!(
            "the demo is limited to groups of order at most {MAX_ORDER}"
        ));
    }
    if !(1..=MAX_BASE).contains(&base_size) {
        return Err(format!("base size must be between 1 and {MAX_BASE}"));
    }
    let c = construction_for(&g, base_size, DEFAULT_GROUP_CAP).map_err(|e| e.to_string())?;
    let h = c.xi_tilde_fibers().fiber_sizes();
    let k = c.quotient_fibers(Quotient::Antidiagonal).fiber_sizes();
    let fibers: Vec<Value> = (0..c.sym.len())
        .map(|p| {
            json!({
                "point": c.sym.label(p),
                "big_fiber": c.preimage(p).map(|v| v.len()).unwrap_or(0),
                "h_orbits": h[p],
                "k_orbits": k[p],
            })
        })
        .collect();
    let fixed = c.fixed_components();
    Ok(json!({
        "group_order": c.d(),
        "abelian": g.is_abelian(),
        "j_order": c.j.order(),
        "h_order": c.h.order(),
        "k_order": c.k.order(),
        "h_normal": c.h_is_normal(),
        "k_normal": c.k_is_normal(),
        "fibers": fibers,
        "fixed_components": fixed.len(),
    }))
}

pub fn classify_json(presentation: &str) -> Result<Value, String> {
    let p = parse_presentation(presentation).map_err(|e| e.to_string())?;
    let ab = abelianization(&p);
    let surface = SurfaceDescriptor {
        name: "inline".into(),
        pi1_smooth: p,
        singular_points: vec![],
        hodge: HodgeVector::new(vec![1, 0, 0]),
    };
    let rows = classify_hilb_covers(&surface, DEFAULT_GROUP_CAP).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "degree": r.hilb_cover.degree,
                "deck_group": r.deck_invariants.to_string(),
                "galois": r.hilb_cover.galois,
            })
        })
        .collect();
    Ok(json!({ "abelianization": ab.to_string(), "covers": rows }))
}

pub fn hodge_json(vector: &str) -> Result<Value, String> {
    let dims = vector
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("not a nonnegative integer: {t:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let square = symmetric_square_hodge(&HodgeVector::new(dims)).map_err(|e| e.to_string())?;
    let isv = isv_pattern_check(&square).map_err(|e| e.to_string())?;
    Ok(json!({ "hilbert_square": square.dims, "text": square.to_string(), "isv": isv }))
}

#[wasm_bindgen]
pub fn construct(group: &str, base_size: usize) -> Result<String, JsValue> {
    to_js(construct_json(group, base_size))
}

#[wasm_bindgen]
pub fn classify(presentation: &str) -> Result<String, JsValue> {
    to_js(classify_json(presentation))
}

#[wasm_bindgen]
pub fn hodge(vector: &str) -> Result<String, JsValue> {
    to_js(hodge_json(vector))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construct_z2() {
        let v = construct_json("Z2", 2).unwrap();
        assert_eq!(v["j_order"], 8);
        assert_eq!(v["fibers"][1]["big_fiber"], 8);
        assert!(construct_json("S5", 1).is_err());
        assert!(construct_json("Z2", 0).is_err());
    }

    #[test]
    fn classify_quaternion() {
        let v = classify_json("< a b | a^4, a^2 b^-2, b^-1 a b a >").unwrap();
        assert_eq!(v["covers"].as_array().unwrap().len(), 5);
        assert!(classify_json("< a | a^ >").is_err());
    }

    #[test]
    fn hodge_k3() {
        let v = hodge_json("1,0,1").unwrap();
        assert_eq!(v["text"], "(1,0,1,0,1)");
        assert_eq!(v["isv"], true);
        assert!(hodge_json("1,0").is_err());
    }
}
