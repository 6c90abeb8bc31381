//! Three browser entry points over `bicx`. Each returns JSON; the plain Rust
//! versions live in [`ops`] so they can be tested natively.

use wasm_bindgen::prelude::*;

pub mod ops {
    use std::collections::BTreeMap;

    use bicx::doc::{self, Object};
    use bicx::{spectral, twisted, Bidegree, RingSpec};
    use serde_json::{json, Value};

    fn cells(t: &BTreeMap<Bidegree, usize>) -> Value {
        t.iter().map(|(b, d)| json!([b.p, b.q, d])).collect()
    }

    fn ring(s: &str) -> Result<RingSpec, String> {
        s.parse().map_err(|e: bicx::Error| e.to_string())
    }

    /// Ranks of the twisted disc on `(p, q)` and of its vertical boundary.
    pub fn disc_table(p: i32, q: i32, ring_name: &str) -> Result<Value, String> {
        if !(0..=8).contains(&p) {
            return Err("p must lie in 0..=8".into());
        }
        let r = ring(ring_name)?;
        let d = twisted::twisted_disc(r, p, q).map_err(|e| e.to_string())?;
        let b = twisted::twisted_boundary(r, p, q).map_err(|e| e.to_string())?;
        Ok(json!({
            "disc": cells(d.ranks()),
            "boundary": cells(b.ranks()),
            "disc_acyclic": d.tot().is_acyclic(),
            "boundary_acyclic": p == 0 || b.tot().is_acyclic(),
        }))
    }

    fn parse(text: &str) -> Result<Object, String> {
        doc::parse(text).map_err(|e| e.to_string())
    }

    /// Homology of a chain complex, or of the total complex of a bicomplex.
    pub fn homology(text: &str) -> Result<Value, String> {
        let obj = parse(text)?;
        let tot = match &obj {
            Object::Chain(c) => c.clone(),
            other => other.as_multi().ok_or("expected a complex, not a map")?.tot(),
        };
        let h: Vec<Value> = tot
            .homology()
            .iter()
            .map(|(n, m)| json!({"degree": n, "module": m.describe(tot.ring())}))
            .collect();
        Ok(json!({"kind": obj.kind_name(), "ring": obj.ring().to_string(), "homology": h}))
    }

    /// Pages of the column filtration spectral sequence.
    pub fn spectral_pages(text: &str, max_page: usize) -> Result<Value, String> {
        let obj = parse(text)?;
        let x = obj.as_multi().ok_or("expected a bicomplex or twisted complex")?;
        let ss = spectral::pages(x, max_page.clamp(1, 12)).map_err(|e| e.to_string())?;
        let pages: Vec<Value> = ss
            .pages
            .iter()
            .map(|(r, t)| {
                let d: Vec<Value> = ss.differentials[r]
                    .iter()
                    .map(|(b, m)| json!({"from": [b.p, b.q], "rank": bicx::linalg::rank(m)}))
                    .collect();
                json!({"r": r, "cells": cells(t), "differentials": d})
            })
            .collect();
        Ok(json!({"pages": pages, "stable_page": ss.stable_page}))
    }
}

fn js(r: Result<serde_json::Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn disc_table(p: i32, q: i32, ring: &str) -> Result<String, JsError> {
    js(ops::disc_table(p, q, ring))
}

#[wasm_bindgen]
pub fn homology(document: &str) -> Result<String, JsError> {
    js(ops::homology(document))
}

#[wasm_bindgen]
pub fn spectral_pages(document: &str, max_page: usize) -> Result<String, JsError> {
    js(ops::spectral_pages(document, max_page))
}

/// A ready-made document for the text box.
#[wasm_bindgen]
pub fn sample_document() -> String {
    let x = bicx::twisted::twisted_boundary(bicx::RingSpec::Rationals, 3, 0).expect("p >= 0");
    bicx::doc::serialize(&bicx::doc::Object::Twisted(x))
}
