//! Exact JSON encodings. Every number is a string of the form
//! `a/b+c/d√5`, so loading what was saved gives back equal values.

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::aorta::{Chain, Half};
use crate::classify::BoundaryKey;
use crate::error::{Error, Result};
use crate::fractile::{Catalog, ChildPlacement, ChiralClass, FractileClass};
use crate::geom::{AffineMap, Isometry, Mat2, Point};
use crate::quad::QuadNum;
use crate::substitution::{Patch, PlacedTile, ProtoId};

fn bad(what: &str) -> Error {
    Error::Parse(what.to_string())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(&format!("missing field `{key}`")))
}

fn quad_from(v: &Value) -> Result<QuadNum> {
    v.as_str().ok_or_else(|| bad(&format!("expected a number string, got {v}")))?.parse()
}

fn rational_from(v: &Value) -> Result<BigRational> {
    quad_from(v)?
        .as_rational()
        .cloned()
        .ok_or_else(|| bad(&format!("expected a rational, got {v}")))
}

fn rational_json(r: &BigRational) -> Value {
    Value::String(QuadNum::from_rational(r.clone()).to_string())
}

fn array<'a>(v: &'a Value, len: Option<usize>) -> Result<&'a Vec<Value>> {
    let a = v.as_array().ok_or_else(|| bad(&format!("expected an array, got {v}")))?;
    match len {
        Some(n) if a.len() != n => Err(bad(&format!("expected {n} entries, got {}", a.len()))),
        _ => Ok(a),
    }
}

fn usize_from(v: &Value) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| bad(&format!("expected an index, got {v}")))
}

pub fn point_json(p: &Point) -> Value {
    json!([p.x.to_string(), p.y.to_string()])
}

pub fn point_from(v: &Value) -> Result<Point> {
    let a = array(v, Some(2))?;
    Ok(Point::new(quad_from(&a[0])?, quad_from(&a[1])?))
}

pub fn affine_json(m: &AffineMap) -> Value {
    let l = &m.linear.0;
    json!({
        "linear": l.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "translate": point_json(&m.translate),
    })
}

pub fn affine_from(v: &Value) -> Result<AffineMap> {
    let l = array(field(v, "linear")?, Some(4))?;
    let q: Vec<QuadNum> = l.iter().map(quad_from).collect::<Result<_>>()?;
    let [a, b, c, d]: [QuadNum; 4] = q.try_into().map_err(|_| bad("linear part"))?;
    AffineMap::new(Mat2::new(a, b, c, d), point_from(field(v, "translate")?)?)
}

pub fn isometry_json(g: &Isometry) -> Value {
    affine_json(g.affine())
}

pub fn isometry_from(v: &Value) -> Result<Isometry> {
    Isometry::from_affine(affine_from(v)?)
}

pub fn tile_json(t: &PlacedTile) -> Value {
    let mut m = match isometry_json(&t.placement) {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    m.insert("prototile".into(), Value::String(t.proto.name().into()));
    Value::Object(m)
}

pub fn tile_from(v: &Value) -> Result<PlacedTile> {
    let name = field(v, "prototile")?.as_str().ok_or_else(|| bad("prototile must be a string"))?;
    let proto: ProtoId = name.parse()?;
    Ok(PlacedTile::new(proto, isometry_from(v)?))
}

pub fn patch_json(p: &Patch) -> Value {
    json!({ "tiles": p.tiles.iter().map(tile_json).collect::<Vec<_>>() })
}

pub fn patch_from(v: &Value) -> Result<Patch> {
    Ok(Patch::new(array(field(v, "tiles")?, None)?.iter().map(tile_from).collect::<Result<_>>()?))
}

pub fn save_patch(p: &Patch) -> String {
    serde_json::to_string_pretty(&patch_json(p)).expect("values always serialize")
}

pub fn load_patch(s: &str) -> Result<Patch> {
    patch_from(&serde_json::from_str(s)?)
}

pub fn chain_json(c: &Chain) -> Value {
    json!({ "depth": c.depth, "points": c.points.iter().map(point_json).collect::<Vec<_>>() })
}

fn half_json(h: Half) -> Value {
    serde_json::to_value(h).expect("unit variants serialize")
}

fn half_from(v: &Value) -> Result<Half> {
    Ok(serde_json::from_value(v.clone())?)
}

pub fn key_json(k: &BoundaryKey) -> Value {
    Value::Array(
        k.0.iter()
            .map(|(m, h, fwd)| json!({ "map": affine_json(m), "half": half_json(*h), "forward": fwd }))
            .collect(),
    )
}

pub fn key_from(v: &Value) -> Result<BoundaryKey> {
    let items = array(v, None)?
        .iter()
        .map(|it| {
            let fwd = field(it, "forward")?.as_bool().ok_or_else(|| bad("forward must be a boolean"))?;
            Ok((affine_from(field(it, "map")?)?, half_from(field(it, "half")?)?, fwd))
        })
        .collect::<Result<_>>()?;
    Ok(BoundaryKey(items))
}

fn child_json(c: &ChildPlacement) -> Value {
    json!({ "class": c.class, "placement": isometry_json(&c.placement) })
}

fn child_from(v: &Value) -> Result<ChildPlacement> {
    Ok(ChildPlacement { class: usize_from(field(v, "class")?)?, placement: isometry_from(field(v, "placement")?)? })
}

fn list<T>(v: &Value, f: impl Fn(&Value) -> Result<T>) -> Result<Vec<T>> {
    array(v, None)?.iter().map(f).collect()
}

pub fn catalog_json(cat: &Catalog) -> Value {
    let classes: Vec<Value> = cat
        .classes
        .iter()
        .map(|c| {
            json!({
                "index": c.index,
                "chiral": c.chiral,
                "area": rational_json(&c.area),
                "frequency": rational_json(&c.frequency),
                "mirror_symmetric": c.mirror_symmetric,
                "key": key_json(&c.key),
                "children": c.children.iter().map(child_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let chiral: Vec<Value> = cat
        .chiral
        .iter()
        .map(|c| {
            json!({
                "chiral_index": c.chiral_index,
                "class": c.class,
                "mirror": c.mirror,
                "area": rational_json(&c.area),
                "sources_checked": c.sources_checked,
                "key": key_json(&c.key),
                "symmetries": c.symmetries.iter().map(isometry_json).collect::<Vec<_>>(),
                "children": c.children.iter().map(child_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "classes": classes, "chiral": chiral })
}

pub fn catalog_from(v: &Value) -> Result<Catalog> {
    let classes = list(field(v, "classes")?, |c| {
        Ok(FractileClass {
            index: usize_from(field(c, "index")?)?,
            chiral: list(field(c, "chiral")?, usize_from)?,
            key: key_from(field(c, "key")?)?,
            area: rational_from(field(c, "area")?)?,
            mirror_symmetric: field(c, "mirror_symmetric")?.as_bool().ok_or_else(|| bad("mirror_symmetric"))?,
            frequency: rational_from(field(c, "frequency")?)?,
            children: list(field(c, "children")?, child_from)?,
        })
    })?;
    let chiral = list(field(v, "chiral")?, |c| {
        Ok(ChiralClass {
            chiral_index: usize_from(field(c, "chiral_index")?)?,
            class: usize_from(field(c, "class")?)?,
            mirror: usize_from(field(c, "mirror")?)?,
            key: key_from(field(c, "key")?)?,
            area: rational_from(field(c, "area")?)?,
            children: list(field(c, "children")?, child_from)?,
            symmetries: list(field(c, "symmetries")?, isometry_from)?,
            sources_checked: usize_from(field(c, "sources_checked")?)?,
        })
    })?;
    Ok(Catalog { classes, chiral })
}

pub fn save_catalog(cat: &Catalog) -> String {
    serde_json::to_string_pretty(&catalog_json(cat)).expect("values always serialize")
}

pub fn load_catalog(s: &str) -> Result<Catalog> {
    catalog_from(&serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::pinwheel_supertile;

    #[test]
    fn patch_round_trip() {
        let p = pinwheel_supertile(2);
        assert_eq!(load_patch(&save_patch(&p)).unwrap(), p);
    }

    #[test]
    fn rejects_zero_denominator() {
        let s = r#"{"tiles":[{"prototile":"triangle","linear":["1","0","0","1"],"translate":["1/0","0"]}]}"#;
        assert!(matches!(load_patch(s), Err(Error::Parse(_))));
    }

    #[test]
    fn rejects_unknown_prototile() {
        let s = r#"{"tiles":[{"prototile":"hexagon","linear":["1","0","0","1"],"translate":["0","0"]}]}"#;
        assert!(matches!(load_patch(s), Err(Error::UnknownPrototile(_))));
    }

    #[test]
    fn rejects_non_isometry() {
        let s = r#"{"tiles":[{"prototile":"kite","linear":["2","0","0","1"],"translate":["0","0"]}]}"#;
        assert!(load_patch(s).is_err());
    }

    #[test]
    fn irrational_entries_survive() {
        let g = Isometry::rot_phi();
        let v = isometry_json(&g);
        assert_eq!(isometry_from(&v).unwrap(), g);
    }
}
