//! Versioned JSON documents. Every document carries a `"schema"` field and
//! malformed input is reported with a JSON pointer to the offending value.
//! `store(load(x)) == x` for documents written by `store`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::balmer::{HeightFunction, HeightValue};
use crate::equivariant::{EquivariantFglData, TRANSLATION_VAR};
use crate::error::{Error, Result};
use crate::fgl::Fgl;
use crate::group::{CharacterId, PGroupSpec, SubgroupId, SubgroupLattice};
use crate::series::{parse_element, Generator, GeneratorKind, GradedElement, PowerSeries1, RelationStrategy, RingSpec};

pub const GROUP_SCHEMA: &str = "eqchrom/group/v1";
pub const HEIGHT_SCHEMA: &str = "eqchrom/height-function/v1";
pub const TUPLE_SCHEMA: &str = "eqchrom/tuple/v1";
pub const EFGL_SCHEMA: &str = "eqchrom/efgl/v1";

/// Pretty-printed with sorted keys and a trailing newline.
pub fn to_canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::schema("", format!("invalid JSON: {e}")))
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn child(ptr: &str, key: &str) -> String {
    format!("{ptr}/{}", escape(key))
}

fn object<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::schema(ptr, "expected an object"))
}

fn field<'a>(v: &'a Value, ptr: &str, key: &str) -> Result<(&'a Value, String)> {
    let p = child(ptr, key);
    let x = object(v, ptr)?.get(key).ok_or_else(|| Error::schema(&p, "missing field"))?;
    Ok((x, p))
}

fn string<'a>(v: &'a Value, ptr: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::schema(ptr, "expected a string"))
}

fn uint(v: &Value, ptr: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| Error::schema(ptr, "expected a nonnegative integer"))
}

fn int(v: &Value, ptr: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::schema(ptr, "expected an integer"))
}

fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::schema(ptr, "expected an array"))
}

fn check_schema(v: &Value, want: &str) -> Result<()> {
    let (s, p) = field(v, "", "schema")?;
    let s = string(s, &p)?;
    if s != want {
        return Err(Error::schema(p, format!("expected `{want}`, got `{s}`")));
    }
    Ok(())
}

fn at(ptr: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        e @ Error::SchemaViolation { .. } => e,
        e => Error::schema(ptr, e.to_string()),
    }
}

pub fn store_group(spec: &PGroupSpec) -> Value {
    json!({
        "schema": GROUP_SCHEMA,
        "p": spec.p(),
        "exponents": spec.exponents(),
    })
}

pub fn load_group(v: &Value) -> Result<PGroupSpec> {
    check_schema(v, GROUP_SCHEMA)?;
    let (p, pp) = field(v, "", "p")?;
    let p = uint(p, &pp)?;
    let (ks, kp) = field(v, "", "exponents")?;
    let mut exps: Vec<u32> = Vec::new();
    for (i, k) in array(ks, &kp)?.iter().enumerate() {
        let ip = format!("{kp}/{i}");
        let k = u32::try_from(uint(k, &ip)?).map_err(|_| Error::schema(&ip, "exponent too large"))?;
        if k == 0 {
            return Err(Error::schema(ip, "exponents must be positive"));
        }
        if exps.last().is_some_and(|&prev| prev < k) {
            return Err(Error::schema(ip, "exponents must be non-increasing"));
        }
        exps.push(k);
    }
    PGroupSpec::new(p, exps).map_err(at(&pp))
}

fn height_value_json(h: HeightValue) -> Value {
    match h {
        HeightValue::NegOne => json!(-1),
        HeightValue::Finite(n) => json!(n),
        HeightValue::Infinite => json!("inf"),
    }
}

/// Accepts integers `>= -1`, `"inf"` and the same tokens as strings.
pub fn height_value(v: &Value, ptr: &str) -> Result<HeightValue> {
    match v {
        Value::String(s) => s.parse().map_err(at(ptr)),
        Value::Number(n) => match n.as_i64() {
            Some(-1) => Ok(HeightValue::NegOne),
            Some(k) if k >= 0 => u32::try_from(k)
                .map(HeightValue::Finite)
                .map_err(|_| Error::schema(ptr, "value too large")),
            _ => Err(Error::schema(ptr, "expected an integer >= -1 or \"inf\"")),
        },
        _ => Err(Error::schema(ptr, "expected an integer >= -1 or \"inf\"")),
    }
}

/// `{"S0": 3, "S1": "inf", ...}`; every subgroup of the lattice must appear.
pub fn height_values(lat: &SubgroupLattice, v: &Value, ptr: &str) -> Result<HeightFunction> {
    let obj = object(v, ptr)?;
    let mut vals = vec![None; lat.len()];
    for (k, x) in obj {
        let p = child(ptr, k);
        let id = lat.parse_id(k).map_err(at(&p))?;
        vals[id.0] = Some(height_value(x, &p)?);
    }
    let mut out = Vec::with_capacity(vals.len());
    for (i, x) in vals.into_iter().enumerate() {
        out.push(x.ok_or_else(|| Error::schema(child(ptr, &format!("S{i}")), "missing value"))?);
    }
    HeightFunction::new(lat, out).map_err(at(ptr))
}

pub fn store_height(lat: &SubgroupLattice, f: &HeightFunction) -> Value {
    let values: Map<String, Value> = lat
        .ids()
        .map(|b| (b.to_string(), height_value_json(f.get(b))))
        .collect();
    json!({
        "schema": HEIGHT_SCHEMA,
        "group": lat.spec().to_string(),
        "values": values,
    })
}

pub fn load_height(v: &Value) -> Result<(SubgroupLattice, HeightFunction)> {
    check_schema(v, HEIGHT_SCHEMA)?;
    let lat = lattice_field(v)?;
    let (vals, vp) = field(v, "", "values")?;
    let f = height_values(&lat, vals, &vp)?;
    Ok((lat, f))
}

fn lattice_field(v: &Value) -> Result<SubgroupLattice> {
    let (g, gp) = field(v, "", "group")?;
    let spec: PGroupSpec = string(g, &gp)?.parse().map_err(at(&gp))?;
    SubgroupLattice::build(&spec).map_err(at(&gp))
}

/// Elements of the node rings, one per subgroup, with the precision data
/// needed to build those rings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleDoc {
    pub group: PGroupSpec,
    pub i_max: usize,
    pub order: i32,
    pub v: usize,
    pub elements: BTreeMap<SubgroupId, String>,
}

pub fn store_tuple(t: &TupleDoc) -> Value {
    let elements: Map<String, Value> = t.elements.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    json!({
        "schema": TUPLE_SCHEMA,
        "group": t.group.to_string(),
        "imax": t.i_max,
        "order": t.order,
        "vmax": t.v,
        "elements": elements,
    })
}

pub fn load_tuple(v: &Value) -> Result<TupleDoc> {
    check_schema(v, TUPLE_SCHEMA)?;
    let lat = lattice_field(v)?;
    let num = |key: &str| -> Result<u64> {
        let (x, p) = field(v, "", key)?;
        uint(x, &p)
    };
    let i_max = num("imax")? as usize;
    let order = i32::try_from(num("order")?).map_err(|_| Error::schema("/order", "too large"))?;
    let vmax = num("vmax")? as usize;
    let (els, ep) = field(v, "", "elements")?;
    let mut elements = BTreeMap::new();
    for (k, x) in object(els, &ep)? {
        let p = child(&ep, k);
        let id = lat.parse_id(k).map_err(at(&p))?;
        elements.insert(id, string(x, &p)?.to_string());
    }
    Ok(TupleDoc {
        group: lat.spec().clone(),
        i_max,
        order,
        v: vmax,
        elements,
    })
}

impl TupleDoc {
    /// Parses each element in the node ring of its subgroup.
    pub fn resolve(&self) -> Result<(crate::isotropy::Isotropy, BTreeMap<SubgroupId, GradedElement>)> {
        let lat = SubgroupLattice::build(&self.group)?;
        let iso = crate::isotropy::Isotropy::new(&lat, self.i_max, self.order, self.v)?;
        let mut out = BTreeMap::new();
        for (id, s) in &self.elements {
            let p = format!("/elements/{id}");
            lat.check_id(*id).map_err(at(&p))?;
            let ring = iso.node_ring(*id)?.ring;
            out.insert(*id, parse_element(&ring, s).map_err(at(&p))?);
        }
        Ok((iso, out))
    }
}

fn kind_name(k: GeneratorKind) -> &'static str {
    match k {
        GeneratorKind::Polynomial => "polynomial",
        GeneratorKind::Inverted => "inverted",
        GeneratorKind::Series => "series",
        GeneratorKind::LaurentSeries => "laurent",
    }
}

fn store_ring(r: &Arc<RingSpec>) -> Value {
    let gens: Vec<Value> = r
        .generators()
        .iter()
        .map(|g| json!({"name": g.name, "degree": g.degree, "kind": kind_name(g.kind), "weight": g.weight}))
        .collect();
    let rels: Vec<Value> = r
        .relations()
        .iter()
        .zip(r.relation_elements())
        .map(|(rel, el)| {
            let strategy = match rel.strategy {
                RelationStrategy::SetToZero => "set-to-zero",
                RelationStrategy::CertificateOnly => "certificate-only",
            };
            json!({"label": rel.label, "element": el.to_string(), "strategy": strategy})
        })
        .collect();
    json!({
        "prime": r.prime(),
        "order": r.order(),
        "generators": gens,
        "relations": rels,
    })
}

fn load_ring(v: &Value, ptr: &str) -> Result<Arc<RingSpec>> {
    let (p, pp) = field(v, ptr, "prime")?;
    let (o, op) = field(v, ptr, "order")?;
    let order = i32::try_from(int(o, &op)?).map_err(|_| Error::schema(&op, "out of range"))?;
    let mut b = RingSpec::builder(uint(p, &pp)?).order(order);
    let (gs, gp) = field(v, ptr, "generators")?;
    for (i, g) in array(gs, &gp)?.iter().enumerate() {
        let ip = format!("{gp}/{i}");
        let (n, np) = field(g, &ip, "name")?;
        let (d, dp) = field(g, &ip, "degree")?;
        let (k, kp) = field(g, &ip, "kind")?;
        let (w, wp) = field(g, &ip, "weight")?;
        let kind = match string(k, &kp)? {
            "polynomial" => GeneratorKind::Polynomial,
            "inverted" => GeneratorKind::Inverted,
            "series" => GeneratorKind::Series,
            "laurent" => GeneratorKind::LaurentSeries,
            other => return Err(Error::schema(kp, format!("unknown kind `{other}`"))),
        };
        b = b.generator(Generator {
            name: string(n, &np)?.to_string(),
            degree: int(d, &dp)? as i32,
            kind,
            weight: int(w, &wp)? as i32,
        });
    }
    let plain = b.build().map_err(at(&gp))?;
    let (rs, rp) = field(v, ptr, "relations")?;
    let mut rels = Vec::new();
    for (i, r) in array(rs, &rp)?.iter().enumerate() {
        let ip = format!("{rp}/{i}");
        let (l, lp) = field(r, &ip, "label")?;
        let (e, epp) = field(r, &ip, "element")?;
        let (s, sp) = field(r, &ip, "strategy")?;
        let strategy = match string(s, &sp)? {
            "set-to-zero" => RelationStrategy::SetToZero,
            "certificate-only" => RelationStrategy::CertificateOnly,
            other => return Err(Error::schema(sp, format!("unknown strategy `{other}`"))),
        };
        let el = parse_element(&plain, string(e, &epp)?).map_err(at(&epp))?;
        rels.push((string(l, &lp)?.to_string(), el, strategy));
    }
    if rels.is_empty() {
        Ok(plain)
    } else {
        plain.with_relations(rels).map_err(at(&rp))
    }
}

pub fn store_efgl(d: &EquivariantFglData) -> Value {
    let lat = d.lattice();
    let f = d.fgl();
    let coefficients: Map<String, Value> = f
        .coefficients()
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((i, j), c)| (format!("{i},{j}"), json!(c.to_string())))
        .collect();
    let mut euler = Map::new();
    let mut bseries = Map::new();
    for a in lat.character_ids() {
        let label = lat.character_label(a);
        euler.insert(label.clone(), json!(d.euler(a).to_string()));
        let b = d.bseries(a);
        let cs: Vec<String> = b.coeffs().iter().map(|c| c.to_string()).collect();
        bseries.insert(label, json!({"order": b.order(), "coefficients": cs}));
    }
    json!({
        "schema": EFGL_SCHEMA,
        "group": lat.spec().to_string(),
        "base": store_ring(d.base()),
        "adic": d.adic_generators(),
        "fgl": {
            "ring": store_ring(f.base()),
            "degree": f.degree(),
            "coefficients": coefficients,
        },
        "euler": euler,
        "bseries": bseries,
    })
}

pub fn load_efgl(v: &Value) -> Result<EquivariantFglData> {
    check_schema(v, EFGL_SCHEMA)?;
    let lat = lattice_field(v)?;
    let (b, bp) = field(v, "", "base")?;
    let base = load_ring(b, &bp)?;
    let (ad, adp) = field(v, "", "adic")?;
    let adic = array(ad, &adp)?
        .iter()
        .enumerate()
        .map(|(i, x)| string(x, &format!("{adp}/{i}")).map(str::to_string))
        .collect::<Result<Vec<_>>>()?;

    let (fv, fp) = field(v, "", "fgl")?;
    let (fr, frp) = field(fv, &fp, "ring")?;
    let fring = load_ring(fr, &frp)?;
    let (deg, degp) = field(fv, &fp, "degree")?;
    let degree = uint(deg, &degp)? as usize;
    let (cs, cp) = field(fv, &fp, "coefficients")?;
    let mut coeffs = Vec::new();
    for (k, x) in object(cs, &cp)? {
        let p = child(&cp, k);
        let ij = k
            .split_once(',')
            .and_then(|(i, j)| Some((i.trim().parse::<usize>().ok()?, j.trim().parse::<usize>().ok()?)))
            .ok_or_else(|| Error::schema(&p, "expected a key `i,j`"))?;
        coeffs.push((ij, parse_element(&fring, string(x, &p)?).map_err(at(&p))?));
    }
    let fgl = Fgl::from_coefficients(&fring, degree, &coeffs).map_err(at(&fp))?;

    let n = lat.character_count();
    let mut euler = vec![None; n];
    let (ev, ep) = field(v, "", "euler")?;
    for (k, x) in object(ev, &ep)? {
        let p = child(&ep, k);
        let a = lat.parse_character(k).map_err(at(&p))?;
        euler[a.0] = Some(parse_element(&base, string(x, &p)?).map_err(at(&p))?);
    }
    let mut bseries = vec![None; n];
    let (bv, bsp) = field(v, "", "bseries")?;
    for (k, x) in object(bv, &bsp)? {
        let p = child(&bsp, k);
        let a = lat.parse_character(k).map_err(at(&p))?;
        let (o, op) = field(x, &p, "order")?;
        let (c, cp) = field(x, &p, "coefficients")?;
        let cs = array(c, &cp)?
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let ip = format!("{cp}/{i}");
                parse_element(&base, string(s, &ip)?).map_err(at(&ip))
            })
            .collect::<Result<Vec<_>>>()?;
        bseries[a.0] = Some(PowerSeries1::new(TRANSLATION_VAR, &base, cs, uint(o, &op)? as usize));
    }
    let euler = complete(&lat, euler, &ep)?;
    let bseries = complete(&lat, bseries, &bsp)?;
    EquivariantFglData::new(lat.clone(), base, adic, fgl, euler, bseries).map_err(at(""))
}

fn complete<T>(lat: &SubgroupLattice, xs: Vec<Option<T>>, ptr: &str) -> Result<Vec<T>> {
    xs.into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| Error::schema(child(ptr, &lat.character_label(CharacterId(i))), "missing")))
        .collect()
}
