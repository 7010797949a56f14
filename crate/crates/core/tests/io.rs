use std::collections::BTreeMap;

use eqchrom::balmer::{standard_function, HeightFunction, HeightValue, StandardKind};
use eqchrom::equivariant::{borel_model, EquivariantFglData};
use eqchrom::fgl::{p_typical, Convention};
use eqchrom::group::{PGroupSpec, SubgroupId, SubgroupLattice};
use eqchrom::io::*;
use eqchrom::Error;
use proptest::prelude::*;
use serde_json::json;

fn pointer(e: Error) -> String {
    match e {
        Error::SchemaViolation { pointer, .. } => pointer,
        other => panic!("expected a schema violation, got {other:?}"),
    }
}

#[test]
fn group_documents() {
    let spec: PGroupSpec = "3:[2,1]".parse().unwrap();
    let v = store_group(&spec);
    assert_eq!(
        to_canonical(&v),
        "{\n  \"exponents\": [\n    2,\n    1\n  ],\n  \"p\": 3,\n  \"schema\": \"eqchrom/group/v1\"\n}\n"
    );
    assert_eq!(load_group(&v).unwrap(), spec);
    let bad = json!({"schema": GROUP_SCHEMA, "p": 2, "exponents": [1, 2]});
    assert_eq!(pointer(load_group(&bad).unwrap_err()), "/exponents/1");
    let bad = json!({"schema": GROUP_SCHEMA, "p": 2, "exponents": [1, 0]});
    assert_eq!(pointer(load_group(&bad).unwrap_err()), "/exponents/1");
    let bad = json!({"schema": GROUP_SCHEMA, "p": 6, "exponents": [1]});
    assert_eq!(pointer(load_group(&bad).unwrap_err()), "/p");
    let bad = json!({"schema": "eqchrom/group/v2", "p": 2, "exponents": []});
    assert_eq!(pointer(load_group(&bad).unwrap_err()), "/schema");
    let bad = json!({"schema": GROUP_SCHEMA, "exponents": []});
    assert_eq!(pointer(load_group(&bad).unwrap_err()), "/p");
    assert_eq!(pointer(parse_json("{").unwrap_err()), "");
}

#[test]
fn height_documents() {
    let lat = SubgroupLattice::build(&"2:[1]".parse().unwrap()).unwrap();
    let f = HeightFunction::new(&lat, vec![HeightValue::NegOne, HeightValue::Infinite]).unwrap();
    let v = store_height(&lat, &f);
    assert_eq!(v["values"], json!({"S0": -1, "S1": "inf"}));
    let (l2, g) = load_height(&v).unwrap();
    assert_eq!(l2.len(), 2);
    assert_eq!(g, f);
    // string spellings are accepted on input
    let v = json!({"schema": HEIGHT_SCHEMA, "group": "2:[1]", "values": {"S0": "-1", "S1": "3"}});
    assert_eq!(load_height(&v).unwrap().1.values(), &[HeightValue::NegOne, HeightValue::Finite(3)]);
    let v = json!({"schema": HEIGHT_SCHEMA, "group": "2:[1]", "values": {"S0": 1}});
    assert_eq!(pointer(load_height(&v).unwrap_err()), "/values/S1");
    let v = json!({"schema": HEIGHT_SCHEMA, "group": "2:[1]", "values": {"S0": 1, "S1": -2}});
    assert_eq!(pointer(load_height(&v).unwrap_err()), "/values/S1");
    let v = json!({"schema": HEIGHT_SCHEMA, "group": "2:[1]", "values": {"S0": 1, "S1": 0, "S7": 0}});
    assert_eq!(pointer(load_height(&v).unwrap_err()), "/values/S7");
}

#[test]
fn tuple_documents() {
    let doc = TupleDoc {
        group: "2:[1]".parse().unwrap(),
        i_max: 2,
        order: 5,
        v: 2,
        elements: BTreeMap::from([(SubgroupId(0), "v1 + e".to_string()), (SubgroupId(1), "e^-1".to_string())]),
    };
    let v = store_tuple(&doc);
    assert_eq!(load_tuple(&v).unwrap(), doc);
    let (_, els) = doc.resolve().unwrap();
    assert_eq!(els[&SubgroupId(1)].to_string(), "e^-1");
    let mut bad = doc.clone();
    bad.elements.insert(SubgroupId(0), "w".into());
    assert_eq!(pointer(bad.resolve().unwrap_err()), "/elements/S0");
}

#[test]
fn efgl_documents() {
    let d = EquivariantFglData::multiplicative_c2(4).unwrap();
    let text = to_canonical(&store_efgl(&d));
    let back = load_efgl(&parse_json(&text).unwrap()).unwrap();
    assert_eq!(to_canonical(&store_efgl(&back)), text);

    let lat = SubgroupLattice::build(&"2:[1,1]".parse().unwrap()).unwrap();
    let f = p_typical(2, Convention::Araki, 1, 3).unwrap();
    let d = borel_model(&lat, &f, 4).unwrap();
    let v = store_efgl(&d);
    let back = load_efgl(&v).unwrap();
    assert_eq!(store_efgl(&back), v);

    let mut broken = v.clone();
    broken["schema"] = json!("nope");
    assert_eq!(pointer(load_efgl(&broken).unwrap_err()), "/schema");
    let mut broken = v.clone();
    broken["fgl"]["coefficients"]["1,1"] = json!("v7");
    assert_eq!(pointer(load_efgl(&broken).unwrap_err()), "/fgl/coefficients/1,1");
}

fn spec() -> impl Strategy<Value = PGroupSpec> {
    (prop::sample::select(vec![2u64, 3, 5]), prop::collection::vec(1u32..4, 0..3)).prop_map(|(p, mut ks)| {
        ks.sort_unstable_by(|a, b| b.cmp(a));
        PGroupSpec::new(p, ks).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn group_round_trip(s in spec()) {
        let text = to_canonical(&store_group(&s));
        prop_assert_eq!(load_group(&parse_json(&text).unwrap()).unwrap(), s);
    }

    #[test]
    fn height_round_trip(n in 0u32..5, g in prop::sample::select(vec!["2:[1]", "2:[2]", "2:[1,1]", "3:[1]"])) {
        let lat = SubgroupLattice::build(&g.parse().unwrap()).unwrap();
        let f = standard_function(&lat, StandardKind::Height(n));
        let text = to_canonical(&store_height(&lat, &f));
        let (_, back) = load_height(&parse_json(&text).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }
}
