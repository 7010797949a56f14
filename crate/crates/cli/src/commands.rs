use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use eqchrom::balmer::{
    admissibility_witness, closed_set_of, fracture_set, obstruction_check, poset_covers, poset_dot, truncated_points,
    HeightFunction, Obstruction, TypeFunction,
};
use eqchrom::equivariant::{borel_model, check_axioms, EquivariantFglData, Outcome, TRANSLATION_VAR};
use eqchrom::fgl::{height_over_field, p_typical, Convention, Fgl};
use eqchrom::group::{SubgroupId, SubgroupLattice};
use eqchrom::io;
use eqchrom::isotropy::{vnm_check, Isotropy, LimitVerdict, StricklandParams, StricklandTable};
use eqchrom::series::{GradedElement, MembershipConfig, PowerSeries1, RingMap, RingSpec};
use eqchrom::Error;
use serde_json::{json, Value};

use crate::{
    BalmerCommand, Command, ConventionArg, DiagramArgs, EquivariantArgs, FglCommand, Format, LatticeArgs, LawArg, Model,
    StricklandArgs,
};

pub enum Failure {
    /// Bad flag combination; nothing was run.
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Out = Result<String, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn json_out(v: &Value) -> String {
    io::to_canonical(v)
}

pub fn dispatch(cmd: Command) -> Out {
    match cmd {
        Command::Lattice(a) => lattice(a),
        Command::Balmer(c) => balmer(c),
        Command::Fgl(c) => fgl(c),
        Command::Equivariant(a) => equivariant(a),
        Command::Strickland(a) => strickland(a),
        Command::Diagram(a) => diagram(a),
    }
}

fn read(path: &std::path::Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(io::parse_json(&text)?)
}

fn lattice(a: LatticeArgs) -> Out {
    let group = match (&a.group, &a.group_file) {
        (Some(g), _) => g.clone(),
        (None, Some(path)) => io::load_group(&read(path)?)?,
        (None, None) => return usage("give --group or --group-file"),
    };
    let lat = SubgroupLattice::build(&group)?;
    if a.sd {
        return match a.format {
            Format::Dot => Ok(lat.sd_diagram().to_dot()),
            _ => {
                let sd = lat.sd_diagram();
                let mut s = String::new();
                for o in &sd.objects {
                    writeln!(s, "{o}").unwrap();
                }
                for (x, y) in &sd.arrows {
                    writeln!(s, "{} -> {}", sd.objects[*x], sd.objects[*y]).unwrap();
                }
                Ok(s)
            }
        };
    }
    let shaded: Vec<SubgroupId> = match &a.shade_character {
        Some(c) => {
            let ch = lat.parse_character(c)?;
            lat.ids().filter(|&b| lat.is_trivial_on(ch, b)).collect()
        }
        None => Vec::new(),
    };
    match a.format {
        Format::Dot => Ok(lat.to_dot(&shaded)),
        Format::Json => {
            let subgroups: Vec<Value> = lat
                .ids()
                .map(|b| {
                    json!({
                        "id": b.to_string(),
                        "order": lat.subgroup(b).order(),
                        "elements": lat.describe(b),
                    })
                })
                .collect();
            let covers: Vec<Value> = lat.covers().iter().map(|(x, y)| json!([x.to_string(), y.to_string()])).collect();
            Ok(json_out(&json!({
                "schema": "eqchrom/lattice/v1",
                "group": group.to_string(),
                "subgroups": subgroups,
                "covers": if a.list { Value::Null } else { json!(covers) },
            })))
        }
        Format::Text => {
            let mut s = String::new();
            for b in lat.ids() {
                writeln!(s, "{b}  order {}  {}", lat.subgroup(b).order(), lat.describe(b)).unwrap();
            }
            if !a.list {
                for (x, y) in lat.covers() {
                    writeln!(s, "{x} < {y}").unwrap();
                }
            }
            Ok(s)
        }
    }
}

fn height_arg(lat: &SubgroupLattice, text: &str, flag: &str) -> Result<HeightFunction, Failure> {
    let v = io::parse_json(text)?;
    io::height_values(lat, &v, "").map_err(|e| match e {
        Error::SchemaViolation { pointer, message } => Error::SchemaViolation {
            pointer: format!("--{flag}{pointer}"),
            message,
        }
        .into(),
        e => e.into(),
    })
}

fn type_arg(lat: &SubgroupLattice, text: &str, flag: &str) -> Result<TypeFunction, Failure> {
    Ok(TypeFunction::try_from(height_arg(lat, text, flag)?)?)
}

fn balmer(c: BalmerCommand) -> Out {
    match c {
        BalmerCommand::Admissible { group, function } => {
            let lat = SubgroupLattice::build(&group)?;
            let f = height_arg(&lat, &function, "fn")?;
            let v = match admissibility_witness(&lat, &f) {
                Some((b, c)) => json!({"admissible": false, "witness": [b.to_string(), c.to_string()]}),
                None => json!({"admissible": true, "witness": null}),
            };
            Ok(format!("{v}\n"))
        }
        BalmerCommand::Obstruction { group, type_fn, set } => {
            let lat = SubgroupLattice::build(&group)?;
            let t = type_arg(&lat, &type_fn, "type")?;
            let s: BTreeSet<SubgroupId> = set.iter().map(|x| lat.parse_id(x)).collect::<Result<_, _>>()?;
            let v = match obstruction_check(&lat, &t, &s)? {
                Obstruction::Allowed => json!({"result": "Allowed"}),
                Obstruction::Obstructed(b, c) => {
                    json!({"result": "Obstructed", "witness": [b.to_string(), c.to_string()]})
                }
            };
            Ok(format!("{v}\n"))
        }
        BalmerCommand::Fracture { group, lower, upper } => {
            let lat = SubgroupLattice::build(&group)?;
            let n1 = height_arg(&lat, &lower, "lower")?;
            let n2 = height_arg(&lat, &upper, "upper")?;
            let pts: Vec<Value> = fracture_set(&lat, &n1, &n2)?
                .into_iter()
                .map(|(b, n)| json!([b.to_string(), n]))
                .collect();
            Ok(format!("{}\n", json!({ "points": pts })))
        }
        BalmerCommand::Poset {
            group,
            nmax,
            shade,
            format,
        } => {
            let lat = SubgroupLattice::build(&group)?;
            let shade = match shade {
                Some(t) => Some(closed_set_of(&type_arg(&lat, &t, "shade")?)),
                None => None,
            };
            let pts = truncated_points(&lat, nmax);
            match format {
                Format::Dot => Ok(poset_dot(&lat, nmax, shade.as_ref())),
                Format::Json => {
                    let covers: Vec<Value> = poset_covers(&lat, &pts)
                        .iter()
                        .map(|(p, q)| json!([p.to_string(), q.to_string()]))
                        .collect();
                    let names: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
                    let shaded: Vec<String> = match &shade {
                        Some(s) => pts.iter().filter(|p| s.contains(**p)).map(|p| p.to_string()).collect(),
                        None => Vec::new(),
                    };
                    Ok(json_out(&json!({
                        "schema": "eqchrom/balmer-poset/v1",
                        "points": names,
                        "covers": covers,
                        "shaded": shaded,
                    })))
                }
                Format::Text => {
                    let mut s = String::new();
                    for (p, q) in poset_covers(&lat, &pts) {
                        writeln!(s, "{p} <= {q}").unwrap();
                    }
                    Ok(s)
                }
            }
        }
    }
}

fn convention(c: ConventionArg) -> Convention {
    match c {
        ConventionArg::Araki => Convention::Araki,
        ConventionArg::Hazewinkel => Convention::Hazewinkel,
    }
}

fn fgl(c: FglCommand) -> Out {
    match c {
        FglCommand::PSeries {
            p,
            convention: conv,
            vmax,
            order,
            modulus,
            n,
            format,
        } => {
            if order < 2 {
                return usage("--order must be at least 2");
            }
            if modulus.is_some_and(|m| m != p) {
                return usage("--mod must equal --p");
            }
            if format == Format::Dot {
                return usage("dot output is not available for series");
            }
            let f = p_typical(p, convention(conv), vmax, order - 1)?;
            let mut s = f.n_series(n.unwrap_or(p as i64))?;
            if modulus.is_some() {
                s = s.reduce_mod_in(1)?;
            }
            match format {
                Format::Json => {
                    let cs: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
                    Ok(json_out(&json!({
                        "schema": "eqchrom/series/v1",
                        "series": s.to_string(),
                        "coefficients": cs,
                        "order": s.order(),
                    })))
                }
                _ => Ok(format!("{s}\n")),
            }
        }
        FglCommand::Axioms {
            p,
            convention: conv,
            vmax,
            degree,
        } => {
            let f = p_typical(p, convention(conv), vmax, degree)?;
            let r = f.verify_axioms()?;
            let v = json!({
                "unit": r.unit,
                "commutative": r.commutative,
                "associative": r.associative,
                "associativity_residual": r.associativity_residual,
            });
            Ok(format!("{v}\n"))
        }
        FglCommand::Height { p, law, n, bound } => {
            let k = RingSpec::builder(p).build()?;
            let top = (p as usize).pow(bound);
            let f = match law {
                LawArg::Additive => Fgl::additive(&k, top)?,
                LawArg::Multiplicative => Fgl::multiplicative(&k, top)?,
                LawArg::Honda => {
                    if n == 0 {
                        return usage("--n must be positive for the honda law");
                    }
                    let f = p_typical(p, Convention::Araki, n as usize, top)?;
                    let imgs = (1..=n)
                        .map(|i| {
                            if i == n {
                                GradedElement::one(&k)
                            } else {
                                GradedElement::zero(&k)
                            }
                        })
                        .collect();
                    f.map_coefficients(&RingMap::new(f.base(), &k, imgs)?)?
                }
            };
            Ok(format!("{}\n", json!({ "height": height_over_field(&f, bound)?.to_string() })))
        }
    }
}

fn corrupted_c2(order: i32) -> Result<EquivariantFglData, Error> {
    let d = EquivariantFglData::multiplicative_c2(order)?;
    let base = d.base().clone();
    let s = d.lattice().parse_character("[1]")?;
    let b = PowerSeries1::new(
        TRANSLATION_VAR,
        &base,
        vec![GradedElement::gen(&base, "e")?, GradedElement::one(&base)],
        order as usize,
    );
    d.with_bseries(s, b)
}

fn equivariant(a: EquivariantArgs) -> Out {
    let d = match (a.model, &a.input) {
        (Some(Model::MultiplicativeC2), _) => EquivariantFglData::multiplicative_c2(a.order)?,
        (Some(Model::CorruptedC2), _) => corrupted_c2(a.order)?,
        (Some(Model::Borel), _) => {
            let Some(g) = &a.group else {
                return usage("--model borel needs --group");
            };
            let lat = SubgroupLattice::build(g)?;
            let f = p_typical(lat.p(), Convention::Araki, a.vmax, a.order as usize)?;
            borel_model(&lat, &f, a.order)?
        }
        (None, Some(path)) => {
            io::load_efgl(&read(path)?)?
        }
        (None, None) => return usage("give --model or --input"),
    };
    if a.emit {
        return Ok(json_out(&io::store_efgl(&d)));
    }
    let r = check_axioms(&d, &MembershipConfig::default())?;
    let entries: Vec<Value> = r
        .entries
        .iter()
        .map(|e| {
            json!({
                "axiom": e.axiom.to_string(),
                "identity": e.identity,
                "outcome": e.outcome.label(),
                "detail": match &e.outcome {
                    Outcome::Failed(m) | Outcome::Skipped(m) => json!(m),
                    _ => Value::Null,
                },
            })
        })
        .collect();
    let failed: Vec<String> = r.failed_axioms().iter().map(|x| x.to_string()).collect();
    match a.format {
        Format::Json => Ok(json_out(&json!({
            "schema": "eqchrom/axiom-check/v1",
            "passed": r.all_passed(),
            "failed_axioms": failed,
            "entries": entries,
        }))),
        Format::Dot => usage("dot output is not available for axiom checks"),
        Format::Text => {
            let mut s = String::new();
            for e in &r.entries {
                writeln!(s, "({}) {}: {}", e.axiom, e.identity, e.outcome.label()).unwrap();
            }
            if failed.is_empty() {
                s.push_str("all axioms hold\n");
            } else {
                writeln!(s, "failed: {}", failed.join(", ")).unwrap();
            }
            Ok(s)
        }
    }
}

fn strickland(a: StricklandArgs) -> Out {
    if a.format == Format::Dot {
        return usage("dot output is not available for the Strickland table");
    }
    if let Some(n) = a.vnm {
        let r = vnm_check(n, a.order, a.vmax)?;
        let show = |u: &Option<GradedElement>| u.as_ref().map(|x| x.to_string());
        let v = json!({
            "schema": "eqchrom/vnm/v1",
            "n": n,
            "passed": r.passed(),
            "underlying": r.underlying.to_string(),
            "underlying_unit": show(&r.underlying_unit),
            "geometric": r.geometric.to_string(),
            "geometric_unit": show(&r.geometric_unit),
        });
        return Ok(json_out(&v));
    }
    let t = StricklandTable::compute(StricklandParams {
        i_max: a.imax,
        j_max: a.jmax,
        order: a.order,
        v: a.vmax,
    })?;
    let compat: BTreeMap<&str, _> = t.compatibility.iter().map(|c| (c.name.as_str(), c)).collect();
    let pair = |p: &eqchrom::isotropy::PullbackPair| {
        let c = compat[p.name.as_str()];
        json!({
            "name": p.name,
            "borel": p.borel.to_string(),
            "geom": p.geom.to_string(),
            "limit": c.verdict,
            "multiplier": c.multiplier,
            "closed_form": c.closed_form,
        })
    };
    let mut gens = vec![pair(&t.e)];
    gens.extend(t.q.iter().map(pair));
    gens.extend(t.b.values().map(pair));
    let rels: Vec<Value> = t
        .rel1
        .iter()
        .chain(&t.rel2)
        .map(|r| json!({"relation": r.name, "borel": r.borel, "geom": r.geom}))
        .collect();
    if a.format == Format::Text {
        let mut s = String::new();
        for g in &gens {
            writeln!(s, "{}: borel {} | geom {} | {}", g["name"].as_str().unwrap(), g["borel"].as_str().unwrap(), g["geom"].as_str().unwrap(), g["limit"].as_str().unwrap()).unwrap();
        }
        writeln!(s, "passed: {}", t.all_passed()).unwrap();
        return Ok(s);
    }
    let v = json!({
        "schema": "eqchrom/strickland/v1",
        "params": {"imax": a.imax, "jmax": a.jmax, "order": a.order, "vmax": a.vmax},
        "two_series": t.p.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "generators": gens,
        "relations": rels,
        "e_q1": {
            "borel_multiplier": t.eq1_borel.as_ref().map(|c| c.used().first().map_or("0".to_string(), |(_, g)| g.to_string())),
            "geom_zero": t.eq1_geom_zero,
        },
        "passed": t.all_passed(),
    });
    Ok(json_out(&v))
}

fn diagram(a: DiagramArgs) -> Out {
    if let Some(path) = &a.check {
        let doc = io::load_tuple(&read(path)?)?;
        if doc.group != a.group {
            return Err(Error::schema("/group", format!("document is for {}, not {}", doc.group, a.group)).into());
        }
        let (iso, tuple) = doc.resolve()?;
        let verdict = iso.limit_membership(&tuple)?;
        let v = match &verdict {
            LimitVerdict::Compatible(cs) => json!({
                "verdict": "Compatible",
                "certificates": cs.iter().map(|c| json!({
                    "edge": format!("{}<{}", c.lower, c.upper),
                    "difference": c.difference.to_string(),
                    "multipliers": c.certificate.used().iter().map(|(l, g)| json!([l, g.to_string()])).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            }),
            LimitVerdict::Incompatible { lower, upper, witness } => json!({
                "verdict": "Incompatible",
                "edge": format!("{lower}<{upper}"),
                "witness": witness,
            }),
            LimitVerdict::Unknown(es) => json!({
                "verdict": "Unknown",
                "edges": es.iter().map(|(l, u)| format!("{l}<{u}")).collect::<Vec<_>>(),
            }),
        };
        return Ok(json_out(&v));
    }
    let lat = SubgroupLattice::build(&a.group)?;
    if a.format == Format::Dot {
        return Ok(lat.sd_diagram().to_dot());
    }
    let iso = Isotropy::new(&lat, a.imax, a.order, a.vmax)?;
    let mut nodes = Vec::new();
    for b in lat.ids() {
        nodes.push((b, iso.node_ring(b)?.ring.to_string()));
    }
    let mut edges = Vec::new();
    for &(lo, hi) in lat.covers() {
        let m = iso.edge_maps(lo, hi)?;
        edges.push((lo, hi, m.ring.to_string(), m.relations_certified(), m.degrees_preserved));
    }
    match a.format {
        Format::Json => Ok(json_out(&json!({
            "schema": "eqchrom/diagram/v1",
            "group": a.group.to_string(),
            "nodes": nodes.iter().map(|(b, r)| json!({"subgroup": b.to_string(), "ring": r})).collect::<Vec<_>>(),
            "edges": edges.iter().map(|(l, h, r, c, d)| json!({
                "edge": format!("{l}<{h}"),
                "ring": r,
                "relations_certified": c,
                "degrees_preserved": d,
            })).collect::<Vec<_>>(),
        }))),
        _ => {
            let mut s = String::new();
            for (b, r) in &nodes {
                writeln!(s, "{b}: {r}").unwrap();
            }
            for (l, h, r, c, _) in &edges {
                let tag = if *c { "certified" } else { "uncertified" };
                writeln!(s, "{l}<{h}: {r}  [{tag}]").unwrap();
            }
            Ok(s)
        }
    }
}
