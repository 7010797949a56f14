use eqchrom::equivariant::{borel_model, check_axioms, Axiom, EquivariantFglData};
use eqchrom::fgl::{p_typical, Convention};
use eqchrom::group::{PGroupSpec, SubgroupLattice};
use eqchrom::series::{GradedElement, MembershipConfig, PowerSeries1};

fn lattice(p: u64, ks: &[u32]) -> SubgroupLattice {
    SubgroupLattice::build(&PGroupSpec::new(p, ks.to_vec()).unwrap()).unwrap()
}

#[test]
fn corrupted_model_report() {
    let d = EquivariantFglData::multiplicative_c2(6).unwrap();
    let s = d.lattice().parse_character("[1]").unwrap();
    let b = PowerSeries1::new("z", d.base(), vec![d.euler(s).clone(), GradedElement::one(d.base())], 6);
    let r = check_axioms(&d.with_bseries(s, b).unwrap(), &MembershipConfig::default()).unwrap();
    let failing: Vec<&str> = r.failures().map(|e| e.identity.as_str()).collect();
    assert!(failing.contains(&"b^[1](z) = e_[1] +_F z"));
    // b(e) = 2e is not a multiple of e^2 + 2e, so the composite identity fails too
    assert!(failing.contains(&"e_[0] = b^[1](e_[1])"));
    assert_eq!(r.failed_axioms(), vec![Axiom::III, Axiom::IV]);
}

#[test]
fn borel_klein_four() {
    let t = std::time::Instant::now();
    let lat = lattice(2, &[1, 1]);
    let f = p_typical(2, Convention::Araki, 3, 4).unwrap();
    let d = borel_model(&lat, &f, 5).unwrap();
    let r = check_axioms(&d, &MembershipConfig::default()).unwrap();
    assert!(r.all_passed());
    assert!(t.elapsed().as_secs() < 30);
}

#[test]
fn two_factorizations_agree() {
    let lat = lattice(2, &[1, 1]);
    let f = p_typical(2, Convention::Araki, 3, 4).unwrap();
    let d = borel_model(&lat, &f, 5).unwrap();
    let c = |s: &str| lat.parse_character(s).unwrap();
    let g = c("[1,1]");
    // g = [1,0][0,1] = g^3
    let left = f.eval(d.euler(c("[1,0]")), d.euler(c("[0,1]"))).unwrap();
    let right = f.sum_all(&vec![d.euler(g).clone(); 3]).unwrap();
    let diff = &left - &right;
    assert!(!diff.is_zero());
    match eqchrom::series::relation_member(&diff, &MembershipConfig::default()) {
        eqchrom::series::Membership::Zero(cert) => {
            assert!(cert.verify(&diff, &d.base().relation_elements()));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn cyclic_four_model_passes() {
    let lat = lattice(2, &[2]);
    let f = p_typical(2, Convention::Araki, 2, 4).unwrap();
    let d = borel_model(&lat, &f, 5).unwrap();
    let r = check_axioms(&d, &MembershipConfig::default()).unwrap();
    assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
    assert_eq!(d.base().relations()[0].label, "[4](e)");
}
