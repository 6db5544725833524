use super::*;
use crate::exactfield::Field;
use crate::germs::{family_space, germ_space, Aut, JetMatrix, MapSpace};

fn q() -> Field {
    Field::rationals()
}

fn sqrt2() -> Extension {
    Extension::make(&q(), "a", "a^2-2").unwrap()
}

fn spaces(xs: &[&str], ys: &[&str], n: u32) -> MapSpace {
    MapSpace::new(
        &germ_space(&q(), xs, n, &[]).unwrap(),
        &germ_space(&q(), ys, n, &[]).unwrap(),
    )
    .unwrap()
}

/// The right element acting by `f ↦ f ∘ ψ` for the given components `ψ`.
fn pull(ring: &crate::jets::JetRing, psi: &[&str]) -> GroupElement {
    GroupElement::Right(Aut::parse(ring, psi).unwrap().inverse())
}

#[test]
fn descend_projection() {
    let sp = spaces(&["x", "y"], &["u"], 3);
    let f = MapGerm::parse(&sp, &["x"]).unwrap();
    let ft = MapGerm::parse(&sp, &["x+y^2"]).unwrap();
    let ext = sqrt2();
    let sp_k = sp.base_change(&ext);
    let w = pull(sp_k.source(), &["x+y^2", "y+a*y^3"]);
    let filt = Filtration::madic(sp.source());
    let p = DescentProblem {
        f: f.clone(),
        f_tilde: ft.clone(),
        ext,
        witness: w,
        group: Group::R,
        level: 1,
        filt: filt.clone(),
    };
    let cert = descend(&p).unwrap();
    assert!(verify_witness(&cert.element, &f, &ft, 1, &filt).ok);
    assert!(!cert.log.is_empty());
}

#[test]
fn descend_one_pass() {
    let sp = spaces(&["x"], &["y"], 4);
    let f = MapGerm::parse(&sp, &["x^2"]).unwrap();
    let ft = MapGerm::parse(&sp, &["x^2+x^4"]).unwrap();
    let ext = sqrt2();
    let sp_k = sp.base_change(&ext);
    let xi = TangentVector::Right(vec![sp_k.source().parse("-1/2*x^3").unwrap()]);
    let w = exp_vf(&xi, &sp_k).unwrap();
    let filt = Filtration::madic(sp.source());
    let cert = descend(&DescentProblem {
        f: f.clone(),
        f_tilde: ft.clone(),
        ext,
        witness: w,
        group: Group::R,
        level: 1,
        filt: filt.clone(),
    })
    .unwrap();
    assert_eq!(cert.log.len(), 1);
    assert_eq!(cert.log[0].xi.to_string(), "(-1/2)*x^3 d/dx");
    assert!(verify_witness(&cert.element, &f, &ft, 1, &filt).ok);
}

#[test]
fn descend_trivial_and_invalid() {
    let sp = spaces(&["x"], &["y"], 4);
    let f = MapGerm::parse(&sp, &["x^2"]).unwrap();
    let ext = sqrt2();
    let sp_k = sp.base_change(&ext);
    let filt = Filtration::madic(sp.source());
    let mut p = DescentProblem {
        f: f.clone(),
        f_tilde: f.clone(),
        ext,
        witness: GroupElement::identity(Group::R, &sp_k),
        group: Group::R,
        level: 1,
        filt,
    };
    let cert = descend(&p).unwrap();
    assert!(cert.element.is_identity() && cert.log.is_empty());
    p.f_tilde = MapGerm::parse(&sp, &["x^2+x^3"]).unwrap();
    match descend(&p) {
        Err(DescentError::ActionMismatch { at }) => assert!(at.starts_with("x^3 "), "{at}"),
        other => panic!("{other:?}"),
    }
    p.witness = pull(sp_k.source(), &["2*x"]);
    p.f_tilde = MapGerm::parse(&sp, &["4*x^2"]).unwrap();
    assert!(matches!(descend(&p), Err(DescentError::WitnessLevel { got: 0, need: 1 })));
}

#[test]
fn verify_examples() {
    let sp = spaces(&["x"], &["y"], 4);
    let filt = Filtration::madic(sp.source());
    let f = MapGerm::parse(&sp, &["x^2"]).unwrap();
    let ft = MapGerm::parse(&sp, &["x^2+2*x^3+x^4"]).unwrap();
    assert!(verify_witness(&GroupElement::identity(Group::R, &sp), &f, &f, 3, &filt).ok);
    assert!(verify_witness(&pull(sp.source(), &["x+x^2"]), &f, &ft, 1, &filt).ok);
    let v = verify_witness(&pull(sp.source(), &["2*x"]), &f, &f, 1, &filt);
    assert!(!v.ok && v.level == 0);
    assert!(v.mismatch.is_some());
}

#[test]
fn stabilizer_samples() {
    let sp = spaces(&["x", "y"], &["u"], 3);
    let filt = Filtration::madic(sp.source());
    let f = MapGerm::parse(&sp, &["x"]).unwrap();
    let s = stabilizer_sample(&f, Group::R, 1, &filt, 7).unwrap();
    assert!(!s.is_identity());
    assert_eq!(s.act(&f).unwrap(), f);
    match &s {
        GroupElement::Right(a) => assert_eq!(a.comps()[0].to_string(), "x"),
        _ => panic!("expected a right element"),
    }

    let sp2 = spaces(&["x", "y"], &["u", "v"], 3);
    let filt2 = Filtration::madic(sp2.source());
    let f2 = MapGerm::parse(&sp2, &["x", "x*y"]).unwrap();
    let s = stabilizer_sample(&f2, Group::KLin, 1, &filt2, 3).unwrap();
    assert!(verify_witness(&s, &f2, &f2, 1, &filt2).ok);
    let m = JetMatrix::identity(sp2.source(), 2);
    assert!(GroupElement::contact_lin(&sp2, m, Aut::identity(sp2.source())).is_ok());
}

#[test]
fn family_examples() {
    let fam = family_space(&q(), &["x".into()], &["t".into()], 3, 1, &[]).unwrap();
    let sp = MapSpace::new(&fam, &germ_space(&q(), &["y"], 3, &[]).unwrap()).unwrap();
    let ft = MapGerm::parse(&sp, &["x^2+t*x^3"]).unwrap();
    let ext = sqrt2();
    let sp_k = sp.base_change(&ext);
    let w = pull(sp_k.source(), &["x-1/2*t*x^2"]);
    let cert = family_trivialize(&ft, &ext, &w).unwrap();
    let f0 = MapGerm::parse(&sp, &["x^2"]).unwrap();
    assert_eq!(cert.element.act(&ft).unwrap(), f0);

    let c = MapGerm::parse(&sp, &["x^2"]).unwrap();
    let id = GroupElement::identity(Group::R, &sp_k);
    assert!(family_trivialize(&c, &ext, &id).unwrap().element.is_identity());
    assert!(matches!(family_trivialize(&ft, &ext, &id), Err(DescentError::WitnessInvalid(_))));
}
