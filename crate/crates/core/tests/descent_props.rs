use germ_core::descent::{descend, stabilizer_sample, verify_witness, DescentProblem};
use germ_core::germs::{germ_space, Group, MapGerm, MapSpace};
use germ_core::jets::{Filtration, Jet, JetRing};
use germ_core::tangent::{exp_vf, TangentVector};
use germ_core::{Extension, Field};
use proptest::prelude::*;

fn space(n: usize, m: usize, order: u32) -> MapSpace {
    let q = Field::rationals();
    let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let ys: Vec<String> = (1..=m).map(|i| format!("y{i}")).collect();
    let xr: Vec<&str> = xs.iter().map(|s| s.as_str()).collect();
    let yr: Vec<&str> = ys.iter().map(|s| s.as_str()).collect();
    MapSpace::new(
        &germ_space(&q, &xr, order, &[]).unwrap(),
        &germ_space(&q, &yr, order, &[]).unwrap(),
    )
    .unwrap()
}

fn jet(ring: &JetRing, coeffs: &[i8], min_deg: u32) -> Jet {
    let f = ring.field();
    let shape = ring.shape();
    let c = (0..ring.dim())
        .map(|i| {
            if shape.degree(i) >= min_deg {
                f.from_i64(coeffs[i % coeffs.len()] as i64).into_value()
            } else {
                f.zero_v()
            }
        })
        .collect();
    Jet::from_coeffs(ring, c)
}

fn coeffs() -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(prop_oneof![2 => Just(0i8), 1 => -2i8..=2], 1..40)
}

/// A random level-`j` element over `k`.
fn element(group: Group, sp: &MapSpace, c: &[i8], j: u32) -> germ_core::germs::GroupElement {
    let part = |k: usize| -> Vec<i8> { c.iter().cycle().skip(k * 5).take(c.len()).copied().collect() };
    let right: Vec<Jet> = (0..sp.n()).map(|i| jet(sp.source(), &part(i), j + 1)).collect();
    let xi = match group {
        Group::R => TangentVector::Right(right),
        Group::LR => TangentVector::LeftRight {
            left: (0..sp.m()).map(|k| jet(sp.target(), &part(k + 2), j + 1)).collect(),
            right,
        },
        _ => TangentVector::ContactLin {
            matrix: (0..sp.m())
                .map(|k| (0..sp.m()).map(|l| jet(sp.source(), &part(k * 2 + l + 4), j)).collect())
                .collect(),
            right,
        },
    };
    exp_vf(&xi, sp).unwrap()
}

fn completeness(group: Group, j: u32, n: usize, m: usize, order: u32, fc: &[i8], gc: &[i8], seed: u64) -> Result<(), TestCaseError> {
    let sp = space(n, m, order);
    let filt = Filtration::madic(sp.source());
    let f = MapGerm::new(
        &sp,
        (0..m).map(|k| jet(sp.source(), &fc[k % fc.len()..], 1)).collect(),
    )
    .unwrap();
    let g = element(group, &sp, gc, j);
    let ft = g.act(&f).unwrap();
    let ext = Extension::make(&Field::rationals(), "a", "a^2-2").unwrap();
    let sp_k = sp.base_change(&ext);
    let f_k = f.base_change(&ext, &sp_k);
    let s = stabilizer_sample(&f_k, group, j, &Filtration::madic(sp_k.source()), seed).unwrap();
    prop_assert_eq!(s.act(&f_k).unwrap(), f_k.clone());
    let witness = g.base_change(&ext, &sp_k).compose(&s).unwrap();
    let cert = descend(&DescentProblem {
        f: f.clone(),
        f_tilde: ft.clone(),
        ext: ext.clone(),
        witness,
        group,
        level: j,
        filt: filt.clone(),
    })
    .map_err(|e| TestCaseError::fail(format!("{e} for f = {f}, f~ = {ft}")))?;
    prop_assert!(verify_witness(&cert.element, &f, &ft, j, &filt).ok);
    let diff: Vec<Jet> = ft.comps().iter().zip(f.comps()).map(|(a, b)| a - b).collect();
    let mut last = filt.order_of(&diff).finite().unwrap_or(u32::MAX);
    for step in &cert.log {
        let o = step.residual_order.finite().unwrap_or(u32::MAX);
        prop_assert!(o >= last.saturating_add(j), "{} after {}", o, last);
        last = o;
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn descend_right(j in 1u32..=2, n in 1usize..=2, m in 1usize..=2, order in 2u32..=4, fc in coeffs(), gc in coeffs(), seed in any::<u64>()) {
        completeness(Group::R, j, n, m, order, &fc, &gc, seed)?;
    }

    #[test]
    fn descend_klin(j in 1u32..=2, n in 1usize..=2, m in 1usize..=2, order in 2u32..=4, fc in coeffs(), gc in coeffs(), seed in any::<u64>()) {
        completeness(Group::KLin, j, n, m, order, &fc, &gc, seed)?;
    }

    #[test]
    fn descend_lr(j in 1u32..=2, n in 1usize..=2, m in 1usize..=2, order in 2u32..=4, fc in coeffs(), gc in coeffs(), seed in any::<u64>()) {
        completeness(Group::LR, j, n, m, order, &fc, &gc, seed)?;
    }
}

