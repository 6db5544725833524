use germ_core::germs::{germ_space, group_level, Group, MapGerm, MapSpace};
use germ_core::jets::{Filtration, Jet, JetRing, Order};
use germ_core::tangent::{exp_vf, log_aut, tangent_space, TangentVector};
use germ_core::Field;
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

/// A jet with small coefficients supported in degrees `>= min_deg`,
/// keeping only monomials accepted by `keep`.
fn jet(ring: &JetRing, coeffs: &[i8], min_deg: u32, keep: impl Fn(&[u32]) -> bool) -> Jet {
    let f = ring.field();
    let shape = ring.shape();
    let c = (0..ring.dim())
        .map(|i| {
            let x = coeffs[i % coeffs.len()];
            if shape.degree(i) >= min_deg && keep(shape.monomial(i)) {
                f.from_i64(x as i64).into_value()
            } else {
                f.zero_v()
            }
        })
        .collect();
    Jet::from_coeffs(ring, c)
}

fn sparse() -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(prop_oneof![3 => Just(0i8), 1 => -3i8..=3], 60)
}

fn vector(sp: &MapSpace, kind: u8, c: &[i8], level: u32) -> TangentVector {
    let (src, tgt, xy) = (sp.source(), sp.target(), sp.contact_ring());
    let n = sp.n();
    let shift = |k: usize| &c[(k * 7) % c.len()..];
    let right: Vec<Jet> = (0..n).map(|i| jet(src, shift(i), level + 1, |_| true)).collect();
    match kind {
        0 => TangentVector::Right(right),
        1 => TangentVector::Left((0..sp.m()).map(|k| jet(tgt, shift(k + 3), level + 1, |_| true)).collect()),
        2 => TangentVector::LeftRight {
            left: (0..sp.m()).map(|k| jet(tgt, shift(k + 3), level + 1, |_| true)).collect(),
            right,
        },
        3 => TangentVector::Contact {
            contact: (0..sp.m())
                .map(|k| jet(xy, shift(k + 5), level + 1, |e| e[n..n + sp.m()].iter().any(|&x| x > 0)))
                .collect(),
            right,
        },
        _ => TangentVector::ContactLin {
            matrix: (0..sp.m())
                .map(|k| (0..sp.m()).map(|l| jet(src, shift(k + l + 6), level, |_| true)).collect())
                .collect(),
            right,
        },
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exp_log_round_trip(c in sparse(), kind in 0u8..5, order in 2u32..=5) {
        let sp = space(2, 1, order);
        let xi = vector(&sp, kind, &c, 1);
        let g = exp_vf(&xi, &sp).unwrap();
        prop_assert_eq!(log_aut(&g, &sp).unwrap(), xi);
        prop_assert_eq!(exp_vf(&log_aut(&g, &sp).unwrap(), &sp).unwrap(), g);
    }

    #[test]
    fn exp_respects_level(c in sparse(), kind in 0u8..5, level in 1u32..=2) {
        let sp = space(2, 1, 4);
        let xi = vector(&sp, kind, &c, level);
        let g = exp_vf(&xi, &sp).unwrap();
        prop_assert!(group_level(&g, &Filtration::madic(sp.source())) >= level);
    }

    #[test]
    fn first_order_action(c in sparse(), fc in sparse(), kind in 0u8..5, level in 1u32..=2) {
        let sp = space(2, 1, 4);
        let filt = Filtration::madic(sp.source());
        let f = MapGerm::new(&sp, vec![jet(sp.source(), &fc, 1, |_| true)]).unwrap();
        let xi = vector(&sp, kind, &c, level);
        let moved = exp_vf(&xi, &sp).unwrap().act(&f).unwrap();
        let lin = xi.apply(&f);
        if let Order::Finite(o) = filt.order_of(&lin) {
            let rest: Vec<Jet> = moved.comps().iter().zip(f.comps()).zip(&lin)
                .map(|((a, b), l)| &(a - b) - l)
                .collect();
            match filt.order_of(&rest) {
                Order::Infinite => {}
                Order::Finite(r) => prop_assert!(r >= o + level, "{} < {} + {}", r, o, level),
            }
        }
    }

    #[test]
    fn filtered_tangent_spaces_decrease(fc in sparse(), g in 0usize..6, j in 1u32..=3) {
        let groups = [Group::R, Group::L, Group::LR, Group::C, Group::K, Group::KLin];
        let sp = space(2, 1, 3);
        let filt = Filtration::madic(sp.source());
        let f = MapGerm::new(&sp, vec![jet(sp.source(), &fc, 1, |_| true)]).unwrap();
        let hi = tangent_space(groups[g], &f, j, &filt).unwrap();
        let lo = tangent_space(groups[g], &f, j - 1, &filt).unwrap();
        prop_assert!(hi.is_subspace_of(&lo));
    }
}
