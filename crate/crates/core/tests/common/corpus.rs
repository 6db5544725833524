//! Fixed small systems over F2 and F3 for the Nullstellensatz cross-check.

use germ_core::germs::{germ_space, Group, MapGerm, MapSpace};
use germ_core::polysys::{compile_system, PolySystem};
use germ_core::Field;

fn sys(p: u64, unknowns: &[&str], eqs: &[&str]) -> PolySystem {
    PolySystem::new(&Field::prime(p).unwrap(), unknowns, eqs).unwrap()
}

fn compiled(p: u64, order: u32, f: &str, ft: &str, group: Group, level: Option<u32>) -> PolySystem {
    let k = Field::prime(p).unwrap();
    let sp = MapSpace::new(
        &germ_space(&k, &["x"], order, &[]).unwrap(),
        &germ_space(&k, &["y"], order, &[]).unwrap(),
    )
    .unwrap();
    let f = MapGerm::parse(&sp, &[f]).unwrap();
    let ft = MapGerm::parse(&sp, &[ft]).unwrap();
    compile_system(&f, &ft, group, level).unwrap()
}

pub fn corpus() -> Vec<(&'static str, PolySystem)> {
    vec![
        ("F2 x^2+x+1", sys(2, &["x"], &["x^2+x+1"])),
        ("F2 x^2+x+1, x", sys(2, &["x"], &["x^2+x+1", "x"])),
        ("F2 x^3+x+1", sys(2, &["x"], &["x^3+x+1"])),
        ("F2 xy-1, x+y", sys(2, &["x", "y"], &["x*y-1", "x+y"])),
        ("F2 xy+1, x+1, y", sys(2, &["x", "y"], &["x*y+1", "x+1", "y"])),
        ("F2 x^2+y, y^2+x, xy+1", sys(2, &["x", "y"], &["x^2+y", "y^2+x", "x*y+1"])),
        ("F2 xz-1, yz-1, x+y+1", sys(2, &["x", "y", "z"], &["x*z-1", "y*z-1", "x+y+1"])),
        ("F2 x^2+x, y^2+y, xy+x+y+1, x+y", sys(2, &["x", "y"], &["x^2+x", "y^2+y", "x*y+x+y+1", "x+y"])),
        ("F2 a^3+a^2+1, ab-1, b^3+b+1", sys(2, &["a", "b"], &["a^3+a^2+1", "a*b-1", "b^3+b+1"])),
        ("F2 xyzw-1, x+y, z+w, x+z+1", sys(2, &["x", "y", "z", "w"], &["x*y*z*w-1", "x+y", "z+w", "x+z+1"])),
        ("F2 R x^2 vs x^2+x^3", compiled(2, 3, "x^2", "x^2+x^3", Group::R, None)),
        ("F3 x^2+1", sys(3, &["x"], &["x^2+1"])),
        ("F3 x^2+1, x^3-x", sys(3, &["x"], &["x^2+1", "x^3-x"])),
        ("F3 x^3-x-1", sys(3, &["x"], &["x^3-x-1"])),
        ("F3 xy-1, x^2+y^2", sys(3, &["x", "y"], &["x*y-1", "x^2+y^2"])),
        ("F3 x-1, x-2", sys(3, &["x"], &["x-1", "x-2"])),
        ("F3 xy-1, xz, z-1", sys(3, &["x", "y", "z"], &["x*y-1", "x*z", "z-1"])),
        ("F3 x^2+y^2+z^2, xyz-1, x-y", sys(3, &["x", "y", "z"], &["x^2+y^2+z^2", "x*y*z-1", "x-y"])),
        ("F3 R x^2 vs 2x^2", compiled(3, 2, "x^2", "2*x^2", Group::R, None)),
        ("F3 R x^2 vs 2x^2 at level 1", compiled(3, 2, "x^2", "2*x^2", Group::R, Some(1))),
        ("F3 L x^2 vs x^2+x^3 at level 1", compiled(3, 3, "x^2", "x^2+x^3", Group::L, Some(1))),
    ]
}
