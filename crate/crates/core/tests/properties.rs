use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polysep::caps::{find_isosceles_cap, ConvexDisc};
use polysep::geom::hyper::poincare_to_klein;
use polysep::geom::{EDisc, EPoint};
use polysep::io::svg::{ortho_basis, ortho_lift, Frame};
use polysep::io::{
    emit_packing, gen_random_packing, parse_packing, render_svg, GenParams, Geometry, Packing, SvgOptions,
};
use polysep::nonsep::{sampled_separating_line, separating_line_feasible, separation_margin};
use polysep::tiling::{build_power_diagram, BBox, Tiling};

fn random_convex(rng: &mut ChaCha8Rng, center: EPoint, radius: f64) -> ConvexDisc {
    let m = rng.random_range(3..9);
    let mut angles: Vec<f64> = (0..m).map(|_| rng.random::<f64>() * 2.0 * PI).collect();
    angles.sort_by(f64::total_cmp);
    let pts = angles
        .iter()
        .map(|&a| center + EPoint::from_angle(a) * (radius * (0.6 + 0.4 * rng.random::<f64>())))
        .collect();
    match ConvexDisc::new(pts) {
        Ok(d) => d,
        Err(_) => ConvexDisc::regular(m, radius).transformed(1.0, 0.0, center),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn power_cells_follow_their_discs(seed in 0u64..10_000, n in 2usize..40) {
        let doc = gen_random_packing(&GenParams::new(Geometry::Euclidean, n, 0.005, 0.05, seed)).unwrap();
        let Packing::Euclid { discs, bbox } = doc.packing().unwrap() else { unreachable!() };
        let mut perm: Vec<usize> = (0..n).collect();
        perm.reverse();
        perm.rotate_left(seed as usize % n);
        let shuffled: Vec<EDisc> = perm.iter().map(|&i| discs[i]).collect();
        let a = build_power_diagram(&discs, bbox).unwrap();
        let b = build_power_diagram(&shuffled, bbox).unwrap();
        for (k, &i) in perm.iter().enumerate() {
            let (ca, cb) = (&a.cells[i], &b.cells[k]);
            prop_assert_eq!(ca.vertices.len(), cb.vertices.len());
            for p in &ca.vertices {
                let d = cb.vertices.iter().map(|q| q.dist(*p)).fold(f64::MAX, f64::min);
                prop_assert!(d < 1e-12, "cell {} vertex {:?} off by {}", i, p, d);
            }
        }
    }

    #[test]
    fn packing_documents_round_trip(seed in any::<u64>(), g in 0usize..3, n in 2usize..30) {
        let geometry = [Geometry::Euclidean, Geometry::Sphere, Geometry::Hyperbolic][g];
        let (rmin, rmax) = if geometry == Geometry::Euclidean { (0.005, 0.05) } else { (0.05, 0.4) };
        let doc = gen_random_packing(&GenParams::new(geometry, n, rmin, rmax, seed)).unwrap();
        let text = emit_packing(&doc);
        let back = parse_packing(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(emit_packing(&back), text);
    }

    #[test]
    fn isosceles_caps_of_random_polygons(seed in any::<u64>(), alpha in 0.1f64..(PI - 0.1)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = 1.0 + rng.random::<f64>();
        let disc = random_convex(&mut rng, EPoint::new(0.3, -0.2), size);
        let cap = find_isosceles_cap(&disc, alpha, 1e-12).unwrap();
        prop_assert!((cap.side1 - cap.side2).abs() < 1e-9 * disc.diameter());
        prop_assert!((cap.angle - alpha).abs() < 1e-9);
        prop_assert!(!disc.contains(cap.apex, 0.0));
    }
}

#[test]
fn lp_agrees_with_line_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut feasible, mut infeasible) = (0, 0);
    for _ in 0..200 {
        let c1 = EPoint::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let c2 = c1 + EPoint::from_angle(rng.random::<f64>() * 2.0 * PI) * rng.random_range(1.0..3.0);
        let d1 = random_convex(&mut rng, c1, 0.5);
        let d2 = random_convex(&mut rng, c2, 0.5);
        // half of the rings sit right behind the second disc
        let rc = if rng.random::<bool>() {
            c2 + (c2 - c1).normalized().rotate(rng.random_range(-0.3..0.3)) * rng.random_range(0.55..0.9)
        } else {
            EPoint::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))
        };
        let ring = random_convex(&mut rng, rc, 0.05);
        let (a, b, r) = (d1.vertices(), d2.vertices(), ring.vertices());
        let lp = separating_line_feasible(a, b, r);
        let margin = separation_margin(a, b, r);
        let sampled = sampled_separating_line(a, b, r, 3600, 400, 1e-6);
        assert_eq!(lp, sampled, "margin {margin}, d1 {a:?}, d2 {b:?}, ring {r:?}");
        if lp {
            feasible += 1
        } else {
            infeasible += 1
        }
    }
    // both verdicts occur in the sample
    assert!(feasible > 20 && infeasible > 20, "{feasible} / {infeasible}");
}

/// `(pixel runs)` of every path in the cells layer.
fn cell_paths(svg: &str) -> Vec<Vec<EPoint>> {
    let layer = svg.split("<g id=\"cells\"").nth(1).unwrap().split("</g>").next().unwrap();
    layer
        .split("<path d=\"")
        .skip(1)
        .map(|rest| {
            let d = rest.split('"').next().unwrap();
            let nums: Vec<f64> = d
                .split([' ', 'M', 'L', 'Z'])
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().unwrap())
                .collect();
            nums.chunks(2).map(|c| EPoint::new(c[0], c[1])).collect()
        })
        .collect()
}

#[test]
fn rendered_cells_satisfy_their_constraints() {
    for (g, seed) in [(Geometry::Euclidean, 1), (Geometry::Sphere, 2), (Geometry::Hyperbolic, 3)] {
        let (n, rmin, rmax) = match g {
            Geometry::Euclidean => (40, 0.01, 0.05),
            _ => (25, 0.05, 0.3),
        };
        let packing = gen_random_packing(&GenParams::new(g, n, rmin, rmax, seed)).unwrap().packing().unwrap();
        let tiling = packing.tile(None).unwrap();
        let opts = SvgOptions {
            view_dir: polysep::geom::Vec3::new(0.3, -0.5, 0.8),
            ..SvgOptions::default()
        };
        let svg = render_svg(&packing, Some(&tiling), &opts);
        let window = match &packing {
            Packing::Euclid { bbox, .. } => *bbox,
            _ => BBox::new(-1.0, -1.0, 1.0, 1.0).unwrap(),
        };
        let frame = Frame::new(window, &opts);
        let paths = cell_paths(&svg);
        let mut checked = 0;
        match &tiling {
            Tiling::Euclid(t) => {
                assert_eq!(paths.len(), t.cells.len());
                for (cell, path) in t.cells.iter().zip(&paths) {
                    for q in path {
                        let p = frame.from_pixel(*q);
                        assert!(cell.constraints.iter().all(|l| l.eval(p) <= 1e-6));
                        checked += 1;
                    }
                }
            }
            Tiling::Sphere(t) => {
                let basis = ortho_basis(opts.view_dir);
                assert_eq!(paths.len(), t.cells.len());
                for (cell, path) in t.cells.iter().zip(&paths) {
                    for q in path {
                        let u = ortho_lift(&basis, frame.from_pixel(*q));
                        assert!(cell.constraints.iter().all(|g| g.eval(u) >= -1e-6));
                        checked += 1;
                    }
                }
            }
            Tiling::Hyper(t) => {
                assert_eq!(paths.len(), t.cells.len());
                for (cell, path) in t.cells.iter().zip(&paths) {
                    for q in path {
                        let k = poincare_to_klein(frame.from_pixel(*q));
                        assert!(cell.constraints.iter().all(|g| g.klein_line().eval(k) <= 1e-6));
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 100, "{g}: {checked}");
    }
}

#[test]
fn svg_is_deterministic() {
    let doc = gen_random_packing(&GenParams::new(Geometry::Sphere, 30, 0.05, 0.2, 5)).unwrap();
    let p = doc.packing().unwrap();
    let t = p.tile(None).unwrap();
    let opts = SvgOptions::default();
    assert_eq!(render_svg(&p, Some(&t), &opts), render_svg(&p, Some(&t), &opts));
}
