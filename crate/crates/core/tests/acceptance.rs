//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt::Write as _;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polysep::caps::{cap_from_normals, find_isosceles_cap, find_non_isosceles_cap, CapGrid, ConvexDisc};
use polysep::geom::{
    equipotential_points, power, radical_line, sbisector, sphere_foot_of_perpendicular, spot, EDisc, EPoint, HPoint,
    SDisc, SPoint, Vec3,
};
use polysep::geom::hyper::hpot;
use polysep::io::{emit_tiling, gen_random_packing, GenParams, Geometry, Packing, TilingDocument};
use polysep::nonsep::{counterexample, polygon_gap, sampled_separating_line};
use polysep::tiling::Tiling;

const VERIFY_TOL: f64 = 1e-9;
const AREA_TOL: f64 = 1e-6;
const TIE_BAND: f64 = 1e-9;
/// Grid points per packing; 100 packings give 10⁵ classified points.
const GRID_PER_PACKING: usize = 1000;
const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
    transcript: String,
}

fn outcome(failures: &[String], detail: String, transcript: String) -> Outcome {
    let detail = match failures.first() {
        None => detail,
        Some(f) => format!("{} failures, first: {f}", failures.len()),
    };
    Outcome {
        pass: failures.is_empty(),
        detail,
        transcript,
    }
}

fn packing(geometry: Geometry, n: usize, rmin: f64, rmax: f64, seed: u64) -> Packing {
    gen_random_packing(&GenParams::new(geometry, n, rmin, rmax, seed))
        .and_then(|d| d.packing())
        .unwrap_or_else(|e| panic!("{geometry} n={n} seed={seed}: {e}"))
}

/// Verifies the built tiling and records a digest of its JSON.
fn tile_and_verify(p: &Packing, label: &str, failures: &mut Vec<String>, transcript: &mut String) -> Option<Tiling> {
    let t = match p.tile(None) {
        Ok(t) => t,
        Err(e) => {
            failures.push(format!("{label}: {e}"));
            return None;
        }
    };
    match p.verify(&t, VERIFY_TOL) {
        Ok(r) if !r.passed() => failures.push(format!("{label}: {}", r.failure.unwrap())),
        Ok(r) if !matches!(t, Tiling::Hyper(_)) && r.coverage_error() > AREA_TOL => {
            failures.push(format!("{label}: coverage {:.3e}", r.coverage_error()))
        }
        Ok(_) => {}
        Err(e) => failures.push(format!("{label}: {e}")),
    }
    let mut h = DefaultHasher::new();
    emit_tiling(&TilingDocument::from_tiling(&t)).hash(&mut h);
    let _ = writeln!(transcript, "{:016x}", h.finish());
    Some(t)
}

fn euclidean_separation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut failures, mut transcript, mut worst) = (Vec::new(), String::new(), 0.0f64);
    for k in 0..100 {
        let n = rng.random_range(1..=200);
        let rmax = 0.3 / (n as f64).sqrt();
        let p = packing(Geometry::Euclidean, n, 0.2 * rmax, rmax, 100 + k);
        let label = format!("packing {k} (n={n})");
        if let Some(Tiling::Euclid(t)) = tile_and_verify(&p, &label, &mut failures, &mut transcript) {
            let area: f64 = t.cells.iter().map(|c| c.area()).sum();
            worst = worst.max((area - t.bbox.area()).abs() / t.bbox.area());
        }
    }
    if worst > AREA_TOL {
        failures.push(format!("area sum off by {worst:.3e}"));
    }
    outcome(&failures, format!("100 packings, worst area error {worst:.1e}"), transcript)
}

fn radical_lines() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut failures, mut transcript) = (Vec::new(), String::new());
    let (mut perp, mut eq) = (0.0f64, 0.0f64);
    let mut count = 0;
    while count < 10_000 {
        let o1 = EPoint::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let o2 = EPoint::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let d = o1.dist(o2);
        let r1 = rng.random_range(0.01..1.0) * d;
        let r2 = rng.random_range(0.0..1.0) * (d - r1);
        let (Ok(c1), Ok(c2)) = (EDisc::new(o1, r1), EDisc::new(o2, r2)) else { continue };
        if c1.clearance(&c2) <= 1e-9 {
            continue;
        }
        count += 1;
        let line = match radical_line(&c1, &c2) {
            Ok(l) => l,
            Err(e) => {
                failures.push(format!("pair {count}: {e}"));
                continue;
            }
        };
        let dir = line.normal.perp();
        perp = perp.max(dir.dot((o2 - o1).normalized()).abs());
        if !(line.eval(o1) < -r1 && line.eval(o2) > r2) {
            failures.push(format!("pair {count}: line does not separate"));
        }
        let foot = line.normal * line.offset;
        for t in [-2.0, -0.5, 0.0, 0.7, 2.0] {
            let p = foot + dir * t;
            eq = eq.max((power(p, &c1) - power(p, &c2)).abs());
        }
        let _ = writeln!(transcript, "{:?} {:?}", line.normal, line.offset);
    }
    if perp >= 1e-12 {
        failures.push(format!("direction dot {perp:.2e}"));
    }
    if eq >= 1e-9 {
        failures.push(format!("power difference {eq:.2e}"));
    }
    outcome(&failures, format!("10^4 pairs, dot {perp:.1e}, power {eq:.1e}"), transcript)
}

fn fibonacci_sphere(i: usize, n: usize) -> Vec3 {
    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
    let s = (1.0 - z * z).sqrt();
    let phi = GOLDEN_ANGLE * i as f64;
    Vec3::new(s * phi.cos(), s * phi.sin(), z)
}

/// Top two scores; `sign` picks max (+1) or min (-1).
fn best_two(scores: impl Iterator<Item = f64>, sign: f64) -> (usize, f64, f64) {
    let (mut k, mut b1, mut b2) = (0, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (j, s) in scores.enumerate() {
        let s = sign * s;
        if s > b1 {
            (k, b2, b1) = (j, b1, s);
        } else if s > b2 {
            b2 = s;
        }
    }
    (k, b1, b2)
}

fn spherical_separation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut failures, mut transcript) = (Vec::new(), String::new());
    let (mut classified, mut ties, mut worst) = (0, 0, 0.0f64);
    for k in 0..100 {
        let n = rng.random_range(2..=100);
        let rmax = (1.0 - 0.6 / n as f64).acos().min(FRAC_PI_2 - 0.051);
        let p = packing(Geometry::Sphere, n, 0.25 * rmax, rmax, 300 + k);
        let Packing::Sphere(discs) = &p else { unreachable!() };
        let label = format!("packing {k} (n={n})");
        let Some(Tiling::Sphere(t)) = tile_and_verify(&p, &label, &mut failures, &mut transcript) else { continue };
        let area: f64 = t.cells.iter().map(|c| c.area()).sum();
        worst = worst.max((area - 4.0 * PI).abs() / (4.0 * PI));
        for i in 0..GRID_PER_PACKING {
            let u = fibonacci_sphere(i + k as usize, GRID_PER_PACKING + 100);
            let a = SPoint::normalize(u).unwrap();
            let (best, b1, b2) = best_two(discs.iter().map(|d| spot(a, d)), 1.0);
            if b1 - b2 <= TIE_BAND * b1.abs().max(1.0) {
                ties += 1;
                continue;
            }
            classified += 1;
            let own = t.cells.iter().find(|c| c.owner == best).unwrap();
            let stolen = t.cells.iter().any(|c| c.owner != best && c.contains(u, -1e-12));
            if !own.contains(u, 1e-12) || stolen {
                failures.push(format!("{label}: grid point {u:?} misclassified"));
            }
        }
    }
    if worst > AREA_TOL {
        failures.push(format!("area sum off by {worst:.3e}"));
    }
    outcome(
        &failures,
        format!("100 packings, {classified} grid points ({ties} ties), worst area error {worst:.1e}"),
        transcript,
    )
}

fn random_sdisc(rng: &mut ChaCha8Rng, r: f64) -> SDisc {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi = rng.random::<f64>() * TAU;
    let s = (1.0 - z * z).sqrt();
    SDisc::new(SPoint::normalize(Vec3::new(s * phi.cos(), s * phi.sin(), z)).unwrap(), r).unwrap()
}

/// Roots in `[0, 2π)` of `cos x / cos r1 = cos(d − x) / cos r2`, `x` measured from `O1` towards `O2`.
fn scanned_roots(d: f64, r1: f64, r2: f64) -> Vec<f64> {
    let f = |x: f64| x.cos() / r1.cos() - (d - x).cos() / r2.cos();
    let steps = 3600;
    let mut roots = Vec::new();
    for i in 0..steps {
        let (mut a, mut b) = (TAU * i as f64 / steps as f64, TAU * (i + 1) as f64 / steps as f64);
        if f(a) == 0.0 {
            roots.push(a);
            continue;
        }
        if f(a).signum() == f(b).signum() {
            continue;
        }
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if f(a).signum() == f(m).signum() {
                a = m
            } else {
                b = m
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots
}

fn angle_gap(a: f64, b: f64) -> f64 {
    ((a - b + PI).rem_euclid(TAU) - PI).abs()
}

fn spherical_equipotentials() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut failures, mut transcript) = (Vec::new(), String::new());
    let (mut foot_res, mut root_res, mut anti_res) = (0.0f64, 0.0f64, 0.0f64);
    let mut equi = 0;
    let mut count = 0;
    while count < 10_000 {
        let (r1, r2) = (rng.random_range(0.01..1.4), rng.random_range(0.01..1.4));
        let c1 = random_sdisc(&mut rng, r1);
        let c2 = random_sdisc(&mut rng, r2);
        if c1.clearance(&c2) <= 1e-6 || c1.center.vec().cross(c2.center.vec()).norm() < 1e-6 {
            continue;
        }
        count += 1;
        let (o1, o2) = (c1.center.vec(), c2.center.vec());
        let g = polysep::geom::GreatCircleS::new(o1.cross(o2)).unwrap();

        // half of the points are equipotential, half are generic
        let a = if count % 2 == 0 {
            let bis = sbisector(&c1, &c2).unwrap();
            let (e1, e2) = (bis.normal.cross(g.normal).normalized(), g.normal);
            let t = rng.random_range(0.05..(PI - 0.05)) * if rng.random::<bool>() { 1.0 } else { -1.0 };
            SPoint::normalize(e1 * t.cos() + e2 * t.sin()).unwrap()
        } else {
            random_sdisc(&mut rng, 0.1).center
        };
        let Ok(foot) = sphere_foot_of_perpendicular(a, &g) else { continue };
        let gap_a = spot(a, &c1) - spot(a, &c2);
        let gap_p = spot(foot, &c1) - spot(foot, &c2);
        // cos(AO) = cos(AP) cos(PO) for O on the great circle
        foot_res = foot_res.max((gap_a - a.dot(foot) * gap_p).abs());
        // near the poles of the great circle the potentials flatten out
        if a.dot(foot) > 1e-2 {
            if (gap_a.abs() < 1e-12) != (gap_p.abs() < 1e-9) {
                failures.push(format!("instance {count}: gaps {gap_a:.3e} / {gap_p:.3e}"));
            }
            equi += usize::from(gap_a.abs() < 1e-12);
        }

        let (p, q) = match equipotential_points(&c1, &c2) {
            Ok(pq) => pq,
            Err(e) => {
                failures.push(format!("instance {count}: {e}"));
                continue;
            }
        };
        anti_res = anti_res.max((p.vec() + q.vec()).norm());
        let e1 = o1;
        let e2 = (o2 - o1 * o1.dot(o2)).normalized();
        let d = o1.dot(o2).clamp(-1.0, 1.0).acos();
        let roots = scanned_roots(d, c1.radius, c2.radius);
        if roots.len() != 2 {
            failures.push(format!("instance {count}: oracle found {} roots", roots.len()));
            continue;
        }
        for s in [p, q] {
            let x = s.vec().dot(e2).atan2(s.vec().dot(e1));
            let err = roots.iter().map(|&r| angle_gap(x, r)).fold(f64::MAX, f64::min);
            root_res = root_res.max(err);
        }
        let _ = writeln!(transcript, "{:?} {:?} {:?}", foot.vec(), p.vec(), gap_a);
    }
    if foot_res >= 1e-9 {
        failures.push(format!("foot identity residual {foot_res:.2e}"));
    }
    if root_res >= 1e-9 {
        failures.push(format!("root mismatch {root_res:.2e}"));
    }
    if anti_res >= 1e-12 {
        failures.push(format!("pair not antipodal ({anti_res:.2e})"));
    }
    outcome(
        &failures,
        format!("10^4 instances ({equi} equipotential), foot {foot_res:.1e}, roots {root_res:.1e}, antipodal {anti_res:.1e}"),
        transcript,
    )
}

fn hyperbolic_separation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut failures, mut transcript) = (Vec::new(), String::new());
    let (mut classified, mut ties) = (0, 0);
    for k in 0..100 {
        let n = rng.random_range(1..=100);
        let p = packing(Geometry::Hyperbolic, n, 0.05, 0.5, 500 + k);
        let Packing::Hyper(discs) = &p else { unreachable!() };
        let label = format!("packing {k} (n={n})");
        let Some(Tiling::Hyper(t)) = tile_and_verify(&p, &label, &mut failures, &mut transcript) else { continue };
        let span = 5.0f64.cosh() - 1.0;
        for i in 0..GRID_PER_PACKING {
            let rho = (1.0 + span * (i as f64 + 0.5) / GRID_PER_PACKING as f64).acosh();
            let x = HPoint::from_polar(rho, GOLDEN_ANGLE * (i + k as usize) as f64);
            let (best, b1, b2) = best_two(discs.iter().map(|d| hpot(x, d)), -1.0);
            if b1 - b2 <= TIE_BAND * b1.abs().max(1.0) {
                ties += 1;
                continue;
            }
            classified += 1;
            let own = t.cells.iter().find(|c| c.owner == best).unwrap();
            let stolen = t.cells.iter().any(|c| c.owner != best && c.contains(x, -1e-12));
            if !own.contains(x, 1e-12) || stolen {
                failures.push(format!("{label}: grid point at ρ={rho} misclassified"));
            }
        }
    }
    outcome(&failures, format!("100 packings, {classified} grid points ({ties} ties)"), transcript)
}

fn random_convex(rng: &mut ChaCha8Rng) -> ConvexDisc {
    loop {
        let m = rng.random_range(3..12);
        let mut angles: Vec<f64> = (0..m).map(|_| rng.random::<f64>() * TAU).collect();
        angles.sort_by(f64::total_cmp);
        let size = rng.random_range(0.5..3.0);
        let pts = angles
            .iter()
            .map(|&a| EPoint::from_angle(a) * (size * rng.random_range(0.5..1.0)))
            .collect();
        if let Ok(d) = ConvexDisc::new(pts) {
            if d.len() >= 3 {
                return d;
            }
        }
    }
}

/// Largest relative side difference over `samples` random caps of the grid's angle range.
fn worst_regular_cap(m: usize, samples: usize, rng: &mut ChaCha8Rng) -> f64 {
    let disc = ConvexDisc::regular(m, 1.0);
    let grid = CapGrid::default();
    let mut worst = 0.0f64;
    let mut taken = 0;
    while taken < samples {
        let t1 = rng.random::<f64>() * TAU;
        let alpha = rng.random_range(grid.min_angle..grid.max_angle);
        let Ok(cap) = cap_from_normals(&disc, t1, t1 - (PI - alpha)) else { continue };
        taken += 1;
        worst = worst.max(cap.relative_difference());
    }
    worst
}

fn caps() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut failures, mut transcript) = (Vec::new(), String::new());
    let w360 = worst_regular_cap(360, 10_000, &mut rng);
    let w3600 = worst_regular_cap(3600, 10_000, &mut rng);
    if w360 >= 1e-2 {
        failures.push(format!("360-gon cap difference {w360:.3e}"));
    }
    if w3600 >= 1e-3 {
        failures.push(format!("3600-gon cap difference {w3600:.3e}"));
    }
    let (mut residual, mut weakest) = (0.0f64, f64::MAX);
    for k in 0..100 {
        let disc = random_convex(&mut rng);
        for j in 0..20 {
            let alpha = 0.1 + (PI - 0.2) * (j as f64 + 0.5) / 20.0;
            match find_isosceles_cap(&disc, alpha, 1e-12) {
                Ok(cap) => {
                    let r = (cap.side1 - cap.side2).abs() / disc.diameter();
                    residual = residual.max(r);
                    if r >= 1e-9 || (cap.angle - alpha).abs() > 1e-9 {
                        failures.push(format!("polygon {k}, α={alpha}: residual {r:.2e}"));
                    }
                    let _ = writeln!(transcript, "{:?}", cap.apex);
                }
                Err(e) => failures.push(format!("polygon {k}, α={alpha}: {e}")),
            }
        }
        match find_non_isosceles_cap(&disc, 1e-3) {
            Some(cap) if cap.relative_difference() > 1e-3 => weakest = weakest.min(cap.relative_difference()),
            _ => failures.push(format!("polygon {k}: no non-isosceles cap")),
        }
    }
    let _ = writeln!(transcript, "{w360:?} {w3600:?}");
    outcome(
        &failures,
        format!(
            "360-gon {w360:.1e}, 3600-gon {w3600:.1e}, residual/diam {residual:.1e}, \
             weakest non-isosceles {weakest:.1e}"
        ),
        transcript,
    )
}

fn polygon(pts: &[(f64, f64)]) -> ConvexDisc {
    ConvexDisc::new(pts.iter().map(|&(x, y)| EPoint::new(x, y)).collect()).unwrap()
}

fn non_separable() -> Outcome {
    let inputs = [
        ("unit square", polygon(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])),
        ("equilateral triangle", polygon(&[(0.0, 0.0), (1.0, 0.0), (0.5, 3.0f64.sqrt() / 2.0)])),
        ("3-4-5 triangle", polygon(&[(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)])),
    ];
    let (mut failures, mut transcript, mut summary) = (Vec::new(), String::new(), Vec::new());
    for (name, disc) in &inputs {
        let (c, cert) = match counterexample(disc) {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        let p = &c.params;
        if c.copies.len() != p.n + 1 {
            failures.push(format!("{name}: {} copies for n={}", c.copies.len(), p.n));
        }
        let turn = p.n as f64 * p.alpha + p.beta;
        if (turn - TAU).abs() > 1e-9 {
            failures.push(format!("{name}: nα+β = {turn}"));
        }
        if let Some(s) = c.ring.side_lengths.iter().find(|&&s| s >= p.epsilon) {
            failures.push(format!("{name}: ring side {s} >= ε = {}", p.epsilon));
        }
        for i in 0..c.copies.len() {
            for j in i + 1..c.copies.len() {
                let gap = polygon_gap(c.copies[i].disc.vertices(), c.copies[j].disc.vertices());
                if gap <= 0.0 {
                    failures.push(format!("{name}: copies {i} and {j} overlap"));
                }
            }
        }
        if !cert.pass {
            failures.push(format!("{name}: certificate failed"));
        }
        for v in &cert.pairs {
            let [a, b] = v.pair;
            let sampled = sampled_separating_line(
                c.copies[a].disc.vertices(),
                c.copies[b].disc.vertices(),
                c.ring.vertices(),
                720,
                400,
                1e-6,
            );
            if v.feasible || sampled != v.feasible {
                failures.push(format!("{name}: pair {a}-{b} lp {} sampled {sampled}", v.feasible));
            }
        }
        summary.push(format!("{name} n={}", p.n));
        transcript.push_str(&serde_json::to_string(&cert).unwrap());
        for copy in &c.copies {
            transcript.push_str(&serde_json::to_string(copy).unwrap());
        }
    }
    outcome(&failures, summary.join(", "), transcript)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("euclidean power diagrams separate fuzzed packings", euclidean_separation),
        ("radical lines of disjoint pairs", radical_lines),
        ("spherical diagrams separate fuzzed packings", spherical_separation),
        ("equipotential feet and great-circle points", spherical_equipotentials),
        ("hyperbolic diagrams separate fuzzed packings", hyperbolic_separation),
        ("isosceles and non-isosceles caps", caps),
        ("non-separable constructions are certified", non_separable),
    ];
    let mut ok = true;
    let mut transcripts = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("AC{} {verdict}: {name}: {} [{:.1}s]", k + 1, o.detail, start.elapsed().as_secs_f64());
        ok &= o.pass;
        transcripts.push(o.transcript);
    }

    let start = Instant::now();
    let differ: Vec<String> = criteria
        .iter()
        .zip(&transcripts)
        .enumerate()
        .filter(|(_, ((_, run), first))| run().transcript != **first)
        .map(|(k, _)| format!("AC{}", k + 1))
        .collect();
    let bytes: usize = transcripts.iter().map(String::len).sum();
    let verdict = if differ.is_empty() { "PASS" } else { "FAIL" };
    let detail = if differ.is_empty() {
        format!("{bytes} bytes of transcripts reproduced")
    } else {
        format!("reruns differ in {}", differ.join(", "))
    };
    println!("AC8 {verdict}: reruns are byte-identical: {detail} [{:.1}s]", start.elapsed().as_secs_f64());
    ok &= differ.is_empty();

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
