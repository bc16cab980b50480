//! Seeded random packings by rejection sampling.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::json::{Geometry, Meta, Packing, PackingDocument};
use super::IoError;
use crate::geom::sphere::RADIUS_MARGIN;
use crate::geom::{EDisc, EPoint, HDisc, HPoint, SDisc, SPoint, Vec3};
use crate::tiling::BBox;

/// Required gap between generated discs, and to the domain boundary.
pub const GEN_CLEARANCE: f64 = 1e-3;
pub const MAX_REJECTIONS: usize = 1_000_000;
/// Hyperbolic packings live in the disc of this radius about the origin.
pub const HYPER_DOMAIN_RADIUS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub geometry: Geometry,
    pub n: usize,
    pub rmin: f64,
    pub rmax: f64,
    pub seed: u64,
    /// Euclidean domain.
    pub bbox: BBox,
}

impl GenParams {
    pub fn new(geometry: Geometry, n: usize, rmin: f64, rmax: f64, seed: u64) -> Self {
        GenParams {
            geometry,
            n,
            rmin,
            rmax,
            seed,
            bbox: BBox::unit(),
        }
    }

    fn check(&self) -> Result<(), IoError> {
        let bad = |m: String| Err(IoError::Invalid(m));
        if !(self.rmin > 0.0 && self.rmin <= self.rmax && self.rmax.is_finite()) {
            return bad(format!("need 0 < rmin <= rmax, got [{}, {}]", self.rmin, self.rmax));
        }
        match self.geometry {
            Geometry::Euclidean if self.n < 1 => bad("need n >= 1".into()),
            Geometry::Hyperbolic if self.n < 1 => bad("need n >= 1".into()),
            Geometry::Sphere if self.n < 2 => bad("need n >= 2 on the sphere".into()),
            Geometry::Sphere if self.rmax >= FRAC_PI_2 - RADIUS_MARGIN => {
                bad(format!("sphere radii must stay below π/2, got {}", self.rmax))
            }
            Geometry::Euclidean => {
                let b = &self.bbox;
                let room = (b.xmax - b.xmin).min(b.ymax - b.ymin);
                if 2.0 * (self.rmin + GEN_CLEARANCE) >= room {
                    return bad(format!("radius {} does not fit the bbox", self.rmin));
                }
                Ok(())
            }
            Geometry::Hyperbolic if self.rmin + GEN_CLEARANCE >= HYPER_DOMAIN_RADIUS => {
                bad(format!("radius {} does not fit the domain", self.rmin))
            }
            _ => Ok(()),
        }
    }
}

/// Draws until `n` discs are accepted; `propose` may return `None` for a
/// draw that misses the domain, which counts as a rejection.
fn sample<T>(
    n: usize,
    rng: &mut ChaCha8Rng,
    mut propose: impl FnMut(&mut ChaCha8Rng) -> Option<T>,
    clearance: impl Fn(&T, &T) -> f64,
) -> Result<Vec<T>, IoError> {
    let mut out: Vec<T> = Vec::with_capacity(n);
    let mut rejections = 0;
    while out.len() < n {
        match propose(rng) {
            Some(d) if out.iter().all(|o| clearance(o, &d) > GEN_CLEARANCE) => out.push(d),
            _ => {
                rejections += 1;
                if rejections >= MAX_REJECTIONS {
                    return Err(IoError::GenerationFailed(rejections));
                }
            }
        }
    }
    Ok(out)
}

pub fn gen_random_packing(p: &GenParams) -> Result<PackingDocument, IoError> {
    p.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (rmin, rmax) = (p.rmin, p.rmax);
    let radius = move |rng: &mut ChaCha8Rng| rmin + (rmax - rmin) * rng.random::<f64>();
    let packing = match p.geometry {
        Geometry::Euclidean => {
            let b = p.bbox;
            let discs = sample(
                p.n,
                &mut rng,
                |rng| {
                    let r = radius(rng);
                    let m = r + GEN_CLEARANCE;
                    let x = b.xmin + m + (b.xmax - b.xmin - 2.0 * m) * rng.random::<f64>();
                    let y = b.ymin + m + (b.ymax - b.ymin - 2.0 * m) * rng.random::<f64>();
                    EDisc::new(EPoint::new(x, y), r).ok()
                },
                EDisc::clearance,
            )?;
            Packing::Euclid { discs, bbox: b }
        }
        Geometry::Sphere => Packing::Sphere(sample(
            p.n,
            &mut rng,
            |rng| {
                let r = radius(rng);
                let z = 2.0 * rng.random::<f64>() - 1.0;
                let phi = TAU * rng.random::<f64>();
                let s = (1.0 - z * z).max(0.0).sqrt();
                let c = SPoint::normalize(Vec3::new(s * phi.cos(), s * phi.sin(), z)).ok()?;
                SDisc::new(c, r).ok()
            },
            SDisc::clearance,
        )?),
        Geometry::Hyperbolic => Packing::Hyper(sample(
            p.n,
            &mut rng,
            |rng| {
                let r = radius(rng);
                let u = rng.random::<f64>();
                let rho = (1.0 + u * (HYPER_DOMAIN_RADIUS.cosh() - 1.0)).acosh();
                let theta = TAU * rng.random::<f64>();
                if rho + r + GEN_CLEARANCE > HYPER_DOMAIN_RADIUS {
                    return None;
                }
                HDisc::new(HPoint::from_polar(rho, theta), r).ok()
            },
            HDisc::clearance,
        )?),
    };
    Ok(PackingDocument::from_packing(&packing, Meta::with_seed(p.seed)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::json::emit_packing;

    #[test]
    fn fixed_seed_is_reproducible() {
        let p = GenParams::new(Geometry::Euclidean, 10, 0.01, 0.05, 42);
        let a = emit_packing(&gen_random_packing(&p).unwrap());
        let b = emit_packing(&gen_random_packing(&p).unwrap());
        assert_eq!(a, b);
        let other = emit_packing(&gen_random_packing(&GenParams { seed: 43, ..p }).unwrap());
        assert_ne!(a, other);
    }

    #[test]
    fn two_sphere_caps() {
        let doc = gen_random_packing(&GenParams::new(Geometry::Sphere, 2, 0.3, 0.3, 1)).unwrap();
        let Packing::Sphere(d) = doc.packing().unwrap() else { panic!() };
        assert_eq!(d.len(), 2);
        assert!(d[0].clearance(&d[1]) > GEN_CLEARANCE);
    }

    #[test]
    fn two_hundred_small_discs_fit() {
        let doc = gen_random_packing(&GenParams::new(Geometry::Euclidean, 200, 0.005, 0.02, 7)).unwrap();
        let Packing::Euclid { discs, bbox } = doc.packing().unwrap() else { panic!() };
        assert_eq!(discs.len(), 200);
        assert!(discs.iter().all(|d| bbox.contains_disc(d, GEN_CLEARANCE)));
    }

    #[test]
    fn hyperbolic_discs_stay_in_the_domain() {
        let doc = gen_random_packing(&GenParams::new(Geometry::Hyperbolic, 40, 0.1, 0.4, 3)).unwrap();
        let Packing::Hyper(d) = doc.packing().unwrap() else { panic!() };
        for disc in &d {
            let rho = disc.center.vec().x.acosh();
            assert!(rho + disc.radius < HYPER_DOMAIN_RADIUS + 1e-9);
        }
    }

    #[test]
    fn overfull_request_fails() {
        let err = gen_random_packing(&GenParams::new(Geometry::Euclidean, 50, 0.2, 0.2, 0)).unwrap_err();
        assert!(err.to_string().contains("packing generation failed"), "{err}");
    }

    #[test]
    fn bad_parameters() {
        assert!(gen_random_packing(&GenParams::new(Geometry::Sphere, 1, 0.1, 0.1, 0)).is_err());
        assert!(gen_random_packing(&GenParams::new(Geometry::Euclidean, 3, 0.2, 0.1, 0)).is_err());
    }
}
