use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use crate::assets::{Rgb, Texture};
use crate::geometry::Vec3;

/// Ids of the analytic skies available without any asset files.
pub const BUILTIN_ENVIRONMENTS: [&str; 3] = ["sky_day", "sky_dusk", "sky_overcast"];

/// Radiance arriving from infinitely far away, by direction.
#[derive(Clone, Debug)]
pub enum Environment {
    Gradient {
        zenith: Rgb,
        horizon: Rgb,
        ground: Rgb,
    },
    /// Equirectangular map, +z at the top row.
    Image(Arc<Texture>),
}

fn lerp(a: Rgb, b: Rgb, t: f64) -> Rgb {
    [0, 1, 2].map(|k| a[k] * (1.0 - t) + b[k] * t)
}

impl Environment {
    pub fn builtin(id: &str) -> Option<Self> {
        let (zenith, horizon, ground) = match id {
            "sky_day" => ([0.22, 0.42, 0.82], [0.78, 0.84, 0.9], [0.34, 0.3, 0.26]),
            "sky_dusk" => ([0.14, 0.14, 0.34], [0.92, 0.56, 0.32], [0.2, 0.16, 0.13]),
            "sky_overcast" => ([0.66, 0.68, 0.72], [0.84, 0.84, 0.84], [0.4, 0.4, 0.4]),
            _ => return None,
        };
        Some(Environment::Gradient {
            zenith,
            horizon,
            ground,
        })
    }

    pub fn radiance(&self, dir: &Vec3) -> Rgb {
        match self {
            Environment::Gradient {
                zenith,
                horizon,
                ground,
            } => {
                let z = dir.z.clamp(-1.0, 1.0);
                if z >= 0.0 {
                    lerp(*horizon, *zenith, z.sqrt())
                } else {
                    lerp(*horizon, *ground, (-z).sqrt())
                }
            }
            Environment::Image(tex) => {
                let u = 0.5 + dir.x.atan2(dir.y) / TAU;
                let v = dir.z.clamp(-1.0, 1.0).acos() / PI;
                tex.sample(u, v)
            }
        }
    }

    /// Mean radiance over the sphere, by midpoint quadrature on a fixed
    /// latitude-longitude grid.
    pub fn mean(&self) -> Rgb {
        const NU: usize = 64;
        const NV: usize = 32;
        let mut acc = [0.0; 3];
        let mut weight = 0.0;
        for j in 0..NV {
            let theta = (j as f64 + 0.5) / NV as f64 * PI;
            let w = theta.sin();
            for i in 0..NU {
                let phi = (i as f64 + 0.5) / NU as f64 * TAU;
                let d = Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
                let c = self.radiance(&d);
                for k in 0..3 {
                    acc[k] += c[k] * w;
                }
                weight += w;
            }
        }
        acc.map(|x| x / weight)
    }
}
