use rayon::prelude::*;

use crate::assets::{Catalog, Rgb};
use crate::error::{Error, Result};
use crate::geometry::{Vec3, EPS_RAY};
use crate::rng::mix64;
use crate::scene::{CameraPose, SceneSpec};

use super::camera::Camera;
use super::prepared::{Hit, PreparedScene, SurfaceKind};
use super::{RenderPasses, RenderSettings, OBJECT_ID_BASE, SKY_ID};

/// Identifies the pixel sample a shading computation belongs to; it seeds
/// the shift applied to the area-light sample pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShadeContext {
    pub pixel: u64,
    pub sample: u32,
}

impl ShadeContext {
    fn shift(&self) -> (f64, f64) {
        let h = mix64(self.pixel.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ u64::from(self.sample));
        let a = (h >> 11) as f64 / (1u64 << 53) as f64;
        let b = (mix64(h) >> 11) as f64 / (1u64 << 53) as f64;
        (a, b)
    }
}

fn radical_inverse_2(mut k: u32) -> f64 {
    k = k.reverse_bits();
    k as f64 / 4_294_967_296.0
}

fn fract(x: f64) -> f64 {
    x - x.floor()
}

/// Irradiance at `p` (normal `n`) from the scene's area light, estimated
/// with `samples` shifted Hammersley points and occlusion rays.
pub fn direct_irradiance(scene: &PreparedScene, p: &Vec3, n: &Vec3, samples: u32, ctx: ShadeContext) -> Rgb {
    let Some(light) = &scene.light else {
        return [0.0; 3];
    };
    let (sa, sb) = ctx.shift();
    let mut sum = 0.0;
    for k in 0..samples {
        let a = fract((k as f64 + 0.5) / samples as f64 + sa);
        let b = fract(radical_inverse_2(k) + sb);
        let q = light.point(a, b);
        let w = q - p;
        let dist2 = w.norm_squared();
        let dist = dist2.sqrt();
        let dir = w / dist;
        let cos_p = n.dot(&dir);
        let cos_l = -light.normal.dot(&dir);
        if cos_p <= 0.0 || cos_l <= 0.0 {
            continue;
        }
        if scene.occluded(p, &dir, EPS_RAY, dist - EPS_RAY) {
            continue;
        }
        sum += cos_p * cos_l / dist2;
    }
    let scale = sum * light.area() / samples as f64;
    light.radiance.map(|l| l * scale)
}

/// Outgoing radiance toward the ray that produced `hit`. Mirror hits recurse
/// until `max_bounce`, after which the environment is returned.
pub fn shade(
    scene: &PreparedScene,
    hit: &Hit,
    dir: &Vec3,
    settings: &RenderSettings,
    depth: u32,
    ctx: ShadeContext,
) -> Rgb {
    match hit.kind {
        SurfaceKind::Mirror => {
            if depth >= settings.max_bounce {
                return scene.environment.radiance(dir);
            }
            let reflected = dir - hit.normal * (2.0 * dir.dot(&hit.normal));
            trace(scene, &hit.point, &reflected, EPS_RAY, depth + 1, settings, ctx, false)
        }
        _ => {
            let e = direct_irradiance(scene, &hit.point, &hit.normal, settings.shadow_samples, ctx);
            let mut out = [0.0; 3];
            for k in 0..3 {
                out[k] = hit.albedo[k] * (scene.ambient[k] + e[k] / std::f64::consts::PI);
            }
            out
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn trace(
    scene: &PreparedScene,
    origin: &Vec3,
    dir: &Vec3,
    t_min: f64,
    depth: u32,
    settings: &RenderSettings,
    ctx: ShadeContext,
    skip_mirror: bool,
) -> Rgb {
    match scene.intersect(origin, dir, t_min, skip_mirror) {
        Some(hit) => shade(scene, &hit, dir, settings, depth, ctx),
        None => scene.environment.radiance(dir),
    }
}

fn encode(c: Rgb, inv_gamma: f64) -> [u8; 3] {
    c.map(|x| (x.clamp(0.0, 1.0).powf(inv_gamma) * 255.0).round() as u8)
}

struct PixelOut {
    rgb: [u8; 3],
    depth: f32,
    normal: [f32; 3],
    instance: u16,
    reflected: u16,
}

/// Depth, normal, instance and reflected instance seen by the center ray.
fn center_sample(scene: &PreparedScene, cam: &Camera, i: u32, j: u32) -> PixelOut {
    let center = cam.ray(i as f64 + 0.5, j as f64 + 0.5);
    let mut out = PixelOut {
        rgb: [0; 3],
        depth: f32::INFINITY,
        normal: [0.0; 3],
        instance: SKY_ID,
        reflected: SKY_ID,
    };
    if let Some(hit) = scene.intersect(&center.origin, &center.dir, 0.0, false) {
        out.depth = (hit.t * center.dir.dot(&cam.forward)) as f32;
        out.normal = [hit.normal.x as f32, hit.normal.y as f32, hit.normal.z as f32];
        out.instance = hit.instance;
        if hit.kind == SurfaceKind::Mirror {
            let d = center.dir;
            let r = d - hit.normal * (2.0 * d.dot(&hit.normal));
            if let Some(h2) = scene.intersect(&hit.point, &r, EPS_RAY, false) {
                if h2.instance >= OBJECT_ID_BASE {
                    out.reflected = h2.instance;
                }
            }
        }
    }
    out
}

fn render_pixel(scene: &PreparedScene, cam: &Camera, settings: &RenderSettings, i: u32, j: u32) -> PixelOut {
    let pixel = u64::from(j) * u64::from(settings.width) + u64::from(i);
    let mut out = center_sample(scene, cam, i, j);
    let n = settings.grid_size();
    let mut acc = [0.0; 3];
    for b in 0..n {
        for a in 0..n {
            let ray = cam.ray(
                i as f64 + (a as f64 + 0.5) / n as f64,
                j as f64 + (b as f64 + 0.5) / n as f64,
            );
            let ctx = ShadeContext {
                pixel,
                sample: b * n + a,
            };
            let c = trace(scene, &ray.origin, &ray.dir, 0.0, 0, settings, ctx, false);
            for k in 0..3 {
                acc[k] += c[k];
            }
        }
    }
    let inv = 1.0 / (n * n) as f64;
    out.rgb = encode(acc.map(|x| x * inv), 1.0 / settings.gamma);
    out
}

/// Renders all passes for one view. Rows are traced in parallel; every
/// pixel is a pure function of its coordinates, so the output does not
/// depend on the number of threads.
pub fn render(scene: &PreparedScene, view: &CameraPose, settings: &RenderSettings) -> RenderPasses {
    let cam = Camera::new(view, settings.width, settings.height);
    let rows: Vec<Vec<PixelOut>> = (0..settings.height)
        .into_par_iter()
        .map(|j| {
            (0..settings.width)
                .map(|i| render_pixel(scene, &cam, settings, i, j))
                .collect()
        })
        .collect();
    let n = (settings.width * settings.height) as usize;
    let mut passes = RenderPasses {
        width: settings.width,
        height: settings.height,
        rgb: Vec::with_capacity(n),
        depth: Vec::with_capacity(n),
        normal: Vec::with_capacity(n),
        instance: Vec::with_capacity(n),
        reflected_instance: Vec::with_capacity(n),
        mirror_mask: Vec::with_capacity(n),
    };
    for p in rows.into_iter().flatten() {
        passes.rgb.push(p.rgb);
        passes.depth.push(p.depth);
        passes.normal.push(p.normal);
        passes.mirror_mask.push(u8::from(p.instance == super::MIRROR_ID));
        passes.instance.push(p.instance);
        passes.reflected_instance.push(p.reflected);
    }
    passes
}

/// Fraction of pixels covered by each object, directly and through the
/// mirror, for `count` objects with ids from [`OBJECT_ID_BASE`]. Uses only
/// center rays, so it equals the coverage of the instance and
/// reflected_instance passes that [`render`] would produce.
pub fn object_coverage(
    scene: &PreparedScene,
    view: &CameraPose,
    width: u32,
    height: u32,
    count: usize,
) -> Vec<(f64, f64)> {
    let cam = Camera::new(view, width, height);
    let counts = (0..height)
        .into_par_iter()
        .map(|j| {
            let mut c = vec![(0usize, 0usize); count];
            for i in 0..width {
                let p = center_sample(scene, &cam, i, j);
                if let Some(k) = p.instance.checked_sub(OBJECT_ID_BASE).filter(|&k| (k as usize) < count) {
                    c[k as usize].0 += 1;
                }
                if let Some(k) = p
                    .reflected
                    .checked_sub(OBJECT_ID_BASE)
                    .filter(|&k| (k as usize) < count)
                {
                    c[k as usize].1 += 1;
                }
            }
            c
        })
        .reduce(
            || vec![(0, 0); count],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x.0 += y.0;
                    x.1 += y.1;
                }
                a
            },
        );
    let n = (width as usize * height as usize) as f64;
    counts.into_iter().map(|(d, r)| (d as f64 / n, r as f64 / n)).collect()
}

/// Prepares `spec` against `catalog` and renders one of its views.
pub fn render_spec(
    spec: &SceneSpec,
    catalog: &Catalog,
    view: &CameraPose,
    settings: &RenderSettings,
) -> Result<RenderPasses> {
    Ok(render(&PreparedScene::new(spec, catalog)?, view, settings))
}

/// Scene rendered from the mirrored camera.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleRender {
    pub width: u32,
    pub height: u32,
    pub rgb: Vec<[u8; 3]>,
    /// Pixels whose center ray from the real camera crosses the mirror
    /// aperture; `rgb` is black elsewhere.
    pub valid: Vec<bool>,
}

/// Renders what the mirror should show: the scene without the mirror
/// surface, seen by the reflected camera, with rays starting where they
/// cross the mirror plane. Samples and light patterns line up one-to-one
/// with [`render`], so valid pixels must agree with the main render.
pub fn render_reflection_oracle(
    scene: &PreparedScene,
    view: &CameraPose,
    settings: &RenderSettings,
) -> Result<OracleRender> {
    let mirror = scene.mirror.ok_or(Error::NoMirror)?;
    let plane = mirror.plane;
    let cam = Camera::new(view, settings.width, settings.height);
    let virt = cam.reflected(&plane);
    let n = settings.grid_size();
    let inv_gamma = 1.0 / settings.gamma;

    let rows: Vec<Vec<([u8; 3], bool)>> = (0..settings.height)
        .into_par_iter()
        .map(|j| {
            (0..settings.width)
                .map(|i| {
                    let center = cam.ray(i as f64 + 0.5, j as f64 + 0.5);
                    let denom = plane.normal.dot(&center.dir);
                    let t = (plane.offset - plane.normal.dot(&center.origin)) / denom;
                    let valid = plane.signed_distance(center.origin) > 0.0
                        && denom < 0.0
                        && t > 0.0
                        && mirror.aperture_contains(center.at(t), 0.0);
                    if !valid {
                        return ([0; 3], false);
                    }
                    let pixel = u64::from(j) * u64::from(settings.width) + u64::from(i);
                    let mut acc = [0.0; 3];
                    for b in 0..n {
                        for a in 0..n {
                            let ray = virt.ray(
                                i as f64 + (a as f64 + 0.5) / n as f64,
                                j as f64 + (b as f64 + 0.5) / n as f64,
                            );
                            let ctx = ShadeContext {
                                pixel,
                                sample: b * n + a,
                            };
                            let d = plane.normal.dot(&ray.dir);
                            let c = if d > 0.0 {
                                let t_cross = (plane.offset - plane.normal.dot(&ray.origin)) / d;
                                trace(scene, &ray.origin, &ray.dir, t_cross + EPS_RAY, 1, settings, ctx, true)
                            } else {
                                scene.environment.radiance(&ray.dir)
                            };
                            for k in 0..3 {
                                acc[k] += c[k];
                            }
                        }
                    }
                    let inv = 1.0 / (n * n) as f64;
                    (encode(acc.map(|x| x * inv), inv_gamma), true)
                })
                .collect()
        })
        .collect();
    let (rgb, valid) = rows.into_iter().flatten().unzip();
    Ok(OracleRender {
        width: settings.width,
        height: settings.height,
        rgb,
        valid,
    })
}
