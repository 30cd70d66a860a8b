use std::sync::Arc;

use crate::assets::{fixtures, Albedo, Catalog, ObjectAsset, Rgb, Texture};
use crate::error::{Error, Result};
use crate::geometry::{Vec2, Vec3};
use crate::placement::Placement;
use crate::scene::{AreaLight, MirrorSpec, SceneSpec};

use super::bvh::{Bvh, Triangle};
use super::environment::Environment;
use super::{FLOOR_ID, FRAME_ID, MIRROR_ID, OBJECT_ID_BASE, WALL_ID};

/// Floor texture id used when the catalog ships none.
pub const BUILTIN_FLOOR: &str = "builtin_checker";

const FLOOR_HALF_SIZE: f64 = 60.0;
const WALL_HEIGHT: f64 = 30.0;
/// The wall sits this far behind the mirror plane, the frame this far in front.
const WALL_OFFSET: f64 = 0.01;
const FRAME_OFFSET: f64 = 0.002;
const WALL_ALBEDO: Rgb = [0.62, 0.6, 0.57];
const FRAME_ALBEDO: Rgb = [0.04, 0.04, 0.045];
/// Fraction of the mean environment radiance used as ambient light.
const AMBIENT_SCALE: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    Floor,
    Wall,
    Mirror,
    Frame,
    Object,
}

#[derive(Clone, Debug)]
enum SurfaceAlbedo {
    Constant(Rgb),
    /// World xy times `tiling` addresses the texture.
    Planar(Arc<Texture>, f64),
    Mapped(Arc<Texture>),
}

#[derive(Clone, Debug)]
struct Surface {
    kind: SurfaceKind,
    instance: u16,
    albedo: SurfaceAlbedo,
}

#[derive(Clone, Copy, Debug)]
struct TriInfo {
    surface: u32,
    normal: Vec3,
    uv: Option<[Vec2; 3]>,
}

/// A ray hit with everything shading needs.
#[derive(Clone, Copy, Debug)]
pub struct Hit {
    pub t: f64,
    pub point: Vec3,
    /// Geometric unit normal, turned to face the incoming ray.
    pub normal: Vec3,
    pub kind: SurfaceKind,
    pub instance: u16,
    pub albedo: Rgb,
    pub prim: u32,
}

/// Render-ready scene: world-space triangles, BVH, light and environment.
#[derive(Clone, Debug)]
pub struct PreparedScene {
    tris: Vec<Triangle>,
    info: Vec<TriInfo>,
    surfaces: Vec<Surface>,
    bvh: Bvh,
    pub environment: Environment,
    pub ambient: Rgb,
    pub light: Option<AreaLight>,
    pub mirror: Option<MirrorSpec>,
}

/// Incremental construction of a [`PreparedScene`].
#[derive(Clone, Debug)]
pub struct SceneGeometry {
    tris: Vec<Triangle>,
    info: Vec<TriInfo>,
    surfaces: Vec<Surface>,
    environment: Environment,
    light: Option<AreaLight>,
    mirror: Option<MirrorSpec>,
}

impl SceneGeometry {
    pub fn new(environment: Environment) -> Self {
        SceneGeometry {
            tris: Vec::new(),
            info: Vec::new(),
            surfaces: Vec::new(),
            environment,
            light: None,
            mirror: None,
        }
    }

    fn surface(&mut self, kind: SurfaceKind, instance: u16, albedo: SurfaceAlbedo) -> u32 {
        self.surfaces.push(Surface { kind, instance, albedo });
        (self.surfaces.len() - 1) as u32
    }

    fn triangle(&mut self, a: Vec3, b: Vec3, c: Vec3, surface: u32, uv: Option<[Vec2; 3]>) {
        let n = (b - a).cross(&(c - a));
        let len = n.norm();
        let normal = if len > 0.0 { n / len } else { Vec3::z() };
        self.tris.push(Triangle::new(a, b, c));
        self.info.push(TriInfo { surface, normal, uv });
    }

    /// Rectangle `center ± u ± v`, front side along `u × v`.
    fn quad(&mut self, center: Vec3, u: Vec3, v: Vec3, surface: u32) {
        let p = [center - u - v, center + u - v, center + u + v, center - u + v];
        self.triangle(p[0], p[1], p[2], surface, None);
        self.triangle(p[0], p[2], p[3], surface, None);
    }

    pub fn floor(&mut self, ground_z: f64, texture: Arc<Texture>, tiling: f64) -> &mut Self {
        let s = self.surface(SurfaceKind::Floor, FLOOR_ID, SurfaceAlbedo::Planar(texture, tiling));
        let h = FLOOR_HALF_SIZE;
        let p = [
            Vec3::new(-h, -h, ground_z),
            Vec3::new(h, -h, ground_z),
            Vec3::new(h, h, ground_z),
            Vec3::new(-h, h, ground_z),
        ];
        self.triangle(p[0], p[1], p[2], s, None);
        self.triangle(p[0], p[2], p[3], s, None);
        self
    }

    /// Adds the mirror quad, the wall behind it and the frame around it.
    pub fn mirror(&mut self, mirror: &MirrorSpec, ground_z: f64) -> &mut Self {
        let n = mirror.plane.normal;
        let h = mirror.horizontal_axis();
        let z = Vec3::z();
        let base = mirror.plane.normal * mirror.plane.offset;
        let c = mirror.aperture.center;
        let (hw, hh) = (mirror.aperture.half_width, mirror.aperture.half_height);

        let wall = self.surface(SurfaceKind::Wall, WALL_ID, SurfaceAlbedo::Constant(WALL_ALBEDO));
        let wall_center = base - n * WALL_OFFSET + z * (ground_z + 0.5 * WALL_HEIGHT);
        self.quad(wall_center, h * FLOOR_HALF_SIZE, z * (0.5 * WALL_HEIGHT), wall);

        let m = self.surface(SurfaceKind::Mirror, MIRROR_ID, SurfaceAlbedo::Constant([1.0; 3]));
        self.quad(c, h * hw, z * hh, m);

        if let Some(f) = mirror.frame.filter(|f| *f > 0.0) {
            let fr = self.surface(SurfaceKind::Frame, FRAME_ID, SurfaceAlbedo::Constant(FRAME_ALBEDO));
            let front = c + n * FRAME_OFFSET;
            // Top and bottom strips span the full outer width; side strips fill between.
            self.quad(front + z * (hh + 0.5 * f), h * (hw + f), z * (0.5 * f), fr);
            let bottom = (c.z - hh - f).max(ground_z);
            let bottom_h = c.z - hh - bottom;
            if bottom_h > 0.0 {
                let bc = Vec3::new(front.x, front.y, bottom + 0.5 * bottom_h);
                self.quad(bc, h * (hw + f), z * (0.5 * bottom_h), fr);
            }
            self.quad(front + h * (hw + 0.5 * f), h * (0.5 * f), z * hh, fr);
            self.quad(front - h * (hw + 0.5 * f), h * (0.5 * f), z * hh, fr);
        }
        self.mirror = Some(*mirror);
        self
    }

    pub fn object(&mut self, asset: &ObjectAsset, placement: &Placement, instance: u16) -> &mut Self {
        let albedo = match &asset.albedo {
            Albedo::Color(c) => SurfaceAlbedo::Constant(*c),
            Albedo::Texture(t) if asset.uvs.is_some() => SurfaceAlbedo::Mapped(t.clone()),
            Albedo::Texture(t) => SurfaceAlbedo::Constant(t.mean()),
        };
        let mapped = matches!(albedo, SurfaceAlbedo::Mapped(_));
        let s = self.surface(SurfaceKind::Object, instance, albedo);
        let xf = placement.similarity();
        let world: Vec<Vec3> = asset.vertices.iter().map(|v| xf.apply(v)).collect();
        for tri in &asset.triangles {
            let [a, b, c] = tri.map(|i| i as usize);
            let uv = match (&asset.uvs, mapped) {
                (Some(uvs), true) => Some([uvs[a], uvs[b], uvs[c]]),
                _ => None,
            };
            self.triangle(world[a], world[b], world[c], s, uv);
        }
        self
    }

    pub fn light(&mut self, light: AreaLight) -> &mut Self {
        self.light = Some(light);
        self
    }

    pub fn build(self) -> PreparedScene {
        let bvh = Bvh::build(&self.tris);
        let mean = self.environment.mean();
        PreparedScene {
            tris: self.tris,
            info: self.info,
            surfaces: self.surfaces,
            bvh,
            ambient: mean.map(|c| c * AMBIENT_SCALE),
            environment: self.environment,
            light: self.light,
            mirror: self.mirror,
        }
    }
}

/// The built-in checkerboard floor texture.
pub fn builtin_floor() -> Arc<Texture> {
    Arc::new(Texture::from_image(&fixtures::checker(
        [200, 196, 188],
        [92, 88, 84],
        2,
        32,
    )))
}

impl PreparedScene {
    /// Resolves the scene's asset, floor and environment ids against `catalog`.
    pub fn new(spec: &SceneSpec, catalog: &Catalog) -> Result<Self> {
        let environment = match Environment::builtin(&spec.environment_id) {
            Some(env) => env,
            None => Environment::Image(
                catalog
                    .environments
                    .get(&spec.environment_id)
                    .ok_or_else(|| Error::UnknownAsset(spec.environment_id.clone()))?
                    .clone(),
            ),
        };
        let mut g = SceneGeometry::new(environment);
        if spec.floor_texture_id == BUILTIN_FLOOR {
            g.floor(spec.ground_z, builtin_floor(), 1.0);
        } else {
            let f = catalog
                .floors
                .get(&spec.floor_texture_id)
                .ok_or_else(|| Error::UnknownAsset(spec.floor_texture_id.clone()))?;
            g.floor(spec.ground_z, f.texture.clone(), f.tiling);
        }
        g.mirror(&spec.mirror, spec.ground_z);
        for (k, p) in spec.placements.iter().enumerate() {
            g.object(catalog.asset(&p.asset_id)?, p, OBJECT_ID_BASE + k as u16);
        }
        g.light(spec.light);
        Ok(g.build())
    }

    pub fn triangle_count(&self) -> usize {
        self.tris.len()
    }

    /// Nearest hit with `t > t_min`, optionally ignoring the mirror surface.
    pub fn intersect(&self, origin: &Vec3, dir: &Vec3, t_min: f64, skip_mirror: bool) -> Option<Hit> {
        let info = &self.info;
        let surfaces = &self.surfaces;
        let hit = self.bvh.closest(&self.tris, origin, dir, t_min, f64::INFINITY, |p| {
            skip_mirror && surfaces[info[p as usize].surface as usize].kind == SurfaceKind::Mirror
        })?;
        let ti = &info[hit.prim as usize];
        let surface = &surfaces[ti.surface as usize];
        let point = origin + dir * hit.t;
        let normal = if ti.normal.dot(dir) > 0.0 {
            -ti.normal
        } else {
            ti.normal
        };
        let albedo = match &surface.albedo {
            SurfaceAlbedo::Constant(c) => *c,
            SurfaceAlbedo::Planar(tex, tiling) => tex.sample(point.x * tiling, point.y * tiling),
            SurfaceAlbedo::Mapped(tex) => match ti.uv {
                Some([a, b, c]) => {
                    let uv = a * (1.0 - hit.u - hit.v) + b * hit.u + c * hit.v;
                    // OBJ texture coordinates start at the bottom row.
                    tex.sample(uv.x, 1.0 - uv.y)
                }
                None => tex.mean(),
            },
        };
        Some(Hit {
            t: hit.t,
            point,
            normal,
            kind: surface.kind,
            instance: surface.instance,
            albedo,
            prim: hit.prim,
        })
    }

    /// Whether anything blocks the open segment from `origin` along `dir` up to `dist`.
    pub fn occluded(&self, origin: &Vec3, dir: &Vec3, t_min: f64, dist: f64) -> bool {
        self.bvh.occluded(&self.tris, origin, dir, t_min, dist)
    }
}
