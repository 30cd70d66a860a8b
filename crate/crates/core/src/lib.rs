//! Procedural planar-mirror scene generation.
//!
//! Scenes place one or two catalog objects in front of a planar mirror,
//! inside a ground region from which both the object and its reflection are
//! visible to every camera of a fixed 19-pose rig. Each scene is rendered
//! from three of those poses by a deterministic ray tracer into RGB, depth,
//! normal, instance, reflected-instance and mirror-mask passes. Reflections
//! are checked against an independent render from the mirrored camera.
//!
//! Module map:
//!
//! - [`geometry`]: planes, reflections, boxes, frusta, convex polygons, rays.
//! - [`assets`]: OBJ meshes, textures, the catalog and pairing table.
//! - [`placement`]: sampling region, normalization, grounding, pair placement.
//! - [`scene`]: mirror, light, camera rig and [`scene::SceneSpec`] assembly.
//! - [`render`]: ray tracer, render passes, file encoding, reflection oracle.
//! - [`metrics`]: masked PSNR/SSIM and the oracle match statistic.
//! - [`dataset`]: end-to-end generation, manifest, validation, contact sheets.
//! - [`cli`]: the `mirrorscene` command-line front end.

pub mod assets;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod placement;
pub mod render;
pub mod rng;
pub mod scene;

pub use error::{Error, Result};
