//! Meshes, textures, the object catalog and the category pairing table.

mod catalog;
pub mod fixtures;
mod mesh;
mod obj;

pub use catalog::{
    sample_asset, semantic_category, Catalog, CatalogEntry, FloorTexture, PairingTable, ENVIRONMENT_CATEGORY,
    FLOOR_CATEGORY,
};
pub use mesh::{Albedo, ObjectAsset, Rgb, Texture};
pub use obj::{load_obj, write_obj};
