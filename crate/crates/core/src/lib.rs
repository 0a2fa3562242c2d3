pub mod cones;
pub mod dynreal;
pub mod error;
pub mod group;
pub mod homeo;
pub mod isolation;
pub mod magnus;
pub mod transform;
pub mod verify;
pub mod word;
pub mod wreath;

pub use error::Error;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/magnus.md")]
    mod magnus {}
    #[doc = include_str!("../../../book/src/cones.md")]
    mod cones {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/wreath.md")]
    mod wreath {}
    #[doc = include_str!("../../../book/src/homeo.md")]
    mod homeo {}
    #[doc = include_str!("../../../book/src/dynreal.md")]
    mod dynreal {}
    #[doc = include_str!("../../../book/src/isolation.md")]
    mod isolation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
