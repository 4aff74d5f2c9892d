// The guide under book/ is plain mdbook. Each chapter is pulled in here as a
// module doc so that `cargo test` runs its code blocks as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/witt.md")]
pub mod witt {}
#[doc = include_str!("../../../book/src/fgl.md")]
pub mod fgl {}
#[doc = include_str!("../../../book/src/liealg.md")]
pub mod liealg {}
#[doc = include_str!("../../../book/src/gadual.md")]
pub mod gadual {}
#[doc = include_str!("../../../book/src/specseq.md")]
pub mod specseq {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
