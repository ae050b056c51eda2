//! Image files, seeded masks, synthetic images, configuration files and the
//! benchmark driver behind the command line tool.

pub mod bench;
pub mod config;
pub mod io;
pub mod mask;
pub mod synthetic;

pub use bench::{run_bench, run_bench_on, BenchOptions, BenchResult, Method};
pub use config::Settings;
pub use io::{load_image, load_mask, save_image, save_mask, Picture};
pub use mask::{corrupt, gen_mask, MaskPattern, MaskSpec};
pub use synthetic::{scene_image, smooth_image};
