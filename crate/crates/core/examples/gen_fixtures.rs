//! Regenerate the shipped fixture documents and their manifest.
//!
//! Usage: `cargo run -p galrep-core --example gen_fixtures [-- DIR]`

use std::path::PathBuf;

use galrep::newform_data::fixtures::{generate, render_all, FIXTURE_BOUND};

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures"));
    let generated = generate(FIXTURE_BOUND).expect("fixture generation");
    std::fs::create_dir_all(&dir).expect("create fixture directory");
    for (file, text) in render_all(&generated) {
        std::fs::write(dir.join(&file), text).expect("write fixture");
        println!("wrote {}", dir.join(&file).display());
    }
}
