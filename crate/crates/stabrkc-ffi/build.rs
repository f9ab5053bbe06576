use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR set");
    let out = PathBuf::from(&crate_dir).join("include").join("stabrkc.h");

    let mut config = cbindgen::Config::default();
    config.language = cbindgen::Language::C;
    config.include_guard = Some("STABRKC_H".to_string());
    config.cpp_compat = true;
    config.documentation = true;

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("cbindgen header generation failed")
        .write_to_file(out);

    println!("cargo:rerun-if-changed=src/lib.rs");
}
