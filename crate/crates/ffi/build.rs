fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR");
    let out_path = std::path::Path::new(&crate_dir).join("include").join("sidwave.h");
    std::fs::create_dir_all(out_path.parent().unwrap()).expect("create include dir");

    let mut config = cbindgen::Config::default();
    config.enumeration.prefix_with_name = true;

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .with_language(cbindgen::Language::C)
        .with_include_guard("SIDWAVE_H")
        .with_header(
            "/* C interface for the sidwave laboratory.\n * Generated by cbindgen; do not edit by hand. */",
        )
        .with_cpp_compat(true)
        .generate()
        .expect("cbindgen header generation")
        .write_to_file(&out_path);

    println!("cargo:rerun-if-changed=src/lib.rs");
}
