//! Rewrites the generated stdlib sources: `cargo run -p ittm-toolkit --example regen_stdlib`.

fn main() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("stdlib");
    for (name, make) in ittm_toolkit::stdlib::generated() {
        let src = make().to_source();
        std::fs::write(dir.join(format!("{name}.itm")), src).expect("write stdlib source");
        println!("wrote {name}");
    }
}
