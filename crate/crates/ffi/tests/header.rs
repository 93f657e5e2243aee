use std::path::Path;
use std::process::Command;

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/sememevec.h")).unwrap();
    let source = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 20);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    for handle in ["SvSpace", "SvLexicon", "SvSimilarityModel", "SvTagger"] {
        assert!(header.contains(&format!("typedef struct {handle} {handle};")), "{handle}");
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"sememevec.h\"\nint main(void) { SvSpace *s = 0; return sv_space_dim(s) == 0 && sv_tf_bucket(150) == 4 ? 0 : 1; }\n",
    )
    .unwrap();
    for (compiler, extra) in [("cc", &["-std=c99"][..]), ("c++", &["-x", "c++"][..])] {
        let status = Command::new(compiler)
            .args(extra)
            .arg("-fsyntax-only")
            .arg("-Wall")
            .arg("-Werror")
            .arg("-I")
            .arg(&include)
            .arg(&src)
            .status();
        match status {
            Ok(s) => assert!(s.success(), "{compiler} rejected the header"),
            Err(e) => panic!("cannot run {compiler}: {e}"),
        }
    }
}
