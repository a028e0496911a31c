use std::ffi::CString;
use std::path::Path;
use std::process::Command;
use std::ptr;

use mixedbf_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 512];
    let mut len = 0usize;
    unsafe {
        assert_eq!(
            mbf_last_error_message(buf.as_mut_ptr(), buf.len(), &mut len),
            MBF_OK
        );
    }
    let bytes: Vec<u8> = buf[..len].iter().map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

#[test]
fn shipped_algebra_cohomology() {
    let name = CString::new("sl2").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(mbf_lie_algebra_shipped(name.as_ptr(), &mut g), MBF_OK);
        let mut dim = 0;
        assert_eq!(mbf_lie_algebra_dim(g, &mut dim), MBF_OK);
        assert_eq!(dim, 3);
        let mut dims = [usize::MAX; 8];
        let mut len = 0;
        assert_eq!(
            mbf_cohomology_dims(
                g,
                MBF_MODULE_TRIVIAL,
                dims.as_mut_ptr(),
                dims.len(),
                &mut len
            ),
            MBF_OK
        );
        assert_eq!(&dims[..len], &[1, 0, 0, 1]);
        assert_eq!(
            mbf_complex_a_dims(g, dims.as_mut_ptr(), dims.len(), &mut len),
            MBF_OK
        );
        assert_eq!(dims[..len].iter().sum::<usize>(), 1);
        let mut trivial = -1;
        assert_eq!(mbf_weight_one_trivial(g, &mut trivial), MBF_OK);
        assert_eq!(trivial, 1);
        mbf_lie_algebra_free(g);
    }
}

#[test]
fn errors_map_to_codes() {
    let mut g = ptr::null_mut();
    unsafe {
        let bad = CString::new("so7").unwrap();
        assert_eq!(mbf_lie_algebra_shipped(bad.as_ptr(), &mut g), MBF_DOMAIN);
        assert!(last_error().contains("so7"));
        assert_eq!(
            mbf_lie_algebra_shipped(ptr::null(), &mut g),
            MBF_NULL_POINTER
        );
        let junk = CString::new("basis = [").unwrap();
        assert_eq!(mbf_lie_algebra_from_toml(junk.as_ptr(), &mut g), MBF_PARSE);

        let ab = CString::new("abelian1").unwrap();
        assert_eq!(mbf_lie_algebra_shipped(ab.as_ptr(), &mut g), MBF_OK);
        let mut out = 0;
        assert_eq!(mbf_weight_one_trivial(g, &mut out), MBF_PRECONDITION);
        let mut small = [0usize; 1];
        let mut len = 0;
        assert_eq!(
            mbf_cohomology_dims(g, MBF_MODULE_ADJOINT, small.as_mut_ptr(), 1, &mut len),
            MBF_BUFFER_TOO_SMALL
        );
        assert_eq!(len, 2);
        assert_eq!(
            mbf_cohomology_dims(g, 9, small.as_mut_ptr(), 1, &mut len),
            MBF_DOMAIN
        );
        mbf_lie_algebra_free(g);
        mbf_lie_algebra_free(ptr::null_mut());

        let mut v = 0.0;
        assert_eq!(mbf_boundary_t_integral(1.0, 0.1, &mut v), MBF_DOMAIN);
        assert_eq!(
            mbf_boundary_t_integral(0.1, 1.0, ptr::null_mut()),
            MBF_NULL_POINTER
        );
    }
}

#[test]
fn scalar_entry_points() {
    unsafe {
        let (mut c1, mut c2) = (0.0, 0.0);
        assert_eq!(mbf_lambda_constants(&mut c1, &mut c2), MBF_OK);
        assert_eq!((c1, c2), (1.0, -4.0));
        let (mut total, mut failed) = (0, 1);
        assert_eq!(mbf_identity_suite(&mut total, &mut failed), MBF_OK);
        assert!(total > 0);
        assert_eq!(failed, 0);
        let mut v = 0.0;
        assert_eq!(mbf_boundary_t_integral(0.1, 1.0, &mut v), MBF_OK);
        let exact = 2f64.ln() - 0.1 * 1.1f64.ln() - 1.1f64.ln() + 0.1 * 0.2f64.ln();
        assert!((v - exact).abs() < 1e-15);
    }
}

#[test]
fn graphs_through_handles() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(mbf_graph_wheel(3, &mut g), MBF_OK);
        let (mut betti, mut class) = (0i64, -1);
        assert_eq!(mbf_graph_betti(g, &mut betti), MBF_OK);
        assert_eq!(mbf_graph_classify(g, &mut class), MBF_OK);
        assert_eq!((betti, class), (1, MBF_CLASS_ONE_LOOP_WHEEL));
        let (mut value, mut err) = (0.0, 0.0);
        assert_eq!(
            mbf_bulk_weight(g, 0.1, 1.0, 1e-6, &mut value, &mut err),
            MBF_OK
        );
        assert!((value + 0.0482377).abs() < 1e-6, "{value}");
        assert_eq!(
            mbf_bulk_weight(g, 0.1, 1.0, 0.0, &mut value, &mut err),
            MBF_DOMAIN
        );
        mbf_graph_free(g);

        assert_eq!(mbf_graph_wheel(0, &mut g), MBF_DOMAIN);
        let desc = CString::new("vertex 0 cubic\nvertex 1 cubic\nedge 1 -> 0.0\n").unwrap();
        assert_eq!(mbf_graph_parse(desc.as_ptr(), &mut g), MBF_OK);
        assert_eq!(mbf_graph_classify(g, &mut class), MBF_OK);
        assert_eq!(class, MBF_CLASS_BETA_ROOTED_TREE);
        mbf_graph_free(g);
        let bad = CString::new("vertex 0 nonsense\n").unwrap();
        assert_eq!(mbf_graph_parse(bad.as_ptr(), &mut g), MBF_PARSE);
        assert!(last_error().contains("line 1"));
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/mixedbf.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "mbf_lie_algebra_shipped",
        "mbf_cohomology_dims",
        "mbf_bulk_weight",
        "MbfGraph",
        "MBF_PANIC",
    ] {
        assert!(text.contains(name), "{name} missing from the header");
    }
    let src = std::env::temp_dir().join("mixedbf_header_check.c");
    std::fs::write(&src, "#include \"mixedbf.h\"\nint main(void) { MbfGraph *g = 0; return mbf_graph_wheel(3, &g); }\n").unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
}
