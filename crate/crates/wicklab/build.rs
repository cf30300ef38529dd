fn main() {
    // Dense eigensolves and SVDs go through the system LAPACK; the reference
    // BLAS backs it.
    println!("cargo:rustc-link-lib=dylib=lapack");
    println!("cargo:rustc-link-lib=dylib=blas");
}
