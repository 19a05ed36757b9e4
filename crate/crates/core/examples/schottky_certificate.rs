// Building Schottky groups from boundary disks and checking their ping-pong certificate.

use fuchsian::freegroup::{build_schottky, builtin, symmetric_disks, verify_certificate, DEFAULT_CERTIFICATE_SAMPLES};

pub fn run_example() {
    for k in 2..=4 {
        let spec = build_schottky(&symmetric_disks(k, 0.3)).unwrap();
        let report = verify_certificate(&spec, DEFAULT_CERTIFICATE_SAMPLES).unwrap();
        println!(
            "k = {k}: valid {}, disjoint margin {:.4}, mapping margin {:.3e}, tangent {}",
            report.valid, report.disjoint_margin, report.mapping_margin, report.tangent
        );
        assert!(report.valid);
    }
    let gamma2 = builtin("gamma2").unwrap();
    let report = verify_certificate(&gamma2, DEFAULT_CERTIFICATE_SAMPLES).unwrap();
    println!("gamma2: valid {}, tangent {}", report.valid, report.tangent);
    assert!(report.valid && report.tangent);
    println!("{}", gamma2.to_json());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
