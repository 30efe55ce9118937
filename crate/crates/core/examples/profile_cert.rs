use sidwave::certificate;
use sidwave::problem::ProblemSpec;
use std::time::Instant;

fn main() {
    let spec = ProblemSpec::from_config_str(
        "n = 3\nmu = 2.0\np = 1.5\nr_support = 1\nf_amplitude = 1\nf_smoothness = 3\n\
         g_amplitude = 1\ng_smoothness = 3\ndr = 0.00390625\ncfl = 0.5\nt_max = 10\n",
    )
    .unwrap();
    let t = Instant::now();
    let phi = sidwave::specfun::PhiInterpolator::build(3, 202.0).unwrap();
    println!("phi table: {:?} (r_max {})", t.elapsed(), phi.r_max());
    let t = Instant::now();
    let t0 = certificate::compute_t0(2.0).unwrap();
    println!("t0 = {t0}: {:?}", t.elapsed());
    let t = Instant::now();
    let cert = certificate::compute_constants(&spec).unwrap();
    println!("full certificate: {:?} (c_phi_r {})", t.elapsed(), cert.c_phi_r);
}
