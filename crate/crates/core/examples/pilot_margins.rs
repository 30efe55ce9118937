use sidwave::certificate;
use sidwave::problem::ProblemSpec;
use sidwave::solver::{self, EquationForm};
use std::time::Instant;

fn main() {
    let spec = ProblemSpec::from_config_str(
        "n = 3\nmu = 2.0\np = 1.5\nr_support = 1\nf_amplitude = 1\nf_smoothness = 3\n\
         g_amplitude = 1\ng_smoothness = 3\ndr = 0.015625\ncfl = 0.5\nt_max = 60\n",
    )
    .unwrap();
    let cert = certificate::compute_constants(&spec).unwrap();
    println!("t0 = {}, c1 = {:.4e}, c2 = {:.4e}, c_fg = {:.4}", cert.t0, cert.c1, cert.c2, cert.c_fg);
    for eps in [8.0, 2.0, 1.0] {
        let t = Instant::now();
        let trace = solver::solve_with_options(&spec, eps, EquationForm::Original, &Default::default()).unwrap();
        let t_num = trace.blowup.map(|b| b.t_num);
        let cap = t_num.map(|t| 0.9 * t);
        let report = solver::verify_lower_bounds(&trace, &cert, &spec, eps, cap).unwrap();
        println!(
            "eps={eps}: T_num={t_num:?} cap={cap:?} ({:?})\n  lp: {:?}\n  g : {:?}\n  g1: {:?}",
            t.elapsed(),
            report.lp,
            report.g,
            report.g1
        );
    }
}
