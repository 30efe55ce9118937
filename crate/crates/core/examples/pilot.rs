use sidwave::problem::ProblemSpec;
use sidwave::solver::{self, EquationForm, SolveOptions};
use std::time::Instant;

fn spec(dr: f64, cfl: f64, t_max: f64) -> ProblemSpec {
    ProblemSpec::from_config_str(&format!(
        "n = 3\nmu = 2.0\np = 1.5\nr_support = 1\nf_amplitude = 1\nf_smoothness = 3\n\
         g_amplitude = 1\ng_smoothness = 3\ndr = {dr}\ncfl = {cfl}\nt_max = {t_max}\n"
    ))
    .unwrap()
}

fn main() {
    // CFL stability scan: small-amplitude long run, watch for explosion.
    for cfl in [0.9, 0.8, 0.75, 0.7, 0.6, 0.5] {
        let s = spec(1.0 / 64.0, cfl, 30.0);
        let tr = solver::solve_with_options(&s, 1e-3, EquationForm::Original, &SolveOptions::default()).unwrap();
        let max_end = *tr.max_abs_u.last().unwrap();
        println!(
            "cfl={cfl}: terminated {:?}, max_end={max_end:.3e}, global_max={:.3e}",
            tr.terminated,
            tr.max_abs_u.iter().cloned().fold(0.0f64, f64::max)
        );
    }
    // Lifespan scale: when does (3, 2, 1.5, R=1, unit bumps) blow up?
    for eps in [8.0, 4.0, 2.0, 1.0, 0.5] {
        let t = Instant::now();
        let s = spec(1.0 / 64.0, 0.5, 60.0);
        let tr = solver::solve_with_options(&s, eps, EquationForm::Original, &SolveOptions::default()).unwrap();
        match tr.blowup {
            Some(b) => println!("eps={eps}: T_num={:.3} sens={:.3} ({:?})", b.t_num, b.threshold_sensitivity, t.elapsed()),
            None => println!(
                "eps={eps}: no blowup by {} (max_end {:.3e}, global max {:.3e}) ({:?})",
                s.grid.t_max,
                tr.max_abs_u.last().unwrap(),
                tr.max_abs_u.iter().cloned().fold(0.0f64, f64::max),
                t.elapsed()
            ),
        }
    }
}
