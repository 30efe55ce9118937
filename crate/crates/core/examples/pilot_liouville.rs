use sidwave::problem::ProblemSpec;
use sidwave::solver::{self, EquationForm, SolveOptions};

fn main() {
    for drexp in [7, 8, 9] {
        let dr = 0.5f64.powi(drexp);
        let spec = ProblemSpec::from_config_str(&format!(
            "n = 3\nmu = 2.0\np = 1.5\nr_support = 1\nf_amplitude = 1\nf_smoothness = 3\n\
             g_amplitude = 1\ng_smoothness = 3\ndr = {dr}\ncfl = 0.5\nt_max = 1\n"
        ))
        .unwrap();
        let opts = || SolveOptions { snapshot_times: vec![1.0], ..Default::default() };
        let a = solver::solve_with_options(&spec, 1.0, EquationForm::Original, &opts()).unwrap();
        let b = solver::solve_with_options(&spec, 1.0, EquationForm::Liouville, &opts()).unwrap();
        let (ua, wb) = (&a.snapshots[0], &b.snapshots[0]);
        let scale = (1.0 + ua.t).powf(0.5 * spec.mu);
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for i in 0..ua.values.len() {
            num = num.max((scale * ua.values[i] - wb.values[i]).abs());
            den = den.max(wb.values[i].abs());
        }
        println!("dr=2^-{drexp}: rel mismatch {:.4e} (t={})", num / den, ua.t);
    }
}
