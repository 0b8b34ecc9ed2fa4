use clap::Args;
use mrc::bounds::{exponent, loglog_slope, omega_strassen};
use mrc::Result;

use crate::instance::InstanceArgs;
use crate::run::{execute, Algo, RunConfig};

#[derive(Args, Clone, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    /// Comma-separated sizes
    #[arg(long, value_delimiter = ',', default_value = "64,128,256,512")]
    pub ns: Vec<usize>,
    /// Comma-separated ε values
    #[arg(long = "eps", value_delimiter = ',', default_value = "0.5,0.75")]
    pub eps: Vec<f64>,
    /// Seeds per grid point; peak machine counts are averaged
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub range: Option<i64>,
    #[arg(long, default_value_t = 8.0)]
    pub budget_const: f64,
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub out: Option<String>,
}

pub struct SweepOutput {
    pub csv: String,
    pub all_passed: bool,
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

pub fn sweep(a: &SweepArgs) -> Result<SweepOutput> {
    let mut csv = String::from("algo,eps,ns,peak_machines,slope,bound,slope_minus_bound,rounds,rounds_checks_pass,oracle_match\n");
    let mut all_passed = true;
    for &eps in &a.eps {
        let (mut pts, mut machines, mut rounds) = (Vec::new(), Vec::new(), Vec::new());
        let (mut checks_ok, mut oracle_ok) = (true, true);
        for &n in &a.ns {
            let mut total = 0.0;
            for k in 0..a.seeds.max(1) {
                let cfg = RunConfig {
                    algo: a.algo,
                    instance: InstanceArgs {
                        n,
                        seed: a.seed + k,
                        range: a.range,
                        x: a.x,
                        lo: None,
                        p: None,
                        density: None,
                        inf: None,
                        reject_neg_cycles: true,
                        signed_unit: false,
                    },
                    eps,
                    budget_const: a.budget_const,
                    strict: a.strict,
                    input: None,
                    s: None,
                    t: None,
                    edge: None,
                    expect: None,
                };
                let out = execute(&cfg)?;
                total += out.report.peak_machines as f64;
                oracle_ok &= out.oracle_match;
                checks_ok &= out.checks.iter().filter(|c| c.name.starts_with("rounds")).all(|c| c.pass);
                if k == 0 {
                    rounds.push(out.report.rounds);
                    pts.push((out.size as f64, 0.0));
                }
            }
            let mean = total / a.seeds.max(1) as f64;
            machines.push(mean);
            if let Some(p) = pts.last_mut() {
                p.1 = mean.max(1.0);
            }
        }
        all_passed &= checks_ok && oracle_ok;
        let slope = loglog_slope(&pts);
        let omega = matches!(a.algo, Algo::Matmul | Algo::MatmulRect).then(omega_strassen);
        let bound = a.algo.problem().and_then(|p| exponent(p, eps, Some(a.x.unwrap_or(1.0)), omega).ok());
        let fmt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            a.algo.name(),
            eps,
            join(&a.ns),
            join(&machines),
            fmt(slope),
            fmt(bound),
            fmt(slope.zip(bound).map(|(s, b)| s - b)),
            join(&rounds),
            checks_ok,
            oracle_ok,
        ));
    }
    Ok(SweepOutput { csv, all_passed })
}
