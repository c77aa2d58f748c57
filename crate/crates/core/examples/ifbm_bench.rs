//! Fits every bench family with K = 5 to the IFBM covariance for
//! H ∈ {0.2, 0.5, 0.8}. Usage: `ifbm_bench [restarts] [seed]`.

use gsk::bench::{approximate, Family};
use gsk::optimize::OptimizerConfig;
use gsk::targets::{EvalGrid, IfbmKernel};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let restarts: usize = args.get(1).map_or(10, |s| s.parse().expect("restarts"));
    let seed: u64 = args.get(2).map_or(0, |s| s.parse().expect("seed"));
    let grid = EvalGrid::ifbm_default();
    for hurst in [0.2, 0.5, 0.8] {
        let targets = grid.ifbm_values(&IfbmKernel::new(hurst).unwrap()).unwrap();
        for family in Family::ALL {
            let config = OptimizerConfig {
                restarts,
                seed,
                ..OptimizerConfig::default()
            };
            let a = approximate(family, 5, &grid, &targets, &config).unwrap();
            let sse: Vec<String> = a
                .report
                .restarts
                .iter()
                .map(|r| format!("{:.3e}", r.final_objective))
                .collect();
            println!(
                "H={hurst} {:8} nrmse={:.4} time={:.1}s sse per restart: {}",
                family.name(),
                a.normalized_rmse,
                a.report.wall_time_secs,
                sse.join(" ")
            );
        }
    }
}
