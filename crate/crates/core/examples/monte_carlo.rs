//! Replicated comparison of MCPI and standard PCA against the true
//! components of the reference scatter matrix.
//!
//! cargo run --release --example monte_carlo -- [outlier_fraction] [replicates]

use correntropy_pca::datagen::{generate, ExperimentSpec};
use correntropy_pca::mcpi::{fit, standard_pca, McpiConfig};
use correntropy_pca::metrics::component_alignment;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        (v[m - 1] + v[m]) / 2.0
    } else {
        v[m]
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let fraction: f64 = args.first().map_or(Ok(0.05), |s| s.parse())?;
    let replicates: u64 = args.get(1).map_or(Ok(20), |s| s.parse())?;
    let cfg = McpiConfig::default();

    let mut robust = vec![Vec::new(); 3];
    let mut baseline = vec![Vec::new(); 3];
    for seed in 0..replicates {
        let spec = ExperimentSpec {
            outlier_fraction: fraction,
            seed,
            ..ExperimentSpec::reference()
        };
        let data = generate(&spec)?;
        let mcpi = component_alignment(&fit(&data.samples, &cfg)?.components, &data.truth.vectors)?;
        let pca = component_alignment(
            &standard_pca(&data.samples, false)?.components,
            &data.truth.vectors,
        )?;
        println!(
            "seed {seed:>3}  mcpi {:.4?}  pca {:.4?}",
            mcpi.per_component_abs_cos, pca.per_component_abs_cos
        );
        for i in 0..3 {
            robust[i].push(mcpi.per_component_abs_cos[i]);
            baseline[i].push(pca.per_component_abs_cos[i]);
        }
    }

    println!("\noutlier fraction {fraction}, {replicates} replicates");
    for i in 0..3 {
        println!(
            "component {}: median |cos| mcpi {:.5}  pca {:.5}",
            i + 1,
            median(robust[i].clone()),
            median(baseline[i].clone())
        );
    }
    Ok(())
}
