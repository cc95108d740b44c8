//! Agreement with standard PCA on clean data as a function of how far the
//! kernel is allowed to shrink. Few decay rounds keep every sample in play and
//! reproduce PCA; many rounds leave only the samples nearest each direction.

use correntropy_pca::datagen::{generate, ExperimentSpec};
use correntropy_pca::mcpi::{fit, standard_pca, McpiConfig};
use correntropy_pca::metrics::component_alignment;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seeds = 0..10u64;
    for n_decay in [1, 10, 20, 40, 65] {
        let cfg = McpiConfig {
            n_decay,
            ..McpiConfig::default()
        };
        let mut cos = [0.0f64; 3];
        for seed in seeds.clone() {
            let data = generate(&ExperimentSpec {
                seed,
                ..ExperimentSpec::reference()
            })?;
            let robust = fit(&data.samples, &cfg)?;
            let pca = standard_pca(&data.samples, false)?;
            let report = component_alignment(&robust.components, &pca.components)?;
            for (acc, c) in cos.iter_mut().zip(&report.per_component_abs_cos) {
                *acc += c / seeds.clone().count() as f64;
            }
        }
        println!(
            "n_decay {n_decay:>2} (final sigma factor {:.4}): mean |cos| vs PCA {:.5} {:.5} {:.5}",
            cfg.eta.powi(n_decay as i32),
            cos[0],
            cos[1],
            cos[2]
        );
    }
    Ok(())
}
