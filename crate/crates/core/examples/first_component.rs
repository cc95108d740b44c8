//! The first robust direction at a handful of fixed kernel sizes.

use correntropy_pca::correntropy::KernelSize;
use correntropy_pca::datagen::{generate, ExperimentSpec};
use correntropy_pca::mcpi::{mcpi_first_component, standard_pca, McpiConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ExperimentSpec {
        outlier_fraction: 0.05,
        seed: 12,
        ..ExperimentSpec::reference()
    };
    let data = generate(&spec)?;
    let truth = data.truth.vectors.column(0).into_owned();
    let pca = standard_pca(&data.samples, false)?;
    let v0 = pca.component(0);
    println!(
        "standard PCA   |cos| with truth {:.5}",
        v0.dot(&truth).abs()
    );

    let cfg = McpiConfig::default();
    let scale = data.truth.values[0].sqrt();
    for factor in [10.0, 1.0, 0.5, 0.2, 0.1] {
        let sigma = KernelSize::new(factor * scale)?;
        let solve = mcpi_first_component(&data.samples, sigma, &v0, &cfg)?;
        println!(
            "sigma {:>7.4}: |cos| with truth {:.5}, outer {}, inner {}, converged {}",
            sigma.get(),
            solve.vector.dot(&truth).abs(),
            solve.outer_iterations,
            solve.inner_iterations,
            solve.converged
        );
    }
    Ok(())
}
