//! One contaminated data set, fitted with MCPI and with standard PCA.

use correntropy_pca::datagen::{generate, ExperimentSpec};
use correntropy_pca::mcpi::{fit, standard_pca, McpiConfig};
use correntropy_pca::metrics::component_alignment;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ExperimentSpec {
        outlier_fraction: 0.05,
        seed: 12,
        ..ExperimentSpec::reference()
    };
    let data = generate(&spec)?;
    println!(
        "{} samples, {} replaced by outliers",
        data.samples.n(),
        data.outlier_indices.len()
    );

    let start = std::time::Instant::now();
    let robust = fit(&data.samples, &McpiConfig::default())?;
    println!("MCPI fit in {:.2?}", start.elapsed());
    for d in &robust.diagnostics {
        println!(
            "  component {}: {:?}, rounds {}, outer {}, inner {}, converged {}, inner converged {}, final sigma {:?}",
            d.index + 1,
            d.source,
            d.decay_rounds,
            d.outer_iterations,
            d.inner_iterations,
            d.converged,
            d.inner_converged,
            d.final_sigma
        );
    }
    let pca = standard_pca(&data.samples, false)?;

    let truth = &data.truth.vectors;
    let a = component_alignment(&robust.components, truth)?;
    let b = component_alignment(&pca.components, truth)?;
    println!("|cos| to true components");
    println!("  MCPI: {:.4?}", a.per_component_abs_cos);
    println!("  PCA:  {:.4?}", b.per_component_abs_cos);
    Ok(())
}
