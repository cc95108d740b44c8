//! The synthetic generator: clean Gaussian samples, outlier replacement and
//! the empirical covariance that results.

use correntropy_pca::datagen::{empirical_scatter, generate, ExperimentSpec, OutlierBasis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let clean = generate(&ExperimentSpec {
        n: 20_000,
        ..ExperimentSpec::reference()
    })?;
    println!(
        "target covariance{:.4}",
        ExperimentSpec::reference().scatter
    );
    println!(
        "empirical covariance, 20000 clean samples{:.4}",
        empirical_scatter(&clean.samples)
    );

    for basis in [OutlierBasis::Literal, OutlierBasis::Rotated] {
        let data = generate(&ExperimentSpec {
            outlier_fraction: 0.05,
            seed: 3,
            outlier_basis: basis,
            ..ExperimentSpec::reference()
        })?;
        println!(
            "{basis:?} outliers at rows {:?}...; contaminated covariance{:.4}",
            &data.outlier_indices[..5],
            empirical_scatter(&data.samples)
        );
    }
    Ok(())
}
