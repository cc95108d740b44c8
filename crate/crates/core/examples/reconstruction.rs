//! Reconstruction error of a data set as components are added, for the robust
//! and the standard basis. Standard PCA minimises this on the clean part by
//! construction; the robust basis trades a little of it for outlier resistance.

use correntropy_pca::datagen::{generate, ExperimentSpec};
use correntropy_pca::mcpi::{fit, standard_pca, McpiConfig};
use correntropy_pca::metrics::reconstruction_error;
use correntropy_pca::DataMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = generate(&ExperimentSpec {
        outlier_fraction: 0.05,
        seed: 12,
        ..ExperimentSpec::reference()
    })?;
    let robust = fit(&data.samples, &McpiConfig::default())?;
    let pca = standard_pca(&data.samples, false)?;

    let inliers: Vec<Vec<f64>> = (0..data.samples.n())
        .filter(|k| data.outlier_indices.binary_search(k).is_err())
        .map(|k| data.samples.row(k).iter().copied().collect())
        .collect();
    let inliers = DataMatrix::from_rows(&inliers)?;

    println!("m   MCPI (all)   PCA (all)   MCPI (inliers)   PCA (inliers)");
    for m in 0..=3 {
        let r = robust.components.columns(0, m).into_owned();
        let s = pca.components.columns(0, m).into_owned();
        println!(
            "{m}   {:>10.1}   {:>9.1}   {:>14.1}   {:>13.1}",
            reconstruction_error(&data.samples, &r)?,
            reconstruction_error(&data.samples, &s)?,
            reconstruction_error(&inliers, &r)?,
            reconstruction_error(&inliers, &s)?
        );
    }
    Ok(())
}
