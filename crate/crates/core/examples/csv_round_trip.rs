//! Reading and writing the plain CSV format used by the `mcpi` binary.

use correntropy_pca::cli::{read_csv, write_csv};
use correntropy_pca::datagen::{generate, ExperimentSpec};
use correntropy_pca::mcpi::{fit, McpiConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("correntropy-pca-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("samples.csv");

    let data = generate(&ExperimentSpec::reference())?;
    write_csv(&path, &data.samples)?;
    let back = read_csv(&path, false)?;
    println!(
        "wrote and re-read {} x {} from {}; bit-identical: {}",
        back.n(),
        back.p(),
        path.display(),
        back.as_matrix() == data.samples.as_matrix()
    );

    let result = fit(&back, &McpiConfig::default())?;
    println!("components (columns){:.6}", result.components);
    Ok(())
}
