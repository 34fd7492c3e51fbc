//! Rate and visibility for the nominal gold-plate setup.

use flyover::{
    bundled_materials, find_material, inverse_decoherence_length, ExperimentSetup, LossModel,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let setup = ExperimentSetup::builder().build()?; // nominal defaults
    let table = bundled_materials();
    let gold = find_material(&table, "Au")?;
    let b = inverse_decoherence_length(&setup, gold, LossModel::Lindhard)?;
    println!(
        "1/lambda = {:.3e} 1/m, visibility = {:.3e}",
        b.inverse_length, b.visibility
    );
    Ok(())
}
