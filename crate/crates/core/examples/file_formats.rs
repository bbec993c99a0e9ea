//! CSV import, binary dataset and model files, and representation exports.
//!
//! cargo run --release --example file_formats

use prolfa::aggregate::{aggregate_dataset, write_representations_csv};
use prolfa::data::{load_model, read_descriptor_csv, read_descriptor_file, save_model, write_descriptor_file};
use prolfa::{train, Hyperparameters};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let x = dir.path().join("descriptors.csv");
    let y = dir.path().join("labels.csv");
    std::fs::write(&x, "sample,f1,f2\ncat,0.1,0.2\ncat,0.3,0.1\ndog,4.0,4.2\ndog,3.8,4.1\nowl,0.2,0.0\nemu,4.1,3.9\n")?;
    std::fs::write(&y, "sample,class\ncat,0\ndog,1\nowl,0\nemu,1\n")?;

    let (ds, ids) = read_descriptor_csv(&x, Some(&y))?;
    println!("imported {} samples {:?}, partition {:?}", ds.n_samples(), ids, ds.partition());

    let data_path = dir.path().join("data.plfa");
    write_descriptor_file(&ds, &data_path)?;
    assert_eq!(read_descriptor_file(&data_path)?, ds);

    let trained = train(&ds, &Hyperparameters::default())?;
    let model_path = dir.path().join("model.plfm");
    save_model(&trained.model, &model_path, Some(ds.descriptors()))?;
    let model = load_model(&model_path)?;
    println!("model: {} prototypes of dimension {}", model.prototype_book.ncols(), model.prototype_book.nrows());

    let reps_path = dir.path().join("reps.csv");
    write_representations_csv(&aggregate_dataset(&ds, &model)?, &reps_path, &["example=file_formats".into()])?;
    print!("{}", std::fs::read_to_string(&reps_path)?);
    Ok(())
}
