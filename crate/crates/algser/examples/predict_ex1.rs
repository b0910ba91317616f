//! The README walk-through: fit ex1 on five coefficients, predict six more.

use algser::hermite_pade::{solve_hpp, DegreeSpec};
use algser::oracle::{self, taylor};
use algser::predictor::PredictionState;
use algser::series::truncate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let truth = taylor(&oracle::ex1(), 11)?;
    let spec = DegreeSpec::new(2, vec![1, 1, 1])?;
    let f = truncate(&truth, spec.required_input_length());

    let set = solve_hpp(&f, &spec)?;
    let mut state = PredictionState::new(&f, &spec, &set)?;
    for _ in 0..6 {
        let j = state.next_index();
        let a = state.predict_next()?;
        println!("a_{} ≈ {}  (true {})", j, a, truth.get(j));
    }
    Ok(())
}
