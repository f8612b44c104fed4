use crate::alphabet::Alphabet;

pub const FIXTURE_JSON: &str = include_str!("../tests/data/fixture_alphabet.json");

pub fn fixture() -> Alphabet {
    Alphabet::load(FIXTURE_JSON).expect("fixture alphabet is valid")
}
