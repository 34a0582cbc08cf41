//! Reads a DIMACS file named by the last argument and prints a
//! competition-style answer from varisat. Used as an independent external
//! solver in tests.

use std::fs::File;
use std::io::BufReader;

fn main() {
    let path = std::env::args().last().expect("usage: varisat_solve FILE");
    let file = File::open(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    let mut solver = varisat::Solver::new();
    solver.add_dimacs_cnf(BufReader::new(file)).expect("valid DIMACS");
    if solver.solve().expect("no proof output configured") {
        println!("s SATISFIABLE");
        let model: Vec<String> = solver.model().unwrap().iter().map(|l| l.to_dimacs().to_string()).collect();
        println!("v {} 0", model.join(" "));
    } else {
        println!("s UNSATISFIABLE");
    }
}
