use bellscope::catalog::Catalog;
use bellscope::sample;
use bellscope::vertices::VertexSets;
use std::time::Instant;

fn main() {
    let catalog = Catalog::shared();
    let sets = VertexSets::shared();
    let new_families: Vec<_> = catalog.ns4.iter().chain(&catalog.ns6).collect();
    let mut rng = sample::rng_from_seed(0xBE11);
    let n = 1000;

    let t = Instant::now();
    let behaviors: Vec<_> = (0..n).map(|_| sample::random_mixture(&mut rng, &sets.no_signaling)).collect();
    println!("mixing: {:?}/sample", t.elapsed() / n);

    let t = Instant::now();
    for b in &behaviors { let _ = b.project_expectations().unwrap(); }
    println!("projection: {:?}/sample", t.elapsed() / n);

    let t = Instant::now();
    for b in &behaviors {
        for ineq in &new_families { let _ = ineq.evaluate(b).unwrap(); }
    }
    println!("46 dots: {:?}/sample", t.elapsed() / n);

    let t = Instant::now();
    let summaries: Vec<_> = behaviors.iter().map(|b| b.project_expectations().unwrap()).collect();
    for s in &summaries {
        for ineq in &new_families { let _ = ineq.expectation_form.evaluate_summary(s); }
    }
    println!("46 form-evals(summary): {:?}/sample", t.elapsed() / n);

    let t = Instant::now();
    for b in &behaviors { assert!(b.check_no_signaling().ok()); }
    println!("ns check: {:?}/sample", t.elapsed() / n);
}
