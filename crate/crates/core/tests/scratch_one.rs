use std::time::Instant;

use relog_core::formula::parse_formula;
use relog_core::reductions::{expansive_to_coverability, formula_to_bvass};
use relog_core::solvers::solve_coverability;

#[test]
#[ignore]
fn one_hard_negative() {
    let f = parse_formula("a->(b->b)->a->a").unwrap();
    let (reach, _) = formula_to_bvass(&f).unwrap();
    println!(
        "reach system: dim {} states {} unary {} splits {}",
        reach.system.dimension,
        reach.system.states.len(),
        reach.system.unary_rules.len(),
        reach.system.split_rules.len()
    );
    let (cover, _) = expansive_to_coverability(&reach).unwrap();
    println!(
        "cover system: dim {} states {} unary {} splits {}",
        cover.system.dimension,
        cover.system.states.len(),
        cover.system.unary_rules.len(),
        cover.system.split_rules.len()
    );
    let t = Instant::now();
    let res = solve_coverability(&cover, 8, 4_000_000_000);
    match res {
        Ok(s) => println!("witness={} in {:?}", s.is_witness(), t.elapsed()),
        Err(e) => println!("error={} in {:?}", e, t.elapsed()),
    }
}
