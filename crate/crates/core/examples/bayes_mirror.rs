//! Bayes conditioning on finite spaces: a product measure keeps site-2
//! statistics, a correlated one changes them.

use janus::classical::{
    bayes_condition, conditional_probability_classical, is_separable, marginal, probability,
    FiniteProbSpace, RandomVariable,
};

fn report(name: &str, space: &FiniteProbSpace) -> janus::Result<()> {
    let a = RandomVariable::on_site(space, 0, "A", |w| if w == "up" { 1.0 } else { -1.0 })?;
    let b = RandomVariable::on_site(space, 1, "B", |w| if w == "up" { 1.0 } else { -1.0 })?;
    println!("{name}: separable = {}", is_separable(space)?);
    println!("  P(B = +1)          = {:.6}", probability(space, &b, 1.0)?);
    println!(
        "  P(B = +1 | A = +1) = {:.6}",
        conditional_probability_classical(space, (&a, 1.0), (&b, 1.0))?
    );
    let updated = bayes_condition(space, &a, 1.0)?;
    println!(
        "  site-2 marginal after A = +1: {:?}",
        marginal(&updated, 1)?.weights()
    );
    Ok(())
}

fn main() -> janus::Result<()> {
    let labels = || vec!["up".to_string(), "down".to_string()];
    let product = FiniteProbSpace::bipartite(
        labels(),
        labels(),
        vec![0.3 * 0.6, 0.3 * 0.4, 0.7 * 0.6, 0.7 * 0.4],
    )?;
    let correlated = FiniteProbSpace::bipartite(labels(), labels(), vec![0.0, 0.5, 0.5, 0.0])?;
    report("product measure", &product)?;
    report("anticorrelated measure", &correlated)?;
    Ok(())
}
