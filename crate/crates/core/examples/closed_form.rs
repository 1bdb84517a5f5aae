//! Closed-form depth-1 expectations for every ansatz on the Petersen graph,
//! plus the star-graph ceiling of QAOA.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use xqaoa::analytic::{self, star_qaoa1_optimum, AngleAssignment, StarGraphSpec, Variant};
use xqaoa::graph::named;

fn main() -> xqaoa::Result<()> {
    let g = named::petersen();
    println!("Petersen: n = {}, m = {}", g.n(), g.m());

    let (gamma, beta) = (0.6, FRAC_PI_8);
    println!("QAOA1(γ={gamma}, β=π/8) = {:.6}", analytic::qaoa1_expectation(&g, gamma, beta));
    for variant in Variant::ALL {
        let a = AngleAssignment::uniform(&g, variant, gamma, beta, beta);
        println!("{:>5}: ⟨C⟩ = {:.6}", variant.name(), analytic::expectation(&g, &a));
    }

    let star = named::star(4);
    let y = AngleAssignment::uniform(&star, Variant::Y, PI, 0.0, FRAC_PI_4);
    println!("S4 with the Y mixer at γ=π, α=π/4: ⟨C⟩ = {}", analytic::expectation(&star, &y));
    for k in 2..=6 {
        let opt = star_qaoa1_optimum(StarGraphSpec::new(k)?);
        println!("best QAOA1 ratio on S{k}: {:.6} at γ = {:.4}", opt.ratio, opt.gamma);
    }
    Ok(())
}
