use multistat_core::cad2d::*;
use multistat_core::depgraph::{build_graph, min_vertex_cover};
use multistat_core::elimination::{gauss_eliminate, TieBreak};
use multistat_core::fixtures;
use multistat_core::poly::*;
use multistat_core::rat::rat_int;
use multistat_core::realroots::isolate_real_roots;
use std::collections::BTreeMap;

#[test]
fn base_poly_census() {
    let m = fixtures::model26();
    let system = m.steady_state_system();
    let g = build_graph(&system, &m.vars);
    let cover = min_vertex_cover(&g);
    let rs = gauss_eliminate(&system, &m.vars, &m.free_params(), &cover, TieBreak::Normal).unwrap();
    let mut fix = BTreeMap::new();
    fix.insert("k18".to_string(), rat_int(50));
    let cps = eliminate_linear(&rs, &fix, "x4").unwrap();
    let disc = core_discriminant(&cps).unwrap();
    let names: Vec<&str> = cps.core.vars().iter().map(|s| s.as_str()).collect();
    let extra = vec![MultiPoly::var(&names, "x5")];
    let ps = project_with_disc(&cps, &extra, &disc).unwrap();
    let stack = "k19"; let base = "k17";
    let sp: Vec<&MultiPoly> = ps.polys.iter().filter(|p| p.contains_var(stack)).collect();
    let mut total = 0;
    let mut census = |label: String, q: MultiPoly| {
        if q.is_zero() || q.is_constant() { return; }
        let mono = q.monomial_content();
        let q = q.div_monomial(&mono).canonical_scaled();
        if q.is_constant() { return; }
        let uni = q.to_uni(base).unwrap().squarefree_part();
        if uni.degree() < 1 { return; }
        let roots = isolate_real_roots(&uni).unwrap();
        let pos = roots.iter().filter(|r| r.sign() > 0).count();
        total += roots.len();
        println!("{label}: deg {} -> {} real ({} positive)", uni.degree(), roots.len(), pos);
    };
    for p in &ps.polys {
        if !p.contains_var(stack) {
            census(format!("stackfree ({},{})", p.degree_in(base), p.degree_in(stack)), (*p).clone());
        }
    }
    for (i, p) in sp.iter().enumerate() {
        let lc = p.lc_in(stack);
        census(format!("lc[{i}] of ({},{})", p.degree_in(base), p.degree_in(stack)), lc);
        if p.degree_in(stack) >= 2 {
            let d = bivariate_discriminant(p, stack, base).unwrap();
            census(format!("disc[{i}] of ({},{})", p.degree_in(base), p.degree_in(stack)), d);
        }
        for (j, q) in sp.iter().enumerate().skip(i + 1) {
            let r = bivariate_resultant(p, q, stack, base).unwrap();
            census(format!("res[{i},{j}] ({},{})x({},{})", p.degree_in(base), p.degree_in(stack), q.degree_in(base), q.degree_in(stack)), r);
        }
    }
    println!("total roots (pre-merge): {total}");
}
