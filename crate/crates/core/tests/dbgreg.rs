use multistat_core::cad2d::*;
use multistat_core::depgraph::{build_graph, min_vertex_cover};
use multistat_core::elimination::{gauss_eliminate, TieBreak};
use multistat_core::fixtures;
use multistat_core::rat::rat_int;
use std::collections::BTreeMap;
use std::time::Instant;

#[test]
fn region_pipeline() {
    let m = fixtures::model26();
    let system = m.steady_state_system();
    let g = build_graph(&system, &m.vars);
    let cover = min_vertex_cover(&g);
    let rs = gauss_eliminate(&system, &m.vars, &m.free_params(), &cover, TieBreak::Normal).unwrap();
    let mut fix = BTreeMap::new();
    fix.insert("k18".to_string(), rat_int(50));
    let mut t = Instant::now();
    let cps = eliminate_linear(&rs, &fix, "x4").unwrap();
    eprintln!("eliminate_linear: {:?}", t.elapsed()); t = Instant::now();
    let disc = core_discriminant(&cps).unwrap();
    eprintln!("disc: {:?}", t.elapsed()); t = Instant::now();
    let names: Vec<&str> = cps.core.vars().iter().map(|s| s.as_str()).collect();
    let extra = vec![multistat_core::poly::MultiPoly::var(&names, "x5")];
    let ps = project_with_disc(&cps, &extra, &disc).unwrap();
    eprintln!("project: {:?} => {} polys", t.elapsed(), ps.polys.len()); t = Instant::now();
    let mut cad = build_open_cad(&ps, "k17", "k19").unwrap();
    eprintln!("build_open_cad: {:?} => {} base bounds, {} cells", t.elapsed(), cad.base_bounds.len(), cad.cell_count()); t = Instant::now();
    classify_region(&mut cad, &cps, &rs, &fix);
    eprintln!("classify: {:?}", t.elapsed());
    let mut quad = 0; let mut one = 0; let mut multi = 0; let mut undet = 0;
    for c in cad.cells() {
        match c.classification {
            CellClass::NotInQuadrant => {}
            CellClass::OneSolution => { quad += 1; one += 1; }
            CellClass::Multistationary => { quad += 1; multi += 1; }
            CellClass::Undetermined => { quad += 1; undet += 1; }
        }
    }
    eprintln!("quadrant: {quad} (one={one}, multi={multi}, undet={undet})");
    let c1 = locate_cell(&cad, &ps, &rat_int(100), &rat_int(500));
    eprintln!("(100,500): {:?}", c1.map(|c| c.classification));
    let c2 = locate_cell(&cad, &ps, &rat_int(100), &rat_int(200));
    eprintln!("(100,200): {:?}", c2.map(|c| c.classification));
}
