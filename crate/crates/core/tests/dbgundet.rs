use multistat_core::cad2d::*;
use multistat_core::depgraph::{build_graph, min_vertex_cover};
use multistat_core::elimination::{gauss_eliminate, TieBreak};
use multistat_core::fixtures;
use multistat_core::rat::{rat_int, to_decimal};
use std::collections::BTreeMap;

#[test]
fn undetermined_cells() {
    let m = fixtures::model26();
    let system = m.steady_state_system();
    let g = build_graph(&system, &m.vars);
    let cover = min_vertex_cover(&g);
    let rs = gauss_eliminate(&system, &m.vars, &m.free_params(), &cover, TieBreak::Normal).unwrap();
    let mut fix = BTreeMap::new();
    fix.insert("k18".to_string(), rat_int(50));
    let analysis = analyze_region(&rs, &fix, "k17").unwrap();
    for cell in analysis.cad.cells() {
        if cell.classification == CellClass::Undetermined {
            println!("undet cell: base_idx={} stack_idx={} sample=({}, {}) roots={:?} cert={:?}",
                cell.base_idx, cell.stack_idx,
                to_decimal(&cell.sample.0, 4), to_decimal(&cell.sample.1, 4),
                cell.positive_roots, cell.certified_solutions);
        }
    }
}
