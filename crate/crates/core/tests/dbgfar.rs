use multistat_core::cad2d::*;
use multistat_core::depgraph::{build_graph, min_vertex_cover};
use multistat_core::elimination::*;
use multistat_core::fixtures;
use multistat_core::rat::{rat, rat_int};
use multistat_core::realroots::{isolate_positive_roots, sign_at};
use std::collections::BTreeMap;

#[test]
fn far_field_point() {
    let m = fixtures::model26();
    let system = m.steady_state_system();
    let g = build_graph(&system, &m.vars);
    let cover = min_vertex_cover(&g);
    let rs = gauss_eliminate(&system, &m.vars, &m.free_params(), &cover, TieBreak::Normal).unwrap();
    let mut fix = BTreeMap::new();
    fix.insert("k18".to_string(), rat_int(50));
    let cps = eliminate_linear(&rs, &fix, "x4").unwrap();
    for (k17v, k19v) in [(2147483649i64, 1i64), (2147483649, 68719476737)] {
        let mut core_at = cps.core.clone();
        let mut num_at = cps.formula_num.clone();
        let mut den_at = cps.formula_den.clone();
        for (k, v) in [("k17", k17v), ("k19", k19v)] {
            let q = rat_int(v);
            core_at = core_at.substitute_rat(k, &q);
            num_at = num_at.substitute_rat(k, &q);
            den_at = den_at.substitute_rat(k, &q);
        }
        let core_uni = core_at.to_uni("x5").unwrap();
        let roots = isolate_positive_roots(&core_uni).unwrap();
        eprintln!("point ({k17v},{k19v}): {} positive core roots", roots.len());
        let num_uni = num_at.to_uni("x5").unwrap();
        let den_uni = den_at.to_uni("x5").unwrap();
        for (i, root) in roots.iter().enumerate() {
            let sd = sign_at(&den_uni, root);
            let sn = sign_at(&num_uni, root);
            eprintln!("  root {i}: x5 ~ {} den sign {sd} num sign {sn}", root.decimal(3));
            if sd != 0 && sn * sd > 0 {
                let mut assignment: BTreeMap<String, Enclosure> = BTreeMap::new();
                assignment.insert("k17".into(), Enclosure::Exact(rat_int(k17v)));
                assignment.insert("k18".into(), Enclosure::Exact(rat_int(50)));
                assignment.insert("k19".into(), Enclosure::Exact(rat_int(k19v)));
                assignment.insert("x5".into(), Enclosure::Root(root.clone()));
                assignment.insert("x4".into(), Enclosure::RootFraction {
                    root: root.clone(), num: num_uni.clone(), den: den_uni.clone() });
                match back_substitute(&rs.trace, &assignment, &rat(1, 1_000_000), 128) {
                    Ok(out) => {
                        let pos = out.positivity.values().filter(|p| **p == Positivity::Positive).count();
                        let undet = out.positivity.values().filter(|p| **p == Positivity::Undetermined).count();
                        eprintln!("    back: {} positive, {} undetermined", pos, undet);
                        if undet > 0 {
                            for (v, p) in &out.positivity {
                                if *p == Positivity::Undetermined {
                                    eprintln!("      {v} undetermined, width {}", multistat_core::rat::to_decimal(&out.intervals[v].width(), 12));
                                }
                            }
                        }
                    }
                    Err(e) => eprintln!("    back error: {e}"),
                }
            }
        }
    }
}
