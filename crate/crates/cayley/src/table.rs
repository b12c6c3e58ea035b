//! Cohomology of `Σ^{c₁,c₂,c₃}U*` on `CG` next to the ambient `Gr(3,7)`
//! for the weights used in the exceptionality and fullness arguments.

use serde::{Deserialize, Serialize};

use crate::bbw::bbw_cohomology;
use crate::cg::{cg_cohomology_with_serre, CohomologyResult, Route, CG};
use crate::par::Exec;
use crate::schur::SchurBundle;
use crate::weights::GradedRep;

/// Weights in display order: grouped by `(c₂, c₃)` as rows, `c₁` increasing.
pub const TABLE_WEIGHTS: [[i64; 3]; 42] = [
    [0, -3, -4],
    [-2, -3, -3],
    [-1, -3, -3],
    [0, -3, -3],
    [-2, -2, -4],
    [-1, -2, -4],
    [-2, -2, -3],
    [-1, -2, -3],
    [0, -2, -3],
    [-1, -2, -2],
    [0, -2, -2],
    [-1, -1, -5],
    [-1, -1, -4],
    [0, -1, -4],
    [-1, -1, -3],
    [0, -1, -3],
    [1, -1, -3],
    [-1, -1, -2],
    [0, -1, -2],
    [1, -1, -2],
    [2, -1, -2],
    [-1, -1, -1],
    [0, -1, -1],
    [1, -1, -1],
    [2, -1, -1],
    [3, -1, -1],
    [0, 0, -3],
    [0, 0, -2],
    [1, 0, -2],
    [2, 0, -2],
    [0, 0, -1],
    [1, 0, -1],
    [2, 0, -1],
    [0, 0, 0],
    [1, 0, 0],
    [2, 0, 0],
    [1, 1, -2],
    [2, 1, -2],
    [1, 1, -1],
    [2, 1, -1],
    [1, 1, 0],
    [2, 1, 0],
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub weight: [i64; 3],
    pub cg: CohomologyResult,
    pub route: Route,
    pub ambient: GradedRep,
    /// `CG` and `Gr(3,7)` disagree.
    pub shaded: bool,
}

pub fn table_row(w: [i64; 3]) -> TableRow {
    let s = SchurBundle::new(CG.ambient, w.to_vec(), vec![]).expect("table weights are dominant");
    let (cg, route) = cg_cohomology_with_serre(&s.clone().into_sum());
    let cg = match cg {
        CohomologyResult::Determined(g) => CohomologyResult::Determined(g.modulo_det()),
        other => other,
    };
    let ambient = bbw_cohomology(CG.ambient, &s).modulo_det();
    let shaded = cg.determined() != Some(&ambient);
    TableRow { weight: w, cg, route, ambient, shaded }
}

pub fn cohomology_table(exec: Exec) -> Vec<TableRow> {
    exec.map(TABLE_WEIGHTS.to_vec(), table_row)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_distinct_and_dominant() {
        let mut ws = TABLE_WEIGHTS.to_vec();
        assert!(ws.iter().all(|w| w[0] >= w[1] && w[1] >= w[2]));
        ws.sort();
        ws.dedup();
        assert_eq!(ws.len(), TABLE_WEIGHTS.len());
    }
}
