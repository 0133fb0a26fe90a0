//! The ramified `G2` scenario, where `H = SO(4) = SL(2) x SL(2) / ±1`.
//!
//! Each irreducible component of `T//W_H` is tabulated with its parameter.
//! The unipotent part is `u0` in factor `k` exactly when `w` negates the
//! simple root `alpha_k` and `alpha_k(t) = 1`; `rho` is `sgn` exactly when the
//! complement in the isotropy decomposition of `t` is nontrivial. Frobenius
//! is written in cover coordinates `(s, s')` for `T_{s,s'}`.

use serde::Serialize;

use super::{LanglandsError, RhoLabel};
use crate::extquot::ExtendedQuotient;
use crate::torus::{Coordinate, TorusPoint};
use crate::weyl::PresetTag;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct G2Row {
    pub name: String,
    pub class_index: usize,
    pub component: usize,
    pub dimension: usize,
    pub point: TorusPoint,
    /// `None` when the cover lift of a generic point needs square roots.
    pub frobenius: Option<TorusPoint>,
    /// `"u0"` or `"I"` per `SL(2)` factor.
    pub unipotent: Vec<&'static str>,
    pub rho: RhoLabel,
}

/// One row per irreducible component, in stratum order.
pub fn g2_ramified_table(eq: &ExtendedQuotient) -> Result<Vec<G2Row>, LanglandsError> {
    let scenario = &eq.scenario;
    let group = &scenario.group;
    if group.preset_tag != PresetTag::G2Ramified || scenario.cover_embedding.is_none() {
        return Err(LanglandsError::NotGlN(format!(
            "{} (this table needs g2_ramified)",
            group.preset_tag
        )));
    }
    let roots = group.roots.clone().map(|r| r.positive).unwrap_or_default();
    let mut rows = Vec::new();
    for stratum in &eq.strata {
        let reps = stratum.component_representatives();
        let m = group.matrix(stratum.class_rep);
        for component in 0..stratum.irreducible_component_count {
            let point = match (&reps, stratum.dimension) {
                (Some(r), 0) => r[component].clone(),
                _ => stratum
                    .generic_point(component)
                    .expect("finite component group"),
            };
            let unipotent = roots
                .iter()
                .map(|a| {
                    let negated: Vec<i64> = a.iter().map(|x| -x).collect();
                    if m.apply(a) == negated && point.evaluate_character(a).is_one() {
                        "u0"
                    } else {
                        "I"
                    }
                })
                .collect();
            let rho = match group.isotropy_decomposition(&point) {
                Ok(d) if !d.complement_part.is_trivial() => RhoLabel::Sgn,
                _ => RhoLabel::Trivial,
            };
            let frobenius = scenario.lift_to_cover(&point);
            let name = match stratum.dimension {
                2 => "T/W_H".to_string(),
                1 => "A1".to_string(),
                _ => {
                    let order4 = frobenius
                        .as_ref()
                        .is_some_and(|f| f.coords().iter().any(|c| c.torsion_order() == Some(4)));
                    if order4 {
                        "pt_*".to_string()
                    } else if point.coords().iter().all(Coordinate::is_one) {
                        "pt_1".to_string()
                    } else {
                        "pt_2".to_string()
                    }
                }
            };
            rows.push(G2Row {
                name,
                class_index: stratum.class_index,
                component,
                dimension: stratum.dimension,
                point,
                frobenius,
                unipotent,
                rho,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Scenario;

    fn table() -> Vec<G2Row> {
        let eq = ExtendedQuotient::build(&Scenario::preset("g2_ramified").unwrap());
        g2_ramified_table(&eq).unwrap()
    }

    fn row<'a>(rows: &'a [G2Row], name: &str) -> &'a G2Row {
        rows.iter().find(|r| r.name == name).unwrap()
    }

    #[test]
    fn six_components() {
        let rows = table();
        let names: Vec<&str> = rows.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names.len(), 6);
        for n in ["T/W_H", "pt_1", "pt_2", "pt_*"] {
            assert_eq!(names.iter().filter(|&&x| x == n).count(), 1, "{n}");
        }
        assert_eq!(names.iter().filter(|&&x| x == "A1").count(), 2);
    }

    #[test]
    fn unipotent_and_rho_columns() {
        let rows = table();
        assert_eq!(row(&rows, "T/W_H").unipotent, vec!["I", "I"]);
        assert_eq!(row(&rows, "pt_1").unipotent, vec!["u0", "u0"]);
        assert_eq!(row(&rows, "pt_2").unipotent, vec!["u0", "u0"]);
        assert_eq!(row(&rows, "pt_*").unipotent, vec!["I", "I"]);
        let mut a1: Vec<_> = rows.iter().filter(|r| r.name == "A1").map(|r| r.unipotent.clone()).collect();
        a1.sort();
        assert_eq!(a1, vec![vec!["I", "u0"], vec!["u0", "I"]]);
        for r in &rows {
            let want = if r.name == "pt_*" { RhoLabel::Sgn } else { RhoLabel::Trivial };
            assert_eq!(r.rho, want, "{}", r.name);
        }
    }

    #[test]
    fn frobenius_in_cover_coordinates() {
        let rows = table();
        let f = |n: &str| row(&rows, n).frobenius.as_ref().map(ToString::to_string);
        assert_eq!(f("pt_1").as_deref(), Some("(1, 1)"));
        // (s, s') and (-s, -s') name the same point of SO(4)
        let pt2 = f("pt_2").unwrap();
        assert!(pt2 == "(1, zeta4^2)" || pt2 == "(zeta4^2, 1)", "{pt2}");
        // T_{i,i} up to s -> 1/s in each factor
        let star = row(&rows, "pt_*").frobenius.clone().unwrap();
        assert!(star.coords().iter().all(|c| c.torsion_order() == Some(4)), "{star}");
        // on an A1 line one factor of Frobenius is trivial
        for r in rows.iter().filter(|r| r.name == "A1") {
            let fr = r.frobenius.as_ref().expect("A1 lifts");
            let trivial = fr.coords().iter().position(Coordinate::is_one).expect("a trivial factor");
            assert_eq!(r.unipotent[trivial], "u0");
        }
    }

    #[test]
    fn rejects_other_presets() {
        let eq = ExtendedQuotient::build(&Scenario::preset("gl2").unwrap());
        assert!(g2_ramified_table(&eq).is_err());
    }
}
