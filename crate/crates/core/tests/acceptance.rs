//! Acceptance checks, one line per criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use extquot_core::abgroup::{cokernel, smith_normal_form, IntegerMatrix};
use extquot_core::extquot::{component_lower_bound_holds, irrep_labels, ExtendedQuotient};
use extquot_core::langlands::g2::g2_ramified_table;
use extquot_core::langlands::{
    all_generic_fixed_pairs, base_change_param, check_base_change_diagram, fiber_count, fiber_count_at,
    infinitesimal_character_i_s, kl_triple, mu_map, orbit_key, parameter_labels, pi_s, QMode,
    RhoLabel,
};
use extquot_core::scenario::embedded_presets;
use extquot_core::torus::power_map;
use extquot_core::{Coordinate, Scenario, TorusPoint, ValueGroup};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn gl(n: usize) -> Scenario {
    Scenario::preset(&format!("gl{n}")).expect("gl preset")
}

fn coord(text: &str) -> Coordinate {
    ValueGroup::default().parse_coordinate(text).expect("coordinate")
}

fn coords(text: &str) -> Vec<Coordinate> {
    ValueGroup::default().parse_coordinate_list(text).expect("coordinates")
}

fn g2_example() -> Outcome {
    let s = Scenario::preset("g2_ramified").map_err(|e| e.to_string())?;
    let eq = ExtendedQuotient::build(&s);
    ensure!(eq.total_components() == 6, "{} components", eq.total_components());
    let mut dims: Vec<usize> = eq
        .strata
        .iter()
        .flat_map(|st| std::iter::repeat_n(st.dimension, st.irreducible_component_count))
        .collect();
    dims.sort_unstable_by(|a, b| b.cmp(a));
    ensure!(dims == [2, 1, 1, 0, 0, 0], "dimensions {dims:?}");
    let rows = g2_ramified_table(&eq).map_err(|e| e.to_string())?;
    let find = |name: &str| rows.iter().find(|r| r.name == name).ok_or(format!("no {name}"));
    for name in ["pt_1", "pt_2"] {
        let r = find(name)?;
        let sq = power_map(&r.point, 2);
        ensure!(sq == TorusPoint::identity(2), "{name} = {} does not square to 1", r.point);
        ensure!(r.rho == RhoLabel::Trivial, "{name} has rho {}", r.rho);
    }
    let star = find("pt_*")?;
    let lift = star.frobenius.as_ref().ok_or("pt_* has no cover lift")?;
    ensure!(
        lift.coords().iter().all(|c| c.torsion_order() == Some(4)),
        "pt_* lift {lift} is not of order 4"
    );
    ensure!(star.rho == RhoLabel::Sgn, "pt_* has rho {}", star.rho);
    let labels: BTreeSet<String> = eq
        .second_kind_labels(&star.point)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|l| l.irrep_label.to_string())
        .collect();
    ensure!(labels == BTreeSet::from(["1".into(), "sgn".into()]), "labels {labels:?}");
    Ok(())
}

fn gl_stratification() -> Outcome {
    let partition_counts = [2, 3, 5, 7, 11];
    for (n, &pn) in (2..=6).zip(&partition_counts) {
        let eq = ExtendedQuotient::build(&gl(n));
        let g = eq.group();
        ensure!(eq.strata.len() == pn, "gl{n}: {} strata", eq.strata.len());
        for st in &eq.strata {
            let ct = g.cycle_type(st.class_rep).map_err(|e| e.to_string())?;
            ensure!(st.dimension == ct.len(), "gl{n} {ct:?}: dim {}", st.dimension);
            ensure!(st.irreducible_component_count == 1, "gl{n} {ct:?}: disconnected");
            if ct == [n] {
                ensure!(st.fixed.identity_component_rank == 1, "gl{n} n-cycle rank");
                ensure!(st.fixed.component_group.is_trivial(), "gl{n} n-cycle components");
            }
        }
    }
    Ok(())
}

fn lower_bound() -> Outcome {
    for name in embedded_presets() {
        let eq = ExtendedQuotient::build(&Scenario::preset(name).map_err(|e| e.to_string())?);
        ensure!(component_lower_bound_holds(&eq), "{name}");
        ensure!(eq.total_components() >= eq.classes.len(), "{name}");
    }
    Ok(())
}

fn kl_relation() -> Outcome {
    let modes = [QMode::Symbolic, QMode::numeric(4).unwrap(), QMode::numeric(9).unwrap()];
    for n in 2..=5 {
        let start = Instant::now();
        let eq = ExtendedQuotient::build(&gl(n));
        let g = eq.group();
        for st in &eq.strata {
            let t = st.generic_point(0).ok_or("no generic point")?;
            let p = mu_map(g, &t, st.class_rep).map_err(|e| e.to_string())?;
            for mode in modes {
                let triple = kl_triple(&p, mode);
                ensure!(triple.verify(), "gl{n} {}: {mode:?}", p.label());
                ensure!(triple.jordan_type() == p.partition(), "gl{n} {}: Jordan type", p.label());
            }
        }
        let took = start.elapsed();
        ensure!(took < Duration::from_secs(1), "gl{n} took {took:?}");
    }
    Ok(())
}

/// Counts multisegments by brute force over set partitions of positions.
fn fiber_oracle(sigma: &[Coordinate]) -> usize {
    fn blocks(n: usize) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for i in 0..n {
            out = out
                .into_iter()
                .flat_map(|p| {
                    let mut v: Vec<Vec<Vec<usize>>> = (0..p.len())
                        .map(|b| {
                            let mut q = p.clone();
                            q[b].push(i);
                            q
                        })
                        .collect();
                    let mut q = p;
                    q.push(vec![i]);
                    v.push(q);
                    v
                })
                .collect();
        }
        out
    }
    let step = coord("qh^2");
    let mut seen = BTreeSet::new();
    'outer: for p in blocks(sigma.len()) {
        let mut segs = Vec::new();
        for b in p {
            let mut v: Vec<Coordinate> = b.iter().map(|&i| sigma[i].clone()).collect();
            v.sort_by_key(|c| c.qh_exponent());
            for w in v.windows(2) {
                if w[1].div(&w[0]) != step {
                    continue 'outer;
                }
            }
            segs.push((v.len(), v[0].clone()));
        }
        segs.sort();
        seen.insert(segs);
    }
    seen.len()
}

fn fiber_counts() -> Outcome {
    for (text, want) in [("qh,qh^-1", 2), ("1,1", 1), ("qh^2,1,qh^-2", 4)] {
        let got = fiber_count(&coords(text)).count;
        ensure!(got == want, "{{{text}}}: {got} != {want}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let symbols = ["z", "y", "1"];
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let mut sigma = Vec::new();
        while sigma.len() < n {
            let base = coord(symbols[rng.gen_range(0..symbols.len())]);
            let m = rng.gen_range(1..=n - sigma.len());
            let top: i64 = rng.gen_range(-2..=3);
            for k in 0..m as i64 {
                sigma.push(base.mul(&Coordinate::qh_pow(top - 2 * k)));
            }
        }
        let got = fiber_count(&sigma).count;
        let want = fiber_oracle(&sigma);
        ensure!(got == want, "{sigma:?}: {got} != {want}");
    }
    Ok(())
}

fn interpolation() -> Outcome {
    let ss = [Coordinate::one(), coord("qh"), coord("s")];
    for n in 1..=5 {
        let eq = ExtendedQuotient::build(&gl(n));
        let g = eq.group();
        for (t, w) in all_generic_fixed_pairs(&eq) {
            let p = mu_map(g, &t, w).map_err(|e| e.to_string())?;
            for s in &ss {
                let left = pi_s(g, &t, w, s).map_err(|e| e.to_string())?;
                ensure!(left == infinitesimal_character_i_s(&p, s), "gl{n} ({t}, w{}) s={s}", w.0);
            }
            let ordinary = pi_s(g, &t, w, &Coordinate::one()).map_err(|e| e.to_string())?;
            ensure!(ordinary == orbit_key(t.coords().to_vec()), "gl{n} s=1 at {t}");
        }
    }
    for sigma in ["z,y", "z,z", "z,z,y", "z,z,z,y", "z,z,y,y", "z,z,z,z", "z,z,y,y,x"] {
        let sigma = coords(sigma);
        let n = sigma.len();
        let eq = ExtendedQuotient::build(&gl(n));
        let want = fiber_count_at(&sigma, &Coordinate::one()).map_err(|e| e.to_string())?.count;
        let got = pi_one_fiber_by_strata(&eq, &sigma);
        ensure!(got == want, "pi_1 fiber over {sigma:?}: strata give {got}, segments give {want}");
    }
    Ok(())
}

/// `sum over [w] of |(T^w n orbit) / Z(w)|`, by listing the orbit.
fn pi_one_fiber_by_strata(eq: &ExtendedQuotient, sigma: &[Coordinate]) -> usize {
    let g = eq.group();
    let orbit: BTreeSet<TorusPoint> = g
        .elements()
        .map(|w| {
            let p = g.permutation(w).expect("gl_n");
            TorusPoint::new(p.iter().map(|&i| sigma[i].clone()).collect())
        })
        .collect();
    let mut total = 0;
    for st in &eq.strata {
        let w = st.class_rep;
        let mut fixed: BTreeSet<TorusPoint> = orbit.iter().filter(|t| g.isotropy(t).contains(w)).cloned().collect();
        while let Some(t) = fixed.pop_first() {
            total += 1;
            for &a in st.centralizer.elements() {
                let p = g.permutation(a).expect("gl_n");
                fixed.remove(&TorusPoint::new(p.iter().map(|&i| t.coords()[i].clone()).collect()));
            }
        }
    }
    total
}

fn base_change() -> Outcome {
    for n in 1..=5 {
        let eq = ExtendedQuotient::build(&gl(n));
        let samples = all_generic_fixed_pairs(&eq);
        for f in 1..=3 {
            let r = check_base_change_diagram(&eq, f, &samples).map_err(|e| e.to_string())?;
            ensure!(r.commutes(), "gl{n} f={f}: {:?}", r.violations);
        }
    }
    let s = gl(2);
    let swap = s.group.element_of_permutation(&[1, 0]).ok_or("no swap")?;
    let t = s.torus.parse_point("(-1, -1)").map_err(|e| e.to_string())?;
    let p = base_change_param(&mu_map(&s.group, &t, swap).map_err(|e| e.to_string())?, 2)
        .map_err(|e| e.to_string())?;
    ensure!(p.label() == "1:2|1", "(-1,-1) swap under f=2 gave {}", p.label());
    let sl2 = ExtendedQuotient::build(&Scenario::preset("sl2").map_err(|e| e.to_string())?);
    let sign = sl2.strata.iter().find(|st| st.dimension == 0).ok_or("no isolated stratum")?;
    let r = sl2.base_change_endo(2).map_err(|e| e.to_string())?;
    let map = &r.strata[sign.class_index].irreducible_component_map;
    ensure!(map.iter().all(|&j| j == map[0]), "sl2 f=2 does not merge: {map:?}");
    let r = sl2.base_change_endo(3).map_err(|e| e.to_string())?;
    let map = &r.strata[sign.class_index].irreducible_component_map;
    ensure!(map.iter().enumerate().all(|(i, &j)| i == j), "sl2 f=3 merges: {map:?}");
    Ok(())
}

fn q_independence() -> Outcome {
    for n in 1..=5 {
        let eq = ExtendedQuotient::build(&gl(n));
        let symbolic = parameter_labels(&eq, QMode::Symbolic).map_err(|e| e.to_string())?;
        ensure!(symbolic.len() == eq.total_components(), "gl{n}: labels not injective");
        for q in [4, 9, 25] {
            let numeric = parameter_labels(&eq, QMode::numeric(q).unwrap()).map_err(|e| e.to_string())?;
            ensure!(numeric == symbolic, "gl{n} q={q}");
        }
    }
    Ok(())
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntegerMatrix {
    let mut m = IntegerMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let k = BigInt::from(rng.gen_range(-2..=2));
        for c in 0..n {
            let add = &k * &m[(j, c)];
            m[(i, c)] += add;
        }
    }
    m
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntegerMatrix {
    let rows = rng.gen_range(0..=6);
    let cols = rng.gen_range(0..=6);
    let entries = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect();
    IntegerMatrix::from_entries(rows, cols, entries).expect("shape")
}

fn engine_invariants() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..1000 {
        let m = random_matrix(&mut rng);
        let snf = smith_normal_form(&m);
        let umv = snf.u.mul(&m).and_then(|x| x.mul(&snf.v)).map_err(|e| e.to_string())?;
        ensure!(umv == snf.d, "sample {k}: UMV != D for {m}");
        ensure!(snf.u.is_unimodular() && snf.v.is_unimodular(), "sample {k}: transforms");
        ensure!(snf.d.is_diagonal(), "sample {k}: D not diagonal");
        let d = snf.diagonal();
        ensure!(d.iter().all(|x| !x.is_negative()), "sample {k}: negative diagonal");
        for w in d.windows(2) {
            let ok = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            ensure!(ok, "sample {k}: {d:?} breaks divisibility");
        }
        if k % 5 == 0 {
            let p = random_unimodular(&mut rng, m.rows());
            let q = random_unimodular(&mut rng, m.cols());
            let moved = p.mul(&m).and_then(|x| x.mul(&q)).map_err(|e| e.to_string())?;
            let a = cokernel(&m, m.rows()).map_err(|e| e.to_string())?;
            let b = cokernel(&moved, m.rows()).map_err(|e| e.to_string())?;
            ensure!(a == b, "cokernel of {m} changed under a change of basis");
        }
    }
    for name in embedded_presets() {
        let s = Scenario::preset(name).map_err(|e| e.to_string())?;
        let g = &s.group;
        let classes = g.conjugacy_classes();
        ensure!(classes.class_sizes.iter().sum::<usize>() == g.order(), "{name}: class equation");
        for (rep, size) in classes.representatives.iter().zip(&classes.class_sizes) {
            ensure!(size * g.centralizer(*rep).order() == g.order(), "{name}: |class| |Z| != |W|");
        }
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(5), "took {took:?}");
    Ok(())
}

fn cardinality_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let pool = ["1", "-1", "zeta4", "zeta4^3", "z", "y", "z^-1"];
    for name in embedded_presets() {
        let s = Scenario::preset(name).map_err(|e| e.to_string())?;
        let g = &s.group;
        let vg = &s.torus.value_group;
        for _ in 0..50 {
            let t = TorusPoint::new(
                (0..s.torus.rank)
                    .map(|_| vg.parse_coordinate(pool[rng.gen_range(0..pool.len())]))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?,
            );
            let h = g.isotropy(&t);
            let conj = g.classes_within(&h).len();
            let irr = irrep_labels(g, &t).map_err(|e| format!("{name} at {t}: {e}"))?;
            ensure!(conj == irr.len(), "{name} at {t}: {conj} classes, {} irreducibles", irr.len());
            let dims_ok = h.order() >= irr.len() && (h.order() > 1 || irr.len() == 1);
            ensure!(dims_ok, "{name} at {t}: {} irreducibles for order {}", irr.len(), h.order());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("G2 ramified components and labels", g2_example),
        ("GL(n) stratification, n = 2..6", gl_stratification),
        ("component lower bound on every preset", lower_bound),
        ("KL relation, gl2..gl5, symbolic and q = 4, 9", kl_relation),
        ("fiber counts against brute force", fiber_counts),
        ("interpolation diagram pi_s = i_s o mu", interpolation),
        ("base change diagram and torsion merging", base_change),
        ("q-independence of parameter labels", q_independence),
        ("SNF, cokernel invariance, class equation", engine_invariants),
        ("|conj W(t)| = |Irr W(t)| at sampled points", cardinality_identity),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({ms} ms)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
