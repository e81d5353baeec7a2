//! Acceptance suite, run without the libtest harness so its report is always
//! shown. Each criterion prints one `PASS`/`FAIL` line; the process exits
//! non-zero if any criterion fails.

mod common;

use common::{bellman_ford, exhaustive_matching};
use crystalft::complex::{foliate, random_css, toric_code, CssCode};
use crystalft::decode::{
    edge_probability, estimate_threshold, linspace, mwpm, odd_count_probability, sweep, CurvePoint, Decoder,
    DecodingModel, FitOptions, NoiseParams, Regime, SweepPoint, ThresholdFit, WeightScheme,
};
use crystalft::delaney::{
    count_candidates, enumerate_candidates, known, reflection_map, Boundary, DelaneySymbol,
};
use crystalft::lattice::{bundled_cell, bundled_names, DecoderEdge, Torus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
const TRIALS: u64 = 50_000;
const ORDERING_TRIALS: u64 = 10_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: usize, title: &str, o: &Outcome) {
    println!("criterion {id} [{}] {title}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
}

fn threshold_sweep(name: &str, regime: Regime, ls: &[usize], pmin: f64, pmax: f64, trials: u64) -> Result<ThresholdFit, String> {
    let cell = bundled_cell(name).map_err(|e| e.to_string())?;
    let points: Vec<SweepPoint> = sweep(&cell, regime, ls, &linspace(pmin, pmax, 8), trials, SEED, WeightScheme::NegLog)
        .map_err(|e| e.to_string())?;
    for p in &points {
        let (lo, hi) = p.stats.wilson();
        eprintln!(
            "  {name} {regime} L={} p={:.5} failures={}/{} rate={:.4} ci=[{lo:.4}, {hi:.4}]",
            p.l,
            p.noise.total(),
            p.stats.failures,
            p.stats.trials,
            p.stats.rate()
        );
    }
    let curve: Vec<CurvePoint> = points.iter().map(SweepPoint::curve_point).collect();
    estimate_threshold(&curve, FitOptions { bootstrap: 200, seed: SEED }).map_err(|e| e.to_string())
}

fn threshold_outcome(fit: &Result<ThresholdFit, String>, target: f64, tol: f64) -> Outcome {
    match fit {
        Ok(f) => Outcome {
            pass: (f.p_th - target).abs() <= tol,
            detail: format!(
                "p_th = {:.3}% (bootstrap sd {:.3}%, nu = {:.2}), expected {:.2}% +/- {:.2}%",
                100.0 * f.p_th,
                100.0 * f.p_th_std,
                f.nu,
                100.0 * target,
                100.0 * tol
            ),
        },
        Err(e) => Outcome { pass: false, detail: format!("fit failed: {e}") },
    }
}

fn enumeration_counts() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let streamed = [
        (3, 1, Boundary::Loop, 5u128),
        (3, 3, Boundary::Loop, 125),
        (3, 6, Boundary::Periodic, 15_625),
        (4, 4, Boundary::Loop, 125),
        (5, 5, Boundary::Loop, 15_625),
    ];
    for (n, k, b, want) in streamed {
        let got = enumerate_candidates(n, k, b).map(|c| c.count() as u128);
        let formula = count_candidates(n, k, b);
        pass &= got == Ok(want) && formula == Ok(want);
        notes.push(format!("({n},{k})={}", got.map_or_else(|e| e.to_string(), |c| c.to_string())));
    }
    let big = count_candidates(4, 8, Boundary::Periodic);
    pass &= big == Ok(9_765_625);
    notes.push(format!("(4,8)={} count-only", big.map_or_else(|e| e.to_string(), |c| c.to_string())));
    let vectors: Vec<Vec<u32>> = enumerate_candidates(3, 3, Boundary::Loop).unwrap().map(|c| c.m12).collect();
    for v in [vec![6, 4, 4, 2], vec![4, 6, 6, 3]] {
        let found = vectors.contains(&v);
        pass &= found;
        notes.push(format!("{v:?} {}", if found { "present" } else { "missing" }));
    }
    Outcome { pass, detail: notes.join(", ") }
}

fn self_duality() -> Outcome {
    let cubic = known::cubic();
    let identity: Vec<usize> = (0..cubic.size()).collect();
    let cubic_ok = cubic.validate().is_ok() && cubic.is_isomorphism(&cubic.dual(), &identity);
    let r = reflection_map(3);
    let mut checked = 0;
    let mut reflected = 0;
    for c in enumerate_candidates(3, 3, Boundary::Loop).unwrap() {
        checked += 1;
        if c.symbol.validate().is_ok() && c.symbol.is_isomorphism(&c.symbol.dual(), &r) {
            reflected += 1;
        }
    }
    let tsq: DelaneySymbol = known::truncated_square();
    let tsq_ok = tsq.validate().is_ok() && tsq.find_isomorphism(&tsq.dual()).is_none();
    Outcome {
        pass: cubic_ok && reflected == checked && checked == 125 && tsq_ok,
        detail: format!(
            "cubic identity witness {cubic_ok}; (3,3) candidates self-dual under y=x: {reflected}/{checked}; 4.8.8 not isomorphic to dual {tsq_ok}"
        ),
    }
}

fn foliation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut valid = 0;
    let mut total = 0;
    for _ in 0..100 {
        let n = rng.random_range(1..=12);
        let m2 = rng.random_range(1..=n);
        let m0 = rng.random_range(1..=n);
        let code = random_css(&mut rng, n, m2, m0);
        for t in 1..=3 {
            total += 1;
            if foliate(&code, t).and_then(|c| c.validate()).is_ok() {
                valid += 1;
            }
        }
    }
    let c = foliate(&CssCode::four_two_two(), 2).unwrap();
    let (dual, primal) = (c.dims()[1], c.dims()[2]);
    Outcome {
        pass: valid == total && dual == 10 && primal == 10,
        detail: format!("{valid}/{total} foliations valid; [[4,2,2]] at t=2 has {dual} dual + {primal} primal = {} qubits", dual + primal),
    }
}

/// Odd-parity probability by summing over every fault configuration.
fn enumerated_edge_probability(z: u32, x: u32, measured: bool, n: &NoiseParams) -> f64 {
    let mut rates = vec![n.p_z; z as usize];
    rates.extend(std::iter::repeat_n(n.p_x, x as usize));
    if measured {
        rates.push(n.p_m);
    }
    let mut total = 0.0;
    for mask in 0u32..(1 << rates.len()) {
        if mask.count_ones() % 2 == 1 {
            total += rates
                .iter()
                .enumerate()
                .map(|(k, &p)| if mask >> k & 1 == 1 { p } else { 1.0 - p })
                .product::<f64>();
        }
    }
    total
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let names = bundled_names();
    let graphs: Vec<_> = names
        .iter()
        .map(|n| Torus::build(&bundled_cell(n).unwrap(), 3).unwrap().compile_error_channels())
        .collect();
    let mut agree = 0;
    let mut dense_agree = 0;
    for inst in 0..500 {
        let g = &graphs[inst % graphs.len()];
        let regime = Regime::ALL[rng.random_range(0..4)];
        let model = DecodingModel::new(g, &regime.params(rng.random_range(0.001..0.05)).unwrap(), WeightScheme::NegLog);
        let mut dec = Decoder::new(&model);
        let k = 2 * rng.random_range(1..=5);
        let mut defects: Vec<u32> = Vec::with_capacity(k);
        while defects.len() < k {
            let v = rng.random_range(0..g.num_vertices as u32);
            if !defects.contains(&v) {
                defects.push(v);
            }
        }
        let ends: Vec<(u32, u32)> = g.edges.iter().map(|e| (e.u, e.v)).collect();
        let rows: Vec<_> = defects.iter().map(|&s| bellman_ford(g.num_vertices, &ends, model.weights(), s as usize)).collect();
        let dist: Vec<Vec<i64>> =
            (0..k).map(|i| (0..k).map(|j| rows[i][defects[j] as usize].unwrap_or(i64::MAX)).collect()).collect();
        let best = exhaustive_matching(&dist);
        if dec.decode(&defects).ok().map(|c| c.weight) == best {
            agree += 1;
        }

        // Arbitrary symmetric weights, including ties, through the dense solver.
        let mut w = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                w[i][j] = rng.random_range(0..20);
                w[j][i] = w[i][j];
            }
        }
        let total = mwpm(&w).ok().map(|p| p.iter().map(|&(a, b)| w[a][b]).sum::<i64>());
        if total == exhaustive_matching(&w) {
            dense_agree += 1;
        }
    }

    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let z = rng.random_range(0..=12);
        let p = rng.random_range(0.0..=0.5);
        worst = worst.max((odd_count_probability(z, p) - enumerated_edge_probability(z, 0, false, &NoiseParams::new(p, 0.0, 0.0).unwrap())).abs());
        let noise = NoiseParams::new(rng.random_range(0.0..=0.5), rng.random_range(0.0..=0.5), rng.random_range(0.0..=0.5)).unwrap();
        let edge = DecoderEdge {
            u: 0,
            v: 1,
            seam: 0,
            z: rng.random_range(0..=6),
            x: rng.random_range(0..=6),
            measured: rng.random_bool(0.5),
        };
        let oracle = enumerated_edge_probability(edge.z, edge.x, edge.measured, &noise);
        worst = worst.max((edge_probability(&edge, &noise) - oracle).abs());
    }
    Outcome {
        pass: agree == 500 && dense_agree == 500 && worst <= 1e-12,
        detail: format!(
            "lattice matchings {agree}/500, dense matchings {dense_agree}/500, max probability deviation {worst:.1e} (tolerance 1e-12)"
        ),
    }
}

fn homology() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    let toric: Vec<usize> = (2..=5).map(|l| toric_code(l).complex().homology_dim(1).unwrap()).collect();
    pass &= toric.iter().all(|&h| h == 2);
    notes.push(format!("toric H1 for L=2..5: {toric:?}"));

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for name in bundled_names() {
        let torus = Torus::build(&bundled_cell(name).unwrap(), 4).unwrap();
        let g = torus.compile_error_channels();
        let mut trivial = 0;
        for _ in 0..1000 {
            let mut chain = vec![false; torus.num_edges()];
            let faces = rng.random_range(1..=torus.num_faces());
            for _ in 0..faces {
                for e in torus.face_boundary(rng.random_range(0..torus.num_faces())) {
                    chain[e] ^= true;
                }
            }
            let support: Vec<usize> = (0..chain.len()).filter(|&e| chain[e]).collect();
            if g.cycle_class(&support) == Ok(0) {
                trivial += 1;
            }
        }
        let windings: Vec<Option<u8>> = (0..3)
            .map(|d| torus.winding_cycle(d).and_then(|c| g.cycle_class(&c).ok()))
            .collect();
        let wrap_ok = windings == vec![Some(1), Some(2), Some(4)];
        pass &= trivial == 1000 && wrap_ok;
        notes.push(format!("{name}: {trivial}/1000 face sums trivial, wrapping classes {windings:?}"));
    }
    Outcome { pass, detail: notes.join("; ") }
}

fn main() {
    let mut outcomes = Vec::new();

    let pcu_pz = threshold_sweep("pcu", Regime::Pz, &[4, 6, 8], 0.004, 0.011, TRIALS);
    let o = threshold_outcome(&pcu_pz, 0.0076, 0.0010);
    report(1, "pcu p_Z-only threshold", &o);
    outcomes.push(o);

    let dia_pz = threshold_sweep("dia", Regime::Pz, &[4, 6], 0.007, 0.014, TRIALS);
    let o = threshold_outcome(&dia_pz, 0.0101, 0.0015);
    report(2, "dia p_Z-only threshold", &o);
    outcomes.push(o);

    let pcu_sym = threshold_sweep("pcu", Regime::Sym, &[4, 6, 8], 0.0015, 0.005, TRIALS);
    let o = threshold_outcome(&pcu_sym, 0.0032, 0.0010);
    report(3, "pcu symmetric threshold", &o);
    outcomes.push(o);

    let bst_pz = threshold_sweep("bst", Regime::Pz, &[4, 6], 0.0015, 0.006, ORDERING_TRIALS);
    let srs_pz = threshold_sweep("srs", Regime::Pz, &[4, 6], 0.008, 0.016, ORDERING_TRIALS);
    let o = match (&bst_pz, &pcu_pz, &dia_pz, &srs_pz) {
        (Ok(b), Ok(p), Ok(d), Ok(s)) => Outcome {
            pass: b.p_th < p.p_th && p.p_th < d.p_th && d.p_th <= s.p_th,
            detail: format!(
                "bst {:.3}% < pcu {:.3}% < dia {:.3}% <= srs {:.3}%",
                100.0 * b.p_th,
                100.0 * p.p_th,
                100.0 * d.p_th,
                100.0 * s.p_th
            ),
        },
        _ => Outcome { pass: false, detail: "a threshold fit failed".into() },
    };
    report(4, "p_Z-only threshold ordering", &o);
    outcomes.push(o);

    let checks: [(&str, fn() -> Outcome); 5] = [
        ("enumeration counts", enumeration_counts),
        ("self-duality suite", self_duality),
        ("foliation suite", foliation),
        ("oracle equivalence", oracle_equivalence),
        ("homology suite", homology),
    ];
    for (i, (title, f)) in checks.iter().enumerate() {
        let o = f();
        report(5 + i, title, &o);
        outcomes.push(o);
    }

    let failed: Vec<usize> = outcomes.iter().enumerate().filter(|(_, o)| !o.pass).map(|(i, _)| i + 1).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", outcomes.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
