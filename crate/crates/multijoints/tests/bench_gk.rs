use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use multijoints::geom::Point3;
use multijoints::partition::{bisect_sets, gk_partition, BisectOptions, DegreeSchedule};
use multijoints::rat::Rat;

fn cloud(n: usize, seed: u64) -> Vec<Point3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut points = Vec::new();
    while points.len() < n {
        let p = Point3::from_ints(
            rng.gen_range(-99..=99),
            rng.gen_range(-99..=99),
            rng.gen_range(-99..=99),
        );
        if seen.insert(p.clone()) {
            points.push(p);
        }
    }
    points
}

#[test]
fn bench_gk() {
    let points = cloud(512, 42);
    let eps = Rat::new(BigInt::from(1), BigInt::from(10));
    let mut ok_rounds = 0;
    for rounds in 6..=6usize {
        let t = Instant::now();
        match gk_partition(&points, rounds, &eps, 1) {
            Ok(part) => {
                let hist = part.cell_histogram(&points);
                println!(
                    "J={rounds}: {:.2?} max={} classes={} onz={}",
                    t.elapsed(),
                    hist.max_class(),
                    hist.class_count(),
                    hist.on_z
                );
                ok_rounds = rounds;
            }
            Err(e) => {
                println!("J={rounds}: FAILED after {:.2?}: {e}", t.elapsed());
                break;
            }
        }
    }
    if ok_rounds == 8 {
        return;
    }
    // rebuild the sets of the first failing round and size-profile them
    let part = gk_partition(&points, ok_rounds, &eps, 1).unwrap();
    let mut groups: BTreeMap<Vec<i8>, Vec<Point3>> = BTreeMap::new();
    let mut onz = 0;
    for p in &points {
        match part.cell_label(p) {
            multijoints::partition::CellLabel::Cell(s) => {
                groups.entry(s).or_default().push(p.clone())
            }
            _ => {
                onz += 1;
                continue;
            }
        };
    }
    let sizes: Vec<usize> = groups.values().map(|v| v.len()).collect();
    println!("next round sets: {sizes:?} onz={onz}");
    let schedule = DegreeSchedule::new(ok_rounds + 1);
    let d = schedule.degree(ok_rounds);
    let sets: Vec<Vec<Point3>> = groups.into_values().collect();
    let t = Instant::now();
    let opts = BisectOptions {
        restarts: 4,
        max_iters: 6000,
        ..BisectOptions::default()
    };
    let r = bisect_sets(&sets, d, &eps, &opts);
    println!("direct bisect at degree {d}: {:?} in {:.2?}", r.map(|q| q.degree()), t.elapsed());
}
