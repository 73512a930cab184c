//! Acceptance suite: one test per criterion, each prints a `[PASS]` line.
//!
//! Run with `cargo test -p hetsample-cli --test acceptance -- --nocapture`
//! to see the per-criterion report.

use std::collections::{BTreeSet, HashSet};
use std::process::Command;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};

use hetsample::diagnostics::{entropy, histogram_pair, pca_project};
use hetsample::feature_space::{
    apply_zscore, discretize, fit_zscore, FeatureMatrix, GridConfig, GridPointSet,
};
use hetsample::image::{BinaryMask, GrayImage};
use hetsample::metrics::{detrend, fit_detrend, noise_sigma, skeletonize};
use hetsample::sampling::{
    build_structuring_element, compute_fus, dilate, select, KdTree, SamplingSet, SelectionParams,
    StructuringElement,
};

fn matrix_from_rows(rows: &[Vec<f64>], groups: Option<Vec<String>>) -> FeatureMatrix {
    let d = rows[0].len();
    let ids = (0..rows.len()).map(|i| format!("s{i}")).collect();
    let names = (0..d).map(|j| format!("f{j}")).collect();
    let values = rows.iter().flatten().copied().collect();
    FeatureMatrix::new(ids, groups, names, values).unwrap()
}

fn lattice_grid(rows: &[Vec<i64>]) -> GridPointSet {
    let as_f: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().map(|&c| c as f64).collect())
        .collect();
    discretize(&matrix_from_rows(&as_f, None), &GridConfig::new(1.0).unwrap())
}

fn zscore_pipeline(matrix: &FeatureMatrix, cell: f64, r: f64) -> (FeatureMatrix, GridPointSet, SamplingSet) {
    let model = fit_zscore(matrix).unwrap();
    let z = apply_zscore(matrix, &model).unwrap();
    let grid = discretize(&z, &GridConfig::new(cell).unwrap());
    let element = build_structuring_element(z.n_features(), r).unwrap();
    let sset = dilate(&grid, &element).unwrap();
    (z, grid, sset)
}

/// Independent double-loop FUS oracle over squared lattice distances.
fn fus_oracle(selected: &[usize], grid: &GridPointSet) -> f64 {
    let chosen: HashSet<usize> = selected.iter().copied().collect();
    let mut max_d2 = 0.0f64;
    for i in 0..grid.n_samples() {
        if chosen.contains(&i) {
            continue;
        }
        let mut min_d2 = f64::INFINITY;
        for &s in selected {
            let mut d2 = 0.0;
            for j in 0..grid.dim() {
                let diff = (grid.lattice_row(i)[j] - grid.lattice_row(s)[j]) as f64;
                d2 += diff * diff;
            }
            if d2 < min_d2 {
                min_d2 = d2;
            }
        }
        if min_d2 > max_d2 {
            max_d2 = min_d2;
        }
    }
    max_d2.sqrt()
}

#[test]
fn c01_exhaustive_fus_oracle() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(101);
    let mut checked = 0usize;
    for _instance in 0..50 {
        let rows: Vec<Vec<i64>> = (0..12)
            .map(|_| vec![rng.random_range(-15..15), rng.random_range(-15..15)])
            .collect();
        let grid = lattice_grid(&rows);
        for a in 0..12usize {
            for b in (a + 1)..12 {
                for c in (b + 1)..12 {
                    let sel = [a, b, c];
                    let got = compute_fus(&sel, &grid).unwrap();
                    let expect = fus_oracle(&sel, &grid);
                    assert_eq!(
                        got.to_bits(),
                        expect.to_bits(),
                        "FUS mismatch on subset {sel:?}"
                    );
                    checked += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(checked, 50 * 220);
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, limit 5s");
    println!(
        "[PASS] C1 exhaustive FUS oracle: 50 instances x C(12,3)=220 subsets bitwise equal in {:.2}s",
        elapsed.as_secs_f64()
    );
}

/// Fixed-seed two-moons plus a Gaussian mixture, n = 5000.
fn moons_and_blobs(n: usize, seed: u64) -> FeatureMatrix {
    let mut rng = StdRng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 0.08).unwrap();
    let mut rows = Vec::with_capacity(n);
    let n_moons = 2 * n / 5;
    for i in 0..n_moons {
        let t = std::f64::consts::PI * (i as f64 + 0.5) / n_moons as f64;
        rows.push(vec![t.cos() + noise.sample(&mut rng), t.sin() + noise.sample(&mut rng)]);
    }
    for i in 0..n_moons {
        let t = std::f64::consts::PI * (i as f64 + 0.5) / n_moons as f64;
        rows.push(vec![
            1.0 - t.cos() + noise.sample(&mut rng),
            0.5 - t.sin() + noise.sample(&mut rng),
        ]);
    }
    let centers = [(2.5, 1.8, 0.25), (-1.4, 1.5, 0.35), (0.5, -1.4, 0.2)];
    while rows.len() < n {
        let (cx, cy, s) = centers[rng.random_range(0..centers.len())];
        let g = Normal::new(0.0, s).unwrap();
        rows.push(vec![cx + g.sample(&mut rng), cy + g.sample(&mut rng)]);
    }
    matrix_from_rows(&rows, None)
}

#[test]
fn c02_best_of_n_beats_random_baselines() {
    let start = Instant::now();
    let matrix = moons_and_blobs(5000, 202);
    let (z, grid, sset) = zscore_pipeline(&matrix, 0.1, 4.0);
    let params = SelectionParams {
        k: 50,
        n_trials: 1000,
        seed: 4242,
        enforce_group_exclusion: false,
    };
    let run = select(&z, &grid, &sset, &params).unwrap();
    let mut rng = StdRng::seed_from_u64(777);
    let n = z.n_samples();
    let mut wins = 0;
    for _ in 0..100 {
        // plain uniform-random k-subset of the samples
        let mut subset = BTreeSet::new();
        while subset.len() < 50 {
            subset.insert(rng.random_range(0..n));
        }
        let indices: Vec<usize> = subset.into_iter().collect();
        let baseline = compute_fus(&indices, &grid).unwrap();
        if run.result.fus < baseline {
            wins += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(wins >= 95, "optimized FUS beat only {wins}/100 random baselines");
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, limit 30s");
    println!(
        "[PASS] C2 best-of-N optimality: select(N=1000) fus={:.4} beat {wins}/100 random baselines in {:.2}s",
        run.result.fus,
        elapsed.as_secs_f64()
    );
}

/// Brute-force nested-union dilation oracle.
fn dilation_oracle(cells: &[Vec<i64>], element: &StructuringElement) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for cell in cells {
        for offset in element.iter() {
            out.insert(cell.iter().zip(offset).map(|(c, o)| c + o).collect());
        }
    }
    out
}

/// Exhaustive bounding-box ball enumeration oracle.
fn ball_size_oracle(dim: usize, radius: f64) -> usize {
    let bound = radius.floor() as i64;
    let mut count = 0usize;
    let mut point = vec![-bound; dim];
    'outer: loop {
        let norm2: f64 = point.iter().map(|&c| (c * c) as f64).sum();
        if norm2.sqrt() <= radius {
            count += 1;
        }
        for c in point.iter_mut() {
            *c += 1;
            if *c <= bound {
                continue 'outer;
            }
            *c = -bound;
        }
        break;
    }
    count
}

#[test]
fn c03_dilation_matches_nested_union_oracle() {
    // element sizes against the exhaustive enumeration oracle
    assert_eq!(build_structuring_element(2, 2.0).unwrap().len(), 13);
    for d in 1..=4usize {
        for r in [1.0, 2.0, 4.0] {
            let element = build_structuring_element(d, r).unwrap();
            assert_eq!(
                element.len(),
                ball_size_oracle(d, r),
                "element size mismatch at d={d} r={r}"
            );
        }
    }
    let mut rng = StdRng::seed_from_u64(303);
    for case in 0..100 {
        let d = rng.random_range(1..=4usize);
        let r = [1.0, 2.0, 4.0][rng.random_range(0..3)];
        let n = if d == 4 && r == 4.0 { 12 } else { 40 };
        let cells: Vec<Vec<i64>> = (0..rng.random_range(1..=n))
            .map(|_| (0..d).map(|_| rng.random_range(-8..8)).collect())
            .collect();
        let grid = lattice_grid(&cells);
        let element = build_structuring_element(d, r).unwrap();
        let sset = dilate(&grid, &element).unwrap();
        let got: BTreeSet<Vec<i64>> = sset.iter().map(|p| p.to_vec()).collect();
        assert_eq!(got, dilation_oracle(&cells, &element), "case {case} (d={d}, r={r})");
    }
    println!("[PASS] C3 dilation oracle: 100 random instances (d in 1..=4, r in {{1,2,4}}) exactly equal");
}

#[test]
fn c04_grid_subset_of_sampling_set() {
    let mut rng = StdRng::seed_from_u64(404);
    for case in 0..1000 {
        let d = rng.random_range(1..=4usize);
        let r = if d >= 3 { [1.0, 2.0][rng.random_range(0..2)] } else { [1.0, 2.0, 4.0][rng.random_range(0..3)] };
        let n = rng.random_range(1..=25usize);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.random_range(-9.0..9.0)).collect())
            .collect();
        let matrix = matrix_from_rows(&rows, None);
        let cell = [0.25, 0.5, 1.0, 1.7][rng.random_range(0..4)];
        let grid = discretize(&matrix, &GridConfig::new(cell).unwrap());
        let element = build_structuring_element(d, r).unwrap();
        let sset = dilate(&grid, &element).unwrap();
        for i in 0..grid.n_samples() {
            assert!(
                sset.contains(grid.lattice_row(i)),
                "case {case}: lattice point {:?} missing",
                grid.lattice_row(i)
            );
        }
    }
    println!("[PASS] C4 D_grid subset of D_sset: 1000 randomized instances exact");
}

/// Deterministic feature CSV fixture for the binary-level determinism check.
fn write_features_csv(path: &std::path::Path) {
    let mut rng = StdRng::seed_from_u64(555);
    let mut text = String::from("id,f1,f2\n");
    for i in 0..400 {
        let x: f64 = rng.random_range(-3.0..3.0);
        let y: f64 = rng.random_range(-3.0..3.0);
        text.push_str(&format!("p{i},{x},{y}\n"));
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn c05_binary_determinism_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let features = dir.path().join("features.csv");
    write_features_csv(&features);
    let out = dir.path().join("selection.json");
    let mut bytes: Vec<Vec<u8>> = Vec::new();
    for threads in [1usize, 4, 8] {
        for _run in 0..5 {
            let status = Command::new(env!("CARGO_BIN_EXE_hetsample"))
                .args([
                    "sample",
                    "--features",
                    features.to_str().unwrap(),
                    "--out",
                    out.to_str().unwrap(),
                    "--k",
                    "20",
                    "--trials",
                    "200",
                    "--seed",
                    "9",
                    "--threads",
                    &threads.to_string(),
                ])
                .output()
                .expect("binary runs");
            assert!(status.status.success(), "sample failed: {status:?}");
            bytes.push(std::fs::read(&out).unwrap());
        }
    }
    for (i, b) in bytes.iter().enumerate() {
        assert_eq!(
            b, &bytes[0],
            "run {i} differs from run 0 (thread counts 1/4/8, 5 runs each)"
        );
    }
    println!("[PASS] C5 determinism: 15 runs across --threads 1/4/8 byte-identical selection JSON");
}

#[test]
fn c06_group_exclusion_one_patch_per_source() {
    // 7 patches per source, 30 sources; same-source patches cluster tightly
    let mut rng = StdRng::seed_from_u64(606);
    let mut rows = Vec::new();
    let mut groups = Vec::new();
    for source in 0..30 {
        let cx: f64 = rng.random_range(-12.0..12.0);
        let cy: f64 = rng.random_range(-12.0..12.0);
        for _ in 0..7 {
            rows.push(vec![cx + rng.random_range(-0.3..0.3), cy + rng.random_range(-0.3..0.3)]);
            groups.push(format!("img{source:02}"));
        }
    }
    let matrix = matrix_from_rows(&rows, Some(groups.clone()));
    let (z, grid, sset) = zscore_pipeline(&matrix, 0.1, 4.0);
    for seed in 0..20u64 {
        let params = SelectionParams {
            k: 30,
            n_trials: 20,
            seed,
            enforce_group_exclusion: true,
        };
        let run = select(&z, &grid, &sset, &params).unwrap();
        let mut seen = HashSet::new();
        for id in &run.result.selected_ids {
            let idx = matrix.index_of(id).unwrap();
            assert!(
                seen.insert(groups[idx].clone()),
                "seed {seed}: source {} selected twice",
                groups[idx]
            );
        }
        assert_eq!(seen.len(), 30, "seed {seed}: expected one patch per source");
    }
    println!("[PASS] C6 group exclusion: 20 seeds, k=30 over 30 sources x 7 patches, one patch per source");
}

#[test]
fn c07_noise_estimator_recovery() {
    let start = Instant::now();
    let mask = BinaryMask::filled(256, 256, false);
    for sigma in [5.0, 10.0, 20.0] {
        let normal = Normal::new(0.0, sigma).unwrap();
        let mean_est: f64 = (0..10)
            .map(|seed| {
                let mut rng = StdRng::seed_from_u64(700 + seed);
                let pixels: Vec<f64> = (0..256 * 256)
                    .map(|_| (128.0f64 + normal.sample(&mut rng)).max(0.0))
                    .collect();
                let img = GrayImage::new(256, 256, pixels).unwrap();
                noise_sigma(&img, &mask).unwrap()
            })
            .sum::<f64>()
            / 10.0;
        assert!(
            (mean_est - sigma).abs() <= 0.10 * sigma,
            "sigma {sigma}: mean estimate {mean_est} outside +/-10%"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, limit 5s");
    println!(
        "[PASS] C7 noise recovery: sigma in {{5,10,20}} recovered within 10% over 10 seeds in {:.2}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn c08_contrast_exact_and_scale_invariant() {
    let mut img = GrayImage::filled(64, 64, 37.0).unwrap();
    let mut mask = BinaryMask::filled(64, 64, false);
    for y in 20..32u32 {
        for x in 0..64u32 {
            img.set(x, y, 111.0);
            mask.set(x, y, true);
        }
    }
    let c = hetsample::metrics::contrast(&img, &mask).unwrap();
    assert!((c - 3.0).abs() < 1e-12, "111/37 = 3 exactly, got {c}");
    for scale in [0.5, 3.0] {
        let scaled =
            GrayImage::new(64, 64, img.pixels().iter().map(|p| p * scale).collect()).unwrap();
        let cs = hetsample::metrics::contrast(&scaled, &mask).unwrap();
        assert!((cs - c).abs() < 1e-9, "scale {scale}: {cs} vs {c}");
    }
    println!("[PASS] C8 contrast: exact two-level ratio at 1e-12, intensity-scale invariant at 1e-9");
}

#[test]
fn c09_skeleton_bar_single_path_and_idempotent() {
    let mut mask = BinaryMask::filled(220, 30, false);
    for y in 10..20u32 {
        for x in 10..210u32 {
            mask.set(x, y, true);
        }
    }
    let s = skeletonize(&mask);
    // connectivity and degree profile of a simple open path
    let degree = |p: (u32, u32)| -> usize {
        s.pixels
            .iter()
            .filter(|&&q| {
                q != p
                    && (q.0 as i64 - p.0 as i64).abs() <= 1
                    && (q.1 as i64 - p.1 as i64).abs() <= 1
            })
            .count()
    };
    let endpoints = s.pixels.iter().filter(|&&p| degree(p) == 1).count();
    let through = s.pixels.iter().filter(|&&p| degree(p) == 2).count();
    assert_eq!(endpoints, 2, "bar skeleton must be an open path");
    assert_eq!(endpoints + through, s.pixels.len(), "no junction pixels allowed");
    let expect = 190.0;
    assert!(
        (s.arc_length - expect).abs() <= 0.1 * expect,
        "arc length {} outside 10% of {expect}",
        s.arc_length
    );
    let again = skeletonize(&BinaryMask::from_points(220, 30, &s.pixels));
    assert_eq!(s.pixels, again.pixels, "skeletonization must be idempotent");
    println!(
        "[PASS] C9 skeleton: 200x10 bar -> single 8-connected path, arc length {:.2} (target 190 +/-10%), idempotent",
        s.arc_length
    );
}

#[test]
fn c10_detrend_residual_properties() {
    let mut rng = StdRng::seed_from_u64(1010);
    for case in 0..20 {
        let n = rng.random_range(10..300usize);
        let slope: f64 = rng.random_range(-2.0..2.0);
        let noise = Normal::new(0.0, 1.5).unwrap();
        let points: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let m = rng.random_range(0.0..100.0);
                (m, slope * m + 4.0 + noise.sample(&mut rng))
            })
            .collect();
        let model = fit_detrend(&points).unwrap();
        let residuals: Vec<f64> = points.iter().map(|&(m, h)| detrend(h, m, &model)).collect();
        let nf = n as f64;
        let mean_r = residuals.iter().sum::<f64>() / nf;
        assert!(mean_r.abs() < 1e-6, "case {case}: residual mean {mean_r}");
        let mean_m = points.iter().map(|p| p.0).sum::<f64>() / nf;
        let cov: f64 = points
            .iter()
            .zip(&residuals)
            .map(|(&(m, _), &r)| (m - mean_m) * (r - mean_r))
            .sum::<f64>()
            / nf;
        let sd_m = (points.iter().map(|p| (p.0 - mean_m).powi(2)).sum::<f64>() / nf).sqrt();
        let sd_r = (residuals.iter().map(|r| (r - mean_r).powi(2)).sum::<f64>() / nf).sqrt();
        if sd_r > 1e-12 {
            let corr = cov / (sd_m * sd_r);
            assert!(corr.abs() < 1e-6, "case {case}: residual correlation {corr}");
        }
    }
    println!("[PASS] C10 detrend residuals: mean 0 and corr(h~, m) 0 within 1e-6 on 20 random fitting sets");
}

#[test]
fn c11_pca_identities_and_optimality() {
    let mut rng = StdRng::seed_from_u64(1111);
    let d = 4usize;
    let rows: Vec<Vec<f64>> = (0..600)
        .map(|_| {
            let t: f64 = rng.random_range(-1.0..1.0);
            // correlated structure plus noise
            vec![
                2.0 * t + rng.random_range(-0.4..0.4),
                -t + rng.random_range(-0.6..0.6),
                0.5 * t + rng.random_range(-1.0..1.0),
                rng.random_range(-0.8..0.8),
            ]
        })
        .collect();
    let matrix = matrix_from_rows(&rows, None);
    let model = fit_zscore(&matrix).unwrap();
    let z = apply_zscore(&matrix, &model).unwrap();
    let projection = pca_project(&z, &[]).unwrap();
    let n = z.n_samples() as f64;

    for k in 0..2 {
        let col: Vec<f64> = projection.coords.iter().map(|c| c[k]).collect();
        let mean = col.iter().sum::<f64>() / n;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        assert!(
            (var - projection.explained_variance[k]).abs() < 1e-9,
            "component {k}: variance {var} vs eigenvalue {}",
            projection.explained_variance[k]
        );
    }
    for a in 0..2 {
        for b in 0..2 {
            let dot: f64 = projection.components[a]
                .iter()
                .zip(&projection.components[b])
                .map(|(x, y)| x * y)
                .sum();
            let expect = if a == b { 1.0 } else { 0.0 };
            assert!((dot - expect).abs() < 1e-9, "components not orthonormal");
        }
    }

    // no random orthonormal 2-d projection captures more variance
    let captured: f64 = projection.explained_variance.iter().sum();
    let centered: Vec<Vec<f64>> = {
        let mut means = vec![0.0; d];
        for i in 0..z.n_samples() {
            for (j, v) in z.row(i).iter().enumerate() {
                means[j] += v / n;
            }
        }
        (0..z.n_samples())
            .map(|i| z.row(i).iter().zip(&means).map(|(v, m)| v - m).collect())
            .collect()
    };
    let gauss = Normal::new(0.0, 1.0).unwrap();
    for trial in 0..100 {
        // random orthonormal pair via Gram-Schmidt
        let mut u: Vec<f64> = (0..d).map(|_| gauss.sample(&mut rng)).collect();
        let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        u.iter_mut().for_each(|x| *x /= nu);
        let mut v: Vec<f64> = (0..d).map(|_| gauss.sample(&mut rng)).collect();
        let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        v.iter_mut().zip(&u).for_each(|(x, a)| *x -= dot * a);
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= nv);

        let mut var_sum = 0.0;
        for w in [&u, &v] {
            let coords: Vec<f64> = centered
                .iter()
                .map(|row| row.iter().zip(w.iter()).map(|(a, b)| a * b).sum::<f64>())
                .collect();
            let mean = coords.iter().sum::<f64>() / n;
            var_sum += coords.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / n;
        }
        assert!(
            var_sum <= captured + 1e-9,
            "trial {trial}: random projection captured {var_sum} > PCA {captured}"
        );
    }
    println!("[PASS] C11 PCA: coord variance == eigenvalue, orthonormal components, optimal among 100 random 2-d projections");
}

#[test]
fn c12_histogram_flattening_on_exponential_marginal() {
    // fixed skewed 1-d dataset; selection should flatten its histogram
    let mut data_rng = StdRng::seed_from_u64(1212);
    let rows: Vec<Vec<f64>> = (0..10_000)
        .map(|_| {
            let u: f64 = data_rng.random_range(0.0f64..1.0);
            vec![-(1.0 - u).ln() * 1.5]
        })
        .collect();
    let matrix = matrix_from_rows(&rows, None);
    let (z, grid, sset) = zscore_pipeline(&matrix, 0.02, 4.0);
    let full: Vec<f64> = (0..z.n_samples()).map(|i| z.row(i)[0]).collect();
    let full_entropy = entropy(&histogram_pair(&full, &full, 20, "f").unwrap().full_freq);

    let mut flatter = 0;
    for seed in 0..20u64 {
        let params = SelectionParams {
            k: 100,
            n_trials: 200,
            seed,
            enforce_group_exclusion: false,
        };
        let run = select(&z, &grid, &sset, &params).unwrap();
        let subset: Vec<f64> = run
            .result
            .selected_ids
            .iter()
            .map(|id| z.row(z.index_of(id).unwrap())[0])
            .collect();
        let pair = histogram_pair(&full, &subset, 20, "f").unwrap();
        if entropy(&pair.subset_freq) >= full_entropy {
            flatter += 1;
        }
    }
    assert!(
        flatter >= 16,
        "subset entropy >= full entropy in only {flatter}/20 seeds"
    );
    println!(
        "[PASS] C12 histogram flattening: subset entropy >= full entropy in {flatter}/20 seeds (full entropy {full_entropy:.4})"
    );
}

#[test]
fn c13_kdtree_matches_brute_force() {
    let mut rng = StdRng::seed_from_u64(1313);
    for case in 0..1000 {
        let dim = rng.random_range(1..=4usize);
        let n = rng.random_range(1..=150usize);
        let points: Vec<f64> = (0..n * dim).map(|_| rng.random_range(-12..12) as f64).collect();
        let tree = KdTree::new(&points, dim);
        for _ in 0..5 {
            let query: Vec<f64> = (0..dim).map(|_| rng.random_range(-12..12) as f64).collect();
            let mut best = (usize::MAX, f64::INFINITY);
            for i in 0..n {
                let mut d2 = 0.0;
                for j in 0..dim {
                    let diff = query[j] - points[i * dim + j];
                    d2 += diff * diff;
                }
                if d2 < best.1 {
                    best = (i, d2);
                }
            }
            let (ti, td) = tree.nearest(&query).unwrap();
            assert_eq!(td.to_bits(), best.1.to_bits(), "case {case}: distance differs");
            assert_eq!(ti, best.0, "case {case}: tie-break differs");
        }
    }
    println!("[PASS] C13 nearest-neighbour acceleration: 1000 instances x 5 queries bitwise equal to brute force");
}

#[test]
fn c14_patch_protocol_positions() {
    let specs = hetsample::patches::plan_windows("sample", 1376, 1104, 256, 0).unwrap();
    assert_eq!(specs.len(), 7, "exactly seven windows planned");
    let pos = |kind: hetsample::patches::WindowKind| {
        let s = specs.iter().find(|s| s.kind == kind).unwrap();
        (s.x, s.y)
    };
    use hetsample::patches::WindowKind::*;
    assert_eq!(pos(CornerTl), (0, 0));
    assert_eq!(pos(CornerTr), (1120, 0));
    assert_eq!(pos(CornerBl), (0, 848));
    assert_eq!(pos(CornerBr), (1120, 848));
    assert_eq!(pos(Center), (560, 424));
    println!("[PASS] C14 patch protocol: corners (0,0)/(1120,0)/(0,848)/(1120,848), center (560,424), 7 windows");
}
