use ate_core::grid::{GridSpec, RegisterLayout};
use ate_core::potentials::{harmonic_1d, v_en_for_bondlength, v_nn_table};
use ate_core::spectra::{
    dense_hamiltonian, diagonal_plus_transverse, eig_hermitian, indicator_grid, max_indicator,
    Coupling, DEFAULT_GAP_FLOOR,
};

#[test]
#[ignore]
fn probe_parabolic() {
    let grid = GridSpec::new(10.0, 6).unwrap();
    let layout = RegisterLayout::single_axis(grid);
    let v = harmonic_1d(&grid, 1.0, 5.0);
    let t0 = std::time::Instant::now();
    let pts = indicator_grid(
        |a| {
            let diag: Vec<f64> = v.iter().map(|&x| a * x).collect();
            let h = dense_hamiltonian(&layout, &diag, 0.0)?;
            Ok((h, Coupling::Diagonal(v.clone())))
        },
        257,
        DEFAULT_GAP_FLOOR,
    )
    .unwrap();
    let fmax = max_indicator(&pts);
    // trapezoid c
    let mut c = 0.0;
    for w in pts.windows(2) {
        c += 0.5 * (w[0].indicator + w[1].indicator) * (w[1].schedule_value - w[0].schedule_value);
    }
    println!(
        "parabolic: fmax={fmax:.4} c={c:.4} elapsed={:?}",
        t0.elapsed()
    );
    let argmax = pts
        .iter()
        .max_by(|a, b| a.indicator.total_cmp(&b.indicator))
        .unwrap();
    println!(
        "argmax at A={:.4} f={:.4} gap={:.4}",
        argmax.schedule_value, argmax.indicator, argmax.gap
    );
}

#[test]
#[ignore]
fn probe_h2plus_energies() {
    let grid = GridSpec::new(15.0, 6).unwrap();
    let layout = RegisterLayout::single_axis(grid);
    for d in [2.0, 4.0, 6.0, 8.0] {
        let mut v = v_en_for_bondlength(&grid, d).unwrap();
        let shift = 1.0 / (d * d + 1.0f64).sqrt();
        v.iter_mut().for_each(|x| *x += shift);
        let h = dense_hamiltonian(&layout, &v, 0.0).unwrap();
        let (vals, _) = eig_hermitian(&h).unwrap();
        println!("d={d}: E0={:.6} E1={:.6}", vals[0], vals[1]);
    }
}

#[test]
#[ignore]
fn probe_h2plus_indicator() {
    let grid = GridSpec::new(15.0, 6).unwrap();
    let layout = RegisterLayout::new(1, 1, grid, 2).unwrap();
    let bonds = [2.0, 4.0, 6.0, 8.0];
    let jx = 0.1;

    // coupled diag: V_en(k, J) + V_nn[J]
    let nn = v_nn_table(&bonds).unwrap();
    let per_j: Vec<Vec<f64>> = bonds
        .iter()
        .map(|&d| v_en_for_bondlength(&grid, d).unwrap())
        .collect();
    let dim = layout.total_dimension();
    let mut vdiag = vec![0.0; dim];
    for g in 0..dim {
        let j = layout.nuclear_index_of(g);
        let k = g >> 2;
        vdiag[g] = per_j[j][k] + nn[j];
    }

    let t0 = std::time::Instant::now();
    let pts = indicator_grid(
        |a| {
            let diag: Vec<f64> = vdiag.iter().map(|&x| a * x).collect();
            let h = dense_hamiltonian(&layout, &diag, (1.0 - a) * jx)?;
            let vmat = diagonal_plus_transverse(&layout, &vdiag, jx)?;
            Ok((h, Coupling::Matrix(vmat)))
        },
        257,
        DEFAULT_GAP_FLOOR,
    )
    .unwrap();
    let fmax = max_indicator(&pts);
    let mut c = 0.0;
    for w in pts.windows(2) {
        c += 0.5 * (w[0].indicator + w[1].indicator) * (w[1].schedule_value - w[0].schedule_value);
    }
    println!(
        "h2plus: fmax={fmax:.4} c={c:.4} elapsed={:?}",
        t0.elapsed()
    );
    let argmax = pts
        .iter()
        .max_by(|a, b| a.indicator.total_cmp(&b.indicator))
        .unwrap();
    println!(
        "argmax at A={:.4} f={:.4} gap={:.5}",
        argmax.schedule_value, argmax.indicator, argmax.gap
    );
}
