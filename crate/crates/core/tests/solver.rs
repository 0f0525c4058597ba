use plateau_core::exact::{curvature_bounds, radial_solution};
use plateau_core::solver::{
    continuation, continuation_with, default_tol, minimize_with, triangulate, Discretization, DomainSpec,
    EpsSchedule, ScalarField, SolverOptions,
};
use plateau_core::{make_eikonal, RegularizedPotential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn oracle_field(mesh: &plateau_core::solver::Mesh) -> ScalarField {
    let m = make_eikonal();
    ScalarField::from_fn(mesh, |p| radial_solution(&m, 2, 1.0, p[0].hypot(p[1]).min(1.0)).unwrap())
        .with_boundary_zero(mesh)
}

#[test]
fn oracle_start_is_nearly_optimal() {
    let d = DomainSpec::disk(1.0);
    let mesh = triangulate(&d, 1.0 / 16.0).unwrap();
    let disc = Discretization::new(&mesh);
    let r = RegularizedPotential::new(make_eikonal(), 0.01).unwrap();
    let init = oracle_field(&mesh);
    let opts = SolverOptions::new(default_tol(&d));
    let from_oracle = minimize_with(&disc, &r, &init, &opts).unwrap();
    let from_zero = minimize_with(&disc, &r, &ScalarField::zeros(&mesh), &opts).unwrap();
    let e0 = disc.energy(&r, &disc.restrict(&init));
    assert!(from_oracle.energy <= e0);
    assert!(e0 - from_oracle.energy < 1e-3 * e0.abs());
    assert!(from_oracle.iterations < from_zero.iterations);
    let bound = curvature_bounds(&make_eikonal(), 2, 1.0).unwrap().grad_bound;
    let max_grad = disc
        .triangle_gradients(&from_zero.field)
        .iter()
        .map(|g| g[0].hypot(g[1]))
        .fold(0.0, f64::max);
    assert!(max_grad <= bound + 0.05);
}

#[test]
fn random_starts_reach_the_same_minimizer() {
    let d = DomainSpec::disk(1.0);
    let mesh = triangulate(&d, 0.125).unwrap();
    let disc = Discretization::new(&mesh);
    let r = RegularizedPotential::new(make_eikonal(), 0.05).unwrap();
    let tol = default_tol(&d);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut random = || ScalarField::from_fn(&mesh, |_| rng.gen_range(0.0..2.0)).with_boundary_zero(&mesh);
    let (a, b) = (random(), random());
    let opts = SolverOptions::new(tol);
    let ua = minimize_with(&disc, &r, &a, &opts).unwrap();
    let ub = minimize_with(&disc, &r, &b, &opts).unwrap();
    // strong convexity turns the gradient tolerance into a small field gap
    assert!(ua.field.sup_distance(&ub.field) <= 1e-5, "{}", ua.field.sup_distance(&ub.field));
}

#[test]
fn continuation_deltas_shrink_and_bounds_hold() {
    let d = DomainSpec::disk(1.0);
    let mesh = triangulate(&d, 1.0 / 16.0).unwrap();
    let schedule = EpsSchedule::List(vec![0.1, 0.05, 0.025, 0.0125]);
    let (u, report) = continuation(&make_eikonal(), &mesh, &schedule, default_tol(&d)).unwrap();
    assert_eq!(report.history.len(), 4);
    assert!(report.deltas.windows(2).all(|w| w[1] < w[0]));
    assert!(u.min() >= -1e-10);
    assert!(report.wall_time.is_none());
    let oracle = oracle_field(&mesh);
    assert!(u.sup_distance(&oracle) < 0.05);
}

#[test]
fn energy_decreases_under_nested_refinement() {
    let d = DomainSpec::rectangle(1.0, 1.0);
    let r = RegularizedPotential::new(make_eikonal(), 0.05).unwrap();
    let mut energies = Vec::new();
    for h in [0.25, 0.125, 0.0625] {
        let mesh = triangulate(&d, h).unwrap();
        let disc = Discretization::new(&mesh);
        let m = minimize_with(&disc, &r, &ScalarField::zeros(&mesh), &SolverOptions::new(default_tol(&d))).unwrap();
        energies.push(m.energy);
    }
    assert!(energies.windows(2).all(|w| w[1] <= w[0] + 1e-10), "{energies:?}");
}

#[test]
fn deterministic_mode_is_thread_independent() {
    let d = DomainSpec::disk(1.0);
    let mesh = triangulate(&d, 0.1).unwrap();
    let schedule = EpsSchedule::List(vec![0.1, 0.05]);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| continuation(&make_eikonal(), &mesh, &schedule, default_tol(&d)).unwrap())
    };
    let (u1, r1) = run(1);
    let (u4, r4) = run(4);
    assert_eq!(r1, r4);
    assert!(u1.values.iter().zip(&u4.values).all(|(a, b)| a.to_bits() == b.to_bits()));
}

#[test]
fn nondeterministic_mode_reports_wall_time() {
    let d = DomainSpec::rectangle(1.0, 1.0);
    let mesh = triangulate(&d, 0.25).unwrap();
    let mut opts = SolverOptions::new(default_tol(&d));
    opts.deterministic = false;
    let (_, report) = continuation_with(&make_eikonal(), &mesh, &EpsSchedule::auto(), &opts, None).unwrap();
    assert!(report.wall_time.is_some());
    assert!(report.history.len() <= 9);
}

#[test]
fn rejects_bad_schedules() {
    let mesh = triangulate(&DomainSpec::disk(1.0), 0.5).unwrap();
    for bad in [vec![], vec![0.1, 0.2], vec![0.1, -0.05]] {
        assert!(continuation(&make_eikonal(), &mesh, &EpsSchedule::List(bad), 1e-8).is_err());
    }
}
