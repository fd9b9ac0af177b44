mod common;

use awaysteps::{
    canonical_partition, certificate_check, diameter, empirical_wf, fw_away_run, fw_away_step, make_figure1,
    random_instance, random_objective, rho_b, rho_n, theorem3_bound, transform_instance, vn_away_run,
    vn_away_step, vn_run, vn_step, Error, Instance, QuadraticObjective, RandomMode, RunOptions, RunStatus,
    SimplexIterate, StepKind, StepOutcome, StepRecord,
};

fn moved(o: StepOutcome<f64>) -> (SimplexIterate<f64>, StepRecord<f64>) {
    match o {
        StepOutcome::Moved(n, r) => (n, r),
        other => panic!("expected a step, got {other:?}"),
    }
}

fn outside_pair() -> Instance<f64> {
    Instance::new(vec![vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]]).unwrap()
}

fn lower_bound(inst: &Instance<f64>) -> f64 {
    let part = canonical_partition(inst).unwrap();
    let rb = rho_b(inst, &part).unwrap();
    let rn = rho_n(inst, &part).unwrap();
    theorem3_bound(inst, &part, rb, rn).unwrap().value
}

fn norm_along(y: &[f64], a: &[f64], t: f64) -> f64 {
    let p: Vec<f64> = y.iter().zip(a).map(|(u, v)| u + t * v).collect();
    common::dot(&p, &p).sqrt()
}

#[test]
fn vn_step_figure1_from_e1() {
    let inst = make_figure1::<f64>();
    let x0 = SimplexIterate::vertex(&inst, 0).unwrap();
    let (next, rec) = moved(vn_step(&inst, &x0, 1).unwrap());

    let y = x0.y();
    let scores: Vec<f64> = inst.columns().iter().map(|c| common::dot(c, y)).collect();
    assert_eq!(scores, vec![1.0, 0.0, 0.0]);
    assert_eq!(rec.j, Some(1));

    let a: Vec<f64> = inst.column(1).iter().zip(y).map(|(c, v)| c - v).collect();
    let (theta, _) = common::grid_min(1.0, 100_001, |t| norm_along(y, &a, t));
    assert!((rec.theta - theta).abs() < 1e-5);
    assert!((rec.theta - 0.5).abs() < 1e-15);
    assert_eq!(next.y(), &[0.5, -0.5]);
    assert_eq!(next.x(), &[0.5, 0.5, 0.0]);
}

#[test]
fn vn_step_halts_and_detects_zero() {
    let inst = outside_pair();
    let x0 = SimplexIterate::vertex(&inst, 0).unwrap();
    match vn_step(&inst, &x0, 1).unwrap() {
        StepOutcome::Certificate(y) => assert_eq!(y, vec![1.0, 0.0]),
        other => panic!("{other:?}"),
    }

    let fig = make_figure1::<f64>();
    let it = SimplexIterate::from_weights(&fig, vec![0.0, 0.5, 0.5]).unwrap();
    let res = vn_run(&fig, it, RunOptions::new(1e-8, 10)).unwrap();
    assert_eq!(res.status, RunStatus::Converged);
    assert_eq!(res.iterations, 0);
}

#[test]
fn vn_run_figure1_converges() {
    let inst = make_figure1::<f64>();
    let x0 = SimplexIterate::vertex(&inst, 0).unwrap();
    let res = vn_run(&inst, x0, RunOptions::new(1e-4, 50_000_000).without_steps()).unwrap();
    assert_eq!(res.status, RunStatus::Converged);
    assert!(res.iterations > 1000);
    assert!(common::dot(res.iterate.y(), res.iterate.y()).sqrt() <= 1e-4);
}

#[test]
fn vn_run_infeasible_within_bound() {
    let inst = outside_pair();
    let rho = common::min_norm_oracle(inst.columns());
    assert!((rho - 3f64.sqrt() / 2.0).abs() < 1e-12);
    let cap = (8.0 / (rho * rho)).ceil() as usize;
    assert_eq!(cap, 11);
    for start in 0..inst.n() {
        let x0 = SimplexIterate::vertex(&inst, start).unwrap();
        let res = vn_run(&inst, x0, RunOptions::default()).unwrap();
        assert_eq!(res.status, RunStatus::InfeasibleCertificate);
        assert!(res.iterations <= cap);
        let z = res.certificate.unwrap();
        assert!(inst.columns().iter().all(|c| common::dot(c, &z) > 0.0));
    }
}

#[test]
fn vn_run_equilateral_rate() {
    let cols = common::equilateral();
    let radius = (0..3)
        .map(|i| common::line_distance(&cols[i], &cols[(i + 1) % 3]))
        .fold(f64::INFINITY, f64::min);
    assert!((radius - 0.5).abs() < 1e-12);
    let inst = Instance::new(cols).unwrap();
    let x0 = SimplexIterate::vertex(&inst, 0).unwrap();
    let res = vn_run(&inst, x0, RunOptions::new(0.0, 200)).unwrap();
    let c = 1.0 - radius * radius;
    let objs = res.trace.objectives();
    for (k, o) in objs.iter().enumerate() {
        assert!(*o <= c.powi(k as i32) * objs[0] * (1.0 + 1e-9), "k={k}");
    }
}

#[test]
fn vn_away_step_figure1_second_step() {
    let inst = make_figure1::<f64>();
    let it = SimplexIterate::from_weights(&inst, vec![0.5, 0.5, 0.0]).unwrap();
    let y = it.y().to_vec();
    assert_eq!(y, vec![0.5, -0.5]);
    let (next, rec) = moved(vn_away_step(&inst, &it, 2).unwrap());
    assert_eq!(rec.kind, StepKind::Regular);
    assert_eq!((rec.j, rec.l), (Some(2), None));

    let a: Vec<f64> = inst.column(2).iter().zip(&y).map(|(c, v)| c - v).collect();
    let away: Vec<f64> = y.iter().zip(inst.column(0)).map(|(v, c)| v - c).collect();
    assert!(common::dot(&a, &y) < common::dot(&away, &y));
    let (theta, _) = common::grid_min(1.0, 100_001, |t| norm_along(&y, &a, t));
    assert!((rec.theta - theta).abs() < 1e-5);
    assert!((rec.theta - 0.4).abs() < 1e-15);
    assert!((next.y()[0] - 0.3).abs() < 1e-15 && (next.y()[1] - 0.1).abs() < 1e-15);
    for (got, want) in next.x().iter().zip([0.3, 0.3, 0.4]) {
        assert!((got - want).abs() < 1e-15);
    }
}

#[test]
fn vn_away_theta_max_and_certificate() {
    let inst = Instance::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let it = SimplexIterate::from_weights(&inst, vec![0.4, 0.4, 0.2]).unwrap();
    let (_, rec) = moved(vn_away_step(&inst, &it, 1).unwrap());
    assert!(rec.kind != StepKind::Regular);
    assert!((rec.theta_max - 0.2 / 0.8).abs() < 1e-15);

    let out = outside_pair();
    let x0 = SimplexIterate::vertex(&out, 1).unwrap();
    assert!(matches!(vn_away_step(&out, &x0, 1).unwrap(), StepOutcome::Certificate(_)));
}

#[test]
fn vn_away_requires_vertex_start() {
    let inst = make_figure1::<f64>();
    let it = SimplexIterate::from_weights(&inst, vec![0.5, 0.5, 0.0]).unwrap();
    assert!(matches!(vn_away_run(&inst, it, RunOptions::default()), Err(Error::InvalidIterate(_))));
}

#[test]
fn vn_away_figure1_contraction() {
    let inst = make_figure1::<f64>();
    // ρ_B = −1 (segment [−1, 1]), ρ_N = 1, ‖A‖ = 1
    let w = 1.0 * 1.0 / (1.0f64 + 1.0).sqrt();
    assert!((lower_bound(&inst) - w).abs() < 1e-12);
    let x0 = SimplexIterate::vertex(&inst, 0).unwrap();
    let res = vn_away_run(&inst, x0, RunOptions::new(1e-4, 1_000_000)).unwrap();
    assert_eq!(res.status, RunStatus::Converged);
    let c = 1.0 - w * w / 16.0;
    let objs = res.trace.objectives();
    for (s, pair) in res.trace.steps.iter().zip(objs.windows(2)) {
        if !s.is_drop() {
            assert!(pair[1] <= c * pair[0] + 1e-12);
        }
    }
}

#[test]
fn vn_away_infeasible_and_eight_over_k() {
    let inst = outside_pair();
    for start in 0..inst.n() {
        let x0 = SimplexIterate::vertex(&inst, start).unwrap();
        let res = vn_away_run(&inst, x0, RunOptions::default()).unwrap();
        assert_eq!(res.status, RunStatus::InfeasibleCertificate);
        assert!(res.iterations <= 11);
    }
    for seed in 0..5 {
        let inst = random_instance::<f64>(3, 7, seed, RandomMode::Boundary).unwrap();
        let x0 = SimplexIterate::vertex(&inst, 0).unwrap();
        let res = vn_away_run(&inst, x0, RunOptions::new(1e-8, 5000)).unwrap();
        for s in &res.trace.steps {
            assert!(s.obj <= 8.0 / s.k as f64 + 1e-9);
        }
    }
}

#[test]
fn fw_away_step_matches_vn_away_step_for_identity() {
    let inst = make_figure1::<f64>();
    let id = QuadraticObjective::identity(2);
    let it = SimplexIterate::from_weights(&inst, vec![0.5, 0.5, 0.0]).unwrap();
    let (a, ra) = moved(vn_away_step(&inst, &it, 2).unwrap());
    let (b, rb) = moved(fw_away_step(&inst, &id, &it, 1e-12, 2).unwrap());
    assert_eq!((ra.kind, ra.j, ra.l), (rb.kind, rb.j, rb.l));
    assert!((ra.theta - rb.theta).abs() < 1e-15);
    assert_eq!(a.x(), b.x());
}

#[test]
fn fw_away_shifted_optimum() {
    let inst = make_figure1::<f64>();
    let q = common::identity(2);
    let b = vec![0.0, -0.5];
    let (f_star, y_star, _) = common::qp_oracle(inst.columns(), &q, &b);
    assert!((f_star + 0.125).abs() < 1e-12);
    assert!(y_star[0].abs() < 1e-12 && (y_star[1] - 0.5).abs() < 1e-12);

    let obj = QuadraticObjective::new(q, b).unwrap();
    let x0 = SimplexIterate::vertex(&inst, 0).unwrap();
    let res = fw_away_run(&inst, &obj, x0, RunOptions::new(1e-10, 10_000)).unwrap();
    assert_eq!(res.status, RunStatus::Converged);
    assert!(res.final_gap.unwrap() <= 1e-10);
    assert!(obj.value(res.iterate.y()) - f_star <= 1e-10);
}

#[test]
fn fw_away_diag_step_matches_grid() {
    let inst = Instance::new(vec![vec![1.0, 0.2], vec![-0.4, 1.0], vec![-0.6, -0.9]]).unwrap();
    let q = vec![vec![2.0, 0.0], vec![0.0, 1.0]];
    let obj = QuadraticObjective::new(q.clone(), vec![0.0, 0.0]).unwrap();
    let it = SimplexIterate::from_weights(&inst, vec![0.6, 0.3, 0.1]).unwrap();
    let y = it.y().to_vec();
    let (_, rec) = moved(fw_away_step(&inst, &obj, &it, 1e-12, 1).unwrap());
    let dir: Vec<f64> = match rec.kind {
        StepKind::Regular => inst.column(rec.j.unwrap()).iter().zip(&y).map(|(c, v)| c - v).collect(),
        _ => y.iter().zip(inst.column(rec.l.unwrap())).map(|(v, c)| v - c).collect(),
    };
    let (theta, _) = common::grid_min(rec.theta_max, 1_000_001, |t| {
        common::quad_value(&q, &[0.0, 0.0], &[y[0] + t * dir[0], y[1] + t * dir[1]])
    });
    assert!((rec.theta - theta).abs() < 1e-6);
}

#[test]
fn fw_away_identity_run_equals_vn_away_run() {
    let inst = random_instance::<f64>(3, 7, 5, RandomMode::Interior).unwrap();
    let id = QuadraticObjective::identity(3);
    let x0 = SimplexIterate::vertex(&inst, 0).unwrap();
    let a = vn_away_run(&inst, x0.clone(), RunOptions::new(1e-6, 200).with_path()).unwrap();
    let b = fw_away_run(&inst, &id, x0, RunOptions::new(1e-14, 200).with_path()).unwrap();
    let common_len = a.trace.path.len().min(b.trace.path.len());
    assert!(common_len > 5);
    for (p, q) in a.trace.path.iter().zip(&b.trace.path).take(common_len) {
        assert_eq!(p.support(), q.support());
        for (u, v) in p.x().iter().zip(q.x()) {
            assert!((u - v).abs() < 1e-12);
        }
    }
    for (s, t) in a.trace.steps.iter().zip(&b.trace.steps) {
        assert_eq!((s.kind, s.j, s.l), (t.kind, t.j, t.l));
    }
}

#[test]
fn fw_away_random_pd_rate() {
    let inst = random_instance::<f64>(2, 6, 11, RandomMode::Interior).unwrap();
    let obj = random_objective::<f64>(2, 11).unwrap();
    let (f_star, y_star, _) = common::qp_oracle(inst.columns(), obj.q(), obj.b());
    let bar = transform_instance(&inst, &obj, &y_star).unwrap();
    let l = lower_bound(&bar);
    let d = diameter(bar.columns());
    assert!(l > 0.0 && d > 0.0);
    let c = 1.0 - l * l / (4.0 * d * d);

    let x0 = SimplexIterate::vertex(&inst, 0).unwrap();
    let res = fw_away_run(&inst, &obj, x0, RunOptions::new(1e-13, 10_000)).unwrap();
    let objs = res.trace.objectives();
    for (s, pair) in res.trace.steps.iter().zip(objs.windows(2)) {
        if !s.is_drop() {
            assert!(pair[1] - f_star <= c * (pair[0] - f_star) + 1e-10, "step {}", s.k);
        }
    }
    assert!(res.trace.max_drop_surplus() <= 0);
}

#[test]
fn certificate_examples() {
    let inst = outside_pair();
    assert!(certificate_check(&inst, &[1.0, 0.3]));
    assert!(!certificate_check(&inst, &[0.0, 0.0]));
    let fig = make_figure1::<f64>();
    for k in 0..64 {
        let t = k as f64 * std::f64::consts::TAU / 64.0;
        assert!(!certificate_check(&fig, &[t.cos(), t.sin()]));
    }
}

#[test]
fn empirical_wf_examples() {
    let inst = make_figure1::<f64>();
    let id = QuadraticObjective::identity(2);
    let e1 = SimplexIterate::vertex(&inst, 0).unwrap();
    // ℓ = 1 is the only supported index and j = 2 wins the tie with a₃
    let y = e1.y();
    let hand = common::dot(y, &[1.0, 1.0]) / common::dot(y, y).sqrt();
    let got = empirical_wf(&inst, &id, std::slice::from_ref(&e1), 0.0).unwrap();
    assert!((got - hand).abs() < 1e-15 && (got - 1.0).abs() < 1e-15);

    let opt = SimplexIterate::from_weights(&inst, vec![0.0, 0.5, 0.5]).unwrap();
    let with_opt = empirical_wf(&inst, &id, &[opt, e1.clone()], 0.0).unwrap();
    assert_eq!(with_opt, got);

    let res = fw_away_run(&inst, &id, e1, RunOptions::new(1e-12, 1000).with_path()).unwrap();
    let wf = empirical_wf(&inst, &id, &res.trace.path, 0.0).unwrap();
    assert!(wf >= lower_bound(&inst) - 1e-12);
}
