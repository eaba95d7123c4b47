use nanoresonance::cli::{cmd_dimer, cmd_eigen, cmd_field, RunConfig};

fn cfg(text: &str) -> RunConfig {
    RunConfig::from_str_kv(text).unwrap()
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let head: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = head.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn eigen_columns_converge_with_resolution() {
    let reference = column(
        &cmd_eigen(&cfg("dim = 2\nresolution = 48")).unwrap().text,
        "lambda0",
    )[0];
    let coarse = column(
        &cmd_eigen(&cfg("dim = 2\nresolution = 12")).unwrap().text,
        "lambda0",
    )[0];
    let fine = column(
        &cmd_eigen(&cfg("dim = 2\nresolution = 24")).unwrap().text,
        "lambda0",
    )[0];
    assert!((fine - reference).abs() < (coarse - reference).abs());
}

#[test]
fn far_dimer_is_flagged_decoupled() {
    let base =
        "dim = 3\nresolution = 6\ndelta = 0.005\ndispersion = 1\ndecoupled_threshold = 1e-6\n";
    let far = cmd_dimer(&cfg(&format!("{base}separation = 100"))).unwrap();
    let near = cmd_dimer(&cfg(&format!("{base}separation = 1.5"))).unwrap();
    let far: serde_json::Value = serde_json::from_str(far.text.trim()).unwrap();
    let near: serde_json::Value = serde_json::from_str(near.text.trim()).unwrap();
    assert_eq!(far["decoupled"], true, "{far}");
    assert_eq!(near["decoupled"], false, "{near}");
    for v in [&far, &near] {
        assert!(v["residual_m"].as_f64().unwrap() <= 1e-10);
        assert!(v["residual_d"].as_f64().unwrap() <= 1e-10);
        assert!(v["omega_m_re"].as_f64().unwrap() < v["omega_d_re"].as_f64().unwrap());
    }
}

#[test]
fn dimer_separation_list_emits_one_record_each() {
    let out = cmd_dimer(&cfg(
        "dim = 2\nresolution = 10\ndelta = 0.01\ndispersion = 1\nseparation = 3,10,30",
    ))
    .unwrap();
    let recs: Vec<serde_json::Value> = out
        .text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(recs.len(), 3);
    let seps: Vec<f64> = recs
        .iter()
        .map(|r| r["separation_diameters"].as_f64().unwrap())
        .collect();
    for (s, want) in seps.iter().zip([3.0, 10.0, 30.0]) {
        assert!((s - want).abs() < 1e-12);
    }
    assert!(recs.iter().all(|r| r["eta_hat_re"].is_number()));
}

#[test]
fn field_amplitude_grows_toward_resonance() {
    let base = "dim = 3\nresolution = 6\ndelta = 0.05\ndispersion = 1\nfield_form = pole-pencil\n\
                grid_x = 4,6,3\ngrid_y = 0,0,1\ngrid_z = 0,0,1\n";
    let single = nanoresonance::cli::cmd_single(&cfg(base)).unwrap();
    let v: serde_json::Value = serde_json::from_str(single.text.trim()).unwrap();
    let ws = v["omega_re"].as_f64().unwrap();
    let amp = |w: f64| {
        let out = cmd_field(&cfg(&format!("{base}field_omega = {w}"))).unwrap();
        let re = column(&out.text, "re_usc");
        let im = column(&out.text, "im_usc");
        assert_eq!(re.len(), 3);
        re.iter()
            .zip(&im)
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max)
    };
    let far = amp(0.8 * ws);
    let near = amp(0.98 * ws);
    assert!(near > far, "{near} vs {far}");
}

#[test]
fn field_grid_row_count_is_product() {
    let out = cmd_field(&cfg(
        "dim = 3\nresolution = 6\ndispersion = 1\ngrid_x = -5,5,3\ngrid_y = 3,4,2\ngrid_z = -4,4,4",
    ))
    .unwrap();
    let rows = out.text.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert_eq!(rows, 3 * 2 * 4);
}
