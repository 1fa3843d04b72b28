use std::ffi::CStr;
use std::ptr;

use specavg_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sa_last_error_message()) }.to_string_lossy().into_owned()
}

fn operator(n: usize, re: &[f64], im: Option<&[f64]>) -> *mut SaOperator {
    let mut op = ptr::null_mut();
    let status = unsafe { sa_operator_new(n, re.as_ptr(), im.map_or(ptr::null(), |v| v.as_ptr()), &mut op) };
    assert_eq!(status, SaStatus::Ok, "{}", last_error());
    op
}

#[test]
fn eigenvalues_of_a_complex_hermitian_matrix() {
    // [[0, -i], [i, 0]] has eigenvalues ±1
    let op = operator(2, &[0.0, 0.0, 0.0, 0.0], Some(&[0.0, -1.0, 1.0, 0.0]));
    let mut dim = 0;
    assert_eq!(unsafe { sa_operator_dim(op, &mut dim) }, SaStatus::Ok);
    assert_eq!(dim, 2);
    let mut eig = [0.0; 2];
    assert_eq!(unsafe { sa_operator_eigenvalues(op, eig.as_mut_ptr(), 2) }, SaStatus::Ok);
    assert!((eig[0] + 1.0).abs() < 1e-12 && (eig[1] - 1.0).abs() < 1e-12);
    assert_eq!(unsafe { sa_operator_eigenvalues(op, eig.as_mut_ptr(), 1) }, SaStatus::BufferTooSmall);
    unsafe { sa_operator_free(op) };
}

#[test]
fn non_hermitian_input_is_rejected_with_a_message() {
    let mut op = ptr::null_mut();
    let status = unsafe { sa_operator_new(2, [0.0, 1.0, 0.0, 0.0].as_ptr(), ptr::null(), &mut op) };
    assert_eq!(status, SaStatus::NotHermitian);
    assert!(op.is_null());
    assert!(last_error().contains("not Hermitian"));
}

#[test]
fn null_pointers_are_reported() {
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { sa_operator_new(2, ptr::null(), ptr::null(), &mut op) }, SaStatus::NullPointer);
    let mut dim = 0;
    assert_eq!(unsafe { sa_operator_dim(ptr::null(), &mut dim) }, SaStatus::NullPointer);
    unsafe {
        sa_operator_free(ptr::null_mut());
        sa_measure_free(ptr::null_mut());
    }
}

#[test]
fn spectral_measure_atoms() {
    let op = operator(2, &[1.0, 0.0, 0.0, 3.0], None);
    let mut m = ptr::null_mut();
    let phi = [0.6, 0.8];
    assert_eq!(unsafe { sa_spectral_measure(op, phi.as_ptr(), ptr::null(), 2, &mut m) }, SaStatus::Ok);
    let mut len = 0;
    assert_eq!(unsafe { sa_measure_len(m, &mut len) }, SaStatus::Ok);
    assert_eq!(len, 2);
    let (mut loc, mut w) = ([0.0; 2], [0.0; 2]);
    assert_eq!(unsafe { sa_measure_atoms(m, loc.as_mut_ptr(), w.as_mut_ptr(), 2) }, SaStatus::Ok);
    assert_eq!(loc, [1.0, 3.0]);
    assert!((w[0] - 0.36).abs() < 1e-12 && (w[1] - 0.64).abs() < 1e-12);
    let mut s = 0.0;
    assert_eq!(unsafe { sa_measure_modulus(m, 0.5, &mut s) }, SaStatus::Ok);
    assert!((s - 0.64).abs() < 1e-12);
    assert_eq!(unsafe { sa_measure_modulus(m, -1.0, &mut s) }, SaStatus::InvalidArgument);
    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { sa_spectral_measure(op, phi.as_ptr(), ptr::null(), 3, &mut bad) }, SaStatus::DimensionMismatch);
    unsafe {
        sa_measure_free(m);
        sa_operator_free(op);
    }
}

#[test]
fn scalar_average_spreads_mass_over_the_support() {
    // A = 0, B = 1, h uniform on [0, 1]: ν is uniform on [0, 1]
    let a = operator(1, &[0.0], None);
    let b = operator(1, &[1.0], None);
    let mut pair = ptr::null_mut();
    assert_eq!(unsafe { sa_pair_new(a, b, &mut pair) }, SaStatus::Ok);
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { sa_profile_uniform(0.0, 1.0, &mut h) }, SaStatus::Ok);
    let (mut nu, mut defect) = (ptr::null_mut(), f64::NAN);
    let status = unsafe { sa_average(pair, [1.0].as_ptr(), ptr::null(), 1, h, 2000, &mut nu, &mut defect) };
    assert_eq!(status, SaStatus::Ok, "{}", last_error());
    assert!(defect < 1e-12);
    let (mut mass, mut s) = (0.0, 0.0);
    unsafe {
        sa_measure_total_mass(nu, &mut mass);
        sa_measure_modulus(nu, 0.1, &mut s);
    }
    assert!((mass - 1.0).abs() < 1e-9);
    assert!((s - 0.1).abs() < 2e-3);
    unsafe {
        sa_measure_free(nu);
        sa_profile_free(h);
        sa_pair_free(pair);
        sa_operator_free(a);
        sa_operator_free(b);
    }
}

#[test]
fn pair_rejects_indefinite_b_and_reports_cyclicity() {
    let a = operator(2, &[1.0, 0.0, 0.0, 2.0], None);
    let neg = operator(2, &[-1.0, 0.0, 0.0, 0.0], None);
    let mut pair = ptr::null_mut();
    assert_eq!(unsafe { sa_pair_new(a, neg, &mut pair) }, SaStatus::NotPositiveSemidefinite);
    let b = operator(2, &[0.5, 0.5, 0.5, 0.5], None);
    assert_eq!(unsafe { sa_pair_new(a, b, &mut pair) }, SaStatus::Ok);
    let mut rank = 0;
    assert_eq!(unsafe { sa_pair_cyclicity_rank(pair, &mut rank) }, SaStatus::Ok);
    assert_eq!(rank, 2);
    let mut defect = 0.0;
    assert_eq!(unsafe { sa_pair_range_defect(pair, [1.0, 0.0].as_ptr(), ptr::null(), 2, &mut defect) }, SaStatus::Ok);
    assert!((defect - 0.5f64.sqrt()).abs() < 1e-12);
    unsafe {
        sa_pair_free(pair);
        for op in [a, neg, b] {
            sa_operator_free(op);
        }
    }
}

#[test]
fn ids_mass_is_the_cell_size_and_seed_stable() {
    let mut law = ptr::null_mut();
    assert_eq!(unsafe { sa_profile_uniform(0.0, 1.0, &mut law) }, SaStatus::Ok);
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { sa_model_new_density(4, 4, ptr::null(), law, &mut model) }, SaStatus::Ok);
    let run = |seed| {
        let mut ids = ptr::null_mut();
        assert_eq!(unsafe { sa_ids_monte_carlo(model, 10, seed, 40, &mut ids) }, SaStatus::Ok);
        let mut count = 0;
        assert_eq!(unsafe { sa_ids_grid(ids, ptr::null_mut(), ptr::null_mut(), &mut count) }, SaStatus::Ok);
        let mut masses = vec![0.0; count];
        let mut err = vec![0.0; count];
        assert_eq!(unsafe { sa_ids_masses(ids, masses.as_mut_ptr(), err.as_mut_ptr(), count) }, SaStatus::Ok);
        unsafe { sa_ids_free(ids) };
        masses
    };
    let m = run(7);
    assert_eq!(m.len(), 40);
    assert!((m.iter().sum::<f64>() - 4.0).abs() < 1e-10);
    assert_eq!(m, run(7));
    assert_ne!(m, run(8));
    unsafe {
        sa_model_free(model);
        sa_profile_free(law);
    }
}

#[test]
fn discrete_law_enumeration() {
    let mut model = ptr::null_mut();
    let status = unsafe { sa_model_new_discrete(2, 3, ptr::null(), [0.0, 1.0].as_ptr(), [0.5, 0.5].as_ptr(), 2, &mut model) };
    assert_eq!(status, SaStatus::Ok, "{}", last_error());
    let mut ids = ptr::null_mut();
    assert_eq!(unsafe { sa_ids_enumerate(model, 30, &mut ids) }, SaStatus::Ok);
    let (mut origin, mut width, mut count) = (0.0, 0.0, 0);
    unsafe { sa_ids_grid(ids, &mut origin, &mut width, &mut count) };
    assert_eq!(count, 30);
    assert!(width > 0.0);
    let mut masses = vec![0.0; count];
    assert_eq!(unsafe { sa_ids_masses(ids, masses.as_mut_ptr(), ptr::null_mut(), count) }, SaStatus::Ok);
    assert!((masses.iter().sum::<f64>() - 3.0).abs() < 1e-10);
    let mut bad = ptr::null_mut();
    let status = unsafe { sa_model_new_discrete(2, 3, ptr::null(), [0.0, 1.0].as_ptr(), [0.5, 0.6].as_ptr(), 2, &mut bad) };
    assert_eq!(status, SaStatus::InvalidArgument);
    unsafe {
        sa_ids_free(ids);
        sa_model_free(model);
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/specavg.h")).unwrap();
    let source = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exported: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exported.len() > 20);
    for name in exported {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("SA_STATUS_OK = 0"));
}
