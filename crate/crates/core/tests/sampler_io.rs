use std::fs;

use rt_core::rotation::RotationParams;
use rt_core::sampler::{
    evaluate_node, sample, write_csv, write_obj, GridSpec, NodeRejection, SampleThresholds, SurfaceSource, CSV_HEADER,
};
use rt_core::{ComplexScalar, GeneratorPair};

fn grid(lo: f64, hi: f64, n: usize) -> GridSpec {
    GridSpec { u1_min: lo, u1_max: hi, u2_min: lo, u2_max: hi, n1: n, n2: n }
}

fn pair(f: &str, g: &str) -> SurfaceSource {
    SurfaceSource::Generators(GeneratorPair::parse(f, g).unwrap())
}

#[test]
fn sphere_patch_loads_in_an_obj_reader() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sphere.obj");
    let s = sample(&pair("0", "z"), &grid(-1.0, 1.0, 33), &SampleThresholds::default()).unwrap();
    write_obj(&s.mesh, &path).unwrap();

    let text = fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    let (models, _) = tobj::load_obj(&path, &tobj::LoadOptions { triangulate: false, ..Default::default() }).unwrap();
    assert_eq!(models.len(), 1);
    let mesh = &models[0].mesh;
    assert_eq!(mesh.positions.len(), 3 * 1089);
    assert_eq!(mesh.normals.len(), 3 * 1089);
    assert_eq!(mesh.indices.len(), 3 * 2 * 32 * 32);
    for p in mesh.positions.chunks(3) {
        let r = (p[0] as f64).hypot(p[1] as f64).hypot(p[2] as f64);
        assert!((r - 1.0).abs() < 1e-6);
    }
}

#[test]
fn csv_has_one_row_per_valid_node() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("surf.csv");
    let s = sample(&pair("z", "z^2"), &grid(-0.4, 0.4, 33), &SampleThresholds::default()).unwrap();
    write_csv(&s.rows, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), s.mesh.valid_count());
    assert!(s.mesh.valid_count() < 33 * 33);
    for row in rows {
        let fields: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(fields.len(), 12);
        assert!(fields.iter().all(|v| v.is_finite()));
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let src = SurfaceSource::Rotation(RotationParams::new(0.5, 0.7));
    let g = GridSpec { u1_min: -2.0, u1_max: 2.0, u2_min: 0.0, u2_max: 6.0, n1: 41, n2: 25 };
    let mut outputs = Vec::new();
    for run in 0..2 {
        let s = sample(&src, &g, &SampleThresholds::default()).unwrap();
        let (obj, csv) = (dir.path().join(format!("{run}.obj")), dir.path().join(format!("{run}.csv")));
        write_obj(&s.mesh, &obj).unwrap();
        write_csv(&s.rows, &csv).unwrap();
        outputs.push((fs::read(obj).unwrap(), fs::read(csv).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn masked_nodes_fail_when_evaluated() {
    let th = SampleThresholds::default();
    let gen = GeneratorPair::parse("z", "z^2").unwrap();
    let g = grid(-0.4, 0.4, 9);
    let s = sample(&SurfaceSource::Generators(gen.clone()), &g, &th).unwrap();
    for i in 0..g.n1 {
        for j in 0..g.n2 {
            let k = g.index(i, j);
            let node = evaluate_node(&gen, ComplexScalar::new(g.u1(i), g.u2(j)), &th);
            assert_eq!(node.is_err(), !s.mesh.valid_mask[k]);
            if let Err(e) = node {
                let sound = match &e {
                    NodeRejection::BelowRegularity(_) => true,
                    NodeRejection::Core(c) => c.is_degenerate(),
                };
                assert!(sound, "{e}");
            }
        }
    }
}

#[test]
fn faces_reference_valid_nodes_with_unit_normals() {
    let s = sample(&pair("z", "z^2"), &grid(-0.4, 0.4, 33), &SampleThresholds::default()).unwrap();
    for f in &s.mesh.faces {
        for &k in f {
            assert!(s.mesh.valid_mask[k]);
            assert!((s.mesh.normals[k].norm() - 1.0).abs() < 1e-14);
        }
    }
}
