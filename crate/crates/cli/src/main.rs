mod args;

use std::fmt::Display;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{
    grid_spec, Axis, Cli, Command, GenerateArgs, OutputArgs, PairArgs, RotationArgs, SingularArgs, ThresholdArgs,
    VerifyArgs,
};
use rt_core::fd::fd_forms;
use rt_core::forms::rel_dev_slice;
use rt_core::oracle::{compare, GeneratorImmersion};
use rt_core::rotation::{singular_u1, RotationParams, EQUIVALENCE_TOL};
use rt_core::sampler::{sample, write_csv, write_obj, NodeRejection, Sample, SampleThresholds, SurfaceSource};
use rt_core::weierstrass::CoreError;
use rt_core::{GeneratorPair, Thresholds};

const ROTATION_U2_NODES: usize = 64;

/// Failure of a command: `Usage` maps to exit code 1, `Verification` to 2.
enum Failure {
    Usage(String),
    Verification,
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Rotation(a) => rotation(a),
        Command::Singular(a) => singular(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(2),
    }
}

fn thresholds(t: &ThresholdArgs) -> SampleThresholds {
    SampleThresholds {
        core: Thresholds {
            eps_g: t.eps_g,
            eps_det: t.eps_det,
            tol_det_v: t.tol_det,
            tol_position: t.tol_dual,
            tol_forms: t.tol_forms,
            tol_regularity: t.tol_regularity,
        },
        min_regularity: t.min_regularity,
    }
}

fn generator_pair(p: &PairArgs) -> Result<GeneratorPair, Failure> {
    GeneratorPair::parse(&p.f, &p.g).map_err(|e| usage(format!("in `{}` / `{}`: {e}", p.f, p.g)))
}

fn write_outputs(s: &Sample, out: &OutputArgs) -> Result<(), Failure> {
    write_obj(&s.mesh, &out.out).map_err(|e| usage(format!("{}: {e}", out.out.display())))?;
    if let Some(csv) = &out.csv {
        write_csv(&s.rows, csv).map_err(|e| usage(format!("{}: {e}", csv.display())))?;
    }
    println!("nodes={}", s.mesh.valid_mask.len());
    println!("valid={}", s.mesh.valid_count());
    println!("faces={}", s.mesh.faces.len());
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<(), Failure> {
    let gen = generator_pair(&a.pair)?;
    let s = sample(&SurfaceSource::Generators(gen), &a.grid.spec(), &thresholds(&a.thresholds)).map_err(usage)?;
    write_outputs(&s, &a.output)
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let gen = generator_pair(&a.pair)?;
    let th = thresholds(&a.thresholds);
    let s = sample(&SurfaceSource::Generators(gen.clone()), &a.grid.spec(), &th).map_err(usage)?;
    let immersion = GeneratorImmersion { gen: &gen, eps_g: th.core.eps_g };

    let mut inconsistent = 0;
    let mut oracle_unavailable = 0;
    let (mut max_residual, mut max_abs_residual, mut max_oracle, mut max_dual) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for node in &s.nodes {
        match node {
            Ok(jet) => {
                max_residual = max_residual.max(jet.normalized_residual());
                max_abs_residual = max_abs_residual.max(jet.residual.abs());
                max_dual = max_dual.max(jet.checks.position);
                match fd_forms(&immersion, (jet.z.re, jet.z.im), a.step) {
                    Ok(report) => max_oracle = max_oracle.max(compare(jet, &report).max()),
                    Err(_) => oracle_unavailable += 1,
                }
            }
            Err(NodeRejection::Core(CoreError::Consistency { .. } | CoreError::Eval(_))) => inconsistent += 1,
            Err(_) => {}
        }
    }
    let pass = inconsistent == 0
        && max_residual <= a.tol_residual
        && max_oracle <= a.tol_oracle
        && max_dual <= th.core.tol_position;

    println!("nodes={}", s.nodes.len());
    println!("valid={}", s.mesh.valid_count());
    println!("inconsistent={inconsistent}");
    println!("oracle_unavailable={oracle_unavailable}");
    println!("max_residual={max_residual:e}");
    println!("max_abs_residual={max_abs_residual:e}");
    println!("max_oracle_dev={max_oracle:e}");
    println!("max_dual_dev={max_dual:e}");
    println!("tol_residual={:e}", a.tol_residual);
    println!("tol_oracle={:e}", a.tol_oracle);
    println!("tol_dual={:e}", th.core.tol_position);
    println!("status={}", if pass { "pass" } else { "fail" });
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn rotation(a: RotationArgs) -> Result<(), Failure> {
    let p = RotationParams::new(a.a, a.b);
    let tau = std::f64::consts::TAU;
    let n = ROTATION_U2_NODES;
    let u2 = a.u2.unwrap_or(Axis { lo: 0.0, hi: tau * (n - 1) as f64 / n as f64, count: n });
    let s = sample(&SurfaceSource::Rotation(p), &grid_spec(a.u1, u2), &thresholds(&a.thresholds)).map_err(usage)?;
    write_outputs(&s, &a.output)?;

    let valid = s.nodes.iter().filter_map(|n| n.as_ref().ok());
    let max_dev =
        valid.zip(&s.rows).map(|(jet, row)| rel_dev_slice(jet.x.as_slice(), row.x.as_slice())).fold(0.0, f64::max);
    println!("max_equivalence_dev={max_dev:e}");
    println!("tol_equivalence={EQUIVALENCE_TOL:e}");
    if max_dev <= EQUIVALENCE_TOL {
        println!("status=pass");
        Ok(())
    } else {
        println!("status=fail");
        Err(Failure::Verification)
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), |x| format!("{x:.15e}"))
}

fn singular(a: SingularArgs) -> Result<(), Failure> {
    let set = singular_u1(RotationParams::new(a.a, a.b), a.range);
    println!("a={}", a.a);
    println!("b={}", a.b);
    println!("range={}:{}", a.range.0, a.range.1);
    println!("root_count={}", set.roots.len());
    for (k, r) in set.roots.iter().enumerate() {
        println!("root.{k}.u1={:.15e}", r.u1);
        println!("root.{k}.area_element={:e}", r.residual);
        println!("root.{k}.interval={:e}", r.interval);
        println!("root.{k}.certified={}", r.certified);
    }
    for (k, c) in set.candidates.iter().enumerate() {
        println!("candidate.{k}.case={}", c.case);
        println!("candidate.{k}.formula={}", c.formula);
        println!("candidate.{k}.applies={}", c.applies);
        println!("candidate.{k}.u1={}", opt(c.u1));
        println!("candidate.{k}.nearest_root={}", opt(c.nearest_root));
        println!("candidate.{k}.agrees={}", c.agrees);
        println!("candidate.{k}.printed_area_element={}", opt(c.printed_area));
        println!("candidate.{k}.numeric_area_element={}", opt(c.numeric_area));
    }
    Ok(())
}
