use serde::Serialize;
use serde_json::json;
use vqb_core::circuit::{run_broadcast_circuit_with, run_choi_circuit_with, CircuitConfig};
use vqb_core::maps::{b_canonical, Channel, Classification};
use vqb_core::matcore::eigvalsh;
use vqb_core::pdm::{marginal_deviation, pdm_closed_form, pdm_from_definition};
use vqb_core::sampler::{self, SamplerConfig};
use vqb_core::vqb::{assemble_virtual, mitigation_sweep, scan_argmin, theta_scan, uniform_grid};
use vqb_core::{Complex64, ComplexMatrix, DensityMatrix};

use crate::args::{BroadcastArgs, ChannelName, ChoiArgs, Command, Format, MitigateArgs, PdmArgs, SampleArgs, ScanArgs};
use crate::error::{CliError, CliResult};
use crate::output::{csv_line, fmt_num, Matrix, Num, NumList, RunOutput};
use crate::state_spec::StateSpec;

pub fn dispatch(command: Command) -> CliResult<()> {
    let dir = match command {
        Command::Broadcast(a) => broadcast(a)?,
        Command::ScanTheta(a) => scan_theta(a)?,
        Command::Choi(a) => choi(a)?,
        Command::Mitigate(a) => mitigate(a)?,
        Command::Pdm(a) => pdm(a)?,
        Command::Sample(a) => sample(a)?,
    };
    eprintln!("wrote {}", dir.display());
    Ok(())
}

#[derive(Serialize)]
struct Spectral<'a> {
    matrix: Matrix<'a>,
    trace: Num,
    eigenvalues: NumList<'a>,
}

fn spectral<'a>(m: &'a ComplexMatrix, eigenvalues: &'a [f64]) -> Spectral<'a> {
    Spectral { matrix: Matrix(m), trace: Num(m.trace().re), eigenvalues: NumList(eigenvalues) }
}

fn eig(m: &ComplexMatrix) -> CliResult<Vec<f64>> {
    Ok(eigvalsh(m)?)
}

fn matrix_rows(name: &str, m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for (i, row) in m.to_rows().iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            out += &csv_line(&[name.into(), i.to_string(), j.to_string(), fmt_num(z.re), fmt_num(z.im)]);
        }
    }
    out
}

fn broadcast(a: BroadcastArgs) -> CliResult<std::path::PathBuf> {
    let rho = StateSpec::parse(&a.state)?.resolve(a.d)?;
    let d = rho.dim();
    let config = CircuitConfig { theta: a.theta, noise: a.noise };
    let run = run_broadcast_circuit_with(&rho, config)?;
    let df = d as f64;
    let weighted_plus = run.state0.mat().scale_re(df * run.p0);
    let weighted_minus = run.state1.mat().scale_re(df * run.p1);
    let assembled = assemble_virtual(run.p0, &run.state0, run.p1, &run.state1, d)?;
    let marginal_a = assembled.mat().partial_trace(assembled.dims(), &[0])?;
    let marginal_b = assembled.mat().partial_trace(assembled.dims(), &[1])?;
    let deviation = assembled.mat().max_abs_diff(b_canonical(&rho)?.mat());
    let eig_plus = eig(&weighted_plus)?;
    let eig_minus = eig(&weighted_minus)?;
    let eig_b = assembled.eigenvalues();

    let mut out = RunOutput::create(a.out.out)?;
    match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Payload<'a> {
                d: usize,
                theta: Num,
                noise: Num,
                p0: Num,
                p1: Num,
                input: Matrix<'a>,
                /// `d p0 B+(rho)`
                weighted_plus: Spectral<'a>,
                /// `d p1 B-(rho)`
                weighted_minus: Spectral<'a>,
                broadcast: Spectral<'a>,
                marginal_a: Matrix<'a>,
                marginal_b: Matrix<'a>,
                max_deviation_from_exact: Num,
            }
            out.write_json(
                "broadcast.json",
                &Payload {
                    d,
                    theta: Num(a.theta),
                    noise: Num(a.noise),
                    p0: Num(run.p0),
                    p1: Num(run.p1),
                    input: Matrix(rho.mat()),
                    weighted_plus: spectral(&weighted_plus, &eig_plus),
                    weighted_minus: spectral(&weighted_minus, &eig_minus),
                    broadcast: spectral(assembled.mat(), &eig_b),
                    marginal_a: Matrix(&marginal_a),
                    marginal_b: Matrix(&marginal_b),
                    max_deviation_from_exact: Num(deviation),
                },
            )?;
        }
        Format::Csv => {
            let mut entries = csv_line(&["object,row,col,re,im".into()]);
            entries += &matrix_rows("input", rho.mat());
            entries += &matrix_rows("weighted_plus", &weighted_plus);
            entries += &matrix_rows("weighted_minus", &weighted_minus);
            entries += &matrix_rows("broadcast", assembled.mat());
            entries += &matrix_rows("marginal_a", &marginal_a);
            entries += &matrix_rows("marginal_b", &marginal_b);
            out.write("broadcast.csv", &entries)?;

            let mut scalars = csv_line(&["name,index,value".into()]);
            for (name, x) in [("p0", run.p0), ("p1", run.p1), ("max_deviation_from_exact", deviation)] {
                scalars += &csv_line(&[name.into(), "0".into(), fmt_num(x)]);
            }
            for (name, values) in
                [("eig_weighted_plus", &eig_plus), ("eig_weighted_minus", &eig_minus), ("eig_broadcast", &eig_b)]
            {
                for (k, x) in values.iter().enumerate() {
                    scalars += &csv_line(&[name.into(), k.to_string(), fmt_num(*x)]);
                }
            }
            out.write("broadcast_scalars.csv", &scalars)?;
        }
    }
    let format = match a.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    out.finish(
        "broadcast",
        json!({ "state": a.state, "d": d, "theta": a.theta, "noise": a.noise, "format": format }),
        None,
    )
}

fn scan_theta(a: ScanArgs) -> CliResult<std::path::PathBuf> {
    let grid = uniform_grid(a.points as usize);
    let points = theta_scan(a.d, &grid)?;
    let best = scan_argmin(&points).ok_or_else(|| CliError::Contract("empty scan".into()))?;
    let mut csv = csv_line(&["theta,p0,distance".into()]);
    for p in &points {
        csv += &csv_line(&[fmt_num(p.theta), fmt_num(p.p0), fmt_num(p.distance)]);
    }
    let b = &points[best];
    csv += &format!(
        "# argmin index={best} theta={} p0={} distance={}\n",
        fmt_num(b.theta),
        fmt_num(b.p0),
        fmt_num(b.distance)
    );
    let mut out = RunOutput::create(a.out.out)?;
    out.write("scan.csv", &csv)?;
    out.finish("scan-theta", json!({ "d": a.d, "points": a.points }), None)
}

#[derive(Serialize)]
struct ChoiEntry<'a> {
    #[serde(flatten)]
    spectral: Spectral<'a>,
    min_eigenvalue: Num,
    is_cp: bool,
    is_tp: bool,
    is_hp: bool,
}

fn choi_entry<'a>(m: &'a ComplexMatrix, eigenvalues: &'a [f64], class: &Classification) -> ChoiEntry<'a> {
    ChoiEntry {
        spectral: spectral(m, eigenvalues),
        min_eigenvalue: Num(eigenvalues[0]),
        is_cp: class.is_cp,
        is_tp: class.is_tp,
        is_hp: class.is_hp,
    }
}

fn classify_choi(choi: &ComplexMatrix, d: usize, label: &str) -> Classification {
    Channel { choi: choi.clone(), d_in: d, d_out: d * d, label: label.into() }.classify()
}

fn choi(a: ChoiArgs) -> CliResult<std::path::PathBuf> {
    let d = a.d;
    let run = run_choi_circuit_with(d, CircuitConfig::default())?;
    let assembled = assemble_virtual(run.p0, &run.choi0, run.p1, &run.choi1, d)?;
    let analytic = Channel::broadcast(d)?;
    let deviation = assembled.mat().max_abs_diff(&analytic.choi);
    let (eig_plus, eig_minus, eig_b) = (run.choi0.eigenvalues(), run.choi1.eigenvalues(), assembled.eigenvalues());

    #[derive(Serialize)]
    struct Payload<'a> {
        d: usize,
        /// Subsystem order of every matrix below.
        order: [&'static str; 3],
        p0: Num,
        p1: Num,
        cloner: ChoiEntry<'a>,
        antisymmetrizer: ChoiEntry<'a>,
        broadcast: ChoiEntry<'a>,
        /// Max entrywise gap between `d (p0 C+ - p1 C-)` and the analytic broadcast Choi matrix.
        assembly_deviation: Num,
    }
    let mut out = RunOutput::create(a.out.out)?;
    out.write_json(
        "choi.json",
        &Payload {
            d,
            order: ["ref", "A", "B"],
            p0: Num(run.p0),
            p1: Num(run.p1),
            cloner: choi_entry(run.choi0.mat(), &eig_plus, &classify_choi(run.choi0.mat(), d, "cloner")),
            antisymmetrizer: choi_entry(run.choi1.mat(), &eig_minus, &classify_choi(run.choi1.mat(), d, "antisymmetrizer")),
            broadcast: choi_entry(assembled.mat(), &eig_b, &classify_choi(assembled.mat(), d, "broadcast")),
            assembly_deviation: Num(deviation),
        },
    )?;
    out.finish("choi", json!({ "d": d }), None)
}

fn mitigate(a: MitigateArgs) -> CliResult<std::path::PathBuf> {
    let rows = mitigation_sweep(a.family, a.steps as usize, a.noise)?;
    let mut csv = csv_line(&[[
        "family,parameter",
        "input_x,input_y,input_z",
        "cloner_x,cloner_y,cloner_z",
        "mitigated_x,mitigated_y,mitigated_z",
        "fidelity_cloner,fidelity_mitigated",
    ]
    .join(",")]);
    for r in &rows {
        let mut fields = vec![r.input_label.clone(), fmt_num(r.parameter)];
        for v in [r.pauli_exp_input, r.pauli_exp_cloner, r.pauli_exp_mitigated] {
            fields.extend(v.iter().map(|&x| fmt_num(x)));
        }
        fields.push(fmt_num(r.fidelity_cloner));
        fields.push(fmt_num(r.fidelity_mitigated));
        csv += &csv_line(&fields);
    }
    let mut out = RunOutput::create(a.out.out)?;
    out.write("mitigate.csv", &csv)?;
    out.finish("mitigate", json!({ "family": a.family.name(), "steps": a.steps, "noise": a.noise }), None)
}

fn named_channel(name: ChannelName, d: usize) -> CliResult<Channel> {
    let qubit_gate = |entries: [f64; 8], label: &str| -> CliResult<Channel> {
        if d != 2 {
            return Err(CliError::Usage(format!("channel {label} is defined for qubits only")));
        }
        let z: Vec<Complex64> = entries.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        Ok(Channel::unitary(&ComplexMatrix::from_row_slice(2, &z)?, label)?)
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match name {
        ChannelName::Identity => Ok(Channel::identity(d)?),
        ChannelName::Depolarizing => Ok(Channel::completely_depolarizing(d)?),
        ChannelName::Dephasing => Ok(Channel::completely_dephasing(d)?),
        ChannelName::Hadamard => qubit_gate([h, 0.0, h, 0.0, h, 0.0, -h, 0.0], "hadamard"),
        ChannelName::X => qubit_gate([0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0], "x"),
        ChannelName::Y => qubit_gate([0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0, 0.0], "y"),
        ChannelName::Z => qubit_gate([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0], "z"),
    }
}

fn pdm(a: PdmArgs) -> CliResult<std::path::PathBuf> {
    let rho = StateSpec::parse(&a.state)?.resolve(a.d)?;
    let d = rho.dim();
    let channel = named_channel(a.channel, d)?;
    let closed = pdm_closed_form(&rho, &channel)?;
    let eigenvalues = closed.op.eigenvalues();
    let definition = if d.is_power_of_two() {
        Some(pdm_from_definition(&rho, &channel, d.trailing_zeros() as usize)?)
    } else {
        None
    };

    #[derive(Serialize)]
    struct DefinitionRoute<'a> {
        matrix: Matrix<'a>,
        max_deviation_from_closed_form: Num,
    }
    #[derive(Serialize)]
    struct Payload<'a> {
        d: usize,
        channel: &'a str,
        input: Matrix<'a>,
        closed_form: Spectral<'a>,
        negativity: Num,
        /// Largest gap between the PDM marginals and `rho`, `N(rho)`.
        marginal_deviation: Num,
        definition: Option<DefinitionRoute<'a>>,
    }
    let mut out = RunOutput::create(a.out.out)?;
    out.write_json(
        "pdm.json",
        &Payload {
            d,
            channel: &channel.label,
            input: Matrix(rho.mat()),
            closed_form: spectral(closed.op.mat(), &eigenvalues),
            negativity: Num(closed.negativity()),
            marginal_deviation: Num(marginal_deviation(&closed, &channel)?),
            definition: definition.as_ref().map(|p| DefinitionRoute {
                matrix: Matrix(p.op.mat()),
                max_deviation_from_closed_form: Num(p.op.mat().max_abs_diff(closed.op.mat())),
            }),
        },
    )?;
    out.finish("pdm", json!({ "state": a.state, "d": d, "channel": channel.label }), None)
}

fn sample(a: SampleArgs) -> CliResult<std::path::PathBuf> {
    let rho: DensityMatrix = StateSpec::parse(&a.state)?.resolve(None)?;
    if rho.dim() != 2 {
        return Err(CliError::Validation(format!("sampling needs a qubit state, got dimension {}", rho.dim())));
    }
    let mut cfg = SamplerConfig::new(rho, a.obs_a, a.obs_b, a.shots, a.seed);
    cfg.stream = a.stream;
    let r = if a.workers == 1 { sampler::run(&cfg)? } else { sampler::run_parallel(&cfg, a.workers as usize)? };

    #[derive(Serialize)]
    struct Payload {
        observable_a: String,
        observable_b: String,
        shots: u64,
        seed: u64,
        stream: u64,
        workers: u32,
        estimate: Num,
        std_error: Num,
        exact_value: Num,
        overhead: Num,
    }
    let mut out = RunOutput::create(a.out.out)?;
    out.write_json(
        "sample.json",
        &Payload {
            observable_a: a.obs_a.label().to_string(),
            observable_b: a.obs_b.label().to_string(),
            shots: r.shots_used,
            seed: a.seed,
            stream: a.stream,
            workers: a.workers,
            estimate: Num(r.estimate),
            std_error: Num(r.std_error),
            exact_value: Num(r.exact_value),
            overhead: Num(sampler::overhead(2)?),
        },
    )?;
    out.finish(
        "sample",
        json!({
            "state": a.state,
            "obs_a": a.obs_a.label(),
            "obs_b": a.obs_b.label(),
            "shots": a.shots,
            "stream": a.stream,
            "workers": a.workers,
        }),
        Some(a.seed),
    )
}
