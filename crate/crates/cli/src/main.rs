//! Command-line front end: builds one of the packaged states (or a custom
//! state file), sweeps it over the figure grid and writes a deterministic
//! raster image plus an optional scene JSON.

mod custom;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use wigviz::engine::entanglement_entropy;
use wigviz::scene::{
    build_scene, export_scene, render, FigureRecipe, GridSpec, OpacityMode, OrthoCamera,
};
use wigviz::states::{
    build_helium, build_jm_state, build_pi_bond, build_reference_spin_state, spin_orbital,
    slater_determinant, HeliumState, OrbitalLabel, PiBondKind, ReferencePanel, SpinState,
    StateVector,
};

/// Flag errors exit with 2, computation and I/O failures with 1.
enum CliError {
    Usage(String),
    Run(wigviz::Error),
}

impl From<wigviz::Error> for CliError {
    fn from(e: wigviz::Error) -> Self {
        CliError::Run(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Parser)]
#[command(
    name = "wigviz",
    about = "Sphere-glyph visualizations of spin-resolved phase-space functions for model atoms",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single-sphere reference spin states (panels a-h)
    Reference {
        /// Panel label: a..h
        #[arg(long)]
        panel: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// One-electron states: plain orbitals or spin-orbit coupled |j,m>
    Hydrogen {
        /// Orbital label: 1S, 2S, 2Px, 2Py, 2Pz, 3Dxz, 3Dyz, 3Dz2
        #[arg(long, conflicts_with = "jm")]
        orbital: Option<String>,
        /// Spin for --orbital: up or down
        #[arg(long, default_value = "up")]
        spin: String,
        /// Spin-orbit eigenstate, e.g. --jm 5/2 1/2
        #[arg(long, num_args = 2, value_names = ["J", "M"])]
        jm: Option<Vec<String>>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Two-electron states: ground, singlet1, triplet_m1, triplet_m0, triplet_m-1
    Helium {
        #[arg(long)]
        state: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// The three-electron determinant, sliced four ways (a-d)
    Lithium {
        /// Slice label: a (all spins), b (spin 1), c (spins 1,2; constant
        /// opacity), d (spins 2,3; constant opacity)
        #[arg(long)]
        slice: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// LCAO pi-bond pseudo-molecules
    Molecule {
        /// single or double
        #[arg(long)]
        bond: String,
        /// Lobe displacement parameter d (> 0); lobe centers sit at x = +/- d
        #[arg(long)]
        separation: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate a user-supplied state file under a custom reduction plan
    Custom {
        /// JSON state file (see README for the schema)
        #[arg(long)]
        state_file: PathBuf,
        /// Comma-separated per-factor directives, e.g. "m,m,m,e"
        /// (t=trace, m=grid marginal, pm:<q>, mm:<p>, f:<q>:<p>,
        /// e / e:<group>=equal angle, a:<theta>:<phi>)
        #[arg(long)]
        plan: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Grid points per axis
    #[arg(long, default_value_t = 61)]
    grid: usize,
    /// Half-width of the grid: points cover [-extent, extent]^2 in xz
    #[arg(long, default_value_t = 4.5)]
    extent: f64,
    /// Sphere texture resolution, THETAxPHI
    #[arg(long, default_value = "24x12")]
    sphere_samples: String,
    /// marginal (opacity follows the position density) or constant
    #[arg(long, default_value = "marginal")]
    opacity_mode: String,
    /// Glyphs with opacity below this are dropped
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    /// Output image path (.ppm always available, .png optional); defaults to
    /// <command>.ppm under $WIGVIZ_OUTPUT_DIR or the working directory
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also export the scene as JSON
    #[arg(long)]
    scene_out: Option<PathBuf>,
    /// Draw conditional Bloch arrows on the glyphs
    #[arg(long)]
    arrows: bool,
    /// Worker threads for the grid sweep (output is identical for any count)
    #[arg(long)]
    threads: Option<usize>,
    /// Canvas size, WIDTHxHEIGHT
    #[arg(long, default_value = "768x768")]
    canvas: String,
}

fn parse_pair(text: &str, flag: &str) -> CliResult<(usize, usize)> {
    let mut parts = text.split('x');
    let a = parts.next().and_then(|s| s.parse().ok());
    let b = parts.next().and_then(|s| s.parse().ok());
    match (a, b, parts.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(usage(format!("{flag} expects WIDTHxHEIGHT, got `{text}`"))),
    }
}

/// Fractions like "5/2" or decimals like "2.5", returned doubled.
fn parse_half_integer(text: &str, flag: &str) -> CliResult<i32> {
    if let Some((num, den)) = text.split_once('/') {
        let num: i32 = num
            .trim()
            .parse()
            .map_err(|_| usage(format!("{flag}: bad fraction `{text}`")))?;
        let den: i32 = den
            .trim()
            .parse()
            .map_err(|_| usage(format!("{flag}: bad fraction `{text}`")))?;
        if den != 2 {
            return Err(usage(format!("{flag}: denominator must be 2 in `{text}`")));
        }
        Ok(num)
    } else {
        let value: f64 = text
            .parse()
            .map_err(|_| usage(format!("{flag}: bad half-integer `{text}`")))?;
        let doubled = 2.0 * value;
        if (doubled - doubled.round()).abs() > 1e-9 {
            return Err(usage(format!("{flag}: `{text}` is not a half-integer")));
        }
        Ok(doubled.round() as i32)
    }
}

impl CommonArgs {
    fn validate(&self) -> CliResult<()> {
        if self.grid < 2 {
            return Err(usage(format!("--grid must be at least 2, got {}", self.grid)));
        }
        if !self.extent.is_finite() || self.extent <= 0.0 {
            return Err(usage(format!("--extent must be positive, got {}", self.extent)));
        }
        if !(0.0..1.0).contains(&self.threshold) {
            return Err(usage(format!(
                "--threshold must be in [0, 1), got {}",
                self.threshold
            )));
        }
        let (t, p) = parse_pair(&self.sphere_samples, "--sphere-samples")?;
        if t < 2 || p < 2 {
            return Err(usage(format!(
                "--sphere-samples needs at least 2x2, got {t}x{p}"
            )));
        }
        let (w, h) = parse_pair(&self.canvas, "--canvas")?;
        if w < 64 || h < 64 {
            return Err(usage(format!("--canvas must be at least 64x64, got {w}x{h}")));
        }
        match self.opacity_mode.as_str() {
            "marginal" | "constant" => {}
            other => {
                return Err(usage(format!(
                    "--opacity-mode must be `marginal` or `constant`, got `{other}`"
                )))
            }
        }
        if let Some(threads) = self.threads {
            if threads == 0 {
                return Err(usage("--threads must be positive".to_string()));
            }
        }
        Ok(())
    }

    fn opacity(&self) -> OpacityMode {
        match self.opacity_mode.as_str() {
            "constant" => OpacityMode::Constant,
            _ => OpacityMode::Marginal,
        }
    }

    fn apply_to(&self, recipe: &mut FigureRecipe) -> CliResult<()> {
        recipe.grid = GridSpec { count: self.grid, extent: self.extent };
        recipe.sphere_samples = parse_pair(&self.sphere_samples, "--sphere-samples")?;
        recipe.threshold = self.threshold;
        recipe.arrows = self.arrows;
        Ok(())
    }

    fn output_path(&self, default_stem: &str) -> PathBuf {
        self.output.clone().unwrap_or_else(|| {
            let dir = std::env::var_os("WIGVIZ_OUTPUT_DIR")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("."));
            dir.join(format!("{default_stem}.ppm"))
        })
    }

    fn camera(&self) -> CliResult<OrthoCamera> {
        let (w, h) = parse_pair(&self.canvas, "--canvas")?;
        Ok(OrthoCamera::with_canvas(w as u32, h as u32))
    }
}

/// Everything a run needs after flag validation.
struct Job {
    state: StateVector,
    recipe: FigureRecipe,
    stem: String,
    /// factor subset for the entropy line, with a label
    entropy_split: Option<(Vec<usize>, &'static str)>,
}

fn spin_from_flag(text: &str) -> CliResult<SpinState> {
    match text {
        "up" => Ok(SpinState::Up),
        "down" => Ok(SpinState::Down),
        other => Err(usage(format!("--spin must be `up` or `down`, got `{other}`"))),
    }
}

fn electron_factors(state: &StateVector, electron: u8) -> Vec<usize> {
    let sig = state.signature();
    let mut subset: Vec<usize> = sig.mode_indices(electron).map(|m| m.to_vec()).unwrap_or_default();
    if let Some(s) = sig.spin_index(electron) {
        subset.push(s);
    }
    subset
}

fn build_job(command: &Command) -> CliResult<Job> {
    match command {
        Command::Reference { panel, common } => {
            let panel: ReferencePanel = panel
                .parse()
                .map_err(|_| usage(format!("--panel must be one of a..h, got `{panel}`")))?;
            let state = build_reference_spin_state(panel)?;
            let rho = state.density();
            let spins: Vec<u8> = (0..state.signature().electron_count()).collect();
            let mut recipe = FigureRecipe::new(&rho, None, &spins)?;
            recipe.opacity = OpacityMode::Constant;
            common.apply_to(&mut recipe)?;
            let entropy_split = (state.signature().len() > 1).then(|| (vec![0], "spin 1 | rest"));
            Ok(Job { state, recipe, stem: format!("reference_{panel:?}").to_lowercase(), entropy_split })
        }
        Command::Hydrogen { orbital, spin, jm, common } => {
            let (state, stem) = match (orbital, jm) {
                (Some(orbital), None) => {
                    let label: OrbitalLabel = orbital.parse().map_err(|_| {
                        usage(format!("--orbital: unknown label `{orbital}`"))
                    })?;
                    let spin = spin_from_flag(spin)?;
                    let state = spin_orbital(label, spin)?;
                    (state, format!("hydrogen_{}_{}", orbital.to_lowercase(), self_spin(spin)))
                }
                (None, Some(jm)) => {
                    let two_j = parse_half_integer(&jm[0], "--jm")?;
                    let two_m = parse_half_integer(&jm[1], "--jm")?;
                    if two_j < 0 {
                        return Err(usage("--jm: j must be positive".to_string()));
                    }
                    let state = build_jm_state(two_j as u32, two_m).map_err(|e| match e {
                        wigviz::Error::OutOfRange { .. } => usage(format!("--jm: {e}")),
                        other => CliError::Run(other),
                    })?;
                    (state, format!("hydrogen_j{two_j}_2_m{two_m}_2"))
                }
                _ => {
                    return Err(usage(
                        "hydrogen needs exactly one of --orbital or --jm".to_string(),
                    ))
                }
            };
            let rho = state.density();
            let mut recipe = FigureRecipe::new(&rho, Some(0), &[0])?;
            recipe.opacity = common.opacity();
            common.apply_to(&mut recipe)?;
            let spin_factor = state.signature().spin_index(0).expect("one electron");
            Ok(Job {
                state,
                recipe,
                stem,
                entropy_split: Some((vec![spin_factor], "spin | space")),
            })
        }
        Command::Helium { state, common } => {
            let label: HeliumState = state
                .parse()
                .map_err(|_| usage(format!("--state: unknown helium state `{state}`")))?;
            let psi = build_helium(label)?;
            let rho = psi.density();
            let mut recipe = FigureRecipe::new(&rho, Some(0), &[0, 1])?;
            recipe.opacity = common.opacity();
            common.apply_to(&mut recipe)?;
            let split = electron_factors(&psi, 0);
            Ok(Job {
                state: psi,
                recipe,
                stem: format!("helium_{state}"),
                entropy_split: Some((split, "electron 1 | electron 2")),
            })
        }
        Command::Lithium { slice, common } => {
            let psi = slater_determinant(&[
                spin_orbital(OrbitalLabel::OneS, SpinState::Up)?,
                spin_orbital(OrbitalLabel::OneS, SpinState::Down)?,
                spin_orbital(OrbitalLabel::TwoS, SpinState::Up)?,
            ])?;
            let rho = psi.density();
            // the four packaged slices; spins are 1-based in the labels
            let (spins, constant): (&[u8], bool) = match slice.as_str() {
                "a" => (&[0, 1, 2], false),
                "b" => (&[0], false),
                "c" => (&[0, 1], true),
                "d" => (&[1, 2], true),
                other => {
                    return Err(usage(format!("--slice must be one of a..d, got `{other}`")))
                }
            };
            let mut recipe = FigureRecipe::new(&rho, Some(0), spins)?;
            recipe.opacity = if constant { OpacityMode::Constant } else { common.opacity() };
            common.apply_to(&mut recipe)?;
            let split = electron_factors(&psi, 0);
            Ok(Job {
                state: psi,
                recipe,
                stem: format!("lithium_{slice}"),
                entropy_split: Some((split, "electron 1 | electrons 2,3")),
            })
        }
        Command::Molecule { bond, separation, common } => {
            let kind: PiBondKind = bond
                .parse()
                .map_err(|_| usage(format!("--bond must be `single` or `double`, got `{bond}`")))?;
            if !separation.is_finite() || *separation <= 0.0 {
                return Err(usage(format!(
                    "--separation must be positive, got {separation}"
                )));
            }
            let psi = build_pi_bond(kind, *separation)?;
            let rho = psi.density();
            let (spins, split_label): (Vec<u8>, &'static str) = match kind {
                PiBondKind::Single => (vec![0], "spin | space"),
                PiBondKind::Double => (vec![0, 1], "electron 1 | electron 2"),
            };
            let mut recipe = FigureRecipe::new(&rho, Some(0), &spins)?;
            recipe.opacity = common.opacity();
            common.apply_to(&mut recipe)?;
            let split = match kind {
                PiBondKind::Single => vec![psi.signature().spin_index(0).expect("spin")],
                PiBondKind::Double => electron_factors(&psi, 0),
            };
            Ok(Job {
                state: psi,
                recipe,
                stem: format!("molecule_{bond}_d{separation}"),
                entropy_split: Some((split, split_label)),
            })
        }
        Command::Custom { state_file, plan, common } => {
            let state = custom::load_state(state_file)?;
            let recipe = custom::build_recipe(&state, plan, common.opacity())?;
            let mut recipe = recipe;
            common.apply_to(&mut recipe)?;
            Ok(Job { state, recipe, stem: "custom".to_string(), entropy_split: None })
        }
    }
}

fn self_spin(spin: SpinState) -> &'static str {
    match spin {
        SpinState::Up => "up",
        SpinState::Down => "down",
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let common = match &cli.command {
        Command::Reference { common, .. }
        | Command::Hydrogen { common, .. }
        | Command::Helium { common, .. }
        | Command::Lithium { common, .. }
        | Command::Molecule { common, .. }
        | Command::Custom { common, .. } => common,
    };
    common.validate()?;
    if let Some(threads) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| usage(format!("--threads: {e}")))?;
    }

    let job = build_job(&cli.command)?;
    let rho = job.state.density();

    println!("norm: {:.12}", job.state.norm()?);
    if let Some((subset, label)) = &job.entropy_split {
        let bits = entanglement_entropy(&job.state, subset)?;
        println!("entanglement entropy: {bits:.3} bits ({label})");
    }

    let scene = build_scene(&rho, &job.recipe)?;
    println!("glyphs: {}", scene.glyphs.len());

    let image = render(&scene, &common.camera()?)?;
    let output = common.output_path(&job.stem);
    image.write_auto(&output)?;
    println!("wrote image: {}", output.display());

    if let Some(scene_path) = &common.scene_out {
        export_scene(&scene, scene_path)?;
        println!("wrote scene: {}", scene_path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse(); // clap reports flag parse errors with exit code 2
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
