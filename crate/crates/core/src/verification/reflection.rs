use crate::assembly::{assemble_mass, assemble_stiffness, build_dof_map, essential_values, DofMap};
use crate::error::{Error, Result};
use crate::fem_local::{local_mass_lumped, local_stiffness, DenseMatrix, Element};
use crate::mesh::{build_structured_hybrid_mesh, BoundaryTag, BoundingBox, ElementId, HybridMesh, SplitDirection};
use crate::timestepping::{cfl_timestep, estimate_max_eigenvalue, field_energy, plan_steps, Leapfrog};

/// Strip experiment: a pulse enters a `length x height` strip through its
/// left end and travels right. Top and bottom are perfectly conducting, the
/// right end is natural. Left of `interface_x` the strip is meshed with
/// rectangles, right of it with triangles (or rectangles for the baseline).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReflectionSetup {
    pub length: f64,
    pub height: f64,
    pub interface_x: f64,
    /// Carrier frequency of the pulse.
    pub frequency: f64,
    /// Centre and width of the Gaussian envelope in time.
    pub center: f64,
    pub width: f64,
    /// Time at which the energy left of the interface is measured.
    pub measure_time: f64,
    pub cfl_safety: f64,
}

impl Default for ReflectionSetup {
    fn default() -> Self {
        Self {
            length: 4.0,
            height: 1.0,
            interface_x: 2.0,
            frequency: 10.0,
            center: 1.0,
            width: 0.3,
            measure_time: 5.0,
            cfl_safety: 0.9,
        }
    }
}

impl ReflectionSetup {
    /// Tangential trace imposed at the left end.
    pub fn pulse(&self, t: f64) -> f64 {
        let s = (t - self.center) / self.width;
        (self.frequency * t).sin() * (-s * s).exp()
    }

    /// Time after which the pulse envelope is below `exp(-16)`.
    pub fn pulse_end(&self) -> f64 {
        self.center + 4.0 * self.width
    }

    /// Checks that the pulse has left the rectangle part and that the echo
    /// from the far end has not yet come back.
    pub fn check_window(&self) -> Result<()> {
        let transmitted = self.interface_x + self.pulse_end();
        let echo = 2.0 * self.length - self.interface_x;
        if self.measure_time < transmitted || self.measure_time >= echo {
            return Err(Error::Verification(format!(
                "measurement at t = {} is outside the window [{transmitted}, {echo}) in which the pulse has \
                 crossed the interface and its echo has not returned",
                self.measure_time
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReflectionReport {
    pub h: f64,
    /// Energy left of the interface at the measurement time over the peak
    /// total energy.
    pub ratio: f64,
    pub left_energy: f64,
    pub peak_energy: f64,
    pub steps: usize,
    pub dt: f64,
}

struct LocalBlock {
    id: ElementId,
    mass: Vec<f64>,
    stiffness: DenseMatrix,
}

fn left_energy(blocks: &[LocalBlock], dofmap: &DofMap, e: &[f64], v: &[f64]) -> f64 {
    let (mut le, mut lv) = (Vec::new(), Vec::new());
    let mut sum = 0.0;
    for b in blocks {
        dofmap.gather(b.id, e, &mut le);
        dofmap.gather(b.id, v, &mut lv);
        let kinetic: f64 = lv.iter().zip(&b.mass).map(|(x, m)| m * x * x).sum();
        let ke = b.stiffness.mul_vec(&le);
        let potential: f64 = le.iter().zip(&ke).map(|(a, c)| a * c).sum();
        sum += 0.5 * (kinetic + potential);
    }
    sum
}

/// Runs the strip experiment with cell size `h`; `hybrid = false` meshes the
/// whole strip with rectangles.
pub fn reflection_ratio(setup: &ReflectionSetup, h: f64, hybrid: bool) -> Result<ReflectionReport> {
    setup.check_window()?;
    let nx = (setup.length / h).round() as usize;
    let ny = (setup.height / h).round() as usize;
    let interface_columns = (setup.interface_x / h).round() as usize;
    let rect_columns = if hybrid { interface_columns } else { nx };
    if nx == 0 || ny == 0 || (interface_columns as f64 * h - setup.interface_x).abs() > 1e-9 {
        return Err(Error::Verification(format!(
            "cell size {h} does not resolve the strip and its interface"
        )));
    }
    let mesh: HybridMesh = build_structured_hybrid_mesh(
        nx,
        ny,
        BoundingBox::new(0.0, setup.length, 0.0, setup.height)?,
        rect_columns,
        SplitDirection::Alternating,
    )?;
    let dofmap = build_dof_map(&mesh, &[BoundaryTag::Left, BoundaryTag::Bottom, BoundaryTag::Top]);
    let mass = assemble_mass(&mesh, &dofmap)?;
    let stiffness = assemble_stiffness(&mesh, &dofmap)?;
    let lambda = estimate_max_eigenvalue(&mass, &stiffness);
    let (steps, dt) = plan_steps(setup.measure_time, cfl_timestep(lambda.value, setup.cfl_safety)?, false);

    let mut blocks = Vec::new();
    for id in mesh.elements() {
        if mesh.element_centroid(id).x < setup.interface_x {
            let el = Element::from_mesh(&mesh, id)?;
            blocks.push(LocalBlock {
                id,
                mass: local_mass_lumped(&el)?,
                stiffness: local_stiffness(&el),
            });
        }
    }

    let bc_at = |t: f64| {
        essential_values(
            &mesh,
            &dofmap,
            |tag, _, t| if tag == BoundaryTag::Left { setup.pulse(t) } else { 0.0 },
            t,
        )
    };
    let n = dofmap.n_dofs();
    let mut e0 = vec![0.0; n];
    for (i, v) in bc_at(0.0) {
        e0[i] = v;
    }
    let mut stepper = Leapfrog::new(&mass, &stiffness);
    let mut state = stepper.init(e0, &vec![0.0; n], dt, 0.0, None, &bc_at(dt));
    let mut peak: f64 = field_energy(&state, &mass, &stiffness);
    while state.n < steps {
        let t_next = (state.n + 1) as f64 * dt;
        stepper.step(&mut state, None, &bc_at(t_next))?;
        peak = peak.max(field_energy(&state, &mass, &stiffness));
    }
    let left = left_energy(&blocks, &dofmap, &state.e_curr, &state.velocity());
    Ok(ReflectionReport {
        h,
        ratio: left / peak,
        left_energy: left,
        peak_energy: peak,
        steps,
        dt,
    })
}

/// Reflection ratio of the hybrid strip with the default setup.
pub fn interface_reflection_test(h: f64) -> Result<ReflectionReport> {
    reflection_ratio(&ReflectionSetup::default(), h, true)
}
