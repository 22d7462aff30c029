use std::collections::BTreeMap;

use lscat_core::bogoliubov::{bog_inelastic_cs, depletion_quadratic, solve_depletion, BogoliubovState};
use lscat_core::fock::{exact_cross_section, fock_dimension, ExcitationData};
use lscat_core::limits::{
    deviation_from_samples, elastic_cs, exact_angles, large_l_slope, largeL_bog_cs, largeL_sf_inelastic,
    linear_decay, sf_inelastic, slope_lambda, DEVIATION_FLOOR,
};
use lscat_core::model::{form_factor, kappa_elastic, LatticeSpec, ProbeSpec, INTERBAND_GAP};
use lscat_core::Error;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Defaults, Provenance, Settings};
use crate::output::{Cell, ScanTable};
use crate::store::SpectrumStore;
use crate::CliError;

/// Exact diagonalizations above this dimension run one at a time to bound
/// memory.
const PARALLEL_DIMENSION: u128 = 5_000;

pub struct Report {
    pub table: ScanTable,
    pub metadata: BTreeMap<String, Value>,
}

fn par_map<T, R, F>(items: &[T], parallel: bool, f: F) -> Result<Vec<R>, CliError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, CliError> + Sync + Send,
{
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

fn light(lattice: &LatticeSpec) -> bool {
    fock_dimension(lattice.particle_count(), lattice.sites).is_some_and(|d| d <= PARALLEL_DIMENSION)
}

/// Everything the analytic formulas need for one lattice.
struct Models<'a> {
    settings: &'a Settings,
    lattice: LatticeSpec,
    state: BogoliubovState,
}

impl<'a> Models<'a> {
    fn new(settings: &'a Settings, lattice: LatticeSpec) -> Result<Self, CliError> {
        let state = solve_depletion(&lattice)?;
        Ok(Self {
            settings,
            lattice,
            state,
        })
    }

    /// Inelastic cross section per particle for an analytic provenance.
    fn per_particle(&self, provenance: Provenance, probe: &ProbeSpec) -> Result<f64, CliError> {
        let s = self.settings;
        let sites = self.lattice.sites;
        Ok(match provenance {
            Provenance::Bogoliubov => bog_inelastic_cs(&self.state, probe),
            Provenance::SfLimit => sf_inelastic(sites, probe, s.depth, s.tunneling)?,
            // all Mott inelastic weight sits in off-diagonal Wannier terms
            Provenance::MiLimit => 0.0,
            Provenance::LargeL if self.lattice.interaction == 0.0 => largeL_sf_inelastic(probe, s.depth, s.tunneling)?,
            Provenance::LargeL => largeL_bog_cs(&self.state, probe)?,
            Provenance::Linear => {
                let slope = slope_lambda(sites, probe, s.depth, s.tunneling)?;
                linear_decay(&slope, self.lattice.interaction_param())
            }
            Provenance::Exact => unreachable!("exact values come from a spectrum"),
        })
    }
}

fn exact_per_particle(data: &ExcitationData, lattice: &LatticeSpec, probe: &ProbeSpec) -> Result<(f64, f64), CliError> {
    let cs = exact_cross_section(data, lattice, probe)?;
    Ok((cs.elastic, cs.inelastic / data.particles as f64))
}

pub fn theta_scan_defaults() -> Defaults {
    Defaults {
        provenance: "bogoliubov,sf-limit,mi-limit",
        ..Defaults::default()
    }
}

pub fn theta_scan(s: &Settings, store: &SpectrumStore) -> Result<Report, CliError> {
    let sites = Settings::one(&s.sites, "L")?;
    let filling = Settings::one(&s.filling, "n")?;
    let e0 = Settings::one(&s.energy, "E0")?;
    let u_over_j = Settings::one(&s.u_over_j, "U-over-J")?;
    let lattice = s.lattice(sites, filling, u_over_j)?;
    let exact = if s.wants(Provenance::Exact) {
        Some(store.get(&lattice)?)
    } else {
        None
    };
    let models = Models::new(s, lattice)?;
    let particles = lattice.particles();

    let blocks = par_map(&s.theta_grid, true, |&theta| {
        let probe = s.probe(e0, theta)?;
        let elastic = elastic_cs(sites, particles, &probe, s.depth);
        let mut rows = Vec::new();
        for &prov in &s.provenance {
            let (el, per, n) = match (prov, &exact) {
                (Provenance::Exact, Some(data)) => {
                    let (el, per) = exact_per_particle(data, &lattice, &probe)?;
                    (el, per, data.particles as f64)
                }
                _ => (elastic, models.per_particle(prov, &probe)?, particles),
            };
            rows.push(vec![theta.into(), prov.name().into(), el.into(), (per * n).into(), per.into()]);
        }
        Ok(rows)
    })?;

    let mut table = ScanTable::new(&["theta", "provenance", "elastic", "inelastic", "inelastic_per_particle"]);
    table.extend(blocks.into_iter().flatten());
    let mut metadata = BTreeMap::new();
    metadata.insert("depletion_fraction".into(), json!(models.state.depletion_fraction));
    metadata.insert(
        "units".into(),
        json!("theta in rad; elastic and inelastic in a_s^2; inelastic_per_particle = inelastic / N"),
    );
    Ok(Report { table, metadata })
}

pub fn u_scan_defaults() -> Defaults {
    Defaults {
        filling: "2",
        theta_grid: "pi/4",
        u_grid: "0:20:41",
        provenance: "exact,bogoliubov,linear",
        ..Defaults::default()
    }
}

pub fn u_scan(s: &Settings, store: &SpectrumStore) -> Result<Report, CliError> {
    let sites = Settings::one(&s.sites, "L")?;
    let filling = Settings::one(&s.filling, "n")?;
    let e0 = Settings::one(&s.energy, "E0")?;
    let theta = Settings::one(&s.theta_grid, "theta-grid")?;
    let probe = s.probe(e0, theta)?;
    let base = s.lattice(sites, filling, 0.0)?;
    let slope = slope_lambda(sites, &probe, s.depth, s.tunneling)?;

    let blocks = par_map(&s.u_grid, light(&base), |&u| {
        let lattice = base.with_interaction_param(u);
        let models = Models::new(s, lattice)?;
        let depletion = models.state.depletion_fraction;
        let mut rows = Vec::new();
        for &prov in &s.provenance {
            let per = match prov {
                Provenance::Exact => exact_per_particle(&store.get(&lattice)?, &lattice, &probe)?.1,
                Provenance::Linear => linear_decay(&slope, u),
                other => models.per_particle(other, &probe)?,
            };
            rows.push(vec![
                u.into(),
                (u / filling).into(),
                prov.name().into(),
                per.into(),
                depletion.into(),
            ]);
        }
        Ok(rows)
    })?;

    let mut table = ScanTable::new(&["U", "U_over_J", "provenance", "inelastic_per_particle", "depletion_fraction"]);
    table.extend(blocks.into_iter().flatten());
    let mut metadata = BTreeMap::new();
    metadata.insert("theta".into(), json!(theta));
    metadata.insert("gamma_sf".into(), json!(slope.gamma_sf));
    metadata.insert("lambda".into(), json!(slope.lambda));
    metadata.insert("units".into(), json!("U = Un/J; cross sections per particle in a_s^2"));
    Ok(Report { table, metadata })
}

pub fn heatmap_defaults() -> Defaults {
    Defaults {
        sites: "100",
        particles: Some("100"),
        u_over_j: "0.02",
        energy: "0.1:5.9:59",
        ..Defaults::default()
    }
}

pub fn heatmap(s: &Settings) -> Result<Report, CliError> {
    if s.provenance != [Provenance::Bogoliubov] {
        return Err(CliError::Usage("heatmap supports only the bogoliubov provenance".into()));
    }
    let sites = Settings::one(&s.sites, "L")?;
    let filling = Settings::one(&s.filling, "n")?;
    let u_over_j = Settings::one(&s.u_over_j, "U-over-J")?;
    let state = solve_depletion(&s.lattice(sites, filling, u_over_j)?)?;

    let (energies, dropped): (Vec<f64>, Vec<f64>) = s.energy.iter().partition(|&&e| e < INTERBAND_GAP);
    if !dropped.is_empty() {
        eprintln!(
            "warning: dropping {} probe energies at or above the {INTERBAND_GAP} E_r band gap",
            dropped.len()
        );
    }
    let cells: Vec<(f64, f64)> = energies
        .iter()
        .flat_map(|&e| s.theta_grid.iter().map(move |&t| (e, t)))
        .collect();
    let values = par_map(&cells, true, |&(e, t)| Ok(bog_inelastic_cs(&state, &s.probe(e, t)?)))?;

    let mut table = ScanTable::new(&["E0", "theta", "provenance", "inelastic_per_particle"]);
    for (&(e, t), v) in cells.iter().zip(values) {
        table.push(vec![e.into(), t.into(), "bogoliubov".into(), v.into()]);
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("depletion_fraction".into(), json!(state.depletion_fraction));
    metadata.insert("dropped_energies".into(), json!(dropped));
    Ok(Report { table, metadata })
}

pub fn depletion_defaults() -> Defaults {
    Defaults {
        sites: "100",
        ..Defaults::default()
    }
}

pub fn depletion(s: &Settings) -> Result<Report, CliError> {
    let cells: Vec<(usize, f64, f64)> = s
        .sites
        .iter()
        .flat_map(|&l| s.filling.iter().flat_map(move |&n| s.u_grid.iter().map(move |&u| (l, n, u))))
        .collect();
    let rows = par_map(&cells, true, |&(l, n, u)| {
        let lattice = s.lattice(l, n, 0.0)?.with_interaction_param(u);
        let state = solve_depletion(&lattice)?;
        let validity = lscat_core::bogoliubov::validity_check(&lattice, state.n0);
        Ok(vec![
            l.into(),
            n.into(),
            u.into(),
            (u / n).into(),
            Cell::from("bogoliubov"),
            state.depletion_fraction.into(),
            depletion_quadratic(&lattice).into(),
            state.n0.into(),
            state.mu.into(),
            validity.value.into(),
            state.healing_ok.into(),
        ])
    })?;
    let mut table = ScanTable::new(&[
        "L",
        "n",
        "U",
        "U_over_J",
        "provenance",
        "depletion_fraction",
        "alpha_law",
        "condensate_filling",
        "chemical_potential",
        "Un0_over_J",
        "healing_valid",
    ]);
    table.extend(rows);
    Ok(Report {
        table,
        metadata: BTreeMap::new(),
    })
}

pub fn deviation_map_defaults() -> Defaults {
    Defaults {
        filling: "0.2:2:10",
        u_over_j: "0.3,1,3,10,30,50,100",
        ..Defaults::default()
    }
}

pub fn deviation_map(s: &Settings, store: &SpectrumStore) -> Result<Report, CliError> {
    let sites = Settings::one(&s.sites, "L")?;
    let e0 = Settings::one(&s.energy, "E0")?;
    let model = match s.provenance[..] {
        [p] if p != Provenance::Exact => p,
        _ => return Err(CliError::Usage("deviation-map compares exactly one analytic provenance".into())),
    };
    let mut cells = Vec::new();
    for &n in &s.filling {
        for &u in &s.u_over_j {
            let lattice = s.lattice(sites, n, u)?;
            let dim = fock_dimension(lattice.particle_count(), sites).unwrap_or(u128::MAX);
            if dim > s.dimension_cap as u128 {
                return Err(CliError::Cell {
                    context: format!("cell n={n}, U/J={u}"),
                    source: Error::Capacity {
                        dimension: dim,
                        cap: s.dimension_cap,
                    },
                });
            }
            cells.push(lattice);
        }
    }
    let parallel = cells.iter().all(light);
    let probes = s
        .theta_grid
        .iter()
        .map(|&t| s.probe(e0, t))
        .collect::<Result<Vec<_>, _>>()?;

    let rows = par_map(&cells, parallel, |lattice| {
        let wrap = |e: CliError| match e {
            CliError::Core(source) => CliError::Cell {
                context: format!("cell n={}, U/J={}", lattice.filling, lattice.interaction / lattice.tunneling),
                source,
            },
            other => other,
        };
        let data = store.get(lattice).map_err(wrap)?;
        let models = Models::new(s, *lattice).map_err(wrap)?;
        let mut exact = Vec::with_capacity(probes.len());
        let mut approx = Vec::with_capacity(probes.len());
        for p in &probes {
            exact.push(exact_per_particle(&data, lattice, p).map_err(wrap)?.1);
            approx.push(models.per_particle(model, p).map_err(wrap)?);
        }
        let dev = deviation_from_samples(&exact, &approx).map_err(|e| wrap(e.into()))?;
        Ok(vec![
            lattice.filling.into(),
            lattice.particle_count().into(),
            (lattice.interaction / lattice.tunneling).into(),
            model.name().into(),
            dev.delta.into(),
            dev.used.into(),
            dev.excluded.into(),
            models.state.depletion_fraction.into(),
        ])
    })?;

    let mut table = ScanTable::new(&[
        "n",
        "N",
        "U_over_J",
        "provenance",
        "delta_cs",
        "used_angles",
        "excluded_angles",
        "depletion_fraction",
    ]);
    table.extend(rows);
    let mut metadata = BTreeMap::new();
    metadata.insert("angle_points".into(), json!(s.theta_grid.len()));
    metadata.insert(
        "floor".into(),
        json!(format!("angles with exact < {DEVIATION_FLOOR:e} * max over the grid are excluded")),
    );
    Ok(Report { table, metadata })
}

pub fn slope_defaults() -> Defaults {
    Defaults {
        sites: "5,10,100",
        energy: "5",
        provenance: "linear,largeL",
        ..Defaults::default()
    }
}

/// Values of `|sin(κ_el/2)|` below this are flagged as approaching a
/// reciprocal lattice vector, where the large-L slope diverges.
const RECIPROCAL_FLAG: f64 = 0.1;

pub fn slope(s: &Settings) -> Result<Report, CliError> {
    let e0 = Settings::one(&s.energy, "E0")?;
    if s.provenance.iter().any(|p| !matches!(p, Provenance::Linear | Provenance::LargeL)) {
        return Err(CliError::Usage("slope supports the linear and largeL provenances".into()));
    }
    let mut table = ScanTable::new(&["L", "theta", "provenance", "lambda", "intercept", "marker", "near_reciprocal"]);
    let mut markers = BTreeMap::new();
    for &sites in &s.sites {
        let mut marked: Vec<(usize, f64)> = Vec::new();
        for order in 0.. {
            let found = exact_angles(sites, e0, s.mass_ratio, order);
            if found.angles.is_empty() {
                break;
            }
            marked.extend(found.angles);
        }
        markers.insert(sites.to_string(), json!(marked.iter().map(|&(_, t)| t).collect::<Vec<_>>()));
        let mut thetas: Vec<(f64, usize)> = s.theta_grid.iter().map(|&t| (t, 0)).collect();
        thetas.extend(marked.iter().map(|&(m, t)| (t, m)));
        thetas.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let blocks = par_map(&thetas, true, |&(theta, marker)| {
            let probe = s.probe(e0, theta)?;
            let kel = kappa_elastic(&probe);
            let near = (kel / 2.0).sin().abs() < RECIPROCAL_FLAG;
            let mut rows = Vec::new();
            for &prov in &s.provenance {
                let (lambda, intercept) = match prov {
                    Provenance::Linear => {
                        let r = slope_lambda(sites, &probe, s.depth, s.tunneling)?;
                        (r.lambda, r.gamma_sf)
                    }
                    _ => {
                        let slope = large_l_slope(kel, s.depth);
                        let intercept = if slope.is_finite() { form_factor(kel, s.depth).powi(2) } else { 0.0 };
                        (slope, intercept)
                    }
                };
                rows.push(vec![
                    sites.into(),
                    theta.into(),
                    prov.name().into(),
                    lambda.into(),
                    intercept.into(),
                    marker.into(),
                    near.into(),
                ]);
            }
            Ok(rows)
        })?;
        table.extend(blocks.into_iter().flatten());
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("marker_angles".into(), Value::Object(markers.into_iter().collect()));
    Ok(Report { table, metadata })
}

pub fn compare_defaults() -> Defaults {
    Defaults {
        particles: Some("10"),
        u_over_j: "1",
        ..Defaults::default()
    }
}

pub fn compare(s: &Settings, store: &SpectrumStore) -> Result<Report, CliError> {
    let sites = Settings::one(&s.sites, "L")?;
    let filling = Settings::one(&s.filling, "n")?;
    let e0 = Settings::one(&s.energy, "E0")?;
    let u_over_j = Settings::one(&s.u_over_j, "U-over-J")?;
    if s.wants(Provenance::Exact) {
        return Err(CliError::Usage("compare takes the exact result as reference; list only models".into()));
    }
    let lattice = s.lattice(sites, filling, u_over_j)?;
    let data = store.get(&lattice)?;
    let models = Models::new(s, lattice)?;

    let exact = par_map(&s.theta_grid, true, |&t| Ok(exact_per_particle(&data, &lattice, &s.probe(e0, t)?)?.1))?;
    let mut table = ScanTable::new(&[
        "theta",
        "provenance",
        "exact_per_particle",
        "model_per_particle",
        "relative_deviation",
    ]);
    let mut deltas = serde_json::Map::new();
    for &prov in &s.provenance {
        let model = par_map(&s.theta_grid, true, |&t| models.per_particle(prov, &s.probe(e0, t)?))?;
        for ((&t, &x), &m) in s.theta_grid.iter().zip(&exact).zip(&model) {
            let rel = if x != 0.0 { (m - x).abs() / x } else { f64::NAN };
            table.push(vec![t.into(), prov.name().into(), x.into(), m.into(), rel.into()]);
        }
        let delta = match deviation_from_samples(&exact, &model) {
            Ok(d) => json!(d.delta),
            Err(Error::UndefinedDeviation) => Value::Null,
            Err(e) => return Err(e.into()),
        };
        deltas.insert(prov.name().into(), delta);
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("delta_cs".into(), Value::Object(deltas));
    metadata.insert("depletion_fraction".into(), json!(models.state.depletion_fraction));
    Ok(Report { table, metadata })
}
