//! Dipole matrix elements between monopole harmonics and the selection rules
//! they imply.
//!
//! Two charge structures are compared:
//! * pseudoscalar charge `eσ₃` with dipole `e r σ₃`, between single-component
//!   states `(Φ_{jmμ}, 0)`;
//! * scalar charge `eI` with dipole `e r I`, between the two-component states
//!   `Ψ = (Φ_{jmμ}, Φ_{jm-μ})`.
//!
//! Radial factors are set to one. Every element is computed by sphere
//! quadrature and, independently, from exact 3-j symbols:
//!
//! ```text
//! <j'm'μ| d_q |jmμ> = C'_q (-1)^{(j'-μ)+(j-m)} sqrt((2j+1)(2j'+1))
//!                     (j' 1 j; -m' q m) (j' 1 j; -μ 0 μ)
//! ```
//!
//! where the constant `C'_q` depends only on the dipole component and is
//! fitted once from a reference transition. The sign factor is the one that
//! matches the phase convention of [`crate::harmonics`].

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::exact::{HalfInt, SignedSqrtRational};
use crate::harmonics::{MonopoleHarmonic, MonopoleHarmonicIndex, SphericalPoint};
use crate::quadrature::SphereGrid;
use crate::wigner::{three_j, ThreeJArgs};

/// Magnitude above which a matrix element counts as nonzero.
pub const ALLOWED_THRESHOLD: f64 = 1e-8;
/// Largest allowed gap between quadrature and fitted closed form.
pub const AGREEMENT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DipoleComponent {
    /// `cos θ`
    Z,
    /// `sin θ e^{iφ}`, raises `m` by one.
    Plus,
    /// `sin θ e^{-iφ}`, lowers `m` by one.
    Minus,
}

impl DipoleComponent {
    pub const ALL: [DipoleComponent; 3] = [
        DipoleComponent::Z,
        DipoleComponent::Plus,
        DipoleComponent::Minus,
    ];

    /// `m' - m` for a nonzero element.
    pub fn delta_m(self) -> HalfInt {
        match self {
            DipoleComponent::Z => HalfInt::ZERO,
            DipoleComponent::Plus => HalfInt::ONE,
            DipoleComponent::Minus => -HalfInt::ONE,
        }
    }

    pub fn eval(self, p: SphericalPoint) -> Complex64 {
        let (s, c) = p.theta().sin_cos();
        match self {
            DipoleComponent::Z => Complex64::new(c, 0.0),
            DipoleComponent::Plus => Complex64::from_polar(s, p.phi()),
            DipoleComponent::Minus => Complex64::from_polar(s, -p.phi()),
        }
    }

    /// Component with the opposite `Δm`.
    pub fn adjoint(self) -> Self {
        match self {
            DipoleComponent::Z => DipoleComponent::Z,
            DipoleComponent::Plus => DipoleComponent::Minus,
            DipoleComponent::Minus => DipoleComponent::Plus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DipoleComponent::Z => "z",
            DipoleComponent::Plus => "plus",
            DipoleComponent::Minus => "minus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChargeOperatorKind {
    /// `σ₃`
    PseudoscalarSigma3,
    /// `I`
    ScalarIdentity,
}

impl ChargeOperatorKind {
    /// Diagonal of the 2x2 charge operator.
    pub fn diagonal(self) -> [f64; 2] {
        match self {
            ChargeOperatorKind::PseudoscalarSigma3 => [1.0, -1.0],
            ChargeOperatorKind::ScalarIdentity => [1.0, 1.0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ChargeOperatorKind::PseudoscalarSigma3 => "pseudoscalar",
            ChargeOperatorKind::ScalarIdentity => "scalar",
        }
    }

    /// The states each structure is diagonalized with: single-component for
    /// `σ₃`, two-component for `I`.
    pub fn natural_wavefunction(self, index: MonopoleHarmonicIndex) -> Wavefunction {
        match self {
            ChargeOperatorKind::PseudoscalarSigma3 => Wavefunction::Upper(index),
            ChargeOperatorKind::ScalarIdentity => {
                Wavefunction::Spinor(SpinorWavefunction::as_printed(index))
            }
        }
    }
}

impl std::str::FromStr for ChargeOperatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pseudoscalar" => Ok(ChargeOperatorKind::PseudoscalarSigma3),
            "scalar" => Ok(ChargeOperatorKind::ScalarIdentity),
            other => Err(Error::Parse {
                arg: other.to_string(),
                reason: "operator must be pseudoscalar or scalar".to_string(),
            }),
        }
    }
}

/// `(Φ_{jmμ}, c Φ_{jm-μ})` with a unit-modulus relative phase `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinorWavefunction {
    upper: MonopoleHarmonicIndex,
    relative_phase: Complex64,
    unit_norm: bool,
}

impl SpinorWavefunction {
    pub fn new(upper: MonopoleHarmonicIndex, relative_phase: Complex64) -> Result<Self> {
        if (relative_phase.norm() - 1.0).abs() > 1e-12 {
            return domain(format!(
                "relative phase {relative_phase} is not of unit modulus"
            ));
        }
        Ok(SpinorWavefunction {
            upper,
            relative_phase,
            unit_norm: false,
        })
    }

    /// Phase `+1`, no overall normalization factor.
    pub fn as_printed(upper: MonopoleHarmonicIndex) -> Self {
        SpinorWavefunction {
            upper,
            relative_phase: Complex64::new(1.0, 0.0),
            unit_norm: false,
        }
    }

    /// Scales both components by `1/√2`.
    pub fn normalized(mut self) -> Self {
        self.unit_norm = true;
        self
    }

    pub fn upper(&self) -> MonopoleHarmonicIndex {
        self.upper
    }

    pub fn lower(&self) -> MonopoleHarmonicIndex {
        self.upper.charge_conjugate()
    }

    pub fn relative_phase(&self) -> Complex64 {
        self.relative_phase
    }

    fn overall(&self) -> f64 {
        if self.unit_norm {
            std::f64::consts::FRAC_1_SQRT_2
        } else {
            1.0
        }
    }
}

/// A two-component angular wave function built from monopole harmonics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Wavefunction {
    /// `(Φ, 0)`
    Upper(MonopoleHarmonicIndex),
    /// `(0, Φ)`
    Lower(MonopoleHarmonicIndex),
    Spinor(SpinorWavefunction),
}

impl Wavefunction {
    /// `[(slot, harmonic, coefficient)]`.
    fn parts(&self) -> Vec<(usize, MonopoleHarmonicIndex, Complex64)> {
        let one = Complex64::new(1.0, 0.0);
        match *self {
            Wavefunction::Upper(i) => vec![(0, i, one)],
            Wavefunction::Lower(i) => vec![(1, i, one)],
            Wavefunction::Spinor(s) => vec![
                (0, s.upper(), one * s.overall()),
                (1, s.lower(), s.relative_phase * s.overall()),
            ],
        }
    }
}

/// Harmonic and dipole samples on one grid, computed once and shared.
pub struct GridSamples<'g> {
    grid: &'g SphereGrid,
    harmonics: BTreeMap<MonopoleHarmonicIndex, Vec<Complex64>>,
    components: BTreeMap<DipoleComponent, Vec<Complex64>>,
}

impl<'g> GridSamples<'g> {
    pub fn new(grid: &'g SphereGrid) -> Self {
        let components = DipoleComponent::ALL
            .into_iter()
            .map(|c| (c, grid.sample(|p| c.eval(p))))
            .collect();
        GridSamples {
            grid,
            harmonics: BTreeMap::new(),
            components,
        }
    }

    pub fn grid(&self) -> &SphereGrid {
        self.grid
    }

    /// Samples `indices` (and nothing else) ahead of time.
    pub fn preload(
        &mut self,
        indices: impl IntoIterator<Item = MonopoleHarmonicIndex>,
    ) -> Result<()> {
        for idx in indices {
            if !self.harmonics.contains_key(&idx) {
                let h = MonopoleHarmonic::new(idx)?;
                let values = self.grid.sample(|p| h.eval(p));
                self.harmonics.insert(idx, values);
            }
        }
        Ok(())
    }

    fn harmonic(&self, idx: &MonopoleHarmonicIndex) -> &[Complex64] {
        self.harmonics
            .get(idx)
            .unwrap_or_else(|| panic!("harmonic {idx} was not preloaded"))
    }

    /// `∫ Ψ_bra† (d_q ⊗ O) Ψ_ket dΩ` over preloaded harmonics.
    pub fn matrix_element(
        &self,
        bra: &Wavefunction,
        ket: &Wavefunction,
        component: DipoleComponent,
        operator: ChargeOperatorKind,
    ) -> Result<Complex64> {
        let diag = operator.diagonal();
        let dipole = &self.components[&component];
        let mut total = Complex64::new(0.0, 0.0);
        for (bs, bi, bc) in bra.parts() {
            for (ks, ki, kc) in ket.parts() {
                if bs != ks {
                    continue;
                }
                let ket_values: Vec<Complex64> = self
                    .harmonic(&ki)
                    .iter()
                    .zip(dipole)
                    .map(|(k, d)| k * d)
                    .collect();
                let integral = self.grid.inner(self.harmonic(&bi), &ket_values)?;
                total += bc.conj() * kc * diag[bs] * integral;
            }
        }
        Ok(total)
    }

    fn preload_wavefunctions(&mut self, wfs: &[&Wavefunction]) -> Result<()> {
        let indices: Vec<_> = wfs
            .iter()
            .flat_map(|w| w.parts())
            .map(|(_, i, _)| i)
            .collect();
        self.preload(indices)
    }
}

/// Angular matrix element by direct quadrature.
pub fn matrix_element_quadrature(
    bra: &Wavefunction,
    ket: &Wavefunction,
    component: DipoleComponent,
    operator: ChargeOperatorKind,
    grid: &SphereGrid,
) -> Result<Complex64> {
    let mut samples = GridSamples::new(grid);
    samples.preload_wavefunctions(&[bra, ket])?;
    samples.matrix_element(bra, ket, component, operator)
}

/// Closed-form value before the constant `C'` is applied.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedElement {
    /// Exact value when the terms combine inside the square-root closure.
    pub exact: Option<SignedSqrtRational>,
    pub value: Complex64,
}

/// `(-1)^{(j'-μ)+(j-m)} sqrt((2j+1)(2j'+1)) (j' 1 j; -m' q m) (j' 1 j; -μ 0 μ)`.
fn single_term(
    j_prime: HalfInt,
    m_prime: HalfInt,
    j: HalfInt,
    m: HalfInt,
    mu: HalfInt,
    component: DipoleComponent,
) -> SignedSqrtRational {
    let q = component.delta_m();
    let Ok(m_col) = ThreeJArgs::new([j_prime, HalfInt::ONE, j], [-m_prime, q, m]) else {
        return SignedSqrtRational::zero();
    };
    let Ok(mu_col) = ThreeJArgs::new([j_prime, HalfInt::ONE, j], [-mu, HalfInt::ZERO, mu]) else {
        return SignedSqrtRational::zero();
    };
    let geometric = &three_j(&m_col) * &three_j(&mu_col);
    if geometric.is_zero() {
        return geometric;
    }
    let exponent = ((j_prime - mu) + (j - m))
        .to_int()
        .expect("integer for valid indices");
    let sign = if exponent.rem_euclid(2) == 0 { 1 } else { -1 };
    let dims = (j.twice() + 1) * (j_prime.twice() + 1);
    let prefactor =
        SignedSqrtRational::new(sign, num_rational::BigRational::from_integer(dims.into()));
    &prefactor * &geometric
}

/// Closed form for arbitrary bra/ket structures.
pub fn reduced_element(
    bra: &Wavefunction,
    ket: &Wavefunction,
    component: DipoleComponent,
    operator: ChargeOperatorKind,
) -> ReducedElement {
    let diag = operator.diagonal();
    let mut exact = Some(SignedSqrtRational::zero());
    let mut value = Complex64::new(0.0, 0.0);
    for (bs, bi, bc) in bra.parts() {
        for (ks, ki, kc) in ket.parts() {
            if bs != ks || bi.mu() != ki.mu() {
                continue;
            }
            let term = single_term(bi.j(), bi.m(), ki.j(), ki.m(), ki.mu(), component);
            let coeff = bc.conj() * kc * diag[bs];
            value += coeff * term.to_f64();
            // exact only for real ±1 coefficients
            exact = match exact {
                Some(acc) if coeff == Complex64::new(1.0, 0.0) => acc.checked_add(&term),
                Some(acc) if coeff == Complex64::new(-1.0, 0.0) => acc.checked_sub(&term),
                _ => None,
            };
        }
    }
    ReducedElement { exact, value }
}

/// The closed form for the natural pairing of `operator`: single-component
/// states for the pseudoscalar charge, and the as-printed spinor for the
/// scalar charge, where the two harmonics produce the bracket
/// `(j' 1 j; -μ 0 μ) + (-1)^{2μ} (j' 1 j; μ 0 -μ)`.
pub fn matrix_element_closed_form(
    j_prime: HalfInt,
    m_prime: HalfInt,
    j: HalfInt,
    m: HalfInt,
    mu: HalfInt,
    component: DipoleComponent,
    operator: ChargeOperatorKind,
) -> Result<ReducedElement> {
    let bra = operator.natural_wavefunction(MonopoleHarmonicIndex::new(j_prime, m_prime, mu)?);
    let ket = operator.natural_wavefunction(MonopoleHarmonicIndex::new(j, m, mu)?);
    Ok(reduced_element(&bra, &ket, component, operator))
}

/// The two 3-j symbols in the bracket: `(j' 1 j; -μ 0 μ)` and `(j' 1 j; μ 0 -μ)`.
pub fn bracket_symbols(
    j_prime: HalfInt,
    j: HalfInt,
    mu: HalfInt,
) -> Result<(SignedSqrtRational, SignedSqrtRational)> {
    let a = ThreeJArgs::new([j_prime, HalfInt::ONE, j], [-mu, HalfInt::ZERO, mu])?;
    Ok((three_j(&a), three_j(&a.negated())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Allowed,
    Forbidden,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Allowed => "allowed",
            Verdict::Forbidden => "forbidden",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TransitionRecord {
    pub j: HalfInt,
    pub m: HalfInt,
    pub j_prime: HalfInt,
    pub m_prime: HalfInt,
    pub component: DipoleComponent,
    pub operator: ChargeOperatorKind,
    pub value_quadrature: Complex64,
    /// `C' ·` reduced element.
    pub value_closed_form: Complex64,
    pub reduced: ReducedElement,
    pub verdict: Verdict,
    /// `|quadrature - closed form| <= AGREEMENT_TOLERANCE`.
    pub dual_agreement: bool,
}

impl TransitionRecord {
    pub fn delta_j(&self) -> HalfInt {
        self.j_prime - self.j
    }

    pub fn delta_m(&self) -> HalfInt {
        self.m_prime - self.m
    }
}

/// Every `(j, m) -> (j', m')` transition with `j, j' <= j_max`, for all three
/// dipole components.
#[derive(Clone, Debug)]
pub struct TransitionTable {
    pub j_max: HalfInt,
    pub mu: HalfInt,
    pub operator: ChargeOperatorKind,
    pub n_theta: usize,
    pub n_phi: usize,
    /// Fitted `C'` per component.
    pub scales: BTreeMap<DipoleComponent, Complex64>,
    pub records: Vec<TransitionRecord>,
}

impl TransitionTable {
    pub fn allowed(&self) -> impl Iterator<Item = &TransitionRecord> {
        self.records
            .iter()
            .filter(|r| r.verdict == Verdict::Allowed)
    }

    pub fn all_agree(&self) -> bool {
        self.records.iter().all(|r| r.dual_agreement)
    }

    pub fn max_disagreement(&self) -> f64 {
        self.records
            .iter()
            .map(|r| (r.value_quadrature - r.value_closed_form).norm())
            .fold(0.0, f64::max)
    }
}

/// Builds the table, fitting `C'` per component from the first record (in
/// table order) whose reduced element is nonzero.
pub fn selection_table(
    j_max: HalfInt,
    mu: HalfInt,
    operator: ChargeOperatorKind,
    grid: &SphereGrid,
) -> Result<TransitionTable> {
    if j_max < mu.abs() {
        return domain(format!("j_max={j_max} is below |mu|={}", mu.abs()));
    }
    let states = MonopoleHarmonicIndex::all_up_to(j_max, mu);
    if states.is_empty() {
        return domain(format!("no states with |mu|={} <= j <= {j_max}", mu.abs()));
    }
    let mut samples = GridSamples::new(grid);
    samples.preload(states.iter().copied())?;
    samples.preload(states.iter().map(|s| s.charge_conjugate()))?;

    let cells: Vec<(
        MonopoleHarmonicIndex,
        MonopoleHarmonicIndex,
        DipoleComponent,
    )> = states
        .iter()
        .flat_map(|ket| {
            states.iter().flat_map(move |bra| {
                DipoleComponent::ALL
                    .into_iter()
                    .map(move |c| (*ket, *bra, c))
            })
        })
        .collect();

    let computed: Vec<(Complex64, ReducedElement)> = cells
        .par_iter()
        .map(|(ket, bra, component)| {
            let bra_wf = operator.natural_wavefunction(*bra);
            let ket_wf = operator.natural_wavefunction(*ket);
            let quad = samples.matrix_element(&bra_wf, &ket_wf, *component, operator)?;
            Ok((
                quad,
                reduced_element(&bra_wf, &ket_wf, *component, operator),
            ))
        })
        .collect::<Result<_>>()?;

    let mut scales = BTreeMap::new();
    for ((_, _, component), (quad, reduced)) in cells.iter().zip(&computed) {
        if !scales.contains_key(component) && reduced.value.norm() > ALLOWED_THRESHOLD {
            scales.insert(*component, quad / reduced.value);
        }
    }

    let records = cells
        .iter()
        .zip(computed)
        .map(|((ket, bra, component), (quad, reduced))| {
            let scale = scales.get(component).copied().unwrap_or_default();
            let closed = scale * reduced.value;
            let allowed = quad.norm() > ALLOWED_THRESHOLD && closed.norm() > ALLOWED_THRESHOLD;
            TransitionRecord {
                j: ket.j(),
                m: ket.m(),
                j_prime: bra.j(),
                m_prime: bra.m(),
                component: *component,
                operator,
                value_quadrature: quad,
                value_closed_form: closed,
                reduced,
                verdict: if allowed {
                    Verdict::Allowed
                } else {
                    Verdict::Forbidden
                },
                dual_agreement: (quad - closed).norm() <= AGREEMENT_TOLERANCE,
            }
        })
        .collect();

    Ok(TransitionTable {
        j_max,
        mu,
        operator,
        n_theta: grid.n_theta(),
        n_phi: grid.n_phi(),
        scales,
        records,
    })
}

/// One `(m -> m')` line of the twofold comparison, all under `σ₃`.
#[derive(Clone, Debug)]
pub struct TwofoldEntry {
    pub m: HalfInt,
    pub m_prime: HalfInt,
    pub component: DipoleComponent,
    /// Between `(Φ_{jmμ}, 0)` states.
    pub single: Complex64,
    /// Between spinors exactly as printed.
    pub spinor: Complex64,
    /// Between spinors scaled by `1/√2`.
    pub spinor_unit: Complex64,
    /// `|spinor| / |single|`; `None` when the single-component value vanishes.
    pub ratio: Option<f64>,
    pub ratio_unit: Option<f64>,
    /// The same ratio from the exact closed forms.
    pub closed_ratio: Option<f64>,
    /// Spinors under the scalar charge `I`, over the single-component value.
    pub scalar_ratio: Option<f64>,
}

/// Ratios for each probed relative phase: `(phase, min ratio, max ratio)`.
pub type PhaseScan = Vec<(Complex64, Option<f64>, Option<f64>)>;

#[derive(Clone, Debug)]
pub struct TwofoldReport {
    pub j_prime: HalfInt,
    pub j: HalfInt,
    pub mu: HalfInt,
    pub relative_phase: Complex64,
    /// Transitions `j -> j'`.
    pub entries: Vec<TwofoldEntry>,
    /// Transitions `j -> j` (`Δj = 0`), reported as a diagnostic.
    pub diagonal: Vec<TwofoldEntry>,
    pub phase_scan: PhaseScan,
}

impl TwofoldReport {
    /// Largest `|quadrature ratio - closed-form ratio|` over both entry lists.
    pub fn max_closed_form_gap(&self) -> f64 {
        self.entries
            .iter()
            .chain(&self.diagonal)
            .filter_map(|e| Some((e.ratio? - e.closed_ratio?).abs()))
            .fold(0.0, f64::max)
    }
}

fn ratio(num: Complex64, den: Complex64) -> Option<f64> {
    (den.norm() > ALLOWED_THRESHOLD).then(|| num.norm() / den.norm())
}

fn twofold_entries(
    samples: &GridSamples,
    j_prime: HalfInt,
    j: HalfInt,
    mu: HalfInt,
    phase: Complex64,
) -> Result<Vec<TwofoldEntry>> {
    let sigma3 = ChargeOperatorKind::PseudoscalarSigma3;
    let mut out = Vec::new();
    for m in j.projections() {
        for component in DipoleComponent::ALL {
            let m_prime = m + component.delta_m();
            if m_prime.abs() > j_prime {
                continue;
            }
            let ket_idx = MonopoleHarmonicIndex::new(j, m, mu)?;
            let bra_idx = MonopoleHarmonicIndex::new(j_prime, m_prime, mu)?;
            let single_bra = Wavefunction::Upper(bra_idx);
            let single_ket = Wavefunction::Upper(ket_idx);
            let spin_bra = SpinorWavefunction::new(bra_idx, phase)?;
            let spin_ket = SpinorWavefunction::new(ket_idx, phase)?;
            let (sb, sk) = (
                Wavefunction::Spinor(spin_bra),
                Wavefunction::Spinor(spin_ket),
            );
            let (ub, uk) = (
                Wavefunction::Spinor(spin_bra.normalized()),
                Wavefunction::Spinor(spin_ket.normalized()),
            );

            let single = samples.matrix_element(&single_bra, &single_ket, component, sigma3)?;
            let spinor = samples.matrix_element(&sb, &sk, component, sigma3)?;
            let spinor_unit = samples.matrix_element(&ub, &uk, component, sigma3)?;
            let scalar =
                samples.matrix_element(&sb, &sk, component, ChargeOperatorKind::ScalarIdentity)?;
            let closed_single = reduced_element(&single_bra, &single_ket, component, sigma3);
            let closed_spinor = reduced_element(&sb, &sk, component, sigma3);

            out.push(TwofoldEntry {
                m,
                m_prime,
                component,
                single,
                spinor,
                spinor_unit,
                ratio: ratio(spinor, single),
                ratio_unit: ratio(spinor_unit, single),
                closed_ratio: ratio(closed_spinor.value, closed_single.value),
                scalar_ratio: ratio(scalar, single),
            });
        }
    }
    Ok(out)
}

/// Compares the `σ₃` matrix element between two-component states with the
/// one between single-component states, for `j -> j'` with `|j' - j| = 1`.
pub fn twofold_check(
    j_prime: HalfInt,
    j: HalfInt,
    mu: HalfInt,
    relative_phase: Complex64,
    grid: &SphereGrid,
) -> Result<TwofoldReport> {
    if (j_prime - j).abs() != HalfInt::ONE {
        return domain(format!(
            "twofold check needs |j' - j| = 1 (j={j}, j'={j_prime})"
        ));
    }
    let mut samples = GridSamples::new(grid);
    for jj in [j, j_prime] {
        MonopoleHarmonicIndex::new(jj, jj, mu)?;
        let idx: Vec<_> = jj
            .projections()
            .map(|m| MonopoleHarmonicIndex::new(jj, m, mu))
            .collect::<Result<_>>()?;
        samples.preload(idx.iter().copied())?;
        samples.preload(idx.iter().map(|i| i.charge_conjugate()))?;
    }
    let entries = twofold_entries(&samples, j_prime, j, mu, relative_phase)?;
    let diagonal = twofold_entries(&samples, j, j, mu, relative_phase)?;

    let mut phase_scan = Vec::new();
    for phase in [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ] {
        let scan = twofold_entries(&samples, j_prime, j, mu, phase)?;
        let ratios: Vec<f64> = scan.iter().filter_map(|e| e.ratio).collect();
        let min = ratios.iter().copied().reduce(f64::min);
        let max = ratios.iter().copied().reduce(f64::max);
        phase_scan.push((phase, min, max));
    }

    Ok(TwofoldReport {
        j_prime,
        j,
        mu,
        relative_phase,
        entries,
        diagonal,
        phase_scan,
    })
}

/// Wave-function pair `(bra, ket)` at `(j', m') <- (j, m)` in the natural
/// structure of `operator`; convenience for callers outside the table.
pub fn natural_pair(
    j_prime: HalfInt,
    m_prime: HalfInt,
    j: HalfInt,
    m: HalfInt,
    mu: HalfInt,
    operator: ChargeOperatorKind,
) -> Result<(Wavefunction, Wavefunction)> {
    Ok((
        operator.natural_wavefunction(MonopoleHarmonicIndex::new(j_prime, m_prime, mu)?),
        operator.natural_wavefunction(MonopoleHarmonicIndex::new(j, m, mu)?),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn grid() -> SphereGrid {
        SphereGrid::new(32, 32).unwrap()
    }

    #[test]
    fn pseudoscalar_diagonal_element_is_nonzero() {
        let (bra, ket) = natural_pair(
            h(1),
            h(1),
            h(1),
            h(1),
            h(1),
            ChargeOperatorKind::PseudoscalarSigma3,
        )
        .unwrap();
        let v = matrix_element_quadrature(
            &bra,
            &ket,
            DipoleComponent::Z,
            ChargeOperatorKind::PseudoscalarSigma3,
            &grid(),
        )
        .unwrap();
        assert!(v.norm() > 1e-3);
    }

    #[test]
    fn scalar_spinor_half_to_half_vanishes() {
        for m in [h(-1), h(1)] {
            let (bra, ket) =
                natural_pair(h(1), m, h(1), m, h(1), ChargeOperatorKind::ScalarIdentity).unwrap();
            let v = matrix_element_quadrature(
                &bra,
                &ket,
                DipoleComponent::Z,
                ChargeOperatorKind::ScalarIdentity,
                &grid(),
            )
            .unwrap();
            assert!(v.norm() < 1e-9, "{v}");
        }
    }

    #[test]
    fn delta_m_two_vanishes() {
        let g = grid();
        for component in DipoleComponent::ALL {
            for op in [
                ChargeOperatorKind::PseudoscalarSigma3,
                ChargeOperatorKind::ScalarIdentity,
            ] {
                let (bra, ket) = natural_pair(h(3), h(3), h(3), h(-1), h(1), op).unwrap();
                let v = matrix_element_quadrature(&bra, &ket, component, op, &g).unwrap();
                assert!(v.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn scalar_bracket_cancels_exactly_at_equal_j() {
        for t in [1, 3, 5] {
            for m in h(t).projections() {
                let r = matrix_element_closed_form(
                    h(t),
                    m,
                    h(t),
                    m,
                    h(1),
                    DipoleComponent::Z,
                    ChargeOperatorKind::ScalarIdentity,
                )
                .unwrap();
                assert_eq!(r.exact, Some(SignedSqrtRational::zero()));
            }
        }
    }

    #[test]
    fn spinor_phase_must_be_unimodular() {
        let idx = MonopoleHarmonicIndex::from_twice(1, 1, 1).unwrap();
        assert!(SpinorWavefunction::new(idx, Complex64::new(0.5, 0.0)).is_err());
        assert!(SpinorWavefunction::new(idx, Complex64::new(0.0, -1.0)).is_ok());
    }

    #[test]
    fn twofold_requires_adjacent_j() {
        assert!(twofold_check(h(1), h(1), h(1), Complex64::new(1.0, 0.0), &grid()).is_err());
    }
}
