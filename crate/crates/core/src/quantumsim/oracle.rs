use super::state::DenseState;
use super::SimError;

/// `(I − 2|target⟩⟨target|) s`.
pub fn reflection_oracle(s: &DenseState, target: &DenseState) -> Result<DenseState, SimError> {
    let c = target.inner(s)?;
    let mut out = s.clone();
    for (a, t) in out.amplitudes_mut().iter_mut().zip(target.amplitudes()) {
        *a -= 2.0 * c * t;
    }
    Ok(out)
}

/// One Grover iterate `(2|start⟩⟨start| − I) · U_target`.
fn grover_step(s: &mut DenseState, start: &DenseState, target: &DenseState) {
    let c = target.inner_unchecked(s);
    for (a, t) in s.amplitudes_mut().iter_mut().zip(target.amplitudes()) {
        *a -= 2.0 * c * t;
    }
    let d = start.inner_unchecked(s);
    for (a, st) in s.amplitudes_mut().iter_mut().zip(start.amplitudes()) {
        *a = 2.0 * d * st - *a;
    }
}

/// Runs `iterations` rounds of amplitude amplification from `start` toward
/// `target`. After `j` rounds the overlap is `|sin((2j+1)·asin(a))|` where
/// `a = |⟨target|start⟩|`.
pub fn amplitude_amplify(start: &DenseState, target: &DenseState, iterations: usize) -> Result<DenseState, SimError> {
    start.check_dims(target)?;
    if target.inner_unchecked(start).norm_sqr() == 0.0 {
        return Err(SimError::ZeroOverlap);
    }
    let mut s = start.clone();
    for _ in 0..iterations {
        grover_step(&mut s, start, target);
    }
    Ok(s)
}

/// Incremental amplifier that counts its oracle queries.
#[derive(Clone, Debug)]
pub struct Amplifier<'a> {
    start: &'a DenseState,
    target: &'a DenseState,
    state: DenseState,
    queries: usize,
}

impl<'a> Amplifier<'a> {
    pub fn new(start: &'a DenseState, target: &'a DenseState) -> Result<Self, SimError> {
        start.check_dims(target)?;
        if target.inner_unchecked(start).norm_sqr() == 0.0 {
            return Err(SimError::ZeroOverlap);
        }
        Ok(Self { start, target, state: start.clone(), queries: 0 })
    }

    pub fn step(&mut self) {
        grover_step(&mut self.state, self.start, self.target);
        self.queries += 1;
    }

    pub fn state(&self) -> &DenseState {
        &self.state
    }

    pub fn queries(&self) -> usize {
        self.queries
    }

    pub fn fidelity(&self) -> f64 {
        self.target.inner_unchecked(&self.state).norm_sqr()
    }
}

/// Smallest `j` with `sin²((2j+1)θ) ≥ target` for `θ = asin(a)`, assuming
/// the first rotation toward the target does not overshoot past it.
pub fn predicted_iterations(a: f64, target_fidelity: f64) -> usize {
    let theta = a.clamp(0.0, 1.0).asin();
    let goal = target_fidelity.sqrt().clamp(0.0, 1.0).asin();
    if theta >= goal {
        return 0;
    }
    ((goal / theta - 1.0) / 2.0).ceil() as usize
}
