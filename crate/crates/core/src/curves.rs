//! Holomorphic curves, their harmonic sequences and primitive lifts.
//!
//! Subbundles are stored by polynomial representatives: a frame vector with
//! rational-function entries is kept multiplied through by its denominator,
//! which spans the same fiber wherever that denominator is nonzero.

use crate::error::{Error, Result};
use crate::exterior::{determinant, matrix_rank, wedge, DiagonalMetric, PolyVector};
use crate::hermpoly::{
    factor_out, gcd_univariate, laplace_log, one_plus_zzbar, HermPoly, Monomial, RationalFn, UniPoly,
    Var,
};
use crate::scalar::{GaussianRational, Scalar};

/// Relative size below which a float polynomial counts as zero.
const FLOAT_ZERO: f64 = 1e-9;

trait Magnitude {
    fn magnitude(&self) -> f64;
}

impl<F: Scalar> Magnitude for UniPoly<F> {
    fn magnitude(&self) -> f64 {
        self.coeffs().iter().map(|c| c.to_c64().norm()).fold(0.0, f64::max)
    }
}

impl<F: Scalar> Magnitude for HermPoly<F> {
    fn magnitude(&self) -> f64 {
        self.terms().map(|(_, c)| c.to_c64().norm()).fold(0.0, f64::max)
    }
}

impl<R: Magnitude> Magnitude for PolyVector<R> {
    fn magnitude(&self) -> f64 {
        self.entries().iter().map(Magnitude::magnitude).fold(0.0, f64::max)
    }
}

/// Generic independence of `vs` over the function field: their wedge is a
/// nonzero polynomial vector.
fn independent<R>(vs: &[PolyVector<R>], n: usize) -> Result<bool>
where
    R: crate::exterior::Ring + Magnitude,
{
    let w = wedge(vs, n)?;
    if R::EXACT {
        return Ok(!w.is_zero());
    }
    let scale: f64 = vs.iter().map(Magnitude::magnitude).product();
    Ok(w.magnitude() > FLOAT_ZERO * scale)
}

fn negligible<F: Scalar>(p: &HermPoly<F>, scale: f64) -> bool {
    if F::EXACT {
        p.is_zero()
    } else {
        p.magnitude() <= FLOAT_ZERO * scale
    }
}

/// Holomorphic map into `G_k(ℂⁿ)` given by `k` polynomial frame vectors,
/// with the ambient Hermitian metric recorded alongside.
#[derive(Clone, Debug, PartialEq)]
pub struct HolCurve<F: Scalar = GaussianRational> {
    n: usize,
    frame: Vec<PolyVector<UniPoly<F>>>,
    metric: DiagonalMetric,
}

impl<F: Scalar> HolCurve<F> {
    /// Builds a curve from its frame. A rank-one frame has the common
    /// factor of its entries removed (exact backend).
    pub fn new(frame: Vec<PolyVector<UniPoly<F>>>, metric: DiagonalMetric) -> Result<Self> {
        let n = metric.dim();
        if frame.is_empty() || frame.len() > n {
            return Err(Error::RankDeficient { needed: 1, found: frame.len() });
        }
        if let Some(v) = frame.iter().find(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.dim() });
        }
        if !independent(&frame, n)? {
            return Err(Error::RankDeficient { needed: frame.len(), found: frame.len() - 1 });
        }
        let frame = if frame.len() == 1 && F::EXACT {
            vec![remove_content(&frame[0])]
        } else {
            frame
        };
        Ok(Self { n, frame, metric })
    }

    /// Curve in `ℂⁿ` with the standard metric.
    pub fn standard(frame: Vec<PolyVector<UniPoly<F>>>) -> Result<Self> {
        let n = frame.first().map_or(0, PolyVector::dim);
        Self::new(frame, DiagonalMetric::identity(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.frame.len()
    }

    pub fn frame(&self) -> &[PolyVector<UniPoly<F>>] {
        &self.frame
    }

    pub fn metric(&self) -> &DiagonalMetric {
        &self.metric
    }

    /// Linear fullness: the coefficient vectors of all frame entries span ℂⁿ.
    pub fn is_full(&self) -> bool {
        let deg = self.frame.iter().filter_map(PolyVector::max_degree).max().unwrap_or(0);
        let rows: Vec<Vec<F>> = (0..self.n)
            .map(|i| {
                self.frame
                    .iter()
                    .flat_map(|v| (0..=deg).map(move |d| v.entries()[i].coeff(d)))
                    .collect()
            })
            .collect();
        matrix_rank(rows) == self.n
    }

    /// Image under the unitary `e_i ↦ u_i e_{perm(i)}`: coordinate `perm[i]`
    /// of the result is `units[i]` times coordinate `i` of the input. Units
    /// must have modulus one.
    pub fn signed_permutation(&self, perm: &[usize], units: &[F]) -> Result<Self> {
        let n = self.n;
        let mut seen = vec![false; n];
        if perm.len() != n || units.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidInput("not a permutation of the coordinates".into()));
        }
        let mut inverse = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        let frame = self
            .frame
            .iter()
            .map(|v| {
                PolyVector::new(
                    inverse.iter().map(|&i| v.entries()[i].scale(&units[i])).collect(),
                )
            })
            .collect();
        Ok(Self { n, frame, metric: self.metric.permuted(&inverse) })
    }

    pub fn to_float(&self) -> HolCurve<crate::Complex64> {
        HolCurve {
            n: self.n,
            frame: self.frame.iter().map(|v| v.map(UniPoly::to_float)).collect(),
            metric: self.metric.clone(),
        }
    }

    /// `‖·‖²` of the Plücker section of the frame.
    pub fn norm_square(&self) -> Result<HermPoly<F>> {
        let w = wedge(&self.frame, self.n)?;
        self.metric.wedge_power(self.rank()).hol_norm_square(&w)
    }
}

fn remove_content<F: Scalar>(v: &PolyVector<UniPoly<F>>) -> PolyVector<UniPoly<F>> {
    let g = v.entries().iter().fold(UniPoly::zero(), |g, e| gcd_univariate(&g, e));
    if g.is_constant() {
        return v.clone();
    }
    v.map(|e| e.div_exact(&g).expect("gcd divides every entry"))
}

/// Span of a term ψ_j of a harmonic sequence, by polynomial representatives.
#[derive(Clone, Debug, PartialEq)]
pub struct Subbundle<F: Scalar = GaussianRational> {
    index: usize,
    frame: Vec<PolyVector<HermPoly<F>>>,
    metric: DiagonalMetric,
    factors: Vec<HermPoly<F>>,
}

impl<F: Scalar> Subbundle<F> {
    pub fn from_curve(c: &HolCurve<F>) -> Self {
        Self {
            index: 0,
            frame: c.frame.iter().map(PolyVector::to_herm).collect(),
            metric: c.metric.clone(),
            factors: vec![one_plus_zzbar()],
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn rank(&self) -> usize {
        self.frame.len()
    }

    pub fn n(&self) -> usize {
        self.metric.dim()
    }

    pub fn frame(&self) -> &[PolyVector<HermPoly<F>>] {
        &self.frame
    }

    pub fn metric(&self) -> &DiagonalMetric {
        &self.metric
    }

    /// `G[r][c] = ⟨f_c, f_r⟩`.
    pub fn gram(&self) -> Result<Vec<Vec<HermPoly<F>>>> {
        self.frame
            .iter()
            .map(|fr| self.frame.iter().map(|fc| self.metric.pairing(fc, fr)).collect())
            .collect()
    }

    /// Frame of a holomorphic subbundle as holomorphic vectors, if it is one.
    pub fn holomorphic_frame(&self) -> Option<Vec<PolyVector<UniPoly<F>>>> {
        self.frame
            .iter()
            .map(|v| v.entries().iter().map(HermPoly::to_holomorphic).collect::<Option<Vec<_>>>().map(PolyVector::new))
            .collect()
    }
}

/// Divides a polynomial vector by its monomial content and, in exact mode,
/// by every power of the candidate factors dividing all entries; then makes
/// the leading coefficient of the first nonzero entry one.
fn reduce_vector<F: Scalar>(v: PolyVector<HermPoly<F>>, factors: &[HermPoly<F>]) -> PolyVector<HermPoly<F>> {
    let nonzero: Vec<_> = v.entries().iter().filter(|e| !e.is_zero()).collect();
    let Some(first) = nonzero.first() else { return v };
    let m = nonzero.iter().fold(first.min_exponents(), |m, e| {
        let e = e.min_exponents();
        Monomial { z: m.z.min(e.z), zbar: m.zbar.min(e.zbar) }
    });
    let mut v = if m == Monomial::ONE { v } else { v.map(|e| e.div_monomial(m)) };
    if F::EXACT {
        for f in factors.iter().filter(|f| !f.is_constant()) {
            loop {
                let divided: Option<Vec<_>> = v.entries().iter().map(|e| e.div_exact(f)).collect();
                match divided {
                    Some(d) => v = PolyVector::new(d),
                    None => break,
                }
            }
        }
    }
    let lead = v
        .entries()
        .iter()
        .find_map(|e| e.leading().map(|(_, c)| c.clone()))
        .expect("nonzero vector");
    let inv = F::one() / lead;
    v.map(|e| e.scale(&inv))
}

/// Candidate factors contributed by a Gram determinant.
fn gram_factors<F: Scalar>(det: &HermPoly<F>) -> Vec<HermPoly<F>> {
    let mut out = Vec::new();
    if det.is_constant() {
        return out;
    }
    out.push(det.clone());
    if let Ok((m, rest)) = factor_out(det, &one_plus_zzbar()) {
        if m > 0 && !rest.is_constant() {
            out.push(rest);
        }
    }
    out
}

/// `ψ_{j+1} = Image A′_{ψ_j}`: each frame vector's z-derivative projected
/// onto the orthogonal complement of `ψ_j`, then reduced to an independent
/// spanning set. The projection uses Cramer's rule on the Gram matrix, so
/// `det G · (∂f − F G⁻¹ ⟨∂f, F⟩)` stays polynomial.
pub fn gauss_transform<F: Scalar>(psi: &Subbundle<F>) -> Result<Subbundle<F>> {
    let n = psi.n();
    let next = |frame, factors| Subbundle { index: psi.index + 1, frame, metric: psi.metric.clone(), factors };
    if psi.rank() == 0 {
        return Ok(next(Vec::new(), psi.factors.clone()));
    }
    let g = psi.gram()?;
    let det = determinant(&g);
    let scale = psi.frame.iter().map(|f| f.magnitude().powi(2)).product();
    if negligible(&det, scale) {
        return Err(Error::SingularGram);
    }
    let mut factors = psi.factors.clone();
    for f in gram_factors(&det) {
        if !factors.contains(&f) {
            factors.push(f);
        }
    }
    let mut selected: Vec<PolyVector<HermPoly<F>>> = Vec::new();
    for f in &psi.frame {
        let df = f.diff(Var::Z);
        let b: Vec<HermPoly<F>> = psi.frame.iter().map(|fj| psi.metric.pairing(&df, fj)).collect::<Result<_>>()?;
        let mut v = df.scale(&det);
        for i in 0..psi.rank() {
            let mut m = g.clone();
            for (row, bj) in m.iter_mut().zip(&b) {
                row[i] = bj.clone();
            }
            let c = determinant(&m);
            if !c.is_zero() {
                v = v.sub(&psi.frame[i].scale(&c));
            }
        }
        let size = det.magnitude() * df.magnitude();
        if v.entries().iter().all(|e| negligible(e, size)) {
            continue;
        }
        let v = reduce_vector(v, &factors);
        let mut trial = selected.clone();
        trial.push(v.clone());
        if independent(&trial, n)? {
            selected = trial;
        }
    }
    Ok(next(selected, factors))
}

/// The chain `ψ_0, ψ_1, …, ψ_p` of a holomorphic curve.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicSequence<F: Scalar = GaussianRational> {
    terms: Vec<Subbundle<F>>,
}

impl<F: Scalar> HarmonicSequence<F> {
    pub fn terms(&self) -> &[Subbundle<F>] {
        &self.terms
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.terms.iter().map(Subbundle::rank).collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n(&self) -> usize {
        self.terms[0].n()
    }

    /// The holomorphic curve `ψ_0` the sequence starts from.
    pub fn curve(&self) -> Result<HolCurve<F>> {
        let first = &self.terms[0];
        let frame = first
            .holomorphic_frame()
            .ok_or_else(|| Error::InvalidInput("first term is not holomorphic".into()))?;
        HolCurve::new(frame, first.metric.clone())
    }
}

/// Iterates [`gauss_transform`] from `ψ_0` until the rank drops to zero or
/// the ranks sum to `n`, and checks that distinct terms are orthogonal.
pub fn harmonic_sequence<F: Scalar>(psi0: &HolCurve<F>) -> Result<HarmonicSequence<F>> {
    let n = psi0.n();
    let mut terms = vec![Subbundle::from_curve(psi0)];
    let mut total = psi0.rank();
    // once the ranks fill ℂ^n the next term is orthogonal to everything
    while total < n {
        let next = gauss_transform(terms.last().expect("nonempty"))?;
        if next.rank() == 0 {
            break;
        }
        total += next.rank();
        terms.push(next);
        if terms.len() > n || total > n {
            return Err(Error::NonTerminating(terms.len()));
        }
    }
    for j in 1..terms.len() {
        for i in 0..j {
            for a in &terms[i].frame {
                for b in &terms[j].frame {
                    let p = psi0.metric.pairing(a, b)?;
                    if !negligible(&p, a.magnitude() * b.magnitude()) {
                        return Err(Error::NotOrthogonal(i, j));
                    }
                }
            }
        }
    }
    Ok(HarmonicSequence { terms })
}

/// Osculating data of a holomorphic curve: the frame derivatives selected
/// greedily in (derivative order, frame index) order, and the cumulative
/// ranks `k⁽ʲ⁾ = dim ψ_0 ⊕ … ⊕ ψ_j`.
#[derive(Clone, Debug)]
pub struct Osculating<F: Scalar> {
    selected: Vec<PolyVector<UniPoly<F>>>,
    cumulative: Vec<usize>,
}

impl<F: Scalar> Osculating<F> {
    pub fn new(c: &HolCurve<F>) -> Result<Self> {
        let n = c.n();
        let mut current: Vec<PolyVector<UniPoly<F>>> = c.frame().to_vec();
        let mut selected: Vec<PolyVector<UniPoly<F>>> = Vec::new();
        let mut cumulative = Vec::new();
        for _order in 0..n {
            for v in &current {
                if selected.len() == n || v.is_zero() {
                    continue;
                }
                let mut trial = selected.clone();
                trial.push(v.clone());
                if independent(&trial, n)? {
                    selected = trial;
                }
            }
            if cumulative.last() == Some(&selected.len()) {
                break;
            }
            cumulative.push(selected.len());
            if selected.len() == n {
                break;
            }
            current = current.iter().map(PolyVector::derivative).collect();
        }
        Ok(Self { selected, cumulative })
    }

    /// `k⁽⁰⁾, k⁽¹⁾, …` up to the level where the span stops growing.
    pub fn cumulative_ranks(&self) -> &[usize] {
        &self.cumulative
    }

    /// Ranks `k_j = k⁽ʲ⁾ − k⁽ʲ⁻¹⁾`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut prev = 0;
        self.cumulative
            .iter()
            .map(|&k| {
                let r = k - prev;
                prev = k;
                r
            })
            .collect()
    }

    pub fn frame(&self, j: usize) -> Result<&[PolyVector<UniPoly<F>>]> {
        match self.cumulative.get(j) {
            Some(&k) => Ok(&self.selected[..k]),
            None => {
                let found = self.cumulative.last().copied().unwrap_or(0);
                Err(Error::RankDeficient { needed: found + 1, found })
            }
        }
    }

    /// Holomorphic Plücker section σ̂_j of `ψ⁽ʲ⁾`, content removed in exact mode.
    pub fn section(&self, j: usize) -> Result<PolyVector<UniPoly<F>>> {
        let frame = self.frame(j)?;
        let n = self.selected[0].dim();
        let w = wedge(frame, n)?;
        Ok(if F::EXACT { remove_content(&w) } else { w })
    }
}

/// Where γ_j vanishes among the points the affine chart sees explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchSummary {
    pub at_origin: bool,
    pub at_infinity: bool,
    pub radial: bool,
}

/// Primitive map `Ψ = (ψ_0, …, ψ_p)` into the flag manifold
/// `F_{k_0,…,k_p}`, with the Plücker sections σ̂_j, their norm squares β_j
/// and the densities γ_j = ∂∂̄ log β_j for `j < p`.
#[derive(Clone, Debug)]
pub struct PrimitiveLift<F: Scalar = GaussianRational> {
    n: usize,
    ranks: Vec<usize>,
    metric: DiagonalMetric,
    sections: Vec<PolyVector<UniPoly<F>>>,
    section_metrics: Vec<DiagonalMetric>,
    betas: Vec<HermPoly<F>>,
    gammas: Vec<RationalFn<F>>,
    sequence: Option<HarmonicSequence<F>>,
    compact: bool,
}

impl<F: Scalar> PrimitiveLift<F> {
    /// Assembles a lift from its Plücker sections, computing β_j and γ_j.
    pub fn from_sections(
        ranks: Vec<usize>,
        metric: DiagonalMetric,
        sections: Vec<PolyVector<UniPoly<F>>>,
    ) -> Result<Self> {
        let n = metric.dim();
        let sum: usize = ranks.iter().sum();
        if sum != n {
            return Err(Error::NotAFlag { sum, n });
        }
        if sections.len() + 1 != ranks.len() {
            return Err(Error::DimensionMismatch { expected: ranks.len() - 1, found: sections.len() });
        }
        let mut k = 0;
        let mut section_metrics = Vec::new();
        let mut betas = Vec::new();
        let mut gammas = Vec::new();
        for (j, s) in sections.iter().enumerate() {
            k += ranks[j];
            let m = metric.wedge_power(k);
            let beta = m.hol_norm_square(s)?;
            let gamma = laplace_log(&beta)?;
            if gamma.is_zero() {
                return Err(Error::NotImmersion(j));
            }
            section_metrics.push(m);
            betas.push(beta);
            gammas.push(gamma);
        }
        Ok(Self { n, ranks, metric, sections, section_metrics, betas, gammas, sequence: None, compact: true })
    }

    /// Builds the harmonic sequence of `c` and lifts it.
    pub fn from_curve(c: &HolCurve<F>) -> Result<Self> {
        primitive_lift(&harmonic_sequence(c)?)
    }

    /// Marks the underlying curve as defined on the whole sphere or only on
    /// a subdomain.
    pub fn with_compact(mut self, compact: bool) -> Self {
        self.compact = compact;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Number of densities γ_j (one less than the number of terms).
    pub fn p(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn metric(&self) -> &DiagonalMetric {
        &self.metric
    }

    pub fn compact(&self) -> bool {
        self.compact
    }

    pub fn sequence(&self) -> Option<&HarmonicSequence<F>> {
        self.sequence.as_ref()
    }

    pub fn sections(&self) -> &[PolyVector<UniPoly<F>>] {
        &self.sections
    }

    pub fn section_metric(&self, j: usize) -> Result<&DiagonalMetric> {
        self.section_metrics.get(j).ok_or(Error::IndexOutOfRange { index: j, bound: self.p() })
    }

    pub fn betas(&self) -> &[HermPoly<F>] {
        &self.betas
    }

    pub fn beta(&self, j: usize) -> Result<&HermPoly<F>> {
        self.betas.get(j).ok_or(Error::IndexOutOfRange { index: j, bound: self.p() })
    }

    pub fn gammas(&self) -> &[RationalFn<F>] {
        &self.gammas
    }

    pub fn gamma(&self, j: usize) -> Result<&RationalFn<F>> {
        self.gammas.get(j).ok_or(Error::IndexOutOfRange { index: j, bound: self.p() })
    }

    /// The same lift with coefficients rounded to double precision.
    pub fn to_float(&self) -> PrimitiveLift<crate::Complex64> {
        PrimitiveLift {
            n: self.n,
            ranks: self.ranks.clone(),
            metric: self.metric.clone(),
            sections: self.sections.iter().map(|s| s.map(UniPoly::to_float)).collect(),
            section_metrics: self.section_metrics.clone(),
            betas: self.betas.iter().map(HermPoly::to_float).collect(),
            gammas: self.gammas.iter().map(RationalFn::to_float).collect(),
            sequence: None,
            compact: self.compact,
        }
    }

    /// Flag manifold label, e.g. `F_{2,2,1}`.
    pub fn flag_type(&self) -> String {
        let ks: Vec<String> = self.ranks.iter().map(usize::to_string).collect();
        format!("F_{{{}}}", ks.join(","))
    }

    /// Zeros of γ_j at `z = 0` and `z = ∞`. In the chart `w = 1/z` the
    /// density picks up `|z|⁴`, so γ_j vanishes at infinity when it decays
    /// faster than `|z|⁻⁴`.
    pub fn branch_summary(&self, j: usize) -> Result<BranchSummary> {
        let g = self.gamma(j)?;
        let at_origin = g.num().coeff(Monomial::ONE).is_none();
        let decay = g.den().total_degree() as i64 - g.num().total_degree() as i64;
        Ok(BranchSummary { at_origin, at_infinity: decay > 4, radial: g.num().is_radial() && g.den().is_radial() })
    }
}

/// Lifts a harmonic sequence whose ranks add up to `n`. The Plücker
/// sections come from the osculating frames of `ψ_0`, whose ranks must
/// agree with the sequence.
pub fn primitive_lift<F: Scalar>(seq: &HarmonicSequence<F>) -> Result<PrimitiveLift<F>> {
    let n = seq.n();
    let ranks = seq.ranks();
    let sum: usize = ranks.iter().sum();
    if sum != n {
        return Err(Error::NotAFlag { sum, n });
    }
    let curve = seq.curve()?;
    let osc = Osculating::new(&curve)?;
    if osc.ranks() != ranks {
        return Err(Error::InvalidInput(format!(
            "osculating ranks {:?} disagree with the sequence ranks {:?}",
            osc.ranks(),
            ranks
        )));
    }
    let sections = (0..ranks.len() - 1).map(|j| osc.section(j)).collect::<Result<Vec<_>>>()?;
    let mut lift = PrimitiveLift::from_sections(ranks, curve.metric().clone(), sections)?;
    lift.sequence = Some(seq.clone());
    Ok(lift)
}

/// σ̂_j of a lift as a rank-one curve in `Λ^{k⁽ʲ⁾} ℂⁿ`.
pub fn osculating_plucker<F: Scalar>(lift: &PrimitiveLift<F>, j: usize) -> Result<HolCurve<F>> {
    let s = lift.sections.get(j).ok_or(Error::IndexOutOfRange { index: j, bound: lift.p() })?;
    HolCurve::new(vec![s.clone()], lift.section_metrics[j].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::hermitian_pairing;
    use crate::hermpoly::{parse_hol, parse_poly};

    type Q = GaussianRational;

    fn hol(xs: &[&str]) -> PolyVector<UniPoly<Q>> {
        PolyVector::new(xs.iter().map(|s| parse_hol(s).unwrap()).collect())
    }

    fn rf(n: &str, d: &str) -> RationalFn<Q> {
        RationalFn::new(parse_poly(n).unwrap(), parse_poly(d).unwrap()).unwrap()
    }

    fn example1() -> HolCurve<Q> {
        HolCurve::standard(vec![hol(&["1", "0", "2z", "2z^2", "z^2"]), hol(&["0", "1", "0", "z^2", "0"])]).unwrap()
    }

    #[test]
    fn gauss_transform_matches_projection_formula() {
        let c = HolCurve::standard(vec![hol(&["1", "z", "z^2"])]).unwrap();
        let psi1 = gauss_transform(&Subbundle::from_curve(&c)).unwrap();
        assert_eq!(psi1.rank(), 1);
        // |f_0|² ∂f_0 − ⟨∂f_0, f_0⟩ f_0
        let f0 = c.frame()[0].to_herm();
        let df = f0.diff(Var::Z);
        let expected = df
            .scale(&parse_poly("1 + z zbar + z^2 zbar^2").unwrap())
            .sub(&f0.scale(&hermitian_pairing(&df, &f0).unwrap()));
        let w = wedge(&[psi1.frame()[0].clone(), expected], 3).unwrap();
        assert!(w.is_zero());
    }

    #[test]
    fn constant_curve_terminates() {
        let c = HolCurve::standard(vec![hol(&["1", "0", "0"])]).unwrap();
        assert_eq!(gauss_transform(&Subbundle::from_curve(&c)).unwrap().rank(), 0);
        assert!(!c.is_full());
    }

    #[test]
    fn sequence_ranks() {
        let c = HolCurve::standard(vec![hol(&["1", "z", "z^2"])]).unwrap();
        assert_eq!(harmonic_sequence(&c).unwrap().ranks(), vec![1, 1, 1]);
        let seq = harmonic_sequence(&example1()).unwrap();
        assert_eq!(seq.ranks(), vec![2, 2, 1]);
        let lift = primitive_lift(&seq).unwrap();
        assert_eq!(lift.flag_type(), "F_{2,2,1}");
        assert_eq!(lift.beta(0).unwrap(), &parse_poly("1 + z zbar").unwrap().pow(4));
        assert_eq!(lift.gamma(0).unwrap(), &rf("4", "1 + 2z zbar + z^2 zbar^2"));
        assert_eq!(lift.gamma(1).unwrap(), &rf("1 + 4z zbar + z^2 zbar^2", "1 + 2z zbar + 3z^2 zbar^2 + 2z^3 zbar^3 + z^4 zbar^4"));
    }

    #[test]
    fn not_a_flag() {
        let c = HolCurve::standard(vec![hol(&["1", "z", "0"])]).unwrap();
        let seq = harmonic_sequence(&c).unwrap();
        assert_eq!(primitive_lift(&seq).unwrap_err(), Error::NotAFlag { sum: 2, n: 3 });
    }

    #[test]
    fn plucker_of_rank_one_curve_is_the_curve() {
        let c = HolCurve::standard(vec![hol(&["1", "z", "z^2"])]).unwrap();
        let lift = PrimitiveLift::from_curve(&c).unwrap();
        assert_eq!(osculating_plucker(&lift, 0).unwrap().frame()[0], c.frame()[0]);
    }

    #[test]
    fn content_is_removed() {
        let c = HolCurve::standard(vec![hol(&["z", "z^2 + z"])]).unwrap();
        assert_eq!(c.frame()[0], hol(&["1", "z + 1"]));
    }

    #[test]
    fn dependent_frames_are_rejected() {
        let e = HolCurve::standard(vec![hol(&["1", "z"]), hol(&["2", "2z"])]).unwrap_err();
        assert!(matches!(e, Error::RankDeficient { .. }));
    }

    #[test]
    fn signed_permutation_keeps_gamma() {
        let c = HolCurve::standard(vec![hol(&["1", "2z", "z^2"])]).unwrap();
        let u = c
            .signed_permutation(&[2, 0, 1], &[Q::i(), -Q::from_ints(1, 0), Q::from_ints(1, 0)])
            .unwrap();
        assert_eq!(u.frame()[0].entries()[2], parse_hol("(0+1i)").unwrap());
        let a = PrimitiveLift::from_curve(&c).unwrap();
        let b = PrimitiveLift::from_curve(&u).unwrap();
        assert_eq!(a.gammas(), b.gammas());
    }

    #[test]
    fn branch_summary_of_sphere() {
        let c = HolCurve::standard(vec![hol(&["1", "z"])]).unwrap();
        let lift = PrimitiveLift::from_curve(&c).unwrap();
        let b = lift.branch_summary(0).unwrap();
        assert_eq!(b, BranchSummary { at_origin: false, at_infinity: false, radial: true });
        let c = HolCurve::standard(vec![hol(&["1", "z^2"])]).unwrap();
        let b = PrimitiveLift::from_curve(&c).unwrap().branch_summary(0).unwrap();
        assert!(b.at_origin && b.at_infinity);
    }
}
