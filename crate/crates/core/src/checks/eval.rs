//! Evaluation workspace: memoized means plus one routine per catalog entry.
//!
//! A [`Workspace`] wraps one `(tuple, map)` instance and lazily computes the
//! expensive shared ingredients — the mapped tuple, the arithmetic/harmonic
//! means, and for each requested order `t` the triple `P_t` of the tuple,
//! `P_t` of the mapped tuple, and the map of `P_t` (likewise for the Karcher
//! mean). A catalog sweep therefore solves each fixed-point problem once, no
//! matter how many checks consume it. Solver failures are cached too, so a
//! divergent configuration is not retried per check.

use std::cell::{OnceCell, RefCell};
use std::collections::BTreeMap;
use std::rc::Rc;

use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::hpd::{thompson_distance, HpdMatrix};
use crate::maps::UcpMap;
use crate::matrix::{ComplexMatrix, Cx};
use crate::means::{
    arithmetic_mean, harmonic_mean, karcher_mean, power_mean, two_mean, MatrixTuple, MeanKind,
    WeightVector,
};
use crate::norm::{ui_norm, NormKind};
use crate::scalar::{real, Real};

use super::constants::Constants;
use super::{CheckId, CheckParams, Verdict};

/// Cached value or the stringified error of the failed attempt.
type Cached<X> = std::result::Result<X, String>;

fn cached<X>(slot: &Cached<X>) -> Result<&X> {
    slot.as_ref().map_err(|s| Error::Domain(s.clone()))
}

fn cached_rc<X>(slot: &Cached<Rc<X>>) -> Result<Rc<X>> {
    slot.as_ref().map(Rc::clone).map_err(|s| Error::Domain(s.clone()))
}

fn t_bits<T: Real>(t: T) -> u64 {
    t.to_f64().unwrap_or(f64::NAN).to_bits()
}

/// The three faces of one mean: on the raw tuple, on the mapped tuple, and
/// the map applied to the raw-tuple mean.
pub(crate) struct MeanSet<T: Real> {
    pub on_tuple: HpdMatrix<T>,
    pub on_phi_tuple: HpdMatrix<T>,
    pub phi_of: HpdMatrix<T>,
}

/// One comparison inside a (possibly composite) check.
struct Part<T: Real> {
    label: String,
    slack: T,
    scale: T,
    holds: bool,
    lhs_ext: (T, T),
    rhs_ext: (T, T),
}

pub(crate) struct Workspace<'a, T: Real> {
    tuple: &'a MatrixTuple<T>,
    map: &'a UcpMap<T>,
    tol_rel: T,
    phi_tuple: OnceCell<Cached<MatrixTuple<T>>>,
    pair_tuple: OnceCell<Cached<MatrixTuple<T>>>,
    arith: OnceCell<Cached<HpdMatrix<T>>>,
    harm: OnceCell<Cached<HpdMatrix<T>>>,
    phi_arith: OnceCell<Cached<HpdMatrix<T>>>,
    pair_geo: OnceCell<Cached<HpdMatrix<T>>>,
    pair_average: OnceCell<Cached<HpdMatrix<T>>>,
    phi_pair: OnceCell<Cached<(HpdMatrix<T>, HpdMatrix<T>)>>,
    power_sets: RefCell<BTreeMap<u64, Cached<Rc<MeanSet<T>>>>>,
    karcher_set: OnceCell<Cached<Rc<MeanSet<T>>>>,
}

impl<'a, T: Real> Workspace<'a, T> {
    pub(crate) fn new(tuple: &'a MatrixTuple<T>, map: &'a UcpMap<T>, tol_rel: T) -> Result<Self> {
        if map.in_dim() != tuple.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map expects dimension {}, tuple has dimension {}",
                map.in_dim(),
                tuple.dim()
            )));
        }
        if !(tol_rel.is_finite() && tol_rel >= T::zero()) {
            return Err(Error::BadParameter(format!(
                "relative tolerance must be finite and nonnegative, got {tol_rel}"
            )));
        }
        Ok(Workspace {
            tuple,
            map,
            tol_rel,
            phi_tuple: OnceCell::new(),
            pair_tuple: OnceCell::new(),
            arith: OnceCell::new(),
            harm: OnceCell::new(),
            phi_arith: OnceCell::new(),
            pair_geo: OnceCell::new(),
            pair_average: OnceCell::new(),
            phi_pair: OnceCell::new(),
            power_sets: RefCell::new(BTreeMap::new()),
            karcher_set: OnceCell::new(),
        })
    }

    pub(crate) fn evaluate(&self, id: CheckId, params: &CheckParams<T>) -> Result<Verdict<T>> {
        match id {
            CheckId::InterpPower => self.interp_power(params),
            CheckId::InterpKarcher => self.interp_karcher(params),
            CheckId::Amgm => self.amgm(params),
            CheckId::Choi => self.choi(params),
            CheckId::AndoGeo => self.ando_geo(params),
            CheckId::ReverseAndoP => self.reverse_ando_p(params),
            CheckId::MarshallOlkin => self.marshall_olkin(params),
            CheckId::PhiPower15 => self.phi_power_15(params),
            CheckId::DehghaniP => self.dehghani_p(params),
            CheckId::ThmP4 => self.thm_p4(params),
            CheckId::Haj2Scalar => self.haj2_scalar(params),
            CheckId::GeoReverseP => self.geo_reverse_p(params),
            CheckId::KarcherReverseP => self.karcher_reverse_p(params),
            CheckId::ArithBelowPower => self.arith_below_power(params),
            CheckId::AmgmCounterpart => self.amgm_counterpart(params),
            CheckId::ArithBelowKarcher => self.arith_below_karcher(params),
            CheckId::Chain13 => self.chain_13(params),
            CheckId::Thm17 => self.thm17(params),
            CheckId::Thm17Karcher => self.thm17_karcher(params),
            CheckId::AnticommPower => self.anticomm_power(params),
            CheckId::AnticommKarcher => self.anticomm_karcher(params),
            CheckId::NormUpper18 => self.norm_upper_18(params),
            CheckId::NormLower18 => self.norm_lower_18(params),
            CheckId::Refine23 => self.refine23(params),
            CheckId::Refine34 => self.refine34(params),
            CheckId::Lemma6Suite => self.lemma6_suite(params),
            CheckId::Lemma19Suite => self.lemma19_suite(params),
            CheckId::LedgerFactP30 => self.ledger_fact_p30(params),
        }
    }

    // ----- cached ingredients -------------------------------------------

    fn phi_tuple(&self) -> Result<&MatrixTuple<T>> {
        cached(
            self.phi_tuple
                .get_or_init(|| self.map.apply_tuple(self.tuple).map_err(|e| e.to_string())),
        )
    }

    fn arith(&self) -> Result<&HpdMatrix<T>> {
        cached(self.arith.get_or_init(|| arithmetic_mean(self.tuple).map_err(|e| e.to_string())))
    }

    fn harm(&self) -> Result<&HpdMatrix<T>> {
        cached(self.harm.get_or_init(|| harmonic_mean(self.tuple).map_err(|e| e.to_string())))
    }

    fn phi_arith(&self) -> Result<&HpdMatrix<T>> {
        cached(self.phi_arith.get_or_init(|| {
            self.arith()
                .and_then(|a| self.map.apply(a))
                .map_err(|e| e.to_string())
        }))
    }

    /// First two tuple members, for the pair-based checks.
    fn pair(&self) -> Result<(&HpdMatrix<T>, &HpdMatrix<T>)> {
        let ms = self.tuple.matrices();
        if ms.len() < 2 {
            return Err(Error::ParamOutOfDomain(
                "pair comparison needs a tuple with at least two matrices".into(),
            ));
        }
        Ok((&ms[0], &ms[1]))
    }

    /// Equal-weight tuple on the first two members.
    fn pair_tuple(&self) -> Result<&MatrixTuple<T>> {
        cached(self.pair_tuple.get_or_init(|| {
            self.pair()
                .and_then(|(a1, a2)| {
                    MatrixTuple::new(vec![a1.clone(), a2.clone()], WeightVector::uniform(2))
                })
                .map_err(|e| e.to_string())
        }))
    }

    /// Geometric mean of the first two members.
    fn pair_geo(&self) -> Result<&HpdMatrix<T>> {
        cached(self.pair_geo.get_or_init(|| {
            self.pair()
                .and_then(|(a1, a2)| two_mean(a1, a2, real(0.5), MeanKind::Geometric))
                .map_err(|e| e.to_string())
        }))
    }

    /// Arithmetic mean of the first two members.
    fn pair_average(&self) -> Result<&HpdMatrix<T>> {
        cached(self.pair_average.get_or_init(|| {
            self.pair()
                .and_then(|(a1, a2)| {
                    HpdMatrix::new((a1.matrix() + a2.matrix()).scale(real(0.5)))
                })
                .map_err(|e| e.to_string())
        }))
    }

    /// Map images of the first two members.
    fn phi_pair(&self) -> Result<&(HpdMatrix<T>, HpdMatrix<T>)> {
        cached(self.phi_pair.get_or_init(|| {
            self.pair()
                .and_then(|(a1, a2)| Ok((self.map.apply(a1)?, self.map.apply(a2)?)))
                .map_err(|e| e.to_string())
        }))
    }

    fn power_set(&self, t: T) -> Result<Rc<MeanSet<T>>> {
        let key = t_bits(t);
        if let Some(slot) = self.power_sets.borrow().get(&key) {
            return cached_rc(slot);
        }
        let computed = self.build_mean_set(|tuple| Ok(power_mean(tuple, t)?.0));
        let slot = computed.map(Rc::new).map_err(|e| e.to_string());
        let out = cached_rc(&slot);
        self.power_sets.borrow_mut().insert(key, slot);
        out
    }

    fn karcher_set(&self) -> Result<Rc<MeanSet<T>>> {
        cached_rc(self.karcher_set.get_or_init(|| {
            self.build_mean_set(|tuple| Ok(karcher_mean(tuple)?.0))
                .map(Rc::new)
                .map_err(|e| e.to_string())
        }))
    }

    fn build_mean_set(
        &self,
        solve: impl Fn(&MatrixTuple<T>) -> Result<HpdMatrix<T>>,
    ) -> Result<MeanSet<T>> {
        let on_tuple = solve(self.tuple)?;
        let on_phi_tuple = solve(self.phi_tuple()?)?;
        let phi_of = self.map.apply(&on_tuple)?;
        Ok(MeanSet { on_tuple, on_phi_tuple, phi_of })
    }

    fn constants(&self, p: T) -> Result<Constants<T>> {
        let (m, big_m) = self.tuple.bounds();
        Constants::new(m, big_m, p)
    }

    // ----- comparison plumbing ------------------------------------------

    /// Loewner comparison `l <= r`, using the cached spectra for the scale.
    fn order_part(
        &self,
        label: impl Into<String>,
        l: &HpdMatrix<T>,
        r: &HpdMatrix<T>,
    ) -> Result<Part<T>> {
        let diff = (r.matrix() - l.matrix()).symmetrized();
        let slack = eigh(&diff)?.lambda_min();
        let scale = T::one() + l.lambda_max() + r.lambda_max();
        Ok(Part {
            label: label.into(),
            slack,
            scale,
            holds: slack >= -self.tol_rel * scale,
            lhs_ext: l.bounds(),
            rhs_ext: r.bounds(),
        })
    }

    /// Scalar comparison `l <= r`.
    fn scalar_part(&self, label: impl Into<String>, l: T, r: T) -> Part<T> {
        let slack = r - l;
        let scale = T::one() + l.abs() + r.abs();
        Part {
            label: label.into(),
            slack,
            scale,
            holds: slack >= -self.tol_rel * scale,
            lhs_ext: (l, l),
            rhs_ext: (r, r),
        }
    }

    /// Assembles a verdict from component parts: the reported slack is the
    /// worst relative slack, and the check holds iff every part holds.
    fn finish(
        &self,
        id: CheckId,
        params: &CheckParams<T>,
        constant: T,
        parts: Vec<Part<T>>,
        extra_notes: Vec<String>,
    ) -> Result<Verdict<T>> {
        debug_assert!(!parts.is_empty());
        let mut worst = 0;
        for (i, part) in parts.iter().enumerate() {
            if part.slack / part.scale < parts[worst].slack / parts[worst].scale {
                worst = i;
            }
        }
        let holds = parts.iter().all(|p| p.holds);
        let mut notes: Vec<String> = Vec::new();
        if parts.len() > 1 {
            notes.push(format!("binding: {}", parts[worst].label));
        }
        notes.extend(extra_notes);
        let w = &parts[worst];
        Ok(Verdict {
            id,
            holds,
            slack: w.slack,
            relative_slack: w.slack / w.scale,
            constant,
            params: *params,
            lhs_extremes: w.lhs_ext,
            rhs_extremes: w.rhs_ext,
            notes: notes.join("; "),
        })
    }

    // ----- parameter guards ---------------------------------------------

    fn need_t_nonzero(&self, t: T) -> Result<()> {
        if t.is_finite() && t != T::zero() && t.abs() <= T::one() {
            Ok(())
        } else {
            Err(Error::ParamOutOfDomain(format!(
                "power mean order must lie in [-1, 1] without 0, got t = {t}"
            )))
        }
    }

    fn need_t_positive(&self, t: T) -> Result<()> {
        if t.is_finite() && t > T::zero() && t <= T::one() {
            Ok(())
        } else {
            Err(Error::ParamOutOfDomain(format!(
                "this comparison is stated for t in (0, 1], got t = {t}"
            )))
        }
    }

    fn need_t_negative(&self, t: T) -> Result<()> {
        if t.is_finite() && t < T::zero() && t >= -T::one() {
            Ok(())
        } else {
            Err(Error::ParamOutOfDomain(format!(
                "this comparison is stated for t in [-1, 0), got t = {t}"
            )))
        }
    }

    fn need_p_in(&self, p: T, lo: f64, hi: f64) -> Result<()> {
        let lo_t: T = real(lo);
        let hi_t: T = real(hi);
        let ok = p.is_finite()
            && p > T::zero()
            && (lo <= 0.0 || p >= lo_t)
            && (hi.is_infinite() || p <= hi_t);
        if ok {
            Ok(())
        } else {
            let range = match (lo > 0.0, hi.is_finite()) {
                (true, true) => format!("[{lo}, {hi}]"),
                (true, false) => format!("[{lo}, inf)"),
                (false, true) => format!("(0, {hi}]"),
                (false, false) => "(0, inf)".to_string(),
            };
            Err(Error::ParamOutOfDomain(format!(
                "exponent p = {p} outside the proven range {range}"
            )))
        }
    }

    fn alpha_branch_note(&self, kantorovich: T, alpha: T, threshold_p: f64) -> String {
        if alpha <= kantorovich {
            format!("alpha branch: Kantorovich (p <= {threshold_p})")
        } else {
            format!("alpha branch: exponent-adjusted (p > {threshold_p})")
        }
    }

    // ----- the catalog, one routine per entry ---------------------------

    /// Harmonic <= P_t <= arithmetic.
    fn interp_power(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_t_nonzero(params.t)?;
        let set = self.power_set(params.t)?;
        let parts = vec![
            self.order_part("harmonic mean below the power mean", self.harm()?, &set.on_tuple)?,
            self.order_part("power mean below the arithmetic mean", &set.on_tuple, self.arith()?)?,
        ];
        self.finish(CheckId::InterpPower, params, T::one(), parts, vec![])
    }

    /// Harmonic <= Karcher <= arithmetic.
    fn interp_karcher(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        let set = self.karcher_set()?;
        let parts = vec![
            self.order_part("harmonic mean below the Karcher mean", self.harm()?, &set.on_tuple)?,
            self.order_part("Karcher mean below the arithmetic mean", &set.on_tuple, self.arith()?)?,
        ];
        self.finish(CheckId::InterpKarcher, params, T::one(), parts, vec![])
    }

    /// A1 # A2 <= (A1 + A2) / 2.
    fn amgm(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.pair()?;
        let parts = vec![self.order_part(
            "geometric mean below the pair average",
            self.pair_geo()?,
            self.pair_average()?,
        )?];
        self.finish(CheckId::Amgm, params, T::one(), parts, vec![])
    }

    /// Phi(A1)^-1 <= Phi(A1^-1).
    fn choi(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        let (phi_a1, _) = self.phi_pair_or_single()?;
        let (a1, _) = self.pair_or_single();
        let phi_inv = self.map.apply(&a1.inverse())?;
        let parts = vec![self.order_part(
            "inverse of the image below the image of the inverse",
            &phi_a1.inverse(),
            &phi_inv,
        )?];
        self.finish(CheckId::Choi, params, T::one(), parts, vec![])
    }

    /// Phi(A1 # A2) <= Phi(A1) # Phi(A2).
    fn ando_geo(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.pair()?;
        let (phi_a1, phi_a2) = self.phi_pair()?;
        let l = self.map.apply(self.pair_geo()?)?;
        let r = two_mean(phi_a1, phi_a2, real(0.5), MeanKind::Geometric)?;
        let parts = vec![self.order_part(
            "image of the geometric mean below the geometric mean of images",
            &l,
            &r,
        )?];
        self.finish(CheckId::AndoGeo, params, T::one(), parts, vec![])
    }

    /// (Phi(A1) # Phi(A2))^p <= sqrt(K)^p Phi(A1 # A2)^p for p in (0, 1].
    fn reverse_ando_p(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_p_in(params.p, 0.0, 1.0)?;
        self.pair()?;
        let c = self.constants(params.p)?;
        let factor = c.geo_reverse_base.powf(params.p);
        let (phi_a1, phi_a2) = self.phi_pair()?;
        let l = two_mean(phi_a1, phi_a2, real(0.5), MeanKind::Geometric)?.power(params.p);
        let r = self.map.apply(self.pair_geo()?)?.power(params.p).scale(factor);
        let parts = vec![self.order_part(
            "powered geometric mean of images below the scaled image power",
            &l,
            &r,
        )?];
        self.finish(CheckId::ReverseAndoP, params, factor, parts, vec![])
    }

    /// Phi(A1^-1) <= K Phi(A1)^-1.
    fn marshall_olkin(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        let c = self.constants(T::one())?;
        let (a1, _) = self.pair_or_single();
        let (phi_a1, _) = self.phi_pair_or_single()?;
        let l = self.map.apply(&a1.inverse())?;
        let r = phi_a1.inverse().scale(c.kantorovich);
        let parts = vec![self.order_part(
            "image of the inverse below the scaled inverse of the image",
            &l,
            &r,
        )?];
        self.finish(CheckId::MarshallOlkin, params, c.kantorovich, parts, vec![])
    }

    /// Phi(P_t(A)) <= P_t(Phi(A)) for t in (0, 1].
    fn phi_power_15(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_t_positive(params.t)?;
        let set = self.power_set(params.t)?;
        let parts = vec![self.order_part(
            "image of the power mean below the power mean of images",
            &set.phi_of,
            &set.on_phi_tuple,
        )?];
        self.finish(CheckId::PhiPower15, params, T::one(), parts, vec![])
    }

    /// P_t(Phi(A))^p <= K^p Phi(P_t(A))^p for p in (0, 2].
    fn dehghani_p(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_t_nonzero(params.t)?;
        self.need_p_in(params.p, 0.0, 2.0)?;
        let c = self.constants(params.p)?;
        let factor = c.kantorovich.powf(params.p);
        let set = self.power_set(params.t)?;
        let l = set.on_phi_tuple.power(params.p);
        let r = set.phi_of.power(params.p).scale(factor);
        let parts = vec![self.order_part(
            "powered mean of images below the scaled image power",
            &l,
            &r,
        )?];
        self.finish(CheckId::DehghaniP, params, factor, parts, vec![])
    }

    /// P_t(Phi(A))^p <= c^p Phi(P_t(A))^p with the large-p factor, p >= 2.
    fn thm_p4(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_t_nonzero(params.t)?;
        self.need_p_in(params.p, 2.0, f64::INFINITY)?;
        let c = self.constants(params.p)?;
        let factor = c.reverse_power_factor;
        let set = self.power_set(params.t)?;
        let l = set.on_phi_tuple.power(params.p);
        let r = set.phi_of.power(params.p).scale(factor);
        let parts = vec![self.order_part(
            "powered mean of images below the sharply scaled image power",
            &l,
            &r,
        )?];
        self.finish(CheckId::ThmP4, params, factor, parts, vec![])
    }

    /// m M Phi(A_i^-1) + Phi(A_i) <= (m + M) I for every member.
    fn haj2_scalar(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        let (m, big_m) = self.tuple.bounds();
        let bound = m + big_m;
        let r = HpdMatrix::identity(self.map.out_dim()).scale(bound);
        let mut parts = Vec::new();
        for (i, a) in self.tuple.matrices().iter().enumerate() {
            let phi_inv = self.map.apply(&a.inverse())?;
            let phi_a = self.map.apply(a)?;
            let sum = &phi_inv.matrix().scale(m * big_m) + phi_a.matrix();
            let l = HpdMatrix::new(sum)?;
            parts.push(self.order_part(format!("member {}", i + 1), &l, &r)?);
        }
        self.finish(CheckId::Haj2Scalar, params, bound, parts, vec![])
    }

    /// (Phi(A1) #_s Phi(A2))^p <= c^p Phi(A1 #_s A2)^p over interior weights,
    /// p >= 2.
    fn geo_reverse_p(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_p_in(params.p, 2.0, f64::INFINITY)?;
        let c = self.constants(params.p)?;
        let factor = c.reverse_power_factor;
        let (a1, a2) = self.pair()?;
        let (phi_a1, phi_a2) = self.phi_pair()?;
        let mut parts = Vec::new();
        for s in [0.25, 0.5, 0.75] {
            let weight: T = real(s);
            let l = two_mean(phi_a1, phi_a2, weight, MeanKind::Geometric)?.power(params.p);
            let r = self
                .map
                .apply(&two_mean(a1, a2, weight, MeanKind::Geometric)?)?
                .power(params.p)
                .scale(factor);
            parts.push(self.order_part(format!("weight {s}"), &l, &r)?);
        }
        self.finish(
            CheckId::GeoReverseP,
            params,
            factor,
            parts,
            vec!["interior weights sampled at 1/4, 1/2, 3/4".into()],
        )
    }

    /// Karcher(Phi(A))^p <= c^p Phi(Karcher(A))^p, p >= 2.
    fn karcher_reverse_p(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_p_in(params.p, 2.0, f64::INFINITY)?;
        let c = self.constants(params.p)?;
        let factor = c.reverse_power_factor;
        let set = self.karcher_set()?;
        let l = set.on_phi_tuple.power(params.p);
        let r = set.phi_of.power(params.p).scale(factor);
        let parts = vec![self.order_part(
            "powered Karcher mean of images below the scaled image power",
            &l,
            &r,
        )?];
        self.finish(CheckId::KarcherReverseP, params, factor, parts, vec![])
    }

    /// Arithmetic mean <= K P_t.
    fn arith_below_power(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_t_nonzero(params.t)?;
        let c = self.constants(T::one())?;
        let set = self.power_set(params.t)?;
        let r = set.on_tuple.scale(c.kantorovich);
        let parts = vec![self.order_part(
            "arithmetic mean below the scaled power mean",
            self.arith()?,
            &r,
        )?];
        self.finish(CheckId::ArithBelowPower, params, c.kantorovich, parts, vec![])
    }

    /// (A1 + A2) / 2 <= K (A1 # A2).
    fn amgm_counterpart(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.pair()?;
        let c = self.constants(T::one())?;
        let r = self.pair_geo()?.scale(c.kantorovich);
        let parts = vec![self.order_part(
            "pair average below the scaled geometric mean",
            self.pair_average()?,
            &r,
        )?];
        self.finish(CheckId::AmgmCounterpart, params, c.kantorovich, parts, vec![])
    }

    /// Arithmetic mean <= K Karcher mean.
    fn arith_below_karcher(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        let c = self.constants(T::one())?;
        let set = self.karcher_set()?;
        let r = set.on_tuple.scale(c.kantorovich);
        let parts = vec![self.order_part(
            "arithmetic mean below the scaled Karcher mean",
            self.arith()?,
            &r,
        )?];
        self.finish(CheckId::ArithBelowKarcher, params, c.kantorovich, parts, vec![])
    }

    /// Phi(arith) <= K Phi(P_t) and Phi(arith) <= K P_t(Phi(A)).
    fn chain_13(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_t_nonzero(params.t)?;
        let c = self.constants(T::one())?;
        let set = self.power_set(params.t)?;
        let phi_arith = self.phi_arith()?;
        let parts = vec![
            self.order_part(
                "mapped arithmetic mean below the scaled image of the power mean",
                phi_arith,
                &set.phi_of.scale(c.kantorovich),
            )?,
            self.order_part(
                "mapped arithmetic mean below the scaled power mean of images",
                phi_arith,
                &set.on_phi_tuple.scale(c.kantorovich),
            )?,
        ];
        self.finish(CheckId::Chain13, params, c.kantorovich, parts, vec![])
    }

    /// Phi(arith)^p <= alpha^p Phi(P_t)^p with the branch-wise alpha.
    fn thm17(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_t_nonzero(params.t)?;
        self.need_p_in(params.p, 0.0, f64::INFINITY)?;
        let c = self.constants(params.p)?;
        let factor = c.alpha_order.powf(params.p);
        let set = self.power_set(params.t)?;
        let l = self.phi_arith()?.power(params.p);
        let r = set.phi_of.power(params.p).scale(factor);
        let note = self.alpha_branch_note(c.kantorovich, c.alpha_order, 2.0);
        let parts = vec![self.order_part(
            "powered mapped arithmetic mean below the scaled image power",
            &l,
            &r,
        )?];
        self.finish(CheckId::Thm17, params, factor, parts, vec![note])
    }

    /// Phi(arith)^p <= alpha^p Phi(Karcher)^p, p >= 1.
    fn thm17_karcher(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_p_in(params.p, 1.0, f64::INFINITY)?;
        let c = self.constants(params.p)?;
        let factor = c.alpha_order.powf(params.p);
        let set = self.karcher_set()?;
        let l = self.phi_arith()?.power(params.p);
        let r = set.phi_of.power(params.p).scale(factor);
        let note = self.alpha_branch_note(c.kantorovich, c.alpha_order, 2.0);
        let parts = vec![self.order_part(
            "powered mapped arithmetic mean below the scaled Karcher image power",
            &l,
            &r,
        )?];
        self.finish(CheckId::Thm17Karcher, params, factor, parts, vec![note])
    }

    /// lambda_max(X^p Y^-p + Y^-p X^p) <= 2 alpha^p for the power-mean pair
    /// X = P_t(Phi(A)), Y = Phi(P_t(A)), and for X replaced by Phi(arith).
    fn anticomm_power(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_t_nonzero(params.t)?;
        self.need_p_in(params.p, 0.0, f64::INFINITY)?;
        let set = self.power_set(params.t)?;
        self.anticommutator_verdict(
            CheckId::AnticommPower,
            params,
            &set.on_phi_tuple,
            &set.phi_of,
            "power mean of images",
        )
    }

    /// Karcher-mean version of the anticommutator eigenvalue bound.
    fn anticomm_karcher(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_p_in(params.p, 0.0, f64::INFINITY)?;
        let set = self.karcher_set()?;
        self.anticommutator_verdict(
            CheckId::AnticommKarcher,
            params,
            &set.on_phi_tuple,
            &set.phi_of,
            "Karcher mean of images",
        )
    }

    fn anticommutator_verdict(
        &self,
        id: CheckId,
        params: &CheckParams<T>,
        mean_of_images: &HpdMatrix<T>,
        image_of_mean: &HpdMatrix<T>,
        mean_label: &str,
    ) -> Result<Verdict<T>> {
        let c = self.constants(params.p)?;
        let bound = real::<T>(2.0) * c.alpha_anticommutator.powf(params.p);
        let y_neg = image_of_mean.power(-params.p);
        let mean_pow = mean_of_images.power(params.p);
        let arith_pow = self.phi_arith()?.power(params.p);
        let mut parts = Vec::new();
        for (x_pow, label) in [(&mean_pow, mean_label), (&arith_pow, "mapped arithmetic mean")] {
            let product = x_pow.matrix() * y_neg.matrix();
            let herm = &product + &product.adjoint();
            let e = eigh(&herm)?;
            let mut part = self.scalar_part(
                format!("anticommutator with the {label}"),
                e.lambda_max(),
                bound,
            );
            part.lhs_ext = (e.lambda_min(), e.lambda_max());
            parts.push(part);
        }
        let notes = vec![
            "first factor is a mean of the mapped tuple; the image of the mean is the second factor"
                .into(),
            self.alpha_branch_note(c.kantorovich, c.alpha_anticommutator, 1.0),
        ];
        self.finish(id, params, bound, parts, notes)
    }

    /// |||P_t||| <= sum_i w_i |||A_i||| for t in (0, 1].
    fn norm_upper_18(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_t_positive(params.t)?;
        let set = self.power_set(params.t)?;
        let l = ui_norm(set.on_tuple.matrix(), params.norm)?;
        let mut r = T::zero();
        for (a, &w) in self.tuple.matrices().iter().zip(self.tuple.weights().as_slice()) {
            r += w * ui_norm(a.matrix(), params.norm)?;
        }
        let parts = vec![self.scalar_part("mean norm below the weighted norm sum", l, r)];
        self.finish(CheckId::NormUpper18, params, T::one(), parts, vec![])
    }

    /// (sum_i w_i |||A_i^-1|||)^-1 <= |||P_t||| for t in [-1, 0).
    fn norm_lower_18(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_t_negative(params.t)?;
        let set = self.power_set(params.t)?;
        let mut s = T::zero();
        for (a, &w) in self.tuple.matrices().iter().zip(self.tuple.weights().as_slice()) {
            s += w * ui_norm(a.inverse().matrix(), params.norm)?;
        }
        let l = T::one() / s;
        let r = ui_norm(set.on_tuple.matrix(), params.norm)?;
        let parts = vec![self.scalar_part(
            "inverse of the weighted inverse-norm sum below the mean norm",
            l,
            r,
        )];
        self.finish(CheckId::NormLower18, params, T::one(), parts, vec![])
    }

    /// Phi(arith)^{2p} <= c Phi(P_t)^{2p} with the refined factor, p >= 2.
    fn refine23(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_t_nonzero(params.t)?;
        self.need_p_in(params.p, 2.0, f64::INFINITY)?;
        let c = self.constants(params.p)?;
        let factor = c.refined_reverse_factor;
        let two_p = params.p + params.p;
        let set = self.power_set(params.t)?;
        let l = self.phi_arith()?.power(two_p);
        let r = set.phi_of.power(two_p).scale(factor);
        let parts = vec![self.order_part(
            "doubled-power mapped arithmetic mean below the refined image power",
            &l,
            &r,
        )?];
        self.finish(CheckId::Refine23, params, factor, parts, vec![])
    }

    /// P_t(Phi(A))^{2p} <= c Phi(P_t)^{2p} with the refined factor, p >= 2.
    fn refine34(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_t_nonzero(params.t)?;
        self.need_p_in(params.p, 2.0, f64::INFINITY)?;
        let c = self.constants(params.p)?;
        let factor = c.refined_reverse_factor;
        let two_p = params.p + params.p;
        let set = self.power_set(params.t)?;
        let l = set.on_phi_tuple.power(two_p);
        let r = set.phi_of.power(two_p).scale(factor);
        let parts = vec![self.order_part(
            "doubled-power mean of images below the refined image power",
            &l,
            &r,
        )?];
        self.finish(CheckId::Refine34, params, factor, parts, vec![])
    }

    /// Toolbox facts for the pair at exponent alpha: product-norm bound,
    /// power-sum norm comparison (alpha >= 1), the optimal domination factor
    /// seen two ways and on both sides of the boundary, and the squared
    /// Kantorovich domination.
    fn lemma6_suite(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        let alpha = params.alpha;
        if !(alpha.is_finite() && alpha > T::zero()) {
            return Err(Error::ParamOutOfDomain(format!(
                "auxiliary exponent alpha must be positive, got {alpha}"
            )));
        }
        let (a1, a2) = self.pair()?;
        let c = self.constants(T::one())?;
        let mut parts = Vec::new();
        let mut notes = vec![format!("alpha = {alpha}")];

        // (a) ||A1 A2|| <= (1/4) ||A1 + A2||^2 in the spectral norm.
        let product_norm = ui_norm(&(a1.matrix() * a2.matrix()), NormKind::Spectral)?;
        let sum_norm = ui_norm(&(a1.matrix() + a2.matrix()), NormKind::Spectral)?;
        parts.push(self.scalar_part(
            "product norm below a quarter of the squared sum norm",
            product_norm,
            real::<T>(0.25) * sum_norm * sum_norm,
        ));

        // (b) ||A1^alpha + A2^alpha|| <= ||(A1 + A2)^alpha|| needs alpha >= 1;
        // the comparison reverses below it.
        if alpha >= T::one() {
            let power_sum =
                ui_norm(&(a1.power(alpha).matrix() + a2.power(alpha).matrix()), NormKind::Spectral)?;
            let sum_power = ui_norm(
                HpdMatrix::new(a1.matrix() + a2.matrix())?.power(alpha).matrix(),
                NormKind::Spectral,
            )?;
            parts.push(self.scalar_part(
                "norm of the power sum below the norm of the powered sum",
                power_sum,
                sum_power,
            ));
        } else {
            notes.push("power-sum norm comparison needs alpha >= 1 and was not evaluated".into());
        }

        // (c) The least factor nu^2 with A1 <= nu^2 A2, computed as an
        // eigenvalue and as a squared product norm; domination must hold at
        // nu^2 and break strictly below it.
        let s = a2.inv_sqrt();
        let compressed = a1.matrix().congruence(s.matrix()).symmetrized();
        let nu_sq = eigh(&compressed)?.lambda_max();
        let product_route =
            ui_norm(&(a1.sqrt().matrix() * s.matrix()), NormKind::Spectral)?.powi(2);
        let agreement_tol = real::<T>(1000.0) * self.tol_rel * (T::one() + nu_sq);
        parts.push(self.scalar_part(
            "two routes to the optimal factor agree",
            (product_route - nu_sq).abs(),
            agreement_tol,
        ));
        parts.push(self.order_part(
            "domination at the optimal factor",
            a1,
            &a2.scale(nu_sq),
        )?);
        let shrunk = self.order_part(
            "domination strictly below the optimal factor must break",
            a1,
            &a2.scale(real::<T>(0.999) * nu_sq),
        )?;
        parts.push(Part {
            label: shrunk.label.clone(),
            slack: -shrunk.slack,
            scale: shrunk.scale,
            holds: !shrunk.holds,
            lhs_ext: shrunk.lhs_ext,
            rhs_ext: shrunk.rhs_ext,
        });

        // (d) A1 <= A1 + A2 and spectral bounds give A1^2 <= K (A1 + A2)^2.
        parts.push(self.order_part(
            "squared member below the scaled squared sum",
            &a1.power(real(2.0)),
            &HpdMatrix::new(a1.matrix() + a2.matrix())?.power(real(2.0)).scale(c.kantorovich),
        )?);

        self.finish(CheckId::Lemma6Suite, params, c.kantorovich, parts, notes)
    }

    /// The three spectral-threshold criteria — top eigenvalue, operator norm,
    /// and positive semidefiniteness of the doubled block matrix — agree just
    /// above and just below the boundary.
    fn lemma19_suite(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        let (a1, _) = self.pair_or_single();
        let top = a1.lambda_max();
        let norm_val = ui_norm(a1.matrix(), NormKind::Spectral)?;
        let mut parts = Vec::new();
        for (factor, above) in [(1.01, true), (0.99, false)] {
            let threshold = real::<T>(factor) * top;
            let block = doubled_block(a1.matrix(), threshold);
            let block_min = eigh(&block)?.lambda_min();
            if above {
                parts.push(self.scalar_part("threshold above the top eigenvalue", top, threshold));
                parts.push(self.scalar_part("threshold above the operator norm", norm_val, threshold));
                parts.push(self.scalar_part("doubled block stays PSD", T::zero(), block_min));
            } else {
                parts.push(self.scalar_part("top eigenvalue exceeds the lowered threshold", threshold, top));
                parts.push(self.scalar_part("operator norm exceeds the lowered threshold", threshold, norm_val));
                parts.push(self.scalar_part("doubled block loses PSD", block_min, T::zero()));
            }
        }
        self.finish(
            CheckId::Lemma19Suite,
            params,
            T::one(),
            parts,
            vec!["thresholds at 1.01 and 0.99 times the top eigenvalue".into()],
        )
    }

    /// Probe: the Thompson distance between P_t of the equal-weight pair and
    /// the geometric mean. A claimed identity would force the distance to 0;
    /// the verdict records the measured value and always holds.
    fn ledger_fact_p30(&self, params: &CheckParams<T>) -> Result<Verdict<T>> {
        self.need_t_nonzero(params.t)?;
        self.pair()?;
        let pair = self.pair_tuple()?;
        let (x, _) = power_mean(pair, params.t)?;
        let g = self.pair_geo()?;
        let d = thompson_distance(&x, g)?;
        let scale = T::one() + x.lambda_max() + g.lambda_max();
        Ok(Verdict {
            id: CheckId::LedgerFactP30,
            holds: true,
            slack: d,
            relative_slack: d / scale,
            constant: T::one(),
            params: *params,
            lhs_extremes: x.bounds(),
            rhs_extremes: g.bounds(),
            notes: format!(
                "probe of a claimed identity between the equal-weight power mean and the \
                 geometric mean; slack records the Thompson distance d = {:.6e}; \
                 always reported as holding",
                d.to_f64().unwrap_or(f64::NAN)
            ),
        })
    }

    // ----- small helpers -------------------------------------------------

    /// First member, plus the second when present (first again otherwise);
    /// for checks that read a single matrix but prefer the pair layout.
    fn pair_or_single(&self) -> (&HpdMatrix<T>, &HpdMatrix<T>) {
        let ms = self.tuple.matrices();
        (&ms[0], ms.get(1).unwrap_or(&ms[0]))
    }

    fn phi_pair_or_single(&self) -> Result<(HpdMatrix<T>, HpdMatrix<T>)> {
        let (a1, a2) = self.pair_or_single();
        Ok((self.map.apply(a1)?, self.map.apply(a2)?))
    }
}

/// The 2n x 2n Hermitian block matrix [[tau I, A], [A*, tau I]].
fn doubled_block<T: Real>(a: &ComplexMatrix<T>, tau: T) -> ComplexMatrix<T> {
    let n = a.dim();
    ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i / n, j / n);
        match (bi, bj) {
            (0, 0) | (1, 1) => {
                if i == j {
                    Cx::new(tau, T::zero())
                } else {
                    Cx::new(T::zero(), T::zero())
                }
            }
            (0, 1) => a[(i, j - n)],
            _ => a[(j, i - n)].conj(),
        }
    })
}
