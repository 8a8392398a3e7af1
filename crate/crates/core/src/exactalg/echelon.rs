//! Echelon forms of truncated series by leading `t`-order.
//!
//! [`SeriesEchelon`] is a ℚ-subspace of `ℚ[[t]] / t^N` with one normalized row
//! per leading order. [`ShiftModule`] is a `ℚ[[t^step]]`-submodule kept as one
//! generator per residue class of the leading order modulo `step`; the
//! leading orders of its elements are exactly `ord(g_r) + step * k`.

use std::collections::BTreeSet;

use super::{Rat, TSeries};

#[derive(Clone, Debug)]
struct SparseRow {
    terms: Vec<(usize, Rat)>,
}

impl SparseRow {
    fn from_dense(v: &[Rat], lead: usize) -> SparseRow {
        let inv = v[lead].recip();
        let terms = v
            .iter()
            .enumerate()
            .skip(lead)
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c * &inv))
            .collect();
        SparseRow { terms }
    }

    fn to_series(&self, trunc: usize) -> TSeries {
        TSeries::from_terms(self.terms.iter().cloned(), trunc)
    }
}

fn first_nonzero(v: &[Rat], from: usize) -> Option<usize> {
    (from..v.len()).find(|&i| !v[i].is_zero())
}

/// A ℚ-subspace of `ℚ[[t]] / t^trunc` in echelon form by leading order.
#[derive(Clone, Debug)]
pub struct SeriesEchelon {
    trunc: usize,
    rows: Vec<Option<SparseRow>>,
}

impl SeriesEchelon {
    pub fn new(trunc: usize) -> SeriesEchelon {
        SeriesEchelon {
            trunc,
            rows: vec![None; trunc],
        }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    fn dense(&self, v: &TSeries) -> Vec<Rat> {
        assert!(
            v.trunc() >= self.trunc,
            "series known to t^{} but echelon needs t^{}",
            v.trunc(),
            self.trunc
        );
        v.coeffs()[..self.trunc].to_vec()
    }

    /// Reduces leading terms in place; returns the leading order left, if any.
    fn reduce_dense(&self, v: &mut [Rat]) -> Option<usize> {
        let mut pos = 0;
        while let Some(k) = first_nonzero(v, pos) {
            let Some(row) = &self.rows[k] else {
                return Some(k);
            };
            let c = v[k].clone();
            for (j, a) in &row.terms {
                let d = &c * a;
                v[*j] -= &d;
            }
            pos = k + 1;
        }
        None
    }

    /// Remainder of `v` after cancelling every leading term that has a pivot.
    pub fn reduce(&self, v: &TSeries) -> TSeries {
        let mut d = self.dense(v);
        self.reduce_dense(&mut d);
        TSeries::new(d)
    }

    /// Leading order of the remainder of `v`, `None` when `v` lies in the span.
    pub fn residual_order(&self, v: &TSeries) -> Option<usize> {
        let mut d = self.dense(v);
        self.reduce_dense(&mut d)
    }

    pub fn contains(&self, v: &TSeries) -> bool {
        self.residual_order(v).is_none()
    }

    /// Adds `v` to the span; returns the new pivot order if the span grew.
    pub fn insert(&mut self, v: &TSeries) -> Option<usize> {
        let mut d = self.dense(v);
        let lead = self.reduce_dense(&mut d)?;
        self.rows[lead] = Some(SparseRow::from_dense(&d, lead));
        Some(lead)
    }

    pub fn has_pivot(&self, k: usize) -> bool {
        self.rows.get(k).is_some_and(Option::is_some)
    }

    pub fn pivots(&self) -> BTreeSet<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_some())
            .map(|(k, _)| k)
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    /// Triangular basis, one element per pivot, ascending by order.
    pub fn basis(&self) -> Vec<TSeries> {
        self.rows
            .iter()
            .flatten()
            .map(|r| r.to_series(self.trunc))
            .collect()
    }
}

/// Row-reduces `vs` by leading order. Returns the pivot orders of a
/// triangular basis of their span together with that basis.
pub fn echelon_pivot_orders(vs: &[TSeries]) -> (BTreeSet<usize>, Vec<TSeries>) {
    let trunc = vs.iter().map(TSeries::trunc).min().unwrap_or(1);
    let mut ech = SeriesEchelon::new(trunc);
    for v in vs {
        ech.insert(&v.truncate(trunc));
    }
    (ech.pivots(), ech.basis())
}

/// A `ℚ[[t^step]]`-submodule of `ℚ[[t]] / t^trunc`, stored as at most `step`
/// generators with pairwise distinct leading orders modulo `step`.
#[derive(Clone, Debug)]
pub struct ShiftModule {
    step: usize,
    trunc: usize,
    gens: Vec<Option<TSeries>>,
}

impl ShiftModule {
    pub fn new(step: usize, trunc: usize) -> ShiftModule {
        assert!(step >= 1);
        ShiftModule {
            step,
            trunc,
            gens: vec![None; step],
        }
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Generator of residue class `r`, if the module has one below `trunc`.
    pub fn generator(&self, r: usize) -> Option<&TSeries> {
        self.gens[r].as_ref()
    }

    pub fn generators(&self) -> impl Iterator<Item = &TSeries> + '_ {
        self.gens.iter().flatten()
    }

    /// Least element order in each residue class (`None` if none below trunc).
    pub fn class_orders(&self) -> Vec<Option<usize>> {
        self.gens
            .iter()
            .map(|g| g.as_ref().and_then(TSeries::order))
            .collect()
    }

    /// True when every residue class has a generator; the module then
    /// contains every series of order at least [`ShiftModule::saturation_order`].
    pub fn is_full_rank(&self) -> bool {
        self.gens.iter().all(Option::is_some)
    }

    /// Least `K` such that every order `>= K` is attained (full rank only).
    pub fn saturation_order(&self) -> Option<usize> {
        let orders = self.class_orders();
        if orders.iter().any(Option::is_none) {
            return None;
        }
        let max = orders.iter().flatten().max().copied().unwrap_or(0);
        Some((max + 1).saturating_sub(self.step))
    }

    fn reduce_dense(&self, v: &mut [Rat]) -> Option<usize> {
        let mut pos = 0;
        while let Some(k) = first_nonzero(v, pos) {
            let r = k % self.step;
            let Some(g) = &self.gens[r] else {
                return Some(k);
            };
            let lead = g.order().expect("generators are nonzero");
            if lead > k {
                return Some(k);
            }
            let c = v[k].clone();
            let shift = k - lead;
            for (j, a) in g.terms() {
                if j + shift >= v.len() {
                    break;
                }
                let d = &c * a;
                v[j + shift] -= &d;
            }
            pos = k + 1;
        }
        None
    }

    fn dense(&self, v: &TSeries) -> Vec<Rat> {
        assert!(
            v.trunc() >= self.trunc,
            "series known to t^{} but module needs t^{}",
            v.trunc(),
            self.trunc
        );
        v.coeffs()[..self.trunc].to_vec()
    }

    pub fn reduce(&self, v: &TSeries) -> TSeries {
        let mut d = self.dense(v);
        self.reduce_dense(&mut d);
        TSeries::new(d)
    }

    /// Leading order of the remainder of `v`; `None` when `v` reduces to zero
    /// modulo `t^trunc`.
    pub fn residual_order(&self, v: &TSeries) -> Option<usize> {
        let mut d = self.dense(v);
        self.reduce_dense(&mut d)
    }

    /// Adds `v` to the module; returns whether the module grew.
    pub fn insert(&mut self, v: &TSeries) -> bool {
        let mut pending = vec![self.dense(v)];
        let mut grew = false;
        while let Some(mut d) = pending.pop() {
            let Some(lead) = self.reduce_dense(&mut d) else {
                continue;
            };
            let inv = d[lead].recip();
            let normalized = TSeries::new(d.iter().map(|c| c * &inv).collect());
            let r = lead % self.step;
            if let Some(old) = self.gens[r].replace(normalized) {
                pending.push(old.into_coeffs());
            }
            grew = true;
        }
        grew
    }

    /// Saturates the module under multiplication by each series in `mults`.
    pub fn close_under(&mut self, mults: &[TSeries]) {
        loop {
            let snapshot: Vec<TSeries> = self.generators().cloned().collect();
            let mut grew = false;
            for g in &snapshot {
                for f in mults {
                    let prod = g.mul_to(f, self.trunc);
                    grew |= self.insert(&prod);
                }
            }
            if !grew {
                break;
            }
        }
    }

    /// Orders below `trunc` attained by module elements.
    pub fn values(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for lead in self.class_orders().into_iter().flatten() {
            out.extend((lead..self.trunc).step_by(self.step));
        }
        out
    }

    /// The module as a ℚ-subspace: rows `t^(step k) g_r` below `trunc`.
    pub fn to_echelon(&self) -> SeriesEchelon {
        let mut ech = SeriesEchelon::new(self.trunc);
        for g in self.generators() {
            let lead = g.order().unwrap();
            let mut shift = 0;
            while lead + shift < self.trunc {
                let row = g.shift(shift).truncate(self.trunc);
                let k = lead + shift;
                ech.rows[k] = Some(SparseRow::from_dense(row.coeffs(), k));
                shift += self.step;
            }
        }
        ech
    }
}
