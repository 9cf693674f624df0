//! Semi-discrete operator `L_i(u^f)` acting on the time fluctuations with the
//! reconstruction frozen at `t^n`.

use crate::error::SolverError;
use crate::grid::{BoundaryKind, BoundaryPolicy, Grid, Side};
use crate::models::{terms_flux, terms_source, BalanceLaw, PartTerms};
use crate::numflux::{terms_rusanov, ViscosityRule};
use crate::par::Exec;
use crate::reconstruction::{
    fluctuation_halo, fluctuation_traces, stage_interface_states, FluctuationKind,
    FluctuationTraces, WbReconstruction,
};
use crate::state::State;

/// `L` restricted to one set of terms:
///
/// ```text
/// L_i = -(F_{i+1/2} - F_{i-1/2}) / dx
///       + (f(u^e_{i;i+1/2}) - f(u^e_{i;i-1/2})) / dx
///       + (S(P_i(x_i)) - S(u^e_{i;i})) H_x(x_i) + S2(P_i(x_i)) - S2(u^e_{i;i})
/// ```
pub struct SpatialOperator<'a, const N: usize, M: BalanceLaw<N> + ?Sized> {
    model: &'a M,
    wb: &'a WbReconstruction<N>,
    policy: &'a BoundaryPolicy,
    kind: FluctuationKind,
    rule: ViscosityRule,
    terms: PartTerms,
    exec: Exec,
    dx: f64,
    hx: Vec<f64>,
    /// Stationary flux difference minus the reference sources.
    corr: Vec<State<N>>,
}

impl<'a, const N: usize, M: BalanceLaw<N> + ?Sized> SpatialOperator<'a, N, M> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        model: &'a M,
        grid: &Grid,
        wb: &'a WbReconstruction<N>,
        policy: &'a BoundaryPolicy,
        kind: FluctuationKind,
        rule: ViscosityRule,
        terms: PartTerms,
        exec: Exec,
    ) -> Result<Self, SolverError> {
        let dx = grid.dx();
        let n = wb.len();
        let hx: Vec<f64> = (0..n)
            .map(|i| model.depth_dx(grid.cell_center(i as isize)))
            .collect();
        let corr = exec.try_map(n, |i| -> Result<State<N>, SolverError> {
            let c = &wb.cells[i];
            if c.fallback || terms.is_empty() {
                return Ok(State::ZERO);
            }
            let p = &c.profile;
            model.check_state(&p.left)?;
            model.check_state(&p.right)?;
            let df = terms_flux(model, terms, &p.right) - terms_flux(model, terms, &p.left);
            Ok((1.0 / dx) * df - terms_source(model, terms, &p.center(0), hx[i]))
        })?;
        Ok(SpatialOperator {
            model,
            wb,
            policy,
            kind,
            rule,
            terms,
            exec,
            dx,
            hx,
            corr,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.wb.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> PartTerms {
        self.terms
    }

    /// Cell half-bandwidth of `dL/du^f`.
    pub fn bandwidth(&self) -> usize {
        if !self.terms.has_flux() {
            0
        } else {
            match self.kind {
                FluctuationKind::Pwcr => 1,
                FluctuationKind::Pwlr => 2,
            }
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.policy.is_periodic()
    }

    pub fn is_linear(&self) -> bool {
        self.model.is_linear()
    }

    /// Stage values at both interfaces and the centre of every cell.
    pub fn stage_states(&self, uf: &[State<N>]) -> Result<Vec<FluctuationTraces<N>>, SolverError> {
        let halo = fluctuation_halo(uf, self.policy)?;
        Ok(self.exec.map(uf.len(), |i| {
            let q = fluctuation_traces(self.kind, self.wb, &halo, i);
            stage_interface_states(self.wb, &q, i)
        }))
    }

    fn exterior(&self, side: Side, st: &[FluctuationTraces<N>]) -> State<N> {
        let n = st.len();
        let (inner, kind) = match side {
            Side::Left => (st[0].left, &self.policy.left),
            Side::Right => (st[n - 1].right, &self.policy.right),
        };
        match kind {
            BoundaryKind::Periodic => match side {
                Side::Left => st[n - 1].right,
                Side::Right => st[0].left,
            },
            BoundaryKind::Transmissive => inner,
            BoundaryKind::Dirichlet(_) => kind.impose(inner),
            BoundaryKind::StationaryExtension => match side {
                Side::Left => self.wb.cells[0].trace_left,
                Side::Right => self.wb.cells[n - 1].trace_right,
            },
        }
    }

    /// Numerical fluxes at the `n + 1` interfaces.
    pub fn interface_fluxes(
        &self,
        st: &[FluctuationTraces<N>],
    ) -> Result<Vec<State<N>>, SolverError> {
        let n = st.len();
        if !self.terms.has_flux() {
            return Ok(vec![State::ZERO; n + 1]);
        }
        let left_ext = self.exterior(Side::Left, st);
        let right_ext = self.exterior(Side::Right, st);
        Ok(self.exec.try_map(n + 1, |j| {
            let ul = if j == 0 { left_ext } else { st[j - 1].right };
            let ur = if j == n { right_ext } else { st[j].left };
            terms_rusanov(self.model, self.terms, &ul, &ur, self.rule)
        })?)
    }

    pub fn apply(&self, uf: &[State<N>]) -> Result<Vec<State<N>>, SolverError> {
        let n = uf.len();
        if self.terms.is_empty() {
            return Ok(vec![State::ZERO; n]);
        }
        let st = self.stage_states(uf)?;
        let f = self.interface_fluxes(&st)?;
        let inv = 1.0 / self.dx;
        self.exec.try_map(n, |i| -> Result<State<N>, SolverError> {
            let center = st[i].center;
            self.model.check_state(&center)?;
            Ok(self.corr[i] - inv * (f[i + 1] - f[i])
                + terms_source(self.model, self.terms, &center, self.hx[i]))
        })
    }
}
