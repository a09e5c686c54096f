"""Secant dimensions by Terracini's lemma, with an addition-map cross-check.

Trial ``t`` draws its points from ``numpy.random.default_rng(seed + t)``,
one point after another, so the first h points of a trial are the same
whatever larger h is requested later. The fiber-type test and the profile
rely on that.
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import sympy

from ..exactla.elimination import intersection_dim, rank
from ..exactla.field import FieldCfg, schwartz_zippel_bound
from ..exactla.matrix import MatrixF, stack_all
from ..geometry.model import ParamPoint, VarietyModel, sample_point, tangent_frame
from ..utils.config import ProbeConfig
from ..utils.errors import CapacityError, PreconditionError


@dataclass
class SecantReport:
    """Computed versus expected dimension of the h-th secant variety."""
    h: int
    dim_abstract: int
    dim_expected: int
    dim_computed: int
    N: int
    trials: int
    seed: int
    failure_bound: Fraction
    field_mode: str
    trial_dims: List[int] = field(default_factory=list)
    defect_confirmed: bool = False

    @property
    def defect(self) -> int:
        return self.dim_expected - self.dim_computed

    @property
    def fills_ambient(self) -> bool:
        return self.dim_computed == self.N

    @property
    def dominant(self) -> bool:
        return self.fills_ambient

    @property
    def generically_finite(self) -> bool:
        return self.dim_computed == self.dim_abstract

    @property
    def report_id(self) -> str:
        return f'secant:h={self.h}'

    @property
    def status(self) -> str:
        if self.defect == 0:
            return 'non-defective certified'
        if self.defect_confirmed:
            return 'defect confirmed in rational mode'
        return 'defect observed in all trials'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'h': self.h,
            'dim_abstract': self.dim_abstract,
            'dim_expected': self.dim_expected,
            'dim_computed': self.dim_computed,
            'defect': self.defect,
            'fills_ambient': self.fills_ambient,
            'generically_finite': self.generically_finite,
            'trials': self.trials,
            'seed': self.seed,
            'trial_dims': list(self.trial_dims),
            'failure_bound': self.failure_bound,
            'status': self.status,
            'defect_confirmed': self.defect_confirmed,
            'provenance': {'kind': 'probe', 'id': self.report_id, 'field': self.field_mode},
        }


@lru_cache(maxsize=32)
def _addition_oracle(model: VarietyModel) -> Tuple[Callable, Callable]:
    """Lambdified affine map and its Jacobian with respect to the chart symbols."""
    param = model.parameterization
    affine = sympy.Matrix(param.affine)
    jacobian = affine.jacobian(sympy.Matrix(param.chart_symbols))
    args = param.chart_symbols
    return (sympy.lambdify(args, list(param.affine), modules='math'),
            sympy.lambdify(args, jacobian.tolist(), modules='math'))


class SecantProbe:
    """Randomized exact computation of dim Sec_h(X)."""

    def __init__(self, config: ProbeConfig, field: FieldCfg):
        """
        Initialize the probe.

        Args:
            config: Trials, base seed, capacity cap and rational-confirmation settings
            field: Field all ranks are computed in
        """
        self.config = config
        self.field = field
        self.logger = logging.getLogger(__name__)

    def check_capacity(self, model: VarietyModel, h: int) -> None:
        """Raise CapacityError when the stacked frames would exceed the entry cap."""
        if h < 1:
            raise PreconditionError(f"h must be at least 1, got {h}")
        entries = h * (model.n + 1) * (model.N + 1)
        if entries > self.config.max_matrix_entries:
            raise CapacityError(
                f"{model.spec.label} at h={h} needs {entries} matrix entries, "
                f"cap is {self.config.max_matrix_entries}",
                entries=entries, cap=self.config.max_matrix_entries,
            )

    def trial_points(self, model: VarietyModel, count: int, trial: int,
                     seed: Optional[int] = None, field: Optional[FieldCfg] = None) -> List[ParamPoint]:
        base = self.config.seed if seed is None else seed
        rng = np.random.default_rng(base + trial)
        return [sample_point(model, rng, field or self.field) for _ in range(count)]

    def failure_bound(self, model: VarietyModel, h: int, field: Optional[FieldCfg] = None) -> Fraction:
        """Per-trial chance that a nonzero maximal minor of the stacked frames vanishes."""
        return schwartz_zippel_bound((model.dim_expected(h) + 1) * model.degree_bound, field or self.field)

    def _stacked_dims(self, model: VarietyModel, h_max: int, trial: int, seed: int,
                      field: FieldCfg, all_prefixes: bool = False) -> List[int]:
        """Projective dimensions spanned by the first h frames of one trial."""
        points = self.trial_points(model, h_max, trial, seed, field)
        frames = [tangent_frame(model, p).matrix for p in points]
        sizes = range(1, h_max + 1) if all_prefixes else [h_max]
        return [rank(stack_all(frames[:h], field, model.N + 1)) - 1 for h in sizes]

    def _report(self, model: VarietyModel, h: int, trial_dims: List[int], trials: int,
                seed: int) -> SecantReport:
        return SecantReport(
            h=h,
            dim_abstract=model.dim_abstract(h),
            dim_expected=model.dim_expected(h),
            dim_computed=max(trial_dims),
            N=model.N,
            trials=trials,
            seed=seed,
            failure_bound=self.failure_bound(model, h),
            field_mode=self.field.mode.value,
            trial_dims=list(trial_dims),
        )

    def _confirm_defect(self, model: VarietyModel, report: SecantReport, trials: int, seed: int) -> None:
        """Re-run a deficient h in rational mode when the instance is small enough."""
        if report.defect == 0 or not self.config.confirm_defects_rational:
            return
        if not self.field.is_prime:
            report.defect_confirmed = True
            return
        entries = report.h * (model.n + 1) * (model.N + 1)
        if entries > self.config.rational_confirm_max_entries:
            self.logger.debug(f"Skipping rational confirmation at h={report.h}: {entries} entries")
            return
        rational = FieldCfg.rational(self.field.sample_bound)
        dims = [self._stacked_dims(model, report.h, t, seed, rational)[-1] for t in range(trials)]
        report.defect_confirmed = max(dims) < report.dim_expected
        self.logger.info(f"Rational confirmation at h={report.h}: dims {dims}, "
                         f"confirmed={report.defect_confirmed}")

    def terracini_dimension(self, model: VarietyModel, h: int, trials: Optional[int] = None,
                            seed: Optional[int] = None) -> SecantReport:
        """
        Estimate dim Sec_h(X) as the largest rank of stacked tangent frames over the trials.

        Args:
            model: Variety model
            h: Number of points
            trials: Independent trials (defaults to the configured count)
            seed: Base seed (defaults to the configured seed)

        Returns:
            SecantReport: Dimensions, defect and failure bound

        Raises:
            CapacityError: If the stacked frames exceed the configured cap
        """
        trials = trials or self.config.trials
        seed = self.config.seed if seed is None else seed
        self.check_capacity(model, h)
        dims = [self._stacked_dims(model, h, t, seed, self.field)[-1] for t in range(trials)]
        report = self._report(model, h, dims, trials, seed)
        self._confirm_defect(model, report, trials, seed)
        self.logger.info(f"{model.spec.label} h={h}: dim {report.dim_computed} "
                         f"(expected {report.dim_expected}, trials {dims})")
        return report

    def addition_map_dimension(self, model: VarietyModel, h: int, rng: np.random.Generator) -> int:
        """
        Rank minus one of the Jacobian of (p_1..p_h, l_1..l_h) -> sum l_i f(p_i).

        The Jacobian comes from sympy's symbolic differentiation, independently
        of the term tables behind tangent frames.

        Args:
            model: Variety model
            h: Number of points
            rng: Generator the points are drawn from, in order

        Returns:
            int: Projective dimension of the image at the sampled arguments
        """
        self.check_capacity(model, h)
        value_fn, jacobian_fn = _addition_oracle(model)
        columns: List[List[int]] = []
        for _ in range(h):
            p = sample_point(model, rng, self.field)
            jac = jacobian_fn(*p.chart)
            for j in range(model.n):
                columns.append([p.scale * jac[c][j] for c in range(model.N + 1)])
            columns.append(list(value_fn(*p.chart)))
        return rank(MatrixF.from_rows(columns, self.field, cols=model.N + 1)) - 1

    def fiber_type_tau(self, model: VarietyModel, h: int, trials: Optional[int] = None,
                       seed: Optional[int] = None) -> bool:
        """
        Decide whether the (h+1)-secant map has positive-dimensional fibers.

        A trial counts as fiber type when the h stacked frames are not
        independent, or when the frame at a further point meets their span.

        Returns:
            bool: True iff every trial counts as fiber type
        """
        trials = trials or self.config.trials
        seed = self.config.seed if seed is None else seed
        self.check_capacity(model, h + 1)
        verdicts = []
        for t in range(trials):
            points = self.trial_points(model, h + 1, t, seed)
            frames = [tangent_frame(model, p).matrix for p in points]
            span = stack_all(frames[:h], self.field, model.N + 1)
            fresh = frames[h]
            deficient = rank(span) < h * (model.n + 1) or rank(fresh) < model.n + 1
            meets = intersection_dim(span, fresh) > 0
            verdicts.append(deficient or meets)
        self.logger.debug(f"{model.spec.label} tau h={h}: per-trial fiber verdicts {verdicts}")
        return all(verdicts)

    def secant_profile(self, model: VarietyModel, h_max: int, trials: Optional[int] = None,
                       seed: Optional[int] = None, deadline: Optional[float] = None) -> List[SecantReport]:
        """
        Reports for h = 1..h_max, reusing each trial's sample across all h.

        Args:
            deadline: ``time.monotonic()`` value after which no further trial starts;
                the first trial always runs and each report records the trials it used

        Returns:
            List[SecantReport]: Identical to calling terracini_dimension per h
        """
        if h_max < 1:
            raise PreconditionError(f"h_max must be at least 1, got {h_max}")
        trials = trials or self.config.trials
        seed = self.config.seed if seed is None else seed
        self.check_capacity(model, h_max)
        per_trial = []
        for t in range(trials):
            if per_trial and deadline is not None and time.monotonic() > deadline:
                self.logger.warning(f"{model.spec.label} profile stopped by the time budget "
                                    f"after {len(per_trial)} of {trials} trials")
                break
            per_trial.append(self._stacked_dims(model, h_max, t, seed, self.field, all_prefixes=True))
        trials = len(per_trial)
        reports = []
        for h in range(1, h_max + 1):
            report = self._report(model, h, [dims[h - 1] for dims in per_trial], trials, seed)
            self._confirm_defect(model, report, trials, seed)
            reports.append(report)
        self.logger.info(f"{model.spec.label} profile: dims {[r.dim_computed for r in reports]}")
        return reports
