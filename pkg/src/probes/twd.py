"""Second-order certificates that a variety is not h-tangentially weakly defective.

For h random points the hyperplanes containing the span M_A of their tangent
spaces are the kernel of the stacked frames. Restricted to the chart
directions at a base point, the joint kernel of their Hessians bounds the
tangent directions of the contact locus; zero at every base point of one
trial certifies that the contact locus is zero-dimensional there.
Trial ``t`` at ``h`` uses seed ``base + t + 1000 * h``.
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..exactla.elimination import kernel_basis, rank
from ..exactla.field import FieldCfg, schwartz_zippel_bound
from ..exactla.matrix import MatrixF, stack_all
from ..geometry.model import ParamPoint, VarietyModel, sample_point, tangent_frame
from ..utils.config import ProbeConfig
from ..utils.errors import CapacityError, InapplicableError, PreconditionError

SEED_STRIDE = 1000


@dataclass
class TwdReport:
    """Joint Hessian kernel dimensions for one h."""
    h: int
    n: int
    trials: int
    seed: int
    kernel_dims: List[List[int]] = field(default_factory=list)
    codim_MA: int = 0
    failure_bound: Fraction = Fraction(0)
    field_mode: str = 'prime'
    inapplicable: bool = False

    @property
    def min_kernel(self) -> Optional[int]:
        """Smallest, over trials, of the largest kernel among the trial's base points."""
        if not self.kernel_dims:
            return None
        return min(max(dims) for dims in self.kernel_dims)

    @property
    def certified_not_twd(self) -> bool:
        return not self.inapplicable and self.min_kernel == 0

    @property
    def report_id(self) -> str:
        return f'twd:h={self.h}'

    @property
    def status(self) -> str:
        if self.inapplicable:
            return 'inapplicable: tangent span fills the ambient space'
        if self.certified_not_twd:
            return 'not twd certified'
        return 'inconclusive, possibly twd'

    @classmethod
    def inapplicable_report(cls, h: int, n: int, trials: int, seed: int, field_mode: str) -> 'TwdReport':
        return cls(h=h, n=n, trials=trials, seed=seed, field_mode=field_mode, inapplicable=True)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'h': self.h,
            'kernel_dims': [list(d) for d in self.kernel_dims],
            'min_kernel': self.min_kernel,
            'certified_not_twd': self.certified_not_twd,
            'codim_MA': self.codim_MA,
            'trials': self.trials,
            'seed': self.seed,
            'failure_bound': self.failure_bound,
            'status': self.status,
            'inapplicable': self.inapplicable,
            'provenance': {'kind': 'probe', 'id': self.report_id, 'field': self.field_mode},
        }


class TwdProbe:
    """Certify non-tangential-weak-defectivity at random configurations."""

    def __init__(self, config: ProbeConfig, field: FieldCfg):
        """
        Initialize the probe.

        Args:
            config: Trials, base seed and capacity cap
            field: Field all ranks and kernels are computed in
        """
        self.config = config
        self.field = field
        self.logger = logging.getLogger(__name__)

    def normal_functionals(self, model: VarietyModel, points: Sequence[ParamPoint]) -> MatrixF:
        """Basis of the hyperplanes containing the span of the tangent spaces at ``points``."""
        if not points:
            raise PreconditionError("at least one point is required")
        frames = [tangent_frame(model, p).matrix for p in points]
        return kernel_basis(stack_all(frames, points[0].field, model.N + 1))

    def contact_kernel_dim(self, model: VarietyModel, points: Sequence[ParamPoint], at_index: int,
                           functionals: Optional[MatrixF] = None) -> int:
        """
        Dimension of the joint kernel of the contracted Hessians at one base point.

        The cone-scale row and column of each Hessian vanish for tangent
        functionals and are dropped, so the result counts chart directions only.

        Args:
            model: Variety model
            points: The configuration A
            at_index: Which point of A to examine
            functionals: Precomputed normal functionals (computed when omitted)

        Returns:
            int: Kernel dimension, between 0 and n

        Raises:
            PreconditionError: If ``at_index`` is out of range or a functional is not tangent
            InapplicableError: If there are no normal functionals
        """
        if not 0 <= at_index < len(points):
            raise PreconditionError(f"index {at_index} out of range for {len(points)} points")
        if functionals is None:
            functionals = self.normal_functionals(model, points)
        if functionals.rows == 0:
            raise InapplicableError("the tangent span fills the ambient space")
        point = points[at_index]
        frame = tangent_frame(model, point).matrix
        if not frame.matmul(functionals.transpose()).is_zero():
            raise PreconditionError("functionals are not tangent at the base point")
        mapping = model.polynomial_map
        chart = model.n
        blocks = []
        for i in range(functionals.rows):
            H = mapping.contracted_hessian(point.coordinates, functionals.row(i), point.field)
            blocks.append([row[:chart] for row in H[:chart]])
        stacked = MatrixF.from_rows([row for block in blocks for row in block], point.field, cols=chart)
        return chart - rank(stacked)

    def failure_bound(self, model: VarietyModel, h: int) -> Fraction:
        """Schwartz-Zippel estimate covering the frame minor and the Hessian minor."""
        frame_rank = min(h * (model.n + 1), model.N + 1)
        frame_degree = frame_rank * model.degree_bound
        hessian_degree = model.n * (frame_rank + 1) * model.degree_bound
        return schwartz_zippel_bound(frame_degree + hessian_degree, self.field)

    def certify_not_twd(self, model: VarietyModel, h: int, trials: Optional[int] = None,
                        seed: Optional[int] = None, deadline: Optional[float] = None) -> TwdReport:
        """
        Run the joint-Hessian test at every base point of ``trials`` random configurations.

        No trial after the first starts once ``time.monotonic()`` passes ``deadline``;
        ``report.trials`` is the number actually run.

        Returns:
            TwdReport: certified_not_twd is true iff some trial has kernel 0 at every base point

        Raises:
            CapacityError: If the stacked frames exceed the configured cap
            InapplicableError: If the tangent span fills the ambient space in every trial
        """
        if h < 1:
            raise PreconditionError(f"h must be at least 1, got {h}")
        trials = trials or self.config.trials
        seed = self.config.seed if seed is None else seed
        entries = h * (model.n + 1) * (model.N + 1)
        if entries > self.config.max_matrix_entries:
            raise CapacityError(f"{model.spec.label} twd probe at h={h} needs {entries} entries",
                                entries=entries, cap=self.config.max_matrix_entries)

        report = TwdReport(h=h, n=model.n, trials=trials, seed=seed,
                           failure_bound=self.failure_bound(model, h),
                           field_mode=self.field.mode.value)
        codims = []
        for t in range(trials):
            if codims and deadline is not None and time.monotonic() > deadline:
                self.logger.warning(f"{model.spec.label} twd h={h} stopped by the time budget "
                                    f"after {t} trials")
                break
            rng = np.random.default_rng(seed + t + SEED_STRIDE * h)
            points = [sample_point(model, rng, self.field) for _ in range(h)]
            functionals = self.normal_functionals(model, points)
            codims.append(functionals.rows)
            if functionals.rows == 0:
                continue
            dims = [self.contact_kernel_dim(model, points, i, functionals) for i in range(h)]
            report.kernel_dims.append(dims)
            self.logger.debug(f"{model.spec.label} twd h={h} trial {t}: kernels {dims}")

        if not report.kernel_dims:
            raise InapplicableError(f"{model.spec.label}: tangent span fills P^{model.N} at h={h}")
        report.trials = len(codims)
        report.codim_MA = max(codims)
        self.logger.info(f"{model.spec.label} twd h={h}: {report.status} (min kernel {report.min_kernel})")
        return report
