"""``selftest``: oracle agreement and fixture checks at reduced sizes."""

import logging
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Tuple

import numpy as np

from .certify import cmd_certify
from .run_config import RunConfig
from ..exactla.field import FieldCfg
from ..export.report_writer import canonical_json
from ..geometry.bounds import published_bound
from ..geometry.formulas import r_mn, rank_stats, special_defective_h
from ..geometry.model import make_model
from ..geometry.varieties import VarietySpec, parse_spec
from ..inference.catalog import KnowledgeBase
from ..inference.fuzz import fuzz_rules
from ..inference.ranges import IdentifiabilityAnalyzer, RangeMode
from ..probes.secant import SecantProbe
from ..probes.twd import TwdProbe
from ..utils.config import AppConfig
from ..utils.errors import CertError

logger = logging.getLogger(__name__)

ORACLE_SPECS = ('segre:1,1,1', 'segre:1,2', 'segre:2,2', 'veronese:d=2,n=2', 'veronese:d=3,n=2',
                'sv:d=1,2;n=1,1', 'grass:k=1,n=3', 'gm:d=5')
BINARY_SEGRE_EXPECTED = {2: 1, 3: 2, 4: 2, 5: 4, 6: 9, 7: 15}
ORACLE_CASES = 50
FUZZ_RUNS = 200


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'passed': self.passed, 'detail': self.detail}


class SelfTest:
    """Runs each check and keeps one result line per check."""

    def __init__(self, run: RunConfig, config: AppConfig, knowledge_base: KnowledgeBase):
        self.run = run
        self.config = config
        self.knowledge_base = knowledge_base
        self.field = FieldCfg.from_config(config.field)
        self.secant = SecantProbe(config.probes, self.field)
        self.twd = TwdProbe(config.probes, self.field)
        self.logger = logging.getLogger(__name__)

    def _range(self, spec: str, mode: RangeMode, h_limit=None):
        analyzer = IdentifiabilityAnalyzer(self.config, self.knowledge_base)
        return analyzer.identifiability_range(parse_spec(spec), mode, h_limit=h_limit)

    def quadric_veronese(self) -> Tuple[bool, str]:
        report = self.secant.terracini_dimension(make_model(VarietySpec.veronese(2, 2)), 2)
        ok = (report.dim_computed, report.dim_expected, report.defect_confirmed) == (4, 5, True)
        return ok, f'dim {report.dim_computed}, expected {report.dim_expected}, ' \
                   f'confirmed {report.defect_confirmed}'

    def oracle_agreement(self) -> Tuple[bool, str]:
        models = [make_model(parse_spec(text)) for text in ORACLE_SPECS]
        draw = np.random.default_rng(self.config.probes.seed)
        disagreements = []
        cases = 0
        while cases < ORACLE_CASES:
            model = models[int(draw.integers(len(models)))]
            h = int(draw.integers(1, 4))
            if h * (model.n + 1) > 64:
                continue
            seed = self.config.probes.seed + int(draw.integers(1000))
            terracini = self.secant.terracini_dimension(model, h, trials=1, seed=seed).trial_dims[0]
            addition = self.secant.addition_map_dimension(model, h, np.random.default_rng(seed))
            cases += 1
            if terracini != addition:
                disagreements.append(f'{model.spec.label} h={h} seed={seed}: {terracini} vs {addition}')
        return not disagreements, f'{cases} cases' + (f'; {disagreements}' if disagreements else '')

    def two_factor_segre(self) -> Tuple[bool, str]:
        wrong = []
        for a in range(1, 4):
            for b in range(a, 4):
                model = make_model(VarietySpec.segre(a, b))
                for report in self.secant.secant_profile(model, min(a, b) + 1):
                    expected = report.h * (a + b + 2 - report.h) - 1
                    if report.dim_computed != expected:
                        wrong.append(f'({a},{b}) h={report.h}: {report.dim_computed} != {expected}')
        return not wrong, 'h(a+b+2-h)-1 for a, b <= 3' + (f'; {wrong}' if wrong else '')

    def binary_segre(self) -> Tuple[bool, str]:
        found = {k: self._range('segre:' + ','.join(['1'] * k), RangeMode.CATALOG_ONLY).h_ident_max
                 for k in BINARY_SEGRE_EXPECTED}
        probe_only = self._range('segre:1,1,1,1,1', RangeMode.PROBE_ONLY).h_ident_max
        ok = found == BINARY_SEGRE_EXPECTED and probe_only == 4
        return ok, f'catalog {found}, probe-only k=5 {probe_only}'

    def not_twd(self) -> Tuple[bool, str]:
        segre = self.twd.certify_not_twd(make_model(VarietySpec.segre(1, 1, 1, 1, 1)), 4)
        veronese = self.twd.certify_not_twd(make_model(VarietySpec.veronese(2, 2)), 2)
        ok = segre.certified_not_twd and not veronese.certified_not_twd and veronese.min_kernel >= 1
        return ok, f'(P^1)^5 h=4 min kernel {segre.min_kernel}; v_2(P^2) h=2 min kernel {veronese.min_kernel}'

    def gaussian(self) -> Tuple[bool, str]:
        model = make_model(VarietySpec.gaussian_moments(14))
        defects = [r.defect for r in self.secant.secant_profile(model, 5)]
        report = self._range('gm:d=14', RangeMode.HYBRID, h_limit=5)
        ok = not any(defects) and report.h_ident_max == 4
        return ok, f'defects {defects}, h_ident_max {report.h_ident_max}'

    def rule_fuzz(self) -> Tuple[bool, str]:
        models = [make_model(parse_spec(s)) for s in ('segre:1,1,1,1,1', 'gm:d=14', 'veronese:d=2,n=2')]
        problems = fuzz_rules(models, FUZZ_RUNS, seed=self.config.probes.seed)
        return not problems, f'{FUZZ_RUNS} runs' + (f'; {problems[:3]}' if problems else '')

    def formulas(self) -> Tuple[bool, str]:
        binary = rank_stats(VarietySpec.segre(*[1] * 6))
        xkn = rank_stats(VarietySpec.segre(2, 3, 3, 3))
        diagonal = rank_stats(VarietySpec.segre(*[2] * 5))
        grassmann = published_bound(VarietySpec.grassmann(4, 250))
        values = {
            'binary gr, s': (binary.gr, binary.s),
            'X[2,3] gr, perfect': (xkn.gr, xkn.perfect),
            'X_2^5 s, delta': (diagonal.s, diagonal.delta),
            'special (2,2,2)': special_defective_h((2, 2, 2)),
            'r(4,5)': r_mn(4, 5),
            'G(4,250)': grassmann.h_max,
        }
        expected = {
            'binary gr, s': (10, 9),
            'X[2,3] gr, perfect': (16, True),
            'X_2^5 s, delta': (22, 1),
            'special (2,2,2)': 7,
            'r(4,5)': 56,
            'G(4,250)': 2519,
        }
        wrong = [name for name in expected if values[name] != expected[name]]
        return not wrong, 'all hand-checked values match' if not wrong else f'mismatch in {wrong}'

    def determinism(self) -> Tuple[bool, str]:
        run = RunConfig(command='certify', spec='segre:1,1,1,1,1', mode='hybrid',
                        trials=self.run.trials, seed=self.run.seed,
                        field_mode=self.run.field_mode, modulus=self.run.modulus,
                        max_entries=self.run.max_entries)
        outputs = {canonical_json(cmd_certify(run, self.config, self.knowledge_base)) for _ in range(2)}
        return len(outputs) == 1, f'{len(outputs)} distinct outputs over 2 runs'

    def checks(self) -> List[Tuple[str, Callable[[], Tuple[bool, str]]]]:
        return [
            ('quadric-veronese-defect', self.quadric_veronese),
            ('terracini-vs-addition-map', self.oracle_agreement),
            ('two-factor-segre', self.two_factor_segre),
            ('binary-segre-table', self.binary_segre),
            ('not-twd-certification', self.not_twd),
            ('gaussian-moments', self.gaussian),
            ('rule-soundness', self.rule_fuzz),
            ('formula-layer', self.formulas),
            ('determinism', self.determinism),
        ]

    def run_all(self) -> List[CheckResult]:
        results = []
        for name, check in self.checks():
            started = time.monotonic()
            try:
                passed, detail = check()
            except CertError as e:
                passed, detail = False, f'{type(e).__name__}: {e}'
            results.append(CheckResult(name, bool(passed), detail))
            self.logger.info(f"selftest {name}: {'ok' if passed else 'FAILED'} "
                             f"in {time.monotonic() - started:.2f}s")
        return results


def cmd_selftest(run: RunConfig, config: AppConfig) -> Dict[str, Any]:
    """
    Run every check once.

    Returns:
        Dict: The selftest document; ``passed`` is true iff every check passed

    Raises:
        KnowledgeBaseError: If the knowledge base fails to load, before any check runs
    """
    knowledge_base = KnowledgeBase.load(config.inference.knowledge_base_path())
    results = SelfTest(run, config, knowledge_base).run_all()
    return {
        'command': 'selftest',
        'run': run.to_dict(),
        'checks': [r.to_dict() for r in results],
        'passed': all(r.passed for r in results),
        'provenance': {'kind': 'rule', 'source': 'selftest checks'},
    }
