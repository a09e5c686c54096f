"""Varieties, their cone parameterizations and closed-form dimension formulas."""

from .varieties import VarietyKind, VarietySpec, parse_spec
from .model import (
    ParamPoint, TangentFrame, VarietyModel, contracted_hessian, embed, make_model,
    sample_point, tangent_frame,
)
from .formulas import RankStats, catalog_variables, rank_stats
from .bounds import BoundRecord, published_bound

__all__ = [
    'BoundRecord',
    'ParamPoint',
    'RankStats',
    'TangentFrame',
    'VarietyKind',
    'VarietyModel',
    'VarietySpec',
    'catalog_variables',
    'contracted_hessian',
    'embed',
    'make_model',
    'parse_spec',
    'published_bound',
    'rank_stats',
    'sample_point',
    'tangent_frame',
]
