# 從服務模組中匯出所有服務類
from Service.WordMeasureErrors import (
    WordMeasureError,
    InputError,
    WordParseError,
    EvaluationRangeError,
    NotMemberError,
    ResourceCapError,
    InternalConsistencyError,
)
from Service.WordService import WordService, Word, Modulus, INFINITY
from Service.StallingsGraphService import StallingsGraphService, CoreGraph, TraversalProfile
from Service.RationalFunctionService import RationalFunctionService, RationalFunction, LaurentPrefix
from Service.FringeService import FringeService, FringeElement
from Service.SamplerService import SamplerService, GroupSpec, GroupFamily, TraceEstimate
from Service.MeasureService import MeasureService, ChiReport, SurfaceVerdict, Orientation

__all__ = [
    'WordMeasureError',
    'InputError',
    'WordParseError',
    'EvaluationRangeError',
    'NotMemberError',
    'ResourceCapError',
    'InternalConsistencyError',
    'WordService',
    'Word',
    'Modulus',
    'INFINITY',
    'StallingsGraphService',
    'CoreGraph',
    'TraversalProfile',
    'RationalFunctionService',
    'RationalFunction',
    'LaurentPrefix',
    'FringeService',
    'FringeElement',
    'SamplerService',
    'GroupSpec',
    'GroupFamily',
    'TraceEstimate',
    'MeasureService',
    'ChiReport',
    'SurfaceVerdict',
    'Orientation',
]
