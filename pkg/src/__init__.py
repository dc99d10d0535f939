from .borel import BorelSeries, Jet, build_series, verify_jet
from .config_manager import ConfigManager
from .extension import GlobalMap, LocalMap, bump_extend, extend_germ
from .kmaps import KMap, bump_kmap, pointwise_kmap, rescale
from .spaces import Space

__all__ = [
    'BorelSeries',
    'ConfigManager',
    'GlobalMap',
    'Jet',
    'KMap',
    'LocalMap',
    'Space',
    'build_series',
    'bump_extend',
    'bump_kmap',
    'extend_germ',
    'pointwise_kmap',
    'rescale',
    'verify_jet'
]

__version__ = '0.1.0'
