__version__ = "0.1.0"

from .model import ProblemSpec, Event, EventTuple
from .engines import run_engine, brute_force_NW, direct_ie_NW, spectrum_NW
from .search import ramsey_number, cross_validate
from .report_generator import ReportGenerator

__all__ = ['ProblemSpec', 'Event', 'EventTuple', 'run_engine', 'brute_force_NW',
           'direct_ie_NW', 'spectrum_NW', 'ramsey_number', 'cross_validate', 'ReportGenerator']
