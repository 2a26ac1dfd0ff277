# pylint: disable=missing-docstring
from .base import Transformer
from .scenario import Scenario, ScenarioTransformer, parse_duration, format_duration, dump, config_hash
