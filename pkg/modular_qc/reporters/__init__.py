# pylint: disable=missing-docstring
from .base import Reporter, FileReporter, TableReporter, SCHEMA_VERSION
from .artifacts import RunArtifactsReporter
