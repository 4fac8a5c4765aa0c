"""Catalog generators, file formats, the verification suite and the CLI."""

from .catalog import generate_building, product_building
from .io import io_roundtrip
from .suite import SuiteReport, run_verification

__all__ = ["SuiteReport", "generate_building", "io_roundtrip", "product_building", "run_verification"]
