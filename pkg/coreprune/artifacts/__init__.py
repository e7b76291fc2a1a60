"""On-disk formats: NPY arrays, network manifests, result reports."""

from .manifest import NetworkManifest, load_manifest, save_network
from .npy_format import read_array, write_array
from .reports import (
    REPORT_CSV_COLUMNS,
    records_to_csv,
    report_frame,
    report_from_json,
    report_to_csv,
    report_to_json,
)

__all__ = [
    "NetworkManifest",
    "REPORT_CSV_COLUMNS",
    "load_manifest",
    "read_array",
    "records_to_csv",
    "report_frame",
    "report_from_json",
    "report_to_csv",
    "report_to_json",
    "save_network",
    "write_array",
]
