"""Image decoding, dataset exchange (ARFF/CSV), directory ingestion and
model persistence."""
from .archive import ModelArchive, check_schema, load_model, save_model
from .arff import read_arff, write_arff
from .csvio import read_csv, write_csv
from .images import load_image, save_png
from .ingest import FilterSettings, IngestResult, ingest_directory

__all__ = [
    "ModelArchive", "check_schema", "load_model", "save_model", "read_arff", "write_arff",
    "read_csv", "write_csv", "load_image", "save_png", "FilterSettings", "IngestResult",
    "ingest_directory",
]
