"""Seed image analysis: segmentation of blue-background scans, 64 shape,
texture and colour descriptors, and classifier evaluation."""

__version__ = "0.1.0"
