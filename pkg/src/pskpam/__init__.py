"""Constellation design and simulation under channel phase-estimate error."""

