"""Tests for modelgeom."""
