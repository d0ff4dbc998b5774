"""Tests for mixturecalc."""
