"""Tests for the trans-Sasakian workbench."""
