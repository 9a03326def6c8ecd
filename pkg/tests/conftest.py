"""Shared fixtures: threshold tables and enumerated spectra are expensive
enough (seconds each) that the whole suite shares one copy."""

from __future__ import annotations

import pytest

from dirac1d import build_root_tables, enumerate_bound_states

SPECTRUM_GAMMAS = (0.5, 2.0, 5.0, 7.5, 10.0)


@pytest.fixture(scope="session")
def tables20():
    return build_root_tables(20)


@pytest.fixture(scope="session")
def tables8():
    return build_root_tables(8)


@pytest.fixture(scope="session")
def spectra(tables20):
    return {g: enumerate_bound_states(g, 1e-8, tables20) for g in SPECTRUM_GAMMAS}


@pytest.fixture(scope="session")
def fd_energies():
    from oracles import fd_richardson_energies

    return {g: fd_richardson_energies(g) for g in SPECTRUM_GAMMAS}
