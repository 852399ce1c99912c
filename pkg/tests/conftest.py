from __future__ import annotations

import pytest

from dimermirror import load_bundled
from dimermirror.hochschild import KoszulComplex
from dimermirror.jacobi import Jacobi
from dimermirror.ks import KSVerifier
from dimermirror.mirror_sh import MirrorSH

NAMES = ("c3", "conifold", "spp")


@pytest.fixture(scope="session")
def dimers():
    return {name: load_bundled(name) for name in NAMES}


@pytest.fixture(scope="session")
def jacobis(dimers):
    return {name: Jacobi(d) for name, d in dimers.items()}


@pytest.fixture(scope="session")
def complexes(jacobis):
    return {name: KoszulComplex(jac) for name, jac in jacobis.items()}


@pytest.fixture(scope="session")
def sh_models(dimers):
    return {name: MirrorSH(d) for name, d in dimers.items()}


@pytest.fixture(scope="session")
def verifiers(dimers):
    return {name: KSVerifier(d, n_max=10) for name, d in dimers.items()}
