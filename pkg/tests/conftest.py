"""Shared fixtures: scripted entropy, the q=13 worked example, and a
session-wide production setup (seeded, so failures reproduce)."""

from __future__ import annotations

import random
from types import SimpleNamespace

import pytest

from hsc import keys
from hsc.group import Secp256k1Group, ToyGroup
from hsc.hashing import ScriptedOracle


class FixedRng:
    """randrange() pops pre-scripted values; raises when exhausted."""

    def __init__(self, *values: int) -> None:
        self.values = list(values)

    def randrange(self, start: int, stop: int) -> int:
        if not self.values:
            raise AssertionError("scripted rng exhausted")
        value = self.values.pop(0)
        assert start <= value < stop, f"scripted value {value} outside [{start},{stop})"
        return value


class RecordingRng:
    """Wraps a real rng and keeps every draw, so tests can recover the
    nonces an algorithm consumed."""

    def __init__(self, inner) -> None:
        self.inner = inner
        self.draws: list[int] = []

    def randrange(self, *args) -> int:
        value = self.inner.randrange(*args)
        self.draws.append(value)
        return value


@pytest.fixture
def toy13():
    """The q=13 worked example: scripted keys, scripted oracle, and the
    frozen expected values (independently recomputed in the acceptance
    suite)."""
    toy = ToyGroup(13)
    params, master = keys.setup(toy, n=8, rng=FixedRng(3))
    el = toy.element
    oracle = ScriptedOracle(
        toy,
        h1={(b"server", el(2)): 5},
        h2={(bytes([0b1010]), el(7)): 9},
        h3={el(9): bytes([0b0110])},
    )
    partial = keys.clc_extract_partial(params, master, b"server", FixedRng(2),
                                       oracles=oracle)
    clc = keys.clc_finalize(params, b"server", partial, toy.scalar(6), oracles=oracle)
    pki = keys.pki_keygen(params, FixedRng(5))
    return SimpleNamespace(
        group=toy, params=params, master=master, oracle=oracle,
        partial=partial, clc=clc, pki=pki,
        identity=b"server", m=bytes([0b1010]), k=7,
        pchs_sigma=(bytes([0b1100]), 10, 7),
        cphs_sigma=(bytes([0b1100]), 8, 4),
    )


@pytest.fixture(scope="session")
def secp():
    return Secp256k1Group()


@pytest.fixture(scope="session")
def prod():
    """Production-group setup with one PKI and one CLC user."""
    rng = random.Random(0xC0FFEE)
    params, master = keys.setup("secp256k1", rng=rng)
    alice = keys.pki_keygen(params, rng)
    bob = keys.clc_keygen(params, master, b"server", rng)
    return SimpleNamespace(params=params, master=master, alice=alice, bob=bob,
                           identity=b"server")


@pytest.fixture
def rng():
    return random.Random(0x5EED)
