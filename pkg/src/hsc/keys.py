"""System setup and the two kinds of user key material.

A key generation center (KGC) runs :func:`setup` once, publishing
:class:`SystemParams` and guarding the :class:`MasterKey`.  PKI users
self-generate (:func:`pki_keygen`).  Certificateless users go through the
two-step dance: the KGC issues a partial private key bound to their
identity (:func:`clc_extract_partial`), and the user combines it with a
self-chosen secret value (:func:`clc_finalize`).

A partial key (d, T) is authentic for identity ID iff

    d*P == T + H1(ID, T)*Ppub

which anyone can check from public data; :func:`verify_partial_key` does,
and finalization refuses inauthentic partials.  Finalization also rejects
the degenerate x_c == -d case up front, because the reverse-direction
scheme divides by (x_c + d) and keys are long-lived.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Union

from .group import Group, GroupElement, Scalar, make_group
from .hashing import HashConfig, HashOracles

DEFAULT_MESSAGE_BITS = 8192

_system_rng = secrets.SystemRandom()


class PartialKeyError(ValueError):
    """Partial private key fails its authenticity equation."""


class DegenerateKeyError(ValueError):
    """Secret value collides with the partial key (x_c + d == 0)."""


@dataclass
class SystemParams:
    """Public parameters: the group, its generator P, the KGC public key
    Ppub, the message cap n (bits), the security parameter l (bits), and
    the hash configuration.  Immutable by convention once published."""

    group: Group
    P: GroupElement
    Ppub: GroupElement
    n: int
    l: int
    hash: HashConfig

    @cached_property
    def oracles(self) -> HashOracles:
        return HashOracles(self.group, self.hash, self.max_message_bytes)

    @property
    def max_message_bytes(self) -> int:
        return self.n // 8


@dataclass
class MasterKey:
    """KGC master secret; never leaves the KGC role, never serialized
    into any public structure."""

    s: Scalar


@dataclass
class PkiKeyPair:
    """PKI user key: private x_p, public PK_p = (1/x_p)*P."""

    x_p: Scalar
    PK_p: GroupElement


@dataclass
class ClcPartialKey:
    """Identity-bound partial private key issued by the KGC: d = t + s*γ
    with commitment T = t*P.  The ephemeral t is destroyed after issue."""

    d: Scalar
    T: GroupElement


class ClcPublicKey(NamedTuple):
    """The certificateless public key pair (T, PK_c1)."""

    T: GroupElement
    PK_c1: GroupElement


@dataclass
class ClcKeyPair:
    """Full certificateless key: identity, both private halves (x_c, d),
    and the public halves (T, PK_c1 = x_c*P)."""

    identity: bytes
    x_c: Scalar
    d: Scalar
    T: GroupElement
    PK_c1: GroupElement

    @property
    def public(self) -> ClcPublicKey:
        return ClcPublicKey(self.T, self.PK_c1)


def setup(
    group: Union[Group, str],
    n: int = DEFAULT_MESSAGE_BITS,
    l: Optional[int] = None,
    rng=None,
    hash_config: Optional[HashConfig] = None,
) -> tuple[SystemParams, MasterKey]:
    """Create system parameters and the KGC master key.

    `group` is a Group instance or a registered name.  `n` caps message
    length in bits; `l` defaults to the bit length of the group order.
    """
    if isinstance(group, str):
        group = make_group(group)
    if n <= 0:
        raise ValueError("message cap n must be positive")
    rng = rng or _system_rng
    s = group.random_scalar(rng)
    P = group.generator()
    Ppub = s * P
    params = SystemParams(
        group=group,
        P=P,
        Ppub=Ppub,
        n=n,
        l=l if l is not None else group.descriptor.q.bit_length(),
        hash=hash_config or HashConfig(),
    )
    return params, MasterKey(s=s)


def pki_keygen(params: SystemParams, rng=None) -> PkiKeyPair:
    """Self-generated PKI key: x_p random, PK_p = (1/x_p)*P."""
    rng = rng or _system_rng
    x_p = params.group.random_scalar(rng)
    PK_p = x_p.invert() * params.P
    return PkiKeyPair(x_p=x_p, PK_p=PK_p)


def clc_extract_partial(
    params: SystemParams,
    master: MasterKey,
    identity: bytes,
    rng=None,
    *,
    oracles: Optional[HashOracles] = None,
) -> ClcPartialKey:
    """KGC role: issue the partial private key (d, T) for `identity`.

    Resamples the ephemeral t in the (probability 1/q) event that
    d = t + s*γ reduces to zero, so d is always invertible.
    """
    rng = rng or _system_rng
    oracles = oracles or params.oracles
    while True:
        t = params.group.random_scalar(rng)
        T = t * params.P
        gamma = oracles.h1(identity, T)
        d = t + master.s * gamma
        if not d.is_zero():
            return ClcPartialKey(d=d, T=T)


def verify_partial_key(
    params: SystemParams,
    identity: bytes,
    partial: ClcPartialKey,
    *,
    oracles: Optional[HashOracles] = None,
) -> bool:
    """True iff d*P == T + H1(identity, T)*Ppub."""
    oracles = oracles or params.oracles
    gamma = oracles.h1(identity, partial.T)
    return partial.d * params.P == partial.T + gamma * params.Ppub


def clc_finalize(
    params: SystemParams,
    identity: bytes,
    partial: ClcPartialKey,
    x_c: Scalar,
    *,
    oracles: Optional[HashOracles] = None,
) -> ClcKeyPair:
    """User role: combine the KGC partial key with the secret value x_c.

    Raises PartialKeyError if the partial key is inauthentic and
    DegenerateKeyError if x_c + d == 0 (caller must resample x_c).
    """
    if x_c.is_zero():
        raise ValueError("secret value x_c must be nonzero")
    # the authenticity check is ours, not part of the scheme's published
    # key-generation cost, so it runs outside any counting scope
    with params.group.counter_paused():
        if not verify_partial_key(params, identity, partial, oracles=oracles):
            raise PartialKeyError(f"partial key fails authenticity for {identity!r}")
    if (x_c + partial.d).is_zero():
        raise DegenerateKeyError("x_c + d == 0; resample the secret value")
    return ClcKeyPair(
        identity=identity,
        x_c=x_c,
        d=partial.d,
        T=partial.T,
        PK_c1=x_c * params.P,
    )


def clc_keygen(
    params: SystemParams,
    master: MasterKey,
    identity: bytes,
    rng=None,
) -> ClcKeyPair:
    """Full certificateless keygen in one call (extract + finalize),
    resampling x_c on the degenerate case."""
    rng = rng or _system_rng
    partial = clc_extract_partial(params, master, identity, rng)
    while True:
        try:
            return clc_finalize(params, identity, partial, params.group.random_scalar(rng))
        except DegenerateKeyError:
            continue
