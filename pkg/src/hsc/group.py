"""Prime-order cyclic groups used by the signcryption schemes.

Two interchangeable instantiations sit behind one interface:

- :class:`Secp256k1Group` -- the production group.  secp256k1 has a prime
  order (cofactor 1), so the whole curve is the group.  Arithmetic is pure
  Python: Jacobian coordinates with a 4-bit fixed window for scalar
  multiplication.  This is research-grade code; it is NOT constant-time
  and must not be used where side channels matter.

- :class:`ToyGroup` -- the additive group of integers modulo a small prime
  q with generator 1.  Cryptographically worthless, but every operation
  equals plain modular arithmetic, which makes hand-checkable test vectors
  and brute-force oracles possible.

Scalars live in Z_q for the group order q.  Group elements and scalars are
immutable and safe to share between threads.  Operation counting
(:meth:`Group.counting`) is scoped to one thread at a time: enter a scope,
run one algorithm, read the tallies.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from typing import Iterator, Optional


class DecodeError(ValueError):
    """Base class for scalar/element decoding failures."""


class WrongLengthError(DecodeError):
    """Encoded input has the wrong number of bytes."""


class NonCanonicalScalarError(DecodeError):
    """Scalar encoding is out of range (value >= q)."""


class OffGroupError(DecodeError):
    """Element encoding does not name a group element."""


@dataclass(frozen=True)
class GroupDescriptor:
    """Public shape of a group: order and canonical encoding widths."""

    name: str
    q: int
    scalar_len: int
    element_len: int


@dataclass
class OpCounter:
    """Tallies of the operations that dominate runtime cost.

    scalar_mults counts scalar-by-element multiplications, group_adds
    counts element additions/subtractions, hash_calls counts oracle
    invocations.  Counters only move while their scope is active.
    """

    scalar_mults: int = 0
    group_adds: int = 0
    hash_calls: int = 0


class Scalar:
    """Element of Z_q, reduced on construction."""

    __slots__ = ("value", "q")

    def __init__(self, value: int, q: int) -> None:
        self.value = value % q
        self.q = q

    def _coerce(self, other: object) -> Optional["Scalar"]:
        if isinstance(other, Scalar):
            if other.q != self.q:
                raise ValueError("scalars from different groups")
            return other
        if isinstance(other, int):
            return Scalar(other, self.q)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Scalar(self.value + o.value, self.q)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Scalar(self.value - o.value, self.q)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Scalar(o.value - self.value, self.q)

    def __mul__(self, other):
        if isinstance(other, GroupElement):
            return other.group.mul(self, other)
        o = self._coerce(other)
        return NotImplemented if o is None else Scalar(self.value * o.value, self.q)

    __rmul__ = __mul__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.value, self.q)

    def invert(self) -> "Scalar":
        """Multiplicative inverse mod q; zero has none."""
        if self.value == 0:
            raise ZeroDivisionError("cannot invert the zero scalar")
        return Scalar(pow(self.value, -1, self.q), self.q)

    def is_zero(self) -> bool:
        return self.value == 0

    def __int__(self) -> int:
        return self.value

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self.q == other.q and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.q
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.q, self.value))

    def __repr__(self) -> str:
        return f"Scalar({self.value})"


class GroupElement:
    """Element of a prime-order group, bound to its group instance."""

    __slots__ = ("group", "value")

    def __init__(self, group: "Group", value) -> None:
        self.group = group
        self.value = value

    def __add__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.group.add(self, other)

    def __sub__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.group.sub(self, other)

    def __neg__(self) -> "GroupElement":
        return self.group.neg(self)

    def __rmul__(self, k):
        if isinstance(k, (Scalar, int)):
            return self.group.mul(k, self)
        return NotImplemented

    __mul__ = __rmul__

    def is_identity(self) -> bool:
        return self.group.is_identity_value(self.value)

    def encode(self) -> bytes:
        return self.group.encode_element(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        # descriptor equality, not instance identity: elements decoded
        # through two loads of the same params must compare equal
        return (self.group.descriptor == other.group.descriptor
                and self.value == other.value)

    def __hash__(self) -> int:
        return hash((self.group.descriptor.name, self.encode()))

    def __repr__(self) -> str:
        return f"GroupElement({self.group.descriptor.name}, {self.value!r})"


class Group:
    """Abstract prime-order cyclic group with canonical byte encodings.

    Subclasses fill in the value-level arithmetic (`_add_value` and
    friends); this base class owns scalar handling, encode/decode
    validation, and scoped operation counting.
    """

    descriptor: GroupDescriptor

    def __init__(self) -> None:
        # innermost scope only; None entries pause counting entirely
        self._counter_stack: list[Optional[OpCounter]] = []

    # -- counting scopes --------------------------------------------------

    @contextlib.contextmanager
    def counting(self) -> Iterator[OpCounter]:
        """Count operations until the scope exits.

        Scopes nest (the innermost one receives the tallies) and are
        confined to a single thread.
        """
        counter = OpCounter()
        self._counter_stack.append(counter)
        try:
            yield counter
        finally:
            self._counter_stack.pop()

    @contextlib.contextmanager
    def counter_paused(self) -> Iterator[None]:
        """Suspend counting for a sub-computation.

        Used where an algorithm's published cost accounting attributes an
        interior step (e.g. re-deriving a key-binding hash) to a different
        phase.
        """
        self._counter_stack.append(None)
        try:
            yield
        finally:
            self._counter_stack.pop()

    def _tally(self, field: str) -> None:
        if self._counter_stack:
            counter = self._counter_stack[-1]
            if counter is not None:
                setattr(counter, field, getattr(counter, field) + 1)

    def count_hash_call(self) -> None:
        """Hook for the hash oracles, which share the group's scope."""
        self._tally("hash_calls")

    # -- scalars -----------------------------------------------------------

    def scalar(self, value: int) -> Scalar:
        return Scalar(value, self.descriptor.q)

    def random_scalar(self, rng) -> Scalar:
        """Uniform scalar in [1, q-1]; never zero.

        `rng` is anything with randrange(), e.g. secrets.SystemRandom()
        or a seeded random.Random for reproducible tests.
        """
        return Scalar(rng.randrange(1, self.descriptor.q), self.descriptor.q)

    def encode_scalar(self, s: Scalar) -> bytes:
        return s.value.to_bytes(self.descriptor.scalar_len, "big")

    def decode_scalar(self, data: bytes) -> Scalar:
        if len(data) != self.descriptor.scalar_len:
            raise WrongLengthError(
                f"scalar needs {self.descriptor.scalar_len} bytes, got {len(data)}"
            )
        value = int.from_bytes(data, "big")
        if value >= self.descriptor.q:
            raise NonCanonicalScalarError("scalar encoding >= group order")
        return Scalar(value, self.descriptor.q)

    # -- element arithmetic (counted) ---------------------------------------

    def mul(self, k, X: GroupElement) -> GroupElement:
        """Scalar multiplication k*X.  Counts one scalar_mult."""
        if isinstance(k, Scalar):
            k = k.value
        self._tally("scalar_mults")
        return GroupElement(self, self._mul_value(k % self.descriptor.q, X.value))

    def add(self, X: GroupElement, Y: GroupElement) -> GroupElement:
        """Group law X+Y.  Counts one group_add."""
        self._tally("group_adds")
        return GroupElement(self, self._add_value(X.value, Y.value))

    def sub(self, X: GroupElement, Y: GroupElement) -> GroupElement:
        """X + (-Y), counted as a single group_add."""
        self._tally("group_adds")
        return GroupElement(self, self._add_value(X.value, self._neg_value(Y.value)))

    def neg(self, X: GroupElement) -> GroupElement:
        return GroupElement(self, self._neg_value(X.value))

    def generator(self) -> GroupElement:
        return GroupElement(self, self._generator_value())

    def identity(self) -> GroupElement:
        return GroupElement(self, self._identity_value())

    def is_identity_value(self, value) -> bool:
        return value == self._identity_value()

    # -- encodings -----------------------------------------------------------

    def encode_element(self, X: GroupElement) -> bytes:
        data = self._encode_value(X.value)
        assert len(data) == self.descriptor.element_len
        return data

    def decode_element(self, data: bytes) -> GroupElement:
        if len(data) != self.descriptor.element_len:
            raise WrongLengthError(
                f"element needs {self.descriptor.element_len} bytes, got {len(data)}"
            )
        return GroupElement(self, self._decode_value(data))

    # -- subclass surface ------------------------------------------------------

    def _generator_value(self):
        raise NotImplementedError

    def _identity_value(self):
        raise NotImplementedError

    def _add_value(self, xv, yv):
        raise NotImplementedError

    def _neg_value(self, xv):
        raise NotImplementedError

    def _mul_value(self, k: int, xv):
        raise NotImplementedError

    def _encode_value(self, xv) -> bytes:
        raise NotImplementedError

    def _decode_value(self, data: bytes):
        raise NotImplementedError


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for the word-sized toy moduli."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class ToyGroup(Group):
    """Additive integers mod a small prime q, generator 1.

    Every element IS its discrete log, so results can be checked against
    bare modular arithmetic.  Strictly for tests and worked examples.
    """

    def __init__(self, q: int) -> None:
        super().__init__()
        if not _is_prime(q):
            raise ValueError(f"toy group order must be prime, got {q}")
        nbytes = (q.bit_length() + 7) // 8
        self.descriptor = GroupDescriptor(
            name=f"toy-{q}", q=q, scalar_len=nbytes, element_len=nbytes
        )

    def element(self, value: int) -> GroupElement:
        """Element from its residue; convenience for tests."""
        if not 0 <= value < self.descriptor.q:
            raise ValueError("residue out of range")
        return GroupElement(self, value)

    def _generator_value(self) -> int:
        return 1

    def _identity_value(self) -> int:
        return 0

    def _add_value(self, xv: int, yv: int) -> int:
        return (xv + yv) % self.descriptor.q

    def _neg_value(self, xv: int) -> int:
        return -xv % self.descriptor.q

    def _mul_value(self, k: int, xv: int) -> int:
        return k * xv % self.descriptor.q

    def _encode_value(self, xv: int) -> bytes:
        return xv.to_bytes(self.descriptor.element_len, "big")

    def _decode_value(self, data: bytes) -> int:
        value = int.from_bytes(data, "big")
        if value >= self.descriptor.q:
            raise OffGroupError("toy element encoding >= q")
        return value


# -- secp256k1: y^2 = x^3 + 7 over F_p, prime order N --------------------------

_P = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F
_N = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
_GX = 0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798
_GY = 0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8
_B = 7

# affine points are (x, y) tuples; None is the point at infinity
_INFINITY_ENCODING = b"\x00" * 33


def _jac_double(X1, Y1, Z1):
    # dbl-2009-l, a = 0
    p = _P
    A = X1 * X1 % p
    B = Y1 * Y1 % p
    C = B * B % p
    D = 2 * ((X1 + B) * (X1 + B) - A - C) % p
    E = 3 * A % p
    F = E * E % p
    X3 = (F - 2 * D) % p
    Y3 = (E * (D - X3) - 8 * C) % p
    Z3 = 2 * Y1 * Z1 % p
    return X3, Y3, Z3


def _jac_add(X1, Y1, Z1, X2, Y2, Z2):
    # add-2007-bl; falls back to doubling when the inputs coincide
    p = _P
    Z1Z1 = Z1 * Z1 % p
    Z2Z2 = Z2 * Z2 % p
    U1 = X1 * Z2Z2 % p
    U2 = X2 * Z1Z1 % p
    S1 = Y1 * Z2 * Z2Z2 % p
    S2 = Y2 * Z1 * Z1Z1 % p
    H = (U2 - U1) % p
    if H == 0:
        if (S2 - S1) % p == 0:
            return _jac_double(X1, Y1, Z1)
        return 0, 1, 0
    I = 4 * H * H % p
    J = H * I % p
    r = 2 * (S2 - S1) % p
    V = U1 * I % p
    X3 = (r * r - J - 2 * V) % p
    Y3 = (r * (V - X3) - 2 * S1 * J) % p
    Z3 = ((Z1 + Z2) * (Z1 + Z2) - Z1Z1 - Z2Z2) % p * H % p
    return X3, Y3, Z3


def _jac_to_affine(X, Y, Z):
    if Z == 0:
        return None
    zi = pow(Z, -1, _P)
    zi2 = zi * zi % _P
    return X * zi2 % _P, Y * zi2 % _P * zi % _P


class Secp256k1Group(Group):
    """secp256k1 as a plain prime-order group (no ECDSA baggage).

    Canonical element encoding is 33 bytes: SEC1 compressed for proper
    points, 33 zero bytes for the identity.  Decoding rejects anything
    non-canonical instead of normalising it.
    """

    def __init__(self) -> None:
        super().__init__()
        self.descriptor = GroupDescriptor(
            name="secp256k1", q=_N, scalar_len=32, element_len=33
        )

    def _generator_value(self):
        return (_GX, _GY)

    def _identity_value(self):
        return None

    def _add_value(self, xv, yv):
        if xv is None:
            return yv
        if yv is None:
            return xv
        return _jac_to_affine(*_jac_add(xv[0], xv[1], 1, yv[0], yv[1], 1))

    def _neg_value(self, xv):
        if xv is None:
            return None
        return (xv[0], _P - xv[1])

    def _mul_value(self, k: int, xv):
        if xv is None or k == 0:
            return None
        x, y = xv
        # 4-bit fixed window over a Jacobian table
        tbl = [(0, 1, 0), (x, y, 1)]
        for i in range(2, 16):
            if i & 1:
                tbl.append(_jac_add(*tbl[i - 1], x, y, 1))
            else:
                tbl.append(_jac_double(*tbl[i >> 1]))
        nibbles = []
        while k:
            nibbles.append(k & 15)
            k >>= 4
        rx, ry, rz = 0, 1, 0
        for nib in reversed(nibbles):
            if rz:
                rx, ry, rz = _jac_double(rx, ry, rz)
                rx, ry, rz = _jac_double(rx, ry, rz)
                rx, ry, rz = _jac_double(rx, ry, rz)
                rx, ry, rz = _jac_double(rx, ry, rz)
            if nib:
                tx, ty, tz = tbl[nib]
                if rz == 0:
                    rx, ry, rz = tx, ty, tz
                else:
                    rx, ry, rz = _jac_add(rx, ry, rz, tx, ty, tz)
        return _jac_to_affine(rx, ry, rz)

    def _encode_value(self, xv) -> bytes:
        if xv is None:
            return _INFINITY_ENCODING
        x, y = xv
        prefix = b"\x03" if y & 1 else b"\x02"
        return prefix + x.to_bytes(32, "big")

    def _decode_value(self, data: bytes):
        if data[0] == 0x00:
            if data != _INFINITY_ENCODING:
                raise OffGroupError("non-canonical identity encoding")
            return None
        if data[0] not in (0x02, 0x03):
            raise OffGroupError(f"bad point prefix 0x{data[0]:02x}")
        x = int.from_bytes(data[1:], "big")
        if x >= _P:
            raise OffGroupError("x coordinate >= field prime")
        y_sq = (pow(x, 3, _P) + _B) % _P
        y = pow(y_sq, (_P + 1) // 4, _P)
        if y * y % _P != y_sq:
            raise OffGroupError("x coordinate is not on the curve")
        if (y & 1) != (data[0] & 1):
            y = _P - y
        return (x, y)


def make_group(name: str) -> Group:
    """Instantiate a group from its descriptor name ("secp256k1", "toy-13")."""
    if name == "secp256k1":
        return Secp256k1Group()
    if name.startswith("toy-"):
        try:
            q = int(name[4:])
        except ValueError:
            raise ValueError(f"malformed toy group name {name!r}") from None
        return ToyGroup(q)
    raise ValueError(f"unknown group {name!r}")
