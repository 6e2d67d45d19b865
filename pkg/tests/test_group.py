"""Group layer: toy group vs bare modular arithmetic, the production
curve vs an independent affine implementation, encodings, counters."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from hsc.group import (
    NonCanonicalScalarError,
    OffGroupError,
    Secp256k1Group,
    ToyGroup,
    WrongLengthError,
    make_group,
)

# -- independent oracles -------------------------------------------------------


def egcd_inverse(a: int, q: int) -> int:
    """Extended Euclid, kept free of the library's pow() shortcut."""
    old_r, r = a % q, q
    old_s, s = 1, 0
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
    assert old_r == 1, "not invertible"
    return old_s % q


_P = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F


def affine_add(p1, p2):
    """Textbook affine secp256k1 addition; independent of the library's
    Jacobian path."""
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    if p1[0] == p2[0] and (p1[1] + p2[1]) % _P == 0:
        return None
    if p1 == p2:
        lam = 3 * p1[0] * p1[0] * egcd_inverse(2 * p1[1], _P) % _P
    else:
        lam = (p2[1] - p1[1]) * egcd_inverse((p2[0] - p1[0]) % _P, _P) % _P
    x3 = (lam * lam - p1[0] - p2[0]) % _P
    return (x3, (lam * (p1[0] - x3) - p1[1]) % _P)


def affine_mul(k, point):
    acc = None
    while k:
        if k & 1:
            acc = affine_add(acc, point)
        point = affine_add(point, point)
        k >>= 1
    return acc


# -- toy group exhaustive against modular arithmetic ---------------------------


@pytest.mark.parametrize("q", [13, 101])
class TestToyAgainstModularOracle:
    def test_add_sub_exhaustive(self, q):
        toy = ToyGroup(q)
        for a in range(q):
            for b in range(q):
                assert (toy.element(a) + toy.element(b)).value == (a + b) % q
                assert (toy.element(a) - toy.element(b)).value == (a - b) % q

    def test_mul_exhaustive(self, q):
        toy = ToyGroup(q)
        for k in range(q):
            for x in range(q):
                assert (k * toy.element(x)).value == k * x % q

    def test_scalar_field_exhaustive(self, q):
        toy = ToyGroup(q)
        for a in range(q):
            for b in range(q):
                assert int(toy.scalar(a) + toy.scalar(b)) == (a + b) % q
                assert int(toy.scalar(a) - toy.scalar(b)) == (a - b) % q
                assert int(toy.scalar(a) * toy.scalar(b)) == a * b % q

    def test_invert_against_egcd(self, q):
        toy = ToyGroup(q)
        for a in range(1, q):
            assert int(toy.scalar(a).invert()) == egcd_inverse(a, q)


class TestScalarOps:
    def test_worked_inverse(self):
        toy = ToyGroup(13)
        assert int(toy.scalar(5).invert()) == 8  # 5*8 = 40 = 1 mod 13

    def test_additive_identity(self):
        toy = ToyGroup(13)
        for a in range(13):
            assert toy.scalar(a) + toy.scalar(0) == toy.scalar(a)

    def test_worked_mul(self):
        toy = ToyGroup(13)
        assert int((toy.scalar(9) - toy.scalar(7)) * toy.scalar(5)) == 10

    def test_invert_zero_raises(self):
        toy = ToyGroup(13)
        with pytest.raises(ZeroDivisionError):
            toy.scalar(0).invert()

    def test_cross_group_mixing_rejected(self):
        with pytest.raises(ValueError):
            ToyGroup(13).scalar(1) + ToyGroup(101).scalar(1)

    @given(a=st.integers(0, 100), b=st.integers(0, 100), c=st.integers(0, 100))
    def test_field_laws_q101(self, a, b, c):
        s = ToyGroup(101).scalar
        assert (s(a) + s(b)) + s(c) == s(a) + (s(b) + s(c))
        assert s(a) * (s(b) + s(c)) == s(a) * s(b) + s(a) * s(c)
        if a % 101:
            assert s(a) * s(a).invert() == s(1)


class TestScalarRandom:
    def test_toy_draws_nonzero_in_range(self):
        toy = ToyGroup(13)
        rng = random.Random(1)
        draws = {int(toy.random_scalar(rng)) for _ in range(10_000)}
        assert draws == set(range(1, 13))

    def test_seeded_determinism(self):
        toy = ToyGroup(13)
        a = [int(toy.random_scalar(random.Random(7))) for _ in range(20)]
        b = [int(toy.random_scalar(random.Random(7))) for _ in range(20)]
        assert a == b

    def test_production_range(self, secp):
        rng = random.Random(2)
        q = secp.descriptor.q
        assert all(0 < int(secp.random_scalar(rng)) < q for _ in range(10_000))


class TestPointOps:
    def test_worked_toy_mul(self):
        toy = ToyGroup(13)
        assert (7 * toy.element(6)).value == 3  # 42 mod 13

    def test_identity_scalar(self, secp, rng):
        X = secp.random_scalar(rng) * secp.generator()
        assert 1 * X == X
        assert (0 * X).is_identity()

    def test_worked_toy_add(self):
        toy = ToyGroup(13)
        assert (toy.element(2) + toy.element(2)).value == 4

    def test_add_identity_and_self_cancel(self, secp, rng):
        X = secp.random_scalar(rng) * secp.generator()
        assert X + secp.identity() == X
        assert (X - X).is_identity()

    @given(a=st.integers(0, 100), b=st.integers(0, 100), x=st.integers(0, 100))
    def test_distributivity_toy(self, a, b, x):
        toy = ToyGroup(101)
        X = toy.element(x)
        assert (toy.scalar(a) + toy.scalar(b)) * X == a * X + b * X

    @settings(max_examples=10, deadline=None)
    @given(a=st.integers(1, 2**256), b=st.integers(1, 2**256))
    def test_distributivity_production(self, secp, a, b):
        X = secp.generator()
        assert (secp.scalar(a) + secp.scalar(b)) * X == a * X + b * X

    @settings(max_examples=10, deadline=None)
    @given(a=st.integers(1, 2**255))
    def test_invert_undoes_mul(self, secp, a):
        s = secp.scalar(a)
        if s.is_zero():
            return
        X = secp.generator()
        assert s.invert() * (s * X) == X


class TestSecpAgainstAffineOracle:
    def test_mul_matches_affine_double_and_add(self, secp, rng):
        G = secp.generator()
        for _ in range(12):
            k = rng.randrange(1, secp.descriptor.q)
            assert (k * G).value == affine_mul(k, G.value)

    def test_mul_on_non_generator_base(self, secp, rng):
        X = rng.randrange(2, 2**64) * secp.generator()
        for _ in range(6):
            k = rng.randrange(1, secp.descriptor.q)
            assert (k * X).value == affine_mul(k, X.value)

    def test_add_matches_affine(self, secp, rng):
        G = secp.generator()
        X = rng.randrange(2, 2**64) * G
        Y = rng.randrange(2, 2**64) * G
        assert (X + Y).value == affine_add(X.value, Y.value)
        assert (X + X).value == affine_add(X.value, X.value)

    def test_order_annihilates(self, secp):
        q = secp.descriptor.q
        G = secp.generator()
        assert (q * G).is_identity()
        assert (q - 1) * G == -G


class TestEncodings:
    def test_identity_roundtrips(self, secp):
        for group in (secp, ToyGroup(13)):
            data = group.encode_element(group.identity())
            assert len(data) == group.descriptor.element_len
            assert group.decode_element(data).is_identity()

    def test_toy_fixed_width_big_endian(self):
        toy = ToyGroup(13)
        assert toy.encode_element(toy.element(7)) == b"\x07"
        assert toy.decode_element(b"\x07").value == 7

    def test_production_roundtrip_1000(self, secp, rng):
        G = secp.generator()
        for _ in range(1000):
            X = secp.random_scalar(rng) * G
            assert secp.decode_element(secp.encode_element(X)) == X

    def test_scalar_roundtrip(self, secp, rng):
        for _ in range(200):
            s = secp.random_scalar(rng)
            assert secp.decode_scalar(secp.encode_scalar(s)) == s

    def test_equality_across_group_instances(self, secp, rng):
        other = Secp256k1Group()
        X = 7 * secp.generator()
        assert other.decode_element(secp.encode_element(X)) == X


def _off_curve_x(limit=1000):
    """Smallest x whose x^3+7 is a quadratic non-residue mod p."""
    for x in range(2, limit):
        y_sq = (pow(x, 3, _P) + 7) % _P
        if pow(y_sq, (_P - 1) // 2, _P) != 1:
            return x
    raise AssertionError("no off-curve x found")


class TestDecodeRejections:
    def test_wrong_length_is_distinct(self, secp):
        with pytest.raises(WrongLengthError):
            secp.decode_element(b"\x02" + b"\x00" * 31)
        with pytest.raises(WrongLengthError):
            secp.decode_scalar(b"\x00" * 31)

    def test_bad_prefix(self, secp):
        with pytest.raises(OffGroupError):
            secp.decode_element(b"\x04" + b"\x11" * 32)

    def test_x_at_least_field_prime(self, secp):
        with pytest.raises(OffGroupError):
            secp.decode_element(b"\x02" + _P.to_bytes(32, "big"))

    def test_x_not_on_curve(self, secp):
        bad = b"\x02" + _off_curve_x().to_bytes(32, "big")
        with pytest.raises(OffGroupError):
            secp.decode_element(bad)

    def test_non_canonical_identity(self, secp):
        with pytest.raises(OffGroupError):
            secp.decode_element(b"\x00" * 32 + b"\x01")

    def test_scalar_out_of_range(self, secp):
        q = secp.descriptor.q
        for v in (q, q + 1, 2**256 - 1):
            with pytest.raises(NonCanonicalScalarError):
                secp.decode_scalar(v.to_bytes(32, "big"))

    def test_toy_rejects_residues_at_or_above_q(self):
        toy = ToyGroup(13)
        for v in range(13, 256):
            with pytest.raises(OffGroupError):
                toy.decode_element(bytes([v]))
            with pytest.raises(NonCanonicalScalarError):
                toy.decode_scalar(bytes([v]))


class TestCounters:
    def test_counts_only_inside_scope(self):
        toy = ToyGroup(13)
        X = toy.element(2)
        2 * X
        with toy.counting() as c:
            2 * X
            X + X
            X - X
        2 * X
        assert (c.scalar_mults, c.group_adds) == (1, 2)

    def test_nested_scope_shadows_outer(self):
        toy = ToyGroup(13)
        X = toy.element(2)
        with toy.counting() as outer:
            2 * X
            with toy.counting() as inner:
                2 * X
                2 * X
        assert outer.scalar_mults == 1
        assert inner.scalar_mults == 2

    def test_pause_blocks_counting(self):
        toy = ToyGroup(13)
        X = toy.element(2)
        with toy.counting() as c:
            2 * X
            with toy.counter_paused():
                2 * X
                toy.count_hash_call()
            toy.count_hash_call()
        assert (c.scalar_mults, c.hash_calls) == (1, 1)

    def test_fresh_counter_per_scope(self):
        toy = ToyGroup(13)
        with toy.counting() as a:
            2 * toy.element(2)
        with toy.counting() as b:
            pass
        assert a.scalar_mults == 1
        assert b.scalar_mults == 0


class TestRegistry:
    def test_make_group_names(self):
        assert isinstance(make_group("secp256k1"), Secp256k1Group)
        assert make_group("toy-13").descriptor.q == 13

    def test_descriptor_widths(self, secp):
        d = secp.descriptor
        assert (d.scalar_len, d.element_len) == (32, 33)
        assert ToyGroup(101).descriptor.scalar_len == 1

    def test_rejects_unknown_and_composite(self):
        with pytest.raises(ValueError):
            make_group("p256")
        with pytest.raises(ValueError):
            make_group("toy-12")
        with pytest.raises(ValueError):
            make_group("toy-abc")
