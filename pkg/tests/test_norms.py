import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poincare_cube.cube import CubeFunction
from poincare_cube.errors import InvalidInputError, UnsupportedSpaceError
from poincare_cube.norms import (
    FunctionSpace,
    abs_operator,
    dual_space,
    function_norm,
    khintchine_constant,
    luxemburg_norm,
    normalized_trace,
    parse_space,
    phi,
    psd_sqrt,
    schatten_norm,
    sequence_norm,
    space_caveats,
    square_function,
)


class TestParseSpace:
    @pytest.mark.parametrize(
        ("text", "expected"),
        [
            ("lp:2", FunctionSpace.lp(2.0)),
            (" LP:1.5 ", FunctionSpace.lp(1.5)),
            ("linf", FunctionSpace.linf()),
            ("lp:inf", FunctionSpace.linf()),
            ("orlicz", FunctionSpace.orlicz()),
        ],
    )
    def test_valid(self, text, expected):
        assert parse_space(text) == expected

    @pytest.mark.parametrize("text", ["lq:2", "lp", "lp:abc", "lp:0.5", "l2"])
    def test_invalid(self, text):
        with pytest.raises(InvalidInputError):
            parse_space(text)

    def test_descriptor_round_trips(self):
        for text in ("lp:3", "linf", "orlicz"):
            assert parse_space(parse_space(text).descriptor) == parse_space(text)

    def test_convexity_flags(self):
        assert FunctionSpace.lp(2).two_concave and FunctionSpace.lp(2).two_convex
        assert FunctionSpace.lp(1.5).two_concave and not FunctionSpace.lp(1.5).two_convex
        assert FunctionSpace.orlicz().two_convex and not FunctionSpace.orlicz().two_concave

    def test_exponent_on_linf_is_rejected(self):
        with pytest.raises(InvalidInputError):
            FunctionSpace("linf", 3.0)


class TestDualSpace:
    def test_conjugate_exponents(self):
        assert dual_space(FunctionSpace.lp(4)) == FunctionSpace.lp(4 / 3)
        assert dual_space(FunctionSpace.lp(2)) == FunctionSpace.lp(2)
        assert dual_space(FunctionSpace.lp(1)) == FunctionSpace.linf()
        assert dual_space(FunctionSpace.linf()) == FunctionSpace.lp(1)

    def test_orlicz_dual_is_unsupported(self):
        with pytest.raises(UnsupportedSpaceError):
            dual_space(FunctionSpace.orlicz())


class TestKhintchineConstant:
    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0])
    def test_two_concave_is_one(self, p):
        assert khintchine_constant(FunctionSpace.lp(p)) == 1.0

    @pytest.mark.parametrize(("p", "expected"), [(4, 3 ** 0.25), (6, 15 ** (1 / 6))])
    def test_sharp_even_moments(self, p, expected):
        assert khintchine_constant(FunctionSpace.lp(p)) == pytest.approx(expected)

    def test_generic_exponent_uses_universal_constant(self):
        assert khintchine_constant(FunctionSpace.lp(3), c=2.0) == pytest.approx(2 * math.sqrt(3))

    def test_orlicz(self):
        assert khintchine_constant(FunctionSpace.orlicz(), c=2.0) == pytest.approx(12.0)

    def test_linf_is_unsupported(self):
        with pytest.raises(UnsupportedSpaceError):
            khintchine_constant(FunctionSpace.linf())

    def test_caveats(self):
        assert space_caveats(FunctionSpace.lp(4)) == []
        assert space_caveats(FunctionSpace.lp(1.5)) == []
        assert space_caveats(FunctionSpace.lp(3), c=2.0) == [
            "non-sharp Khintchine constant",
            "conditional on C = 2",
        ]
        assert space_caveats(FunctionSpace.linf()) == ["no Khintchine constant for L^∞"]


class TestSequenceNorms:
    def test_lp_uses_the_uniform_probability(self):
        assert sequence_norm([3.0, 4.0], FunctionSpace.lp(2)) == pytest.approx(math.sqrt(12.5))
        assert sequence_norm([1.0, -3.0], FunctionSpace.linf()) == 3.0

    def test_zero_and_empty(self):
        assert sequence_norm([0.0, 0.0], FunctionSpace.lp(3)) == 0.0
        assert luxemburg_norm([0.0]) == 0.0
        with pytest.raises(InvalidInputError):
            sequence_norm([], FunctionSpace.lp(2))

    def test_walsh_function_has_unit_norm(self):
        f = CubeFunction.walsh(3, [1, 3])
        for sp in (FunctionSpace.lp(1), FunctionSpace.lp(4), FunctionSpace.linf()):
            assert function_norm(f, sp) == pytest.approx(1.0)

    def test_lp_norms_increase_with_p(self, random_function):
        f = random_function(4)
        norms = [function_norm(f, FunctionSpace.lp(p)) for p in (1, 2, 3, 8)]
        assert norms == sorted(norms)
        assert norms[-1] <= function_norm(f, FunctionSpace.linf()) + 1e-12

    @settings(max_examples=30, deadline=None)
    @given(
        st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=16).filter(
            lambda xs: max(abs(x) for x in xs) > 1e-3
        )
    )
    def test_luxemburg_norm_is_the_unit_level(self, xs):
        a = np.abs(np.asarray(xs))
        t = luxemburg_norm(a)
        assert float(phi(a / t).mean()) == pytest.approx(1.0, rel=1e-8)

    def test_luxemburg_scales(self):
        a = np.array([1.0, 2.0, 0.5])
        assert luxemburg_norm(3 * a) == pytest.approx(3 * luxemburg_norm(a), rel=1e-10)


class TestSchattenNorms:
    def test_normalized_trace(self):
        assert schatten_norm(np.eye(4), FunctionSpace.lp(3)) == pytest.approx(1.0)
        assert schatten_norm(np.diag([2.0, 0.0]), FunctionSpace.lp(2)) == pytest.approx(
            math.sqrt(2.0)
        )
        assert normalized_trace(np.diag([1.0, 3.0])) == pytest.approx(2.0)

    def test_unitary_invariance(self, rng):
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        sp = FunctionSpace.lp(3)
        assert schatten_norm(q @ m @ q.conj().T, sp) == pytest.approx(schatten_norm(m, sp))

    def test_abs_operator(self, rng):
        m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        a = abs_operator(m)
        assert np.allclose(a, a.conj().T)
        assert np.allclose(a @ a, m.conj().T @ m, atol=1e-10)

    def test_square_function_of_one_operator_is_abs(self, rng):
        m = rng.standard_normal((3, 3))
        assert np.allclose(square_function([m]), abs_operator(m), atol=1e-10)
        with pytest.raises(InvalidInputError):
            square_function([])

    def test_psd_sqrt_rejects_negative_matrices(self):
        with pytest.raises(InvalidInputError, match="positive semidefinite"):
            psd_sqrt(np.diag([1.0, -1.0]))

    def test_non_square_is_rejected(self):
        with pytest.raises(InvalidInputError):
            schatten_norm(np.ones((2, 3)), FunctionSpace.lp(2))
