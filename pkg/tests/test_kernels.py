import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from commonpairs import _backend, _pycore
from commonpairs.errors import KernelError, ParseError
from commonpairs.graphs import (
    Graph,
    complete,
    cycle,
    disjoint_union,
    empty,
    enumerate_classes,
    parse_graph,
    remove_vertex,
    strip_isolated,
    t_inj,
)
from commonpairs.kernels import (
    StepKernel,
    affine_shift,
    align,
    complement_graphon,
    constant,
    d_density,
    density,
    format_rational,
    half_identity,
    is_d_regular,
    kernel_B,
    kernel_from_json,
    kernel_K,
    lift,
    parse_rational,
    scale,
    scale_down,
    t_ind,
    tensor,
    tensor_power_density,
    zero_kernel,
)
from tests import oracles
from tests.strategies import graphons, graphs, kernels, random_graphon

B, K, W1 = kernel_B(), kernel_K(), half_identity()
h = Fraction(1, 2)


class TestRationals:
    def test_parse(self):
        assert parse_rational("3/6") == Fraction(1, 2)
        assert parse_rational(" -2 ") == -2
        assert format_rational(Fraction(6, 4)) == "3/2"

    @pytest.mark.parametrize("bad", ["1/0", "x", 0.5, None, True])
    def test_parse_errors(self, bad):
        with pytest.raises(ParseError):
            parse_rational(bad)


class TestStepKernel:
    def test_validation(self):
        with pytest.raises(KernelError):
            StepKernel((h, h), ((0, 1), (0, 0)))
        with pytest.raises(KernelError):
            StepKernel((h, Fraction(1, 3)), ((0, 0), (0, 0)))
        with pytest.raises(KernelError):
            StepKernel((1,), ((2,),), (0, 1))

    def test_json_roundtrip(self):
        obj = B.to_json()
        assert obj == {"masses": ["1/2", "1/2"], "values": [["-1", "1"], ["1", "-1"]], "bounds": ["-1", "1"]}
        assert kernel_from_json(obj) == B

    def test_json_errors(self):
        with pytest.raises(ParseError):
            kernel_from_json({"masses": ["1"]})
        with pytest.raises(ParseError) as info:
            kernel_from_json({"masses": ["1/0"], "values": [["0"]]})
        assert info.value.location == "masses[0]"


class TestDensityAnchors:
    def test_constant(self):
        assert density(complete(3), constant(h)) == Fraction(1, 8)

    def test_half_identity(self):
        assert density(cycle(4), W1) == Fraction(1, 8)
        assert density(cycle(5), complement_graphon(W1)) == 0

    @pytest.mark.parametrize("length", range(3, 10))
    def test_cycles_in_B(self, length, backend):
        assert density(cycle(length), B) == (-1) ** length

    def test_K(self, backend):
        assert density(complete(4), K) == Fraction(-1, 2)
        assert density(complete(2), K) == Fraction(-1, 2)
        assert density(parse_graph("K2+K2"), K) == Fraction(1, 4)
        assert density(complete(2), B) == 0

    def test_empty_graph(self):
        assert density(Graph(0, 0), B) == 1
        assert density(empty(4), B) == 1

    def test_cost_cap(self):
        big = StepKernel([Fraction(1, 64)] * 64, [[0] * 64 for _ in range(64)])
        with pytest.raises(KernelError):
            density(complete(6), big)

    @settings(max_examples=50, deadline=None)
    @given(graphs(max_n=5), kernels(max_m=3))
    def test_matches_brute_force(self, g, u):
        assert density(g, u) == oracles.density(g.n, g.edges, u.masses, u.values)

    @settings(max_examples=50, deadline=None)
    @given(kernels(max_m=4), st.integers(3, 9))
    def test_cycle_trace_identity(self, u, length):
        assert density(cycle(length), u) == oracles.cycle_trace(u.masses, u.values, length)

    def test_backends_agree_on_large_values(self, backend):
        # large numerators force the exact fallback past the 64-bit bound
        u = StepKernel((Fraction(1, 3), Fraction(2, 3)),
                       ((Fraction(10**9, 10**9 + 7), 1), (1, Fraction(3, 10**9 + 9))))
        g = complete(5)
        assert density(g, u) == oracles.density(5, g.edges, u.masses, u.values)

    def test_block_sum_int64_path(self):
        mats = [[[3, -1], [-1, 2]]]
        pairs = [(0, 1, 0), (1, 2, 0), (0, 2, 0)]
        assert _backend.block_sum(3, pairs, mats, [1, 2]) == _pycore.block_sum(3, pairs, mats, [1, 2])


class TestIdentities:
    @settings(max_examples=50, deadline=None)
    @given(graphs(max_n=4), graphs(max_n=4), kernels(max_m=2))
    def test_multiplicativity(self, f, g, u):
        assert density(disjoint_union(f, g), u) == density(f, u) * density(g, u)

    @settings(max_examples=50, deadline=None)
    @given(graphs(max_n=6), kernels(max_m=3))
    def test_isolated_vertices(self, g, u):
        assert density(g, u) == density(strip_isolated(g), u)

    @settings(max_examples=50, deadline=None)
    @given(graphs(max_n=5), kernels(max_m=2), st.integers(1, 8))
    def test_scale_down(self, g, u, k):
        delta = Fraction(1, k)
        assert density(g, scale_down(u, delta)) == delta ** strip_isolated(g).n * density(g, u)

    @settings(max_examples=50, deadline=None)
    @given(graphs(max_n=4), kernels(max_m=2), kernels(max_m=2))
    def test_tensor(self, g, u1, u2):
        assert density(g, tensor(u1, u2)) == density(g, u1) * density(g, u2)

    @settings(max_examples=50, deadline=None)
    @given(graphs(max_n=5, min_edges=1), st.sampled_from([B, K, W1, constant(Fraction(1, 3))]))
    def test_pendant_deletion(self, g, u):
        d = is_d_regular(u)
        degrees = [g.degree(x) for x in range(1, g.n + 1)]
        assume(1 in degrees)
        w = degrees.index(1) + 1
        assert density(g, u) == d * density(remove_vertex(g, w), u)

    @settings(max_examples=50, deadline=None)
    @given(graphs(max_n=5), graphons(max_m=2, den=4))
    def test_tinj_decomposition(self, g, w):
        rhs = sum(t_inj(g, j) * d_density(j, w) for j in enumerate_classes(5).graphs())
        assert density(g, w) == rhs

    def test_sum_to_one(self):
        rng = random.Random(11)
        for _ in range(50):
            w = random_graphon(rng)
            assert sum(d_density(j, w) for j in enumerate_classes(5).graphs()) == 1


class TestConstructions:
    def test_B_and_K(self):
        assert B.values == ((-1, 1), (1, -1)) and B.bounds == (-1, 1)
        assert K.m == 4 and all(K.values[i][i] == 1 for i in range(4))

    def test_complement(self):
        assert complement_graphon(constant(Fraction(1, 3))).values == ((Fraction(2, 3),),)
        assert complement_graphon(complement_graphon(W1)) == W1
        with pytest.raises(KernelError):
            complement_graphon(B)

    def test_affine_shift(self):
        assert affine_shift(zero_kernel(), h).values == ((h,),)
        # B is -1 on the diagonal blocks, so p + pB is the bipartite complement of W1
        assert affine_shift(scale(B, h), h) == complement_graphon(W1)
        assert affine_shift(scale(B, -h), h).values == W1.values
        assert affine_shift(B, 0) == B

    def test_scale_down(self):
        assert density(complete(3), scale_down(B, h)) == Fraction(-1, 8)
        assert scale_down(B, 1) is B
        assert scale_down(B, Fraction(1, 4)).m == 3
        for bad in (0, Fraction(3, 2)):
            with pytest.raises(KernelError):
                scale_down(B, bad)

    def test_tensor(self):
        assert density(cycle(4), tensor(B, B)) == 1
        assert tensor(constant(2), constant(3)).values == ((6,),)
        big = StepKernel([Fraction(1, 65)] * 65, [[0] * 65 for _ in range(65)])
        with pytest.raises(KernelError):
            tensor(big, big)

    def test_tensor_power_density(self):
        assert tensor_power_density(complete(4), K, 3) == Fraction(-1, 8)
        assert tensor_power_density(cycle(5), B, 0) == 1
        assert tensor_power_density(complete(3), B, 2) == 1

    def test_regular(self):
        assert is_d_regular(B) == 0
        assert is_d_regular(constant(Fraction(2, 7))) == Fraction(2, 7)
        assert is_d_regular(W1) == h
        assert is_d_regular(StepKernel((h, h), ((1, 0), (0, 0)))) is None

    def test_lift_and_align(self):
        a, b = W1, StepKernel((Fraction(1, 3), Fraction(2, 3)), ((0, 1), (1, 0)))
        la, lb = align([a, b])
        assert la.masses == lb.masses and la.m == 4
        g = cycle(4)
        assert density(g, la) == density(g, a) and density(g, lb) == density(g, b)
        with pytest.raises(KernelError):
            lift(a, 1, [a.masses, b.masses])


class TestInduced:
    def test_anchors(self):
        assert t_ind(complete(2), constant(h)) == h
        assert t_ind(empty(5), constant(0)) == 1
        assert d_density(complete(5), constant(h)) == Fraction(1, 1024)
        assert d_density(empty(5), constant(1)) == 0
        with pytest.raises(KernelError):
            t_ind(complete(2), B)
