import itertools

import pytest
from hypothesis import given, strategies as st

import oracle
from monadica import frames as fr
from monadica.frames import Frame
from monadica.syntax import Logic

ID2 = [(0, 0), (1, 1)]
CHAIN2 = ID2 + [(0, 1)]
TOTAL2 = ID2 + [(0, 1), (1, 0)]


def as_pairs(frame):
    return {k: set(fr.to_pairs(v)) for k, v in frame.rels.items()}


# -- enumeration ---------------------------------------------------------------------

@pytest.mark.parametrize("cls", list(Logic))
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumeration_matches_brute_force(cls, n):
    ours = [as_pairs(f) for f in fr.enumerate_frames(n, cls)]
    expected = list(oracle.all_frames(n, cls))
    assert len(ours) == len(expected)
    key = lambda d: tuple(sorted((k, tuple(sorted(v))) for k, v in d.items()))  # noqa: E731
    assert sorted(map(key, ours)) == sorted(map(key, expected))
    assert len(set(map(key, ours))) == len(ours)


def test_known_relation_counts():
    # labelled quasi-orders, partial orders and equivalences on 1..4 points
    assert [len(fr.quasi_orders(n)) for n in (1, 2, 3, 4)] == [1, 4, 29, 355]
    assert [len(fr.partial_orders(n)) for n in (1, 2, 3, 4)] == [1, 3, 19, 219]
    assert [len(fr.equivalences(n)) for n in (1, 2, 3, 4)] == [1, 2, 5, 15]


def test_incremental_and_filtered_enumerators_agree():
    for n in (1, 2, 3):
        assert fr._quasi_orders_incremental(n) == fr._quasi_orders_filtered(n)


def test_enumeration_is_deterministic_and_valid():
    a = list(fr.enumerate_frames(3, Logic.TS4))
    b = list(fr.enumerate_frames(3, Logic.TS4))
    assert a == b
    assert all(fr.validate(f).ok for f in a)


def test_bound_enforced(monkeypatch):
    with pytest.raises(fr.BoundError):
        list(fr.enumerate_frames(5, Logic.S4T))
    monkeypatch.setenv("MONADICA_MAX_N", "5")
    assert fr.max_n() == 5
    with pytest.raises(fr.BoundError):
        list(fr.enumerate_frames(0, Logic.S4T))


# -- validation ----------------------------------------------------------------------

@pytest.mark.parametrize("cls", list(Logic))
def test_singleton_valid_everywhere(cls):
    rels = {k: [(0, 0)] for k in fr.REQUIRED[cls]}
    assert fr.validate(Frame.from_edges(1, cls, **rels)).ok


def test_validate_examples():
    ok = Frame.from_edges(2, Logic.MIPC, R=CHAIN2, Q=CHAIN2)
    assert fr.validate(ok).ok
    bad = Frame.from_edges(2, Logic.MIPC, R=ID2, Q=CHAIN2)
    report = fr.validate(bad)
    assert not report.ok
    assert [v.condition for v in report.violations] == ["O2"]
    assert report.violations[0].witness == (0, 1)


def test_validate_reports_order_failures():
    f = Frame.from_edges(2, Logic.MIPC, R=TOTAL2, Q=TOTAL2)
    assert "R antisymmetric" in {v.condition for v in fr.validate(f).violations}
    g = Frame.from_edges(2, Logic.MS4, R=[(0, 0)], E=ID2)
    assert "R reflexive" in {v.condition for v in fr.validate(g).violations}


def test_missing_relation_rejected():
    with pytest.raises(fr.FrameError):
        Frame.from_edges(2, Logic.MS4, R=ID2)


def _random_rels(draw, n, names):
    pairs = [(x, y) for x in range(n) for y in range(n)]
    return {k: [p for p in pairs if draw(st.booleans())] for k in names}


@pytest.mark.parametrize("cls", list(Logic))
@given(data=st.data())
def test_validate_agrees_with_naive_check(cls, data):
    n = data.draw(st.integers(1, 3))
    rels = _random_rels(data.draw, n, oracle.NEEDS[cls])
    f = Frame.from_edges(n, cls, **rels)
    assert fr.validate(f).ok == oracle.valid_frame(n, cls, {k: set(v) for k, v in rels.items()})


# -- derived relations -----------------------------------------------------------------

def test_e_q_and_q_e_examples():
    assert fr.e_q(Frame.from_edges(2, Logic.S4T, Q=ID2)) == fr.identity(2)
    assert fr.e_q(Frame.from_edges(2, Logic.S4T, Q=TOTAL2)) == fr.total(2)
    assert fr.e_q(Frame.from_edges(2, Logic.S4T, Q=CHAIN2)) == fr.identity(2)
    assert fr.q_e(Frame.from_edges(2, Logic.MS4, R=ID2, E=ID2)) == fr.identity(2)
    w = Frame.from_edges(2, Logic.MS4, R=TOTAL2, E=ID2)
    qe = fr.q_e(w)
    assert qe == fr.total(2)
    assert fr.intersect(qe, fr.converse(qe)) != w["E"]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_relation_invariants(n):
    for f in fr.enumerate_frames(n, Logic.MS4):
        qe = fr.q_e(f)
        assert fr.is_subrelation(f["E"], fr.intersect(qe, fr.converse(qe)))
    for f in fr.enumerate_frames(n, Logic.TS4):
        assert fr.is_subrelation(fr.e_q(f), f["Q"])
        assert fr.q_e(fr.ms4t_of_ts4(f)) == f["Q"]
        assert fr.dagger_frame(fr.ms4t_of_ts4(f)) == f


# -- skeletons -------------------------------------------------------------------------

def test_skeleton_examples():
    s = fr.skeleton_ms4(Frame.from_edges(2, Logic.MS4, R=TOTAL2, E=TOTAL2))
    assert s.frame.n == 1 and s.proj == (0, 0)
    s = fr.skeleton_ms4(Frame.from_edges(2, Logic.MS4, R=ID2, E=ID2))
    assert s.frame.n == 2 and s.proj == (0, 1)
    f = Frame.from_edges(2, Logic.MS4, R=CHAIN2, E=TOTAL2)
    s = fr.skeleton_ms4(f)
    assert s.proj == (0, 1) and s.frame["Q"] == fr.q_e(f)
    t = fr.skeleton_ts4(Frame.from_edges(2, Logic.TS4, R=TOTAL2, Q=TOTAL2))
    assert t.frame.n == 1
    one = Frame.from_edges(1, Logic.TS4, R=[(0, 0)], Q=[(0, 0)])
    assert fr.skeleton_ts4(one).frame.rels == one.rels


def test_dagger_frame_examples():
    f = Frame.from_edges(2, Logic.MS4T, R=CHAIN2, E=ID2)
    assert fr.dagger_frame(f)["Q"] == f["R"]
    g = Frame.from_edges(2, Logic.MS4T, R=ID2, E=TOTAL2)
    assert fr.dagger_frame(g)["Q"] == fr.total(2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_skeletons_are_mipc_frames(n):
    for f in fr.enumerate_frames(n, Logic.MS4):
        s = fr.skeleton_ms4(f)
        assert fr.validate(s.frame, Logic.MIPC).ok
        assert sorted(set(s.proj)) == list(range(s.frame.n))
        for x, y in itertools.product(range(n), repeat=2):
            mutual = f["R"][x] >> y & 1 and f["R"][y] >> x & 1
            assert bool(mutual) == (s.proj[x] == s.proj[y])
    for f in fr.enumerate_frames(n, Logic.TS4):
        assert fr.validate(fr.skeleton_ts4(f).frame, Logic.MIPC).ok


@pytest.mark.parametrize("n", [1, 2, 3])
def test_mipc_round_trips(n):
    for g in fr.enumerate_frames(n, Logic.MIPC):
        m = fr.ms4_of_mipc(g)
        assert fr.validate(m).ok
        assert fr.isomorphic(fr.skeleton_ms4(m).frame, g)
        assert fr.isomorphic(fr.skeleton_ts4(g.retag(Logic.TS4)).frame, g)


# -- isomorphism and files ---------------------------------------------------------------

def test_isomorphism_and_dedup():
    a = Frame.from_edges(2, Logic.S4T, Q=CHAIN2)
    b = Frame.from_edges(2, Logic.S4T, Q=ID2 + [(1, 0)])
    assert fr.find_isomorphism(a, b) == (1, 0)
    assert not fr.isomorphic(a, Frame.from_edges(2, Logic.S4T, Q=ID2))
    # unlabelled preorders on 3 points: 9
    assert len(fr.dedup(fr.enumerate_frames(3, Logic.S4T))) == 9


def test_frame_file_round_trip():
    text = """
    # a comment
    frame demo
    class MIPC
    worlds 2
    rel R 0 0
    rel R 1 1
    rel R 0 1
    rel Q 0 0
    rel Q 1 1
    rel Q 0 1
    val p 1
    """
    f, v = fr.parse_frame_file(text)
    assert f.cls is Logic.MIPC and f.name == "demo" and v == {"p": 0b10}
    g, w = fr.parse_frame_file(fr.format_frame(f, v))
    assert g == f and w == v


@pytest.mark.parametrize("text", [
    "class MS4\n", "worlds 2\n", "class XYZ\nworlds 1\n", "class S4T\nworlds 1\nrel Q 0 5\n",
    "class S4T\nworlds 1\nbogus\n", "class S4T\nworlds 1\nval p 3\n",
])
def test_frame_file_errors(text):
    with pytest.raises((fr.FrameError, ValueError)):
        fr.parse_frame_file(text)
