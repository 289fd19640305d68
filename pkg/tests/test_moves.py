import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import brute_bracket, fox_colourings_word
from strategies import link_words
from triplane.moves import (
    DELTA_CROSSINGS,
    Move,
    MoveError,
    apply_local_move,
    legal_moves,
    neutral_moves,
    reducing_moves,
)
from triplane.search import commute_then_reduce
from triplane.words import (
    component_count,
    crossing_count,
    linking_matrix,
    parse_slices,
    widths,
    writhe,
)


def _self_writhe(w):
    lk = linking_matrix(w)
    return writhe(w) - sum(sum(row) for row in lk)


def unoriented_invariant(w):
    """Bracket times (-A^3)^(-self writhe); unchanged by every Reidemeister move."""
    br = brute_bracket(w)
    k = -3 * _self_writhe(w)
    sign = -1 if _self_writhe(w) % 2 else 1
    return (component_count(w), {e + k: sign * c for e, c in br.items()})


def test_move_str():
    assert str(Move("r2+", 3, (1, -1))) == "r2+ @ 3 1 -1"
    assert str(Move("snake", 2)) == "snake @ 2"


@pytest.mark.parametrize(
    "before,move,after",
    [
        ("cap1 x1+ cup1", Move("r1", 2), "cap1 cup1"),
        ("cap1 cap1 x2+ cup1 cup1", Move("kink", 2), "cap1 cup1"),
        ("cap1 cap3 x2+ x2- cup3 cup1", Move("r2", 3), "cap1 cap3 cup3 cup1"),
        ("cap1 cap2 cup1 cup1", Move("snake", 2), "cap1 cup1"),
        ("cap1 cap3 cup1 cup1", Move("commute", 2), "cap1 cup1 cap1 cup1"),
        ("cap1 cap2 x3+ x2+ cup1 cup1", Move("slide", 2), "cap1 cap3 cup1 cup1"),
        ("cap1 cap2 x1- cup2 cup1", Move("twist", 1), "cap1 cap2 x3- cup2 cup1"),
        ("cap1 cap2 cup2 x1+ cup1", Move("lift", 2), "cap1 x1+ cup1 cap1 cup1"),
    ],
)
def test_named_moves(before, move, after):
    assert apply_local_move(parse_slices(before), move) == parse_slices(after)


def test_mismatch_and_unknown():
    w = parse_slices("cap1 cup1")
    with pytest.raises(MoveError):
        apply_local_move(w, Move("r2", 1))
    with pytest.raises(MoveError):
        apply_local_move(w, Move("teleport", 1))


def test_lift_frees_a_blocked_kink():
    # the small circle sits between the strands the final cup joins
    w = parse_slices("cap1 cap2 x1+ x2- cap3 cup3 cup2 cup1")
    assert not list(reducing_moves(w))
    assert Move("lift", 5) in list(neutral_moves(w))
    assert Move("r1", 4) in list(reducing_moves(apply_local_move(w, Move("lift", 5))))
    assert Move("lift", 2) not in list(neutral_moves(parse_slices("cap1 cap1 cup1 mark1p cup1")))


def test_r3_rejects_cyclic_triple():
    w = parse_slices("cap1 cap1 cap1 x1+ x2- x1+ cup1 cup1 cup1")
    assert Move("r3", 4) not in list(neutral_moves(w))
    w = parse_slices("cap1 cap1 cap1 x1+ x2+ x1+ cup1 cup1 cup1")
    assert Move("r3", 4) in list(neutral_moves(w))


def test_commute_then_reduce_finds_hidden_snake():
    w = parse_slices("cap1 cap2 x1+ cap2 cap5 cap6 cup8")
    steps = list(commute_then_reduce(w))
    assert steps
    for (m, r), v in steps:
        assert m.name == "commute"
        assert apply_local_move(apply_local_move(w, m), r) == v
        assert len(v) < len(w)


def _all_moves(w, rnd):
    moves = list(legal_moves(w))
    n = len(w)
    ws = widths(w)
    for i in range(n + 1):
        if ws[i] >= 2:
            j = rnd.draw(st.integers(1, ws[i] - 1))
            moves.append(Move("r2+", i + 1, (j, rnd.draw(st.sampled_from((1, -1))))))
            moves.append(Move("snake+", i + 1, (j, rnd.draw(st.sampled_from("LR")))))
    for i, s in enumerate(w):
        if s.kind in ("cap", "cup"):
            moves.append(Move("r1+", i + 1, (rnd.draw(st.sampled_from((1, -1))),)))
            moves.append(Move("slide+", i + 1, (rnd.draw(st.sampled_from("LR")), 1)))
    return moves


@settings(max_examples=150, deadline=None)
@given(link_words(max_len=10, max_width=6), st.data())
def test_every_move_preserves_the_link(w, data):
    assume(crossing_count(w) <= 7)
    moves = _all_moves(w, data)
    assume(moves)
    m = data.draw(st.sampled_from(moves))
    try:
        v = apply_local_move(w, m)
    except MoveError:
        return
    assert widths(v)[-1] == 0
    assert crossing_count(v) - crossing_count(w) == DELTA_CROSSINGS[m.name]
    assert unoriented_invariant(v) == unoriented_invariant(w)
    assert fox_colourings_word(v, 3) == fox_colourings_word(w, 3)


@settings(max_examples=100, deadline=None)
@given(link_words(max_len=12, max_width=6))
def test_reducing_moves_never_add_crossings(w):
    for m in reducing_moves(w):
        v = apply_local_move(w, m)
        assert crossing_count(v) <= crossing_count(w)
        assert len(v) < len(w)
