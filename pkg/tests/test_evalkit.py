import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chararc.evalkit import (
    NEGATIVE, NEUTRAL, POSITIVE, SHIFT_LABELS, DegenerateAgreementError, EvalError, RaterResponses,
    ShiftLabel, accuracy, default_dead_band, fleiss_kappa, format_confusion, label_shifts,
    read_key, read_responses, read_shift_labels, response_accuracy, shift_confusion,
    write_confusion_csv,
)
from helpers import SAMPLES
from oracles import fleiss_direct


def responses(answers):
    cats = sorted({a for row in answers for a in row}, key=str)
    return RaterResponses(list(range(len(answers))), list(range(len(answers[0]))), answers, cats)


def test_accuracy_cases():
    assert accuracy("abc", "abc") == 1.0
    assert accuracy("abc", "xyz") == 0.0
    assert accuracy([1] * 143 + [0] * 57, [1] * 200) == 0.715


def test_accuracy_errors():
    with pytest.raises(EvalError):
        accuracy([1, 2], [1])
    with pytest.raises(EvalError):
        accuracy([], [])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=40),
       st.randoms(use_true_random=False))
def test_accuracy_permutation_equivariant(pairs, rnd):
    shuffled = pairs[:]
    rnd.shuffle(shuffled)
    assert accuracy(*zip(*pairs)) == accuracy(*zip(*shuffled))


def test_kappa_unanimous_opposite_categories():
    assert fleiss_kappa(responses([["a", "a", "a"], ["b", "b", "b"]])) == 1.0


def test_kappa_two_item_counter_example():
    # per-item agreement 1/3 each, chance agreement 1/2
    assert abs(fleiss_kappa(np.array([[2, 1], [1, 2]])) - (-1 / 3)) < 1e-12


def test_kappa_degenerate():
    with pytest.raises(DegenerateAgreementError):
        fleiss_kappa(np.array([[3, 0]]))
    with pytest.raises(DegenerateAgreementError):
        fleiss_kappa(responses([["a", "a"], ["a", "a"]]))


def test_kappa_ragged_and_too_few_raters():
    with pytest.raises(EvalError):
        RaterResponses([0, 1], [0, 1], [["a", "b"], ["a"]], ["a", "b"])
    with pytest.raises(EvalError):
        fleiss_kappa(np.array([[2, 1], [1, 1]]))
    with pytest.raises(EvalError):
        fleiss_kappa(np.array([[1, 0], [0, 1]]))


def test_kappa_matches_loop_oracle_on_random_tables():
    rng = random.Random(7)
    for _ in range(200):
        k = rng.randint(2, 5)
        n = rng.randint(2, 6)
        answers = [[rng.randrange(k) for _ in range(n)] for _ in range(rng.randint(1, 12))]
        if len({a for row in answers for a in row}) < 2:
            continue
        assert fleiss_kappa(responses(answers)) == pytest.approx(fleiss_direct(answers), abs=1e-12)


def test_kappa_classic_worked_example():
    # classic worked example: 10 items, 14 raters, 5 categories, kappa 0.210
    table = np.array([
        [0, 0, 0, 0, 14], [0, 2, 6, 4, 2], [0, 0, 3, 5, 6], [0, 3, 9, 2, 0], [2, 2, 8, 1, 1],
        [7, 7, 0, 0, 0], [3, 2, 6, 3, 0], [2, 5, 3, 2, 2], [6, 5, 2, 1, 0], [0, 2, 2, 3, 7]])
    assert fleiss_kappa(table) == pytest.approx(0.20993, abs=1e-5)


def test_kappa_relabel_invariance_on_random_matrices():
    rng = random.Random(50)
    for _ in range(50):
        cats = ["yes", "no", "maybe", "unsure"][: rng.randint(2, 4)]
        answers = [[rng.choice(cats) for _ in range(4)] for _ in range(rng.randint(2, 10))]
        if len({a for row in answers for a in row}) < 2:
            answers[0][0], answers[0][1] = cats[0], cats[1]
        perm = cats[:]
        rng.shuffle(perm)
        relabel = dict(zip(cats, perm))
        renamed = [[relabel[a] for a in row] for row in answers]
        assert fleiss_kappa(responses(renamed)) == pytest.approx(fleiss_kappa(responses(answers)), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8), st.integers(2, 6), st.data())
def test_kappa_one_iff_full_agreement(n_items, n_raters, data):
    answers = [[data.draw(st.sampled_from("abc"))] * n_raters for _ in range(n_items)]
    if len({row[0] for row in answers}) < 2:
        return
    assert fleiss_kappa(responses(answers)) == 1.0
    i = data.draw(st.integers(0, n_items - 1))
    answers[i] = answers[i][:-1] + [next(c for c in "abc" if c != answers[i][0])]
    assert fleiss_kappa(responses(answers)) < 1.0


def test_binary_recoding():
    r = responses([["a", "b"], ["b", "b"]])
    b = r.binary({0: "a", 1: "b"})
    assert b.answers == [[1, 0], [1, 1]] and b.categories == [0, 1]
    with pytest.raises(EvalError):
        r.binary({0: "a"})


def test_survey_sample_files():
    r = read_responses(SAMPLES / "survey_responses.csv")
    key = read_key(SAMPLES / "survey_key.csv")
    assert (len(r.items), len(r.raters)) == (6, 4)
    assert round(fleiss_kappa(r), 3) == 0.467
    assert round(fleiss_kappa(r.binary(key)), 3) == -0.263
    assert round(response_accuracy(r, key), 3) == 0.792
    assert fleiss_kappa(r) == pytest.approx(fleiss_direct(r.answers), abs=1e-12)


def test_read_responses_errors(tmp_path):
    p = tmp_path / "r.csv"
    p.write_text("item_id,rater_id,answer\n1,a,x\n1,b,y\n2,a,x\n", encoding="utf-8")
    with pytest.raises(EvalError, match="ragged"):
        read_responses(p)
    p.write_text("item_id,rater_id,answer\n1,a,x\n1,a,y\n", encoding="utf-8")
    with pytest.raises(EvalError, match="duplicate"):
        read_responses(p)
    p.write_text("item,who\n", encoding="utf-8")
    with pytest.raises(EvalError, match="columns"):
        read_responses(p)


def test_label_shifts_cases():
    assert [s.label for s in label_shifts([1, 2, 3, 4], 0.5)] == [POSITIVE] * 3
    assert [s.label for s in label_shifts([2, 2, 2], 0.0)] == [NEUTRAL] * 2
    out = label_shifts([0, 1, 1.01, 0], 0.05, event_ids=[7, 8, 9, 10])
    assert [(s.event_id, s.label) for s in out] == [(8, POSITIVE), (9, NEUTRAL), (10, NEGATIVE)]
    with pytest.raises(EvalError):
        label_shifts([1], 0.1)


def test_default_dead_band():
    assert default_dead_band([0, 5, 10]) == pytest.approx(0.2)
    assert default_dead_band([0, 5, 10], 0.1) == pytest.approx(1.0)


def labels(seq, start=0):
    code = {"+": POSITIVE, "0": NEUTRAL, "-": NEGATIVE}
    return [ShiftLabel(start + k, code[c]) for k, c in enumerate(seq)]


def test_confusion_identity():
    table = shift_confusion(labels("+0-+0-"), labels("+0-+0-"))
    for s in SHIFT_LABELS:
        assert [table[s][g] for g in SHIFT_LABELS] == [float(s == g) for g in SHIFT_LABELS]


def test_confusion_ten_event_toy():
    system = labels("+++0--++-0")
    gold = labels("+0-0-+++00")
    table = shift_confusion(system, gold)
    # system positive at 0,1,2,6,7: gold +,0,-,+,+  -> 3/5, 1/5, 1/5
    assert [table[POSITIVE][g] for g in SHIFT_LABELS] == pytest.approx([0.6, 0.2, 0.2], abs=1e-12)
    # system neutral at 3,9: gold 0,0
    assert [table[NEUTRAL][g] for g in SHIFT_LABELS] == [0.0, 1.0, 0.0]
    # system negative at 4,5,8: gold -,+,0
    assert [table[NEGATIVE][g] for g in SHIFT_LABELS] == pytest.approx([1 / 3] * 3, abs=1e-12)


def _reported_rows():
    """Alignments whose system-positive and system-negative rows have the
    shapes of the published tables (99 and 100 system shifts)."""
    system, gold = [], []
    eid = 0
    for sys_label, counts in ((POSITIVE, (36, 30, 33)), (NEGATIVE, (12, 15, 73))):
        for g, k in zip(SHIFT_LABELS, counts):
            for _ in range(k):
                system.append(ShiftLabel(eid, sys_label))
                gold.append(ShiftLabel(eid, g))
                eid += 1
    return system, gold


def test_confusion_reproduces_reported_row_format():
    table = shift_confusion(*_reported_rows())
    assert [round(table[POSITIVE][g], 2) for g in SHIFT_LABELS] == [0.36, 0.30, 0.33]
    assert [round(table[NEGATIVE][g], 2) for g in SHIFT_LABELS] == [0.12, 0.15, 0.73]
    assert [table[NEUTRAL][g] for g in SHIFT_LABELS] == [0.0, 0.0, 0.0]
    text = format_confusion(table)
    assert text.splitlines()[1].split() == ["positive", "0.36", "0.30", "0.33"]
    assert text.splitlines()[3].split() == ["negative", "0.12", "0.15", "0.73"]


def test_confusion_misaligned():
    with pytest.raises(EvalError, match="aligned"):
        shift_confusion(labels("+0"), labels("+0", start=1))
    with pytest.raises(EvalError, match="duplicate"):
        shift_confusion(labels("+") * 2, labels("+") * 2)


def test_confusion_csv_roundtrip(tmp_path):
    path = tmp_path / "c.csv"
    write_confusion_csv(shift_confusion(labels("+0-"), labels("+0-")), path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "system_label,positive,neutral,negative"
    assert lines[1] == "positive,1.000000,0.000000,0.000000"


def test_read_shift_labels():
    gold = read_shift_labels(SAMPLES / "greywater.wren_shifts.csv")
    assert gold and all(g.label in SHIFT_LABELS for g in gold)
    with pytest.raises(EvalError):
        ShiftLabel(1, "up")


shift_seqs = st.lists(st.tuples(st.sampled_from(SHIFT_LABELS), st.sampled_from(SHIFT_LABELS)),
                      min_size=1, max_size=60)


@settings(max_examples=200, deadline=None)
@given(shift_seqs)
def test_confusion_rows_sum_to_one(pairs):
    system = [ShiftLabel(k, s) for k, (s, _) in enumerate(pairs)]
    gold = [ShiftLabel(k, g) for k, (_, g) in enumerate(pairs)]
    table = shift_confusion(system, gold)
    for s in SHIFT_LABELS:
        total = sum(table[s].values())
        if any(x == s for x, _ in pairs):
            assert abs(total - 1) <= 1e-12
        else:
            assert total == 0
