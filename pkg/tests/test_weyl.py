import json
import math

import pytest

from todalab.errors import CapExceededError
from todalab.rootdata import LieType, positive_roots
from todalab.weyl import WeylGroup, cache_clear, cache_entries

CLOSED_ORDERS = {
    "A1": 2, "A2": 6, "A3": 24, "A4": 120, "A5": 720, "A6": 5040,
    "B2": 8, "B3": 48, "B4": 384, "B5": 3840,
    "C2": 8, "C3": 48, "C4": 384, "C5": 3840,
    "D3": 24, "D4": 192, "D5": 1920, "D6": 23040,
    "G2": 12, "F4": 1152, "E6": 51840,
}


def closed_order(name):
    s, l = name[0], int(name[1:])
    if s == "A":
        return math.factorial(l + 1)
    if s in ("B", "C"):
        return 2 ** l * math.factorial(l)
    if s == "D":
        return 2 ** (l - 1) * math.factorial(l)
    return {"G2": 12, "F4": 1152, "E6": 51840}[name]


@pytest.mark.parametrize("name", sorted(CLOSED_ORDERS))
def test_orders_match_closed_forms(name, group):
    g = group(name)
    assert len(g) == CLOSED_ORDERS[name] == closed_order(name)


@pytest.mark.parametrize("name", ["A2", "A3", "B3", "C3", "G2", "D4"])
def test_length_counts_inverted_positive_roots(name, group):
    # l(w) must equal the number of positive roots sent negative
    g = group(name)
    npos = g.num_positive
    for eid in range(len(g)):
        p = g.perms[eid]
        inverted = sum(1 for i in range(npos) if p[i] >= npos)
        assert inverted == g.lengths[eid]


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "B3", "G2", "F4"])
def test_longest_element(name, group):
    g = group(name)
    w0 = g.longest_element()
    assert w0.length == len(positive_roots(g.lie_type))
    assert g.lengths.count(w0.length) == 1
    assert g.act_on_word(w0.word).perm == w0.perm


def test_longest_pinned(group):
    assert group("A1").longest_element().word == (0,)
    a2 = group("A2")
    w0 = a2.longest_element()
    assert w0.length == 3
    assert a2.all_reduced_words(w0) == {(0, 1, 0), (1, 0, 1)}
    assert group("A3").longest_element().length == 6


class TestReducedWords:
    def test_identity(self, group):
        assert group("A2").all_reduced_words(group("A2").identity()) == {()}

    def test_b2_longest(self, group):
        b2 = group("B2")
        assert b2.all_reduced_words(b2.longest_element()) == {(0, 1, 0, 1), (1, 0, 1, 0)}

    @pytest.mark.parametrize("name", ["A2", "A3", "B3", "G2"])
    def test_every_word_is_reduced_and_evaluates(self, name, group):
        g = group(name)
        for eid in range(len(g)):
            el = g.element(eid)
            words = g.all_reduced_words(eid)
            assert el.word in words
            for w in words:
                assert len(w) == el.length
                assert g.act_on_word(w).perm == el.perm

    def test_lazy_matches_eager(self, group):
        g = group("B3")
        eid = g.id_of(g.longest_element())
        assert set(g.iter_reduced_words(eid)) == g.all_reduced_words(eid)


class TestGroupLaws:
    def test_involutions(self, group):
        g = group("B3")
        for i in range(3):
            s = g.act_on_word((i,))
            assert g.multiply(s, s).length == 0

    def test_identity_neutral(self, group):
        g = group("A3")
        e = g.identity()
        for eid in range(len(g)):
            w = g.element(eid)
            assert g.multiply(e, w) == w
            assert g.multiply(w, e) == w

    def test_pinned_product(self, group):
        g = group("A2")
        s1s2 = g.act_on_word((0, 1))
        s1 = g.act_on_word((0,))
        assert g.multiply(s1s2, s1) == g.longest_element()

    def test_inverse(self, group):
        g = group("B3")
        for eid in range(0, len(g), 5):
            w = g.element(eid)
            assert g.multiply(w, g.inverse(w)).length == 0
            assert g.inverse(w).length == w.length

    def test_associativity_sampled(self, group):
        import random

        g = group("B3")
        rng = random.Random(11)
        for _ in range(50):
            x, y, z = (g.element(rng.randrange(len(g))) for _ in range(3))
            assert g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z))


def bruhat_leq_by_subwords(g, lo, hi):
    """Independent Bruhat-order oracle: some reduced word of hi contains a
    reduced word of lo as a subsequence."""
    lo_words = g.all_reduced_words(lo)
    hi_words = g.all_reduced_words(hi)

    def contains(big, small):
        it = iter(big)
        return all(ch in it for ch in small)

    return any(contains(b, s) for b in hi_words for s in lo_words)


class TestBruhatCovers:
    @pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
    def test_covers_match_subword_oracle(self, name, group):
        g = group(name)
        got = set(g.bruhat_covers())
        want = set()
        for lo in range(len(g)):
            for hi in range(len(g)):
                if g.lengths[hi] == g.lengths[lo] + 1 and bruhat_leq_by_subwords(g, lo, hi):
                    want.add((lo, hi))
        assert got == want

    def test_pinned_a2(self, group):
        g = group("A2")
        names = {(str(g.element(a)), str(g.element(b))) for a, b in g.bruhat_covers()}
        assert names == {("e", "1"), ("e", "2"), ("1", "12"), ("1", "21"),
                         ("2", "12"), ("2", "21"), ("12", "121"), ("21", "121")}

    def test_pinned_a1(self, group):
        g = group("A1")
        assert g.bruhat_covers() == [(0, 1)]

    def test_graded(self, group):
        g = group("B3")
        for lo, hi in g.bruhat_covers():
            assert g.lengths[hi] == g.lengths[lo] + 1


class TestCapsAndDeterminism:
    def test_e8_refused_by_default(self):
        with pytest.raises(CapExceededError):
            WeylGroup.generate(LieType.parse("E8"))

    def test_e7_needs_opt_in(self):
        with pytest.raises(CapExceededError):
            WeylGroup.generate(LieType.parse("E7"))

    def test_tiny_cap(self):
        with pytest.raises(CapExceededError):
            WeylGroup.generate(LieType.parse("A3"), cap=10)

    def test_regeneration_is_deterministic(self):
        a = WeylGroup.generate(LieType.parse("B3"))
        b = WeylGroup.generate(LieType.parse("B3"))
        assert a.perms == b.perms
        assert a.lengths == b.lengths
        assert a.parents == b.parents


class TestCache:
    def test_roundtrip(self, tmp_path):
        fresh = WeylGroup.generate(LieType.parse("B3"), cache_dir=tmp_path)
        assert len(cache_entries(tmp_path)) == 1
        loaded = WeylGroup.generate(LieType.parse("B3"), cache_dir=tmp_path)
        assert loaded.perms == fresh.perms
        assert loaded.lengths == fresh.lengths
        assert [loaded.word(i) for i in range(len(loaded))] == \
               [fresh.word(i) for i in range(len(fresh))]

    def test_corrupted_entry_regenerates(self, tmp_path, caplog):
        WeylGroup.generate(LieType.parse("A2"), cache_dir=tmp_path)
        path = next(tmp_path.glob("weyl_*.json"))
        path.write_text("{ this is not json")
        with caplog.at_level("WARNING"):
            g = WeylGroup.generate(LieType.parse("A2"), cache_dir=tmp_path)
        assert len(g) == 6
        assert any("corrupted" in rec.message for rec in caplog.records)
        # the cache entry is rebuilt and valid again
        assert json.loads(next(tmp_path.glob("weyl_*.json")).read_text())["type"] == "A2"

    def test_clear_idempotent(self, tmp_path):
        WeylGroup.generate(LieType.parse("A2"), cache_dir=tmp_path)
        assert cache_clear(tmp_path) == 1
        assert cache_clear(tmp_path) == 0
        assert cache_entries(tmp_path) == []

    def test_env_var_resolution(self, tmp_path, monkeypatch):
        monkeypatch.setenv("TODA_CACHE_DIR", str(tmp_path))
        WeylGroup.generate(LieType.parse("A1"))
        assert len(cache_entries()) == 1
