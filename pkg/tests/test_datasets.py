import random

import pytest

from identminer import resources
from identminer.datasets import (DatasetSplit, LabeledUser, analyze_record,
                                 balance_subsample, build_cb, build_hf,
                                 build_qb, match_reports, merge,
                                 merge_candidates, read_dataset_tsv,
                                 split_manifest, split_train_dev,
                                 write_dataset_tsv)
from identminer.filters import CLASS_ORDER, ClassLabel, FilterConfig
from identminer.scorer import ScoreParams
from identminer.textprep import build_selfreport_lexicon

from helpers import make_user, planted_users, tag_lexicon

W, B, HL, A = CLASS_ORDER

COLORS = resources.load_colors()
BLOCKLIST = resources.load_bigram_blocklist()


def lu(user_id, label, score, source="HF"):
    return LabeledUser(user_id, label, score, source)


def small_corpus():
    return [
        make_user("u1", description="i am a black woman"),
        make_user("u2", description="i am a proud black farmer"),
        make_user("u3", description="black coffee lover"),
        make_user("u4", description="black and white movies"),
        make_user("u5", description="just tweets here"),
    ]


def small_lexicon(corpus=None):
    return build_selfreport_lexicon(corpus or small_corpus(), tag_lexicon())


# ---------------------------------------------------------------------------
# match analysis

def test_analyze_record_single_class_only():
    lexicon = small_lexicon()
    params = ScoreParams()
    report = analyze_record(small_corpus()[0], tag_lexicon(), lexicon, params)
    assert report.label is B
    assert len(report.matches) == len(report.scores) == 1
    assert analyze_record(small_corpus()[3], tag_lexicon(), lexicon,
                          params) is None  # ambiguous
    assert analyze_record(small_corpus()[4], tag_lexicon(), lexicon,
                          params) is None  # no match


@pytest.mark.parametrize("workers", [1, 3])
def test_match_reports_keeps_corpus_order(workers):
    lexicon = small_lexicon()
    reports = match_reports(small_corpus(), tag_lexicon(), lexicon,
                            ScoreParams(), workers=workers)
    assert [r.user_id for r in reports] == ["u1", "u2", "u3"]


# ---------------------------------------------------------------------------
# QB

def test_build_qb_needs_person_keyword_and_ignores_threshold():
    corpus = [
        make_user("p1", description="black guy vibes"),           # scores 0.0
        make_user("p2", description="i am a black woman"),        # scores > 0
        make_user("p3", description="black coffee lover"),        # no person word
    ]
    lexicon = small_lexicon(corpus)
    users = build_qb(corpus, tag_lexicon(), lexicon,
                     ScoreParams(threshold=0.99))
    by_id = {u.user_id: u for u in users}
    assert set(by_id) == {"p1", "p2"}
    assert by_id["p1"].score == 0.0
    assert all(u.source == "QB" for u in users)


def test_build_qb_score_is_max_over_all_matches():
    # the second keyword has no person successor but scores higher
    corpus = [make_user("p1", description="black woman yay proud black farmer")]
    lexicon = small_lexicon(corpus + small_corpus())
    users = build_qb(corpus, tag_lexicon(), lexicon, ScoreParams())
    assert len(users) == 1
    report = analyze_record(corpus[0], tag_lexicon(), lexicon, ScoreParams())
    assert len(report.scores) == 2
    assert report.scores[1] > report.scores[0]
    assert users[0].score == max(report.scores)


# ---------------------------------------------------------------------------
# HF on the planted corpus

def test_build_hf_passes_exactly_the_planted_true_positives():
    records, true_ids, _ = planted_users()
    lexicon = build_selfreport_lexicon(records, tag_lexicon())
    users = build_hf(records, tag_lexicon(), lexicon, ScoreParams(),
                     FilterConfig(), COLORS, BLOCKLIST)
    assert {u.user_id for u in users} == true_ids
    assert all(u.source == "HF" and u.score >= 0.35 for u in users)
    labels = {u.user_id: u.label for u in users}
    assert labels["t000"] is W and labels["t025"] is B
    assert labels["t050"] is HL and labels["t075"] is A


def test_build_hf_threshold_applies_to_passing_matches_only():
    # the quoted (rejected) keyword sits next to the head noun and scores
    # high; the passing keyword is too far away and scores below threshold
    text = '"i am a hispanic farmer" yay yay yay yay hispanic friend'
    corpus = [make_user("h1", description=text),
              make_user("h2", description="i am a hispanic farmer")]
    lexicon = build_selfreport_lexicon(corpus, tag_lexicon())
    users = build_hf(corpus, tag_lexicon(), lexicon, ScoreParams(),
                     FilterConfig(), COLORS, BLOCKLIST)
    assert [u.user_id for u in users] == ["h2"]
    # with the quote filter off the rejected match counts and h1 re-enters
    users = build_hf(corpus, tag_lexicon(), lexicon, ScoreParams(),
                     FilterConfig(quote=False), COLORS, BLOCKLIST)
    assert {u.user_id for u in users} == {"h1", "h2"}


def test_build_hf_threshold_boundary_is_inclusive():
    records, true_ids, _ = planted_users()
    lexicon = build_selfreport_lexicon(records, tag_lexicon())
    # true profiles score exactly 1.0: a threshold equal to the score keeps them
    users = build_hf(records, tag_lexicon(), lexicon,
                     ScoreParams(threshold=1.0), FilterConfig(), COLORS,
                     BLOCKLIST)
    assert {u.user_id for u in users} == true_ids
    assert all(u.score == 1.0 for u in users)


# ---------------------------------------------------------------------------
# merging and CB

def test_merge_candidates_keeps_higher_score():
    qb = [lu("x", B, 0.2, "QB"), lu("only-qb", W, 0.1, "QB")]
    hf = [lu("x", B, 0.9, "HF"), lu("only-hf", A, 0.5, "HF")]
    merged = {u.user_id: u for u in merge_candidates(qb, hf)}
    assert merged["x"].score == 0.9 and merged["x"].source == "HF"
    assert set(merged) == {"x", "only-qb", "only-hf"}


def test_merge_candidates_tie_keeps_first():
    qb = [lu("x", B, 0.5, "QB")]
    hf = [lu("x", B, 0.5, "HF")]
    assert merge_candidates(qb, hf)[0].source == "QB"


def cb_fixture():
    users = []
    counts = {W: 5, B: 3, HL: 4, A: 6}
    rng = random.Random(3)
    for label, count in counts.items():
        for i in range(count):
            users.append(lu(f"{label.value}{i}", label, round(rng.random(), 3)))
    return users


def test_build_cb_balances_to_min_class():
    users = cb_fixture()
    cb = build_cb(users)
    assert len(cb) == 4 * 3
    for label in CLASS_ORDER:
        members = [u for u in cb if u.label is label]
        assert len(members) == 3
        pool = sorted((u for u in users if u.label is label),
                      key=lambda u: (-u.score, u.user_id))
        assert [u.user_id for u in members] == [u.user_id for u in pool[:3]]
    assert all(u.source == "CB" for u in cb)


def test_build_cb_output_grouped_in_class_order():
    cb = build_cb(cb_fixture())
    labels = [u.label for u in cb]
    boundaries = [labels[i * 3] for i in range(4)]
    assert boundaries == list(CLASS_ORDER)
    assert labels == sorted(labels, key=list(CLASS_ORDER).index)


def test_build_cb_tie_break_is_user_id():
    users = [lu("b", W, 0.5), lu("a", W, 0.5), lu("c", W, 0.9),
             lu("z1", B, 0.1), lu("z2", HL, 0.1), lu("z3", A, 0.1)]
    cb = build_cb(users, k=1)
    w_members = [u for u in cb if u.label is W]
    assert [u.user_id for u in w_members] == ["c"]
    cb = build_cb(users + [lu("z4", B, 0.1), lu("z5", HL, 0.1),
                           lu("z6", A, 0.1)], k=2)
    w_members = [u.user_id for u in cb if u.label is W]
    assert w_members == ["c", "a"]  # 0.5 tie broken by id


def test_build_cb_short_class_is_an_error():
    users = [lu("w1", W, 0.5), lu("b1", B, 0.5), lu("h1", HL, 0.5)]
    with pytest.raises(ValueError) as exc:
        build_cb(users)  # A has zero candidates
    assert "A" in str(exc.value)
    with pytest.raises(ValueError):
        build_cb(cb_fixture(), k=4)  # B has only 3


def test_build_cb_rejects_scoreless_candidates():
    users = cb_fixture() + [LabeledUser("s1", W, None, "survey")]
    with pytest.raises(ValueError):
        build_cb(users)


# ---------------------------------------------------------------------------
# splits and balancing

def test_split_train_dev_partitions():
    users = cb_fixture()
    split = split_train_dev(users, train_fraction=0.6, seed=5)
    assert len(split.train) + len(split.dev) == len(users)
    assert len(split.train) == 11  # ceil(0.6 * 18)
    ids = {u.user_id for u in split.train} | {u.user_id for u in split.dev}
    assert ids == {u.user_id for u in users}


def test_split_train_dev_deterministic_by_seed():
    users = cb_fixture()
    a = split_train_dev(users, seed=5)
    b = split_train_dev(users, seed=5)
    c = split_train_dev(users, seed=6)
    assert [u.user_id for u in a.train] == [u.user_id for u in b.train]
    assert [u.user_id for u in a.train] != [u.user_id for u in c.train]


def test_split_train_dev_stratified_keeps_per_class_fractions():
    users = cb_fixture()
    split = split_train_dev(users, train_fraction=0.5, seed=1, stratified=True)
    for label, count in [(W, 5), (B, 3), (HL, 4), (A, 6)]:
        in_train = sum(1 for u in split.train if u.label is label)
        expected = -(-count // 2)  # ceil
        assert in_train == expected


def test_balance_subsample_uses_present_classes():
    items = [lu(f"w{i}", W, 0.5) for i in range(6)] + \
            [lu(f"b{i}", B, 0.5) for i in range(2)]
    balanced = balance_subsample(items, seed=0)
    assert len(balanced) == 4
    assert sum(1 for u in balanced if u.label is W) == 2
    assert sum(1 for u in balanced if u.label is B) == 2
    assert balance_subsample([], seed=0) == []


def test_balance_subsample_custom_label_getter():
    pairs = [(("x", i), W if i % 3 else B) for i in range(9)]
    balanced = balance_subsample(pairs, seed=1, label_of=lambda p: p[1])
    assert sum(1 for _, label in balanced if label is B) == 3
    assert sum(1 for _, label in balanced if label is W) == 3


def test_merge_prefers_external_labels():
    auto = [lu("x", B, 0.9, "HF"), lu("y", W, 0.8, "QB")]
    external = [LabeledUser("x", W, None, "crowd")]
    merged = {u.user_id: u for u in merge(auto, external)}
    assert merged["x"].source == "crowd" and merged["x"].label is W
    assert merged["y"].source == "QB"
    # equal priority: first seen wins
    again = merge(external, [LabeledUser("x", B, None, "survey")])
    assert {u.source for u in again} == {"crowd"}


def test_labeled_user_validation():
    with pytest.raises(ValueError):
        LabeledUser("x", W, 0.5, "guess")
    with pytest.raises(ValueError):
        LabeledUser("x", W, None, "HF")
    LabeledUser("x", W, None, "crowd")  # external rows may omit the score


# ---------------------------------------------------------------------------
# TSV round trip

def test_dataset_tsv_round_trip_preserves_floats(tmp_path):
    users = [lu("u1", W, 0.1 + 0.2), lu("u2", B, 1e-17),
             LabeledUser("u3", A, None, "crowd")]
    path = tmp_path / "data.tsv"
    write_dataset_tsv(users, path)
    back = read_dataset_tsv(path)
    assert back == users
    assert back[0].score == 0.30000000000000004


def test_dataset_tsv_rejects_malformed(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("u1\tW\t0.5\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_dataset_tsv(path)
    path.write_text("u1\tQ\t0.5\tHF\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_dataset_tsv(path)


def test_split_manifest_lists_ids():
    split = DatasetSplit([lu("a", W, 1.0)], [lu("b", B, 0.5)], [], seed=3)
    manifest = split_manifest(split, train_fraction=0.6)
    assert manifest == {"seed": 3, "train_fraction": 0.6,
                        "train": ["a"], "dev": ["b"], "test": []}
