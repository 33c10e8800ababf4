import csv

from hypothesis import given, settings
from hypothesis import strategies as st

from chararc import resources
from chararc.characters import Mention, alias_index, characters_report, cluster_names
from chararc.corpus import load
from helpers import DATA, SAMPLES, characters_of

HONORIFICS = resources.honorifics()
NAMES = resources.name_genders()


def names_of(mentions):
    return sorted(m.text for m in mentions)


def synthetic(names):
    """One proper-name mention per entry, in the given order."""
    return [Mention((i, i + 1), "proper_name", i, n) for i, n in enumerate(names)]


def clusters_of(names):
    return cluster_names(synthetic(names), HONORIFICS, NAMES)


def test_harry_kicked_ron_mentions():
    _, mentions, _ = characters_of("Harry kicked Ron.")
    assert names_of(mentions) == ["Harry", "Ron"]
    assert {m.kind for m in mentions} == {"proper_name"}


def test_single_pronoun():
    _, mentions, _ = characters_of("He wept.")
    assert [(m.kind, m.text) for m in mentions] == [("pronoun", "He")]


def test_sentence_initial_article_is_not_a_name():
    _, mentions, _ = characters_of("The ring glowed.")
    assert mentions == []


def test_sentence_initial_name_seen_mid_sentence():
    _, mentions, _ = characters_of("Frodo ran. They followed Frodo.")
    assert names_of(mentions) == ["Frodo", "Frodo"]


def test_known_first_name_at_sentence_start():
    _, mentions, _ = characters_of("Harry ran home.")
    assert names_of(mentions) == ["Harry"]


def test_calendar_words_are_not_names():
    _, mentions, _ = characters_of("On Sunday in April the bells rang for Wren.")
    assert names_of(mentions) == ["Wren"]


def test_honorific_run_is_one_mention():
    _, mentions, _ = characters_of("They met Dr. Amos Hale at noon.")
    assert names_of(mentions) == ["Dr. Amos Hale"]


def test_possessive_stripped():
    _, mentions, _ = characters_of("She took Silas's lamp.")
    assert "Silas" in names_of(mentions)


def test_tom_sawyer_triple():
    clusters = clusters_of(["Tom", "Tom Sawyer", "Mr. Sawyer"])
    assert len(clusters) == 1
    assert clusters[0].canonical_name == "Tom Sawyer"
    assert clusters[0].aliases == ["Mr. Sawyer", "Tom", "Tom Sawyer"]
    assert clusters[0].mention_count == 3


def test_singleton():
    clusters = clusters_of(["Harry"])
    assert [(c.canonical_name, c.mention_count) for c in clusters] == [("Harry", 1)]


def test_ambiguous_short_name_joins_more_mentioned():
    clusters = clusters_of(["Tom Sawyer", "Tom Canty", "Tom Canty", "Tom"])
    by_name = {c.canonical_name: set(c.aliases) for c in clusters}
    assert by_name == {"Tom Sawyer": {"Tom Sawyer"}, "Tom Canty": {"Tom Canty", "Tom"}}


def test_ambiguous_tie_goes_to_earlier_first_mention():
    clusters = clusters_of(["Tom Canty", "Tom Sawyer", "Tom"])
    by_name = {c.canonical_name: set(c.aliases) for c in clusters}
    assert by_name["Tom Canty"] == {"Tom Canty", "Tom"}


def test_honorific_gender_conflict_blocks_merge():
    clusters = clusters_of(["Mr. Marlow", "Mrs. Marlow", "Tobias Marlow"])
    by_name = {c.canonical_name: set(c.aliases) for c in clusters}
    assert by_name == {"Tobias Marlow": {"Tobias Marlow", "Mr. Marlow"},
                       "Mrs. Marlow": {"Mrs. Marlow"}}


def test_different_first_names_stay_apart():
    clusters = clusters_of(["Tobias Marlow", "Edith Marlow"])
    assert len(clusters) == 2


def test_canonical_is_longest_alias():
    for c in clusters_of(["Amos", "Dr. Hale", "Amos Hale", "Dr. Amos Hale", "Hale"]):
        assert c.canonical_name == max(c.aliases, key=lambda a: len(a.split()))


def test_pronoun_resolves_to_single_candidate():
    _, mentions, clusters = characters_of("Harry ran. He fell.")
    he = [m for m in mentions if m.text == "He"][0]
    assert he.cluster_id == clusters[0].cluster_id


def test_it_is_not_a_pronoun_mention():
    _, mentions, _ = characters_of("It rained.")
    assert mentions == []


def test_pronoun_gender_preference():
    _, mentions, clusters = characters_of("Edith met Tobias. She smiled.")
    names = {c.cluster_id: c.canonical_name for c in clusters}
    she = [m for m in mentions if m.text == "She"][0]
    assert names[she.cluster_id] == "Edith"


def test_pronoun_window():
    text = "Harry ran. The road bent. The wind rose. The rain fell. He stopped."
    _, mentions, _ = characters_of(text, window=2)
    assert [m for m in mentions if m.text == "He"][0].cluster_id is None
    _, mentions, _ = characters_of(text, window=4)
    assert [m for m in mentions if m.text == "He"][0].cluster_id is not None


def test_object_pronoun_skips_own_clause():
    _, mentions, clusters = characters_of("Tobias came in. Silas threatened him quietly.")
    names = {c.cluster_id: c.canonical_name for c in clusters}
    him = [m for m in mentions if m.text == "him"][0]
    assert names[him.cluster_id] == "Tobias"


def test_characters_report_shape():
    doc, mentions, clusters = characters_of("Harry ran. He fell. Harry rose.")
    report = characters_report(clusters, mentions, 5)
    c = report["clusters"][0]
    assert c["canonical_name"] == "Harry"
    assert c["mention_count"] == 2 and c["pronoun_count"] == 1
    assert c["first_offset"] == 0 and c["last_offset"] == len(doc.clean_text) - len(" rose.")
    assert report["unresolved_pronouns"] == 0


def _gold(path):
    with open(path, encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh, delimiter="\t") if r and not r[0].startswith("#")]
    return rows


def test_sample_pronoun_resolution_against_hand_gold():
    doc = load(SAMPLES / "greywater.txt")
    _, mentions, clusters = characters_of(doc.clean_text)
    names = {c.cluster_id: c.canonical_name for c in clusters}
    by_token = {m.start: names.get(m.cluster_id) for m in mentions if m.kind == "pronoun"}
    gold = _gold(DATA / "greywater_pronouns.tsv")
    wrong = [(int(t), s) for t, s, who in gold if by_token.get(int(t)) != who]
    assert len(gold) == 22
    # one known miss: Edith's "she" right after Wren is the subject
    assert wrong == [(213, "she")]


def test_sample_clusters():
    doc = load(SAMPLES / "greywater.txt")
    _, mentions, clusters = characters_of(doc.clean_text)
    eligible = sorted(c.canonical_name for c in clusters if c.mention_count >= 5)
    assert eligible == ["Dr. Amos Hale", "Edith Marlow", "Silas Crane", "Tobias Marlow", "Wren Ashford"]
    index = alias_index(clusters)
    assert index["Mrs. Marlow"] == index["Edith Marlow"]
    assert index["Tobias"] == index["Tobias Marlow"]


POOL = ["Tom", "Tom Sawyer", "Mr. Sawyer", "Tom Canty", "Becky", "Becky Thatcher",
        "Judge Thatcher", "Sid Sawyer", "Polly", "Aunt Polly", "Huck", "Huck Finn",
        "Tom A Sawyer", "Tom B Sawyer", "Mrs. Thatcher", "Finn"]
name_lists = st.lists(st.sampled_from(POOL), min_size=1, max_size=25)


@settings(max_examples=200, deadline=None)
@given(name_lists)
def test_partition(names):
    clusters = clusters_of(names)
    seen = sorted(i for c in clusters for i in c.mention_indices)
    assert seen == list(range(len(names)))
    for c in clusters:
        assert c.mention_count == len(c.mention_indices)


@settings(max_examples=200, deadline=None)
@given(name_lists, st.randoms(use_true_random=False))
def test_input_order_does_not_matter(names, rnd):
    mentions = synthetic(names)
    shuffled = mentions[:]
    rnd.shuffle(shuffled)

    def summary(ms):
        return [(c.canonical_name, c.aliases, sorted(ms[i].token_range for i in c.mention_indices))
                for c in cluster_names(ms, HONORIFICS, NAMES)]

    assert summary(mentions) == summary(shuffled)


@settings(max_examples=200, deadline=None)
@given(name_lists, st.integers(0, 100), st.booleans())
def test_superset_alias_never_splits_its_cluster(names, pick, prefix):
    before = clusters_of(names)
    target = before[pick % len(before)]
    extra = ("Old " + target.canonical_name) if prefix else (target.canonical_name + " Junior")
    after = clusters_of(names + [extra])
    homes = {a: c.cluster_id for c in after for a in c.aliases}
    assert len({homes[a] for a in target.aliases} | {homes[extra]}) == 1


def test_superset_alias_keeps_surname_linked_member():
    names = ["Tom A Sawyer", "Tom A Sawyer", "Tom B Sawyer"]
    assert len(clusters_of(names)) == 1
    assert len(clusters_of(names + ["Tom A Sawyer Junior"])) == 1


def test_mentions_deterministic():
    text = (SAMPLES / "greywater.txt").read_text(encoding="utf-8")
    a = characters_of(text)[1]
    b = characters_of(text)[1]
    assert a == b
