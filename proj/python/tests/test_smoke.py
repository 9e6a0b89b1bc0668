import math
import random

import pytest

import socialtopk as st


def fixture_corpus():
    triples = [
        ("A", "i1", "t1"), ("B", "i1", "t1"), ("B", "i2", "t2"),
        ("C", "i2", "t1"), ("D", "i3", "t1"), ("D", "i2", "t2"),
    ]
    edges = [("A", "B", 0.9), ("A", "C", 0.6), ("B", "D", 0.5), ("C", "D", 0.8)]
    return st.Corpus.from_records(triples, edges)


def brute_force(network, triples, seeker, tags, function):
    sigma = dict(network.proximity_vector(seeker, function))
    scores = {}
    for user, item, tag in triples:
        if tag in tags and user != seeker:
            scores[item] = scores.get(item, 0.0) + sigma.get(user, 0.0)
    return sorted((s for s in scores.values() if s > 0.0), reverse=True)


def test_proximity_functions():
    assert st.ProximityFunction.mul().aggregate([0.9, 0.5]) == pytest.approx(0.45)
    assert st.ProximityFunction.min().aggregate([0.9, 0.5]) == pytest.approx(0.5)
    assert st.ProximityFunction.pow(2).aggregate([0.9]) == pytest.approx(2 ** (-1 / 0.9))
    with pytest.raises(st.DomainError):
        st.ProximityFunction.pow(0.5)


def test_named_query_and_algorithms_agree():
    corpus = fixture_corpus()
    rows = {a: corpus.query("A", ["t1"], k=1, algorithm=a) for a in ("oracle", "topks", "contextmerge")}
    for row in rows.values():
        assert [name for name, _ in row["items"]] == ["i1"]
    assert rows["oracle"]["items"][0][1] == pytest.approx(0.9)
    mvar = corpus.query("A", ["t1"], k=1, algorithm="mvar", delta=0.0)
    assert mvar["cost"] == rows["topks"]["cost"]


def test_unknown_seeker_raises():
    with pytest.raises(KeyError):
        fixture_corpus().query("nobody", ["t1"])


def test_engines_match_brute_force_on_random_instances():
    rng = random.Random(7)
    for _ in range(30):
        users, items, tags = 25, 12, 4
        edges = []
        for u in range(users):
            for v in range(u + 1, users):
                if rng.random() < 0.15:
                    edges.append((u, v, rng.uniform(0.05, 1.0)))
        triples = sorted({(rng.randrange(users), rng.randrange(items), rng.randrange(tags)) for _ in range(80)})
        network = st.SocialNetwork(users, edges)
        store = st.TaggingStore(triples)
        engine = st.SearchEngine(network, store)
        seeker = rng.randrange(users)
        qtags = rng.sample(range(tags), 2)
        query = st.Query(seeker, qtags, k=3, alpha=0.0)
        for function in (st.ProximityFunction.mul(), st.ProximityFunction.min(), st.ProximityFunction.pow(2)):
            want = brute_force(network, triples, seeker, set(qtags), function)[:3]
            for run in (engine.topks, engine.topks_alpha0, engine.context_merge):
                result = run(query, function)
                exact = dict(engine.exact_scores(query, function))
                got = sorted((exact[r.item] for r in result.items), reverse=True)
                assert got == pytest.approx(want, abs=1e-9)


def test_formulas_and_costs():
    assert st.cost(3, 50) == 350
    assert st.drill_delta_query(0.9, 2) == pytest.approx(0.6838, abs=1e-4)
    assert st.dice([1, 2, 3], [2, 3, 4]) == pytest.approx(2 / 3)


def test_synthetic_pipeline():
    store = st.synthesize(users=150, items=600, tags=20, communities=8, seed=3)
    network = st.dice_network(store, "items")
    assert network.num_users == 150 and network.num_edges > 0
    engine = st.SearchEngine(network, store)
    query = st.Query(0, [0, 1], k=5)
    profile = st.build_profile(network, 0)
    exact = engine.topks(query)
    for delta in (0.0, 0.9):
        approx = engine.topks_hist(query, profile, delta)
        assert approx.stats.cost <= exact.stats.cost or delta == 0.0
    assert not math.isnan(exact.stats.cost)
