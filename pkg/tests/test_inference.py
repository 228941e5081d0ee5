"""Exact inference: enumeration oracle, variable elimination, their
agreement, MAP extraction, and the all-nodes query path."""

import itertools

import numpy as np
import pytest

from chiron.inference import (
    ImpossibleEvidenceError,
    Posterior,
    eliminate_posterior,
    enumerate_posterior,
    map_state,
    posterior_all,
)
from chiron.network import Cpt, NetworkSpec, NodeSpec, parse_network
from chiron.triage import default_network

from helpers import oracle_posterior, random_evidence, random_network

SINGLE = NetworkSpec(
    "one", "1", (NodeSpec("A", ("x", "y"), (), Cpt([[0.3, 0.7]])),)
)

FLIP = NetworkSpec(
    "flip",
    "1",
    (
        NodeSpec("A", ("a0", "a1"), (), Cpt([[0.5, 0.5]])),
        NodeSpec("B", ("b0", "b1"), ("A",), Cpt([[0.9, 0.1], [0.1, 0.9]])),
    ),
)

ZEROED = NetworkSpec(
    "zeroed",
    "1",
    (
        NodeSpec("A", ("a0", "a1"), (), Cpt([[1.0, 0.0]])),
        NodeSpec("B", ("b0", "b1"), ("A",), Cpt([[1.0, 0.0], [0.5, 0.5]])),
    ),
)

ENGINES = [enumerate_posterior, eliminate_posterior]


@pytest.mark.parametrize("engine", ENGINES)
class TestBothEngines:
    def test_no_evidence_returns_prior(self, engine):
        posterior = engine(SINGLE, {}, "A")
        assert posterior.node == "A"
        assert posterior.distribution == pytest.approx([0.3, 0.7], abs=1e-12)

    def test_bayes_flip_on_chain(self, engine):
        posterior = engine(FLIP, {"B": 0}, "A")
        assert posterior.distribution == pytest.approx([0.9, 0.1], abs=1e-12)

    def test_default_network_head_wound_anchor(self, engine):
        spec = default_network()
        evidence = {"HeadTrauma": spec.node("HeadTrauma").state_index("Wound")}
        posterior = engine(spec, evidence, "OcularAlertness")
        assert posterior.distribution[1] == pytest.approx(0.70, abs=1e-12)

    def test_evidenced_query_is_point_mass(self, engine):
        posterior = engine(FLIP, {"A": 1}, "A")
        assert posterior.distribution == pytest.approx([0.0, 1.0], abs=0)

    def test_impossible_evidence_raises(self, engine):
        with pytest.raises(ImpossibleEvidenceError) as err:
            engine(ZEROED, {"A": 1}, "B")
        assert err.value.code == "IMPOSSIBLE_EVIDENCE"

    def test_matches_independent_oracle(self, engine):
        rng = np.random.default_rng(97)
        for _ in range(10):
            spec = random_network(rng, max_nodes=6, max_cells=512)
            evidence = random_evidence(rng, spec)
            query = spec.nodes[int(rng.integers(0, len(spec.nodes)))].name
            expected = oracle_posterior(spec, evidence, query)
            got = engine(spec, evidence, query).distribution
            assert np.max(np.abs(np.asarray(got) - expected)) < 1e-9


class TestAgreement:
    def test_engines_agree_on_random_networks(self):
        rng = np.random.default_rng(1001)
        for _ in range(40):
            spec = random_network(rng)
            evidence = random_evidence(rng, spec)
            for node in spec.node_names:
                a = enumerate_posterior(spec, evidence, node).distribution
                b = eliminate_posterior(spec, evidence, node).distribution
                assert np.max(np.abs(np.asarray(a) - np.asarray(b))) < 1e-9

    def test_any_elimination_order_agrees(self):
        rng = np.random.default_rng(55)
        spec = random_network(rng, max_nodes=6, max_cells=512)
        evidence = random_evidence(rng, spec)
        query = spec.nodes[0].name
        free = [n for n in spec.node_names if n != query and n not in evidence]
        reference = eliminate_posterior(spec, evidence, query).distribution
        orders = list(itertools.permutations(free))[:24]
        for order in orders:
            got = eliminate_posterior(spec, evidence, query, order=list(order))
            assert np.max(
                np.abs(np.asarray(got.distribution) - np.asarray(reference))
            ) < 1e-9

    def test_explicit_order_must_cover_free_nodes(self):
        with pytest.raises(ValueError):
            eliminate_posterior(FLIP, {}, "A", order=[])
        with pytest.raises(ValueError):
            eliminate_posterior(FLIP, {}, "A", order=["A", "B"])


class TestMapState:
    def test_plain(self):
        assert map_state(Posterior("A", np.array([0.3, 0.7]))) == 1

    def test_tie_breaks_to_lowest_index(self):
        assert map_state(Posterior("A", np.array([0.5, 0.5]))) == 0

    def test_point_mass(self):
        assert map_state(Posterior("A", np.array([0.0, 0.0, 1.0]))) == 2


class TestPosteriorAll:
    def test_empty_evidence_gives_prior_marginals(self):
        spec = default_network()
        for posterior in posterior_all(spec, {}):
            expected = oracle_posterior(spec, {}, posterior.node)
            assert np.max(
                np.abs(np.asarray(posterior.distribution) - expected)
            ) < 1e-9

    def test_full_evidence_gives_point_masses(self):
        spec = default_network()
        evidence = {n.name: 0 for n in spec.nodes}
        for posterior in posterior_all(spec, evidence):
            assert posterior.distribution[0] == 1.0
            assert sum(posterior.distribution) == 1.0

    def test_results_follow_declaration_order(self):
        spec = default_network()
        assert [p.node for p in posterior_all(spec, {})] == list(spec.node_names)

    def test_amputation_forces_hemorrhage(self):
        spec = default_network()
        evidence = {
            "LowerExtTrauma": spec.node("LowerExtTrauma").state_index("Amputation")
        }
        by_node = {p.node: p for p in posterior_all(spec, evidence)}
        assert by_node["SevereHemorrhage"].distribution[0] >= 0.8

    def test_matches_single_queries(self):
        rng = np.random.default_rng(2024)
        for _ in range(10):
            spec = random_network(rng, max_nodes=7, max_cells=2048)
            evidence = random_evidence(rng, spec)
            for posterior in posterior_all(spec, evidence):
                single = eliminate_posterior(spec, evidence, posterior.node)
                assert np.max(
                    np.abs(
                        np.asarray(posterior.distribution)
                        - np.asarray(single.distribution)
                    )
                ) < 1e-9

    def test_large_state_space_falls_back_to_elimination(self):
        # 10 nodes x 4 states = 2^20 joint cells, beyond the cached-table
        # threshold; the per-node elimination path must kick in quietly.
        rng = np.random.default_rng(77)
        nodes = []
        for i in range(10):
            parents = (f"g{i-1}",) if i else ()
            rows = 4 if i else 1
            raw = rng.random((rows, 4)) + 0.05
            nodes.append(
                NodeSpec(
                    f"g{i}",
                    ("s0", "s1", "s2", "s3"),
                    parents,
                    Cpt(raw / raw.sum(axis=1, keepdims=True)),
                )
            )
        spec = NetworkSpec("wide", "1", tuple(nodes))
        evidence = {"g0": 1, "g5": 2}
        for posterior in posterior_all(spec, evidence):
            single = eliminate_posterior(spec, evidence, posterior.node)
            assert np.max(
                np.abs(
                    np.asarray(posterior.distribution)
                    - np.asarray(single.distribution)
                )
            ) < 1e-9

    def test_impossible_evidence_raises(self):
        with pytest.raises(ImpossibleEvidenceError):
            posterior_all(ZEROED, {"A": 1, "B": 1})


class TestDistributionInvariants:
    def test_posteriors_normalized_and_bounded(self):
        rng = np.random.default_rng(404)
        for _ in range(15):
            spec = random_network(rng, max_nodes=6, max_cells=512)
            evidence = random_evidence(rng, spec)
            for posterior in posterior_all(spec, evidence):
                dist = np.asarray(posterior.distribution)
                assert np.all(dist >= 0.0) and np.all(dist <= 1.0)
                assert abs(dist.sum() - 1.0) < 1e-9
