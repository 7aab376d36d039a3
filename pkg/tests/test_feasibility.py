"""Feasibility scores: orientation, defense, proximity, and the ranking."""

from __future__ import annotations

import math

import numpy as np
import pytest

from passview.feasibility import (
    DEFAULT_PARAMS,
    FeasibilityError,
    ModelParams,
    PlayerState,
    Scenario,
    defender_weight,
    evaluate_scenario,
    normalize_mode,
    orientation_feasibility,
    passer_defense_feasibility,
    project_to_circle,
    proximity_feasibility,
    receiver_defense_feasibility,
)
from passview.geometry import FieldSpec, Point2

# 60 x 80 field has diagonal exactly 100, which keeps hand computations clean.
FIELD = FieldSpec(60.0, 80.0)


def player(pid: str, x: float, y: float, orientation: float | None = None,
           role: str | None = None) -> PlayerState:
    return PlayerState(pid, Point2(x, y), orientation, role)


class TestModeNames:
    def test_aliases_map_to_canonical_names(self):
        assert normalize_mode("F") == "combined"
        assert normalize_mode("Fpd") == "proximity_defense"
        assert normalize_mode("Fo") == "orientation"
        assert normalize_mode("Fd") == "defense"
        assert normalize_mode("Fp") == "proximity"
        assert normalize_mode("combined") == "combined"

    def test_unknown_mode_raises(self):
        with pytest.raises(FeasibilityError):
            normalize_mode("fq")


class TestDefenderWeight:
    @pytest.mark.parametrize("alpha,expected", [
        (10.0, 0.25),
        (22.5, 0.5),
        (30.0, 0.5),
        (44.9, 0.5),
        (45.0, 2.0),
        (90.0, 2.0),
        (180.0, 2.0),
    ])
    def test_band_boundaries(self, alpha, expected):
        assert defender_weight(alpha, 0.0) == expected
        # the bands depend only on the separation, not the absolute bearings
        assert defender_weight((alpha + 123.0) % 360.0, 123.0) == expected

    def test_wraps_across_zero(self):
        assert defender_weight(350.0, 10.0) == 0.25
        assert defender_weight(310.0, 10.0) == 2.0


class TestProjectToCircle:
    def test_projects_onto_unit_circle_preserving_bearing(self):
        passer = player("p", 0.0, 0.0, 0.0)
        receivers = [player("a", 10.0, 0.0, 5.0), player("b", 0.0, 5.0, 15.0),
                     player("c", -3.0, -3.0, 25.0)]
        projected = project_to_circle(passer, receivers, radius=1.0)
        assert projected[0].position == Point2(1.0, 0.0)
        assert projected[1].position.x == pytest.approx(0.0, abs=1e-15)
        assert projected[1].position.y == pytest.approx(1.0)
        assert projected[2].position.x == pytest.approx(-math.sqrt(0.5))
        assert projected[2].position.y == pytest.approx(-math.sqrt(0.5))
        # orientations and ids ride along untouched
        assert [p.orientation for p in projected] == [5.0, 15.0, 25.0]

    def test_coincident_receiver_raises(self):
        passer = player("p", 1.0, 1.0)
        with pytest.raises(FeasibilityError):
            project_to_circle(passer, [player("a", 1.0, 1.0)])


class TestOrientationFeasibility:
    def test_head_on_pose_scores_exactly_one(self):
        passer = player("p", 0.0, 0.0, 0.0)
        for dist in (1.0, 5.0, 40.0):
            receiver = player("r", dist, 0.0, 180.0)
            assert orientation_feasibility(passer, receiver) == 1.0

    def test_back_to_back_scores_zero(self):
        passer = player("p", 0.0, 0.0, 180.0)
        receiver = player("r", 5.0, 0.0, 0.0)
        assert orientation_feasibility(passer, receiver) == 0.0

    def test_distance_along_ray_is_irrelevant(self):
        # receivers on the same bearing project to the same circle point
        passer = player("p", 10.0, 10.0, 40.0)
        near = player("r", 13.0, 14.0, 200.0)
        far = player("r", 16.0, 18.0, 200.0)
        assert orientation_feasibility(passer, near) == orientation_feasibility(passer, far)

    def test_rotating_everything_changes_nothing(self):
        base_p = player("p", 0.0, 0.0, 20.0)
        base_r = player("r", 4.0, 1.0, 195.0)
        base = orientation_feasibility(base_p, base_r)
        for rot in (37.0, 90.0, 213.5):
            rad = math.radians(rot)
            c, s = math.cos(rad), math.sin(rad)
            rx, ry = 4.0 * c - 1.0 * s, 4.0 * s + 1.0 * c
            got = orientation_feasibility(
                player("p", 0.0, 0.0, (20.0 + rot) % 360.0),
                player("r", rx, ry, (195.0 + rot) % 360.0))
            assert got == pytest.approx(base, rel=1e-3)

    def test_score_stays_in_unit_interval(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            p = player("p", 0.0, 0.0, float(rng.uniform(0, 360)))
            r = player("r", float(rng.uniform(-20, 20)), float(rng.uniform(-20, 20)),
                       float(rng.uniform(0, 360)))
            if r.position.x == 0.0 and r.position.y == 0.0:
                continue
            score = orientation_feasibility(p, r)
            assert 0.0 <= score <= 1.0

    def test_missing_orientation_raises(self):
        with pytest.raises(FeasibilityError, match="'p'"):
            orientation_feasibility(player("p", 0.0, 0.0), player("r", 5.0, 0.0, 0.0))
        with pytest.raises(FeasibilityError, match="'r'"):
            orientation_feasibility(player("p", 0.0, 0.0, 0.0), player("r", 5.0, 0.0))


class TestDefenseFeasibility:
    def test_single_defender_on_the_line_hand_value(self):
        # defender at 40m straight ahead: weight 0.25, normalized distance 0.4
        s = Scenario(FIELD, player("p", 0.0, 0.0), (player("r", 30.0, 0.0),),
                     (player("d", 40.0, 0.0),))
        score, charged = passer_defense_feasibility(s, "r")
        assert score == pytest.approx(math.exp(-0.25 * 0.6), rel=1e-12)
        assert charged == frozenset({"d"})
        # that defender is spoken for, so the receiver side is unopposed
        assert receiver_defense_feasibility(s, "r", charged) == 1.0

    def test_receiver_side_pressure_hand_value(self):
        # three defenders swallow the passer-side slots; the fourth marks the
        # receiver from 5m at 90 degrees off the passing line (weight 2)
        defenders = (player("d1", 1.0, 0.0), player("d2", 2.0, 0.0),
                     player("d3", 3.0, 0.0), player("d4", 30.0, 5.0))
        s = Scenario(FIELD, player("p", 0.0, 0.0), (player("r", 30.0, 0.0),), defenders)
        score, charged = passer_defense_feasibility(s, "r")
        assert charged == frozenset({"d1", "d2", "d3"})
        got = receiver_defense_feasibility(s, "r", charged)
        assert got == pytest.approx(math.exp(-2.0 * 0.95), rel=1e-12)

    def test_neighbor_tie_prefers_plain_distance_then_id(self):
        params = ModelParams(neighbor_count=1)
        # equal weighted distance 0.1: (w=0.25, d=0.4) vs (w=2, d=0.05)
        s = Scenario(FIELD, player("p", 0.0, 0.0), (player("r", 10.0, 0.0),),
                     (player("a", 40.0, 0.0), player("b", 0.0, 5.0)))
        _, charged = passer_defense_feasibility(s, "r", params)
        assert charged == frozenset({"b"})
        # fully symmetric pair: id decides
        s2 = Scenario(FIELD, player("p", 0.0, 0.0), (player("r", 10.0, 0.0),),
                      (player("a", 0.0, 5.0), player("b", 0.0, -5.0)))
        _, charged2 = passer_defense_feasibility(s2, "r", params)
        assert charged2 == frozenset({"a"})

    def test_defender_on_top_of_passer_counts_as_on_the_line(self):
        s = Scenario(FIELD, player("p", 10.0, 10.0), (player("r", 40.0, 10.0),),
                     (player("d", 10.0, 10.0),))
        score, charged = passer_defense_feasibility(s, "r")
        assert charged == frozenset({"d"})
        assert score == pytest.approx(math.exp(-0.25), rel=1e-12)

    def test_no_defenders_gives_one(self):
        s = Scenario(FIELD, player("p", 0.0, 0.0), (player("r", 30.0, 0.0),))
        score, charged = passer_defense_feasibility(s, "r")
        assert score == 1.0 and charged == frozenset()
        assert receiver_defense_feasibility(s, "r", charged) == 1.0

    def test_far_defenders_cannot_push_score_above_one(self):
        # (1 - distance) floors at 0, so the score never exceeds 1
        big = FieldSpec(10.0, 10.0)
        s = Scenario(big, player("p", 0.0, 0.0), (player("r", 1.0, 0.0),),
                     (player("d", 200.0, 0.0),))
        score, _ = passer_defense_feasibility(s, "r")
        assert score == 1.0


class TestProximity:
    def test_follows_normalized_distance(self):
        got = proximity_feasibility(player("p", 0.0, 0.0), player("r", 30.0, 40.0), FIELD)
        assert got == pytest.approx(math.exp(-0.5), rel=1e-12)


class TestScenarioValidation:
    def test_rejects_duplicate_ids(self):
        with pytest.raises(FeasibilityError, match="duplicate"):
            Scenario(FIELD, player("p", 0.0, 0.0),
                     (player("p", 1.0, 0.0),))

    def test_rejects_unknown_ground_truth(self):
        with pytest.raises(FeasibilityError, match="ground_truth"):
            Scenario(FIELD, player("p", 0.0, 0.0), (player("r", 1.0, 0.0),),
                     ground_truth_receiver="zz")

    def test_rejects_empty_receivers(self):
        with pytest.raises(FeasibilityError):
            Scenario(FIELD, player("p", 0.0, 0.0), ())

    def test_rejects_too_many_receivers(self):
        receivers = tuple(player(f"r{i}", 1.0 + i, 0.0) for i in range(11))
        with pytest.raises(FeasibilityError, match="receivers"):
            Scenario(FIELD, player("p", 0.0, 0.0), receivers)


def _sample_scenario(with_orientations: bool = True) -> Scenario:
    passer = player("p", 20.0, 40.0, 0.0 if with_orientations else None)
    receivers = (
        player("r1", 35.0, 40.0, 180.0 if with_orientations else None),
        player("r2", 30.0, 55.0, 225.0 if with_orientations else None),
        player("r3", 10.0, 20.0, 90.0 if with_orientations else None),
    )
    defenders = (player("d1", 40.0, 42.0), player("d2", 28.0, 50.0),
                 player("d3", 25.0, 30.0), player("d4", 50.0, 60.0))
    return Scenario(FIELD, passer, receivers, defenders)


class TestEvaluateScenario:
    def test_combined_is_the_literal_product(self):
        result = evaluate_scenario(_sample_scenario(), mode="combined")
        for b in result.breakdowns:
            assert b.combined == b.orientation * b.defense * b.proximity
            assert b.proximity_defense == b.proximity * b.defense
            assert b.defense == b.passer_defense * b.receiver_defense

    def test_ranking_without_defenders_on_a_ray_follows_distance(self):
        # same bearing and same orientations: only proximity differs
        passer = player("p", 0.0, 0.0, 0.0)
        receivers = (player("far", 40.0, 0.0, 180.0),
                     player("near", 10.0, 0.0, 180.0),
                     player("mid", 25.0, 0.0, 180.0))
        s = Scenario(FIELD, passer, receivers)
        result = evaluate_scenario(s, mode="combined")
        assert result.ranking == ("near", "mid", "far")

    def test_tie_broken_by_orientation_then_id(self):
        passer = player("p", 0.0, 0.0, 0.0)
        # equal distance, symmetric bearings: proximity and defense tie
        facing = player("a", 10.0, 10.0, 225.0)   # looking back at the passer
        away = player("b", 10.0, -10.0, 315.0)    # looking away from the passer
        s = Scenario(FIELD, passer, (away, facing))
        result = evaluate_scenario(s, mode="proximity")
        assert result.ranking == ("a", "b")
        # exact twins modulo reflection: falls through to the id tie-break
        twin_a = player("a", 10.0, 10.0, 315.0)
        twin_b = player("b", 10.0, -10.0, 45.0)
        result2 = evaluate_scenario(Scenario(FIELD, passer, (twin_b, twin_a)),
                                    mode="proximity")
        assert result2.ranking == ("a", "b")

    def test_orientation_modes_require_orientations(self):
        s = _sample_scenario(with_orientations=False)
        with pytest.raises(FeasibilityError, match="'p'"):
            evaluate_scenario(s, mode="combined")
        with pytest.raises(FeasibilityError, match="orientation"):
            evaluate_scenario(s, mode="Fo")
        result = evaluate_scenario(s, mode="Fpd")
        assert all(b.orientation is None and b.combined is None for b in result.breakdowns)
        assert len(result.ranking) == 3

    def test_removing_the_only_defender_lifts_defense_to_one(self):
        passer = player("p", 0.0, 0.0, 0.0)
        receiver = player("r", 30.0, 0.0, 180.0)
        with_d = Scenario(FIELD, passer, (receiver,), (player("d", 20.0, 3.0),))
        without = Scenario(FIELD, passer, (receiver,))
        before = evaluate_scenario(with_d).breakdown_for("r")
        after = evaluate_scenario(without).breakdown_for("r")
        assert before.defense < 1.0
        assert after.defense == 1.0
        assert after.combined >= before.combined

    def test_neighbor_sets_are_disjoint_and_bounded(self):
        result = evaluate_scenario(_sample_scenario())
        for rid in ("r1", "r2", "r3"):
            passer_side = set(result.passer_neighbors[rid])
            receiver_side = set(result.receiver_neighbors[rid])
            assert passer_side.isdisjoint(receiver_side)
            assert len(passer_side) <= DEFAULT_PARAMS.neighbor_count
            assert len(receiver_side) <= DEFAULT_PARAMS.neighbor_count

    def test_geometry_extras_follow_the_projection(self):
        result = evaluate_scenario(_sample_scenario(), collect_geometry=True)
        assert set(result.geometry) == {"r1", "r2", "r3"}
        geo = result.geometry["r1"]
        # r1 sits straight down +x from the passer
        assert geo.projected_position.x == pytest.approx(1.0)
        assert geo.projected_position.y == pytest.approx(0.0, abs=1e-12)
        apex = geo.passer_triangle.vertices[0]
        assert (apex.x, apex.y) == (0.0, 0.0)
        assert not geo.overlap.is_empty

    def test_evaluation_is_deterministic(self):
        a = evaluate_scenario(_sample_scenario(), collect_geometry=True)
        b = evaluate_scenario(_sample_scenario(), collect_geometry=True)
        assert a == b

    def test_mirror_about_x_axis_preserves_scores(self):
        s = _sample_scenario()

        def flip(p: PlayerState) -> PlayerState:
            orient = None if p.orientation is None else (360.0 - p.orientation) % 360.0
            return PlayerState(p.id, Point2(p.position.x, -p.position.y), orient, p.role)

        mirrored = Scenario(s.field, flip(s.passer), tuple(flip(r) for r in s.receivers),
                            tuple(flip(d) for d in s.defenders))
        base = evaluate_scenario(s)
        got = evaluate_scenario(mirrored)
        assert got.ranking == base.ranking
        for b1, b2 in zip(base.breakdowns, got.breakdowns):
            assert b2.combined == pytest.approx(b1.combined, abs=1e-9)
            assert b2.defense == pytest.approx(b1.defense, abs=1e-12)

    def test_components_stay_in_unit_interval(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            passer = player("p", float(rng.uniform(5, 55)), float(rng.uniform(5, 75)),
                            float(rng.uniform(0, 360)))
            receivers = []
            for i in range(4):
                while True:
                    x, y = float(rng.uniform(0, 60)), float(rng.uniform(0, 80))
                    if math.hypot(x - passer.position.x, y - passer.position.y) > 0.5:
                        break
                receivers.append(player(f"r{i}", x, y, float(rng.uniform(0, 360))))
            defenders = tuple(player(f"d{i}", float(rng.uniform(0, 60)),
                                     float(rng.uniform(0, 80))) for i in range(6))
            s = Scenario(FIELD, passer, tuple(receivers), defenders)
            for b in evaluate_scenario(s).breakdowns:
                for value in (b.orientation, b.passer_defense, b.receiver_defense,
                              b.defense, b.proximity, b.combined, b.proximity_defense):
                    assert 0.0 <= value <= 1.0


class TestModelParams:
    def test_defaults_resolve_derived_values(self):
        assert DEFAULT_PARAMS.view_dist_scale == 2.0
        assert DEFAULT_PARAMS.norm_constant > 0.0

    def test_custom_view_angle_still_normalizes_head_on_to_one(self):
        params = ModelParams(view_half_angle=20.0)
        got = orientation_feasibility(player("p", 0.0, 0.0, 0.0),
                                      player("r", 7.0, 0.0, 180.0), params)
        assert got == 1.0

    def test_rejects_bad_values(self):
        with pytest.raises(FeasibilityError):
            ModelParams(view_half_angle=90.0)
        with pytest.raises(FeasibilityError):
            ModelParams(circle_radius=0.0)
        with pytest.raises(FeasibilityError):
            ModelParams(neighbor_count=0)
