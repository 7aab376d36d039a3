"""HTTP facade tests: wire contract, validation mapping, parity with the library."""

import math

import pytest
from fastapi.testclient import TestClient

from passview import DEFAULT_PARAMS, ModelParams, evaluate_scenario
from passview.dataio import parse_field_spec, scenario_from_record, write_value_map
from passview.epvbridge import combine_with_orientation, uniform_map
from passview.service import create_app, load_maps_dir, params_from_env


def client(**kwargs) -> TestClient:
    return TestClient(create_app(**kwargs))


def record(gk_receiver: bool = False) -> dict:
    receivers = [
        {"id": "r1", "x": 70.0, "y": 34.0, "orientation": 180.0, "role": "forward"},
        {"id": "r2", "x": 60.0, "y": 20.0, "orientation": 90.0, "role": "midfielder"},
    ]
    if gk_receiver:
        receivers.append({"id": "gk", "x": 100.0, "y": 34.0, "orientation": 180.0,
                          "role": "goalkeeper"})
    return {
        "passer": {"id": "p", "x": 50.0, "y": 34.0, "orientation": 0.0},
        "receivers": receivers,
        "defenders": [{"id": "d1", "x": 58.0, "y": 33.0, "orientation": 200.0}],
        "ground_truth": "r1",
        "success": True,
    }


class TestHealthAndMaps:
    def test_health_reports_params(self):
        res = client().get("/health")
        assert res.status_code == 200
        body = res.json()
        assert body["status"] == "ok"
        assert body["params"]["view_half_angle"] == 30.0
        assert body["params"]["neighbor_count"] == 3.0
        assert body["params"]["smoothing_window"] == 2.0

    def test_param_overrides_visible(self):
        app_client = client(params=ModelParams(view_half_angle=25.0, neighbor_count=2))
        body = app_client.get("/health").json()
        assert body["params"]["view_half_angle"] == 25.0
        assert body["params"]["neighbor_count"] == 2.0

    def test_env_overrides(self, monkeypatch):
        monkeypatch.setenv("PASSVIEW_PSI", "20")
        monkeypatch.setenv("PASSVIEW_NEIGHBORS", "4")
        params = params_from_env()
        assert params.view_half_angle == 20.0
        assert params.neighbor_count == 4

    def test_maps_listing_sorted(self, tmp_path):
        write_value_map(tmp_path / "b.map", uniform_map(0.5))
        write_value_map(tmp_path / "a.map", uniform_map(0.25))
        res = client(maps_dir=str(tmp_path)).get("/api/maps")
        assert res.json() == {"maps": ["a", "b"]}

    def test_no_maps_dir(self):
        assert client().get("/api/maps").json() == {"maps": []}

    def test_load_maps_dir_rejects_bad_file(self, tmp_path):
        (tmp_path / "broken.map").write_text("not a map\n", encoding="utf-8")
        with pytest.raises(Exception, match="broken"):
            load_maps_dir(str(tmp_path))


class TestEvaluate:
    def test_happy_path_matches_library(self):
        res = client().post("/api/evaluate", json={"scenario": record(), "mode": "F"})
        assert res.status_code == 200
        body = res.json()

        field = parse_field_spec({"length": 105.0, "width": 68.0, "attack_direction": "+x"})
        scenario, _ = scenario_from_record(record(), field, line=1)
        expected = evaluate_scenario(scenario, DEFAULT_PARAMS, "combined")
        assert body["mode"] == "combined"
        assert body["ranking"] == list(expected.ranking)
        assert body["best"] == expected.best
        by_id = {b["receiver_id"]: b for b in body["breakdowns"]}
        for breakdown in expected.breakdowns:
            wire = by_id[breakdown.receiver_id]
            assert wire["combined"] == breakdown.combined
            assert wire["orientation"] == breakdown.orientation
            assert wire["defense"] == breakdown.defense
            assert wire["proximity"] == breakdown.proximity

    def test_geometry_extras_present(self):
        body = client().post("/api/evaluate", json={"scenario": record()}).json()
        geometry = body["geometry"]
        assert set(geometry) == {"r1", "r2"}
        r1 = geometry["r1"]
        assert len(r1["passer_triangle"]) == 3
        assert len(r1["receiver_triangle"]) == 3
        # passer-local frame: r1 sits due +x of the passer, so it projects to
        # one circle radius along +x from the origin
        assert r1["projected_position"] == pytest.approx([1.0, 0.0])
        assert r1["passer_triangle"][0] == pytest.approx([0.0, 0.0])

    def test_default_mode_is_combined(self):
        body = client().post("/api/evaluate", json={"scenario": record()}).json()
        assert body["mode"] == "combined"

    def test_mode_alias_and_canonical_agree(self):
        alias = client().post("/api/evaluate",
                              json={"scenario": record(), "mode": "Fpd"}).json()
        canonical = client().post("/api/evaluate",
                                  json={"scenario": record(),
                                        "mode": "proximity_defense"}).json()
        assert alias == canonical

    def test_custom_field_block(self):
        payload = {
            "scenario": record(),
            "field": {"length": 120.0, "width": 80.0, "attack_direction": "-x"},
        }
        res = client().post("/api/evaluate", json=payload)
        assert res.status_code == 200

        field = parse_field_spec({"length": 120.0, "width": 80.0, "attack_direction": "-x"})
        scenario, _ = scenario_from_record(record(), field, line=1)
        expected = evaluate_scenario(scenario, DEFAULT_PARAMS, "combined",
                                     collect_geometry=True)
        by_id = {b["receiver_id"]: b for b in res.json()["breakdowns"]}
        for breakdown in expected.breakdowns:
            assert by_id[breakdown.receiver_id]["combined"] == breakdown.combined

    def test_goalkeeper_receiver_warns(self):
        body = client().post("/api/evaluate", json={"scenario": record(gk_receiver=True)}).json()
        assert any("goalkeeper" in w for w in body["warnings"])
        assert "gk" not in body["ranking"]

    def test_determinism(self):
        first = client().post("/api/evaluate", json={"scenario": record()}).json()
        second = client().post("/api/evaluate", json={"scenario": record()}).json()
        assert first == second

    def test_unknown_scenario_field_400(self):
        bad = record()
        bad["passer"]["speed"] = 3.0
        res = client().post("/api/evaluate", json={"scenario": bad})
        assert res.status_code == 400
        assert "passer.speed" in res.json()["detail"]

    def test_orientation_out_of_range_400(self):
        bad = record()
        bad["receivers"][0]["orientation"] = 360.0
        res = client().post("/api/evaluate", json={"scenario": bad})
        assert res.status_code == 400
        assert "orientation" in res.json()["detail"]

    def test_unknown_mode_400(self):
        res = client().post("/api/evaluate", json={"scenario": record(), "mode": "Z"})
        assert res.status_code == 400
        assert "mode" in res.json()["detail"]

    def test_missing_orientation_400_names_player(self):
        bad = record()
        del bad["receivers"][1]["orientation"]
        res = client().post("/api/evaluate", json={"scenario": bad, "mode": "F"})
        assert res.status_code == 400
        assert "r2" in res.json()["detail"]

    def test_missing_orientation_ok_for_pd(self):
        bad = record()
        del bad["receivers"][1]["orientation"]
        res = client().post("/api/evaluate", json={"scenario": bad, "mode": "Fpd"})
        assert res.status_code == 200
        body = res.json()
        assert body["breakdowns"][0]["combined"] is None

    def test_envelope_extra_key_422(self):
        res = client().post("/api/evaluate", json={"scenario": record(), "bogus": 1})
        assert res.status_code == 422

    def test_off_field_positions_accepted(self):
        # players may be drawn anywhere; bounds are not a validity condition
        loose = record()
        loose["passer"]["x"] = 900.0
        res = client().post("/api/evaluate", json={"scenario": loose})
        assert res.status_code == 200


class TestEpvCombine:
    def build(self, tmp_path, value: float = 0.015) -> TestClient:
        write_value_map(tmp_path / "uniform.map", uniform_map(value))
        return client(maps_dir=str(tmp_path))

    def test_happy_path_matches_library(self, tmp_path):
        api = self.build(tmp_path)
        res = api.post("/api/epv-combine",
                       json={"scenario": record(), "map": "uniform", "kind": "VP"})
        assert res.status_code == 200
        body = res.json()

        field = parse_field_spec({"length": 105.0, "width": 68.0, "attack_direction": "+x"})
        scenario, _ = scenario_from_record(record(), field, line=1)
        expected = combine_with_orientation(scenario, uniform_map(0.015),
                                            DEFAULT_PARAMS, "VP")
        assert body["kind"] == "VP"
        assert body["map"] == "uniform"
        assert body["ranking"] == list(expected.ranking)
        by_id = {e["receiver_id"]: e for e in body["entries"]}
        for entry in expected.entries:
            assert by_id[entry.receiver_id]["combined"] == entry.combined
            assert math.isclose(by_id[entry.receiver_id]["map_value"], entry.map_value)

    def test_unknown_map_404(self, tmp_path):
        api = self.build(tmp_path)
        res = api.post("/api/epv-combine", json={"scenario": record(), "map": "nope"})
        assert res.status_code == 404

    def test_bad_scenario_400(self, tmp_path):
        api = self.build(tmp_path)
        bad = record()
        bad["receivers"] = []
        res = api.post("/api/epv-combine", json={"scenario": bad, "map": "uniform"})
        assert res.status_code == 400

    def test_bad_kind_422(self, tmp_path):
        api = self.build(tmp_path)
        res = api.post("/api/epv-combine",
                       json={"scenario": record(), "map": "uniform", "kind": "XX"})
        assert res.status_code in (400, 422)
