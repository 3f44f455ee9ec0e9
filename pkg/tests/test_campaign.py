import csv
import json

import pytest

from polyspec.bounds import BOUNDS, run_check
from polyspec.campaign import (
    CampaignConfig,
    build_instance,
    resolve_threads,
    run_campaign,
    run_trial,
    summary_json,
    write_report,
)
from polyspec.genlab import split_seed
from polyspec.io import instance_from_json


def test_config_validation():
    with pytest.raises(ValueError):
        CampaignConfig("nope")
    with pytest.raises(ValueError):
        CampaignConfig("kahan", trials=0)
    with pytest.raises(ValueError):
        CampaignConfig("kahan", format="xml")
    with pytest.raises(ValueError):
        CampaignConfig.from_dict({"bound_id": "kahan", "colour": "red"})
    cfg = CampaignConfig.from_dict({"bound_id": "kahan", "p": "inf", "gen_specs": {"n": [2, 3]}})
    assert cfg.to_dict()["p"] == "inf" and cfg.gen["n"] == [2, 3]


def test_single_trial_smoke():
    report = run_campaign(CampaignConfig("hoffman-wielandt", trials=1, seed=3))
    assert report["summary"]["violations"] == 0 and report["summary"]["trials"] == 1


@pytest.mark.parametrize("bound_id", sorted(BOUNDS))
def test_every_bound_has_a_builder(bound_id):
    report = run_campaign(CampaignConfig(bound_id, trials=5, seed=1))
    s = report["summary"]
    assert s["trials"] == 5
    assert s["hypotheses_unmet"] == 0, s
    if bound_id != "nonmonic-thm37":
        assert s["violations"] == 0, s


def test_violation_count_definition():
    cfg = CampaignConfig("nonmonic-thm37", trials=150, seed=3)
    report = run_campaign(cfg)
    recs = report["trials"]
    count = sum(1 for r in recs if r["report"]["hypotheses_met"] and not r["report"]["holds"])
    assert report["summary"]["violations"] == count
    assert len(report["violation_records"]) == count


def test_trials_replay_from_seed_and_instance():
    cfg = CampaignConfig("elsner", trials=20, seed=11, p=1)
    report = run_campaign(cfg)
    t = report["summary"]["argmax_trial"]
    assert report["summary"]["argmax_seed"] == split_seed(11, t)
    again = run_trial(cfg, t)
    assert again["report"] == report["trials"][t]["report"]
    inputs, params = build_instance("elsner", cfg.gen, cfg.p, split_seed(11, t))
    assert run_check("elsner", inputs, params).to_dict() == again["report"]


def test_violation_records_replay():
    cfg = CampaignConfig("nonmonic-thm37", trials=200, seed=3)
    rec = run_campaign(cfg)["violation_records"][0]
    bound, inputs, params = instance_from_json(json.loads(json.dumps(rec["instance"])))
    rep = run_check(bound, inputs, params)
    assert rep.violation and rep.to_dict() == rec["report"]


def test_summary_is_deterministic():
    cfg = CampaignConfig("poly-hoffman-wielandt", trials=40, seed=99)
    assert summary_json(run_campaign(cfg)) == summary_json(run_campaign(cfg))


def test_parallel_matches_serial():
    serial = run_campaign(CampaignConfig("kahan", trials=30, seed=5))
    par = run_campaign(CampaignConfig("kahan", trials=30, seed=5, threads=2))
    assert summary_json(serial) == summary_json(par)
    assert serial["trials"] == par["trials"]


def test_strict_mode_counts_rejections():
    cfg = CampaignConfig("kahan", trials=5, seed=2, strict_hypotheses=True, gen_specs={"family": "arbitrary"})
    s = run_campaign(cfg)["summary"]
    assert s["strict_rejected"] == 5 and s["violations"] == 0


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv("POLYSPEC_THREADS", raising=False)
    assert resolve_threads() == 1
    monkeypatch.setenv("POLYSPEC_THREADS", "3")
    assert resolve_threads() == 3 and resolve_threads(2) == 2


def test_write_json_and_csv(tmp_path):
    cfg = CampaignConfig("det-perturbation", trials=4, seed=0, output_path=str(tmp_path / "r.json"))
    report = run_campaign(cfg)
    write_report(report, cfg)
    data = json.loads((tmp_path / "r.json").read_text())
    assert data["summary"]["trials"] == 4 and len(data["trials"]) == 4
    cfg = CampaignConfig("det-perturbation", trials=4, seed=0, output_path=str(tmp_path / "r.csv"), format="csv")
    write_report(run_campaign(cfg), cfg)
    rows = list(csv.DictReader(open(tmp_path / "r.csv")))
    assert len(rows) == 4 and rows[0]["bound_id"] == "det-perturbation"


def test_large_reports_use_sidecar(tmp_path, monkeypatch):
    import polyspec.campaign as camp

    monkeypatch.setattr(camp, "SIDECAR_THRESHOLD", 3)
    cfg = CampaignConfig("gamma-bounds", trials=5, seed=0, output_path=str(tmp_path / "r.json"))
    write_report(run_campaign(cfg), cfg)
    data = json.loads((tmp_path / "r.json").read_text())
    assert data["trials"] is None
    assert len((tmp_path / "r.json.trials.jsonl").read_text().splitlines()) == 5
