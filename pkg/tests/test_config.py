import json
import logging

from hymis.config import Settings
from hymis.logging_utils import log_structured
from hymis.reductions import reduce

from tests.generators import hypergraph


def test_settings_read_environment(monkeypatch):
    monkeypatch.setenv("HYMIS_THREADS", "3")
    monkeypatch.setenv("HYMIS_TIME_LIMIT", "1.5")
    monkeypatch.setenv("HYMIS_EXACT_MAX_VERTICES", "40")
    monkeypatch.setenv("HYMIS_SERVICE_URL", "http://reducer:9000/")
    settings = Settings()
    assert settings.threads == 3
    assert settings.time_limit == 1.5
    assert settings.exact_max_vertices == 40
    assert settings.service_url == "http://reducer:9000"


def test_blank_time_limit_means_unlimited(monkeypatch):
    monkeypatch.setenv("HYMIS_TIME_LIMIT", "")
    assert Settings().time_limit is None


def test_log_structured_emits_json(caplog):
    caplog.set_level(logging.INFO, logger="hymis")
    log_structured(logging.INFO, "batch_instance_done", instance="a.hgr", n_r=0, touched={3, 1})
    payload = json.loads(caplog.records[-1].getMessage())
    assert payload["message"] == "batch_instance_done"
    assert payload["level"] == "INFO"
    assert payload["touched"] == [1, 3]
    assert payload["instance"] == "a.hgr"
    assert "ts" in payload


def test_reduce_logs_summary(caplog):
    caplog.set_level(logging.DEBUG, logger="hymis")
    reduce(hypergraph([[1, 2], [2, 3]]))
    messages = [json.loads(record.getMessage()) for record in caplog.records if record.name == "hymis"]
    assert [m["message"] for m in messages].count("rule_applied") == 3
    summary = messages[-1]
    assert summary["message"] == "reduce_finished"
    assert (summary["n"], summary["n_r"], summary["offset"]) == (3, 0, 2)
