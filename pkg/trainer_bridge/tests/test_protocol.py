"""Line-oriented predictor protocol: alignment, ordering, fault isolation."""

import importlib.util
import io
import json
import subprocess
import sys

import pytest

from trainer_bridge.serve import serve_lines

STUB_CMD = (sys.executable, "-m", "trainer_bridge.cli", "serve", "--stub")


def _prompt(i: int) -> dict:
    return {
        "task": "extract_ao",
        "instruction": "find pairs",
        "input": f"sentence: item {i}",
        "output": "",
        "sentence_id": f"s:{i}",
    }


def test_stub_preserves_count_and_order():
    prompts = [_prompt(i) for i in range(25)]
    payload = "".join(json.dumps(p) + "\n" for p in prompts)
    result = subprocess.run(STUB_CMD, input=payload, capture_output=True, text=True, timeout=60)
    assert result.returncode == 0, result.stderr
    lines = result.stdout.splitlines()
    assert len(lines) == len(prompts)
    for prompt, line in zip(prompts, lines):
        record = json.loads(line)
        assert record["sentence_id"] == prompt["sentence_id"]
        assert record["task"] == prompt["task"]
        assert isinstance(record["raw_output"], str)


def test_malformed_line_yields_error_record_and_continues():
    payload = (
        json.dumps(_prompt(0)) + "\n"
        + "this is not json\n"
        + json.dumps({"task": "x", "input": ""}) + "\n"
        + json.dumps(_prompt(1)) + "\n"
    )
    result = subprocess.run(STUB_CMD, input=payload, capture_output=True, text=True, timeout=60)
    assert result.returncode == 0, result.stderr
    lines = [json.loads(l) for l in result.stdout.splitlines()]
    assert len(lines) == 4
    assert lines[0]["raw_output"]
    assert "error" in lines[1]
    assert "error" in lines[2] and "sentence_id" in lines[2]
    assert lines[3]["sentence_id"] == "s:1"
    assert lines[3]["raw_output"]


def test_blank_lines_are_skipped():
    payload = "\n" + json.dumps(_prompt(0)) + "\n\n\n"
    result = subprocess.run(STUB_CMD, input=payload, capture_output=True, text=True, timeout=60)
    assert result.returncode == 0
    assert len(result.stdout.splitlines()) == 1


def test_load_failure_exits_nonzero_before_reading(tmp_path):
    cmd = (sys.executable, "-m", "trainer_bridge.cli", "serve", "--adapter", str(tmp_path / "no"))
    payload = json.dumps(_prompt(0)) + "\n"
    result = subprocess.run(cmd, input=payload, capture_output=True, text=True, timeout=60)
    assert result.returncode != 0
    assert result.stdout == ""
    assert "error" in result.stderr.lower() or "no" in result.stderr


def test_serve_requires_adapter_or_stub():
    result = subprocess.run(
        (sys.executable, "-m", "trainer_bridge.cli", "serve"),
        input="", capture_output=True, text=True, timeout=60,
    )
    assert result.returncode == 2


def test_serve_lines_stub_in_process():
    prompts = [_prompt(i) for i in range(3)]
    stdin = io.StringIO("".join(json.dumps(p) + "\n" for p in prompts))
    stdout = io.StringIO()
    handled = serve_lines(None, stdin, stdout)
    assert handled == 3
    records = [json.loads(l) for l in stdout.getvalue().splitlines()]
    assert [r["sentence_id"] for r in records] == ["s:0", "s:1", "s:2"]


@pytest.mark.skipif(
    importlib.util.find_spec("synquad") is None,
    reason="upstream pipeline CLI not installed",
)
def test_stub_passes_upstream_pipeline_protocol(tmp_path):
    """End-to-end conformance: the dataset pipeline drives the stub as a
    subprocess predictor and completes with a well-formed report.
    """
    upstream = (sys.executable, "-m", "synquad.cli")
    made = subprocess.run(
        (*upstream, "make-corpus", "--domain", "restaurant", "--out-dir", str(tmp_path)),
        capture_output=True, text=True, timeout=120,
    )
    assert made.returncode == 0, made.stderr
    corpus = tmp_path / "Restaurant-ACOS"
    run = subprocess.run(
        (
            *upstream, "pipeline",
            "--tsv", str(corpus / "dev.tsv"),
            "--conllu", str(corpus / "dev.conllu"),
            "--out-dir", str(tmp_path / "run"),
            "--predictor", "exec",
            "--exec-cmd", " ".join(STUB_CMD),
        ),
        capture_output=True, text=True, timeout=300,
    )
    assert run.returncode == 0, run.stderr
    report = json.loads((tmp_path / "run" / "report.json").read_text())
    assert set(report) == {"pair", "quad", "stage1_malformed", "stage2_malformed"}
    assert report["pair"]["gold_total"] > 0
    raw = (tmp_path / "run" / "stage1" / "raw_extract_ao.jsonl").read_text().splitlines()
    prompts = (tmp_path / "run" / "stage1" / "prompts_extract_ao.jsonl").read_text().splitlines()
    assert len(raw) == len(prompts)
    for prompt_line, raw_line in zip(prompts, raw):
        assert json.loads(prompt_line)["sentence_id"] == json.loads(raw_line)["sentence_id"]
