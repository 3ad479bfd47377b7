import json
from importlib import resources

import jsonschema
import pytest

from chainscope.cli import main
from chainscope.metric import line_space

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def line4():
    """The collinear space {0, 1, 3, 7} used throughout the examples."""
    return line_space([0, 1, 3, 7])


@pytest.fixture
def run_cli(capsys):
    def run(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err
    return run


@pytest.fixture
def write_json(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return p
    return write


def schema(name):
    text = resources.files("chainscope.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def check_schema(name, obj):
    jsonschema.validate(obj, schema(name))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
