# coding: utf-8

import pytest

from zslab.environment import Environment
from zslab.group import make_group
from zslab.sequence import Sequence


@pytest.fixture(autouse=True)
def fresh_environment(monkeypatch):
    """
    Every test starts from default settings; the singleton is restored afterwards.
    """
    monkeypatch.delenv("ZSLAB_MEM_CAP", raising=False)
    monkeypatch.setattr(Environment, "_inst", None)
    yield Environment.instance()


@pytest.fixture
def seq():
    """
    Build a sequence from ``p``, ``r`` and (element, multiplicity) pairs or plain elements.
    """
    def build(p: int, r: int, *items):
        spec = make_group(p, r)
        entries = []
        for item in items:
            if len(item) == 2 and isinstance(item[0], tuple):
                entries.append(item)
            else:
                entries.append((tuple(item), 1))
        return Sequence(spec, entries)
    return build


@pytest.fixture
def seq_file(tmp_path):
    """
    Write sequence text to a file under ``tmp_path`` and return its path as str.
    """
    def write(text: str, name: str = "S.seq") -> str:
        path = tmp_path.joinpath(name)
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write
