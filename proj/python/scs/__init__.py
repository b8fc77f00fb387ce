"""Python access to the conceptual-graph core.

Workspace functions take the workspace directory; graphs may be given in
linear notation or as JSON documents.
"""

import json

from . import _scs
from ._scs import ScsError

__all__ = [
    "ScsError",
    "canonical_form",
    "check",
    "form",
    "match",
    "parse_graph",
    "paths",
    "project",
    "publish",
    "query",
    "serialize_graph",
]


def _graph(g):
    return g if isinstance(g, str) else json.dumps(g)


def parse_graph(text):
    return json.loads(_scs.parse_graph(text))


def serialize_graph(graph):
    return _scs.serialize_graph(_graph(graph))


def canonical_form(graph):
    return _scs.canonical_form(_graph(graph))


def check(root):
    return json.loads(_scs.check(str(root)))


def project(root, pattern, target):
    return json.loads(_scs.project(str(root), _graph(pattern), _graph(target)))


def form(root, model_id):
    return json.loads(_scs.form(str(root), model_id))


def query(root, **filters):
    return json.loads(_scs.query(str(root), {k: str(v) for k, v in filters.items() if v is not None}))


def match(root, scenario_id, step_id):
    return json.loads(_scs.match(str(root), scenario_id, step_id))


def paths(root, scenario_id, max_len=32):
    return _scs.paths(str(root), scenario_id, max_len)


def publish(root, scenario_id, mode="fixed"):
    return json.loads(_scs.publish(str(root), scenario_id, mode))
