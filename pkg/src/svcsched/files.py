"""JSON file formats for instances and schedules.

Both writers emit canonical key order and integer times (infinite times as the
string "inf"), so load -> dump round-trips are byte stable.
"""

from __future__ import annotations

import json
from typing import Optional

from .model import INF, SERVER, CLOUD, Schedule, TaskGraph


def _time_out(v):
    return "inf" if v == INF else int(v)


def _time_in(v):
    if v == "inf":
        return INF
    if isinstance(v, int) and not isinstance(v, bool) and v >= 0:
        return v
    raise ValueError("expected nonnegative integer or \"inf\", got %r" % (v,))


def instance_to_obj(g: TaskGraph) -> dict:
    return {
        "jobs": [{"id": j, "ps": _time_out(g.p_server[j]), "pc": _time_out(g.p_cloud[j])}
                 for j in g.jobs],
        "edges": [{"from": u, "to": v, "c": int(c)} for u, v, c in g.edges],
        "source": g.source,
        "sink": g.sink,
    }


def instance_from_obj(obj: dict) -> TaskGraph:
    jobs = tuple(rec["id"] for rec in obj["jobs"])
    ps = {rec["id"]: _time_in(rec["ps"]) for rec in obj["jobs"]}
    pc = {rec["id"]: _time_in(rec["pc"]) for rec in obj["jobs"]}
    edges = tuple((rec["from"], rec["to"], int(rec["c"])) for rec in obj["edges"])
    return TaskGraph(jobs=jobs, edges=edges, source=obj["source"], sink=obj["sink"],
                     p_server=ps, p_cloud=pc)


def dumps_instance(g: TaskGraph) -> str:
    return json.dumps(instance_to_obj(g), indent=2) + "\n"


def loads_instance(text: str) -> TaskGraph:
    return instance_from_obj(json.loads(text))


def save_instance(path, g: TaskGraph) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(g))


def load_instance(path) -> TaskGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_instance(fh.read())


def schedule_to_obj(s: Schedule, makespan: int, cost: int,
                    extra: Optional[dict] = None) -> dict:
    obj = {
        "assignment": [{"job": j, "loc": s.location[j], "completion": int(s.completion[j])}
                       for j in sorted(s.location)],
        "makespan": int(makespan),
        "cost": int(cost),
    }
    if extra:
        obj.update(extra)
    return obj


def schedule_from_obj(obj: dict) -> tuple:
    """Return (Schedule, makespan, cost) from a schedule file object."""
    location = {}
    completion = {}
    for rec in obj["assignment"]:
        if rec["loc"] not in (SERVER, CLOUD):
            raise ValueError("bad location %r" % (rec["loc"],))
        location[rec["job"]] = rec["loc"]
        completion[rec["job"]] = int(rec["completion"])
    return Schedule(location=location, completion=completion), int(obj["makespan"]), int(obj["cost"])


def dumps_schedule(s: Schedule, makespan: int, cost: int,
                   extra: Optional[dict] = None) -> str:
    return json.dumps(schedule_to_obj(s, makespan, cost, extra), indent=2) + "\n"


def loads_schedule(text: str) -> tuple:
    return schedule_from_obj(json.loads(text))


def save_schedule(path, s: Schedule, makespan: int, cost: int,
                  extra: Optional[dict] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_schedule(s, makespan, cost, extra))


def load_schedule(path) -> tuple:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_schedule(fh.read())
