"""CSV output: result tables and node/edge dumps of a network."""

from __future__ import annotations

import csv
import io
import os
from pathlib import Path

import numpy as np

from .netmodel import NetworkGraph

__all__ = ["format_value", "table_csv", "write_table", "network_csvs", "export_network"]


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".9g")
    if value is None:
        return ""
    return str(value)


def _csv_text(header_comment: str | None, columns, rows) -> str:
    buf = io.StringIO()
    if header_comment:
        for line in header_comment.splitlines():
            buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def table_csv(table, comment: str | None = None) -> str:
    return _csv_text(comment, table.columns, table.rows)


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def write_table(table, path: os.PathLike | str, comment: str | None = None) -> Path:
    path = Path(path)
    _write(path, table_csv(table, comment))
    return path


def network_csvs(graph: NetworkGraph, route=None, comment: str | None = None) -> tuple[str, str]:
    """Text of ``nodes.csv`` and ``edges.csv``.

    With a route, ``nodes.csv`` gains ``hop_index``, ``secure`` and
    ``transmit_prob`` columns, left empty for nodes off the route.
    """
    deg_comm = graph.degree
    deg_det = graph.detection_degree
    node_cols = ["id", "x", "y", "deg_comm", "deg_detect"]
    on_route = {}
    if route is not None:
        node_cols += ["hop_index", "secure", "transmit_prob"]
        for k, node in enumerate(route.hops):
            last = k == len(route.hops) - 1
            on_route[node] = (
                k,
                None if last else route.secure[k],
                None if last else route.transmit_prob[k],
            )
    node_rows = []
    for i in range(graph.n):
        row = [i, graph.positions[i, 0], graph.positions[i, 1], deg_comm[i], deg_det[i]]
        if route is not None:
            row += list(on_route.get(i, (None, None, None)))
        node_rows.append(row)

    edge_rows = [(u, v, "detect") for u, v in graph.edges("detect")]
    edge_rows += [(u, v, "comm") for u, v in graph.edges("comm")]
    edge_rows.sort(key=lambda e: (e[0], e[1], e[2]))
    return (
        _csv_text(comment, node_cols, node_rows),
        _csv_text(comment, ["src", "dst", "kind"], edge_rows),
    )


def export_network(graph: NetworkGraph, out_dir, route=None, comment: str | None = None):
    out = Path(out_dir)
    nodes_text, edges_text = network_csvs(graph, route, comment)
    nodes_path, edges_path = out / "nodes.csv", out / "edges.csv"
    _write(nodes_path, nodes_text)
    _write(edges_path, edges_text)
    return nodes_path, edges_path
