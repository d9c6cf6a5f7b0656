"""Session-oriented HTTP/JSON service over the engine.

One process holds many independent sessions; each serializes its mutations
behind a lock while reads work on immutable snapshots. Projections beyond
the configured object cap are refused outright with an explicit error
instead of hanging the server on an hours-long run.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from .cluster_stats import ClusterStatsError, attribute_summary, before_after_report
from .distance import DistanceError
from .dataset import (
    CONTINUOUS,
    MISSING,
    AttributeMeta,
    Dataset,
    DatasetError,
    Metadata,
    NamesParseError,
    parse_data,
    parse_names,
)
from .extract import EXPORT_FORMATS, ExtractError, export
from .fastmap import FastMapError, ProjectionOptions
from .preprocess import PreprocessError
from .session import ProjectRequest, Session, SessionError, object_details

DEFAULT_MAX_OBJECTS = 50_000


class _Store:
    def __init__(self):
        self.sessions: dict[str, Session] = {}
        self.locks: dict[str, threading.RLock] = {}
        self._registry_lock = threading.Lock()

    def add(self, session: Session):
        with self._registry_lock:
            self.sessions[session.id] = session
            self.locks[session.id] = threading.RLock()

    def get(self, session_id: str) -> tuple[Session, threading.RLock]:
        with self._registry_lock:
            if session_id not in self.sessions:
                raise HTTPException(404, f"no session {session_id!r}")
            return self.sessions[session_id], self.locks[session_id]


def _cell_to_json(cell):
    if cell is MISSING:
        return None
    return cell


def _cell_from_json(value, attr: AttributeMeta):
    if value is None:
        return MISSING
    if attr.kind == CONTINUOUS:
        try:
            return float(value)
        except (TypeError, ValueError):
            raise HTTPException(422, f"attribute {attr.name!r}: expected a number, got {value!r}")
    token = str(value)
    if attr.domain and token not in attr.domain:
        raise HTTPException(422, f"attribute {attr.name!r}: token {token!r} not in domain")
    return token


def _metadata_json(m: Metadata):
    return {
        "separator": m.separator,
        "missing_value": m.missing_value,
        "description": m.description,
        "class_attribute": m.class_attribute,
        "attributes": [
            {
                "name": a.name,
                "kind": a.kind,
                "domain": a.domain,
                "skip": a.skip,
                "description": a.description,
                "missing_value_override": a.missing_value_override,
            }
            for a in m.attributes
        ],
    }


def _metadata_from_json(payload) -> Metadata:
    attributes = [
        AttributeMeta(
            name=a["name"],
            kind=a.get("kind", "nominal"),
            domain=list(a.get("domain", [])),
            skip=bool(a.get("skip", False)),
            description=a.get("description", ""),
            missing_value_override=a.get("missing_value_override"),
        )
        for a in payload["attributes"]
    ]
    return Metadata(
        attributes=attributes,
        separator=payload.get("separator", ","),
        missing_value=payload.get("missing_value", "?"),
        description=payload.get("description", ""),
        class_attribute=payload.get("class_attribute"),
    )


def _projection_json(session: Session):
    projection = session.fresh_projection()
    meta = session.dataset.metadata
    classes = None
    if meta.class_attribute is not None:
        col = meta.attr_index(meta.class_attribute)
        by_id = {rid: row[col] for rid, row in zip(session.dataset.row_ids, session.dataset.rows)}
        classes = [
            None if by_id[rid] is MISSING else by_id[rid] for rid in projection.row_ids
        ]
    return {
        "row_ids": list(projection.row_ids),
        "coordinates": projection.X.tolist(),
        "pivot_ids": projection.pivot_ids.tolist(),
        "converged_axes": projection.converged_axes,
        "classes": classes,
        "selected": sorted(session.selection),
        "options": {
            "k": projection.options.k,
            "pivot_iterations": projection.options.pivot_iterations,
            "seed": projection.options.seed,
            "epsilon": projection.options.epsilon,
        },
    }


def create_app(data_dir: str | Path | None = None, max_objects: int = DEFAULT_MAX_OBJECTS) -> FastAPI:
    app = FastAPI(title="fastmap-explorer")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = _Store()
    app.state.store = store
    app.state.data_dir = Path(data_dir) if data_dir else None
    app.state.max_objects = max_objects

    def read_ref(payload, text_key, path_key):
        if payload.get(text_key) is not None:
            return payload[text_key]
        ref = payload.get(path_key)
        if ref is None:
            raise HTTPException(422, f"provide {text_key} or {path_key}")
        if app.state.data_dir is None:
            raise HTTPException(400, "service started without --data-dir; send inline text")
        path = (app.state.data_dir / ref).resolve()
        if app.state.data_dir.resolve() not in path.parents and path != app.state.data_dir.resolve():
            raise HTTPException(400, "path escapes the data directory")
        if not path.is_file():
            raise HTTPException(404, f"no such file {ref!r}")
        return path.read_text()

    @app.post("/sessions")
    def create_session(payload: dict = Body(...)):
        names_text = read_ref(payload, "names_text", "names_path")
        data_text = read_ref(payload, "data_text", "data_path")
        try:
            meta = parse_names(names_text)
            dataset, errors = parse_data(data_text, meta)
        except (NamesParseError, DatasetError) as exc:
            raise HTTPException(422, str(exc))
        session = Session(dataset)
        store.add(session)
        return {
            "id": session.id,
            "rows": dataset.n_rows,
            "row_errors": [{"line": e.line, "message": e.message} for e in errors],
            "metadata": _metadata_json(dataset.metadata),
        }

    @app.get("/sessions/{session_id}/metadata")
    def get_metadata(session_id: str):
        session, _ = store.get(session_id)
        return _metadata_json(session.dataset.metadata)

    @app.patch("/sessions/{session_id}/metadata")
    def patch_metadata(session_id: str, payload: dict = Body(...)):
        session, lock = store.get(session_id)
        with lock:
            current = _metadata_json(session.dataset.metadata)
            current.update(payload)
            meta = _metadata_from_json(current)
            dataset = Dataset(meta, session.dataset.rows, session.dataset.row_ids)
            try:
                session.replace_dataset(dataset)
            except DatasetError as exc:
                raise HTTPException(422, str(exc))
            return _metadata_json(meta)

    @app.get("/sessions/{session_id}/rows")
    def get_rows(session_id: str, offset: int = 0, limit: int = 100):
        session, _ = store.get(session_id)
        d = session.dataset
        window = list(zip(d.row_ids, d.rows))[offset : offset + limit]
        return {
            "total": d.n_rows,
            "offset": offset,
            "rows": [
                {"row_id": rid, "cells": [_cell_to_json(c) for c in row]}
                for rid, row in window
            ],
        }

    @app.put("/sessions/{session_id}/rows/{row_id}")
    def put_row(session_id: str, row_id: int, payload: dict = Body(...)):
        session, lock = store.get(session_id)
        with lock:
            d = session.dataset
            if row_id not in d.row_ids:
                raise HTTPException(404, f"no row {row_id}")
            cells_json = payload.get("cells")
            if not isinstance(cells_json, list) or len(cells_json) != d.metadata.p:
                raise HTTPException(422, f"expected {d.metadata.p} cells")
            cells = [_cell_from_json(v, a) for v, a in zip(cells_json, d.metadata.attributes)]
            rows = [
                cells if rid == row_id else row for rid, row in zip(d.row_ids, d.rows)
            ]
            try:
                session.replace_dataset(Dataset(d.metadata, rows, list(d.row_ids)))
            except DatasetError as exc:
                raise HTTPException(422, str(exc))
            return {"row_id": row_id, "cells": cells_json}

    @app.delete("/sessions/{session_id}/rows/{row_id}")
    def delete_row(session_id: str, row_id: int):
        session, lock = store.get(session_id)
        with lock:
            d = session.dataset
            if row_id not in d.row_ids:
                raise HTTPException(404, f"no row {row_id}")
            keep = [rid for rid in d.row_ids if rid != row_id]
            session.replace_dataset(d.subset(keep))
            return {"rows": session.dataset.n_rows}

    @app.post("/sessions/{session_id}/project")
    def project(session_id: str, payload: dict = Body(default={})):
        session, lock = store.get(session_id)
        with lock:
            if session.dataset.n_rows > app.state.max_objects:
                raise HTTPException(
                    413,
                    f"dataset too large to project ({session.dataset.n_rows} rows; "
                    f"cap {app.state.max_objects})",
                )
            options = ProjectionOptions(
                k=int(payload.get("k", 2)),
                pivot_iterations=int(payload.get("pivot_iterations", 5)),
                seed=int(payload.get("seed", 0)),
                epsilon=float(payload.get("epsilon", 1e-12)),
            )
            request = ProjectRequest(
                options=options,
                znorm=payload.get("znorm", "none"),
                impute=payload.get("impute"),
                impute_constant=payload.get("impute_constant"),
            )
            try:
                session.project(request)
            except (FastMapError, PreprocessError, SessionError, DatasetError) as exc:
                raise HTTPException(409, str(exc))
            return _projection_json(session)

    @app.get("/sessions/{session_id}/projection")
    def get_projection(session_id: str):
        session, _ = store.get(session_id)
        try:
            return _projection_json(session)
        except SessionError as exc:
            raise HTTPException(409, str(exc))

    @app.post("/sessions/{session_id}/selection")
    def selection(session_id: str, payload: dict = Body(...)):
        session, lock = store.get(session_id)
        with lock:
            polygons = payload.get("polygons", [])
            mode = payload.get("mode", "replace")
            try:
                selected = session.apply_selection(
                    [[(float(x), float(y)) for x, y in poly] for poly in polygons],
                    mode=mode,
                )
            except SessionError as exc:
                raise HTTPException(409, str(exc))
            return {"selected": sorted(selected)}

    @app.post("/sessions/{session_id}/crop")
    def crop(session_id: str):
        session, lock = store.get(session_id)
        with lock:
            try:
                dataset = session.crop()
            except SessionError as exc:
                raise HTTPException(409, str(exc))
            return {"rows": dataset.n_rows, "row_ids": list(dataset.row_ids)}

    @app.post("/sessions/{session_id}/delete-selected")
    def delete_selected(session_id: str):
        session, lock = store.get(session_id)
        with lock:
            try:
                dataset = session.delete_selected()
            except SessionError as exc:
                raise HTTPException(409, str(exc))
            return {"rows": dataset.n_rows, "row_ids": list(dataset.row_ids)}

    @app.get("/sessions/{session_id}/object/{row_id}")
    def get_object(session_id: str, row_id: int):
        session, _ = store.get(session_id)
        if row_id not in session.dataset.row_ids:
            raise HTTPException(404, f"no row {row_id}")
        pairs = object_details(session.dataset, row_id)
        return {
            "row_id": row_id,
            "values": [{"attribute": name, "value": value} for name, value in pairs],
        }

    @app.get("/sessions/{session_id}/stats")
    def stats(session_id: str):
        session, _ = store.get(session_id)
        d = session.dataset
        summaries = [
            attribute_summary(d, a.name).to_dict()
            for a in d.metadata.attributes
            if not a.skip
        ]
        projection = None
        if session.projection is not None:
            try:
                projection = session.fresh_projection()
            except SessionError as exc:
                raise HTTPException(409, str(exc))
        clusters = None
        note = None
        if d.metadata.class_attribute is None:
            note = "no class attribute; cluster diameters unavailable"
        elif d.n_rows > 0:
            znorm = "none"
            if projection is not None and session.last_project_request is not None:
                znorm = session.last_project_request.znorm
            try:
                clusters = before_after_report(session.indexed(znorm), projection).to_dict()
            except (ClusterStatsError, DistanceError) as exc:
                note = str(exc)
        return {"attributes": summaries, "clusters": clusters, "note": note}

    @app.post("/sessions/{session_id}/export")
    def export_endpoint(session_id: str, payload: dict = Body(...)):
        session, _ = store.get(session_id)
        fmt = payload.get("format")
        if fmt not in EXPORT_FORMATS:
            raise HTTPException(422, f"format must be one of {sorted(EXPORT_FORMATS)}")
        try:
            files = export(session.dataset, fmt)
        except (ExtractError, DatasetError) as exc:
            raise HTTPException(409, str(exc))
        return {"format": fmt, "files": files}

    @app.get("/sessions/{session_id}/options")
    def get_options(session_id: str):
        session, _ = store.get(session_id)
        return {"point_radius": session.hints.point_radius, "alpha": session.hints.alpha}

    @app.patch("/sessions/{session_id}/options")
    def patch_options(session_id: str, payload: dict = Body(...)):
        session, lock = store.get(session_id)
        with lock:
            if "point_radius" in payload:
                session.hints.point_radius = int(payload["point_radius"])
            if "alpha" in payload:
                session.hints.alpha = float(payload["alpha"])
            try:
                session.hints.validate()
            except SessionError as exc:
                raise HTTPException(422, str(exc))
            return {"point_radius": session.hints.point_radius, "alpha": session.hints.alpha}

    return app
