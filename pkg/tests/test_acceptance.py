"""Acceptance suite: one test per release criterion, at pinned tolerances.

Each test prints a PASS line with the criterion name when its assertions
hold, so a -v run doubles as the acceptance report.
"""

import itertools
import random
import time

import numpy as np
import pytest

from fastmap_explorer.cli import main
from fastmap_explorer.cluster_stats import cluster_diameter, weighted_aggregates
from fastmap_explorer.dataset import parse_data, parse_names, serialize_names, write_data
from fastmap_explorer.distance import (
    HAMMING,
    JACCARD,
    SCALAR_PRODUCT,
    SIMPLE_MATCHING,
    DistanceError,
    EuclideanPoints,
    MetricSpec,
    MixedRowDistance,
    binary_distance,
    minkowski,
)
from fastmap_explorer.extract import (
    CONTAINING,
    EQ,
    GE,
    GT,
    IS_NOT_NULL,
    IS_NULL,
    LE,
    LT,
    NEQ,
    NUMERIC,
    STARTING,
    STRING,
    ConditionSchema,
    Query,
    emit_sql,
    link_pair,
    make_condition,
    smart_link,
)
from fastmap_explorer.fastmap import ProjectionOptions, fastmap, project_dataset
from fastmap_explorer.preprocess import (
    column_stats_of,
    decimal_scale,
    min_max_normalize,
    z_normalize,
)
from fastmap_explorer.session import Session

from conftest import FIXTURES
from util_random import random_indexed

HEART = ["--data", str(FIXTURES / "heart.data"), "--names", str(FIXTURES / "heart.names")]


def report(name):
    print(f"PASS: {name}")


def all_pairs_worst_error(X, distance):
    n = X.shape[0]
    worst, dmax = 0.0, 0.0
    for i in range(n):
        original = distance.from_object(i)
        projected = np.sqrt(np.sum((X - X[i]) ** 2, axis=1))
        worst = max(worst, float(np.max(np.abs(projected - original))))
        dmax = max(dmax, float(np.max(original)))
    return worst, dmax


def test_planar_recovery_500_points():
    rng = np.random.default_rng(1234)
    points = rng.uniform(-10.0, 10.0, size=(500, 2))
    distance = EuclideanPoints(points)
    start = time.perf_counter()
    projection = fastmap(distance, ProjectionOptions(k=2, seed=42))
    elapsed = time.perf_counter() - start
    worst, dmax = all_pairs_worst_error(projection.X, distance)
    assert worst <= 1e-6 * dmax
    assert elapsed < 1.0, f"projection took {elapsed:.3f}s"

    # collinear inputs recover their 1D geometry exactly
    line = np.sort(rng.uniform(0.0, 50.0, size=200)).reshape(-1, 1)
    line_distance = EuclideanPoints(line)
    line_projection = fastmap(line_distance, ProjectionOptions(k=2, seed=7))
    worst, dmax = all_pairs_worst_error(line_projection.X, line_distance)
    assert worst <= 1e-6 * dmax
    # the second axis carries only rounding residue, nothing geometric
    assert np.max(np.abs(line_projection.X[:, 1])) <= 1e-6 * dmax
    report("planar recovery: 500 random 2D points and collinear 1D inputs, <=1e-6 relative")


def test_pivot_anchor_and_contraction_on_100_mixed_datasets():
    rng = random.Random(4321)
    for trial in range(100):
        indexed = random_indexed(rng, max_rows=200, max_cols=12)
        distance = MixedRowDistance(indexed)
        projection = fastmap(distance, ProjectionOptions(k=2, seed=trial))
        pos = {rid: i for i, rid in enumerate(projection.row_ids)}
        for axis in range(projection.converged_axes):
            a = pos[projection.pivot_ids[0, axis]]
            b = pos[projection.pivot_ids[1, axis]]
            assert abs(projection.X[a, axis]) <= 1e-9
            assert abs(projection.X[b, axis] - projection.pivot_distances[axis]) <= 1e-9
        n = len(distance)
        base = np.stack([distance.from_object(i) for i in range(n)])
        diff = projection.X[:, None, :] - projection.X[None, :, :]
        projected = np.sqrt(np.sum(diff**2, axis=2))
        assert np.all(projected <= base + 1e-9)
    report("pivot-anchor and contraction invariants on 100 random mixed-type datasets")


def test_distance_oracles():
    vectors = list(itertools.product((0, 1), repeat=4))
    for x in vectors:
        for y in vectors:
            q = sum(1 for a, b in zip(x, y) if a == 1 and b == 1)
            r = sum(1 for a, b in zip(x, y) if a == 1 and b == 0)
            s = sum(1 for a, b in zip(x, y) if a == 0 and b == 1)
            t = sum(1 for a, b in zip(x, y) if a == 0 and b == 0)
            assert binary_distance(x, y, SIMPLE_MATCHING) == (r + s) / 4
            assert binary_distance(x, y, HAMMING) == 4 - q - t
            assert binary_distance(x, y, SCALAR_PRODUCT) == 4 - q
            if q + r + s == 0:
                with pytest.raises(DistanceError):
                    binary_distance(x, y, JACCARD)
            else:
                assert binary_distance(x, y, JACCARD) == (r + s) / (q + r + s)

    rng = random.Random(99)
    for _ in range(1000):
        m = rng.randint(1, 8)
        x = [rng.uniform(-10, 10) for _ in range(m)]
        y = [rng.uniform(-10, 10) for _ in range(m)]
        for L in (1, 2, 3):
            direct = sum(abs(a - b) ** L for a, b in zip(x, y)) ** (1.0 / L)
            assert abs(minkowski(x, y, MetricSpec(L=L)) - direct) <= 1e-12
    report("distance oracles: 4 binary measures x 256 pairs exact; Minkowski L=1,2,3 within 1e-12")


def test_normalization_criteria():
    rng = random.Random(55)
    for _ in range(20):
        xs = [rng.uniform(-100, 100) for _ in range(rng.randint(2, 50))]
        stats = column_stats_of(xs)
        if stats.std_population == 0.0:
            continue
        zs, _ = z_normalize(xs, stats, "sigma")
        z_stats = column_stats_of(zs)
        assert abs(z_stats.mean) <= 1e-9
        assert abs(z_stats.std_population - 1.0) <= 1e-9

        mm, _ = min_max_normalize(xs, stats, -2.0, 3.0)
        assert mm[xs.index(stats.min)] == -2.0
        assert mm[xs.index(stats.max)] == 3.0

        scaled, params = decimal_scale(xs)
        peak = max(abs(v) for v in xs)
        assert max(abs(v) for v in scaled) < 1.0
        if params.j > 0:
            assert peak / 10 ** (params.j - 1) >= 1.0, "j is not minimal"
    report("normalization: z(sigma) mean/sigma within 1e-9, min-max endpoints exact, decimal j minimal")


def test_cluster_stats_criteria():
    rng = random.Random(66)
    for _ in range(30):
        n = rng.randint(2, 10)
        pts = np.array([[rng.uniform(-5, 5) for _ in range(3)] for _ in range(n)])
        distance = EuclideanPoints(pts)
        total = sum(
            distance.between(i, j) ** 2 for i in range(n) for j in range(n)
        )
        oracle = float(np.sqrt(total / (n * (n - 1))))
        assert abs(cluster_diameter(list(range(n)), distance) - oracle) <= 1e-12

    two_points = EuclideanPoints([[0.0], [5.0]])
    assert abs(cluster_diameter([0, 1], two_points) - 5.0) <= 1e-12

    agg = weighted_aggregates([2, 2], [3.0, 4.0])
    assert abs(agg.diameter - np.sqrt(12.5)) <= 1e-12
    report("cluster stats: all-pairs diameter oracle, 2-point diameter, weighted sqrt(12.5)")


def test_smart_linking_rule_table():
    schema = ConditionSchema({"age": NUMERIC, "diagnosis": STRING})

    def c(attr, op, operand=None):
        return make_condition(schema, attr, op, operand)

    table = [
        (c("diagnosis", EQ, "O12"), c("diagnosis", EQ, "E18"), "or"),
        (c("age", GE, 30), c("age", LE, 50), "and"),
        (c("age", GT, 30), c("age", LT, 50), "and"),
        (c("age", IS_NULL), c("age", EQ, 7), "or"),
        (c("age", IS_NOT_NULL), c("age", EQ, 7), "or"),
        (c("age", NEQ, 1), c("age", NEQ, 2), "and"),
        (c("age", GT, 50), c("age", LT, 30), "or"),
        (c("diagnosis", STARTING, "O"), c("diagnosis", STARTING, "E"), "or"),
        (c("age", LT, 10), c("age", LT, 20), "and"),
        (c("age", GT, 10), c("age", GT, 20), "and"),
        (c("diagnosis", CONTAINING, "a"), c("diagnosis", CONTAINING, "b"), "or"),
    ]
    for first, second, expected in table:
        assert link_pair(first, second) == expected, (first, second)

    # the two outcomes quoted in prose: age range -> AND, two diagnoses -> OR
    age_range = smart_link([c("age", GE, 30), c("age", LE, 50)])
    assert age_range.op == "and"
    two_diagnoses = smart_link([c("diagnosis", EQ, "O12"), c("diagnosis", EQ, "E18")])
    assert two_diagnoses.op == "or"
    report("smart linking: every heuristic rule row plus both quoted outcomes")


def test_sql_emission_token_for_token():
    def tokens(text):
        return text.split()

    schema = ConditionSchema({"возраст": NUMERIC})
    simple = Query(
        source="Пациенти",
        columns=["пациент"],
        expr=make_condition(schema, "возраст", GT, 20),
    )
    assert tokens(emit_sql(simple)) == tokens(
        "select пациент from Пациенти where возраст > 20"
    )

    ranged = Query(
        source="Пациенти",
        columns=["пациент"],
        expr=smart_link(
            [make_condition(schema, "возраст", GE, 30), make_condition(schema, "возраст", LE, 50)]
        ),
        sort=[("возраст", "desc")],
    )
    assert tokens(emit_sql(ranged)) == tokens(
        "select пациент from Пациенти "
        "where (возраст >= 30) and (возраст <= 50) "
        "order by возраст desc"
    )
    report("SQL emission matches the reference queries token for token")


def test_format_fidelity(animal_names_text, heart_names_text, heart_data_text):
    animal = parse_names(animal_names_text)
    assert len(animal.attributes) == 7
    assert parse_names(serialize_names(animal)) == animal

    heart_meta = parse_names(heart_names_text)
    assert heart_meta.p == 14
    dataset, errors = parse_data(heart_data_text, heart_meta)
    assert errors == []
    assert dataset.n_rows == 23

    again, errors = parse_data(write_data(dataset), dataset.metadata)
    assert errors == []
    assert again.rows == dataset.rows
    report("format fidelity: animal .names round-trips; 23 heart lines parse cleanly; cell-exact data round-trip")


def test_cli_determinism(tmp_path):
    args = [
        "project", *HEART,
        "--seed", "42", "--pivot-iters", "5", "--znorm", "sigma", "--impute", "drop",
    ]
    first = tmp_path / "a.tsv"
    second = tmp_path / "b.tsv"
    start = time.perf_counter()
    main([*args, "--out", str(first)])
    elapsed = time.perf_counter() - start
    main([*args, "--out", str(second)])
    assert first.read_bytes() == second.read_bytes()
    assert elapsed < 5.0, f"projection run took {elapsed:.2f}s"
    report("end-to-end CLI: deterministic coords.tsv on the heart fixture in <5s")


def test_crop_delete_algebra(heart_dataset):
    rng = random.Random(88)
    ids = list(heart_dataset.row_ids)
    checked = 0
    while checked < 100:
        subset = {rid for rid in ids if rng.random() < rng.uniform(0.1, 0.9)}
        if not subset or len(subset) == len(ids):
            continue
        deleter = Session(heart_dataset)
        deleter.selection = set(subset)
        after_delete = deleter.delete_selected()
        cropper = Session(heart_dataset)
        cropper.selection = set(ids) - subset
        after_crop = cropper.crop()
        assert set(after_delete.row_ids) == set(after_crop.row_ids)
        assert after_delete.row_ids == after_crop.row_ids
        checked += 1
    report("crop/delete algebra: delete(S) == crop(complement S) on 100 random selections")
