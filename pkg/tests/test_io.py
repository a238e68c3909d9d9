import string

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from PIL import Image

from seedscope.errors import (CorruptFile, DigestMismatch, FeatureSchemaMismatch,
                              MalformedArff, MissingClassAttribute, UnsupportedFormat,
                              VersionUnsupported)
from seedscope.features import ALL_NAMES
from seedscope.io import (ingest_directory, load_image, load_model, read_arff, read_csv,
                          save_model, save_png, write_arff, write_csv)
from seedscope.io.archive import MAGIC, dumps_model, loads_model
from seedscope.ml import KINDS, LabeledDataset, train
from seedscope.ml.dataset import UNLABELED
from seedscope.synthetic import blob_dataset, ellipse_mask, equal_luma_colour, render_scan


def three_seed_scan(path, hue, seed):
    rng = np.random.default_rng(seed)
    shapes = [ellipse_mask(80, 150, cx, 40, 14, 9, rng.uniform(0, 180)) for cx in (25, 75, 125)]
    seeds = [(m, equal_luma_colour(hue), 0.0) for m in shapes]
    save_png(path, render_scan(seeds, (80, 150), rng=rng))


@pytest.fixture
def tree(tmp_path):
    root = tmp_path / "scans"
    for c, hue in (("alpha", 0.05), ("beta", 0.3)):
        (root / c).mkdir(parents=True)
        for i in range(2):
            three_seed_scan(root / c / f"img{i}.png", hue, i)
    return root


# ---- images ----

def test_png_exact_pixels(tmp_path):
    px = np.array([[[1, 2, 3], [250, 128, 0]], [[9, 9, 9], [0, 255, 17]]], np.uint8)
    Image.fromarray(px).save(tmp_path / "a.png")
    assert np.array_equal(load_image(tmp_path / "a.png").pixels, px)


def test_grayscale_and_16bit(tmp_path):
    g = np.array([[0, 100], [200, 255]], np.uint8)
    Image.fromarray(g).save(tmp_path / "g.png")
    px = load_image(tmp_path / "g.png").pixels
    assert (px[..., 0] == px[..., 1]).all() and (px[..., 1] == px[..., 2]).all()
    assert np.array_equal(px[..., 0], g)
    deep = (np.array([[0, 1000], [40000, 65535]], np.uint16))
    Image.fromarray(deep).save(tmp_path / "d.png")
    px = load_image(tmp_path / "d.png").pixels
    assert px[..., 0].tolist() == [[0, 3], [156, 255]]


def test_jpeg_decodes(tmp_path):
    Image.fromarray(np.full((8, 8, 3), 120, np.uint8)).save(tmp_path / "x.jpg", quality=95)
    assert load_image(tmp_path / "x.jpg").shape == (8, 8)


def test_truncated_and_unsupported(tmp_path):
    Image.fromarray(np.zeros((40, 40, 3), np.uint8)).save(tmp_path / "t.png")
    data = (tmp_path / "t.png").read_bytes()
    (tmp_path / "t.png").write_bytes(data[: len(data) // 2])
    with pytest.raises(CorruptFile):
        load_image(tmp_path / "t.png")
    Image.fromarray(np.zeros((4, 4, 3), np.uint8)).save(tmp_path / "b.bmp")
    with pytest.raises(UnsupportedFormat):
        load_image(tmp_path / "b.bmp")
    (tmp_path / "junk.png").write_bytes(b"not an image")
    with pytest.raises((CorruptFile, UnsupportedFormat)):
        load_image(tmp_path / "junk.png")


# ---- ARFF / CSV ----

name_chars = string.ascii_letters + string.digits + " _-'%,{}\\\""
names = st.text(name_chars, min_size=1, max_size=8).filter(lambda s: s.strip() == s)
floats = st.floats(allow_nan=False, allow_infinity=False, width=64)


@st.composite
def datasets(draw):
    d = draw(st.integers(1, 6))
    J = draw(st.integers(2, 4))
    n = draw(st.integers(0, 8))
    feats = draw(st.lists(names, min_size=d, max_size=d, unique=True))
    classes = draw(st.lists(names.filter(lambda s: s != "?"), min_size=J, max_size=J, unique=True))
    X = draw(st.lists(st.lists(floats, min_size=d, max_size=d), min_size=n, max_size=n))
    y = draw(st.lists(st.integers(UNLABELED, J - 1), min_size=n, max_size=n))
    return LabeledDataset(feats, np.array(X, float).reshape(n, d), y, classes)


@given(datasets())
def test_arff_round_trip_hypothesis(tmp_path_factory, ds):
    path = tmp_path_factory.mktemp("arff") / "d.arff"
    write_arff(ds, path)
    assert read_arff(path) == ds


def test_arff_round_trip_100_fuzzed(tmp_path):
    rng = np.random.default_rng(5)
    for i in range(100):
        n, d, J = int(rng.integers(1, 30)), int(rng.integers(1, 70)), int(rng.integers(2, 6))
        X = rng.standard_normal((n, d)) * 10.0 ** rng.integers(-300, 300, size=(1, d))
        ds = LabeledDataset([f"feat {j}" for j in range(d)], X, rng.integers(0, J, n),
                            [f"class-{c}" for c in range(J)])
        write_arff(ds, tmp_path / "r.arff")
        assert read_arff(tmp_path / "r.arff") == ds
        write_csv(ds, tmp_path / "r.csv")
        assert read_csv(tmp_path / "r.csv", ds.class_names) == ds


ARFF_TEXT = """% a comment
@relation demo

@attribute width numeric
@ATTRIBUTE 'seed length' REAL
% another comment
@Attribute class {'Vicia faba',Pisum}

@data
1.5,2,'Vicia faba'
3,4e-3,Pisum
"""


def test_arff_comments_case_and_crlf(tmp_path):
    (tmp_path / "lf.arff").write_text(ARFF_TEXT)
    (tmp_path / "crlf.arff").write_bytes(ARFF_TEXT.replace("\n", "\r\n").encode())
    a, b = read_arff(tmp_path / "lf.arff"), read_arff(tmp_path / "crlf.arff")
    assert a == b
    assert a.feature_names == ("width", "seed length")
    assert a.class_names == ("Vicia faba", "Pisum")
    assert a.X.tolist() == [[1.5, 2.0], [3.0, 0.004]] and a.y.tolist() == [0, 1]


def test_arff_errors(tmp_path):
    bad = ARFF_TEXT.replace("3,4e-3,Pisum", "3,Pisum")
    (tmp_path / "bad.arff").write_text(bad)
    with pytest.raises(MalformedArff, match="line 11"):
        read_arff(tmp_path / "bad.arff")
    no_class = ARFF_TEXT.replace("@Attribute class {'Vicia faba',Pisum}", "@attribute c numeric")
    (tmp_path / "nc.arff").write_text(no_class.replace(",'Vicia faba'", ",1").replace(",Pisum", ",2"))
    with pytest.raises(MissingClassAttribute):
        read_arff(tmp_path / "nc.arff")
    sparse = ARFF_TEXT.replace("3,4e-3,Pisum", "{0 3, 2 Pisum}")
    (tmp_path / "sp.arff").write_text(sparse)
    with pytest.raises(MalformedArff, match="sparse"):
        read_arff(tmp_path / "sp.arff")
    (tmp_path / "str.arff").write_text(ARFF_TEXT.replace("width numeric", "width string"))
    with pytest.raises(MalformedArff):
        read_arff(tmp_path / "str.arff")


# ---- model archive ----

def fitted(kind, d=8):
    ds = blob_dataset(80, 3, d, 3.0, 1)
    return train(kind, ds, {"trees": 10} if kind == "random_forest" else None, seed=2), ds


@pytest.mark.parametrize("kind", KINDS)
def test_archive_round_trip(kind, tmp_path):
    model, ds = fitted(kind)
    save_model(model, tmp_path / "m.bin")
    back = load_model(tmp_path / "m.bin", ds.feature_names).model
    probe = np.random.default_rng(0).normal(scale=3, size=(100, ds.n_features))
    assert np.array_equal(back.predict_scores(probe), model.predict_scores(probe))
    assert np.array_equal(back.predict(probe), model.predict(probe))
    assert back.class_names == model.class_names and back.hyperparameters == model.hyperparameters
    assert dumps_model(back) == dumps_model(model)


def test_archive_corruption(tmp_path):
    model, _ = fitted("naive_bayes")
    blob = bytearray(dumps_model(model))
    assert blob.startswith(MAGIC)
    blob[-40] ^= 0x01
    with pytest.raises(DigestMismatch):
        loads_model(bytes(blob))
    good = dumps_model(model)
    with pytest.raises(VersionUnsupported):
        loads_model(good[:8] + (99).to_bytes(4, "little") + good[12:])
    with pytest.raises(CorruptFile):
        loads_model(b"garbage")


def test_archive_schema_check(tmp_path):
    model, _ = fitted("knn", d=64)
    save_model(model, tmp_path / "m.bin")
    archive = load_model(tmp_path / "m.bin")
    archive.check_schema(ALL_NAMES)
    with pytest.raises(FeatureSchemaMismatch):
        archive.check_schema(ALL_NAMES[:63])
    with pytest.raises(FeatureSchemaMismatch):
        load_model(tmp_path / "m.bin", ALL_NAMES[:63])


# ---- ingestion ----

def test_ingest_counts(tree):
    result = ingest_directory(tree)
    ds = result.dataset
    assert (ds.n_samples, ds.n_features, ds.n_classes) == (12, 64, 2)
    assert ds.class_names == ("alpha", "beta")
    assert result.errors == []
    assert result.sources[:3] == [("alpha/img0.png", 1), ("alpha/img0.png", 2),
                                  ("alpha/img0.png", 3)]


def test_ingest_partial_failure(tmp_path):
    root = tmp_path / "scans"
    (root / "a").mkdir(parents=True)
    (root / "b").mkdir()
    for i in range(5):
        three_seed_scan(root / "a" / f"s{i}.png", 0.05, i)
        three_seed_scan(root / "b" / f"s{i}.png", 0.3, i)
    (root / "b" / "s3.png").write_bytes(b"\x89PNG broken")
    result = ingest_directory(root)
    assert len(result.errors) == 1 and result.errors[0][0] == "b/s3.png"
    assert result.dataset.n_samples == 9 * 3


def test_ingest_is_deterministic(tree, tmp_path):
    a = ingest_directory(tree, "color")
    b = ingest_directory(tree, "color", jobs=2)
    write_csv(a.dataset, tmp_path / "a.csv")
    write_csv(b.dataset, tmp_path / "b.csv")
    write_csv(ingest_directory(tree, "color").dataset, tmp_path / "c.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "c.csv").read_bytes()
    assert a.dataset.n_features == 16


def test_ingest_sidecar_labels(tmp_path):
    root = tmp_path / "flat"
    root.mkdir()
    three_seed_scan(root / "x.png", 0.05, 0)
    three_seed_scan(root / "y.png", 0.3, 1)
    (root / "labels.csv").write_text("file,label\nx.png,red\ny.png,green\n")
    ds = ingest_directory(root, "morph").dataset
    assert ds.class_names == ("green", "red") and ds.n_samples == 6 and ds.n_features == 32
