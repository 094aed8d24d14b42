import pytest

import pgt_mining as pm


def test_strings_and_labels():
    assert pm.levenshtein("kitten", "sitting") == 3
    assert pm.normalized_distance("streeet", "street") == pytest.approx(1 / 7)
    assert pm.canon(" Baker  ") == "baker"
    labels = pm.expand_kgrams([["Sherlock", "Holmes"], ["221B", "Baker", "Street"]], 3)
    assert len(labels) == 9
    assert "221B Baker Street" in labels


def test_geometry():
    box = pm.OrientedBox(100, 50, 40, 24, 0)
    assert pm.iou(box, box) == pytest.approx(1.0)
    assert pm.within_image(box, 200, 100)
    grown = pm.apply_offset(box, 0, 2, 1, 5.0, 6.0)
    assert grown.w == pytest.approx(55)
    with pytest.raises(ValueError):
        pm.OrientedBox(0, 0, 0, 1, 0)


def test_search_and_acceptance():
    assert len(pm.candidate_offsets("left")) == 342
    assert pm.is_pgt("street", "street")[0] == "exact"
    assert pm.is_pgt("streeet", "street")[0] == "close"
    assert pm.is_pgt("cat", "car")[0] == "reject"


def test_pgt_gen_widens_truncated_detection():
    scene = pm.SceneSpec("img", 400, 200, [pm.TextInstance("cartoon", pm.OrientedBox(200, 100, 70, 20, 0), 10.0)])
    backend = pm.SimulatedBackend([scene], pm.NoiseModel(), 1)
    det = pm.Detection(pm.OrientedBox(180, 100, 30, 20, 0), "car", 1.0)
    records = pm.pgt_gen(backend, "img", [det], [["cartoon"]], 1)
    assert len(records) == 1
    assert records[0].label == "cartoon"
    assert records[0].box.w > 30
    assert backend.recognitions > 0


def test_detector_post_and_metrics():
    width, height = 40, 20
    tr = [0.0] * (width * height)
    tcl = [0.0] * (width * height)
    for x in range(5, 31):
        tr[10 * width + x] = tcl[10 * width + x] = 0.9
    boxes = pm.boxes_from_maps(width, height, tr, tcl, [3.0] * (width * height))
    assert len(boxes) == 1
    assert boxes[0].w == pytest.approx(31)
    assert pm.word_accuracy([("cafe", "cafe"), ("x", "y")]) == pytest.approx(50.0)
    assert pm.ned_score([("abc", "xyz")]) == pytest.approx(100.0)
