"""Pseudo ground truth mining from weakly annotated images."""

from ._pgt import (  # noqa: F401
    CONFIDENCE_PRESETS,
    AcceptThresholds,
    BackendError,
    DegenerateBoxError,
    Detection,
    NoiseModel,
    OrientedBox,
    PgtRecord,
    RecognitionBackend,
    SceneSpec,
    SearchConstants,
    SimulatedBackend,
    TextInstance,
    apply_offset,
    assign_weak,
    boxes_from_maps,
    candidate_offsets,
    canon,
    confidence_filter,
    exact_match_baseline,
    expand_kgrams,
    find_optimal_box,
    fit_box,
    iou,
    is_pgt,
    levenshtein,
    ned_score,
    normalized_distance,
    overlaps,
    pgt_gen,
    within_image,
    word_accuracy,
)

__version__ = "0.1.0"
