"""Hybrid music likeability engine.

Content side: a dense feedforward classifier trained from scratch on 13
per-track audio features. Collaborative side: Pearson-similarity user
neighborhoods over a sparse rating matrix. A convex hybrid score blends the
two. See the CLI (`tracklike --help`) for the batch pipeline.
"""

from .collab import (
    RatingMatrix,
    SimilarityScore,
    hybrid_score,
    load_ratings,
    pearson,
    pearson_similarity,
    predict_rating,
    top_k_neighbors,
)
from .data import (
    FEATURE_NAMES,
    CorrelationMatrix,
    Dataset,
    ScalerParams,
    TrackRecord,
    apply_scaler,
    class_conditional_summary,
    correlation_matrix,
    fit_scaler,
    inverse_scale,
    load_dataset,
    load_feature_records,
    save_dataset,
    split,
)
from .errors import TracklikeError
from .nn import (
    Batch,
    ConfusionCounts,
    DenseLayer,
    Matrix,
    Network,
    accuracy,
    activate,
    backward,
    bce_loss,
    classify,
    dense_forward,
    forward,
    matmul,
)
from .optim import AdamConfig, AdamState, adam_init, adam_step
from .train import (
    EpochMetrics,
    TrainConfig,
    TrainedModel,
    evaluate,
    load_model,
    predict,
    save_model,
    train,
)

__version__ = "0.1.0"
