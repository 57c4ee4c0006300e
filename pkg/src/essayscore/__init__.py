"""essayscore: linguistic feature extraction and linear scoring models
for pre-annotated learner essays."""

from .annotate import (  # noqa: F401
    CorefChain,
    EssayDoc,
    ErrorAnnotation,
    Mention,
    Sentence,
    Token,
    derive_stems,
    load_corpus,
    serialize,
    validate,
)
from .vector import (  # noqa: F401
    PROFILES,
    FeatureProfile,
    assemble,
    build_matrix,
    get_profile,
)
from .learn import (  # noqa: F401
    LinearModel,
    cross_validate,
    predict,
    relieff,
    subsample_balance,
    train_classifier,
    train_regressor,
)
from .evaluate import (  # noqa: F401
    EvalReport,
    classification_report,
    mae,
    partial_correlation,
    pearson,
    weight_report,
)

__version__ = "0.1.0"
