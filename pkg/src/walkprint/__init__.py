"""Graph fingerprints from random-walk multi-hop assortativities.

The toolkit turns each graph into a fixed-order numeric fingerprint built
from autocovariances of node attributes along a stationary random walk
(structural attributes, spectral attributes, and categorical metadata),
evaluates dataset classification with a seeded random forest under a
repeated cross-validation protocol, and compares accuracy tables across
algorithms with Friedman/Nemenyi rank statistics and significance diagrams.
"""

__version__ = "0.1.0"

from .datasets import (
    Dataset,
    DatasetSummary,
    load_json_dataset,
    load_tu_dataset,
    save_json_dataset,
    summarize,
)
from .fingerprint import (
    FeatureTable,
    FeatureVector,
    FingerprintConfig,
    feature_csv,
    fingerprint,
    fingerprint_dataset,
)
from .graphs import DegreeProfile, Graph, build_graph, degree_profile
from .learn import (
    EvaluationReport,
    RandomForestModel,
    evaluate_protocol,
    forest_from_dict,
    forest_to_dict,
    predict,
    train_forest,
)
from .spectral import EigenConvergenceError, SpectralBasis, dominant_left_eigenvectors
from .stats import (
    AccuracyTable,
    FriedmanResult,
    NemenyiResult,
    average_ranks,
    bundled_accuracy_table,
    chi_square_sf,
    friedman_test,
    load_accuracy_csv,
    nemenyi_cd,
    significance_diagram,
)
from .walks import (
    AssortativityValue,
    CategoricalEncoding,
    WalkModel,
    categorical_assortativity,
    encoding_from_labels,
    hop_vector,
    mc_assortativity,
    node_id_assortativity,
    scalar_assortativity,
    walk_model,
)

__all__ = [
    "AccuracyTable",
    "AssortativityValue",
    "CategoricalEncoding",
    "Dataset",
    "DatasetSummary",
    "DegreeProfile",
    "EigenConvergenceError",
    "EvaluationReport",
    "FeatureTable",
    "FeatureVector",
    "FingerprintConfig",
    "FriedmanResult",
    "Graph",
    "NemenyiResult",
    "RandomForestModel",
    "SpectralBasis",
    "WalkModel",
    "average_ranks",
    "build_graph",
    "bundled_accuracy_table",
    "categorical_assortativity",
    "chi_square_sf",
    "degree_profile",
    "dominant_left_eigenvectors",
    "encoding_from_labels",
    "evaluate_protocol",
    "feature_csv",
    "fingerprint",
    "fingerprint_dataset",
    "forest_from_dict",
    "forest_to_dict",
    "friedman_test",
    "hop_vector",
    "load_accuracy_csv",
    "load_json_dataset",
    "load_tu_dataset",
    "mc_assortativity",
    "nemenyi_cd",
    "node_id_assortativity",
    "predict",
    "save_json_dataset",
    "scalar_assortativity",
    "significance_diagram",
    "summarize",
    "train_forest",
    "walk_model",
]
