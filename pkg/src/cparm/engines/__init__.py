"""Decision engines consuming the selected feature subset."""

from .encoding import ColumnSpec, FeatureEncoder, FeatureMatrix, encode
from .naive_bayes import NBModel, nb_fit, nb_predict
from .logistic import LRHyperParams, LRModel, lr_fit, lr_predict, nll_gradient, nll_loss
from .em import EMConfig, EMModel, em_fit, em_predict, map_clusters, responsibilities

__all__ = [
    "ColumnSpec",
    "FeatureEncoder",
    "FeatureMatrix",
    "encode",
    "NBModel",
    "nb_fit",
    "nb_predict",
    "LRHyperParams",
    "LRModel",
    "lr_fit",
    "lr_predict",
    "nll_gradient",
    "nll_loss",
    "EMConfig",
    "EMModel",
    "em_fit",
    "em_predict",
    "map_clusters",
    "responsibilities",
]
