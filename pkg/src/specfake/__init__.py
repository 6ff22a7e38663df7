"""Spectral detection of GAN-generated face images.

The pipeline converts an image to a 1D azimuthally averaged power
spectrum profile and feeds it to scratch-built classifiers: logistic
regression, an RBF-kernel SVM, and k-means.  See the subpackages:

    spectrum     image -> profile feature extraction
    classify     the three classifiers and evaluation
    dataset      manifests, splits, feature caches, band selection
    experiments  sweep / band-grid / stats / majority-vote protocols
    synth        seeded synthetic corpus generator
    cli          the `specfake` command-line tool
"""

from .classify import (
    KMeansModel,
    LabeledSample,
    LogisticModel,
    Metrics,
    SvmModel,
    SvmTrainConfig,
    evaluate,
    kmeans_classifier,
    kmeans_fit,
    lr_predict,
    lr_train,
    svm_predict,
    svm_train,
)
from .dataset import (
    DatasetManifest,
    FeatureCache,
    ManifestEntry,
    SplitSpec,
    band_select,
    load_cache,
    load_manifest,
    split,
    write_cache,
)
from .errors import (
    DataError,
    DegenerateImageError,
    DimensionError,
    ModelIntegrityError,
    ParameterError,
    SpecfakeError,
    TrainingError,
)
from .model_io import load_model, save_model
from .spectrum import ExtractionConfig, extract_features
from .synth import SynthConfig, generate_synthetic

__version__ = "0.1.0"
