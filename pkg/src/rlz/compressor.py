"""Estimator-style facade over the sampling/factorization/coding pipeline.

RlzCompressor follows the fit/transform protocol: fit samples the dictionary
from a collection and builds its suffix-array index, transform factorizes and
encodes documents (not necessarily the fitted ones), inverse_transform decodes
them back to bytes. Hyperparameters live in __init__ untouched, fitted state
in trailing-underscore attributes, so get_params/set_params/clone and
pipeline composition behave the way scikit-learn users expect.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin

from .codec import EncodedDocument, Scheme, decode_document, encode_document
from .dictionary import DEFAULT_SAMPLE_SIZE, sample_dictionary
from .errors import InvalidParams
from .factorize import DictionaryIndex, factorize_document, materialize

__all__ = ["RlzCompressor"]


def _as_docs(X) -> list[bytes]:
    docs = []
    for i, d in enumerate(X):
        if isinstance(d, str):
            raise InvalidParams(f"document {i} is str, not bytes; encode it first")
        docs.append(bytes(d))
    return docs


class RlzCompressor(BaseEstimator, TransformerMixin):
    """Compress byte documents against a dictionary sampled at fit time.

    Parameters
    ----------
    dict_size : int
        Dictionary budget in bytes. Required (no sensible default exists;
        it trades memory for ratio).
    sample_size : int, default 1024
        Length of each evenly spaced sample taken from the collection.
    scheme : str, default "zz"
        Stream coding, one of "uv", "uz", "zv", "zz".
    """

    def __init__(self, dict_size=None, sample_size=DEFAULT_SAMPLE_SIZE, scheme="zz"):
        self.dict_size = dict_size
        self.sample_size = sample_size
        self.scheme = scheme

    def fit(self, X, y=None):
        if self.dict_size is None:
            raise InvalidParams("dict_size must be set before fitting")
        self.scheme_ = Scheme.from_name(self.scheme)
        self.dictionary_ = sample_dictionary(_as_docs(X), self.dict_size, self.sample_size)
        self.index_ = DictionaryIndex.build(self.dictionary_)
        return self

    def transform(self, X) -> list[EncodedDocument]:
        self._check_fitted()
        return [encode_document(factorize_document(self.index_, d), self.scheme_) for d in _as_docs(X)]

    def inverse_transform(self, X) -> list[bytes]:
        self._check_fitted()
        return [materialize(self.dictionary_, decode_document(enc, self.scheme_)) for enc in X]

    def _check_fitted(self):
        if not hasattr(self, "index_"):
            raise InvalidParams("compressor is not fitted; call fit first")
