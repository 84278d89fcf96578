"""x-vector speaker diarization: PLDA scoring, AHC, Bayesian-HMM clustering,
overlap post-processing and DER evaluation."""

from ._xdiar import *  # noqa: F401,F403
from ._xdiar import __doc__  # noqa: F401
