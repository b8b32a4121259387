"""Estimator-style adapters around the reconstruction and optimization
routines, for use in parameter sweeps and pipelines that expect the
fit/get_params protocol. The functional interfaces in tomography and
entanglement remain the primary API.
"""
from sklearn.base import BaseEstimator

from .entanglement import optimize_cglmp
from .tomography import mle_reconstruct, process_tomography


class MleStateEstimator(BaseEstimator):
    """Maximum-likelihood density-matrix estimator.

    fit(X) takes a CountTable; the estimate lands in rho_ along with
    loglik_, n_iter_ and converged_.
    """

    def fit(self, X, y=None):
        est = mle_reconstruct(X)
        self.rho_ = est.rho
        self.loglik_ = est.loglik
        self.n_iter_ = est.iterations
        self.converged_ = est.converged
        return self

    def score(self, X, y=None):
        # likelihood of held-out counts under the fitted state
        from .tomography import _poisson_loglik, born_probabilities

        p = born_probabilities(self.rho_, X.pair_mode)
        return _poisson_loglik(X.counts.astype(float), X.exposure, p)


class ProcessTomographyEstimator(BaseEstimator):
    """Process-matrix estimator: fit(X, y) with X the nine probe kets and
    y the nine measured output states; the result lands in chi_."""

    def fit(self, X, y):
        self.chi_ = process_tomography(X, y)
        return self


class CglmpOptimizer(BaseEstimator):
    """Measurement-setting optimizer for the qutrit Bell functional."""

    def __init__(self, restarts=20, seed=0, refine=False, threads=1):
        self.restarts = restarts
        self.seed = seed
        self.refine = refine
        self.threads = threads

    def fit(self, X, y=None):
        res = optimize_cglmp(X, restarts=self.restarts, seed=self.seed,
                             refine=self.refine, threads=self.threads)
        self.result_ = res
        self.S_ = res.S
        self.settings_ = res.settings
        return self
