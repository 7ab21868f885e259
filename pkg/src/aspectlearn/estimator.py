"""scikit-learn style wrapper around the learning pipeline."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .evaluators import infer_params, make_evaluator
from .learn import CONSISTENT, RESOURCE_EXHAUSTED, Problem, learn
from .nfta import ResourceExhausted
from .term import RegularTreeGrammar, parse_grammar
from .validation import check_labels, check_structures, parse_all


class Unrealizable(ValueError):
    """No expression in the grammar separates the training examples."""


class ExpressionLearner(ClassifierMixin, BaseEstimator):
    """Learn a smallest expression that is true on the positive structures
    and false on the negative ones.

    ``grammar`` is grammar text; when omitted every term over the language
    alphabet is allowed.  ``language_params`` is inferred from the training
    structures when omitted (props, letters or k).
    """

    def __init__(self, language="modal", grammar=None, language_params=None, max_states=None, timeout=None):
        self.language = language
        self.grammar = grammar
        self.language_params = language_params
        self.max_states = max_states
        self.timeout = timeout

    def _evaluator(self, X):
        params = self.language_params
        if params is None:
            raw = [x for x in X if isinstance(x, dict)]
            params = infer_params(self.language, raw, "")
        return make_evaluator(self.language, params), params

    def fit(self, X, y):
        items = check_structures(X)
        labels = check_labels(y, len(items))
        ev, params = self._evaluator(items)
        structures = parse_all(ev, items)
        if self.grammar is None:
            g = RegularTreeGrammar.universal(ev.alphabet)
        else:
            g = parse_grammar(self.grammar, ev.alphabet)
        pos = [m for m, lab in zip(structures, labels) if lab]
        neg = [m for m, lab in zip(structures, labels) if not lab]
        problem = Problem(self.language, pos, neg, g, params, ev)
        sol = learn(problem, max_states=self.max_states, timeout=self.timeout)
        if sol.verdict == RESOURCE_EXHAUSTED:
            raise ResourceExhausted(sol.stats.get("reason", "resource limit reached"), sol.stats)
        if sol.verdict != CONSISTENT:
            raise Unrealizable("no expression in the grammar is consistent with the examples")
        self.evaluator_ = ev
        self.expression_ = sol.term
        self.expression_size_ = sol.size
        self.solution_ = sol
        self.classes_ = np.array([False, True])
        return self

    def predict(self, X):
        check_is_fitted(self, "expression_")
        structures = parse_all(self.evaluator_, check_structures(X))
        return np.array([self.evaluator_.reference(m, self.expression_) for m in structures], dtype=bool)
