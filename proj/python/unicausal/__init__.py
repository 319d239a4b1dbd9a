"""Finite categories, presheaves, Kan extensions and discrete causal models."""

import json as _json

from ._unicausal import (
    Category,
    Dag,
    Error,
    Limits,
    Scm,
    SetFunctor,
    SizeGuardError,
    adjustment_estimate,
    alexandroff_opens,
    ate_exact,
    confounder_approximation,
    count_nats,
    crp_check,
    d_separated,
    do_marginal,
    ht_estimate,
    hom_presheaf,
    intervene,
    is_backdoor_set,
    is_confounded,
    joint,
    sample,
    uct_verified,
    yoneda_check,
)
from ._unicausal import run as _run


def run(*args):
    """Run a CLI command. Returns (exit code, parsed JSON report or raw text)."""
    code, out = _run([str(a) for a in args])
    try:
        return code, _json.loads(out)
    except ValueError:
        return code, out


def load(kind, data):
    """Build a Category, SetFunctor or Scm from a dict or a JSON string."""
    text = data if isinstance(data, str) else _json.dumps(data)
    return {"category": Category, "functor": SetFunctor, "scm": Scm}[kind].from_json(text)
