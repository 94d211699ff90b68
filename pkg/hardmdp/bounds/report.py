from dataclasses import dataclass, field
from typing import NamedTuple

REGRET_THEOREMS = ('regret-s3', 'regret-s4', 'regret-tree', 'regret-tree-relaxed',
                   'regret-stationary')
BPI_THEOREMS = ('bpi-s4', 'bpi-tree', 'bpi-tree-relaxed', 'bpi-stationary',
                'pac-tree', 'pac-tree-relaxed')
THEOREM_IDS = REGRET_THEOREMS + BPI_THEOREMS


class Precondition(NamedTuple):
    """
    A named check of a bound's hypotheses.
    """
    name: str
    passed: bool
    detail: str = ''


@dataclass(frozen=True)
class BoundReport:
    """
    Evaluated lower bound.

    The value is always reported; failed preconditions flag it instead of
    suppressing it.
    """
    theorem_id: str
    inputs: dict
    value: float
    preconditions: list = field(default_factory=list)
    formula: str = ''

    @property
    def valid(self):
        return all(check.passed for check in self.preconditions)

    @property
    def failed(self):
        return [check.name for check in self.preconditions if not check.passed]

    def to_dict(self):
        return {'theorem_id': self.theorem_id,
                'inputs': dict(self.inputs),
                'value': self.value,
                'valid': self.valid,
                'preconditions': [{'name': c.name, 'passed': c.passed, 'detail': c.detail}
                                  for c in self.preconditions],
                'formula': self.formula}
