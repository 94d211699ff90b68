"""
Parameter records selecting one MDP of a hard class, and class specs.
"""
from dataclasses import dataclass, asdict
from typing import NamedTuple, Optional

from .. import logger

FAMILIES = ('tree', 'tree-stationary', 's3-stationary', 's4-stage', 's4-bpi')

FAMILY_ALIASES = {
    'tree': 'tree',
    'tree-stationary': 'tree-stationary',
    'stationary-tree': 'tree-stationary',
    's3': 's3-stationary',
    's3-stationary': 's3-stationary',
    's4': 's4-stage',
    's4-stage': 's4-stage',
    's4-bpi': 's4-bpi',
}

# length of the arm tuple of every family
ARM_SIZES = {'tree': 3, 'tree-stationary': 2, 's3-stationary': 1,
             's4-stage': 2, 's4-bpi': 2}

DEFAULT_REF_ARM = (2, 0)


def canonical_family(family):
    """
    Resolve a family name or alias.
    """
    try:
        return FAMILY_ALIASES[str(family)]
    except KeyError:
        logger.error(f"Unknown family '{family}'. Supported: {', '.join(FAMILIES)}.")
        raise ValueError


def _arm_tuple(arm, family, name='arm'):
    if arm is None:
        return None
    arm = tuple(int(x) for x in arm)
    if len(arm) != ARM_SIZES[family]:
        logger.error(f'{name} of family {family} must have {ARM_SIZES[family]} '
                     f'entries, got {arm}.')
        raise ValueError
    return arm


class ArmSite(NamedTuple):
    """
    The (stage, state, action) triple of a kernel row that an arm boosts.
    Stage is 1-based.
    """
    stage: int
    state: int
    action: int


@dataclass(frozen=True)
class HardInstanceParams:
    """
    One member of a hard class.

    Attributes
    ----------
    family : str
        tree | tree-stationary | s3-stationary | s4-stage | s4-bpi.
    A : int
        The number of actions.
    H : int
        The horizon.
    S : int | None
        The number of states (tree families); 3 or 4 for the small families.
    Hbar : int | None
        The waiting window (tree, s4-stage, s4-bpi).
    eps : float
        The gap (eps for the tree and s3/s4 families, eps-tilde for s4-bpi).
    arm : tuple | None
        (h*, leaf, a*) for tree, (leaf, a*) for tree-stationary, (a*,) for
        s3-stationary, (h*, a*) for s4-stage and s4-bpi. None selects the
        reference instance.
    ref_arm : tuple | None
        (h0, a0), s4-bpi only.
    relaxed : bool
        Allow the relaxed tree construction (tree families).
    """
    family: str
    A: int
    H: int
    S: Optional[int] = None
    Hbar: Optional[int] = None
    eps: float = 0.0
    arm: Optional[tuple] = None
    ref_arm: Optional[tuple] = None
    relaxed: bool = False

    def __post_init__(self):
        family = canonical_family(self.family)
        object.__setattr__(self, 'family', family)
        object.__setattr__(self, 'arm', _arm_tuple(self.arm, family))
        ref_arm = self.ref_arm
        if family == 's4-bpi' and ref_arm is None:
            ref_arm = DEFAULT_REF_ARM
        if family != 's4-bpi':
            ref_arm = None
        object.__setattr__(self, 'ref_arm', _arm_tuple(ref_arm, 's4-bpi', 'ref_arm')
                           if ref_arm is not None else None)
        if family == 's3-stationary':
            object.__setattr__(self, 'S', 3)
        elif family in ('s4-stage', 's4-bpi'):
            object.__setattr__(self, 'S', 4)

    @property
    def is_reference(self):
        return self.arm is None

    def with_arm(self, arm):
        """
        Copy of these params selecting another arm.
        """
        data = self.to_dict()
        data['arm'] = arm
        return HardInstanceParams.from_dict(data)

    def to_dict(self):
        data = asdict(self)
        data['arm'] = list(self.arm) if self.arm is not None else None
        data['ref_arm'] = list(self.ref_arm) if self.ref_arm is not None else None
        return data

    @classmethod
    def from_dict(cls, data):
        known = {'family', 'A', 'H', 'S', 'Hbar', 'eps', 'arm', 'ref_arm', 'relaxed'}
        unknown = set(data) - known
        if unknown:
            logger.error(f'Unknown instance parameters {sorted(unknown)}.')
            raise ValueError
        if 'family' not in data or 'A' not in data or 'H' not in data:
            logger.error('Instance parameters need family, A and H.')
            raise ValueError
        return cls(family=data['family'], A=int(data['A']), H=int(data['H']),
                   S=None if data.get('S') is None else int(data['S']),
                   Hbar=None if data.get('Hbar') is None else int(data['Hbar']),
                   eps=float(data.get('eps', 0.0)),
                   arm=data.get('arm'), ref_arm=data.get('ref_arm'),
                   relaxed=bool(data.get('relaxed', False)))


@dataclass(frozen=True)
class ClassSpec:
    """
    A hard class: the reference instance plus one instance per arm.

    Attributes
    ----------
    family, A, H, S, Hbar, eps, relaxed, ref_arm
        As in HardInstanceParams.
    """
    family: str
    A: int
    H: int
    S: Optional[int] = None
    Hbar: Optional[int] = None
    eps: float = 0.0
    relaxed: bool = False
    ref_arm: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, 'family', canonical_family(self.family))
        if self.ref_arm is not None:
            object.__setattr__(self, 'ref_arm', _arm_tuple(self.ref_arm, 's4-bpi', 'ref_arm'))

    def reference_params(self):
        """
        Params of the reference instance (arm None).
        """
        return HardInstanceParams(family=self.family, A=self.A, H=self.H, S=self.S,
                                  Hbar=self.Hbar, eps=self.eps, arm=None,
                                  ref_arm=self.ref_arm, relaxed=self.relaxed)

    def with_eps(self, eps):
        data = self.to_dict()
        data['eps'] = eps
        return ClassSpec.from_dict(data)

    def to_dict(self):
        data = asdict(self)
        data['ref_arm'] = list(self.ref_arm) if self.ref_arm is not None else None
        return data

    @classmethod
    def from_dict(cls, data):
        known = {'family', 'A', 'H', 'S', 'Hbar', 'eps', 'relaxed', 'ref_arm'}
        unknown = set(data) - known
        if unknown:
            logger.error(f'Unknown class parameters {sorted(unknown)}.')
            raise ValueError
        if 'family' not in data or 'A' not in data or 'H' not in data:
            logger.error('A class spec needs family, A and H.')
            raise ValueError
        eps = data.get('eps')
        return cls(family=data['family'], A=int(data['A']), H=int(data['H']),
                   S=None if data.get('S') is None else int(data['S']),
                   Hbar=None if data.get('Hbar') is None else int(data['Hbar']),
                   eps=0.0 if eps is None else float(eps),
                   relaxed=bool(data.get('relaxed', False)),
                   ref_arm=data.get('ref_arm'))
