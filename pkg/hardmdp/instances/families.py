"""
Constructors of the hard MDP families.

State layouts
-------------
tree            : s_w = 0, tree nodes 1..n in breadth-first order (root = 1),
                  s_g = n + 1, s_b = n + 2.
tree-stationary : same layout; s_w is kept as an unreachable absorbing state
                  and episodes start at the root.
s3-stationary   : s_1 = 0, s_g = 1, s_b = 2.
s4-stage/s4-bpi : s_w = 0, s_1 = 1, s_b = 2, s_g = 3.

Action 0 is the waiting action a_w. Staying in the waiting state is possible
up to stage Hbar - 1, so every policy leaves it at some stage 1..Hbar and the
row boosted by an arm is met exactly once per episode.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .params import ArmSite, ClassSpec, HardInstanceParams
from .tree import (TreeShape, REGIME_CAP, REGIME_FULL, build_tree_shape,
                   tree_regime)
from ..mdp import Mdp, deterministic_policy
from .. import logger

WAIT_ACTION = 0
LEAVE_ACTION = 1


@dataclass(frozen=True)
class HardInstance:
    """
    An emitted MDP with the structure needed to reason about it.

    Attributes
    ----------
    params : HardInstanceParams
    mdp : Mdp
    names : dict
        Name map: s_w, s_root, s_1, s_g, s_b, leaves, nodes (where relevant).
    shape : TreeShape | None
        Tree layout (tree families).
    site : ArmSite | None
        The row boosted by the instance's own arm, None for the reference.
    arm_sites : tuple of ArmSite
        Every arm row of the class in enumeration order.
    window : tuple of int
        First and last stage at which arm rows can be visited.
    value_stages : int
        Number of rewarded stages after the arm (H-Hbar-d, H-1, H-Hbar-1 or
        H-d); rho = value_stages * P(reach s_g).
    """
    params: HardInstanceParams
    mdp: Mdp
    names: dict
    shape: Optional[TreeShape]
    site: Optional[ArmSite]
    arm_sites: tuple
    window: tuple
    value_stages: int

    @property
    def family(self):
        return self.params.family

    @property
    def depth(self):
        """
        Stages spent between leaving the waiting state and reaching an arm row
        (d for the tree families, 1 for s4, 0 for s3).
        """
        if self.shape is not None:
            return self.shape.depth
        return 0 if self.family == 's3-stationary' else 1

    @property
    def good_state(self):
        return self.names['s_g']

    @property
    def arm_states(self):
        return tuple(sorted({site.state for site in self.arm_sites}))

    @property
    def rho_star(self):
        """
        Closed-form optimal value.
        """
        gap = self.params.eps
        if self.family == 's4-bpi':
            gap = 2 * self.params.eps if self.params.arm is not None else self.params.eps
        elif self.params.arm is None:
            gap = 0.0
        return self.value_stages * (0.5 + gap)

    def site_index(self, site):
        return self.arm_sites.index(site)


def _check(condition, message):
    if not condition:
        logger.error(message)
        raise ValueError


def _check_eps(eps, upper, name='eps'):
    _check(0.0 <= eps <= upper, f'{name} must lie in [0, {upper}], got {eps}.')


def tree_shape_for(S, A, H, relaxed=False):
    """
    Tree layout used by the tree families.

    Without `relaxed`, S must satisfy S = 3 + (A^d - 1)/(A - 1) and the full
    tree is used whatever H. With `relaxed`, the regime of tree_regime()
    decides between the full tree, the relaxed tree and the horizon cap.
    """
    if not relaxed:
        shape = build_tree_shape(S, A)
        if H < 3 * shape.depth:
            logger.warning(f'H={H} < 3d={3 * shape.depth}: outside the regime '
                           'covered by the tree bounds.')
        return shape

    _check(S >= 6 and A >= 2, f'Tree instances need S >= 6 and A >= 2, got S={S}, A={A}.')
    regime, _, n_nodes = tree_regime(S, A, H)
    if regime == REGIME_FULL:
        return build_tree_shape(S, A)
    if regime == REGIME_CAP:
        logger.info(f'Horizon cap: tree built on {n_nodes} of {S - 3} states.')
        return build_tree_shape(S, A, relaxed=True, n_nodes=n_nodes)
    return build_tree_shape(S, A, relaxed=True)


def class_arms(family, A, H, Hbar=None, shape=None, ref_arm=None):
    """
    Arm tuples of a class in lexicographic order.
    """
    if family == 'tree':
        d = shape.depth
        return [(h, leaf, a) for h in range(1 + d, Hbar + d + 1)
                for leaf in range(shape.L) for a in range(A)]
    if family == 'tree-stationary':
        return [(leaf, a) for leaf in range(shape.L) for a in range(A)]
    if family == 's3-stationary':
        return [(a,) for a in range(A)]
    arms = [(h, a) for h in range(2, Hbar + 2) for a in range(A)]
    if family == 's4-bpi':
        arms = [arm for arm in arms if arm != tuple(ref_arm)]
    return arms


def _tree_sites(family, A, H, Hbar, shape):
    d = shape.depth
    leaf_states = [1 + leaf for leaf in shape.leaves]
    if family == 'tree':
        stages = range(1 + d, Hbar + d + 1)
    else:
        stages = [d]
    return tuple(ArmSite(h, s, a) for h in stages for s in leaf_states for a in range(A))


def _absorbing(p, state):
    p[:, state, :, :] = 0.0
    p[:, state, :, state] = 1.0


def _tree_instance(params):
    family, A, H, S, Hbar = params.family, params.A, params.H, params.S, params.Hbar
    stationary = family == 'tree-stationary'
    upper = 0.25 if stationary else 0.5
    _check(S is not None, 'Tree instances need S.')
    _check(H >= 2, f'Tree instances need H >= 2, got H={H}.')
    _check_eps(params.eps, upper)
    shape = tree_shape_for(S, A, H, params.relaxed)
    d = shape.depth
    if stationary:
        Hbar = 1
        _check(H >= d + 1, f'H={H} leaves no rewarded stage after depth d={d}.')
    else:
        _check(Hbar is not None and 1 <= Hbar <= H - d,
               f'Hbar must lie in [1, H-d] = [1, {H - d}], got {Hbar}.')

    n = shape.n_nodes
    s_w, s_root, s_g, s_b = 0, 1, n + 1, n + 2
    n_states = n + 3
    leaf_states = [1 + leaf for leaf in shape.leaves]

    site = None
    if params.arm is not None:
        if stationary:
            leaf, a_star = params.arm
            h_star = d
        else:
            h_star, leaf, a_star = params.arm
            _check(1 + d <= h_star <= Hbar + d,
                   f'h* must lie in [{1 + d}, {Hbar + d}], got {h_star}.')
        _check(0 <= leaf < shape.L, f'Leaf index must lie in [0, {shape.L}), got {leaf}.')
        _check(0 <= a_star < A, f'a* must lie in [0, {A}), got {a_star}.')
        site = ArmSite(h_star, leaf_states[leaf], a_star)

    p = np.zeros((H - 1, n_states, A, n_states))
    r = np.zeros((H, n_states, A))
    for k in range(H - 1):
        h = k + 1
        for a in range(A):
            if not stationary and a == WAIT_ACTION and h <= Hbar - 1:
                p[k, s_w, a, s_w] = 1.0
            elif not stationary:
                p[k, s_w, a, s_root] = 1.0
            for node in range(n):
                child = shape.child_for_action(node, a)
                if child is not None:
                    p[k, 1 + node, a, 1 + child] = 1.0
            for s in leaf_states:
                boosted = site is not None and s == site.state and a == site.action \
                    and (stationary or h == site.stage)
                delta = params.eps if boosted else 0.0
                p[k, s, a, s_g] = 0.5 + delta
                p[k, s, a, s_b] = 0.5 - delta
    _absorbing(p, s_g)
    _absorbing(p, s_b)

    mu = np.zeros(n_states)
    if stationary:
        _absorbing(p, s_w)
        mu[s_root] = 1.0
        r[:, s_g, :] = 1.0
        value_stages = H - d
        window = (d, d)
    else:
        mu[s_w] = 1.0
        r[Hbar + d:, s_g, :] = 1.0
        value_stages = H - Hbar - d
        window = (1 + d, Hbar + d)

    names = {'s_w': s_w, 's_root': s_root, 's_g': s_g, 's_b': s_b,
             'nodes': list(range(1, n + 1)), 'leaves': leaf_states,
             'merged_states': shape.merged_states}
    return HardInstance(params=params, mdp=Mdp(mu, p, r), names=names, shape=shape,
                        site=site, arm_sites=_tree_sites(family, A, H, Hbar, shape),
                        window=window, value_stages=value_stages)


def _s3_instance(params):
    A, H = params.A, params.H
    _check(A >= 2 and H >= 2, f'The S=3 family needs A >= 2 and H >= 2, got A={A}, H={H}.')
    _check_eps(params.eps, 0.25)
    s_1, s_g, s_b = 0, 1, 2

    site = None
    if params.arm is not None:
        (a_star,) = params.arm
        _check(0 <= a_star < A, f'a* must lie in [0, {A}), got {a_star}.')
        site = ArmSite(1, s_1, a_star)

    p = np.zeros((H - 1, 3, A, 3))
    for a in range(A):
        delta = params.eps if site is not None and a == site.action else 0.0
        p[:, s_1, a, s_g] = 0.5 + delta
        p[:, s_1, a, s_b] = 0.5 - delta
    _absorbing(p, s_g)
    _absorbing(p, s_b)
    r = np.zeros((H, 3, A))
    r[:, s_g, :] = 1.0

    names = {'s_1': s_1, 's_g': s_g, 's_b': s_b}
    sites = tuple(ArmSite(1, s_1, a) for a in range(A))
    return HardInstance(params=params, mdp=Mdp([1.0, 0.0, 0.0], p, r), names=names,
                        shape=None, site=site, arm_sites=sites, window=(1, 1),
                        value_stages=H - 1)


def _s4_instance(params):
    family, A, H, Hbar = params.family, params.A, params.H, params.Hbar
    bpi = family == 's4-bpi'
    _check(A >= 2 and H >= 4, f'The S=4 families need A >= 2 and H >= 4, got A={A}, H={H}.')
    _check(Hbar is not None and 1 <= Hbar <= H - 2,
           f'Hbar must lie in [1, H-2] = [1, {H - 2}], got {Hbar}.')
    _check_eps(params.eps, 0.125 if bpi else 0.25, 'eps-tilde' if bpi else 'eps')
    s_w, s_1, s_b, s_g = 0, 1, 2, 3

    def checked_site(arm, name):
        h, a = arm
        _check(2 <= h <= Hbar + 1, f'{name} stage must lie in [2, {Hbar + 1}], got {h}.')
        _check(0 <= a < A, f'{name} action must lie in [0, {A}), got {a}.')
        return ArmSite(h, s_1, a)

    site = checked_site(params.arm, 'h*') if params.arm is not None else None
    boosts = {}
    if bpi:
        ref_site = checked_site(params.ref_arm, 'h0')
        boosts[(ref_site.stage, ref_site.action)] = params.eps
        if site is not None:
            _check(site != ref_site, f'The arm {params.arm} overlaps the reference arm.')
            boosts[(site.stage, site.action)] = 2 * params.eps
    elif site is not None:
        boosts[(site.stage, site.action)] = params.eps

    p = np.zeros((H - 1, 4, A, 4))
    for k in range(H - 1):
        h = k + 1
        for a in range(A):
            if a == WAIT_ACTION and h <= Hbar - 1:
                p[k, s_w, a, s_w] = 1.0
            else:
                p[k, s_w, a, s_1] = 1.0
            delta = boosts.get((h, a), 0.0)
            p[k, s_1, a, s_g] = 0.5 + delta
            p[k, s_1, a, s_b] = 0.5 - delta
    _absorbing(p, s_g)
    _absorbing(p, s_b)
    r = np.zeros((H, 4, A))
    r[Hbar + 1:, s_g, :] = 1.0

    names = {'s_w': s_w, 's_1': s_1, 's_b': s_b, 's_g': s_g}
    sites = tuple(ArmSite(h, s_1, a) for h in range(2, Hbar + 2) for a in range(A))
    return HardInstance(params=params, mdp=Mdp([1.0, 0.0, 0.0, 0.0], p, r), names=names,
                        shape=None, site=site, arm_sites=sites, window=(2, Hbar + 1),
                        value_stages=H - Hbar - 1)


_BUILDERS = {'tree': _tree_instance, 'tree-stationary': _tree_instance,
             's3-stationary': _s3_instance, 's4-stage': _s4_instance,
             's4-bpi': _s4_instance}


def build_instance(params):
    """
    Build the instance selected by params.

    Parameters
    ----------
    params : HardInstanceParams | dict

    Returns
    -------
    HardInstance
    """
    if isinstance(params, dict):
        params = HardInstanceParams.from_dict(params)
    return _BUILDERS[params.family](params)


def make_tree_instance(params):
    """
    MDP of the stage-dependent tree family.

    Parameters
    ----------
    params : HardInstanceParams
        family 'tree', arm (h*, leaf, a*) or None.

    Returns
    -------
    Mdp
    """
    _check(params.family == 'tree', f"Expected family 'tree', got '{params.family}'.")
    return build_instance(params).mdp


def make_s3_stationary(A, H, arm_action=None, eps=0.0):
    """
    MDP of the three-state stationary family. arm_action None gives the
    reference instance.
    """
    arm = None if arm_action is None else (arm_action,)
    return build_instance(HardInstanceParams('s3-stationary', A=A, H=H, eps=eps, arm=arm)).mdp


def make_s4_stage(A, H, Hbar, arm=None, eps=0.0):
    """
    MDP of the four-state stage-dependent family, arm (h*, a*) or None.
    """
    return build_instance(HardInstanceParams('s4-stage', A=A, H=H, Hbar=Hbar,
                                             eps=eps, arm=arm)).mdp


def make_s4_bpi(A, H, Hbar, ref_arm=(2, 0), arm=None, eps_tilde=0.0):
    """
    MDP of the four-state best-policy-identification family. The reference
    (arm None) boosts (h0, a0) by eps_tilde; an alternative also boosts
    (h*, a*) by 2 eps_tilde.
    """
    return build_instance(HardInstanceParams('s4-bpi', A=A, H=H, Hbar=Hbar, eps=eps_tilde,
                                             arm=arm, ref_arm=ref_arm)).mdp


def make_stationary_tree(S, A, H, arm=None, eps=0.0, relaxed=False):
    """
    MDP of the stationary tree family, arm (leaf, a*) or None.
    """
    return build_instance(HardInstanceParams('tree-stationary', A=A, H=H, S=S, eps=eps,
                                             arm=arm, relaxed=relaxed)).mdp


def enumerate_class(spec):
    """
    Members of a hard class: the reference first, then every arm in
    lexicographic order.

    Parameters
    ----------
    spec : ClassSpec | dict

    Returns
    -------
    list of HardInstanceParams
    """
    if isinstance(spec, dict):
        spec = ClassSpec.from_dict(spec)
    reference = spec.reference_params()
    # building the reference validates the spec and gives the tree layout
    ref_instance = build_instance(reference)
    arms = class_arms(spec.family, spec.A, spec.H, spec.Hbar, ref_instance.shape,
                      reference.ref_arm)
    return [reference] + [reference.with_arm(arm) for arm in arms]


def class_instances(spec):
    """
    Built instances of a hard class, in enumerate_class order.
    """
    return [build_instance(params) for params in enumerate_class(spec)]


def arm_policy(instance, site):
    """
    Deterministic policy visiting a given arm row with probability one.

    Parameters
    ----------
    instance : HardInstance
        Any member of the class.
    site : ArmSite
        One of instance.arm_sites.

    Returns
    -------
    MarkovPolicy
    """
    if site not in instance.arm_sites:
        logger.error(f'{site} is not an arm of this class.')
        raise ValueError

    m = instance.mdp
    table = np.full((m.H, m.S), WAIT_ACTION, dtype=int)
    table[site.stage - 1, site.state] = site.action
    family = instance.family

    if family in ('tree', 'tree-stationary'):
        shape = instance.shape
        leaf = site.state - 1
        path = shape.path_to(leaf)
        steps = shape.actions_to(leaf)
        root_stage = site.stage - (shape.depth - 1)
        for j, action in enumerate(steps):
            table[root_stage + j - 1, 1 + path[j]] = action
        if family == 'tree':
            table[root_stage - 2, instance.names['s_w']] = LEAVE_ACTION
    elif family in ('s4-stage', 's4-bpi'):
        table[site.stage - 2, instance.names['s_w']] = LEAVE_ACTION

    return deterministic_policy(table, m.A)


def bpi_class_gap(family, H, Hbar, d, eps):
    """
    Kernel gap of the class used to lower-bound (eps, delta)-PAC
    identification at accuracy eps.

    eps / (H - Hbar - 1) for s4-bpi and 2 eps / (H - Hbar - d) for tree.
    """
    if family == 's4-bpi':
        return eps / (H - Hbar - 1)
    if family == 'tree':
        return 2.0 * eps / (H - Hbar - d)
    logger.error(f'No BPI class for family {family}.')
    raise ValueError
