"""
A-ary tree layouts for the tree families.

Nodes are numbered breadth-first from the root (node 0). In a level-order
filled tree the children of node i are A*i+1 .. A*i+A, which is the
left-to-right, node-index-order assignment used everywhere below.
"""
import math
from dataclasses import dataclass

from .. import logger

REGIME_FULL = 'full-tree'
REGIME_RELAXED = 'relaxed-tree'
REGIME_CAP = 'exponential-cap'


@dataclass(frozen=True)
class TreeShape:
    """
    Tree layout.

    Attributes
    ----------
    A : int
        The number of actions (maximal branching factor).
    parents : tuple of int
        Parent of every node, -1 for the root.
    children : tuple of tuple of int
        Children of every node, left to right.
    depth : int
        The number of levels; a tree whose leaves all share one level has
        them at level depth-1.
    leaves : tuple of int
        Leaf nodes in breadth-first order.
    merged_states : int
        Surplus states not used by the tree (merged into the bad absorbing
        state by the instance constructors).
    full : bool
        True for a full A-ary tree.
    """
    A: int
    parents: tuple
    children: tuple
    depth: int
    leaves: tuple
    merged_states: int = 0
    full: bool = False

    @property
    def n_nodes(self):
        return len(self.parents)

    @property
    def L(self):
        return len(self.leaves)

    def level(self, node):
        """
        Level of a node, the root being at level 0.
        """
        lvl = 0
        while self.parents[node] != -1:
            node = self.parents[node]
            lvl += 1
        return lvl

    def leaf_levels(self):
        return sorted({self.level(leaf) for leaf in self.leaves})

    def child_for_action(self, node, action):
        """
        Node reached from `node` with `action`. Actions beyond the number of
        children wrap around (child a mod k); None for a leaf.
        """
        kids = self.children[node]
        if not kids:
            return None
        return kids[action % len(kids)]

    def path_to(self, node):
        """
        Nodes from the root down to `node`, both included.
        """
        path = [node]
        while self.parents[node] != -1:
            node = self.parents[node]
            path.append(node)
        return path[::-1]

    def actions_to(self, node):
        """
        Actions leading from the root to `node` (one per edge).
        """
        path = self.path_to(node)
        return [self.children[parent].index(child)
                for parent, child in zip(path[:-1], path[1:])]


def _from_children(children, A, merged_states=0, full=False):
    n = len(children)
    parents = [-1] * n
    for node, kids in enumerate(children):
        for kid in kids:
            parents[kid] = node
    leaves = tuple(node for node in range(n) if not children[node])

    def level(node):
        lvl = 0
        while parents[node] != -1:
            node = parents[node]
            lvl += 1
        return lvl

    depth = max(level(node) for node in leaves) + 1
    return TreeShape(A=A, parents=tuple(parents),
                     children=tuple(tuple(k) for k in children),
                     depth=depth, leaves=leaves,
                     merged_states=merged_states, full=full)


def full_tree_nodes(d, A):
    """
    Node count (A^d - 1)/(A - 1) of a full A-ary tree with d levels.
    """
    return (A ** d - 1) // (A - 1)


def assumption_depth(S, A):
    """
    The integer d with S = 3 + (A^d - 1)/(A - 1), or None if there is none.
    """
    if A < 2 or S < 4:
        return None
    d = 1
    while full_tree_nodes(d, A) < S - 3:
        d += 1
    return d if full_tree_nodes(d, A) == S - 3 else None


def relaxed_depth_formula(S, A):
    """
    ceil(log_A((S-3)(A-1) + 1)), computed exactly: the smallest d whose full
    tree holds at least S-3 nodes.
    """
    d = 1
    while full_tree_nodes(d, A) < S - 3:
        d += 1
    return d


def leaf_count_formula(S, A):
    """
    (1 - 1/A)(S - 3) + 1/A, the leaf count of the full tree.
    """
    return (1.0 - 1.0 / A) * (S - 3) + 1.0 / A


def balanced_tree(n, A):
    """
    Level-order filled A-ary tree over n nodes. Its leaves sit on the last
    two levels.

    Parameters
    ----------
    n : int
        The number of nodes, at least 1.
    A : int
        The branching factor, at least 2.

    Returns
    -------
    TreeShape
    """
    if n < 1 or A < 2:
        logger.error(f'A balanced tree needs n >= 1 and A >= 2, got n={n}, A={A}.')
        raise ValueError
    children = [[kid for kid in range(A * i + 1, A * i + A + 1) if kid < n]
                for i in range(n)]
    d = 1
    while full_tree_nodes(d, A) < n:
        d += 1
    return _from_children(children, A, full=full_tree_nodes(d, A) == n)


def full_tree(d, A):
    """
    Full A-ary tree with d levels.
    """
    return balanced_tree(full_tree_nodes(d, A), A)


def _bfs_relabel(children):
    """
    Renumber a tree given by child lists so that node indices follow
    breadth-first order from node 0.
    """
    order = [0]
    for node in order:
        order.extend(children[node])
    new_index = {old: new for new, old in enumerate(order)}
    return [[new_index[kid] for kid in children[old]] for old in order]


def _extended_children(base, depth):
    """
    Child lists of `base` with a chain of single children hung under every
    leaf above level depth-1, so that all leaves end on that level.
    """
    children = [list(kids) for kids in base.children]
    for leaf in base.leaves:
        node = leaf
        for _ in range(depth - 1 - base.level(leaf)):
            children[node].append(len(children))
            children.append([])
            node = len(children) - 1
    return children


def relaxed_tree(n, A, merged_states=0):
    """
    Tree with equal-depth leaves over at most n nodes.

    The depth is d = ceil(log_A((A - 1) n + 1)), the depth of a balanced
    tree over all n nodes. A balanced tree is built on floor(n/2) nodes and
    every leaf above level d-1 gets a chain of single children down to level
    d-1. If the chains do not fit in n nodes the base tree loses nodes from
    the end until they do. The remaining nodes are reported as merged.

    Parameters
    ----------
    n : int
        The node budget.
    A : int
        The branching factor.
    merged_states : int
        Surplus already removed from the budget by the caller.

    Returns
    -------
    TreeShape
    """
    if n < 1:
        logger.error(f'A relaxed tree needs at least one node, got {n}.')
        raise ValueError
    depth = relaxed_depth_formula(n + 3, A)
    k = max(1, n // 2)
    children = _extended_children(balanced_tree(k, A), depth)
    while len(children) > n:
        k -= 1
        children = _extended_children(balanced_tree(k, A), depth)
    if k < n // 2:
        logger.debug(f'Relaxed tree base shrunk to {k} nodes to fit {n}.')

    tree = _from_children(_bfs_relabel(children), A,
                          merged_states=merged_states + n - len(children))
    if tree.depth != depth or len(tree.leaf_levels()) != 1:
        logger.error(f'Relaxed tree has leaves on levels {tree.leaf_levels()}, '
                     f'expected only {depth - 1}.')
        raise RuntimeError
    return tree


def tree_regime(S, A, H):
    """
    Which tree construction applies to (S, A, H).

    Returns
    -------
    str : REGIME_FULL when S = 3 + (A^d - 1)/(A - 1) and H >= 3d,
          REGIME_RELAXED when S <= A^(H/3 - 2), REGIME_CAP otherwise.
    int : The depth d of the tree that is built: the full-tree depth, the
          relaxed depth formula for S, or under the cap the formula for the
          capped node count.
    int : The number of tree nodes to use.
    """
    d = assumption_depth(S, A)
    if d is not None and H >= 3 * d:
        return REGIME_FULL, d, S - 3

    horizon_cap = A ** (H / 3.0 - 2.0)
    if S <= horizon_cap:
        return REGIME_RELAXED, relaxed_depth_formula(S, A), S - 3

    n_nodes = max(1, min(S - 3, math.ceil(horizon_cap)))
    return REGIME_CAP, relaxed_depth_formula(n_nodes + 3, A), n_nodes


def build_tree_shape(S, A, relaxed=False, n_nodes=None):
    """
    Tree layout of the tree families for S states and A actions.

    Parameters
    ----------
    S : int
        The total number of states, three of them outside the tree.
    A : int
        The number of actions.
    relaxed : bool
        If True and no integer depth satisfies S = 3 + (A^d - 1)/(A - 1),
        use the relaxed construction instead of failing.
    n_nodes : int | None
        Cap on the number of tree nodes (horizon-limited regime). The tree is
        then built by the relaxed construction over n_nodes nodes and the
        other S-3-n_nodes states are merged.

    Returns
    -------
    TreeShape
    """
    if S < 6 or A < 2:
        logger.error(f'Tree instances need S >= 6 and A >= 2, got S={S}, A={A}.')
        raise ValueError

    if n_nodes is not None and n_nodes < S - 3:
        if n_nodes < 1:
            logger.error(f'The tree needs at least one node, got {n_nodes}.')
            raise ValueError
        return relaxed_tree(n_nodes, A, merged_states=S - 3 - n_nodes)

    d = assumption_depth(S, A)
    if d is not None:
        return full_tree(d, A)

    if not relaxed:
        logger.error(f'No integer d with S = 3 + (A^d - 1)/(A - 1) for S={S}, A={A}. '
                     'Use the relaxed construction.')
        raise ValueError
    return relaxed_tree(S - 3, A)
