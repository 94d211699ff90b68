#!/usr/bin/env python3

"""
Command-line access to hardmdp.

Commands:
    gen           write the instances of a hard class and a manifest
    plan          optimal values and greedy policy of an instance file
    kl            trajectory KL between two instance files
    bound         evaluate a lower bound (or a batch, as CSV)
    regret-sweep  regret of a learner over a class, from a JSON spec
    bpi-sweep     stopping times of bpi-uniform over a class, from a JSON spec
    verify        run the oracle suite
Example:
    python hmdp.py bound --theorem regret-tree --H 6 --S 6 --A 2 --T 72
    python hmdp.py gen --family tree --S 6 --A 2 --H 9 --Hbar 3 --eps 0.1 --out tree
    python hmdp.py --seed 7 regret-sweep --spec regret_sweep_tree.json

Once the package is installed, the same commands are available as `hmdp`.
"""

from hardmdp.cli import main

if __name__ == '__main__':
    import sys

    sys.exit(main())
