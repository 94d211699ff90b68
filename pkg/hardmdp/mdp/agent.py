"""
Decision-maker interface used by the simulators.
"""
from .mdp import normalized_cdf
from .simulation import simulate_episode, inverse_cdf


class Agent:
    """
    An algorithm interacting episode after episode with an MDP.

    Subclasses implement act(); begin_episode() and observe() are hooks for
    history-dependent algorithms. Agents whose behaviour is a fixed Markov
    policy return it from markov_policy() so that they can be simulated in
    batches.
    """

    def begin_episode(self):
        pass

    def act(self, stage, state, history):
        raise NotImplementedError

    def observe(self, trajectory):
        pass

    def markov_policy(self):
        return None


class MarkovAgent(Agent):
    """
    Agent playing a fixed Markov policy.

    Parameters
    ----------
    pol : MarkovPolicy
        The policy.
    rng : numpy.random.Generator
        Stream for the action draws.
    """

    def __init__(self, pol, rng):
        self.pol = pol
        self.rng = rng
        self._cdf = normalized_cdf(pol.probs)

    def act(self, stage, state, history):
        return int(inverse_cdf(self._cdf[stage - 1, state], self.rng.random()))

    def markov_policy(self):
        return self.pol


def run_episodes(m, agent, T, rng):
    """
    Let an agent play T consecutive episodes.

    Parameters
    ----------
    m : Mdp
    agent : Agent
    T : int
        The number of episodes.
    rng : numpy.random.Generator
        The environment stream.

    Returns
    -------
    list of Trajectory
    """
    trajectories = []
    for _ in range(T):
        agent.begin_episode()
        traj = simulate_episode(m, agent.act, rng=rng)
        agent.observe(traj)
        trajectories.append(traj)
    return trajectories
