from jamshield.agents.baseline import FixedAgent, fixed_baseline
from jamshield.agents.dqn import DQNAgent, ReplayBuffer, Transitions, dqn_learn_step, td_targets
from jamshield.agents.mlp import MlpParams, bellman_loss, bellman_loss_and_grad, init_mlp, mlp_forward
from jamshield.agents.persistence import load_mlp, load_qtable, save_mlp, save_qtable
from jamshield.agents.policy import LearnerConfig, epsilon_step, select_action
from jamshield.agents.tabular import QLearningAgent, new_qtable, q_update

__all__ = [
    "DQNAgent",
    "FixedAgent",
    "LearnerConfig",
    "MlpParams",
    "QLearningAgent",
    "ReplayBuffer",
    "Transitions",
    "bellman_loss",
    "bellman_loss_and_grad",
    "dqn_learn_step",
    "epsilon_step",
    "fixed_baseline",
    "init_mlp",
    "load_mlp",
    "load_qtable",
    "mlp_forward",
    "new_qtable",
    "q_update",
    "save_mlp",
    "save_qtable",
    "select_action",
    "td_targets",
]
