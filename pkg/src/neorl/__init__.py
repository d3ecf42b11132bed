"""Purposive neoRL networks over grid GVF banks, with a WaterWorld testbed."""
from .actions import Action
from .errors import ConfigurationError
from .experiment import ExperimentConfig, preset, run_batch, run_trial, to_minutes
from .gvf import CellTransition, GvfBank, create_bank
from .network import Network, NetworkSpec, build_network, epsilon_greedy
from .node import Element, desire_vector, emit_element, extract_q, node_forward
from .nres import NresGrid, cell_center, cell_of, compatible, make_grid
from .waterworld import EnvParams, WaterWorld, create_env, observe, step

__version__ = "0.1.0"

__all__ = [
    "Action", "ConfigurationError", "ExperimentConfig", "preset", "run_batch", "run_trial", "to_minutes",
    "CellTransition", "GvfBank", "create_bank", "Network", "NetworkSpec", "build_network", "epsilon_greedy",
    "Element", "desire_vector", "emit_element", "extract_q", "node_forward",
    "NresGrid", "cell_center", "cell_of", "compatible", "make_grid",
    "EnvParams", "WaterWorld", "create_env", "observe", "step",
]
