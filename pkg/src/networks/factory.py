"""
Network Factory - registry pattern for Q-network architectures.

Provides a centralized way to build networks from a ``NetworkConfig`` or
from the description stored in a checkpoint header.
"""

import logging
from typing import Any, Dict, List, Type

from ..exceptions import ContractError
from .base import Aggregator, BaseQNetwork, NetworkConfig

logger = logging.getLogger(__name__)


class NetworkFactory:
    """
    Factory class for Q-network instances.

    Architectures register under a short name; ``single`` and ``dueling`` are
    registered lazily on first use.
    """

    _registry: Dict[str, Type[BaseQNetwork]] = {}

    @classmethod
    def register_network(cls, name: str, network_class: Type[BaseQNetwork]) -> None:
        """
        Register a network architecture.

        Args:
            name: Architecture name (e.g. 'single', 'dueling').
            network_class: Class inheriting from BaseQNetwork.
        """
        cls._registry[name.lower()] = network_class
        logger.debug(f"Registered network: {name}")

    @classmethod
    def create_network(
        cls,
        config: NetworkConfig,
        input_dim: int,
        action_count: int,
    ) -> BaseQNetwork:
        """
        Create a network for the given observation and action sizes.

        Args:
            config: Architecture settings.
            input_dim: Observation width.
            action_count: Number of actions.

        Returns:
            Network instance.

        Raises:
            ContractError: If the kind is not registered.
        """
        cls._ensure_networks_registered()
        kind = config.kind.lower()
        if kind not in cls._registry:
            raise ContractError(f"Unsupported network: {kind}. Available: {list(cls._registry)}")

        network_class = cls._registry[kind]
        kwargs: Dict[str, Any] = {}
        if kind == "dueling":
            kwargs["aggregator"] = config.aggregator
        network = network_class(input_dim, action_count, tuple(config.hidden_widths), **kwargs)
        logger.debug(f"Created {network!r}")
        return network

    @classmethod
    def from_description(cls, description: Dict[str, Any]) -> BaseQNetwork:
        """Rebuild a network from ``BaseQNetwork.describe()`` output."""
        config = NetworkConfig(
            kind=description["kind"],
            hidden_widths=description["hidden_widths"],
            aggregator=Aggregator(description.get("aggregator", Aggregator.MEAN.value)),
        )
        return cls.create_network(config, description["input_dim"], description["action_count"])

    @classmethod
    def get_available_networks(cls) -> List[str]:
        """Registered architecture names."""
        cls._ensure_networks_registered()
        return list(cls._registry.keys())

    @classmethod
    def _ensure_networks_registered(cls) -> None:
        if not cls._registry:
            from .dueling import DuelingQNetwork
            from .single import SingleStreamQNetwork

            cls.register_network("single", SingleStreamQNetwork)
            cls.register_network("dueling", DuelingQNetwork)


def create_network(config: NetworkConfig, input_dim: int, action_count: int) -> BaseQNetwork:
    """Convenience function to create a network."""
    return NetworkFactory.create_network(config, input_dim, action_count)
