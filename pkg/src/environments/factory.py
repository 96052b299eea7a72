"""
Environment Factory - registry pattern for the bundled MDPs.

Environments are looked up by their short string name so run configs, the
CLI and the HTTP surface can all refer to them the same way.
"""

import logging
from typing import Any, Dict, List, Optional, Type

from ..exceptions import ContractError
from .base import BaseEnvironment

logger = logging.getLogger(__name__)


class UnknownEnvironmentError(ContractError):
    """Raised when a name is not in the environment registry."""


class EnvFactory:
    """
    Factory class for environment instances.

    ``chain``, ``gridworld`` and ``corridor`` are registered lazily on first use.
    """

    _registry: Dict[str, Type[BaseEnvironment]] = {}

    @classmethod
    def register_env(cls, name: str, env_class: Type[BaseEnvironment]) -> None:
        """
        Register an environment.

        Args:
            name: Registry name (e.g. 'chain').
            env_class: Class inheriting from BaseEnvironment.
        """
        cls._registry[name.lower()] = env_class
        logger.debug(f"Registered environment: {name}")

    @classmethod
    def create_env(cls, name: str, **kwargs: Any) -> BaseEnvironment:
        """
        Create an environment instance.

        Args:
            name: Registry name.
            **kwargs: Constructor arguments (e.g. ``n_states`` for chain).

        Returns:
            Environment instance.

        Raises:
            UnknownEnvironmentError: If the name is not registered.
        """
        cls._ensure_envs_registered()
        key = name.lower()
        if key not in cls._registry:
            raise UnknownEnvironmentError(
                f"Unsupported environment: {name}. Available: {cls.get_available_envs()}"
            )
        try:
            env = cls._registry[key](**kwargs)
        except TypeError as e:
            raise ContractError(f"Invalid arguments for environment {name}: {e}") from e
        logger.debug(f"Created {env!r}")
        return env

    @classmethod
    def get_available_envs(cls) -> List[str]:
        """Registered environment names, sorted."""
        cls._ensure_envs_registered()
        return sorted(cls._registry.keys())

    @classmethod
    def is_registered(cls, name: str) -> bool:
        cls._ensure_envs_registered()
        return name.lower() in cls._registry

    @classmethod
    def _ensure_envs_registered(cls) -> None:
        if not cls._registry:
            from .chain import ChainMDP
            from .corridor import CorridorDodge
            from .gridworld import GridWorld

            cls.register_env("chain", ChainMDP)
            cls.register_env("gridworld", GridWorld)
            cls.register_env("corridor", CorridorDodge)


def create_env(name: str, env_kwargs: Optional[Dict[str, Any]] = None) -> BaseEnvironment:
    """Convenience function to create an environment."""
    return EnvFactory.create_env(name, **(env_kwargs or {}))
