"""Protocol base class for adversim."""

from __future__ import annotations

from typing import Any, Mapping, Optional

from .utils import digest_of


class Protocol:
    """Base synchronous protocol with params and pure round hooks.

    Subclasses implement ``init``, ``message`` and ``receive`` as pure
    functions of their arguments; states must be immutable and hashable so the
    engine can share and deduplicate them.
    """

    name: str = "protocol"
    params: dict[str, Any] = {}

    class Params:
        """Expose params as dot-access object."""

        def __init__(self, values: Mapping[str, Any]) -> None:
            for key, value in values.items():
                setattr(self, key, value)

    def __init__(self, **kwargs: Any) -> None:
        unknown = set(kwargs) - set(self.params)
        if unknown:
            raise TypeError(f"{type(self).__name__} got unknown params: {sorted(unknown)}")
        merged_params = dict(self.params)
        merged_params.update(kwargs)
        self._param_values = merged_params
        self.p = self.Params(merged_params)

    def init(self, pid: int, item: Any) -> Any:
        """Return the initial state of processor ``pid``."""
        raise NotImplementedError

    def message(self, state: Any) -> Any:
        """Return the payload broadcast in the coming round."""
        return state

    def receive(self, state: Any, received: Mapping[int, Any]) -> Any:
        """Return the next state given this round's delivered payloads."""
        raise NotImplementedError

    def output(self, state: Any) -> Optional[Any]:
        """Return the processor's output, or ``None`` while it has none."""
        return None

    def state_digest(self, state: Any) -> str:
        return digest_of(state)

    def describe(self) -> dict[str, Any]:
        return {"name": self.name, "params": dict(self._param_values)}

    def __getstate__(self) -> dict[str, Any]:
        return {"_param_values": self._param_values}

    def __setstate__(self, state: dict[str, Any]) -> None:
        self._param_values = state["_param_values"]
        self.p = self.Params(self._param_values)
