from abc import ABC, abstractmethod


class RootSystemType(ABC):
    """
    Base class for built-in root system types, identified by their Cartan matrix.
    """

    registry: dict[str, type["RootSystemType"]] = {}

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if not getattr(cls, "__abstractmethods__", None):
            RootSystemType.registry[cls.name()] = cls

    @classmethod
    @abstractmethod
    def name(cls) -> str:
        pass

    @classmethod
    @abstractmethod
    def cartan_matrix(cls) -> list[list[int]]:
        pass

    @classmethod
    def rank(cls) -> int:
        return len(cls.cartan_matrix())

    @staticmethod
    def get_type_by_name(name: str) -> type["RootSystemType"] | None:
        return RootSystemType.registry.get(name.upper())

    @staticmethod
    def available() -> list[str]:
        return sorted(RootSystemType.registry)
