from .base import RootSystemType


class A1(RootSystemType):

    @classmethod
    def name(cls):
        return "A1"

    @classmethod
    def cartan_matrix(cls):
        return [[2]]


class A2(RootSystemType):

    @classmethod
    def name(cls):
        return "A2"

    @classmethod
    def cartan_matrix(cls):
        return [[2, -1], [-1, 2]]


class B2(RootSystemType):
    """Second simple root short."""

    @classmethod
    def name(cls):
        return "B2"

    @classmethod
    def cartan_matrix(cls):
        return [[2, -1], [-2, 2]]


class G2(RootSystemType):

    @classmethod
    def name(cls):
        return "G2"

    @classmethod
    def cartan_matrix(cls):
        return [[2, -1], [-3, 2]]
