##If new root system types are added, they have to be imported here to be added to the registry.

from .base import RootSystemType
from .classical import A1, A2, B2, G2
