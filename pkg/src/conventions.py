from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Conventions:
    """Sign and normalization switches every computation and report refers to."""

    ce_sign: int = 1
    wedge_normalization: str = "division: (a1^...^ad)(v1,...,vd) = det[ai(vj)] / d!"
    sigma_embedding: str = "xi -> (xi, -xi) = xi_1 - xi_2"
    inverse_alexander_whitney: str = "d! * cup product of embedded factors"
    coface_range: str = "d_I sums cofaces 0..p+1"
    phi_sign: int = 1
    weyl_action: str = "u_i transform as simple roots: s_i(r_j) = r_j - a_ji r_i"

    def as_dict(self) -> dict:
        return asdict(self)


CONVENTIONS = Conventions()
