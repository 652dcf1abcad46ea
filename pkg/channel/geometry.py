"""
Network geometry and large-scale channel statistics

This module builds a network layout and all of its deterministic statistics:
1. Terrestrial rural path loss with log-normal shadowing (AP links)
2. Satellite path loss with the circular-aperture beam pattern
3. Slant range from elevation and altitude
4. LoS steering vectors and spatial correlation of the satellite array
5. Small-scale channel realizations drawn around those statistics
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
from scipy.special import j1

from models.errors import ChannelModelError, InvalidParameterError
from models.settings import RadioConstants, SimConfig

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def db_to_linear(value_db: ArrayLike) -> ArrayLike:
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value: ArrayLike) -> ArrayLike:
    return 10.0 * np.log10(np.asarray(value, dtype=float))


def _as_output(value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(value) == 0 else value


def terrestrial_pathloss_db(
    ap_gain_dbi: float,
    user_gain_dbi: float,
    carrier_hz: float,
    distance_m: ArrayLike,
    shadow_db: ArrayLike = 0.0,
    min_distance_m: float = 1.0,
) -> ArrayLike:
    """Rural AP-user large-scale gain in dB

    beta = H_m + H_k - 8.50 - 20log10(f_c[GHz]) - 38.63log10(r[m]) + eta
    """
    distance = np.asarray(distance_m, dtype=float)
    if carrier_hz <= 0:
        raise InvalidParameterError(f"carrier frequency must be positive, got {carrier_hz}")
    if np.any(distance <= 0):
        raise InvalidParameterError("AP-user distances must be positive")
    distance = np.maximum(distance, min_distance_m)
    gain_db = (
        ap_gain_dbi
        + user_gain_dbi
        - 8.50
        - 20.0 * math.log10(carrier_hz / 1e9)
        - 38.63 * np.log10(distance)
        + np.asarray(shadow_db, dtype=float)
    )
    return _as_output(gain_db)


def satellite_pathloss_db(
    sat_gain_dbi: float,
    user_gain_dbi: float,
    beam_gain_db: ArrayLike,
    carrier_hz: float,
    slant_range_m: ArrayLike,
    shadow_db: ArrayLike = 0.0,
) -> ArrayLike:
    """Satellite-user large-scale gain in dB

    beta_k = H + H_k + H~_k - 32.45 - 20log10(f_c[GHz] * r_k[m]) + eta_k
    """
    slant = np.asarray(slant_range_m, dtype=float)
    if carrier_hz <= 0:
        raise InvalidParameterError(f"carrier frequency must be positive, got {carrier_hz}")
    if np.any(slant <= 0):
        raise InvalidParameterError("slant ranges must be positive")
    gain_db = (
        sat_gain_dbi
        + user_gain_dbi
        + np.asarray(beam_gain_db, dtype=float)
        - 32.45
        - 20.0 * np.log10((carrier_hz / 1e9) * slant)
        + np.asarray(shadow_db, dtype=float)
    )
    return _as_output(gain_db)


def beam_pattern_gain(angle_rad: ArrayLike, aperture_radius_m: float, wavelength_m: float) -> ArrayLike:
    """Normalized circular-aperture pattern 4|J1(x)/x|^2, x = (2pi/lambda) a sin(phi)

    Boresight (x = 0) takes the analytic limit 1.
    """
    angle = np.asarray(angle_rad, dtype=float)
    if np.any(angle < 0) or np.any(angle > math.pi / 2 + 1e-12):
        raise InvalidParameterError("beam angle must lie in [0, pi/2]")
    if aperture_radius_m <= 0 or wavelength_m <= 0:
        raise InvalidParameterError("aperture radius and wavelength must be positive")
    x = (2.0 * math.pi / wavelength_m) * aperture_radius_m * np.sin(angle)
    safe_x = np.where(x > 1e-12, x, 1.0)
    gain = np.where(x > 1e-12, 4.0 * np.abs(j1(safe_x) / safe_x) ** 2, 1.0)
    return _as_output(gain)


def slant_range(elevation_rad: ArrayLike, altitude_m: float, earth_radius_m: float) -> ArrayLike:
    """Distance to a satellite at altitude z0 seen under elevation eps

    d = sqrt(R^2 sin^2(eps) + z0^2 + 2 z0 R) - R sin(eps)
    """
    elevation = np.asarray(elevation_rad, dtype=float)
    if np.any(elevation <= 0) or np.any(elevation > math.pi / 2 + 1e-12):
        raise InvalidParameterError("elevation must lie in (0, pi/2]")
    sin_e = np.sin(elevation)
    distance = (
        np.sqrt(earth_radius_m**2 * sin_e**2 + altitude_m**2 + 2.0 * altitude_m * earth_radius_m)
        - earth_radius_m * sin_e
    )
    return _as_output(distance)


def _los_share(rician_factor: float) -> float:
    if math.isinf(rician_factor):
        return 1.0
    return rician_factor / (1.0 + rician_factor)


def steering_vector(array_cosine: float, num_antennas: int) -> np.ndarray:
    """Half-wavelength ULA response, unit-modulus entries"""
    return np.exp(1j * math.pi * array_cosine * np.arange(num_antennas))


def build_spatial_correlation(
    beta_k: float,
    array_cosine: float,
    num_antennas: int,
    rician_factor: float,
    rho: float,
) -> np.ndarray:
    """NLoS correlation R_k = beta_k/(1+kappa) * C(rho)

    C[i, j] = rho^|i-j| exp(j pi cos(psi) (i-j)); trace(R_k) = M beta_k / (1+kappa).
    """
    if not 0.0 <= rho < 1.0:
        raise InvalidParameterError(f"correlation rho must lie in [0, 1), got {rho}")
    nlos_share = 1.0 - _los_share(rician_factor)
    idx = np.arange(num_antennas)
    lag = idx[:, None] - idx[None, :]
    corr = (rho ** np.abs(lag)) * np.exp(1j * math.pi * array_cosine * lag)
    r_k = beta_k * nlos_share * corr
    return 0.5 * (r_k + r_k.conj().T)


def build_los_vector(beta_k: float, array_cosine: float, num_antennas: int, rician_factor: float) -> np.ndarray:
    """LoS mean h_bar_k with ||h_bar_k||^2 = M beta_k kappa/(1+kappa)"""
    amplitude = math.sqrt(beta_k * _los_share(rician_factor))
    return amplitude * steering_vector(array_cosine, num_antennas)


def psd_square_root(matrix: np.ndarray, tolerance: float = 1e-10) -> np.ndarray:
    """Hermitian square root of a PSD matrix (batched over leading axes)"""
    hermitian = 0.5 * (matrix + np.conj(np.swapaxes(matrix, -1, -2)))
    eigvals, eigvecs = np.linalg.eigh(hermitian)
    scale = np.maximum(np.real(np.trace(hermitian, axis1=-2, axis2=-1)), np.finfo(float).tiny)
    if np.any(eigvals.min(axis=-1) < -tolerance * scale):
        raise ChannelModelError("correlation matrix is not positive semidefinite")
    roots = np.sqrt(np.clip(eigvals, 0.0, None))
    return (eigvecs * roots[..., None, :]) @ np.conj(np.swapaxes(eigvecs, -1, -2))


@dataclass(frozen=True, eq=False)
class NetworkScenario:
    """Deterministic statistics layer of one network instance"""
    constants: RadioConstants
    ap_positions: np.ndarray       # (N, 3) m
    user_positions: np.ndarray     # (K, 3) m
    sat_position: np.ndarray       # (3,) m
    beta_terrestrial: np.ndarray   # (K, N) linear
    beta_sat: np.ndarray           # (K,) linear
    los_vectors: np.ndarray        # (K, M) complex
    correlation: np.ndarray        # (K, M, M) complex
    rician_factor: float = 10.0
    cache: Dict[str, Any] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        k, n, m = self.num_users, self.num_aps, self.num_sat_antennas
        expected = {
            "ap_positions": (n, 3),
            "user_positions": (k, 3),
            "sat_position": (3,),
            "beta_terrestrial": (k, n),
            "beta_sat": (k,),
            "los_vectors": (k, m),
            "correlation": (k, m, m),
        }
        for name, shape in expected.items():
            actual = getattr(self, name).shape
            if actual != shape:
                raise InvalidParameterError(f"{name} has shape {actual}, expected {shape}")
        if np.any(self.beta_terrestrial <= 0) or np.any(self.beta_sat <= 0):
            raise ChannelModelError("large-scale gains must be strictly positive")

    @property
    def num_users(self) -> int:
        return self.constants.num_users

    @property
    def num_aps(self) -> int:
        return self.constants.num_aps

    @property
    def num_sat_antennas(self) -> int:
        return self.constants.num_sat_antennas

    @property
    def correlation_roots(self) -> np.ndarray:
        """R_k^{1/2} for every user, computed once"""
        if "correlation_roots" not in self.cache:
            self.cache["correlation_roots"] = psd_square_root(self.correlation)
        return self.cache["correlation_roots"]


@dataclass(frozen=True)
class ChannelRealization:
    """One (or a batch of) small-scale channel draws

    g has shape (..., K, N) and h has shape (..., K, M).
    """
    g: np.ndarray
    h: np.ndarray

    @property
    def batch_shape(self) -> Tuple[int, ...]:
        return self.g.shape[:-2]


def complex_normal(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    parts = rng.standard_normal((2,) + tuple(shape))
    return (parts[0] + 1j * parts[1]) / math.sqrt(2.0)


def generate_scenario(config: SimConfig, rng: np.random.Generator) -> NetworkScenario:
    """Place APs and users, then derive every large-scale statistic"""
    constants = config.constants()
    area = config.area
    channel = config.channel
    k, n, m = constants.num_users, constants.num_aps, constants.num_sat_antennas
    x_m, y_m = area.x_km * 1e3, area.y_km * 1e3

    ap_xy = rng.uniform((0.0, 0.0), (x_m, y_m), size=(n, 2))
    user_xy = rng.uniform((0.0, 0.0), (x_m, y_m), size=(k, 2))
    terrestrial_shadow = rng.normal(0.0, channel.terrestrial_shadow_std_db, size=(k, n))
    sat_shadow = rng.normal(0.0, channel.sat_shadow_std_db, size=k)

    ap_positions = np.column_stack([ap_xy, np.full(n, area.ap_height_m)])
    user_positions = np.column_stack([user_xy, np.full(k, area.user_height_m)])
    sat_position = np.array([area.sat_x_km, area.sat_y_km, area.sat_z_km]) * 1e3

    distances = np.linalg.norm(user_positions[:, None, :] - ap_positions[None, :, :], axis=-1)
    beta_terrestrial_db = terrestrial_pathloss_db(
        constants.ap_antenna_gain_dbi,
        constants.user_antenna_gain_dbi,
        constants.carrier_hz,
        np.maximum(distances, channel.min_distance_m),
        terrestrial_shadow,
        min_distance_m=channel.min_distance_m,
    )

    to_sat = sat_position[None, :] - user_positions
    elevation = np.arctan2(to_sat[:, 2], np.linalg.norm(to_sat[:, :2], axis=1))
    ranges = slant_range(elevation, constants.sat_altitude_m, constants.earth_radius_m)

    beam_x = x_m / 2.0 if area.beam_center_x_km is None else area.beam_center_x_km * 1e3
    beam_y = y_m / 2.0 if area.beam_center_y_km is None else area.beam_center_y_km * 1e3
    to_center = np.array([beam_x, beam_y, 0.0]) - sat_position
    to_user = -to_sat
    cos_phi = (to_user @ to_center) / (np.linalg.norm(to_user, axis=1) * np.linalg.norm(to_center))
    off_axis = np.arccos(np.clip(cos_phi, -1.0, 1.0))
    beam_gain = np.maximum(
        beam_pattern_gain(off_axis, constants.aperture_radius_m, constants.wavelength_m), 1e-30
    )

    beta_sat_db = satellite_pathloss_db(
        constants.sat_antenna_gain_dbi,
        constants.user_antenna_gain_dbi,
        linear_to_db(beam_gain),
        constants.carrier_hz,
        ranges,
        sat_shadow,
    )
    beta_terrestrial = db_to_linear(beta_terrestrial_db)
    beta_sat = np.atleast_1d(db_to_linear(beta_sat_db))

    array_cosines = to_user[:, 0] / np.linalg.norm(to_user, axis=1)
    los_vectors = np.stack([
        build_los_vector(beta_sat[i], array_cosines[i], m, channel.rician_factor) for i in range(k)
    ])
    correlation = np.stack([
        build_spatial_correlation(
            beta_sat[i], array_cosines[i], m, channel.rician_factor, channel.correlation_rho
        )
        for i in range(k)
    ])

    logger.debug(
        f"Scenario K={k} N={n} M={m}: beta_sat range "
        f"[{linear_to_db(beta_sat.min()):.1f}, {linear_to_db(beta_sat.max()):.1f}] dB"
    )
    return NetworkScenario(
        constants=constants,
        ap_positions=ap_positions,
        user_positions=user_positions,
        sat_position=sat_position,
        beta_terrestrial=beta_terrestrial,
        beta_sat=beta_sat,
        los_vectors=los_vectors,
        correlation=correlation,
        rician_factor=channel.rician_factor,
    )


def sample_channels(
    scenario: NetworkScenario,
    rng: np.random.Generator,
    size: Optional[int] = None,
) -> ChannelRealization:
    """Draw g_nk ~ CN(0, beta_nk) and h_k = h_bar_k + R_k^{1/2} z"""
    batch = () if size is None else (int(size),)
    k, n, m = scenario.num_users, scenario.num_aps, scenario.num_sat_antennas
    g = np.sqrt(scenario.beta_terrestrial) * complex_normal(rng, batch + (k, n))
    z = complex_normal(rng, batch + (k, m))
    h = scenario.los_vectors + np.einsum("kmn,...kn->...km", scenario.correlation_roots, z)
    return ChannelRealization(g=g, h=h)
