"""
Uplink pilot phase and MMSE channel estimation

Users transmit K mutually orthonormal pilots of length K. Every AP and the
satellite gateway project the received pilot block on the pilot of user k and
form the MMSE estimate from the known large-scale statistics.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from channel.geometry import ChannelRealization, NetworkScenario, complex_normal
from models.errors import ChannelModelError, InvalidParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PilotObservation:
    """Received pilot blocks

    y_ap: (..., N, K) one K-vector per AP; y_sat: (..., M, K).
    """
    y_ap: np.ndarray
    y_sat: np.ndarray
    pilot_book: np.ndarray  # (K, K), column k is the pilot of user k


@dataclass(frozen=True)
class ChannelEstimate:
    """MMSE estimates together with their error statistics"""
    g_hat: np.ndarray   # (..., K, N)
    h_hat: np.ndarray   # (..., K, M)
    varrho: np.ndarray  # (K, N)
    psi: np.ndarray     # (K, M, M)


@dataclass(frozen=True)
class EstimationStatistics:
    """Deterministic second-order statistics of the MMSE estimates"""
    varrho: np.ndarray    # (K, N) variance of g_hat
    psi: np.ndarray       # (K, M, M) (pK R_k + sigma_s^2 I)^-1
    r_psi: np.ndarray     # (K, M, M) R_k Psi_k
    theta: np.ndarray     # (K, M, M) R_k Psi_k R_k


def identity_pilot_book(num_users: int) -> np.ndarray:
    return np.eye(num_users, dtype=complex)


def check_pilot_book(pilot_book: np.ndarray, num_users: int) -> np.ndarray:
    book = np.asarray(pilot_book, dtype=complex)
    if book.shape != (num_users, num_users):
        raise InvalidParameterError(f"pilot book must be {num_users}x{num_users}, got {book.shape}")
    if not np.allclose(book.conj().T @ book, np.eye(num_users), atol=1e-10):
        raise InvalidParameterError("pilot sequences must be orthonormal")
    return book


def receive_pilots(
    scenario: NetworkScenario,
    channels: ChannelRealization,
    rng: np.random.Generator,
    pilot_book: Optional[np.ndarray] = None,
) -> PilotObservation:
    """y_pn = sum_k sqrt(pK) g_nk psi_k^H + n_pn, and Y_p likewise at the gateway"""
    constants = scenario.constants
    k = constants.num_users
    book = identity_pilot_book(k) if pilot_book is None else check_pilot_book(pilot_book, k)
    amplitude = math.sqrt(constants.pilot_power_w * k)
    batch = channels.batch_shape

    # row i of the received block carries pilot symbol i of every user
    y_ap = amplitude * np.einsum("...kn,ik->...ni", channels.g, book.conj())
    y_ap = y_ap + math.sqrt(constants.noise_var_ap_w) * complex_normal(rng, batch + (scenario.num_aps, k))
    y_sat = amplitude * np.einsum("...km,ik->...mi", channels.h, book.conj())
    y_sat = y_sat + math.sqrt(constants.noise_var_sat_w) * complex_normal(
        rng, batch + (scenario.num_sat_antennas, k)
    )
    return PilotObservation(y_ap=y_ap, y_sat=y_sat, pilot_book=book)


def estimation_variance(beta, p: float, num_users: int, sigma2: float):
    """varrho = pK beta^2 / (pK beta + sigma^2)"""
    if sigma2 <= 0:
        raise InvalidParameterError(f"noise variance must be positive, got {sigma2}")
    if p < 0:
        raise InvalidParameterError(f"pilot power must be non-negative, got {p}")
    beta_arr = np.asarray(beta, dtype=float)
    if np.any(beta_arr < 0):
        raise InvalidParameterError("large-scale gains must be non-negative")
    pk = p * num_users
    varrho = pk * beta_arr**2 / (pk * beta_arr + sigma2)
    return float(varrho) if varrho.ndim == 0 else varrho


def psi_matrix(r_k: np.ndarray, p: float, num_users: int, sigma_s2: float) -> np.ndarray:
    """Psi_k = (pK R_k + sigma_s^2 I)^-1 through a Cholesky solve"""
    if sigma_s2 <= 0:
        raise InvalidParameterError(f"satellite noise variance must be positive, got {sigma_s2}")
    m = r_k.shape[-1]
    system = p * num_users * np.asarray(r_k, dtype=complex) + sigma_s2 * np.eye(m)
    system = 0.5 * (system + system.conj().T)
    try:
        factor = cho_factor(system, lower=True)
    except np.linalg.LinAlgError as exc:
        raise ChannelModelError(f"pK R_k + sigma^2 I is not positive definite: {exc}") from exc
    psi = cho_solve(factor, np.eye(m, dtype=complex))
    psi = 0.5 * (psi + psi.conj().T)
    residual = np.linalg.norm(system @ psi - np.eye(m))
    if residual > 1e-10:
        raise ChannelModelError(f"Psi residual {residual:.3e} exceeds 1e-10")
    return psi


def estimation_statistics(scenario: NetworkScenario) -> EstimationStatistics:
    """varrho, Psi, R Psi and R Psi R for a scenario, computed once per scenario"""
    if "estimation" in scenario.cache:
        return scenario.cache["estimation"]
    constants = scenario.constants
    k = constants.num_users
    p = constants.pilot_power_w
    varrho = estimation_variance(scenario.beta_terrestrial, p, k, constants.noise_var_ap_w)
    psi = np.stack([
        psi_matrix(scenario.correlation[i], p, k, constants.noise_var_sat_w) for i in range(k)
    ])
    r_psi = scenario.correlation @ psi
    theta = r_psi @ scenario.correlation
    theta = 0.5 * (theta + np.conj(np.swapaxes(theta, -1, -2)))
    stats = EstimationStatistics(varrho=np.atleast_2d(varrho), psi=psi, r_psi=r_psi, theta=theta)
    scenario.cache["estimation"] = stats
    return stats


def _project(block: np.ndarray, pilot_book: np.ndarray) -> np.ndarray:
    """Project on every pilot and move the user axis in front: (..., X, K) -> (..., K, X)"""
    return np.swapaxes(block @ pilot_book, -1, -2)


def mmse_estimate_terrestrial(observation: PilotObservation, scenario: NetworkScenario) -> np.ndarray:
    """g_hat_nk = sqrt(pK) beta_nk / (pK beta_nk + sigma_a^2) * y_pn^H psi_k"""
    constants = scenario.constants
    pk = constants.pilot_power_w * constants.num_users
    beta = scenario.beta_terrestrial
    denominator = pk * beta + constants.noise_var_ap_w
    coefficient = np.divide(
        math.sqrt(pk) * beta, denominator, out=np.zeros_like(beta), where=denominator > 0
    )
    return coefficient * _project(observation.y_ap, observation.pilot_book)


def mmse_estimate_satellite(observation: PilotObservation, scenario: NetworkScenario) -> np.ndarray:
    """h_hat_k = h_bar_k + sqrt(pK) R_k Psi_k (Y_p psi_k - sqrt(pK) h_bar_k)"""
    constants = scenario.constants
    root_pk = math.sqrt(constants.pilot_power_w * constants.num_users)
    stats = estimation_statistics(scenario)
    innovation = _project(observation.y_sat, observation.pilot_book) - root_pk * scenario.los_vectors
    return scenario.los_vectors + root_pk * np.einsum("kmn,...kn->...km", stats.r_psi, innovation)


def estimate_channels(scenario: NetworkScenario, observation: PilotObservation) -> ChannelEstimate:
    stats = estimation_statistics(scenario)
    return ChannelEstimate(
        g_hat=mmse_estimate_terrestrial(observation, scenario),
        h_hat=mmse_estimate_satellite(observation, scenario),
        varrho=stats.varrho,
        psi=stats.psi,
    )
