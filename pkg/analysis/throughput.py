"""
Uplink ergodic throughput with MRC at the gateway and at every AP

Two independent paths compute the use-and-then-forget SINR:
1. A closed form built from the large-scale and estimation statistics
2. A Monte-Carlo oracle that samples channels, runs the pilot phase and
   averages the combined-signal expectations
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from channel.estimation import ChannelEstimate, estimate_channels, estimation_statistics, receive_pilots
from channel.geometry import NetworkScenario, sample_channels
from config import Config
from models.errors import InvalidParameterError
from models.results import EvaluationMethod, RateReport
from models.settings import RadioConstants

logger = logging.getLogger(__name__)


def _binary_flags(values, name: str) -> np.ndarray:
    flags = np.asarray(values)
    if flags.ndim != 1 or not np.all((flags == 0) | (flags == 1)):
        raise InvalidParameterError(f"{name} must be a 1-D vector of 0/1 flags")
    return flags.astype(np.uint8)


@dataclass(frozen=True)
class AssociationPattern:
    """Per-user service flags: alpha for the APs, alpha_tilde for the satellite"""
    alpha: np.ndarray
    alpha_tilde: np.ndarray

    def __post_init__(self):
        alpha = _binary_flags(self.alpha, "alpha")
        alpha_tilde = _binary_flags(self.alpha_tilde, "alpha_tilde")
        if alpha.shape != alpha_tilde.shape:
            raise InvalidParameterError("alpha and alpha_tilde must have the same length")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "alpha_tilde", alpha_tilde)

    @property
    def num_users(self) -> int:
        return int(self.alpha.shape[0])

    @property
    def served(self) -> np.ndarray:
        return (self.alpha | self.alpha_tilde).astype(bool)

    @classmethod
    def full(cls, num_users: int) -> "AssociationPattern":
        ones = np.ones(num_users, dtype=np.uint8)
        return cls(alpha=ones, alpha_tilde=ones.copy())


@dataclass(frozen=True)
class PowerAllocation:
    """Normalized powers xi in [0, 1]; p_k = xi_k P_max,k"""
    xi: np.ndarray
    p_max: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        p_max = np.asarray(self.p_max, dtype=float)
        if xi.shape != p_max.shape or xi.ndim != 1:
            raise InvalidParameterError("xi and p_max must be vectors of the same length")
        if np.any(xi < 0) or np.any(xi > 1):
            raise InvalidParameterError("xi entries must lie in [0, 1]")
        if np.any(p_max < 0):
            raise InvalidParameterError("p_max entries must be non-negative")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "p_max", p_max)

    @property
    def powers(self) -> np.ndarray:
        return self.xi * self.p_max

    @classmethod
    def full(cls, constants: RadioConstants) -> "PowerAllocation":
        p_max = np.asarray(constants.data_power_max_w, dtype=float)
        return cls(xi=np.ones_like(p_max), p_max=p_max)


@dataclass(frozen=True)
class LinkStatistics:
    """Closed-form building blocks, independent of association and power

    Signal terms are per user; interference terms are indexed [k, k'] and
    multiply p_k' together with the association flags of k and k'.
    """
    sat_signal: np.ndarray          # ||h_bar_k||^2 + pK tr(Theta_k)
    ap_signal: np.ndarray           # sum_n varrho_nk
    sat_interference: np.ndarray    # (K, K)
    ap_interference: np.ndarray     # (K, K) sum_n varrho_nk beta_nk'
    noise_var_sat_w: float
    noise_var_ap_w: float


@dataclass(frozen=True)
class MrcDetectors:
    """Maximum-ratio combiners: w_k = h_hat_k and w_nk = g_hat_nk"""
    w_sat: np.ndarray
    w_ap: np.ndarray


def link_statistics(scenario: NetworkScenario) -> LinkStatistics:
    """Aggregate every association-free term of the closed-form SINR once"""
    if "link" in scenario.cache:
        return scenario.cache["link"]
    constants = scenario.constants
    k = constants.num_users
    pk = constants.pilot_power_w * k
    est = estimation_statistics(scenario)
    h_bar = scenario.los_vectors
    corr = scenario.correlation
    theta = est.theta

    gram = h_bar.conj() @ h_bar.T                                   # [k, k'] = h_bar_k^H h_bar_k'
    coherent = np.abs(gram) ** 2
    np.fill_diagonal(coherent, 0.0)
    los_through_theta = np.einsum("kjm,jm->kj", np.einsum("kmn,jn->kjm", theta, h_bar), h_bar.conj()).real
    los_through_r = np.einsum("km,kjm->kj", h_bar.conj(), np.einsum("jmn,kn->kjm", corr, h_bar)).real
    trace_r_theta = (corr.reshape(k, -1) @ np.swapaxes(theta, -1, -2).reshape(k, -1).T).T.real

    sat_interference = coherent + pk * los_through_theta + los_through_r + pk * trace_r_theta
    sat_signal = np.sum(np.abs(h_bar) ** 2, axis=1) + pk * np.trace(theta, axis1=1, axis2=2).real
    ap_signal = est.varrho.sum(axis=1)
    ap_interference = est.varrho @ scenario.beta_terrestrial.T

    stats = LinkStatistics(
        sat_signal=sat_signal,
        ap_signal=ap_signal,
        sat_interference=sat_interference,
        ap_interference=ap_interference,
        noise_var_sat_w=constants.noise_var_sat_w,
        noise_var_ap_w=constants.noise_var_ap_w,
    )
    scenario.cache["link"] = stats
    return stats


def signal_term(stats: LinkStatistics, alpha: np.ndarray, alpha_tilde: np.ndarray, powers: np.ndarray) -> np.ndarray:
    """Coherent-gain numerator p_k (alpha_tilde_k s_k + alpha_k a_k)^2; broadcasts like the SINR"""
    a = np.asarray(alpha, dtype=float)
    at = np.asarray(alpha_tilde, dtype=float)
    return np.asarray(powers, dtype=float) * (at * stats.sat_signal + a * stats.ap_signal) ** 2


def sinr_closed_form_batch(
    stats: LinkStatistics,
    alpha: np.ndarray,
    alpha_tilde: np.ndarray,
    powers: np.ndarray,
) -> np.ndarray:
    """Closed-form SINR of every user for one or a batch of (alpha, alpha_tilde, p)

    All three inputs broadcast over a leading batch axis: shape (K,) or (B, K).
    """
    a = np.asarray(alpha, dtype=float)
    at = np.asarray(alpha_tilde, dtype=float)
    p = np.asarray(powers, dtype=float)
    numerator = signal_term(stats, a, at, p)
    interference = (
        at * ((p * at) @ stats.sat_interference.T)
        + a * ((p * a) @ stats.ap_interference.T)
    )
    noise = at * stats.noise_var_sat_w * stats.sat_signal + a * stats.noise_var_ap_w * stats.ap_signal
    denominator = interference + noise
    return np.divide(numerator, denominator, out=np.zeros_like(numerator), where=denominator > 0)


def sinr_closed_form(
    scenario: NetworkScenario,
    estimate_stats: Optional[LinkStatistics],
    assoc: AssociationPattern,
    powers: PowerAllocation,
    user_k: int,
) -> float:
    """Closed-form SINR of one user; 0 when the user is unserved"""
    if not 0 <= user_k < scenario.num_users:
        raise InvalidParameterError(f"user index {user_k} out of range")
    stats = link_statistics(scenario) if estimate_stats is None else estimate_stats
    sinr = sinr_closed_form_batch(stats, assoc.alpha, assoc.alpha_tilde, powers.powers)
    return float(sinr[user_k])


def rate_from_sinr(sinr, constants: RadioConstants):
    """B (1 - K/tau_c) log2(1 + sinr) in Mbps"""
    if constants.coherence_symbols <= constants.num_users:
        raise InvalidParameterError(
            f"tau_c ({constants.coherence_symbols}) must exceed K ({constants.num_users})"
        )
    sinr_arr = np.asarray(sinr, dtype=float)
    if np.any(sinr_arr < 0):
        raise InvalidParameterError("SINR must be non-negative")
    rate = (constants.bandwidth_hz / 1e6) * constants.prelog * np.log2(1.0 + sinr_arr)
    return float(rate) if rate.ndim == 0 else rate


def mrc_detectors(estimate: ChannelEstimate) -> MrcDetectors:
    return MrcDetectors(w_sat=estimate.h_hat, w_ap=estimate.g_hat)


def sinr_monte_carlo(
    scenario: NetworkScenario,
    assoc: AssociationPattern,
    powers: PowerAllocation,
    n_real: int,
    rng: np.random.Generator,
    batch_size: int = Config.MC_BATCH_SIZE,
) -> Tuple[np.ndarray, List[str]]:
    """Use-and-then-forget SINR from sample means over n_real realizations

    Realizations are processed in chunks; chunk sums are stacked and reduced
    once so the result does not depend on accumulation order.
    """
    if n_real < 1:
        raise InvalidParameterError(f"n_real must be positive, got {n_real}")
    diagnostics = []
    if n_real < Config.MIN_MC_REALIZATIONS:
        message = f"only {n_real} Monte-Carlo realizations; at least {Config.MIN_MC_REALIZATIONS} recommended"
        logger.warning(message)
        diagnostics.append(message)

    k = scenario.num_users
    a = assoc.alpha.astype(float)
    at = assoc.alpha_tilde.astype(float)
    p = powers.powers
    sat_weight = np.outer(at, at)
    ap_weight = np.outer(a, a)

    second_moments, self_terms, sat_norms, ap_norms = [], [], [], []
    for start in range(0, n_real, batch_size):
        size = min(batch_size, n_real - start)
        channels = sample_channels(scenario, rng, size=size)
        estimate = estimate_channels(scenario, receive_pilots(scenario, channels, rng))
        detectors = mrc_detectors(estimate)
        combined = (
            sat_weight * np.einsum("bkm,bjm->bkj", detectors.w_sat.conj(), channels.h)
            + ap_weight * np.einsum("bkn,bjn->bkj", detectors.w_ap.conj(), channels.g)
        )
        second_moments.append(np.sum(np.abs(combined) ** 2, axis=0))
        self_terms.append(np.diagonal(combined, axis1=1, axis2=2))
        sat_norms.append(np.sum(np.abs(detectors.w_sat) ** 2, axis=(0, 2)))
        ap_norms.append(np.sum(np.abs(detectors.w_ap) ** 2, axis=(0, 2)))

    mean_sq = np.sum(np.stack(second_moments), axis=0) / n_real
    own = np.concatenate(self_terms, axis=0)
    own_mean = own.mean(axis=0)
    own_var = np.mean(np.abs(own - own_mean) ** 2, axis=0)
    mean_sat_norm = np.sum(np.stack(sat_norms), axis=0) / n_real
    mean_ap_norm = np.sum(np.stack(ap_norms), axis=0) / n_real

    numerator = p * np.abs(own_mean) ** 2
    cross = mean_sq @ p - p * np.diagonal(mean_sq)
    interference = cross + p * own_var
    constants = scenario.constants
    noise = at * constants.noise_var_sat_w * mean_sat_norm + a * constants.noise_var_ap_w * mean_ap_norm
    denominator = interference + noise
    served = assoc.served
    sinr = np.zeros(k)
    valid = served & (denominator > 0)
    sinr[valid] = numerator[valid] / denominator[valid]
    return sinr, diagnostics


def all_rates(
    scenario: NetworkScenario,
    assoc: AssociationPattern,
    powers: Optional[PowerAllocation] = None,
    method: Union[EvaluationMethod, str] = EvaluationMethod.CLOSED_FORM,
    n_real: int = 50_000,
    rng: Optional[np.random.Generator] = None,
    batch_size: int = Config.MC_BATCH_SIZE,
) -> RateReport:
    """SINR and throughput of every user"""
    method = EvaluationMethod(method)
    if assoc.num_users != scenario.num_users:
        raise InvalidParameterError(
            f"association covers {assoc.num_users} users, scenario has {scenario.num_users}"
        )
    powers = PowerAllocation.full(scenario.constants) if powers is None else powers

    if method == EvaluationMethod.CLOSED_FORM:
        sinr = sinr_closed_form_batch(link_statistics(scenario), assoc.alpha, assoc.alpha_tilde, powers.powers)
        diagnostics, realizations = [], 0
    else:
        if rng is None:
            raise InvalidParameterError("Monte-Carlo evaluation needs a random stream")
        sinr, diagnostics = sinr_monte_carlo(scenario, assoc, powers, n_real, rng, batch_size)
        realizations = n_real

    rates = rate_from_sinr(sinr, scenario.constants)
    return RateReport(
        sinr=[float(v) for v in sinr],
        rate_mbps=[float(v) for v in np.atleast_1d(rates)],
        method=method,
        mc_realizations=realizations,
        diagnostics=diagnostics,
    )
