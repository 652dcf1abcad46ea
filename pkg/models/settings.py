"""
Typed settings for scenarios, optimizers and runs

The file-facing models use engineering units (MHz, GHz, dBW, km). The numeric
code consumes `RadioConstants`, which is expressed in SI units.
"""
import math
from enum import Enum
from typing import Optional, Tuple

from pydantic import AliasChoices, BaseModel, ConfigDict, Field, model_validator

from config import Config, PHYSICAL_CONSTANTS


class UtilityKind(str, Enum):
    """System utilities of the fairness problem"""
    ARITHMETIC = "arithmetic"
    GEOMETRIC = "geometric"
    MAXMIN = "maxmin"


class OptimizerKind(str, Enum):
    """Available association optimizers"""
    BCGA = "bcga"
    HGA = "hga"
    EXHAUSTIVE = "exhaustive"


class ParentSelection(str, Enum):
    """Crossover parent selection schemes"""
    UNIFORM = "uniform"
    TOURNAMENT = "tournament"


def dbw_to_w(value_dbw: float) -> float:
    return 10.0 ** (value_dbw / 10.0)


def noise_variance_w(bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal noise power -174 dBm/Hz + 10log10(B) + NF, in watts"""
    noise_dbm = (
        PHYSICAL_CONSTANTS["thermal_noise_dbm_per_hz"]
        + 10.0 * math.log10(bandwidth_hz)
        + noise_figure_db
    )
    return 10.0 ** ((noise_dbm - 30.0) / 10.0)


class RadioConstants(BaseModel):
    """Radio constants of one network, SI units"""
    model_config = ConfigDict(frozen=True)

    bandwidth_hz: float = Field(gt=0)
    carrier_hz: float = Field(gt=0)
    coherence_symbols: int = Field(ge=1)
    num_users: int = Field(ge=1)
    num_aps: int = Field(ge=1)
    num_sat_antennas: int = Field(ge=1)
    pilot_power_w: float = Field(ge=0)
    data_power_max_w: Tuple[float, ...]
    noise_var_ap_w: float = Field(ge=0)
    noise_var_sat_w: float = Field(ge=0)
    ap_antenna_gain_dbi: float
    user_antenna_gain_dbi: float
    sat_antenna_gain_dbi: float
    aperture_radius_m: float = Field(gt=0)
    sat_altitude_m: float = Field(gt=0)
    earth_radius_m: float = Field(gt=0)

    @model_validator(mode="after")
    def _check_consistency(self) -> "RadioConstants":
        if self.coherence_symbols <= self.num_users:
            raise ValueError(
                f"coherence_symbols ({self.coherence_symbols}) must exceed num_users ({self.num_users})"
            )
        if len(self.data_power_max_w) != self.num_users:
            raise ValueError(
                f"data_power_max_w has {len(self.data_power_max_w)} entries, expected {self.num_users}"
            )
        if any(p < 0 for p in self.data_power_max_w):
            raise ValueError("data_power_max_w entries must be non-negative")
        return self

    @property
    def wavelength_m(self) -> float:
        return PHYSICAL_CONSTANTS["speed_of_light_mps"] / self.carrier_hz

    @property
    def carrier_ghz(self) -> float:
        return self.carrier_hz / 1e9

    @property
    def prelog(self) -> float:
        """Fraction of the coherence block left for data, 1 - K/tau_c"""
        return 1.0 - self.num_users / self.coherence_symbols


class RadioSettings(BaseModel):
    """[radio] section"""
    model_config = ConfigDict(extra="forbid")

    bandwidth_mhz: float = Field(100.0, gt=0)
    carrier_ghz: float = Field(20.0, gt=0)
    tau_c: int = Field(10000, ge=1)
    num_users: int = Field(20, ge=1)
    num_aps: int = Field(10, ge=1)
    num_sat_antennas: int = Field(100, ge=1)
    data_power_dbw: float = 20.0
    pilot_power_dbw: Optional[float] = None  # defaults to the data power
    noise_figure_ap_db: float = Field(6.0, ge=0)
    noise_figure_sat_db: float = Field(1.3, ge=0)
    ap_antenna_gain_dbi: float = 10.0
    user_antenna_gain_dbi: float = 10.0
    sat_antenna_gain_dbi: float = 26.9
    aperture_radius_m: float = Field(0.2, gt=0)
    earth_radius_km: float = Field(6371.0, gt=0)

    @model_validator(mode="after")
    def _check_prelog(self) -> "RadioSettings":
        if self.tau_c <= self.num_users:
            raise ValueError(
                f"radio.tau_c ({self.tau_c}) must exceed radio.num_users ({self.num_users}); "
                "the data prelog 1 - K/tau_c would be non-positive"
            )
        return self

    def to_constants(self, sat_altitude_m: float) -> RadioConstants:
        bandwidth_hz = self.bandwidth_mhz * 1e6
        data_power_w = dbw_to_w(self.data_power_dbw)
        pilot_dbw = self.data_power_dbw if self.pilot_power_dbw is None else self.pilot_power_dbw
        return RadioConstants(
            bandwidth_hz=bandwidth_hz,
            carrier_hz=self.carrier_ghz * 1e9,
            coherence_symbols=self.tau_c,
            num_users=self.num_users,
            num_aps=self.num_aps,
            num_sat_antennas=self.num_sat_antennas,
            pilot_power_w=dbw_to_w(pilot_dbw),
            data_power_max_w=tuple([data_power_w] * self.num_users),
            noise_var_ap_w=noise_variance_w(bandwidth_hz, self.noise_figure_ap_db),
            noise_var_sat_w=noise_variance_w(bandwidth_hz, self.noise_figure_sat_db),
            ap_antenna_gain_dbi=self.ap_antenna_gain_dbi,
            user_antenna_gain_dbi=self.user_antenna_gain_dbi,
            sat_antenna_gain_dbi=self.sat_antenna_gain_dbi,
            aperture_radius_m=self.aperture_radius_m,
            sat_altitude_m=sat_altitude_m,
            earth_radius_m=self.earth_radius_km * 1e3,
        )


class AreaSettings(BaseModel):
    """[area] section: deployment rectangle, heights and satellite position"""
    model_config = ConfigDict(extra="forbid")

    x_km: float = Field(5.0, gt=0)
    y_km: float = Field(3.0, gt=0)
    ap_height_m: float = Field(10.0, ge=0)
    user_height_m: float = Field(1.5, ge=0)
    sat_x_km: float = 300.0
    sat_y_km: float = 350.0
    sat_z_km: float = Field(400.0, gt=0)
    beam_center_x_km: Optional[float] = None  # area centre when unset
    beam_center_y_km: Optional[float] = None


class ChannelSettings(BaseModel):
    """[channel] section: fading statistics"""
    model_config = ConfigDict(extra="forbid")

    rician_factor: float = Field(10.0, ge=0)
    correlation_rho: float = Field(0.5, ge=0, lt=1)
    terrestrial_shadow_std_db: float = Field(7.0, ge=0)
    sat_shadow_std_db: float = Field(4.0, ge=0)
    min_distance_m: float = Field(1.0, gt=0)


class OptimizerSettings(BaseModel):
    """[optimizer] section"""
    model_config = ConfigDict(extra="forbid")

    utility: UtilityKind = UtilityKind.MAXMIN
    method: OptimizerKind = OptimizerKind.BCGA
    include_zero_index: bool = True
    max_exhaustive_bits: int = Field(Config.EXHAUSTIVE_MAX_BITS, ge=2)


class GaConfig(BaseModel):
    """Binary-coded GA hyperparameters ([ga] section)"""
    model_config = ConfigDict(extra="forbid")

    population_q: int = Field(50, ge=2, validation_alias=AliasChoices("population_q", "population"))
    max_generations: int = Field(300, ge=0, validation_alias=AliasChoices("max_generations", "s_max"))
    crossover_rate: float = Field(0.9, gt=0, le=1, validation_alias=AliasChoices("crossover_rate", "p_c"))
    mutation_rate: float = Field(0.2, gt=0, le=1, validation_alias=AliasChoices("mutation_rate", "p_m"))
    mask_probs: Tuple[float, float] = (1.0 / 3.0, 1.0 / 3.0)
    mutate_fraction: float = Field(0.1, gt=0, le=1)
    parent_selection: ParentSelection = ParentSelection.UNIFORM
    adaptive_masks: bool = False
    stall_generations: int = Field(20, ge=0)  # mutant slots take random newcomers after this many flat generations; 0 disables
    seed: Optional[int] = Field(None, ge=0)  # falls back to run.seed

    @model_validator(mode="after")
    def _check_mask_probs(self) -> "GaConfig":
        eps1, eps2 = self.mask_probs
        if eps1 < 0 or eps2 < 0 or eps1 + eps2 > 1.0 + 1e-12:
            raise ValueError(
                f"ga.mask_probs ({eps1}, {eps2}) must be non-negative with a sum of at most 1"
            )
        return self

    @property
    def offspring_count(self) -> int:
        """n_c = 2 floor(p_c Q / 2)"""
        return 2 * int(math.floor(self.crossover_rate * self.population_q / 2.0))

    @property
    def mutant_count(self) -> int:
        """n_m = floor(p_m Q)"""
        return int(math.floor(self.mutation_rate * self.population_q))

    def max_mutate_count(self, genome_length: int) -> int:
        return max(1, int(math.ceil(self.mutate_fraction * genome_length)))


class HgaSettings(BaseModel):
    """[hga] section: the real-coded additions on top of [ga]"""
    model_config = ConfigDict(extra="forbid")

    sbx_eta: float = Field(15.0, gt=0, validation_alias=AliasChoices("sbx_eta", "eta_c"))
    polymut_eta: float = Field(20.0, gt=0, validation_alias=AliasChoices("polymut_eta", "eta_m"))
    real_mutation_rate: Optional[float] = Field(None, gt=0, le=1)  # 1/K when unset
    literal_counts: bool = False
    freeze_power: bool = False


class HgaConfig(HgaSettings, GaConfig):
    """Hybrid GA hyperparameters: [ga] and [hga] in one model"""

    @property
    def literal_pair_count(self) -> int:
        """Crossover loop count 2 floor((p_c + eta_c) Q / 4) of the hybrid listing"""
        return 2 * int(math.floor((self.crossover_rate + self.sbx_eta) * self.population_q / 4.0))

    @property
    def literal_mutant_count(self) -> int:
        return int(math.floor((self.mutation_rate + self.polymut_eta) * self.population_q / 2.0))


class McSettings(BaseModel):
    """[mc] section: Monte-Carlo oracle"""
    model_config = ConfigDict(extra="forbid")

    realizations: int = Field(50_000, ge=1)
    batch_size: int = Field(Config.MC_BATCH_SIZE, ge=1)
    tolerance: float = Field(0.02, gt=0)
    pattern: str = ""  # 2K-bit association string for `validate`; all ones when empty

    @model_validator(mode="after")
    def _check_pattern(self) -> "McSettings":
        if self.pattern and set(self.pattern) - {"0", "1"}:
            raise ValueError(f"mc.pattern must contain only 0/1 characters, got '{self.pattern}'")
        return self


class RunSettings(BaseModel):
    """[run] section"""
    model_config = ConfigDict(extra="forbid")

    seed: int = Field(Config.DEFAULT_SEED, ge=0)
    output_dir: str = Config.OUTPUT_DIR
    workers: int = Field(Config.WORKERS, ge=1)


class SimConfig(BaseModel):
    """Complete simulation configuration"""
    model_config = ConfigDict(extra="forbid")

    radio: RadioSettings = Field(default_factory=RadioSettings)
    area: AreaSettings = Field(default_factory=AreaSettings)
    channel: ChannelSettings = Field(default_factory=ChannelSettings)
    optimizer: OptimizerSettings = Field(default_factory=OptimizerSettings)
    ga: GaConfig = Field(default_factory=GaConfig)
    hga: HgaSettings = Field(default_factory=HgaSettings)
    mc: McSettings = Field(default_factory=McSettings)
    run: RunSettings = Field(default_factory=RunSettings)

    @model_validator(mode="after")
    def _check_pattern_length(self) -> "SimConfig":
        if self.mc.pattern and len(self.mc.pattern) != 2 * self.radio.num_users:
            raise ValueError(
                f"mc.pattern has {len(self.mc.pattern)} bits, expected 2 * radio.num_users = "
                f"{2 * self.radio.num_users}"
            )
        return self

    def constants(self) -> RadioConstants:
        return self.radio.to_constants(sat_altitude_m=self.area.sat_z_km * 1e3)

    def ga_config(self) -> GaConfig:
        seed = self.run.seed if self.ga.seed is None else self.ga.seed
        return self.ga.model_copy(update={"seed": seed})

    def hga_config(self) -> HgaConfig:
        return HgaConfig(**self.ga_config().model_dump(), **self.hga.model_dump())
