"""
Line-based configuration files

    # comment
    radio.num_users = 4
    ga.mask_probs = 0.3, 0.3
    area.beam_center_x_km = none

Keys are `section.field` pairs of `SimConfig`; the short names declared as
field aliases (`ga.population`, `hga.eta_c`, ...) are accepted too. Values
are coerced and validated by the pydantic models; failures name the
offending key and line.
"""
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, get_args, get_origin

from pydantic import AliasChoices, BaseModel, ValidationError

from models.errors import ConfigError
from models.settings import SimConfig

logger = logging.getLogger(__name__)


def _field_name(model: type, name: str) -> Optional[str]:
    """Field addressed by `name`, either directly or through one of its aliases"""
    if name in model.model_fields:
        return name
    for field_name, info in model.model_fields.items():
        alias = info.validation_alias
        if isinstance(alias, AliasChoices) and name in alias.choices:
            return field_name
    return None


def _field_is_tuple(section: str, name: str) -> bool:
    annotation = SimConfig.model_fields[section].annotation.model_fields[name].annotation
    if get_origin(annotation) is tuple:
        return True
    return any(get_origin(arg) is tuple for arg in get_args(annotation))


def _parse_value(section: str, name: str, raw: str) -> Any:
    if raw.lower() == "none":
        return None
    if _field_is_tuple(section, name):
        return [part.strip() for part in raw.split(",") if part.strip()]
    return raw


def _parse_lines(text: str, labels: Sequence[str]) -> List[Tuple[str, str, str]]:
    """(key, raw value, line label) for every assignment"""
    entries = []
    for raw_line, label in zip(text.splitlines(), labels):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=label)
        key, value = (part.strip() for part in line.split("=", 1))
        entries.append((key, value, label))
    return entries


def _locate(error: Dict[str, Any], origins: Dict[str, str]) -> Tuple[str, str]:
    """Best key/line for a pydantic error location"""
    key = ".".join(str(part) for part in error.get("loc", ()))
    if key in origins:
        return key, origins[key]
    # model-level validators report the section only; their messages name the field
    message = str(error.get("msg", ""))
    mentioned = [candidate for candidate in origins if candidate in message]
    if mentioned:
        first = min(mentioned, key=message.index)
        return first, origins[first]
    for candidate, line in origins.items():
        if key and candidate.startswith(f"{key}."):
            return candidate, line
    return key, None


def load_config(text: str, overrides: Sequence[str] = ()) -> SimConfig:
    """Parse config text plus `key=value` overrides into a validated SimConfig"""
    labels = [str(i) for i in range(1, len(text.splitlines()) + 1)]
    entries = _parse_lines(text, labels)
    for i, override in enumerate(overrides, start=1):
        entries.extend(_parse_lines(override, [f"--set[{i}]"]))

    data: Dict[str, Dict[str, Any]] = {}
    origins: Dict[str, str] = {}
    written: Dict[str, str] = {}
    for key, raw, label in entries:
        parts = key.split(".")
        if len(parts) != 2:
            raise ConfigError("keys must look like 'section.field'", key=key, line=label)
        section, name = parts
        if section not in SimConfig.model_fields:
            raise ConfigError("unknown section", key=key, line=label)
        field = _field_name(SimConfig.model_fields[section].annotation, name)
        if field is None:
            raise ConfigError("unknown key", key=key, line=label)
        data.setdefault(section, {})[field] = _parse_value(section, field, raw)
        canonical = f"{section}.{field}"
        origins[canonical] = label
        written[canonical] = key

    try:
        return SimConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        key, line = _locate(first, origins)
        key = written.get(key, key)
        raise ConfigError(first.get("msg", str(exc)), key=key or None, line=line) from exc


def load_config_file(path: str, overrides: Sequence[str] = ()) -> SimConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    logger.info(f"Loaded configuration from {path}")
    return load_config(text, overrides)


def _format_value(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (tuple, list)):
        return ", ".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_config(config: SimConfig) -> str:
    """Canonical text form; load_config(emit_config(c)) == c"""
    lines = []
    for section in SimConfig.model_fields:
        model: BaseModel = getattr(config, section)
        for name in type(model).model_fields:
            lines.append(f"{section}.{name} = {_format_value(getattr(model, name))}")
    return "\n".join(lines) + "\n"


def apply_overrides(config: SimConfig, overrides: Sequence[str]) -> SimConfig:
    return load_config(emit_config(config), overrides)
