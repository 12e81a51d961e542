"""
Noise Models
Corruption configuration and identifier rename maps
"""

from dataclasses import dataclass, field
from typing import Dict

from config import config
from tools.error_handler import ValidationError
from tools.input_validator import InputValidator


@dataclass(frozen=True)
class NoiseSpec:
    """DAE corruption ratios.

    Mask and dropout are decided by one uniform draw ``u`` per token: the
    token is masked when ``u < mask``, dropped when ``mask <= u < mask +
    dropout`` and kept otherwise. Each ratio is a probability on its own;
    when the two sum past 1, masking wins and the effective dropout rate is
    ``1 - mask``. Bag words follow the same rule with the ``bow_`` ratios.
    """

    mask_ratio: float = config.MASK_RATIO
    dropout_ratio: float = config.DROPOUT_RATIO
    permute_ratio: float = config.PERMUTE_RATIO
    bow_mask_ratio: float = config.BOW_MASK_RATIO
    bow_dropout_ratio: float = config.BOW_DROPOUT_RATIO
    bow_permute_ratio: float = config.BOW_PERMUTE_RATIO
    seed: int = config.SEED
    shuffle_window: int = config.SHUFFLE_WINDOW

    def __post_init__(self):
        for name in (
            "mask_ratio", "dropout_ratio", "permute_ratio",
            "bow_mask_ratio", "bow_dropout_ratio", "bow_permute_ratio",
        ):
            object.__setattr__(self, name, InputValidator.validate_ratio(getattr(self, name), name))
        object.__setattr__(self, "seed", InputValidator.validate_seed(self.seed))
        window = self.shuffle_window
        if isinstance(window, bool) or not isinstance(window, int) or window < 0:
            raise ValidationError("shuffle_window must be a non-negative integer", "shuffle_window")

    @classmethod
    def zero(cls, seed: int = 0) -> "NoiseSpec":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, seed, 0)

    @property
    def is_identity(self) -> bool:
        return not any((
            self.mask_ratio, self.dropout_ratio, self.permute_ratio,
            self.bow_mask_ratio, self.bow_dropout_ratio, self.bow_permute_ratio,
            self.shuffle_window,
        ))


@dataclass
class RenameMap:
    """Bijection original identifier -> FUNC_i / VAR_i"""

    forward: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self._functions = sum(1 for v in self.forward.values() if v.startswith("FUNC_"))
        self._variables = sum(1 for v in self.forward.values() if v.startswith("VAR_"))

    def add_function(self, name: str) -> str:
        if name not in self.forward:
            self.forward[name] = f"FUNC_{self._functions}"
            self._functions += 1
        return self.forward[name]

    def add_variable(self, name: str) -> str:
        if name not in self.forward:
            self.forward[name] = f"VAR_{self._variables}"
            self._variables += 1
        return self.forward[name]

    @property
    def inverse(self) -> Dict[str, str]:
        return {v: k for k, v in self.forward.items()}

    def __contains__(self, name: str) -> bool:
        return name in self.forward

    def __getitem__(self, name: str) -> str:
        return self.forward[name]

    def __len__(self) -> int:
        return len(self.forward)
