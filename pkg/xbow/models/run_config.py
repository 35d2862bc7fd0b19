from dataclasses import dataclass, field
from typing import Optional
from config.config import Config
from xbow.models.codebook import CodebookMethod, ScalingMode
from xbow.models.settings import ActivityFilter, QuantizationConfig, SvqConfig, TextConfig, WindowingConfig


@dataclass(frozen=True)
class RunConfig:
    """One invocation of the bagging pipeline"""

    input_path: Optional[str] = None
    output_path: Optional[str] = None
    labels_path: Optional[str] = None
    attributes: Optional[str] = None
    windowing: Optional[WindowingConfig] = None
    scaling: ScalingMode = ScalingMode.NONE
    activity: Optional[ActivityFilter] = None
    codebook_size: int = Config.DEFAULT_CODEBOOK_SIZE
    method: CodebookMethod = CodebookMethod(Config.DEFAULT_CODEBOOK_METHOD)
    supervised: bool = False
    svq: Optional[SvqConfig] = None
    seed: int = Config.DEFAULT_SEED
    write_codebook: Optional[str] = None
    read_codebook: Optional[str] = None
    quantization: QuantizationConfig = field(default_factory=QuantizationConfig)
    text: TextConfig = field(default_factory=TextConfig)
    log: bool = False
    idf: bool = False
    normalize: bool = False
    show_help: bool = False

    @property
    def train_mode(self) -> bool:
        return self.read_codebook is None
