"""Supervised training, reconstruction pretraining, the SSL pipeline and evaluation."""

from .contrastive import contrastive_loss  # NOQA
from .evaluate import Evaluation, evaluate, predict  # NOQA
from .optim import SGD, Adam, make_optimizer  # NOQA
from .params import HyperParams, OptimizerKind  # NOQA
from .reconstruction import train_reconstruction  # NOQA
from .report import TrainReport  # NOQA
from .ssl import run_low_label_baseline, run_ssl_pipeline  # NOQA
from .supervised import train_supervised  # NOQA
