"""The small CNN in 1D (flow vector) and 2D (image) configurations.

Both variants share the same design: two convolutional blocks of 64 filters
(conv, ReLU, max pool, batch norm) with dropout 0.1 after the first block,
then a 16-unit fully connected layer feeding the classifier head. Kernel
size 3 and pool width 2 are assumptions; the source material does not pin
them down.
"""

from __future__ import annotations

import torch
from torch import nn

from ids_trainer.config import Modality
from ids_trainer.errors import ConfigError

N_FILTERS = 64
KERNEL = 3
POOL = 2
HIDDEN = 16
DROPOUT = 0.1


def _blocks(conv, pool, bn, channels_in):
    return nn.Sequential(
        conv(channels_in, N_FILTERS, KERNEL, padding=KERNEL // 2),
        nn.ReLU(),
        pool(POOL),
        bn(N_FILTERS),
        nn.Dropout(DROPOUT),
        conv(N_FILTERS, N_FILTERS, KERNEL, padding=KERNEL // 2),
        nn.ReLU(),
        pool(POOL),
        bn(N_FILTERS),
    )


class SmallCNN(nn.Module):
    def __init__(self, modality: Modality, input_shape: tuple[int, ...], n_classes: int):
        super().__init__()
        if n_classes < 2:
            raise ConfigError(f"need at least 2 classes, got {n_classes}")
        if modality is Modality.FLOW_1D:
            if len(input_shape) != 1 or input_shape[0] < 2 * POOL * POOL:
                raise ConfigError(
                    f"flow input must be a feature vector of length >= "
                    f"{2 * POOL * POOL}, got shape {input_shape}"
                )
            n_features = input_shape[0]
            self.features = _blocks(nn.Conv1d, nn.MaxPool1d, nn.BatchNorm1d, 1)
            flat = N_FILTERS * (n_features // POOL // POOL)
        elif modality is Modality.IMAGE_2D:
            if len(input_shape) != 3 or input_shape[0] != 3:
                raise ConfigError(
                    f"image input must be (3, side, side), got shape {input_shape}"
                )
            side = input_shape[1]
            if input_shape[2] != side or side < POOL * POOL:
                raise ConfigError(f"image input must be square, got shape {input_shape}")
            self.features = _blocks(nn.Conv2d, nn.MaxPool2d, nn.BatchNorm2d, 3)
            flat = N_FILTERS * (side // POOL // POOL) ** 2
        else:
            raise ConfigError(f"unsupported modality {modality!r}")
        self.modality = modality
        self.classifier = nn.Sequential(
            nn.Flatten(),
            nn.Linear(flat, HIDDEN),
            nn.ReLU(),
            nn.Linear(HIDDEN, n_classes),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if self.modality is Modality.FLOW_1D and x.dim() == 2:
            x = x.unsqueeze(1)  # (n, features) -> (n, 1, features)
        return self.classifier(self.features(x))


def build_cnn(
    modality: Modality, input_shape: tuple[int, ...], n_classes: int
) -> SmallCNN:
    return SmallCNN(modality, tuple(input_shape), n_classes)
