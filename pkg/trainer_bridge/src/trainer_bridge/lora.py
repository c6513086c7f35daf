"""Low-rank adapter injection for linear projection layers.

Wraps every matching projection with frozen base weights plus a trainable
rank-r update scaled by alpha/r. Covers torch.nn.Linear and the transposed
Conv1D projection used inside GPT-2 style blocks.
"""

from __future__ import annotations

import math
from typing import Iterator

import torch
from torch import nn
from transformers.pytorch_utils import Conv1D


class LoRALinear(nn.Module):
    """base(x) + dropout(x) A^T B^T * alpha/r with A Gaussian, B zero."""

    def __init__(self, base: nn.Module, in_features: int, out_features: int,
                 rank: int, alpha: int, dropout: float):
        super().__init__()
        if rank <= 0:
            raise ValueError(f"rank must be positive, got {rank}")
        self.base = base
        self.lora_a = nn.Parameter(torch.empty(rank, in_features))
        self.lora_b = nn.Parameter(torch.zeros(out_features, rank))
        nn.init.normal_(self.lora_a, std=1.0 / math.sqrt(rank))
        self.scaling = alpha / rank
        self.dropout = nn.Dropout(dropout)
        for parameter in self.base.parameters():
            parameter.requires_grad_(False)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        update = self.dropout(x) @ self.lora_a.T @ self.lora_b.T
        return self.base(x) + update * self.scaling


def _projection_dims(module: nn.Module) -> tuple[int, int] | None:
    if isinstance(module, nn.Linear):
        return module.in_features, module.out_features
    if isinstance(module, Conv1D):
        # Conv1D stores weight as (in_features, out_features).
        return module.weight.shape[0], module.weight.shape[1]
    return None


def _named_projection_parents(model: nn.Module) -> Iterator[tuple[nn.Module, str, nn.Module]]:
    for parent in model.modules():
        for name, child in parent.named_children():
            if isinstance(child, LoRALinear):
                continue
            if _projection_dims(child) is not None:
                yield parent, name, child


def apply_lora(model: nn.Module, rank: int, alpha: int, dropout: float) -> int:
    """Replace every projection in place; returns how many were wrapped."""
    replaced = 0
    for parent, name, child in list(_named_projection_parents(model)):
        dims = _projection_dims(child)
        setattr(parent, name, LoRALinear(child, dims[0], dims[1], rank, alpha, dropout))
        replaced += 1
    for name, parameter in model.named_parameters():
        parameter.requires_grad_("lora_" in name)
    return replaced


def lora_state_dict(model: nn.Module) -> dict[str, torch.Tensor]:
    return {
        name: tensor.detach().cpu()
        for name, tensor in model.state_dict().items()
        if "lora_" in name
    }


def load_lora_state(model: nn.Module, state: dict[str, torch.Tensor]) -> None:
    expected = set(lora_state_dict(model))
    given = set(state)
    if expected != given:
        missing = sorted(expected - given)
        extra = sorted(given - expected)
        raise ValueError(f"adapter mismatch: missing {missing[:3]}, unexpected {extra[:3]}")
    model.load_state_dict(state, strict=False)


def trainable_parameters(model: nn.Module) -> list[nn.Parameter]:
    return [p for p in model.parameters() if p.requires_grad]
