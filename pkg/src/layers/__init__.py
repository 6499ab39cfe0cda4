"""Trainable building blocks: context gating, embeddings, and the LSTM cell."""

from layers.embedding import EmbedCache, Embedding, embed, embed_backward
from layers.gating import ContextGating, GateCache, context_gate, context_gate_backward
from layers.lstm import (
    LSTMCell,
    LSTMStepCache,
    lstm_backward_through_time,
    lstm_forward_sequence,
    lstm_step,
)

__all__ = [
    "ContextGating",
    "EmbedCache",
    "Embedding",
    "GateCache",
    "LSTMCell",
    "LSTMStepCache",
    "context_gate",
    "context_gate_backward",
    "embed",
    "embed_backward",
    "lstm_backward_through_time",
    "lstm_forward_sequence",
    "lstm_step",
]
